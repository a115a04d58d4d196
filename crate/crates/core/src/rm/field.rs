use crate::bits::ceil_log2;
use crate::error::{Error, Result};

/// Largest supported modulus; products fit in 128-bit intermediates.
pub const MAX_MODULUS: u64 = 1 << 61;

/// Prime field `F_p` with canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    p: u64,
    /// `floor(2^64 / p)` when `p < 2^32`, else 0.
    barrett: u64,
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::capacity(format!("modulus {p} exceeds 2^61")));
        }
        if !is_prime(p) {
            return Err(Error::param(format!("{p} is not prime")));
        }
        let barrett = if p < 1 << 32 {
            (u128::from(u64::MAX) + 1).div_euclid(p as u128) as u64
        } else {
            0
        };
        Ok(Self { p, barrett })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Bits per encoded element, `ceil(log2 p)`.
    pub fn symbol_bits(&self) -> u32 {
        ceil_log2(self.p)
    }

    pub fn is_canonical(&self, a: u64) -> bool {
        a < self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.barrett != 0 {
            let x = a * b;
            let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
            let r = x - q * self.p;
            if r >= self.p {
                r - self.p
            } else {
                r
            }
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Inverses of all entries with a single exponentiation.
    pub fn batch_inv(&self, xs: &[u64]) -> Vec<u64> {
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = 1;
        for &x in xs {
            prefix.push(acc);
            acc = self.mul(acc, x);
        }
        let mut inv = self.inv(acc);
        let mut out = vec![0; xs.len()];
        for i in (0..xs.len()).rev() {
            out[i] = self.mul(inv, prefix[i]);
            inv = self.mul(inv, xs[i]);
        }
        out
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn smallest_prime_at_least(x: u64) -> Result<u64> {
    let mut c = x.max(2);
    loop {
        if is_prime(c) {
            return Ok(c);
        }
        c = c
            .checked_add(1)
            .ok_or_else(|| Error::capacity(format!("no 64-bit prime at least {x}")))?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(smallest_prime_at_least(640).unwrap(), 641);
        assert_eq!(smallest_prime_at_least(90).unwrap(), 97);
        assert_eq!(smallest_prime_at_least(2).unwrap(), 2);
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(3_215_031_751));
        assert!(smallest_prime_at_least(u64::MAX - 1).is_err());
    }

    #[test]
    fn trial_division_agrees() {
        let naive = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "{n}");
        }
    }

    #[test]
    fn barrett_matches_u128() {
        for p in [5u64, 641, 11527, 4_294_967_291, 2_305_843_009_213_693_951] {
            let f = Field::new(p).unwrap();
            let mut a = 1u64;
            for i in 0..2000u64 {
                a = (a.wrapping_mul(6364136223846793005).wrapping_add(i)) % p;
                let b = (a ^ 0x9e37_79b9_7f4a_7c15) % p;
                assert_eq!(f.mul(a, b), ((a as u128 * b as u128) % p as u128) as u64);
            }
            if p > 2 {
                assert_eq!(f.mul(3, f.inv(3)), 1);
            }
        }
    }

    #[test]
    fn batch_inverse() {
        let f = Field::new(97).unwrap();
        let xs: Vec<u64> = (1..20).collect();
        for (x, y) in xs.iter().zip(f.batch_inv(&xs)) {
            assert_eq!(f.mul(*x, y), 1);
        }
    }
}
