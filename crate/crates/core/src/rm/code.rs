use std::sync::Arc;

use super::field::Field;
use super::poly::Interpolator;
use super::FieldOracle;
use crate::bits::{BitOracle, BitString};
use crate::error::{Error, Result};

/// Largest grid `Δ^m` a message may occupy.
pub const MAX_GRID: u64 = 1 << 24;

/// Grid code parameters: messages live on `H^m` with `H = {0, .., Δ-1}`,
/// listed lexicographically with the first coordinate most significant.
#[derive(Clone, Debug)]
pub struct RmParams {
    field: Field,
    delta: usize,
    m: usize,
    grid: Interpolator,
}

impl RmParams {
    pub fn new(field: Field, delta: usize, m: usize) -> Result<Self> {
        if delta == 0 || m == 0 {
            return Err(Error::param("grid side and dimension must be positive"));
        }
        if delta as u64 > field.modulus() {
            return Err(Error::param(format!(
                "grid side {delta} exceeds p = {}",
                field.modulus()
            )));
        }
        let size = (delta as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if size > MAX_GRID as u128 {
            return Err(Error::capacity(format!("grid {delta}^{m} exceeds cap")));
        }
        let nodes: Vec<u64> = (0..delta as u64).collect();
        Ok(Self {
            field,
            delta,
            m,
            grid: Interpolator::new(field, &nodes),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn grid_size(&self) -> usize {
        self.delta.pow(self.m as u32)
    }

    /// Total degree bound `m(Δ-1)` of every codeword.
    pub fn total_degree(&self) -> usize {
        self.m * (self.delta - 1)
    }

    /// Grid point of message index `i`.
    pub fn grid_point(&self, mut i: u64) -> Vec<u64> {
        let mut w = vec![0; self.m];
        for a in (0..self.m).rev() {
            w[a] = i % self.delta as u64;
            i /= self.delta as u64;
        }
        w
    }

    /// Message index of a grid point.
    pub fn grid_index(&self, w: &[u64]) -> u64 {
        w.iter().fold(0, |acc, &c| acc * self.delta as u64 + c)
    }

    /// Number of points of `F_p^m`.
    pub fn points(&self) -> u128 {
        (self.field.modulus() as u128).pow(self.m as u32)
    }

    pub fn codeword_bits(&self) -> u128 {
        self.points() * self.field.symbol_bits() as u128
    }

    /// Index of a point in the lexicographic enumeration of `F_p^m`.
    pub fn point_index(&self, x: &[u64]) -> u128 {
        x.iter().fold(0u128, |acc, &c| {
            acc * self.field.modulus() as u128 + c as u128
        })
    }

    pub fn point_at(&self, mut idx: u128) -> Vec<u64> {
        let p = self.field.modulus() as u128;
        let mut x = vec![0; self.m];
        for a in (0..self.m).rev() {
            x[a] = (idx % p) as u64;
            idx /= p;
        }
        x
    }

    /// Boolean codeword position holding message bit `i`: the last bit of the
    /// symbol at the grid point, since `Enc(0)` and `Enc(1)` differ only there.
    pub fn index_map(&self, i: u64) -> u128 {
        let b = self.field.symbol_bits() as u128;
        self.point_index(&self.grid_point(i)) * b + (b - 1)
    }
}

/// The degree-`(Δ-1)`-per-variable extension of a grid message.
#[derive(Clone, Debug)]
pub struct RmCodeword {
    params: Arc<RmParams>,
    message: Arc<Vec<u64>>,
}

impl RmCodeword {
    /// `message` is zero-padded to the full grid.
    pub fn new(params: Arc<RmParams>, mut message: Vec<u64>) -> Result<Self> {
        if message.len() > params.grid_size() {
            return Err(Error::shape(format!(
                "message of {} symbols exceeds grid of {}",
                message.len(),
                params.grid_size()
            )));
        }
        if let Some(bad) = message.iter().find(|&&v| !params.field.is_canonical(v)) {
            return Err(Error::shape(format!(
                "message symbol {bad} is not a canonical residue"
            )));
        }
        message.resize(params.grid_size(), 0);
        Ok(Self {
            params,
            message: Arc::new(message),
        })
    }

    pub fn from_bits(params: Arc<RmParams>, bits: &BitString) -> Result<Self> {
        Self::new(params, bits.iter().map(u64::from).collect())
    }

    pub fn params(&self) -> &Arc<RmParams> {
        &self.params
    }

    pub fn message(&self) -> &[u64] {
        &self.message
    }

    /// Value at `x`, by contracting one coordinate at a time.
    pub fn value(&self, x: &[u64]) -> Result<u64> {
        if x.len() != self.params.m {
            return Err(Error::shape(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.params.m
            )));
        }
        if let Some(bad) = x.iter().find(|&&c| !self.params.field.is_canonical(c)) {
            return Err(Error::shape(format!(
                "coordinate {bad} is not a canonical residue"
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[u64]) -> u64 {
        let f = self.params.field;
        let d = self.params.delta;
        let mut cur: Vec<u64> = Vec::new();
        for a in (0..self.params.m).rev() {
            let basis = self.params.grid.basis(x[a]);
            let src: &[u64] = if a + 1 == self.params.m {
                &self.message
            } else {
                &cur
            };
            let next: Vec<u64> = src
                .chunks_exact(d)
                .map(|chunk| {
                    chunk.iter().zip(&basis).fold(0, |acc, (&v, &b)| match v {
                        0 => acc,
                        1 => f.add(acc, b),
                        _ => f.add(acc, f.mul(v, b)),
                    })
                })
                .collect();
            cur = next;
        }
        cur[0]
    }

    /// Grid-basis coefficients of the restriction to the axis line through
    /// `x` along coordinate `a`.
    fn axis_coefficients(&self, x: &[u64], a: usize) -> Vec<u64> {
        let f = self.params.field;
        let d = self.params.delta;
        let contract = |src: &[u64], basis: &[u64], stride: usize, trailing: bool| -> Vec<u64> {
            if trailing {
                src.chunks_exact(d)
                    .map(|c| {
                        c.iter()
                            .zip(basis)
                            .fold(0, |acc, (&v, &b)| f.add(acc, f.mul(v, b)))
                    })
                    .collect()
            } else {
                (0..stride)
                    .map(|j| {
                        (0..d).fold(0, |acc, h| f.add(acc, f.mul(src[h * stride + j], basis[h])))
                    })
                    .collect()
            }
        };
        let mut cur: Vec<u64> = self.message.to_vec();
        for k in (a + 1..self.params.m).rev() {
            cur = contract(&cur, &self.params.grid.basis(x[k]), 0, true);
        }
        for &xk in &x[..a] {
            let stride = cur.len() / d;
            cur = contract(&cur, &self.params.grid.basis(xk), stride, false);
        }
        cur
    }

    /// Bit `i` of the Boolean codeword: symbols `Enc(P(x))` over points in
    /// lexicographic order, each `ceil(log2 p)` bits, most significant first.
    pub fn brm_bit(&self, i: u128) -> Result<bool> {
        if i >= self.params.codeword_bits() {
            return Err(Error::shape(format!("codeword bit {i} out of range")));
        }
        let b = self.params.field.symbol_bits() as u128;
        let x = self.params.point_at(i / b);
        let v = self.eval_unchecked(&x);
        let shift = (b - 1 - i % b) as u32;
        Ok((v >> shift) & 1 == 1)
    }
}

impl FieldOracle for RmCodeword {
    fn field(&self) -> Field {
        self.params.field
    }

    fn dim(&self) -> usize {
        self.params.m
    }

    fn eval(&self, x: &[u64]) -> u64 {
        self.eval_unchecked(x)
    }

    /// Evaluates `D + 1` points directly and interpolates the rest along the
    /// line, `D` being the total degree bound.
    fn eval_line(&self, x: &[u64], y: &[u64], ts: &[u64]) -> Vec<u64> {
        let f = self.params.field;
        let mut axes = y.iter().enumerate().filter(|(_, &c)| c != 0);
        if let (Some((a, &ya)), None) = (axes.next(), axes.next()) {
            let coeffs = self.axis_coefficients(x, a);
            return ts
                .iter()
                .map(|&t| {
                    let z = f.add(x[a], f.mul(t, ya));
                    let basis = self.params.grid.basis(z);
                    coeffs
                        .iter()
                        .zip(&basis)
                        .fold(0, |acc, (&c, &b)| f.add(acc, f.mul(c, b)))
                })
                .collect();
        }
        let d = self.params.total_degree();
        let direct = ts.len().min(d + 1);
        let mut pt = vec![0; x.len()];
        let mut out: Vec<u64> = ts[..direct]
            .iter()
            .map(|&t| {
                for (k, p) in pt.iter_mut().enumerate() {
                    *p = f.add(x[k], f.mul(t, y[k]));
                }
                self.eval_unchecked(&pt)
            })
            .collect();
        if direct < ts.len() {
            let interp = Interpolator::new(f, &ts[..direct]);
            let base = out.clone();
            out.extend(ts[direct..].iter().map(|&t| interp.eval(&base, t)));
        }
        out
    }
}

/// The Boolean codeword as a bit oracle.
#[derive(Clone, Debug)]
pub struct BrmView {
    word: RmCodeword,
    len: u64,
}

impl BrmView {
    pub fn new(word: RmCodeword) -> Result<Self> {
        let len = word.params.codeword_bits();
        if len >= 1 << 63 {
            return Err(Error::capacity(format!(
                "codeword of {len} bits is not addressable"
            )));
        }
        Ok(Self {
            word,
            len: len as u64,
        })
    }
}

impl BitOracle for BrmView {
    fn len(&self) -> u64 {
        self.len
    }

    fn bit(&self, i: u64) -> Result<bool> {
        self.word.brm_bit(i as u128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_example() {
        let params = Arc::new(RmParams::new(Field::new(5).unwrap(), 2, 1).unwrap());
        let w = RmCodeword::new(params, vec![1, 0]).unwrap();
        assert_eq!(w.value(&[2]).unwrap(), 4);
        assert_eq!(w.value(&[0]).unwrap(), 1);
        assert!(w.value(&[5]).is_err());
    }

    #[test]
    fn symbol_encoding() {
        let params = Arc::new(RmParams::new(Field::new(5).unwrap(), 2, 1).unwrap());
        // P(X) = 1 + 2X: P(1) = 3 -> 011, P(0) = 1 -> 001
        let w = RmCodeword::new(params, vec![1, 3]).unwrap();
        let bits: String = (3..6)
            .map(|i| if w.brm_bit(i).unwrap() { '1' } else { '0' })
            .collect();
        assert_eq!(bits, "011");
        let bits: String = (0..3)
            .map(|i| if w.brm_bit(i).unwrap() { '1' } else { '0' })
            .collect();
        assert_eq!(bits, "001");
    }

    #[test]
    fn index_map_reads_message_bits() {
        let params = Arc::new(RmParams::new(Field::new(5).unwrap(), 2, 2).unwrap());
        for msg in 0..16u64 {
            let bits = BitString::from_u64(msg, 4);
            let w = RmCodeword::from_bits(params.clone(), &bits).unwrap();
            for i in 0..4 {
                assert_eq!(
                    w.brm_bit(params.index_map(i)).unwrap(),
                    bits.get(i as usize)
                );
            }
        }
    }

    #[test]
    fn line_access_matches_pointwise() {
        use rand::SeedableRng;
        let field = Field::new(97).unwrap();
        let params = Arc::new(RmParams::new(field, 3, 3).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let msg: Vec<u64> = (0..27)
            .map(|_| rand::Rng::gen_range(&mut rng, 0..97))
            .collect();
        let w = RmCodeword::new(params, msg).unwrap();
        let ts: Vec<u64> = (0..20).collect();
        for y in [vec![0, 5, 0], vec![3, 0, 0], vec![0, 0, 1], vec![1, 2, 3]] {
            let x = vec![4, 50, 96];
            let line = w.eval_line(&x, &y, &ts);
            for (k, &t) in ts.iter().enumerate() {
                let pt: Vec<u64> = (0..3)
                    .map(|i| field.add(x[i], field.mul(t, y[i])))
                    .collect();
                assert_eq!(line[k], w.value(&pt).unwrap());
            }
        }
    }
}
