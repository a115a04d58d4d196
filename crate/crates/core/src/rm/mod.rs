//! Reed-Muller machinery over prime fields: grid encoding with point-query
//! codewords, the self-corrector, the low-max-degree tester and the
//! codeword comparator.

mod code;
mod comp;
pub mod corrupt;
mod field;
mod ldt;
mod pcorr;
mod poly;

pub use code::{BrmView, RmCodeword, RmParams};
pub use comp::{comp, comp_samples, CompConfig};
pub use field::{is_prime, smallest_prime_at_least, Field, MAX_MODULUS};
pub use ldt::{ldt, ldt_lines, LdtConfig};
pub use pcorr::{pcorr, pcorr_once, pcorr_run_bound, PcorrConfig, SelfCorrected};
pub use poly::{berlekamp_welch, eval_coeffs, fits_degree, Interpolator};

use std::cell::Cell;

use rand::Rng;

/// Point access to a function `F_p^m -> F_p`.
pub trait FieldOracle {
    fn field(&self) -> Field;

    fn dim(&self) -> usize;

    fn eval(&self, x: &[u64]) -> u64;

    /// Values at `x + t·y` for each `t`; the `ts` must be distinct.
    fn eval_line(&self, x: &[u64], y: &[u64], ts: &[u64]) -> Vec<u64> {
        let f = self.field();
        let mut pt = vec![0; x.len()];
        ts.iter()
            .map(|&t| {
                for (k, p) in pt.iter_mut().enumerate() {
                    *p = f.add(x[k], f.mul(t, y[k]));
                }
                self.eval(&pt)
            })
            .collect()
    }
}

impl<T: FieldOracle + ?Sized> FieldOracle for &T {
    fn field(&self) -> Field {
        (**self).field()
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: &[u64]) -> u64 {
        (**self).eval(x)
    }

    fn eval_line(&self, x: &[u64], y: &[u64], ts: &[u64]) -> Vec<u64> {
        (**self).eval_line(x, y, ts)
    }
}

/// Counts point queries.
pub struct Counted<O> {
    pub inner: O,
    queries: Cell<u64>,
}

impl<O: FieldOracle> Counted<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            queries: Cell::new(0),
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries.get()
    }
}

impl<O: FieldOracle> FieldOracle for Counted<O> {
    fn field(&self) -> Field {
        self.inner.field()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[u64]) -> u64 {
        self.queries.set(self.queries.get() + 1);
        self.inner.eval(x)
    }

    fn eval_line(&self, x: &[u64], y: &[u64], ts: &[u64]) -> Vec<u64> {
        self.queries.set(self.queries.get() + ts.len() as u64);
        self.inner.eval_line(x, y, ts)
    }
}

pub fn random_point<R: Rng + ?Sized>(field: Field, m: usize, rng: &mut R) -> Vec<u64> {
    (0..m).map(|_| rng.gen_range(0..field.modulus())).collect()
}

/// `k` distinct nonzero field elements; `k` must be below `p`.
pub fn distinct_nonzero<R: Rng + ?Sized>(field: Field, k: usize, rng: &mut R) -> Vec<u64> {
    let p = field.modulus();
    assert!((k as u64) < p);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let t = rng.gen_range(1..p);
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// `k` distinct field elements (zero allowed).
pub fn distinct_elements<R: Rng + ?Sized>(field: Field, k: usize, rng: &mut R) -> Vec<u64> {
    let p = field.modulus();
    assert!((k as u64) <= p);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let t = rng.gen_range(0..p);
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}
