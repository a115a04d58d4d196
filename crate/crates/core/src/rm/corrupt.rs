//! Deterministic noisy oracles for exercising the correctors and testers.

use super::field::Field;
use super::FieldOracle;

/// splitmix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn hash_point(seed: u64, x: &[u64]) -> u64 {
    x.iter().fold(mix64(seed), |h, &c| mix64(h ^ c))
}

/// A fixed uniformly random function `F_p^m -> F_p`.
#[derive(Clone, Debug)]
pub struct RandomFunction {
    field: Field,
    m: usize,
    seed: u64,
}

impl RandomFunction {
    pub fn new(field: Field, m: usize, seed: u64) -> Self {
        Self { field, m, seed }
    }
}

impl FieldOracle for RandomFunction {
    fn field(&self) -> Field {
        self.field
    }

    fn dim(&self) -> usize {
        self.m
    }

    fn eval(&self, x: &[u64]) -> u64 {
        hash_point(self.seed, x) % self.field.modulus()
    }
}

/// Adds `noise` on the slab `x_0 < floor(p/4)`, a quarter of the space
/// corrupted consistently.
#[derive(Clone, Debug)]
pub struct SlabCorrupted<O, N> {
    inner: O,
    noise: N,
    width: u64,
}

impl<O: FieldOracle, N: FieldOracle> SlabCorrupted<O, N> {
    pub fn quarter(inner: O, noise: N) -> Self {
        let width = inner.field().modulus() / 4;
        Self {
            inner,
            noise,
            width,
        }
    }
}

impl<O: FieldOracle, N: FieldOracle> FieldOracle for SlabCorrupted<O, N> {
    fn field(&self) -> Field {
        self.inner.field()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[u64]) -> u64 {
        let v = self.inner.eval(x);
        if x[0] < self.width {
            self.field().add(v, self.noise.eval(x))
        } else {
            v
        }
    }
}

/// Replaces a pseudo-random `fraction` of the points by a different value.
#[derive(Clone, Debug)]
pub struct SparseCorrupted<O> {
    inner: O,
    seed: u64,
    threshold: u64,
}

impl<O: FieldOracle> SparseCorrupted<O> {
    pub fn new(inner: O, fraction: f64, seed: u64) -> Self {
        let threshold = (fraction.clamp(0.0, 1.0) * u64::MAX as f64) as u64;
        Self {
            inner,
            seed,
            threshold,
        }
    }
}

impl<O: FieldOracle> FieldOracle for SparseCorrupted<O> {
    fn field(&self) -> Field {
        self.inner.field()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[u64]) -> u64 {
        let v = self.inner.eval(x);
        let h = hash_point(self.seed, x);
        if h < self.threshold {
            let p = self.field().modulus();
            (v + 1 + mix64(h) % (p - 1)) % p
        } else {
            v
        }
    }
}
