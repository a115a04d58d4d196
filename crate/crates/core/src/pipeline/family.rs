//! Uniform circuit families `{C_n : {0,1}^n -> {0,1}^{2n}}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::rm::corrupt::mix64;

pub trait Family: Send + Sync {
    fn name(&self) -> String;

    fn circuit(&self, n: usize) -> Result<Circuit>;
}

/// `C_n(x) = x ∘ x`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DupFamily;

impl Family for DupFamily {
    fn name(&self) -> String {
        "dup".into()
    }

    fn circuit(&self, n: usize) -> Result<Circuit> {
        if n == 0 {
            return Err(Error::param("family members need n >= 1"));
        }
        Ok(Circuit::dup(n))
    }
}

/// Random circuits whose gate list is a fixed function of `(seed, n)`.
#[derive(Clone, Copy, Debug)]
pub struct PseudorandomFamily {
    pub seed: u64,
    /// Gates per output bit.
    pub density: usize,
}

impl PseudorandomFamily {
    pub fn new(seed: u64) -> Self {
        Self { seed, density: 3 }
    }
}

impl Family for PseudorandomFamily {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn circuit(&self, n: usize) -> Result<Circuit> {
        if n == 0 || n > 1 << 16 {
            return Err(Error::param(format!("family member n = {n} out of range")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(self.seed ^ mix64(n as u64)));
        Ok(Circuit::random(n, 2 * n, self.density * 2 * n, &mut rng))
    }
}

/// `dup` or `random` (seeded by `seed`).
pub fn family_by_name(name: &str, seed: u64) -> Result<Box<dyn Family>> {
    match name {
        "dup" => Ok(Box::new(DupFamily)),
        "random" => Ok(Box::new(PseudorandomFamily::new(seed))),
        other => Err(Error::param(format!(
            "unknown family {other:?} (expected dup or random)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_deterministic() {
        let fam = PseudorandomFamily::new(7);
        let a = fam.circuit(3).unwrap();
        let b = fam.circuit(3).unwrap();
        assert_eq!(a.output_table().unwrap(), b.output_table().unwrap());
        assert_eq!((a.n_in(), a.n_out()), (3, 6));
    }
}
