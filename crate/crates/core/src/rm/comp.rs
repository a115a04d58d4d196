use rand::Rng;

use super::field::Field;
use super::FieldOracle;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
pub struct CompConfig {
    /// Error of each identity test; defaults to `1 / (10 m |H|)`.
    pub test_error: Option<f64>,
}

/// Random points per identity test of two restrictions in `free` variables
/// with individual degree at most `d`.
pub fn comp_samples(field: Field, free: usize, d: usize, test_error: f64) -> usize {
    if free == 0 {
        return 1;
    }
    let total = (free * d) as f64;
    if total == 0.0 {
        return 1;
    }
    let ratio = field.modulus() as f64 / total;
    let err = test_error.clamp(1e-300, 1.0);
    ((1.0 / err).ln() / ratio.ln()).ceil().max(1.0) as usize
}

/// Lexicographically smallest `w` in `{0..d}^m` with `f(w) != g(w)`, or
/// `None` when the two agree on the whole grid. Both oracles must have degree
/// at most `d` in each variable.
///
/// Stage `i` fixes `w_0..w_{i-1}` and picks the least `h` for which the
/// restrictions to `w_i = h` differ somewhere, found by sampling.
pub fn comp<F, G, R>(
    f: &F,
    g: &G,
    d: usize,
    config: &CompConfig,
    rng: &mut R,
) -> Result<Option<Vec<u64>>>
where
    F: FieldOracle + ?Sized,
    G: FieldOracle + ?Sized,
    R: Rng + ?Sized,
{
    let field = f.field();
    let m = f.dim();
    if g.field() != field || g.dim() != m {
        return Err(Error::shape("compared oracles live over different domains"));
    }
    let p = field.modulus() as u128;
    let h = d + 1;
    if 2 * (m * h) as u128 >= p {
        return Err(Error::param(format!(
            "m(d+1) = {} is not below p/2 for p = {p}",
            m * h
        )));
    }
    let test_error = config.test_error.unwrap_or(1.0 / (10.0 * (m * h) as f64));
    let mut prefix: Vec<u64> = Vec::with_capacity(m);
    let mut point = vec![0u64; m];
    for i in 0..m {
        let free = m - i - 1;
        let samples = comp_samples(field, free, d, test_error);
        let mut chosen = None;
        'values: for v in 0..h as u64 {
            for _ in 0..samples {
                point[..i].copy_from_slice(&prefix);
                point[i] = v;
                for c in point[i + 1..].iter_mut() {
                    *c = rng.gen_range(0..field.modulus());
                }
                if f.eval(&point) != g.eval(&point) {
                    chosen = Some(v);
                    break 'values;
                }
            }
        }
        match chosen {
            Some(v) => prefix.push(v),
            None => return Ok(None),
        }
    }
    Ok(Some(prefix))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::rm::{RmCodeword, RmParams};

    #[test]
    fn small_example() {
        let field = Field::new(5).unwrap();
        let params = Arc::new(RmParams::new(field, 2, 1).unwrap());
        let a = RmCodeword::new(params.clone(), vec![1, 0]).unwrap();
        let b = RmCodeword::new(params, vec![1, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            comp(&a, &b, 1, &CompConfig::default(), &mut rng).unwrap(),
            Some(vec![1])
        );
        assert_eq!(
            comp(&a, &a, 1, &CompConfig::default(), &mut rng).unwrap(),
            None
        );
    }

    #[test]
    fn samples_shrink_with_field_size() {
        let small = comp_samples(Field::new(641).unwrap(), 2, 3, 1e-3);
        let large = comp_samples(Field::new(1_000_003).unwrap(), 2, 3, 1e-3);
        assert!(small >= large && large >= 1);
        assert_eq!(comp_samples(Field::new(641).unwrap(), 0, 3, 1e-9), 1);
    }
}
