//! Majority vote over XOR-combined seeds.

use std::collections::HashMap;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Runs `v(α, β, u_i ⊕ v_j)` for all `m²` pairs and returns the output seen
/// strictly more than `m²/2` times, or `None`. A `None` output of `v` counts
/// as its own value.
pub fn derand_majority<A: ?Sized, B: ?Sized, F>(
    mut v: F,
    width: usize,
    alpha: (&A, &[BitString]),
    beta: (&B, &[BitString]),
) -> Result<Option<BitString>>
where
    F: FnMut(&A, &B, &BitString) -> Result<Option<BitString>>,
{
    let (a, us) = alpha;
    let (b, vs) = beta;
    if us.is_empty() || us.len() != vs.len() {
        return Err(Error::param(format!(
            "need m >= 1 seeds on each side, got {} and {}",
            us.len(),
            vs.len()
        )));
    }
    if let Some(s) = us.iter().chain(vs).find(|s| s.len() != width) {
        return Err(Error::param(format!(
            "seed of {} bits, expected {width}",
            s.len()
        )));
    }
    let mut counts: HashMap<Option<BitString>, u64> = HashMap::new();
    for u in us {
        for w in vs {
            *counts.entry(v(a, b, &u.xor(w)?)?).or_default() += 1;
        }
    }
    let total = (us.len() * vs.len()) as u64;
    Ok(counts
        .into_iter()
        .find(|(_, c)| 2 * c > total)
        .and_then(|(z, _)| z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_distinct() {
        let seeds: Vec<BitString> = (0..4).map(|x| BitString::from_u64(x, 3)).collect();
        let z: BitString = "101".parse().unwrap();
        let out = derand_majority(
            |_: &(), _: &(), _| Ok(Some(z.clone())),
            3,
            (&(), &seeds),
            (&(), &seeds),
        )
        .unwrap();
        assert_eq!(out, Some(z));
        let mut k = 0u64;
        let fresh = derand_majority(
            |_: &(), _: &(), _| {
                k += 1;
                Ok(Some(BitString::from_u64(k, 8)))
            },
            3,
            (&(), &seeds),
            (&(), &seeds),
        )
        .unwrap();
        assert_eq!(fresh, None);
        let short = vec![BitString::zeros(2); 4];
        assert!(derand_majority(
            |_: &(), _: &(), _| Ok(None),
            3,
            (&(), &seeds),
            (&(), &short)
        )
        .is_err());
    }
}
