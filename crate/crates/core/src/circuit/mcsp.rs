//! Exhaustive minimum-circuit-size decision for tiny truth tables.
//!
//! Constants and inputs are free wires; every AND, OR, XOR or NOT gate counts
//! one toward the size.

use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct McspCaps {
    pub max_arity: usize,
    pub max_size: usize,
}

impl Default for McspCaps {
    fn default() -> Self {
        Self {
            max_arity: 3,
            max_size: 4,
        }
    }
}

/// True iff some circuit with at most `s` gates computes `tt`.
pub fn mcsp_brute(tt: &BitString, s: usize, caps: McspCaps) -> Result<bool> {
    let len = tt.len();
    if !len.is_power_of_two() {
        return Err(Error::shape(format!(
            "truth table length {len} is not a power of two"
        )));
    }
    let n = len.trailing_zeros() as usize;
    if n > caps.max_arity || n > 6 || s > caps.max_size {
        return Err(Error::capacity(format!(
            "mcsp_brute with n = {n}, s = {s} exceeds caps (n <= {}, s <= {})",
            caps.max_arity, caps.max_size
        )));
    }
    let mask = if len == 64 { !0u64 } else { (1u64 << len) - 1 };
    let target = tt
        .iter()
        .enumerate()
        .fold(0u64, |acc, (x, b)| acc | ((b as u64) << x));
    let mut wires = vec![0u64, mask];
    for i in 0..n {
        let w = (0..len).fold(0u64, |acc, x| {
            acc | ((((x >> (n - 1 - i)) & 1) as u64) << x)
        });
        wires.push(w);
    }
    Ok(search(&mut wires, target, mask, s))
}

fn search(wires: &mut Vec<u64>, target: u64, mask: u64, budget: usize) -> bool {
    if wires.contains(&target) {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let count = wires.len();
    let mut candidates = Vec::new();
    for i in 0..count {
        candidates.push(!wires[i] & mask);
        for j in i + 1..count {
            let (a, b) = (wires[i], wires[j]);
            candidates.extend([a & b, a | b, a ^ b]);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    for c in candidates {
        if wires.contains(&c) {
            continue;
        }
        wires.push(c);
        let found = search(wires, target, mask, budget - 1);
        wires.pop();
        if found {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn small_examples() {
        let caps = McspCaps::default();
        assert!(mcsp_brute(&tt("0000"), 0, caps).unwrap());
        assert!(!mcsp_brute(&tt("0110"), 0, caps).unwrap());
        assert!(mcsp_brute(&tt("0110"), 1, caps).unwrap());
        assert!(mcsp_brute(&tt("0001"), 1, caps).unwrap());
        assert!(mcsp_brute(&tt("0011"), 0, caps).unwrap());
        assert!(!mcsp_brute(&tt("1000"), 1, caps).unwrap());
        assert!(mcsp_brute(&tt("1000"), 2, caps).unwrap());
    }

    #[test]
    fn caps() {
        assert!(matches!(
            mcsp_brute(&BitString::zeros(16), 1, McspCaps::default()),
            Err(Error::Capacity(_))
        ));
        assert!(mcsp_brute(&tt("010"), 1, McspCaps::default()).is_err());
    }
}
