//! GGM trees: a length-doubling circuit applied along a binary tree.
//!
//! Node `(i, j)` has children `(i+1, 2j)` and `(i+1, 2j+1)` labelled with the
//! first and second halves of `C(v_{i,j})`. The output is the leaf row
//! truncated to `T` bits.

use std::cell::Cell;

use crate::bits::{BitOracle, BitString};
use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Largest leaf row (in bits) that may be materialized.
pub const MAX_LEAF_BITS: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeShape {
    pub n: usize,
    pub t: u64,
    /// Depth: smallest `k` with `2^k n >= T`.
    pub k: u32,
}

impl TreeShape {
    pub fn new(n: usize, t: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("block width must be positive"));
        }
        if t < 4 * n as u64 {
            return Err(Error::param(format!(
                "T = {t} must be at least 4n = {}",
                4 * n
            )));
        }
        let mut k = 0u32;
        while (n as u128) << k < t as u128 {
            k += 1;
        }
        if k > 62 {
            return Err(Error::capacity(format!("tree depth {k} too large")));
        }
        Ok(Self { n, t, k })
    }

    pub fn for_circuit(c: &Circuit, t: u64) -> Result<Self> {
        if c.n_out() != 2 * c.n_in() {
            return Err(Error::shape(format!(
                "GGM needs a circuit n -> 2n, got {} -> {}",
                c.n_in(),
                c.n_out()
            )));
        }
        Self::new(c.n_in(), t)
    }

    pub fn leaves(&self) -> u64 {
        1 << self.k
    }

    pub fn leaf_bits(&self) -> u64 {
        self.leaves() * self.n as u64
    }

    pub fn pad(&self) -> u64 {
        self.leaf_bits() - self.t
    }

    /// Number of nodes over all levels `0..=k`.
    pub fn nodes(&self) -> u64 {
        (1 << (self.k + 1)) - 1
    }

    /// Position of `(i, j)` in lexicographic order of pairs.
    pub fn lex_index(&self, i: u32, j: u64) -> u64 {
        (1 << i) - 1 + j
    }

    pub fn node_at(&self, idx: u64) -> (u32, u64) {
        let i = 63 - (idx + 1).leading_zeros();
        (i, idx + 1 - (1 << i))
    }

    pub fn is_node(&self, i: u32, j: u64) -> bool {
        i <= self.k && j < (1 << i)
    }

    fn check_materializable(&self) -> Result<()> {
        if self.leaf_bits() > MAX_LEAF_BITS {
            return Err(Error::capacity(format!(
                "leaf row of {} bits exceeds cap",
                self.leaf_bits()
            )));
        }
        Ok(())
    }
}

fn check_seed(shape: &TreeShape, x: &BitString) -> Result<()> {
    if x.len() != shape.n {
        return Err(Error::shape(format!(
            "seed has {} bits, expected {}",
            x.len(),
            shape.n
        )));
    }
    Ok(())
}

/// The whole output `GGM_T[C](x)`.
pub fn ggm_full(c: &Circuit, t: u64, x: &BitString) -> Result<BitString> {
    let shape = TreeShape::for_circuit(c, t)?;
    check_seed(&shape, x)?;
    shape.check_materializable()?;
    let n = shape.n;
    let mut level = vec![x.clone()];
    for _ in 0..shape.k {
        let mut next = Vec::with_capacity(level.len() * 2);
        for v in &level {
            let out = c.eval_slice(v.as_slice());
            next.push(out.slice(0, n));
            next.push(out.slice(n, 2 * n));
        }
        level = next;
    }
    let mut out = BitString::new();
    for v in level {
        out.extend(&v);
    }
    Ok(out.slice(0, t as usize))
}

/// Label of leaf `j`, walking down from the root with exactly `k`
/// evaluations of `C`; `evals` is incremented once per evaluation.
pub fn ggm_leaf(
    c: &Circuit,
    shape: &TreeShape,
    x: &BitString,
    j: u64,
    evals: &Cell<u64>,
) -> BitString {
    let n = shape.n;
    let mut v = x.clone();
    for level in (0..shape.k).rev() {
        let out = c.eval_slice(v.as_slice());
        evals.set(evals.get() + 1);
        v = if (j >> level) & 1 == 0 {
            out.slice(0, n)
        } else {
            out.slice(n, 2 * n)
        };
    }
    v
}

/// Bit `i` of `GGM_T[C](x)` and the number of circuit evaluations used.
pub fn ggm_eval_counted(c: &Circuit, t: u64, x: &BitString, i: u64) -> Result<(bool, u64)> {
    let shape = TreeShape::for_circuit(c, t)?;
    check_seed(&shape, x)?;
    if i >= t {
        return Err(Error::shape(format!(
            "bit index {i} out of range for T = {t}"
        )));
    }
    let evals = Cell::new(0);
    let leaf = ggm_leaf(c, &shape, x, i / shape.n as u64, &evals);
    Ok((leaf.get((i % shape.n as u64) as usize), evals.get()))
}

pub fn ggm_eval(c: &Circuit, t: u64, x: &BitString, i: u64) -> Result<bool> {
    ggm_eval_counted(c, t, x, i).map(|(b, _)| b)
}

/// Whether `GGM_T[C](x) = f`, stopping at the first mismatching leaf.
pub(crate) fn matches(c: &Circuit, shape: &TreeShape, x: &BitString, f: &BitString) -> bool {
    fn walk(c: &Circuit, shape: &TreeShape, v: &[bool], level: u32, j: u64, f: &BitString) -> bool {
        let n = shape.n;
        if level == shape.k {
            let start = j as usize * n;
            return (0..n).all(|b| start + b >= f.len() || v[b] == f.get(start + b));
        }
        let span = (n as u64) << (shape.k - level);
        if j * span >= shape.t {
            return true;
        }
        let out = c.eval_slice(v);
        let out = out.as_slice();
        walk(c, shape, &out[..n], level + 1, 2 * j, f)
            && walk(c, shape, &out[n..], level + 1, 2 * j + 1, f)
    }
    walk(c, shape, x.as_slice(), 0, 0, f)
}

/// Point-query view of `GGM_T[C](seed)`.
#[derive(Clone, Debug)]
pub struct GgmView {
    c: Circuit,
    shape: TreeShape,
    seed: BitString,
}

impl GgmView {
    pub fn new(c: Circuit, t: u64, seed: BitString) -> Result<Self> {
        let shape = TreeShape::for_circuit(&c, t)?;
        check_seed(&shape, &seed)?;
        Ok(Self { c, shape, seed })
    }
}

impl BitOracle for GgmView {
    fn len(&self) -> u64 {
        self.shape.t
    }

    fn bit(&self, i: u64) -> Result<bool> {
        ggm_eval(&self.c, self.shape.t, &self.seed, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dup2_examples() {
        let c = Circuit::dup(2);
        let x: BitString = "01".parse().unwrap();
        assert_eq!(ggm_full(&c, 8, &x).unwrap().to_string(), "01010101");
        assert!(ggm_eval(&c, 8, &x, 3).unwrap());
        let out = ggm_full(&c, 9, &x).unwrap();
        assert_eq!(out.len(), 9);
        assert_eq!(TreeShape::new(2, 9).unwrap().k, 3);
    }

    #[test]
    fn shape_rules() {
        assert!(TreeShape::new(2, 7).is_err());
        let s = TreeShape::new(3, 24).unwrap();
        assert_eq!((s.k, s.pad(), s.nodes()), (3, 0, 15));
        for idx in 0..s.nodes() {
            let (i, j) = s.node_at(idx);
            assert!(s.is_node(i, j));
            assert_eq!(s.lex_index(i, j), idx);
        }
    }
}
