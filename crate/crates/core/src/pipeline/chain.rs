//! The Σ2 verifier: a stage chain of plain histories read top-down.

use crate::bits::{BitOracle, BitString};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::ggm::GgmView;
use crate::korten::{
    history_output, pi1_check, pi1_verify_all, witness_width, Check, HistoryLayout,
};

/// The concatenation of every `2 n0`-bit string in lexicographic order.
#[derive(Clone, Copy, Debug)]
pub struct FactString {
    width: usize,
}

impl FactString {
    pub fn new(n0: usize) -> Result<Self> {
        if n0 == 0 || 2 * n0 > 40 {
            return Err(Error::capacity(format!(
                "base string for n0 = {n0} is out of range"
            )));
        }
        Ok(Self { width: 2 * n0 })
    }

    pub fn materialize(&self) -> BitString {
        (0..self.len()).map(|j| self.get(j)).collect()
    }

    fn get(&self, j: u64) -> bool {
        let w = self.width as u64;
        ((j / w) >> (w - 1 - j % w)) & 1 == 1
    }
}

impl BitOracle for FactString {
    fn len(&self) -> u64 {
        (1u64 << self.width) * self.width as u64
    }

    fn bit(&self, j: u64) -> Result<bool> {
        if j >= self.len() {
            return Err(Error::shape(format!("bit {j} out of range")));
        }
        Ok(self.get(j))
    }
}

/// Strings `f̂_0..=f̂_{k+1}`: `f̂_0` is the base string, `f̂_{k+1}` the proof
/// oracle, and each level in between is read through `Input` of the next.
pub struct StageChain<'a> {
    base: &'a dyn BitOracle,
    top: &'a dyn BitOracle,
    layouts: &'a [HistoryLayout],
}

impl<'a> StageChain<'a> {
    /// `layouts[i]` is the history layout of stage `i`, for `i = 0..=k`.
    pub fn new(
        base: &'a dyn BitOracle,
        top: &'a dyn BitOracle,
        layouts: &'a [HistoryLayout],
    ) -> Result<Self> {
        let k = layouts
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::param("stage chain needs a stage"))?;
        if base.len() != layouts[0].shape.t {
            return Err(Error::shape(format!(
                "base string has {} bits, expected {}",
                base.len(),
                layouts[0].shape.t
            )));
        }
        for w in layouts.windows(2) {
            if w[0].len() != w[1].shape.t {
                return Err(Error::shape("consecutive stage lengths do not chain"));
            }
        }
        if top.len() != layouts[k].len() {
            return Err(Error::shape(format!(
                "proof string has {} bits, expected {}",
                top.len(),
                layouts[k].len()
            )));
        }
        Ok(Self { base, top, layouts })
    }

    pub fn k(&self) -> usize {
        self.layouts.len() - 1
    }

    pub fn level(&self, i: usize) -> Level<'_, 'a> {
        Level { chain: self, i }
    }
}

/// Bit view of `f̂_i`; each read costs one read of the top string.
pub struct Level<'c, 'a> {
    chain: &'c StageChain<'a>,
    i: usize,
}

impl BitOracle for Level<'_, '_> {
    fn len(&self) -> u64 {
        match self.i {
            0 => self.chain.base.len(),
            i if i <= self.chain.k() => self.chain.layouts[i].shape.t,
            _ => self.chain.top.len(),
        }
    }

    fn bit(&self, j: u64) -> Result<bool> {
        if j >= self.len() {
            return Err(Error::shape(format!(
                "bit {j} of stage {} out of range",
                self.i
            )));
        }
        if self.i == 0 {
            return self.chain.base.bit(j);
        }
        let mut idx = j;
        for layout in &self.chain.layouts[self.i..] {
            idx = layout.leaf_bit_index(idx);
        }
        self.chain.top.bit(idx)
    }
}

/// The second proof: a stage index and a Π1 witness for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi2 {
    pub i: usize,
    pub w: BitString,
}

/// Verifier for a fixed successful stage `k`.
#[derive(Clone, Debug)]
pub struct Sigma2Verifier {
    base: FactString,
    circuits: Vec<Circuit>,
    layouts: Vec<HistoryLayout>,
    /// `C_{n_{k+1}}` and `T_{k+1}` when the proof is a seed; `None` when it is raw.
    seeded: Option<(Circuit, u64)>,
}

/// Result of running every check at every stage.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub output: Option<BitString>,
    /// First failing `(stage, check)`.
    pub failed: Option<(usize, Check)>,
    pub checks: u64,
}

impl Sigma2Verifier {
    /// `circuits[i]` is `C_{n_i}` with stage length `lens[i]`, for `i = 0..=k`.
    pub fn new(
        n0: usize,
        circuits: Vec<Circuit>,
        lens: &[u64],
        seeded: Option<(Circuit, u64)>,
    ) -> Result<Self> {
        if circuits.is_empty() || circuits.len() != lens.len() {
            return Err(Error::param("one circuit and length per stage required"));
        }
        let layouts = circuits
            .iter()
            .zip(lens)
            .map(|(c, &t)| HistoryLayout::for_circuit(c, t))
            .collect::<Result<Vec<_>>>()?;
        if let Some((c, t)) = &seeded {
            if *t != layouts.last().unwrap().len() {
                return Err(Error::shape(
                    "seeded stage length does not match the last history",
                ));
            }
            crate::ggm::TreeShape::for_circuit(c, *t)?;
        }
        let base = FactString::new(n0)?;
        if base.len() != lens[0] {
            return Err(Error::shape(format!(
                "stage 0 length {} is not the base length {}",
                lens[0],
                base.len()
            )));
        }
        Ok(Self {
            base,
            circuits,
            layouts,
            seeded,
        })
    }

    pub fn k(&self) -> usize {
        self.layouts.len() - 1
    }

    pub fn layout(&self, i: usize) -> Result<&HistoryLayout> {
        self.layouts
            .get(i)
            .ok_or_else(|| Error::param(format!("stage {i} out of range (k = {})", self.k())))
    }

    /// Expected length of `π1`.
    pub fn pi1_len(&self) -> u64 {
        match &self.seeded {
            Some((c, _)) => c.n_in() as u64,
            None => self.layouts.last().unwrap().len(),
        }
    }

    fn top(&self, pi1: &BitString) -> Result<Box<dyn BitOracle>> {
        if pi1.len() as u64 != self.pi1_len() {
            return Err(Error::param(format!(
                "π1 has {} bits, expected {}",
                pi1.len(),
                self.pi1_len()
            )));
        }
        Ok(match &self.seeded {
            Some((c, t)) => Box::new(GgmView::new(c.clone(), *t, pi1.clone())?),
            None => Box::new(pi1.clone()),
        })
    }

    fn output(&self, chain: &StageChain) -> Result<Option<BitString>> {
        match history_output(&chain.level(self.k() + 1), &self.layouts[self.k()]) {
            Ok(z) => Ok(Some(z)),
            Err(Error::Decode(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Runs the single check named by `π2`; on success returns `Output` of
    /// the top string, otherwise `None`.
    pub fn decide(&self, pi1: &BitString, pi2: &Pi2) -> Result<Option<BitString>> {
        let layout = self.layout(pi2.i)?;
        if pi2.w.len() != witness_width(layout) {
            return Err(Error::param(format!(
                "witness for stage {} has {} bits, expected {}",
                pi2.i,
                pi2.w.len(),
                witness_width(layout)
            )));
        }
        let top = self.top(pi1)?;
        let chain = StageChain::new(&self.base, top.as_ref(), &self.layouts)?;
        let ok = pi1_check(
            &self.circuits[pi2.i],
            layout,
            &chain.level(pi2.i),
            &chain.level(pi2.i + 1),
            &pi2.w,
        )?;
        if !ok {
            return Ok(None);
        }
        self.output(&chain)
    }

    /// Quantifies over every `π2`: the output when all checks pass.
    pub fn enumerate(&self, pi1: &BitString) -> Result<Enumeration> {
        let top = self.top(pi1)?;
        let chain = StageChain::new(&self.base, top.as_ref(), &self.layouts)?;
        let mut checks = 0;
        for i in 0..=self.k() {
            let out = pi1_verify_all(
                &self.circuits[i],
                &self.layouts[i],
                &chain.level(i),
                &chain.level(i + 1),
            )?;
            checks += out.checks;
            if let Some(chk) = out.failed {
                return Ok(Enumeration {
                    output: None,
                    failed: Some((i, chk)),
                    checks,
                });
            }
        }
        Ok(Enumeration {
            output: self.output(&chain)?,
            failed: None,
            checks,
        })
    }
}

/// Convenience wrapper around [`Sigma2Verifier::decide`].
pub fn sigma2_decide(v: &Sigma2Verifier, pi1: &BitString, pi2: &Pi2) -> Result<Option<BitString>> {
    v.decide(pi1, pi2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_string_lists_all_strings() {
        let f = FactString::new(1).unwrap();
        assert_eq!(f.materialize().to_string(), "00011011");
        let f = FactString::new(2).unwrap();
        assert_eq!(f.len(), 64);
        let s = f.materialize();
        assert_eq!(s.slice(4 * 5, 4 * 6).to_string(), "0101");
    }
}
