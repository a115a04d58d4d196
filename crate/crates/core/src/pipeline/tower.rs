//! The S2 verifier: a tower of selectors, one per stage.

use std::cell::Cell;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::{BitOracle, BitString};
use crate::circuit::Circuit;
use crate::encoded::{enc_input, enc_output, select_bit, Candidate, EncodedLayout, SelectConfig};
use crate::error::{Error, Result};
use crate::rm::corrupt::mix64;

/// Stage `i + 1` of the tower: two candidates for the encoded history of
/// `f_i` under `C_{n_i}`.
pub struct TowerLevel<'a> {
    pub circuit: &'a Circuit,
    pub layout: &'a EncodedLayout,
    pub candidates: [&'a dyn Candidate; 2],
    pub eps: f64,
}

/// `V_0` reads the base string; `V_i(α)` selects between the stage-`i`
/// candidates with `V_{i-1}` standing in for `f_{i-1}`. Lower-stage
/// candidates, when present, are given directly.
pub struct SelectTower<'a> {
    base: &'a dyn BitOracle,
    levels: Vec<TowerLevel<'a>>,
    config: SelectConfig,
    seed: u64,
    calls: Cell<u64>,
    queries: Cell<u64>,
}

impl<'a> SelectTower<'a> {
    pub fn new(
        base: &'a dyn BitOracle,
        levels: Vec<TowerLevel<'a>>,
        config: SelectConfig,
        seed: u64,
    ) -> Result<Self> {
        let mut len = base.len();
        for (i, l) in levels.iter().enumerate() {
            if l.layout.shape.t != len {
                return Err(Error::shape(format!(
                    "tower level {} expects strings of {} bits, got {len}",
                    i + 1,
                    l.layout.shape.t
                )));
            }
            for c in &l.candidates {
                if c.len() as u128 != l.layout.len() {
                    return Err(Error::shape(format!(
                        "candidate at level {} has the wrong length",
                        i + 1
                    )));
                }
            }
            len = u64::try_from(l.layout.len())
                .map_err(|_| Error::capacity("tower level beyond 64-bit addressing"))?;
        }
        Ok(Self {
            base,
            levels,
            config,
            seed,
            calls: Cell::new(0),
            queries: Cell::new(0),
        })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Candidate-oracle queries made by all selector calls so far.
    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    pub fn level(&self, i: usize) -> Result<TowerView<'_, 'a>> {
        if i > self.depth() {
            return Err(Error::param(format!(
                "tower level {i} out of range (depth {})",
                self.depth()
            )));
        }
        Ok(TowerView { tower: self, i })
    }

    fn select(&self, i: usize, alpha: u64) -> Result<bool> {
        let l = &self.levels[i - 1];
        let call = self.calls.get();
        self.calls.set(call + 1);
        let mut rng =
            ChaCha8Rng::seed_from_u64(mix64(self.seed ^ mix64(call) ^ ((i as u64) << 56)));
        let below = TowerView {
            tower: self,
            i: i - 1,
        };
        let out = select_bit(
            &below,
            l.candidates,
            l.circuit,
            l.layout,
            alpha,
            l.eps,
            &self.config,
            &mut rng,
        )?;
        self.queries.set(self.queries.get() + out.queries);
        Ok(out.bit)
    }

    /// `Output` over the top level: `Korten(C_{n_k}, f_k)` when one top
    /// candidate is honest.
    pub fn output(&self) -> Result<Option<BitString>> {
        let top = self
            .levels
            .last()
            .ok_or_else(|| Error::param("empty tower has no output"))?;
        match enc_output(&self.level(self.depth())?, top.layout) {
            Ok(z) => Ok(Some(z)),
            Err(Error::Decode(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// `f_{i-1}` bit `j` recovered through `Input` of level `i`.
    pub fn input(&self, i: usize, j: u64) -> Result<bool> {
        let l = self
            .levels
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::param(format!("no tower level {i}")))?;
        enc_input(&self.level(i)?, l.layout, j)
    }
}

/// Bit view of `V_i`.
pub struct TowerView<'t, 'a> {
    tower: &'t SelectTower<'a>,
    i: usize,
}

impl BitOracle for TowerView<'_, '_> {
    fn len(&self) -> u64 {
        match self.i {
            0 => self.tower.base.len(),
            i => u64::try_from(self.tower.levels[i - 1].layout.len()).unwrap_or(u64::MAX),
        }
    }

    fn bit(&self, j: u64) -> Result<bool> {
        match self.i {
            0 => self.tower.base.bit(j),
            i => self.tower.select(i, j),
        }
    }
}

/// Bit `alpha` of `V_i`.
pub fn s2_chain_bit(tower: &SelectTower, i: usize, alpha: u64) -> Result<bool> {
    tower.level(i)?.bit(alpha)
}
