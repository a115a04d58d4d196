//! NP-oracle backends: preimage existence, lexicographically first preimage
//! and GGM range membership.

mod cnf;
mod exhaustive;
mod sat;

pub use cnf::Cnf;
pub use exhaustive::ExhaustiveOracle;
pub use sat::SatOracle;

use std::path::PathBuf;
use std::str::FromStr;

use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::ggm::TreeShape;

/// Every method either answers exactly or fails; a budget overrun is
/// [`Error::ResourceExhausted`], never a "no".
pub trait PreimageOracle {
    /// Is there `x` starting with `prefix` such that `C(x) = y`?
    fn has_preimage(&mut self, c: &Circuit, y: &BitString, prefix: &[bool]) -> Result<bool>;

    /// Is there a seed starting with `prefix` whose GGM output is `f`?
    fn ggm_has_preimage(
        &mut self,
        c: &Circuit,
        t: u64,
        f: &BitString,
        prefix: &[bool],
    ) -> Result<bool>;

    fn queries(&self) -> u64;

    fn kind(&self) -> BackendKind;

    /// Bit-by-bit prefix search; at most `n_in + 1` existence queries.
    fn lex_first_preimage(&mut self, c: &Circuit, y: &BitString) -> Result<Option<BitString>> {
        check_output_width(c, y)?;
        if !self.has_preimage(c, y, &[])? {
            return Ok(None);
        }
        let mut prefix = Vec::with_capacity(c.n_in());
        while prefix.len() < c.n_in() {
            prefix.push(false);
            if !self.has_preimage(c, y, &prefix)? {
                *prefix.last_mut().unwrap() = true;
            }
        }
        Ok(Some(BitString::from_bits(prefix)))
    }

    fn in_range_ggm(&mut self, c: &Circuit, t: u64, f: &BitString) -> Result<bool> {
        self.ggm_has_preimage(c, t, f, &[])
    }

    /// Lexicographically first GGM seed of `f`.
    fn ggm_preimage(&mut self, c: &Circuit, t: u64, f: &BitString) -> Result<Option<BitString>> {
        if !self.ggm_has_preimage(c, t, f, &[])? {
            return Ok(None);
        }
        let mut prefix = Vec::with_capacity(c.n_in());
        while prefix.len() < c.n_in() {
            prefix.push(false);
            if !self.ggm_has_preimage(c, t, f, &prefix)? {
                *prefix.last_mut().unwrap() = true;
            }
        }
        Ok(Some(BitString::from_bits(prefix)))
    }
}

pub(crate) fn check_output_width(c: &Circuit, y: &BitString) -> Result<()> {
    if y.len() != c.n_out() {
        return Err(Error::shape(format!(
            "target has {} bits, circuit outputs {}",
            y.len(),
            c.n_out()
        )));
    }
    Ok(())
}

pub(crate) fn check_prefix(c: &Circuit, prefix: &[bool]) -> Result<()> {
    if prefix.len() > c.n_in() {
        return Err(Error::shape(format!(
            "prefix of {} bits for {} inputs",
            prefix.len(),
            c.n_in()
        )));
    }
    Ok(())
}

pub(crate) fn check_ggm(c: &Circuit, t: u64, f: &BitString) -> Result<TreeShape> {
    let shape = TreeShape::for_circuit(c, t)?;
    if f.len() as u64 != t {
        return Err(Error::shape(format!(
            "f has {} bits, expected T = {t}",
            f.len()
        )));
    }
    Ok(shape)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Exhaustive,
    Sat,
}

impl FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "sat" => Ok(Self::Sat),
            other => Err(Error::param(format!(
                "unknown backend {other:?} (expected exhaustive or sat)"
            ))),
        }
    }
}

impl std::fmt::Display for BackendKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Exhaustive => "exhaustive",
            Self::Sat => "sat",
        })
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Largest number of free input bits the exhaustive backend enumerates.
    pub max_enum_width: usize,
    /// Learnt-clause budget per SAT call; `None` is unlimited.
    pub sat_conflict_budget: Option<u64>,
    /// When set, every SAT query is written here as a numbered DIMACS file.
    pub dimacs_dir: Option<PathBuf>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_enum_width: 24,
            sat_conflict_budget: Some(1_000_000),
            dimacs_dir: None,
        }
    }
}

pub fn backend(kind: BackendKind, config: OracleConfig) -> Box<dyn PreimageOracle> {
    match kind {
        BackendKind::Exhaustive => Box::new(ExhaustiveOracle::new(config)),
        BackendKind::Sat => Box::new(SatOracle::new(config)),
    }
}
