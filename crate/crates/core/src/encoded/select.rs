//! Randomized selection between two candidate encoded histories.
//!
//! The selector outputs bit `i` of one candidate. If one of them is the true
//! encoded history, the output equals its bit `i` with probability `1 - ε`.

use std::fmt;

use rand::Rng;

use super::history::{EncodedHistory, EncodedLayout};
use crate::bits::{BitOracle, BitString};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::korten::Label;
use crate::rm::{
    comp, comp_samples, ldt, CompConfig, Counted, Field, FieldOracle, LdtConfig, PcorrConfig,
    SelfCorrected,
};

/// A candidate history. Implementors backed by a field oracle can expose it
/// directly; otherwise symbols are decoded from codeword bits.
pub trait Candidate: BitOracle {
    fn field_view(&self) -> Option<&dyn FieldOracle> {
        None
    }
}

impl<W: FieldOracle> Candidate for EncodedHistory<W> {
    fn field_view(&self) -> Option<&dyn FieldOracle> {
        Some(self.word())
    }
}

impl Candidate for BitString {}

/// Reads codeword symbols out of raw history bits. Out-of-range symbols are
/// reduced modulo `p`.
struct BitsAsField<'a> {
    h: &'a dyn BitOracle,
    layout: &'a EncodedLayout,
}

impl FieldOracle for BitsAsField<'_> {
    fn field(&self) -> Field {
        self.layout.rm().field()
    }

    fn dim(&self) -> usize {
        self.layout.rm().m()
    }

    fn eval(&self, x: &[u64]) -> u64 {
        let field = self.field();
        let b = field.symbol_bits() as u128;
        let start = self.layout.stop_len() as u128 + self.layout.rm().point_index(x) * b;
        let mut v = 0u64;
        for k in 0..b {
            let bit = u64::try_from(start + k)
                .ok()
                .and_then(|i| self.h.bit(i).ok())
                .unwrap_or(false);
            v = (v << 1) | bit as u64;
        }
        v % field.modulus()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SelectConfig {
    /// Minimum number of low-degree test repetitions per candidate.
    pub c1: usize,
    /// Self-correction error per query is at most `(mT)^-c2`.
    pub c2: u32,
    pub ldt: LdtConfig,
    pub pcorr: PcorrConfig,
}

impl Default for SelectConfig {
    fn default() -> Self {
        Self {
            c1: 12,
            c2: 4,
            ldt: LdtConfig::default(),
            pcorr: PcorrConfig::default(),
        }
    }
}

/// Why a candidate was selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    StopShape,
    LowDegree,
    Identical,
    Padding,
    NonBoolean,
    Leaf,
    Preimage,
    LexSmaller,
    ChildrenBottom,
    PredecessorBottom,
    BottomRefuted,
    BottomClaim,
    StopEqual,
    StopBottom,
    StopLarger,
    Default,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SelectOutcome {
    pub bit: bool,
    /// 0 for the first candidate, 1 for the second.
    pub chosen: usize,
    pub reason: Reason,
    /// Point queries made to the candidates' field parts.
    pub queries: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Read {
    Value(BitString),
    Bottom,
    Invalid,
}

fn read_label(g: &dyn FieldOracle, layout: &EncodedLayout, i: u32, j: u64) -> Read {
    let off = layout.label_offset(i, j);
    let mut bits = Vec::with_capacity(layout.block() as usize);
    for q in off..off + layout.block() {
        match g.eval(&layout.rm().grid_point(q)) {
            0 => bits.push(false),
            1 => bits.push(true),
            _ => return Read::Invalid,
        }
    }
    match Label::decode(&bits) {
        Label::Value(v) => Read::Value(v),
        Label::Bottom => Read::Bottom,
        Label::Malformed => Read::Invalid,
    }
}

fn read_stop(h: &dyn BitOracle, layout: &EncodedLayout) -> Result<Option<(u32, u64)>> {
    let bits: BitString = (0..layout.stop_len())
        .map(|i| h.bit(i))
        .collect::<Result<_>>()?;
    Ok(layout.parse_stop(&bits))
}

fn leaf_block(f: &dyn BitOracle, n: usize, j: u64) -> Result<BitString> {
    let start = j * n as u64;
    (start..start + n as u64)
        .map(|p| if p < f.len() { f.bit(p) } else { Ok(false) })
        .collect()
}

/// Selects one of `pi` and returns its bit `i`.
#[allow(clippy::too_many_arguments)]
pub fn select_bit<R: Rng + ?Sized>(
    f: &dyn BitOracle,
    pi: [&dyn Candidate; 2],
    c: &Circuit,
    layout: &EncodedLayout,
    i: u64,
    eps: f64,
    config: &SelectConfig,
    rng: &mut R,
) -> Result<SelectOutcome> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("ε = {eps} must lie in (0, 1)")));
    }
    if i as u128 >= layout.len() {
        return Err(Error::shape(format!("history bit {i} out of range")));
    }
    if c.n_in() != layout.shape.n || c.n_out() != 2 * layout.shape.n {
        return Err(Error::shape("circuit does not match the history layout"));
    }
    let raw = |mu: usize, reason: Reason| -> Result<SelectOutcome> {
        Ok(SelectOutcome {
            bit: pi[mu].bit(i)?,
            chosen: mu,
            reason,
            queries: 0,
        })
    };

    let stops = [read_stop(pi[0], layout)?, read_stop(pi[1], layout)?];
    match (stops[0], stops[1]) {
        (None, _) => return raw(1, Reason::StopShape),
        (_, None) => return raw(0, Reason::StopShape),
        _ => {}
    }
    let stops = [stops[0].unwrap(), stops[1].unwrap()];

    let decoded: [BitsAsField; 2] = [
        BitsAsField { h: pi[0], layout },
        BitsAsField { h: pi[1], layout },
    ];
    let views: [Counted<&dyn FieldOracle>; 2] = [0, 1].map(|b| {
        let v: &dyn FieldOracle = match pi[b].field_view() {
            Some(v) => v,
            None => &decoded[b],
        };
        Counted::new(v)
    });

    let params = &layout.params;
    let (m, delta) = (params.m, params.delta);
    let reps = config
        .c1
        .max(((3.0 / eps).ln() / 3f64.ln()).ceil() as usize);
    let mut rejected = [false; 2];
    for b in 0..2 {
        for _ in 0..reps {
            if !ldt(&views[b], delta - 1, &config.ldt, rng)? {
                rejected[b] = true;
                break;
            }
        }
    }
    let queries = || views[0].queries() + views[1].queries();
    match rejected {
        [true, _] => {
            return Ok(SelectOutcome {
                queries: queries(),
                ..raw(1, Reason::LowDegree)?
            })
        }
        [false, true] => {
            return Ok(SelectOutcome {
                queries: queries(),
                ..raw(0, Reason::LowDegree)?
            })
        }
        _ => {}
    }

    let field = layout.rm().field();
    let h_size = delta;
    let comp_error = (1.0 / (10.0 * (m * h_size) as f64)).min(eps / (3.0 * (m * h_size) as f64));
    let samples = comp_samples(field, m - 1, delta - 1, comp_error);
    let q_max = (2 * m * h_size * samples + 8 * (layout.shape.n + 1) + 2) as f64;
    let per_query = (m as f64 * layout.shape.t as f64)
        .powi(-(config.c2 as i32))
        .min(eps / (3.0 * q_max));
    let d_total = params.total_degree();
    let g = [
        SelfCorrected::new(&views[0], d_total, per_query, config.pcorr, rng.gen())?,
        SelfCorrected::new(&views[1], d_total, per_query, config.pcorr, rng.gen())?,
    ];

    let w = comp(
        &g[0],
        &g[1],
        delta - 1,
        &CompConfig {
            test_error: Some(comp_error),
        },
        rng,
    )?;
    let (chosen, reason) = match w {
        None if (i) < layout.stop_len() => {
            if stops[0] == stops[1] {
                (0, Reason::StopEqual)
            } else {
                let bottom: Vec<bool> = (0..2)
                    .map(|b| read_label(&g[b], layout, stops[b].0, stops[b].1) == Read::Bottom)
                    .collect();
                match (bottom[0], bottom[1]) {
                    (true, false) => (0, Reason::StopBottom),
                    (false, true) => (1, Reason::StopBottom),
                    (false, false) => (0, Reason::Default),
                    (true, true) => (if stops[1] > stops[0] { 1 } else { 0 }, Reason::StopLarger),
                }
            }
        }
        None => (0, Reason::Identical),
        Some(w) => decide(f, c, layout, &g, &w)?,
    };

    let bit = if i < layout.stop_len() {
        pi[chosen].bit(i)?
    } else {
        let b = field.symbol_bits() as u64;
        let off = i - layout.stop_len();
        let x = layout.rm().point_at((off / b) as u128);
        let v = g[chosen].eval(&x);
        (v >> (b - 1 - off % b)) & 1 == 1
    };
    Ok(SelectOutcome {
        bit,
        chosen,
        reason,
        queries: queries(),
    })
}

/// Case analysis at the first differing grid point `w`.
fn decide(
    f: &dyn BitOracle,
    c: &Circuit,
    layout: &EncodedLayout,
    g: &[impl FieldOracle; 2],
    w: &[u64],
) -> Result<(usize, Reason)> {
    let q = layout.rm().grid_index(w);
    let Some((ip, jp)) = layout.node_of(q) else {
        // past the labels the true message is zero
        let zero = [g[0].eval(w) == 0, g[1].eval(w) == 0];
        return Ok(match zero {
            [false, true] => (1, Reason::Padding),
            [true, false] => (0, Reason::Padding),
            _ => (0, Reason::Default),
        });
    };
    let labels = [
        read_label(&g[0], layout, ip, jp),
        read_label(&g[1], layout, ip, jp),
    ];
    match (&labels[0], &labels[1]) {
        (Read::Invalid, Read::Invalid) => return Ok((0, Reason::Default)),
        (Read::Invalid, _) => return Ok((1, Reason::NonBoolean)),
        (_, Read::Invalid) => return Ok((0, Reason::NonBoolean)),
        _ => {}
    }
    let n = layout.shape.n;
    if ip == layout.shape.k {
        let truth = leaf_block(f, n, jp)?;
        let matches: Vec<bool> = labels
            .iter()
            .map(|l| *l == Read::Value(truth.clone()))
            .collect();
        return Ok(match (matches[0], matches[1]) {
            (false, true) => (1, Reason::Leaf),
            (true, false) => (0, Reason::Leaf),
            _ => (0, Reason::Default),
        });
    }
    let children = [
        read_label(&g[0], layout, ip + 1, 2 * jp),
        read_label(&g[0], layout, ip + 1, 2 * jp + 1),
    ];
    let alpha = match (&children[0], &children[1]) {
        (Read::Value(a), Read::Value(b)) => a.concat(b),
        (Read::Invalid, _) | (_, Read::Invalid) => return Ok((0, Reason::Default)),
        _ => {
            // a ⊥ child forces a ⊥ parent
            return Ok(match (&labels[0], &labels[1]) {
                (_, Read::Bottom) => (1, Reason::ChildrenBottom),
                (Read::Bottom, _) => (0, Reason::ChildrenBottom),
                _ => (0, Reason::Default),
            });
        }
    };
    let maps_to_alpha = |v: &BitString| -> Result<bool> { Ok(c.eval(v)? == alpha) };
    match (&labels[0], &labels[1]) {
        (Read::Value(v0), Read::Value(v1)) => {
            let ok = [maps_to_alpha(v0)?, maps_to_alpha(v1)?];
            Ok(match ok {
                [true, false] => (0, Reason::Preimage),
                [false, true] => (1, Reason::Preimage),
                [false, false] => (0, Reason::Default),
                [true, true] => (if v1 < v0 { 1 } else { 0 }, Reason::LexSmaller),
            })
        }
        (Read::Bottom, Read::Value(v)) | (Read::Value(v), Read::Bottom) => {
            let b = if labels[0] == Read::Bottom { 0 } else { 1 };
            let pred = if jp + 1 < 1 << ip {
                (ip, jp + 1)
            } else {
                (ip + 1, 0)
            };
            if read_label(&g[0], layout, pred.0, pred.1) == Read::Bottom {
                Ok((b, Reason::PredecessorBottom))
            } else if maps_to_alpha(v)? {
                Ok((1 - b, Reason::BottomRefuted))
            } else {
                Ok((b, Reason::BottomClaim))
            }
        }
        _ => Ok((0, Reason::Default)),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::encoded::{enc_history_build, Profile};
    use crate::oracle::ExhaustiveOracle;

    /// `C(00) = C(01) = 1111`, `C(10) = 0101`, `C(11) = 1010`.
    fn collapsing() -> Circuit {
        Circuit::from_table(2, 4, &[0b1111, 0b1111, 0b0101, 0b1010]).unwrap()
    }

    #[test]
    fn picks_lex_first_preimage() {
        let c = collapsing();
        let f: BitString = "01011111".parse().unwrap();
        let (rec, honest) =
            enc_history_build(&mut ExhaustiveOracle::default(), &c, &f, Profile::desk()).unwrap();
        assert_eq!(rec.stop, Some((0, 0)));
        assert_eq!(rec.label(1, 1).unwrap().to_string(), "00");
        let mut fake_rec = rec.clone();
        fake_rec.set_label(1, 1, Some("01".parse().unwrap()));
        let layout: Arc<EncodedLayout> = honest.layout().clone();
        let fake = EncodedHistory::from_record(layout.clone(), &fake_rec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cfg = SelectConfig::default();
        let probe = layout.message_bit_index(layout.label_offset(1, 1) + 2) as u64;
        for i in [0, 3, probe, probe + 1, 1 << 40] {
            let want = honest.bit(i).unwrap();
            for order in [[&fake as &dyn Candidate, &honest], [&honest, &fake]] {
                let out = select_bit(&f, order, &c, &layout, i, 0.05, &cfg, &mut rng).unwrap();
                assert_eq!(out.bit, want, "bit {i} reason {}", out.reason);
            }
        }
        let same = select_bit(
            &f,
            [&honest, &honest],
            &c,
            &layout,
            probe,
            0.05,
            &cfg,
            &mut rng,
        )
        .unwrap();
        assert_eq!(same.reason, Reason::Identical);
        assert!(select_bit(
            &f,
            [&honest, &honest],
            &c,
            &layout,
            probe,
            0.0,
            &cfg,
            &mut rng
        )
        .is_err());
    }
}
