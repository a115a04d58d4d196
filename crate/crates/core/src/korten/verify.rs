//! Local checks that together pin down the history uniquely.
//!
//! A witness has `5(ceil(log2 T) + n)` bits and is read as
//! `tag (3) | a (sw) | b (sw) | x (n) | ignored`. Tags:
//!
//! * 0 `Leaf(j)`, `j = a∘b`: leaf `j` is a value equal to the padded block of `f`.
//! * 1 `Child(a, b)`: above the stop point, the node and its children are
//!   values and `C(v)` equals the children.
//! * 2 `LexMin(a, b, x)`: above the stop point, `x < v` implies `C(x)` differs
//!   from the children.
//! * 3 `Stop(x)`: the stop point's children are values and `C(x)` differs from them.
//! * 4 `Bottom(a, b)`: at or below the stop point the label is `1^{n+1}`.
//! * 5 `Padding(q)`, `q = a∘b∘x`: bit `q` is zero when it lies past the labels.
//!
//! Tags 6 and 7, and indices naming no node, are vacuously accepted.

use std::fmt;

use super::history::{HistoryLayout, Label};
use crate::bits::{BitOracle, BitString};
use crate::circuit::Circuit;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Leaf(u64),
    Child(u32, u64),
    LexMin(u32, u64, BitString),
    Stop(BitString),
    Bottom(u32, u64),
    Padding(u64),
    Vacuous,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Leaf(j) => write!(f, "leaf({j})"),
            Check::Child(i, j) => write!(f, "child({i},{j})"),
            Check::LexMin(i, j, x) => write!(f, "lexmin({i},{j},{x})"),
            Check::Stop(x) => write!(f, "stop({x})"),
            Check::Bottom(i, j) => write!(f, "bottom({i},{j})"),
            Check::Padding(q) => write!(f, "padding({q})"),
            Check::Vacuous => write!(f, "vacuous"),
        }
    }
}

pub fn witness_width(layout: &HistoryLayout) -> usize {
    5 * (layout.sw as usize + layout.shape.n)
}

impl Check {
    pub fn decode(layout: &HistoryLayout, w: &BitString) -> Result<Check> {
        if w.len() != witness_width(layout) {
            return Err(Error::param(format!(
                "witness has {} bits, expected {}",
                w.len(),
                witness_width(layout)
            )));
        }
        let sw = layout.sw as usize;
        let n = layout.shape.n;
        let tag = w.slice(0, 3).to_u64();
        let a = w.slice(3, 3 + sw).to_u64();
        let b = w.slice(3 + sw, 3 + 2 * sw).to_u64();
        let x = w.slice(3 + 2 * sw, 3 + 2 * sw + n);
        let ab = (a << sw) | b;
        Ok(match tag {
            0 => Check::Leaf(ab),
            1 => Check::Child(a as u32, b),
            2 => Check::LexMin(a as u32, b, x),
            3 => Check::Stop(x),
            4 => Check::Bottom(a as u32, b),
            5 if 2 * sw + n <= 64 => Check::Padding((ab << n) | x.to_u64()),
            _ => Check::Vacuous,
        })
    }

    /// A witness decoding to this check.
    pub fn encode(&self, layout: &HistoryLayout) -> BitString {
        let sw = layout.sw as usize;
        let n = layout.shape.n;
        let (tag, a, b, x) = match self {
            Check::Leaf(j) => (0, j >> sw, j & ((1 << sw) - 1), BitString::zeros(n)),
            Check::Child(i, j) => (1, *i as u64, *j, BitString::zeros(n)),
            Check::LexMin(i, j, x) => (2, *i as u64, *j, x.clone()),
            Check::Stop(x) => (3, 0, 0, x.clone()),
            Check::Bottom(i, j) => (4, *i as u64, *j, BitString::zeros(n)),
            Check::Padding(q) => (
                5,
                q >> (sw + n),
                (q >> n) & ((1 << sw) - 1),
                BitString::from_u64(q & ((1 << n) - 1), n),
            ),
            Check::Vacuous => (7, 0, 0, BitString::zeros(n)),
        };
        let mut w = BitString::from_u64(tag, 3);
        w.extend(&BitString::from_u64(a, sw));
        w.extend(&BitString::from_u64(b, sw));
        w.extend(&x);
        w.resized(witness_width(layout))
    }

    /// Runs the check against candidate history `h` for input `f`.
    pub fn evaluate(
        &self,
        c: &Circuit,
        layout: &HistoryLayout,
        f: &dyn BitOracle,
        h: &dyn BitOracle,
    ) -> Result<bool> {
        let shape = &layout.shape;
        let n = shape.n;
        let internal = |i: u32, j: u64| i < shape.k && shape.is_node(i, j);
        let above_stop = |i: u32, j: u64, stop: (u32, u64)| {
            shape.lex_index(i, j) > shape.lex_index(stop.0, stop.1)
        };
        let children = |i: u32, j: u64| -> Result<Option<BitString>> {
            let l = layout.read_label(h, i + 1, 2 * j)?;
            let r = layout.read_label(h, i + 1, 2 * j + 1)?;
            Ok(match (l, r) {
                (Label::Value(l), Label::Value(r)) => Some(l.concat(&r)),
                _ => None,
            })
        };
        Ok(match self {
            Check::Vacuous => true,
            Check::Leaf(j) => {
                if *j >= shape.leaves() {
                    return Ok(true);
                }
                match layout.read_label(h, shape.k, *j)? {
                    Label::Value(v) => {
                        let start = j * n as u64;
                        let want: BitString = (start..start + n as u64)
                            .map(|p| if p < shape.t { f.bit(p) } else { Ok(false) })
                            .collect::<Result<_>>()?;
                        v == want
                    }
                    _ => false,
                }
            }
            Check::Child(i, j) => {
                if !internal(*i, *j) {
                    return Ok(true);
                }
                let Ok(stop) = layout.read_stop(h) else {
                    return Ok(false);
                };
                if !above_stop(*i, *j, stop) {
                    return Ok(true);
                }
                match (layout.read_label(h, *i, *j)?, children(*i, *j)?) {
                    (Label::Value(v), Some(ch)) => c.eval_slice(v.as_slice()) == ch,
                    _ => false,
                }
            }
            Check::LexMin(i, j, x) => {
                if !internal(*i, *j) {
                    return Ok(true);
                }
                let Ok(stop) = layout.read_stop(h) else {
                    return Ok(false);
                };
                if !above_stop(*i, *j, stop) {
                    return Ok(true);
                }
                match (layout.read_label(h, *i, *j)?, children(*i, *j)?) {
                    (Label::Value(v), Some(ch)) => x >= &v || c.eval_slice(x.as_slice()) != ch,
                    _ => false,
                }
            }
            Check::Stop(x) => {
                let Ok((i, j)) = layout.read_stop(h) else {
                    return Ok(false);
                };
                match children(i, j)? {
                    Some(ch) => c.eval_slice(x.as_slice()) != ch,
                    None => false,
                }
            }
            Check::Bottom(i, j) => {
                if !shape.is_node(*i, *j) {
                    return Ok(true);
                }
                let Ok(stop) = layout.read_stop(h) else {
                    return Ok(false);
                };
                if above_stop(*i, *j, stop) {
                    return Ok(true);
                }
                layout.read_label(h, *i, *j)? == Label::Bottom
            }
            Check::Padding(q) => {
                if *q < layout.structured_len() || *q >= layout.len() {
                    return Ok(true);
                }
                !h.bit(*q)?
            }
        })
    }

    /// Every non-vacuous check for the layout, in a fixed order.
    pub fn all(layout: &HistoryLayout) -> impl Iterator<Item = Check> + '_ {
        let shape = layout.shape;
        let n = shape.n;
        let internal = move || (0..shape.k).flat_map(|i| (0..1u64 << i).map(move |j| (i, j)));
        let nodes = move || (0..=shape.k).flat_map(|i| (0..1u64 << i).map(move |j| (i, j)));
        let xs = move || (0..1u64 << n).map(move |x| BitString::from_u64(x, n));
        (0..shape.leaves())
            .map(Check::Leaf)
            .chain(internal().map(|(i, j)| Check::Child(i, j)))
            .chain(internal().flat_map(move |(i, j)| xs().map(move |x| Check::LexMin(i, j, x))))
            .chain(xs().map(Check::Stop))
            .chain(nodes().map(|(i, j)| Check::Bottom(i, j)))
            .chain((layout.structured_len()..layout.len()).map(Check::Padding))
    }
}

fn check_lengths(layout: &HistoryLayout, f: &dyn BitOracle, h: &dyn BitOracle) -> Result<()> {
    if f.len() != layout.shape.t {
        return Err(Error::shape(format!(
            "f has {} bits, expected {}",
            f.len(),
            layout.shape.t
        )));
    }
    if h.len() != layout.len() {
        return Err(Error::shape(format!(
            "history has {} bits, expected {}",
            h.len(),
            layout.len()
        )));
    }
    Ok(())
}

/// One check named by witness `w`.
pub fn pi1_check(
    c: &Circuit,
    layout: &HistoryLayout,
    f: &dyn BitOracle,
    h: &dyn BitOracle,
    w: &BitString,
) -> Result<bool> {
    check_lengths(layout, f, h)?;
    Check::decode(layout, w)?.evaluate(c, layout, f, h)
}

#[derive(Clone, Debug)]
pub struct Pi1Outcome {
    pub accepted: bool,
    /// First failing check, if any.
    pub failed: Option<Check>,
    pub checks: u64,
}

/// Runs every check; equivalent to quantifying over all witnesses since every
/// witness decodes either to a check in [`Check::all`] or to a vacuous one.
pub fn pi1_verify_all(
    c: &Circuit,
    layout: &HistoryLayout,
    f: &dyn BitOracle,
    h: &dyn BitOracle,
) -> Result<Pi1Outcome> {
    check_lengths(layout, f, h)?;
    if 1u64 << layout.shape.n > 1 << 20 {
        return Err(Error::capacity("enumerating all witnesses needs n <= 20"));
    }
    let mut checks = 0;
    for chk in Check::all(layout) {
        checks += 1;
        if !chk.evaluate(c, layout, f, h)? {
            return Ok(Pi1Outcome {
                accepted: false,
                failed: Some(chk),
                checks,
            });
        }
    }
    Ok(Pi1Outcome {
        accepted: true,
        failed: None,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::korten::history_build;
    use crate::oracle::ExhaustiveOracle;

    fn dup2() -> (Circuit, HistoryLayout, BitString, BitString) {
        let c = Circuit::dup(2);
        let f: BitString = "00011011".parse().unwrap();
        let (_, h) = history_build(&mut ExhaustiveOracle::default(), &c, &f).unwrap();
        let layout = HistoryLayout::for_circuit(&c, 8).unwrap();
        (c, layout, f, h)
    }

    #[test]
    fn true_history_accepted() {
        let (c, layout, f, h) = dup2();
        let out = pi1_verify_all(&c, &layout, &f, &h).unwrap();
        assert!(out.accepted, "{:?}", out.failed);
    }

    #[test]
    fn leaf_flip_caught_by_leaf_check() {
        let (c, layout, f, mut h) = dup2();
        h.flip(layout.leaf_bit_index(5) as usize);
        let w = Check::Leaf(2).encode(&layout);
        assert!(!pi1_check(&c, &layout, &f, &h, &w).unwrap());
    }

    #[test]
    fn witness_roundtrip() {
        let (_, layout, _, _) = dup2();
        for chk in Check::all(&layout) {
            assert_eq!(Check::decode(&layout, &chk.encode(&layout)).unwrap(), chk);
        }
        assert!(Check::decode(&layout, &BitString::zeros(3)).is_err());
    }
}
