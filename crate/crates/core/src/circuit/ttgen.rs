//! Truth-table generator: a circuit mapping a fixed-width gate-list
//! description to the truth table of the described circuit.
//!
//! A description of arity `n` and size `s` is `s` records of
//! `kind (3 bits) | a (w bits) | b (w bits)` with `w = ceil(log2(n + s))`.
//! Kind codes: 0 AND, 1 OR, 2 NOT, 3 XOR, 4 CONST0, 5 CONST1; 6 and 7 are
//! invalid. Operand `r < n` is input `x_r`, otherwise gate `r - n`, which must
//! precede the current gate. Unused operand fields are ignored. The output is
//! the last gate. Invalid descriptions map to the all-zeros table.

use super::{Circuit, CircuitBuilder, Gate, Wire};
use crate::bits::{ceil_log2, BitString};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TtGenSpec {
    pub n: usize,
    pub s: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct TtGenCaps {
    pub max_arity: usize,
    pub max_desc_len: usize,
}

impl Default for TtGenCaps {
    fn default() -> Self {
        Self {
            max_arity: 10,
            max_desc_len: 4096,
        }
    }
}

impl TtGenSpec {
    pub fn new(n: usize, s: usize) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::param(
                "truth-table generator needs n >= 1 and s >= 1",
            ));
        }
        Ok(Self { n, s })
    }

    pub fn operand_width(&self) -> usize {
        ceil_log2((self.n + self.s) as u64) as usize
    }

    pub fn record_width(&self) -> usize {
        3 + 2 * self.operand_width()
    }

    pub fn desc_len(&self) -> usize {
        self.s * self.record_width()
    }

    pub fn table_len(&self) -> usize {
        1 << self.n
    }

    /// Whether the generator maps fewer bits to more bits (`L < 2^n`).
    pub fn is_stretching(&self) -> bool {
        self.desc_len() < self.table_len()
    }

    /// Encodes a gate list; `gates.len()` must equal `s`.
    pub fn encode(&self, gates: &[DescribedGate]) -> Result<BitString> {
        if gates.len() != self.s {
            return Err(Error::shape(format!(
                "expected {} gates, got {}",
                self.s,
                gates.len()
            )));
        }
        let w = self.operand_width();
        let mut out = BitString::new();
        for g in gates {
            out.extend(&BitString::from_u64(g.kind as u64, 3));
            out.extend(&BitString::from_u64(g.a as u64, w));
            out.extend(&BitString::from_u64(g.b as u64, w));
        }
        Ok(out)
    }
}

/// One decoded record of a description.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DescribedGate {
    pub kind: u8,
    pub a: usize,
    pub b: usize,
}

fn uses_operands(kind: u8) -> (bool, bool) {
    match kind {
        0 | 1 | 3 => (true, true),
        2 => (true, false),
        _ => (false, false),
    }
}

/// Direct interpreter: the truth table of the described circuit, or all
/// zeros when the description is invalid.
pub fn interpret_description(spec: TtGenSpec, d: &BitString) -> Result<BitString> {
    if d.len() != spec.desc_len() {
        return Err(Error::shape(format!(
            "description must have {} bits",
            spec.desc_len()
        )));
    }
    let w = spec.operand_width();
    let rw = spec.record_width();
    let mut gates = Vec::with_capacity(spec.s);
    for k in 0..spec.s {
        let rec = d.slice(k * rw, (k + 1) * rw);
        let kind = rec.slice(0, 3).to_u64() as u8;
        let a = rec.slice(3, 3 + w).to_u64() as usize;
        let b = rec.slice(3 + w, rw).to_u64() as usize;
        if kind > 5 {
            return Ok(BitString::zeros(spec.table_len()));
        }
        let (ua, ub) = uses_operands(kind);
        if (ua && a >= spec.n + k) || (ub && b >= spec.n + k) {
            return Ok(BitString::zeros(spec.table_len()));
        }
        gates.push(DescribedGate { kind, a, b });
    }
    let mut table = BitString::zeros(spec.table_len());
    for x in 0..spec.table_len() {
        let input = |i: usize| (x >> (spec.n - 1 - i)) & 1 == 1;
        let mut vals: Vec<bool> = Vec::with_capacity(spec.s);
        for g in &gates {
            let get = |r: usize| {
                if r < spec.n {
                    input(r)
                } else {
                    vals[r - spec.n]
                }
            };
            let v = match g.kind {
                0 => get(g.a) && get(g.b),
                1 => get(g.a) || get(g.b),
                2 => !get(g.a),
                3 => get(g.a) ^ get(g.b),
                4 => false,
                _ => true,
            };
            vals.push(v);
        }
        table.set(x, vals[spec.s - 1]);
    }
    Ok(table)
}

fn or_all(b: &mut CircuitBuilder, ws: &[Wire]) -> Wire {
    match ws.split_first() {
        None => b.constant(false),
        Some((&first, rest)) => rest.iter().fold(first, |acc, &w| b.or(acc, w)),
    }
}

fn and_all(b: &mut CircuitBuilder, ws: &[Wire]) -> Wire {
    match ws.split_first() {
        None => b.constant(true),
        Some((&first, rest)) => rest.iter().fold(first, |acc, &w| b.and(acc, w)),
    }
}

/// Equality test of a big-endian field against a constant.
fn eq_const(b: &mut CircuitBuilder, field: &[Wire], neg: &[Wire], value: usize) -> Wire {
    let w = field.len();
    let lits: Vec<Wire> = (0..w)
        .map(|i| {
            if (value >> (w - 1 - i)) & 1 == 1 {
                field[i]
            } else {
                neg[i]
            }
        })
        .collect();
    and_all(b, &lits)
}

pub fn build_tt_generator(spec: TtGenSpec, caps: TtGenCaps) -> Result<Circuit> {
    if spec.n > caps.max_arity || spec.desc_len() > caps.max_desc_len {
        return Err(Error::capacity(format!(
            "truth-table generator with n = {}, L = {} exceeds caps (n <= {}, L <= {})",
            spec.n,
            spec.desc_len(),
            caps.max_arity,
            caps.max_desc_len
        )));
    }
    let (n, s) = (spec.n, spec.s);
    let w = spec.operand_width();
    let rw = spec.record_width();
    let mut b = CircuitBuilder::new(spec.desc_len());
    let neg: Vec<Wire> = (0..spec.desc_len())
        .map(|i| Gate::Not(Wire::Input(i)))
        .map(|g| b.push(g))
        .collect();

    struct Decoded {
        kinds: [Wire; 6],
        sel_a: Vec<Wire>,
        sel_b: Vec<Wire>,
    }
    let mut decoded = Vec::with_capacity(s);
    let mut valid_parts = Vec::with_capacity(s);
    for k in 0..s {
        let base = k * rw;
        let field = |off: usize, len: usize| -> (Vec<Wire>, Vec<Wire>) {
            (
                (base + off..base + off + len).map(Wire::Input).collect(),
                neg[base + off..base + off + len].to_vec(),
            )
        };
        let (kf, kn) = field(0, 3);
        let kinds: [Wire; 6] = std::array::from_fn(|c| eq_const(&mut b, &kf, &kn, c));
        let (af, an) = field(3, w);
        let (bf, bn) = field(3 + w, w);
        let sel_a: Vec<Wire> = (0..n + k).map(|r| eq_const(&mut b, &af, &an, r)).collect();
        let sel_b: Vec<Wire> = (0..n + k).map(|r| eq_const(&mut b, &bf, &bn, r)).collect();

        let kind_ok = or_all(&mut b, &kinds);
        let a_ok = or_all(&mut b, &sel_a);
        let b_ok = or_all(&mut b, &sel_b);
        let binary = or_all(&mut b, &[kinds[0], kinds[1], kinds[3]]);
        let needs_a = b.or(binary, kinds[2]);
        // needs -> ok  ==  !needs | ok
        let na = b.not(needs_a);
        let a_fine = b.or(na, a_ok);
        let nb = b.not(binary);
        let b_fine = b.or(nb, b_ok);
        valid_parts.push(and_all(&mut b, &[kind_ok, a_fine, b_fine]));
        decoded.push(Decoded {
            kinds,
            sel_a,
            sel_b,
        });
    }
    let valid = and_all(&mut b, &valid_parts);

    let mut outputs = Vec::with_capacity(spec.table_len());
    for x in 0..spec.table_len() {
        let mut vals: Vec<Wire> = Vec::with_capacity(s);
        for (k, dec) in decoded.iter().enumerate() {
            let operand = |b: &mut CircuitBuilder, sel: &[Wire], vals: &[Wire]| -> Wire {
                let mut terms = Vec::new();
                for r in 0..n + k {
                    if r < n {
                        if (x >> (n - 1 - r)) & 1 == 1 {
                            terms.push(sel[r]);
                        }
                    } else {
                        terms.push(b.and(sel[r], vals[r - n]));
                    }
                }
                or_all(b, &terms)
            };
            let va = operand(&mut b, &dec.sel_a, &vals);
            let vb = operand(&mut b, &dec.sel_b, &vals);
            let and_v = b.and(va, vb);
            let or_v = b.or(va, vb);
            let xor_v = b.xor(va, vb);
            let not_v = b.not(va);
            let terms = [
                b.and(dec.kinds[0], and_v),
                b.and(dec.kinds[1], or_v),
                b.and(dec.kinds[2], not_v),
                b.and(dec.kinds[3], xor_v),
                dec.kinds[5],
            ];
            let v = or_all(&mut b, &terms);
            vals.push(v);
        }
        outputs.push(b.and(valid, vals[s - 1]));
    }
    b.finish(outputs)
}
