//! Boolean circuits over {AND, OR, NOT, XOR, CONST} with fan-in at most two.

mod mcsp;
mod stretch;
mod text;
mod ttgen;

pub use mcsp::{mcsp_brute, McspCaps};
pub use stretch::{stretch_double, Stretch};
pub use ttgen::{build_tt_generator, interpret_description, DescribedGate, TtGenCaps, TtGenSpec};

use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wire {
    Input(usize),
    Gate(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    And(Wire, Wire),
    Or(Wire, Wire),
    Xor(Wire, Wire),
    Not(Wire),
    Const(bool),
}

impl Gate {
    pub fn operands(&self) -> impl Iterator<Item = Wire> {
        let (a, b) = match *self {
            Gate::And(a, b) | Gate::Or(a, b) | Gate::Xor(a, b) => (Some(a), Some(b)),
            Gate::Not(a) => (Some(a), None),
            Gate::Const(_) => (None, None),
        };
        a.into_iter().chain(b)
    }

    fn apply(&self, get: impl Fn(Wire) -> bool) -> bool {
        match *self {
            Gate::And(a, b) => get(a) & get(b),
            Gate::Or(a, b) => get(a) | get(b),
            Gate::Xor(a, b) => get(a) ^ get(b),
            Gate::Not(a) => !get(a),
            Gate::Const(c) => c,
        }
    }

    fn apply_lanes(&self, get: impl Fn(Wire) -> u64) -> u64 {
        match *self {
            Gate::And(a, b) => get(a) & get(b),
            Gate::Or(a, b) => get(a) | get(b),
            Gate::Xor(a, b) => get(a) ^ get(b),
            Gate::Not(a) => !get(a),
            Gate::Const(c) => {
                if c {
                    !0
                } else {
                    0
                }
            }
        }
    }
}

/// A topologically ordered gate list with declared input and output widths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    n_in: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
}

impl Circuit {
    pub fn new(n_in: usize, gates: Vec<Gate>, outputs: Vec<Wire>) -> Result<Self> {
        let check = |w: Wire, limit: usize, ctx: &str| -> Result<()> {
            match w {
                Wire::Input(i) if i >= n_in => Err(Error::shape(format!(
                    "{ctx}: input x{i} out of range for {n_in} inputs"
                ))),
                Wire::Gate(j) if j >= limit => Err(Error::shape(format!(
                    "{ctx}: reference to g{j} is not earlier"
                ))),
                _ => Ok(()),
            }
        };
        for (k, g) in gates.iter().enumerate() {
            for w in g.operands() {
                check(w, k, &format!("gate g{k}"))?;
            }
        }
        for w in &outputs {
            check(*w, gates.len(), "outputs")?;
        }
        Ok(Self {
            n_in,
            gates,
            outputs,
        })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.outputs.len()
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn eval(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.n_in {
            return Err(Error::shape(format!(
                "circuit expects {} input bits, got {}",
                self.n_in,
                x.len()
            )));
        }
        Ok(self.eval_slice(x.as_slice()))
    }

    /// Evaluation without the width check; `x` must have `n_in` bits.
    pub fn eval_slice(&self, x: &[bool]) -> BitString {
        let mut vals = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = g.apply(|w| match w {
                Wire::Input(i) => x[i],
                Wire::Gate(j) => vals[j],
            });
            vals.push(v);
        }
        self.outputs
            .iter()
            .map(|&w| match w {
                Wire::Input(i) => x[i],
                Wire::Gate(j) => vals[j],
            })
            .collect()
    }

    /// Bit-sliced evaluation of 64 inputs at once: `inputs[i]` holds input bit
    /// `i` for every lane. Returns one word per output.
    pub fn eval_lanes(&self, inputs: &[u64]) -> Vec<u64> {
        assert_eq!(inputs.len(), self.n_in);
        let mut vals: Vec<u64> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = g.apply_lanes(|w| match w {
                Wire::Input(i) => inputs[i],
                Wire::Gate(j) => vals[j],
            });
            vals.push(v);
        }
        self.outputs
            .iter()
            .map(|&w| match w {
                Wire::Input(i) => inputs[i],
                Wire::Gate(j) => vals[j],
            })
            .collect()
    }

    /// All outputs as integers (bit 0 most significant), indexed by the input
    /// read as an integer. Requires `n_in <= 24` and `n_out <= 64`.
    pub fn output_table(&self) -> Result<Vec<u64>> {
        if self.n_in > 24 || self.n_out() > 64 {
            return Err(Error::capacity(format!(
                "output table for {} inputs and {} outputs",
                self.n_in,
                self.n_out()
            )));
        }
        let total = 1u64 << self.n_in;
        let mut table = Vec::with_capacity(total as usize);
        let mut start = 0u64;
        while start < total {
            let lanes = lane_inputs(start, self.n_in);
            let outs = self.eval_lanes(&lanes);
            let count = (total - start).min(64);
            for l in 0..count {
                let mut y = 0u64;
                for w in &outs {
                    y = (y << 1) | ((w >> l) & 1);
                }
                table.push(y);
            }
            start += 64;
        }
        Ok(table)
    }

    /// Sorted, deduplicated range as integers.
    pub fn range_set(&self) -> Result<Vec<u64>> {
        let mut t = self.output_table()?;
        t.sort_unstable();
        t.dedup();
        Ok(t)
    }

    pub fn in_range_by_enumeration(&self, y: &BitString) -> Result<bool> {
        if y.len() != self.n_out() {
            return Err(Error::shape("output width mismatch"));
        }
        Ok(self.range_set()?.binary_search(&y.to_u64()).is_ok())
    }

    /// `C(x) = x ∘ x`.
    pub fn dup(n: usize) -> Self {
        let outputs = (0..2 * n).map(|i| Wire::Input(i % n)).collect();
        Self {
            n_in: n,
            gates: Vec::new(),
            outputs,
        }
    }

    /// Circuit with the given output table (as produced by
    /// [`Circuit::output_table`]), built from multiplexer trees.
    pub fn from_table(n_in: usize, n_out: usize, table: &[u64]) -> Result<Self> {
        if n_in > 16 || n_out > 64 {
            return Err(Error::capacity(format!(
                "table circuit with {n_in} inputs and {n_out} outputs"
            )));
        }
        if table.len() != 1 << n_in {
            return Err(Error::shape(format!(
                "table has {} rows, expected {}",
                table.len(),
                1u64 << n_in
            )));
        }
        let mut b = CircuitBuilder::new(n_in);
        let consts = [b.constant(false), b.constant(true)];
        let mut outputs = Vec::with_capacity(n_out);
        for o in 0..n_out {
            let mut level: Vec<Wire> = table
                .iter()
                .map(|&y| consts[((y >> (n_out - 1 - o)) & 1) as usize])
                .collect();
            for var in (0..n_in).rev() {
                level = level
                    .chunks(2)
                    .map(|pair| {
                        if pair[0] == pair[1] {
                            pair[0]
                        } else {
                            b.mux(Wire::Input(var), pair[0], pair[1])
                        }
                    })
                    .collect();
            }
            outputs.push(level[0]);
        }
        b.finish(outputs)
    }

    /// Random circuit with `gates` gates; outputs favour late gates.
    pub fn random<R: Rng + ?Sized>(n_in: usize, n_out: usize, gates: usize, rng: &mut R) -> Self {
        assert!(n_in > 0);
        let mut gs = Vec::with_capacity(gates);
        let pick = |rng: &mut R, k: usize| -> Wire {
            let r = rng.gen_range(0..n_in + k);
            if r < n_in {
                Wire::Input(r)
            } else {
                Wire::Gate(r - n_in)
            }
        };
        for k in 0..gates {
            let g = match rng.gen_range(0..16) {
                0..=3 => Gate::And(pick(rng, k), pick(rng, k)),
                4..=7 => Gate::Or(pick(rng, k), pick(rng, k)),
                8..=11 => Gate::Xor(pick(rng, k), pick(rng, k)),
                12..=14 => Gate::Not(pick(rng, k)),
                _ => Gate::Const(rng.gen()),
            };
            gs.push(g);
        }
        let outputs = (0..n_out)
            .map(|_| {
                if gates > 0 && rng.gen_bool(0.8) {
                    Wire::Gate(rng.gen_range(gates.saturating_sub(n_out.max(4))..gates))
                } else {
                    pick(rng, gates)
                }
            })
            .collect();
        Self {
            n_in,
            gates: gs,
            outputs,
        }
    }
}

/// Lane words for inputs `start .. start + 64`: lane `l` carries the integer
/// `start + l` with input 0 as its most significant bit.
pub fn lane_inputs(start: u64, n: usize) -> Vec<u64> {
    (0..n)
        .map(|i| {
            let shift = n - 1 - i;
            let mut w = 0u64;
            for l in 0..64u64 {
                w |= (((start + l) >> shift) & 1) << l;
            }
            w
        })
        .collect()
}

/// Incremental construction of circuits, including inlining of sub-circuits.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n_in: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(n_in: usize) -> Self {
        Self {
            n_in,
            gates: Vec::new(),
        }
    }

    pub fn input(&self, i: usize) -> Wire {
        assert!(i < self.n_in);
        Wire::Input(i)
    }

    pub fn push(&mut self, g: Gate) -> Wire {
        self.gates.push(g);
        Wire::Gate(self.gates.len() - 1)
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::And(a, b))
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::Or(a, b))
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::Xor(a, b))
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        self.push(Gate::Not(a))
    }

    pub fn constant(&mut self, c: bool) -> Wire {
        self.push(Gate::Const(c))
    }

    /// `sel ? b : a`.
    pub fn mux(&mut self, sel: Wire, a: Wire, b: Wire) -> Wire {
        let d = self.xor(a, b);
        let t = self.and(sel, d);
        self.xor(a, t)
    }

    /// Copies `c` with its inputs bound to `inputs`; returns its output wires.
    pub fn inline(&mut self, c: &Circuit, inputs: &[Wire]) -> Vec<Wire> {
        assert_eq!(inputs.len(), c.n_in());
        let base = self.gates.len();
        let map = |w: Wire| match w {
            Wire::Input(i) => inputs[i],
            Wire::Gate(j) => Wire::Gate(base + j),
        };
        for g in c.gates() {
            let ng = match *g {
                Gate::And(a, b) => Gate::And(map(a), map(b)),
                Gate::Or(a, b) => Gate::Or(map(a), map(b)),
                Gate::Xor(a, b) => Gate::Xor(map(a), map(b)),
                Gate::Not(a) => Gate::Not(map(a)),
                Gate::Const(v) => Gate::Const(v),
            };
            self.gates.push(ng);
        }
        c.outputs().iter().map(|&w| map(w)).collect()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn finish(self, outputs: Vec<Wire>) -> Result<Circuit> {
        Circuit::new(self.n_in, self.gates, outputs)
    }
}
