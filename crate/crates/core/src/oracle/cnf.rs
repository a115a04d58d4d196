use std::fmt::Write;

use crate::circuit::{Circuit, Gate, Wire};

/// Clause database with DIMACS literal conventions (variables from 1,
/// negation by sign).
#[derive(Clone, Debug, Default)]
pub struct Cnf {
    vars: u32,
    clauses: Vec<Vec<i32>>,
    truth: Option<i32>,
}

impl Cnf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> u32 {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn new_var(&mut self) -> i32 {
        self.vars += 1;
        self.vars as i32
    }

    pub fn add(&mut self, clause: Vec<i32>) {
        self.clauses.push(clause);
    }

    fn truth(&mut self) -> i32 {
        if let Some(t) = self.truth {
            return t;
        }
        let t = self.new_var();
        self.add(vec![t]);
        self.truth = Some(t);
        t
    }

    pub fn fix(&mut self, lit: i32, value: bool) {
        self.add(vec![if value { lit } else { -lit }]);
    }

    /// Tseitin encoding of `c` over the given input literals; returns the
    /// output literals.
    pub fn encode_circuit(&mut self, c: &Circuit, inputs: &[i32]) -> Vec<i32> {
        assert_eq!(inputs.len(), c.n_in());
        let mut lits: Vec<i32> = Vec::with_capacity(c.size());
        for g in c.gates() {
            let get = |w: Wire, lits: &[i32]| match w {
                Wire::Input(i) => inputs[i],
                Wire::Gate(j) => lits[j],
            };
            let lit = match *g {
                Gate::Not(a) => -get(a, &lits),
                Gate::Const(v) => {
                    let t = self.truth();
                    if v {
                        t
                    } else {
                        -t
                    }
                }
                Gate::And(a, b) => {
                    let (a, b, o) = (get(a, &lits), get(b, &lits), self.new_var());
                    self.add(vec![-o, a]);
                    self.add(vec![-o, b]);
                    self.add(vec![o, -a, -b]);
                    o
                }
                Gate::Or(a, b) => {
                    let (a, b, o) = (get(a, &lits), get(b, &lits), self.new_var());
                    self.add(vec![o, -a]);
                    self.add(vec![o, -b]);
                    self.add(vec![-o, a, b]);
                    o
                }
                Gate::Xor(a, b) => {
                    let (a, b, o) = (get(a, &lits), get(b, &lits), self.new_var());
                    self.add(vec![-o, a, b]);
                    self.add(vec![-o, -a, -b]);
                    self.add(vec![o, -a, b]);
                    self.add(vec![o, a, -b]);
                    o
                }
            };
            lits.push(lit);
        }
        c.outputs()
            .iter()
            .map(|&w| match w {
                Wire::Input(i) => inputs[i],
                Wire::Gate(j) => lits[j],
            })
            .collect()
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(s, "{l} ").unwrap();
            }
            s.push_str("0\n");
        }
        s
    }

    /// Brute-force satisfiability; for cross-checking tiny formulas.
    pub fn brute_force_sat(&self) -> bool {
        assert!(self.vars <= 24);
        (0u64..1 << self.vars).any(|a| {
            self.clauses.iter().all(|c| {
                c.iter().any(|&l| {
                    let v = (a >> (l.unsigned_abs() - 1)) & 1 == 1;
                    v == (l > 0)
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_header_and_terminators() {
        let mut cnf = Cnf::new();
        let a = cnf.new_var();
        let b = cnf.new_var();
        cnf.add(vec![a, -b]);
        cnf.fix(b, true);
        assert_eq!(cnf.to_dimacs(), "p cnf 2 2\n1 -2 0\n2 0\n");
        assert!(cnf.brute_force_sat());
        cnf.fix(a, false);
        assert!(!cnf.brute_force_sat());
    }
}
