use std::fs;

use batsat::{lbool, Callbacks, ClauseKind, Lit, Solver, SolverInterface, SolverOpts, Var};

use super::{
    check_ggm, check_output_width, check_prefix, BackendKind, Cnf, OracleConfig, PreimageOracle,
};
use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Stops the solver once it has learnt `budget` clauses.
struct Budget {
    learnt: u64,
    budget: Option<u64>,
}

impl Callbacks for Budget {
    fn on_new_clause(&mut self, _c: &[Lit], src: ClauseKind) {
        if matches!(src, ClauseKind::Learnt) {
            self.learnt += 1;
        }
    }

    fn stop(&self) -> bool {
        self.budget.is_some_and(|b| self.learnt >= b)
    }
}

/// Tseitin-encodes each query and hands it to a CDCL solver.
#[derive(Debug, Clone)]
pub struct SatOracle {
    config: OracleConfig,
    queries: u64,
}

impl SatOracle {
    pub fn new(config: OracleConfig) -> Self {
        Self { config, queries: 0 }
    }

    fn solve(&mut self, cnf: &Cnf) -> Result<bool> {
        self.queries += 1;
        if let Some(dir) = &self.config.dimacs_dir {
            fs::create_dir_all(dir)?;
            fs::write(
                dir.join(format!("query_{:06}.cnf", self.queries)),
                cnf.to_dimacs(),
            )?;
        }
        let mut solver = Solver::new(
            SolverOpts::default(),
            Budget {
                learnt: 0,
                budget: self.config.sat_conflict_budget,
            },
        );
        let vars: Vec<Var> = (0..cnf.num_vars())
            .map(|_| solver.new_var_default())
            .collect();
        let mut buf = Vec::new();
        for clause in cnf.clauses() {
            buf.clear();
            buf.extend(
                clause
                    .iter()
                    .map(|&l| Lit::new(vars[l.unsigned_abs() as usize - 1], l > 0)),
            );
            if !solver.add_clause_reuse(&mut buf) {
                return Ok(false);
            }
        }
        let r = solver.solve_limited(&[]);
        if r == lbool::TRUE {
            Ok(true)
        } else if r == lbool::FALSE {
            Ok(false)
        } else {
            Err(Error::ResourceExhausted(format!(
                "SAT budget of {:?} learnt clauses exhausted",
                self.config.sat_conflict_budget
            )))
        }
    }
}

impl Default for SatOracle {
    fn default() -> Self {
        Self::new(OracleConfig::default())
    }
}

/// CNF for `∃x ⊒ prefix: C(x) = y`.
pub fn preimage_cnf(c: &Circuit, y: &BitString, prefix: &[bool]) -> Cnf {
    let mut cnf = Cnf::new();
    let inputs: Vec<i32> = (0..c.n_in()).map(|_| cnf.new_var()).collect();
    for (&lit, &b) in inputs.iter().zip(prefix) {
        cnf.fix(lit, b);
    }
    let outs = cnf.encode_circuit(c, &inputs);
    for (lit, b) in outs.into_iter().zip(y.iter()) {
        cnf.fix(lit, b);
    }
    cnf
}

impl PreimageOracle for SatOracle {
    fn has_preimage(&mut self, c: &Circuit, y: &BitString, prefix: &[bool]) -> Result<bool> {
        check_output_width(c, y)?;
        check_prefix(c, prefix)?;
        let cnf = preimage_cnf(c, y, prefix);
        self.solve(&cnf)
    }

    fn ggm_has_preimage(
        &mut self,
        c: &Circuit,
        t: u64,
        f: &BitString,
        prefix: &[bool],
    ) -> Result<bool> {
        let shape = check_ggm(c, t, f)?;
        check_prefix(c, prefix)?;
        let n = c.n_in();
        let mut cnf = Cnf::new();
        let root: Vec<i32> = (0..n).map(|_| cnf.new_var()).collect();
        for (&lit, &b) in root.iter().zip(prefix) {
            cnf.fix(lit, b);
        }
        let mut level = vec![root];
        for _ in 0..shape.k {
            let mut next = Vec::with_capacity(level.len() * 2);
            for node in &level {
                let out = cnf.encode_circuit(c, node);
                next.push(out[..n].to_vec());
                next.push(out[n..].to_vec());
            }
            level = next;
        }
        for (pos, lit) in level.iter().flatten().enumerate().take(t as usize) {
            cnf.fix(*lit, f.get(pos));
        }
        self.solve(&cnf)
    }

    fn queries(&self) -> u64 {
        self.queries
    }

    fn kind(&self) -> BackendKind {
        BackendKind::Sat
    }
}
