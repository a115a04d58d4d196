use std::fmt;
use std::str::FromStr;

use super::{Circuit, Gate, Wire};
use crate::error::{Error, Result};

fn fmt_wire(w: Wire) -> String {
    match w {
        Wire::Input(i) => format!("x{i}"),
        Wire::Gate(j) => format!("g{j}"),
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit {} {}", self.n_in(), self.n_out())?;
        for (k, g) in self.gates().iter().enumerate() {
            let body = match *g {
                Gate::And(a, b) => format!("AND {} {}", fmt_wire(a), fmt_wire(b)),
                Gate::Or(a, b) => format!("OR {} {}", fmt_wire(a), fmt_wire(b)),
                Gate::Xor(a, b) => format!("XOR {} {}", fmt_wire(a), fmt_wire(b)),
                Gate::Not(a) => format!("NOT {}", fmt_wire(a)),
                Gate::Const(false) => "CONST0".to_string(),
                Gate::Const(true) => "CONST1".to_string(),
            };
            writeln!(f, "g{k} = {body}")?;
        }
        let outs: Vec<String> = self.outputs().iter().map(|&w| fmt_wire(w)).collect();
        if outs.is_empty() {
            writeln!(f, "outputs")
        } else {
            writeln!(f, "outputs {}", outs.join(" "))
        }
    }
}

fn parse_wire(tok: &str, line: usize, n_in: usize, limit: usize) -> Result<Wire> {
    let (kind, idx) = tok.split_at(tok.len().min(1));
    let idx: usize = idx
        .parse()
        .map_err(|_| Error::parse(line, format!("bad reference {tok:?}")))?;
    match kind {
        "x" if idx < n_in => Ok(Wire::Input(idx)),
        "x" => Err(Error::parse(line, format!("input {tok} out of range"))),
        "g" if idx < limit => Ok(Wire::Gate(idx)),
        "g" => Err(Error::parse(
            line,
            format!("reference {tok} does not precede its use"),
        )),
        _ => Err(Error::parse(line, format!("bad reference {tok:?}"))),
    }
}

impl FromStr for Circuit {
    type Err = Error;

    /// Parses the line format; blank lines and `#` comments are skipped.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty circuit text"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "circuit" {
            return Err(Error::parse(hline, "expected `circuit <n_in> <n_out>`"));
        }
        let n_in: usize = h[1].parse().map_err(|_| Error::parse(hline, "bad n_in"))?;
        let n_out: usize = h[2].parse().map_err(|_| Error::parse(hline, "bad n_out"))?;

        let mut gates = Vec::new();
        for (ln, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks[0] == "outputs" {
                let outs = toks[1..]
                    .iter()
                    .map(|t| parse_wire(t, ln, n_in, gates.len()))
                    .collect::<Result<Vec<_>>>()?;
                if outs.len() != n_out {
                    return Err(Error::parse(
                        ln,
                        format!("header declares {n_out} outputs, found {}", outs.len()),
                    ));
                }
                return Circuit::new(n_in, gates, outs)
                    .map_err(|e| Error::parse(ln, e.to_string()));
            }
            let k = gates.len();
            if toks.len() < 3 || toks[0] != format!("g{k}") || toks[1] != "=" {
                return Err(Error::parse(ln, format!("expected `g{k} = <KIND> ...`")));
            }
            let ops: Vec<Wire> = toks[3..]
                .iter()
                .map(|t| parse_wire(t, ln, n_in, k))
                .collect::<Result<_>>()?;
            let arity = |n: usize| -> Result<()> {
                if ops.len() == n {
                    Ok(())
                } else {
                    Err(Error::parse(
                        ln,
                        format!("{} takes {n} operands, found {}", toks[2], ops.len()),
                    ))
                }
            };
            let g = match toks[2] {
                "AND" => arity(2).map(|_| Gate::And(ops[0], ops[1]))?,
                "OR" => arity(2).map(|_| Gate::Or(ops[0], ops[1]))?,
                "XOR" => arity(2).map(|_| Gate::Xor(ops[0], ops[1]))?,
                "NOT" => arity(1).map(|_| Gate::Not(ops[0]))?,
                "CONST0" => arity(0).map(|_| Gate::Const(false))?,
                "CONST1" => arity(0).map(|_| Gate::Const(true))?,
                other => return Err(Error::parse(ln, format!("unknown gate kind {other:?}"))),
            };
            gates.push(g);
        }
        Err(Error::parse(
            text.lines().count().max(1),
            "missing `outputs` line",
        ))
    }
}
