//! Univariate tools: barycentric interpolation, degree tests and
//! Berlekamp-Welch decoding.

use super::field::Field;

/// Lagrange interpolation through fixed distinct nodes.
#[derive(Clone, Debug)]
pub struct Interpolator {
    field: Field,
    nodes: Vec<u64>,
    weights: Vec<u64>,
}

impl Interpolator {
    pub fn new(field: Field, nodes: &[u64]) -> Self {
        let mut denoms = Vec::with_capacity(nodes.len());
        for (i, &ti) in nodes.iter().enumerate() {
            let mut d = 1;
            for (j, &tj) in nodes.iter().enumerate() {
                if i != j {
                    d = field.mul(d, field.sub(ti, tj));
                }
            }
            denoms.push(d);
        }
        let weights = field.batch_inv(&denoms);
        Self {
            field,
            nodes: nodes.to_vec(),
            weights,
        }
    }

    pub fn nodes(&self) -> &[u64] {
        &self.nodes
    }

    /// Values of the Lagrange basis polynomials at `z`.
    pub fn basis(&self, z: u64) -> Vec<u64> {
        let f = &self.field;
        let k = self.nodes.len();
        if let Some(i) = self.nodes.iter().position(|&t| t == z) {
            let mut b = vec![0; k];
            b[i] = 1;
            return b;
        }
        let diffs: Vec<u64> = self.nodes.iter().map(|&t| f.sub(z, t)).collect();
        let mut suffix = vec![1u64; k + 1];
        for i in (0..k).rev() {
            suffix[i] = f.mul(suffix[i + 1], diffs[i]);
        }
        let mut prefix = 1u64;
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            out.push(f.mul(self.weights[i], f.mul(prefix, suffix[i + 1])));
            prefix = f.mul(prefix, diffs[i]);
        }
        out
    }

    pub fn eval(&self, values: &[u64], z: u64) -> u64 {
        let f = &self.field;
        self.basis(z)
            .iter()
            .zip(values)
            .fold(0, |acc, (&b, &v)| f.add(acc, f.mul(b, v)))
    }
}

/// Whether the points lie on a polynomial of degree at most `d`.
pub fn fits_degree(field: Field, ts: &[u64], vs: &[u64], d: usize) -> bool {
    if ts.len() <= d + 1 {
        return true;
    }
    let interp = Interpolator::new(field, &ts[..d + 1]);
    (d + 1..ts.len()).all(|i| interp.eval(&vs[..d + 1], ts[i]) == vs[i])
}

pub fn eval_coeffs(field: Field, coeffs: &[u64], z: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| field.add(field.mul(acc, z), c))
}

/// Solves `A x = b` (augmented rows) returning some solution, or `None`.
fn solve_linear(field: Field, mut rows: Vec<Vec<u64>>, unknowns: usize) -> Option<Vec<u64>> {
    let f = &field;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][col]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for c in col..=unknowns {
                    let sub = f.mul(factor, rows[r][c]);
                    rows[i][c] = f.sub(rows[i][c], sub);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| row[unknowns] != 0) {
        return None;
    }
    let mut x = vec![0; unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][unknowns];
    }
    Some(x)
}

/// Decodes a polynomial of degree `<= d` from `(ts, vs)` with at most `e`
/// wrong values. Returns its coefficients, lowest degree first.
pub fn berlekamp_welch(
    field: Field,
    ts: &[u64],
    vs: &[u64],
    d: usize,
    e: usize,
) -> Option<Vec<u64>> {
    let f = &field;
    let n = ts.len();
    if n < d + 1 + 2 * e {
        return None;
    }
    // unknowns: q_0..q_{d+e}, then e_0..e_{e-1}; E is monic of degree e
    let nq = d + e + 1;
    let unknowns = nq + e;
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(unknowns + 1);
            let mut pw = 1;
            for _ in 0..nq {
                row.push(pw);
                pw = f.mul(pw, ts[i]);
            }
            let mut pw = 1;
            for _ in 0..e {
                row.push(f.neg(f.mul(vs[i], pw)));
                pw = f.mul(pw, ts[i]);
            }
            row.push(f.mul(vs[i], pw));
            row
        })
        .collect();
    let sol = solve_linear(field, rows, unknowns)?;
    let mut q = sol[..nq].to_vec();
    let mut err: Vec<u64> = sol[nq..].to_vec();
    err.push(1);
    // long division q / err
    let mut quot = vec![0; nq.saturating_sub(e).max(1)];
    for deg in (e..nq).rev() {
        let c = q[deg];
        if c != 0 {
            quot[deg - e] = c;
            for (k, &ek) in err.iter().enumerate() {
                let idx = deg - e + k;
                q[idx] = f.sub(q[idx], f.mul(c, ek));
            }
        }
    }
    if q.iter().any(|&c| c != 0) {
        return None;
    }
    quot.truncate(d + 1);
    let agree = ts
        .iter()
        .zip(vs)
        .filter(|(&t, &v)| eval_coeffs(field, &quot, t) == v)
        .count();
    (agree + e >= n).then_some(quot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_reproduces_polynomial() {
        let f = Field::new(101).unwrap();
        let coeffs = [3, 0, 7, 1];
        let ts: Vec<u64> = (1..=4).collect();
        let vs: Vec<u64> = ts.iter().map(|&t| eval_coeffs(f, &coeffs, t)).collect();
        let it = Interpolator::new(f, &ts);
        for z in 0..101 {
            assert_eq!(it.eval(&vs, z), eval_coeffs(f, &coeffs, z));
        }
        assert!(fits_degree(f, &[1, 2, 3, 4, 5], &[1, 2, 3, 4, 5], 1));
        assert!(!fits_degree(f, &[1, 2, 3, 4, 5], &[1, 2, 3, 4, 6], 3));
    }

    #[test]
    fn decodes_with_errors() {
        let f = Field::new(641).unwrap();
        let coeffs = [5, 9, 0, 2];
        let ts: Vec<u64> = (1..=16).collect();
        let mut vs: Vec<u64> = ts.iter().map(|&t| eval_coeffs(f, &coeffs, t)).collect();
        for i in [0, 5, 9, 15, 11, 2] {
            vs[i] = (vs[i] + 17) % 641;
        }
        let e = (16 - 4) / 2;
        assert_eq!(berlekamp_welch(f, &ts, &vs, 3, e).unwrap(), coeffs);
        // one error too many for unique decoding is reported as failure or a
        // different polynomial, never a panic
        vs[7] = (vs[7] + 1) % 641;
        let _ = berlekamp_welch(f, &ts, &vs, 3, e);
    }
}
