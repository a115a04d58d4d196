use rand::Rng;

use super::field::Field;
use super::poly::fits_degree;
use super::{distinct_elements, random_point, FieldOracle};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct LdtConfig {
    /// Skip the field-size precondition.
    pub relaxed: bool,
    pub max_lines: usize,
}

impl Default for LdtConfig {
    fn default() -> Self {
        Self {
            relaxed: false,
            max_lines: 4096,
        }
    }
}

/// Axis-parallel lines tested per call: `ceil(ln 3 / δ)` with
/// `δ = 3 m^2 (d + 1) / p`, capped.
pub fn ldt_lines(field: Field, m: usize, d: usize, config: &LdtConfig) -> usize {
    let delta = 3.0 * (m * m) as f64 * (d + 1) as f64 / field.modulus() as f64;
    let lines = (3f64.ln() / delta.min(1.0)).ceil() as usize;
    lines.clamp(1, config.max_lines.max(1))
}

/// Tests that `g` has degree at most `d` in each variable. Polynomials of
/// that degree are always accepted.
pub fn ldt<O, R>(g: &O, d: usize, config: &LdtConfig, rng: &mut R) -> Result<bool>
where
    O: FieldOracle + ?Sized,
    R: Rng + ?Sized,
{
    let field = g.field();
    let m = g.dim();
    let p = field.modulus() as u128;
    if !config.relaxed && p < 20 * ((d + 1) as u128).pow(2) * (m as u128).pow(2) {
        return Err(Error::param(format!(
            "p = {p} is below 20(d+1)^2 m^2 for d = {d}, m = {m}"
        )));
    }
    if p < d as u128 + 2 {
        return Err(Error::param(format!(
            "p = {p} leaves no room for a degree {d} line test"
        )));
    }
    let mut unit = vec![0; m];
    for _ in 0..ldt_lines(field, m, d, config) {
        let x = random_point(field, m, rng);
        let a = rng.gen_range(0..m);
        unit[a] = 1;
        // points x + t e_a, so t ranges over offsets from x_a
        let ts = distinct_elements(field, d + 2, rng);
        let vs = g.eval_line(&x, &unit, &ts);
        unit[a] = 0;
        if !fits_degree(field, &ts, &vs, d) {
            return Ok(false);
        }
    }
    Ok(true)
}
