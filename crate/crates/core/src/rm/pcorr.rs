use std::cell::RefCell;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::poly::{berlekamp_welch, eval_coeffs, fits_degree, Interpolator};
use super::{distinct_nonzero, FieldOracle};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct PcorrConfig {
    /// Points sampled per line, as a multiple of `d + 1`.
    pub points_factor: usize,
    /// Hard cap on lines per amplified call.
    pub max_runs: usize,
}

impl Default for PcorrConfig {
    fn default() -> Self {
        Self {
            points_factor: 8,
            max_runs: 4096,
        }
    }
}

fn check(field: Field, d: usize) -> Result<()> {
    if 3 * d as u128 >= field.modulus() as u128 {
        return Err(Error::param(format!(
            "degree {d} is not below p/3 for p = {}",
            field.modulus()
        )));
    }
    Ok(())
}

fn line_points(field: Field, d: usize, config: &PcorrConfig) -> usize {
    (config.points_factor.max(1) * (d + 1)).min(field.modulus() as usize - 1)
}

/// Lower bound on the success probability of one line when at most a quarter
/// of all points are corrupted (Chebyshev on the pairwise independent line
/// points).
pub fn pcorr_run_bound(field: Field, d: usize, config: &PcorrConfig) -> f64 {
    let n = line_points(field, d, config) as f64;
    let e = ((n - d as f64 - 1.0) / 2.0).floor();
    let gap = e + 1.0 - n / 4.0;
    if gap <= 0.0 {
        return 0.0;
    }
    (1.0 - (3.0 * n / 16.0) / (gap * gap)).max(0.0)
}

fn once_unchecked<O, R>(
    g: &O,
    d: usize,
    x: &[u64],
    config: &PcorrConfig,
    rng: &mut R,
) -> Option<u64>
where
    O: FieldOracle + ?Sized,
    R: Rng + ?Sized,
{
    let field = g.field();
    let p = field.modulus();
    let y: Vec<u64> = loop {
        let y: Vec<u64> = (0..x.len()).map(|_| rng.gen_range(0..p)).collect();
        if y.iter().any(|&c| c != 0) {
            break y;
        }
    };
    let n = line_points(field, d, config);
    let ts = distinct_nonzero(field, n, rng);
    let vs = g.eval_line(x, &y, &ts);
    if fits_degree(field, &ts, &vs, d) {
        let k = n.min(d + 1);
        return Some(Interpolator::new(field, &ts[..k]).eval(&vs[..k], 0));
    }
    let e = n.saturating_sub(d + 1) / 2;
    berlekamp_welch(field, &ts, &vs, d, e).map(|coeffs| eval_coeffs(field, &coeffs, 0))
}

/// One self-correction attempt along a random line through `x`; `None` when
/// the line is too noisy to decode.
pub fn pcorr_once<O, R>(
    g: &O,
    d: usize,
    x: &[u64],
    config: &PcorrConfig,
    rng: &mut R,
) -> Result<Option<u64>>
where
    O: FieldOracle + ?Sized,
    R: Rng + ?Sized,
{
    check(g.field(), d)?;
    if x.len() != g.dim() {
        return Err(Error::shape(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            g.dim()
        )));
    }
    Ok(once_unchecked(g, d, x, config, rng))
}

/// Lead one value must hold over all other outcomes before it is returned.
fn required_lead(q: f64, err: f64) -> usize {
    let err = err.clamp(1e-300, 0.5);
    // weak single-line bounds (tiny fields) still get a long walk
    let q = q.max(0.6);
    ((1.0 / err).ln() / (q / (1.0 - q)).ln()).ceil().max(1.0) as usize
}

fn amplified<O, R>(g: &O, d: usize, x: &[u64], err: f64, config: &PcorrConfig, rng: &mut R) -> u64
where
    O: FieldOracle + ?Sized,
    R: Rng + ?Sized,
{
    let lead = required_lead(pcorr_run_bound(g.field(), d, config), err);
    let mut votes: HashMap<u64, usize> = HashMap::new();
    for runs in 1..=config.max_runs.max(1) {
        if let Some(v) = once_unchecked(g, d, x, config, rng) {
            let c = votes.entry(v).or_insert(0);
            *c += 1;
            if 2 * *c >= runs + lead {
                return v;
            }
        }
    }
    votes
        .into_iter()
        .max_by_key(|&(v, c)| (c, std::cmp::Reverse(v)))
        .map_or(0, |(v, _)| v)
}

/// Self-corrected value at `x` with failure probability about `err`,
/// repeating single-line attempts until one answer leads all others.
pub fn pcorr<O, R>(
    g: &O,
    d: usize,
    x: &[u64],
    err: f64,
    config: &PcorrConfig,
    rng: &mut R,
) -> Result<u64>
where
    O: FieldOracle + ?Sized,
    R: Rng + ?Sized,
{
    check(g.field(), d)?;
    if x.len() != g.dim() {
        return Err(Error::shape(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            g.dim()
        )));
    }
    Ok(amplified(g, d, x, err, config, rng))
}

/// Presents an oracle through the self-corrector.
pub struct SelfCorrected<O> {
    inner: O,
    d: usize,
    err: f64,
    config: PcorrConfig,
    rng: RefCell<ChaCha8Rng>,
}

impl<O: FieldOracle> SelfCorrected<O> {
    pub fn new(inner: O, d: usize, err: f64, config: PcorrConfig, seed: u64) -> Result<Self> {
        check(inner.field(), d)?;
        Ok(Self {
            inner,
            d,
            err,
            config,
            rng: RefCell::new(ChaCha8Rng::seed_from_u64(seed)),
        })
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: FieldOracle> FieldOracle for SelfCorrected<O> {
    fn field(&self) -> Field {
        self.inner.field()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[u64]) -> u64 {
        amplified(
            &self.inner,
            self.d,
            x,
            self.err,
            &self.config,
            &mut *self.rng.borrow_mut(),
        )
    }
}
