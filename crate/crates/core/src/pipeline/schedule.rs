//! Stage parameters `(n_i, T_i)` for the iterative algorithms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::encoded::Profile;
use crate::error::{Error, Result};

/// Largest bit length of any `n_i` or `T_i` the schedule will materialize.
const MAX_BITS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Track {
    /// Plain histories, `T_{i+1} = 5 T_i`.
    Sigma2,
    /// Encoded histories, `T_{i+1} = T_i^e`.
    S2,
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Track::Sigma2 => "sigma2",
            Track::S2 => "s2",
        })
    }
}

impl FromStr for Track {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma2" => Ok(Track::Sigma2),
            "s2" => Ok(Track::S2),
            other => Err(Error::param(format!(
                "unknown track {other:?} (expected sigma2 or s2)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleConfig {
    pub track: Track,
    pub profile: Profile,
    /// `n_{i+1} = n_i^gamma`.
    pub gamma: u32,
    /// `T_{i+1} = T_i^exponent` on the S2 track.
    pub t_exponent: u32,
    /// Most stages `0..=t` emitted before the cap fires.
    pub max_stages: usize,
}

impl ScheduleConfig {
    pub fn paper(track: Track) -> Self {
        Self {
            track,
            profile: Profile::Paper,
            gamma: 10,
            t_exponent: 6,
            max_stages: 64,
        }
    }

    pub fn desk(track: Track) -> Self {
        Self {
            track,
            profile: Profile::desk(),
            gamma: 2,
            t_exponent: 6,
            max_stages: 1,
        }
    }

    pub fn for_profile(track: Track, profile: Profile) -> Self {
        match profile {
            Profile::Paper => Self::paper(track),
            Profile::Desk { .. } => Self {
                profile,
                ..Self::desk(track)
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub n: BigUint,
    pub t: BigUint,
}

impl Stage {
    pub fn n_u64(&self) -> Result<u64> {
        self.n.to_u64().ok_or_else(|| {
            Error::capacity(format!(
                "n = 2^{} does not fit a machine word",
                self.n.bits()
            ))
        })
    }

    pub fn t_u64(&self) -> Result<u64> {
        self.t.to_u64().ok_or_else(|| {
            Error::capacity(format!(
                "T = 2^{} does not fit a machine word",
                self.t.bits()
            ))
        })
    }
}

/// Which rule chose the last stage `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopRule {
    /// `T_{t+1}` fell below the length bound for `n_{t+1}`.
    Length,
    /// The configured stage cap.
    Cap,
}

#[derive(Clone, Debug)]
pub struct Schedule {
    pub config: ScheduleConfig,
    pub n0: u64,
    /// Stages `0..=t+1`; the last one only fixes the proof length.
    pub stages: Vec<Stage>,
    pub t: usize,
    pub rule: StopRule,
}

impl Schedule {
    pub fn stage(&self, i: usize) -> Result<&Stage> {
        self.stages
            .get(i)
            .ok_or_else(|| Error::param(format!("stage {i} out of range (t = {})", self.t)))
    }

    pub fn n(&self, i: usize) -> Result<usize> {
        Ok(self.stage(i)?.n_u64()? as usize)
    }

    pub fn len(&self, i: usize) -> Result<u64> {
        self.stage(i)?.t_u64()
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "track: {}", self.config.track)?;
        writeln!(f, "profile: {}", self.config.profile)?;
        writeln!(f, "gamma: {}", self.config.gamma)?;
        writeln!(f, "n0: {}", self.n0)?;
        writeln!(f, "t: {}", self.t)?;
        writeln!(f, "stop_rule: {:?}", self.rule)?;
        for (i, s) in self.stages.iter().enumerate() {
            let show = |x: &BigUint| {
                if x.bits() <= 64 {
                    x.to_string()
                } else {
                    format!("~2^{:.1}", log2_big(x))
                }
            };
            writeln!(f, "stage {i}: n = {}, T = {}", show(&s.n), show(&s.t))?;
        }
        Ok(())
    }
}

/// `log2 x` for positive big integers.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap_or(0.0).log2();
    }
    let top = (x >> (bits - 53)).to_f64().unwrap_or(1.0);
    top.log2() + (bits - 53) as f64
}

fn pow_checked(x: &BigUint, e: u32) -> Result<BigUint> {
    if x.bits().saturating_mul(e as u64) > MAX_BITS {
        return Err(Error::capacity(format!(
            "schedule value 2^{}^{e} exceeds {MAX_BITS} bits",
            x.bits()
        )));
    }
    Ok(x.pow(e))
}

/// `T_0 = 2^{2 n0} · 2 n0`, then grows per track until the stop rule or cap.
pub fn schedule(n0: u64, config: &ScheduleConfig) -> Result<Schedule> {
    if n0 < 2 {
        return Err(Error::param(format!("n0 = {n0} must be at least 2")));
    }
    if config.profile == Profile::Paper && !n0.is_power_of_two() {
        return Err(Error::param(format!(
            "n0 = {n0} must be a power of two in the paper profile"
        )));
    }
    if config.max_stages == 0 || config.gamma < 2 || config.t_exponent < 2 {
        return Err(Error::param(
            "max_stages must be positive, gamma and t_exponent at least 2",
        ));
    }
    if 2 * n0 > MAX_BITS {
        return Err(Error::capacity(format!("n0 = {n0} is too large")));
    }
    let t0 = (BigUint::one() << (2 * n0)) * BigUint::from(2 * n0);
    let mut stages = vec![Stage {
        n: BigUint::from(n0),
        t: t0,
    }];
    loop {
        let i = stages.len() - 1;
        let last = &stages[i];
        let n = pow_checked(&last.n, config.gamma)?;
        let t = match config.track {
            Track::Sigma2 => &last.t * 5u32,
            Track::S2 => pow_checked(&last.t, config.t_exponent)?,
        };
        let bound = match config.track {
            Track::Sigma2 => &n * 4u32,
            Track::S2 => n.clone(),
        };
        let short = t <= bound;
        stages.push(Stage { n, t });
        if short {
            return Ok(Schedule {
                config: *config,
                n0,
                stages,
                t: i,
                rule: StopRule::Length,
            });
        }
        if i + 1 >= config.max_stages {
            return Ok(Schedule {
                config: *config,
                n0,
                stages,
                t: i,
                rule: StopRule::Cap,
            });
        }
    }
}

/// `log2 ε_i` for `i = 0..=k+1`, given `n_0..=n_{k+1}`:
/// `ε_{k+1} = 1/(100 n_{k+1})` and `ε_i = ε_{i+1} / (4 (n_i log2(1/ε_{i+1}))^τ)`.
pub fn epsilon_schedule(ns: &[BigUint], tau: f64) -> Result<Vec<f64>> {
    if ns.is_empty() || !(tau > 0.0) {
        return Err(Error::param(
            "epsilon schedule needs at least one stage and τ > 0",
        ));
    }
    let mut out = vec![0.0; ns.len()];
    let last = ns.len() - 1;
    out[last] = -(100f64.log2() + log2_big(&ns[last]));
    for i in (0..last).rev() {
        let prev = out[i + 1];
        out[i] = prev - 2.0 - tau * (log2_big(&ns[i]) + (-prev).log2());
    }
    Ok(out)
}
