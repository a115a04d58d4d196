use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rm::smallest_prime_at_least;

/// How the field size is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile {
    /// `p` is the least prime at least `20 (log T)^5`; total length `T^6`.
    Paper,
    /// `p` is the least prime meeting every tester precondition, scaled by `slack`.
    Desk { slack: f64 },
}

impl Profile {
    pub fn desk() -> Self {
        Profile::Desk { slack: 1.0 }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Paper => f.write_str("paper"),
            Profile::Desk { .. } => f.write_str("desk"),
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::desk()),
            other => Err(Error::param(format!("unknown profile {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EncParams {
    pub t: u64,
    /// `log2 T`, the grid side.
    pub delta: usize,
    /// Least `m` with `Δ^m >= 5T`.
    pub m: usize,
    pub p: u64,
    pub profile: Profile,
}

impl EncParams {
    pub fn new(t: u64, profile: Profile) -> Result<Self> {
        if !t.is_power_of_two() || t < 4 {
            return Err(Error::param(format!(
                "T = {t} must be a power of two, at least 4"
            )));
        }
        let delta = t.trailing_zeros() as usize;
        let mut m = 1usize;
        while (delta as u128).pow(m as u32) < 5 * t as u128 {
            m += 1;
        }
        let p = match profile {
            Profile::Paper => smallest_prime_at_least(20 * (delta as u64).pow(5))?,
            Profile::Desk { slack } => {
                if !(slack >= 1.0 && slack.is_finite()) {
                    return Err(Error::param(format!("slack {slack} must be at least 1")));
                }
                let (d, m64) = (delta as u64, m as u64);
                let need = (20 * d * d * m64 * m64)
                    .max(3 * m64 * (d - 1) + 1)
                    .max(2 * m64 * d + 1);
                smallest_prime_at_least((need as f64 * slack).ceil() as u64)?
            }
        };
        Ok(Self {
            t,
            delta,
            m,
            p,
            profile,
        })
    }

    /// Total degree bound of the codeword, `m(Δ-1)`.
    pub fn total_degree(&self) -> usize {
        self.m * (self.delta - 1)
    }

    /// Stated length of the encoded history: `T^6` for the paper profile
    /// (saturating), the actual length otherwise.
    pub fn declared_len(&self) -> u128 {
        match self.profile {
            Profile::Paper => (self.t as u128).checked_pow(6).unwrap_or(u128::MAX),
            Profile::Desk { .. } => self.actual_len(),
        }
    }

    /// Stop fields plus the Boolean codeword, saturating.
    pub fn actual_len(&self) -> u128 {
        let sw = self.t.trailing_zeros() as u128;
        let b = crate::bits::ceil_log2(self.p) as u128;
        (self.p as u128)
            .checked_pow(self.m as u32)
            .and_then(|pts| pts.checked_mul(b))
            .and_then(|bits| bits.checked_add(2 * sw))
            .unwrap_or(u128::MAX)
    }
}

pub fn enc_params(t: u64, profile: Profile) -> Result<EncParams> {
    EncParams::new(t, profile)
}
