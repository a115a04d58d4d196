//! Seeded trial loops for the statistical harnesses.

use std::thread;

use crate::error::{Error, Result};
use crate::rm::corrupt::mix64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub successes: u64,
    pub trials: u64,
}

impl Tally {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            successes: self.successes + other.successes,
            trials: self.trials + other.trials,
        }
    }

    /// Wilson score interval at `z` standard deviations.
    pub fn wilson(&self, z: f64) -> (f64, f64) {
        if self.trials == 0 {
            return (0.0, 1.0);
        }
        let n = self.trials as f64;
        let p = self.rate();
        let denom = 1.0 + z * z / n;
        let mid = (p + z * z / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
        ((mid - half).max(0.0), (mid + half).min(1.0))
    }
}

/// Seed of trial `i` under master seed `seed`.
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    mix64(seed ^ mix64(i.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Runs `trial(trial_seed(seed, i))` for `i < trials` on `jobs` threads.
/// The tally does not depend on `jobs`.
pub fn run_trials<F>(trials: u64, seed: u64, jobs: usize, trial: F) -> Result<Tally>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    let jobs = jobs.clamp(1, trials.max(1) as usize) as u64;
    let run = |lo: u64, hi: u64| -> Result<Tally> {
        let mut t = Tally::default();
        for i in lo..hi {
            t.trials += 1;
            t.successes += trial(trial_seed(seed, i))? as u64;
        }
        Ok(t)
    };
    if jobs == 1 {
        return run(0, trials);
    }
    let chunk = trials.div_ceil(jobs);
    thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let run = &run;
                s.spawn(move || run((j * chunk).min(trials), ((j + 1) * chunk).min(trials)))
            })
            .collect();
        handles.into_iter().try_fold(Tally::default(), |acc, h| {
            let t = h
                .join()
                .map_err(|_| Error::Invariant("trial thread panicked".into()))??;
            Ok(acc.merge(t))
        })
    })
}
