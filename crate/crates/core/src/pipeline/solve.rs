//! Top-level avoidance solvers. Every answer is checked outside the range by
//! enumeration before it is returned.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use super::chain::{FactString, Sigma2Verifier};
use super::family::Family;
use super::schedule::{epsilon_schedule, schedule, Schedule, ScheduleConfig, Track};
use super::tower::{SelectTower, TowerLevel};
use crate::bits::BitString;
use crate::circuit::{mcsp_brute, stretch_double, Circuit, McspCaps};
use crate::encoded::{EncodedHistory, EncodedLayout, SelectConfig};
use crate::error::{Error, Result};
use crate::korten::{history_build, history_output, korten_run, pi1_verify_all, HistoryLayout};
use crate::oracle::PreimageOracle;
use crate::rm::corrupt::mix64;

/// Largest circuit input width whose range the solvers enumerate.
const MAX_VERIFY_WIDTH: usize = 20;

#[derive(Clone, Debug)]
pub struct UniformConfig {
    pub schedule: ScheduleConfig,
    pub select: SelectConfig,
    /// `τ` of the ε-schedule.
    pub tau: f64,
    /// On the S2 track, also read the answer back through a selector tower.
    pub tower_check: bool,
    pub seed: u64,
}

impl UniformConfig {
    pub fn new(schedule: ScheduleConfig) -> Self {
        Self {
            schedule,
            select: SelectConfig::default(),
            tau: 3.0,
            tower_check: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StageRecord {
    pub stage: usize,
    pub n: usize,
    pub t: u64,
    pub in_range: bool,
    /// Plain history of `Korten(C_{n_i}, f_i)`, when the stage was out of range.
    pub history: Option<BitString>,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub schedule: Schedule,
    pub family: String,
    pub k: usize,
    pub z: BitString,
    pub stages: Vec<StageRecord>,
    /// Honest first proof: a seed for stage `k + 1`, or the raw history.
    pub pi1: BitString,
    pub log: Vec<String>,
}

impl Certificate {
    /// Writes `schedule.txt`, `history_<i>.tt`, `proof.tt`, `result.txt` and `verify.log`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut s = String::new();
        writeln!(s, "family: {}", self.family).unwrap();
        write!(s, "{}", self.schedule).unwrap();
        writeln!(s, "k: {}", self.k).unwrap();
        for r in &self.stages {
            writeln!(s, "stage {} in_range: {}", r.stage, r.in_range).unwrap();
        }
        fs::write(dir.join("schedule.txt"), s)?;
        for r in &self.stages {
            if let Some(h) = &r.history {
                fs::write(
                    dir.join(format!("history_{}.tt", r.stage)),
                    h.to_tt() + "\n",
                )?;
            }
        }
        fs::write(dir.join("proof.tt"), self.pi1.to_tt() + "\n")?;
        fs::write(
            dir.join("result.txt"),
            format!(
                "profile: {}\nk: {}\nz: {}\n",
                self.schedule.config.profile, self.k, self.z
            ),
        )?;
        fs::write(dir.join("verify.log"), self.log.join("\n") + "\n")?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct UniformSolution {
    pub k: usize,
    pub z: BitString,
    pub certificate: Certificate,
}

fn verify_outside(c: &Circuit, y: &BitString, what: &str, log: &mut Vec<String>) -> Result<()> {
    if c.n_in() > MAX_VERIFY_WIDTH {
        return Err(Error::capacity(format!(
            "cannot enumerate the range of a {}-input circuit",
            c.n_in()
        )));
    }
    if c.in_range_by_enumeration(y)? {
        return Err(Error::Invariant(format!(
            "{what} {y} lies in the range of its circuit"
        )));
    }
    log.push(format!(
        "{what} {y} outside range: verified by enumerating 2^{} inputs",
        c.n_in()
    ));
    Ok(())
}

/// Finds the last stage `k` with `f_k` outside the GGM range and returns
/// `Korten(C_{n_k}, f_k)` with a certificate.
pub fn solve_uniform(
    oracle: &mut dyn PreimageOracle,
    family: &dyn Family,
    n0: u64,
    config: &UniformConfig,
) -> Result<UniformSolution> {
    let sched = schedule(n0, &config.schedule)?;
    let base = FactString::new(n0 as usize)?.materialize();
    match config.schedule.track {
        Track::Sigma2 => solve_sigma2(oracle, family, sched, base),
        Track::S2 => solve_s2(oracle, family, sched, base, config),
    }
}

fn solve_sigma2(
    oracle: &mut dyn PreimageOracle,
    family: &dyn Family,
    sched: Schedule,
    base: BitString,
) -> Result<UniformSolution> {
    let mut log = Vec::new();
    let mut strings = vec![base];
    let mut circuits = Vec::new();
    let mut lens = Vec::new();
    let mut stages = Vec::new();
    let mut next_circuit = None;
    for i in 0..=sched.t {
        let (n, t) = (sched.n(i)?, sched.len(i)?);
        let c = family.circuit(n)?;
        let f = &strings[i];
        let in_range = oracle.in_range_ggm(&c, t, f)?;
        log.push(format!(
            "stage {i}: n = {n}, T = {t}, in GGM range: {in_range}"
        ));
        if in_range {
            if i == 0 {
                return Err(Error::Invariant(
                    "the base string lies in the GGM range".into(),
                ));
            }
            stages.push(StageRecord {
                stage: i,
                n,
                t,
                in_range,
                history: None,
            });
            next_circuit = Some(c);
            break;
        }
        let (_, h) = history_build(oracle, &c, f)?;
        stages.push(StageRecord {
            stage: i,
            n,
            t,
            in_range,
            history: Some(h.clone()),
        });
        strings.push(h);
        circuits.push(c);
        lens.push(t);
    }
    let k = circuits.len() - 1;
    let layout = HistoryLayout::for_circuit(&circuits[k], lens[k])?;
    let h = &strings[k + 1];
    let z = history_output(h, &layout)?;
    log.push(format!("k = {k}, z = {z}"));
    verify_outside(&circuits[k], &z, "z", &mut log)?;

    let replay = pi1_verify_all(&circuits[k], &layout, &strings[k], h)?;
    if !replay.accepted {
        return Err(Error::Invariant(format!(
            "history of stage {k} fails check {:?}",
            replay.failed
        )));
    }
    log.push(format!("history {k}: all {} checks pass", replay.checks));

    let (pi1, seeded) = match next_circuit {
        Some(c) => {
            let t = sched.len(k + 1)?;
            let seed = oracle
                .ggm_preimage(&c, t, h)?
                .ok_or_else(|| Error::Invariant("in-range stage has no GGM seed".into()))?;
            (seed, Some((c, t)))
        }
        None => (h.clone(), None),
    };
    let verifier = Sigma2Verifier::new(sched.n0 as usize, circuits, &lens, seeded)?;
    let run = verifier.enumerate(&pi1)?;
    if run.output.as_ref() != Some(&z) {
        return Err(Error::Invariant(format!(
            "verifier rejects the honest proof: {:?}",
            run.failed
        )));
    }
    log.push(format!(
        "sigma2 verifier, every second proof: accepted ({} checks), output {z}",
        run.checks
    ));

    let certificate = Certificate {
        schedule: sched,
        family: family.name(),
        k,
        z: z.clone(),
        stages,
        pi1,
        log,
    };
    Ok(UniformSolution { k, z, certificate })
}

fn solve_s2(
    oracle: &mut dyn PreimageOracle,
    family: &dyn Family,
    sched: Schedule,
    base: BitString,
    config: &UniformConfig,
) -> Result<UniformSolution> {
    if sched.t > 0 {
        return Err(Error::capacity(format!(
            "the S2 track materializes only stage 0; schedule has t = {} (set max_stages = 1)",
            sched.t
        )));
    }
    let mut log = Vec::new();
    let (n, t) = (sched.n(0)?, sched.len(0)?);
    let c = family.circuit(n)?;
    let in_range = oracle.in_range_ggm(&c, t, &base)?;
    log.push(format!(
        "stage 0: n = {n}, T = {t}, in GGM range: {in_range}"
    ));
    if in_range {
        return Err(Error::Invariant(
            "the base string lies in the GGM range".into(),
        ));
    }
    let run = korten_run(oracle, &c, &base)?;
    let z = run
        .y
        .clone()
        .ok_or_else(|| Error::Invariant("Korten completed on an out-of-range string".into()))?;
    log.push(format!("k = 0, z = {z}"));
    verify_outside(&c, &z, "z", &mut log)?;

    let plain = HistoryLayout::for_circuit(&c, t)?.serialize(&run.record)?;
    let layout = Arc::new(EncodedLayout::for_circuit(&c, t, config.schedule.profile)?);
    log.push(format!(
        "encoded history: p = {}, Δ = {}, m = {}, {} bits",
        layout.params.p,
        layout.params.delta,
        layout.params.m,
        layout.len()
    ));
    if config.tower_check {
        let honest = EncodedHistory::from_record(layout.clone(), &run.record)?;
        let eps = epsilon_schedule(
            &[sched.stages[0].n.clone(), sched.stages[1].n.clone()],
            config.tau,
        )?[1]
            .exp2();
        let base_view = FactString::new(n)?;
        let tower = SelectTower::new(
            &base_view,
            vec![TowerLevel {
                circuit: &c,
                layout: &layout,
                candidates: [&honest, &honest],
                eps,
            }],
            config.select,
            config.seed,
        )?;
        let out = tower.output()?;
        if out.as_ref() != Some(&z) {
            return Err(Error::Invariant(format!(
                "selector tower reads {out:?}, expected {z}"
            )));
        }
        log.push(format!(
            "selector tower at ε = {eps:.3e}: output {z} ({} queries)",
            tower.queries()
        ));
    }
    let stages = vec![StageRecord {
        stage: 0,
        n,
        t,
        in_range,
        history: Some(plain),
    }];
    let certificate = Certificate {
        schedule: sched,
        family: family.name(),
        k: 0,
        z: z.clone(),
        stages,
        pi1: BitString::new(),
        log,
    };
    Ok(UniformSolution {
        k: 0,
        z,
        certificate,
    })
}

/// Supplier of truth tables of length `2^m` certified hard.
pub trait HardTableSource {
    fn next_table(&mut self, m: usize) -> Result<BitString>;

    fn describe(&self) -> String;
}

/// Pseudo-random tables that no circuit of at most `size` gates computes,
/// certified by exhaustive circuit search.
#[derive(Clone, Debug)]
pub struct McspHardTables {
    pub size: usize,
    pub caps: McspCaps,
    pub attempts: usize,
    seed: u64,
    counter: u64,
}

impl McspHardTables {
    pub fn new(size: usize, seed: u64) -> Self {
        Self {
            size,
            caps: McspCaps {
                max_arity: 4,
                max_size: size.max(1),
            },
            attempts: 256,
            seed,
            counter: 0,
        }
    }
}

impl HardTableSource for McspHardTables {
    fn next_table(&mut self, m: usize) -> Result<BitString> {
        if m > 6 {
            return Err(Error::capacity(format!(
                "tables of 2^{m} bits exceed the search"
            )));
        }
        for _ in 0..self.attempts {
            self.counter += 1;
            let x = mix64(self.seed ^ mix64(self.counter));
            let tt = BitString::from_u64(x, 64).slice(0, 1 << m);
            if !mcsp_brute(&tt, self.size, self.caps)? {
                return Ok(tt);
            }
        }
        Err(Error::Dependency(format!(
            "no table of 2^{m} bits avoids size-{} circuits",
            self.size
        )))
    }

    fn describe(&self) -> String {
        format!("mcsp-certified (no circuit of <= {} gates)", self.size)
    }
}

#[derive(Clone, Debug)]
pub struct ArbitrarySolution {
    /// Outside `Range(C)`.
    pub y: BitString,
    /// Outside the range of the doubled circuit.
    pub doubled: BitString,
    /// The hard table fed to Korten's reduction.
    pub table: BitString,
    pub log: Vec<String>,
}

/// `y ∉ Range(C)` for `C: n -> n+1`, via the doubled circuit and a hard table.
pub fn solve_arbitrary(
    oracle: &mut dyn PreimageOracle,
    c: &Circuit,
    source: &mut dyn HardTableSource,
) -> Result<ArbitrarySolution> {
    let stretch = stretch_double(c)?;
    let d = stretch.doubled();
    let n = c.n_in();
    let m = (4u32).max(crate::bits::ceil_log2(4 * n as u64)) as usize;
    let t = 1u64 << m;
    let mut log = vec![format!(
        "C: {n} -> {}, doubled to {n} -> {}; table length {t}",
        n + 1,
        2 * n
    )];
    for _ in 0..64 {
        let f = source.next_table(m)?;
        if oracle.in_range_ggm(d, t, &f)? {
            log.push(format!("table {} lies in the GGM range; next", f.to_tt()));
            continue;
        }
        log.push(format!("table {} from {}", f.to_tt(), source.describe()));
        let run = korten_run(oracle, d, &f)?;
        let doubled = run
            .y
            .ok_or_else(|| Error::Invariant("Korten completed on an out-of-range table".into()))?;
        verify_outside(d, &doubled, "doubled output", &mut log)?;
        let y = stretch.backmap(&doubled, oracle)?;
        verify_outside(c, &y, "y", &mut log)?;
        return Ok(ArbitrarySolution {
            y,
            doubled,
            table: f,
            log,
        });
    }
    Err(Error::Dependency(
        "every supplied table lies in the GGM range".into(),
    ))
}
