mod harness;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use avoidkit::circuit::Circuit;
use avoidkit::encoded::Profile;
use avoidkit::korten::{history_build, history_output, pi1_check, pi1_verify_all, HistoryLayout};
use avoidkit::oracle::{backend, BackendKind, OracleConfig, PreimageOracle};
use avoidkit::pipeline::{
    family_by_name, schedule, solve_arbitrary, solve_uniform, McspHardTables, ScheduleConfig,
    Track, UniformConfig,
};
use avoidkit::{BitString, Error, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "avoidkit",
    version,
    about = "Range avoidance via Korten's reduction"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct OracleArgs {
    /// Preimage backend: exhaustive or sat.
    #[arg(long, default_value = "exhaustive")]
    backend: BackendKind,
    /// Widest input the exhaustive backend enumerates.
    #[arg(long, default_value_t = 24)]
    max_enum_width: usize,
    /// Conflict budget per SAT call; 0 means unlimited.
    #[arg(long, default_value_t = 1_000_000)]
    sat_budget: u64,
}

impl OracleArgs {
    fn build(&self) -> Result<Box<dyn PreimageOracle>> {
        if self.max_enum_width == 0 {
            return Err(Error::param("--max-enum-width must be positive"));
        }
        let config = OracleConfig {
            max_enum_width: self.max_enum_width,
            sat_conflict_budget: (self.sat_budget > 0).then_some(self.sat_budget),
            dimacs_dir: None,
        };
        Ok(backend(self.backend, config))
    }
}

#[derive(Args, Clone, Copy)]
pub(crate) struct TrialArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for the trial loop.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find a string outside the range of a circuit or circuit family.
    Avoid(AvoidArgs),
    /// Check a history against the local checks.
    VerifyHistory(VerifyArgs),
    /// Print a stage schedule.
    Schedule(ScheduleArgs),
    /// Reed-Muller tester harnesses.
    Rm {
        #[command(subcommand)]
        cmd: harness::RmCmd,
    },
    /// Selector success rate against adversarial candidates.
    SelectTrials(harness::SelectArgs),
    /// Majority derandomizer harness.
    Derand(harness::DerandArgs),
}

#[derive(Args)]
struct AvoidArgs {
    /// Circuit file; `C: n -> 2n` with `--f`, or `n -> n+1` with `--arbitrary`.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// The string `f` (binary, or a file holding binary or `tt` text).
    #[arg(long)]
    f: Option<String>,
    /// Expected length of `f`.
    #[arg(long = "T")]
    t: Option<u64>,
    /// Use the hard-table solver for a one-bit-stretching circuit.
    #[arg(long)]
    arbitrary: bool,
    /// Size bound the hard tables must exceed.
    #[arg(long, default_value_t = 3)]
    hardness: usize,
    /// Built-in family: dup or random.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 2)]
    n0: u64,
    #[arg(long, default_value = "desk")]
    profile: Profile,
    #[arg(long, default_value = "sigma2")]
    track: Track,
    #[arg(long)]
    max_stages: Option<usize>,
    #[arg(long)]
    gamma: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the certificate bundle.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    f: String,
    /// History file (`tt` text or binary).
    #[arg(long)]
    history: String,
    /// Run every check.
    #[arg(long)]
    all: bool,
    /// Run the single check named by this witness.
    #[arg(long, conflicts_with = "all")]
    witness: Option<String>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long, default_value_t = 2)]
    n0: u64,
    #[arg(long, default_value = "paper")]
    profile: Profile,
    #[arg(long, default_value = "sigma2")]
    track: Track,
    #[arg(long)]
    max_stages: Option<usize>,
    #[arg(long)]
    gamma: Option<u32>,
}

pub(crate) fn kv(key: &str, value: impl std::fmt::Display) {
    println!("{key}: {value}");
}

pub(crate) fn seed_or_fresh(seed: Option<u64>) -> u64 {
    let s = seed.unwrap_or_else(rand::random);
    kv("seed", s);
    s
}

/// Binary text, or the contents of a file holding binary or `tt` text.
fn read_bits(arg: &str) -> Result<BitString> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        fs::read_to_string(path)?
    } else {
        arg.to_string()
    };
    let text = text.trim();
    if text.starts_with("tt") {
        BitString::from_tt(text)
    } else {
        BitString::parse_binary(text)
    }
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    fs::read_to_string(path)?.parse()
}

fn schedule_config(
    track: Track,
    profile: Profile,
    max_stages: Option<usize>,
    gamma: Option<u32>,
) -> Result<ScheduleConfig> {
    let mut cfg = ScheduleConfig::for_profile(track, profile);
    if let Some(m) = max_stages {
        cfg.max_stages = m;
    }
    if let Some(g) = gamma {
        cfg.gamma = g;
    }
    Ok(cfg)
}

/// Exit code 4 when a check fails.
pub(crate) fn verdict(ok: bool, what: &str) -> Result<()> {
    kv("verified", ok);
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(format!("{what} failed")))
    }
}

fn cmd_avoid(a: AvoidArgs) -> Result<()> {
    let mut oracle = a.oracle.build()?;
    if let Some(name) = &a.family {
        let seed = seed_or_fresh(a.seed);
        let family = family_by_name(name, seed)?;
        let mut cfg =
            UniformConfig::new(schedule_config(a.track, a.profile, a.max_stages, a.gamma)?);
        cfg.seed = seed;
        let sol = solve_uniform(oracle.as_mut(), family.as_ref(), a.n0, &cfg)?;
        kv("family", family.name());
        kv("profile", a.profile);
        kv("track", a.track);
        kv("t", sol.certificate.schedule.t);
        kv("k", sol.k);
        kv("result", &sol.z);
        for line in &sol.certificate.log {
            kv("log", line);
        }
        if let Some(dir) = &a.out {
            sol.certificate.write_dir(dir)?;
            kv("certificate", dir.display());
        }
        return verdict(true, "avoidance");
    }
    let path = a
        .circuit
        .as_ref()
        .ok_or_else(|| Error::param("give --circuit or --family"))?;
    let c = read_circuit(path)?;
    if a.arbitrary {
        let seed = seed_or_fresh(a.seed);
        let mut src = McspHardTables::new(a.hardness, seed);
        let sol = solve_arbitrary(oracle.as_mut(), &c, &mut src)?;
        kv("table", sol.table.to_tt());
        kv("doubled", &sol.doubled);
        kv("result", &sol.y);
        if let Some(dir) = &a.out {
            fs::create_dir_all(dir)?;
            fs::write(
                dir.join("result.txt"),
                format!("profile: {}\ny: {}\n", a.profile, sol.y),
            )?;
            fs::write(dir.join("verify.log"), sol.log.join("\n") + "\n")?;
            kv("certificate", dir.display());
        }
        return verdict(!c.in_range_by_enumeration(&sol.y)?, "avoidance");
    }
    let f = read_bits(
        a.f.as_deref()
            .ok_or_else(|| Error::param("--f is required with --circuit"))?,
    )?;
    if let Some(t) = a.t {
        if t != f.len() as u64 {
            return Err(Error::shape(format!("--T {t} but f has {} bits", f.len())));
        }
    }
    if oracle.in_range_ggm(&c, f.len() as u64, &f)? {
        kv("result", "none");
        return verdict(false, "f lies in the GGM range; avoidance");
    }
    let (_, h) = history_build(oracle.as_mut(), &c, &f)?;
    let layout = HistoryLayout::for_circuit(&c, f.len() as u64)?;
    let y = history_output(&h, &layout)?;
    kv("result", &y);
    let outside = if c.n_in() <= 20 {
        !c.in_range_by_enumeration(&y)?
    } else {
        !oracle.has_preimage(&c, &y, &[])?
    };
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("history_0.tt"), h.to_tt() + "\n")?;
        fs::write(
            dir.join("result.txt"),
            format!("profile: {}\ny: {y}\n", a.profile),
        )?;
        fs::write(
            dir.join("verify.log"),
            format!("outside range: {outside}\n"),
        )?;
        kv("certificate", dir.display());
    }
    verdict(outside, "avoidance")
}

fn cmd_verify(a: VerifyArgs) -> Result<()> {
    let c = read_circuit(&a.circuit)?;
    let f = read_bits(&a.f)?;
    let h = read_bits(&a.history)?;
    let layout = HistoryLayout::for_circuit(&c, f.len() as u64)?;
    let accepted = match &a.witness {
        Some(w) => pi1_check(&c, &layout, &f, &h, &BitString::parse_binary(w)?)?,
        None => {
            let out = pi1_verify_all(&c, &layout, &f, &h)?;
            kv("checks", out.checks);
            if let Some(chk) = out.failed {
                kv("failed", format!("{chk:?}"));
            }
            out.accepted
        }
    };
    println!("{}", if accepted { "accepted" } else { "rejected" });
    verdict(accepted, "history check")
}

fn cmd_schedule(a: ScheduleArgs) -> Result<()> {
    let s = schedule(
        a.n0,
        &schedule_config(a.track, a.profile, a.max_stages, a.gamma)?,
    )?;
    print!("{s}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Avoid(a) => cmd_avoid(a),
        Cmd::VerifyHistory(a) => cmd_verify(a),
        Cmd::Schedule(a) => cmd_schedule(a),
        Cmd::Rm { cmd } => harness::rm(cmd),
        Cmd::SelectTrials(a) => harness::select_trials(a),
        Cmd::Derand(a) => harness::derand(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
