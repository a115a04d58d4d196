//! Statistical harnesses behind `rm`, `select-trials` and `derand`.

use std::sync::Arc;

use avoidkit::bits::BitOracle;
use avoidkit::circuit::Circuit;
use avoidkit::encoded::{
    enc_history_build, select_bit, Candidate, EncodedHistory, Profile, SelectConfig,
};
use avoidkit::oracle::ExhaustiveOracle;
use avoidkit::pipeline::derand_majority;
use avoidkit::rm::corrupt::{mix64, RandomFunction, SlabCorrupted};
use avoidkit::rm::{
    comp, ldt, pcorr_once, CompConfig, Field, FieldOracle, LdtConfig, PcorrConfig, RmCodeword,
    RmParams,
};
use avoidkit::stats::{run_trials, Tally};
use avoidkit::{BitString, Error, Result};
use clap::{Args, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{kv, seed_or_fresh, verdict, TrialArgs};

#[derive(Subcommand)]
pub enum RmCmd {
    /// Low-degree test on exact codewords or random functions.
    Ldt(LdtArgs),
    /// Self-correction under a quarter of corrupted points.
    Pcorr(PcorrArgs),
    /// First differing grid point of two codewords.
    Comp(CompArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum LdtMode {
    Exact,
    Far,
}

#[derive(Args)]
pub struct LdtArgs {
    #[arg(long, default_value_t = 11527)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    d: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, value_enum, default_value = "exact")]
    mode: LdtMode,
    /// Skip the field-size precondition.
    #[arg(long)]
    relaxed: bool,
    #[command(flatten)]
    run: TrialArgs,
}

#[derive(Args)]
pub struct PcorrArgs {
    #[arg(long, default_value_t = 11527)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    d: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[command(flatten)]
    run: TrialArgs,
}

#[derive(Args)]
pub struct CompArgs {
    #[arg(long, default_value_t = 11527)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Per-variable degree; the grid is `{0..delta}^m`.
    #[arg(long, default_value_t = 3)]
    delta: usize,
    /// First message over the grid: digits, or comma-separated values.
    #[arg(long = "msgA", requires = "msg_b")]
    msg_a: Option<String>,
    #[arg(long = "msgB")]
    msg_b: Option<String>,
    /// Random trials against the brute-force answer (when no messages are given).
    #[arg(long, default_value_t = 500)]
    trials: u64,
    #[command(flatten)]
    run: TrialArgs,
}

fn field_params(p: u64, delta: usize, m: usize) -> Result<(Field, Arc<RmParams>)> {
    let field = Field::new(p)?;
    Ok((field, Arc::new(RmParams::new(field, delta, m)?)))
}

fn random_word<R: Rng>(params: &Arc<RmParams>, rng: &mut R) -> Result<RmCodeword> {
    let p = params.field().modulus();
    let msg = (0..params.grid_size())
        .map(|_| rng.gen_range(0..p))
        .collect();
    RmCodeword::new(params.clone(), msg)
}

fn report(t: Tally, threshold: f64, what: &str) -> Result<()> {
    kv("trials", t.trials);
    kv("successes", t.successes);
    kv("rate", format!("{:.4}", t.rate()));
    kv("threshold", format!("{threshold:.4}"));
    verdict(t.rate() >= threshold, what)
}

fn rm_ldt(a: LdtArgs) -> Result<()> {
    let seed = seed_or_fresh(a.run.seed);
    let (field, params) = field_params(a.p, a.d + 1, a.m)?;
    let cfg = LdtConfig {
        relaxed: a.relaxed,
        ..LdtConfig::default()
    };
    let t = run_trials(a.trials, seed, a.run.jobs, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        match a.mode {
            LdtMode::Exact => ldt(&random_word(&params, &mut rng)?, a.d, &cfg, &mut rng),
            LdtMode::Far => Ok(!ldt(
                &RandomFunction::new(field, a.m, rng.gen()),
                a.d,
                &cfg,
                &mut rng,
            )?),
        }
    })?;
    match a.mode {
        LdtMode::Exact => {
            kv("mode", "exact");
            kv("rejections", t.trials - t.successes);
            report(t, 1.0, "acceptance of exact codewords")
        }
        LdtMode::Far => {
            kv("mode", "far");
            report(t, 2.0 / 3.0 - 0.1, "rejection of random functions")
        }
    }
}

fn rm_pcorr(a: PcorrArgs) -> Result<()> {
    let seed = seed_or_fresh(a.run.seed);
    let (field, params) = field_params(a.p, a.d + 1, a.m)?;
    let d = a.m * a.d;
    let cfg = PcorrConfig::default();
    let t = run_trials(a.trials, seed, a.run.jobs, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let word = random_word(&params, &mut rng)?;
        let noise = RandomFunction::new(field, a.m, rng.gen());
        let g = SlabCorrupted::quarter(&word, noise);
        let x: Vec<u64> = (0..a.m).map(|_| rng.gen_range(0..a.p)).collect();
        Ok(pcorr_once(&g, d, &x, &cfg, &mut rng)? == Some(word.eval(&x)))
    })?;
    report(t, 2.0 / 3.0 - 0.1, "self-correction")
}

fn parse_message(s: &str, p: u64) -> Result<Vec<u64>> {
    let parts: Vec<&str> = if s.contains(',') {
        s.split(',').collect()
    } else {
        s.split("").filter(|c| !c.is_empty()).collect()
    };
    parts
        .iter()
        .map(|t| match t.trim().parse::<u64>() {
            Ok(v) if v < p => Ok(v),
            _ => Err(Error::param(format!("bad field element {t:?}"))),
        })
        .collect()
}

fn show_point(w: &Option<Vec<u64>>) -> String {
    match w {
        Some(w) => w.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
        None => "none".into(),
    }
}

fn rm_comp(a: CompArgs) -> Result<()> {
    let (_, params) = field_params(a.p, a.delta + 1, a.m)?;
    let cfg = CompConfig::default();
    if let (Some(ma), Some(mb)) = (&a.msg_a, &a.msg_b) {
        let n = params.grid_size() as usize;
        let (ma, mb) = (parse_message(ma, a.p)?, parse_message(mb, a.p)?);
        if ma.len() != n || mb.len() != n {
            return Err(Error::shape(format!("messages need {n} values each")));
        }
        let seed = seed_or_fresh(a.run.seed);
        let (f, g) = (
            RmCodeword::new(params.clone(), ma)?,
            RmCodeword::new(params.clone(), mb)?,
        );
        let w = comp(&f, &g, a.delta, &cfg, &mut ChaCha8Rng::seed_from_u64(seed))?;
        kv("w", show_point(&w));
        println!("w = {}", show_point(&w));
        return Ok(());
    }
    let seed = seed_or_fresh(a.run.seed);
    let t = run_trials(a.trials, seed, a.run.jobs, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let f = random_word(&params, &mut rng)?;
        let mut msg = f.message().to_vec();
        let n = msg.len();
        let mut first = n;
        for _ in 0..rng.gen_range(1..=3) {
            let q = rng.gen_range(0..n);
            msg[q] = (msg[q] + rng.gen_range(1..a.p)) % a.p;
            first = first.min(q);
        }
        let g = RmCodeword::new(params.clone(), msg)?;
        let expect = params.grid_point(first as u64);
        Ok(comp(&f, &g, a.delta, &cfg, &mut rng)? == Some(expect))
    })?;
    report(
        t,
        0.9 - 0.05,
        "agreement with the lexicographically first difference",
    )
}

pub fn rm(cmd: RmCmd) -> Result<()> {
    match cmd {
        RmCmd::Ldt(a) => rm_ldt(a),
        RmCmd::Pcorr(a) => rm_pcorr(a),
        RmCmd::Comp(a) => rm_comp(a),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Adversary {
    /// A well-formed history naming a valid but not lexicographically first preimage.
    WrongPreimage,
    /// A random low-degree codeword with valid stop fields.
    LowDegree,
    Both,
}

#[derive(Args)]
pub struct SelectArgs {
    #[arg(long, default_value_t = 500)]
    trials: u64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, value_enum, default_value = "both")]
    adversary: Adversary,
    #[command(flatten)]
    run: TrialArgs,
}

pub fn select_trials(a: SelectArgs) -> Result<()> {
    let seed = seed_or_fresh(a.run.seed);
    // C(00) = C(01) = 1111, C(10) = 0101, C(11) = 1010.
    let c = Circuit::from_table(2, 4, &[0b1111, 0b1111, 0b0101, 0b1010])?;
    let f = BitString::parse_binary("01011111")?;
    let (rec, honest) =
        enc_history_build(&mut ExhaustiveOracle::default(), &c, &f, Profile::desk())?;
    let layout = honest.layout().clone();
    let mut forged = rec.clone();
    forged.set_label(1, 1, Some(BitString::parse_binary("01")?));
    let wrong = EncodedHistory::from_record(layout.clone(), &forged)?;
    let config = SelectConfig::default();
    kv("circuit", "2 -> 4, collapsing 00 and 01");
    kv("f", &f);
    kv("eps", a.eps);
    let t = run_trials(a.trials, seed, a.run.jobs, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let low;
        let fake: &dyn Candidate = match (a.adversary, rng.gen_bool(0.5)) {
            (Adversary::WrongPreimage, _) | (Adversary::Both, true) => &wrong,
            _ => {
                let k = layout.shape.k as u64;
                let i = rng.gen_range(0..k);
                let stop = layout.stop_bits((i as u32, rng.gen_range(0..1u64 << i)));
                low = EncodedHistory::from_parts(
                    layout.clone(),
                    stop,
                    random_word(layout.rm(), &mut rng)?,
                )?;
                &low
            }
        };
        let i = match rng.gen_range(0..3) {
            0 => rng.gen_range(0..layout.stop_len()),
            1 => layout.message_bit_index(rng.gen_range(0..layout.message_len())) as u64,
            _ => rng.gen_range(layout.stop_len()..honest.len()),
        };
        let pair: [&dyn Candidate; 2] = if s & 1 == 0 {
            [&honest, fake]
        } else {
            [fake, &honest]
        };
        let out = select_bit(&f, pair, &c, &layout, i, a.eps, &config, &mut rng)?;
        Ok(out.bit == honest.bit(i)?)
    })?;
    report(t, 1.0 - a.eps - 0.03, "selection")
}

#[derive(Args)]
pub struct DerandArgs {
    /// Seeds per side.
    #[arg(long, default_value_t = 32)]
    m: usize,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    /// Fraction of seeds on which the verifier answers correctly.
    #[arg(long, default_value_t = 0.9)]
    correct: f64,
    /// Seed width.
    #[arg(long, default_value_t = 16)]
    width: usize,
    #[command(flatten)]
    run: TrialArgs,
}

pub fn derand(a: DerandArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&a.correct) || a.m == 0 || a.width == 0 || a.width > 64 {
        return Err(Error::param(
            "need 0 <= correct <= 1, m >= 1, 1 <= width <= 64",
        ));
    }
    let seed = seed_or_fresh(a.run.seed);
    let z = BitString::parse_binary("1011")?;
    let cut = (a.correct * u64::MAX as f64) as u64;
    let t = run_trials(a.trials, seed, a.run.jobs, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let salt: u64 = rng.gen();
        let us: Vec<BitString> = (0..a.m)
            .map(|_| BitString::from_u64(rng.gen(), a.width))
            .collect();
        let vs: Vec<BitString> = (0..a.m as u64)
            .map(|j| BitString::from_u64(j.wrapping_mul(0x9e37), a.width))
            .collect();
        let v = |_: &(), _: &(), r: &BitString| {
            let h = mix64(r.to_u64() ^ salt);
            Ok(Some(if h <= cut {
                z.clone()
            } else {
                BitString::from_u64(h, 8)
            }))
        };
        Ok(derand_majority(v, a.width, (&(), &us), (&(), &vs))? == Some(z.clone()))
    })?;
    kv("m", a.m);
    report(t, 0.95, "majority")
}
