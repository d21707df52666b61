use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use interalign::algebra::{GaussRat, GaussianRationals, MonomialOrder};
use interalign::channel::{
    build_structured, sample_exact, AnyChannel, ChannelInstance, JsonScalar, Mode, StructuredFamily,
};
use interalign::feasibility::{
    generic_feasibility, trial_system_text, Backend, ChannelSource, Consensus, GenericityConfig,
    InequalityForm, Slicing,
};
use interalign::ratesim::{
    curves_to_csv, monte_carlo_curves, parse_snr_grid, CurveConfig, RateOptions,
};
use interalign::schemes::{
    multiphase_plan, solve_3user_linear, solve_inband_linear, solve_mimo, solve_rank1_closed_form,
    verify_alignment, AlignmentSolution, LinearDiagnostics, SchemeKind, SystemKind,
    DEFAULT_MIMO_CAP,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const EXIT_USAGE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
/// `construct` wrote a solution that failed verification.
const EXIT_UNVERIFIED: u8 = 4;

/// Seed used when a sampled run gives none; it is echoed in the output.
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(
    name = "interalign",
    version,
    about = "Interactive interference alignment experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an alignment (or neutralization) system is generically solvable.
    Feasibility(FeasibilityArgs),
    /// Build and verify a coding solution.
    Construct(ConstructArgs),
    /// Finite-SNR sum-rate curves against time sharing (CSV).
    Simulate(SimulateArgs),
    /// Variable/equation counts of the multi-phase scheme.
    Plan(PlanArgs),
}

#[derive(Args, Clone)]
struct ChannelArgs {
    /// Number of users.
    #[arg(long = "K")]
    k: Option<usize>,
    /// Antennas per node.
    #[arg(long = "M", default_value_t = 1)]
    m: usize,
    /// Reverse channel G = H^T.
    #[arg(long)]
    reciprocal: bool,
    /// In-band feedback (no separate reverse channel).
    #[arg(long)]
    inband: bool,
    /// Channel JSON file instead of a sampled channel.
    #[arg(long, value_name = "FILE")]
    channel: Option<PathBuf>,
    /// Structured family: all-ones, symmetric-zero-diagonal.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct FeasibilityArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// three-phase, two-reverse, two-phase-inband, multi-phase:N.
    #[arg(long)]
    scheme: Option<String>,
    /// Zero-forcing (diagonal B) instead of alignment.
    #[arg(long)]
    neutralization: bool,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// modular (random 31-bit primes) or rational (Q(i)).
    #[arg(long, default_value = "modular")]
    backend: Backend,
    /// Wall-clock budget per trial.
    #[arg(long, default_value_t = 600)]
    budget_secs: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_reductions: u64,
    /// product or per-inequality.
    #[arg(long)]
    form: Option<String>,
    /// none, dimension or staged; defaults depend on the backend.
    #[arg(long)]
    slicing: Option<String>,
    #[arg(long)]
    lex: bool,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the first trial's polynomial system here.
    #[arg(long, value_name = "FILE")]
    dump_system: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Sample a generic exact channel (needs --seed for a non-default draw).
    #[arg(long)]
    sample: bool,
    /// User whose first coding entry is pinned to 1 in the 3-user construction.
    #[arg(long, default_value_t = 0)]
    pin: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long = "K")]
    k: usize,
    /// start:step:stop in dB.
    #[arg(long, default_value = "0:5:40")]
    snr: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reciprocal: bool,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 400)]
    iterations: usize,
    /// Count the reverse slot in the rate divisor.
    #[arg(long)]
    charge_feedback: bool,
    /// Time sharing at K-fold power in its single active slot.
    #[arg(long)]
    boosted_time_sharing: bool,
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON with per-trial detail instead of CSV.
    #[arg(long)]
    verbose: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    /// A user count or an inclusive range `a:b`.
    #[arg(long = "K", default_value = "2:12")]
    k: String,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let run = match cli.command {
        Command::Feasibility(a) => cmd_feasibility(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Plan(a) => cmd_plan(a),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        log::warn!("no --seed given; using {DEFAULT_SEED}");
        DEFAULT_SEED
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn load_channel(path: &Path) -> Result<AnyChannel> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    AnyChannel::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn all_ones(k: usize) -> Result<ChannelInstance<GaussianRationals>> {
    Ok(build_structured(&StructuredFamily::AllOnes { k })?)
}

fn mode_of(c: &ChannelArgs) -> Mode {
    if c.inband {
        Mode::InBand
    } else {
        Mode::OutOfBand
    }
}

fn cmd_feasibility(a: FeasibilityArgs) -> Result<u8> {
    let c = &a.channel;
    let scheme: SchemeKind = match &a.scheme {
        Some(s) => s.parse().map_err(anyhow::Error::msg)?,
        None if c.inband => SchemeKind::InBand,
        None => SchemeKind::ThreePhase,
    };
    let sources = [c.channel.is_some(), c.family.is_some()]
        .iter()
        .filter(|x| **x)
        .count();
    if sources > 1 {
        bail!("give at most one of --channel and --family");
    }
    let (source, seed) = if let Some(path) = &c.channel {
        let ch = load_channel(path)?;
        if let Some(k) = c.k {
            if k != ch.k() {
                bail!("--K {k} does not match the channel file (K={})", ch.k());
            }
        }
        (
            ChannelSource::Fixed(Box::new(ch)),
            c.seed.unwrap_or(DEFAULT_SEED),
        )
    } else if let Some(fam) = &c.family {
        match fam.as_str() {
            "symmetric-zero-diagonal" | "sym4" => (
                ChannelSource::SymmetricZeroDiagonal4,
                seed_or_default(c.seed),
            ),
            "all-ones" => {
                let k = c.k.context("--family all-ones needs --K")?;
                (
                    ChannelSource::Fixed(Box::new(AnyChannel::Exact(all_ones(k)?))),
                    c.seed.unwrap_or(DEFAULT_SEED),
                )
            }
            other => {
                bail!("unknown family `{other}` (expected all-ones or symmetric-zero-diagonal)")
            }
        }
    } else {
        let k = c.k.context("--K is required for sampled channels")?;
        let source = ChannelSource::Generic {
            k,
            m: c.m,
            mode: mode_of(c),
            reciprocal: c.reciprocal,
        };
        (source, seed_or_default(c.seed))
    };
    let mut cfg = GenericityConfig::new(scheme, source, seed).with_backend(a.backend);
    cfg.trials = a.trials;
    cfg.jobs = a.jobs;
    if a.neutralization {
        cfg.system = SystemKind::Neutralization;
    }
    if a.lex {
        cfg.order = MonomialOrder::Lex;
    }
    cfg.decide.budget.max_time = Some(Duration::from_secs(a.budget_secs));
    cfg.decide.budget.max_reductions = Some(a.max_reductions);
    if let Some(f) = &a.form {
        cfg.form = match f.as_str() {
            "product" => InequalityForm::Product,
            "per-inequality" => InequalityForm::PerInequality,
            other => bail!("unknown form `{other}` (expected product or per-inequality)"),
        };
    }
    if let Some(s) = &a.slicing {
        cfg.slicing = match s.as_str() {
            "none" => Slicing::None,
            "dimension" => Slicing::Dimension,
            "staged" => Slicing::Staged,
            other => bail!("unknown slicing `{other}` (expected none, dimension or staged)"),
        };
    }
    if let Some(path) = &a.dump_system {
        let text = trial_system_text(&cfg, 1)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let report = generic_feasibility(&cfg)?;
    emit(&pretty(&serde_json::to_value(&report)?), a.out.as_deref())?;
    Ok(match report.consensus {
        Consensus::Feasible => 0,
        Consensus::Infeasible => EXIT_INFEASIBLE,
        Consensus::NoConsensus | Consensus::Anomaly => EXIT_UNDECIDED,
    })
}

fn solution_output(
    ch: &ChannelInstance<GaussianRationals>,
    kind: SchemeKind,
    sol: &AlignmentSolution<GaussianRationals>,
    extra: Value,
) -> Result<(Value, bool)> {
    let report = verify_alignment(ch, kind, sol)?;
    let mut v = sol.to_json(&report);
    let obj = v.as_object_mut().expect("object");
    obj.insert("channel".into(), AnyChannel::Exact(ch.clone()).to_json());
    if let Value::Object(more) = extra {
        obj.extend(more);
    }
    Ok((v, report.passed()))
}

fn diagnostics_json(d: &LinearDiagnostics) -> Value {
    json!({ "diagnostics": d })
}

fn cmd_construct(a: ConstructArgs) -> Result<u8> {
    let c = &a.channel;
    let chosen = [c.channel.is_some(), c.family.is_some(), a.sample]
        .iter()
        .filter(|x| **x)
        .count();
    if chosen > 1 {
        bail!("give at most one channel source: --family, --sample or --channel");
    }
    let (ch, seed) = if let Some(fam) = &c.family {
        if fam != "all-ones" {
            bail!("construct supports --family all-ones");
        }
        let k = c.k.context("--family all-ones needs --K")?;
        (all_ones(k)?, None)
    } else if let Some(path) = &c.channel {
        match load_channel(path)? {
            AnyChannel::Exact(ch) => (ch, c.seed),
            AnyChannel::Float(_) => bail!("construct needs an exact channel"),
        }
    } else {
        let k = c.k.context("a sampled channel needs --K")?;
        let seed = seed_or_default(c.seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (
            sample_exact(k, c.m, mode_of(c), c.reciprocal, &mut rng)?,
            Some(seed),
        )
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(DEFAULT_SEED));
    let (value, passed) = if c.family.is_some() {
        let k = ch.k;
        let f = GaussianRationals;
        let cf = solve_rank1_closed_form(
            &f,
            &vec![GaussRat::from_int(-1); k],
            &vec![GaussRat::from_int(1); k],
            &vec![GaussRat::from_int(1); k],
        )?;
        let sol = AlignmentSolution::from_coding(&ch, SchemeKind::ThreePhase, cf.coding())?;
        let alpha = GaussianRationals::elem_json(&cf.alpha);
        solution_output(&ch, SchemeKind::ThreePhase, &sol, json!({ "alpha": alpha }))?
    } else {
        let (kind, lin) = match ch.mode {
            Mode::OutOfBand => (
                SchemeKind::ThreePhase,
                solve_3user_linear(&ch, a.pin, &mut rng)?,
            ),
            Mode::InBand if ch.m == 1 => (SchemeKind::InBand, solve_inband_linear(&ch, &mut rng)?),
            Mode::InBand => (
                SchemeKind::InBand,
                solve_mimo(&ch, DEFAULT_MIMO_CAP, &mut rng)?,
            ),
        };
        let mut extra = diagnostics_json(&lin.diagnostics);
        if let Some(s) = seed {
            extra["seed"] = json!(s);
        }
        solution_output(&ch, kind, &lin.solution, extra)?
    };
    emit(&pretty(&value), a.out.as_deref())?;
    if passed {
        Ok(0)
    } else {
        eprintln!("error: constructed solution failed verification");
        Ok(EXIT_UNVERIFIED)
    }
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8> {
    let cfg = CurveConfig {
        k: a.k,
        mode: Mode::OutOfBand,
        reciprocal: a.reciprocal,
        snr_db: parse_snr_grid(&a.snr).map_err(anyhow::Error::msg)?,
        trials: a.trials,
        seed: seed_or_default(a.seed),
        rate: RateOptions {
            restarts: a.restarts,
            iterations: a.iterations,
            charge_feedback: a.charge_feedback,
            boosted_time_sharing: a.boosted_time_sharing,
        },
        jobs: a.jobs,
    };
    let curves = monte_carlo_curves(&cfg)?;
    let text = if a.verbose {
        pretty(&json!({
            "K": cfg.k,
            "seed": cfg.seed,
            "options": cfg.rate,
            "curve": curves.points,
            "trials": curves.details,
        }))
    } else {
        curves_to_csv(&curves.points)
    };
    emit(&text, a.out.as_deref())?;
    Ok(0)
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .with_context(|| format!("bad user count `{x}`"))
    };
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => (parse(s)?, parse(s)?),
    };
    if lo < 2 || hi < lo {
        bail!("need 2 <= a <= b in --K a:b, got {s}");
    }
    Ok((lo, hi))
}

fn cmd_plan(a: PlanArgs) -> Result<u8> {
    let (lo, hi) = parse_range(&a.k)?;
    let mut out = String::from("K,N,N_v,N_e,conjectured_dof\n");
    for k in lo..=hi {
        let p = multiphase_plan(k);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.k, p.phases, p.n_v, p.n_e, p.conjectured_dof
        ));
    }
    emit(&out, None)?;
    Ok(0)
}
