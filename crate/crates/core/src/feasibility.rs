//! Feasibility verdicts for alignment systems and the multi-trial
//! genericity protocol.

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    buchberger_with, contains_unit, AlgebraError, Budget, Field, GaussianRationals, GroebnerConfig,
    MonomialOrder, PolyRing, Polynomial, PrimeField, RandomElem, Strategy,
};
use crate::channel::{
    build_structured, random_gauss_rat, reduce_mod_p, sample_exact, sample_modular, AnyChannel,
    ChannelError, ChannelInstance, Mode, StructuredFamily,
};
use crate::schemes::{
    build_alignment_system, build_neutralization_system, AlignmentSystem, SchemeError, SchemeKind,
    SystemKind,
};

#[derive(Debug, thiserror::Error)]
pub enum FeasibilityError {
    #[error("system still has {0} inequalities; apply rabinowitsch first")]
    InequalitiesPresent(usize),
    #[error("system has no inequalities")]
    NoInequalities,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Feasible,
    Infeasible,
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Gaussian rationals.
    Rational,
    /// A random 31-bit prime per trial.
    #[default]
    Modular,
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rational" | "qi" | "q(i)" => Ok(Backend::Rational),
            "modular" | "fp" | "f_p" => Ok(Backend::Modular),
            _ => Err(format!(
                "unknown backend {s:?} (expected rational or modular)"
            )),
        }
    }
}

/// How inequalities become equalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityForm {
    /// One auxiliary variable: `t * prod(g) - 1`.
    Product,
    /// One auxiliary variable per inequality: `t_j * g_j - 1`.
    #[default]
    PerInequality,
}

/// Random slices added before deciding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Slicing {
    None,
    /// [`add_dimension_slices`] only.
    Dimension,
    /// First the restricted subsystem of [`add_restricting_slices`]; if it
    /// shows no solution, the dimension-sliced system decides.
    #[default]
    Staged,
}

/// Which system produced a trial's verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Restricted,
    Full,
}

/// Slices on the non-feedback slots in the restricted stage: one fixes the
/// scale, one picks a point on the remaining line of solutions.
pub const RESTRICTED_TAIL_SLICES: usize = 2;

/// About 1.6 GB of modular matrix entries.
pub const DEFAULT_MATRIX_ENTRIES: usize = 100_000_000;

#[derive(Clone, Debug)]
pub struct DecideConfig {
    pub budget: Budget,
    pub strategy: Strategy,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            budget: Budget {
                max_basis: None,
                max_reductions: Some(1_000_000),
                max_time: Some(Duration::from_secs(600)),
                max_matrix_entries: Some(DEFAULT_MATRIX_ENTRIES),
            },
            strategy: Strategy::Batched,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub outcome: Outcome,
    /// Field description, e.g. `F_2147483647`.
    pub backend: String,
    pub basis_size: usize,
    pub reductions: u64,
    pub max_basis: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Replaces every inequality `g != 0` by equalities, adding auxiliary
/// variables at the end of the ring.
pub fn rabinowitsch_with<F: Field>(
    system: &AlignmentSystem<F>,
    form: InequalityForm,
) -> AlignmentSystem<F> {
    let nineq = system.inequalities.len();
    let names: Vec<String> = match form {
        InequalityForm::Product => vec![fresh_name(&system.ring, "t")],
        InequalityForm::PerInequality => (1..=nineq)
            .map(|j| fresh_name(&system.ring, &format!("t{j}")))
            .collect(),
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = system.ring.extended(&refs);
    let n = system.ring.nvars();
    let map: Vec<usize> = (0..n).collect();
    let lift = |p: &Polynomial<F>| p.embed(&ring, &map);
    let mut equalities: Vec<Polynomial<F>> = system.equalities.iter().map(lift).collect();
    if nineq > 0 {
        match form {
            InequalityForm::Product => {
                let prod = system
                    .inequalities
                    .iter()
                    .map(lift)
                    .fold(ring.var(n), |acc, g| &acc * &g);
                equalities.push(&prod - &ring.one());
            }
            InequalityForm::PerInequality => {
                for (j, g) in system.inequalities.iter().enumerate() {
                    equalities.push(&(&ring.var(n + j) * &lift(g)) - &ring.one());
                }
            }
        }
    }
    AlignmentSystem {
        ring,
        equalities,
        inequalities: Vec::new(),
        ..system.clone()
    }
}

/// Single-variable form `t * prod(g) - 1`.
pub fn rabinowitsch<F: Field>(system: &AlignmentSystem<F>) -> AlignmentSystem<F> {
    rabinowitsch_with(system, InequalityForm::Product)
}

fn fresh_name<F: Field>(ring: &PolyRing<F>, base: &str) -> String {
    let mut name = base.to_string();
    while ring.var_index(&name).is_some() {
        name.push('_');
    }
    name
}

fn random_affine<F: RandomElem, R: Rng + ?Sized>(
    ring: &std::sync::Arc<PolyRing<F>>,
    vars: std::ops::Range<usize>,
    rng: &mut R,
) -> Polynomial<F> {
    let f = &ring.field;
    let mut l = ring.constant(f.neg(&f.random_nonzero_elem(rng)));
    for v in vars {
        l = &l + &ring.var(v).scale(&f.random_nonzero_elem(rng));
    }
    l
}

/// Appends `max(0, n_v - n_e)` random affine hyperplanes in the coding
/// variables. Every component of the solution set has dimension at least
/// `n_v - n_e`, so for all but a measure-zero set of coefficients the sliced
/// system is solvable exactly when the original one is. The result is
/// expected to be zero-dimensional.
pub fn add_dimension_slices<F: RandomElem, R: Rng + ?Sized>(
    system: &AlignmentSystem<F>,
    rng: &mut R,
) -> AlignmentSystem<F> {
    let count = system.coding_vars.saturating_sub(system.equalities.len());
    let mut out = system.clone();
    for _ in 0..count {
        out.equalities
            .push(random_affine(&system.ring, 0..system.coding_vars, rng));
    }
    out
}

/// Coding slots that multiply the reverse channel (`D1` for three-phase,
/// `D1, D2` for two-reverse). Given them, the equalities are linear in the
/// remaining slots.
pub fn feedback_slots(scheme: SchemeKind) -> usize {
    match scheme {
        SchemeKind::ThreePhase => 1,
        SchemeKind::TwoReverse => 2,
        _ => 0,
    }
}

/// Restricts the system with the same number of slices as
/// [`add_dimension_slices`], but all except `tail` of them involve only the
/// feedback slots and the rest only the other slots. This is a subsystem: a
/// solution of it solves the original, while its emptiness proves nothing.
/// It is usually much cheaper because the sparse slices cut the
/// feedback-slot variety and the linear fibres over it separately.
pub fn add_restricting_slices<F: RandomElem, R: Rng + ?Sized>(
    system: &AlignmentSystem<F>,
    tail: usize,
    rng: &mut R,
) -> AlignmentSystem<F> {
    let head = feedback_slots(system.scheme) * system.k * system.m * system.m;
    if head == 0 {
        return add_dimension_slices(system, rng);
    }
    let count = system.coding_vars.saturating_sub(system.equalities.len());
    let tail = tail.min(count);
    let mut out = system.clone();
    for i in 0..count {
        let range = if i < count - tail {
            0..head
        } else {
            head..system.coding_vars
        };
        out.equalities.push(random_affine(&system.ring, range, rng));
    }
    out
}

/// Runs Buchberger and reads off the verdict: a constant in the basis means
/// the variety is empty.
pub fn decide<F: Field>(
    system: &AlignmentSystem<F>,
    cfg: &DecideConfig,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    if !system.inequalities.is_empty() {
        return Err(FeasibilityError::InequalitiesPresent(
            system.inequalities.len(),
        ));
    }
    let backend = system.ring.field.describe();
    let gens: Vec<_> = system
        .equalities
        .iter()
        .filter(|p| !p.is_zero())
        .cloned()
        .collect();
    if gens.is_empty() {
        return Ok(FeasibilityVerdict {
            outcome: Outcome::Feasible,
            backend,
            basis_size: 0,
            reductions: 0,
            max_basis: 0,
            elapsed: Duration::ZERO,
        });
    }
    let gcfg = GroebnerConfig {
        budget: cfg.budget.clone(),
        reduce: true,
        stop_on_unit: true,
        strategy: cfg.strategy,
    };
    let out = buchberger_with(&gens, &gcfg)?;
    let stats = out.stats().clone();
    let (outcome, basis_size) = match out.basis() {
        None => (Outcome::BudgetExhausted, 0),
        Some(b) if contains_unit(b) => (Outcome::Infeasible, b.len()),
        Some(b) => (Outcome::Feasible, b.len()),
    };
    Ok(FeasibilityVerdict {
        outcome,
        backend,
        basis_size,
        reductions: stats.reductions,
        max_basis: stats.max_basis,
        elapsed: stats.elapsed,
    })
}

/// Which channels the protocol draws.
#[derive(Clone, Debug)]
pub enum ChannelSource {
    /// I.i.d. generic entries.
    Generic {
        k: usize,
        m: usize,
        mode: Mode,
        reciprocal: bool,
    },
    /// Random members of a structured family (only the symmetric
    /// zero-diagonal four-user family is randomized).
    SymmetricZeroDiagonal4,
    /// The same exact channel every trial (reduced modulo each trial's prime
    /// under the modular backend).
    Fixed(Box<AnyChannel>),
}

#[derive(Clone, Debug)]
pub struct GenericityConfig {
    pub scheme: SchemeKind,
    pub system: SystemKind,
    pub source: ChannelSource,
    pub trials: usize,
    pub backend: Backend,
    pub decide: DecideConfig,
    pub form: InequalityForm,
    pub slicing: Slicing,
    pub order: MonomialOrder,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Backend {
    /// Random slices and batched reduction pay off over F_p; over Q(i) the
    /// slice coefficients inflate every later coefficient, so rational runs
    /// reduce the plain system pair by pair.
    pub fn default_slicing(self) -> Slicing {
        match self {
            Backend::Rational => Slicing::None,
            Backend::Modular => Slicing::Staged,
        }
    }

    pub fn default_strategy(self) -> Strategy {
        match self {
            Backend::Rational => Strategy::Pairwise,
            Backend::Modular => Strategy::Batched,
        }
    }
}

impl GenericityConfig {
    pub fn new(scheme: SchemeKind, source: ChannelSource, seed: u64) -> Self {
        GenericityConfig {
            scheme,
            system: SystemKind::Alignment,
            source,
            trials: 5,
            backend: Backend::Modular,
            decide: DecideConfig::default(),
            form: InequalityForm::PerInequality,
            slicing: Slicing::Staged,
            order: MonomialOrder::GrevLex,
            seed,
            jobs: None,
        }
    }

    /// Switches backend together with its default slicing and strategy.
    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self.slicing = backend.default_slicing();
        self.decide.strategy = backend.default_strategy();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialVerdict {
    pub trial: usize,
    pub seed: u64,
    /// Modulus of the trial's prime field (modular backend only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub n_v: usize,
    pub n_e: usize,
    pub n_ie: usize,
    pub stage: Stage,
    pub verdict: FeasibilityVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Consensus {
    Feasible,
    Infeasible,
    /// Every trial ran out of budget.
    NoConsensus,
    /// Completed trials disagree.
    Anomaly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub scheme: String,
    pub system: String,
    pub k: usize,
    pub m: usize,
    pub mode: String,
    pub reciprocal: bool,
    pub backend: Backend,
    pub seed: u64,
    pub trials: usize,
    pub verdicts: Vec<TrialVerdict>,
    pub consensus: Consensus,
    /// Completed trials disagreeing with the majority outcome.
    pub dissent: usize,
    pub budget_exhausted: usize,
}

impl GenericityReport {
    fn summarize(
        cfg: &GenericityConfig,
        k: usize,
        m: usize,
        mode: Mode,
        reciprocal: bool,
        verdicts: Vec<TrialVerdict>,
    ) -> Self {
        let feasible = verdicts
            .iter()
            .filter(|t| t.verdict.outcome == Outcome::Feasible)
            .count();
        let infeasible = verdicts
            .iter()
            .filter(|t| t.verdict.outcome == Outcome::Infeasible)
            .count();
        let budget_exhausted = verdicts.len() - feasible - infeasible;
        let consensus = match (feasible, infeasible) {
            (0, 0) => Consensus::NoConsensus,
            (_, 0) => Consensus::Feasible,
            (0, _) => Consensus::Infeasible,
            _ => Consensus::Anomaly,
        };
        GenericityReport {
            scheme: cfg.scheme.to_string(),
            system: match cfg.system {
                SystemKind::Alignment => "alignment".into(),
                SystemKind::Neutralization => "neutralization".into(),
            },
            k,
            m,
            mode: mode.tag().into(),
            reciprocal,
            backend: cfg.backend,
            seed: cfg.seed,
            trials: cfg.trials,
            verdicts,
            consensus,
            dissent: feasible.min(infeasible),
            budget_exhausted,
        }
    }
}

fn offdiag_nonzero<F: Field>(ch: &ChannelInstance<F>) -> bool {
    let f = ch.field();
    let n = ch.dim();
    (0..n).all(|r| (0..n).all(|c| r / ch.m == c / ch.m || !f.is_zero(ch.h.get(r, c))))
}

fn run_trial<F: RandomElem>(
    cfg: &GenericityConfig,
    ch: &ChannelInstance<F>,
    rng: &mut ChaCha8Rng,
) -> Result<(AlignmentSystem<F>, FeasibilityVerdict, Stage), FeasibilityError> {
    let sys = build_system(cfg, ch)?;
    let full = match cfg.slicing {
        Slicing::None => sys.clone(),
        Slicing::Dimension | Slicing::Staged => add_dimension_slices(&sys, rng),
    };
    let mut budget = cfg.decide.budget.clone();
    if cfg.slicing == Slicing::Staged && feedback_slots(cfg.scheme) > 0 {
        let restricted = add_restricting_slices(&sys, RESTRICTED_TAIL_SLICES, rng);
        let half = DecideConfig {
            budget: Budget {
                max_time: budget.max_time.map(|t| t / 2),
                max_reductions: budget.max_reductions.map(|r| r / 2),
                ..budget.clone()
            },
            ..cfg.decide.clone()
        };
        let v = decide(&rabinowitsch_with(&restricted, cfg.form), &half)?;
        log::debug!("restricted stage: {:?} after {:.2?}", v.outcome, v.elapsed);
        if v.outcome == Outcome::Feasible {
            return Ok((sys, v, Stage::Restricted));
        }
        budget.max_time = budget.max_time.map(|t| t.saturating_sub(v.elapsed));
        budget.max_reductions = budget
            .max_reductions
            .map(|r| r.saturating_sub(v.reductions));
    }
    let v = decide(
        &rabinowitsch_with(&full, cfg.form),
        &DecideConfig {
            budget,
            ..cfg.decide.clone()
        },
    )?;
    Ok((sys, v, Stage::Full))
}

fn symmetric_member<R: Rng + ?Sized>(
    rng: &mut R,
) -> Result<ChannelInstance<GaussianRationals>, ChannelError> {
    let h = std::array::from_fn(|_| random_gauss_rat(rng));
    build_structured(&StructuredFamily::SymmetricZeroDiagonal4 { h })
}

/// Exact channel for the rational backend.
fn exact_channel(
    source: &ChannelSource,
    rng: &mut ChaCha8Rng,
) -> Result<ChannelInstance<GaussianRationals>, FeasibilityError> {
    Ok(match source {
        ChannelSource::Generic {
            k,
            m,
            mode,
            reciprocal,
        } => sample_exact(*k, *m, *mode, *reciprocal, rng)?,
        ChannelSource::SymmetricZeroDiagonal4 => symmetric_member(rng)?,
        ChannelSource::Fixed(ch) => match ch.as_ref() {
            AnyChannel::Exact(c) => c.clone(),
            AnyChannel::Float(_) => {
                return Err(ChannelError::Shape(
                    "feasibility needs an exact channel, not a float one".into(),
                )
                .into())
            }
        },
    })
}

/// Modular channel: a fresh prime, with exact structured or fixed channels
/// reduced modulo it (retrying primes that hit a denominator).
fn modular_channel(
    source: &ChannelSource,
    rng: &mut ChaCha8Rng,
) -> Result<ChannelInstance<PrimeField>, FeasibilityError> {
    if let ChannelSource::Generic {
        k,
        m,
        mode,
        reciprocal,
    } = source
    {
        let field = PrimeField::random_31bit(rng);
        return Ok(sample_modular(&field, *k, *m, *mode, *reciprocal, rng)?);
    }
    let exact = exact_channel(source, rng)?;
    for _ in 0..64 {
        let field = PrimeField::random_31bit_gaussian(rng);
        if let Some(ch) = reduce_mod_p(&exact, &field) {
            if !matches!(source, ChannelSource::SymmetricZeroDiagonal4) || offdiag_nonzero(&ch) {
                return Ok(ch);
            }
        }
    }
    Err(ChannelError::Hypothesis(
        "no prime found that keeps the channel's denominators invertible".into(),
    )
    .into())
}

fn source_shape(source: &ChannelSource) -> Result<(usize, usize, Mode, bool), FeasibilityError> {
    Ok(match source {
        ChannelSource::Generic {
            k,
            m,
            mode,
            reciprocal,
        } => (*k, *m, *mode, *reciprocal),
        ChannelSource::SymmetricZeroDiagonal4 => (4, 1, Mode::OutOfBand, true),
        ChannelSource::Fixed(ch) => match ch.as_ref() {
            AnyChannel::Exact(c) => (c.k, c.m, c.mode, c.reciprocal),
            AnyChannel::Float(c) => (c.k, c.m, c.mode, c.reciprocal),
        },
    })
}

fn build_system<F: Field>(
    cfg: &GenericityConfig,
    ch: &ChannelInstance<F>,
) -> Result<AlignmentSystem<F>, FeasibilityError> {
    Ok(match cfg.system {
        SystemKind::Alignment => build_alignment_system(ch, cfg.scheme, cfg.order)?,
        SystemKind::Neutralization => build_neutralization_system(ch, cfg.scheme, cfg.order)?,
    })
}

fn trial_seeds(cfg: &GenericityConfig) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.trials).map(|_| master.random()).collect()
}

/// Text dump of the system decided in trial `trial` (1-based), before
/// inequality elimination and slicing.
pub fn trial_system_text(cfg: &GenericityConfig, trial: usize) -> Result<String, FeasibilityError> {
    if trial == 0 || trial > cfg.trials {
        return Err(FeasibilityError::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seeds(cfg)[trial - 1]);
    Ok(match cfg.backend {
        Backend::Rational => build_system(cfg, &exact_channel(&cfg.source, &mut rng)?)?.to_text(),
        Backend::Modular => build_system(cfg, &modular_channel(&cfg.source, &mut rng)?)?.to_text(),
    })
}

/// Samples `trials` channels, decides each, and reports consensus. Trial
/// seeds are drawn up front from `seed`, so the report does not depend on
/// scheduling.
pub fn generic_feasibility(cfg: &GenericityConfig) -> Result<GenericityReport, FeasibilityError> {
    if cfg.trials == 0 {
        return Err(FeasibilityError::NoTrials);
    }
    let (k, m, mode, reciprocal) = source_shape(&cfg.source)?;
    let seeds = trial_seeds(cfg);
    let one = |(trial, &seed): (usize, &u64)| -> Result<TrialVerdict, FeasibilityError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (prime, sys, verdict, stage) = match cfg.backend {
            Backend::Rational => {
                let ch = exact_channel(&cfg.source, &mut rng)?;
                let (sys, v, stage) = run_trial(cfg, &ch, &mut rng)?;
                (None, sys.counts(), v, stage)
            }
            Backend::Modular => {
                let ch = modular_channel(&cfg.source, &mut rng)?;
                let (sys, v, stage) = run_trial(cfg, &ch, &mut rng)?;
                (Some(ch.field().modulus()), sys.counts(), v, stage)
            }
        };
        log::info!(
            "trial {} {:?} after {} reductions, {:.2?}",
            trial + 1,
            verdict.outcome,
            verdict.reductions,
            verdict.elapsed
        );
        Ok(TrialVerdict {
            trial: trial + 1,
            seed,
            prime,
            n_v: sys.n_v,
            n_e: sys.n_e,
            n_ie: sys.n_ie,
            stage,
            verdict,
        })
    };
    let verdicts: Result<Vec<_>, _> = match cfg.jobs {
        Some(1) => seeds.iter().enumerate().map(one).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| seeds.par_iter().enumerate().map(one).collect()),
        None => seeds.par_iter().enumerate().map(one).collect(),
    };
    Ok(GenericityReport::summarize(
        cfg, k, m, mode, reciprocal, verdicts?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaussRat, GaussianRationals};

    fn toy(eqs: &[&str], ineqs: &[&str], vars: &[&str]) -> AlignmentSystem<GaussianRationals> {
        let ring = PolyRing::new(
            GaussianRationals,
            vars.iter().map(|s| s.to_string()).collect(),
            MonomialOrder::GrevLex,
        );
        AlignmentSystem {
            scheme: SchemeKind::ThreePhase,
            kind: SystemKind::Alignment,
            k: 0,
            m: 1,
            equalities: eqs.iter().map(|s| ring.parse(s).unwrap()).collect(),
            inequalities: ineqs.iter().map(|s| ring.parse(s).unwrap()).collect(),
            coding_vars: vars.len(),
            ring,
        }
    }

    #[test]
    fn rabinowitsch_examples() {
        let r = rabinowitsch(&toy(&["x-1"], &["x"], &["x"]));
        assert_eq!(r.ring.vars, vec!["x", "t"]);
        assert_eq!(r.equalities.len(), 2);
        assert!(r.inequalities.is_empty());
        assert!(r.satisfied_at(&[GaussRat::from_int(1), GaussRat::from_int(1)]));
        assert_eq!(
            decide(&r, &DecideConfig::default()).unwrap().outcome,
            Outcome::Feasible
        );

        let r = rabinowitsch(&toy(&["x"], &["x"], &["x"]));
        assert_eq!(
            decide(&r, &DecideConfig::default()).unwrap().outcome,
            Outcome::Infeasible
        );

        let r = rabinowitsch(&toy(&[], &["x+y", "x-y"], &["x", "y"]));
        assert_eq!(r.equalities.len(), 1);
        assert_eq!(r.equalities[0], r.ring.parse("t*x^2-t*y^2-1").unwrap());
    }

    #[test]
    fn decide_examples() {
        let cfg = DecideConfig::default();
        let s = toy(&["x", "y", "x+y-1"], &[], &["x", "y"]);
        assert_eq!(decide(&s, &cfg).unwrap().outcome, Outcome::Infeasible);
        let s = toy(&["x^2+y^2-1"], &[], &["x", "y"]);
        assert_eq!(decide(&s, &cfg).unwrap().outcome, Outcome::Feasible);
        let s = toy(&["x"], &["y"], &["x", "y"]);
        assert!(matches!(
            decide(&s, &cfg),
            Err(FeasibilityError::InequalitiesPresent(1))
        ));
    }
}
