//! Seeded random instances and falsification campaigns.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, trial)`, so a
//! campaign's report depends only on its inputs and never on how trials are
//! scheduled across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::equilibrium::{enumerate_equilibria, EquilibriumRecord};
use crate::io::paper_example;
use crate::model::{
    Instance, Interval, PartySpec, Policy, PolicySpace, Profile, VoterSpec, WeakOrder,
};
use crate::preferences::{check_cross_side_agreement, from_common_shape, from_symmetric_utility};

/// How party preferences are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartyMode {
    /// Any single-peaked weak order, cross-side ties included.
    FreeSinglePeaked,
    /// Distance tiers around each ideal.
    Symmetric,
    /// One random utility shape over signed displacements, shared by both parties.
    CommonShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AttractionMode {
    RandomInterval,
    Full,
}

impl PartyMode {
    pub fn name(self) -> &'static str {
        match self {
            PartyMode::FreeSinglePeaked => "free",
            PartyMode::Symmetric => "symmetric",
            PartyMode::CommonShape => "common-shape",
        }
    }
}

impl AttractionMode {
    pub fn name(self) -> &'static str {
        match self {
            AttractionMode::RandomInterval => "random",
            AttractionMode::Full => "full",
        }
    }
}

impl FromStr for PartyMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "free" | "free_single_peaked" | "free-single-peaked" => Ok(PartyMode::FreeSinglePeaked),
            "symmetric" => Ok(PartyMode::Symmetric),
            "common-shape" | "common_shape" => Ok(PartyMode::CommonShape),
            _ => Err(ConfigError::UnknownName(s.to_string())),
        }
    }
}

impl FromStr for AttractionMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" | "random_interval" | "random-interval" => Ok(AttractionMode::RandomInterval),
            "full" => Ok(AttractionMode::Full),
            _ => Err(ConfigError::UnknownName(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{0} range is empty")]
    EmptyRange(&'static str),
    #[error("the policy line needs at least 2 policies")]
    TooFewPolicies,
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub m_range: RangeInclusive<usize>,
    pub n_range: RangeInclusive<usize>,
    pub party_mode: PartyMode,
    pub attraction_mode: AttractionMode,
    pub seed: u64,
    /// Trial 0 is the built-in counterexample instead of a random draw.
    pub inject_paper_example: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            m_range: 5..=9,
            n_range: 2..=6,
            party_mode: PartyMode::FreeSinglePeaked,
            attraction_mode: AttractionMode::RandomInterval,
            seed: 0,
            inject_paper_example: false,
        }
    }
}

impl GenConfig {
    /// Defaults for a campaign on `conjecture`. Random intervals almost never
    /// give fixed participation, so prop2 starts from full attraction.
    pub fn for_conjecture(conjecture: Conjecture) -> Self {
        let attraction_mode = match conjecture {
            Conjecture::Prop2 => AttractionMode::Full,
            _ => AttractionMode::RandomInterval,
        };
        GenConfig {
            attraction_mode,
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m_range.is_empty() {
            return Err(ConfigError::EmptyRange("policy count"));
        }
        if self.n_range.is_empty() {
            return Err(ConfigError::EmptyRange("voter count"));
        }
        if *self.m_range.start() < 2 {
            return Err(ConfigError::TooFewPolicies);
        }
        Ok(())
    }
}

/// Probability that a policy joins the previous tier when that tier holds a
/// single policy from the opposite side of the peak.
const CROSS_SIDE_TIE: f64 = 0.25;

/// A uniformly random interleaving of the two monotone chains leading away
/// from `peak`. With `ties` set, adjacent policies from opposite sides are
/// sometimes merged into one tier.
pub fn random_single_peaked<R: Rng>(
    size: usize,
    peak: Policy,
    ties: bool,
    rng: &mut R,
) -> WeakOrder {
    let c = peak.index();
    let mut left = c - 1; // next left policy is x_left
    let mut right = c + 1;
    let mut tiers: Vec<Vec<Policy>> = vec![vec![peak]];
    // side of the single policy in the last tier, if mergeable
    let mut open: Option<bool> = None;
    while left >= 1 || right <= size {
        let remaining_left = left;
        let remaining_right = size + 1 - right;
        let go_left = rng.gen_range(0..remaining_left + remaining_right) < remaining_left;
        let p = if go_left {
            left -= 1;
            Policy::new(left + 1)
        } else {
            right += 1;
            Policy::new(right - 1)
        };
        if ties && open == Some(!go_left) && rng.gen_bool(CROSS_SIDE_TIE) {
            tiers.last_mut().unwrap().push(p);
            open = None;
        } else {
            tiers.push(vec![p]);
            open = Some(go_left);
        }
    }
    WeakOrder::from_tiers(size, tiers).expect("interleaving covers every policy once")
}

/// A random shape over displacements `-(m-1)..=(m-1)`: 0 at the peak and
/// integer steps of 1 to 3 downwards on each side.
pub fn random_shape<R: Rng>(size: usize, rng: &mut R) -> BTreeMap<i64, f64> {
    let reach = size as i64 - 1;
    let mut shape = BTreeMap::new();
    shape.insert(0, 0.0);
    for dir in [1i64, -1] {
        let mut score = 0.0;
        for k in 1..=reach {
            score -= rng.gen_range(1..=3) as f64;
            shape.insert(dir * k, score);
        }
    }
    shape
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Where a generated instance came from; drives the prop4 precondition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Provenance {
    Fixture,
    Drawn(PartyMode),
}

fn generate(cfg: &GenConfig, trial: u64) -> (Instance, Provenance) {
    if cfg.inject_paper_example && trial == 0 {
        return (paper_example(), Provenance::Fixture);
    }
    let mut rng = trial_rng(cfg.seed, trial);
    let m = rng.gen_range(cfg.m_range.clone());
    let n = rng.gen_range(cfg.n_range.clone());
    let first = rng.gen_range(1..=m);
    let mut second = rng.gen_range(1..m);
    if second >= first {
        second += 1;
    }
    let (ia, ib) = (
        Policy::new(first.min(second)),
        Policy::new(first.max(second)),
    );

    let (order_a, order_b) = match cfg.party_mode {
        PartyMode::FreeSinglePeaked => (
            random_single_peaked(m, ia, true, &mut rng),
            random_single_peaked(m, ib, true, &mut rng),
        ),
        PartyMode::Symmetric => (from_symmetric_utility(m, ia), from_symmetric_utility(m, ib)),
        PartyMode::CommonShape => {
            let shape = random_shape(m, &mut rng);
            (
                from_common_shape(m, ia, &shape).expect("random shapes are single-peaked"),
                from_common_shape(m, ib, &shape).expect("random shapes are single-peaked"),
            )
        }
    };

    let voters = (0..n)
        .map(|_| {
            let ideal = Policy::new(rng.gen_range(1..=m));
            let order = random_single_peaked(m, ideal, false, &mut rng);
            let attraction = match cfg.attraction_mode {
                AttractionMode::Full => Interval {
                    lo: Policy::new(1),
                    hi: Policy::new(m),
                },
                AttractionMode::RandomInterval => Interval {
                    lo: Policy::new(rng.gen_range(1..=ideal.index())),
                    hi: Policy::new(rng.gen_range(ideal.index()..=m)),
                },
            };
            VoterSpec::new(ideal, order, attraction)
        })
        .collect();

    let inst = Instance::new(
        PolicySpace::new(m).expect("m_range starts at 2 or more"),
        PartySpec::new(ia, order_a),
        PartySpec::new(ib, order_b),
        voters,
    )
    .expect("generated pieces satisfy every invariant by construction");
    (inst, Provenance::Drawn(cfg.party_mode))
}

/// Deterministic in `(cfg, trial)`. `cfg` must pass [`GenConfig::validate`].
pub fn gen_instance(cfg: &GenConfig, trial: u64) -> Instance {
    generate(cfg, trial).0
}

/// True iff the same voters are active at every profile with `s ≠ t`.
pub fn has_fixed_participation(inst: &Instance) -> bool {
    let space = inst.space();
    let reference = Profile::at(1, 2);
    let expected: Vec<bool> = inst
        .voters()
        .iter()
        .map(|v| v.is_active(reference.s, reference.t))
        .collect();
    space.policies().all(|s| {
        space.policies().filter(|&t| t != s).all(|t| {
            inst.voters()
                .iter()
                .zip(&expected)
                .all(|(v, &e)| v.is_active(s, t) == e)
        })
    })
}

/// A claim that a campaign tries to refute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conjecture {
    /// Every reversed-order equilibrium is tied and mutually leapfrogged.
    Prop1,
    /// Under fixed participation, no equilibrium is mutually leapfrogged.
    Prop2,
    /// Under cross-side agreement, no equilibrium is mutually leapfrogged.
    Thm1,
    /// Symmetric or common-shape party utilities satisfy cross-side agreement.
    Prop4ImpliesAx2,
}

impl Conjecture {
    pub const ALL: [Conjecture; 4] = [
        Conjecture::Prop1,
        Conjecture::Prop2,
        Conjecture::Thm1,
        Conjecture::Prop4ImpliesAx2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Conjecture::Prop1 => "prop1",
            Conjecture::Prop2 => "prop2",
            Conjecture::Thm1 => "thm1",
            Conjecture::Prop4ImpliesAx2 => "prop4",
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Conjecture {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prop1" => Ok(Conjecture::Prop1),
            "prop2" => Ok(Conjecture::Prop2),
            "thm1" => Ok(Conjecture::Thm1),
            "prop4" | "prop4_implies_ax2" => Ok(Conjecture::Prop4ImpliesAx2),
            _ => Err(ConfigError::UnknownName(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignOptions {
    /// Worker threads; `None` uses the global pool. Has no effect on results.
    pub threads: Option<usize>,
    /// When false, the conclusion is tested on every instance.
    pub enforce_precondition: bool,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions {
            threads: None,
            enforce_precondition: true,
        }
    }
}

/// A counterexample with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub trial: u64,
    pub instance: Instance,
    /// The offending equilibrium; `None` for instance-level claims.
    pub profile: Option<Profile>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignReport {
    pub conjecture: Conjecture,
    pub config: GenConfig,
    pub precondition_enforced: bool,
    pub trials: u64,
    /// Instances satisfying the conjecture's hypothesis.
    pub qualifying: u64,
    /// Equilibria inspected on checked instances.
    pub equilibria: u64,
    pub reversed_equilibria: u64,
    pub leapfrog_equilibria: u64,
    pub violations: Vec<Violation>,
    /// Excluded from machine output.
    pub elapsed: Duration,
}

#[derive(Default)]
struct TrialOutcome {
    qualifying: bool,
    equilibria: u64,
    reversed: u64,
    leapfrog: u64,
    violations: Vec<Violation>,
}

fn precondition(conjecture: Conjecture, inst: &Instance, provenance: Provenance) -> bool {
    match conjecture {
        Conjecture::Prop1 => true,
        Conjecture::Prop2 => has_fixed_participation(inst),
        Conjecture::Thm1 => check_cross_side_agreement(inst).is_ok(),
        Conjecture::Prop4ImpliesAx2 => matches!(
            provenance,
            Provenance::Drawn(PartyMode::Symmetric | PartyMode::CommonShape)
        ),
    }
}

/// Describes how `rec` contradicts the conjecture's conclusion, if it does.
fn equilibrium_violation(conjecture: Conjecture, rec: &EquilibriumRecord) -> Option<String> {
    match conjecture {
        Conjecture::Prop1 if rec.reversed_order && !(rec.tied && rec.mutual_leapfrog) => {
            Some(format!(
                "reversed-order equilibrium {} with outcome {} (tied={}, leapfrog={})",
                rec.profile, rec.outcome, rec.tied, rec.mutual_leapfrog
            ))
        }
        Conjecture::Prop2 | Conjecture::Thm1 if rec.mutual_leapfrog => {
            Some(format!("mutual-leapfrog equilibrium {}", rec.profile))
        }
        _ => None,
    }
}

fn instance_violation(conjecture: Conjecture, inst: &Instance) -> Option<String> {
    match conjecture {
        Conjecture::Prop4ImpliesAx2 => check_cross_side_agreement(inst)
            .err()
            .map(|w| format!("cross-side agreement fails at {w}")),
        _ => None,
    }
}

fn run_trial(conjecture: Conjecture, cfg: &GenConfig, enforce: bool, trial: u64) -> TrialOutcome {
    let (inst, provenance) = generate(cfg, trial);
    let mut out = TrialOutcome {
        qualifying: precondition(conjecture, &inst, provenance),
        ..TrialOutcome::default()
    };
    if enforce && !out.qualifying {
        return out;
    }
    if conjecture == Conjecture::Prop4ImpliesAx2 {
        if let Some(detail) = instance_violation(conjecture, &inst) {
            out.violations.push(Violation {
                trial,
                instance: inst,
                profile: None,
                detail,
            });
        }
        return out;
    }
    for rec in enumerate_equilibria(&inst) {
        out.equilibria += 1;
        out.reversed += rec.reversed_order as u64;
        out.leapfrog += rec.mutual_leapfrog as u64;
        if let Some(detail) = equilibrium_violation(conjecture, &rec) {
            out.violations.push(Violation {
                trial,
                instance: inst.clone(),
                profile: Some(rec.profile),
                detail,
            });
        }
    }
    out
}

#[cfg(feature = "parallel")]
fn map_trials<F>(trials: u64, threads: Option<usize>, f: F) -> Vec<TrialOutcome>
where
    F: Fn(u64) -> TrialOutcome + Sync + Send,
{
    use rayon::prelude::*;
    let run = || (0..trials).into_par_iter().map(&f).collect::<Vec<_>>();
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => (0..trials).map(&f).collect(),
        },
        None => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_trials<F>(trials: u64, _threads: Option<usize>, f: F) -> Vec<TrialOutcome>
where
    F: Fn(u64) -> TrialOutcome,
{
    (0..trials).map(f).collect()
}

pub fn falsify(
    conjecture: Conjecture,
    cfg: &GenConfig,
    trials: u64,
) -> Result<CampaignReport, ConfigError> {
    falsify_with(conjecture, cfg, trials, &CampaignOptions::default())
}

pub fn falsify_with(
    conjecture: Conjecture,
    cfg: &GenConfig,
    trials: u64,
    options: &CampaignOptions,
) -> Result<CampaignReport, ConfigError> {
    cfg.validate()?;
    let clock = Stopwatch::start();
    let enforce = options.enforce_precondition;
    let outcomes = map_trials(trials, options.threads, |trial| {
        run_trial(conjecture, cfg, enforce, trial)
    });

    let mut report = CampaignReport {
        conjecture,
        config: cfg.clone(),
        precondition_enforced: enforce,
        trials,
        qualifying: 0,
        equilibria: 0,
        reversed_equilibria: 0,
        leapfrog_equilibria: 0,
        violations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for o in outcomes {
        report.qualifying += o.qualifying as u64;
        report.equilibria += o.equilibria;
        report.reversed_equilibria += o.reversed;
        report.leapfrog_equilibria += o.leapfrog;
        report.violations.extend(o.violations);
    }
    report.elapsed = clock.elapsed();
    Ok(report)
}

/// Re-checks a reported violation on its own instance.
pub fn replay(conjecture: Conjecture, violation: &Violation) -> bool {
    let inst = &violation.instance;
    match violation.profile {
        None => instance_violation(conjecture, inst).is_some(),
        Some(p) => enumerate_equilibria(inst)
            .iter()
            .find(|r| r.profile == p)
            .is_some_and(|r| equilibrium_violation(conjecture, r).is_some()),
    }
}

// `Instant::now` panics on wasm32-unknown-unknown.
struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    started: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            started: std::time::Instant::now(),
        }
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.started.elapsed();
        #[cfg(target_arch = "wasm32")]
        return Duration::ZERO;
    }
}
