//! Best responses, Nash verification, exhaustive enumeration and the
//! reversed-order / mutual-leapfrogging classification.

use std::cmp::Ordering;

use crate::election::{outcome, OutcomeGrid};
use crate::model::{Instance, Outcome, Party, Policy, Profile};
use crate::preferences::PartyRanking;

/// A profile with its outcome and classification flags. Produced for any
/// profile by [`classify`]; [`enumerate_equilibria`] only yields Nash ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquilibriumRecord {
    pub profile: Profile,
    pub outcome: Outcome,
    /// `t < s`
    pub reversed_order: bool,
    /// `t < τ_A < τ_B < s`
    pub mutual_leapfrog: bool,
    pub tied: bool,
}

fn record(inst: &Instance, p: Profile, g: Outcome) -> EquilibriumRecord {
    EquilibriumRecord {
        profile: p,
        outcome: g,
        reversed_order: p.t < p.s,
        mutual_leapfrog: p.t < inst.ideal(Party::A) && inst.ideal(Party::B) < p.s,
        tied: g == Outcome::Tie,
    }
}

/// Flags for an arbitrary profile; does not check that it is an equilibrium.
pub fn classify(inst: &Instance, p: Profile) -> EquilibriumRecord {
    record(inst, p, outcome(inst, p))
}

/// A strictly improving unilateral move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub party: Party,
    pub to: Policy,
}

/// Maximal platforms for `party` against a fixed opponent platform.
fn best_responses_by(
    inst: &Instance,
    party: Party,
    opponent_platform: Policy,
    g: impl Fn(Profile) -> Outcome,
) -> Vec<Policy> {
    let ranking = PartyRanking::new(inst, party);
    let base = Profile::new(opponent_platform, opponent_platform);
    let mut best: Vec<(Profile, Outcome)> = Vec::new();
    for j in inst.space().policies() {
        let p = base.with_platform(party, j);
        let o = g(p);
        match best.first() {
            None => best.push((p, o)),
            Some(&(bp, bo)) => match ranking.compare(p, o, bp, bo) {
                Ordering::Greater => {
                    best.clear();
                    best.push((p, o));
                }
                Ordering::Equal => best.push((p, o)),
                Ordering::Less => {}
            },
        }
    }
    best.into_iter().map(|(p, _)| p.platform(party)).collect()
}

pub fn best_responses(inst: &Instance, party: Party, opponent_platform: Policy) -> Vec<Policy> {
    best_responses_by(inst, party, opponent_platform, |p| outcome(inst, p))
}

fn first_deviation(
    inst: &Instance,
    p: Profile,
    g: impl Fn(Profile) -> Outcome,
) -> Option<Deviation> {
    let current = g(p);
    [Party::A, Party::B].into_iter().find_map(|party| {
        let ranking = PartyRanking::new(inst, party);
        inst.space()
            .policies()
            .find(|&j| {
                let q = p.with_platform(party, j);
                ranking.compare(q, g(q), p, current) == Ordering::Greater
            })
            .map(|to| Deviation { party, to })
    })
}

/// `None` if `p` is a pure-strategy Nash equilibrium; otherwise the first
/// strictly improving deviation (party A first, smallest index first).
pub fn profitable_deviation(inst: &Instance, p: Profile) -> Option<Deviation> {
    first_deviation(inst, p, |q| outcome(inst, q))
}

pub fn is_nash(inst: &Instance, p: Profile) -> bool {
    profitable_deviation(inst, p).is_none()
}

/// All Nash profiles in lexicographic `(s, t)` order.
pub fn enumerate_equilibria(inst: &Instance) -> Vec<EquilibriumRecord> {
    enumerate_with_grid(inst, &OutcomeGrid::new(inst))
}

/// As [`enumerate_equilibria`], reusing an already computed outcome grid.
pub fn enumerate_with_grid(inst: &Instance, grid: &OutcomeGrid) -> Vec<EquilibriumRecord> {
    let space = inst.space();
    let g = |p: Profile| grid.get(p);
    // best responses of A to every t, and of B to every s
    let best_a: Vec<Vec<Policy>> = space
        .policies()
        .map(|t| best_responses_by(inst, Party::A, t, g))
        .collect();
    let best_b: Vec<Vec<Policy>> = space
        .policies()
        .map(|s| best_responses_by(inst, Party::B, s, g))
        .collect();
    let mut out = Vec::new();
    for s in space.policies() {
        for t in space.policies() {
            if best_a[t.index() - 1].contains(&s) && best_b[s.index() - 1].contains(&t) {
                let p = Profile::new(s, t);
                out.push(record(inst, p, g(p)));
            }
        }
    }
    out
}
