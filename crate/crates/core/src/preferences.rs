//! Ordinal displacements from a party's ideal point, the cross-side
//! agreement check, the cardinal constructors that guarantee it, and the
//! lexicographic (office first, then ideology) party objective.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{
    single_peak_violation, Instance, Outcome, Party, PartySpec, Policy, Profile, WeakOrder,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// `k` ordinal steps to one side of an ideal point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Displacement {
    side: Side,
    steps: usize,
}

impl Displacement {
    /// Panics if `steps` is zero.
    pub fn new(side: Side, steps: usize) -> Self {
        assert!(steps >= 1, "a displacement has at least one step");
        Displacement { side, steps }
    }

    pub fn left(steps: usize) -> Self {
        Self::new(Side::Left, steps)
    }

    pub fn right(steps: usize) -> Self {
        Self::new(Side::Right, steps)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn opposite(&self) -> Self {
        let side = match self.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        Displacement {
            side,
            steps: self.steps,
        }
    }

    fn signed(&self) -> isize {
        match self.side {
            Side::Left => -(self.steps as isize),
            Side::Right => self.steps as isize,
        }
    }
}

fn displace_from(ideal: Policy, size: usize, d: Displacement) -> Option<Policy> {
    ideal.shifted(d.signed()).filter(|p| p.index() <= size)
}

/// `R_i(k)` or `L_i(k)`; `None` when the policy falls off the line.
pub fn displace(inst: &Instance, party: Party, d: Displacement) -> Option<Policy> {
    displace_from(inst.ideal(party), inst.size(), d)
}

/// Displacement of `target` as seen from `origin`, or `None` if they coincide.
pub fn displacement_between(origin: Policy, target: Policy) -> Option<Displacement> {
    match target.cmp(&origin) {
        Ordering::Greater => Some(Displacement::right(target.index() - origin.index())),
        Ordering::Less => Some(Displacement::left(origin.index() - target.index())),
        Ordering::Equal => None,
    }
}

/// Which of the two agreement biconditionals failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// `R_A(a) ⪰_A L_A(b) ⇔ R_B(a) ⪰_B L_B(b)`
    RightOverLeft,
    /// `L_A(b) ⪰_A R_A(a) ⇔ L_B(b) ⪰_B R_B(a)`
    LeftOverRight,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::RightOverLeft => "R(a) >= L(b)",
            Clause::LeftOverRight => "L(b) >= R(a)",
        })
    }
}

/// A cross-side pair `(a, b)` on which the parties disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossSideViolation {
    pub right_steps: usize,
    pub left_steps: usize,
    pub clause: Clause,
}

impl fmt::Display for CrossSideViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a,b)=({},{}): parties disagree on {}",
            self.right_steps, self.left_steps, self.clause
        )
    }
}

/// Checks that both parties rank every cross-side pair `R(a)` vs `L(b)` the
/// same way. Pairs are only checked when all four displaced policies exist.
/// The reported witness is the lexicographically smallest `(a, b)`.
pub fn check_cross_side_agreement(inst: &Instance) -> Result<(), CrossSideViolation> {
    let m = inst.size();
    let a_spec = inst.party(Party::A);
    let b_spec = inst.party(Party::B);
    let right_span = |spec: &PartySpec| m - spec.ideal().index();
    let left_span = |spec: &PartySpec| spec.ideal().index() - 1;
    let max_right = right_span(a_spec).min(right_span(b_spec));
    let max_left = left_span(a_spec).min(left_span(b_spec));

    for a in 1..=max_right {
        for b in 1..=max_left {
            let pair = |spec: &PartySpec| {
                let r = displace_from(spec.ideal(), m, Displacement::right(a)).unwrap();
                let l = displace_from(spec.ideal(), m, Displacement::left(b)).unwrap();
                let order = spec.order();
                (order.weakly_prefers(r, l), order.weakly_prefers(l, r))
            };
            let (a_right, a_left) = pair(a_spec);
            let (b_right, b_left) = pair(b_spec);
            let clause = if a_right != b_right {
                Clause::RightOverLeft
            } else if a_left != b_left {
                Clause::LeftOverRight
            } else {
                continue;
            };
            return Err(CrossSideViolation {
                right_steps: a,
                left_steps: b,
                clause,
            });
        }
    }
    Ok(())
}

/// The order induced by any symmetric utility `φ(|j - ideal|)` with `φ`
/// strictly decreasing: tiers by distance from the ideal point.
pub fn from_symmetric_utility(size: usize, ideal: Policy) -> WeakOrder {
    let c = ideal.index();
    let reach = (c - 1).max(size - c);
    let tiers = (0..=reach)
        .map(|k| {
            let mut tier = Vec::with_capacity(2);
            if k < c {
                tier.push(Policy::new(c - k));
            }
            if k > 0 && c + k <= size {
                tier.push(Policy::new(c + k));
            }
            tier
        })
        .filter(|t| !t.is_empty())
        .collect();
    WeakOrder::from_tiers(size, tiers).expect("distance tiers partition the line")
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ShapeError {
    #[error("shape has no score for displacement {0}")]
    MissingDisplacement(i64),
    #[error("shape score for displacement {0} is not a finite number")]
    NotFinite(i64),
    #[error("shape score at displacement 0 must be strictly the highest")]
    PeakNotTop,
    #[error("shape is not single-peaked, witness ({0},{1})")]
    NotSinglePeaked(Policy, Policy),
}

/// Ranks `x_j` by `shape[j - ideal]`, descending; equal scores share a tier.
pub fn from_common_shape(
    size: usize,
    ideal: Policy,
    shape: &BTreeMap<i64, f64>,
) -> Result<WeakOrder, ShapeError> {
    let c = ideal.index() as i64;
    let mut scored = Vec::with_capacity(size);
    for j in 1..=size {
        let k = j as i64 - c;
        let score = *shape.get(&k).ok_or(ShapeError::MissingDisplacement(k))?;
        if !score.is_finite() {
            return Err(ShapeError::NotFinite(k));
        }
        scored.push((Policy::new(j), score));
    }
    scored.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));

    let mut tiers: Vec<Vec<Policy>> = Vec::new();
    let mut last = f64::NAN;
    for (p, score) in scored {
        match tiers.last_mut() {
            Some(tier) if score == last => tier.push(p),
            _ => tiers.push(vec![p]),
        }
        last = score;
    }
    let order = WeakOrder::from_tiers(size, tiers).expect("every policy is scored once");
    if order.top() != [ideal] {
        return Err(ShapeError::PeakNotTop);
    }
    if let Some((a, b)) = single_peak_violation(&order, ideal, false) {
        return Err(ShapeError::NotSinglePeaked(a, b));
    }
    Ok(order)
}

/// Electoral standing from one party's point of view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Standing {
    Lose,
    Tie,
    Win,
}

impl Standing {
    pub fn of(outcome: Outcome, party: Party) -> Standing {
        match outcome.winner() {
            None => Standing::Tie,
            Some(w) if w == party => Standing::Win,
            Some(_) => Standing::Lose,
        }
    }
}

/// A party's lexicographic ranking of (profile, outcome) pairs.
#[derive(Clone, Copy, Debug)]
pub struct PartyRanking<'a> {
    party: Party,
    spec: &'a PartySpec,
}

impl<'a> PartyRanking<'a> {
    pub fn new(inst: &'a Instance, party: Party) -> Self {
        PartyRanking {
            party,
            spec: inst.party(party),
        }
    }

    pub fn party(&self) -> Party {
        self.party
    }

    /// `Greater` means the first pair is better for this party.
    pub fn compare(&self, p1: Profile, o1: Outcome, p2: Profile, o2: Outcome) -> Ordering {
        Standing::of(o1, self.party)
            .cmp(&Standing::of(o2, self.party))
            .then_with(|| {
                self.spec
                    .order()
                    .compare(p1.platform(self.party), p2.platform(self.party))
            })
    }
}

/// Office first (`Win ≻ Tie ≻ Lose`), then the party's own platform under
/// its ideological order. `Greater` means `(p1, o1)` is better.
pub fn compare_for_party(
    inst: &Instance,
    party: Party,
    p1: Profile,
    o1: Outcome,
    p2: Profile,
    o2: Outcome,
) -> Ordering {
    PartyRanking::new(inst, party).compare(p1, o1, p2, o2)
}
