//! Domain types for the two-party policy game and their structural validation.
//!
//! Everything downstream consumes a validated [`Instance`]. Raw data (from a
//! document, a generator, or a test) enters through [`validate_instance`] or
//! [`Instance::new`], and no operation mutates an instance afterwards.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// A policy on the line, identified by its 1-based position `j` (the policy `x_j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Policy(usize);

impl Policy {
    /// Panics if `index` is zero.
    pub fn new(index: usize) -> Self {
        assert!(index >= 1, "policy indices are 1-based");
        Policy(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }

    pub(crate) const fn offset(self) -> usize {
        self.0 - 1
    }

    /// The policy `steps` positions to the right (positive) or left (negative),
    /// if it is still a positive index. Range checks against `m` are the caller's.
    pub fn shifted(self, steps: isize) -> Option<Policy> {
        let j = self.0 as isize + steps;
        (j >= 1).then_some(Policy(j as usize))
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// The finite ordered line `x_1 < ... < x_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolicySpace {
    size: usize,
}

impl PolicySpace {
    pub fn new(size: usize) -> Result<Self, ValidationError> {
        if size < 2 {
            return Err(ValidationError::TooFewPolicies { size: size as i64 });
        }
        Ok(PolicySpace { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, p: Policy) -> bool {
        p.0 <= self.size
    }

    pub fn policy(&self, index: usize) -> Option<Policy> {
        (1..=self.size).contains(&index).then_some(Policy(index))
    }

    pub fn policies(&self) -> impl DoubleEndedIterator<Item = Policy> + Clone {
        (1..=self.size).map(Policy)
    }

    /// `x_j ↦ x_{m+1-j}`.
    pub fn reflect(&self, p: Policy) -> Policy {
        Policy(self.size + 1 - p.0)
    }
}

/// A weak order over all policies, stored as a tier list: earlier tiers are
/// strictly better, policies sharing a tier are indifferent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakOrder {
    tiers: Vec<Vec<Policy>>,
    tier_of: Vec<usize>,
}

impl WeakOrder {
    /// Builds an order from tiers over `{1..size}`. Policies within a tier are
    /// kept sorted so equal orders compare equal.
    pub fn from_tiers(size: usize, tiers: Vec<Vec<Policy>>) -> Result<Self, PartitionDefect> {
        let mut tier_of = vec![usize::MAX; size];
        let mut sorted = Vec::with_capacity(tiers.len());
        for (rank, mut tier) in tiers.into_iter().enumerate() {
            if tier.is_empty() {
                return Err(PartitionDefect::EmptyTier(rank + 1));
            }
            tier.sort_unstable();
            for &p in &tier {
                if p.0 > size {
                    return Err(PartitionDefect::OutOfRange(p));
                }
                if tier_of[p.offset()] != usize::MAX {
                    return Err(PartitionDefect::Duplicate(p));
                }
                tier_of[p.offset()] = rank;
            }
            sorted.push(tier);
        }
        if let Some(missing) = tier_of.iter().position(|&r| r == usize::MAX) {
            return Err(PartitionDefect::Missing(Policy(missing + 1)));
        }
        Ok(WeakOrder {
            tiers: sorted,
            tier_of,
        })
    }

    /// A strict order from a best-to-worst ranking.
    pub fn strict(size: usize, ranking: &[Policy]) -> Result<Self, PartitionDefect> {
        Self::from_tiers(size, ranking.iter().map(|&p| vec![p]).collect())
    }

    pub fn size(&self) -> usize {
        self.tier_of.len()
    }

    pub fn tiers(&self) -> &[Vec<Policy>] {
        &self.tiers
    }

    /// 0-based tier position of `p` (0 is the best tier).
    pub fn tier(&self, p: Policy) -> usize {
        self.tier_of[p.offset()]
    }

    pub fn top(&self) -> &[Policy] {
        &self.tiers[0]
    }

    pub fn is_strict(&self) -> bool {
        self.tiers.iter().all(|t| t.len() == 1)
    }

    /// `Greater` when `a` is strictly better than `b`.
    pub fn compare(&self, a: Policy, b: Policy) -> Ordering {
        self.tier(b).cmp(&self.tier(a))
    }

    /// `a ≻ b`
    pub fn prefers(&self, a: Policy, b: Policy) -> bool {
        self.tier(a) < self.tier(b)
    }

    /// `a ⪰ b`
    pub fn weakly_prefers(&self, a: Policy, b: Policy) -> bool {
        self.tier(a) <= self.tier(b)
    }

    /// Relabels every policy through `f`, which must be a bijection on `{1..m}`.
    pub(crate) fn relabel(&self, f: impl Fn(Policy) -> Policy) -> WeakOrder {
        let tiers = self
            .tiers
            .iter()
            .map(|t| t.iter().map(|&p| f(p)).collect())
            .collect();
        WeakOrder::from_tiers(self.size(), tiers).expect("relabelling preserves the partition")
    }
}

/// Returns a pair `(lo, hi)` (by index) violating single-peakedness at `peak`,
/// or `None` if the order is single-peaked.
///
/// On each side of the peak, the policy closer to the peak must be strictly
/// better. When `strict` is set the order must also have no indifference at
/// all; a tied pair is then reported as the witness.
pub fn single_peak_violation(
    order: &WeakOrder,
    peak: Policy,
    strict: bool,
) -> Option<(Policy, Policy)> {
    if strict {
        if let Some(tier) = order.tiers().iter().find(|t| t.len() > 1) {
            return Some((tier[0], tier[1]));
        }
    }
    // Adjacent comparisons suffice: the strict relation is transitive.
    for j in 1..peak.0 {
        let (a, b) = (Policy(j), Policy(j + 1));
        if !order.prefers(b, a) {
            return Some((a, b));
        }
    }
    for j in peak.0..order.size() {
        let (b, a) = (Policy(j), Policy(j + 1));
        if !order.prefers(b, a) {
            return Some((b, a));
        }
    }
    None
}

pub fn is_single_peaked(order: &WeakOrder, peak: Policy, strict: bool) -> bool {
    single_peak_violation(order, peak, strict).is_none()
}

/// One of the two parties. `A` has the lower ideal point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub fn opponent(self) -> Party {
        match self {
            Party::A => Party::B,
            Party::B => Party::A,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::A => "A",
            Party::B => "B",
        })
    }
}

/// Someone holding preferences, for error reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Actor {
    Party(Party),
    /// 1-based position in the voter list.
    Voter(usize),
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::Party(p) => write!(f, "party {p}"),
            Actor::Voter(v) => write!(f, "voter {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartySpec {
    ideal: Policy,
    order: WeakOrder,
}

impl PartySpec {
    /// Unchecked pairing; [`Instance::new`] validates.
    pub fn new(ideal: Policy, order: WeakOrder) -> Self {
        PartySpec { ideal, order }
    }

    pub fn ideal(&self) -> Policy {
        self.ideal
    }

    pub fn order(&self) -> &WeakOrder {
        &self.order
    }
}

/// A contiguous range of policies `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Policy,
    pub hi: Policy,
}

impl Interval {
    pub fn contains(&self, p: Policy) -> bool {
        self.lo <= p && p <= self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoterSpec {
    ideal: Policy,
    order: WeakOrder,
    attraction: Interval,
}

impl VoterSpec {
    /// Unchecked; [`Instance::new`] validates.
    pub fn new(ideal: Policy, order: WeakOrder, attraction: Interval) -> Self {
        VoterSpec {
            ideal,
            order,
            attraction,
        }
    }

    pub fn ideal(&self) -> Policy {
        self.ideal
    }

    pub fn order(&self) -> &WeakOrder {
        &self.order
    }

    pub fn attraction(&self) -> Interval {
        self.attraction
    }

    /// Active at `(s, t)` iff either platform is acceptable.
    pub fn is_active(&self, s: Policy, t: Policy) -> bool {
        self.attraction.contains(s) || self.attraction.contains(t)
    }
}

/// A validated game: policy line, both parties, and the electorate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    space: PolicySpace,
    party_a: PartySpec,
    party_b: PartySpec,
    voters: Vec<VoterSpec>,
}

impl Instance {
    /// Checks every semantic invariant and returns the validated instance.
    pub fn new(
        space: PolicySpace,
        party_a: PartySpec,
        party_b: PartySpec,
        voters: Vec<VoterSpec>,
    ) -> Result<Self, ValidationError> {
        let m = space.size();
        let in_range = |actor: Actor, p: Policy| {
            if space.contains(p) {
                Ok(())
            } else {
                Err(ValidationError::IndexOutOfRange {
                    actor,
                    index: p.0 as i64,
                    size: m,
                })
            }
        };
        let order_size = |actor: Actor, order: &WeakOrder| {
            if order.size() == m {
                Ok(())
            } else {
                Err(ValidationError::NotAPartition {
                    actor,
                    defect: if order.size() < m {
                        PartitionDefect::Missing(Policy(order.size() + 1))
                    } else {
                        PartitionDefect::OutOfRange(Policy(m + 1))
                    },
                })
            }
        };

        for (party, spec) in [(Party::A, &party_a), (Party::B, &party_b)] {
            let actor = Actor::Party(party);
            in_range(actor, spec.ideal)?;
            order_size(actor, &spec.order)?;
            if spec.order.top() != [spec.ideal] {
                return Err(ValidationError::MisplacedPeak {
                    actor,
                    ideal: spec.ideal,
                });
            }
            if let Some((a, b)) = single_peak_violation(&spec.order, spec.ideal, false) {
                return Err(ValidationError::NotSinglePeaked { actor, a, b });
            }
        }

        for (i, voter) in voters.iter().enumerate() {
            let actor = Actor::Voter(i + 1);
            in_range(actor, voter.ideal)?;
            in_range(actor, voter.attraction.lo)?;
            in_range(actor, voter.attraction.hi)?;
            order_size(actor, &voter.order)?;
            if let Some(tier) = voter.order.tiers().iter().find(|t| t.len() > 1) {
                return Err(ValidationError::NotStrict {
                    actor,
                    a: tier[0],
                    b: tier[1],
                });
            }
            if voter.order.top() != [voter.ideal] {
                return Err(ValidationError::MisplacedPeak {
                    actor,
                    ideal: voter.ideal,
                });
            }
            if let Some((a, b)) = single_peak_violation(&voter.order, voter.ideal, true) {
                return Err(ValidationError::NotSinglePeaked { actor, a, b });
            }
            let Interval { lo, hi } = voter.attraction;
            if lo > hi {
                return Err(ValidationError::AttractionReversed { actor, lo, hi });
            }
            if !voter.attraction.contains(voter.ideal) {
                return Err(ValidationError::AttractionMissesIdeal {
                    actor,
                    ideal: voter.ideal,
                    lo,
                    hi,
                });
            }
        }

        if party_a.ideal >= party_b.ideal {
            return Err(ValidationError::IdealsOutOfOrder {
                a: party_a.ideal,
                b: party_b.ideal,
            });
        }

        Ok(Instance {
            space,
            party_a,
            party_b,
            voters,
        })
    }

    pub fn space(&self) -> PolicySpace {
        self.space
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn party(&self, party: Party) -> &PartySpec {
        match party {
            Party::A => &self.party_a,
            Party::B => &self.party_b,
        }
    }

    pub fn ideal(&self, party: Party) -> Policy {
        self.party(party).ideal
    }

    pub fn voters(&self) -> &[VoterSpec] {
        &self.voters
    }

    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        self.space
            .policies()
            .flat_map(move |s| self.space.policies().map(move |t| Profile { s, t }))
    }

    /// The reflected game: `x_j ↦ x_{m+1-j}`, with the parties swapping roles
    /// so that `A` keeps the lower ideal point.
    pub fn mirrored(&self) -> Instance {
        let space = self.space;
        let flip = |p| space.reflect(p);
        let party = |spec: &PartySpec| PartySpec::new(flip(spec.ideal), spec.order.relabel(flip));
        let voters = self
            .voters
            .iter()
            .map(|v| {
                VoterSpec::new(
                    flip(v.ideal),
                    v.order.relabel(flip),
                    Interval {
                        lo: flip(v.attraction.hi),
                        hi: flip(v.attraction.lo),
                    },
                )
            })
            .collect();
        Instance::new(space, party(&self.party_b), party(&self.party_a), voters)
            .expect("reflection preserves validity")
    }

    /// The same game with every attraction interval widened to all of `X`.
    pub fn with_full_attraction(&self) -> Instance {
        let full = Interval {
            lo: Policy(1),
            hi: Policy(self.size()),
        };
        let mut widened = self.clone();
        for v in &mut widened.voters {
            v.attraction = full;
        }
        widened
    }

    /// The same game with the voter list reordered by `permutation` (a
    /// permutation of `0..n`).
    pub fn with_voter_order(&self, permutation: &[usize]) -> Instance {
        let mut permuted = self.clone();
        permuted.voters = permutation
            .iter()
            .map(|&i| self.voters[i].clone())
            .collect();
        permuted
    }
}

/// A platform profile `(s, t)`: `s` is party A's platform, `t` party B's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    pub s: Policy,
    pub t: Policy,
}

impl Profile {
    pub fn new(s: Policy, t: Policy) -> Self {
        Profile { s, t }
    }

    /// Shorthand for 1-based indices. Panics on zero.
    pub fn at(s: usize, t: usize) -> Self {
        Profile::new(Policy::new(s), Policy::new(t))
    }

    pub fn platform(&self, party: Party) -> Policy {
        match party {
            Party::A => self.s,
            Party::B => self.t,
        }
    }

    /// Replaces `party`'s platform, keeping the opponent's fixed.
    pub fn with_platform(&self, party: Party, p: Policy) -> Profile {
        match party {
            Party::A => Profile { s: p, t: self.t },
            Party::B => Profile { s: self.s, t: p },
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

/// Election result `g(s, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    A,
    B,
    Tie,
}

impl Outcome {
    pub fn winner(self) -> Option<Party> {
        match self {
            Outcome::A => Some(Party::A),
            Outcome::B => Some(Party::B),
            Outcome::Tie => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::A => 'A',
            Outcome::B => 'B',
            Outcome::Tie => 'T',
        }
    }

    pub fn from_symbol(c: char) -> Option<Outcome> {
        match c {
            'A' => Some(Outcome::A),
            'B' => Some(Outcome::B),
            'T' => Some(Outcome::Tie),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Why a tier list is not a partition of `{1..m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum PartitionDefect {
    #[error("tier {0} is empty")]
    EmptyTier(usize),
    #[error("{0} appears more than once")]
    Duplicate(Policy),
    #[error("{0} is not ranked")]
    Missing(Policy),
    #[error("{0} is outside the policy line")]
    OutOfRange(Policy),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("the policy line needs at least 2 policies, got {size}")]
    TooFewPolicies { size: i64 },
    #[error("{actor}: index {index} is outside [1, {size}]")]
    IndexOutOfRange {
        actor: Actor,
        index: i64,
        size: usize,
    },
    #[error("{actor}: ranking is not a partition of the policies: {defect}")]
    NotAPartition {
        actor: Actor,
        defect: PartitionDefect,
    },
    #[error("{actor}: top tier must be exactly the ideal point {ideal}")]
    MisplacedPeak { actor: Actor, ideal: Policy },
    #[error("{actor}: ranking is not single-peaked, witness ({a},{b})")]
    NotSinglePeaked { actor: Actor, a: Policy, b: Policy },
    #[error("{actor}: voter ranking must be strict, {a} and {b} share a tier")]
    NotStrict { actor: Actor, a: Policy, b: Policy },
    #[error("{actor}: attraction interval [{lo},{hi}] has lo > hi")]
    AttractionReversed {
        actor: Actor,
        lo: Policy,
        hi: Policy,
    },
    #[error("{actor}: attraction set is not an interval, {missing} is missing")]
    AttractionNotInterval { actor: Actor, missing: Policy },
    #[error("{actor}: attraction interval [{lo},{hi}] does not contain the ideal point {ideal}")]
    AttractionMissesIdeal {
        actor: Actor,
        ideal: Policy,
        lo: Policy,
        hi: Policy,
    },
    #[error("party A's ideal {a} must lie strictly left of party B's ideal {b}")]
    IdealsOutOfOrder { a: Policy, b: Policy },
}

impl ValidationError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ValidationError::TooFewPolicies { .. } => "too-few-policies",
            ValidationError::IndexOutOfRange { .. } => "index-out-of-range",
            ValidationError::NotAPartition { .. } => "not-a-partition",
            ValidationError::MisplacedPeak { .. } => "misplaced-peak",
            ValidationError::NotSinglePeaked { .. } => "not-single-peaked",
            ValidationError::NotStrict { .. } => "voter-order-not-strict",
            ValidationError::AttractionReversed { .. } => "attraction-reversed",
            ValidationError::AttractionNotInterval { .. } => "attraction-not-interval",
            ValidationError::AttractionMissesIdeal { .. } => "attraction-misses-ideal",
            ValidationError::IdealsOutOfOrder { .. } => "ideals-out-of-order",
        }
    }
}

/// Unvalidated instance data with plain integer fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInstance {
    pub policies: i64,
    pub party_a: RawParty,
    pub party_b: RawParty,
    pub voters: Vec<RawVoter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawParty {
    pub ideal: i64,
    pub ranking: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawVoter {
    pub ideal: i64,
    pub ranking: Vec<Vec<i64>>,
    pub attraction: RawAttraction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawAttraction {
    /// `[lo, hi]`
    Bounds(i64, i64),
    /// An explicit set of acceptable policies; it must be contiguous.
    Members(Vec<i64>),
}

/// Validates raw data into an [`Instance`].
pub fn validate_instance(raw: &RawInstance) -> Result<Instance, ValidationError> {
    if raw.policies < 2 {
        return Err(ValidationError::TooFewPolicies { size: raw.policies });
    }
    let m = raw.policies as usize;
    let space = PolicySpace::new(m)?;

    let policy = |actor: Actor, index: i64| -> Result<Policy, ValidationError> {
        if index >= 1 && index <= m as i64 {
            Ok(Policy(index as usize))
        } else {
            Err(ValidationError::IndexOutOfRange {
                actor,
                index,
                size: m,
            })
        }
    };
    let order = |actor: Actor, ranking: &[Vec<i64>]| -> Result<WeakOrder, ValidationError> {
        let tiers = ranking
            .iter()
            .map(|tier| tier.iter().map(|&j| policy(actor, j)).collect())
            .collect::<Result<Vec<Vec<Policy>>, _>>()?;
        WeakOrder::from_tiers(m, tiers)
            .map_err(|defect| ValidationError::NotAPartition { actor, defect })
    };
    let party = |p: Party, raw: &RawParty| -> Result<PartySpec, ValidationError> {
        let actor = Actor::Party(p);
        Ok(PartySpec::new(
            policy(actor, raw.ideal)?,
            order(actor, &raw.ranking)?,
        ))
    };

    let party_a = party(Party::A, &raw.party_a)?;
    let party_b = party(Party::B, &raw.party_b)?;
    let voters = raw
        .voters
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let actor = Actor::Voter(i + 1);
            let attraction = match &v.attraction {
                RawAttraction::Bounds(lo, hi) => Interval {
                    lo: policy(actor, *lo)?,
                    hi: policy(actor, *hi)?,
                },
                RawAttraction::Members(members) => {
                    let mut members = members
                        .iter()
                        .map(|&j| policy(actor, j))
                        .collect::<Result<Vec<_>, _>>()?;
                    members.sort_unstable();
                    members.dedup();
                    let (Some(&lo), Some(&hi)) = (members.first(), members.last()) else {
                        let ideal = policy(actor, v.ideal)?;
                        return Err(ValidationError::AttractionMissesIdeal {
                            actor,
                            ideal,
                            lo: ideal,
                            hi: ideal,
                        });
                    };
                    if let Some(w) = members.windows(2).find(|w| w[1].0 != w[0].0 + 1) {
                        return Err(ValidationError::AttractionNotInterval {
                            actor,
                            missing: Policy(w[0].0 + 1),
                        });
                    }
                    Interval { lo, hi }
                }
            };
            Ok(VoterSpec::new(
                policy(actor, v.ideal)?,
                order(actor, &v.ranking)?,
                attraction,
            ))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Instance::new(space, party_a, party_b, voters)
}
