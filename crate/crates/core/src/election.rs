//! The voting stage: participation by alienation, vote counts and the
//! outcome function `g`.

use crate::model::{Instance, Outcome, Policy, Profile};

/// Vote counts at one profile. Voter ids are 0-based positions in the
/// instance's voter list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    /// Active voters strictly preferring `s` to `t`.
    pub n_a: usize,
    /// Active voters strictly preferring `t` to `s`.
    pub n_b: usize,
    pub active: Vec<usize>,
    /// Active voters indifferent between the platforms.
    pub abstaining_active: Vec<usize>,
}

impl Tally {
    pub fn outcome(&self) -> Outcome {
        decide(self.n_a, self.n_b)
    }
}

fn decide(n_a: usize, n_b: usize) -> Outcome {
    use std::cmp::Ordering::*;
    match n_a.cmp(&n_b) {
        Greater => Outcome::A,
        Less => Outcome::B,
        Equal => Outcome::Tie,
    }
}

pub fn active_voters(inst: &Instance, p: Profile) -> Vec<usize> {
    inst.voters()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_active(p.s, p.t))
        .map(|(i, _)| i)
        .collect()
}

pub fn tally(inst: &Instance, p: Profile) -> Tally {
    let mut out = Tally {
        n_a: 0,
        n_b: 0,
        active: Vec::new(),
        abstaining_active: Vec::new(),
    };
    for (i, v) in inst.voters().iter().enumerate() {
        if !v.is_active(p.s, p.t) {
            continue;
        }
        out.active.push(i);
        let order = v.order();
        if order.prefers(p.s, p.t) {
            out.n_a += 1;
        } else if order.prefers(p.t, p.s) {
            out.n_b += 1;
        } else {
            out.abstaining_active.push(i);
        }
    }
    out
}

/// `g(s, t)`
pub fn outcome(inst: &Instance, p: Profile) -> Outcome {
    let (mut n_a, mut n_b) = (0, 0);
    for v in inst.voters() {
        if v.is_active(p.s, p.t) {
            let order = v.order();
            if order.prefers(p.s, p.t) {
                n_a += 1;
            } else if order.prefers(p.t, p.s) {
                n_b += 1;
            }
        }
    }
    decide(n_a, n_b)
}

/// Outcomes of every unilateral deviation from a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationTable {
    pub profile: Profile,
    /// `g(x_j, t)` for `j = 1..m`: party A moves.
    pub against_t: Vec<Outcome>,
    /// `g(s, x_j)` for `j = 1..m`: party B moves.
    pub against_s: Vec<Outcome>,
}

pub fn deviation_table(inst: &Instance, p: Profile) -> DeviationTable {
    let space = inst.space();
    DeviationTable {
        profile: p,
        against_t: space
            .policies()
            .map(|j| outcome(inst, Profile::new(j, p.t)))
            .collect(),
        against_s: space
            .policies()
            .map(|j| outcome(inst, Profile::new(p.s, j)))
            .collect(),
    }
}

/// `g` evaluated once on all `m²` profiles.
#[derive(Clone, Debug)]
pub struct OutcomeGrid {
    size: usize,
    cells: Vec<Outcome>,
}

impl OutcomeGrid {
    pub fn new(inst: &Instance) -> Self {
        let m = inst.size();
        let mut n_a = vec![0usize; m * m];
        let mut n_b = vec![0usize; m * m];
        for v in inst.voters() {
            let order = v.order();
            let rank: Vec<usize> = inst.space().policies().map(|p| order.tier(p)).collect();
            let accepts: Vec<bool> = inst
                .space()
                .policies()
                .map(|p| v.attraction().contains(p))
                .collect();
            for s in 0..m {
                for t in 0..m {
                    if !(accepts[s] || accepts[t]) {
                        continue;
                    }
                    if rank[s] < rank[t] {
                        n_a[s * m + t] += 1;
                    } else if rank[t] < rank[s] {
                        n_b[s * m + t] += 1;
                    }
                }
            }
        }
        let cells = n_a.iter().zip(&n_b).map(|(&a, &b)| decide(a, b)).collect();
        OutcomeGrid { size: m, cells }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, p: Profile) -> Outcome {
        self.cells[p.s.offset() * self.size + p.t.offset()]
    }

    /// Row-major rows indexed by `s`.
    pub fn rows(&self) -> impl Iterator<Item = &[Outcome]> {
        self.cells.chunks(self.size)
    }

    pub fn deviation_table(&self, p: Profile) -> DeviationTable {
        let all = || (1..=self.size).map(Policy::new);
        DeviationTable {
            profile: p,
            against_t: all().map(|j| self.get(Profile::new(j, p.t))).collect(),
            against_s: all().map(|j| self.get(Profile::new(p.s, j))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::paper_example;
    use crate::model::{Interval, Party};

    use Outcome::{Tie as T, A, B};

    #[test]
    fn example_profile_everyone_active() {
        let inst = paper_example();
        assert_eq!(active_voters(&inst, Profile::at(6, 2)), vec![0, 1, 2, 3]);
    }

    #[test]
    fn nobody_accepts_x4() {
        let inst = paper_example();
        // A_v are {1,2}, {1,2,3}, {5,6,7}, {6,7}: none contains 4.
        assert!(active_voters(&inst, Profile::at(4, 4)).is_empty());
    }

    #[test]
    fn full_attraction_activates_everyone() {
        let inst = paper_example().with_full_attraction();
        for p in inst.profiles() {
            assert_eq!(active_voters(&inst, p).len(), 4);
        }
    }

    #[test]
    fn example_tallies() {
        let inst = paper_example();
        let at = tally(&inst, Profile::at(6, 2));
        assert_eq!((at.n_a, at.n_b), (2, 2));
        assert!(at.abstaining_active.is_empty());

        let at = tally(&inst, Profile::at(3, 2));
        assert_eq!((at.n_a, at.n_b), (0, 2));
        assert_eq!(at.active, vec![0, 1]);
    }

    #[test]
    fn copying_ties() {
        let inst = paper_example().with_full_attraction();
        for s in inst.space().policies() {
            let at = tally(&inst, Profile::new(s, s));
            assert_eq!((at.n_a, at.n_b), (0, 0));
            assert_eq!(at.abstaining_active, at.active);
            assert_eq!(outcome(&inst, Profile::new(s, s)), T);
        }
    }

    #[test]
    fn example_outcomes() {
        let inst = paper_example();
        assert_eq!(outcome(&inst, Profile::at(6, 2)), T);
        assert_eq!(outcome(&inst, Profile::at(5, 2)), B);
    }

    #[test]
    fn example_deviation_table() {
        let inst = paper_example();
        let table = deviation_table(&inst, Profile::at(6, 2));
        assert_eq!(table.against_t, vec![T, T, B, B, B, T, T]);
        assert_eq!(table.against_s, vec![T, T, A, A, A, T, T]);
        assert_eq!(
            OutcomeGrid::new(&inst).deviation_table(Profile::at(6, 2)),
            table
        );
    }

    #[test]
    fn grid_agrees_with_direct_evaluation() {
        let inst = paper_example();
        let grid = OutcomeGrid::new(&inst);
        for p in inst.profiles() {
            assert_eq!(grid.get(p), outcome(&inst, p), "{p}");
            assert_eq!(tally(&inst, p).outcome(), outcome(&inst, p));
        }
    }

    #[test]
    fn mirror_swaps_winners() {
        let inst = paper_example();
        let mirrored = inst.mirrored();
        let space = inst.space();
        for p in inst.profiles() {
            let reflected = Profile::new(space.reflect(p.t), space.reflect(p.s));
            let expected = match outcome(&inst, p) {
                A => B,
                B => A,
                T => T,
            };
            assert_eq!(outcome(&mirrored, reflected), expected);
        }
        assert_eq!(mirrored.party(Party::A).ideal(), Policy::new(3));
        assert_eq!(
            mirrored.voters()[0].attraction(),
            Interval {
                lo: Policy::new(6),
                hi: Policy::new(7)
            }
        );
    }
}
