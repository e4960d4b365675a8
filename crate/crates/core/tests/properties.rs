use std::cmp::Ordering;

use leapfrog_core::election::{outcome, tally, OutcomeGrid};
use leapfrog_core::equilibrium::{
    best_responses, enumerate_equilibria, is_nash, profitable_deviation,
};
use leapfrog_core::io::{load_instance, paper_example, serialize_instance};
use leapfrog_core::model::{is_single_peaked, single_peak_violation, Policy, WeakOrder};
use leapfrog_core::preferences::{
    check_cross_side_agreement, compare_for_party, displace, Displacement, Side, Standing,
};
use leapfrog_core::search::{
    gen_instance, random_single_peaked, AttractionMode, GenConfig, PartyMode,
};
use leapfrog_core::{Instance, Outcome, Party, Profile};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small(seed: u64, party_mode: PartyMode, attraction_mode: AttractionMode) -> GenConfig {
    GenConfig {
        m_range: 2..=6,
        n_range: 0..=4,
        party_mode,
        attraction_mode,
        seed,
        inject_paper_example: false,
    }
}

fn sample_instances(count: u64) -> impl Iterator<Item = Instance> {
    let modes = [
        (PartyMode::FreeSinglePeaked, AttractionMode::RandomInterval),
        (PartyMode::FreeSinglePeaked, AttractionMode::Full),
        (PartyMode::Symmetric, AttractionMode::RandomInterval),
        (PartyMode::CommonShape, AttractionMode::RandomInterval),
    ];
    std::iter::once(paper_example()).chain((0..count).map(move |t| {
        let (pm, am) = modes[(t % 4) as usize];
        gen_instance(&small(11, pm, am), t)
    }))
}

/// Swaps two adjacent positions of a strict ranking.
fn transpose(order: &WeakOrder, at: usize) -> WeakOrder {
    let mut ranking: Vec<Policy> = order.tiers().iter().map(|t| t[0]).collect();
    ranking.swap(at, at + 1);
    WeakOrder::strict(order.size(), &ranking).unwrap()
}

#[test]
fn single_peak_checker_matches_generator() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut rejected = 0;
    for _ in 0..10_000 {
        let m = rng.gen_range(2..=12);
        let peak = Policy::new(rng.gen_range(1..=m));
        let strict = random_single_peaked(m, peak, false, &mut rng);
        assert!(is_single_peaked(&strict, peak, true));
        let weak = random_single_peaked(m, peak, true, &mut rng);
        assert!(is_single_peaked(&weak, peak, false));

        // an adjacent swap of two same-side policies breaks monotonicity;
        // a swap across the peak or involving it can preserve it
        let at = rng.gen_range(0..m - 1);
        let (x, y) = (strict.tiers()[at][0], strict.tiers()[at + 1][0]);
        let same_side = (x < peak && y < peak) || (x > peak && y > peak);
        if same_side {
            assert!(!is_single_peaked(&transpose(&strict, at), peak, true));
            rejected += 1;
        }
    }
    assert!(rejected > 1_000);
}

#[test]
fn weak_orders_break_when_a_policy_moves_past_its_neighbour() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..2_000 {
        let m = rng.gen_range(3..=10);
        let peak = Policy::new(rng.gen_range(1..=m));
        let order = random_single_peaked(m, peak, true, &mut rng);
        // lift the policy just beyond a same-side neighbour into that neighbour's tier
        let j = rng.gen_range(1..=m);
        let next = if j > peak.index() && j < m {
            j + 1
        } else if j < peak.index() && j > 1 {
            j - 1
        } else {
            continue;
        };
        let (near, far) = (Policy::new(j), Policy::new(next));
        let mut tiers = order.tiers().to_vec();
        for t in &mut tiers {
            t.retain(|&p| p != far);
        }
        tiers[order.tier(near)].push(far);
        tiers.retain(|t| !t.is_empty());
        let broken = WeakOrder::from_tiers(m, tiers).unwrap();
        let witness = single_peak_violation(&broken, peak, false);
        assert_eq!(witness, Some((near.min(far), near.max(far))));
    }
}

#[test]
fn copying_ties_and_tally_partition() {
    for inst in sample_instances(300) {
        for p in inst.profiles() {
            let t = tally(&inst, p);
            assert_eq!(t.n_a + t.n_b + t.abstaining_active.len(), t.active.len());
            if p.s == p.t {
                assert_eq!((t.n_a, t.n_b), (0, 0));
                assert_eq!(outcome(&inst, p), Outcome::Tie);
            } else {
                // strict voters never abstain by indifference
                assert!(t.abstaining_active.is_empty());
            }
        }
    }
}

#[test]
fn mirror_neutrality() {
    for inst in sample_instances(300) {
        let mirrored = inst.mirrored();
        let space = inst.space();
        for p in inst.profiles() {
            let q = Profile::new(space.reflect(p.t), space.reflect(p.s));
            let expected = match outcome(&inst, p) {
                Outcome::A => Outcome::B,
                Outcome::B => Outcome::A,
                Outcome::Tie => Outcome::Tie,
            };
            assert_eq!(outcome(&mirrored, q), expected);
        }
        assert_eq!(
            check_cross_side_agreement(&inst).is_ok(),
            check_cross_side_agreement(&mirrored).is_ok()
        );
    }
}

#[test]
fn constructor_instances_satisfy_agreement() {
    let mut failures = 0;
    for (i, mode) in [PartyMode::Symmetric, PartyMode::CommonShape]
        .into_iter()
        .enumerate()
    {
        let cfg = GenConfig {
            party_mode: mode,
            seed: 500 + i as u64,
            ..GenConfig::default()
        };
        for trial in 0..5_000 {
            failures += check_cross_side_agreement(&gen_instance(&cfg, trial)).is_err() as usize;
        }
    }
    assert_eq!(failures, 0);
}

#[test]
fn party_comparison_is_a_total_preorder() {
    for inst in sample_instances(12).filter(|i| i.size() <= 5) {
        let grid = OutcomeGrid::new(&inst);
        let pairs: Vec<(Profile, Outcome)> = inst.profiles().map(|p| (p, grid.get(p))).collect();
        for party in [Party::A, Party::B] {
            let cmp = |x: &(Profile, Outcome), y: &(Profile, Outcome)| {
                compare_for_party(&inst, party, x.0, x.1, y.0, y.1)
            };
            for x in &pairs {
                assert_eq!(cmp(x, x), Ordering::Equal);
                for y in &pairs {
                    assert_eq!(cmp(x, y), cmp(y, x).reverse());
                    for z in &pairs {
                        if cmp(x, y) != Ordering::Less && cmp(y, z) != Ordering::Less {
                            assert_ne!(cmp(x, z), Ordering::Less);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn displacement_inverts() {
    for inst in sample_instances(200) {
        for party in [Party::A, Party::B] {
            for k in 1..inst.size() {
                for side in [Side::Left, Side::Right] {
                    let d = Displacement::new(side, k);
                    if let Some(p) = displace(&inst, party, d) {
                        let back =
                            leapfrog_core::preferences::displacement_between(p, inst.ideal(party));
                        assert_eq!(back, Some(d.opposite()));
                    }
                }
            }
        }
    }
}

#[test]
fn equilibrium_properties() {
    for inst in sample_instances(400) {
        let eq = enumerate_equilibria(&inst);
        let nash: Vec<Profile> = inst.profiles().filter(|&p| is_nash(&inst, p)).collect();
        assert_eq!(eq.iter().map(|r| r.profile).collect::<Vec<_>>(), nash);
        for rec in &eq {
            // reversed order forces a tie and mutual leapfrogging
            if rec.reversed_order {
                assert!(rec.tied && rec.mutual_leapfrog, "{:?}", rec);
            }
            assert!(!rec.mutual_leapfrog || rec.reversed_order);
            // nobody loses at an equilibrium: copying the opponent ties
            for party in [Party::A, Party::B] {
                assert_ne!(Standing::of(rec.outcome, party), Standing::Lose);
            }
        }
        for j in inst.space().policies() {
            assert!(!best_responses(&inst, Party::A, j).is_empty());
            assert!(!best_responses(&inst, Party::B, j).is_empty());
        }
        for p in inst.profiles().filter(|&p| !is_nash(&inst, p)) {
            let d = profitable_deviation(&inst, p).unwrap();
            let q = p.with_platform(d.party, d.to);
            assert_eq!(
                compare_for_party(&inst, d.party, q, outcome(&inst, q), p, outcome(&inst, p)),
                Ordering::Greater
            );
        }
    }
}

#[test]
fn documents_round_trip() {
    for inst in sample_instances(1_000) {
        let text = serialize_instance(&inst);
        let back = load_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(serialize_instance(&back), text);
    }
}

proptest! {
    #[test]
    fn outcome_is_anonymous(seed in any::<u64>(), trial in 0u64..500, shuffle in any::<u64>()) {
        let inst = gen_instance(&small(seed, PartyMode::FreeSinglePeaked, AttractionMode::RandomInterval), trial);
        let mut perm: Vec<usize> = (0..inst.voters().len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let permuted = inst.with_voter_order(&perm);
        for p in inst.profiles() {
            prop_assert_eq!(outcome(&inst, p), outcome(&permuted, p));
        }
    }

    #[test]
    fn parse_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = load_instance(&text);
    }

    #[test]
    fn mutated_fixture_never_panics(pos in 0usize..700, c in prop_oneof![Just('0'), Just('9'), Just('-'), Just(']'), Just(',')]) {
        let mut text: Vec<char> = leapfrog_core::io::PAPER_EXAMPLE.chars().collect();
        if pos < text.len() {
            text[pos] = c;
        }
        let text: String = text.into_iter().collect();
        let _ = load_instance(&text);
    }
}
