use std::collections::HashSet;

use avoidkit::encoded::Profile;
use avoidkit::pipeline::{
    derand_majority, epsilon_schedule, schedule, ScheduleConfig, StopRule, Track,
};
use avoidkit::BitString;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(s2: bool, gamma: u32, max_stages: usize) -> ScheduleConfig {
    let track = if s2 { Track::S2 } else { Track::Sigma2 };
    ScheduleConfig {
        gamma,
        max_stages,
        profile: Profile::desk(),
        ..ScheduleConfig::desk(track)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stages_follow_the_recurrence(n0 in 2u64..=12, s2: bool, gamma in 2u32..=4, cap in 1usize..=6) {
        let cfg = config(s2, gamma, cap);
        let s = match schedule(n0, &cfg) {
            Ok(s) => s,
            Err(e) => {
                prop_assert_eq!(e.exit_code(), 3);
                return Ok(());
            }
        };
        prop_assert_eq!(&s.stages[0].t, &((BigUint::from(1u32) << (2 * n0)) * BigUint::from(2 * n0)));
        prop_assert_eq!(s.stages.len(), s.t + 2);
        prop_assert!(s.t < cap);
        for w in s.stages.windows(2) {
            prop_assert_eq!(&w[1].n, &w[0].n.pow(gamma));
            let next = if s2 { w[0].t.pow(cfg.t_exponent) } else { &w[0].t * 5u32 };
            prop_assert_eq!(&w[1].t, &next);
        }
        let bound = |i: usize| if s2 { s.stages[i].n.clone() } else { &s.stages[i].n * 4u32 };
        for i in 1..=s.t {
            prop_assert!(s.stages[i].t > bound(i));
        }
        match s.rule {
            StopRule::Length => prop_assert!(s.stages[s.t + 1].t <= bound(s.t + 1)),
            StopRule::Cap => prop_assert_eq!(s.t + 1, cap),
        }
    }

    #[test]
    fn epsilons_increase(ns in prop::collection::vec(2u64..1_000_000, 1..6), tau in 1.0f64..4.0) {
        let ns: Vec<BigUint> = ns.into_iter().map(BigUint::from).collect();
        let e = epsilon_schedule(&ns, tau).unwrap();
        prop_assert_eq!(e.len(), ns.len());
        let last = ns.last().unwrap().to_string().parse::<f64>().unwrap();
        prop_assert!((e[e.len() - 1] + (100.0 * last).log2()).abs() < 1e-9);
        for w in e.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn majority_wins_whenever_it_is_strict(m in 1usize..=12, extra in 0usize..64, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let width = 12;
        let us: Vec<BitString> = (0..m as u64).map(|i| BitString::from_u64(i << 6, width)).collect();
        let vs: Vec<BitString> = (0..m as u64).map(|j| BitString::from_u64(j, width)).collect();
        let total = m * m;
        let good_count = (total / 2 + 1 + extra).min(total);
        let mut seeds: Vec<u64> = (0..total as u64).map(|k| ((k / m as u64) << 6) | (k % m as u64)).collect();
        seeds.shuffle(&mut rng);
        let good: HashSet<u64> = seeds[..good_count].iter().copied().collect();
        let z = BitString::from_u64(rng.gen(), 5);
        let v = |_: &(), _: &(), s: &BitString| -> avoidkit::Result<Option<BitString>> {
            let s = s.to_u64();
            Ok(if good.contains(&s) {
                Some(z.clone())
            } else if s % 3 == 0 {
                None
            } else {
                Some(BitString::from_u64(s, 5))
            })
        };
        prop_assert_eq!(derand_majority(v, width, (&(), &us), (&(), &vs)).unwrap(), Some(z.clone()));
    }
}

#[test]
fn exact_half_is_not_a_majority() {
    let width = 4;
    let us: Vec<BitString> = (0..2).map(|i| BitString::from_u64(i << 1, width)).collect();
    let vs: Vec<BitString> = (0..2).map(|j| BitString::from_u64(j, width)).collect();
    let z = BitString::from_u64(1, 2);
    let v = |_: &(), _: &(), s: &BitString| -> avoidkit::Result<Option<BitString>> {
        Ok(Some(if s.to_u64() < 2 {
            z.clone()
        } else {
            BitString::from_u64(s.to_u64(), 2)
        }))
    };
    assert_eq!(
        derand_majority(v, width, (&(), &us), (&(), &vs)).unwrap(),
        None
    );
}
