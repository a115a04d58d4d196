mod common;

use avoidkit::bits::BitOracle;
use avoidkit::encoded::{enc_input, enc_output, enc_params, select_bit, Profile, SelectConfig};
use avoidkit::korten::korten_run;
use avoidkit::{BitString, Circuit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reads_agree_with_the_plain_history(log_t in 3u32..=6, seed: u64) {
        let t = 1u64 << log_t;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Circuit::random(2, 4, 6, &mut rng);
        let f: BitString = (0..t).map(|_| rng.gen::<bool>()).collect();
        let run = korten_run(&mut common::oracle(), &c, &f).unwrap();
        prop_assume!(run.y.is_some());
        let (rec, h) = common::encoded(&c, &f);
        prop_assert_eq!(&rec, &run.record);
        let layout = h.layout().clone();
        prop_assert_eq!(h.len() as u128, layout.len());
        for i in 0..t {
            prop_assert_eq!(enc_input(&h, &layout, i).unwrap(), f.get(i as usize));
        }
        prop_assert_eq!(Some(enc_output(&h, &layout).unwrap()), run.y);
        prop_assert!(enc_input(&h, &layout, t).is_err());
    }

    #[test]
    fn desk_parameters_are_consistent(log_t in 2u32..=12) {
        let t = 1u64 << log_t;
        let p = enc_params(t, Profile::desk()).unwrap();
        prop_assert_eq!(p.delta, log_t as usize);
        prop_assert!((p.delta as u128).pow(p.m as u32) >= 5 * t as u128);
        prop_assert!(p.m == 1 || (p.delta as u128).pow(p.m as u32 - 1) < 5 * t as u128);
        prop_assert!(avoidkit::rm::is_prime(p.p));
        prop_assert!(p.p as usize > p.total_degree());
    }
}

#[test]
fn non_power_of_two_lengths_are_rejected() {
    assert!(enc_params(12, Profile::desk()).is_err());
    assert!(enc_params(2, Profile::desk()).is_err());
}

#[test]
fn selecting_between_equal_honest_histories_returns_their_bits() {
    let c = common::collapsing();
    let f: BitString = "01011111".parse().unwrap();
    let (_, h) = common::encoded(&c, &f);
    let layout = h.layout().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in [0, 1, layout.stop_len(), layout.leaf_bit_index(3) as u64] {
        let out = select_bit(
            &f,
            [&h, &h],
            &c,
            &layout,
            i,
            0.05,
            &SelectConfig::default(),
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.bit, h.bit(i).unwrap(), "bit {i}");
    }
}
