use avoidkit::circuit::{
    build_tt_generator, interpret_description, mcsp_brute, stretch_double, Circuit, McspCaps,
    TtGenCaps, TtGenSpec,
};
use avoidkit::oracle::ExhaustiveOracle;
use avoidkit::BitString;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_circuit(n: usize, m: usize, gates: usize, seed: u64) -> Circuit {
    Circuit::random(n, m, gates, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn bits(v: u64, len: usize) -> BitString {
    BitString::from_u64(v, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_is_deterministic_and_matches_lanes(n in 1usize..6, m in 1usize..8, g in 0usize..20, seed: u64) {
        let c = random_circuit(n, m, g, seed);
        let table = c.output_table().unwrap();
        for x in 0..(1u64 << n) {
            let a = c.eval(&bits(x, n)).unwrap();
            prop_assert_eq!(&a, &c.eval(&bits(x, n)).unwrap());
            prop_assert_eq!(a.to_u64(), table[x as usize]);
        }
    }

    #[test]
    fn wrong_width_is_rejected(n in 1usize..6, seed: u64) {
        let c = random_circuit(n, 3, 5, seed);
        prop_assert!(c.eval(&bits(0, n + 1)).is_err());
    }

    #[test]
    fn text_round_trip(n in 1usize..6, m in 1usize..8, g in 0usize..20, seed: u64) {
        let c = random_circuit(n, m, g, seed);
        let back: Circuit = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn from_table_computes_the_table(n in 1usize..5, m in 1usize..6, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table: Vec<u64> = (0..1u64 << n).map(|_| rng.gen_range(0..1u64 << m)).collect();
        let c = Circuit::from_table(n, m, &table).unwrap();
        prop_assert_eq!(c.output_table().unwrap(), table);
    }

    #[test]
    fn tt_generator_matches_interpreter(n in 1usize..=3, s in 1usize..=2, seed: u64) {
        let spec = TtGenSpec::new(n, s).unwrap();
        let gen = build_tt_generator(spec, TtGenCaps::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let d = bits(rng.gen_range(0..1u64 << spec.desc_len()), spec.desc_len());
            prop_assert_eq!(gen.eval(&d).unwrap(), interpret_description(spec, &d).unwrap());
        }
    }

    #[test]
    fn mcsp_is_monotone_in_size(n in 1usize..=2, tt in any::<u64>()) {
        let len = 1usize << n;
        let tt = bits(tt & ((1 << len) - 1), len);
        let caps = McspCaps::default();
        let answers: Vec<bool> = (0..=caps.max_size).map(|s| mcsp_brute(&tt, s, caps).unwrap()).collect();
        for w in answers.windows(2) {
            prop_assert!(!w[0] || w[1]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn backmap_leaves_the_range(n in 1usize..=3, seed: u64) {
        let c = random_circuit(n, n + 1, 2 * n + 2, seed);
        let st = stretch_double(&c).unwrap();
        let d = st.doubled();
        prop_assert_eq!((d.n_in(), d.n_out()), (n, 2 * n));
        let range = d.range_set().unwrap();
        let mut oracle = ExhaustiveOracle::default();
        for y in 0..(1u64 << (2 * n)) {
            if range.binary_search(&y).is_ok() {
                continue;
            }
            let z = st.backmap(&bits(y, 2 * n), &mut oracle).unwrap();
            prop_assert_eq!(z.len(), n + 1);
            prop_assert!(!c.in_range_by_enumeration(&z).unwrap());
        }
    }
}

#[test]
fn mcsp_three_inputs_is_monotone() {
    let caps = McspCaps::default();
    for tt in [0x96u64, 0xe8, 0x17, 0x6b] {
        let tt = bits(tt, 8);
        let answers: Vec<bool> = (0..=3).map(|s| mcsp_brute(&tt, s, caps).unwrap()).collect();
        assert!(
            answers.windows(2).all(|w| !w[0] || w[1]),
            "{tt}: {answers:?}"
        );
    }
}
