use avoidkit::bits::BitOracle;
use avoidkit::ggm::{ggm_eval, ggm_eval_counted, ggm_full, GgmView, TreeShape};
use avoidkit::korten::{
    history_build, history_input, history_output, korten_run, pi1_verify_all, HistoryLayout,
};
use avoidkit::oracle::{ExhaustiveOracle, OracleConfig, SatOracle};
use avoidkit::{BitString, Circuit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bits(v: u64, len: usize) -> BitString {
    BitString::from_u64(v, len)
}

/// Level-by-level expansion of the whole tree, truncated to `t` bits.
fn reference_ggm(c: &Circuit, t: u64, x: &BitString) -> BitString {
    let n = c.n_in();
    let mut level = vec![x.clone()];
    while ((level.len() * n) as u64) < t {
        level = level
            .iter()
            .flat_map(|v| {
                let out = c.eval(v).unwrap();
                [out.slice(0, n), out.slice(n, 2 * n)]
            })
            .collect();
    }
    let all = level.iter().fold(BitString::new(), |acc, v| acc.concat(v));
    all.slice(0, t as usize)
}

fn in_reference_range(c: &Circuit, t: u64, f: &BitString) -> bool {
    let n = c.n_in();
    (0..1u64 << n).any(|x| &reference_ggm(c, t, &bits(x, n)) == f)
}

fn instance(n: usize, t: u64, rng: &mut ChaCha8Rng) -> (Circuit, BitString) {
    let c = Circuit::random(n, 2 * n, 3 * n, rng);
    let f = if rng.gen_ratio(1, 4) {
        reference_ggm(&c, t, &bits(rng.gen_range(0..1u64 << n), n))
    } else {
        (0..t).map(|_| rng.gen::<bool>()).collect()
    };
    (c, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_queries_match_the_full_tree(n in 1usize..=3, extra in 0u64..=52, seed: u64) {
        let t = 4 * n as u64 + extra;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Circuit::random(n, 2 * n, 3 * n, &mut rng);
        let x = bits(rng.gen_range(0..1u64 << n), n);
        let full = ggm_full(&c, t, &x).unwrap();
        prop_assert_eq!(&full, &reference_ggm(&c, t, &x));
        let k = TreeShape::new(n, t).unwrap().k as u64;
        prop_assert_eq!(k, (t as f64 / n as f64).log2().ceil() as u64);
        let view = GgmView::new(c.clone(), t, x.clone()).unwrap();
        for i in 0..t {
            let (b, evals) = ggm_eval_counted(&c, t, &x, i).unwrap();
            prop_assert_eq!(b, full.get(i as usize));
            prop_assert_eq!(evals, k);
            prop_assert_eq!(view.bit(i).unwrap(), b);
        }
        prop_assert!(ggm_eval(&c, t, &x, t).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn korten_avoids_or_reports_the_range(n in 1usize..=3, wide: bool, seed: u64) {
        let t = if wide { 8 * n as u64 } else { 4 * n as u64 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, f) = instance(n, t, &mut rng);
        let run = korten_run(&mut ExhaustiveOracle::default(), &c, &f).unwrap();
        let in_range = in_reference_range(&c, t, &f);
        // A completed run always certifies membership; the converse needs
        // unique preimages, since a lex-first choice can strand the parent.
        if run.y.is_none() {
            prop_assert!(in_range);
        }
        let injective = c.range_set().unwrap().len() == 1 << n;
        if injective {
            prop_assert_eq!(run.y.is_none(), in_range);
        }
        if let Some(y) = &run.y {
            prop_assert_eq!(y.len(), 2 * n);
            let range = c.range_set().unwrap();
            prop_assert!(range.binary_search(&y.to_u64()).is_err());
            prop_assert_eq!(run.record.output(), Some(y.clone()));
        }
        let sat = korten_run(&mut SatOracle::new(OracleConfig::default()), &c, &f).unwrap();
        prop_assert_eq!(sat.y, run.y);
        prop_assert_eq!(sat.record, run.record);
    }

    #[test]
    fn history_round_trip_and_reads(n in 1usize..=3, wide: bool, seed: u64) {
        let t = if wide { 8 * n as u64 } else { 4 * n as u64 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, f) = instance(n, t, &mut rng);
        let mut oracle = ExhaustiveOracle::default();
        prop_assume!(korten_run(&mut oracle, &c, &f).unwrap().y.is_some());
        let (rec, h) = history_build(&mut oracle, &c, &f).unwrap();
        let layout = HistoryLayout::for_circuit(&c, t).unwrap();
        prop_assert_eq!(h.len() as u64, layout.len());
        prop_assert_eq!(&layout.decode(&h).unwrap(), &rec);
        prop_assert_eq!(&layout.serialize(&rec).unwrap(), &h);
        for i in 0..t {
            prop_assert_eq!(history_input(&h, &layout, i).unwrap(), f.get(i as usize));
        }
        prop_assert_eq!(Some(history_output(&h, &layout).unwrap()), rec.output());
        prop_assert!(pi1_verify_all(&c, &layout, &f, &h).unwrap().accepted);
    }

    #[test]
    fn single_flips_are_rejected(n in 1usize..=3, seed: u64) {
        let t = 4 * n as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, f) = instance(n, t, &mut rng);
        let mut oracle = ExhaustiveOracle::default();
        prop_assume!(korten_run(&mut oracle, &c, &f).unwrap().y.is_some());
        let (_, h) = history_build(&mut oracle, &c, &f).unwrap();
        let layout = HistoryLayout::for_circuit(&c, t).unwrap();
        let mut bad = h.clone();
        bad.flip(rng.gen_range(0..h.len()));
        prop_assert!(!pi1_verify_all(&c, &layout, &f, &bad).unwrap().accepted);
    }
}
