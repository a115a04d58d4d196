use avoidkit::ggm::ggm_full;
use avoidkit::oracle::{Cnf, ExhaustiveOracle, OracleConfig, PreimageOracle, SatOracle};
use avoidkit::{BitString, Circuit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bits(v: u64, len: usize) -> BitString {
    BitString::from_u64(v, len)
}

fn scan_first(c: &Circuit, y: &BitString) -> Option<BitString> {
    let n = c.n_in();
    (0..1u64 << n)
        .map(|x| bits(x, n))
        .find(|x| &c.eval(x).unwrap() == y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn backends_agree(n in 1usize..=4, m in 1usize..=6, g in 0usize..16, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Circuit::random(n, m, g, &mut rng);
        // Half the targets come from the range so both answers get exercised.
        let y = if rng.gen() {
            c.eval(&bits(rng.gen_range(0..1u64 << n), n)).unwrap()
        } else {
            bits(rng.gen_range(0..1u64 << m), m)
        };
        let mut ex = ExhaustiveOracle::default();
        let mut sat = SatOracle::new(OracleConfig::default());
        let expect = scan_first(&c, &y);
        prop_assert_eq!(ex.has_preimage(&c, &y, &[]).unwrap(), expect.is_some());
        prop_assert_eq!(sat.has_preimage(&c, &y, &[]).unwrap(), expect.is_some());
        prop_assert_eq!(ex.lex_first_preimage(&c, &y).unwrap(), expect.clone());
        prop_assert_eq!(sat.lex_first_preimage(&c, &y).unwrap(), expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ggm_preimages_agree(n in 1usize..=3, extra in 0u64..=12, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Circuit::random(n, 2 * n, 3 * n, &mut rng);
        let t = 4 * n as u64 + extra;
        let f = if rng.gen() {
            ggm_full(&c, t, &bits(rng.gen_range(0..1u64 << n), n)).unwrap()
        } else {
            (0..t).map(|_| rng.gen::<bool>()).collect()
        };
        let expect = (0..1u64 << n).map(|x| bits(x, n)).find(|x| ggm_full(&c, t, x).unwrap() == f);
        let mut ex = ExhaustiveOracle::default();
        let mut sat = SatOracle::new(OracleConfig::default());
        prop_assert_eq!(ex.ggm_preimage(&c, t, &f).unwrap(), expect.clone());
        prop_assert_eq!(sat.ggm_preimage(&c, t, &f).unwrap(), expect.clone());
        prop_assert_eq!(sat.in_range_ggm(&c, t, &f).unwrap(), expect.is_some());
    }

    #[test]
    fn cnf_encoding_is_equisatisfiable(n in 1usize..=3, m in 1usize..=3, g in 0usize..8, seed: u64, y: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Circuit::random(n, m, g, &mut rng);
        let y = bits(y & ((1 << m) - 1), m);
        let mut cnf = Cnf::new();
        let inputs: Vec<i32> = (0..n).map(|_| cnf.new_var()).collect();
        let outs = cnf.encode_circuit(&c, &inputs);
        for (lit, b) in outs.into_iter().zip(y.iter()) {
            cnf.fix(lit, b);
        }
        prop_assert_eq!(cnf.brute_force_sat(), scan_first(&c, &y).is_some());
        let dimacs = cnf.to_dimacs();
        let header = format!("p cnf {} {}", cnf.num_vars(), cnf.clauses().len());
        prop_assert!(dimacs.starts_with(&header));
    }
}

#[test]
fn wrong_target_width_is_a_shape_error() {
    let c = Circuit::dup(2);
    let mut ex = ExhaustiveOracle::default();
    let err = ex.has_preimage(&c, &bits(0, 3), &[]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn enumeration_cap_is_a_resource_error() {
    let c = Circuit::dup(6);
    let mut ex = ExhaustiveOracle::new(OracleConfig {
        max_enum_width: 4,
        ..OracleConfig::default()
    });
    let err = ex.has_preimage(&c, &bits(0, 12), &[]).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}
