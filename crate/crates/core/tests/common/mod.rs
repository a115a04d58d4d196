//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use avoidkit::circuit::Circuit;
use avoidkit::encoded::{EncodedHistory, EncodedLayout, Profile};
use avoidkit::korten::{korten_run, HistoryLayout, HistoryRecord};
use avoidkit::oracle::ExhaustiveOracle;
use avoidkit::pipeline::{
    solve_uniform, FactString, Family, ScheduleConfig, Sigma2Verifier, Track, UniformConfig,
    UniformSolution,
};
use avoidkit::BitString;
use rand::Rng;

pub fn oracle() -> ExhaustiveOracle {
    ExhaustiveOracle::default()
}

/// Runs the desk Σ2 solver and rebuilds the verifier it certified.
pub fn sigma2_fixture(family: &dyn Family, max_stages: usize) -> (UniformSolution, Sigma2Verifier) {
    let cfg = UniformConfig::new(ScheduleConfig {
        max_stages,
        ..ScheduleConfig::desk(Track::Sigma2)
    });
    let sol = solve_uniform(&mut oracle(), family, 2, &cfg).unwrap();
    let sched = &sol.certificate.schedule;
    let k = sol.k;
    let circuits: Vec<Circuit> = (0..=k)
        .map(|i| family.circuit(sched.n(i).unwrap()).unwrap())
        .collect();
    let lens: Vec<u64> = (0..=k).map(|i| sched.len(i).unwrap()).collect();
    let seeded = (k < sched.t).then(|| {
        (
            family.circuit(sched.n(k + 1).unwrap()).unwrap(),
            sched.len(k + 1).unwrap(),
        )
    });
    let v = Sigma2Verifier::new(2, circuits, &lens, seeded).unwrap();
    (sol, v)
}

/// Twenty proofs other than `honest` for a raw-proof verifier: fourteen
/// single-bit flips and six structured forgeries.
pub fn corrupted_raw_proofs<R: Rng>(
    honest: &BitString,
    c: &Circuit,
    layout: &HistoryLayout,
    rng: &mut R,
) -> Vec<(String, BitString)> {
    let mut out = Vec::new();
    let mut positions: Vec<usize> =
        vec![0, layout.sw as usize, layout.structured_len() as usize - 1];
    positions.push(layout.structured_len() as usize);
    positions.push(honest.len() - 1);
    positions.push(layout.leaf_bit_index(0) as usize);
    positions.push(layout.leaf_bit_index(layout.shape.t - 1) as usize);
    while positions.len() < 14 {
        positions.push(rng.gen_range(0..honest.len()));
    }
    for p in positions {
        let mut h = honest.clone();
        h.flip(p);
        out.push((format!("flip {p}"), h));
    }
    let rec = layout.decode(honest).unwrap();
    let (si, sj) = rec.stop.unwrap();

    // A history of a different string.
    let mut f = FactString::new(layout.shape.n.min(2))
        .unwrap()
        .materialize();
    if f.len() as u64 == layout.shape.t {
        f.flip(rng.gen_range(0..f.len()));
        if let Ok(run) = korten_run(&mut oracle(), c, &f) {
            if run.y.is_some() {
                out.push((
                    "history of another string".into(),
                    layout.serialize(&run.record).unwrap(),
                ));
            }
        }
    }
    // Stop point moved to a neighbour.
    let mut moved = rec.clone();
    moved.stop = Some(if sj > 0 {
        (si, sj - 1)
    } else if si > 0 {
        (si - 1, 0)
    } else {
        (si + 1, 1)
    });
    out.push(("shifted stop".into(), layout.serialize(&moved).unwrap()));
    // Stop node label replaced by an arbitrary value.
    let mut filled = rec.clone();
    filled.set_label(si, sj, Some(BitString::zeros(layout.shape.n)));
    out.push((
        "stop label filled".into(),
        layout.serialize(&filled).unwrap(),
    ));
    // A preimage-bearing label erased.
    let mut erased = rec.clone();
    let leaf = (layout.shape.k, layout.shape.leaves() - 1);
    erased.set_label(leaf.0, leaf.1, None);
    out.push(("leaf erased".into(), layout.serialize(&erased).unwrap()));
    out.push(("all zeros".into(), BitString::zeros(honest.len())));
    out.push(("all ones".into(), BitString::ones(honest.len())));
    while out.len() < 20 {
        let mut h = honest.clone();
        let p = rng.gen_range(0..honest.len());
        h.flip(p);
        out.push((format!("flip {p}"), h));
    }
    out.retain(|(_, h)| h != honest);
    out.truncate(20);
    out
}

/// The collapsing circuit: `C(00) = C(01) = 1111`, `C(10) = 0101`, `C(11) = 1010`.
pub fn collapsing() -> Circuit {
    Circuit::from_table(2, 4, &[0b1111, 0b1111, 0b0101, 0b1010]).unwrap()
}

/// Honest encoded history of `f` under `c`.
pub fn encoded(c: &Circuit, f: &BitString) -> (HistoryRecord, EncodedHistory) {
    avoidkit::encoded::enc_history_build(&mut oracle(), c, f, Profile::desk()).unwrap()
}

/// Encoded history of an arbitrary record under an existing layout.
pub fn encode_record(layout: &Arc<EncodedLayout>, rec: &HistoryRecord) -> EncodedHistory {
    EncodedHistory::from_record(layout.clone(), rec).unwrap()
}
