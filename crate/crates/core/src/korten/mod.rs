//! Korten's reduction and its computational history.
//!
//! Given `C: {0,1}^n -> {0,1}^{2n}` and `f ∉ Range(GGM_T[C])`, the reduction
//! fills GGM tree labels bottom-up, always choosing the lexicographically first
//! preimage of the children. The first node whose children have no preimage
//! yields a string outside `Range(C)`.

mod history;
mod verify;

pub use history::{history_build, history_input, history_output, HistoryLayout, Label};
pub use verify::{pi1_check, pi1_verify_all, witness_width, Check, Pi1Outcome};

use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::ggm::TreeShape;
use crate::oracle::PreimageOracle;

/// Largest node count a record may hold.
pub const MAX_NODES: u64 = 1 << 22;

/// Stop point and node labels of one run; `None` labels are ⊥.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryRecord {
    pub shape: TreeShape,
    /// `(i*, j*)`, or `None` when every node was filled.
    pub stop: Option<(u32, u64)>,
    /// Indexed by lexicographic node index.
    pub labels: Vec<Option<BitString>>,
}

impl HistoryRecord {
    pub fn label(&self, i: u32, j: u64) -> Option<&BitString> {
        self.labels[self.shape.lex_index(i, j) as usize].as_ref()
    }

    pub fn set_label(&mut self, i: u32, j: u64, v: Option<BitString>) {
        let idx = self.shape.lex_index(i, j) as usize;
        self.labels[idx] = v;
    }

    /// `v_{i*+1,2j*} ∘ v_{i*+1,2j*+1}`, the avoidance string.
    pub fn output(&self) -> Option<BitString> {
        let (i, j) = self.stop?;
        Some(
            self.label(i + 1, 2 * j)?
                .concat(self.label(i + 1, 2 * j + 1)?),
        )
    }
}

#[derive(Clone, Debug)]
pub struct KortenRun {
    /// Outside `Range(C)` when present; `None` means the tree completed.
    pub y: Option<BitString>,
    pub record: HistoryRecord,
}

/// The zero-padded leaf block `j` of `f`.
pub fn padded_block(f: &BitString, n: usize, j: u64) -> BitString {
    let start = j as usize * n;
    (start..start + n)
        .map(|p| p < f.len() && f.get(p))
        .collect()
}

pub fn korten_run(
    oracle: &mut dyn PreimageOracle,
    c: &Circuit,
    f: &BitString,
) -> Result<KortenRun> {
    let shape = TreeShape::for_circuit(c, f.len() as u64)?;
    if shape.nodes() > MAX_NODES {
        return Err(Error::capacity(format!(
            "history with {} nodes exceeds cap",
            shape.nodes()
        )));
    }
    let n = shape.n;
    let mut record = HistoryRecord {
        shape,
        stop: None,
        labels: vec![None; shape.nodes() as usize],
    };
    for j in 0..shape.leaves() {
        record.set_label(shape.k, j, Some(padded_block(f, n, j)));
    }
    for i in (0..shape.k).rev() {
        for j in (0..1u64 << i).rev() {
            let children = record
                .label(i + 1, 2 * j)
                .unwrap()
                .concat(record.label(i + 1, 2 * j + 1).unwrap());
            match oracle.lex_first_preimage(c, &children)? {
                Some(x) => record.set_label(i, j, Some(x)),
                None => {
                    record.stop = Some((i, j));
                    return Ok(KortenRun {
                        y: Some(children),
                        record,
                    });
                }
            }
        }
    }
    Ok(KortenRun { y: None, record })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ExhaustiveOracle;

    fn run(f: &str) -> KortenRun {
        korten_run(
            &mut ExhaustiveOracle::default(),
            &Circuit::dup(2),
            &f.parse().unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn dup2_examples() {
        let r = run("00011011");
        assert_eq!(r.y.unwrap().to_string(), "1011");
        assert_eq!(r.record.stop, Some((1, 1)));
        assert_eq!(r.record.label(0, 0), None);
        assert_eq!(r.record.label(1, 0), None);
        assert_eq!(r.record.label(1, 1), None);
        let leaves: Vec<String> = (0..4)
            .map(|j| r.record.label(2, j).unwrap().to_string())
            .collect();
        assert_eq!(leaves, ["00", "01", "10", "11"]);

        let r = run("00000101");
        assert_eq!(r.y.unwrap().to_string(), "0001");
        assert_eq!(r.record.stop, Some((0, 0)));
        assert_eq!(r.record.label(1, 0).unwrap().to_string(), "00");
        assert_eq!(r.record.label(1, 1).unwrap().to_string(), "01");

        let r = run("00000000");
        assert!(r.y.is_none());
        assert!(r.record.stop.is_none());
    }

    #[test]
    fn padding_with_zeros() {
        let f: BitString = "101".parse().unwrap();
        assert_eq!(padded_block(&f, 2, 1).to_string(), "10");
        assert_eq!(padded_block(&f, 2, 2).to_string(), "00");
    }
}
