//! Serialized vanilla history: `i*` and `j*` as `ceil(log2 T)`-bit big-endian
//! fields, then `enc(v)` for every node in lexicographic order (leaves
//! included), zero-padded to `5T` bits. `enc(v) = 0 ∘ v` and `enc(⊥) = 1^{n+1}`.

use super::{korten_run, HistoryRecord};
use crate::bits::{ceil_log2, BitOracle, BitString};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::ggm::TreeShape;
use crate::oracle::PreimageOracle;

/// A decoded `n+1`-bit label block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    Value(BitString),
    Bottom,
    Malformed,
}

impl Label {
    pub fn decode(block: &[bool]) -> Self {
        match block.split_first() {
            Some((false, v)) => Label::Value(BitString::from_bits(v.to_vec())),
            Some((true, rest)) if rest.iter().all(|&b| b) => Label::Bottom,
            _ => Label::Malformed,
        }
    }

    pub fn encode(v: Option<&BitString>, n: usize) -> BitString {
        match v {
            Some(v) => BitString::zeros(1).concat(v),
            None => BitString::ones(n + 1),
        }
    }

    pub fn value(&self) -> Option<&BitString> {
        match self {
            Label::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HistoryLayout {
    pub shape: TreeShape,
    /// Width of each stop field.
    pub sw: u32,
}

impl HistoryLayout {
    pub fn new(shape: TreeShape) -> Result<Self> {
        let layout = Self {
            shape,
            sw: ceil_log2(shape.t),
        };
        if layout.structured_len() > layout.len() {
            return Err(Error::param(format!(
                "history for n = {}, T = {} needs {} bits, more than 5T = {}",
                shape.n,
                shape.t,
                layout.structured_len(),
                layout.len()
            )));
        }
        Ok(layout)
    }

    pub fn for_circuit(c: &Circuit, t: u64) -> Result<Self> {
        Self::new(TreeShape::for_circuit(c, t)?)
    }

    pub fn len(&self) -> u64 {
        5 * self.shape.t
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn block(&self) -> u64 {
        self.shape.n as u64 + 1
    }

    pub fn label_offset(&self, i: u32, j: u64) -> u64 {
        2 * self.sw as u64 + self.shape.lex_index(i, j) * self.block()
    }

    pub fn structured_len(&self) -> u64 {
        2 * self.sw as u64 + self.shape.nodes() * self.block()
    }

    /// Index of `f_i` inside the history.
    pub fn leaf_bit_index(&self, i: u64) -> u64 {
        let n = self.shape.n as u64;
        self.label_offset(self.shape.k, i / n) + 1 + i % n
    }

    pub fn serialize(&self, record: &HistoryRecord) -> Result<BitString> {
        let (i, j) = record
            .stop
            .ok_or_else(|| Error::ContractViolation("completed runs have no history".into()))?;
        let mut out = BitString::from_u64(i as u64, self.sw as usize);
        out.extend(&BitString::from_u64(j, self.sw as usize));
        for v in &record.labels {
            out.extend(&Label::encode(v.as_ref(), self.shape.n));
        }
        Ok(out.resized(self.len() as usize))
    }

    /// Strict decoding: valid stop fields, well-formed labels, zero padding.
    pub fn decode(&self, bits: &BitString) -> Result<HistoryRecord> {
        if bits.len() as u64 != self.len() {
            return Err(Error::Decode(format!(
                "history has {} bits, expected {}",
                bits.len(),
                self.len()
            )));
        }
        let stop = self.decode_stop(bits)?;
        let b = self.block() as usize;
        let mut labels = Vec::with_capacity(self.shape.nodes() as usize);
        for idx in 0..self.shape.nodes() {
            let off = self.label_offset(0, 0) as usize + idx as usize * b;
            match Label::decode(&bits.as_slice()[off..off + b]) {
                Label::Value(v) => labels.push(Some(v)),
                Label::Bottom => labels.push(None),
                Label::Malformed => {
                    return Err(Error::Decode(format!(
                        "malformed label at node index {idx}"
                    )))
                }
            }
        }
        if bits.as_slice()[self.structured_len() as usize..]
            .iter()
            .any(|&x| x)
        {
            return Err(Error::Decode("nonzero padding".into()));
        }
        Ok(HistoryRecord {
            shape: self.shape,
            stop: Some(stop),
            labels,
        })
    }

    fn decode_stop(&self, h: &dyn BitOracle) -> Result<(u32, u64)> {
        let read = |start: u64| -> Result<u64> {
            (start..start + self.sw as u64)
                .try_fold(0u64, |acc, p| Ok((acc << 1) | h.bit(p)? as u64))
        };
        let i = read(0)?;
        let j = read(self.sw as u64)?;
        if i >= self.shape.k as u64 || j >= 1 << i {
            return Err(Error::Decode(format!("stop point ({i}, {j}) out of range")));
        }
        Ok((i as u32, j))
    }

    /// Reads and validates the stop fields.
    pub fn read_stop(&self, h: &dyn BitOracle) -> Result<(u32, u64)> {
        self.decode_stop(h)
    }

    pub fn read_label(&self, h: &dyn BitOracle, i: u32, j: u64) -> Result<Label> {
        let off = self.label_offset(i, j);
        let block = (off..off + self.block())
            .map(|p| h.bit(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Label::decode(&block))
    }
}

/// Builds the serialized history of `Korten(C, f)`.
pub fn history_build(
    oracle: &mut dyn PreimageOracle,
    c: &Circuit,
    f: &BitString,
) -> Result<(HistoryRecord, BitString)> {
    let layout = HistoryLayout::for_circuit(c, f.len() as u64)?;
    let run = korten_run(oracle, c, f)?;
    if run.y.is_none() {
        return Err(Error::ContractViolation(
            "f lies in the GGM range; no history exists".into(),
        ));
    }
    let bits = layout.serialize(&run.record)?;
    Ok((run.record, bits))
}

/// `f_i` read from a history: exactly one bit read.
pub fn history_input(h: &dyn BitOracle, layout: &HistoryLayout, i: u64) -> Result<bool> {
    if i >= layout.shape.t {
        return Err(Error::shape(format!(
            "input index {i} out of range for T = {}",
            layout.shape.t
        )));
    }
    h.bit(layout.leaf_bit_index(i))
}

/// `Korten(C, f)` read from a history: the stop fields plus the value bits of
/// the two children, `2 ceil(log2 T) + 2n` reads.
pub fn history_output(h: &dyn BitOracle, layout: &HistoryLayout) -> Result<BitString> {
    let (i, j) = layout.read_stop(h)?;
    let start = layout.label_offset(i + 1, 2 * j);
    let n = layout.shape.n as u64;
    let mut out = BitString::new();
    for child in 0..2 {
        let base = start + child * layout.block() + 1;
        for b in 0..n {
            out.push(h.bit(base + b)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::CountingOracle;
    use crate::oracle::ExhaustiveOracle;

    #[test]
    fn dup2_history() {
        let c = Circuit::dup(2);
        let f: BitString = "00011011".parse().unwrap();
        let (rec, h) = history_build(&mut ExhaustiveOracle::default(), &c, &f).unwrap();
        assert_eq!(h.len(), 40);
        let layout = HistoryLayout::for_circuit(&c, 8).unwrap();
        assert_eq!(layout.decode(&h).unwrap(), rec);
        // stop (1,1) then three ⊥ blocks then the leaves
        assert_eq!(h.slice(0, 6).to_string(), "001001");
        assert_eq!(h.slice(6, 15).to_string(), "111111111");
        assert_eq!(h.slice(15, 27).to_string(), "000001010011");
        assert!(!history_input(&h, &layout, 5).unwrap());
        let counted = CountingOracle::new(&h);
        assert_eq!(
            history_output(&counted, &layout).unwrap().to_string(),
            "1011"
        );
        assert_eq!(counted.reads(), 2 * 3 + 2 * 2);
    }

    #[test]
    fn completed_runs_have_no_history() {
        let c = Circuit::dup(2);
        let r = history_build(
            &mut ExhaustiveOracle::default(),
            &c,
            &"00000000".parse().unwrap(),
        );
        assert!(matches!(r, Err(Error::ContractViolation(_))));
    }

    #[test]
    fn oversized_layouts_rejected() {
        assert!(HistoryLayout::new(TreeShape::new(2, 9).unwrap()).is_err());
        for t in [8, 16, 32] {
            assert!(HistoryLayout::new(TreeShape::new(2, t).unwrap()).is_ok());
        }
    }
}
