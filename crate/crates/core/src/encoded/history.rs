//! Encoded history layout: `i*` and `j*` as raw `log2 T`-bit fields, then the
//! Boolean Reed-Muller codeword of the message `S`, which lists `enc(v)` for
//! every node in reverse lexicographic order (leaves first) zero-padded to `5T`.

use std::sync::Arc;

use super::params::{EncParams, Profile};
use crate::bits::{BitOracle, BitString};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::ggm::TreeShape;
use crate::korten::{korten_run, HistoryRecord, Label};
use crate::oracle::PreimageOracle;
use crate::rm::{FieldOracle, RmCodeword, RmParams};

#[derive(Clone, Debug)]
pub struct EncodedLayout {
    pub shape: TreeShape,
    pub params: EncParams,
    /// Width of each stop field.
    pub sw: u32,
    rm: Arc<RmParams>,
}

impl EncodedLayout {
    pub fn new(shape: TreeShape, profile: Profile) -> Result<Self> {
        let params = EncParams::new(shape.t, profile)?;
        let labels = shape.nodes() as u128 * (shape.n as u128 + 1);
        if labels > 5 * shape.t as u128 {
            return Err(Error::param(format!(
                "labels for n = {}, T = {} need {labels} bits, more than 5T = {}",
                shape.n,
                shape.t,
                5 * shape.t
            )));
        }
        let field = crate::rm::Field::new(params.p)?;
        let rm = Arc::new(RmParams::new(field, params.delta, params.m)?);
        Ok(Self {
            shape,
            params,
            sw: params.delta as u32,
            rm,
        })
    }

    pub fn for_circuit(c: &Circuit, t: u64, profile: Profile) -> Result<Self> {
        Self::new(TreeShape::for_circuit(c, t)?, profile)
    }

    pub fn rm(&self) -> &Arc<RmParams> {
        &self.rm
    }

    pub fn block(&self) -> u64 {
        self.shape.n as u64 + 1
    }

    pub fn message_len(&self) -> u64 {
        5 * self.shape.t
    }

    /// Message bits occupied by labels; the rest is padding.
    pub fn labels_len(&self) -> u64 {
        self.shape.nodes() * self.block()
    }

    pub fn stop_len(&self) -> u64 {
        2 * self.sw as u64
    }

    /// Total bit length (stop fields plus Boolean codeword).
    pub fn len(&self) -> u128 {
        self.stop_len() as u128 + self.rm.codeword_bits()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Message offset of the label of `(i, j)`.
    pub fn label_offset(&self, i: u32, j: u64) -> u64 {
        (self.shape.nodes() - 1 - self.shape.lex_index(i, j)) * self.block()
    }

    /// The node whose label covers message position `q`, if any.
    pub fn node_of(&self, q: u64) -> Option<(u32, u64)> {
        (q < self.labels_len()).then(|| {
            self.shape
                .node_at(self.shape.nodes() - 1 - q / self.block())
        })
    }

    /// History bit holding message bit `q`.
    pub fn message_bit_index(&self, q: u64) -> u128 {
        self.stop_len() as u128 + self.rm.index_map(q)
    }

    /// History bit holding `f_i`.
    pub fn leaf_bit_index(&self, i: u64) -> u128 {
        let n = self.shape.n as u64;
        self.message_bit_index(self.label_offset(self.shape.k, i / n) + 1 + i % n)
    }

    pub fn message(&self, record: &HistoryRecord) -> BitString {
        let mut s = BitString::new();
        for idx in (0..self.shape.nodes()).rev() {
            s.extend(&Label::encode(
                record.labels[idx as usize].as_ref(),
                self.shape.n,
            ));
        }
        s.resized(self.message_len() as usize)
    }

    pub fn stop_bits(&self, stop: (u32, u64)) -> BitString {
        let mut s = BitString::from_u64(stop.0 as u64, self.sw as usize);
        s.extend(&BitString::from_u64(stop.1, self.sw as usize));
        s
    }

    /// Parses stop fields; `None` when they name no internal node.
    pub fn parse_stop(&self, bits: &BitString) -> Option<(u32, u64)> {
        let sw = self.sw as usize;
        let i = bits.slice(0, sw).to_u64();
        let j = bits.slice(sw, 2 * sw).to_u64();
        (i < self.shape.k as u64 && j < 1 << i).then_some((i as u32, j))
    }
}

/// A candidate encoded history: raw stop bits plus a field oracle standing in
/// for the Reed-Muller part.
#[derive(Clone, Debug)]
pub struct EncodedHistory<W = RmCodeword> {
    layout: Arc<EncodedLayout>,
    stop: BitString,
    word: W,
}

impl<W: FieldOracle> EncodedHistory<W> {
    pub fn from_parts(layout: Arc<EncodedLayout>, stop: BitString, word: W) -> Result<Self> {
        if stop.len() as u64 != layout.stop_len() {
            return Err(Error::shape(format!(
                "stop fields have {} bits, expected {}",
                stop.len(),
                layout.stop_len()
            )));
        }
        if word.dim() != layout.rm.m() || word.field() != layout.rm.field() {
            return Err(Error::shape(
                "codeword does not match the layout's field and dimension",
            ));
        }
        Ok(Self { layout, stop, word })
    }

    pub fn layout(&self) -> &Arc<EncodedLayout> {
        &self.layout
    }

    pub fn stop_bits(&self) -> &BitString {
        &self.stop
    }

    pub fn word(&self) -> &W {
        &self.word
    }

    pub fn map_word<V: FieldOracle>(self, f: impl FnOnce(W) -> V) -> EncodedHistory<V> {
        EncodedHistory {
            layout: self.layout,
            stop: self.stop,
            word: f(self.word),
        }
    }
}

impl EncodedHistory<RmCodeword> {
    /// Encodes a record; it must have a stop point.
    pub fn from_record(layout: Arc<EncodedLayout>, record: &HistoryRecord) -> Result<Self> {
        let stop = record
            .stop
            .ok_or_else(|| Error::ContractViolation("completed runs have no history".into()))?;
        let word = RmCodeword::from_bits(layout.rm.clone(), &layout.message(record))?;
        let stop = layout.stop_bits(stop);
        Ok(Self { layout, stop, word })
    }
}

impl<W: FieldOracle> BitOracle for EncodedHistory<W> {
    fn len(&self) -> u64 {
        u64::try_from(self.layout.len()).unwrap_or(u64::MAX)
    }

    fn bit(&self, i: u64) -> Result<bool> {
        let i = i as u128;
        if i >= self.layout.len() {
            return Err(Error::shape(format!("history bit {i} out of range")));
        }
        let s = self.layout.stop_len() as u128;
        if i < s {
            return Ok(self.stop.get(i as usize));
        }
        let b = self.layout.rm.field().symbol_bits() as u128;
        let off = i - s;
        let v = self.word.eval(&self.layout.rm.point_at(off / b));
        Ok((v >> (b - 1 - off % b)) & 1 == 1)
    }
}

/// Builds the encoded history of `Korten(C, f)`.
pub fn enc_history_build(
    oracle: &mut dyn PreimageOracle,
    c: &Circuit,
    f: &BitString,
    profile: Profile,
) -> Result<(HistoryRecord, EncodedHistory)> {
    let layout = Arc::new(EncodedLayout::for_circuit(c, f.len() as u64, profile)?);
    let run = korten_run(oracle, c, f)?;
    if run.y.is_none() {
        return Err(Error::ContractViolation(
            "f lies in the GGM range; no history exists".into(),
        ));
    }
    let h = EncodedHistory::from_record(layout, &run.record)?;
    Ok((run.record, h))
}

fn read_u128(h: &dyn BitOracle, i: u128) -> Result<bool> {
    let i =
        u64::try_from(i).map_err(|_| Error::capacity("history index beyond 64-bit addressing"))?;
    h.bit(i)
}

/// `f_i` read from an encoded history: one bit read.
pub fn enc_input(h: &dyn BitOracle, layout: &EncodedLayout, i: u64) -> Result<bool> {
    if i >= layout.shape.t {
        return Err(Error::shape(format!(
            "input index {i} out of range for T = {}",
            layout.shape.t
        )));
    }
    read_u128(h, layout.leaf_bit_index(i))
}

/// `Korten(C, f)` read from an encoded history: the stop fields plus the value
/// bits of the two children, `2 log2 T + 2n` reads.
pub fn enc_output(h: &dyn BitOracle, layout: &EncodedLayout) -> Result<BitString> {
    let stop: BitString = (0..layout.stop_len())
        .map(|i| h.bit(i))
        .collect::<Result<_>>()?;
    let (i, j) = layout
        .parse_stop(&stop)
        .ok_or_else(|| Error::Decode(format!("stop fields {stop} name no internal node")))?;
    let n = layout.shape.n as u64;
    let mut out = BitString::new();
    for child in [2 * j, 2 * j + 1] {
        let base = layout.label_offset(i + 1, child) + 1;
        for b in 0..n {
            out.push(read_u128(h, layout.message_bit_index(base + b))?);
        }
    }
    Ok(out)
}
