//! Self-describing container: a fixed header followed by the coded payload.
//!
//! ```text
//! magic      4  b"GALF"
//! version    1  1
//! mode       1  0 plain | 1 grouped | 2 huffman
//! flags      1  bit 0: full-width last group
//! N          4  u32 LE
//! c_num      1
//! c_den      1
//! MAX        4  u32 LE
//! plan_len   4  u32 LE, then plan_len bytes of "s m_1 ... m_s" (empty for plain)
//! length     8  u64 LE, message length in symbols
//! huffman only:
//!   lengths  s  one codeword length per group
//!   ranking  4N u32 LE, letters in descending-frequency order
//! payload       range-coder bytes, or MSB-first Huffman bits zero-padded
//! ```
//!
//! An empty message has no payload.

use std::time::Instant;

use crate::ac::{
    decode_symbol_grouped, decode_symbol_plain, encode_symbol_grouped, encode_symbol_plain,
    RangeDecoder, RangeEncoder,
};
use crate::bitio::{BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::grouping::GroupingPlan;
use crate::huffman::GroupedHuffmanCode;
use crate::model::{GroupedModel, ModelConfig, PlainModel, Smoothing, MAX_ALPHABET};

pub const MAGIC: [u8; 4] = *b"GALF";
pub const VERSION: u8 = 1;

const FLAG_FULL_WIDTH: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Plain,
    Grouped,
    Huffman,
}

impl Mode {
    fn to_byte(self) -> u8 {
        match self {
            Mode::Plain => 0,
            Mode::Grouped => 1,
            Mode::Huffman => 2,
        }
    }

    fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(Mode::Plain),
            1 => Ok(Mode::Grouped),
            2 => Ok(Mode::Huffman),
            _ => Err(Error::Format(format!("unknown mode {b}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Grouped => "grouped",
            Mode::Huffman => "huffman",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Mode::Plain),
            "grouped" => Ok(Mode::Grouped),
            "huffman" => Ok(Mode::Huffman),
            _ => Err(Error::Format(format!("unknown mode {s:?}"))),
        }
    }
}

/// Static code tables carried by huffman-mode containers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuffmanTables {
    pub lengths: Vec<u8>,
    /// Letters in descending-frequency order; `ranking[r]` has 0-based rank `r`.
    pub ranking: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StreamHeader {
    pub mode: Mode,
    pub alphabet: u32,
    pub smoothing: Smoothing,
    pub max_count: u32,
    pub full_width: bool,
    pub plan: Option<GroupingPlan>,
    pub length: u64,
    pub huffman: Option<HuffmanTables>,
}

impl StreamHeader {
    pub fn model_config(&self) -> ModelConfig {
        ModelConfig {
            smoothing: self.smoothing,
            max_count: self.max_count,
            full_width: self.full_width,
        }
    }

    pub fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.mode.to_byte());
        out.push(if self.full_width { FLAG_FULL_WIDTH } else { 0 });
        out.extend_from_slice(&self.alphabet.to_le_bytes());
        out.push(self.smoothing.num());
        out.push(self.smoothing.den());
        out.extend_from_slice(&self.max_count.to_le_bytes());
        let plan = self
            .plan
            .as_ref()
            .map(|p| p.to_string())
            .unwrap_or_default();
        out.extend_from_slice(&(plan.len() as u32).to_le_bytes());
        out.extend_from_slice(plan.as_bytes());
        out.extend_from_slice(&self.length.to_le_bytes());
        if let Some(t) = &self.huffman {
            out.extend_from_slice(&t.lengths);
            for &a in &t.ranking {
                out.extend_from_slice(&a.to_le_bytes());
            }
        }
    }

    /// Parses a header, returning it with the number of bytes consumed.
    pub fn read(bytes: &[u8]) -> Result<(Self, usize)> {
        let mut r = Cursor { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let mode = Mode::from_byte(r.u8()?)?;
        let flags = r.u8()?;
        if flags & !FLAG_FULL_WIDTH != 0 {
            return Err(Error::Format(format!("unknown flags {flags:#x}")));
        }
        let alphabet = r.u32()?;
        let smoothing = Smoothing::new(r.u8()?, r.u8()?)?;
        let max_count = r.u32()?;
        let plan_len = r.u32()? as usize;
        let plan_text = std::str::from_utf8(r.take(plan_len)?)
            .map_err(|_| Error::Format("plan is not UTF-8".into()))?;
        let plan = if plan_len == 0 {
            None
        } else {
            Some(plan_text.parse::<GroupingPlan>()?)
        };
        let length = r.u64()?;
        if alphabet == 0 || max_count == 0 {
            return Err(Error::Format("zero alphabet size or count bound".into()));
        }
        if alphabet > MAX_ALPHABET {
            return Err(Error::Format(format!(
                "alphabet of {alphabet} letters is too large"
            )));
        }
        if mode != Mode::Plain && plan.is_none() {
            return Err(Error::Format(format!(
                "{} stream without a plan",
                mode.name()
            )));
        }
        let huffman = if mode == Mode::Huffman {
            let s = plan.as_ref().map(|p| p.num_groups()).unwrap_or(0);
            let lengths = r.take(s)?.to_vec();
            if bytes.len() - r.pos < 4 * alphabet as usize {
                return Err(Error::Format("letter ranking ends early".into()));
            }
            let mut ranking = Vec::with_capacity(alphabet as usize);
            let mut seen = vec![false; alphabet as usize];
            for _ in 0..alphabet {
                let a = r.u32()?;
                if a >= alphabet || std::mem::replace(&mut seen[a as usize], true) {
                    return Err(Error::Format("letter ranking is not a permutation".into()));
                }
                ranking.push(a);
            }
            Some(HuffmanTables { lengths, ranking })
        } else {
            None
        };
        Ok((
            StreamHeader {
                mode,
                alphabet,
                smoothing,
                max_count,
                full_width: flags & FLAG_FULL_WIDTH != 0,
                plan,
                length,
                huffman,
            },
            r.pos,
        ))
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("header ends early".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// How a message should be coded.
#[derive(Clone, Debug, PartialEq)]
pub struct CodecConfig {
    pub mode: Mode,
    pub alphabet: u32,
    pub model: ModelConfig,
    /// Required for grouped and huffman modes; huffman needs power-of-two sizes.
    pub plan: Option<GroupingPlan>,
}

impl CodecConfig {
    pub fn plain(alphabet: u32) -> Self {
        CodecConfig {
            mode: Mode::Plain,
            alphabet,
            model: ModelConfig::default(),
            plan: None,
        }
    }

    pub fn grouped(alphabet: u32, plan: GroupingPlan) -> Self {
        CodecConfig {
            mode: Mode::Grouped,
            alphabet,
            model: ModelConfig::default(),
            plan: Some(plan),
        }
    }

    pub fn huffman(alphabet: u32, plan: GroupingPlan) -> Self {
        CodecConfig {
            mode: Mode::Huffman,
            ..Self::grouped(alphabet, plan)
        }
    }

    pub fn with_model(mut self, model: ModelConfig) -> Self {
        self.model = model;
        self
    }
}

/// Work counters gathered while coding one message.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CodingStats {
    pub symbols: u64,
    /// Cumulative-tree node visits.
    pub tree_ops: u64,
    /// Primitive array accesses in the frequency-order structure (grouped mode).
    pub order_ops: u64,
    pub rescales: u64,
    pub header_bytes: u64,
    pub payload_bytes: u64,
    pub seconds: f64,
}

impl CodingStats {
    pub fn tree_ops_per_symbol(&self) -> f64 {
        if self.symbols == 0 {
            0.0
        } else {
            self.tree_ops as f64 / self.symbols as f64
        }
    }

    pub fn payload_bits_per_symbol(&self) -> f64 {
        if self.symbols == 0 {
            0.0
        } else {
            self.payload_bytes as f64 * 8.0 / self.symbols as f64
        }
    }
}

fn check_symbols(symbols: &[u32], alphabet: u32) -> Result<()> {
    if let Some(&a) = symbols.iter().find(|&&a| a >= alphabet) {
        return Err(Error::OutOfRange {
            index: a as usize,
            len: alphabet as usize,
        });
    }
    Ok(())
}

fn required_plan(config: &CodecConfig) -> Result<GroupingPlan> {
    config
        .plan
        .clone()
        .ok_or_else(|| Error::Domain(format!("{} mode needs a plan", config.mode.name())))
}

/// Codes `symbols` (each below `config.alphabet`) into a container.
pub fn compress(symbols: &[u32], config: &CodecConfig) -> Result<Vec<u8>> {
    Ok(compress_with_stats(symbols, config)?.0)
}

pub fn compress_with_stats(
    symbols: &[u32],
    config: &CodecConfig,
) -> Result<(Vec<u8>, CodingStats)> {
    check_symbols(symbols, config.alphabet)?;
    let n = config.alphabet as usize;
    let started = Instant::now();
    let mut stats = CodingStats {
        symbols: symbols.len() as u64,
        ..CodingStats::default()
    };
    let mut header = StreamHeader {
        mode: config.mode,
        alphabet: config.alphabet,
        smoothing: config.model.smoothing,
        max_count: config.model.max_count,
        full_width: config.model.full_width,
        plan: config.plan.clone(),
        length: symbols.len() as u64,
        huffman: None,
    };
    let payload = match config.mode {
        Mode::Plain => {
            header.plan = None;
            let mut model = PlainModel::new(n, config.model)?;
            let mut enc = RangeEncoder::new();
            for &a in symbols {
                encode_symbol_plain(&mut enc, &mut model, a as usize)?;
            }
            stats.tree_ops = model.tree_ops();
            stats.rescales = model.rescale_count();
            finish_range(enc, symbols.is_empty())
        }
        Mode::Grouped => {
            let mut model = GroupedModel::new(n, required_plan(config)?, config.model)?;
            let mut enc = RangeEncoder::new();
            for &a in symbols {
                encode_symbol_grouped(&mut enc, &mut model, a as usize)?;
            }
            stats.tree_ops = model.tree_ops();
            stats.order_ops = model.order().op_count();
            stats.rescales = model.rescale_count();
            finish_range(enc, symbols.is_empty())
        }
        Mode::Huffman => {
            let plan = required_plan(config)?;
            let mut counts = vec![0u64; n];
            for &a in symbols {
                counts[a as usize] += 1;
            }
            let mut ranking: Vec<u32> = (0..config.alphabet).collect();
            ranking.sort_by_key(|&a| std::cmp::Reverse(counts[a as usize]));
            let mut rank_of = vec![0usize; n];
            for (r, &a) in ranking.iter().enumerate() {
                rank_of[a as usize] = r;
            }
            let mut weights = vec![0u64; plan.num_groups()];
            for (r, &a) in ranking.iter().enumerate() {
                let k = plan.group_of_rank(r as u64 + 1)?;
                weights[k] += counts[a as usize];
            }
            let code = GroupedHuffmanCode::from_weights(&weights, &plan, n)?;
            let mut w = BitWriter::new();
            for &a in symbols {
                code.write_letter(&mut w, rank_of[a as usize])?;
            }
            header.huffman = Some(HuffmanTables {
                lengths: code.group_lengths().to_vec(),
                ranking,
            });
            w.into_bytes()
        }
    };
    let mut out = Vec::new();
    header.write(&mut out);
    stats.header_bytes = out.len() as u64;
    stats.payload_bytes = payload.len() as u64;
    out.extend_from_slice(&payload);
    stats.seconds = started.elapsed().as_secs_f64();
    Ok((out, stats))
}

fn finish_range(enc: RangeEncoder, empty: bool) -> Vec<u8> {
    if empty {
        Vec::new()
    } else {
        enc.finish()
    }
}

/// Decodes a container produced by [`compress`].
pub fn decompress(bytes: &[u8]) -> Result<Vec<u32>> {
    Ok(decompress_with_stats(bytes)?.0)
}

pub fn decompress_with_stats(bytes: &[u8]) -> Result<(Vec<u32>, CodingStats)> {
    let started = Instant::now();
    let (header, used) = StreamHeader::read(bytes)?;
    let payload = &bytes[used..];
    let n = header.alphabet as usize;
    let len = header.length;
    let mut stats = CodingStats {
        symbols: len,
        header_bytes: used as u64,
        payload_bytes: payload.len() as u64,
        ..CodingStats::default()
    };
    // No symbol of a multi-letter alphabet is coded with probability above
    // 1 - 2^-32, so each costs more than 2^-32 bits of payload.
    if n > 1 && len > (payload.len() as u64 * 8 + 64).saturating_mul(1 << 32) {
        return Err(Error::Corrupt(
            "message length is implausible for the payload".into(),
        ));
    }
    let mut out = Vec::with_capacity(len.min(1 << 24) as usize);
    match header.mode {
        Mode::Plain => {
            let mut model = PlainModel::new(n, header.model_config())?;
            if len > 0 {
                let mut dec = RangeDecoder::new(payload)?;
                for _ in 0..len {
                    out.push(decode_symbol_plain(&mut dec, &mut model)? as u32);
                }
            }
            stats.tree_ops = model.tree_ops();
            stats.rescales = model.rescale_count();
        }
        Mode::Grouped => {
            let plan = header.plan.clone().expect("checked when parsing");
            let mut model = GroupedModel::new(n, plan, header.model_config())?;
            if len > 0 {
                let mut dec = RangeDecoder::new(payload)?;
                for _ in 0..len {
                    out.push(decode_symbol_grouped(&mut dec, &mut model)? as u32);
                }
            }
            stats.tree_ops = model.tree_ops();
            stats.order_ops = model.order().op_count();
            stats.rescales = model.rescale_count();
        }
        Mode::Huffman => {
            let plan = header.plan.clone().expect("checked when parsing");
            let tables = header.huffman.as_ref().expect("checked when parsing");
            let code = GroupedHuffmanCode::from_lengths(tables.lengths.clone(), &plan, n)?;
            let mut r = BitReader::new(payload);
            for _ in 0..len {
                let rank = code.read_letter(&mut r)?;
                out.push(tables.ranking[rank]);
            }
        }
    }
    stats.seconds = started.elapsed().as_secs_f64();
    Ok((out, stats))
}

/// Codes raw bytes as symbols of a 256-letter alphabet.
pub fn compress_bytes(data: &[u8], config: &CodecConfig) -> Result<Vec<u8>> {
    let symbols: Vec<u32> = data.iter().map(|&b| b as u32).collect();
    compress(&symbols, config)
}

/// Inverse of [`compress_bytes`]; fails if a decoded symbol is not a byte.
pub fn decompress_bytes(bytes: &[u8]) -> Result<Vec<u8>> {
    decompress(bytes)?
        .into_iter()
        .map(|s| u8::try_from(s).map_err(|_| Error::Corrupt(format!("symbol {s} is not a byte"))))
        .collect()
}
