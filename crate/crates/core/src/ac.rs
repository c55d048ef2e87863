//! Integer arithmetic coding.
//!
//! The coder is a byte-oriented range coder with carry propagation. `low` is a
//! 64-bit register holding 56 bits of interval base plus a carry bit; `range`
//! lives in `[2^48, 2^56)` after every step. A byte is shifted out whenever the
//! range drops below `2^48`. Bytes whose value may still change through a carry
//! are held back as one cached byte plus a run of pending `0xFF`s.
//!
//! On top of it sit two symbol codings:
//!
//! * grouped: the letter's group is coded against the group masses, then its
//!   zero-based ordinal inside the group is coded as a uniform value over the
//!   group width;
//! * plain: the letter is coded against its own mass among all `N` letters.

use crate::error::{Error, Result};
use crate::model::{GroupedModel, PlainModel, TOTAL_LIMIT};

const RANGE_BITS: u32 = 56;
const SHIFT: u32 = RANGE_BITS - 8;
const RANGE_INIT: u64 = (1 << RANGE_BITS) - 1;
const RENORM: u64 = 1 << SHIFT;
const LOW_MASK: u64 = (1 << SHIFT) - 1;

/// Bytes emitted when the encoder is finished.
const FLUSH_BYTES: usize = (RANGE_BITS / 8) as usize + 1;

/// Encoder half of the range coder.
#[derive(Debug)]
pub struct RangeEncoder {
    low: u64,
    range: u64,
    cache: u8,
    pending: u64,
    out: Vec<u8>,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        RangeEncoder {
            low: 0,
            range: RANGE_INIT,
            cache: 0,
            pending: 1,
            out: Vec::new(),
        }
    }

    pub fn low(&self) -> u64 {
        self.low
    }

    pub fn range(&self) -> u64 {
        self.range
    }

    /// Bytes emitted so far (excluding held-back bytes).
    pub fn bytes_written(&self) -> usize {
        self.out.len()
    }

    /// Narrows to `[cum, cum + freq)` out of `total`.
    pub fn encode(&mut self, cum: u64, freq: u64, total: u64) {
        debug_assert!(freq > 0 && cum + freq <= total && total <= TOTAL_LIMIT);
        let r = self.range / total;
        self.low += r * cum;
        self.range = r * freq;
        self.normalize();
    }

    /// Narrows to the `value`-th of `2^bits` equal parts.
    pub fn encode_pow2(&mut self, value: u64, bits: u32) {
        debug_assert!(bits <= 32 && value >> bits == 0);
        let r = self.range >> bits;
        self.low += r * value;
        self.range = r;
        self.normalize();
    }

    /// Narrows to the `value`-th of `width` equal parts.
    pub fn encode_uniform(&mut self, value: u64, width: u64) {
        if width.is_power_of_two() {
            self.encode_pow2(value, width.trailing_zeros());
        } else {
            self.encode(value, 1, width);
        }
    }

    fn normalize(&mut self) {
        while self.range < RENORM {
            self.range <<= 8;
            self.shift_low();
        }
    }

    fn shift_low(&mut self) {
        if self.low < (0xFFu64 << SHIFT) || self.low >> RANGE_BITS != 0 {
            let carry = (self.low >> RANGE_BITS) as u8;
            let mut byte = self.cache;
            loop {
                self.out.push(byte.wrapping_add(carry));
                byte = 0xFF;
                self.pending -= 1;
                if self.pending == 0 {
                    break;
                }
            }
            self.cache = (self.low >> SHIFT) as u8;
        }
        self.pending += 1;
        self.low = (self.low & LOW_MASK) << 8;
    }

    /// Flushes the remaining state and returns the coded bytes.
    pub fn finish(mut self) -> Vec<u8> {
        for _ in 0..FLUSH_BYTES {
            self.shift_low();
        }
        self.out
    }
}

/// Decoder half of the range coder, reading from a byte slice.
#[derive(Debug)]
pub struct RangeDecoder<'a> {
    data: &'a [u8],
    pos: usize,
    range: u64,
    code: u64,
    step: u64,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(data: &'a [u8]) -> Result<Self> {
        let mut dec = RangeDecoder {
            data,
            pos: 0,
            range: RANGE_INIT,
            code: 0,
            step: 0,
        };
        if dec.next_byte()? != 0 {
            return Err(Error::Corrupt("payload must start with a zero byte".into()));
        }
        for _ in 1..FLUSH_BYTES {
            dec.code = (dec.code << 8) | dec.next_byte()? as u64;
        }
        Ok(dec)
    }

    /// Bytes consumed so far.
    pub fn position(&self) -> usize {
        self.pos
    }

    fn next_byte(&mut self) -> Result<u8> {
        let b = *self
            .data
            .get(self.pos)
            .ok_or_else(|| Error::Corrupt("payload ends early".into()))?;
        self.pos += 1;
        Ok(b)
    }

    /// Scaled code value in `0..total`; must be followed by [`consume`](Self::consume).
    pub fn target(&mut self, total: u64) -> Result<u64> {
        self.step = self.range / total;
        let v = self.code / self.step;
        if v >= total {
            return Err(Error::Corrupt(format!("code value {v} outside 0..{total}")));
        }
        Ok(v)
    }

    /// Removes the interval `[cum, cum + freq)` chosen after [`target`](Self::target).
    pub fn consume(&mut self, cum: u64, freq: u64) -> Result<()> {
        self.code -= self.step * cum;
        self.range = self.step * freq;
        self.normalize()
    }

    pub fn decode_pow2(&mut self, bits: u32) -> Result<u64> {
        self.step = self.range >> bits;
        let v = self.code / self.step;
        if v >> bits != 0 {
            return Err(Error::Corrupt(format!(
                "ordinal {v} outside {bits}-bit range"
            )));
        }
        self.code -= self.step * v;
        self.range = self.step;
        self.normalize()?;
        Ok(v)
    }

    pub fn decode_uniform(&mut self, width: u64) -> Result<u64> {
        if width.is_power_of_two() {
            return self.decode_pow2(width.trailing_zeros());
        }
        let v = self.target(width)?;
        self.consume(v, 1)?;
        Ok(v)
    }

    fn normalize(&mut self) -> Result<()> {
        while self.range < RENORM {
            self.range <<= 8;
            self.code = (self.code << 8) | self.next_byte()? as u64;
        }
        Ok(())
    }
}

/// Codes `letter` as (group, ordinal) and updates the model.
pub fn encode_symbol_grouped(
    enc: &mut RangeEncoder,
    model: &mut GroupedModel,
    letter: usize,
) -> Result<()> {
    let (k, ordinal) = model.symbol_of(letter)?;
    let (lo, hi) = model.group_interval(k)?;
    enc.encode(lo, hi - lo, model.total());
    let width = model.ordinal_width(k);
    if width > 1 {
        enc.encode_uniform(ordinal, width);
    }
    model.update(letter)
}

/// Inverse of [`encode_symbol_grouped`].
pub fn decode_symbol_grouped(
    dec: &mut RangeDecoder<'_>,
    model: &mut GroupedModel,
) -> Result<usize> {
    let target = dec.target(model.total())?;
    let (k, lo) = model.locate(target)?;
    dec.consume(lo, model.group_mass(k))?;
    let width = model.ordinal_width(k);
    let ordinal = if width > 1 {
        dec.decode_uniform(width)?
    } else {
        0
    };
    let letter = model.letter_of(k, ordinal)?;
    model.update(letter)?;
    Ok(letter)
}

/// Codes `letter` against its own mass and updates the model.
pub fn encode_symbol_plain(
    enc: &mut RangeEncoder,
    model: &mut PlainModel,
    letter: usize,
) -> Result<()> {
    let (lo, freq) = model.interval(letter)?;
    enc.encode(lo, freq, model.total());
    model.update(letter)
}

/// Inverse of [`encode_symbol_plain`].
pub fn decode_symbol_plain(dec: &mut RangeDecoder<'_>, model: &mut PlainModel) -> Result<usize> {
    let target = dec.target(model.total())?;
    let (letter, lo, freq) = model.locate(target)?;
    dec.consume(lo, freq)?;
    model.update(letter)?;
    Ok(letter)
}
