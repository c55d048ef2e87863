//! Static Huffman coding over a grouped alphabet.
//!
//! A canonical Huffman code is built for the `s` group masses only. A letter
//! is written as its group's codeword followed by its zero-based position in
//! the group, in `log2(m_i)` raw bits, so group sizes must be powers of two.
//!
//! Letters are identified by their 0-based rank in the ordered distribution.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::bitio::{BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::grouping::{GroupingPlan, OrderedDistribution};

/// Scale applied to real group masses before building the code.
const WEIGHT_SCALE: f64 = (1u64 << 40) as f64;

/// Codeword lengths beyond this cannot be held in a `u64`.
pub const MAX_CODE_LEN: u8 = 64;

/// Huffman code over group masses plus fixed-width in-group indices.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedHuffmanCode {
    plan: GroupingPlan,
    alphabet: usize,
    lengths: Vec<u8>,
    codes: Vec<u64>,
    index_bits: Vec<u32>,
    // canonical decoding tables, indexed by length
    first_code: Vec<u64>,
    first_index: Vec<usize>,
    count: Vec<usize>,
    by_code: Vec<usize>,
}

/// Huffman codeword lengths for `weights`. Ties merge the pair whose smallest
/// member index is lower first, so results do not depend on heap internals.
pub fn huffman_lengths(weights: &[u64]) -> Vec<u8> {
    let s = weights.len();
    if s <= 1 {
        return vec![0; s];
    }
    // nodes 0..s are leaves; parents appended after
    let mut parent = vec![usize::MAX; s];
    let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| Reverse((w, i, i)))
        .collect();
    while heap.len() > 1 {
        let Reverse((wa, ta, a)) = heap.pop().unwrap();
        let Reverse((wb, tb, b)) = heap.pop().unwrap();
        let node = parent.len();
        parent.push(usize::MAX);
        parent[a] = node;
        parent[b] = node;
        heap.push(Reverse((wa.saturating_add(wb), ta.min(tb), node)));
    }
    (0..s)
        .map(|leaf| {
            let mut depth = 0u32;
            let mut n = leaf;
            while parent[n] != usize::MAX {
                n = parent[n];
                depth += 1;
            }
            depth.min(u8::MAX as u32) as u8
        })
        .collect()
}

impl GroupedHuffmanCode {
    /// Builds the code for an ordered distribution.
    pub fn build(p: &OrderedDistribution, plan: &GroupingPlan) -> Result<Self> {
        let masses = p.group_masses(plan)?;
        let weights: Vec<u64> = masses
            .iter()
            .map(|&pi| (pi * WEIGHT_SCALE).round() as u64)
            .collect();
        Self::from_weights(&weights, plan, p.len())
    }

    /// Builds the code from integer group weights; zero weights count as 1.
    pub fn from_weights(weights: &[u64], plan: &GroupingPlan, alphabet: usize) -> Result<Self> {
        Self::check_plan(plan, alphabet)?;
        if weights.len() != plan.num_groups() {
            return Err(Error::Domain(format!(
                "{} weights for {} groups",
                weights.len(),
                plan.num_groups()
            )));
        }
        let weights: Vec<u64> = weights.iter().map(|&w| w.max(1)).collect();
        Self::from_lengths(huffman_lengths(&weights), plan, alphabet)
    }

    fn check_plan(plan: &GroupingPlan, alphabet: usize) -> Result<()> {
        if !plan.is_pow2() {
            return Err(Error::Domain(
                "grouped Huffman coding needs power-of-two group sizes".into(),
            ));
        }
        if alphabet == 0 {
            return Err(Error::Domain("alphabet size must be positive".into()));
        }
        if plan.coverage() < alphabet as u64 {
            return Err(Error::Coverage {
                covered: plan.coverage(),
                needed: alphabet as u64,
            });
        }
        Ok(())
    }

    /// Rebuilds a canonical code from its group codeword lengths.
    pub fn from_lengths(lengths: Vec<u8>, plan: &GroupingPlan, alphabet: usize) -> Result<Self> {
        Self::check_plan(plan, alphabet)?;
        let s = plan.num_groups();
        if lengths.len() != s {
            return Err(Error::Format(format!(
                "{} code lengths for {s} groups",
                lengths.len()
            )));
        }
        if s > 1 && lengths.contains(&0) {
            return Err(Error::Format(
                "zero-length codeword among several groups".into(),
            ));
        }
        if lengths.iter().any(|&l| l > MAX_CODE_LEN) {
            return Err(Error::Format("codeword longer than 64 bits".into()));
        }
        let max_len = lengths.iter().copied().max().unwrap_or(0) as usize;
        // Kraft sum <= 1, checked exactly in units of 2^-max_len
        let kraft: u128 = lengths
            .iter()
            .map(|&l| 1u128 << (max_len - l as usize))
            .sum();
        if kraft > 1u128 << max_len {
            return Err(Error::Format(
                "code lengths violate the Kraft inequality".into(),
            ));
        }

        let mut by_code: Vec<usize> = (0..s).collect();
        by_code.sort_by_key(|&k| (lengths[k], k));
        let mut codes = vec![0u64; s];
        let mut count = vec![0usize; max_len + 1];
        let mut first_code = vec![0u64; max_len + 1];
        let mut first_index = vec![0usize; max_len + 1];
        let mut code = 0u64;
        let mut prev_len = lengths[by_code[0]];
        for (i, &k) in by_code.iter().enumerate() {
            let len = lengths[k];
            if len != prev_len {
                code <<= len - prev_len;
                prev_len = len;
            }
            if count[len as usize] == 0 {
                first_code[len as usize] = code;
                first_index[len as usize] = i;
            }
            count[len as usize] += 1;
            codes[k] = code;
            code = code.wrapping_add(1);
        }
        let index_bits = plan.sizes().iter().map(|m| m.trailing_zeros()).collect();
        Ok(GroupedHuffmanCode {
            plan: plan.clone(),
            alphabet,
            lengths,
            codes,
            index_bits,
            first_code,
            first_index,
            count,
            by_code,
        })
    }

    pub fn plan(&self) -> &GroupingPlan {
        &self.plan
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    /// Codeword length of each group.
    pub fn group_lengths(&self) -> &[u8] {
        &self.lengths
    }

    /// Codeword of group `k` as `(bits, length)`.
    pub fn group_code(&self, k: usize) -> (u64, u8) {
        (self.codes[k], self.lengths[k])
    }

    pub fn index_bits(&self, k: usize) -> u32 {
        self.index_bits[k]
    }

    fn check_letter(&self, letter: usize) -> Result<()> {
        if letter >= self.alphabet {
            return Err(Error::OutOfRange {
                index: letter,
                len: self.alphabet,
            });
        }
        Ok(())
    }

    /// Full codeword of `letter` as `(bits, length)`.
    pub fn codeword(&self, letter: usize) -> Result<(u128, u32)> {
        self.check_letter(letter)?;
        let k = self.plan.group_of_rank(letter as u64 + 1)?;
        let ordinal = letter as u64 - self.plan.prefixes()[k];
        let b = self.index_bits[k];
        let len = self.lengths[k] as u32 + b;
        Ok((((self.codes[k] as u128) << b) | ordinal as u128, len))
    }

    /// Codeword of `letter` as a string of `0`/`1`.
    pub fn codeword_string(&self, letter: usize) -> Result<String> {
        let (bits, len) = self.codeword(letter)?;
        Ok((0..len)
            .rev()
            .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect())
    }

    pub fn codeword_len(&self, letter: usize) -> Result<u32> {
        Ok(self.codeword(letter)?.1)
    }

    /// Expected codeword length under `p`, in bits per letter.
    pub fn average_length(&self, p: &OrderedDistribution) -> Result<f64> {
        if p.len() != self.alphabet {
            return Err(Error::Domain(
                "distribution size differs from the code's alphabet".into(),
            ));
        }
        let mut sum = 0.0;
        for (i, &pi) in p.probs().iter().enumerate() {
            sum += pi * self.codeword_len(i)? as f64;
        }
        Ok(sum)
    }

    pub fn write_letter(&self, w: &mut BitWriter, letter: usize) -> Result<()> {
        self.check_letter(letter)?;
        let k = self.plan.group_of_rank(letter as u64 + 1)?;
        w.write(self.codes[k], self.lengths[k] as u32);
        w.write(letter as u64 - self.plan.prefixes()[k], self.index_bits[k]);
        Ok(())
    }

    pub fn read_letter(&self, r: &mut BitReader<'_>) -> Result<usize> {
        let k = self.read_group(r)?;
        let ordinal = r.read(self.index_bits[k])?;
        let letter = self.plan.prefixes()[k] + ordinal;
        if letter >= self.alphabet as u64 {
            return Err(Error::Corrupt(format!(
                "letter {letter} beyond the alphabet"
            )));
        }
        Ok(letter as usize)
    }

    fn read_group(&self, r: &mut BitReader<'_>) -> Result<usize> {
        if self.by_code.len() == 1 {
            return Ok(0);
        }
        let mut code = 0u64;
        for len in 1..self.count.len() {
            code = (code << 1) | r.read_bit()? as u64;
            let n = self.count[len];
            if n > 0 && code >= self.first_code[len] && code - self.first_code[len] < n as u64 {
                return Ok(
                    self.by_code[self.first_index[len] + (code - self.first_code[len]) as usize]
                );
            }
        }
        Err(Error::Corrupt("no group codeword matches".into()))
    }

    /// Encodes a letter sequence; returns the packed bytes and the bit count.
    pub fn encode(&self, letters: &[usize]) -> Result<(Vec<u8>, u64)> {
        let mut w = BitWriter::new();
        for &a in letters {
            self.write_letter(&mut w, a)?;
        }
        let bits = w.bit_len();
        Ok((w.into_bytes(), bits))
    }

    pub fn decode(&self, bytes: &[u8], count: usize) -> Result<Vec<usize>> {
        let mut r = BitReader::new(bytes);
        (0..count).map(|_| self.read_letter(&mut r)).collect()
    }
}
