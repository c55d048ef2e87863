//! Alphabet kept sorted by occurrence count with constant-time updates.
//!
//! Five arrays: the count of every letter, the letters in ascending count
//! order, the inverse permutation, and the first and last position of every
//! count class. Letters with equal counts occupy a contiguous run, so moving a
//! letter to the next class is a swap with the run's boundary plus two bound
//! adjustments.
//!
//! Letters and positions are zero-based here. [`FrequencyOrder::dump`] prints
//! the 1-based layout.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Count classes whose bounds are allocated up front; higher classes are
/// appended with amortized growth.
pub const RESERVED_CLASSES: usize = 1 << 20;

/// Letter ids sorted by ascending count, with count-class bounds.
#[derive(Clone, Debug)]
pub struct FrequencyOrder {
    counts: Vec<u32>,
    sorted: Vec<u32>,
    inverse: Vec<u32>,
    // Only entries of nonempty classes are meaningful; the rest are stale.
    set_begin: Vec<u32>,
    set_end: Vec<u32>,
    max: u32,
    ops: u64,
}

impl FrequencyOrder {
    /// All counts zero, identity layout. `max` bounds every count.
    pub fn new(n: usize, max: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("alphabet size must be positive".into()));
        }
        if max == 0 {
            return Err(Error::Domain("count bound must be positive".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::Domain("alphabet size exceeds u32".into()));
        }
        // Bounds for classes 0..=max. Up to RESERVED_CLASSES the capacity is
        // reserved here, so growing into a new class does not reallocate.
        let reserve = (max as usize + 1).min(RESERVED_CLASSES);
        let mut set_begin = Vec::with_capacity(reserve);
        let mut set_end = Vec::with_capacity(reserve);
        set_begin.push(0);
        set_end.push(n as u32 - 1);
        Ok(FrequencyOrder {
            counts: vec![0; n],
            sorted: (0..n as u32).collect(),
            inverse: (0..n as u32).collect(),
            set_begin,
            set_end,
            max,
            ops: 0,
        })
    }

    /// Builds the structure from explicit counts. Ties keep letter-id order.
    pub fn from_counts(counts: Vec<u32>, max: u32) -> Result<Self> {
        let mut order = Self::new(counts.len(), max)?;
        if let Some((letter, _)) = counts.iter().enumerate().find(|(_, &c)| c > max) {
            return Err(Error::Saturated { letter, max });
        }
        let mut sorted: Vec<u32> = (0..counts.len() as u32).collect();
        sorted.sort_by_key(|&a| counts[a as usize]);
        let top = counts.iter().copied().max().unwrap_or(0) as usize;
        order.set_begin.resize(top + 1, 0);
        order.set_end.resize(top + 1, 0);
        for (pos, &a) in sorted.iter().enumerate() {
            order.inverse[a as usize] = pos as u32;
            let k = counts[a as usize] as usize;
            if pos == 0 || counts[sorted[pos - 1] as usize] as usize != k {
                order.set_begin[k] = pos as u32;
            }
            order.set_end[k] = pos as u32;
        }
        order.sorted = sorted;
        order.counts = counts;
        Ok(order)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn max_count(&self) -> u32 {
        self.max
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Letters in ascending count order.
    pub fn sorted(&self) -> &[u32] {
        &self.sorted
    }

    /// `inverse()[a]` is the ascending position of letter `a`.
    pub fn inverse(&self) -> &[u32] {
        &self.inverse
    }

    /// Start position of count class `k`; meaningful only if the class is nonempty.
    pub fn set_begin(&self, k: u32) -> u32 {
        self.set_begin.get(k as usize).copied().unwrap_or(0)
    }

    /// End position (inclusive) of count class `k`; meaningful only if nonempty.
    pub fn set_end(&self, k: u32) -> u32 {
        self.set_end.get(k as usize).copied().unwrap_or(0)
    }

    /// Primitive array reads and writes performed by increments and decrements so far.
    pub fn op_count(&self) -> u64 {
        self.ops
    }

    pub fn count(&self, letter: usize) -> Result<u32> {
        self.check_letter(letter)?;
        Ok(self.counts[letter])
    }

    fn check_letter(&self, letter: usize) -> Result<()> {
        if letter >= self.counts.len() {
            return Err(Error::OutOfRange {
                index: letter,
                len: self.counts.len(),
            });
        }
        Ok(())
    }

    /// Adds one occurrence of `letter`, returning its new ascending position.
    pub fn increment(&mut self, letter: usize) -> Result<usize> {
        self.check_letter(letter)?;
        let k = self.counts[letter];
        if k >= self.max {
            return Err(Error::Saturated {
                letter,
                max: self.max,
            });
        }
        self.ops += 1;
        let k = k as usize;
        let n = self.counts.len();
        let pos = self.inverse[letter] as usize;
        let end = self.set_end[k] as usize;
        let other = self.sorted[end] as usize;
        self.ops += 3;

        // swap with the last member of class k
        self.sorted[pos] = other as u32;
        self.sorted[end] = letter as u32;
        self.inverse[other] = pos as u32;
        self.inverse[letter] = end as u32;
        self.ops += 4;

        if k + 1 == self.set_begin.len() {
            self.set_begin.push(0);
            self.set_end.push(0);
        }
        let next_nonempty = if end + 1 < n {
            self.ops += 2;
            self.counts[self.sorted[end + 1] as usize] as usize == k + 1
        } else {
            false
        };
        if next_nonempty {
            self.set_begin[k + 1] = end as u32;
            self.ops += 1;
        } else {
            self.set_begin[k + 1] = end as u32;
            self.set_end[k + 1] = end as u32;
            self.ops += 2;
        }
        // class k keeps members iff it started before `end`
        self.ops += 1;
        if self.set_begin[k] as usize != end {
            self.set_end[k] = end as u32 - 1;
            self.ops += 1;
        }
        self.counts[letter] = k as u32 + 1;
        self.ops += 1;
        Ok(end)
    }

    /// Removes one occurrence of `letter`, returning its new ascending position.
    pub fn decrement(&mut self, letter: usize) -> Result<usize> {
        self.check_letter(letter)?;
        let k = self.counts[letter];
        if k == 0 {
            return Err(Error::Underflow { letter });
        }
        self.ops += 1;
        let k = k as usize;
        let pos = self.inverse[letter] as usize;
        let begin = self.set_begin[k] as usize;
        let other = self.sorted[begin] as usize;
        self.ops += 3;

        // swap with the first member of class k
        self.sorted[pos] = other as u32;
        self.sorted[begin] = letter as u32;
        self.inverse[other] = pos as u32;
        self.inverse[letter] = begin as u32;
        self.ops += 4;

        let prev_nonempty = if begin > 0 {
            self.ops += 2;
            self.counts[self.sorted[begin - 1] as usize] as usize == k - 1
        } else {
            false
        };
        if prev_nonempty {
            self.set_end[k - 1] = begin as u32;
            self.ops += 1;
        } else {
            self.set_begin[k - 1] = begin as u32;
            self.set_end[k - 1] = begin as u32;
            self.ops += 2;
        }
        self.ops += 1;
        if self.set_end[k] as usize != begin {
            self.set_begin[k] = begin as u32 + 1;
            self.ops += 1;
        }
        self.counts[letter] = k as u32 - 1;
        self.ops += 1;
        Ok(begin)
    }

    /// Ascending position of `letter`.
    pub fn position_of(&self, letter: usize) -> Result<usize> {
        self.check_letter(letter)?;
        Ok(self.inverse[letter] as usize)
    }

    /// Letter stored at ascending `position`.
    pub fn letter_at(&self, position: usize) -> Result<usize> {
        if position >= self.sorted.len() {
            return Err(Error::OutOfRange {
                index: position,
                len: self.sorted.len(),
            });
        }
        Ok(self.sorted[position] as usize)
    }

    /// Descending-frequency rank of `letter`, 1-based: `n - position`.
    pub fn rank_of(&self, letter: usize) -> Result<usize> {
        Ok(self.len() - self.position_of(letter)?)
    }

    /// Letter holding the 1-based descending `rank`.
    pub fn letter_at_rank(&self, rank: usize) -> Result<usize> {
        if rank == 0 || rank > self.len() {
            return Err(Error::OutOfRange {
                index: rank,
                len: self.len(),
            });
        }
        Ok(self.sorted[self.len() - rank] as usize)
    }

    /// Count of the letter at 1-based descending `rank`.
    pub fn count_at_rank(&self, rank: usize) -> u32 {
        self.counts[self.sorted[self.len() - rank] as usize]
    }

    /// Five lines, one per array, 1-based values. Class bounds are listed for
    /// counts `0..=max observed`; an empty class prints `0 0`.
    pub fn dump(&self) -> String {
        let top = self.counts.iter().copied().max().unwrap_or(0);
        let mut nonempty = vec![false; top as usize + 1];
        for &c in &self.counts {
            nonempty[c as usize] = true;
        }
        let join = |it: &mut dyn Iterator<Item = u64>| {
            it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "{}", join(&mut self.counts.iter().map(|&c| c as u64)));
        let _ = writeln!(
            out,
            "{}",
            join(&mut self.sorted.iter().map(|&a| a as u64 + 1))
        );
        let _ = writeln!(
            out,
            "{}",
            join(&mut self.inverse.iter().map(|&p| p as u64 + 1))
        );
        let bound = |arr: &[u32]| {
            (0..=top as usize)
                .map(|k| if nonempty[k] { arr[k] as u64 + 1 } else { 0 })
                .collect::<Vec<_>>()
        };
        let _ = writeln!(out, "{}", join(&mut bound(&self.set_begin).into_iter()));
        let _ = writeln!(out, "{}", join(&mut bound(&self.set_end).into_iter()));
        out
    }

    /// Checks every structural invariant; returns a description of the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.counts.len();
        if self.sorted.len() != n || self.inverse.len() != n {
            return Err("array lengths differ".into());
        }
        for a in 0..n {
            let p = self.inverse[a] as usize;
            if p >= n || self.sorted[p] as usize != a {
                return Err(format!("inverse mismatch at letter {a}"));
            }
        }
        for w in self.sorted.windows(2) {
            if self.counts[w[0] as usize] > self.counts[w[1] as usize] {
                return Err("sorted array is not ascending by count".into());
            }
        }
        let mut pos = 0usize;
        while pos < n {
            let k = self.counts[self.sorted[pos] as usize] as usize;
            if k as u32 > self.max {
                return Err(format!("count {k} above bound"));
            }
            let (b, e) = (self.set_begin[k] as usize, self.set_end[k] as usize);
            if b != pos {
                return Err(format!("class {k} begins at {b}, expected {pos}"));
            }
            if e >= n || e < b {
                return Err(format!("class {k} ends at {e}"));
            }
            for q in b..=e {
                if self.counts[self.sorted[q] as usize] as usize != k {
                    return Err(format!("position {q} is outside class {k}"));
                }
            }
            pos = e + 1;
        }
        Ok(())
    }
}
