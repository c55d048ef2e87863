//! Adaptive memoryless source models over integer count masses.
//!
//! A letter seen `v` times has mass `v * c_den + c_num`, so the estimate
//! `(v + c) / (t + N c)` with a rational `c = c_num / c_den` stays integral.
//!
//! [`GroupedModel`] assigns the same probability to every letter of a group.
//! Groups are fixed ranges of descending-frequency ranks; which letter sits at
//! which rank is tracked by a [`FrequencyOrder`]. The coder only needs the
//! masses of the `s` groups, kept in a binary indexed tree.
//!
//! [`PlainModel`] is the usual per-letter model with a tree over all `N`
//! letters.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fenwick::Fenwick;
use crate::freq_order::FrequencyOrder;
use crate::grouping::GroupingPlan;

/// Totals are kept at or below this so the coder's 48-bit minimum range
/// leaves at least 16 bits of resolution per unit of mass.
pub const TOTAL_LIMIT: u64 = 1 << 32;

/// Largest supported alphabet.
pub const MAX_ALPHABET: u32 = 1 << 24;

/// Default per-letter count bound before all counts are halved.
pub const DEFAULT_MAX_COUNT: u32 = 1 << 24;

/// Additive smoothing constant `c = num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Smoothing {
    num: u8,
    den: u8,
}

impl Smoothing {
    pub const ONE: Smoothing = Smoothing { num: 1, den: 1 };
    pub const HALF: Smoothing = Smoothing { num: 1, den: 2 };

    pub fn new(num: u8, den: u8) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::Domain(format!(
                "smoothing {num}/{den} must have a positive numerator and denominator"
            )));
        }
        Ok(Smoothing { num, den })
    }

    pub fn num(self) -> u8 {
        self.num
    }

    pub fn den(self) -> u8 {
        self.den
    }

    #[inline]
    fn mass(self, count: u32) -> u64 {
        count as u64 * self.den as u64 + self.num as u64
    }
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing::ONE
    }
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Smoothing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u8>()
                .map_err(|e| Error::Format(format!("bad smoothing constant {s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Smoothing::new(parse(n)?, parse(d)?),
            None => Smoothing::new(parse(s)?, 1),
        }
    }
}

/// Exact nonnegative fraction; equality compares values, not representations.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

/// Parameters shared by both models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelConfig {
    pub smoothing: Smoothing,
    pub max_count: u32,
    /// Code the last group's ordinal over its full planned width even when the
    /// plan runs past the alphabet.
    pub full_width: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            smoothing: Smoothing::ONE,
            max_count: DEFAULT_MAX_COUNT,
            full_width: false,
        }
    }
}

fn check_config(n: usize, config: ModelConfig) -> Result<()> {
    let smoothing = config.smoothing;
    if config.max_count < 2 {
        return Err(Error::Domain(format!(
            "count bound {} is below 2; halving could not make room",
            config.max_count
        )));
    }
    if n == 0 {
        return Err(Error::Domain("alphabet size must be positive".into()));
    }
    if n > MAX_ALPHABET as usize {
        return Err(Error::Domain(format!(
            "alphabet of {n} letters exceeds the supported {MAX_ALPHABET}"
        )));
    }
    if n as u64 * smoothing.num as u64 >= TOTAL_LIMIT / 2 {
        return Err(Error::Domain(format!(
            "alphabet of {n} letters leaves no room under the total limit"
        )));
    }
    Ok(())
}

/// Adaptive model over groups of equally likely letters.
#[derive(Clone, Debug)]
pub struct GroupedModel {
    order: FrequencyOrder,
    plan: GroupingPlan,
    config: ModelConfig,
    /// First descending rank (0-based) of each group, truncated to the alphabet.
    starts: Vec<u64>,
    /// Letters of each group that exist in the alphabet.
    sizes: Vec<u64>,
    /// Width the in-group ordinal is coded with.
    widths: Vec<u64>,
    /// Group index of each 0-based descending rank.
    group_by_rank: Vec<u32>,
    group_mass: Vec<u64>,
    tree: Fenwick,
    total: u64,
    seen: u64,
    rescales: u64,
    last_touched: usize,
}

impl GroupedModel {
    pub fn new(n: usize, plan: GroupingPlan, config: ModelConfig) -> Result<Self> {
        check_config(n, config)?;
        if plan.coverage() < n as u64 {
            return Err(Error::Coverage {
                covered: plan.coverage(),
                needed: n as u64,
            });
        }
        let order = FrequencyOrder::new(n, config.max_count)?;
        let mut starts = Vec::new();
        let mut sizes = Vec::new();
        let mut widths = Vec::new();
        for (&start, &m) in plan.prefixes().iter().zip(plan.sizes()) {
            if start >= n as u64 {
                break;
            }
            let eff = m.min(n as u64 - start);
            starts.push(start);
            sizes.push(eff);
            widths.push(if config.full_width { m } else { eff });
        }
        if widths.iter().any(|&w| w > TOTAL_LIMIT) {
            return Err(Error::Domain(
                "a group is wider than the coder can resolve".into(),
            ));
        }
        let mut group_by_rank = Vec::with_capacity(n);
        for (k, &m) in sizes.iter().enumerate() {
            group_by_rank.extend(std::iter::repeat_n(k as u32, m as usize));
        }
        let mut model = GroupedModel {
            order,
            plan,
            config,
            starts,
            sizes,
            widths,
            group_by_rank,
            group_mass: Vec::new(),
            tree: Fenwick::default(),
            total: 0,
            seen: 0,
            rescales: 0,
            last_touched: 0,
        };
        model.rebuild_masses();
        Ok(model)
    }

    fn rebuild_masses(&mut self) {
        self.group_mass = self.scratch_masses();
        self.tree = Fenwick::from_values(&self.group_mass);
        self.total = self.group_mass.iter().sum();
    }

    /// Group masses recomputed from the letter counts and the rank layout.
    pub fn scratch_masses(&self) -> Vec<u64> {
        let c = self.config.smoothing;
        self.starts
            .iter()
            .zip(&self.sizes)
            .map(|(&start, &m)| {
                (start..start + m)
                    .map(|r| c.mass(self.order.count_at_rank(r as usize + 1)))
                    .sum()
            })
            .collect()
    }

    pub fn alphabet_size(&self) -> usize {
        self.order.len()
    }

    pub fn plan(&self) -> &GroupingPlan {
        &self.plan
    }

    pub fn config(&self) -> ModelConfig {
        self.config
    }

    pub fn order(&self) -> &FrequencyOrder {
        &self.order
    }

    /// Number of groups that hold at least one letter.
    pub fn num_groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn group_size(&self, k: usize) -> u64 {
        self.sizes[k]
    }

    pub fn ordinal_width(&self, k: usize) -> u64 {
        self.widths[k]
    }

    pub fn group_mass(&self, k: usize) -> u64 {
        self.group_mass[k]
    }

    pub fn group_masses(&self) -> &[u64] {
        &self.group_mass
    }

    /// `t * c_den + N * c_num`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Letters processed since the last rescale started counting, i.e. the sum of counts.
    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn rescale_count(&self) -> u64 {
        self.rescales
    }

    /// Groups whose mass changed in the most recent update.
    pub fn last_update_touched(&self) -> usize {
        self.last_touched
    }

    /// Cumulative-tree node visits so far.
    pub fn tree_ops(&self) -> u64 {
        self.tree.op_count()
    }

    /// Adaptive estimate `(v + c) / (t + N c)` of `letter`.
    pub fn letter_probability(&self, letter: usize) -> Result<Ratio> {
        let v = self.order.count(letter)?;
        Ok(Ratio::new(self.config.smoothing.mass(v), self.total))
    }

    /// Probability the coder actually uses for `letter`: its group's share
    /// spread evenly over the ordinal width.
    pub fn coded_probability(&self, letter: usize) -> Result<Ratio> {
        let (k, _) = self.symbol_of(letter)?;
        Ok(Ratio::new(self.group_mass[k], self.total * self.widths[k]))
    }

    /// Zero-based group of the 1-based descending `rank`.
    pub fn group_of_rank(&self, rank: usize) -> Result<usize> {
        if rank == 0 || rank > self.group_by_rank.len() {
            return Err(Error::OutOfRange {
                index: rank,
                len: self.group_by_rank.len(),
            });
        }
        Ok(self.group_by_rank[rank - 1] as usize)
    }

    /// Cumulative mass bounds `(Q_k, Q_{k+1})` of group `k`, out of [`total`](Self::total).
    pub fn group_interval(&mut self, k: usize) -> Result<(u64, u64)> {
        if k >= self.sizes.len() {
            return Err(Error::OutOfRange {
                index: k,
                len: self.sizes.len(),
            });
        }
        let lo = self.tree.prefix(k);
        Ok((lo, lo + self.group_mass[k]))
    }

    /// Group and zero-based in-group ordinal of `letter`.
    pub fn symbol_of(&self, letter: usize) -> Result<(usize, u64)> {
        let rank = self.order.rank_of(letter)?;
        let k = self.group_by_rank[rank - 1] as usize;
        Ok((k, rank as u64 - 1 - self.starts[k]))
    }

    /// Letter currently at ordinal `j` of group `k`.
    pub fn letter_of(&self, k: usize, j: u64) -> Result<usize> {
        if k >= self.sizes.len() || j >= self.sizes[k] {
            return Err(Error::Corrupt(format!("ordinal {j} outside group {k}")));
        }
        self.order.letter_at_rank((self.starts[k] + j) as usize + 1)
    }

    /// Group whose cumulative interval holds `target`, with the interval's lower bound.
    pub fn locate(&mut self, target: u64) -> Result<(usize, u64)> {
        if target >= self.total {
            return Err(Error::Corrupt(format!(
                "target {target} beyond total {}",
                self.total
            )));
        }
        Ok(self.tree.search(target))
    }

    /// Records one occurrence of `letter`.
    ///
    /// Incrementing swaps the letter with the last letter of its count class.
    /// Both have the same count before the increment, so the only mass that
    /// changes is the one at the letter's new rank.
    pub fn update(&mut self, letter: usize) -> Result<()> {
        let v = self.order.count(letter)?;
        let den = self.config.smoothing.den as u64;
        let rescaled = v >= self.config.max_count || self.total + den > TOTAL_LIMIT;
        if rescaled {
            self.rescale();
        }
        let pos = self.order.increment(letter)?;
        let rank = self.order.len() - pos;
        let k = self.group_by_rank[rank - 1] as usize;
        self.group_mass[k] += den;
        self.tree.add(k, den);
        self.total += den;
        self.seen += 1;
        self.last_touched = if rescaled { self.group_mass.len() } else { 1 };
        Ok(())
    }

    /// Halves every count, rounding up, and rebuilds the group masses.
    pub fn rescale(&mut self) {
        let counts: Vec<u32> = self.order.counts().iter().map(|c| c.div_ceil(2)).collect();
        self.seen = counts.iter().map(|&c| c as u64).sum();
        self.order = FrequencyOrder::from_counts(counts, self.config.max_count)
            .expect("halved counts stay within bounds");
        self.rebuild_masses();
        self.rescales += 1;
    }

    /// Hash of the counts, rank layout and masses; equal for synchronized models.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.order.counts().hash(&mut h);
        self.order.sorted().hash(&mut h);
        self.group_mass.hash(&mut h);
        self.total.hash(&mut h);
        h.finish()
    }
}

/// Adaptive model with a separate mass for every letter.
#[derive(Clone, Debug)]
pub struct PlainModel {
    counts: Vec<u32>,
    tree: Fenwick,
    config: ModelConfig,
    total: u64,
    rescales: u64,
}

impl PlainModel {
    pub fn new(n: usize, config: ModelConfig) -> Result<Self> {
        check_config(n, config)?;
        let mut model = PlainModel {
            counts: vec![0; n],
            tree: Fenwick::default(),
            config,
            total: 0,
            rescales: 0,
        };
        model.rebuild();
        Ok(model)
    }

    fn rebuild(&mut self) {
        let c = self.config.smoothing;
        let masses: Vec<u64> = self.counts.iter().map(|&v| c.mass(v)).collect();
        self.total = masses.iter().sum();
        self.tree = Fenwick::from_values(&masses);
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn tree_ops(&self) -> u64 {
        self.tree.op_count()
    }

    pub fn rescale_count(&self) -> u64 {
        self.rescales
    }

    pub fn letter_probability(&self, letter: usize) -> Result<Ratio> {
        let v = *self.counts.get(letter).ok_or(Error::OutOfRange {
            index: letter,
            len: self.counts.len(),
        })?;
        Ok(Ratio::new(self.config.smoothing.mass(v), self.total))
    }

    /// Cumulative lower bound and mass of `letter`.
    pub fn interval(&mut self, letter: usize) -> Result<(u64, u64)> {
        let v = *self.counts.get(letter).ok_or(Error::OutOfRange {
            index: letter,
            len: self.counts.len(),
        })?;
        Ok((self.tree.prefix(letter), self.config.smoothing.mass(v)))
    }

    /// Letter whose interval holds `target`, with the interval's lower bound and mass.
    pub fn locate(&mut self, target: u64) -> Result<(usize, u64, u64)> {
        if target >= self.total {
            return Err(Error::Corrupt(format!(
                "target {target} beyond total {}",
                self.total
            )));
        }
        let (a, lo) = self.tree.search(target);
        Ok((a, lo, self.config.smoothing.mass(self.counts[a])))
    }

    pub fn update(&mut self, letter: usize) -> Result<()> {
        let v = *self.counts.get(letter).ok_or(Error::OutOfRange {
            index: letter,
            len: self.counts.len(),
        })?;
        let den = self.config.smoothing.den as u64;
        if v >= self.config.max_count || self.total + den > TOTAL_LIMIT {
            self.rescale();
        }
        self.counts[letter] += 1;
        self.tree.add(letter, den);
        self.total += den;
        Ok(())
    }

    pub fn rescale(&mut self) {
        for c in &mut self.counts {
            *c = c.div_ceil(2);
        }
        self.rebuild();
        self.rescales += 1;
    }

    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.counts.hash(&mut h);
        self.total.hash(&mut h);
        h.finish()
    }
}
