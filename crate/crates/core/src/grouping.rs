//! Alphabet grouping and the redundancy it costs.
//!
//! Letters are ranked by non-increasing probability and cut into consecutive
//! groups of sizes `m_1, m_2, ..., m_s`. Every letter in group `i` is coded as
//! if its probability were `pi_i / m_i`, where `pi_i` is the group's mass.
//! The price is the Kullback-Leibler divergence between the true and the
//! flattened distribution; its supremum over all ordered distributions has a
//! closed form that drives the plan construction below.
//!
//! All logarithms are base 2.

use std::f64::consts::{E, LOG2_E};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Margin used when comparing a worst-case redundancy against a budget.
///
/// A group is accepted only if its redundancy is at most `delta - FEASIBILITY_TOL`,
/// so exact ties with the budget are rejected.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Groups up to this size have their worst case computed by a full scan.
const EXACT_SCAN_LIMIT: u64 = 4096;

/// Half-width of the scan window around the located peak for larger groups.
const PEAK_WINDOW: u64 = 16;

/// Partition of the descending-rank axis into consecutive groups.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupingPlan {
    sizes: Vec<u64>,
    /// `prefixes[i]` is the number of letters in groups `0..i`; `prefixes[0] == 0`.
    prefixes: Vec<u64>,
    pow2: bool,
    delta: Option<f64>,
}

impl GroupingPlan {
    /// Builds a plan from group sizes. Sizes must be positive and non-decreasing.
    pub fn new(sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Domain("a plan needs at least one group".into()));
        }
        if let Some(i) = sizes.iter().position(|&m| m == 0) {
            return Err(Error::Domain(format!("group {} is empty", i + 1)));
        }
        if let Some(i) = sizes.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Domain(format!(
                "group sizes must be non-decreasing (group {} has {} < {})",
                i + 2,
                sizes[i + 1],
                sizes[i]
            )));
        }
        let mut prefixes = Vec::with_capacity(sizes.len() + 1);
        let mut n = 0u64;
        prefixes.push(0);
        for &m in &sizes {
            n = n
                .checked_add(m)
                .ok_or_else(|| Error::Domain("plan coverage overflows u64".into()))?;
            prefixes.push(n);
        }
        let pow2 = sizes.iter().all(|m| m.is_power_of_two());
        Ok(GroupingPlan {
            sizes,
            prefixes,
            pow2,
            delta: None,
        })
    }

    /// A plan with one group of `n` letters.
    pub fn single(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Prefix sums `n_0 = 0, n_1, ..., n_s`.
    pub fn prefixes(&self) -> &[u64] {
        &self.prefixes
    }

    /// Number of groups `s`.
    pub fn num_groups(&self) -> usize {
        self.sizes.len()
    }

    /// Total number of letter slots `n_s`; may exceed the alphabet it serves.
    pub fn coverage(&self) -> u64 {
        self.prefixes[self.sizes.len()]
    }

    /// True when every group size is a power of two.
    pub fn is_pow2(&self) -> bool {
        self.pow2
    }

    /// Redundancy budget the plan was built for, if it came from a constructor.
    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    /// Zero-based index of the group holding the 1-based descending `rank`.
    pub fn group_of_rank(&self, rank: u64) -> Result<usize> {
        if rank == 0 || rank > self.coverage() {
            return Err(Error::OutOfRange {
                index: rank as usize,
                len: self.coverage() as usize,
            });
        }
        // first k with prefixes[k+1] >= rank
        Ok(self.prefixes[1..].partition_point(|&n| n < rank))
    }

    /// Worst-case redundancy over all ordered distributions, in bits per letter.
    pub fn worst_case_redundancy(&self) -> f64 {
        worst_case_redundancy(self)
    }
}

impl fmt::Display for GroupingPlan {
    /// Canonical text form: `s m_1 m_2 ... m_s`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sizes.len())?;
        for m in &self.sizes {
            write!(f, " {m}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupingPlan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_ascii_whitespace();
        let count: usize = it
            .next()
            .ok_or_else(|| Error::Format("empty plan".into()))?
            .parse()
            .map_err(|e| Error::Format(format!("bad group count: {e}")))?;
        let sizes = it
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|e| Error::Format(format!("bad group size {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if sizes.len() != count {
            return Err(Error::Format(format!(
                "plan announces {count} groups but lists {}",
                sizes.len()
            )));
        }
        GroupingPlan::new(sizes)
    }
}

/// A probability vector sorted in non-increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedDistribution {
    probs: Vec<f64>,
}

impl OrderedDistribution {
    pub const SUM_TOL: f64 = 1e-12;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Domain("distribution over an empty alphabet".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Domain(
                "probabilities must be finite and >= 0".into(),
            ));
        }
        if probs.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Domain("probabilities must be non-increasing".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::Domain(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(OrderedDistribution { probs })
    }

    /// Sorts nonnegative weights in non-increasing order and normalizes them.
    pub fn from_weights(mut weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Domain("weights must be finite and >= 0".into()));
        }
        weights.sort_by(|a, b| b.total_cmp(a));
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Domain("weights sum to zero".into()));
        }
        for w in &mut weights {
            *w /= sum;
        }
        Self::new(weights)
    }

    /// The extreme point `(1/l, ..., 1/l, 0, ..., 0)` over `n` letters.
    pub fn extreme_point(l: usize, n: usize) -> Result<Self> {
        if l == 0 || l > n {
            return Err(Error::Domain(format!("extreme point {l} of {n}")));
        }
        let mut probs = vec![0.0; n];
        probs[..l].fill(1.0 / l as f64);
        Ok(OrderedDistribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }

    /// Group masses `pi_1..pi_s` under `plan`; slots past the alphabet carry zero.
    pub fn group_masses(&self, plan: &GroupingPlan) -> Result<Vec<f64>> {
        let n = self.probs.len() as u64;
        if plan.coverage() < n {
            return Err(Error::Coverage {
                covered: plan.coverage(),
                needed: n,
            });
        }
        Ok(plan
            .prefixes()
            .windows(2)
            .map(|w| {
                let lo = w[0].min(n) as usize;
                let hi = w[1].min(n) as usize;
                self.probs[lo..hi].iter().sum()
            })
            .collect())
    }
}

/// Redundancy `sum p_i log(p_i / p_hat_i)` of coding `p` with the flattened
/// in-group probabilities of `plan`.
pub fn grouping_redundancy(p: &OrderedDistribution, plan: &GroupingPlan) -> Result<f64> {
    let masses = p.group_masses(plan)?;
    let n = p.len() as u64;
    let mut r = 0.0;
    for (k, pi) in masses.iter().enumerate() {
        let lo = plan.prefixes[k].min(n) as usize;
        let hi = plan.prefixes[k + 1].min(n) as usize;
        let flat = pi / plan.sizes[k] as f64;
        for &pj in &p.probs[lo..hi] {
            if pj > 0.0 {
                r += pj * (pj / flat).log2();
            }
        }
    }
    Ok(r)
}

#[inline]
fn extreme_term(n_prev: u64, m: u64, l: u64) -> f64 {
    l as f64 * (m as f64 / l as f64).log2() / (n_prev + l) as f64
}

/// Largest value of `l log(m/l) / (n_prev + l)` over `l = 1..=m`, by full scan.
pub fn group_worst_case_scan(n_prev: u64, m: u64) -> f64 {
    (1..=m)
        .map(|l| extreme_term(n_prev, m, l))
        .fold(0.0, f64::max)
}

/// Worst-case redundancy contributed by a group of `m` letters that starts
/// after `n_prev` letters.
///
/// The term is the redundancy at the extreme point uniform over the first
/// `n_prev + l` letters. It is unimodal in `l` (concave numerator over a
/// positive affine denominator), so large groups locate the peak by bisection
/// on the forward difference and then scan a window around it.
pub fn group_worst_case(n_prev: u64, m: u64) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    if m <= EXACT_SCAN_LIMIT {
        return group_worst_case_scan(n_prev, m);
    }
    let (mut lo, mut hi) = (1u64, m);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if extreme_term(n_prev, m, mid + 1) > extreme_term(n_prev, m, mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let from = lo.saturating_sub(PEAK_WINDOW).max(1);
    let to = (lo + PEAK_WINDOW).min(m);
    (from..=to)
        .chain([1, m])
        .map(|l| extreme_term(n_prev, m, l))
        .fold(0.0, f64::max)
}

/// `R(m) = max_i max_{l <= m_i} l log(m_i / l) / (n_{i-1} + l)`.
pub fn worst_case_redundancy(plan: &GroupingPlan) -> f64 {
    plan.sizes
        .iter()
        .zip(&plan.prefixes)
        .map(|(&m, &n_prev)| group_worst_case(n_prev, m))
        .fold(0.0, f64::max)
}

/// Brute-force worst case: evaluates the redundancy at every extreme point
/// `q_l = (1/l, ..., 1/l, 0, ...)`, `l = 1..=n`, of the ordered simplex.
///
/// Independent of the closed form; intended for small alphabets.
pub fn oracle_worst_case_redundancy(plan: &GroupingPlan, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("alphabet size must be positive".into()));
    }
    if plan.coverage() < n as u64 {
        return Err(Error::Coverage {
            covered: plan.coverage(),
            needed: n as u64,
        });
    }
    let mut worst = 0.0f64;
    for l in 1..=n {
        let q = OrderedDistribution::extreme_point(l, n)?;
        worst = worst.max(grouping_redundancy(&q, plan)?);
    }
    Ok(worst)
}

fn check_budget(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::Domain(format!(
            "redundancy budget must be finite and >= 0, got {delta}"
        )));
    }
    Ok(())
}

#[inline]
fn fits(worst: f64, delta: f64) -> bool {
    worst <= delta - FEASIBILITY_TOL
}

/// Whether a group of `m` letters after `n_prev` letters stays within `delta`.
/// Singletons always fit.
pub fn group_fits(n_prev: u64, m: u64, delta: f64) -> bool {
    m == 1 || fits(group_worst_case(n_prev, m), delta)
}

/// Upper limit on a single group's size; keeps the search finite for huge budgets.
fn size_cap(n: u64) -> u64 {
    n.saturating_mul(2).max(1)
}

fn largest_fitting_group(n_prev: u64, delta: f64, pow2: bool, cap: u64) -> u64 {
    let mut lo = 1u64;
    if pow2 {
        while lo * 2 <= cap && group_fits(n_prev, lo * 2, delta) {
            lo *= 2;
        }
        return lo;
    }
    let mut hi = 2u64;
    while hi <= cap && group_fits(n_prev, hi, delta) {
        lo = hi;
        hi *= 2;
    }
    // lo fits; everything >= hi (or past the cap) does not
    let mut hi = hi.min(cap + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if group_fits(n_prev, mid, delta) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Plan with the fewest groups whose worst-case redundancy stays within `delta`.
///
/// Whether a group fits depends only on where it starts and its size; the
/// worst case grows with the size and shrinks with the start. Taking the
/// largest fitting group at each step therefore covers the most letters for
/// any group count, which makes the greedy plan minimal. With `pow2` the sizes
/// are restricted to powers of two. The last group may run past `n`.
pub fn optimal_grouping(n: u64, delta: f64, pow2: bool) -> Result<GroupingPlan> {
    if n == 0 {
        return Err(Error::Domain("alphabet size must be positive".into()));
    }
    check_budget(delta)?;
    let cap = size_cap(n);
    let mut sizes = Vec::new();
    let mut covered = 0u64;
    while covered < n {
        let m = largest_fitting_group(covered, delta, pow2, cap);
        sizes.push(m);
        covered += m;
    }
    Ok(GroupingPlan::new(sizes)?.with_delta(delta))
}

/// Minimal group count by dynamic programming over exact prefixes.
///
/// Uses the full-scan worst case and tries every size up to the cap, so it
/// assumes nothing about how the worst case varies and shares no search logic
/// with [`optimal_grouping`]. Sizes need not be non-decreasing here, which can
/// only lower the count. Meant as a reference for small alphabets.
pub fn exact_min_groups(n: u64, delta: f64, pow2: bool) -> Result<usize> {
    Ok(exact_min_groups_upto(n, delta, pow2)?[n as usize])
}

/// [`exact_min_groups`] for every alphabet size `0..=n_max` at once
/// (entry 0 is 0). Cost is `O(n_max^3)`.
pub fn exact_min_groups_upto(n_max: u64, delta: f64, pow2: bool) -> Result<Vec<usize>> {
    if n_max == 0 {
        return Err(Error::Domain("alphabet size must be positive".into()));
    }
    check_budget(delta)?;
    let n = n_max as usize;
    let cap = size_cap(n_max) as usize;
    // exact[e]: fewest groups ending exactly at e; reach[b]: largest fitting
    // size of a group starting at b.
    let mut exact = vec![usize::MAX; n + 1];
    let mut reach = vec![0usize; n];
    exact[0] = 0;
    for b in 0..n {
        let mut m = 1usize;
        while m <= cap {
            if m == 1 || fits(group_worst_case_scan(b as u64, m as u64), delta) {
                reach[b] = m;
                if b + m <= n && exact[b] != usize::MAX {
                    exact[b + m] = exact[b + m].min(exact[b] + 1);
                }
            }
            m = if pow2 { m * 2 } else { m + 1 };
        }
    }
    // A plan for k letters ends with a group that may run past k.
    let mut out = vec![0usize; n + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = (0..k)
            .filter(|&b| exact[b] != usize::MAX && b + reach[b] >= k)
            .map(|b| exact[b] + 1)
            .min()
            .expect("singletons always fit");
    }
    Ok(out)
}

/// Closed-form group size for a group starting after `n_prev` letters:
/// `max(1, floor(delta * e * n_prev / log2(e)))`.
///
/// Any size up to this keeps every extreme-point term of the group at or
/// below `delta`, since `l log(m/l) / (n_prev + l) <= m log2(e) / (e n_prev)`.
pub fn theorem3_group_size(n_prev: u64, delta: f64) -> u64 {
    let m = (delta * E * n_prev as f64 / LOG2_E).floor();
    if m < 1.0 {
        1
    } else {
        m as u64
    }
}

/// Largest admissible budget for [`theorem3_grouping`], `log2(e) / e`.
pub fn theorem3_delta_limit() -> f64 {
    LOG2_E / E
}

/// Grouping built from the closed-form size rule alone, for budgets in
/// `(0, log2(e)/e)`. Its group count grows like `log(n) / delta`.
pub fn theorem3_grouping(n: u64, delta: f64) -> Result<GroupingPlan> {
    if n == 0 {
        return Err(Error::Domain("alphabet size must be positive".into()));
    }
    if !(delta > 0.0 && delta < theorem3_delta_limit()) {
        return Err(Error::Domain(format!(
            "budget must lie in (0, {:.6}), got {delta}",
            theorem3_delta_limit()
        )));
    }
    let mut sizes = Vec::new();
    let mut covered = 0u64;
    while covered < n {
        let m = theorem3_group_size(covered, delta);
        sizes.push(m);
        covered += m;
    }
    Ok(GroupingPlan::new(sizes)?.with_delta(delta))
}

/// Redundancy guarantee of a base code with worst case `coder_bound` applied
/// to a grouping with worst case `grouping_delta`: the two simply add.
pub fn composed_redundancy_bound(coder_bound: f64, grouping_delta: f64) -> f64 {
    coder_bound + grouping_delta
}
