//! Exhaustive search for zero-sum patterns with few nonnegative k-subsets.
//!
//! The count depends only on which compositions `(c_1..c_d)` have a
//! nonnegative weighted sum, so a grid of integer values with the last value
//! solved for zero sum covers every sign pattern the grid can reach.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_u128};
use crate::counting::{
    count_nonnegative, count_nonnegative_dp_ordered, CompositionOrder, MultiplicityPattern, Restriction,
};
use crate::{report, Error, Result};

pub const MAX_DISTINCT: usize = 4;
pub const DEFAULT_SEARCH_BUDGET: u128 = 200_000_000;
/// Largest `C(n, k)` at which the enumeration engine joins the re-verification.
pub const ENUMERATION_CROSS_CHECK_LIMIT: u128 = 5_000_000;
const MAX_SEARCH_N: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchSpace {
    pub n: usize,
    pub k: usize,
    /// Patterns with `1..=max_distinct` distinct values are searched.
    pub max_distinct: usize,
    /// Free values range over `[-value_range, value_range]`.
    pub value_range: i64,
}

impl SearchSpace {
    pub fn new(n: usize, k: usize, max_distinct: usize, value_range: i64) -> Result<Self> {
        if n == 0 || n > MAX_SEARCH_N {
            return Err(Error::Domain(format!("search needs 1 <= n <= {MAX_SEARCH_N}, got {n}")));
        }
        if k > n {
            return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
        }
        if !(1..=MAX_DISTINCT).contains(&max_distinct) {
            return Err(Error::Domain(format!("max_distinct must be in 1..={MAX_DISTINCT}, got {max_distinct}")));
        }
        if !(0..=1 << 20).contains(&value_range) {
            return Err(Error::Domain(format!("value_range must be in [0, 2^20], got {value_range}")));
        }
        Ok(SearchSpace { n, k, max_distinct, value_range })
    }

    /// Number of (multiplicities, free values) grid points, before the
    /// monotonicity filter on the solved value.
    pub fn candidate_count(&self) -> u128 {
        let width = (2 * self.value_range + 1) as usize;
        (1..=self.max_distinct.min(self.n))
            .map(|d| {
                binomial_u128(self.n - 1, d - 1).unwrap_or(u128::MAX)
                    .saturating_mul(binomial_u128(width, d - 1).unwrap_or(u128::MAX))
            })
            .fold(0u128, u128::saturating_add)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineCheck {
    pub engine: String,
    #[serde(serialize_with = "report::bigint")]
    pub count: BigInt,
    pub agrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchOutcome {
    /// Some pattern has fewer than `C(n-1,k-1)` nonnegative k-subsets.
    ViolationFound,
    /// No pattern in the grid goes below the bound; says nothing beyond the grid.
    NoViolationInGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub k: usize,
    pub best_pattern: MultiplicityPattern,
    #[serde(serialize_with = "report::bigint")]
    pub best_count: BigInt,
    #[serde(serialize_with = "report::bigint")]
    pub bound: BigInt,
    pub violation: bool,
    pub outcome: SearchOutcome,
    #[serde(serialize_with = "report::u64_str")]
    pub candidates_examined: u64,
    pub reverification: Vec<EngineCheck>,
    pub reverified: bool,
    pub space: SearchSpace,
}

/// A candidate: multiplicities and primitive integer values, decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Candidate {
    count: u128,
    mults: Vec<usize>,
    values: Vec<i64>,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.count, &self.mults, &self.values).cmp(&(other.count, &other.mults, &other.values))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All compositions of `n` into `d` positive parts, lexicographic.
fn compositions(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 1..=rest - (parts - 1) {
            cur.push(first);
            rec(rest - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d >= 1 && n >= d {
        rec(n, d, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

/// Nonnegative count for small integer patterns; `binom[a][b] = C(a, b)`.
fn fast_count(values: &[i64], mults: &[usize], k: usize, binom: &[Vec<u128>]) -> u128 {
    struct Walk<'a> {
        values: &'a [i64],
        mults: &'a [usize],
        suffix: Vec<usize>,
        binom: &'a [Vec<u128>],
    }

    impl Walk<'_> {
        fn count(&self, pos: usize, remaining: usize, partial: i64, weight: u128) -> u128 {
            if pos == self.values.len() {
                return if remaining == 0 && partial >= 0 { weight } else { 0 };
            }
            let hi = remaining.min(self.mults[pos]);
            let lo = remaining.saturating_sub(self.suffix[pos + 1]);
            (lo..=hi)
                .map(|c| {
                    self.count(
                        pos + 1,
                        remaining - c,
                        partial + self.values[pos] * c as i64,
                        weight * self.binom[self.mults[pos]][c],
                    )
                })
                .sum()
        }
    }

    let mut suffix = vec![0usize; mults.len() + 1];
    for i in (0..mults.len()).rev() {
        suffix[i] = suffix[i + 1] + mults[i];
    }
    if suffix[0] < k {
        return 0;
    }
    Walk { values, mults, suffix, binom }.count(0, k, 0, 1)
}

fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, v| g.gcd(v))
}

/// Best candidate with the given multiplicities, plus how many were examined.
fn best_for_mults(mults: &[usize], space: &SearchSpace, binom: &[Vec<u128>]) -> (Option<Candidate>, u64) {
    let d = mults.len();
    let r = space.value_range;
    let md = mults[d - 1] as i64;
    let mut best: Option<Candidate> = None;
    let mut examined = 0u64;
    let mut consider = |free: &[i64]| {
        examined += 1;
        let mut values: Vec<i64> = free.iter().map(|v| v * md).collect();
        let last = -free.iter().zip(mults).map(|(v, &m)| v * m as i64).sum::<i64>();
        if let Some(&prev) = values.last() {
            if last >= prev {
                return;
            }
        }
        values.push(last);
        let g = gcd_all(&values);
        if g > 1 {
            values.iter_mut().for_each(|v| *v /= g);
        }
        let count = fast_count(&values, mults, space.k, binom);
        let cand = Candidate { count, mults: mults.to_vec(), values };
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    };
    // free values v_1 > .. > v_{d-1} in [-r, r]
    let mut free = Vec::with_capacity(d);
    fn descend(depth: usize, upper: i64, r: i64, free: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if depth == 0 {
            f(free);
            return;
        }
        let mut v = upper;
        while v >= -r {
            free.push(v);
            descend(depth - 1, v - 1, r, free, f);
            free.pop();
            v -= 1;
        }
    }
    descend(d - 1, r, r, &mut free, &mut consider);
    (best, examined)
}

/// Exhaustive minimization of the nonnegative count over the grid, ties
/// broken by the smallest `(multiplicities, primitive values)`.
pub fn sweep_patterns(space: &SearchSpace) -> Result<SearchReport> {
    sweep_patterns_with_budget(space, DEFAULT_SEARCH_BUDGET)
}

pub fn sweep_patterns_with_budget(space: &SearchSpace, budget: u128) -> Result<SearchReport> {
    let candidates = space.candidate_count();
    if candidates > budget {
        return Err(Error::SearchBudget {
            candidates,
            budget,
            advice: "lower value_range or max_distinct".into(),
        });
    }
    let n = space.n;
    let binom: Vec<Vec<u128>> = (0..=n)
        .map(|a| (0..=a).map(|b| binomial_u128(a, b).expect("n <= 120")).collect())
        .collect();
    let all_mults: Vec<Vec<usize>> = (1..=space.max_distinct.min(n)).flat_map(|d| compositions(n, d)).collect();
    let results: Vec<(Option<Candidate>, u64)> = all_mults
        .par_iter()
        .map(|m| best_for_mults(m, space, &binom))
        .collect();
    let examined: u64 = results.iter().map(|(_, e)| e).sum();
    let best = results
        .into_iter()
        .filter_map(|(c, _)| c)
        .min()
        .expect("the all-zero pattern is always a candidate");

    let pattern = MultiplicityPattern::from_integers(
        &best.values.iter().copied().zip(best.mults.iter().copied()).collect::<Vec<_>>(),
    )?;
    let best_count = BigInt::from(best.count);
    let mut reverification = Vec::new();
    for (engine, order) in [
        ("composition-lexicographic", CompositionOrder::Lexicographic),
        ("composition-reverse-lexicographic", CompositionOrder::ReverseLexicographic),
    ] {
        let count = count_nonnegative_dp_ordered(&pattern, space.k, order)?;
        reverification.push(EngineCheck { engine: engine.into(), agrees: count == best_count, count });
    }
    let subsets = binomial_u128(n, space.k).unwrap_or(u128::MAX);
    if space.k >= 1 && subsets <= ENUMERATION_CROSS_CHECK_LIMIT {
        let r = count_nonnegative(&pattern.expand(), space.k, &Restriction::none())?;
        let count = BigInt::from(r.nonnegative_count);
        reverification.push(EngineCheck { engine: "enumeration".into(), agrees: count == best_count, count });
    }
    let reverified = reverification.iter().all(|c| c.agrees);
    let bound = binomial(n as i64 - 1, space.k as i64 - 1);
    let violation = best_count < bound;
    Ok(SearchReport {
        n,
        k: space.k,
        best_pattern: pattern,
        best_count,
        bound,
        violation,
        outcome: if violation { SearchOutcome::ViolationFound } else { SearchOutcome::NoViolationInGrid },
        candidates_examined: examined,
        reverification,
        reverified,
        space: *space,
    })
}

/// Searches `n = 3k + r` (with `k >= 7`, `1 <= r <= k/7`) over patterns with
/// at most three distinct values for a count below `C(n-1, k-1)`.
pub fn find_counterexample(k: usize, r: usize, value_range: i64) -> Result<SearchReport> {
    if k < 7 {
        return Err(Error::Domain(format!("counterexample regime needs k >= 7, got {k}")));
    }
    if r < 1 || 7 * r > k {
        return Err(Error::Domain(format!("need 1 <= r <= k/7, got r = {r}, k/7 = {}", k as f64 / 7.0)));
    }
    sweep_patterns(&SearchSpace::new(3 * k + r, k, 3, value_range)?)
}
