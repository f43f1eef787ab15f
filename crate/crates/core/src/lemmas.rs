//! Instance verifiers for each step of the quadratic-range argument.
//!
//! Every verifier returns a [`LemmaReport`]: preconditions, then claims with
//! both sides as exact rationals. Conditional statements are checked as
//! implications; when the hypothesis fails on an instance the claim is marked
//! vacuous rather than skipped.
//!
//! Conventions after sorting (0-based): `A = {0, .., k-1}`,
//! `C = {0, k, .., 2k-2}`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, KSubset, MAX_MASK_N};
use crate::counting::{count_scaled, family_size_fi, Restriction};
use crate::report::{self, Verdict};
use crate::weights::{scan_subset_sums, WeightVector};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    /// Nonnegative subsets meeting the top-k set.
    IntersectingTop,
    /// Lower bound on the sum of `C`.
    PackingBound,
    /// Nonnegative subsets through index 0.
    LotsOnTop,
    /// Nonnegative subsets disjoint from a negative set.
    DisjointFromNegative,
    Partition,
    Scalar,
    Theorem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Precondition {
    pub name: String,
    pub value: String,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub description: String,
    #[serde(serialize_with = "report::rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "report::rational")]
    pub rhs: Rational,
    pub relation: Relation,
    pub satisfied: bool,
    /// Set when the claim is an implication whose hypothesis failed.
    pub vacuous: Option<String>,
}

impl Claim {
    pub fn check(description: impl Into<String>, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        let satisfied = relation.holds(&lhs, &rhs);
        Claim { description: description.into(), lhs, rhs, relation, satisfied, vacuous: None }
    }

    /// `hypothesis => (lhs relation rhs)`.
    fn implication(
        description: impl Into<String>,
        hypothesis: Option<String>,
        lhs: Rational,
        relation: Relation,
        rhs: Rational,
    ) -> Self {
        let mut claim = Claim::check(description, lhs, relation, rhs);
        if let Some(reason) = hypothesis {
            claim.satisfied = true;
            claim.vacuous = Some(reason);
        }
        claim
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "subsets")]
pub enum Witness {
    Subset(Vec<usize>),
    Family(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub n: usize,
    pub k: usize,
    pub preconditions: Vec<Precondition>,
    pub claims: Vec<Claim>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl LemmaReport {
    fn new(lemma: LemmaId, n: usize, k: usize) -> Self {
        LemmaReport {
            lemma,
            n,
            k,
            preconditions: Vec::new(),
            claims: Vec::new(),
            verdict: Verdict::PreconditionsNotMet,
            witness: None,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, name: &str, value: impl ToString, satisfied: bool) -> bool {
        self.preconditions.push(Precondition { name: name.into(), value: value.to_string(), satisfied });
        satisfied
    }

    fn preconditions_hold(&self) -> bool {
        self.preconditions.iter().all(|p| p.satisfied)
    }

    fn finish(mut self) -> Self {
        self.verdict = if !self.preconditions_hold() {
            Verdict::PreconditionsNotMet
        } else {
            Verdict::from_checks(self.claims.iter().all(|c| c.satisfied))
        };
        self
    }

    pub fn claim(&self, needle: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.description.contains(needle))
    }
}

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

fn c(a: i64, b: i64) -> BigInt {
    binomial(a, b)
}

fn mask_of(indices: impl IntoIterator<Item = usize>) -> u128 {
    indices.into_iter().fold(0u128, |m, i| m | 1u128 << i)
}

fn top_mask(k: usize) -> u128 {
    mask_of(0..k)
}

fn c_mask(k: usize) -> u128 {
    mask_of(std::iter::once(0).chain(k..2 * k - 1))
}

/// Exact family sums and counts from one enumeration pass.
struct Pass {
    denominator: BigInt,
    b_a: BigInt,
    b_c: Option<BigInt>,
    nonnegative: u128,
}

fn common_checks(report: &mut LemmaReport, x: &WeightVector, k: usize) -> bool {
    let n = x.n();
    let ok_k = report.require("k >= 1", k, k >= 1);
    let ok_n = report.require("n >= 2k", format!("n = {n}, 2k = {}", 2 * k), n >= 2 * k);
    let ok_x = report.require("x != 0", if x.is_zero() { "zero vector" } else { "nonzero" }, !x.is_zero());
    let ok_mask = report.require("n <= 128 (enumeration)", n, n <= MAX_MASK_N);
    ok_k && ok_n && ok_x && ok_mask
}

fn scaled_sum(values: &[BigInt], mask: u128) -> BigInt {
    (0..values.len()).filter(|i| mask >> i & 1 == 1).map(|i| &values[i]).sum()
}

/// Nonnegative k-subsets meeting `A = {0..k-1}` outnumber `C(n-k-1, k-1)`,
/// and the sums over subsets missing / meeting `A` are `∓C(n-k-1, k-1) b_A`.
pub fn verify_lemma2(x: &WeightVector, k: usize) -> Result<LemmaReport> {
    let n = x.n();
    let mut report = LemmaReport::new(LemmaId::IntersectingTop, n, k);
    if !common_checks(&mut report, x, k) {
        return Ok(report.finish());
    }
    let (xs, d) = x.scaled_integers();
    let a = top_mask(k);
    let (mut disjoint_sum, mut meeting_sum) = (BigInt::zero(), BigInt::zero());
    let mut meeting_nonneg = 0u128;
    scan_subset_sums(&xs, k, |_, m, s| {
        if m & a == 0 {
            disjoint_sum += s;
        } else {
            meeting_sum += s;
            meeting_nonneg += u128::from(!s.is_negative());
        }
    })?;
    let b_a = scaled_sum(&xs, a);
    let coeff = c(n as i64 - k as i64 - 1, k as i64 - 1);
    let q = |v: BigInt| Rational::new(v, d.clone());
    report.claims.push(Claim::check(
        "sum of b_S over S disjoint from A = -C(n-k-1,k-1) b_A",
        q(disjoint_sum),
        Relation::Eq,
        q(-&coeff * &b_a),
    ));
    report.claims.push(Claim::check(
        "sum of b_S over S meeting A = C(n-k-1,k-1) b_A",
        q(meeting_sum),
        Relation::Eq,
        q(&coeff * &b_a),
    ));
    report.claims.push(Claim::check(
        "nonnegative subsets meeting A > C(n-k-1,k-1)",
        int(meeting_nonneg),
        Relation::Gt,
        int(coeff),
    ));
    Ok(report.finish())
}

/// `C(n-k-1, k-1) - (k-1) C(n-k-1, k-2)`: the coefficient of `b_A` in the
/// sum over subsets meeting `A` in exactly one element. Nonnegative iff `n >= k²`.
pub fn a1_coefficient(n: usize, k: usize) -> BigInt {
    let (n, k) = (n as i64, k as i64);
    c(n - k - 1, k - 1) - (k - 1) * c(n - k - 1, k - 2)
}

fn total_nonnegative(xs: &[BigInt], k: usize) -> Result<u128> {
    Ok(count_scaled(xs, k, &Restriction::none().compile(xs.len())?)?.1)
}

fn mms_hypothesis_failure(nonnegative: u128, bound: &BigInt) -> Option<String> {
    (BigInt::from(nonnegative) > *bound).then(|| {
        format!("hypothesis fails: {nonnegative} nonnegative k-subsets exceed C(n-1,k-1) = {bound}")
    })
}

fn pass(x: &WeightVector, k: usize) -> Result<(Vec<BigInt>, Pass)> {
    let (xs, denominator) = x.scaled_integers();
    let b_a = scaled_sum(&xs, top_mask(k));
    let b_c = (2 * k - 1 <= x.n()).then(|| scaled_sum(&xs, c_mask(k)));
    let nonnegative = total_nonnegative(&xs, k)?;
    Ok((xs, Pass { denominator, b_a, b_c, nonnegative }))
}

/// The exact identities for subsets meeting `A` once, and the implication
/// `n >= k², #nonneg <= C(n-1,k-1) => b_C >= (1 - (2k-1)(k-1)/(n-2k+1)) b_A`.
pub fn verify_lemma3(x: &WeightVector, k: usize) -> Result<LemmaReport> {
    let n = x.n();
    let mut report = LemmaReport::new(LemmaId::PackingBound, n, k);
    if !common_checks(&mut report, x, k) {
        return Ok(report.finish());
    }
    let (xs, p) = pass(x, k)?;
    let a = top_mask(k);
    let (mut empty_sum, mut once_sum) = (BigInt::zero(), BigInt::zero());
    scan_subset_sums(&xs, k, |_, m, s| match (m & a).count_ones() {
        0 => empty_sum += s,
        1 => once_sum += s,
        _ => {}
    })?;
    let (ni, ki) = (n as i64, k as i64);
    let q = |v: BigInt| Rational::new(v, p.denominator.clone());
    report.claims.push(Claim::check(
        "k * (sum over S disjoint from A) + (sum over |S∩A|=1) = -(k-1) C(n-k,k-1) b_A",
        q(BigInt::from(k) * &empty_sum + &once_sum),
        Relation::Eq,
        q(-(BigInt::from(k - 1) * c(ni - ki, ki - 1)) * &p.b_a),
    ));
    report.claims.push(Claim::check(
        "sum of b_S over |S∩A|=1 = (C(n-k-1,k-1) - (k-1) C(n-k-1,k-2)) b_A",
        q(once_sum),
        Relation::Eq,
        q(a1_coefficient(n, k) * &p.b_a),
    ));

    let bound = c(ni - 1, ki - 1);
    let hypothesis = if n < k * k {
        Some(format!("hypothesis fails: n = {n} < k^2 = {}", k * k))
    } else {
        mms_hypothesis_failure(p.nonnegative, &bound)
    };
    let factor = int(1) - frac((2 * ki - 1) * (ki - 1), ni - 2 * ki + 1);
    let b_c = p.b_c.clone().expect("n >= 2k");
    report.claims.push(Claim::implication(
        "n >= k^2 and #nonneg <= C(n-1,k-1) imply b_C >= (1 - (2k-1)(k-1)/(n-2k+1)) b_A",
        hypothesis,
        q(b_c),
        Relation::Ge,
        factor * q(p.b_a.clone()),
    ));
    Ok(report.finish())
}

/// If at most `C(n-1,k-1)` k-subsets are nonnegative, at least
/// `(1 - (6k-3)(k-1)/(n-2k+1)) C(n-1,k-1)` of them contain index 0.
/// Also checks the exact identities the bound is assembled from.
pub fn verify_lemma_lotson1(x: &WeightVector, k: usize) -> Result<LemmaReport> {
    let n = x.n();
    let mut report = LemmaReport::new(LemmaId::LotsOnTop, n, k);
    let base = common_checks(&mut report, x, k);
    let square = report.require("n >= k^2", format!("n = {n}, k^2 = {}", k * k), n >= k * k);
    if !(base && square) {
        return Ok(report.finish());
    }
    let (xs, p) = pass(x, k)?;
    let (a, cm) = (top_mask(k), c_mask(k));
    let (mut meets_c, mut meets_both, mut on_top) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    let mut on_top_nonneg = 0u128;
    scan_subset_sums(&xs, k, |_, m, s| {
        if m & cm != 0 {
            meets_c += s;
            if m & a != 0 {
                meets_both += s;
            }
        }
        if m & 1 == 1 {
            on_top += s;
            on_top_nonneg += u128::from(!s.is_negative());
        }
    })?;
    let (ni, ki) = (n as i64, k as i64);
    let q = |v: BigInt| Rational::new(v, p.denominator.clone());
    let b_c = p.b_c.clone().expect("n >= 2k");

    report.claims.push(Claim::check(
        "sum of b_S over S meeting C = C(n-k-1,k-1) b_C",
        q(meets_c),
        Relation::Eq,
        q(c(ni - ki - 1, ki - 1) * &b_c),
    ));
    // sum over S ∋ x_1 = sum over S meeting A and C, minus sum_i |F_i| x_i
    let mut correction = BigInt::zero();
    for i in 2..=n {
        correction += family_size_fi(n, k, i)? * &xs[i - 1];
    }
    report.claims.push(Claim::check(
        "sum of b_S over S containing x_1 = (sum over S meeting A and C) - sum_i |F_i| x_i",
        q(on_top),
        Relation::Eq,
        q(&meets_both - correction),
    ));

    let bound = c(ni - 1, ki - 1);
    let hypothesis = mms_hypothesis_failure(p.nonnegative, &bound);
    let factor = int(1) - frac((6 * ki - 3) * (ki - 1), ni - 2 * ki + 1);
    report.claims.push(Claim::implication(
        "#nonneg <= C(n-1,k-1) implies #nonneg containing x_1 >= (1 - (6k-3)(k-1)/(n-2k+1)) C(n-1,k-1)",
        hypothesis,
        int(on_top_nonneg),
        Relation::Ge,
        factor * int(bound),
    ));
    Ok(report.finish())
}

/// The r smallest entries outside `t` (largest indices, ties by position).
fn complete_to_u(n: usize, k: usize, t: &KSubset) -> (usize, usize, Vec<usize>) {
    let (m, r) = (n / k, n % k);
    let extra: Vec<usize> = (0..n).rev().filter(|i| !t.contains(*i)).take(r).collect();
    let mut u: Vec<usize> = t.indices().iter().copied().chain(extra).collect();
    u.sort_unstable();
    (m, r, u)
}

fn negative_subset_check(report: &mut LemmaReport, x: &WeightVector, k: usize, t: &KSubset) -> Result<bool> {
    if t.n() != x.n() || t.k() != k {
        return Err(Error::InvalidSubset(format!("{t} is not a {k}-subset of [0,{})", x.n())));
    }
    let b_t = x.subset_sum(t);
    Ok(report.require("b_T < 0", report::rational_to_string(&b_t), b_t.is_negative()))
}

/// A negative k-set `T` leaves at least `C(n-2k, k-1)` nonnegative k-subsets
/// disjoint from it.
pub fn verify_lemma4(x: &WeightVector, k: usize, t: &KSubset) -> Result<LemmaReport> {
    let n = x.n();
    let mut report = LemmaReport::new(LemmaId::DisjointFromNegative, n, k);
    let negative = negative_subset_check(&mut report, x, k, t)?;
    let range = report.require("n >= 3k - 1", format!("n = {n}, 3k - 1 = {}", 3 * k - 1), n + 1 >= 3 * k);
    let mask_ok = report.require("n <= 128 (enumeration)", n, n <= MAX_MASK_N);
    if !(negative && range && mask_ok) {
        return Ok(report.finish());
    }
    let (xs, _) = x.scaled_integers();
    let (ni, ki) = (n as i64, k as i64);
    let disjoint_t = Restriction::new(vec![crate::counting::Atom::Disjoint(t.indices().to_vec())]);
    let (_, disjoint_nonneg) = count_scaled(&xs, k, &disjoint_t.compile(n)?)?;
    let bound = c(ni - 2 * ki, ki - 1);
    report.claims.push(Claim::check(
        "nonnegative k-subsets disjoint from T >= C(n-2k,k-1)",
        int(disjoint_nonneg),
        Relation::Ge,
        int(bound.clone()),
    ));

    let (_, r, u) = complete_to_u(n, k, t);
    let disjoint_u = Restriction::new(vec![crate::counting::Atom::Disjoint(u.clone())]);
    let (_, f) = count_scaled(&xs, k, &disjoint_u.compile(n)?)?;
    let ri = r as i64;
    report.claims.push(Claim::check(
        "|F| (nonnegative k-subsets disjoint from U) >= C(n-k-r-1,k-1)",
        int(f),
        Relation::Ge,
        int(c(ni - ki - ri - 1, ki - 1)),
    ));
    report.claims.push(Claim::check(
        "C(n-k-r-1,k-1) >= C(n-2k,k-1)",
        int(c(ni - ki - ri - 1, ki - 1)),
        Relation::Ge,
        int(bound.clone()),
    ));
    report.claims.push(Claim::check(
        "C(n-2k,k-1) >= (1 - (2k-1)(k-1)/(n-2k+1)) C(n-1,k-1)",
        int(bound),
        Relation::Ge,
        (int(1) - frac((2 * ki - 1) * (ki - 1), ni - 2 * ki + 1)) * int(c(ni - 1, ki - 1)),
    ));
    report.notes.push(format!("U = {u:?} (T plus the {r} smallest entries outside T)"));
    Ok(report.finish())
}

/// One random partition of `X \ U` into k-blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionTrial {
    pub trial: u64,
    pub seed: u64,
    /// Shuffled order of the indices in `X \ U`.
    pub permutation: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
    pub z: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub r: usize,
    pub t: Vec<usize>,
    pub u: Vec<usize>,
    #[serde(serialize_with = "report::u64_str")]
    pub trials: u64,
    #[serde(serialize_with = "report::u64_str")]
    pub seed: u64,
    #[serde(serialize_with = "report::u128_str")]
    pub family_size: u128,
    /// `(m-1) |F| / C(n-k-r, k)`
    #[serde(serialize_with = "report::rational")]
    pub exact_mean: Rational,
    #[serde(serialize_with = "report::rational")]
    pub empirical_mean: Rational,
    /// Squared standard error of the trial mean (floored at `1/trials²`).
    #[serde(serialize_with = "report::rational")]
    pub squared_standard_error: Rational,
    pub z_min: usize,
    pub z_max: usize,
    pub all_trials_nonempty: bool,
    pub mean_within_tolerance: bool,
    pub sample_trials: Vec<PartitionTrial>,
    pub verdict: Verdict,
}

/// Standard errors allowed between the empirical and exact mean of `Z`.
pub const MEAN_TOLERANCE_SE: i64 = 5;
const SAMPLE_TRIALS: usize = 3;

fn trial_seed(master: u64, trial: u64) -> u64 {
    // splitmix64 step: independent-looking per-trial seeds
    let mut z = master.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random-partition averaging: shuffle `X \ U`, cut into `m-1` blocks of
/// size k and count the nonnegative blocks `Z`. Every trial must have
/// `Z >= 1`; the mean of `Z` is compared with `(m-1)|F| / C(n-k-r, k)`.
pub fn simulate_partition(
    x: &WeightVector,
    k: usize,
    t: &KSubset,
    trials: u64,
    seed: u64,
) -> Result<PartitionReport> {
    let n = x.n();
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if t.n() != n || t.k() != k {
        return Err(Error::InvalidSubset(format!("{t} is not a {k}-subset of [0,{n})")));
    }
    let b_t = x.subset_sum(t);
    if !b_t.is_negative() {
        return Err(Error::Domain(format!(
            "T = {t} has sum {} but the argument needs a negative set",
            report::rational_to_string(&b_t)
        )));
    }
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let (m, r, u) = complete_to_u(n, k, t);
    if m < 2 {
        return Err(Error::Domain(format!("n = {n} = {m}k + {r}: m < 2 leaves no blocks to partition")));
    }
    let rest: Vec<usize> = (0..n).filter(|i| u.binary_search(i).is_err()).collect();
    let (xs, _) = x.scaled_integers();

    let family_size = count_scaled(
        &xs,
        k,
        &Restriction::new(vec![crate::counting::Atom::Disjoint(u.clone())]).compile(n)?,
    )?
    .1;
    let exact_mean = Rational::new(
        BigInt::from(m - 1) * BigInt::from(family_size),
        c((n - k - r) as i64, k as i64),
    );

    let run = |trial: u64| -> PartitionTrial {
        let seed = trial_seed(seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut permutation = rest.clone();
        permutation.shuffle(&mut rng);
        let parts: Vec<Vec<usize>> = permutation.chunks(k).map(<[usize]>::to_vec).collect();
        let z = parts
            .iter()
            .filter(|p| !p.iter().map(|&i| &xs[i]).sum::<BigInt>().is_negative())
            .count();
        PartitionTrial { trial, seed, permutation, parts, z }
    };
    let zs: Vec<usize> = (0..trials).into_par_iter().map(|i| run(i).z).collect();
    let sample_trials = (0..trials.min(SAMPLE_TRIALS as u64)).map(run).collect();

    let total: BigInt = zs.iter().map(|&z| BigInt::from(z)).sum();
    let count = BigInt::from(trials);
    let empirical_mean = Rational::new(total, count.clone());
    let sq_dev: Rational = zs.iter().map(|&z| (int(z) - &empirical_mean).pow(2)).sum();
    let variance = if trials > 1 {
        sq_dev / int(trials - 1)
    } else {
        Rational::zero()
    };
    let floor = Rational::new(BigInt::one(), &count * &count);
    let se2 = (variance / int(trials)).max(floor);
    let diff2 = (&empirical_mean - &exact_mean).pow(2);
    let mean_within_tolerance = diff2 <= int(MEAN_TOLERANCE_SE * MEAN_TOLERANCE_SE) * &se2;
    let z_min = zs.iter().copied().min().unwrap_or(0);
    let z_max = zs.iter().copied().max().unwrap_or(0);
    let all_trials_nonempty = z_min >= 1;

    Ok(PartitionReport {
        n,
        k,
        m,
        r,
        t: t.indices().to_vec(),
        u,
        trials,
        seed,
        family_size,
        exact_mean,
        empirical_mean,
        squared_standard_error: se2,
        z_min,
        z_max,
        all_trials_nonempty,
        mean_within_tolerance,
        sample_trials,
        verdict: Verdict::from_checks(all_trials_nonempty && mean_within_tolerance),
    })
}

/// The purely numeric steps of the argument, in exact rationals.
pub fn verify_scalar_inequalities(n: usize, k: usize) -> Result<LemmaReport> {
    if k == 0 || n <= 2 * k {
        return Err(Error::Domain(format!("scalar suite needs k >= 1 and n >= 2k + 1, got n = {n}, k = {k}")));
    }
    let mut report = LemmaReport::new(LemmaId::Scalar, n, k);
    report.require("n >= 2k + 1", format!("n = {n}, k = {k}"), true);
    let (ni, ki) = (n as i64, k as i64);
    let d = ni - 2 * ki + 1;
    let one = int(1);
    let bnk = int(c(ni - 1, ki - 1));

    report.claims.push(Claim::check(
        "C(n-k-1,k-1) - (k-1) C(n-k-1,k-2) = (1 - (k-1)^2/(n-2k+1)) C(n-k-1,k-1)",
        int(a1_coefficient(n, k)),
        Relation::Eq,
        (&one - frac((ki - 1) * (ki - 1), d)) * int(c(ni - ki - 1, ki - 1)),
    ));

    let ratio = int(c(ni - ki - 1, ki - 1)) / &bnk;
    let power = (&one - frac(ki, ni - ki + 1)).pow((k - 1) as i32);
    let linear = &one - frac(ki * (ki - 1), ni - ki + 1);
    report.claims.push(Claim::check(
        "C(n-k-1,k-1)/C(n-1,k-1) > (1 - k/(n-k+1))^(k-1)",
        ratio.clone(),
        Relation::Gt,
        power.clone(),
    ));
    report.claims.push(Claim::check(
        "(1 - k/(n-k+1))^(k-1) > 1 - k(k-1)/(n-k+1)",
        power,
        Relation::Gt,
        linear.clone(),
    ));
    if k <= 2 {
        report.notes.push(format!(
            "k = {k}: all three members of the chain equal {}, so neither strict step can hold",
            report::rational_to_string(&ratio)
        ));
    }

    let packing = &one - frac((2 * ki - 1) * (ki - 1), d);
    report.claims.push(Claim::check(
        "(1 - (k-1)^2/(n-2k+1)) C(n-k-1,k-1)/C(n-1,k-1) >= 1 - (2k-1)(k-1)/(n-2k+1)",
        (&one - frac((ki - 1) * (ki - 1), d)) * &ratio,
        Relation::Ge,
        packing.clone(),
    ));
    report.claims.push(Claim::check(
        "(1 - k(k-1)/(n-k+1)) (2 - (2k-1)(k-1)/(n-2k+1)) - 1 >= 1 - (4k-1)(k-1)/(n-2k+1)",
        linear * (int(2) - frac((2 * ki - 1) * (ki - 1), d)) - &one,
        Relation::Ge,
        &one - frac((4 * ki - 1) * (ki - 1), d),
    ));
    let gap: BigInt = (ki + 2..=2 * ki).map(|j| c(ni - j, ki - 2)).sum();
    report.claims.push(Claim::check(
        "|F_2| - |F_2k| = sum_{j=k+2}^{2k} C(n-j,k-2)",
        int(c(ni - ki - 1, ki - 1) - c(ni - 2 * ki, ki - 1)),
        Relation::Eq,
        int(gap),
    ));
    report.claims.push(Claim::check(
        "1 - (4k-1)(k-1)/(n-2k+1) - 2(k-1)^2/(n-1) >= 1 - (6k-3)(k-1)/(n-2k+1)",
        &one - frac((4 * ki - 1) * (ki - 1), d) - frac(2 * (ki - 1) * (ki - 1), ni - 1),
        Relation::Ge,
        &one - frac((6 * ki - 3) * (ki - 1), d),
    ));
    report.claims.push(Claim::check(
        "C(n-2k,k-1) >= (1 - (2k-1)(k-1)/(n-2k+1)) C(n-1,k-1)",
        int(c(ni - 2 * ki, ki - 1)),
        Relation::Ge,
        packing * &bnk,
    ));

    let final_factor = int(2) - frac((8 * ki - 4) * (ki - 1), d);
    let hypothesis = (n < 8 * k * k).then(|| format!("hypothesis fails: n = {n} < 8k^2 = {}", 8 * k * k));
    report.claims.push(Claim::implication(
        "n >= 8k^2 implies 2 - (8k-4)(k-1)/(n-2k+1) > 1",
        hypothesis,
        final_factor,
        Relation::Gt,
        one,
    ));
    Ok(report.finish())
}

/// Largest `C(n, k)` for which the nonnegative family is attached as witness.
pub const WITNESS_LIMIT: u128 = 4096;

/// At least `C(n-1,k-1)` nonnegative k-subsets when `n >= 8k²`, and a star
/// on index 0 in case of equality. Below `8k²` the count and bound are still
/// reported, flagged out of hypothesis.
pub fn verify_theorem(x: &WeightVector, k: usize) -> Result<LemmaReport> {
    let n = x.n();
    let mut report = LemmaReport::new(LemmaId::Theorem, n, k);
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if n > MAX_MASK_N {
        return Err(Error::Domain(format!("enumeration supports n <= {MAX_MASK_N}, got {n}")));
    }
    report.require("n >= 8k^2", format!("n = {n}, 8k^2 = {}", 8 * k * k), n >= 8 * k * k);
    let (xs, _) = x.scaled_integers();
    let nonnegative = total_nonnegative(&xs, k)?;
    let bound = c(n as i64 - 1, k as i64 - 1);
    report.claims.push(Claim::check(
        "#nonnegative k-subsets >= C(n-1,k-1)",
        int(nonnegative),
        Relation::Ge,
        int(bound.clone()),
    ));
    if BigInt::from(nonnegative) == bound {
        let star = Restriction::new(vec![crate::counting::Atom::Contains(0)]).compile(n)?;
        let on_top = count_scaled(&xs, k, &star)?.1;
        report.claims.push(Claim::check(
            "equality case: nonnegative subsets containing index 0 = C(n-1,k-1) (family is the star)",
            int(on_top),
            Relation::Eq,
            int(bound),
        ));
    } else {
        report.notes.push("strict inequality: no equality case to check".into());
    }
    if crate::combinatorics::binomial_u128(n, k).is_some_and(|t| t <= WITNESS_LIMIT) {
        let mut family = Vec::new();
        scan_subset_sums(&xs, k, |s, _, sum| {
            if !sum.is_negative() {
                family.push(s.to_vec());
            }
        })?;
        family.sort();
        report.witness = Some(Witness::Family(family));
    }
    if n < 8 * k * k {
        report.notes.push("outside n >= 8k^2: count and bound reported for information".into());
    }
    Ok(report.finish())
}
