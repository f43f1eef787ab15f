//! Inclusion, Kneser and Bose–Mesner matrices on the subsets of `[0, n)`.
//!
//! Rows and columns are indexed by colex rank. Dense materialization is
//! capped by an entry budget; past it, [`BoseMesnerOperator`] still serves
//! single entries and matrix-free row products at any `n`.
//!
//! The central fact checked here: with `b` the vector of k-subset sums of a
//! zero-sum `x`, `B_j b = -C(k-1, j-1) C(n-j-1, k-1) b` for `0 <= j <= k`.

use ndarray::Array2;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_u128, unrank_colex, KSubset, MAX_MASK_N};
use crate::report::{self, Verdict};
use crate::weights::{subset_sums, WeightVector};
use crate::{Error, Rational, Result};

pub const DEFAULT_DENSE_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    /// Entry `(Y, S)` is 1 iff `Y ⊂ S`.
    Inclusion,
    /// Entry `(Y, S)` is 1 iff `Y ∩ S = ∅`.
    Kneser,
}

/// Masks of all `size`-subsets of `[0, n)` in colex order; `size == 0`
/// gives the single empty set.
pub fn subset_masks(n: usize, size: usize) -> Result<Vec<u128>> {
    if n > MAX_MASK_N {
        return Err(Error::Domain(format!("subset masks need n <= {MAX_MASK_N}, got {n}")));
    }
    if size > n {
        return Err(Error::Domain(format!("subset size {size} exceeds n = {n}")));
    }
    if size == 0 {
        return Ok(vec![0]);
    }
    let total = binomial_u128(n, size).ok_or_else(|| Error::Domain("too many subsets".into()))?;
    (0..total).map(|r| unrank_colex(r, size, n).map(|s| s.mask())).collect()
}

fn check_dims(n: usize, j: usize, k: usize) -> Result<()> {
    if j > k || k > n {
        return Err(Error::Domain(format!("need 0 <= j <= k <= n, got j = {j}, k = {k}, n = {n}")));
    }
    Ok(())
}

fn check_budget(rows: usize, cols: usize, budget: u128) -> Result<()> {
    let needed = rows as u128 * cols as u128;
    if needed > budget {
        return Err(Error::DenseBudget { needed, budget });
    }
    Ok(())
}

fn count_subsets(n: usize, size: usize) -> Result<usize> {
    binomial_u128(n, size)
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(|| Error::Domain(format!("C({n},{size}) does not fit in memory")))
}

/// Dense 0/1 inclusion or Kneser matrix `W_jk` / `\bar W_jk`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureMatrix {
    pub kind: MatrixKind,
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub entries: Array2<u8>,
}

impl StructureMatrix {
    pub fn row_sums(&self) -> Vec<u64> {
        self.entries.rows().into_iter().map(|r| r.iter().map(|&v| u64::from(v)).sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        self.entries.columns().into_iter().map(|c| c.iter().map(|&v| u64::from(v)).sum()).collect()
    }

    /// Rows rendered as `0`/`1` strings.
    pub fn row_strings(&self) -> Vec<String> {
        self.entries
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|&v| if v == 1 { '1' } else { '0' }).collect())
            .collect()
    }
}

pub fn build_structure_matrix(
    kind: MatrixKind,
    n: usize,
    j: usize,
    k: usize,
    budget: u128,
) -> Result<StructureMatrix> {
    check_dims(n, j, k)?;
    let (rows, cols) = (count_subsets(n, j)?, count_subsets(n, k)?);
    check_budget(rows, cols, budget)?;
    let row_masks = subset_masks(n, j)?;
    let col_masks = subset_masks(n, k)?;
    let entries = Array2::from_shape_fn((rows, cols), |(r, c)| {
        let (y, s) = (row_masks[r], col_masks[c]);
        let hit = match kind {
            MatrixKind::Inclusion => y & s == y,
            MatrixKind::Kneser => y & s == 0,
        };
        u8::from(hit)
    });
    Ok(StructureMatrix { kind, n, j, k, entries })
}

/// `B_j` on the k-subsets of `[0, n)`, entry `C(k - |S ∩ T|, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoseMesnerOperator {
    pub n: usize,
    pub j: usize,
    pub k: usize,
}

impl BoseMesnerOperator {
    pub fn new(n: usize, j: usize, k: usize) -> Result<Self> {
        check_dims(n, j, k)?;
        if k == 0 {
            return Err(Error::Domain("Bose-Mesner operator needs k >= 1".into()));
        }
        Ok(BoseMesnerOperator { n, j, k })
    }

    /// Entry as a function of the intersection size `t = |S ∩ T|`.
    pub fn entry_by_intersection(&self, t: usize) -> BigInt {
        binomial(self.k as i64 - t as i64, self.j as i64)
    }

    pub fn entry(&self, s: &KSubset, t: &KSubset) -> Result<BigInt> {
        for x in [s, t] {
            if x.n() != self.n || x.k() != self.k {
                return Err(Error::InvalidSubset(format!(
                    "{x} is not a {}-subset of [0,{})",
                    self.k, self.n
                )));
            }
        }
        Ok(self.entry_by_intersection(s.intersection_size(t)))
    }

    /// Dense matrix; entries fit `i64` whenever the budget admits the matrix.
    pub fn materialize(&self, budget: u128) -> Result<Array2<i64>> {
        let size = count_subsets(self.n, self.k)?;
        check_budget(size, size, budget)?;
        let masks = subset_masks(self.n, self.k)?;
        let by_t: Vec<i64> = (0..=self.k)
            .map(|t| self.entry_by_intersection(t).to_i64().expect("small binomial"))
            .collect();
        Ok(Array2::from_shape_fn((size, size), |(a, b)| {
            by_t[(masks[a] & masks[b]).count_ones() as usize]
        }))
    }

    /// `(B_j v)_S` for the subset with mask `row`, matrix-free over `masks`.
    pub fn row_dot(&self, row: u128, masks: &[u128], v: &[BigInt]) -> BigInt {
        let buckets = intersection_buckets(row, masks, v, self.k);
        buckets
            .iter()
            .enumerate()
            .map(|(t, sum)| sum * self.entry_by_intersection(t))
            .sum()
    }
}

/// `C(k - |S ∩ T|, j)` for two k-subsets of the same ground set.
pub fn bose_mesner_entry(s: &KSubset, t: &KSubset, j: usize) -> Result<BigInt> {
    if s.k() != t.k() || s.n() != t.n() {
        return Err(Error::InvalidSubset(format!(
            "cardinalities or ground sets differ: {s} (n={}) vs {t} (n={})",
            s.n(),
            t.n()
        )));
    }
    BoseMesnerOperator::new(s.n(), j, s.k())?.entry(s, t)
}

fn intersection_buckets(row: u128, masks: &[u128], v: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut buckets = vec![BigInt::zero(); k + 1];
    for (m, val) in masks.iter().zip(v) {
        buckets[(row & m).count_ones() as usize] += val;
    }
    buckets
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryMismatch {
    pub row: usize,
    pub column: usize,
    #[serde(serialize_with = "report::bigint")]
    pub computed: BigInt,
    #[serde(serialize_with = "report::bigint")]
    pub expected: BigInt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    #[serde(serialize_with = "report::u128_str")]
    pub entries_checked: u128,
    /// First few mismatches between the product and the closed form.
    pub mismatches: Vec<EntryMismatch>,
    #[serde(serialize_with = "report::u128_str")]
    pub mismatch_count: u128,
    pub symmetric: bool,
    pub verdict: Verdict,
}

const MISMATCH_SAMPLE: usize = 8;

/// Multiplies the transposed Kneser matrix by the inclusion matrix and
/// compares every entry with `C(k - |S ∩ T|, j)`.
pub fn verify_factorization(n: usize, j: usize, k: usize, budget: u128) -> Result<FactorizationReport> {
    let op = BoseMesnerOperator::new(n, j, k)?;
    let rows_j = count_subsets(n, j)?;
    let cols_k = count_subsets(n, k)?;
    // both factors and the product must fit
    check_budget(cols_k, cols_k.max(rows_j), budget)?;
    let kneser = build_structure_matrix(MatrixKind::Kneser, n, j, k, budget)?;
    let inclusion = build_structure_matrix(MatrixKind::Inclusion, n, j, k, budget)?;
    let kt = kneser.entries.t().mapv(i64::from);
    let w = inclusion.entries.mapv(i64::from);
    let product = kt.dot(&w);
    let closed = op.materialize(budget)?;

    let mut mismatches = Vec::new();
    let mut mismatch_count = 0u128;
    for ((row, column), &computed) in product.indexed_iter() {
        let expected = closed[(row, column)];
        if computed != expected {
            mismatch_count += 1;
            if mismatches.len() < MISMATCH_SAMPLE {
                mismatches.push(EntryMismatch {
                    row,
                    column,
                    computed: computed.into(),
                    expected: expected.into(),
                });
            }
        }
    }
    let symmetric = product == product.t();
    Ok(FactorizationReport {
        n,
        j,
        k,
        entries_checked: (cols_k as u128) * (cols_k as u128),
        mismatches,
        mismatch_count,
        symmetric,
        verdict: Verdict::from_checks(mismatch_count == 0 && symmetric),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowMismatch {
    pub subset: Vec<usize>,
    #[serde(serialize_with = "report::rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "report::rational")]
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvectorReport {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    /// `-C(k-1, j-1) C(n-j-1, k-1)`
    #[serde(serialize_with = "report::bigint")]
    pub eigenvalue: BigInt,
    /// `-C(n-j-1, k-j) C(n-k-1, j-1)`, the form produced by the derivation.
    #[serde(serialize_with = "report::bigint")]
    pub eigenvalue_product_form: BigInt,
    pub forms_agree: bool,
    pub b_nonzero: bool,
    pub rows_checked: usize,
    pub mismatched_rows: usize,
    pub first_mismatch: Option<RowMismatch>,
    pub verdict: Verdict,
}

pub fn eigenvalue(n: usize, j: usize, k: usize) -> BigInt {
    let (n, j, k) = (n as i64, j as i64, k as i64);
    -(binomial(k - 1, j - 1) * binomial(n - j - 1, k - 1))
}

fn eigenvalue_product_form(n: usize, j: usize, k: usize) -> BigInt {
    let (n, j, k) = (n as i64, j as i64, k as i64);
    -(binomial(n - j - 1, k - j) * binomial(n - k - 1, j - 1))
}

/// Checks `B_j b = λ_j b` exactly, `b` the k-subset sums of `x`.
pub fn verify_eigenvector(x: &WeightVector, j: usize, k: usize) -> Result<EigenvectorReport> {
    check_dims(x.n(), j, k)?;
    let mut reports = eigenvector_reports(x, k, &[j])?;
    Ok(reports.pop().expect("one report per j"))
}

/// [`verify_eigenvector`] for every `0 <= j <= k`, sharing one pass over
/// the intersection-size buckets.
pub fn verify_eigenvector_all_j(x: &WeightVector, k: usize) -> Result<Vec<EigenvectorReport>> {
    let js: Vec<usize> = (0..=k).collect();
    eigenvector_reports(x, k, &js)
}

fn eigenvector_reports(x: &WeightVector, k: usize, js: &[usize]) -> Result<Vec<EigenvectorReport>> {
    let n = x.n();
    if x.is_zero() {
        return Err(Error::Domain("eigenvector check needs a nonzero weight vector".into()));
    }
    check_dims(n, 0, k)?;
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let b = subset_sums(x, k)?;
    let masks = subset_masks(n, k)?;
    let scaled = b.scaled();
    let buckets: Vec<Vec<BigInt>> = masks
        .par_iter()
        .map(|&row| intersection_buckets(row, &masks, scaled, k))
        .collect();

    let mut reports = Vec::with_capacity(js.len());
    for &j in js {
        check_dims(n, j, k)?;
        let op = BoseMesnerOperator::new(n, j, k)?;
        let coeffs: Vec<BigInt> = (0..=k).map(|t| op.entry_by_intersection(t)).collect();
        let lambda = eigenvalue(n, j, k);
        let mut mismatched_rows = 0;
        let mut first_mismatch = None;
        for (rank, bucket) in buckets.iter().enumerate() {
            let lhs: BigInt = bucket.iter().zip(&coeffs).map(|(s, c)| s * c).sum();
            let rhs = &lambda * &scaled[rank];
            if lhs != rhs {
                mismatched_rows += 1;
                if first_mismatch.is_none() {
                    first_mismatch = Some(RowMismatch {
                        subset: unrank_colex(rank as u128, k, n)?.indices().to_vec(),
                        lhs: Rational::new(lhs, b.denominator().clone()),
                        rhs: Rational::new(rhs, b.denominator().clone()),
                    });
                }
            }
        }
        let product_form = eigenvalue_product_form(n, j, k);
        let forms_agree = product_form == lambda;
        let b_nonzero = !b.is_zero();
        reports.push(EigenvectorReport {
            n,
            j,
            k,
            eigenvalue: lambda,
            eigenvalue_product_form: product_form,
            forms_agree,
            b_nonzero,
            rows_checked: masks.len(),
            mismatched_rows,
            first_mismatch,
            verdict: Verdict::from_checks(mismatched_rows == 0 && forms_agree && b_nonzero),
        });
    }
    Ok(reports)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub description: String,
    pub entries_checked: usize,
    pub mismatches: usize,
    pub satisfied: bool,
}

impl IdentityCheck {
    fn new(name: &str, description: String, entries_checked: usize, mismatches: usize) -> Self {
        IdentityCheck {
            name: name.into(),
            description,
            entries_checked,
            mismatches,
            satisfied: mismatches == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WilsonReport {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub checks: Vec<IdentityCheck>,
    pub verdict: Verdict,
}

/// Dense checks of the three matrix identities behind the eigenvector fact:
///
/// - `(W_jk W_1k^T)(S, T)` is `C(n-j, k-j)` if `T ⊂ S`, else `C(n-j-1, k-j-1)`;
/// - `W_jk W_1k^T x = C(n-j-1, k-j) W_1j^T x`;
/// - `\bar W_jk^T W_1j^T x = C(n-k-1, j-1) \bar W_1k^T x = -C(n-k-1, j-1) W_1k^T x`.
pub fn verify_wilson_identities(x: &WeightVector, j: usize, k: usize, budget: u128) -> Result<WilsonReport> {
    let n = x.n();
    check_dims(n, j, k)?;
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let (ni, ji, ki) = (n as i64, j as i64, k as i64);
    let w_jk = build_structure_matrix(MatrixKind::Inclusion, n, j, k, budget)?.entries.mapv(i64::from);
    let w_1k = build_structure_matrix(MatrixKind::Inclusion, n, 1, k, budget)?.entries.mapv(i64::from);
    let kneser_jk = build_structure_matrix(MatrixKind::Kneser, n, j, k, budget)?.entries.mapv(i64::from);
    let kneser_1k = build_structure_matrix(MatrixKind::Kneser, n, 1, k, budget)?.entries.mapv(i64::from);
    let row_masks = subset_masks(n, j)?;

    let mut checks = Vec::new();

    // two-valued entry pattern
    let product = w_jk.dot(&w_1k.t());
    let inside = binomial(ni - ji, ki - ji);
    let outside = binomial(ni - ji - 1, ki - ji - 1);
    let mut bad = 0;
    for ((r, point), &v) in product.indexed_iter() {
        let expected = if row_masks[r] >> point & 1 == 1 { &inside } else { &outside };
        if BigInt::from(v) != *expected {
            bad += 1;
        }
    }
    checks.push(IdentityCheck::new(
        "union-count",
        format!("(W_jk W_1k^T)(S,T) = C({},{}) if T in S else C({},{})", n - j, k - j, ni - ji - 1, ki - ji - 1),
        product.len(),
        bad,
    ));

    let (xs, _) = x.scaled_integers();
    let b: Vec<BigInt> = matvec_t(&w_1k, &xs);
    let w1j_x: Vec<BigInt> = row_masks
        .iter()
        .map(|&m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| &xs[i]).sum())
        .collect();

    // W_jk b = C(n-j-1, k-j) W_1j^T x
    let lhs = matvec(&w_jk, &b);
    let coeff = binomial(ni - ji - 1, ki - ji);
    let bad = lhs.iter().zip(&w1j_x).filter(|(l, r)| **l != &coeff * *r).count();
    checks.push(IdentityCheck::new(
        "contraction",
        format!("W_jk W_1k^T x = C({},{}) W_1j^T x", ni - ji - 1, k - j),
        lhs.len(),
        bad,
    ));

    // Kneser side
    let kneser_x = matvec_t(&kneser_1k, &xs);
    let bad = kneser_x.iter().zip(&b).filter(|(kx, bx)| **kx != -*bx).count();
    checks.push(IdentityCheck::new(
        "kneser-complement",
        "Kneser_1k^T x = (J - W_1k^T) x = -W_1k^T x".into(),
        b.len(),
        bad,
    ));
    let lhs = matvec_t(&kneser_jk, &w1j_x);
    let coeff = binomial(ni - ki - 1, ji - 1);
    let bad = lhs.iter().zip(&b).filter(|(l, bx)| **l != -(&coeff * *bx)).count();
    checks.push(IdentityCheck::new(
        "kneser-contraction",
        format!("Kneser_jk^T W_1j^T x = -C({},{}) W_1k^T x", ni - ki - 1, ji - 1),
        lhs.len(),
        bad,
    ));

    let all = checks.iter().all(|c| c.satisfied);
    Ok(WilsonReport { n, j, k, checks, verdict: Verdict::from_checks(all) })
}

fn matvec(m: &Array2<i64>, v: &[BigInt]) -> Vec<BigInt> {
    m.rows()
        .into_iter()
        .map(|row| row.iter().zip(v).filter(|(&e, _)| e != 0).map(|(&e, x)| x * e).sum())
        .collect()
}

fn matvec_t(m: &Array2<i64>, v: &[BigInt]) -> Vec<BigInt> {
    m.columns()
        .into_iter()
        .map(|col| col.iter().zip(v).filter(|(&e, _)| e != 0).map(|(&e, x)| x * e).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{gen_random_zero_sum, normalize, NormalizeMode};

    fn subset(n: usize, v: &[usize]) -> KSubset {
        KSubset::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn inclusion_small() {
        let m = build_structure_matrix(MatrixKind::Inclusion, 3, 1, 2, DEFAULT_DENSE_BUDGET).unwrap();
        assert_eq!(m.entries.dim(), (3, 3));
        assert!(m.column_sums().iter().all(|&s| s == 2));
        let m = build_structure_matrix(MatrixKind::Inclusion, 7, 2, 3, DEFAULT_DENSE_BUDGET).unwrap();
        assert!(m.row_sums().iter().all(|&s| s == 5));
    }

    #[test]
    fn kneser_pairs_complements() {
        let m = build_structure_matrix(MatrixKind::Kneser, 4, 2, 2, DEFAULT_DENSE_BUDGET).unwrap();
        assert!(m.row_sums().iter().all(|&s| s == 1));
        assert!(m.column_sums().iter().all(|&s| s == 1));
        let masks = subset_masks(4, 2).unwrap();
        for ((r, c), &v) in m.entries.indexed_iter() {
            assert_eq!(v == 1, masks[r] | masks[c] == 0b1111);
        }
    }

    #[test]
    fn structure_row_sums_match_binomials() {
        for n in 1..=7 {
            for k in 0..=n {
                for j in 0..=k {
                    let inc = build_structure_matrix(MatrixKind::Inclusion, n, j, k, DEFAULT_DENSE_BUDGET).unwrap();
                    let kn = build_structure_matrix(MatrixKind::Kneser, n, j, k, DEFAULT_DENSE_BUDGET).unwrap();
                    let c = |a: usize, b: usize| binomial(a as i64, b as i64).to_u64().unwrap();
                    assert!(inc.row_sums().iter().all(|&s| s == c(n - j, k - j)));
                    assert!(kn.row_sums().iter().all(|&s| s == c(n - j, k)));
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            build_structure_matrix(MatrixKind::Inclusion, 20, 5, 10, 1_000),
            Err(Error::DenseBudget { .. })
        ));
        assert!(build_structure_matrix(MatrixKind::Inclusion, 3, 2, 1, 100).is_err());
    }

    #[test]
    fn bose_mesner_entries() {
        let s = subset(6, &[0, 1, 2]);
        assert_eq!(bose_mesner_entry(&s, &s, 3).unwrap(), BigInt::zero());
        assert_eq!(bose_mesner_entry(&s, &subset(6, &[3, 4, 5]), 3).unwrap(), BigInt::from(1));
        assert_eq!(bose_mesner_entry(&subset(4, &[0, 1]), &subset(4, &[1, 2]), 1).unwrap(), BigInt::from(1));
        assert!(bose_mesner_entry(&subset(4, &[0, 1]), &subset(4, &[1]), 1).is_err());
        assert!(bose_mesner_entry(&subset(4, &[0, 1]), &subset(4, &[1, 2]), 3).is_err());
    }

    #[test]
    fn factorization_small_cases() {
        for (n, j, k) in [(5, 1, 2), (6, 2, 3), (4, 0, 2)] {
            let r = verify_factorization(n, j, k, DEFAULT_DENSE_BUDGET).unwrap();
            assert_eq!(r.verdict, Verdict::Verified, "n={n} j={j} k={k}");
            assert_eq!(r.mismatch_count, 0);
            assert!(r.symmetric);
        }
        let b0 = BoseMesnerOperator::new(4, 0, 2).unwrap().materialize(DEFAULT_DENSE_BUDGET).unwrap();
        assert!(b0.iter().all(|&v| v == 1));
    }

    #[test]
    fn eigenvector_worked_example() {
        let q = |v: i64| Rational::from_integer(BigInt::from(v));
        let x = normalize(vec![q(1), q(1), q(-1), q(-1)], NormalizeMode::RequireZeroSum).unwrap();
        let r = verify_eigenvector(&x, 1, 2).unwrap();
        assert_eq!(r.eigenvalue, BigInt::from(-2));
        assert_eq!(r.verdict, Verdict::Verified);
        // explicit row of B_1 at S = {0,1}
        let b = subset_sums(&x, 2).unwrap();
        let masks = subset_masks(4, 2).unwrap();
        let op = BoseMesnerOperator::new(4, 1, 2).unwrap();
        assert_eq!(op.row_dot(0b0011, &masks, b.scaled()), BigInt::from(-4));
    }

    #[test]
    fn eigenvector_boundary_j() {
        let x = gen_random_zero_sum(8, 9, 11).unwrap();
        let r0 = verify_eigenvector(&x, 0, 3).unwrap();
        assert_eq!(r0.eigenvalue, BigInt::zero());
        assert_eq!(r0.verdict, Verdict::Verified);
        let rk = verify_eigenvector(&x, 3, 3).unwrap();
        assert_eq!(rk.eigenvalue, -binomial(4, 2));
        assert_eq!(rk.verdict, Verdict::Verified);
    }

    #[test]
    fn eigenvector_rejects_zero_vector() {
        let x = normalize(vec![Rational::zero(); 5], NormalizeMode::RequireZeroSum).unwrap();
        assert!(verify_eigenvector(&x, 1, 2).is_err());
    }

    #[test]
    fn perturbed_vector_is_not_an_eigenvector() {
        let x = normalize(
            vec![Rational::from_integer(3.into()), Rational::from_integer(1.into()), Rational::zero(), Rational::zero()],
            NormalizeMode::ShiftToZero,
        )
        .unwrap();
        assert_eq!(verify_eigenvector(&x, 1, 2).unwrap().verdict, Verdict::Verified);
        let b = subset_sums(&x, 2).unwrap();
        let mut shifted = b.scaled().to_vec();
        shifted[0] += 1;
        let masks = subset_masks(4, 2).unwrap();
        let op = BoseMesnerOperator::new(4, 1, 2).unwrap();
        let lhs = op.row_dot(masks[0], &masks, &shifted);
        assert_ne!(lhs, eigenvalue(4, 1, 2) * &shifted[0]);
    }

    #[test]
    fn wilson_identities_hold() {
        for (n, j, k, seed) in [(5, 1, 2, 1), (6, 2, 3, 2), (6, 1, 2, 3), (7, 0, 3, 4), (7, 3, 3, 5)] {
            let x = gen_random_zero_sum(n, 10, seed).unwrap();
            let r = verify_wilson_identities(&x, j, k, DEFAULT_DENSE_BUDGET).unwrap();
            assert_eq!(r.verdict, Verdict::Verified, "{r:?}");
        }
    }

    #[test]
    fn union_count_entry() {
        // (n,k,j) = (5,2,1), T ⊂ S: C(4,1) = 4
        let w12 = build_structure_matrix(MatrixKind::Inclusion, 5, 1, 2, DEFAULT_DENSE_BUDGET).unwrap();
        let w = w12.entries.mapv(i64::from);
        let p = w.dot(&w.t());
        for r in 0..5 {
            assert_eq!(p[(r, r)], 4);
        }
    }
}
