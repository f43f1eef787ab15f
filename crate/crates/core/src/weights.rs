//! Weight vectors: exact parsing, normalization to the sorted zero-sum form,
//! generators, and the vector of k-subset sums.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{KSubset, RevolvingDoor, MAX_MASK_N};
use crate::combinatorics::{binomial_u128, rank_colex, rank_colex_slice};
use crate::{report, Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizeMode {
    #[default]
    RequireZeroSum,
    ShiftToZero,
}

impl std::str::FromStr for NormalizeMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "require-zero-sum" => Ok(NormalizeMode::RequireZeroSum),
            "shift-to-zero" => Ok(NormalizeMode::ShiftToZero),
            other => Err(format!(
                "unknown mode {other:?}, expected \"require-zero-sum\" or \"shift-to-zero\""
            )),
        }
    }
}

/// Where a weight vector came from and what normalization did to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub source: String,
    /// Entries as supplied, in input order.
    pub original: Vec<String>,
    /// `original_positions[i]` is the input position of sorted entry `i`.
    pub original_positions: Vec<usize>,
    pub mode: NormalizeMode,
    /// Amount subtracted from every entry (`0` in require-zero-sum mode).
    #[serde(serialize_with = "report::rational")]
    pub shift: Rational,
}

/// `n` exact rationals sorted non-increasing with sum exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    #[serde(serialize_with = "report::rational_vec")]
    values: Vec<Rational>,
    provenance: Provenance,
}

impl WeightVector {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.provenance.source = source.into();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Integer vector `D * x` with `D` the least common denominator, and `D`.
    ///
    /// Every identity checked by this crate is homogeneous in `x` and every
    /// sign test is invariant under positive scaling, so kernels work on the
    /// scaled integers.
    pub fn scaled_integers(&self) -> (Vec<BigInt>, BigInt) {
        let denom = self
            .values
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scaled = self
            .values
            .iter()
            .map(|q| q.numer() * (&denom / q.denom()))
            .collect();
        (scaled, denom)
    }

    /// Indices `{0, .., k-1}`: the k largest entries.
    pub fn top_indices(&self, k: usize) -> Result<KSubset> {
        KSubset::new(self.n(), (0..k).collect())
    }

    pub fn subset_sum(&self, subset: &KSubset) -> Rational {
        subset.indices().iter().map(|&i| &self.values[i]).sum()
    }
}

/// Parses an integer (`"-12"`) or fraction (`"3/4"`, `"-3/4"`) exactly.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer = parse_integer(num, true)?;
    let denom = match den {
        Some(d) => parse_integer(d, false)?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(numer, denom))
}

fn parse_integer(text: &str, signed: bool) -> std::result::Result<BigInt, String> {
    let digits = match text.strip_prefix('-').or_else(|| text.strip_prefix('+')) {
        Some(rest) if signed => rest,
        Some(_) => return Err(format!("unexpected sign in denominator {text:?}")),
        None => text,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{text:?} is not an integer"));
    }
    text.parse::<BigInt>().map_err(|e| format!("{text:?}: {e}"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightDocument {
    weights: Vec<serde_json::Value>,
    #[serde(default)]
    mode: Option<String>,
}

/// Reads a weight document `{"weights": [...], "mode": ...}`.
///
/// Entries are json integers or strings holding an integer or `p/q`.
pub fn load_weights(text: &str) -> Result<WeightVector> {
    let doc: WeightDocument =
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let mode = match doc.mode.as_deref() {
        None => NormalizeMode::default(),
        Some(m) => m.parse().map_err(Error::Document)?,
    };
    let mut original = Vec::with_capacity(doc.weights.len());
    let mut raw = Vec::with_capacity(doc.weights.len());
    for (pos, entry) in doc.weights.iter().enumerate() {
        let entry_no = pos + 1;
        let (echo, value) = match entry {
            serde_json::Value::String(s) => (s.clone(), parse_rational(s)),
            serde_json::Value::Number(num) if num.is_i64() || num.is_u64() => {
                let s = num.to_string();
                let parsed = parse_rational(&s);
                (s, parsed)
            }
            serde_json::Value::Number(num) => (
                num.to_string(),
                Err("non-integer json number; write fractions as \"p/q\" strings".to_string()),
            ),
            other => (other.to_string(), Err(format!("expected a number or string, found {other}"))),
        };
        let value = value.map_err(|message| Error::Parse { entry: entry_no, message })?;
        original.push(echo);
        raw.push(value);
    }
    let mut wv = normalize(raw, mode)?;
    wv.provenance.original = original;
    wv.provenance.source = "document".into();
    Ok(wv)
}

/// Sorts non-increasing (stable) and enforces or establishes a zero sum.
pub fn normalize(raw: Vec<Rational>, mode: NormalizeMode) -> Result<WeightVector> {
    if raw.is_empty() {
        return Err(Error::Empty);
    }
    let sum: Rational = raw.iter().sum();
    let shift = match mode {
        NormalizeMode::RequireZeroSum => {
            if !sum.is_zero() {
                return Err(Error::NonZeroSum { residual: sum });
            }
            Rational::zero()
        }
        NormalizeMode::ShiftToZero => {
            if sum.is_negative() {
                return Err(Error::NegativeSum { sum });
            }
            // Subtracting s/n >= 0 lowers every k-sum by k*s/n, so counts of
            // the shifted vector lower-bound those of the raw one.
            sum / Rational::from_integer(BigInt::from(raw.len()))
        }
    };
    let original = raw.iter().map(report::rational_to_string).collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[b].cmp(&raw[a]));
    let values = order.iter().map(|&i| &raw[i] - &shift).collect();
    Ok(WeightVector {
        values,
        provenance: Provenance {
            source: "values".into(),
            original,
            original_positions: order,
            mode,
            shift,
        },
    })
}

/// `(n-1, -1, ..., -1)`: the extremal configuration whose nonnegative family
/// is the star on index 0.
pub fn gen_star(n: usize) -> Result<WeightVector> {
    if n < 2 {
        return Err(Error::Domain(format!("star needs n >= 2, got {n}")));
    }
    let mut raw = vec![Rational::from_integer(BigInt::from(-1)); n];
    raw[0] = Rational::from_integer(BigInt::from(n - 1));
    Ok(normalize(raw, NormalizeMode::RequireZeroSum)?.with_source(format!("star(n={n})")))
}

/// `n - 1` uniform integers from `[-magnitude, magnitude]` plus the entry
/// that closes the sum to zero. Deterministic per seed.
pub fn gen_random_zero_sum(n: usize, magnitude: u64, seed: u64) -> Result<WeightVector> {
    if n < 2 {
        return Err(Error::Domain(format!("random vector needs n >= 2, got {n}")));
    }
    if magnitude < 1 || magnitude > i64::MAX as u64 {
        return Err(Error::Domain(format!("magnitude must be in [1, 2^63), got {magnitude}")));
    }
    let m = magnitude as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw: Vec<BigInt> = (0..n - 1).map(|_| BigInt::from(rng.gen_range(-m..=m))).collect();
    let closing: BigInt = -raw.iter().sum::<BigInt>();
    raw.push(closing);
    let raw = raw.into_iter().map(Rational::from_integer).collect();
    Ok(normalize(raw, NormalizeMode::RequireZeroSum)?.with_source(format!(
        "random(n={n}, magnitude={magnitude}, seed={seed})"
    )))
}

/// Weight document for `wv`, readable by [`load_weights`].
pub fn weight_document(wv: &WeightVector) -> serde_json::Value {
    serde_json::json!({
        "weights": wv.values().iter().map(report::rational_to_string).collect::<Vec<_>>(),
        "mode": "require-zero-sum",
    })
}

/// The vector `b` of k-subset sums, indexed by colex rank.
///
/// Stored as integers `D * b_S` together with the common denominator `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSumVector {
    n: usize,
    k: usize,
    scaled: Vec<BigInt>,
    denominator: BigInt,
}

impl SubsetSumVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled.is_empty()
    }

    pub fn get(&self, colex_rank: usize) -> Rational {
        Rational::new(self.scaled[colex_rank].clone(), self.denominator.clone())
    }

    pub fn entry(&self, subset: &KSubset) -> Rational {
        self.get(rank_colex(subset) as usize)
    }

    pub fn scaled(&self) -> &[BigInt] {
        &self.scaled
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn entries(&self) -> Vec<Rational> {
        (0..self.len()).map(|r| self.get(r)).collect()
    }

    pub fn sum(&self) -> Rational {
        Rational::new(self.scaled.iter().sum(), self.denominator.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.scaled.iter().all(Zero::is_zero)
    }
}

/// Largest `C(n, k)` that [`subset_sums`] will materialize.
pub const MAX_SUBSET_SUM_ENTRIES: u128 = 50_000_000;

/// All k-subset sums of `x`, maintained through revolving-door swaps.
pub fn subset_sums(x: &WeightVector, k: usize) -> Result<SubsetSumVector> {
    let n = x.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let total = binomial_u128(n, k).filter(|&t| t <= MAX_SUBSET_SUM_ENTRIES).ok_or_else(|| {
        Error::Domain(format!("C({n},{k}) exceeds the {MAX_SUBSET_SUM_ENTRIES}-entry limit"))
    })?;
    let (scaled_x, denominator) = x.scaled_integers();
    let mut scaled = vec![BigInt::zero(); total as usize];
    scan_subset_sums(&scaled_x, k, |subset, _mask, sum| {
        scaled[rank_colex_slice(subset) as usize] = sum.clone();
    })?;
    Ok(SubsetSumVector { n, k, scaled, denominator })
}

/// Visits every k-subset of `values` in revolving-door order with its bit
/// mask and running sum. Requires `values.len() <= MAX_MASK_N`.
pub fn scan_subset_sums<F>(values: &[BigInt], k: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize], u128, &BigInt),
{
    let n = values.len();
    if n > MAX_MASK_N {
        return Err(Error::Domain(format!("enumeration supports n <= {MAX_MASK_N}, got {n}")));
    }
    let mut door = RevolvingDoor::new(n, k)?;
    let mut sum: BigInt = door.current().iter().map(|&i| &values[i]).sum();
    loop {
        visit(door.current(), door.mask(), &sum);
        match door.advance() {
            Some(swap) => {
                sum -= &values[swap.removed];
                sum += &values[swap.added];
            }
            None => return Ok(()),
        }
    }
}
