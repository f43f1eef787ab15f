//! Exact counts of nonnegative k-subset sums.
//!
//! Two independent engines: revolving-door enumeration over index subsets
//! (with optional restrictions), and a composition sum over a
//! [`MultiplicityPattern`] that only looks at how many copies of each
//! distinct value a subset uses. Closed-form sizes of the families `F_i`
//! used in the x_1 bound live here too.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_u128, BinomialTable, RevolvingDoor, MAX_MASK_N};
use crate::weights::{normalize, NormalizeMode, WeightVector};
use crate::{report, Error, Rational, Result};

/// One conjunct of a [`Restriction`], over sorted indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "indices")]
pub enum Atom {
    Contains(usize),
    Intersects(Vec<usize>),
    Disjoint(Vec<usize>),
}

impl Atom {
    fn indices(&self) -> &[usize] {
        match self {
            Atom::Contains(i) => std::slice::from_ref(i),
            Atom::Intersects(v) | Atom::Disjoint(v) => v,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            Atom::Contains(i) => write!(f, "contains:{i}"),
            Atom::Intersects(v) => write!(f, "intersects:{}", join(v)),
            Atom::Disjoint(v) => write!(f, "disjoint:{}", join(v)),
        }
    }
}

impl FromStr for Atom {
    type Err = Error;

    /// `contains:i`, `intersects:i,j,...` or `disjoint:i,j,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Restriction(format!("{s:?}: expected KIND:INDICES")))?;
        let indices = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Restriction(format!("{s:?}: bad index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match kind.trim() {
            "contains" => match indices.as_slice() {
                [i] => Ok(Atom::Contains(*i)),
                _ => Err(Error::Restriction(format!("{s:?}: contains takes exactly one index"))),
            },
            "intersects" => Ok(Atom::Intersects(indices)),
            "disjoint" => Ok(Atom::Disjoint(indices)),
            other => Err(Error::Restriction(format!("unknown restriction kind {other:?}"))),
        }
    }
}

/// Conjunction of atoms; empty means no restriction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Restriction {
    atoms: Vec<Atom>,
}

impl Restriction {
    pub fn none() -> Self {
        Restriction::default()
    }

    pub fn new(atoms: Vec<Atom>) -> Self {
        Restriction { atoms }
    }

    pub fn and(mut self, atom: Atom) -> Self {
        self.atoms.push(atom);
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn parse_all<S: AsRef<str>>(specs: &[S]) -> Result<Self> {
        let atoms = specs.iter().map(|s| s.as_ref().parse()).collect::<Result<_>>()?;
        Ok(Restriction { atoms })
    }

    /// Checks indices against `n` and lowers atoms to bit masks.
    pub fn compile(&self, n: usize) -> Result<CompiledRestriction> {
        if n > MAX_MASK_N {
            return Err(Error::Domain(format!("enumeration supports n <= {MAX_MASK_N}, got {n}")));
        }
        let mut checks = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            let mut mask = 0u128;
            for &i in atom.indices() {
                if i >= n {
                    return Err(Error::Restriction(format!("index {i} in {atom} is not below n = {n}")));
                }
                mask |= 1u128 << i;
            }
            if atom.indices().is_empty() {
                return Err(Error::Restriction(format!("{atom} has no indices")));
            }
            let check = match atom {
                Atom::Contains(_) => Check::All(mask),
                Atom::Intersects(_) => Check::Any(mask),
                Atom::Disjoint(_) => Check::None(mask),
            };
            checks.push(check);
        }
        Ok(CompiledRestriction { checks })
    }
}

#[derive(Debug, Clone, Copy)]
enum Check {
    All(u128),
    Any(u128),
    None(u128),
}

#[derive(Debug, Clone)]
pub struct CompiledRestriction {
    checks: Vec<Check>,
}

impl CompiledRestriction {
    pub fn accepts(&self, subset_mask: u128) -> bool {
        self.checks.iter().all(|c| match *c {
            Check::All(m) => subset_mask & m == m,
            Check::Any(m) => subset_mask & m != 0,
            Check::None(m) => subset_mask & m == 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundComparison {
    pub name: String,
    #[serde(serialize_with = "report::bigint")]
    pub value: BigInt,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarEquality {
    pub is_star: bool,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "report::u128_str")]
    pub total_checked: u128,
    #[serde(serialize_with = "report::u128_str")]
    pub nonnegative_count: u128,
    pub restriction: Restriction,
    pub bound_comparisons: Vec<BoundComparison>,
    pub star_equality: Option<StarEquality>,
}

/// Subsets per enumeration chunk. Fixed so that partial counts, and hence
/// results, do not depend on the number of workers.
const CHUNK: u128 = 1 << 15;

trait Accumulator: Clone + Send + Sync {
    fn add(&mut self, v: &Self);
    fn sub(&mut self, v: &Self);
    fn is_nonnegative(&self) -> bool;
}

impl Accumulator for i128 {
    fn add(&mut self, v: &Self) {
        *self += *v;
    }
    fn sub(&mut self, v: &Self) {
        *self -= *v;
    }
    fn is_nonnegative(&self) -> bool {
        *self >= 0
    }
}

impl Accumulator for BigInt {
    fn add(&mut self, v: &Self) {
        *self += v;
    }
    fn sub(&mut self, v: &Self) {
        *self -= v;
    }
    fn is_nonnegative(&self) -> bool {
        !self.is_negative()
    }
}

fn count_chunked<T: Accumulator>(
    values: &[T],
    k: usize,
    total: u128,
    filter: &CompiledRestriction,
) -> Result<(u128, u128)> {
    let n = values.len();
    let chunks = total.div_ceil(CHUNK);
    let partials = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut door = RevolvingDoor::starting_at(n, k, lo)?;
            let mut sum = values[door.current()[0]].clone();
            for &i in &door.current()[1..] {
                sum.add(&values[i]);
            }
            let (mut checked, mut nonneg) = (0u128, 0u128);
            for step in lo..hi {
                if filter.accepts(door.mask()) {
                    checked += 1;
                    nonneg += u128::from(sum.is_nonnegative());
                }
                if step + 1 < hi {
                    let swap = door.advance().expect("rank below total");
                    sum.sub(&values[swap.removed]);
                    sum.add(&values[swap.added]);
                }
            }
            Ok((checked, nonneg))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(partials.into_iter().fold((0, 0), |(a, b), (c, d)| (a + c, b + d)))
}

/// `(subsets satisfying the filter, those among them with sum >= 0)` for
/// integer weights, by chunked revolving-door enumeration.
pub fn count_scaled(values: &[BigInt], k: usize, filter: &CompiledRestriction) -> Result<(u128, u128)> {
    let n = values.len();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if n > MAX_MASK_N {
        return Err(Error::Domain(format!("enumeration supports n <= {MAX_MASK_N}, got {n}")));
    }
    let total = binomial_u128(n, k)
        .ok_or_else(|| Error::Domain(format!("C({n},{k}) overflows u128")))?;
    let max_bits = values.iter().map(|v| v.bits()).max().unwrap_or(0);
    // k * max|v| must fit comfortably in i128
    if max_bits + 8 < 120 {
        let small: Vec<i128> = values
            .iter()
            .map(|v| i128::try_from(v).expect("bit length checked"))
            .collect();
        count_chunked(&small, k, total, filter)
    } else {
        count_chunked(values, k, total, filter)
    }
}

/// Counts the k-subsets `S` satisfying `restriction` with `sum(S) >= 0`.
pub fn count_nonnegative(x: &WeightVector, k: usize, restriction: &Restriction) -> Result<CountReport> {
    let n = x.n();
    let filter = restriction.compile(n)?;
    let (scaled, _) = x.scaled_integers();
    let (total_checked, nonnegative_count) = count_scaled(&scaled, k, &filter)?;

    let mut bound_comparisons = Vec::new();
    let mut star_equality = None;
    if restriction.is_empty() {
        let bound = binomial(n as i64 - 1, k as i64 - 1);
        let count = BigInt::from(nonnegative_count);
        bound_comparisons.push(BoundComparison {
            name: "C(n-1,k-1)".into(),
            value: bound.clone(),
            satisfied: count >= bound,
        });
        if count == bound {
            let star = Restriction::none().and(Atom::Contains(0)).compile(n)?;
            let (_, on_top) = count_scaled(&scaled, k, &star)?;
            let is_star = BigInt::from(on_top) == bound;
            star_equality = Some(StarEquality {
                is_star,
                witness: if is_star {
                    "nonnegative family is exactly the star on index 0".into()
                } else {
                    "count equals C(n-1,k-1) but the family is not the star on index 0".into()
                },
            });
        }
    }
    Ok(CountReport {
        n,
        k,
        total_checked,
        nonnegative_count,
        restriction: restriction.clone(),
        bound_comparisons,
        star_equality,
    })
}

/// A weight vector compressed to `(value, multiplicity)` pairs with strictly
/// decreasing values and zero total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityPattern {
    pairs: Vec<(Rational, usize)>,
}

impl MultiplicityPattern {
    pub fn new(pairs: Vec<(Rational, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Empty);
        }
        if pairs.iter().any(|(_, m)| *m == 0) {
            return Err(Error::Domain("multiplicities must be at least 1".into()));
        }
        if pairs.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::Domain("pattern values must be strictly decreasing".into()));
        }
        let total: Rational = pairs
            .iter()
            .map(|(v, m)| v * Rational::from_integer(BigInt::from(*m)))
            .sum();
        if !total.is_zero() {
            return Err(Error::NonZeroSum { residual: total });
        }
        Ok(MultiplicityPattern { pairs })
    }

    pub fn from_integers(pairs: &[(i64, usize)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(v, m)| (Rational::from_integer(BigInt::from(v)), m))
                .collect(),
        )
    }

    pub fn from_weights(x: &WeightVector) -> Self {
        let mut pairs: Vec<(Rational, usize)> = Vec::new();
        for v in x.values() {
            match pairs.last_mut() {
                Some((last, m)) if last == v => *m += 1,
                _ => pairs.push((v.clone(), 1)),
            }
        }
        MultiplicityPattern { pairs }
    }

    pub fn pairs(&self) -> &[(Rational, usize)] {
        &self.pairs
    }

    pub fn n(&self) -> usize {
        self.pairs.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct(&self) -> usize {
        self.pairs.len()
    }

    pub fn expand(&self) -> WeightVector {
        let raw = self
            .pairs
            .iter()
            .flat_map(|(v, m)| std::iter::repeat_n(v.clone(), *m))
            .collect();
        normalize(raw, NormalizeMode::RequireZeroSum).expect("pattern invariants imply zero sum")
    }
}

impl Serialize for MultiplicityPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            value: String,
            multiplicity: usize,
        }
        s.collect_seq(self.pairs.iter().map(|(v, m)| Entry {
            value: report::rational_to_string(v),
            multiplicity: *m,
        }))
    }
}

/// Order in which compositions `(c_1, .., c_d)` are visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionOrder {
    Lexicographic,
    ReverseLexicographic,
}

/// `sum over (c_1..c_d), sum c_i = k, c_i <= m_i, sum c_i v_i >= 0` of
/// `prod C(m_i, c_i)`, visiting compositions lexicographically.
pub fn count_nonnegative_dp(p: &MultiplicityPattern, k: usize) -> Result<BigInt> {
    count_nonnegative_dp_ordered(p, k, CompositionOrder::Lexicographic)
}

pub fn count_nonnegative_dp_ordered(
    p: &MultiplicityPattern,
    k: usize,
    order: CompositionOrder,
) -> Result<BigInt> {
    let n = p.n();
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    let denom = p
        .pairs
        .iter()
        .fold(BigInt::one(), |acc, (v, _)| num_integer::Integer::lcm(&acc, v.denom()));
    let values: Vec<BigInt> = p.pairs.iter().map(|(v, _)| v.numer() * (&denom / v.denom())).collect();
    let mults: Vec<usize> = p.pairs.iter().map(|(_, m)| *m).collect();
    let mut suffix_capacity = vec![0usize; mults.len() + 1];
    for i in (0..mults.len()).rev() {
        suffix_capacity[i] = suffix_capacity[i + 1] + mults[i];
    }
    let table = BinomialTable::new(mults.iter().copied().max().unwrap_or(0));
    let mut walk = CompositionWalk {
        values: &values,
        mults: &mults,
        suffix_capacity: &suffix_capacity,
        table: &table,
        order,
        total: BigInt::zero(),
    };
    walk.visit(0, k, BigInt::zero(), BigInt::one());
    Ok(walk.total)
}

struct CompositionWalk<'a> {
    values: &'a [BigInt],
    mults: &'a [usize],
    suffix_capacity: &'a [usize],
    table: &'a BinomialTable,
    order: CompositionOrder,
    total: BigInt,
}

impl CompositionWalk<'_> {
    fn visit(&mut self, pos: usize, remaining: usize, partial: BigInt, weight: BigInt) {
        if pos == self.values.len() {
            if remaining == 0 && !partial.is_negative() {
                self.total += weight;
            }
            return;
        }
        let hi = remaining.min(self.mults[pos]);
        // the rest must still be able to absorb what this position leaves over
        let lo = remaining.saturating_sub(self.suffix_capacity[pos + 1]);
        if lo > hi {
            return;
        }
        let choices: Box<dyn Iterator<Item = usize>> = match self.order {
            CompositionOrder::Lexicographic => Box::new(lo..=hi),
            CompositionOrder::ReverseLexicographic => Box::new((lo..=hi).rev()),
        };
        for c in choices {
            let ways = self.table.get(self.mults[pos] as i64, c as i64);
            let next = &partial + &self.values[pos] * BigInt::from(c);
            self.visit(pos + 1, remaining - c, next, &weight * ways);
        }
    }
}

/// `|F_i|`: k-subsets containing `x_i` (1-based) but not `x_1` that meet both
/// `A = {x_1..x_k}` and `C = {x_1, x_{k+1}..x_{2k-1}}`.
pub fn family_size_fi(n: usize, k: usize, i: usize) -> Result<BigInt> {
    if k == 0 || n < 2 * k {
        return Err(Error::Domain(format!("need 1 <= k and n >= 2k, got n = {n}, k = {k}")));
    }
    if i < 2 || i > n {
        return Err(Error::Domain(format!("index i = {i} must satisfy 2 <= i <= n = {n}")));
    }
    let (n, k) = (n as i64, k as i64);
    let base = binomial(n - 2, k - 1) - binomial(n - k - 1, k - 1);
    if (i as i64) < 2 * k {
        Ok(base)
    } else {
        Ok(base - binomial(n - k - 1, k - 1) + binomial(n - 2 * k, k - 1))
    }
}
