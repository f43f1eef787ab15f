use std::fmt;

use serde::Serialize;

use super::binomial_u128;
use crate::{Error, Result};

/// Largest ambient size for which subsets can be represented as `u128` masks.
pub const MAX_MASK_N: usize = 128;

/// A k-element index set over `[0, n)`, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KSubset {
    n: usize,
    indices: Vec<usize>,
}

impl KSubset {
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.is_empty() {
            return Err(Error::InvalidSubset("subset must have at least one element".into()));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("repeated index in {indices:?}")));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::InvalidSubset(format!("index {last} not below n = {n}")));
            }
        }
        Ok(KSubset { n, indices })
    }

    /// Builds from indices already known to be strictly increasing and `< n`.
    pub(crate) fn from_sorted_unchecked(n: usize, indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.last().is_none_or(|&l| l < n));
        KSubset { n, indices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Bit mask of the subset. Requires `n <= MAX_MASK_N`.
    pub fn mask(&self) -> u128 {
        assert!(self.n <= MAX_MASK_N, "mask needs n <= {MAX_MASK_N}");
        self.indices.iter().fold(0u128, |m, &i| m | (1u128 << i))
    }

    pub fn intersection_size(&self, other: &KSubset) -> usize {
        let (mut a, mut b, mut count) = (0, 0, 0);
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    a += 1;
                    b += 1;
                }
            }
        }
        count
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.indices.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Colexicographic rank `sum_i C(s_i, i + 1)` over the increasing indices.
pub fn rank_colex(subset: &KSubset) -> u128 {
    rank_colex_slice(subset.indices())
}

pub(crate) fn rank_colex_slice(indices: &[usize]) -> u128 {
    indices
        .iter()
        .enumerate()
        .map(|(i, &s)| binomial_u128(s, i + 1).expect("colex rank overflows u128"))
        .sum()
}

/// Inverse of [`rank_colex`] among the k-subsets of `[0, n)`.
pub fn unrank_colex(rank: u128, k: usize, n: usize) -> Result<KSubset> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let total = binomial_u128(n, k)
        .ok_or_else(|| Error::Domain(format!("C({n},{k}) overflows u128")))?;
    if rank >= total {
        return Err(Error::RankOutOfRange { rank, n, k, total });
    }
    let mut indices = vec![0usize; k];
    let mut rest = rank;
    let mut upper = n;
    for i in (1..=k).rev() {
        // largest c < upper with C(c, i) <= rest
        let mut c = upper - 1;
        loop {
            let v = binomial_u128(c, i).expect("bounded by C(n,k)");
            if v <= rest {
                rest -= v;
                break;
            }
            c -= 1;
        }
        indices[i - 1] = c;
        upper = c;
    }
    Ok(KSubset::from_sorted_unchecked(n, indices))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colex_oracle(n: usize, k: usize) -> Vec<Vec<usize>> {
        // all k-subsets, sorted by reversed index tuple (largest element first)
        let mut all = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                all.push((0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            }
        }
        all.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        all
    }

    #[test]
    fn rank_examples() {
        let s = KSubset::new(4, vec![0, 1]).unwrap();
        assert_eq!(rank_colex(&s), 0);
        let order = colex_oracle(4, 2);
        let pos = order.iter().position(|v| v == &vec![2, 3]).unwrap();
        assert_eq!(pos, 5);
        assert_eq!(rank_colex(&KSubset::new(4, vec![2, 3]).unwrap()), 5);
    }

    #[test]
    fn rank_matches_enumerated_colex_order() {
        for n in 1..=9 {
            for k in 1..=n {
                for (r, s) in colex_oracle(n, k).into_iter().enumerate() {
                    let sub = KSubset::new(n, s).unwrap();
                    assert_eq!(rank_colex(&sub), r as u128);
                    assert_eq!(unrank_colex(r as u128, k, n).unwrap(), sub);
                }
            }
        }
    }

    #[test]
    fn unrank_out_of_range() {
        assert!(matches!(
            unrank_colex(56, 3, 8),
            Err(Error::RankOutOfRange { total: 56, .. })
        ));
        assert!(unrank_colex(0, 0, 3).is_err());
        assert!(unrank_colex(0, 4, 3).is_err());
    }

    #[test]
    fn subset_validation() {
        assert!(KSubset::new(3, vec![0, 3]).is_err());
        assert!(KSubset::new(3, vec![1, 1]).is_err());
        assert!(KSubset::new(3, vec![]).is_err());
        let s = KSubset::new(5, vec![4, 0, 2]).unwrap();
        assert_eq!(s.indices(), &[0, 2, 4]);
        assert_eq!(s.to_string(), "{0,2,4}");
        let t = KSubset::new(5, vec![2, 3, 4]).unwrap();
        assert_eq!(s.intersection_size(&t), 2);
        assert_eq!((s.mask() & t.mask()).count_ones(), 2);
    }
}
