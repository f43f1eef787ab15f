use serde::Serialize;

use super::subset::{KSubset, MAX_MASK_N};
use super::binomial_u128;
use crate::{Error, Result};

/// One revolving-door step: `removed` left the subset and `added` joined it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Swap {
    pub removed: usize,
    pub added: usize,
}

/// Revolving-door Gray code over the k-subsets of `[0, n)` (Knuth's
/// Algorithm 7.2.1.3R). Consecutive subsets differ by exactly one swap.
///
/// The order is the one defined recursively by
/// `R(n, k) = R(n-1, k), reverse(R(n-1, k-1)) + {n-1}`, so a stream can be
/// started at any rank via [`RevolvingDoor::starting_at`].
#[derive(Debug, Clone)]
pub struct RevolvingDoor {
    n: usize,
    k: usize,
    // c[0..k] is the current subset, c[k] == n is a sentinel.
    c: Vec<usize>,
    mask: u128,
    done: bool,
}

impl RevolvingDoor {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::starting_at(n, k, 0)
    }

    pub fn starting_at(n: usize, k: usize, rank: u128) -> Result<Self> {
        let first = unrank_revolving(rank, k, n)?;
        let mut c = first.indices().to_vec();
        c.push(n);
        let mask = if n <= MAX_MASK_N { first.mask() } else { 0 };
        Ok(RevolvingDoor { n, k, c, mask, done: false })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The current subset, strictly increasing.
    pub fn current(&self) -> &[usize] {
        &self.c[..self.k]
    }

    /// Bit mask of the current subset; always 0 when `n > MAX_MASK_N`.
    pub fn mask(&self) -> u128 {
        self.mask
    }

    /// Moves to the next subset and reports the swap, or `None` at the end.
    pub fn advance(&mut self) -> Option<Swap> {
        if self.done {
            return None;
        }
        let swap = self.step();
        match swap {
            Some(s) => {
                if self.n <= MAX_MASK_N {
                    self.mask ^= (1u128 << s.removed) | (1u128 << s.added);
                }
            }
            None => self.done = true,
        }
        swap
    }

    fn step(&mut self) -> Option<Swap> {
        let t = self.k;
        let c = &mut self.c;
        // 1-based accessors as in the published algorithm: c_j == c[j - 1].
        let mut j;
        let mut try_decrease;
        if t % 2 == 1 {
            if c[0] + 1 < c[1] {
                let removed = c[0];
                c[0] += 1;
                return Some(Swap { removed, added: c[0] });
            }
            j = 2;
            try_decrease = true;
        } else {
            if c[0] > 0 {
                let removed = c[0];
                c[0] -= 1;
                return Some(Swap { removed, added: c[0] });
            }
            j = 2;
            try_decrease = false;
        }
        loop {
            if j > t {
                return None;
            }
            if try_decrease {
                // c_j == c_{j-1} + 1
                if c[j - 1] >= j {
                    let removed = c[j - 1];
                    c[j - 1] = c[j - 2];
                    c[j - 2] = j - 2;
                    return Some(Swap { removed, added: j - 2 });
                }
                j += 1;
                try_decrease = false;
            } else {
                // c_{j-1} == j - 2
                if c[j - 1] + 1 < c[j] {
                    let removed = c[j - 2];
                    c[j - 2] = c[j - 1];
                    c[j - 1] += 1;
                    return Some(Swap { removed, added: c[j - 1] });
                }
                j += 1;
                try_decrease = true;
            }
        }
    }
}

/// Position of `indices` (strictly increasing) in the revolving-door order.
pub fn rank_revolving(subset: &KSubset) -> u128 {
    rank_revolving_slice(subset.indices())
}

pub(crate) fn rank_revolving_slice(indices: &[usize]) -> u128 {
    let mut rank: u128 = 0;
    let mut sign_positive = true;
    // rank(c_1..c_t) = C(m, t) + C(m, t-1) - 1 - rank(c_1..c_{t-1}), m = c_t
    for t in (1..=indices.len()).rev() {
        let m = indices[t - 1];
        let block = binomial_u128(m, t).expect("rank overflow")
            + binomial_u128(m, t - 1).expect("rank overflow")
            - 1;
        if sign_positive {
            rank += block;
        } else {
            rank -= block;
        }
        sign_positive = !sign_positive;
    }
    rank
}

/// Inverse of [`rank_revolving`] among the k-subsets of `[0, n)`.
pub fn unrank_revolving(rank: u128, k: usize, n: usize) -> Result<KSubset> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let total = binomial_u128(n, k)
        .ok_or_else(|| Error::Domain(format!("C({n},{k}) overflows u128")))?;
    if rank >= total {
        return Err(Error::RankOutOfRange { rank, n, k, total });
    }
    let mut indices = vec![0usize; k];
    let mut r = rank;
    let mut upper = n;
    for t in (1..=k).rev() {
        let mut m = upper - 1;
        while binomial_u128(m, t).expect("bounded") > r {
            m -= 1;
        }
        let offset = r - binomial_u128(m, t).expect("bounded");
        indices[t - 1] = m;
        r = binomial_u128(m, t - 1).expect("bounded") - 1 - offset;
        upper = m;
    }
    Ok(KSubset::from_sorted_unchecked(n, indices))
}

/// Stream of every k-subset with the swap that produced it (`None` first).
///
/// Invalid parameters (`k == 0` or `k > n`) produce an empty stream whose
/// [`diagnostic`](KSubsetStream::diagnostic) explains why.
#[derive(Debug, Clone)]
pub struct KSubsetStream {
    door: Option<RevolvingDoor>,
    started: bool,
    diagnostic: Option<String>,
}

impl KSubsetStream {
    pub fn diagnostic(&self) -> Option<&str> {
        self.diagnostic.as_deref()
    }
}

impl Iterator for KSubsetStream {
    type Item = (KSubset, Option<Swap>);

    fn next(&mut self) -> Option<Self::Item> {
        let door = self.door.as_mut()?;
        let delta = if self.started {
            Some(door.advance()?)
        } else {
            self.started = true;
            None
        };
        Some((
            KSubset::from_sorted_unchecked(door.n(), door.current().to_vec()),
            delta,
        ))
    }
}

pub fn iterate_ksubsets(n: usize, k: usize) -> KSubsetStream {
    if k == 0 || k > n {
        return KSubsetStream {
            door: None,
            started: false,
            diagnostic: Some(format!("no k-subsets to stream: need 1 <= k <= n, got k = {k}, n = {n}")),
        };
    }
    match RevolvingDoor::new(n, k) {
        Ok(door) => KSubsetStream { door: Some(door), started: false, diagnostic: None },
        Err(e) => KSubsetStream { door: None, started: false, diagnostic: Some(e.to_string()) },
    }
}
