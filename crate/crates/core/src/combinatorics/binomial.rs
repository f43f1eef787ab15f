use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `C(a, b)` as an exact integer, with `C(a, b) = 0` whenever `b < 0`,
/// `b > a` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        // acc == C(a, i) here, so the division is exact.
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` in machine integers, `None` on overflow.
pub fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = acc.gcd(&den);
        acc = (acc / g).checked_mul(num / (den / g))?;
    }
    Some(acc)
}

/// Pascal-triangle table of exact binomials `C(a, b)` for `0 <= b <= a <= n_max`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n_max: usize,
    rows: Vec<Vec<BigInt>>,
}

impl BinomialTable {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        for a in 0..=n_max {
            let mut row = Vec::with_capacity(a + 1);
            for b in 0..=a {
                if b == 0 || b == a {
                    row.push(BigInt::one());
                } else {
                    let prev = &rows[a - 1];
                    row.push(&prev[b - 1] + &prev[b]);
                }
            }
            rows.push(row);
        }
        BinomialTable { n_max, rows }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Looks up `C(a, b)`, falling back to direct computation outside the table.
    pub fn get(&self, a: i64, b: i64) -> BigInt {
        if a < 0 || b < 0 || b > a {
            return BigInt::zero();
        }
        match self.rows.get(a as usize) {
            Some(row) => row[b as usize].clone(),
            None => binomial(a, b),
        }
    }

    pub fn row(&self, a: usize) -> Option<&[BigInt]> {
        self.rows.get(a).map(Vec::as_slice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 7), BigInt::zero());
        assert_eq!(binomial(4, -1), BigInt::zero());
        assert_eq!(binomial(-3, 1), BigInt::zero());
        assert_eq!(binomial(21, 6), BigInt::from(54_264));
    }

    #[test]
    fn large_value_exact() {
        // C(100, 50) = 100891344545564193334812497256
        let expected: BigInt = "100891344545564193334812497256".parse().unwrap();
        assert_eq!(binomial(100, 50), expected);
        assert_eq!(binomial_u128(100, 50).unwrap(), 100891344545564193334812497256u128);
    }

    #[test]
    fn u128_overflow_is_reported() {
        assert!(binomial_u128(128, 64).is_some());
        assert!(binomial_u128(200, 100).is_none());
        assert_eq!(binomial_u128(3, 5), Some(0));
    }

    #[test]
    fn table_satisfies_pascal_and_edges() {
        let t = BinomialTable::new(40);
        for a in 0..=40i64 {
            assert_eq!(t.get(a, 0), BigInt::one());
            assert_eq!(t.get(a, a), BigInt::one());
            assert_eq!(t.get(a, a + 1), BigInt::zero());
            assert_eq!(t.get(a, -1), BigInt::zero());
            for b in 1..a {
                assert_eq!(t.get(a, b), t.get(a - 1, b - 1) + t.get(a - 1, b));
                assert_eq!(t.get(a, b), binomial(a, b));
            }
        }
        // beyond the table
        assert_eq!(t.get(50, 3), BigInt::from(19_600));
    }
}
