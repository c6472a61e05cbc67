//! Unsigned Stirling numbers of the first kind, the alternating-sum bound on
//! families with bounded matching number, and exact checkers for the
//! Stirling-number inequalities that bound relies on.
//!
//! Everything here is exact integer arithmetic. Inequalities with rational
//! factors are multiplied through by their denominators before comparing.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Eagerly built triangle of `[n k]` for `0 <= k <= n <= max_n`.
///
/// The table never grows after construction; queries past `max_n` are a
/// capacity error.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    max_n: usize,
    rows: Vec<Vec<BigUint>>,
    zero: BigUint,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = vec![BigUint::zero(); n + 1];
            for k in 1..=n {
                let mut v = prev[k - 1].clone();
                if k < n {
                    v += &prev[k] * BigUint::from(n - 1);
                }
                row[k] = v;
            }
            rows.push(row);
        }
        StirlingTable {
            max_n,
            rows,
            zero: BigUint::zero(),
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `[n k]`, with the convention that it is zero when `k < 0` or `n < k`.
    pub fn get(&self, n: usize, k: i64) -> Result<&BigUint> {
        if n > self.max_n {
            return Err(Error::capacity("stirling table row", n, self.max_n));
        }
        if k < 0 || k as u64 > n as u64 {
            return Ok(&self.zero);
        }
        Ok(&self.rows[n][k as usize])
    }

    /// Same as [`get`](Self::get) but takes a possibly negative row index,
    /// which yields zero. Used by formulas of the form `[n - i, k - i]`.
    pub fn get_signed(&self, n: i64, k: i64) -> Result<&BigUint> {
        if n < 0 {
            return Ok(&self.zero);
        }
        self.get(n as usize, k)
    }

    pub fn row(&self, n: usize) -> Result<&[BigUint]> {
        if n > self.max_n {
            return Err(Error::capacity("stirling table row", n, self.max_n));
        }
        Ok(&self.rows[n])
    }

    pub fn emc_bound(&self, n: usize, k: usize, s: usize) -> Result<BoundValue> {
        if k == 0 || n < k || s == 0 {
            return Err(Error::invalid(format!(
                "bound needs n >= k >= 1 and s >= 1, got n={n} k={k} s={s}"
            )));
        }
        let mut terms = Vec::with_capacity(s);
        let mut value = BigInt::zero();
        for i in 1..=s {
            let st = self.get_signed(n as i64 - i as i64, k as i64 - i as i64)?;
            let mut term = BigInt::from(binomial(s, i as i64) * st);
            if i % 2 == 0 {
                term = -term;
            }
            value += &term;
            terms.push(term);
        }
        Ok(BoundValue {
            n,
            k,
            s,
            value,
            terms,
        })
    }

    /// `k^2 [n, k+1] >= [n, k]`, valid for `n >= k + 1`.
    pub fn ratio_down_holds(&self, n: usize, k: usize) -> Result<bool> {
        if k < 1 || n < k + 1 {
            return Err(Error::precondition(format!(
                "ratio-down inequality needs k >= 1 and n >= k + 1, got n={n} k={k}"
            )));
        }
        let lhs = BigUint::from(k * k) * self.get(n, k as i64 + 1)?;
        Ok(&lhs >= self.get(n, k as i64)?)
    }

    /// `k^2 [n, k] > n [n-1, k-1]`, valid for `n >= k + 1` and `k >= 2`.
    pub fn ratio_diag_holds(&self, n: usize, k: usize) -> Result<bool> {
        if k < 2 || n < k + 1 {
            return Err(Error::precondition(format!(
                "diagonal ratio inequality needs k >= 2 and n >= k + 1, got n={n} k={k}"
            )));
        }
        let lhs = BigUint::from(k * k) * self.get(n, k as i64)?;
        let rhs = BigUint::from(n) * self.get(n - 1, k as i64 - 1)?;
        Ok(lhs > rhs)
    }

    /// The alternating sum is at least its first two terms:
    /// `bound(n,k,s) >= s [n-1,k-1] - s(s-1)/2 [n-2,k-2]` for `k >= 3`, `n >= s k^2`.
    pub fn alternating_lower_bound(&self, n: usize, k: usize, s: usize) -> Result<bool> {
        if k < 3 || s < 1 || n < s * k * k {
            return Err(Error::precondition(format!(
                "alternating lower bound needs k >= 3, s >= 1, n >= s*k^2, got n={n} k={k} s={s}"
            )));
        }
        let bound = self.emc_bound(n, k, s)?.value;
        let first = BigInt::from(s) * BigInt::from(self.get(n - 1, k as i64 - 1)?.clone());
        let second =
            BigInt::from(s * (s - 1) / 2) * BigInt::from(self.get(n - 2, k as i64 - 2)?.clone());
        Ok(bound >= first - second)
    }
}

/// The alternating sum `sum_{i=1..s} (-1)^{i-1} C(s,i) [n-i, k-i]` with its terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundValue {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub value: BigInt,
    pub terms: Vec<BigInt>,
}

impl BoundValue {
    /// Whether `n >= 4 s^2 k^6`, the range where the bound is known to be exact.
    pub fn threshold_met(&self) -> bool {
        threshold_met(self.n, self.k, self.s)
    }
}

pub fn threshold_met(n: usize, k: usize, s: usize) -> bool {
    let k = BigUint::from(k);
    let s = BigUint::from(s);
    BigUint::from(n) >= BigUint::from(4u32) * &s * &s * k.pow(6)
}

/// Computes `[n k]` by the row recurrence. Prefer [`StirlingTable`] for many queries.
pub fn stirling_unsigned(n: usize, k: i64) -> BigUint {
    if k < 0 || k as u64 > n as u64 {
        return BigUint::zero();
    }
    let k = k as usize;
    // Only columns 0..=k are ever needed.
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            let carried = std::mem::take(&mut row[j]) * BigUint::from(m - 1);
            row[j] = carried + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

pub fn binomial(n: usize, k: i64) -> BigUint {
    if k < 0 || k as u64 > n as u64 {
        return BigUint::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

pub fn emc_bound(n: usize, k: usize, s: usize) -> Result<BoundValue> {
    StirlingTable::new(n).emc_bound(n, k, s)
}

pub fn check_ratio_down(n: usize, k: usize) -> Result<bool> {
    StirlingTable::new(n).ratio_down_holds(n, k)
}

pub fn check_ratio_diag(n: usize, k: usize) -> Result<bool> {
    StirlingTable::new(n).ratio_diag_holds(n, k)
}

pub fn check_alternating_lower_bound(n: usize, k: usize, s: usize) -> Result<bool> {
    StirlingTable::new(n).alternating_lower_bound(n, k, s)
}
