use num::traits::{One, Signed};
use num::{BigInt, Integer};

use super::rational::ExactRational;
use crate::error::{Error, Result};

/// Forward differences `Δ^k a_n`, triangular: row `k` has `len - k` entries.
///
/// Entries are stored as integer numerators over one common denominator (the
/// lcm of the base denominators), so building the table is pure integer
/// subtraction; [`DifferenceTable::get`] reduces on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceTable {
    common: BigInt,
    rows: Vec<Vec<BigInt>>,
}

impl DifferenceTable {
    pub fn get(&self, k: usize, n: usize) -> Option<ExactRational> {
        let numer = self.rows.get(k)?.get(n)?;
        Some(ExactRational::new(numer.clone(), self.common.clone()).expect("positive denominator"))
    }

    pub fn row(&self, k: usize) -> Option<Vec<ExactRational>> {
        let len = self.rows.get(k)?.len();
        Some(
            (0..len)
                .map(|n| self.get(k, n).expect("in range"))
                .collect(),
        )
    }

    pub fn base(&self) -> Vec<ExactRational> {
        self.row(0).expect("row 0 always present")
    }

    /// -1, 0 or +1 for `Δ^k a_n`, without reducing.
    fn sign(&self, k: usize, n: usize) -> i8 {
        let v = &self.rows[k][n];
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }

    /// Largest sequence index `N` (the base holds `a_0 ..= a_N`).
    pub fn max_index(&self) -> usize {
        self.rows[0].len() - 1
    }
}

/// Builds the table by repeated adjacent differences up to order `max_order`.
pub fn difference_table(seq: &[ExactRational], max_order: usize) -> Result<DifferenceTable> {
    if max_order + 1 > seq.len() {
        return Err(Error::Argument(format!(
            "difference order {max_order} needs at least {} terms, got {}",
            max_order + 1,
            seq.len()
        )));
    }
    let common = seq
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(a.denominator()));
    let base: Vec<BigInt> = seq
        .iter()
        .map(|a| a.numerator() * (&common / a.denominator()))
        .collect();
    let mut rows = Vec::with_capacity(max_order + 1);
    rows.push(base);
    for k in 1..=max_order {
        let prev: &Vec<BigInt> = &rows[k - 1];
        let next: Vec<BigInt> = prev.windows(2).map(|w| &w[1] - &w[0]).collect();
        rows.push(next);
    }
    Ok(DifferenceTable { common, rows })
}

/// First entry with `(-1)^k Δ^k a_n < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmViolation {
    pub order: usize,
    pub index: usize,
    pub value: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmCertificate {
    pub max_index: usize,
    pub max_order: usize,
    pub holds: bool,
    pub first_violation: Option<CmViolation>,
    /// Number of `(k, n)` pairs inspected.
    pub checked: usize,
}

/// Checks `(-1)^k Δ^k a_n >= 0` over the whole table, scanning by increasing
/// order `k`, then increasing index `n`.
pub fn certify_cm(table: &DifferenceTable) -> CmCertificate {
    let mut checked = 0;
    let mut first_violation = None;
    'scan: for (k, row) in table.rows.iter().enumerate() {
        for n in 0..row.len() {
            checked += 1;
            let sign = table.sign(k, n);
            let signed_negative = if k % 2 == 0 { sign < 0 } else { sign > 0 };
            if signed_negative {
                first_violation = Some(CmViolation {
                    order: k,
                    index: n,
                    value: table.get(k, n).expect("in range"),
                });
                break 'scan;
            }
        }
    }
    CmCertificate {
        max_index: table.max_index(),
        max_order: table.max_order(),
        holds: first_violation.is_none(),
        first_violation,
        checked,
    }
}
