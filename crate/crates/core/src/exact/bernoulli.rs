//! Bernoulli numbers of the second kind, `x / ln(1 + x) = sum b_n x^n`.
//!
//! Two generators with no shared arithmetic path:
//!
//! * [`bk2_recurrence`] inverts the series `ln(1 + x) / x = sum (-1)^m x^m / (m + 1)`,
//!   giving `b_n = -sum_{k<n} (-1)^(n-k) b_k / (n - k + 1)`.
//! * [`bk2_falling_factorial`] integrates the falling factorial
//!   `s (s - 1) ... (s - n + 1)` over `[0, 1]` term by term through the signed
//!   Stirling numbers of the first kind and divides by `n!`.

use num::traits::{One, Zero};
use num::{BigInt, Integer};

use super::rational::ExactRational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bk2Method {
    Recurrence,
    FallingFactorial,
}

/// Exact table `b_0 ..= b_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bk2Table {
    values: Vec<ExactRational>,
    method: Bk2Method,
}

impl Bk2Table {
    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    pub fn method(&self) -> Bk2Method {
        self.method
    }

    pub fn get(&self, n: usize) -> Option<&ExactRational> {
        self.values.get(n)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest index held.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

pub fn bk2_recurrence(max_n: usize) -> Bk2Table {
    // Every b_k is held as scaled[k] / common with one shared denominator, so
    // each step is integer multiply-adds and a single reduction.
    let mut common = BigInt::one();
    let mut scaled: Vec<BigInt> = vec![BigInt::one()];
    let mut values = Vec::with_capacity(max_n + 1);
    values.push(ExactRational::one());

    // lcm(1, ..., n + 1), the denominators of (-1)^m / (m + 1) for m <= n
    let mut series_lcm = BigInt::one();
    for n in 1..=max_n {
        series_lcm = series_lcm.lcm(&BigInt::from(n + 1));
        // sum_k (-1)^(n-k) b_k / (n - k + 1), over common * series_lcm
        let mut acc = BigInt::zero();
        for (k, a_k) in scaled.iter().enumerate() {
            let m = n - k;
            let term = a_k * (&series_lcm / BigInt::from(m + 1));
            if m % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let b_n = ExactRational::new(-acc, &common * &series_lcm).expect("nonzero denominator");

        let den = b_n.denominator();
        let grow = den / den.gcd(&common);
        if !grow.is_one() {
            for a in scaled.iter_mut() {
                *a *= &grow;
            }
            common *= &grow;
        }
        scaled.push(b_n.numerator() * (&common / den));
        values.push(b_n);
    }
    Bk2Table {
        values,
        method: Bk2Method::Recurrence,
    }
}

pub fn bk2_falling_factorial(max_n: usize) -> Bk2Table {
    let mut values = Vec::with_capacity(max_n + 1);
    // Row n of signed Stirling numbers of the first kind: s(n, 0..=n).
    let mut stirling: Vec<BigInt> = vec![BigInt::one()];
    let mut factorial = BigInt::one();
    // lcm(1, ..., n + 1) clears the denominators of int_0^1 s^k ds = 1 / (k + 1)
    let mut moment_lcm = BigInt::one();

    for n in 0..=max_n {
        if n > 0 {
            stirling = next_stirling_row(&stirling, n - 1);
            factorial *= n;
        }
        moment_lcm = moment_lcm.lcm(&BigInt::from(n + 1));
        let integral: BigInt = stirling
            .iter()
            .enumerate()
            .map(|(k, s)| s * (&moment_lcm / BigInt::from(k + 1)))
            .sum();
        values.push(
            ExactRational::new(integral, &factorial * &moment_lcm).expect("nonzero denominator"),
        );
    }
    Bk2Table {
        values,
        method: Bk2Method::FallingFactorial,
    }
}

/// `s(m + 1, k) = s(m, k - 1) - m s(m, k)`.
fn next_stirling_row(row: &[BigInt], m: usize) -> Vec<BigInt> {
    let mut next = vec![BigInt::zero(); row.len() + 1];
    for (k, s) in row.iter().enumerate() {
        next[k + 1] += s;
        next[k] -= s * m;
    }
    next
}

/// `a_n = (-1)^n b_{n+1}` for `n = 0 ..= N - 1`.
pub fn alternating_sequence(table: &Bk2Table) -> Result<Vec<ExactRational>> {
    if table.len() < 2 {
        return Err(Error::Argument(format!(
            "need at least b_0 and b_1, table has {} entries",
            table.len()
        )));
    }
    Ok(table.values[1..]
        .iter()
        .enumerate()
        .map(|(n, b)| if n % 2 == 0 { b.clone() } else { -b })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn listed_values() -> Vec<ExactRational> {
        vec![
            ratio(1, 1),
            ratio(1, 2),
            ratio(-1, 12),
            ratio(1, 24),
            ratio(-19, 720),
            ratio(3, 160),
        ]
    }

    #[test]
    fn recurrence_first_six() {
        let t = bk2_recurrence(5);
        assert_eq!(t.values(), listed_values().as_slice());
        assert_eq!(t.method(), Bk2Method::Recurrence);
    }

    #[test]
    fn recurrence_zero() {
        let t = bk2_recurrence(0);
        assert_eq!(t.values(), &[ExactRational::one()]);
    }

    #[test]
    fn falling_factorial_first_six() {
        let t = bk2_falling_factorial(5);
        assert_eq!(t.values(), listed_values().as_slice());
        assert_eq!(t.method(), Bk2Method::FallingFactorial);
    }

    #[test]
    fn falling_factorial_small_cases() {
        let t = bk2_falling_factorial(2);
        assert_eq!(t.values()[0], ratio(1, 1));
        assert_eq!(t.values()[1], ratio(1, 2));
        // (1/2) (s(2,1)/2 + s(2,2)/3) = (1/2)(-1/2 + 1/3)
        assert_eq!(t.values()[2], ratio(-1, 12));
    }

    #[test]
    fn stirling_rows() {
        let mut row = vec![BigInt::one()];
        for m in 0..4 {
            row = next_stirling_row(&row, m);
        }
        // s(4, k) = 0, -6, 11, -6, 1
        let expect: Vec<BigInt> = [0, -6, 11, -6, 1]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(row, expect);
    }

    #[test]
    fn methods_agree_at_six() {
        assert_eq!(
            bk2_recurrence(6).values()[6],
            bk2_falling_factorial(6).values()[6]
        );
        // b_6 = -863/60480
        assert_eq!(bk2_recurrence(6).values()[6], ratio(-863, 60480));
    }

    #[test]
    fn listed_denominators() {
        let t = bk2_recurrence(5);
        let dens: Vec<i64> = t.values()[1..]
            .iter()
            .map(|v| v.denominator().try_into().unwrap())
            .collect();
        assert_eq!(dens, vec![2, 12, 24, 720, 160]);
    }

    #[test]
    fn sign_pattern() {
        let t = bk2_recurrence(60);
        for (n, b) in t.values().iter().enumerate().skip(1) {
            let expected = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(b.signum(), expected, "n = {n}");
        }
    }

    #[test]
    fn alternating_sequence_values() {
        let a = alternating_sequence(&bk2_recurrence(5)).unwrap();
        assert_eq!(
            a,
            vec![
                ratio(1, 2),
                ratio(1, 12),
                ratio(1, 24),
                ratio(19, 720),
                ratio(3, 160)
            ]
        );
        assert!(a[0] > a[1] && a[1] > a[2]);
        assert!(alternating_sequence(&bk2_recurrence(0)).is_err());
    }
}
