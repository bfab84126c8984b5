//! The density constant `f(n)`, the finite main term `M(n)` and error tables
//! comparing both against exact counts.
//!
//! ```text
//! f(n) = prod_{p | n} (1 - 1/p^2) * prod_{q not dividing n} (1 - 3/q^2)
//! M(n) = n^2/2 * prod_{p <= n, p | n} (1 - 1/p^2) * prod_{p <= n, p not dividing n} (1 - 3/p^2)
//! ```
//!
//! The infinite product in `f` is truncated at a prime bound `P`. Every
//! omitted factor lies in `(0, 1)` and the omitted tail is at least
//! `1 - 3 sum_{k > P} 1/k^2 >= 1 - 3/P`, so the truncated value overestimates
//! the true one by a relative amount below [`tail_bound`].

use rayon::prelude::*;

use crate::arith::{factorize, primes_up_to, sieve_primes, PrimeTable};
use crate::counter::{count_t3_mobius, scan_points};
use crate::error::{invalid, Error, Result};

pub const DEFAULT_TRUNCATION: u64 = 1_000_000;

/// Relative size of the product tail beyond `truncation` (valid for
/// `truncation >= 11`).
pub fn tail_bound(truncation: u64) -> f64 {
    3.1 / truncation as f64
}

/// Neumaier-compensated sum of `ln(1 - 3/q^2)`.
fn log_product<'a>(primes: impl Iterator<Item = &'a u64>) -> f64 {
    let (mut sum, mut compensation) = (0.0f64, 0.0f64);
    for &q in primes {
        let q = q as f64;
        let term = (-3.0 / (q * q)).ln_1p();
        let next = sum + term;
        compensation += if sum.abs() >= term.abs() { (sum - next) + term } else { (term - next) + sum };
        sum = next;
    }
    sum + compensation
}

/// `prod_{q <= truncation} (1 - 3/q^2)` over primes.
pub fn singular_constant(truncation: u64) -> Result<f64> {
    Ok(SingularSeries::new(truncation)?.constant())
}

/// The truncated product, computed once and reused for many `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSeries {
    truncation: u64,
    constant: f64,
}

impl SingularSeries {
    pub fn new(truncation: u64) -> Result<Self> {
        if truncation < 2 {
            return Err(invalid(format!("truncation must include the prime 2, got {truncation}")));
        }
        let primes = primes_up_to(truncation)?;
        Ok(Self { truncation, constant: log_product(primes.iter()).exp() })
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// `f(n)` with the product over non-divisors cut at the truncation bound.
    pub fn f_of_n(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(invalid("f(n) needs n >= 1"));
        }
        if self.truncation < n {
            return Err(invalid(format!("truncation {} is below n = {n}", self.truncation)));
        }
        let correction: f64 = factorize(n)?
            .primes()
            .map(|p| {
                let p2 = (p as f64) * (p as f64);
                (1.0 - 1.0 / p2) / (1.0 - 3.0 / p2)
            })
            .product();
        Ok(self.constant * correction)
    }
}

/// `f(n)` truncated at `truncation >= n`.
pub fn f_of_n(n: u64, truncation: u64) -> Result<f64> {
    if truncation < n {
        return Err(invalid(format!("truncation {truncation} is below n = {n}")));
    }
    SingularSeries::new(truncation)?.f_of_n(n)
}

/// The finite main term, with primes only up to `n`.
pub fn main_term_finite(n: u64, table: &PrimeTable) -> Result<f64> {
    if n < 3 {
        return Err(invalid(format!("main term needs n >= 3, got {n}")));
    }
    if table.limit() < n {
        return Err(invalid(format!("prime table stops at {}, need {n}", table.limit())));
    }
    let product: f64 = table
        .primes()
        .iter()
        .take_while(|&&p| p <= n)
        .map(|&p| {
            let p2 = (p as f64) * (p as f64);
            if n.is_multiple_of(p) {
                1.0 - 1.0 / p2
            } else {
                1.0 - 3.0 / p2
            }
        })
        .product();
    let nf = n as f64;
    Ok(nf * nf / 2.0 * product)
}

/// One line of an error table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub n: u64,
    pub t: u64,
    pub m: f64,
    pub f_half_nsq: f64,
    pub abs_err_m: f64,
    pub abs_err_f: f64,
    /// `abs_err_f / n^{3/2}`.
    pub normalized_err: f64,
}

impl ErrorRow {
    pub fn new(n: u64, t: u64, m: f64, f_half_nsq: f64) -> Self {
        let tf = t as f64;
        let abs_err_m = (tf - m).abs();
        let abs_err_f = (tf - f_half_nsq).abs();
        Self { n, t, m, f_half_nsq, abs_err_m, abs_err_f, normalized_err: abs_err_f / (n as f64).powf(1.5) }
    }

    /// `|T - M| / n^{3/2}`.
    pub fn normalized_err_m(&self) -> f64 {
        self.abs_err_m / (self.n as f64).powf(1.5)
    }
}

/// Computes one row with an exact Möbius count.
pub fn error_row(n: u64, series: &SingularSeries, table: &PrimeTable) -> Result<ErrorRow> {
    let t = count_t3_mobius(n)?.t;
    let m = main_term_finite(n, table)?;
    let nf = n as f64;
    let f_half_nsq = series.f_of_n(n)? * nf * nf / 2.0;
    Ok(ErrorRow::new(n, t, m, f_half_nsq))
}

/// Error rows for `n_from, n_from + stride, ..., <= n_to`, ascending in `n`.
/// The truncation is raised to `n_to` if smaller.
pub fn error_report(n_from: u64, n_to: u64, stride: u64, truncation: u64) -> Result<Vec<ErrorRow>> {
    let points = scan_points(n_from, n_to, stride)?;
    let series = SingularSeries::new(truncation.max(n_to))?;
    let table = sieve_primes(n_to.max(2))?;
    points
        .into_par_iter()
        .map(|n| error_row(n, &series, &table).map_err(|e| Error::AtN { n, source: Box::new(e) }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn singular_constant_small_truncations() {
        assert!(close(singular_constant(2).unwrap(), 0.25, 1e-15));
        assert!(close(singular_constant(3).unwrap(), 1.0 / 6.0, 1e-15));
        assert!(close(singular_constant(4).unwrap(), 1.0 / 6.0, 1e-15));
        assert!(singular_constant(1).is_err());
    }

    #[test]
    fn singular_constant_is_monotone_with_bounded_tail() {
        for truncation in [11u64, 37, 100, 1000, 12_345, 100_000] {
            let single = singular_constant(truncation).unwrap();
            let double = singular_constant(2 * truncation).unwrap();
            assert!(double <= single);
            assert!(single - double <= tail_bound(truncation));
        }
    }

    #[test]
    fn singular_constant_stable_between_truncations() {
        let coarse = singular_constant(1_000_000).unwrap();
        let fine = singular_constant(10_000_000).unwrap();
        assert!(close(coarse, fine, 1e-5), "{coarse} vs {fine}");
        let f_coarse = SingularSeries::new(1_000_000).unwrap().f_of_n(30).unwrap();
        let f_fine = SingularSeries::new(10_000_000).unwrap().f_of_n(30).unwrap();
        assert!(close(f_coarse, f_fine, 1e-5));
    }

    #[test]
    fn f_of_n_examples() {
        let series = SingularSeries::new(100_000).unwrap();
        assert_eq!(series.f_of_n(1).unwrap(), series.constant());
        assert!(close(series.f_of_n(2).unwrap(), 3.0 * series.constant(), 1e-15));
        assert!(close(series.f_of_n(4).unwrap(), 3.0 * series.constant(), 1e-15));
        // Direct product over q <= P, classified by divisibility.
        let direct: f64 = primes_up_to(100_000)
            .unwrap()
            .iter()
            .map(|&q| {
                let q2 = (q as f64).powi(2);
                if 30 % q == 0 {
                    1.0 - 1.0 / q2
                } else {
                    1.0 - 3.0 / q2
                }
            })
            .product();
        assert!(close(series.f_of_n(30).unwrap(), direct, 1e-12));
        assert!(f_of_n(50, 20).is_err());
        assert!(series.f_of_n(0).is_err());
    }

    #[test]
    fn main_term_examples() {
        let table = sieve_primes(100).unwrap();
        assert!(close(main_term_finite(3, &table).unwrap(), 1.0, 1e-12));
        assert!(close(main_term_finite(4, &table).unwrap(), 4.0, 1e-12));
        assert!(close(main_term_finite(6, &table).unwrap(), 10.56, 1e-12));
        assert!(main_term_finite(101, &table).is_err());
        assert!(main_term_finite(2, &table).is_err());
    }

    #[test]
    fn main_term_tracks_density() {
        let series = SingularSeries::new(DEFAULT_TRUNCATION).unwrap();
        let table = sieve_primes(2000).unwrap();
        for n in (100..=2000).step_by(50) {
            let half = (n as f64).powi(2) / 2.0;
            let m = main_term_finite(n, &table).unwrap();
            let f = series.f_of_n(n).unwrap();
            assert!(((m / half) - f).abs() <= 10.0 * 3.0 / n as f64);
            assert!((m - f * half).abs() / half <= 4.0 / n as f64);
        }
    }

    #[test]
    fn error_row_for_six() {
        let series = SingularSeries::new(1000).unwrap();
        let table = sieve_primes(10).unwrap();
        let row = error_row(6, &series, &table).unwrap();
        assert_eq!(row.t, 9);
        assert!(close(row.m, 10.56, 1e-12));
        assert!(close(row.abs_err_m, 1.56, 1e-12));
        assert!(close(row.abs_err_f, (9.0 - row.f_half_nsq).abs(), 0.0));
    }

    #[test]
    fn report_rows_are_ordered_and_finite() {
        let rows = error_report(100, 200, 10, 10_000).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.windows(2).all(|w| w[0].n < w[1].n));
        for row in &rows {
            for v in [row.m, row.f_half_nsq, row.abs_err_m, row.abs_err_f, row.normalized_err] {
                assert!(v.is_finite());
            }
            assert!(row.normalized_err > 0.0);
        }
    }
}
