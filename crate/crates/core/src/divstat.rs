//! Middle-divisor statistics: signed character sums over divisors of p - 1
//! inside the window (sqrt(X) (log X)^-omega, sqrt(X) (log X)^omega), their
//! second moment, the count of primes with a divisor in the window, and the
//! exponent constant theta0 = 1/2 - e ln2 / 4 that governs both.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{chi4, PrimeTable};
use crate::error::{Error, Result};
use crate::hiprec::{self, Real};

/// theta0 = 1/2 - e ln 2 / 4 = 0.0289... in the big-real module.
pub fn theta0() -> Real {
    let quarter_e_ln2 = (&hiprec::e().clone() * hiprec::ln2()).div_u64(4);
    &Real::from_ratio_i64(1, 2) - &quarter_e_ln2
}

/// Independent f64 evaluation of the same constant (dual-route check).
pub fn theta0_f64() -> f64 {
    0.5 - std::f64::consts::E * std::f64::consts::LN_2 / 4.0
}

/// An open divisor window with exact rational bounds. The transcendental
/// endpoints are rounded outward by 1e-12 before freezing, so integer
/// membership is decided by exact comparison.
#[derive(Debug, Clone)]
pub struct DivisorWindow {
    pub x: u64,
    pub omega: f64,
    lo: BigRational,
    hi: BigRational,
}

impl DivisorWindow {
    /// The window (sqrt(X) (log X)^-omega, sqrt(X) (log X)^omega).
    pub fn from_x_omega(x: u64, omega: f64) -> Result<DivisorWindow> {
        if x < 3 {
            return Err(Error::Config(format!("window needs X >= 3, got {x}")));
        }
        if omega.is_nan() || omega <= 0.0 {
            return Err(Error::Config(format!("window needs omega > 0, got {omega}")));
        }
        let sqrt_x = Real::from_u64(x).sqrt();
        let ln_x = Real::from_u64(x).ln();
        let omega_r = Real::from_f64(omega);
        let spread = (&ln_x.ln() * &omega_r).exp(); // (log X)^omega
        let eps = Real::from_ratio_i64(1, 1_000_000_000_000);
        let mut lo = &(&sqrt_x / &spread) - &eps;
        if lo.is_negative() {
            lo = Real::zero(); // extreme omega; no divisor can sit below 0 anyway
        }
        let hi = &(&sqrt_x * &spread) + &eps;
        Self::explicit(x, omega, lo.to_rational(), hi.to_rational())
    }

    /// A window with caller-chosen exact bounds.
    pub fn explicit(x: u64, omega: f64, lo: BigRational, hi: BigRational) -> Result<DivisorWindow> {
        if lo >= hi || lo < BigRational::from_integer(BigInt::from(0)) {
            return Err(Error::Config("window bounds must satisfy 0 <= lo < hi".into()));
        }
        Ok(DivisorWindow { x, omega, lo, hi })
    }

    /// Strict membership lo < d < hi, decided exactly.
    pub fn contains(&self, d: u64) -> bool {
        let dv = BigRational::from_integer(BigInt::from(d));
        self.lo < dv && dv < self.hi
    }

    pub fn bounds_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let f = |r: &BigRational| {
            r.numer().to_f64().unwrap_or(f64::INFINITY) / r.denom().to_f64().unwrap_or(1.0)
        };
        (f(&self.lo), f(&self.hi))
    }

    /// Largest integer candidate that could lie inside.
    fn hi_floor(&self) -> u64 {
        let f = self.bounds_f64().1;
        if f <= 0.0 {
            0
        } else {
            f.ceil() as u64
        }
    }
}

/// Signed character sum over divisors of p - 1 inside the window, through
/// divisor enumeration from the factorization.
pub fn middle_char_sum(table: &PrimeTable, p: u64, window: &DivisorWindow) -> Result<i64> {
    if p < 2 {
        return Err(Error::Domain(format!("middle_char_sum needs a prime, got {p}")));
    }
    if p <= table.limit() && !table.is_prime(p) {
        return Err(Error::Domain(format!("middle_char_sum({p}): not a prime")));
    }
    let mut sum = 0i64;
    for d in table.divisors(p - 1)? {
        if window.contains(d) {
            sum += chi4(d) as i64;
        }
    }
    Ok(sum)
}

/// The same sum by a direct loop over window candidates (oracle route).
pub fn middle_char_sum_scan(table: &PrimeTable, p: u64, window: &DivisorWindow) -> Result<i64> {
    if p < 2 {
        return Err(Error::Domain(format!("middle_char_sum needs a prime, got {p}")));
    }
    if p <= table.limit() && !table.is_prime(p) {
        return Err(Error::Domain(format!("middle_char_sum({p}): not a prime")));
    }
    let n = p - 1;
    let mut sum = 0i64;
    let top = window.hi_floor().min(n);
    for d in 1..=top {
        if n % d == 0 && window.contains(d) {
            sum += chi4(d) as i64;
        }
    }
    Ok(sum)
}

#[derive(Debug, Clone, Serialize)]
pub struct HooleyReport {
    pub x: u64,
    pub omega: f64,
    pub window_lo: f64,
    pub window_hi: f64,
    /// sum over p <= X of (middle character sum)^2.
    pub sum_squares: u64,
    /// sum_squares normalized by X (loglog X)^7 / log X.
    pub sum_squares_ratio: f64,
    /// number of primes p <= X with a divisor of p - 1 in the window.
    pub divisor_count: u64,
    /// divisor_count normalized by X (loglog X)^3 / (log X)^(1 + 2 theta0).
    pub divisor_count_ratio: f64,
    pub theta0: f64,
}

/// Second moment of the middle character sums over p <= X.
pub fn hooley_sum1(table: &PrimeTable, x: u64, omega: f64) -> Result<u64> {
    let window = DivisorWindow::from_x_omega(x, omega)?;
    if x > table.limit() {
        return Err(Error::Config(format!("X = {x} above sieve limit {}", table.limit())));
    }
    table
        .primes_in(0, x)
        .par_iter()
        .map(|&p| middle_char_sum(table, p, &window).map(|s| (s * s) as u64))
        .try_reduce(|| 0u64, |a, b| Ok(a + b))
}

/// Number of primes p <= X such that p - 1 has a divisor in the window.
pub fn hooley_f(table: &PrimeTable, x: u64, omega: f64) -> Result<u64> {
    let window = DivisorWindow::from_x_omega(x, omega)?;
    if x > table.limit() {
        return Err(Error::Config(format!("X = {x} above sieve limit {}", table.limit())));
    }
    table
        .primes_in(0, x)
        .par_iter()
        .map(|&p| {
            let divs = table.divisors(p - 1)?;
            Ok(u64::from(divs.iter().any(|&d| window.contains(d))))
        })
        .try_reduce(|| 0u64, |a, b| Ok(a + b))
}

/// Both statistics with their heuristic normalizations.
pub fn hooley_report(table: &PrimeTable, x: u64, omega: f64) -> Result<HooleyReport> {
    let window = DivisorWindow::from_x_omega(x, omega)?;
    let sum_squares = hooley_sum1(table, x, omega)?;
    let divisor_count = hooley_f(table, x, omega)?;
    let xf = x as f64;
    let lnx = xf.ln();
    let lnln = lnx.ln();
    let t0 = theta0_f64();
    let sum_norm = xf * lnln.powi(7) / lnx;
    let count_norm = xf * lnln.powi(3) / lnx.powf(1.0 + 2.0 * t0);
    let (window_lo, window_hi) = window.bounds_f64();
    Ok(HooleyReport {
        x,
        omega,
        window_lo,
        window_hi,
        sum_squares,
        sum_squares_ratio: sum_squares as f64 / sum_norm,
        divisor_count,
        divisor_count_ratio: divisor_count as f64 / count_norm,
        theta0: t0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn theta0_digits_and_dual_route() {
        let t = theta0();
        let s = t.to_decimal_string(12);
        assert!(s.starts_with("0.0289"), "theta0 = {s}");
        assert!((t.to_f64() - theta0_f64()).abs() < 1e-12);
        assert!(t.is_positive());
        assert!(t.to_f64() < 1.0 / 30.0);
    }

    #[test]
    fn middle_char_sum_hand_example() {
        let pt = PrimeTable::sieve_with_spf(100).unwrap();
        // divisors of 12 in the open window (1, 13): 2, 3, 4, 6, 12
        let w = DivisorWindow::explicit(100, 1.0, rat(1, 1), rat(13, 1)).unwrap();
        assert_eq!(middle_char_sum(&pt, 13, &w).unwrap(), -1);
        assert_eq!(middle_char_sum_scan(&pt, 13, &w).unwrap(), -1);
        // empty window
        let w = DivisorWindow::explicit(100, 1.0, rat(5, 2), rat(23, 8)).unwrap();
        assert_eq!(middle_char_sum(&pt, 13, &w).unwrap(), 0);
        assert!(middle_char_sum(&pt, 12, &w).is_err());
        assert!(middle_char_sum(&pt, 1, &w).is_err());
    }

    #[test]
    fn dual_implementations_agree() {
        let pt = PrimeTable::sieve_with_spf(10_000).unwrap();
        for omega in [0.5f64, 1.0, 2.0] {
            let w = DivisorWindow::from_x_omega(10_000, omega).unwrap();
            for &p in pt.primes_in(0, 10_000) {
                assert_eq!(
                    middle_char_sum(&pt, p, &w).unwrap(),
                    middle_char_sum_scan(&pt, p, &w).unwrap(),
                    "mismatch at p = {p}, omega = {omega}"
                );
            }
        }
    }

    #[test]
    fn hooley_tiny_hand_case() {
        // X = 10, omega = 1: window = (sqrt(10)/ln 10, sqrt(10) ln 10)
        //   p = 2: divisors of 1: none inside -> 0
        //   p = 3: {1, 2}: chi4(2) = 0 -> 0
        //   p = 5: {1, 2, 4}: 0
        //   p = 7: {1, 2, 3, 6}: chi4(3) = -1 -> -1
        let pt = PrimeTable::sieve_with_spf(10).unwrap();
        assert_eq!(hooley_sum1(&pt, 10, 1.0).unwrap(), 1);
        assert_eq!(hooley_f(&pt, 10, 1.0).unwrap(), 3);
    }

    #[test]
    fn hooley_f_matches_direct_scan() {
        // oracle route: loop window candidates and test divisibility
        let pt = PrimeTable::sieve_with_spf(10_000).unwrap();
        let w = DivisorWindow::from_x_omega(10_000, 1.0).unwrap();
        let (lo, hi) = w.bounds_f64();
        let mut direct = 0u64;
        for &p in pt.primes_in(0, 10_000) {
            let n = p - 1;
            let top = (hi.ceil() as u64).min(n);
            let mut any = false;
            let mut d = (lo.floor() as u64).max(1);
            while d <= top {
                if n % d == 0 && w.contains(d) {
                    any = true;
                    break;
                }
                d += 1;
            }
            direct += u64::from(any);
        }
        assert_eq!(hooley_f(&pt, 10_000, 1.0).unwrap(), direct);
    }

    #[test]
    fn hooley_f_bounded_and_monotone_in_omega() {
        let pt = PrimeTable::sieve_with_spf(10_000).unwrap();
        let pi_x = pt.primes_in(0, 10_000).len() as u64;
        let mut last = 0u64;
        for omega in [0.5f64, 1.0, 2.0] {
            let f = hooley_f(&pt, 10_000, omega).unwrap();
            assert!(f <= pi_x);
            assert!(f >= last, "window nesting violated at omega = {omega}");
            last = f;
        }
    }

    #[test]
    fn sum1_zero_for_integer_free_window() {
        let pt = PrimeTable::sieve_with_spf(1000).unwrap();
        let w = DivisorWindow::explicit(1000, 1.0, rat(5, 2), rat(23, 8)).unwrap();
        for &p in pt.primes_in(0, 1000) {
            assert_eq!(middle_char_sum(&pt, p, &w).unwrap(), 0);
        }
    }

    #[test]
    fn report_fields_are_consistent() {
        let pt = PrimeTable::sieve_with_spf(10_000).unwrap();
        let r = hooley_report(&pt, 10_000, 1.0).unwrap();
        assert_eq!(r.sum_squares, hooley_sum1(&pt, 10_000, 1.0).unwrap());
        assert_eq!(r.divisor_count, hooley_f(&pt, 10_000, 1.0).unwrap());
        assert!(r.sum_squares_ratio.is_finite() && r.sum_squares_ratio > 0.0);
        assert!(r.divisor_count_ratio.is_finite() && r.divisor_count_ratio > 0.0);
        assert!(r.window_lo < r.window_hi);
        assert!((r.theta0 - theta0().to_f64()).abs() < 1e-12);
    }

    #[test]
    fn window_membership_uses_exact_bounds() {
        let w = DivisorWindow::explicit(100, 1.0, rat(3, 1), rat(7, 1)).unwrap();
        assert!(!w.contains(3)); // strict lower bound
        assert!(w.contains(4));
        assert!(w.contains(6));
        assert!(!w.contains(7)); // strict upper bound
        assert!(DivisorWindow::explicit(100, 1.0, rat(7, 1), rat(3, 1)).is_err());
    }
}
