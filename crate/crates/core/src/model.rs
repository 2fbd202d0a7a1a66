//! The predicted main term and its ingredients: the singular series over
//! the character mod 4, the gamma-function factor, the literal dyadic range
//! factor, a numerical solution-density (singular) integral, the partial
//! sums of chi4(d)/phi(d), the tuning parameter set, and counted-versus-
//! predicted comparison reports.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{PrimeTable, RationalExponent};
use crate::counter::{
    feasibility, gamma_of_n, Feasibility, MuRatio, PairSumHistogram, ValueTable, WeightMode,
};
use crate::error::{Error, Result};
use crate::hiprec::{self, Real};
use crate::quad::tanh_sinh;

/// Truncated Euler product sigma = pi * prod_p (1 + chi4(p)/(p(p-1))).
pub struct SingularSeries {
    pub value: Real,
    pub truncation: u64,
    /// |log(true/value)| <= sum_{n > P} 1/(n(n-1)) = 1/P.
    pub tail_bound: f64,
}

/// Euler product truncated at the prime bound `p_max` (inclusive).
pub fn singular_series(table: &PrimeTable, p_max: u64) -> Result<SingularSeries> {
    if p_max < 2 {
        return Err(Error::Config("singular series truncation must be >= 2".into()));
    }
    if p_max > table.limit() {
        return Err(Error::Config(format!(
            "truncation {p_max} exceeds sieve limit {}",
            table.limit()
        )));
    }
    let mut value = hiprec::pi().clone();
    for &p in table.primes_in(0, p_max) {
        let den = (p as u128) * ((p - 1) as u128);
        let num = match crate::arith::chi4(p) {
            1 => den + 1,
            -1 => den - 1,
            _ => continue, // p = 2 contributes factor 1
        };
        value = &value * &Real::from_ratio(&BigInt::from(num), &BigInt::from(den));
    }
    Ok(SingularSeries { value, truncation: p_max, tail_bound: 1.0 / p_max as f64 })
}

/// Gamma(1 + 1/c)^3 / Gamma(3/c).
pub fn gamma_factor(c: RationalExponent) -> Real {
    let (a, b) = (c.num() as i64, c.den() as i64);
    // 1 + 1/c = (a + b)/a, 3/c = 3b/a
    let g1 = hiprec::gamma(&Real::from_ratio_i64(a + b, a));
    let g3 = hiprec::gamma(&Real::from_ratio_i64(3 * b, a));
    &(&(&g1 * &g1) * &g1) / &g3
}

/// The range factor of the dyadic main term.
pub struct RangeFactor {
    pub value: Real,
    /// Set when the literal factor is positive while the dyadic solution
    /// density vanishes (mu = 1/2 with 3 (1/2)^c >= 1): the factor is then
    /// inconsistent with the vanishing singular integral.
    pub flagged: bool,
}

/// mu = 0 gives 1; mu = 1/2 gives the literal 1 - 1/2^(3-c) together with
/// a consistency flag. Other mu are served by [`singular_integral`] only.
pub fn range_factor(c: RationalExponent, mu: MuRatio) -> Result<RangeFactor> {
    if mu == MuRatio::new(0, 1) {
        return Ok(RangeFactor { value: Real::one(), flagged: false });
    }
    if mu == MuRatio::new(1, 2) {
        // 1 - 2^(c-3)
        let expo = &Real::from_ratio_i64(c.num() as i64, c.den() as i64) - &Real::from_i64(3);
        let value = &Real::one() - &(&expo * hiprec::ln2()).exp();
        let flagged = feasibility(c, mu).status == Feasibility::Infeasible;
        Ok(RangeFactor { value, flagged })
    } else {
        Err(Error::Domain(format!(
            "range factor defined for mu in {{0, 1/2}}; use singular_integral for mu = {mu}"
        )))
    }
}

/// Solution-density integral for a single N: the volume derivative
///   J(N) = int int over (mu X, X]^2 of (1/c) z^(1/c - 1) dy2 dy3,
/// z = N - y2^c - y3^c restricted to z > (mu X)^c, with X = N^(1/c).
///
/// For mu = 0 this agrees with gamma_factor(c) * N^(3/c - 1); an empty
/// integration region returns exactly 0.
pub fn singular_integral(n: u64, c: RationalExponent, mu: MuRatio, rel_tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("singular integral needs N >= 1".into()));
    }
    let cf = c.to_f64();
    let nf = n as f64;
    let x = nf.powf(1.0 / cf);
    let muf = *mu.numer() as f64 / *mu.denom() as f64;
    let mu_x = muf * x;
    let floor_c = mu_x.powf(cf); // (mu X)^c
    if 3.0 * floor_c >= nf {
        return Ok(0.0); // empty region: every triple overshoots N
    }
    // outer variable runs to where the inner range still has positive length
    let y2_top = (nf - 2.0 * floor_c).powf(1.0 / cf).min(x);
    let inv_c = 1.0 / cf;
    let expo = inv_c - 1.0;
    let inner_tol = (rel_tol * 0.1).max(1e-12);
    let outer = tanh_sinh(
        |y2| {
            let s = nf - y2.powf(cf);
            let room = s - floor_c;
            if room <= 0.0 {
                return 0.0;
            }
            let hi3 = room.powf(inv_c).min(x);
            if hi3 <= mu_x {
                return 0.0;
            }
            let inner = tanh_sinh(
                |y3| {
                    let z = s - y3.powf(cf);
                    if z <= 0.0 {
                        return 0.0;
                    }
                    inv_c * z.powf(expo)
                },
                mu_x,
                hi3,
                inner_tol,
                12,
            );
            match inner {
                Ok((v, _)) => v,
                Err(_) => f64::NAN, // propagated through the outer convergence check
            }
        },
        mu_x,
        y2_top,
        rel_tol,
        12,
    )?;
    if !outer.0.is_finite() {
        return Err(Error::Tolerance {
            requested: rel_tol,
            achieved: f64::NAN,
            msg: "inner quadrature of the singular integral failed".into(),
        });
    }
    Ok(outer.0)
}

/// The d-divided variant: singular integral divided by phi(d).
pub fn phi_j(
    table: &PrimeTable,
    n: u64,
    c: RationalExponent,
    mu: MuRatio,
    d: u64,
    rel_tol: f64,
) -> Result<f64> {
    let phi = table.euler_phi(d)? as f64;
    Ok(singular_integral(n, c, mu, rel_tol)? / phi)
}

/// Predicted main term:
///   (sigma if linnik) * gamma_factor(c) * range_factor(c, mu) * N^(3/c-1).
pub fn main_term(
    n: u64,
    c: RationalExponent,
    mu: MuRatio,
    sigma: Option<&SingularSeries>,
) -> Result<Real> {
    if n == 0 {
        return Err(Error::Domain("main term needs N >= 1".into()));
    }
    let rf = range_factor(c, mu)?;
    let expo = Real::from_ratio_i64(3 * c.den() as i64 - c.num() as i64, c.num() as i64);
    let n_pow = (&Real::from_u64(n).ln() * &expo).exp();
    let mut value = &(&gamma_factor(c) * &rf.value) * &n_pow;
    if let Some(s) = sigma {
        value = &value * &s.value;
    }
    Ok(value)
}

/// Exact-per-term partial sum sum_{d <= D} chi4(d)/phi(d), accumulated in
/// fixed point (each term rounds to 2^-320, so the total rounding error is
/// below D * 2^-320).
pub fn partial_chi_phi_sum(d_max: u64) -> Result<Real> {
    if d_max < 1 {
        return Err(Error::Config("partial sum needs D >= 1".into()));
    }
    if d_max > (1 << 31) {
        return Err(Error::Resource(format!(
            "phi sieve for D = {d_max} exceeds the 2^31 entry cap"
        )));
    }
    // totient sieve up to d_max
    let n = d_max as usize;
    let mut phi: Vec<u32> = (0..=n as u32).collect();
    for i in 2..=n {
        if phi[i] == i as u32 {
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i as u32;
                j += i;
            }
        }
    }
    let mut sum = Real::zero();
    let mut d = 1u64;
    while d <= d_max {
        match d % 4 {
            1 => sum = &sum + &Real::from_ratio_i64(1, phi[d as usize] as i64),
            3 => sum = &sum - &Real::from_ratio_i64(1, phi[d as usize] as i64),
            _ => {}
        }
        d += 2; // even d contribute nothing
    }
    Ok(sum)
}

/// The tuning parameters for a given (X, c): D = X^(1/2)/(log X)^A,
/// Delta = X^(1/4 - c), H = X^(1283/15276), Q = X^(3839/15276),
/// U = X^(1/9), V = X^(1/3), Z = [X^(4/9)] + 1/2.
#[derive(Debug, Clone, Serialize)]
pub struct ParamSet {
    pub x: f64,
    pub c: String,
    pub a: f64,
    pub d: f64,
    pub delta: f64,
    pub h: f64,
    pub q: f64,
    pub u: f64,
    pub v: f64,
    pub z: f64,
}

impl ParamSet {
    /// A defaults to 11, the smallest integer above the required 10.
    pub const DEFAULT_A: f64 = 11.0;

    pub fn new(x: f64, c: RationalExponent, a: f64) -> Result<ParamSet> {
        if x.is_nan() || x < 3.0 {
            return Err(Error::Config(format!("ParamSet needs X >= 3, got {x}")));
        }
        if a.is_nan() || a <= 10.0 {
            return Err(Error::Config(format!("ParamSet needs A > 10, got {a}")));
        }
        let cf = c.to_f64();
        let d = x.sqrt() / x.ln().powf(a);
        let delta = x.powf(0.25 - cf);
        let ps = ParamSet {
            x,
            c: c.to_string(),
            a,
            d,
            delta,
            h: x.powf(1283.0 / 15276.0),
            q: x.powf(3839.0 / 15276.0),
            u: x.powf(1.0 / 9.0),
            v: x.powf(1.0 / 3.0),
            z: x.powf(4.0 / 9.0).floor() + 0.5,
        };
        debug_assert!(ps.d > 0.0 && ps.d < x.sqrt());
        debug_assert!((ps.delta * x.powf(cf) / x.powf(0.25) - 1.0).abs() < 1e-9);
        Ok(ps)
    }
}

/// One row of a counted-versus-predicted comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub n: u64,
    /// Decimal string of the scaled integer count.
    pub gamma_fixed: String,
    pub scale_bits: u32,
    pub plain_count: u64,
    /// Counted value descaled to a float.
    pub counted: f64,
    pub predicted: f64,
    /// counted / predicted; NaN when the model is zero with a nonzero count.
    pub ratio: f64,
    pub flag: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub c: String,
    pub mu: String,
    pub mode: WeightMode,
    pub n0: u64,
    pub n1: u64,
    pub rows: Vec<CompareRow>,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
    /// Report-level caveats (range infeasibility, heuristic unit model).
    pub notes: Vec<String>,
}

/// Compare exact counts against the analytic model over an N-window.
///
/// LOG mode is measured against gamma_factor * range * N^(3/c-1); the
/// Linnik mode additionally carries the singular series. UNIT mode uses
/// the heuristic model main_term / ((ln N)/c)^3 and is flagged as such.
pub fn compare(
    hist: &PairSumHistogram,
    table: &ValueTable,
    n0: u64,
    n1: u64,
    mode: WeightMode,
    sigma: &SingularSeries,
) -> Result<ComparisonReport> {
    if n0 > n1 || n0 == 0 {
        return Err(Error::Config(format!("empty comparison window [{n0}, {n1}]")));
    }
    let c = table.c();
    let mu = table.mu();
    let mut notes = Vec::new();
    let feas = feasibility(c, mu);
    if feas.status == Feasibility::Infeasible {
        notes.push(format!(
            "range infeasible: slack 1 - 3 mu^c = {} <= 0, so counts vanish for large N \
             while the literal model stays positive",
            feas.slack.to_decimal_string(6)
        ));
    }
    if mode == WeightMode::Unit {
        notes.push("unit-weight model is heuristic: main term divided by ((ln N)/c)^3".into());
    }
    let rf = range_factor(c, mu)?;
    if rf.flagged {
        notes.push("range factor flagged: inconsistent with vanishing singular integral".into());
    }
    // parallel over disjoint N's; row order (and therefore output bytes)
    // is fixed by the collect
    let rows: Result<Vec<CompareRow>> = (n0..=n1)
        .into_par_iter()
        .map(|n| {
            let rep = gamma_of_n(n, hist, table, mode)?;
            let counted = rep.gamma_fixed as f64 * (0.5f64).powi(rep.scale_bits as i32);
            let sigma_arg = match mode {
                WeightMode::LinnikRLog => Some(sigma),
                _ => None,
            };
            let mut predicted = main_term(n, c, mu, sigma_arg)?.to_f64();
            if mode == WeightMode::Unit {
                let log_term = (n as f64).ln() / c.to_f64();
                predicted /= log_term.powi(3);
            }
            let (ratio, flag) = if predicted > 0.0 {
                let r = counted / predicted;
                if counted == 0.0 {
                    (r, "zero_count")
                } else {
                    (r, "")
                }
            } else if counted > 0.0 {
                (f64::NAN, "model_zero")
            } else {
                (f64::NAN, "empty")
            };
            Ok(CompareRow {
                n,
                gamma_fixed: rep.gamma_fixed.to_string(),
                scale_bits: rep.scale_bits,
                plain_count: rep.plain_count,
                counted,
                predicted,
                ratio,
                flag,
            })
        })
        .collect();
    let rows = rows?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).filter(|r| r.is_finite()).collect();
    let (mean, stddev, min, max) = if ratios.is_empty() {
        (f64::NAN, f64::NAN, f64::NAN, f64::NAN)
    } else {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let var =
            ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / ratios.len() as f64;
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (mean, var.sqrt(), min, max)
    };
    Ok(ComparisonReport {
        c: c.to_string(),
        mu: mu.to_string(),
        mode,
        n0,
        n1,
        rows,
        mean,
        stddev,
        min,
        max,
        notes,
    })
}
