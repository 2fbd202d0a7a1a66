//! Fixed-point big-real arithmetic used for the workbench constants.
//!
//! A [`Real`] stores `mant / 2^FRAC_BITS` with a `BigInt` mantissa and 320
//! fractional bits (~96 decimal digits), far beyond the 30 digits the
//! constant computations need. Every elementary operation rounds to
//! nearest, so the per-operation error is at most half an ulp (2^-321).
//!
//! The module provides the transcendental kernel for the rest of the
//! crate: `exp`, `ln`, `sqrt`, `pow`, the constants pi / e / ln 2, and a
//! Spouge-series gamma function with relative error below 1e-32.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Fractional bits of every `Real`.
pub const FRAC_BITS: u32 = 320;
/// Guard bits used while summing constant series.
const GUARD_BITS: u32 = 32;
/// Spouge parameter; relative gamma error is below (2*pi)^-(a+1/2).
const SPOUGE_A: u32 = 41;

/// Fixed-point real number: value = mant / 2^320.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Real {
    mant: BigInt,
}

/// Shift right by `bits`, rounding half away from zero.
fn shr_round(x: BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x;
    }
    let half = BigInt::from(1) << (bits - 1);
    if x.is_negative() {
        -((-x + half) >> bits)
    } else {
        (x + half) >> bits
    }
}

/// Integer power by squaring.
fn bpow(base: &BigInt, mut e: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// Divide with round-to-nearest (half away from zero). Signs are split
/// off first: BigInt's shift floors toward -infinity, which would skew
/// exact negative quotients by an ulp.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    assert!(!den.is_zero(), "division by zero in hiprec");
    let neg = num.is_negative() != den.is_negative();
    let q = (&num.abs() << 1u32) / den.abs();
    let r = (q + BigInt::from(1)) >> 1u32;
    if neg {
        -r
    } else {
        r
    }
}

impl Real {
    pub fn zero() -> Real {
        Real { mant: BigInt::zero() }
    }

    pub fn one() -> Real {
        Real { mant: BigInt::from(1) << FRAC_BITS }
    }

    pub fn from_i64(v: i64) -> Real {
        Real { mant: BigInt::from(v) << FRAC_BITS }
    }

    pub fn from_u64(v: u64) -> Real {
        Real { mant: BigInt::from(v) << FRAC_BITS }
    }

    pub fn from_bigint(v: &BigInt) -> Real {
        Real { mant: v << FRAC_BITS }
    }

    /// Exact rational input, rounded to nearest ulp.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Real {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den.clone())
        } else {
            (num.clone(), den.clone())
        };
        Real { mant: div_round(&(num << FRAC_BITS), &den) }
    }

    pub fn from_ratio_i64(num: i64, den: i64) -> Real {
        Real::from_ratio(&BigInt::from(num), &BigInt::from(den))
    }

    /// Exact conversion from a finite f64.
    pub fn from_f64(v: f64) -> Real {
        let r = BigRational::from_float(v).expect("non-finite f64 input");
        Real::from_ratio(r.numer(), r.denom())
    }

    /// Nearest f64 (monotone rounding through the top bits).
    pub fn to_f64(&self) -> f64 {
        self.mant.to_f64().unwrap_or(f64::INFINITY) * (2.0f64).powi(-(FRAC_BITS as i32))
    }

    /// The exact rational value mant / 2^320.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::from(1) << FRAC_BITS)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Real {
        Real { mant: self.mant.abs() }
    }

    pub fn cmp_value(&self, other: &Real) -> Ordering {
        self.mant.cmp(&other.mant)
    }

    /// Floor to an integer.
    pub fn floor_int(&self) -> BigInt {
        &self.mant >> FRAC_BITS
    }

    /// Multiply by a machine integer (exact).
    pub fn mul_i64(&self, k: i64) -> Real {
        Real { mant: &self.mant * BigInt::from(k) }
    }

    /// Divide by a machine integer, rounded to nearest.
    pub fn div_u64(&self, k: u64) -> Real {
        Real { mant: div_round(&self.mant, &BigInt::from(k)) }
    }

    /// Square root for non-negative values (Newton on integers).
    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "sqrt of negative value");
        Real { mant: (&self.mant << FRAC_BITS).sqrt() }
    }

    /// exp(x) via argument reduction by ln 2 and a Taylor tail.
    pub fn exp(&self) -> Real {
        let xf = self.to_f64();
        assert!(xf.abs() < 1.0e6, "exp argument out of supported range");
        let n = (xf / std::f64::consts::LN_2).round() as i64;
        let r = self - &ln2().mul_i64(n);
        // |r| <= 0.35; Taylor sum of e^r.
        let mut term = Real::one();
        let mut sum = Real::one();
        let mut k: u64 = 1;
        loop {
            term = &term * &r;
            term = term.div_u64(k);
            if term.mant.is_zero() {
                break;
            }
            sum = &sum + &term;
            if term.mant.abs() < (BigInt::from(1) << 4) {
                break;
            }
            k += 1;
        }
        // scale by 2^n
        if n >= 0 {
            Real { mant: sum.mant << (n as u32) }
        } else {
            Real { mant: shr_round(sum.mant, (-n) as u32) }
        }
    }

    /// Natural logarithm for positive values.
    pub fn ln(&self) -> Real {
        assert!(self.is_positive(), "ln of non-positive value");
        let bits = self.mant.bits() as i64;
        let k = bits - (FRAC_BITS as i64) - 1; // self / 2^k in [1, 2)
        let m = if k >= 0 {
            Real { mant: shr_round(self.mant.clone(), k as u32) }
        } else {
            Real { mant: &self.mant << ((-k) as u32) }
        };
        // atanh series: ln m = 2 * sum t^(2j+1)/(2j+1), t = (m-1)/(m+1)
        let t = &(&m - &Real::one()) / &(&m + &Real::one());
        let t2 = &t * &t;
        let mut power = t.clone();
        let mut sum = Real::zero();
        let mut j: u64 = 0;
        loop {
            let term = power.div_u64(2 * j + 1);
            if term.mant.is_zero() && j > 0 {
                break;
            }
            sum = &sum + &term;
            if term.mant.abs() < (BigInt::from(1) << 4) {
                break;
            }
            power = &power * &t2;
            j += 1;
        }
        let ln_m = sum.mul_i64(2);
        &ln_m + &ln2().mul_i64(k)
    }

    /// self^expnt for positive self.
    pub fn pow(&self, expnt: &Real) -> Real {
        if expnt.is_zero() {
            return Real::one();
        }
        (&self.ln() * expnt).exp()
    }

    /// self^(num/den) for positive self.
    pub fn pow_ratio(&self, num: i64, den: u64) -> Real {
        self.pow(&Real::from_ratio_i64(num, den as i64))
    }

    /// Decimal rendering with `digits` fractional digits (round-to-nearest).
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let neg = self.mant.is_negative();
        let a = self.mant.abs();
        let scaled = shr_round(a * bpow(&BigInt::from(10), digits), FRAC_BITS);
        let s = scaled.to_string();
        let (int_part, frac_part) = if s.len() > digits as usize {
            let split = s.len() - digits as usize;
            (s[..split].to_string(), s[split..].to_string())
        } else {
            ("0".to_string(), format!("{:0>width$}", s, width = digits as usize))
        };
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Parse a plain decimal literal like "3.14159" (exact, then rounded).
    pub fn from_decimal_str(s: &str) -> Option<Real> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((a, b)) => (a, b),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits: String = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().ok()?;
        let den = bpow(&BigInt::from(10), frac_part.len() as u32);
        Some(Real::from_ratio(&(num * BigInt::from(sign)), &den))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal_string(40))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(40))
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        Real { mant: &self.mant + &rhs.mant }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        Real { mant: &self.mant - &rhs.mant }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        Real { mant: shr_round(&self.mant * &rhs.mant, FRAC_BITS) }
    }
}

impl Div for &Real {
    type Output = Real;
    // the shift restores the fixed-point scale before the division
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Real) -> Real {
        Real { mant: div_round(&(&self.mant << FRAC_BITS), &rhs.mant) }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -&self.mant }
    }
}

/// arctan(1/k) at guard precision, as a raw mantissa scaled by 2^(320+GUARD).
fn atan_inv_guarded(k: i64) -> BigInt {
    let scale = FRAC_BITS + GUARD_BITS;
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut power = (BigInt::from(1) << scale) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * j + 1);
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        power = &power / &k2;
        j += 1;
    }
    sum
}

static PI: OnceLock<Real> = OnceLock::new();
static E: OnceLock<Real> = OnceLock::new();
static LN2: OnceLock<Real> = OnceLock::new();

/// pi by Machin's formula.
pub fn pi() -> &'static Real {
    PI.get_or_init(|| {
        let raw = atan_inv_guarded(5) * BigInt::from(16) - atan_inv_guarded(239) * BigInt::from(4);
        Real { mant: shr_round(raw, GUARD_BITS) }
    })
}

/// Euler's number by the factorial series.
pub fn e() -> &'static Real {
    E.get_or_init(|| {
        let scale = FRAC_BITS + GUARD_BITS;
        let mut term = BigInt::from(1) << scale;
        let mut sum = term.clone();
        let mut k: u64 = 1;
        while !term.is_zero() {
            term = &term / BigInt::from(k);
            sum += &term;
            k += 1;
        }
        Real { mant: shr_round(sum, GUARD_BITS) }
    })
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2() -> &'static Real {
    LN2.get_or_init(|| {
        let scale = FRAC_BITS + GUARD_BITS;
        let nine = BigInt::from(9);
        let mut power = (BigInt::from(1) << scale) / BigInt::from(3);
        let mut sum = BigInt::zero();
        let mut j: u64 = 0;
        while !power.is_zero() {
            sum += &power / BigInt::from(2 * j + 1);
            power = &power / &nine;
            j += 1;
        }
        Real { mant: shr_round(sum * BigInt::from(2), GUARD_BITS) }
    })
}

static SPOUGE_COEFFS: OnceLock<Vec<Real>> = OnceLock::new();

fn spouge_coeffs() -> &'static Vec<Real> {
    SPOUGE_COEFFS.get_or_init(|| {
        let a = SPOUGE_A as i64;
        let mut cs = Vec::with_capacity(SPOUGE_A as usize);
        // c_0 = sqrt(2 pi)
        cs.push(pi().mul_i64(2).sqrt());
        let mut factorial = BigInt::from(1);
        for k in 1..a {
            if k > 1 {
                factorial *= BigInt::from(k - 1);
            }
            // c_k = (-1)^(k-1) / (k-1)! * (a-k)^(k-1/2) * e^(a-k)
            let ak = Real::from_i64(a - k);
            let expo = &(&ak.ln() * &Real::from_ratio_i64(2 * k - 1, 2)) + &ak;
            let mut c = expo.exp();
            c = Real { mant: div_round(&c.mant, &factorial) };
            if k % 2 == 0 {
                c = -&c;
            }
            cs.push(c);
        }
        cs
    })
}

/// Gamma function for positive arguments (Spouge series, a = 41).
///
/// Relative error is bounded by a^(-1/2) (2 pi)^-(a+1/2) < 1e-32.
pub fn gamma(x: &Real) -> Real {
    assert!(x.is_positive(), "gamma requires a positive argument");
    assert!(x.to_f64() < 200.0, "gamma argument out of supported range");
    let cs = spouge_coeffs();
    let z = x - &Real::one(); // gamma(x) = gamma(z+1), z > -1
    let a = Real::from_u64(SPOUGE_A as u64);
    let mut s = cs[0].clone();
    for (k, ck) in cs.iter().enumerate().skip(1) {
        s = &s + &(ck / &(&z + &Real::from_u64(k as u64)));
    }
    let za = &z + &a;
    let expo = &(&za.ln() * &(&z + &Real::from_ratio_i64(1, 2))) - &za;
    &expo.exp() * &s
}
