//! Sieves and arithmetic functions: primality, smallest prime factors,
//! the non-principal character mod 4, sums of two squares, detection of
//! primes of the form `x^2 + y^2 + 1`, exact floor powers `[p^(a/b)]`,
//! and the quantized logarithm weights used by the counting engine.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hiprec;

/// Scale of the quantized logarithm weights: value = round(2^24 ln p).
pub const LOG_SCALE_BITS: u32 = 24;

/// Quantized natural logarithm, scaled by 2^24.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FixedLog(pub i64);

impl FixedLog {
    pub fn to_f64(self) -> f64 {
        self.0 as f64 * (2.0f64).powi(-(LOG_SCALE_BITS as i32))
    }
}

/// Exact integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut s = (n as f64).sqrt() as u64;
    while (s as u128) * (s as u128) > n as u128 {
        s -= 1;
    }
    while ((s + 1) as u128) * ((s + 1) as u128) <= n as u128 {
        s += 1;
    }
    s
}

/// Sieve products over `[2, limit]`: primality bits, the ascending prime
/// list, and (optionally) the smallest-prime-factor array.
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    primes: Vec<u64>,
    spf: Option<Vec<u32>>,
}

impl PrimeTable {
    /// Eratosthenes sieve without the smallest-prime-factor array.
    pub fn sieve(limit: u64) -> Result<PrimeTable> {
        Self::check_limit(limit)?;
        let n = limit as usize;
        let mut bits = vec![u64::MAX; n / 64 + 1];
        let clear = |bits: &mut [u64], i: usize| bits[i / 64] &= !(1u64 << (i % 64));
        let get = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
        clear(&mut bits, 0);
        if n >= 1 {
            clear(&mut bits, 1);
        }
        let mut p = 2usize;
        while p * p <= n {
            if get(&bits, p) {
                let mut q = p * p;
                while q <= n {
                    clear(&mut bits, q);
                    q += p;
                }
            }
            p += 1;
        }
        let mut primes = Vec::new();
        for i in 2..=n {
            if get(&bits, i) {
                primes.push(i as u64);
            }
        }
        Ok(PrimeTable { limit, bits, primes, spf: None })
    }

    /// Linear sieve producing the smallest-prime-factor array as well.
    pub fn sieve_with_spf(limit: u64) -> Result<PrimeTable> {
        Self::check_limit(limit)?;
        if limit > (1 << 31) {
            return Err(Error::Resource(format!(
                "spf array for limit {limit} would need {} bytes; cap is 2^31 entries",
                4 * (limit + 1)
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || p * i > n {
                    break;
                }
                spf[p * i] = p as u32;
            }
        }
        let mut bits = vec![0u64; n / 64 + 1];
        for &p in &primes {
            bits[(p / 64) as usize] |= 1u64 << (p % 64);
        }
        Ok(PrimeTable { limit, bits, primes, spf: Some(spf) })
    }

    fn check_limit(limit: u64) -> Result<()> {
        if !(2..=1 << 32).contains(&limit) {
            return Err(Error::Config(format!(
                "sieve limit {limit} outside [2, 2^32]"
            )));
        }
        Ok(())
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn has_spf(&self) -> bool {
        self.spf.is_some()
    }

    /// Primality for `n <= limit`.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "is_prime query {n} above sieve limit");
        self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    /// Primes in the half-open interval `(lo, hi]`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p <= lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        &self.primes[start..end]
    }

    /// Smallest prime factor of `n >= 2` (requires the spf array).
    pub fn spf(&self, n: u64) -> u64 {
        let spf = self.spf.as_ref().expect("PrimeTable built without spf");
        assert!((2..=self.limit).contains(&n));
        spf[n as usize] as u64
    }

    /// Prime factorization as (prime, exponent) pairs in ascending order.
    ///
    /// Uses the spf array when available and `n <= limit`, otherwise trial
    /// division by the sieved primes (valid for `n <= limit^2`).
    pub fn factor(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return Err(Error::Domain("factor(0) undefined".into()));
        }
        let mut out = Vec::new();
        if n == 1 {
            return Ok(out);
        }
        if self.spf.is_some() && n <= self.limit {
            let mut m = n;
            while m > 1 {
                let p = self.spf(m);
                let mut e = 0u32;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                out.push((p, e));
            }
            return Ok(out);
        }
        if n > self.limit.saturating_mul(self.limit) {
            return Err(Error::Range(format!(
                "factor({n}) beyond reach of sieve limit {}",
                self.limit
            )));
        }
        let mut m = n;
        for &p in &self.primes {
            if p * p > m {
                break;
            }
            if m % p == 0 {
                let mut e = 0u32;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                out.push((p, e));
            }
        }
        if m > 1 {
            out.push((m, 1));
        }
        Ok(out)
    }

    /// All divisors of `n`, in ascending order.
    pub fn divisors(&self, n: u64) -> Result<Vec<u64>> {
        let fac = self.factor(n)?;
        let mut divs = vec![1u64];
        for (p, e) in fac {
            let prev = divs.clone();
            let mut pe = 1u64;
            for _ in 0..e {
                pe *= p;
                divs.extend(prev.iter().map(|d| d * pe));
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }

    /// Euler's totient via factorization.
    pub fn euler_phi(&self, n: u64) -> Result<u64> {
        let fac = self.factor(n)?;
        let mut phi = n;
        for (p, _) in fac {
            phi = phi / p * (p - 1);
        }
        Ok(phi)
    }

    /// Von Mangoldt weight: `ln p` when `n = p^k`, zero otherwise.
    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        if n <= 1 {
            return Ok(0.0);
        }
        if self.is_prime_checked(n) {
            return Ok((n as f64).ln());
        }
        let fac = self.factor(n)?;
        if fac.len() == 1 {
            Ok((fac[0].0 as f64).ln())
        } else {
            Ok(0.0)
        }
    }

    fn is_prime_checked(&self, n: u64) -> bool {
        n <= self.limit && self.is_prime(n)
    }
}

/// The non-principal Dirichlet character modulo 4.
pub fn chi4(n: u64) -> i32 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Number of ordered integer pairs (x, y) with x^2 + y^2 = n, counted with
/// signs and zeros, by direct lattice enumeration.
pub fn r2_lattice(n: u64) -> u64 {
    assert!(n >= 1, "r2_lattice requires n >= 1");
    let mut count = 0u64;
    let root = isqrt(n);
    for x in 0..=root {
        let rem = n - x * x;
        let y = isqrt(rem);
        if y * y == rem {
            let mx = if x > 0 { 2 } else { 1 };
            let my = if y > 0 { 2 } else { 1 };
            count += mx * my;
        }
    }
    count
}

/// The same count through the divisor identity r(n) = 4 sum_{d|n} chi4(d).
pub fn r2_divisor(table: &PrimeTable, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("r2_divisor requires n >= 1".into()));
    }
    let mut s = 0i64;
    for d in table.divisors(n)? {
        s += chi4(d) as i64;
    }
    let r = 4 * s;
    debug_assert!(r >= 0, "character divisor sum went negative for n = {n}");
    Ok(r as u64)
}

/// True iff the prime p can be written as x^2 + y^2 + 1.
pub fn is_linnik(table: &PrimeTable, p: u64) -> Result<bool> {
    let prime = if p <= table.limit() {
        table.is_prime(p)
    } else if p > table.limit().saturating_mul(table.limit()) {
        return Err(Error::Range(format!(
            "is_linnik({p}) beyond reach of sieve limit {}",
            table.limit()
        )));
    } else {
        // trial division fallback for queries above the sieve limit
        table.primes().iter().take_while(|&&q| q * q <= p).all(|&q| p % q != 0)
    };
    if !prime {
        return Err(Error::Domain(format!("is_linnik({p}): not a prime")));
    }
    Ok(r2_divisor(table, p - 1)? > 0)
}

/// A rational exponent c = num/den in lowest terms, with den <= 64 so that
/// `[p^c]` is computable by exact integer power comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalExponent {
    num: u64,
    den: u64,
}

impl RationalExponent {
    /// Largest-denominator cap keeping `k^den` comparisons cheap and exact.
    pub const MAX_DEN: u64 = 64;

    pub fn new(num: u64, den: u64) -> Result<RationalExponent> {
        if den == 0 {
            return Err(Error::Config("exponent denominator is zero".into()));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        if den > Self::MAX_DEN {
            return Err(Error::Config(format!(
                "exponent denominator {den} exceeds cap {}",
                Self::MAX_DEN
            )));
        }
        // c = 1 is accepted as the identity baseline; the lemma window
        // (1, 3) \ {2} is reported by `in_lemma_window`.
        if num < den || num >= 3 * den {
            return Err(Error::Config(format!(
                "exponent {num}/{den} outside [1, 3)"
            )));
        }
        Ok(RationalExponent { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// 1 < c < 3 and c != 2: the window in which the single-sum lemmas apply.
    pub fn in_lemma_window(&self) -> bool {
        self.num > self.den && self.num != 2 * self.den
    }

    /// 1 < c < 16559/15276: the window of the representation theorem.
    pub fn in_theorem_window(&self) -> bool {
        self.num > self.den && (self.num as u128) * 15276 < 16559 * (self.den as u128)
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl serde::Serialize for RationalExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for RationalExponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<RationalExponent> {
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let num: u64 = a.parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("bad exponent numerator in {s:?}"),
        })?;
        let den: u64 = b.parse().map_err(|_| Error::Parse {
            pos: a.len() + 1,
            msg: format!("bad exponent denominator in {s:?}"),
        })?;
        RationalExponent::new(num, den)
    }
}

fn upow(base: u64, mut e: u32) -> BigUint {
    let mut acc = BigUint::one();
    let mut b = BigUint::from(base);
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// Exact check that k = [p^(a/b)], i.e. k^b <= p^a < (k+1)^b.
pub fn verify_floor_pow(p: u64, c: &RationalExponent, k: u64) -> bool {
    let pa = upow(p, c.num as u32);
    upow(k, c.den as u32) <= pa && pa < upow(k + 1, c.den as u32)
}

/// `[p^(a/b)]` by exact integer power comparison (never floating point in
/// the decision). A floating seed only narrows the search bracket; every
/// returned value is certified by the integer comparison.
pub fn floor_pow(p: u64, c: &RationalExponent) -> Result<u64> {
    if p == 0 {
        return Err(Error::Domain("floor_pow requires p >= 1".into()));
    }
    if p == 1 {
        return Ok(1);
    }
    let (a, b) = (c.num as u32, c.den as u32);
    let pa = upow(p, a);
    // the result must fit u64: p^a < 2^(64 b)
    if pa.bits() > 64 * b as u64 {
        return Err(Error::Range(format!(
            "floor_pow({p}, {c}) exceeds 64 bits"
        )));
    }
    if b == 1 {
        return Ok(pa.to_u64().expect("checked size above"));
    }
    let seed = (p as f64).powf(c.to_f64());
    if seed.is_finite() && seed < 9.0e15 {
        let k0 = seed as u64;
        for k in k0.saturating_sub(1)..=k0 + 1 {
            if k >= 1 && verify_floor_pow(p, c, k) {
                return Ok(k);
            }
        }
    }
    // full bisection fallback
    let mut lo = 1u64;
    let mut hi = 1u64
        .checked_shl((pa.bits() as u32) / b + 2)
        .unwrap_or(u64::MAX);
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if upow(mid, b) <= pa {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(verify_floor_pow(p, c, lo));
    Ok(lo)
}

/// Quantized logarithm round(2^24 ln p).
///
/// The fast path evaluates in f64; when the scaled value falls within 1e-6
/// of a rounding boundary the exact big-real logarithm decides, so results
/// are reproducible across platforms and libm versions.
pub fn fixed_log(p: u64) -> FixedLog {
    assert!(p >= 1, "fixed_log requires p >= 1");
    if p == 1 {
        return FixedLog(0);
    }
    let scaled = (p as f64).ln() * (1u64 << LOG_SCALE_BITS) as f64;
    let frac = scaled - scaled.floor();
    if (frac - 0.5).abs() < 1e-6 {
        return FixedLog(fixed_log_exact(p));
    }
    FixedLog(scaled.round() as i64)
}

/// Reference implementation of the quantized logarithm through the
/// big-real module; used as the oracle for the fast path.
pub fn fixed_log_exact(p: u64) -> i64 {
    let ln_p = hiprec::Real::from_u64(p).ln();
    let scaled = hiprec::Real::from_u64(1 << LOG_SCALE_BITS);
    (&ln_p * &scaled)
        .to_rational()
        .round()
        .to_integer()
        .to_i64()
        .expect("fixed log fits i64")
}
