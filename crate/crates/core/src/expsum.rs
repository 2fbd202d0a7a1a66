//! Numerical evaluation of the exponential sums and integrals the counting
//! theory rests on: the floor-power prime sums S_{l,d;J}(t), their smooth
//! companions with exact exponents, the oscillatory integral I_J(t), the
//! assembled sum K(t), the progression discrepancy E(y,t,d,a), the sawtooth
//! Fourier expansion with coefficients c_h, exact Parseval norms, and
//! minor-arc grid scans.
//!
//! Phase policy: for rational t the phase t*m is reduced mod 1 in exact
//! integer arithmetic, so grid scans are reproducible bit for bit. For
//! irrational (float) t the phase error budget is #terms * 2^-50.

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{fixed_log, floor_pow, PrimeTable, RationalExponent, LOG_SCALE_BITS};
use crate::counter::MuRatio;
use crate::error::{Error, Result};
use crate::hiprec::Real;
use crate::model::ParamSet;
use crate::quad::adaptive_simpson_complex;

const W_SCALE: f64 = 1.0 / (1u64 << LOG_SCALE_BITS) as f64;

/// e(x) = exp(2 pi i x).
pub fn e_of(frac: f64) -> Complex64 {
    let a = std::f64::consts::TAU * frac;
    Complex64::new(a.cos(), a.sin())
}

/// The frequency variable t: an exact rational (grid nodes) or a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TValue {
    Rational { num: i64, den: u64 },
    Real(f64),
}

impl TValue {
    pub fn rational(num: i64, den: u64) -> TValue {
        assert!(den > 0);
        TValue::Rational { num, den }
    }

    pub fn zero() -> TValue {
        TValue::Rational { num: 0, den: 1 }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            TValue::Rational { num, den } => num as f64 / den as f64,
            TValue::Real(v) => v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            TValue::Rational { num, .. } => num == 0,
            TValue::Real(v) => v == 0.0,
        }
    }

    /// Fractional part of t * m in [0, 1); exact for rational t.
    pub fn phase_times(&self, m: u64) -> f64 {
        match *self {
            TValue::Rational { num, den } => {
                let d = den as i128;
                let r = ((num as i128) * (m as i128)).rem_euclid(d);
                r as f64 / den as f64
            }
            TValue::Real(t) => (t * m as f64).fract(),
        }
    }
}

impl std::fmt::Display for TValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            TValue::Rational { num, den } => write!(f, "{num}/{den}"),
            TValue::Real(v) => write!(f, "{v:?}"),
        }
    }
}

/// Primes of (lo, hi] with lo/hi real bounds.
fn primes_in_real(table: &PrimeTable, lo: f64, hi: f64) -> &[u64] {
    if hi < 2.0 || hi <= lo {
        return &[];
    }
    let lo_cut = if lo < 0.0 { 0 } else { lo.floor() as u64 };
    let hi_in = (hi.floor() as u64).min(table.limit());
    let slice = table.primes_in(lo_cut.saturating_sub(1), hi_in);
    // tighten the left edge: keep p with (p as f64) > lo
    let start = slice.partition_point(|&p| (p as f64) <= lo);
    &slice[start..]
}

/// S_{l,d;J}(t) = sum over primes p in J, p = l (mod d), of
/// e(t [p^c]) log p, with quantized log weights and ascending summation.
pub fn eval_s(
    table: &PrimeTable,
    t: &TValue,
    c: &RationalExponent,
    l: u64,
    d: u64,
    j: (f64, f64),
) -> Result<Complex64> {
    if d == 0 || l.gcd(&d) != 1 {
        return Err(Error::Domain(format!("eval_s needs gcd(l, d) = 1, got l = {l}, d = {d}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for &p in primes_in_real(table, j.0, j.1) {
        if p % d != l % d {
            continue;
        }
        let w = fixed_log(p).0 as f64 * W_SCALE;
        if t.is_zero() {
            sum.re += w;
            continue;
        }
        let m = floor_pow(p, c)?;
        sum += e_of(t.phase_times(m)) * w;
    }
    Ok(sum)
}

/// The smooth companion of [`eval_s`]: e(t p^c) with the exact exponent
/// p^c evaluated in the big-real module before reduction mod 1.
pub fn eval_s_bar(
    table: &PrimeTable,
    t: &TValue,
    c: &RationalExponent,
    l: u64,
    d: u64,
    j: (f64, f64),
) -> Result<Complex64> {
    if d == 0 || l.gcd(&d) != 1 {
        return Err(Error::Domain(format!(
            "eval_s_bar needs gcd(l, d) = 1, got l = {l}, d = {d}"
        )));
    }
    let t_real = match *t {
        TValue::Rational { num, den } => Real::from_ratio_i64(num, den as i64),
        TValue::Real(v) => Real::from_f64(v),
    };
    let mut sum = Complex64::new(0.0, 0.0);
    for &p in primes_in_real(table, j.0, j.1) {
        if p % d != l % d {
            continue;
        }
        let w = fixed_log(p).0 as f64 * W_SCALE;
        if t.is_zero() {
            sum.re += w;
            continue;
        }
        let pc = Real::from_u64(p).pow_ratio(c.num() as i64, c.den());
        let prod = &t_real * &pc;
        let frac = &prod - &Real::from_bigint(&prod.floor_int());
        sum += e_of(frac.to_f64()) * w;
    }
    Ok(sum)
}

/// I_J(t) = int_J e(t y^c) dy by oscillation-aware adaptive quadrature.
pub fn eval_i(t: f64, c: &RationalExponent, j: (f64, f64), rel_tol: f64) -> Result<Complex64> {
    let (lo, hi) = j;
    if hi <= lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if t == 0.0 {
        return Ok(Complex64::new(hi - lo, 0.0));
    }
    let cf = c.to_f64();
    let phase_range = (t.abs() * (hi.powf(cf) - lo.max(0.0).powf(cf))).abs();
    let panels = (2.0 * phase_range).ceil().clamp(4.0, 200_000.0) as usize;
    let width = (hi - lo) / panels as f64;
    let tau = std::f64::consts::TAU;
    let f = |y: f64| {
        // reduce the phase before trig for large arguments
        let a = (tau * t * y.powf(cf)) % tau;
        Complex64::new(a.cos(), a.sin())
    };
    let panel_tol = (rel_tol * (hi - lo) / panels as f64).max(1e-16);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let a = lo + k as f64 * width;
        let b = if k + 1 == panels { hi } else { a + width };
        sum += adaptive_simpson_complex(&f, a, b, panel_tol, 28)?;
    }
    Ok(sum)
}

/// The reported constant of the decay bound |I_J(t)| <= C min(X, X^(1-c)/|t|).
pub fn decay_constant(value: Complex64, t: f64, c: &RationalExponent, x: f64) -> f64 {
    let envelope = x.min(x.powf(1.0 - c.to_f64()) / t.abs().max(1e-300));
    value.norm() / envelope
}

/// Fourier coefficient c_h(x) = (1 - e(-x)) / (2 pi i (h + x)).
pub fn coeff_c_h(x: f64, h: i64) -> Result<Complex64> {
    let hx = h as f64 + x;
    if hx == 0.0 {
        return Err(Error::Singularity(format!(
            "c_h undefined at h + x = 0 (h = {h}, x = {x})"
        )));
    }
    let num = Complex64::new(1.0, 0.0) - e_of((-x).rem_euclid(1.0));
    let den = Complex64::new(0.0, std::f64::consts::TAU * hx);
    Ok(num / den)
}

/// Residual of the truncated sawtooth expansion
/// e(-x{y}) = sum_{|h| <= H} c_h(x) e(hy) + O(min(1, 1/(H ||y||))).
///
/// Terms with h + x = 0 contribute 0 (the literal-formula convention; at
/// x = 0 this makes the whole sum vanish and the residual exactly 1).
pub fn buriev_residual(x: f64, y: f64, h_max: u32) -> Result<(f64, f64)> {
    if h_max < 3 {
        return Err(Error::Domain(format!("expansion needs H >= 3, got {h_max}")));
    }
    let yfrac = y.rem_euclid(1.0);
    let target = e_of((-x * yfrac).rem_euclid(1.0));
    let mut sum = Complex64::new(0.0, 0.0);
    for h in -(h_max as i64)..=h_max as i64 {
        match coeff_c_h(x, h) {
            Ok(ch) => sum += ch * e_of((h as f64 * y).rem_euclid(1.0)),
            Err(_) => continue,
        }
    }
    let residual = (target - sum).norm();
    let ynorm = yfrac.min(1.0 - yfrac);
    let bound = if ynorm == 0.0 { 1.0 } else { (1.0 / (h_max as f64 * ynorm)).min(1.0) };
    Ok((residual, bound))
}

/// K(t) = sum over even m < D and j = +-1 of chi4(j) S_{1+jm, 4m; J_m}(t),
/// with J_m = (max(1 + m X / D, X/2), X].
pub fn eval_k(
    table: &PrimeTable,
    t: &TValue,
    c: &RationalExponent,
    x: u64,
    d_cap: f64,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    if d_cap < 2.0 {
        return Ok(sum); // empty m-sum; the literal D is tiny at desk scale
    }
    let xf = x as f64;
    let mut m = 2u64;
    while (m as f64) < d_cap {
        let lo = (1.0 + m as f64 * xf / d_cap).max(xf / 2.0);
        let jm = (lo, xf);
        let plus = eval_s(table, t, c, 1 + m, 4 * m, jm)?;
        let minus = eval_s(table, t, c, 3 * m + 1, 4 * m, jm)?;
        sum += plus - minus;
        m += 2;
    }
    Ok(sum)
}

/// Which arithmetic weight the discrepancy sum uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EWeights {
    /// Von Mangoldt weights (prime powers included).
    VonMangoldt,
    /// log p over primes only.
    PrimesOnly,
}

/// E(y, t, d, a) = sum_{mu y < n <= y, n = a (d)} Lambda(n) e(t n^c)
///                 - (1/phi(d)) int_{mu y}^{y} e(t x^c) dx.
///
/// Phases use f64 powers here (error budget #terms * 2^-50); the smooth
/// sums with certified exponents live in [`eval_s_bar`].
#[allow(clippy::too_many_arguments)]
pub fn eval_e(
    table: &PrimeTable,
    y: u64,
    t: f64,
    d: u64,
    a: u64,
    mu: MuRatio,
    c: &RationalExponent,
    weights: EWeights,
) -> Result<Complex64> {
    if d == 0 || a.gcd(&d) != 1 {
        return Err(Error::Domain(format!("eval_e needs gcd(a, d) = 1, got a = {a}, d = {d}")));
    }
    if *mu.numer() == 0 || mu >= MuRatio::new(1, 1) {
        return Err(Error::Domain(format!("eval_e needs 0 < mu < 1, got {mu}")));
    }
    if y > table.limit() {
        return Err(Error::Config(format!("y = {y} above sieve limit {}", table.limit())));
    }
    let yf = y as f64;
    let muf = *mu.numer() as f64 / *mu.denom() as f64;
    let lo = muf * yf;
    let cf = c.to_f64();
    let tau = std::f64::consts::TAU;
    let mut sum = Complex64::new(0.0, 0.0);
    let n_start = lo.floor() as u64 + 1;
    for n in n_start..=y {
        if (n as f64) <= lo || n % d != a % d {
            continue;
        }
        let w = match weights {
            EWeights::VonMangoldt => table.von_mangoldt(n)?,
            EWeights::PrimesOnly => {
                if n >= 2 && table.is_prime(n) {
                    (n as f64).ln()
                } else {
                    0.0
                }
            }
        };
        if w == 0.0 {
            continue;
        }
        if t == 0.0 {
            sum.re += w;
        } else {
            let phase = (tau * t * (n as f64).powf(cf)) % tau;
            sum += Complex64::new(phase.cos(), phase.sin()) * w;
        }
    }
    let phi = table.euler_phi(d)? as f64;
    let integral = eval_i(t, c, (lo, yf), 1e-8)?;
    Ok(sum - integral / phi)
}

/// Aggregate |E(X, t, d, a)| maximized over residues, summed over d <= d_max.
/// Report-only diagnostic; y is fixed at X.
pub struct BvAggregate {
    pub d_max: u64,
    pub terms: u64,
    pub total: f64,
    pub worst_d: u64,
    pub worst_abs: f64,
}

pub fn bv_aggregate(
    table: &PrimeTable,
    x: u64,
    t: f64,
    mu: MuRatio,
    c: &RationalExponent,
    d_max: u64,
) -> Result<BvAggregate> {
    if (d_max as u128) * (x as u128) > 2_000_000_000 {
        return Err(Error::Resource(format!(
            "bv aggregate cost d_max * X = {} exceeds 2e9",
            (d_max as u128) * (x as u128)
        )));
    }
    let mut total = 0.0;
    let mut terms = 0u64;
    let mut worst = (0u64, 0.0f64);
    for d in 1..=d_max {
        let mut best = 0.0f64;
        let residues: Vec<u64> = if d == 1 {
            vec![0]
        } else {
            (1..d).filter(|a| a.gcd(&d) == 1).collect()
        };
        for a in residues {
            let v = eval_e(table, x, t, d, a, mu, c, EWeights::VonMangoldt)?.norm();
            best = best.max(v);
        }
        total += best;
        terms += 1;
        if best > worst.1 {
            worst = (d, best);
        }
    }
    Ok(BvAggregate { d_max, terms, total, worst_d: worst.0, worst_abs: worst.1 })
}

/// Exact masses per frequency m = [p^c]: mass = sum of fixed logs, count.
pub struct FrequencyMass {
    entries: Vec<(u64, u64, u64)>, // (m, mass_fixed, count)
}

impl FrequencyMass {
    pub fn entries(&self) -> &[(u64, u64, u64)] {
        &self.entries
    }

    /// Total fixed-point mass (the Chebyshev sum of the class).
    pub fn total_fixed(&self) -> u128 {
        self.entries.iter().map(|&(_, w, _)| w as u128).sum()
    }

    pub fn total_count(&self) -> u64 {
        self.entries.iter().map(|&(_, _, c)| c).sum()
    }

    /// S(t) regrouped over distinct frequencies.
    pub fn eval(&self, t: &TValue) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for &(m, w, _) in &self.entries {
            sum += e_of(t.phase_times(m)) * (w as f64 * W_SCALE);
        }
        sum
    }

    /// Exact Parseval norm: int_0^1 |S|^2 = sum_m mass(m)^2 (frequencies
    /// are integers, so distinct frequencies are orthogonal).
    pub fn parseval_fixed(&self) -> u128 {
        self.entries.iter().map(|&(_, w, _)| (w as u128) * (w as u128)).sum()
    }

    pub fn parseval(&self) -> f64 {
        self.parseval_fixed() as f64 * W_SCALE * W_SCALE
    }
}

/// Group the class {p in (lo, hi], p = l (mod d)} by m = [p^c].
pub fn frequency_mass(
    table: &PrimeTable,
    c: &RationalExponent,
    l: u64,
    d: u64,
    j: (f64, f64),
) -> Result<FrequencyMass> {
    if d == 0 || l.gcd(&d) != 1 {
        return Err(Error::Domain(format!(
            "frequency_mass needs gcd(l, d) = 1, got l = {l}, d = {d}"
        )));
    }
    let mut entries: Vec<(u64, u64, u64)> = Vec::new();
    for &p in primes_in_real(table, j.0, j.1) {
        if p % d != l % d {
            continue;
        }
        let m = floor_pow(p, c)?;
        let w = fixed_log(p).0 as u64;
        match entries.last_mut() {
            Some(e) if e.0 == m => {
                e.1 += w;
                e.2 += 1;
            }
            _ => entries.push((m, w, 1)),
        }
    }
    Ok(FrequencyMass { entries })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    /// Node t as an exact rational j/grid.
    pub t: String,
    pub abs: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub params: ParamSet,
    pub grid: u32,
    pub node_lo: u64,
    pub node_hi: u64,
    pub max_abs: f64,
    /// argmax node as j/grid.
    pub argmax_num: u64,
    /// max |S| divided by X^(13993/15276).
    pub normalized: f64,
    /// Golden-section refinement around the grid argmax (advisory).
    pub refined_t: f64,
    pub refined_abs: f64,
    #[serde(skip)]
    pub rows: Vec<ScanRow>,
}

/// Scan |S(t)| over rational nodes j/grid in the minor-arc window
/// [Delta, 1 - Delta], S over the dyadic range (X/2, X].
pub fn minor_arc_scan(
    table: &PrimeTable,
    c: &RationalExponent,
    x: u64,
    grid: u32,
) -> Result<ScanResult> {
    if grid < 8 {
        return Err(Error::Config("scan grid must have at least 8 nodes".into()));
    }
    if x > table.limit() {
        return Err(Error::Config(format!("X = {x} above sieve limit {}", table.limit())));
    }
    let params = ParamSet::new(x as f64, *c, ParamSet::DEFAULT_A)?;
    let delta = params.delta;
    let fm = frequency_mass(table, c, 1, 1, (x as f64 / 2.0, x as f64))?;
    let g = grid as u64;
    let node_lo = (delta * g as f64).ceil() as u64;
    let node_hi = ((1.0 - delta) * g as f64).floor() as u64;
    if node_lo >= node_hi {
        return Err(Error::Config(format!(
            "empty minor-arc window at X = {x}: Delta = {delta}"
        )));
    }
    // precomputed roots of unity for exact phases (j m mod grid)/grid
    let tau = std::f64::consts::TAU;
    let e_table: Vec<Complex64> = (0..g)
        .map(|k| {
            let a = tau * (k as f64) / (g as f64);
            Complex64::new(a.cos(), a.sin())
        })
        .collect();
    // parallel over nodes; the reduction (max and rows) is by node index
    let rows: Vec<ScanRow> = (node_lo..=node_hi)
        .into_par_iter()
        .map(|jn| {
            let mut sum = Complex64::new(0.0, 0.0);
            for &(m, w, _) in fm.entries() {
                let k = (jn * (m % g)) % g;
                sum += e_table[k as usize] * (w as f64 * W_SCALE);
            }
            ScanRow { t: format!("{jn}/{g}"), abs: sum.norm(), re: sum.re, im: sum.im }
        })
        .collect();
    let mut max_abs = -1.0f64;
    let mut argmax = node_lo;
    for (i, row) in rows.iter().enumerate() {
        if row.abs > max_abs {
            max_abs = row.abs;
            argmax = node_lo + i as u64;
        }
    }
    // advisory golden-section refinement on |S| around the grid argmax
    let eval_abs = |t: f64| fm.eval(&TValue::Real(t)).norm();
    let (mut a, mut b) = (
        (argmax as f64 - 1.0) / g as f64,
        (argmax as f64 + 1.0) / g as f64,
    );
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval_abs(x1);
    let mut f2 = eval_abs(x2);
    for _ in 0..20 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval_abs(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval_abs(x1);
        }
    }
    let (refined_t, refined_abs) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    let normalized = max_abs / (x as f64).powf(13993.0 / 15276.0);
    Ok(ScanResult {
        params,
        grid,
        node_lo,
        node_hi,
        max_abs,
        argmax_num: argmax,
        normalized,
        refined_t,
        refined_abs,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2120() -> RationalExponent {
        RationalExponent::new(21, 20).unwrap()
    }

    fn c1() -> RationalExponent {
        RationalExponent::new(1, 1).unwrap()
    }

    fn table(limit: u64) -> PrimeTable {
        PrimeTable::sieve(limit).unwrap()
    }

    #[test]
    fn s_at_zero_is_theta_sum() {
        let pt = table(1000);
        let s = eval_s(&pt, &TValue::zero(), &c2120(), 1, 1, (0.0, 1000.0)).unwrap();
        let fm = frequency_mass(&pt, &c2120(), 1, 1, (0.0, 1000.0)).unwrap();
        assert_eq!(s.im, 0.0);
        let theta = fm.total_fixed() as f64 * W_SCALE;
        assert!((s.re - theta).abs() < 1e-9);
        // integer t gives the same value: frequencies are integers
        let s1 = eval_s(&pt, &TValue::rational(1, 1), &c2120(), 1, 1, (0.0, 1000.0)).unwrap();
        assert_eq!(s1.re, s.re);
        assert_eq!(s1.im, 0.0);
    }

    #[test]
    fn s_regrouped_oracle() {
        let pt = table(1000);
        let t = TValue::Real(0.37);
        let direct = eval_s(&pt, &t, &c2120(), 1, 1, (0.0, 1000.0)).unwrap();
        let fm = frequency_mass(&pt, &c2120(), 1, 1, (0.0, 1000.0)).unwrap();
        let regrouped = fm.eval(&t);
        assert!((direct - regrouped).norm() < 1e-9);
    }

    #[test]
    fn s_conjugate_symmetry_and_periodicity() {
        let pt = table(2000);
        let c = c2120();
        let plus = eval_s(&pt, &TValue::rational(37, 4096), &c, 1, 1, (0.0, 2000.0)).unwrap();
        let minus = eval_s(&pt, &TValue::rational(-37, 4096), &c, 1, 1, (0.0, 2000.0)).unwrap();
        assert!((plus.conj() - minus).norm() < 1e-12);
        let shifted =
            eval_s(&pt, &TValue::rational(37 + 4096, 4096), &c, 1, 1, (0.0, 2000.0)).unwrap();
        assert_eq!(plus, shifted); // exact rational phase reduction
    }

    #[test]
    fn s_triangle_bound() {
        let pt = table(2000);
        let c = c2120();
        let s0 = eval_s(&pt, &TValue::zero(), &c, 1, 1, (1000.0, 2000.0)).unwrap();
        for k in 1..40u64 {
            let t = TValue::rational(k as i64, 41);
            let s = eval_s(&pt, &t, &c, 1, 1, (1000.0, 2000.0)).unwrap();
            assert!(s.norm() <= s0.re + 1e-9);
        }
    }

    #[test]
    fn s_progression_classes_partition() {
        let pt = table(1000);
        let c = c2120();
        let whole = eval_s(&pt, &TValue::zero(), &c, 1, 1, (4.0, 1000.0)).unwrap();
        let mut split = Complex64::new(0.0, 0.0);
        for l in [1u64, 3] {
            split += eval_s(&pt, &TValue::zero(), &c, l, 4, (4.0, 1000.0)).unwrap();
        }
        assert!((whole - split).norm() < 1e-9);
        assert!(eval_s(&pt, &TValue::zero(), &c, 2, 4, (0.0, 1000.0)).is_err());
    }

    #[test]
    fn s_bar_matches_s_at_zero_and_tracks_nearby() {
        let pt = table(10_000);
        let c = c2120();
        let j = (5000.0, 10_000.0);
        let s0 = eval_s(&pt, &TValue::zero(), &c, 1, 1, j).unwrap();
        let sb0 = eval_s_bar(&pt, &TValue::zero(), &c, 1, 1, j).unwrap();
        assert_eq!(s0, sb0);
        // |S - S_bar| <= 2 pi |t| * theta mass since 0 <= p^c - [p^c] < 1
        let params = ParamSet::new(10_000.0, c, ParamSet::DEFAULT_A).unwrap();
        let t = TValue::Real(params.delta);
        let s = eval_s(&pt, &t, &c, 1, 1, j).unwrap();
        let sb = eval_s_bar(&pt, &t, &c, 1, 1, j).unwrap();
        let theta = s0.re;
        assert!((s - sb).norm() <= std::f64::consts::TAU * params.delta * theta + 1e-9);
    }

    #[test]
    fn i_at_zero_and_closed_form() {
        let c = c1();
        let v = eval_i(0.0, &c, (10.0, 250.0), 1e-10).unwrap();
        assert!((v.re - 240.0).abs() < 1e-9 && v.im.abs() < 1e-12);
        // c = 1, J = (0, X]: I(t) = (e(tX) - 1) / (2 pi i t)
        let (t, x) = (0.013, 500.0);
        let v = eval_i(t, &c, (0.0, x), 1e-10).unwrap();
        let closed = (e_of((t * x).fract()) - Complex64::new(1.0, 0.0))
            / Complex64::new(0.0, std::f64::consts::TAU * t);
        assert!((v - closed).norm() < 1e-7, "{v} vs {closed}");
    }

    #[test]
    fn i_refinement_oracle_and_decay() {
        let c = c2120();
        let x = 10_000.0;
        let params = ParamSet::new(x, c, ParamSet::DEFAULT_A).unwrap();
        let t = params.delta;
        let coarse = eval_i(t, &c, (x / 2.0, x), 1e-8).unwrap();
        let fine = eval_i(t, &c, (x / 2.0, x), 1e-10).unwrap();
        assert!((coarse - fine).norm() <= 1e-8 * x);
        let cst = decay_constant(coarse, t, &c, x);
        assert!(cst.is_finite() && cst <= 2.0, "decay constant {cst}");
    }

    #[test]
    fn c_h_examples_and_bound() {
        for h in [-3i64, -1, 1, 2, 10] {
            let v = coeff_c_h(0.0, h).unwrap();
            assert!(v.norm() < 1e-15);
        }
        assert!(coeff_c_h(0.0, 0).is_err());
        let v = coeff_c_h(0.5, 0).unwrap();
        let expected = Complex64::new(0.0, -2.0 / std::f64::consts::PI);
        assert!((v - expected).norm() < 1e-15);
        for h in -1000i64..=1000 {
            let v = coeff_c_h(0.25, h).unwrap();
            let bound = 1.0 / (std::f64::consts::PI * (h as f64 + 0.25).abs());
            assert!(v.norm() <= bound + 1e-15);
        }
    }

    #[test]
    fn buriev_degenerate_and_decreasing() {
        // x = 0: all coefficients vanish, residual exactly 1
        let (r, _) = buriev_residual(0.0, 0.3, 10).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let (r, b) = buriev_residual(1.0 / 3.0, 0.5, 100).unwrap();
        assert!(r <= 3.0 * b, "residual {r} vs bound {b}");
        let y = std::f64::consts::SQRT_2 - 1.0;
        let mut last = f64::INFINITY;
        for h in [10u32, 100, 1000] {
            let (r, b) = buriev_residual(1.0 / 3.0, y, h).unwrap();
            assert!(r <= 3.0 * b);
            assert!(r < last, "residual not decreasing at H = {h}");
            last = r;
        }
        assert!(buriev_residual(0.1, 0.5, 2).is_err());
    }

    #[test]
    fn k_empty_and_regrouping_oracle() {
        let pt = table(10_000);
        let c = c2120();
        let v = eval_k(&pt, &TValue::zero(), &c, 1000, 1.5).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
        // the literal D at X = 1000 is far below 2
        let params = ParamSet::new(1000.0, c, ParamSet::DEFAULT_A).unwrap();
        assert!(params.d < 2.0);
        // t = 0, D = 30: independent double loop over (m, p) classes
        let x = 10_000u64;
        let d_cap = 30.0;
        let got = eval_k(&pt, &TValue::zero(), &c, x, d_cap).unwrap();
        let mut expected = 0.0f64;
        let xf = x as f64;
        let mut m = 2u64;
        while (m as f64) < d_cap {
            let lo = (1.0 + m as f64 * xf / d_cap).max(xf / 2.0);
            for &p in pt.primes_in(lo.floor() as u64, x) {
                if (p as f64) <= lo {
                    continue;
                }
                let w = fixed_log(p).0 as f64 * W_SCALE;
                if p % (4 * m) == (1 + m) % (4 * m) {
                    expected += w;
                }
                if p % (4 * m) == (3 * m + 1) % (4 * m) {
                    expected -= w;
                }
            }
            m += 2;
        }
        assert!((got.re - expected).abs() < 1e-9 && got.im.abs() < 1e-12);
    }

    #[test]
    fn e_discrepancy_collapses_at_zero() {
        let pt = PrimeTable::sieve_with_spf(100_000).unwrap();
        let y = 100_000u64;
        let c = c2120();
        // t = 0, d = 1: psi(y) - psi(y/2) - y/2
        let v = eval_e(&pt, y, 0.0, 1, 0, MuRatio::new(1, 2), &c, EWeights::VonMangoldt).unwrap();
        let mut psi_diff = 0.0;
        for n in (y / 2 + 1)..=y {
            psi_diff += pt.von_mangoldt(n).unwrap();
        }
        let expected = psi_diff - y as f64 / 2.0;
        assert!((v.re - expected).abs() < 1e-6);
        assert!(v.im.abs() < 1e-9);
        assert!(eval_e(&pt, y, 0.0, 4, 2, MuRatio::new(1, 2), &c, EWeights::VonMangoldt).is_err());
    }

    #[test]
    fn bv_aggregate_reports_finite_totals() {
        let pt = PrimeTable::sieve_with_spf(20_000).unwrap();
        let c = c2120();
        let params = ParamSet::new(20_000.0, c, ParamSet::DEFAULT_A).unwrap();
        let agg =
            bv_aggregate(&pt, 20_000, params.delta / 2.0, MuRatio::new(1, 2), &c, 8).unwrap();
        assert_eq!(agg.terms, 8);
        assert!(agg.total.is_finite() && agg.total > 0.0);
        assert!(agg.worst_d >= 1 && agg.worst_abs <= agg.total);
        // the literal modulus cap of the progression lemma is below 1 at
        // desk scale, leaving an empty sum
        let literal = (20_000f64).sqrt() / (20_000f64).ln().powf(16.0);
        assert!(literal < 1.0);
        assert!(bv_aggregate(&pt, 20_000, 0.0, MuRatio::new(1, 2), &c, 10_000_000).is_err());
    }

    #[test]
    fn parseval_exact_small_classes() {
        let pt = table(100);
        let c = c2120();
        // single prime class: (log p)^2 in fixed point
        let fm = frequency_mass(&pt, &c, 1, 1, (96.0, 98.0)).unwrap();
        assert_eq!(fm.entries().len(), 1);
        let w = fixed_log(97).0 as u128;
        assert_eq!(fm.parseval_fixed(), w * w);
        // two primes with distinct m: sum of squared weights
        let fm = frequency_mass(&pt, &c, 1, 1, (88.0, 98.0)).unwrap();
        let w89 = fixed_log(89).0 as u128;
        let w97 = fixed_log(97).0 as u128;
        assert_eq!(fm.parseval_fixed(), w89 * w89 + w97 * w97);
    }

    #[test]
    fn parseval_matches_quadrature() {
        let pt = table(500);
        let c = c2120();
        let fm = frequency_mass(&pt, &c, 1, 1, (250.0, 500.0)).unwrap();
        let exact = fm.parseval();
        // trapezoid on 2^14 nodes; frequency differences stay far below 2^14
        let nodes = 1u64 << 14;
        let mut quad = 0.0;
        for jn in 0..nodes {
            let t = TValue::rational(jn as i64, nodes);
            quad += fm.eval(&t).norm_sqr();
        }
        quad /= nodes as f64;
        assert!((quad - exact).abs() <= 1e-6 * exact, "quad {quad} vs exact {exact}");
    }

    #[test]
    fn scan_finds_half_for_linear_exponent() {
        let pt = table(100);
        let res = minor_arc_scan(&pt, &c1(), 100, 4096).unwrap();
        // at c = 1 every phase at t = 1/2 is -1, so |S(1/2)| equals the
        // theta mass and the grid max sits exactly there
        assert_eq!(res.argmax_num, 2048);
        let fm = frequency_mass(&pt, &c1(), 1, 1, (50.0, 100.0)).unwrap();
        let theta = fm.total_fixed() as f64 * W_SCALE;
        assert!((res.max_abs - theta).abs() < 1e-9);
        assert!(res.refined_abs >= res.max_abs - 1e-9);
        assert_eq!(res.rows.len(), (res.node_hi - res.node_lo + 1) as usize);
    }

    #[test]
    fn scan_rows_are_deterministic() {
        let pt = table(1000);
        let res = minor_arc_scan(&pt, &c2120(), 1000, 512).unwrap();
        let again = minor_arc_scan(&pt, &c2120(), 1000, 512).unwrap();
        for (a, b) in res.rows.iter().zip(again.rows.iter()) {
            assert_eq!(a.t, b.t);
            assert_eq!(a.abs.to_bits(), b.abs.to_bits());
        }
    }
}
