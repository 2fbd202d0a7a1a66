//! Exact counting of `[p1^c] + [p2^c] + [p3^c] = N` and its binary
//! analogue over primes in `(mu X, X]`, with a meet-in-the-middle pair-sum
//! histogram and a direct enumeration oracle.
//!
//! All weighted counts are exact integers: log weights are quantized at
//! scale 2^24, pair masses carry scale 2^48 in u128 accumulators, triple
//! weights scale 2^72. Overflow analysis for X <= 10^7: a weight satisfies
//! w = round(2^24 ln p) < 2^28.01, so a pair product w2*w3 < 2^56.1 fits
//! u64 and the total mass (sum w)^2 < (2^19.3 * 2^28.01)^2 < 2^94.7 fits
//! u128. A Gamma(N) query is bounded by (sum_p1 r(p1-1) w1) * max_s mass[s]
//! < 2^50 * 2^73 < 2^123, also within u128; the query path still uses
//! checked arithmetic and reports a contract violation on overflow.

use std::ops::Range;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{fixed_log, floor_pow, r2_divisor, PrimeTable, RationalExponent};
use crate::error::{Error, Result};
use crate::hiprec::Real;

/// Scale of pair masses: (2^24)^2.
pub const PAIR_SCALE_BITS: u32 = 48;
/// Scale of weighted triple counts: (2^24)^3.
pub const TRIPLE_SCALE_BITS: u32 = 72;
/// Default byte budget for histogram construction.
pub const DEFAULT_MEMORY_BUDGET_BYTES: u64 = 3 << 30;

/// Lower range fraction mu in [0, 1); primes run over (mu X, X].
pub type MuRatio = Ratio<u64>;

/// Weighting of the first prime in ternary counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// r(p1 - 1) log p1 log p2 log p3, restricted to p1 = x^2 + y^2 + 1.
    LinnikRLog,
    /// log p1 log p2 log p3 over all prime triples.
    Log,
    /// plain solution count.
    Unit,
}

impl WeightMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeightMode::LinnikRLog => "linnik_r_log",
            WeightMode::Log => "log",
            WeightMode::Unit => "unit",
        }
    }

    pub fn scale_bits(&self) -> u32 {
        match self {
            WeightMode::Unit => 0,
            _ => TRIPLE_SCALE_BITS,
        }
    }
}

impl std::str::FromStr for WeightMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<WeightMode> {
        match s.to_ascii_lowercase().as_str() {
            "linnik" | "linnik_r_log" => Ok(WeightMode::LinnikRLog),
            "log" => Ok(WeightMode::Log),
            "unit" => Ok(WeightMode::Unit),
            other => Err(Error::Config(format!("unknown weight mode {other:?}"))),
        }
    }
}

/// Per-prime data for p in (mu X, X]: floor power m = [p^c], quantized log
/// weight w, and r = r2(p - 1).
pub struct ValueTable {
    x: u64,
    c: RationalExponent,
    mu: MuRatio,
    ps: Vec<u64>,
    ms: Vec<u64>,
    ws: Vec<u64>,
    rs: Vec<u32>,
}

impl ValueTable {
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn c(&self) -> RationalExponent {
        self.c
    }

    pub fn mu(&self) -> MuRatio {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.ps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ps.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.ps
    }

    pub fn floors(&self) -> &[u64] {
        &self.ms
    }

    pub fn weights(&self) -> &[u64] {
        &self.ws
    }

    pub fn linnik_r(&self) -> &[u32] {
        &self.rs
    }

    /// Sum of quantized log weights.
    pub fn weight_sum(&self) -> u128 {
        self.ws.iter().map(|&w| w as u128).sum()
    }

    fn params_match(&self, other: &PairSumHistogram) -> bool {
        self.x == other.x && self.c == other.c && self.mu == other.mu
    }
}

/// Build the per-prime table for primes in (mu X, X].
pub fn build_value_table(
    table: &PrimeTable,
    x: u64,
    c: RationalExponent,
    mu: MuRatio,
) -> Result<ValueTable> {
    if x > table.limit() {
        return Err(Error::Config(format!(
            "X = {x} exceeds sieve limit {}",
            table.limit()
        )));
    }
    if mu >= MuRatio::new(1, 1) {
        return Err(Error::Config(format!("mu = {mu} must lie in [0, 1)")));
    }
    let mut ps = Vec::new();
    let mut ms = Vec::new();
    let mut ws = Vec::new();
    let mut rs = Vec::new();
    let (mn, md) = (*mu.numer(), *mu.denom());
    for &p in table.primes_in(0, x) {
        // p > mu X exactly: p * md > mn * x
        if (p as u128) * (md as u128) <= (mn as u128) * (x as u128) {
            continue;
        }
        let m = floor_pow(p, &c)?;
        let w = fixed_log(p).0 as u64;
        let r = r2_divisor(table, p - 1)? as u32;
        debug_assert!(ms.last().map_or(true, |&prev| prev <= m));
        ps.push(p);
        ms.push(m);
        ws.push(w);
        rs.push(r);
    }
    Ok(ValueTable { x, c, mu, ps, ms, ws, rs })
}

/// Flat histogram of pair sums s = m2 + m3 over ordered prime pairs, with
/// exact fixed-point masses (scale 2^48) and plain counts.
pub struct PairSumHistogram {
    offset: u64,
    mass: Vec<u128>,
    count: Vec<u64>,
    x: u64,
    c: RationalExponent,
    mu: MuRatio,
}

impl PairSumHistogram {
    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn mass_at(&self, s: u64) -> u128 {
        match self.index_of(s) {
            Some(i) => self.mass[i],
            None => 0,
        }
    }

    pub fn count_at(&self, s: u64) -> u64 {
        match self.index_of(s) {
            Some(i) => self.count[i],
            None => 0,
        }
    }

    fn index_of(&self, s: u64) -> Option<usize> {
        if s < self.offset {
            return None;
        }
        let i = (s - self.offset) as usize;
        if i < self.mass.len() {
            Some(i)
        } else {
            None
        }
    }

    pub fn total_mass(&self) -> u128 {
        self.mass.iter().sum()
    }

    pub fn total_count(&self) -> u128 {
        self.count.iter().map(|&c| c as u128).sum()
    }

    /// Entrywise merge of a histogram built over a disjoint p2-subrange.
    pub fn merge(&mut self, other: &PairSumHistogram) -> Result<()> {
        if self.offset != other.offset
            || self.mass.len() != other.mass.len()
            || self.x != other.x
            || self.c != other.c
            || self.mu != other.mu
        {
            return Err(Error::Contract(
                "histogram merge with mismatched layout or parameters".into(),
            ));
        }
        for (a, b) in self.mass.iter_mut().zip(other.mass.iter()) {
            *a += b;
        }
        for (a, b) in self.count.iter_mut().zip(other.count.iter()) {
            *a += b;
        }
        Ok(())
    }
}

fn histogram_layout(table: &ValueTable) -> (u64, usize) {
    if table.is_empty() {
        return (0, 0);
    }
    let m_min = table.ms[0];
    let m_max = *table.ms.last().unwrap();
    let offset = 2 * m_min;
    let len = (2 * m_max - offset + 1) as usize;
    (offset, len)
}

fn fill_block(table: &ValueTable, block: Range<usize>, offset: u64, len: usize) -> PairSumHistogram {
    let mut mass = vec![0u128; len];
    let mut count = vec![0u64; len];
    let ms = &table.ms;
    let ws = &table.ws;
    for i2 in block {
        let m2 = ms[i2];
        let w2 = ws[i2];
        for (&m3, &w3) in ms.iter().zip(ws.iter()) {
            let idx = (m2 + m3 - offset) as usize;
            mass[idx] += (w2 * w3) as u128;
            count[idx] += 1;
        }
    }
    PairSumHistogram { offset, mass, count, x: table.x, c: table.c, mu: table.mu }
}

/// Histogram over a p2-index subrange (p3 runs over the whole table).
/// Merging the histograms of a partition of `0..table.len()` reproduces the
/// full histogram exactly.
pub fn pair_histogram_over(table: &ValueTable, p2_range: Range<usize>) -> PairSumHistogram {
    let (offset, len) = histogram_layout(table);
    fill_block(table, p2_range, offset, len)
}

/// Full pair-sum histogram, parallelized over disjoint p2-blocks with an
/// entrywise (exact, order-independent) merge.
pub fn pair_histogram(table: &ValueTable, budget_bytes: Option<u64>) -> Result<PairSumHistogram> {
    let budget = budget_bytes.unwrap_or(DEFAULT_MEMORY_BUDGET_BYTES);
    let (offset, len) = histogram_layout(table);
    let per_copy = 24 * len as u64; // u128 mass + u64 count per entry
    if per_copy > budget {
        return Err(Error::Resource(format!(
            "pair histogram needs {per_copy} bytes for {len} entries; budget is {budget} bytes"
        )));
    }
    let n = table.len();
    let threads = rayon::current_num_threads().max(1);
    let max_parts = (budget / per_copy.max(1)).saturating_sub(1).max(1);
    let parts = threads.min(max_parts as usize).min(n.max(1));
    if parts <= 1 {
        return Ok(fill_block(table, 0..n, offset, len));
    }
    let chunk = n.div_ceil(parts);
    let partials: Vec<PairSumHistogram> = (0..parts)
        .into_par_iter()
        .map(|k| {
            let lo = k * chunk;
            let hi = ((k + 1) * chunk).min(n);
            fill_block(table, lo..hi, offset, len)
        })
        .collect();
    let mut iter = partials.into_iter();
    let mut acc = iter.next().expect("at least one partial");
    for part in iter {
        acc.merge(&part)?;
    }
    Ok(acc)
}

/// Weighted ternary count for a single target N.
#[derive(Debug, Clone, Serialize)]
pub struct TernaryCountReport {
    pub n: u64,
    /// Fixed-point Gamma(N); scale 2^scale_bits.
    pub gamma_fixed: u128,
    pub scale_bits: u32,
    /// Number of ordered solution triples with mode-admissible p1.
    pub plain_count: u64,
    pub x: u64,
    pub c: String,
    pub mu: String,
    pub mode: WeightMode,
}

fn weight1(mode: WeightMode, w: u64, r: u32) -> Option<u128> {
    match mode {
        WeightMode::LinnikRLog => {
            if r == 0 {
                None
            } else {
                Some(w as u128 * r as u128)
            }
        }
        WeightMode::Log => Some(w as u128),
        WeightMode::Unit => Some(1),
    }
}

/// Gamma(N) from the pair histogram: sum over admissible p1 of
/// weight1(p1) * mass[N - m1] (or count for unit weights).
pub fn gamma_of_n(
    n: u64,
    hist: &PairSumHistogram,
    table: &ValueTable,
    mode: WeightMode,
) -> Result<TernaryCountReport> {
    if !table.params_match(hist) {
        return Err(Error::Contract(
            "gamma_of_n: histogram and value table built with different (X, c, mu)".into(),
        ));
    }
    let mut gamma: u128 = 0;
    let mut plain: u64 = 0;
    for i1 in 0..table.len() {
        let m1 = table.ms[i1];
        if m1 > n {
            break; // ms ascending
        }
        let Some(w1) = weight1(mode, table.ws[i1], table.rs[i1]) else {
            continue;
        };
        let s = n - m1;
        let term = match mode {
            WeightMode::Unit => hist.count_at(s) as u128,
            _ => w1
                .checked_mul(hist.mass_at(s))
                .ok_or_else(|| Error::Contract("gamma accumulator overflow".into()))?,
        };
        gamma = gamma
            .checked_add(term)
            .ok_or_else(|| Error::Contract("gamma accumulator overflow".into()))?;
        plain += hist.count_at(s);
    }
    Ok(TernaryCountReport {
        n,
        gamma_fixed: gamma,
        scale_bits: mode.scale_bits(),
        plain_count: plain,
        x: table.x,
        c: table.c.to_string(),
        mu: table.mu.to_string(),
        mode,
    })
}

/// Exact count (and weighted count, scale 2^48) of ordered prime pairs with
/// [p1^c] + [p2^c] = N0, by binary search over the sorted floor values.
pub fn binary_count(n0: u64, table: &ValueTable) -> (u64, u128) {
    let ms = &table.ms;
    let ws = &table.ws;
    // prefix sums of weights for O(log n) run sums
    let mut prefix: Vec<u128> = Vec::with_capacity(ws.len() + 1);
    prefix.push(0);
    for &w in ws {
        prefix.push(prefix.last().unwrap() + w as u128);
    }
    let mut count = 0u64;
    let mut weighted = 0u128;
    for i1 in 0..ms.len() {
        let m1 = ms[i1];
        if m1 > n0 {
            break;
        }
        let target = n0 - m1;
        let lo = ms.partition_point(|&m| m < target);
        let hi = ms.partition_point(|&m| m <= target);
        if lo < hi {
            count += (hi - lo) as u64;
            weighted += ws[i1] as u128 * (prefix[hi] - prefix[lo]);
        }
    }
    (count, weighted)
}

/// Direct enumeration oracle with the same contract as [`gamma_of_n`].
///
/// Loops over (p1, p2) and resolves p3 by an equal-range scan on the sorted
/// floor values; refuses ranges with more than 5000 primes.
pub fn brute_force_ternary(
    table: &PrimeTable,
    n: u64,
    x: u64,
    c: RationalExponent,
    mu: MuRatio,
    mode: WeightMode,
) -> Result<TernaryCountReport> {
    let vt = build_value_table(table, x, c, mu)?;
    if vt.len() > 5000 {
        return Err(Error::Resource(format!(
            "brute force limited to 5000 primes, range has {}",
            vt.len()
        )));
    }
    let ms = &vt.ms;
    let ws = &vt.ws;
    let m_min = ms.first().copied().unwrap_or(0);
    let mut gamma: u128 = 0;
    let mut plain: u64 = 0;
    for i1 in 0..vt.len() {
        let m1 = ms[i1];
        if m1 + 2 * m_min > n {
            break;
        }
        let Some(w1) = weight1(mode, ws[i1], vt.rs[i1]) else {
            continue;
        };
        for i2 in 0..vt.len() {
            let m12 = m1 + ms[i2];
            if m12 + m_min > n {
                break;
            }
            let target = n - m12;
            let lo = ms.partition_point(|&m| m < target);
            let hi = ms.partition_point(|&m| m <= target);
            for i3 in lo..hi {
                let pair = (ws[i2] * ws[i3]) as u128;
                let term = match mode {
                    WeightMode::Unit => 1u128,
                    _ => w1 * pair,
                };
                gamma += term;
            }
            plain += (hi - lo) as u64;
        }
    }
    Ok(TernaryCountReport {
        n,
        gamma_fixed: gamma,
        scale_bits: mode.scale_bits(),
        plain_count: plain,
        x,
        c: c.to_string(),
        mu: mu.to_string(),
        mode,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    Feasible,
    Marginal,
    Infeasible,
}

/// Range feasibility of the ternary equation for primes in (mu X, X]:
/// slack = 1 - 3 mu^c. Non-positive slack means every triple sums past N
/// (up to O(1) floor slack), so solutions are impossible for large N.
pub struct FeasibilityReport {
    pub status: Feasibility,
    pub slack: Real,
}

pub fn feasibility(c: RationalExponent, mu: MuRatio) -> FeasibilityReport {
    let slack = if *mu.numer() == 0 {
        Real::one()
    } else {
        let mu_real = Real::from_ratio(
            &num_bigint::BigInt::from(*mu.numer()),
            &num_bigint::BigInt::from(*mu.denom()),
        );
        let c_real = Real::from_ratio_i64(c.num() as i64, c.den() as i64);
        let mu_pow_c = (&mu_real.ln() * &c_real).exp();
        &Real::one() - &mu_pow_c.mul_i64(3)
    };
    let eps = Real::from_ratio_i64(1, 1_000_000_000);
    let status = if slack.abs().cmp_value(&eps) == std::cmp::Ordering::Less {
        Feasibility::Marginal
    } else if slack.is_negative() {
        Feasibility::Infeasible
    } else {
        Feasibility::Feasible
    };
    FeasibilityReport { status, slack }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::verify_floor_pow;

    fn c_of(a: u64, b: u64) -> RationalExponent {
        RationalExponent::new(a, b).unwrap()
    }

    fn mu0() -> MuRatio {
        MuRatio::new(0, 1)
    }

    fn mu_half() -> MuRatio {
        MuRatio::new(1, 2)
    }

    #[test]
    fn value_table_small_ranges() {
        let pt = PrimeTable::sieve_with_spf(100).unwrap();
        let vt = build_value_table(&pt, 10, c_of(1, 1), mu0()).unwrap();
        assert_eq!(vt.primes(), &[2, 3, 5, 7]);
        assert_eq!(vt.floors(), &[2, 3, 5, 7]);
        let vt = build_value_table(&pt, 10, c_of(1, 1), mu_half()).unwrap();
        assert_eq!(vt.primes(), &[7]);
        assert!(build_value_table(&pt, 1000, c_of(1, 1), mu0()).is_err());
    }

    #[test]
    fn value_table_floors_are_certified() {
        let pt = PrimeTable::sieve_with_spf(1000).unwrap();
        let c = c_of(21, 20);
        let vt = build_value_table(&pt, 1000, c, mu0()).unwrap();
        for (i, &p) in vt.primes().iter().enumerate() {
            assert!(verify_floor_pow(p, &c, vt.floors()[i]));
            assert!(vt.weights()[i] > 0);
            if i > 0 {
                assert!(vt.primes()[i - 1] < p);
                assert!(vt.floors()[i - 1] <= vt.floors()[i]);
            }
            // the Linnik flag is exactly r > 0
            let linnik = crate::arith::is_linnik(&pt, p).unwrap();
            assert_eq!(linnik, vt.linnik_r()[i] > 0);
        }
    }

    #[test]
    fn unit_gamma_sweep_conserves_mass() {
        // summing the unit-weight counts over every reachable N recovers
        // (#p1 admitted) * (#primes)^2
        let pt = PrimeTable::sieve_with_spf(1000).unwrap();
        let vt = build_value_table(&pt, 1000, c_of(21, 20), mu0()).unwrap();
        let h = pair_histogram(&vt, None).unwrap();
        let m_lo = vt.floors()[0];
        let m_hi = *vt.floors().last().unwrap();
        let mut total: u128 = 0;
        for n in 3 * m_lo..=3 * m_hi {
            total += gamma_of_n(n, &h, &vt, WeightMode::Unit).unwrap().gamma_fixed;
        }
        let n_p = vt.len() as u128;
        assert_eq!(total, n_p * n_p * n_p);
    }

    #[test]
    fn tiny_histogram_counts() {
        let pt = PrimeTable::sieve_with_spf(10).unwrap();
        let vt = build_value_table(&pt, 3, c_of(1, 1), mu0()).unwrap();
        assert_eq!(vt.primes(), &[2, 3]);
        let h = pair_histogram(&vt, None).unwrap();
        assert_eq!(h.count_at(4), 1);
        assert_eq!(h.count_at(5), 2);
        assert_eq!(h.count_at(6), 1);
        assert_eq!(h.count_at(7), 0);
        let w2 = vt.weights()[0] as u128;
        let w3 = vt.weights()[1] as u128;
        assert_eq!(h.mass_at(4), w2 * w2);
        assert_eq!(h.mass_at(5), 2 * w2 * w3);
        assert_eq!(h.mass_at(6), w3 * w3);
    }

    #[test]
    fn total_mass_is_weight_sum_squared() {
        let pt = PrimeTable::sieve_with_spf(1000).unwrap();
        for c in [c_of(1, 1), c_of(21, 20)] {
            let vt = build_value_table(&pt, 1000, c, mu0()).unwrap();
            let h = pair_histogram(&vt, None).unwrap();
            let sw = vt.weight_sum();
            assert_eq!(h.total_mass(), sw * sw);
            assert_eq!(h.total_count(), (vt.len() as u128) * (vt.len() as u128));
        }
    }

    #[test]
    fn histogram_equals_naive_double_loop() {
        let pt = PrimeTable::sieve_with_spf(3000).unwrap();
        let c = c_of(21, 20);
        let vt = build_value_table(&pt, 3000, c, mu0()).unwrap();
        let h = pair_histogram(&vt, None).unwrap();
        // independent oracle: naive double loop into a map
        let mut map = std::collections::HashMap::<u64, (u128, u64)>::new();
        for (&m2, &w2) in vt.floors().iter().zip(vt.weights()) {
            for (&m3, &w3) in vt.floors().iter().zip(vt.weights()) {
                let e = map.entry(m2 + m3).or_insert((0, 0));
                e.0 += (w2 * w3) as u128;
                e.1 += 1;
            }
        }
        for (s, (mass, count)) in map {
            assert_eq!(h.mass_at(s), mass, "mass mismatch at s = {s}");
            assert_eq!(h.count_at(s), count, "count mismatch at s = {s}");
        }
    }

    #[test]
    fn partitioned_build_matches_whole() {
        let pt = PrimeTable::sieve_with_spf(2000).unwrap();
        let vt = build_value_table(&pt, 2000, c_of(21, 20), mu0()).unwrap();
        let whole = pair_histogram(&vt, None).unwrap();
        let n = vt.len();
        let cuts = [0, n / 4, n / 2, 3 * n / 4, n];
        let mut acc = pair_histogram_over(&vt, cuts[0]..cuts[1]);
        for w in cuts.windows(2).skip(1) {
            acc.merge(&pair_histogram_over(&vt, w[0]..w[1])).unwrap();
        }
        assert_eq!(acc.mass, whole.mass);
        assert_eq!(acc.count, whole.count);
    }

    #[test]
    fn gamma_matches_brute_force_small() {
        let pt = PrimeTable::sieve_with_spf(1000).unwrap();
        for c in [c_of(1, 1), c_of(21, 20)] {
            let vt = build_value_table(&pt, 1000, c, mu0()).unwrap();
            let h = pair_histogram(&vt, None).unwrap();
            for mode in [WeightMode::LinnikRLog, WeightMode::Log, WeightMode::Unit] {
                for n in (100..2200).step_by(97) {
                    let fast = gamma_of_n(n, &h, &vt, mode).unwrap();
                    let slow = brute_force_ternary(&pt, n, 1000, c, mu0(), mode).unwrap();
                    assert_eq!(fast.gamma_fixed, slow.gamma_fixed, "n={n} mode={mode:?}");
                    assert_eq!(fast.plain_count, slow.plain_count, "n={n} mode={mode:?}");
                }
            }
        }
    }

    #[test]
    fn diagonal_solution_has_unit_weight() {
        // N = 3 [p^c] for a Linnik prime p is counted with unit weights
        let pt = PrimeTable::sieve_with_spf(1000).unwrap();
        let c = c_of(21, 20);
        let vt = build_value_table(&pt, 1000, c, mu0()).unwrap();
        let h = pair_histogram(&vt, None).unwrap();
        let i = vt.linnik_r().iter().position(|&r| r > 0).unwrap();
        let n = 3 * vt.floors()[i];
        let rep = gamma_of_n(n, &h, &vt, WeightMode::Unit).unwrap();
        assert!(rep.gamma_fixed >= 1);
        assert!(rep.plain_count >= 1);
    }

    #[test]
    fn gamma_empty_below_minimum() {
        let pt = PrimeTable::sieve_with_spf(1000).unwrap();
        let c = c_of(21, 20);
        let vt = build_value_table(&pt, 1000, c, mu0()).unwrap();
        let h = pair_histogram(&vt, None).unwrap();
        let n = 3 * vt.floors()[0] - 1;
        let rep = gamma_of_n(n, &h, &vt, WeightMode::Log).unwrap();
        assert_eq!(rep.gamma_fixed, 0);
        assert_eq!(rep.plain_count, 0);
    }

    #[test]
    fn dyadic_range_is_empty_for_small_c() {
        // mu = 1/2, c = 21/20: every N <= X^c is unreachable
        let pt = PrimeTable::sieve_with_spf(5000).unwrap();
        let c = c_of(21, 20);
        let vt = build_value_table(&pt, 5000, c, mu_half()).unwrap();
        let h = pair_histogram(&vt, None).unwrap();
        let x_pow_c = floor_pow(5000, &c).unwrap();
        for n in (1..=x_pow_c).step_by(257) {
            let rep = gamma_of_n(n, &h, &vt, WeightMode::Log).unwrap();
            assert_eq!(rep.gamma_fixed, 0, "unexpected solution at N = {n}");
        }
        assert_eq!(feasibility(c, mu_half()).status, Feasibility::Infeasible);
    }

    #[test]
    fn binary_count_examples() {
        let pt = PrimeTable::sieve_with_spf(100).unwrap();
        let vt = build_value_table(&pt, 10, c_of(1, 1), mu0()).unwrap();
        assert_eq!(binary_count(4, &vt).0, 1); // (2,2)
        assert_eq!(binary_count(5, &vt).0, 2); // (2,3), (3,2)
        assert_eq!(binary_count(3, &vt).0, 0);
    }

    #[test]
    fn binary_mass_conservation() {
        let pt = PrimeTable::sieve_with_spf(10_000).unwrap();
        let c = c_of(21, 20);
        let vt = build_value_table(&pt, 10_000, c, mu0()).unwrap();
        let h = pair_histogram(&vt, None).unwrap();
        // conservation over all N0 through the histogram totals
        assert_eq!(h.total_count(), (vt.len() as u128) * (vt.len() as u128));
        // spot equality of the two binary-count routes
        for n0 in (h.offset()..h.offset() + h.len() as u64).step_by(613) {
            let (cnt, wt) = binary_count(n0, &vt);
            assert_eq!(cnt, h.count_at(n0));
            assert_eq!(wt, h.mass_at(n0));
        }
    }

    #[test]
    fn feasibility_examples() {
        let f = feasibility(c_of(21, 20), mu0());
        assert_eq!(f.status, Feasibility::Feasible);
        assert!((f.slack.to_f64() - 1.0).abs() < 1e-12);

        let f = feasibility(c_of(21, 20), mu_half());
        assert_eq!(f.status, Feasibility::Infeasible);
        assert!((f.slack.to_f64() + 0.44887).abs() < 1e-3);

        let f = feasibility(c_of(8, 5), mu_half());
        assert_eq!(f.status, Feasibility::Feasible);
        assert!(f.slack.to_f64() > 0.0103 && f.slack.to_f64() < 0.0104);
    }

    #[test]
    fn random_partitions_rebuild_the_histogram() {
        use proptest::prelude::*;
        let pt = PrimeTable::sieve_with_spf(600).unwrap();
        let vt = build_value_table(&pt, 600, c_of(21, 20), mu0()).unwrap();
        let whole = pair_histogram(&vt, None).unwrap();
        let n = vt.len();
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        runner
            .run(&proptest::collection::vec(0..=n, 0..6), |mut cuts| {
                cuts.push(0);
                cuts.push(n);
                cuts.sort_unstable();
                let mut acc = pair_histogram_over(&vt, cuts[0]..cuts[1]);
                for w in cuts.windows(2).skip(1) {
                    acc.merge(&pair_histogram_over(&vt, w[0]..w[1])).unwrap();
                }
                prop_assert_eq!(&acc.mass, &whole.mass);
                prop_assert_eq!(&acc.count, &whole.count);
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn gamma_contract_checks_parameters() {
        let pt = PrimeTable::sieve_with_spf(1000).unwrap();
        let vt1 = build_value_table(&pt, 1000, c_of(1, 1), mu0()).unwrap();
        let vt2 = build_value_table(&pt, 500, c_of(1, 1), mu0()).unwrap();
        let h = pair_histogram(&vt1, None).unwrap();
        assert!(gamma_of_n(100, &h, &vt2, WeightMode::Log).is_err());
    }

    #[test]
    fn brute_force_refuses_large_ranges() {
        let pt = PrimeTable::sieve_with_spf(100_000).unwrap();
        match brute_force_ternary(&pt, 1000, 100_000, c_of(21, 20), mu0(), WeightMode::Log) {
            Err(Error::Resource(msg)) => assert!(msg.contains("5000")),
            other => panic!("expected resource error, got {:?}", other.map(|r| r.n)),
        }
    }

    #[test]
    fn histogram_budget_guard() {
        let pt = PrimeTable::sieve_with_spf(10_000).unwrap();
        let vt = build_value_table(&pt, 10_000, c_of(21, 20), mu0()).unwrap();
        match pair_histogram(&vt, Some(1000)) {
            Err(Error::Resource(msg)) => assert!(msg.contains("budget")),
            other => panic!("expected resource error, got {:?}", other.map(|h| h.len())),
        }
    }
}
