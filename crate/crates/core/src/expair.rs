//! Exact-rational exponent-pair calculus and the affine-in-c inequality
//! system that pins the admissible exponent window.
//!
//! The A and B processes are the standard van der Corput transforms
//!   A(k, l) = (k/(2k+2), 1/2 + l/(2k+2)),   B(k, l) = (l - 1/2, k + 1/2),
//! applied right-to-left, so in a word like "BA^2B" the rightmost letter
//! acts on the seed first. That order reproduces
//! BABABA^2BA^3BA^2B(0,1) = (214/845, 199/338); the opposite convention
//! also appears in the literature, hence this note.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "a/b" or "a" with optional sign.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: {t:?}") };
    let (num_s, den_s) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad("bad rational numerator"))?;
    let den: BigInt = den_s.parse().map_err(|_| bad("bad rational denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Canonical "a/b" (or "a" for integers) rendering.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An admissible exponent pair (kappa, lambda).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPair {
    kappa: Rat,
    lambda: Rat,
}

impl ExponentPair {
    pub fn new(kappa: Rat, lambda: Rat) -> Result<ExponentPair> {
        let p = ExponentPair { kappa, lambda };
        if !p.is_admissible() {
            return Err(Error::Domain(format!("inadmissible exponent pair {p}")));
        }
        Ok(p)
    }

    /// The trivial pair (0, 1).
    pub fn seed() -> ExponentPair {
        ExponentPair { kappa: Rat::zero(), lambda: Rat::one() }
    }

    pub fn kappa(&self) -> &Rat {
        &self.kappa
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    /// 0 <= kappa <= 1/2 <= lambda <= 1.
    pub fn is_admissible(&self) -> bool {
        let half = rat(1, 2);
        !self.kappa.is_negative()
            && self.kappa <= half
            && self.lambda >= half
            && self.lambda <= Rat::one()
    }

    /// A-process: (k, l) -> (k/(2k+2), 1/2 + l/(2k+2)).
    pub fn process_a(&self) -> ExponentPair {
        let den = &(&self.kappa * &rat(2, 1)) + &rat(2, 1);
        let out = ExponentPair {
            kappa: &self.kappa / &den,
            lambda: &rat(1, 2) + &(&self.lambda / &den),
        };
        debug_assert!(out.is_admissible());
        out
    }

    /// B-process: (k, l) -> (l - 1/2, k + 1/2); requires lambda >= 1/2.
    pub fn process_b(&self) -> Result<ExponentPair> {
        if self.lambda < rat(1, 2) {
            return Err(Error::Domain(format!(
                "B-process needs lambda >= 1/2, got {self}"
            )));
        }
        let out = ExponentPair {
            kappa: &self.lambda - &rat(1, 2),
            lambda: &self.kappa + &rat(1, 2),
        };
        debug_assert!(out.is_admissible());
        Ok(out)
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rat(&self.kappa), format_rat(&self.lambda))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    A,
    B,
}

/// A word over the operators A and B with repetition counts, e.g.
/// "BABABA^2BA^3BA^2B".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessWord {
    ops: Vec<(Process, u32)>,
}

impl ProcessWord {
    pub fn empty() -> ProcessWord {
        ProcessWord { ops: Vec::new() }
    }

    pub fn ops(&self) -> &[(Process, u32)] {
        &self.ops
    }

    /// Concatenation (self followed by right).
    pub fn concat(&self, right: &ProcessWord) -> ProcessWord {
        let mut ops = self.ops.clone();
        ops.extend(right.ops.iter().cloned());
        ProcessWord { ops }
    }

    /// Apply to a seed, rightmost operator first.
    pub fn eval(&self, seed: &ExponentPair) -> Result<ExponentPair> {
        let mut pair = seed.clone();
        for &(op, rep) in self.ops.iter().rev() {
            for _ in 0..rep {
                pair = match op {
                    Process::A => pair.process_a(),
                    Process::B => pair.process_b()?,
                };
            }
        }
        Ok(pair)
    }
}

impl FromStr for ProcessWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<ProcessWord> {
        let bytes = s.as_bytes();
        let mut ops = Vec::new();
        let mut i = 0usize;
        while i < bytes.len() {
            let op = match bytes[i] {
                b'A' => Process::A,
                b'B' => Process::B,
                b' ' => {
                    i += 1;
                    continue;
                }
                c => {
                    return Err(Error::Parse {
                        pos: i,
                        msg: format!("expected 'A' or 'B', found {:?}", c as char),
                    })
                }
            };
            i += 1;
            let mut rep = 1u32;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "expected digits after '^'".into(),
                    });
                }
                rep = s[start..i].parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "repetition count out of range".into(),
                })?;
                if rep == 0 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "repetition count must be >= 1".into(),
                    });
                }
            }
            ops.push((op, rep));
        }
        Ok(ProcessWord { ops })
    }
}

impl fmt::Display for ProcessWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(op, rep) in &self.ops {
            let c = match op {
                Process::A => 'A',
                Process::B => 'B',
            };
            if rep == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{rep}")?;
            }
        }
        Ok(())
    }
}

/// Evaluate a word string against a seed (defaulting to (0, 1)).
pub fn eval_word(word: &str, seed: Option<&ExponentPair>) -> Result<ExponentPair> {
    let w: ProcessWord = word.parse()?;
    let default = ExponentPair::seed();
    w.eval(seed.unwrap_or(&default))
}

/// An X-exponent affine in c: alpha + beta * c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExponent {
    pub alpha: Rat,
    pub beta: Rat,
}

impl AffineExponent {
    pub fn constant(alpha: Rat) -> AffineExponent {
        AffineExponent { alpha, beta: Rat::zero() }
    }

    pub fn eval(&self, c: &Rat) -> Rat {
        &self.alpha + &(&self.beta * c)
    }
}

impl fmt::Display for AffineExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.beta.is_zero() {
            write!(f, "{}", format_rat(&self.alpha))
        } else if self.alpha.is_zero() {
            write!(f, "{} c", format_rat(&self.beta))
        } else if self.beta.is_negative() {
            write!(f, "{} - {} c", format_rat(&self.alpha), format_rat(&-&self.beta))
        } else {
            write!(f, "{} + {} c", format_rat(&self.alpha), format_rat(&self.beta))
        }
    }
}

/// Parse a sum of terms, each a product of rational literals optionally
/// ending in the symbol c, e.g. "1/20 * 1283/15276 + 31/40 + 1/20 c".
pub fn parse_affine(s: &str) -> Result<AffineExponent> {
    let mut alpha = Rat::zero();
    let mut beta = Rat::zero();
    let mut rest = s.trim();
    let mut first = true;
    while !rest.is_empty() {
        let offset = s.len() - rest.len();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('+') {
            if first {
                return Err(Error::Parse { pos: offset, msg: "leading '+'".into() });
            }
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        } else if !first {
            return Err(Error::Parse {
                pos: offset,
                msg: format!("expected '+' or '-' before {rest:?}"),
            });
        }
        let offset = s.len() - rest.len();
        // one term: factors separated by '*', optionally ending in 'c'
        let term_end = rest
            .find(|ch| ch == '+' || ch == '-')
            .unwrap_or(rest.len());
        let term = rest[..term_end].trim();
        if term.is_empty() {
            return Err(Error::Parse { pos: offset, msg: "empty term".into() });
        }
        let mut coeff = rat(sign, 1);
        let mut has_c = false;
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor == "c" {
                if has_c {
                    return Err(Error::Parse {
                        pos: offset,
                        msg: "term is quadratic in c".into(),
                    });
                }
                has_c = true;
            } else if let Some(fr) = factor.strip_suffix('c') {
                // allow "1/20 c" without '*'
                if has_c {
                    return Err(Error::Parse {
                        pos: offset,
                        msg: "term is quadratic in c".into(),
                    });
                }
                has_c = true;
                coeff = &coeff * &parse_rat(fr)?;
            } else {
                coeff = &coeff * &parse_rat(factor)?;
            }
        }
        if has_c {
            beta = &beta + &coeff;
        } else {
            alpha = &alpha + &coeff;
        }
        rest = rest[term_end..].trim_start();
        first = false;
    }
    if first {
        return Err(Error::Parse { pos: 0, msg: "empty affine expression".into() });
    }
    Ok(AffineExponent { alpha, beta })
}

/// One inequality max(lhs...) <= rhs (or < when strict), with its source
/// annotation.
#[derive(Debug, Clone)]
pub struct ConstraintEntry {
    pub name: String,
    pub lhs: Vec<AffineExponent>,
    pub rhs: AffineExponent,
    pub strict: bool,
    pub anchor: String,
}

#[derive(Debug, Clone)]
pub struct ConstraintTable {
    pub entries: Vec<ConstraintEntry>,
}

const DEFAULT_TABLE_TEXT: &str = include_str!("../data/default_constraints.txt");

impl ConstraintTable {
    /// The table shipped with the crate.
    pub fn default_table() -> ConstraintTable {
        Self::parse(DEFAULT_TABLE_TEXT).expect("embedded table parses")
    }

    /// Parse the structured text format (see data/default_constraints.txt).
    pub fn parse(text: &str) -> Result<ConstraintTable> {
        let mut entries: Vec<ConstraintEntry> = Vec::new();
        let mut current: Option<ConstraintEntry> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { pos: lineno + 1, msg };
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| perr("unterminated section header".into()))?;
                if let Some(e) = current.take() {
                    entries.push(Self::finish(e, lineno)?);
                }
                current = Some(ConstraintEntry {
                    name: name.trim().to_string(),
                    lhs: Vec::new(),
                    rhs: AffineExponent::constant(Rat::zero()),
                    strict: false,
                    anchor: String::new(),
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| perr(format!("expected key = value, got {line:?}")))?;
            let entry = current
                .as_mut()
                .ok_or_else(|| perr("key outside of a [section]".into()))?;
            match key.trim() {
                "anchor" => entry.anchor = value.trim().to_string(),
                "strict" => {
                    entry.strict = match value.trim() {
                        "true" => true,
                        "false" => false,
                        other => return Err(perr(format!("bad strict value {other:?}"))),
                    }
                }
                "lhs" => entry.lhs.push(parse_affine(value)?),
                "rhs" => entry.rhs = parse_affine(value)?,
                other => return Err(perr(format!("unknown key {other:?}"))),
            }
        }
        if let Some(e) = current.take() {
            entries.push(Self::finish(e, text.lines().count())?);
        }
        Ok(ConstraintTable { entries })
    }

    fn finish(e: ConstraintEntry, lineno: usize) -> Result<ConstraintEntry> {
        if e.lhs.is_empty() {
            return Err(Error::Parse {
                pos: lineno,
                msg: format!("entry {:?} has no lhs", e.name),
            });
        }
        Ok(e)
    }

    /// Serialize back to the structured text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("[{}]\n", e.name));
            if !e.anchor.is_empty() {
                out.push_str(&format!("anchor = {}\n", e.anchor));
            }
            out.push_str(&format!("strict = {}\n", e.strict));
            for l in &e.lhs {
                out.push_str(&format!("lhs = {l}\n"));
            }
            out.push_str(&format!("rhs = {}\n\n", e.rhs));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryStatus {
    /// max(lhs) < rhs.
    Satisfied,
    /// max(lhs) = rhs exactly (fails a strict entry by zero margin).
    Equality,
    /// max(lhs) > rhs (or = for strict entries counts as not satisfied,
    /// but is still reported as Equality).
    Violated,
}

#[derive(Debug, Clone)]
pub struct EntryReport {
    pub name: String,
    pub status: EntryStatus,
    /// rhs - max(lhs), exact.
    pub margin: Rat,
    /// index of the lhs element achieving the max at this c.
    pub binding_index: usize,
    pub strict: bool,
    pub anchor: String,
}

/// Evaluate every entry at a rational c in [1, 3).
pub fn check_constraints(table: &ConstraintTable, c: &Rat) -> Result<Vec<EntryReport>> {
    if c < &Rat::one() || c >= &rat(3, 1) {
        return Err(Error::Domain(format!(
            "check_constraints expects 1 <= c < 3, got {}",
            format_rat(c)
        )));
    }
    let mut out = Vec::with_capacity(table.entries.len());
    for e in &table.entries {
        let mut best: Option<(usize, Rat)> = None;
        for (i, l) in e.lhs.iter().enumerate() {
            let v = l.eval(c);
            if best.as_ref().map_or(true, |(_, b)| v > *b) {
                best = Some((i, v));
            }
        }
        let (idx, max_lhs) = best.expect("entries have nonempty lhs");
        let rhs = e.rhs.eval(c);
        let margin = &rhs - &max_lhs;
        let status = if margin.is_positive() {
            EntryStatus::Satisfied
        } else if margin.is_zero() {
            EntryStatus::Equality
        } else {
            EntryStatus::Violated
        };
        out.push(EntryReport {
            name: e.name.clone(),
            status,
            margin,
            binding_index: idx,
            strict: e.strict,
            anchor: e.anchor.clone(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SupResult {
    /// Exact supremum of admissible c within the window (1, 3).
    pub sup: Rat,
    /// Whether the supremum itself satisfies every entry.
    pub attained: bool,
    /// No entry bounds c above within the window; sup is the window edge 3.
    pub unbounded_in_window: bool,
    /// Entries whose bound equals the supremum.
    pub binding: Vec<String>,
}

/// Exact supremum of c in (1, 3) satisfying all entries, by solving each
/// affine inequality.
pub fn sup_admissible_c(table: &ConstraintTable) -> Result<SupResult> {
    if table.entries.is_empty() {
        return Err(Error::Config("no constraints".into()));
    }
    let one = Rat::one();
    let three = rat(3, 1);
    let mut upper: Option<Rat> = None;
    let mut lower = one.clone();
    let mut binding: Vec<(Rat, String)> = Vec::new();
    for e in &table.entries {
        for l in &e.lhs {
            let slope = &l.beta - &e.rhs.beta;
            let gap = &e.rhs.alpha - &l.alpha; // need slope * c <= gap
            if slope.is_zero() {
                let ok = if e.strict { gap.is_positive() } else { !gap.is_negative() };
                if !ok {
                    return Err(Error::Domain(format!(
                        "empty admissible region: constant entry {:?} fails identically",
                        e.name
                    )));
                }
            } else if slope.is_positive() {
                let bound = &gap / &slope;
                binding.push((bound.clone(), e.name.clone()));
                if upper.as_ref().map_or(true, |u| bound < *u) {
                    upper = Some(bound);
                }
            } else {
                // lower bound on c
                let bound = &gap / &slope;
                if bound > lower {
                    lower = bound;
                }
            }
        }
    }
    let (sup, unbounded) = match upper {
        Some(u) if u < three => (u, false),
        _ => (three.clone(), true),
    };
    if sup <= one || lower >= sup {
        return Err(Error::Domain(
            "empty admissible region: no c in (1, 3) satisfies the table".into(),
        ));
    }
    let binding_names: Vec<String> = {
        let mut names: Vec<String> = binding
            .into_iter()
            .filter(|(b, _)| *b == sup)
            .map(|(_, n)| n)
            .collect();
        names.dedup();
        names
    };
    // attained iff evaluating at sup violates nothing (strict entries must
    // hold strictly)
    let attained = if unbounded {
        false
    } else {
        check_constraints(table, &sup)?.iter().all(|r| match r.status {
            EntryStatus::Satisfied => true,
            EntryStatus::Equality => !r.strict,
            EntryStatus::Violated => false,
        })
    };
    Ok(SupResult { sup, attained, unbounded_in_window: unbounded, binding: binding_names })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(kn: i64, kd: i64, ln: i64, ld: i64) -> ExponentPair {
        ExponentPair::new(rat(kn, kd), rat(ln, ld)).unwrap()
    }

    #[test]
    fn process_a_examples() {
        assert_eq!(ExponentPair::seed().process_a(), ExponentPair::seed());
        assert_eq!(pair(1, 2, 1, 2).process_a(), pair(1, 6, 2, 3));
        assert_eq!(pair(1, 6, 2, 3).process_a(), pair(1, 14, 11, 14));
    }

    #[test]
    fn process_b_examples() {
        assert_eq!(ExponentPair::seed().process_b().unwrap(), pair(1, 2, 1, 2));
        let p = pair(1, 6, 2, 3);
        assert_eq!(p.process_b().unwrap().process_b().unwrap(), p);
        assert_eq!(pair(1, 14, 11, 14).process_b().unwrap(), pair(2, 7, 4, 7));
    }

    #[test]
    fn word_evaluation_reference_pairs() {
        assert_eq!(eval_word("", None).unwrap(), ExponentPair::seed());
        assert_eq!(
            eval_word("BABABA^2BA^3BA^2B", None).unwrap(),
            pair(214, 845, 199, 338)
        );
        assert_eq!(eval_word("BA^2B", None).unwrap(), pair(2, 7, 4, 7));
        assert_eq!(eval_word("A^2BA^2B", None).unwrap(), pair(1, 20, 33, 40));
    }

    #[test]
    fn word_parse_errors_carry_position() {
        match "BA^xB".parse::<ProcessWord>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match "BQ".parse::<ProcessWord>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn word_round_trip() {
        for s in ["", "A", "B^2", "BABABA^2BA^3BA^2B", "A^12B"] {
            let w: ProcessWord = s.parse().unwrap();
            assert_eq!(w.to_string(), s);
            let again: ProcessWord = w.to_string().parse().unwrap();
            assert_eq!(w, again);
        }
    }

    #[test]
    fn word_composition() {
        let w1: ProcessWord = "BA^2".parse().unwrap();
        let w2: ProcessWord = "BA^3B".parse().unwrap();
        let seed = ExponentPair::seed();
        let via_concat = w1.concat(&w2).eval(&seed).unwrap();
        let via_stages = w1.eval(&w2.eval(&seed).unwrap()).unwrap();
        assert_eq!(via_concat, via_stages);
    }

    #[test]
    fn pairs_from_seed_stay_admissible() {
        // every prefix applied to (0,1) keeps 0 <= k <= 1/2 <= l <= 1 and k <= l
        let w: ProcessWord = "BABABA^2BA^3BA^2B".parse().unwrap();
        let mut pair = ExponentPair::seed();
        for &(op, rep) in w.ops().iter().rev() {
            for _ in 0..rep {
                pair = match op {
                    Process::A => pair.process_a(),
                    Process::B => pair.process_b().unwrap(),
                };
                assert!(pair.is_admissible());
                assert!(pair.kappa() <= pair.lambda());
            }
        }
    }

    #[test]
    fn affine_parse_and_display() {
        let a = parse_affine("1/20 * 1283/15276 + 31/40 + 1/20 c").unwrap();
        assert_eq!(a.beta, rat(1, 20));
        assert_eq!(a.alpha, &rat(1283, 305520) + &rat(31, 40));
        let b = parse_affine("3 - c").unwrap();
        assert_eq!(b.eval(&rat(1, 1)), rat(2, 1));
        let c = parse_affine(&a.to_string()).unwrap();
        assert_eq!(a, c);
        assert!(parse_affine("c * c").is_err());
        assert!(parse_affine("+ 1/2").is_err());
        assert!(parse_affine("").is_err());
    }

    fn c_star() -> Rat {
        rat(16559, 15276)
    }

    #[test]
    fn default_table_statuses_at_supremum() {
        let table = ConstraintTable::default_table();
        let reports = check_constraints(&table, &c_star()).unwrap();
        let by_name = |n: &str| reports.iter().find(|r| r.name == n).unwrap();
        assert_eq!(by_name("minor-arc-final").status, EntryStatus::Equality);
        assert_eq!(by_name("typeI-case1").status, EntryStatus::Equality);
        assert_eq!(by_name("typeI-case1").binding_index, 0);
        assert_eq!(by_name("typeI-case2").status, EntryStatus::Satisfied);
        // the type II entry also binds exactly, through its L = X^(1/3)
        // endpoint term (index 2); exact rational evaluation confirms it
        assert_eq!(by_name("typeII").status, EntryStatus::Equality);
        assert_eq!(by_name("typeII").binding_index, 2);
    }

    #[test]
    fn type_i_case1_identity() {
        // 1283/305520 + (2c+31)/40 + 1262/15276 = 13993/15276 at c = 16559/15276
        let c = c_star();
        let lhs = &(&rat(1283, 305520) + &(&(&(&rat(2, 1) * &c) + &rat(31, 1)) / &rat(40, 1)))
            + &rat(1262, 15276);
        assert_eq!(lhs, rat(13993, 15276));
    }

    #[test]
    fn default_table_at_one_and_eleven_tenths() {
        let table = ConstraintTable::default_table();
        let at_one = check_constraints(&table, &rat(1, 1)).unwrap();
        assert!(at_one.iter().all(|r| r.status == EntryStatus::Satisfied));
        let at_11_10 = check_constraints(&table, &rat(11, 10)).unwrap();
        let minor = at_11_10.iter().find(|r| r.name == "minor-arc-final").unwrap();
        assert_eq!(minor.status, EntryStatus::Violated);
    }

    #[test]
    fn sup_of_default_table() {
        let table = ConstraintTable::default_table();
        let s = sup_admissible_c(&table).unwrap();
        assert_eq!(s.sup, c_star());
        assert!(!s.unbounded_in_window);
        // the strict minor-arc entry fails at the sup, so it is not attained
        assert!(!s.attained);
        assert!(s.binding.contains(&"minor-arc-final".to_string()));
        assert!(s.binding.contains(&"typeI-case1".to_string()));
    }

    #[test]
    fn sup_single_entry_and_constant_table() {
        let single = ConstraintTable {
            entries: vec![ConstraintEntry {
                name: "only".into(),
                lhs: vec![AffineExponent::constant(rat(29269, 15276))],
                rhs: parse_affine("3 - c").unwrap(),
                strict: false,
                anchor: String::new(),
            }],
        };
        assert_eq!(sup_admissible_c(&single).unwrap().sup, c_star());

        let constant = ConstraintTable {
            entries: vec![ConstraintEntry {
                name: "const".into(),
                lhs: vec![AffineExponent::constant(rat(1, 2))],
                rhs: AffineExponent::constant(rat(3, 4)),
                strict: false,
                anchor: String::new(),
            }],
        };
        let s = sup_admissible_c(&constant).unwrap();
        assert_eq!(s.sup, rat(3, 1));
        assert!(s.unbounded_in_window);

        assert!(sup_admissible_c(&ConstraintTable { entries: vec![] }).is_err());
    }

    #[test]
    fn sup_shrinks_under_extra_constraints() {
        let mut table = ConstraintTable::default_table();
        let base = sup_admissible_c(&table).unwrap().sup;
        table.entries.push(ConstraintEntry {
            name: "extra".into(),
            lhs: vec![parse_affine("c").unwrap()],
            rhs: AffineExponent::constant(rat(107, 100)),
            strict: false,
            anchor: String::new(),
        });
        let tightened = sup_admissible_c(&table).unwrap().sup;
        assert!(tightened <= base);
        assert_eq!(tightened, rat(107, 100));
    }

    #[test]
    fn probes_around_the_supremum() {
        let table = ConstraintTable::default_table();
        let sup = sup_admissible_c(&table).unwrap().sup;
        let eps = rat(1, 1_000_000);
        let below = check_constraints(&table, &(&sup - &eps)).unwrap();
        assert!(below.iter().all(|r| r.status == EntryStatus::Satisfied));
        let above = check_constraints(&table, &(&sup + &eps)).unwrap();
        assert!(above.iter().any(|r| r.status == EntryStatus::Violated));
    }

    #[test]
    fn table_text_round_trip() {
        let table = ConstraintTable::default_table();
        let text = table.to_text();
        let again = ConstraintTable::parse(&text).unwrap();
        assert_eq!(again.entries.len(), table.entries.len());
        for (a, b) in table.entries.iter().zip(again.entries.iter()) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.strict, b.strict);
            assert_eq!(a.lhs, b.lhs);
            assert_eq!(a.rhs, b.rhs);
        }
    }

    #[test]
    fn empty_region_detected() {
        let infeasible = ConstraintTable {
            entries: vec![ConstraintEntry {
                name: "bad".into(),
                lhs: vec![AffineExponent::constant(rat(2, 1))],
                rhs: AffineExponent::constant(rat(1, 1)),
                strict: false,
                anchor: String::new(),
            }],
        };
        assert!(sup_admissible_c(&infeasible).is_err());
    }
}
