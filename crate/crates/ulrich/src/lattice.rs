//! The Picard lattice of the plane blown up at `n` very general points.
//!
//! Classes are integer vectors `(d; m_1, …, m_n)` in the basis `L, E_1, …, E_n`
//! (pullback of a line and the exceptional divisors), with the sign convention
//! `dL − Σ m_i E_i`. The intersection form is `diag(1, −1, …, −1)` in this
//! basis, so
//!
//! ```text
//! (d; m⃗) · (e; l⃗) = d·e − Σ m_i·l_i
//! ```
//!
//! All arithmetic is exact: coefficients are arbitrary-precision integers and
//! every inequality that in closed form would involve a square root is decided
//! by isolating and squaring. No decision path touches floating point.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Hard cap on the number of blown-up points a single class may carry.
/// Guards the parser against absurd exponents before allocation.
pub const MAX_POINTS: usize = 1 << 24;

/// A divisor class `(d; m_1, …, m_n)` on the blow-up of the plane at `n ≥ 1`
/// very general points.
///
/// The multiplicity vector is positional: entry `i` is the coefficient of
/// `E_{i+1}`. Equality is positional too; comparisons "up to permuted
/// multiplicities" go through [`DivisorClass::canonical_form`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    d: BigInt,
    mults: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(d: BigInt, mults: Vec<BigInt>) -> Result<Self> {
        if mults.is_empty() {
            return Err(Error::InvalidInput(
                "a divisor class needs n >= 1 blown-up points".into(),
            ));
        }
        if mults.len() > MAX_POINTS {
            return Err(Error::InvalidInput(format!(
                "class would carry {} points (cap is {MAX_POINTS})",
                mults.len()
            )));
        }
        Ok(Self { d, mults })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(d: i64, mults: &[i64]) -> Result<Self> {
        Self::new(d.into(), mults.iter().map(|&m| m.into()).collect())
    }

    /// Number of blown-up points.
    pub fn n(&self) -> usize {
        self.mults.len()
    }

    /// Degree: the coefficient of `L`.
    pub fn degree(&self) -> &BigInt {
        &self.d
    }

    pub fn mults(&self) -> &[BigInt] {
        &self.mults
    }

    /// The zero class `(0; 0^n)`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(BigInt::zero(), vec![BigInt::zero(); n])
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.mults.iter().all(Zero::is_zero)
    }

    /// Intersection number `d·e − Σ m_i·l_i`. Symmetric and bilinear.
    pub fn intersect(&self, other: &DivisorClass) -> Result<BigInt> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let mut acc = &self.d * &other.d;
        for (a, b) in self.mults.iter().zip(&other.mults) {
            acc -= a * b;
        }
        Ok(acc)
    }

    /// Self-intersection `c · c`.
    pub fn self_intersect(&self) -> BigInt {
        self.intersect(self).expect("same n")
    }

    /// Euler characteristic `χ(c) = (d(d+3) − Σ m_i(m_i+1))/2 + 1`.
    ///
    /// Riemann–Roch on a rational surface: equals `c·(c − K)/2 + 1` with
    /// `K = (−3; (−1)^n)` the canonical class.
    pub fn chi(&self) -> BigInt {
        let three = BigInt::from(3);
        let mut num = &self.d * (&self.d + &three);
        for m in &self.mults {
            num -= m * (m + 1);
        }
        num / 2 + 1
    }

    /// Virtual dimension of the linear system: `χ − 1`.
    pub fn vdim(&self) -> BigInt {
        self.chi() - 1
    }

    /// Arithmetic genus by adjunction: `p_a = c·(c + K)/2 + 1`.
    pub fn arithmetic_genus(&self) -> BigInt {
        let k = canonical_class(self.n()).expect("n >= 1");
        (self.self_intersect() + self.intersect(&k).expect("same n")) / 2 + 1
    }

    /// Serre dual `K − c = (−3−d; −m_1−1, …, −m_n−1)`, so that
    /// `h²(c) = h⁰(K − c)`. An involution: `K − (K − c) = c`.
    pub fn serre_dual(&self) -> DivisorClass {
        let d = BigInt::from(-3) - &self.d;
        let mults = self.mults.iter().map(|m| BigInt::from(-1) - m).collect();
        DivisorClass { d, mults }
    }

    /// Multiplicities sorted weakly decreasing. Idempotent; the canonical
    /// representative of the permutation orbit (the points are very general,
    /// so permuted multiplicities give isomorphic situations).
    pub fn canonical_form(&self) -> DivisorClass {
        let mut mults = self.mults.clone();
        mults.sort_by_key(|m| Reverse(m.clone()));
        DivisorClass {
            d: self.d.clone(),
            mults,
        }
    }

    pub fn is_canonical_form(&self) -> bool {
        self.mults.windows(2).all(|w| w[0] >= w[1])
    }

    /// Componentwise sum; classes must share `n`.
    pub fn try_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(DivisorClass {
            d: &self.d + &other.d,
            mults: self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Componentwise difference; classes must share `n`.
    pub fn try_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(DivisorClass {
            d: &self.d - &other.d,
            mults: self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scaled(&self, k: &BigInt) -> DivisorClass {
        DivisorClass {
            d: k * &self.d,
            mults: self.mults.iter().map(|m| k * m).collect(),
        }
    }
}

/// The canonical class `K_n = (−3; (−1)^n)`.
pub fn canonical_class(n: usize) -> Result<DivisorClass> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "canonical class needs n >= 1 (engine scope)".into(),
        ));
    }
    DivisorClass::new(BigInt::from(-3), vec![BigInt::from(-1); n])
}

// ---------------------------------------------------------------------------
// Exponential-notation text format
// ---------------------------------------------------------------------------

impl fmt::Display for DivisorClass {
    /// Prints in exponential notation, grouping *adjacent* equal
    /// multiplicities: `(6;2^6,1)`. Printing a canonical form therefore
    /// yields the canonical text with weakly decreasing multiplicities.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.d)?;
        let mut i = 0;
        let mut first = true;
        while i < self.mults.len() {
            let mut j = i + 1;
            while j < self.mults.len() && self.mults[j] == self.mults[i] {
                j += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            let run = j - i;
            if run == 1 {
                write!(f, "{}", self.mults[i])?;
            } else {
                write!(f, "{}^{}", self.mults[i], run)?;
            }
            i = j;
        }
        write!(f, ")")
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    /// Grammar: `"(" d ";" term ("," term)* ")"` with
    /// `term = integer ("^" natural)?`. The base integer of a term may be
    /// parenthesized, so `(-3;(-1)^7)` and `(-3;-1^7)` parse identically.
    /// A `^0` exponent is rejected. The Unicode minus sign is accepted.
    fn from_str(text: &str) -> Result<Self> {
        Parser::new(text).class()
    }
}

/// Parse class text in exponential notation (see [`DivisorClass::from_str`]).
pub fn parse_class(text: &str) -> Result<DivisorClass> {
    text.parse()
}

struct Parser<'a> {
    src: &'a str,
    rest: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            rest: src.char_indices().peekable(),
        }
    }

    fn fail(&mut self, what: &str) -> Error {
        let tok = match self.rest.peek() {
            Some(&(i, _)) => {
                let tail: String = self.src[i..].chars().take(12).collect();
                format!("`{tail}`")
            }
            None => "end of input".to_string(),
        };
        Error::Parse(format!("expected {what}, found {tok}"))
    }

    fn skip_ws(&mut self) {
        while matches!(self.rest.peek(), Some(&(_, c)) if c.is_whitespace()) {
            self.rest.next();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if matches!(self.rest.peek(), Some(&(_, x)) if x == c) {
            self.rest.next();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let mut digits = String::new();
        if matches!(self.rest.peek(), Some(&(_, c)) if c == '-' || c == '\u{2212}' || c == '+') {
            let (_, c) = self.rest.next().unwrap();
            digits.push(if c == '+' { '+' } else { '-' });
        }
        let mut saw_digit = false;
        while matches!(self.rest.peek(), Some(&(_, c)) if c.is_ascii_digit()) {
            digits.push(self.rest.next().unwrap().1);
            saw_digit = true;
        }
        if !saw_digit {
            return Err(self.fail("an integer"));
        }
        BigInt::from_str(&digits).map_err(|e| Error::Parse(format!("bad integer `{digits}`: {e}")))
    }

    /// An integer, optionally wrapped in parentheses.
    fn term_base(&mut self) -> Result<BigInt> {
        if self.eat('(') {
            let v = self.integer()?;
            if !self.eat(')') {
                return Err(self.fail("`)` closing a parenthesized multiplicity"));
            }
            Ok(v)
        } else {
            self.integer()
        }
    }

    fn exponent(&mut self) -> Result<usize> {
        self.skip_ws();
        let v = self.integer()?;
        if v.is_negative() {
            return Err(Error::Parse(format!("negative exponent {v}")));
        }
        if v.is_zero() {
            return Err(Error::Parse("exponent 0 is not allowed".into()));
        }
        match usize::try_from(&v) {
            Ok(e) if e <= MAX_POINTS => Ok(e),
            _ => Err(Error::Parse(format!(
                "exponent {v} exceeds the point cap {MAX_POINTS}"
            ))),
        }
    }

    fn class(&mut self) -> Result<DivisorClass> {
        if !self.eat('(') {
            return Err(self.fail("`(` opening the class"));
        }
        let d = self.integer()?;
        if !self.eat(';') {
            return Err(self.fail("`;` after the degree"));
        }
        let mut mults: Vec<BigInt> = Vec::new();
        loop {
            let base = self.term_base()?;
            let run = if self.eat('^') { self.exponent()? } else { 1 };
            if mults.len() + run > MAX_POINTS {
                return Err(Error::Parse(format!(
                    "class would carry more than {MAX_POINTS} points"
                )));
            }
            mults.extend(std::iter::repeat_n(base, run));
            if self.eat(',') {
                continue;
            }
            break;
        }
        if !self.eat(')') {
            return Err(self.fail("`,`, `^` or `)`"));
        }
        self.skip_ws();
        if let Some(&(i, _)) = self.rest.peek() {
            return Err(Error::Parse(format!(
                "trailing input after class: `{}`",
                &self.src[i..]
            )));
        }
        DivisorClass::new(d, mults)
    }
}

// ---------------------------------------------------------------------------
// Polarizations ξ_{n,m} = (m; 1^n)
// ---------------------------------------------------------------------------

/// Which rule certified very-ampleness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VeryAmpleCriterion {
    /// The proved bound for `n ≥ 3`: `m ≥ 2√(n+4) − 3`, checked in the exact
    /// integer form `m ≥ 0 ∧ (m+3)² ≥ 4(n+4)`.
    ProvedBound,
    /// Known minimal very-ample values for `n ≤ 10`:
    /// `m_1 = 2`, `m_2 = 3`, `m_n = 3` for `3 ≤ n ≤ 6` (del Pezzo range),
    /// `m_n = 4` for `7 ≤ n ≤ 10`. Very-ampleness is monotone in `m`
    /// (adding the free pencil `L` preserves it).
    SmallNTable,
    /// The conjectural criterion `m(m+3)/2 − n ≥ 5`, only consulted when
    /// explicitly enabled.
    ConjecturalFlag,
}

/// A polarization `ξ_{n,m} = (m; 1^n)` with certified positivity flags.
#[derive(Debug, Clone)]
pub struct Polarization {
    base: DivisorClass,
    m: i64,
    pub ample: bool,
    pub very_ample: bool,
    pub criterion_used: Option<VeryAmpleCriterion>,
}

impl Polarization {
    pub fn class(&self) -> &DivisorClass {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// `ξ² = m² − n`.
    pub fn self_intersect(&self) -> BigInt {
        self.base.self_intersect()
    }
}

/// Minimal very-ample degrees for `n ≤ 10` (index `n − 1`).
const SMALL_N_MINIMAL_M: [i64; 10] = [2, 3, 3, 3, 3, 3, 4, 4, 4, 4];

fn very_ample_by_table(n: usize, m: i64) -> bool {
    n <= 10 && m >= SMALL_N_MINIMAL_M[n - 1]
}

fn very_ample_by_proved_bound(n: usize, m: i64) -> bool {
    // m ≥ 2√(n+4) − 3  ⇔  m + 3 ≥ 0 and (m+3)² ≥ 4(n+4); only for n ≥ 3.
    if n < 3 || m < 0 {
        return false;
    }
    let s = m as i128 + 3;
    s * s >= 4 * (n as i128 + 4)
}

fn very_ample_by_conjecture(n: usize, m: i64) -> bool {
    // m(m+3)/2 − n ≥ 5, m positive.
    if m < 1 {
        return false;
    }
    let m = m as i128;
    m * (m + 3) / 2 - n as i128 >= 5
}

/// Build the polarization `ξ_{n,m}` and certify its positivity.
///
/// Ampleness: for `n ≥ 3`, `m ≥ 1` and `ξ² = m² − n > 0`; for `n ∈ {1, 2}`
/// the known minimal values (`m ≥ 2`, resp. `m ≥ 3`). Very-ampleness is
/// certified by the proved bound, by the small-`n` table, or (opt-in) by the
/// conjectural criterion; the flags simply come back `false` when no rule
/// applies.
pub fn polarization(n: usize, m: i64, allow_conjectural: bool) -> Result<Polarization> {
    if n == 0 {
        return Err(Error::InvalidInput("polarization needs n >= 1".into()));
    }
    let base = DivisorClass::new(BigInt::from(m), vec![BigInt::one(); n])?;

    let ample = match n {
        1 => m >= 2,
        2 => m >= 3,
        _ => m >= 1 && (m as i128) * (m as i128) > n as i128,
    };

    let (very_ample, criterion_used) = if very_ample_by_proved_bound(n, m) {
        (true, Some(VeryAmpleCriterion::ProvedBound))
    } else if very_ample_by_table(n, m) {
        (true, Some(VeryAmpleCriterion::SmallNTable))
    } else if allow_conjectural && very_ample_by_conjecture(n, m) {
        (true, Some(VeryAmpleCriterion::ConjecturalFlag))
    } else {
        (false, None)
    };

    debug_assert!(!very_ample || ample, "very ample must imply ample");

    Ok(Polarization {
        base,
        m,
        ample,
        very_ample,
        criterion_used,
    })
}

/// Smallest `m` with `ξ_{n,m}` very ample under the non-conjectural criteria.
///
/// For `n ≥ 3` the result also satisfies `m² < 4n`.
pub fn minimal_very_ample_m(n: usize) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidInput("minimal_very_ample_m needs n >= 1".into()));
    }
    if n <= 10 {
        return Ok(SMALL_N_MINIMAL_M[n - 1]);
    }
    // Smallest m with (m+3)² ≥ 4(n+4): m = ceil(sqrt(4(n+4))) − 3, exactly.
    let target: BigInt = BigInt::from(4) * (BigInt::from(n as u64) + 4);
    let mut s = target.sqrt();
    if &s * &s < target {
        s += 1;
    }
    let m = s - 3;
    i64::try_from(&m).map_err(|_| Error::InvalidInput(format!("minimal m {m} exceeds i64")))
}
