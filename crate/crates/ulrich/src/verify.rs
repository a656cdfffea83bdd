//! Deciding whether `O(C)` is an Ulrich line bundle with respect to a very
//! ample `ξ = ξ_{n,m}`.
//!
//! A line bundle `O(C) ≠ O` on a polarized surface `(S, H)` is Ulrich exactly
//! when the effective divisor `C` satisfies:
//!
//! * (i) `C·H = ½ H·(3H + K)`,
//! * (ii) `½(C² − C·K) + χ(O_S) − H² = 0`,
//! * (iii) `h¹(O_C(K + H)) = 0`,
//! * (iv) the restriction `H⁰(K + 2H) → H⁰(O_C(K + 2H))` is injective or
//!   surjective,
//!
//! and `C` can be taken smooth. On `X_n` with `H = ξ_{n,m}` all four reduce
//! to lattice arithmetic plus emptiness queries:
//!
//! * (i) becomes `C·ξ = 3m(m−1)/2 − n`;
//! * (ii) is a quadratic identity in the class;
//! * (iii) is equivalent to `h⁰(C − ξ) = 0` — restricting `K + ξ` (which is
//!   the point-free plane system `(m−3; 0ⁿ)`, so `h¹(K+ξ) = 0` and
//!   `h⁰(−ξ) = 0`) to `C` identifies `h¹(O_C(K+ξ))` with `h⁰(C − ξ)`;
//! * (iv) reduces to injectivity, i.e. emptiness of `K + 2ξ − C`: under
//!   (i)–(ii) domain and target have equal Euler characteristics, so a
//!   nonzero kernel also kills surjectivity. When `2m − 3 < d` the kernel
//!   class has negative degree and the map is injective outright.
//!
//! Smoothness of the general member is certified separately; numeric
//! conditions can all pass while smoothness stays uncertified. A short
//! whitelist carries the classically known smooth cases that the fat-point
//! criterion does not reach.

use num_bigint::BigInt;
use serde::Serialize;

use crate::cohomology::{self, SmoothnessCertificate};
use crate::error::{Error, Result};
use crate::lattice::{canonical_class, DivisorClass, Polarization};

/// One of the four Ulrich conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    #[serde(rename = "i")]
    Degree,
    #[serde(rename = "ii")]
    EulerCharacteristic,
    #[serde(rename = "iii")]
    Speciality,
    #[serde(rename = "iv")]
    Restriction,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let roman = match self {
            Condition::Degree => "i",
            Condition::EulerCharacteristic => "ii",
            Condition::Speciality => "iii",
            Condition::Restriction => "iv",
        };
        write!(f, "{roman}")
    }
}

/// Why a verdict stayed undecided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UndecidedReason {
    /// The cohomology ladder could not decide the named condition's
    /// emptiness query.
    OracleGap(Condition),
    /// All four conditions hold but no smoothness certificate was issued.
    Smoothness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "detail")]
pub enum Overall {
    Ulrich,
    NotUlrich(Condition),
    Undecided(UndecidedReason),
}

/// The full result of a verification run.
#[derive(Debug, Clone, Serialize)]
pub struct UlrichVerdict {
    /// The class as given (positional).
    pub class: String,
    /// Canonical form (weakly decreasing multiplicities).
    pub canonical: String,
    pub n: usize,
    pub m: i64,
    pub cond_i: bool,
    pub cond_ii: bool,
    /// `None` when unevaluated (an earlier condition failed) or undecidable.
    pub cond_iii: Option<bool>,
    pub cond_iv: Option<bool>,
    /// Names of the rules that decided (iii) and (iv); `None` when the
    /// condition was never evaluated.
    pub cond_iii_rule: Option<String>,
    pub cond_iv_rule: Option<String>,
    pub smoothness: SmoothnessCertificate,
    pub overall: Overall,
    /// Whether `(n, m, canonical)` is on the classical smoothness whitelist.
    /// The strict verdict above never uses this; downstream consumers may
    /// promote `Undecided(Smoothness)` to Ulrich for whitelisted classes.
    pub whitelist_eligible: bool,
}

impl UlrichVerdict {
    /// Strictly Ulrich, or undecided only on smoothness with the class
    /// whitelisted.
    pub fn is_ulrich_accepting_whitelist(&self) -> bool {
        match self.overall {
            Overall::Ulrich => true,
            Overall::Undecided(UndecidedReason::Smoothness) => self.whitelist_eligible,
            _ => false,
        }
    }
}

/// Classes whose general member is smooth and irreducible for classical
/// geometric reasons our certificate rules do not cover, keyed by
/// `(n, m, canonical form)`.
///
/// * `(10, 4, (7;2^10))`: the embedded curve has degree 8 and genus 5 in
///   `P⁴`, i.e. it is a canonically embedded genus-5 curve.
/// * `(2, 3, (3;2,0))`: nodal-type cubic system on the degree-7 del Pezzo
///   surface; the general member is smooth (classical).
pub const SMOOTHNESS_WHITELIST: [(usize, i64, &str); 2] =
    [(10, 4, "(7;2^10)"), (2, 3, "(3;2,0)")];

fn on_whitelist(n: usize, m: i64, canonical: &DivisorClass) -> bool {
    let text = canonical.to_string();
    SMOOTHNESS_WHITELIST
        .iter()
        .any(|&(wn, wm, wc)| wn == n && wm == m && wc == text)
}

/// Condition (i): `C·ξ = ½ ξ·(3ξ + K) = 3m(m−1)/2 − n`.
pub fn check_degree(c: &DivisorClass, pol: &Polarization) -> Result<bool> {
    let xi = pol.class();
    let k = canonical_class(pol.n())?;
    let lhs = BigInt::from(2) * c.intersect(xi)?;
    let rhs = xi.intersect(&xi.scaled(&BigInt::from(3)).try_add(&k)?)?;
    Ok(lhs == rhs)
}

/// Condition (ii): `C² − C·K + 2 − 2ξ² = 0`.
pub fn check_chi(c: &DivisorClass, pol: &Polarization) -> Result<bool> {
    let k = canonical_class(pol.n())?;
    let val =
        c.self_intersect() - c.intersect(&k)? + 2 - BigInt::from(2) * pol.self_intersect();
    Ok(val == BigInt::from(0))
}

/// Condition (iii) as an exact emptiness query: `h⁰(C − ξ) = 0`.
pub fn check_speciality(c: &DivisorClass, pol: &Polarization) -> Result<Option<bool>> {
    Ok(speciality_with_rule(c, pol)?.0)
}

fn speciality_with_rule(c: &DivisorClass, pol: &Polarization) -> Result<(Option<bool>, String)> {
    let diff = c.try_sub(pol.class())?;
    let entry = cohomology::report(&diff).h0;
    Ok((
        entry.value.map(|v| v == BigInt::from(0)),
        entry.rule.name().to_string(),
    ))
}

/// Condition (iv) as kernel emptiness: `h⁰(K + 2ξ − C) = 0`, short-circuited
/// to `true` when `2m − 3 < d` (the kernel class has negative degree).
pub fn check_restriction(c: &DivisorClass, pol: &Polarization) -> Result<Option<bool>> {
    Ok(restriction_with_rule(c, pol)?.0)
}

fn restriction_with_rule(c: &DivisorClass, pol: &Polarization) -> Result<(Option<bool>, String)> {
    let two_m_minus_3 = BigInt::from(2) * pol.m() - 3;
    if two_m_minus_3 < *c.degree() {
        // Kernel class has negative degree: injective for degree reasons.
        return Ok((Some(true), "degree_shortcut".into()));
    }
    let k = canonical_class(pol.n())?;
    let kernel = k
        .try_add(&pol.class().scaled(&BigInt::from(2)))?
        .try_sub(c)?;
    let entry = cohomology::report(&kernel).h0;
    Ok((
        entry.value.map(|v| v == BigInt::from(0)),
        entry.rule.name().to_string(),
    ))
}

/// Run the four conditions in order, short-circuiting on a definite failure,
/// and attach a smoothness certificate.
///
/// Rejects the zero class and non-very-ample polarizations. Conditions (iii)
/// and (iv) may come back `Unknown`; a definite failure of any condition
/// makes the overall verdict `NotUlrich` even if another is `Unknown`
/// (conditions (i)–(ii) passing make domain and target of the restriction
/// map equidimensional, so a nonzero kernel is decisive on its own).
pub fn verify(c: &DivisorClass, pol: &Polarization) -> Result<UlrichVerdict> {
    if !pol.very_ample {
        return Err(Error::InvalidInput(format!(
            "polarization (m={}, n={}) is not certified very ample",
            pol.m(),
            pol.n()
        )));
    }
    if c.n() != pol.n() {
        return Err(Error::DimensionMismatch {
            left: c.n(),
            right: pol.n(),
        });
    }
    if c.is_zero() {
        return Err(Error::InvalidInput(
            "the zero class is excluded (O_S is never Ulrich)".into(),
        ));
    }

    let canonical = c.canonical_form();
    let smoothness = cohomology::smooth_irreducible_member(c);
    let whitelist_eligible = on_whitelist(pol.n(), pol.m(), &canonical);

    let cond_i = check_degree(c, pol)?;
    let cond_ii = check_chi(c, pol)?;

    let mut verdict = UlrichVerdict {
        class: c.to_string(),
        canonical: canonical.to_string(),
        n: pol.n(),
        m: pol.m(),
        cond_i,
        cond_ii,
        cond_iii: None,
        cond_iv: None,
        cond_iii_rule: None,
        cond_iv_rule: None,
        smoothness,
        overall: Overall::Ulrich, // replaced below
        whitelist_eligible,
    };

    if !cond_i {
        verdict.overall = Overall::NotUlrich(Condition::Degree);
        return Ok(verdict);
    }
    if !cond_ii {
        verdict.overall = Overall::NotUlrich(Condition::EulerCharacteristic);
        return Ok(verdict);
    }

    let (cond_iii, iii_rule) = speciality_with_rule(c, pol)?;
    verdict.cond_iii = cond_iii;
    verdict.cond_iii_rule = Some(iii_rule);
    if cond_iii == Some(false) {
        verdict.overall = Overall::NotUlrich(Condition::Speciality);
        return Ok(verdict);
    }

    let (cond_iv, iv_rule) = restriction_with_rule(c, pol)?;
    verdict.cond_iv = cond_iv;
    verdict.cond_iv_rule = Some(iv_rule);
    if cond_iv == Some(false) {
        verdict.overall = Overall::NotUlrich(Condition::Restriction);
        return Ok(verdict);
    }

    verdict.overall = match (cond_iii, cond_iv) {
        (Some(true), Some(true)) => {
            if verdict.smoothness.status == cohomology::SmoothnessStatus::Uncertified {
                Overall::Undecided(UndecidedReason::Smoothness)
            } else {
                Overall::Ulrich
            }
        }
        (None, _) => Overall::Undecided(UndecidedReason::OracleGap(Condition::Speciality)),
        (_, None) => Overall::Undecided(UndecidedReason::OracleGap(Condition::Restriction)),
        (Some(false), _) | (_, Some(false)) => unreachable!("failures return early"),
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::polarization;

    fn dc(text: &str) -> DivisorClass {
        text.parse().unwrap()
    }

    fn xi(n: usize, m: i64) -> Polarization {
        polarization(n, m, false).unwrap()
    }

    #[test]
    fn degree_condition() {
        let p = xi(7, 4);
        assert!(check_degree(&dc("(6;2^6,1)"), &p).unwrap()); // 11 = 18 − 7
        assert!(!check_degree(&dc("(1;0^7)"), &p).unwrap()); // 4 ≠ 11
        let p23 = xi(2, 3);
        assert!(check_degree(&dc("(3;0,2)"), &p23).unwrap()); // 7 = 9 − 2
    }

    #[test]
    fn chi_condition() {
        let p = xi(7, 4);
        assert!(check_chi(&dc("(5;2^3,1^3,0)"), &p).unwrap()); // p_a = 3 = d − 2
        assert!(check_chi(&dc("(6;2^6,1)"), &p).unwrap()); // p_a = 4
        assert!(!check_chi(&dc("(1;0^7)"), &p).unwrap()); // p_a = 0, needs −1
    }

    #[test]
    fn speciality_condition() {
        let p = xi(7, 4);
        // (6;2^6,1) − ξ = (2;1^6,0): empty, 6 points on 6 sections.
        assert_eq!(check_speciality(&dc("(6;2^6,1)"), &p).unwrap(), Some(true));
        let p10 = xi(10, 4);
        assert_eq!(check_speciality(&dc("(7;2^10)"), &p10).unwrap(), Some(true));
        // (5;3,1^6) − ξ = (1;2,0^6): outside the ladder.
        assert_eq!(check_speciality(&dc("(5;3,1^6)"), &p).unwrap(), None);
    }

    #[test]
    fn restriction_condition() {
        let p = xi(7, 4);
        // Kernel (0;−2,0^6) has one section: not injective.
        assert_eq!(check_restriction(&dc("(5;3,1^6)"), &p).unwrap(), Some(false));
        // 2m − 3 = 5 < 6: injective outright.
        assert_eq!(check_restriction(&dc("(6;2^6,1)"), &p).unwrap(), Some(true));
        let p10 = xi(10, 4);
        // Kernel (3;1^10) is empty.
        assert_eq!(check_restriction(&dc("(2;0^10)"), &p10).unwrap(), Some(true));
    }

    #[test]
    fn verdict_ulrich() {
        let v = verify(&dc("(6;2^6,1)"), &xi(7, 4)).unwrap();
        assert_eq!(v.overall, Overall::Ulrich);
        assert!(v.cond_i && v.cond_ii);
        assert_eq!(v.cond_iii, Some(true));
        assert_eq!(v.cond_iv, Some(true));
    }

    #[test]
    fn verdict_not_ulrich_iv() {
        let v = verify(&dc("(5;3,1^6)"), &xi(7, 4)).unwrap();
        assert_eq!(v.overall, Overall::NotUlrich(Condition::Restriction));
        // (iii) was undecidable but (iv) failing is decisive.
        assert_eq!(v.cond_iii, None);
        assert_eq!(v.cond_iv, Some(false));
    }

    #[test]
    fn verdict_undecided_smoothness_whitelisted() {
        let v = verify(&dc("(7;2^10)"), &xi(10, 4)).unwrap();
        assert_eq!(v.overall, Overall::Undecided(UndecidedReason::Smoothness));
        assert!(v.cond_i && v.cond_ii);
        assert_eq!(v.cond_iii, Some(true));
        assert_eq!(v.cond_iv, Some(true));
        assert!(v.whitelist_eligible);
        assert!(v.is_ulrich_accepting_whitelist());
    }

    #[test]
    fn del_pezzo_seeds_verify() {
        let p = xi(2, 3);
        for text in ["(3;2,0)", "(3;0,2)"] {
            let v = verify(&dc(text), &p).unwrap();
            assert!(v.cond_i && v.cond_ii);
            assert_eq!(v.cond_iii, Some(true), "{text}");
            assert_eq!(v.cond_iv, Some(true), "{text}");
            assert!(v.is_ulrich_accepting_whitelist(), "{text}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(verify(&dc("(0;0^7)"), &xi(7, 4)).is_err());
        let not_va = polarization(10, 3, false).unwrap();
        assert!(verify(&dc("(6;2^6,1^4)"), &not_va).is_err());
        assert!(verify(&dc("(6;2^6,1)"), &xi(8, 4)).is_err()); // n mismatch
    }

    #[test]
    fn verify_is_permutation_invariant() {
        let p = xi(7, 4);
        for (a, b) in [
            ("(6;2^6,1)", "(6;1,2^6)"),
            ("(5;3,1^6)", "(5;1^3,3,1^3)"),
            ("(4;2,1^3,0^3)", "(4;0,1,2,1,0,1,0)"),
        ] {
            let va = verify(&dc(a), &p).unwrap();
            let vb = verify(&dc(b), &p).unwrap();
            assert_eq!(va.overall, vb.overall);
            assert_eq!(va.canonical, vb.canonical);
        }
    }
}
