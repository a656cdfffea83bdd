//! A sound, incomplete decision procedure for `h⁰`, `h¹`, `h²` of divisor
//! classes on `X_n`.
//!
//! The ladder only applies rules whose hypotheses it can check exactly:
//!
//! 1. strip exceptional fixed parts (negative multiplicities do not move
//!    sections: if `c·E_i < 0` then `E_i` splits off every member);
//! 2. degree obstructions: `d < 0` has no sections, and `d = 0` with a
//!    positive residual multiplicity has none either (the only effective
//!    degree-0 classes are sums of exceptional curves);
//! 3. simple general points impose independent conditions, so a class with
//!    residual multiplicities in `{0, 1}` has `h⁰ = max(0, (d+1)(d+2)/2 − #1s)`;
//! 4. fat-point regularity: `(d; 2^δ, 1^k, 0^*)` with `k ≥ 1` and
//!    `vdim ≥ 0` is regular, so `h⁰ = vdim + 1`;
//! 5. Serre duality `h²(c) = h⁰(K − c)`, and `h¹` via `χ` once `h⁰` is known
//!    and `h²` vanishes (which holds whenever `d > −3`).
//!
//! Anything else is `Unknown`: soundness over completeness. In particular no
//! speciality guesses are made for classes with multiplicities ≥ 3, or for
//! fat-point classes of negative virtual dimension (where genuinely special
//! systems such as `(2;2,2)` and `(4;2^5)` live).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::lattice::DivisorClass;

/// Which ladder rule decided a cohomology entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Degree obstruction: `d < 0`, or `d = 0` with a positive residual
    /// multiplicity.
    NegativeDegree,
    /// An exceptional fixed part was stripped first; the value is the
    /// residual's.
    FixedPartStrip,
    /// Simple general points impose independent conditions.
    SimplePoints,
    /// Regularity of fat-point systems `(d; 2^δ, 1^k, 0^*)`, `k ≥ 1`,
    /// `vdim ≥ 0`.
    FatPointRegularity,
    /// Computed through the Serre dual.
    SerreDuality,
    /// No rule applied.
    Unknown,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::NegativeDegree => "negative_degree",
            Rule::FixedPartStrip => "fixed_part_strip",
            Rule::SimplePoints => "simple_points",
            Rule::FatPointRegularity => "fat_point_regularity",
            Rule::SerreDuality => "serre_duality",
            Rule::Unknown => "unknown",
        }
    }
}

/// One cohomology dimension: the value (if decided) plus the deciding rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub value: Option<BigInt>,
    pub rule: Rule,
}

impl Entry {
    fn known(value: BigInt, rule: Rule) -> Self {
        debug_assert!(!value.is_negative());
        Entry {
            value: Some(value),
            rule,
        }
    }

    fn unknown() -> Self {
        Entry {
            value: None,
            rule: Rule::Unknown,
        }
    }
}

/// `h⁰/h¹/h²` of a class, each entry tagged with the rule that decided it.
///
/// Whenever all three are known, `h⁰ − h¹ + h² = χ` holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub h0: Entry,
    pub h1: Entry,
    pub h2: Entry,
}

/// Split `c` into `(residual, fixed)`: the residual replaces every negative
/// multiplicity by `0`, the fixed part `c − residual` is supported on the
/// exceptional classes with negative multiplicity. `h⁰(c) = h⁰(residual)`.
pub fn strip_fixed_exceptional(c: &DivisorClass) -> (DivisorClass, DivisorClass) {
    let zero = BigInt::zero();
    let residual_mults: Vec<BigInt> = c
        .mults()
        .iter()
        .map(|m| if m.is_negative() { zero.clone() } else { m.clone() })
        .collect();
    let residual = DivisorClass::new(c.degree().clone(), residual_mults).expect("same n");
    let fixed = c.try_sub(&residual).expect("same n");
    (residual, fixed)
}

fn h0_entry(c: &DivisorClass) -> Entry {
    let (residual, fixed) = strip_fixed_exceptional(c);
    let stripped = !fixed.is_zero();
    let tag = |rule: Rule| if stripped { Rule::FixedPartStrip } else { rule };

    let d = residual.degree();
    if d.is_negative() {
        return Entry::known(BigInt::zero(), tag(Rule::NegativeDegree));
    }
    if d.is_zero() && residual.mults().iter().any(|m| m.is_positive()) {
        // Effective degree-0 classes are nonnegative sums of exceptional
        // curves, and the residual has no negative entries left.
        return Entry::known(BigInt::zero(), tag(Rule::NegativeDegree));
    }

    let two = BigInt::from(2);
    if residual.mults().iter().all(|m| m.is_zero() || *m == BigInt::from(1)) {
        // Plane curves of degree d through #1s simple general points.
        let ones = residual.mults().iter().filter(|m| !m.is_zero()).count();
        let plane: BigInt = (d + 1) * (d + 2) / 2;
        let expected: BigInt = plane - BigInt::from(ones as u64);
        let h0 = if expected.is_negative() { BigInt::zero() } else { expected };
        return Entry::known(h0, tag(Rule::SimplePoints));
    }

    let fat_shape = residual
        .mults()
        .iter()
        .all(|m| m.is_zero() || *m == BigInt::from(1) || *m == two);
    let has_simple = residual.mults().iter().any(|m| *m == BigInt::from(1));
    if fat_shape && has_simple && !residual.vdim().is_negative() {
        return Entry::known(residual.chi(), tag(Rule::FatPointRegularity));
    }

    Entry::unknown()
}

fn h2_entry(c: &DivisorClass) -> Entry {
    // h²(c) = h⁰(K − c); for d > −3 the dual has negative degree.
    let dual = c.serre_dual();
    let inner = h0_entry(&dual);
    Entry {
        value: inner.value,
        rule: if inner.rule == Rule::Unknown {
            Rule::Unknown
        } else {
            Rule::SerreDuality
        },
    }
}

fn h1_entry(c: &DivisorClass) -> Entry {
    if c.degree() > &BigInt::from(-3) {
        // h² = 0, so h¹ = h⁰ − χ once h⁰ is known.
        let h0 = h0_entry(c);
        return match h0.value {
            Some(v) => {
                let h1 = v - c.chi();
                debug_assert!(!h1.is_negative(), "h¹ < 0 would mean an unsound h⁰ rule");
                Entry::known(h1, h0.rule)
            }
            None => Entry::unknown(),
        };
    }
    // d ≤ −3: h¹(c) = h¹(K − c) and the dual has degree −3−d ≥ 0.
    let dual = c.serre_dual();
    match h0_entry(&dual).value {
        Some(v) => Entry::known(v - dual.chi(), Rule::SerreDuality),
        None => Entry::unknown(),
    }
}

/// Full report for a class.
pub fn report(c: &DivisorClass) -> CohomologyReport {
    let rep = CohomologyReport {
        h0: h0_entry(c),
        h1: h1_entry(c),
        h2: h2_entry(c),
    };
    if let (Some(a), Some(b), Some(c2)) = (&rep.h0.value, &rep.h1.value, &rep.h2.value) {
        debug_assert_eq!(a - b + c2, c.chi(), "h⁰ − h¹ + h² must equal χ");
    }
    rep
}

/// `h⁰`, or `None` when no rule decides it.
pub fn h0(c: &DivisorClass) -> Option<BigInt> {
    h0_entry(c).value
}

/// `h¹`, or `None` when no rule decides it.
pub fn h1(c: &DivisorClass) -> Option<BigInt> {
    h1_entry(c).value
}

/// `h²`, or `None` when no rule decides it.
pub fn h2(c: &DivisorClass) -> Option<BigInt> {
    h2_entry(c).value
}

/// Whether the linear system is empty; `None` propagates from `h⁰`.
pub fn is_empty(c: &DivisorClass) -> Option<bool> {
    h0(c).map(|v| v.is_zero())
}

// ---------------------------------------------------------------------------
// Smoothness certificates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothnessStatus {
    /// Fat-point shape `(d; 2^δ, 1^k, 0^*)` with `k ≥ 1`, `vdim ≥ 0`, `d ≥ 1`:
    /// the general member is smooth and irreducible.
    CertifiedSmoothIrreducible,
    /// No assigned base points and `d ≥ 1`: a general plane curve.
    CertifiedByBertini,
    Uncertified,
}

/// A smoothness verdict for the general member of `|c|`, with the rule spelt
/// out as text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessCertificate {
    pub status: SmoothnessStatus,
    pub rule: String,
}

/// Certify smoothness and irreducibility of the general member, when one of
/// the two implemented criteria applies to the canonical form.
pub fn smooth_irreducible_member(c: &DivisorClass) -> SmoothnessCertificate {
    let canon = c.canonical_form();
    let one = BigInt::from(1);
    let two = BigInt::from(2);
    let positive_degree = c.degree() >= &one;

    if positive_degree && canon.mults().iter().all(Zero::is_zero) {
        return SmoothnessCertificate {
            status: SmoothnessStatus::CertifiedByBertini,
            rule: "general plane curve with no assigned base points (Bertini)".into(),
        };
    }

    let fat_shape = canon
        .mults()
        .iter()
        .all(|m| m.is_zero() || *m == one || *m == two);
    let has_simple = canon.mults().contains(&one);
    if positive_degree && fat_shape && has_simple && !canon.vdim().is_negative() {
        return SmoothnessCertificate {
            status: SmoothnessStatus::CertifiedSmoothIrreducible,
            rule: "fat-point system (d;2^δ,1^k,0^*) with k ≥ 1 and vdim ≥ 0".into(),
        };
    }

    SmoothnessCertificate {
        status: SmoothnessStatus::Uncertified,
        rule: "no implemented criterion applies".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dc(text: &str) -> DivisorClass {
        text.parse().unwrap()
    }

    fn known(v: i64) -> Option<BigInt> {
        Some(BigInt::from(v))
    }

    #[test]
    fn strip_examples() {
        let (res, fix) = strip_fixed_exceptional(&dc("(0;-2,0^6)"));
        assert_eq!(res, dc("(0;0^7)"));
        assert_eq!(fix, dc("(0;-2,0^6)"));

        let untouched = dc("(2;1^6,0)");
        let (res, fix) = strip_fixed_exceptional(&untouched);
        assert_eq!(res, untouched);
        assert!(fix.is_zero());

        let (res, _) = strip_fixed_exceptional(&dc("(1;-1,0^3,1^3)"));
        assert_eq!(res, dc("(1;0,0^3,1^3)"));
    }

    #[test]
    fn h0_ladder_values() {
        // Simple points: 10 monomial coefficients minus 10 conditions.
        assert_eq!(h0(&dc("(3;1^10)")), known(0));
        assert_eq!(h0(&dc("(0;0^4)")), known(1));
        assert_eq!(h0(&dc("(2;1^6,0^2)")), known(0));
        // A stripped fixed part leaves one rigid section.
        assert_eq!(h0(&dc("(0;-2,0^6)")), known(1));
        // Fat-point regularity.
        assert_eq!(h0(&dc("(4;2,1^3,0^3)")), known(9)); // vdim = 8
        assert_eq!(h0(&dc("(4;2,1^7,0^3)")), known(5)); // vdim = 4
        // Degree obstructions.
        assert_eq!(h0(&dc("(-1;0^5)")), known(0));
        assert_eq!(h0(&dc("(0;2,1,0^3)")), known(0));
        // Genuinely special systems stay undecided.
        assert_eq!(h0(&dc("(2;2,2)")), None);
        assert_eq!(h0(&dc("(4;2^5)")), None);
        assert_eq!(h0(&dc("(5;2^3,0^4)")), None);
    }

    #[test]
    fn h0_rules_are_tagged() {
        let rep = report(&dc("(0;-2,0^6)"));
        assert_eq!(rep.h0.rule, Rule::FixedPartStrip);
        let rep = report(&dc("(3;1^10)"));
        assert_eq!(rep.h0.rule, Rule::SimplePoints);
        let rep = report(&dc("(4;2,1^3,0^3)"));
        assert_eq!(rep.h0.rule, Rule::FatPointRegularity);
        let rep = report(&dc("(-2;0^3)"));
        assert_eq!(rep.h0.rule, Rule::NegativeDegree);
        let rep = report(&dc("(2;2,2)"));
        assert_eq!(rep.h0.rule, Rule::Unknown);
    }

    #[test]
    fn is_empty_examples() {
        assert_eq!(is_empty(&dc("(2;1^6,0^4)")), Some(true));
        assert_eq!(is_empty(&dc("(0;-2,0^6)")), Some(false));
        assert_eq!(is_empty(&dc("(5;2^3,0^4)")), None);
    }

    #[test]
    fn h1_values() {
        // Fat-point regular classes have h¹ = 0.
        assert_eq!(h1(&dc("(6;2^6,1)")), known(0));
        // Plane-curve systems are regular.
        assert_eq!(h1(&dc("(1;0^7)")), known(0));
        assert_eq!(h1(&dc("(0;0^7)")), known(0));
        // Seed difference (0; 2^a, 0^b, (−2)^a) at m = 3 (a = 1): h¹ = (m²−3)/2 = 3.
        assert_eq!(h1(&dc("(0;2,0^3,-2)")), known(3));
        // … and at m = 5 (a = 3, n = 13): h¹ = 11.
        assert_eq!(h1(&dc("(0;2^3,1^7,0^3)").try_sub(&dc("(0;0^3,1^7,2^3)")).unwrap()), known(11));
        // Undecided propagates.
        assert_eq!(h1(&dc("(2;2,2)")), None);
    }

    #[test]
    fn h2_values() {
        assert_eq!(h2(&dc("(5;2^3,1^3,0)")), known(0)); // d > −3
        assert_eq!(h2(&dc("(0;2,0^3,-2)")), known(0));
        // (−4; 0^n): dual is (1; (−1)^n), strip → (1; 0^n), three sections.
        assert_eq!(h2(&dc("(-4;0^6)")), known(3));
    }

    #[test]
    fn report_satisfies_euler_identity() {
        for text in ["(6;2^6,1)", "(0;2,0^3,-2)", "(-4;0^6)", "(3;1^10)", "(0;-2,0^6)"] {
            let c = dc(text);
            let rep = report(&c);
            let (h0, h1, h2) = (
                rep.h0.value.unwrap(),
                rep.h1.value.unwrap(),
                rep.h2.value.unwrap(),
            );
            assert_eq!(h0 - h1 + h2, c.chi(), "χ identity fails for {text}");
        }
    }

    #[test]
    fn smoothness_certificates() {
        let cert = smooth_irreducible_member(&dc("(5;2^3,1^3,0)"));
        assert_eq!(cert.status, SmoothnessStatus::CertifiedSmoothIrreducible);

        let cert = smooth_irreducible_member(&dc("(2;0^10)"));
        assert_eq!(cert.status, SmoothnessStatus::CertifiedByBertini);

        let cert = smooth_irreducible_member(&dc("(7;2^10)"));
        assert_eq!(cert.status, SmoothnessStatus::Uncertified);

        // Permutation invariance: certificates go through the canonical form.
        let cert = smooth_irreducible_member(&dc("(5;0,1^3,2^3)"));
        assert_eq!(cert.status, SmoothnessStatus::CertifiedSmoothIrreducible);
    }

    #[test]
    fn appending_a_simple_point_never_increases_h0() {
        for text in ["(3;1^4)", "(5;1^9,0^2)", "(2;0^3)", "(4;1^14)"] {
            let c = dc(text);
            let mut mults: Vec<i64> = vec![];
            for m in c.mults() {
                mults.push(i64::try_from(m).unwrap());
            }
            mults.push(1);
            let bigger = DivisorClass::from_i64(
                i64::try_from(c.degree()).unwrap(),
                &mults,
            )
            .unwrap();
            assert!(h0(&bigger).unwrap() <= h0(&c).unwrap());
        }
    }
}
