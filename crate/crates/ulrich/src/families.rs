//! Parametric families of Ulrich line bundles on `X_n`.
//!
//! Fix `n ≥ 3` and `m ≤ 2√n` with `ξ_{n,m}` very ample. For every positive
//! integer `d` with
//!
//! ```text
//! (2d − (2m−3))² ≤ 8n + 1          (closed)
//! (2d − 3(m−1))² < 4n − m² + 1     (strict)
//! ```
//!
//! the class `(d; 2^δ, 1^k, 0^{n−δ−k})` with
//!
//! ```text
//! δ = (d−m)(d−m+3)/2 + 1
//! k = n + 3m(d+1) − m(5m−3)/2 − (d² + 3d + 2)
//! ```
//!
//! is an Ulrich line bundle with respect to `ξ_{n,m}` (as are its
//! multiplicity permutations). The strict inequality forces `k ≥ 1`, which
//! is what certifies smoothness; at the boundary (equality) `k = 0` and
//! smoothness needs a separate argument, but the numeric conditions still
//! hold. The number of such `d` grows without bound along `n = k²`, which is
//! the growth witness exposed by [`family_count`].

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{polarization, DivisorClass};
use crate::verify;

/// One member of the parametric family, in canonical form.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyRecord {
    pub n: usize,
    pub m: i64,
    pub d: i64,
    pub delta: u64,
    pub k: u64,
    /// Canonical class `(d; 2^δ, 1^k, 0^{n−δ−k})`, printed in exponential
    /// notation.
    pub class: String,
    /// `k = 0`: the record sits at the boundary of the strict inequality and
    /// carries no smoothness certificate of its own.
    pub boundary: bool,
}

impl FamilyRecord {
    pub fn divisor_class(&self) -> DivisorClass {
        self.class.parse().expect("records hold valid class text")
    }
}

fn check_generator_domain(n: usize, m: i64, allow_conjectural: bool) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "family generation needs n >= 3 (got n = {n}); n = 2 is only \
             available through the m = 3 special case"
        )));
    }
    if m < 1 || (m as i128) * (m as i128) > 4 * n as i128 {
        return Err(Error::InvalidInput(format!(
            "need 1 <= m <= 2*sqrt(n), got m = {m} at n = {n}"
        )));
    }
    let pol = polarization(n, m, allow_conjectural)?;
    if !pol.very_ample {
        return Err(Error::InvalidInput(format!(
            "xi(n={n}, m={m}) is not certified very ample"
        )));
    }
    Ok(())
}

/// Floor of the square root for nonnegative `i128`.
fn isqrt(v: i128) -> i128 {
    debug_assert!(v >= 0);
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as i128;
    // The float only seeds the search; the result is fixed up exactly.
    while x > 0 && x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

/// Solutions of `(2d − center)² ≤ bound` as a closed integer interval in `d`
/// (empty when `bound < 0`).
fn quadratic_band(center: i128, bound: i128) -> Option<(i128, i128)> {
    if bound < 0 {
        return None;
    }
    let s = isqrt(bound);
    // center − s ≤ 2d ≤ center + s
    let lo = (center - s).div_euclid(2) + ((center - s).rem_euclid(2) != 0) as i128;
    let hi = (center + s).div_euclid(2);
    (lo <= hi).then_some((lo, hi))
}

fn d_interval(n: usize, m: i64) -> Option<(i128, i128)> {
    let n = n as i128;
    let m = m as i128;
    let (lo1, hi1) = quadratic_band(2 * m - 3, 8 * n + 1)?;
    // Strict: (2d − 3(m−1))² < 4n − m² + 1  ⟺  … ≤ 4n − m².
    let (lo2, hi2) = quadratic_band(3 * (m - 1), 4 * n - m * m)?;
    let lo = lo1.max(lo2).max(1);
    let hi = hi1.min(hi2);
    (lo <= hi).then_some((lo, hi))
}

/// All admissible degrees `d`, sorted ascending.
pub fn d_range(n: usize, m: i64, allow_conjectural: bool) -> Result<Vec<i64>> {
    check_generator_domain(n, m, allow_conjectural)?;
    let Some((lo, hi)) = d_interval(n, m) else {
        return Ok(Vec::new());
    };
    Ok((lo..=hi).map(|d| d as i64).collect())
}

/// `(δ, k)` for a degree `d`, checking `0 ≤ δ ≤ n`, `0 ≤ k ≤ n`,
/// `δ + k ≤ n`. A `d` outside the admissible band trips one of the bounds.
pub fn delta_k(n: usize, m: i64, d: i64) -> Result<(u64, u64)> {
    let (nn, mm, dd) = (n as i128, m as i128, d as i128);
    let delta = (dd - mm) * (dd - mm + 3) / 2 + 1;
    let k = nn + 3 * mm * (dd + 1) - mm * (5 * mm - 3) / 2 - (dd * dd + 3 * dd + 2);
    let bound = |name: &str, v: i128| -> Result<u64> {
        if v < 0 || v > nn {
            return Err(Error::Contract(format!(
                "{name} = {v} escapes [0, n] at (n, m, d) = ({n}, {m}, {d})"
            )));
        }
        Ok(v as u64)
    };
    let delta = bound("delta", delta)?;
    let k = bound("k", k)?;
    if delta + k > n as u64 {
        return Err(Error::Contract(format!(
            "delta + k = {} exceeds n at (n, m, d) = ({n}, {m}, {d})",
            delta + k
        )));
    }
    Ok((delta, k))
}

fn build_record(
    n: usize,
    m: i64,
    d: i64,
    delta: u64,
    k: u64,
    boundary: bool,
    allow_conjectural: bool,
) -> Result<FamilyRecord> {
    let zeros = n as u64 - delta - k;
    let mut mults = Vec::with_capacity(n);
    mults.extend(std::iter::repeat_n(BigInt::from(2), delta as usize));
    mults.extend(std::iter::repeat_n(BigInt::from(1), k as usize));
    mults.extend(std::iter::repeat_n(BigInt::from(0), zeros as usize));
    let class = DivisorClass::new(BigInt::from(d), mults)?;

    // Every record must carry virtual dimension m² − n − 1 and pass
    // verification (boundary records may be undecided on smoothness only).
    let expected_vdim = BigInt::from(m) * m - n as i64 - 1;
    if class.vdim() != expected_vdim {
        return Err(Error::Contract(format!(
            "family record {class} has vdim {} instead of m^2 - n - 1 = {expected_vdim}",
            class.vdim()
        )));
    }
    let pol = polarization(n, m, allow_conjectural)?;
    let verdict = verify::verify(&class, &pol)?;
    let ok = if boundary {
        verdict.is_ulrich_accepting_whitelist()
            || matches!(
                verdict.overall,
                verify::Overall::Undecided(verify::UndecidedReason::Smoothness)
            )
    } else {
        verdict.overall == verify::Overall::Ulrich
    };
    if !ok {
        return Err(Error::Contract(format!(
            "family record {class} failed verification: {:?}",
            verdict.overall
        )));
    }

    Ok(FamilyRecord {
        n,
        m,
        d,
        delta,
        k,
        class: class.to_string(),
        boundary,
    })
}

/// The full strict-range family for `(n, m)`: one canonical record per
/// admissible `d`. The pair `(n, m) = (2, 3)` is special-cased to the known
/// boundary seed `(3;2,0)`.
pub fn theorem_family(n: usize, m: i64, allow_conjectural: bool) -> Result<Vec<FamilyRecord>> {
    if n == 2 && m == 3 {
        return Ok(vec![build_record(2, 3, 3, 1, 0, true, false)?]);
    }
    d_range(n, m, allow_conjectural)?
        .into_iter()
        .map(|d| {
            let (delta, k) = delta_k(n, m, d)?;
            if k == 0 {
                return Err(Error::Contract(format!(
                    "strict range produced k = 0 at (n, m, d) = ({n}, {m}, {d})"
                )));
            }
            build_record(n, m, d, delta, k, false, allow_conjectural)
        })
        .collect()
}

/// Boundary records: degrees where the strict inequality is exactly tight,
/// so `k = 0`. Verification of these may stay undecided on smoothness.
pub fn boundary_candidates(n: usize, m: i64, allow_conjectural: bool) -> Result<Vec<FamilyRecord>> {
    if n == 2 && m == 3 {
        return Ok(vec![build_record(2, 3, 3, 1, 0, true, false)?]);
    }
    check_generator_domain(n, m, allow_conjectural)?;
    let (nn, mm) = (n as i128, m as i128);
    let q = 4 * nn - mm * mm + 1;
    let s = isqrt(q);
    if s * s != q {
        return Ok(Vec::new()); // no integer solutions of the equality
    }
    let center = 3 * (mm - 1);
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for t in [-s, s] {
        let two_d = center + t;
        if two_d % 2 != 0 {
            continue;
        }
        let d = two_d / 2;
        if d < 1 || !seen.insert(d) {
            continue;
        }
        // Still subject to the closed band (2.1-type bound).
        let band = 2 * d - (2 * mm - 3);
        if band * band > 8 * nn + 1 {
            continue;
        }
        let (delta, k) = delta_k(n, m, d as i64)?;
        debug_assert_eq!(k, 0, "equality in the strict bound means k = 0");
        out.push(build_record(n, m, d as i64, delta, k, true, allow_conjectural)?);
    }
    Ok(out)
}

/// The growth witness: pick the minimal very-ample `m` (which satisfies
/// `m² < 4n` for `n ≥ 3`) and count the admissible degrees. Counting uses
/// the interval arithmetic directly, so it stays cheap at large `n`.
pub fn family_count(n: usize) -> Result<(i64, u64)> {
    if n < 3 {
        return Err(Error::InvalidInput("family_count needs n >= 3".into()));
    }
    let m = crate::lattice::minimal_very_ample_m(n)?;
    check_generator_domain(n, m, false)?;
    let count = match d_interval(n, m) {
        Some((lo, hi)) => (hi - lo + 1) as u64,
        None => 0,
    };
    Ok((m, count))
}
