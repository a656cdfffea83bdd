//! Higher-rank Ulrich numerology: seed pairs, Euler characteristics of the
//! iterated extension bundles, moduli dimensions and the wildness witness.
//!
//! Starting from two Ulrich line bundles `L_0`, `L_1` of the same degree with
//! `h := h¹(L_0 − L_1) = h¹(L_1 − L_0) ≥ 3` and
//! `h⁰ = h² = 0` for both differences, rank-`r` Ulrich bundles `E_r` arise by
//! iterated non-split extensions
//!
//! ```text
//! 0 → E_r → E_{r+1} → L_{ε_{r+1}} → 0,     ε_r = r mod 2.
//! ```
//!
//! Everything this module computes depends only on `h` and `r`:
//!
//! * `χ(E_r ⊗ L*_{ε_{r+1}}) = −⌊(r+1)/2⌋(h−1) − ε_r`
//! * `χ(L_{ε_r} ⊗ E_r*)    = −⌊(r+1)/2⌋(h−1) + ε_r·h`
//! * `χ(E_r ⊗ E_r*)        = −½(r² − ε_r)(h−1) + ε_r`
//! * `h¹(E_r ⊗ L*_{ε_{r+1}}) = ⌊(r+1)/2⌋(h−1) + 1`
//! * moduli dimension of rank-`r` bundles: `½(r² − ε_r)(h−1) + ε_{r+1}`,
//!   which equals `1 − χ(E_r ⊗ E_r*)`
//! * the extension stratum inside the rank-`r` moduli has dimension at most
//!   `dim U(r−1) + ⌊r/2⌋(h−1)`, strictly below `dim U(r)`.
//!
//! The quadratic growth of the moduli dimension in `r` is the Ulrich
//! wildness witness. Bundles and moduli spaces are never materialized; only
//! the integer invariants are.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{polarization, DivisorClass};
use crate::verify;

/// The seed pair of Ulrich line bundles used to start the extension ladder.
#[derive(Debug, Clone)]
pub struct SeedPair {
    pub l0: DivisorClass,
    pub l1: DivisorClass,
    /// `h = h¹(L_0 − L_1) = h¹(L_1 − L_0)`: `(m²−3)/2` for odd `m`,
    /// `(m²−m−2)/2` for even `m`.
    pub h: i128,
    /// Common degree against the polarization: `L_i·ξ = 3m(m−1)/2 − n`.
    pub mu: i128,
}

fn seed_blocks(n: usize, m: i64) -> (i64, usize, usize, usize) {
    // Returns (degree, #2s, #1s, #0s) for L_1; L_0 mirrors the 2- and
    // 0-blocks.
    let (mm, nn) = (m as i128, n as i128);
    if m % 2 != 0 {
        let a = ((mm * mm - 1) / 8) as usize;
        let b = (nn - (mm * mm - 1) / 4) as usize;
        ((3 * (m - 1) / 2), a, b, a)
    } else {
        let a = ((mm * (mm + 2)) / 8) as usize;
        let b = (nn - mm * mm / 4) as usize;
        let c = ((mm * (mm - 2)) / 8) as usize;
        ((3 * m / 2 - 1), a, b, c)
    }
}

/// Build and validate the seed pair for `(n, m)`.
///
/// Domain: `n = 2` with `m = 3`, or `n ≥ 3` with `ξ_{n,m}` very ample,
/// `m² < 4n`, and for even `m` additionally `n ≥ m(m+2)/4` (below that the
/// 2-block of `L_1` overlaps the 2-block of `L_0` and the closed form for
/// `h` no longer matches the lattice computation; such pairs are rejected
/// rather than silently reinterpreted).
///
/// `h` is computed twice — closed form and `−χ(L_1 − L_0)` through the
/// lattice — and the call fails loudly on disagreement.
///
/// `allow_conjectural` widens the very-ampleness certificate to the
/// conjectural criterion, exactly as in [`polarization`].
pub fn seed_pair(n: usize, m: i64, allow_conjectural: bool) -> Result<SeedPair> {
    if n < 2 {
        return Err(Error::InvalidInput("seed_pair needs n >= 2".into()));
    }
    if n == 2 && m != 3 {
        return Err(Error::InvalidInput("at n = 2 the only seed degree is m = 3".into()));
    }
    if n >= 3 {
        let (mm, nn) = (m as i128, n as i128);
        if m < 3 || mm * mm >= 4 * nn {
            return Err(Error::InvalidInput(format!(
                "need 3 <= m < 2*sqrt(n), got m = {m} at n = {n}"
            )));
        }
        if m % 2 == 0 && nn < mm * (mm + 2) / 4 {
            return Err(Error::InvalidInput(format!(
                "even m = {m} needs n >= m(m+2)/4 = {} for the seed blocks to \
                 stay disjoint (got n = {n})",
                mm * (mm + 2) / 4
            )));
        }
    }
    let pol = polarization(n, m, allow_conjectural)?;
    if !pol.very_ample {
        return Err(Error::InvalidInput(format!(
            "xi(n={n}, m={m}) is not certified very ample"
        )));
    }

    let (d, twos, ones, zeros) = seed_blocks(n, m);
    debug_assert_eq!(twos + ones + zeros, n);
    let block = |a: usize, b: usize, c: usize| -> DivisorClass {
        let mut mults = Vec::with_capacity(n);
        mults.extend(std::iter::repeat_n(BigInt::from(2), a));
        mults.extend(std::iter::repeat_n(BigInt::from(1), b));
        mults.extend(std::iter::repeat_n(BigInt::from(0), c));
        DivisorClass::new(BigInt::from(d), mults).expect("n >= 1")
    };
    let l1 = block(twos, ones, zeros);
    let l0 = {
        // Mirror: 0-block first, 2-block last, 1-block in place.
        let mut mults = Vec::with_capacity(n);
        mults.extend(std::iter::repeat_n(BigInt::from(0), zeros));
        mults.extend(std::iter::repeat_n(BigInt::from(1), ones));
        mults.extend(std::iter::repeat_n(BigInt::from(2), twos));
        DivisorClass::new(BigInt::from(d), mults).expect("n >= 1")
    };

    // h from the closed form…
    let mm = m as i128;
    let h = if m % 2 != 0 {
        (mm * mm - 3) / 2
    } else {
        (mm * mm - mm - 2) / 2
    };
    // …must match −χ of both differences computed through the lattice.
    for (a, b) in [(&l1, &l0), (&l0, &l1)] {
        let diff = a.try_sub(b)?;
        let neg_chi = -diff.chi();
        if neg_chi != BigInt::from(h) {
            return Err(Error::Contract(format!(
                "closed-form h = {h} disagrees with -chi({}) = {neg_chi} at (n, m) = ({n}, {m})",
                diff
            )));
        }
    }
    if h < 3 {
        return Err(Error::Contract(format!("h = {h} < 3 at (n, m) = ({n}, {m})")));
    }

    // Both seeds must be Ulrich (the n = 2 seed through the whitelist).
    for l in [&l0, &l1] {
        let verdict = verify::verify(l, &pol)?;
        if !verdict.is_ulrich_accepting_whitelist() {
            return Err(Error::Contract(format!(
                "seed {l} failed Ulrich verification: {:?}",
                verdict.overall
            )));
        }
    }

    let mu_big = l0.intersect(pol.class())?;
    debug_assert_eq!(mu_big, l1.intersect(pol.class())?);
    let mu = i128::try_from(&mu_big)
        .map_err(|_| Error::InvalidInput("slope exceeds i128".into()))?;
    debug_assert_eq!(mu, 3 * mm * (mm - 1) / 2 - n as i128);

    Ok(SeedPair { l0, l1, h, mu })
}

/// Parity flag `ε_r`: 1 for odd `r`, 0 for even.
pub fn epsilon(r: u64) -> i128 {
    (r % 2) as i128
}

fn check_rh(r: u64, h: i128) {
    assert!(r >= 1, "rank must be >= 1");
    assert!(h >= 3, "h must be >= 3");
}

/// `χ(E_r ⊗ L*_{ε_{r+1}}) = −⌊(r+1)/2⌋(h−1) − ε_r`.
pub fn chi_e_l(r: u64, h: i128) -> i128 {
    check_rh(r, h);
    -((r as i128 + 1) / 2) * (h - 1) - epsilon(r)
}

/// `χ(L_{ε_r} ⊗ E_r*) = −⌊(r+1)/2⌋(h−1) + ε_r·h`.
pub fn chi_l_e(r: u64, h: i128) -> i128 {
    check_rh(r, h);
    -((r as i128 + 1) / 2) * (h - 1) + epsilon(r) * h
}

/// `χ(E_r ⊗ E_r*) = −½(r² − ε_r)(h−1) + ε_r`.
pub fn chi_end(r: u64, h: i128) -> i128 {
    check_rh(r, h);
    let r = r as i128;
    -((r * r - r % 2) / 2) * (h - 1) + r % 2
}

/// `h¹(E_r ⊗ L*_{ε_{r+1}}) = ⌊(r+1)/2⌋(h−1) + 1`; always ≥ h ≥ 3, which is
/// what guarantees non-split extensions exist at every rank.
pub fn h1_e_l(r: u64, h: i128) -> i128 {
    check_rh(r, h);
    ((r as i128 + 1) / 2) * (h - 1) + 1
}

/// Dimension of the rank-`r` moduli component:
/// `½(r² − ε_r)(h−1) + ε_{r+1} = 1 − χ(E_r ⊗ E_r*)`.
///
/// For `r = 1` this is 0: line bundles on a rational surface are rigid.
pub fn moduli_dim(r: u64, h: i128) -> i128 {
    check_rh(r, h);
    let r_i = r as i128;
    let dim = ((r_i * r_i - r_i % 2) / 2) * (h - 1) + epsilon(r + 1);
    debug_assert_eq!(dim, 1 - chi_end(r, h));
    dim
}

/// Upper bound for the stratum of rank-`r` bundles that are extensions of a
/// line bundle by a rank-`(r−1)` member:
/// `dim U(r−1) + dim P(Ext¹) ≤ dim U(r−1) + ⌊r/2⌋(h−1)`.
///
/// Strictly below [`moduli_dim`]`(r, h)` for every `r ≥ 2`, `h ≥ 3` — the
/// general rank-`r` member is *not* such an extension.
pub fn ext_stratum_bound(r: u64, h: i128) -> Result<i128> {
    if r < 2 {
        return Err(Error::InvalidInput(
            "no extension stratum at rank 1".into(),
        ));
    }
    check_rh(r, h);
    Ok(moduli_dim(r - 1, h) + (r as i128 / 2) * (h - 1))
}

/// One row of the wildness table.
#[derive(Debug, Clone, Serialize)]
pub struct RankProfile {
    pub r: u64,
    pub epsilon: i128,
    pub slope: i128,
    pub chi_e_l: i128,
    pub chi_l_e: i128,
    pub chi_end: i128,
    pub h1_e_l: i128,
    pub moduli_dim: i128,
    /// `None` at rank 1 (no extension stratum).
    pub ext_bound: Option<i128>,
}

/// Profiles for ranks `1..=r_max` over the `(n, m)` seed pair. The moduli
/// dimension grows like `r²(h−1)/2`: families of non-isomorphic Ulrich
/// bundles of unbounded dimension.
pub fn wildness_table(
    n: usize,
    m: i64,
    r_max: u64,
    allow_conjectural: bool,
) -> Result<Vec<RankProfile>> {
    if r_max < 1 {
        return Err(Error::InvalidInput("r_max must be >= 1".into()));
    }
    let seed = seed_pair(n, m, allow_conjectural)?;
    let h = seed.h;
    Ok((1..=r_max)
        .map(|r| RankProfile {
            r,
            epsilon: epsilon(r),
            slope: seed.mu,
            chi_e_l: chi_e_l(r, h),
            chi_l_e: chi_l_e(r, h),
            chi_end: chi_end(r, h),
            h1_e_l: h1_e_l(r, h),
            moduli_dim: moduli_dim(r, h),
            ext_bound: (r >= 2).then(|| ext_stratum_bound(r, h).expect("r >= 2")),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_pairs() {
        let s = seed_pair(2, 3, false).unwrap();
        assert_eq!(s.l1.to_string(), "(3;2,0)");
        assert_eq!(s.l0.to_string(), "(3;0,2)");
        assert_eq!((s.h, s.mu), (3, 7));

        let s = seed_pair(7, 4, false).unwrap();
        assert_eq!(s.l1.to_string(), "(5;2^3,1^3,0)");
        assert_eq!(s.l0.to_string(), "(5;0,1^3,2^3)");
        assert_eq!((s.h, s.mu), (5, 11));

        // Very ample only under the conjectural criterion.
        assert!(seed_pair(13, 5, false).is_err());
        let s = seed_pair(13, 5, true).unwrap();
        assert_eq!(s.l1.to_string(), "(6;2^3,1^7,0^3)");
        assert_eq!(s.h, 11);
    }

    #[test]
    fn seed_pair_domain() {
        assert!(seed_pair(1, 2, false).is_err());
        assert!(seed_pair(2, 4, false).is_err());
        assert!(seed_pair(7, 6, false).is_err()); // m² ≥ 4n
        assert!(seed_pair(30, 4, false).is_err()); // not very ample
        // Even m with overlapping blocks: n < m(m+2)/4.
        assert!(seed_pair(5, 4, false).is_err());
        assert!(seed_pair(10, 6, false).is_err());
        assert!(seed_pair(11, 6, false).is_err());
        // …but fine once the blocks fit.
        assert!(seed_pair(6, 4, false).is_ok());
        assert!(seed_pair(12, 6, false).is_ok());
    }

    #[test]
    fn epsilon_parity() {
        assert_eq!(epsilon(1), 1);
        assert_eq!(epsilon(2), 0);
        assert_eq!(epsilon(0), 0);
    }

    #[test]
    fn chi_closed_forms_at_small_rank() {
        for h in [3i128, 5, 11] {
            assert_eq!(chi_e_l(1, h), -h);
            assert_eq!(chi_e_l(2, h), 1 - h);
            assert_eq!(chi_l_e(1, h), 1);
            assert_eq!(chi_l_e(2, h), 1 - h);
            assert_eq!(chi_end(1, h), 1);
            assert_eq!(chi_end(2, h), -2 * (h - 1));
            assert_eq!(h1_e_l(1, h), h);
        }
        assert_eq!(chi_e_l(3, 3), -5);
        assert_eq!(chi_l_e(4, 5), -8);
        assert_eq!(chi_end(5, 3), -23);
        assert_eq!(h1_e_l(2, 3), 3);
        assert_eq!(h1_e_l(3, 5), 9);
    }

    #[test]
    fn moduli_dims() {
        assert_eq!(moduli_dim(1, 3), 0);
        assert_eq!(moduli_dim(2, 3), 5);
        assert_eq!(moduli_dim(2, 5), 9);
        assert_eq!(moduli_dim(3, 3), 8);
        assert_eq!(moduli_dim(4, 3), 17);
    }

    #[test]
    fn ext_bounds() {
        assert_eq!(ext_stratum_bound(2, 3).unwrap(), 2);
        assert_eq!(ext_stratum_bound(3, 3).unwrap(), 7);
        assert!(ext_stratum_bound(1, 3).is_err());
        for r in 2..=50u64 {
            for h in 3..=12i128 {
                assert!(ext_stratum_bound(r, h).unwrap() < moduli_dim(r, h));
            }
        }
    }

    #[test]
    fn wildness_tables() {
        let dims: Vec<i128> = wildness_table(2, 3, 4, false)
            .unwrap()
            .iter()
            .map(|p| p.moduli_dim)
            .collect();
        assert_eq!(dims, [0, 5, 8, 17]);

        let dims: Vec<i128> = wildness_table(7, 4, 2, false)
            .unwrap()
            .iter()
            .map(|p| p.moduli_dim)
            .collect();
        assert_eq!(dims, [0, 9]);

        let table = wildness_table(7, 4, 5, false).unwrap();
        assert!(table.iter().all(|p| p.slope == 11));
        assert_eq!(table[0].ext_bound, None);
    }
}
