//! Monte Carlo interpolation oracle over a prime field.
//!
//! For a class `(d; m_1, …, m_n)` with nonnegative residual degree, sample
//! `n` distinct random points of `F_p²` and build the matrix whose columns
//! are the `(d+1)(d+2)/2` monomials of degree ≤ d in two affine variables
//! and whose rows are the vanishing conditions: a point of multiplicity `m`
//! contributes the `m(m+1)/2` partial derivatives of order `< m`. Then
//!
//! ```text
//! h⁰ estimate = columns − rank
//! ```
//!
//! Specializing points can only drop the rank, so a single trial
//! over-estimates `h⁰` of very general points; the oracle takes the minimum
//! over trials and with overwhelming probability (for `p ≥ 2²⁰`) returns the
//! very-general value. It exists to cross-check the exact decision ladder and
//! is never consulted by it.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::strip_fixed_exceptional;
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;

/// Parameters for one oracle run. The seed is explicit so concurrent runs are
/// reproducible.
#[derive(Debug, Clone, Copy)]
pub struct OracleParams {
    pub prime: u64,
    pub trials: u32,
    pub seed: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            // 2³¹ − 1, comfortably above the 2²⁰ floor.
            prime: 2_147_483_647,
            trials: 3,
            seed: 0,
        }
    }
}

/// Degree cap: beyond this the condition matrix is too large to be useful as
/// a test oracle.
const MAX_ORACLE_DEGREE: u64 = 64;
/// Cap on total vanishing conditions.
const MAX_CONDITIONS: u64 = 100_000;
/// Attempts to draw a fresh distinct point before giving up.
const COLLISION_RETRY_BUDGET: u32 = 64;

/// Estimate `h⁰` of `c` by finite-field interpolation at random points.
///
/// Errors if the prime is composite or below `2²⁰`, if the residual degree
/// after stripping exceptional fixed parts is negative, or if the matrix
/// would be unreasonably large.
pub fn h0_interpolation(c: &DivisorClass, params: &OracleParams) -> Result<u64> {
    if params.prime < (1 << 20) {
        return Err(Error::OracleFailure(format!(
            "prime {} is below the 2^20 floor",
            params.prime
        )));
    }
    if !is_prime_u64(params.prime) {
        return Err(Error::OracleFailure(format!("{} is not prime", params.prime)));
    }
    if params.trials == 0 {
        return Err(Error::OracleFailure("need at least one trial".into()));
    }

    let (residual, _) = strip_fixed_exceptional(c);
    if residual.degree().is_negative() {
        return Err(Error::OracleFailure(
            "residual degree is negative after stripping".into(),
        ));
    }
    let d = u64::try_from(residual.degree())
        .map_err(|_| Error::OracleFailure("degree too large".into()))?;
    if d > MAX_ORACLE_DEGREE {
        return Err(Error::OracleFailure(format!(
            "degree {d} exceeds the oracle cap {MAX_ORACLE_DEGREE}"
        )));
    }

    let mut mults: Vec<u64> = Vec::new();
    for m in residual.mults() {
        let m = u64::try_from(m).expect("residual multiplicities are nonnegative");
        if m > 0 {
            mults.push(m);
        }
    }
    let conditions: u64 = mults.iter().map(|&m| m * (m + 1) / 2).sum();
    if conditions > MAX_CONDITIONS {
        return Err(Error::OracleFailure(format!(
            "{conditions} vanishing conditions exceed the cap {MAX_CONDITIONS}"
        )));
    }

    let columns = ((d + 1) * (d + 2) / 2) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best_rank = 0usize;
    for _ in 0..params.trials {
        let points = sample_distinct_points(&mut rng, params.prime, mults.len())?;
        let matrix = condition_matrix(d, &mults, &points, params.prime);
        best_rank = best_rank.max(rank_mod_p(matrix, columns, params.prime));
    }
    Ok((columns - best_rank) as u64)
}

fn sample_distinct_points(rng: &mut ChaCha8Rng, p: u64, count: usize) -> Result<Vec<(u64, u64)>> {
    let mut points: Vec<(u64, u64)> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut attempts = 0;
        loop {
            let pt = (rng.gen_range(0..p), rng.gen_range(0..p));
            if !points.contains(&pt) {
                points.push(pt);
                break;
            }
            attempts += 1;
            if attempts > COLLISION_RETRY_BUDGET {
                return Err(Error::OracleFailure(
                    "points kept colliding; prime too small for the point count".into(),
                ));
            }
        }
    }
    Ok(points)
}

/// Rows: for each point of multiplicity m, all ∂_x^a ∂_y^b with a + b < m.
/// Columns: monomials x^α y^β with α + β ≤ d, ordered by total degree then α.
/// The (row, column) entry is α!/(α−a)! · β!/(β−b)! · x^{α−a} y^{β−b} mod p.
fn condition_matrix(d: u64, mults: &[u64], points: &[(u64, u64)], p: u64) -> Vec<Vec<u64>> {
    let mut monomials: Vec<(u64, u64)> = Vec::new();
    for total in 0..=d {
        for alpha in 0..=total {
            monomials.push((alpha, total - alpha));
        }
    }

    let mut rows = Vec::new();
    for (&m, &(x, y)) in mults.iter().zip(points) {
        // Powers of the coordinates up to degree d, computed once per point.
        let xp = powers(x, d, p);
        let yp = powers(y, d, p);
        for a in 0..m {
            for b in 0..(m - a) {
                let row: Vec<u64> = monomials
                    .iter()
                    .map(|&(alpha, beta)| {
                        if alpha < a || beta < b {
                            0
                        } else {
                            let c = mulmod(
                                falling_factorial(alpha, a, p),
                                falling_factorial(beta, b, p),
                                p,
                            );
                            mulmod(c, mulmod(xp[(alpha - a) as usize], yp[(beta - b) as usize], p), p)
                        }
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    rows
}

fn powers(x: u64, up_to: u64, p: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(up_to as usize + 1);
    let mut acc = 1u64;
    v.push(acc);
    for _ in 0..up_to {
        acc = mulmod(acc, x % p, p);
        v.push(acc);
    }
    v
}

fn falling_factorial(n: u64, k: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    for i in 0..k {
        acc = mulmod(acc, (n - i) % p, p);
    }
    acc
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, columns: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..columns {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = powmod(rows[rank][col], p - 2, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = mulmod(rows[r][col], inv, p);
                let pivot_row = rows[rank].clone();
                for (entry, pe) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                    let sub = mulmod(factor, *pe, p);
                    *entry = (*entry + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Deterministic Miller–Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
