//! Exact arithmetic for Ulrich line bundles on blown-up projective planes.
//!
//! Let `X_n` be the complex projective plane blown up at `n` very general
//! points and `ξ_{n,m} = (m; 1^n)` the class of plane curves of degree `m`
//! through the points. This crate enumerates, verifies and classifies the
//! Ulrich line bundles on `X_n` with respect to `ξ_{n,m}`, and computes the
//! Euler characteristics, extension-space dimensions and moduli dimensions of
//! the higher-rank Ulrich bundles obtained from them by iterated extensions.
//!
//! Everything is decided in exact integer arithmetic. Inequalities that in
//! closed form involve square roots are squared out; cohomology is decided by
//! a sound (possibly incomplete) rule ladder that reports `Unknown` rather
//! than guess; a randomized finite-field interpolation oracle is available as
//! an independent cross-check but is never consulted by the decision paths.
//!
//! ```
//! use ulrich::lattice::{parse_class, polarization};
//! use ulrich::verify::{verify, Overall};
//!
//! let xi = polarization(7, 4, false).unwrap();
//! let c = parse_class("(6;2^6,1)").unwrap();
//! let verdict = verify(&c, &xi).unwrap();
//! assert_eq!(verdict.overall, Overall::Ulrich);
//! ```

pub mod classify;
pub mod cohomology;
mod error;
pub mod families;
pub mod higher_rank;
pub mod interpolation;
pub mod lattice;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{parse_class, DivisorClass, Polarization};

// The guide's code blocks double as doc-tests so the book can never drift
// from the library. Collected only when rustdoc gathers doctests.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(lattice, "../../../book/src/lattice.md");
    chapter!(cohomology, "../../../book/src/cohomology.md");
    chapter!(ulrich_conditions, "../../../book/src/ulrich-conditions.md");
    chapter!(families, "../../../book/src/families.md");
    chapter!(classification, "../../../book/src/classification.md");
    chapter!(higher_rank, "../../../book/src/higher-rank.md");
    chapter!(cli, "../../../book/src/cli.md");
}
