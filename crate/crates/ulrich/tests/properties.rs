//! Standalone randomized property suites (deterministic seeds, 10^4 cases
//! each). Run with `cargo test --test properties`.

#[path = "property_support/mod.rs"]
mod property_support;

const CASES: usize = 10_000;

#[test]
fn intersection_is_symmetric_and_bilinear() {
    property_support::bilinearity(CASES);
}

#[test]
fn chi_matches_riemann_roch_on_random_classes() {
    property_support::riemann_roch_identity(CASES);
}

#[test]
fn class_text_round_trips() {
    property_support::parse_print_round_trip(CASES);
}

#[test]
fn verification_is_permutation_invariant() {
    property_support::verify_permutation_invariance(CASES);
}
