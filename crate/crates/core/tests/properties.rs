#[path = "common/properties.rs"]
mod properties;

use properties::*;

fn check(p: Property) {
    if let Err(e) = p() {
        panic!("{e}");
    }
}

#[test]
fn gamma() {
    check(gamma_bounds_to_g_minus_one);
}

#[test]
fn suffix_closure() {
    check(cells_are_closed_under_suffixes);
}

#[test]
fn smith_determinantal() {
    check(smith_matches_determinantal_divisors);
}

#[test]
fn smith_unimodular() {
    check(smith_transforms_are_unimodular);
}

#[test]
fn smith_multimodular() {
    check(multimodular_smith_matches_exact);
}

#[test]
fn cyclotomic_mod_p() {
    check(cyclotomic_reduction_mod_p);
}

#[test]
fn cyclotomic_t20() {
    check(t20_minus_one_over_t_plus_one);
}

#[test]
fn laurent_at_units() {
    check(laurent_at_plus_minus_one_is_trivial_and_sign);
}

#[test]
fn engine_resume() {
    check(engine_is_deterministic_and_resumable);
}
