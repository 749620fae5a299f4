//! Acceptance suite: runs every criterion at its stated tolerance and prints
//! one pass/fail line per criterion (visible with --nocapture).

use signdeg::acceptance::{run_criterion, CRITERIA};

macro_rules! criterion_test {
    ($name:ident, $id:expr) => {
        #[test]
        fn $name() {
            let result = run_criterion($id).expect("criterion id valid");
            println!("{}", result.line());
            assert!(result.passed, "{}", result.line());
        }
    };
}

criterion_test!(criterion_01_gordan_duality_exhaustive, 1);
criterion_test!(criterion_02_chebyshev_strong_duality, 2);
criterion_test!(criterion_03_binomial_identities, 3);
criterion_test!(criterion_04_newman_error_bounds, 4);
criterion_test!(criterion_05_exact_interpolant_bracket, 5);
criterion_test!(criterion_06_sign_pattern_infeasibility, 6);
criterion_test!(criterion_07_halfspace_moment_coupling, 7);
criterion_test!(criterion_08_halfspace_criterion_certificate, 8);
criterion_test!(criterion_09_majority_bracket_sandwich, 9);
criterion_test!(criterion_10_conjunction_sign_representations, 10);
criterion_test!(criterion_11_conjunction_converse_brackets, 11);
criterion_test!(criterion_12_direct_product_lower_bounds, 12);
criterion_test!(criterion_13_halfspace_digit_automaton, 13);
criterion_test!(criterion_14_threshold_density, 14);
criterion_test!(criterion_15_deterministic_outputs, 15);

#[test]
fn criteria_table_is_complete() {
    assert_eq!(CRITERIA.len(), 15);
    for (i, (id, _)) in CRITERIA.iter().enumerate() {
        assert_eq!(*id, i + 1);
    }
}
