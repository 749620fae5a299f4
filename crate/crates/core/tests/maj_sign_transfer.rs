//! Transfer between majority on the cube and the sign function on an integer
//! grid: for n in {3,5,7} and d in {1,2,3},
//!   upper(R+(MAJ_n, d))  <=  upper(R+(d-2, ±{1..ceil(n/2)}))  + slack,
//!   lower(R+(MAJ_n, d))  >=  lower(R+(d,   ±{1..floor(n/2)})) - slack,
//! with certified brackets on both sides and slack equal to the bracket
//! precision. Degrees below zero on the univariate side mean no polynomial is
//! available, so the corresponding upper bound is the trivial 1.

use signdeg::boolfun::{make_named, DomainCap, Family};
use signdeg::rat::{rat, ratio, Rat};
use signdeg::rational::{integer_sign_grid, rational_error_bracket, sign_function_on};

#[test]
fn majority_brackets_transfer_to_sign_brackets() {
    let precision = ratio(1, 16);
    for n in [3usize, 5, 7] {
        let maj = make_named(&Family::Majority { n }, DomainCap::default()).unwrap();
        for d in 1..=3i64 {
            let maj_bracket = rational_error_bracket(&maj, d, &precision).unwrap();
            // upper transfer via the corrective lift from ±{1..ceil(n/2)}
            let up_grid = sign_function_on(&integer_sign_grid((n as u64 + 1) / 2)).unwrap();
            let univ_upper = if d - 2 >= 0 {
                rational_error_bracket(&up_grid, d - 2, &precision)
                    .unwrap()
                    .upper
            } else {
                rat(1)
            };
            assert!(
                maj_bracket.upper <= &univ_upper + &precision,
                "n={n} d={d}: upper {} vs {}",
                maj_bracket.upper,
                univ_upper
            );
            // lower transfer via symmetrization onto ±{1..floor(n/2)}
            let low_grid = sign_function_on(&integer_sign_grid(n as u64 / 2)).unwrap();
            let univ_lower = rational_error_bracket(&low_grid, d, &precision)
                .unwrap()
                .lower;
            let slacked = if univ_lower > precision {
                &univ_lower - &precision
            } else {
                Rat::from_integer(0.into())
            };
            assert!(
                maj_bracket.lower >= slacked,
                "n={n} d={d}: lower {} vs {}",
                maj_bracket.lower,
                univ_lower
            );
        }
    }
}
