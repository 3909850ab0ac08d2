//! The three routes to a submatrix's Chebyshev error: the closed-form
//! two-row formula, the anchored alternating fit, and the grid oracle.
//!
//!     cargo run --release --example profile_fitting

use flagmine::profile::{brute_force_error, fit_profiles, two_row_error};

fn main() {
    let row_a = [1.0, 2.0, 3.0];
    let row_b = [2.0, 3.0, 5.0];
    let fit = two_row_error(&row_a, &row_b, None).unwrap();
    println!("two-row fit of {row_a:?} vs {row_b:?}:");
    println!("  error {}  diff-midrange {}  offsets {:?}", fit.error, fit.diff_midrange, fit.row_offsets);
    println!("  column profile {:?}", fit.col_profile);

    let mut values = row_a.to_vec();
    values.extend_from_slice(&row_b);
    let missing = vec![false; 6];
    let alt = fit_profiles(&values, &missing, 2, 3, 1e-9, 500).unwrap();
    let grid = brute_force_error(&values, &missing, 2, 3, 1e-3).unwrap();
    println!("alternating fit error {:.9}, grid oracle {:.9}", alt.error, grid);

    // An additive-rank matrix fits exactly.
    let u = [0.0, 1.0, -0.5, 2.0];
    let v = [3.0, 1.0, 0.0];
    let mut exact = Vec::new();
    for ui in u {
        for vj in v {
            exact.push(ui + vj);
        }
    }
    let perfect = fit_profiles(&exact, &vec![false; 12], 4, 3, 1e-9, 500).unwrap();
    println!("additive-rank 4x3 matrix fits with error {:.2e}", perfect.error);
    println!("  row offsets {:?}", perfect.row_offsets);
}
