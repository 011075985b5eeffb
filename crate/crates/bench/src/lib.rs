//! Shared fixtures for the criterion benches.

use bures_core::DensityMatrixParams;

/// Fixed interior points, one per dimension.
pub fn fixture_params(n: usize) -> DensityMatrixParams {
    let coords: &[f64] = if n == 2 {
        &[0.3, 1.1, 0.7]
    } else {
        &[0.3, 0.7, 0.4, 0.5, 1.1, 0.9, 2.0, 1.2]
    };
    DensityMatrixParams::from_coordinates(n, coords).expect("fixture inside box")
}
