//! Fixtures shared by the criterion benchmarks under `benches/`.

use diracspec_core::channels::{Channel, Model};
use diracspec_core::hankel::QuadratureSpec;
use diracspec_core::C64;

/// One model per potential, each with a channel valid for it.
pub fn models() -> Vec<(&'static str, Model, Channel)> {
    vec![
        ("free-2d", Model::free(2, 1.0).unwrap(), Channel::planar(1)),
        ("free-3d", Model::free(3, 1.0).unwrap(), Channel::spatial(1, 1)),
        ("ab", Model::aharonov_bohm(0.25, 1.0).unwrap(), Channel::planar(0)),
        ("coulomb", Model::coulomb(-0.5, 1.0).unwrap(), Channel::spatial(-1, 1)),
    ]
}

/// A grid small enough to time many iterations.
pub fn small_spec() -> QuadratureSpec {
    QuadratureSpec::new(16.0, 12.0)
}

pub fn shell(r: f64) -> [C64; 2] {
    let g = (-(r - 5.0).powi(2) / 2.0).exp();
    [C64::new(g, 0.0), C64::new(0.3 * g, 0.5 * g)]
}

/// A positive-energy bump around p = 3.
pub fn spectral_bump(e: f64) -> C64 {
    if e < 0.0 {
        return C64::new(0.0, 0.0);
    }
    let p = (e * e - 1.0).max(0.0).sqrt();
    C64::new((-(p - 3.0).powi(2) * 2.0).exp(), 0.0)
}
