use num_complex::Complex64 as C64;

use crate::error::{domain, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2j} / (2j (2j-1)) for j = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Principal branch of ln Γ(z) for Re z > 0.
///
/// The argument is shifted by the recurrence until |z| ≥ 15 and the Stirling
/// series with ten Bernoulli corrections is applied there.
pub fn log_gamma_complex(z: C64) -> Result<C64> {
    if !(z.re > 0.0) || !z.im.is_finite() || !z.re.is_finite() {
        return Err(domain("log_gamma_complex", format!("Re z must be positive, got {z}")));
    }
    let mut shift = C64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = C64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        corr += pow * c;
        pow *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + corr - shift)
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    Ok(log_gamma_complex(C64::new(x, 0.0))?.re)
}
