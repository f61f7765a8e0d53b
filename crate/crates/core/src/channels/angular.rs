use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

/// The basis pair (Ξ⁺_k, Ξ⁻_k) of the circle: (e^{ikθ}, 0)/√(2π) and (0, e^{i(k+1)θ})/√(2π).
pub fn angular_basis_2d(k: i32, theta: f64) -> [[C64; 2]; 2] {
    let s = 1.0 / (2.0 * PI).sqrt();
    let zero = C64::new(0.0, 0.0);
    [
        [C64::from_polar(s, k as f64 * theta), zero],
        [zero, C64::from_polar(s, (k + 1) as f64 * theta)],
    ]
}

/// Orthonormal spherical harmonic Y_l^m(θ, φ) with the Condon–Shortley phase;
/// zero when |m| > l.
pub fn spherical_harmonic(l: i32, m: i32, theta: f64, phi: f64) -> C64 {
    if l < 0 || m.abs() > l {
        return C64::new(0.0, 0.0);
    }
    let ma = m.abs();
    let p = normalized_legendre(l, ma, theta.cos(), theta.sin());
    let y = C64::from_polar(p, ma as f64 * phi);
    if m >= 0 {
        y
    } else if ma % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

// √((2l+1)/4π · (l−m)!/(l+m)!) P_l^m(x), P including (−1)^m.
fn normalized_legendre(l: i32, m: i32, x: f64, sin_t: f64) -> f64 {
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for i in 1..=m {
        let fi = i as f64;
        pmm *= -((2.0 * fi + 1.0) / (2.0 * fi)).sqrt() * sin_t;
    }
    if l == m {
        return pmm;
    }
    let mf = m as f64;
    let mut p_prev = pmm;
    let mut p = x * (2.0 * mf + 3.0).sqrt() * pmm;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lp = lf - 1.0;
        let a_prev = ((4.0 * lp * lp - 1.0) / (lp * lp - mf * mf)).sqrt();
        let next = a * (x * p - p_prev / a_prev);
        p_prev = p;
        p = next;
    }
    p
}

// Ω_{k,m_k}: two-component spinor harmonic, m_k = twice_mk/2.
fn omega(k: i32, twice_mk: i32, theta: f64, phi: f64) -> [C64; 2] {
    let kf = k as f64;
    let mk = 0.5 * twice_mk as f64;
    let l = ((kf + 0.5).abs() - 0.5).round() as i32;
    let norm = 1.0 / (2.0 * kf + 1.0).abs().sqrt();
    let w1 = (kf - mk + 0.5).abs().sqrt();
    let w2 = -super::sgn(k) * (kf + mk + 0.5).abs().sqrt();
    let m_lo = (twice_mk - 1) / 2;
    let m_hi = (twice_mk + 1) / 2;
    [
        spherical_harmonic(l, m_lo, theta, phi) * (norm * w1),
        spherical_harmonic(l, m_hi, theta, phi) * (norm * w2),
    ]
}

/// The basis pair (Ξ⁺, Ξ⁻) = ((iΩ_k, 0₂), (0₂, Ω_{−k})) of the sphere at polar
/// angle θ₁ and azimuth θ₂.
pub fn angular_basis_3d(k: i32, twice_mk: i32, theta1: f64, theta2: f64) -> Result<[[C64; 4]; 2]> {
    if k == 0 || twice_mk % 2 == 0 || twice_mk.abs() > 2 * k.abs() - 1 {
        return Err(Error::InvalidChannel(format!("(k, m_k) = ({k}, {twice_mk}/2)")));
    }
    let i = C64::new(0.0, 1.0);
    let zero = C64::new(0.0, 0.0);
    let up = omega(k, twice_mk, theta1, theta2);
    let dn = omega(-k, twice_mk, theta1, theta2);
    Ok([[i * up[0], i * up[1], zero, zero], [zero, zero, dn[0], dn[1]]])
}
