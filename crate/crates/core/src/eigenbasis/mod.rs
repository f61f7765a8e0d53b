//! Generalized eigenfunctions of the channel operators d_k for the free,
//! Aharonov–Bohm and repulsive Coulomb models.
//!
//! Every eigenfunction is returned as the complex spinor ψ = (F, −iG) on which
//! [`radial_dirac_apply`](crate::channels::radial_dirac_apply) acts, so that
//! d_k ψ = E ψ holds pointwise.

mod coulomb;

use serde::{Deserialize, Serialize};

use crate::channels::{radial_dirac_apply, sgn, Channel, Model, Potential, RadialSpinor};
use crate::error::{domain, Error, Result};
use crate::quad::Rule;
use crate::specfun::{bessel_j, EvalMethod};
use crate::C64;

pub use coulomb::{
    dc_eigenfunction, dc_eigenfunction_rescaled, dc_params, dc_phi, dc_profile, dc_rescaled_kernel, DcBranch, DcParams,
};

/// An energy on the continuous spectrum with its momentum and the spinor weights
/// N±(E) = √((|E| ± m)/(2|E|)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPoint {
    pub e: f64,
    pub p: f64,
    pub n_plus: f64,
    pub n_minus: f64,
}

impl EnergyPoint {
    pub fn new(e: f64, mass: f64) -> Result<EnergyPoint> {
        if !e.is_finite() || e.abs() < mass {
            return Err(domain("EnergyPoint", format!("|E| = {} is below the mass {mass}", e.abs())));
        }
        let a = e.abs();
        let p = ((a - mass) * (a + mass)).sqrt();
        Ok(Self::assemble(e, p, mass))
    }

    /// The energy ±√(p² + m²).
    pub fn from_momentum(p: f64, mass: f64, positive: bool) -> Result<EnergyPoint> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(domain("EnergyPoint", format!("momentum {p} must be non-negative")));
        }
        let a = p.hypot(mass);
        Ok(Self::assemble(if positive { a } else { -a }, p, mass))
    }

    fn assemble(e: f64, p: f64, mass: f64) -> EnergyPoint {
        let a = e.abs();
        let n_plus = ((a + mass) / (2.0 * a)).sqrt();
        // |E| − m = p²/(|E| + m) avoids cancellation near threshold
        let n_minus = (p * p / ((a + mass) * 2.0 * a)).sqrt();
        EnergyPoint { e, p, n_plus, n_minus }
    }

    pub fn sign(&self) -> f64 {
        if self.e < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Coefficients of the upper and lower components: (N⁺, N⁻) above the gap,
    /// (N⁻, N⁺) below it.
    pub fn weights(&self) -> (f64, f64) {
        if self.e > 0.0 {
            (self.n_plus, self.n_minus)
        } else {
            (self.n_minus, self.n_plus)
        }
    }
}

/// Overall normalization of the eigenfunctions.
///
/// `FreeConsistent` makes every transform an isometry onto L²(E dE); `AsPrinted`
/// keeps the √(π/2) of the 3D free functions, the extra 1/√(2|E|) of the AB
/// functions and the √π of the Coulomb functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Normalization {
    AsPrinted,
    #[default]
    FreeConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EigenOptions {
    pub normalization: Normalization,
    pub method: EvalMethod,
    pub branch: DcBranch,
}

fn bessel_spinor(orders: (f64, f64), lower_sign: f64, energy: &EnergyPoint, r: f64, scale: f64) -> Result<[C64; 2]> {
    if !(r > 0.0) {
        return Err(domain("eigenfunction", format!("radius must be positive, got {r}")));
    }
    let (cu, cd) = energy.weights();
    let x = energy.p * r;
    let up = cu * bessel_j(orders.0, x)?;
    let dn = cd * bessel_j(orders.1, x)?;
    Ok([C64::new(scale * up, 0.0), C64::new(0.0, -lower_sign * scale * dn)])
}

/// Free eigenfunction: (N⁺J_μ(pr), −i sgn(E) sgn(k) N⁻J_λ(pr)) in 2D, the same
/// with half-integer orders and a factor r^{−1/2} in 3D.
pub fn free_eigenfunction(model: &Model, channel: Channel, energy: &EnergyPoint, r: f64, norm: Normalization) -> Result<[C64; 2]> {
    if model.potential != Potential::Free {
        return Err(Error::InvalidModel("free_eigenfunction needs the free model".into()));
    }
    channel.validate(model)?;
    let scale = if model.n == 2 {
        1.0
    } else {
        let base = 1.0 / r.sqrt();
        match norm {
            Normalization::FreeConsistent => base,
            Normalization::AsPrinted => base * std::f64::consts::FRAC_PI_2.sqrt(),
        }
    };
    let s = energy.sign() * sgn(channel.k);
    bessel_spinor(channel.bessel_orders(model), s, energy, r, scale)
}

/// Aharonov–Bohm eigenfunction with orders |k−α|, |k−α|+sgn(k), or −α, 1−α at k = 0.
pub fn ab_eigenfunction(alpha: f64, k: i32, energy: &EnergyPoint, r: f64, norm: Normalization) -> Result<[C64; 2]> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidModel(format!("flux alpha must lie in (0,1), got {alpha}")));
    }
    let orders = if k == 0 {
        (-alpha, 1.0 - alpha)
    } else {
        let up = (k as f64 - alpha).abs();
        (up, up + sgn(k))
    };
    let scale = match norm {
        Normalization::FreeConsistent => 1.0,
        Normalization::AsPrinted => 1.0 / (2.0 * energy.e.abs()).sqrt(),
    };
    bessel_spinor(orders, energy.sign() * sgn(k), energy, r, scale)
}

/// Dispatches to the model's eigenfunction.
pub fn eigenfunction(model: &Model, channel: Channel, energy: &EnergyPoint, r: f64, opts: &EigenOptions) -> Result<[C64; 2]> {
    match model.potential {
        Potential::Free => free_eigenfunction(model, channel, energy, r, opts.normalization),
        Potential::AharonovBohm { alpha } => ab_eigenfunction(alpha, channel.k, energy, r, opts.normalization),
        Potential::Coulomb { nu } => {
            channel.validate(model)?;
            dc_eigenfunction(channel.k, nu, model.mass, energy, r, opts.method, opts.normalization, opts.branch)
        }
    }
}

/// The eigenfunction sampled on every node of `rule` (a dense Coulomb profile
/// uses the Taylor sweep instead of pointwise series).
pub fn eigen_profile(model: &Model, channel: Channel, energy: &EnergyPoint, rule: &Rule, opts: &EigenOptions) -> Result<RadialSpinor> {
    let values: Vec<[C64; 2]> = match model.potential {
        Potential::Coulomb { nu } if opts.method.kind == crate::specfun::MethodKind::SeriesSum => {
            channel.validate(model)?;
            dc_profile(channel.k, nu, model.mass, energy, &rule.nodes, opts.normalization, opts.branch)?
        }
        _ => rule
            .nodes
            .iter()
            .map(|&r| eigenfunction(model, channel, energy, r, opts))
            .collect::<Result<_>>()?,
    };
    Ok(RadialSpinor {
        n: model.n,
        r: rule.nodes.clone(),
        w: rule.weights.clone(),
        upper: values.iter().map(|v| v[0]).collect(),
        lower: values.iter().map(|v| v[1]).collect(),
    })
}

/// ‖d_kψ − Eψ‖/‖ψ‖ over the interior of the grid (two nodes trimmed at each end,
/// where the one-sided stencils live).
pub fn eigen_residual(model: &Model, channel: Channel, energy: &EnergyPoint, rule: &Rule, opts: &EigenOptions) -> Result<f64> {
    let psi = eigen_profile(model, channel, energy, rule, opts)?;
    let d = radial_dirac_apply(model, channel, &psi)?;
    let e = energy.e;
    let (mut num, mut den) = (0.0, 0.0);
    for j in 2..psi.len().saturating_sub(2) {
        let w = psi.measure(j);
        num += w * ((d.upper[j] - psi.upper[j] * e).norm_sqr() + (d.lower[j] - psi.lower[j] * e).norm_sqr());
        den += w * (psi.upper[j].norm_sqr() + psi.lower[j].norm_sqr());
    }
    Ok((num / den).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SommerfeldVariant {
    /// Denominator (k² − ν²) + n_r².
    #[default]
    AsPrinted,
    /// Denominator (√(k² − ν²) + n_r)².
    Standard,
}

/// Discrete eigenvalue sgn(ν)·m/√(1 + ν²/D) of the Coulomb operator in the gap.
pub fn sommerfeld_eigenvalue(k: i32, n_r: u32, nu: f64, mass: f64, variant: SommerfeldVariant) -> Result<f64> {
    if k == 0 || (k > 0 && n_r == 0) {
        return Err(Error::InvalidChannel(format!("(k, n_r) = ({k}, {n_r}): n_r ≥ 1 is required for k > 0")));
    }
    let kf = k as f64;
    if !(nu.abs() < kf.abs()) || nu == 0.0 {
        return Err(domain("sommerfeld_eigenvalue", format!("need 0 < |nu| < |k|, got nu = {nu}")));
    }
    let g2 = kf * kf - nu * nu;
    let n = n_r as f64;
    let denom = match variant {
        SommerfeldVariant::AsPrinted => g2 + n * n,
        SommerfeldVariant::Standard => (g2.sqrt() + n).powi(2),
    };
    Ok(nu.signum() * mass / (1.0 + nu * nu / denom).sqrt())
}

#[cfg(test)]
mod tests;
