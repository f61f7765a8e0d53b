//! Positive-energy generalized eigenfunctions of the repulsive Dirac–Coulomb
//! channel operator.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::{EnergyPoint, Normalization};
use crate::error::{domain, Error, Result};
use crate::specfun::{kummer_1f1, kummer_imag_sweep, ln_gamma, log_gamma_complex, EvalMethod};
use crate::C64;

/// Beyond this value of π|α_E| the prefactor e^{πα_E/2}|Γ(γ+1+iα_E)| is below
/// e^{−600} and the kernel is returned as zero.
const PREFACTOR_CUTOFF: f64 = 600.0;

/// Sign of the Kummer argument: `Conjugate` uses ₁F₁(γ−iα_E, 2γ+1, −2ipr), which
/// solves the radial equation; `AsPrinted` uses +2ipr.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DcBranch {
    #[default]
    Conjugate,
    AsPrinted,
}

impl DcBranch {
    fn sign(self) -> f64 {
        match self {
            DcBranch::Conjugate => -1.0,
            DcBranch::AsPrinted => 1.0,
        }
    }
}

/// Parameters of a Coulomb channel at a fixed positive energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcParams {
    pub gamma: f64,
    pub alpha_e: f64,
    /// ξ = ½·Arg((k − iνm/p)/(γ − iα_E)).
    pub xi: f64,
    /// e^{2iξ} before taking the argument; unimodular.
    pub phase: C64,
    /// ln(2 e^{πα_E/2} |Γ(γ+1+iα_E)| / Γ(2γ+1)).
    pub log_prefactor: f64,
}

impl DcParams {
    pub fn prefactor(&self) -> f64 {
        self.log_prefactor.exp()
    }

    fn negligible(&self) -> bool {
        PI * self.alpha_e.abs() > PREFACTOR_CUTOFF
    }

    fn a(&self) -> C64 {
        C64::new(self.gamma, -self.alpha_e)
    }

    fn b(&self) -> f64 {
        2.0 * self.gamma + 1.0
    }
}

fn check_coupling(k: i32, nu: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidChannel("k = 0 is not a 3D channel".into()));
    }
    if !(nu < 0.0) || !(nu.abs() < (k as f64).abs()) {
        return Err(domain("dc_params", format!("need -|k| < nu < 0, got nu = {nu}, k = {k}")));
    }
    Ok(())
}

fn params_at(k: i32, nu: f64, mass: f64, e: f64, p: f64) -> Result<DcParams> {
    let kf = k as f64;
    let gamma = (kf * kf - nu * nu).sqrt();
    let alpha_e = nu * e / p;
    let num = C64::new(kf, -nu * mass / p);
    let den = C64::new(gamma, -alpha_e);
    let phase = num / den;
    let lg = log_gamma_complex(C64::new(gamma + 1.0, alpha_e))?.re;
    let log_prefactor = 2f64.ln() + FRAC_PI_2 * alpha_e + lg - ln_gamma(2.0 * gamma + 1.0)?;
    Ok(DcParams {
        gamma,
        alpha_e,
        xi: 0.5 * phase.arg(),
        phase,
        log_prefactor,
    })
}

/// γ, α_E, ξ and the prefactor of channel k at a positive energy.
pub fn dc_params(k: i32, nu: f64, mass: f64, energy: &EnergyPoint) -> Result<DcParams> {
    check_coupling(k, nu)?;
    if energy.e <= mass || energy.p <= 0.0 {
        return Err(Error::UnsupportedSector("the Coulomb model (positive energies E > m only)"));
    }
    params_at(k, nu, mass, energy.e, energy.p)
}

fn norm_factor(norm: Normalization) -> f64 {
    match norm {
        Normalization::AsPrinted => 1.0,
        Normalization::FreeConsistent => 1.0 / PI.sqrt(),
    }
}

// w = pref·(2pr)^{γ−½} r^{−½} e^{i(pr+ξ)} M; returns ψ = (N⁺ Im w, −i N⁻ Re w).
fn assemble(par: &DcParams, energy: &EnergyPoint, r: f64, m: C64, scale: f64) -> [C64; 2] {
    let x = energy.p * r;
    let amp = (par.log_prefactor + (par.gamma - 0.5) * (2.0 * x).ln() - 0.5 * r.ln()).exp() * scale;
    let w = C64::from_polar(amp, x + par.xi) * m;
    [C64::new(energy.n_plus * w.im, 0.0), C64::new(0.0, -energy.n_minus * w.re)]
}

/// Positive-energy Coulomb eigenfunction at radius r.
#[allow(clippy::too_many_arguments)]
pub fn dc_eigenfunction(
    k: i32,
    nu: f64,
    mass: f64,
    energy: &EnergyPoint,
    r: f64,
    method: EvalMethod,
    norm: Normalization,
    branch: DcBranch,
) -> Result<[C64; 2]> {
    let par = dc_params(k, nu, mass, energy)?;
    if !(r > 0.0) {
        return Err(domain("dc_eigenfunction", format!("radius must be positive, got {r}")));
    }
    if par.negligible() {
        return Ok([C64::new(0.0, 0.0); 2]);
    }
    let z = C64::new(0.0, branch.sign() * 2.0 * energy.p * r);
    let m = kummer_1f1(par.a(), par.b(), z, method)?;
    Ok(assemble(&par, energy, r, m, norm_factor(norm)))
}

// ₁F₁(a, b, σ·iy) on an ascending list of y ≥ 0 through the Taylor sweep.
fn kummer_branch_sweep(a: C64, b: f64, ys: &[f64], branch: DcBranch) -> Result<Vec<C64>> {
    match branch {
        DcBranch::AsPrinted => kummer_imag_sweep(a, b, ys),
        DcBranch::Conjugate => Ok(kummer_imag_sweep(a.conj(), b, ys)?.into_iter().map(|z| z.conj()).collect()),
    }
}

/// The eigenfunction on an ascending list of radii.
pub fn dc_profile(k: i32, nu: f64, mass: f64, energy: &EnergyPoint, rs: &[f64], norm: Normalization, branch: DcBranch) -> Result<Vec<[C64; 2]>> {
    let par = dc_params(k, nu, mass, energy)?;
    if rs.iter().any(|&r| !(r > 0.0)) || rs.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("dc_profile", "radii must be positive and ascending"));
    }
    if par.negligible() {
        return Ok(vec![[C64::new(0.0, 0.0); 2]; rs.len()]);
    }
    let ys: Vec<f64> = rs.iter().map(|r| 2.0 * energy.p * r).collect();
    let ms = kummer_branch_sweep(par.a(), par.b(), &ys, branch)?;
    let scale = norm_factor(norm);
    Ok(rs.iter().zip(ms).map(|(&r, m)| assemble(&par, energy, r, m, scale)).collect())
}

/// The dyadically rescaled eigenfunction at frequency N·y and ρ = N r:
/// N±·e^{πα/2}|Γ(γ+1+iα)|/Γ(2γ+1)·(2yρ)^{γ−½}ρ^{−½}·{Im, Re}(e^{i(yρ+ξ)}M), α = α_{Ny}.
#[allow(clippy::too_many_arguments)]
pub fn dc_eigenfunction_rescaled(
    k: i32,
    nu: f64,
    mass: f64,
    n: f64,
    y: f64,
    rho: f64,
    method: EvalMethod,
    norm: Normalization,
    branch: DcBranch,
) -> Result<[C64; 2]> {
    check_coupling(k, nu)?;
    if !(n > 0.0 && y > 0.0 && rho > 0.0) {
        return Err(domain("dc_eigenfunction_rescaled", format!("need N, y, rho > 0, got {n}, {y}, {rho}")));
    }
    let p = n * y;
    let energy = EnergyPoint::from_momentum(p, mass, true)?;
    let par = params_at(k, nu, mass, energy.e, p)?;
    if par.negligible() {
        return Ok([C64::new(0.0, 0.0); 2]);
    }
    let x = y * rho;
    let z = C64::new(0.0, branch.sign() * 2.0 * x);
    let m = kummer_1f1(par.a(), par.b(), z, method)?;
    let amp = (par.log_prefactor - 2f64.ln() + (par.gamma - 0.5) * (2.0 * x).ln() - 0.5 * rho.ln()).exp() * norm_factor(norm);
    let w = C64::from_polar(amp, x + par.xi) * m;
    Ok([C64::new(energy.n_plus * w.im, 0.0), C64::new(0.0, -energy.n_minus * w.re)])
}

/// w(N, y, ρ) = ½·e^{πα/2}|Γ(γ+1+iα)|/Γ(2γ+1)·(2yρ)^{γ−½}ρ^{−½}·e^{i(yρ+ξ)}·M,
/// α = α_{Ny}, on ascending ρ; the rescaled kernels without N± are F = Im w, G = Re w.
pub fn dc_rescaled_kernel(k: i32, nu: f64, mass: f64, n: f64, y: f64, rhos: &[f64], branch: DcBranch) -> Result<Vec<C64>> {
    check_coupling(k, nu)?;
    if !(n > 0.0 && y > 0.0) || rhos.iter().any(|&r| !(r > 0.0)) || rhos.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("dc_rescaled_kernel", "need N, y > 0 and ascending positive rho"));
    }
    let p = n * y;
    let par = params_at(k, nu, mass, p.hypot(mass), p)?;
    if par.negligible() {
        return Ok(vec![C64::new(0.0, 0.0); rhos.len()]);
    }
    let ys: Vec<f64> = rhos.iter().map(|r| 2.0 * y * r).collect();
    let ms = kummer_branch_sweep(par.a(), par.b(), &ys, branch)?;
    let base = par.log_prefactor - 2f64.ln();
    Ok(rhos
        .iter()
        .zip(ms)
        .map(|(&rho, m)| {
            let x = y * rho;
            let amp = (base + (par.gamma - 0.5) * (2.0 * x).ln() - 0.5 * rho.ln()).exp();
            C64::from_polar(amp, x + par.xi) * m
        })
        .collect())
}

/// Φ_k(N, ρ) = G + iF at y = 1 without the N± weights:
/// e^{πα_N/2}|Γ(γ+1+iα_N)|/Γ(2γ+1)·(2ρ)^γ/ρ·e^{i(ρ+ξ)}·M, on ascending ρ.
pub fn dc_phi(k: i32, nu: f64, mass: f64, n: f64, rhos: &[f64], branch: DcBranch) -> Result<Vec<C64>> {
    check_coupling(k, nu)?;
    if !(n > 0.0) || rhos.iter().any(|&r| !(r > 0.0)) || rhos.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("dc_phi", "need N > 0 and ascending positive rho"));
    }
    let e = n.hypot(mass);
    let par = params_at(k, nu, mass, e, n)?;
    if par.negligible() {
        return Ok(vec![C64::new(0.0, 0.0); rhos.len()]);
    }
    let ys: Vec<f64> = rhos.iter().map(|r| 2.0 * r).collect();
    let ms = kummer_branch_sweep(par.a(), par.b(), &ys, branch)?;
    let base = par.log_prefactor - 2f64.ln();
    Ok(rhos
        .iter()
        .zip(ms)
        .map(|(&rho, m)| {
            let amp = (base + par.gamma * (2.0 * rho).ln() - rho.ln()).exp();
            C64::from_polar(amp, rho + par.xi) * m
        })
        .collect())
}
