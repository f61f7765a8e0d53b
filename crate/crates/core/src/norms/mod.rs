//! Mixed space-time norms L^p_t L^q_{r^{n−1}dr} L²_θ, spectral Sobolev norms and
//! the admissibility algebra of the Strichartz theorems.

use serde::{Deserialize, Serialize};

use crate::channels::{ChannelMap, Model, PolarField, Potential, RadialSpinor};
use crate::error::{domain, Result};
use crate::hankel::SpectralDensity;
use crate::quad::Rule;

/// Exponents of L^p_t L^q_r; `p` may be `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedNormSpec {
    pub p: f64,
    pub q: f64,
}

impl MixedNormSpec {
    pub fn new(p: f64, q: f64) -> Result<MixedNormSpec> {
        if !(p >= 2.0) || !(q >= 2.0) || !q.is_finite() {
            return Err(domain("MixedNormSpec", format!("need p in [2, inf], q in [2, inf), got ({p}, {q})")));
        }
        Ok(MixedNormSpec { p, q })
    }
}

/// ‖u(r, ·)‖_{L²_θ} at every radial node of a sampled field.
pub fn angular_l2(field: &PolarField) -> Vec<f64> {
    let pts = field.angular.points();
    let nc = field.components();
    (0..field.radial.len())
        .map(|ir| {
            pts.iter()
                .enumerate()
                .map(|(ia, p)| p.2 * field.at(ir, ia)[..nc].iter().map(|z| z.norm_sqr()).sum::<f64>())
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// The same quantity from channel coefficients: (Σ_k |ψ_k(r)|²)^{1/2}, by
/// orthonormality of the angular basis.
pub fn channel_l2(map: &ChannelMap<RadialSpinor>) -> Vec<f64> {
    let Some(first) = map.values().next() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|j| map.values().map(|s| s.upper[j].norm_sqr() + s.lower[j].norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

/// (∫ a(r)^q r^{n−1} dr)^{1/q}; the maximum when q = ∞.
pub fn radial_lq(amplitude: &[f64], radial: &Rule, n: usize, q: f64) -> f64 {
    if q.is_infinite() {
        return amplitude.iter().cloned().fold(0.0, f64::max);
    }
    let s: f64 = amplitude
        .iter()
        .zip(radial.nodes.iter().zip(&radial.weights))
        .map(|(a, (r, w))| w * r.powi(n as i32 - 1) * a.powf(q))
        .sum();
    s.powf(1.0 / q)
}

/// (∫ v(t)^p dt)^{1/p}; the maximum when p = ∞.
pub fn time_lp(values: &[f64], times: &Rule, p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().cloned().fold(0.0, f64::max);
    }
    let s: f64 = values.iter().zip(&times.weights).map(|(v, w)| w * v.powf(p)).sum();
    s.powf(1.0 / p)
}

/// ‖u‖_{L^p_t L^q_{r^{n−1}dr} L²_θ} for samples u(t_j) on the nodes of `times`.
pub fn mixed_norm(times: &Rule, fields: &[PolarField], spec: MixedNormSpec) -> Result<f64> {
    if fields.is_empty() || fields.len() != times.len() {
        return Err(domain("mixed_norm", format!("{} time nodes for {} fields", times.len(), fields.len())));
    }
    if fields.iter().any(|f| f.radial.is_empty() || f.angular.is_empty()) {
        return Err(domain("mixed_norm", "empty spatial grid"));
    }
    let per_time: Vec<f64> = fields
        .iter()
        .map(|f| radial_lq(&angular_l2(f), &f.radial, f.n, spec.q))
        .collect();
    Ok(time_lp(&per_time, times, spec.p))
}

/// (Σ_k ∫ |E|^{2s} |φ_k(E)|² |E| dE)^{1/2} for |s| ≤ 1.
pub fn sobolev_norm(densities: &ChannelMap<SpectralDensity>, s: f64) -> Result<f64> {
    if !(s.abs() <= 1.0) {
        return Err(domain("sobolev_norm", format!("need |s| <= 1, got {s}")));
    }
    // summed in the order of SpectralDensity::norm_sqr, so s = 0 is bit-identical
    let acc: f64 = densities
        .values()
        .map(|phi| {
            let e = phi.energies();
            phi.sectors()
                .map(|(_, v)| v.iter().enumerate().map(|(i, z)| phi.measure(i) * z.norm_sqr() * e[i].powf(2.0 * s)).sum::<f64>())
                .sum::<f64>()
        })
        .sum();
    Ok(acc.sqrt())
}

/// β(p) = 1/p − (n−1)/2 on [2, 4) and 1/p − (3n−4)/6 on [4, ∞].
pub fn beta_exponent(p: f64, n: usize) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(domain("beta_exponent", format!("need p >= 2, got {p}")));
    }
    let nf = n as f64;
    Ok(if p < 4.0 { 1.0 / p - (nf - 1.0) / 2.0 } else { 1.0 / p - (3.0 * nf - 4.0) / 6.0 })
}

/// q(α) = 2/α on (0, ½], 2/(1−α) on (½, 1).
pub fn q_alpha(alpha: f64) -> f64 {
    if alpha <= 0.5 {
        2.0 / alpha
    } else {
        2.0 / (1.0 - alpha)
    }
}

/// p(α) = (2q(α) − 4)/(q(α) − 4); `None` at α = ½ where q(α) = 4.
pub fn p_alpha(alpha: f64) -> Option<f64> {
    let q = q_alpha(alpha);
    (q != 4.0).then(|| (2.0 * q - 4.0) / (q - 4.0))
}

/// q(ν) = 3/(1 − √(1 − ν²)).
pub fn q_nu(nu: f64) -> f64 {
    3.0 / (1.0 - (1.0 - nu * nu).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frequency {
    Low,
    High,
}

/// The (p, q) range of one Strichartz theorem with its boundary values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleRegion {
    pub n: usize,
    pub potential: Potential,
    /// True when the datum has no Dirac-radial component, which relaxes the
    /// AB and Coulomb ranges.
    pub radial_free: bool,
    pub q_alpha: Option<f64>,
    pub p_alpha: Option<f64>,
    pub q_nu: Option<f64>,
    /// Set when the range collapses to {(∞, 2)}.
    pub degenerate: bool,
}

pub fn admissible_region(model: &Model) -> AdmissibleRegion {
    AdmissibleRegion::new(model, false)
}

impl AdmissibleRegion {
    pub fn new(model: &Model, radial_free: bool) -> AdmissibleRegion {
        let mut region = AdmissibleRegion {
            n: model.n,
            potential: model.potential,
            radial_free,
            q_alpha: None,
            p_alpha: None,
            q_nu: None,
            degenerate: false,
        };
        match model.potential {
            Potential::Free => {}
            Potential::AharonovBohm { alpha } => {
                if radial_free {
                    region.q_alpha = Some(f64::INFINITY);
                    region.p_alpha = Some(2.0);
                } else {
                    region.q_alpha = Some(q_alpha(alpha));
                    region.p_alpha = p_alpha(alpha);
                    region.degenerate = region.p_alpha.is_none();
                }
            }
            Potential::Coulomb { nu } => {
                region.q_nu = Some(if radial_free { f64::INFINITY } else { q_nu(nu) });
            }
        }
        region
    }

    pub fn contains(&self, p: f64, q: f64) -> bool {
        if p == f64::INFINITY && q == 2.0 {
            return true;
        }
        if self.degenerate || !(q >= 2.0) || !q.is_finite() {
            return false;
        }
        let ip = 1.0 / p;
        let iq = 1.0 / q;
        match self.potential {
            Potential::Free if self.n == 2 => p > 2.0 && ip + iq < 0.5,
            Potential::Free => p >= 2.0 && ip + 2.0 * iq < 1.0,
            Potential::AharonovBohm { .. } => {
                let (pa, qa) = (self.p_alpha.unwrap_or(f64::NAN), self.q_alpha.unwrap_or(f64::NAN));
                p > pa && q < qa && 2.0 * iq + pa * ip * (1.0 - 2.0 / qa) < 1.0
            }
            Potential::Coulomb { .. } => p >= 2.0 && q < self.q_nu.unwrap_or(f64::NAN) && ip + 2.0 * iq < 1.0,
        }
    }

    /// s(p, q) = n/2 − 2/p − n/q (low) or n/2 − 1/p − n/q (high).
    pub fn regularity(&self, p: f64, q: f64, band: Frequency) -> f64 {
        let nf = self.n as f64;
        let time = match band {
            Frequency::Low => 2.0,
            Frequency::High => 1.0,
        };
        nf / 2.0 - time / p - nf / q
    }
}
