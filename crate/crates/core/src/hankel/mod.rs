//! Channel-wise relativistic Hankel transform.
//!
//! A [`HankelPlan`] tabulates the eigenfunctions of one channel on a radial rule
//! and a momentum rule once; forward analysis, inverse synthesis and the checks
//! built on them (isometry, round trip, diagonalization) reuse that table.
//!
//! Energies are parametrized by momentum, E = ±√(p² + m²), so the spectral
//! measure |E| dE becomes p dp and nothing crowds at the threshold.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{radial_dirac_apply, Channel, Model, RadialSpinor};
use crate::eigenbasis::{eigen_profile, EigenOptions, EnergyPoint};
use crate::error::{domain, Error, Result};
use crate::quad::Rule;
use crate::specfun::bessel_j;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RuleKind {
    /// Equal Gauss–Legendre panels.
    #[default]
    CompositeGauss,
    /// As above, with the first radial panel split geometrically towards r = 0
    /// (for the r^{−α} and r^{γ−1} behaviour of the AB and Coulomb kernels).
    GradedGauss,
}

/// Truncations and node densities of a transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub r_max: f64,
    pub p_max: f64,
    /// Panels per oscillation wavelength 2π/p_max (radial) or 2π/r_max (momentum).
    pub panels_per_wavelength: f64,
    pub nodes_per_panel: usize,
    pub kind: RuleKind,
    /// Largest admissible fraction of the datum's mass in the outer tenth of [0, r_max].
    pub tail_tolerance: f64,
}

impl QuadratureSpec {
    /// R_max = 40/m and P_max = 40m with quarter-wavelength panels.
    pub fn for_mass(mass: f64) -> QuadratureSpec {
        QuadratureSpec {
            r_max: 40.0 / mass,
            p_max: 40.0 * mass,
            ..QuadratureSpec::new(1.0, 1.0)
        }
    }

    pub fn new(r_max: f64, p_max: f64) -> QuadratureSpec {
        QuadratureSpec {
            r_max,
            p_max,
            panels_per_wavelength: 4.0,
            nodes_per_panel: 4,
            kind: RuleKind::CompositeGauss,
            tail_tolerance: 1e-8,
        }
    }

    /// The same truncation with twice as many panels.
    pub fn refined(&self) -> QuadratureSpec {
        QuadratureSpec {
            panels_per_wavelength: 2.0 * self.panels_per_wavelength,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.p_max > 0.0 && self.r_max.is_finite() && self.p_max.is_finite()) {
            return Err(domain("QuadratureSpec", format!("need finite r_max, p_max > 0, got {} and {}", self.r_max, self.p_max)));
        }
        if !(self.panels_per_wavelength > 0.0) || self.nodes_per_panel == 0 {
            return Err(domain("QuadratureSpec", "panel density and nodes per panel must be positive"));
        }
        if self.radial_rule().len() < 16 || self.momentum_rule().len() < 16 {
            return Err(domain("QuadratureSpec", "each rule needs at least 16 nodes"));
        }
        Ok(())
    }

    fn panel(&self, other_extent: f64) -> f64 {
        TAU / other_extent / self.panels_per_wavelength
    }

    pub fn radial_rule(&self) -> Rule {
        let h = self.panel(self.p_max);
        match self.kind {
            RuleKind::CompositeGauss => Rule::composite(0.0, self.r_max, h, self.nodes_per_panel),
            RuleKind::GradedGauss => {
                let first = h.min(self.r_max);
                let mut rule = Rule::graded(0.0, first, 0.25, 12, self.nodes_per_panel.max(8));
                if first < self.r_max {
                    let rest = Rule::composite(first, self.r_max, h, self.nodes_per_panel);
                    rule.nodes.extend(rest.nodes);
                    rule.weights.extend(rest.weights);
                }
                rule
            }
        }
    }

    pub fn momentum_rule(&self) -> Rule {
        Rule::composite(0.0, self.p_max, self.panel(self.r_max), self.nodes_per_panel)
    }
}

/// φ(E) on a momentum rule, one vector per sign of the energy. The Coulomb
/// model carries only the positive sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    pub mass: f64,
    pub momenta: Rule,
    pub positive: Vec<C64>,
    pub negative: Option<Vec<C64>>,
}

impl SpectralDensity {
    pub fn zeros(mass: f64, momenta: Rule, two_sided: bool) -> SpectralDensity {
        let z = vec![C64::new(0.0, 0.0); momenta.len()];
        SpectralDensity {
            mass,
            negative: two_sided.then(|| z.clone()),
            positive: z,
            momenta,
        }
    }

    /// Builds a density from φ(E), evaluated at E = ±√(p² + m²).
    pub fn from_fn(mass: f64, momenta: Rule, two_sided: bool, f: impl Fn(f64) -> C64) -> SpectralDensity {
        let energies: Vec<f64> = momenta.nodes.iter().map(|p| p.hypot(mass)).collect();
        SpectralDensity {
            mass,
            positive: energies.iter().map(|&e| f(e)).collect(),
            negative: two_sided.then(|| energies.iter().map(|&e| f(-e)).collect()),
            momenta,
        }
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    /// Positive energies √(p² + m²) of the nodes, strictly increasing in (m, ∞).
    pub fn energies(&self) -> Vec<f64> {
        self.momenta.nodes.iter().map(|p| p.hypot(self.mass)).collect()
    }

    /// Quadrature weight of node i for |E| dE = p dp.
    pub fn measure(&self, i: usize) -> f64 {
        self.momenta.weights[i] * self.momenta.nodes[i]
    }

    pub fn sectors(&self) -> impl Iterator<Item = (f64, &Vec<C64>)> {
        std::iter::once((1.0, &self.positive)).chain(self.negative.iter().map(|v| (-1.0, v)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.sectors()
            .map(|(_, v)| v.iter().enumerate().map(|(i, z)| self.measure(i) * z.norm_sqr()).sum::<f64>())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiplies the value at signed energy E by g(E).
    pub fn multiply(&self, g: impl Fn(f64) -> C64) -> SpectralDensity {
        let e = self.energies();
        let apply = |sign: f64, v: &Vec<C64>| v.iter().zip(&e).map(|(z, &e)| z * g(sign * e)).collect::<Vec<_>>();
        SpectralDensity {
            positive: apply(1.0, &self.positive),
            negative: self.negative.as_ref().map(|v| apply(-1.0, v)),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &SpectralDensity) -> SpectralDensity {
        let diff = |a: &Vec<C64>, b: &Vec<C64>| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
        let zero = vec![C64::new(0.0, 0.0); self.len()];
        let negative = match (&self.negative, &other.negative) {
            (None, None) => None,
            (a, b) => Some(diff(a.as_ref().unwrap_or(&zero), b.as_ref().unwrap_or(&zero))),
        };
        SpectralDensity {
            positive: diff(&self.positive, &other.positive),
            negative,
            ..self.clone()
        }
    }
}

// Eigenfunction ψ = (a, −i b) with a, b real; rows indexed by momentum node.
#[derive(Debug, Clone)]
struct KernelTable {
    upper: Vec<f64>,
    lower: Vec<f64>,
}

/// Tabulated eigenfunctions of one channel for repeated transforms.
#[derive(Debug, Clone)]
pub struct HankelPlan {
    pub model: Model,
    pub channel: Channel,
    pub spec: QuadratureSpec,
    pub radial: Rule,
    pub momenta: Rule,
    positive: KernelTable,
    negative: Option<KernelTable>,
}

impl HankelPlan {
    pub fn new(model: &Model, channel: Channel, spec: QuadratureSpec, opts: &EigenOptions) -> Result<HankelPlan> {
        spec.validate()?;
        channel.validate(model)?;
        let radial = spec.radial_rule();
        let momenta = spec.momentum_rule();
        let table = |positive: bool| -> Result<KernelTable> {
            let rows: Vec<(Vec<f64>, Vec<f64>)> = momenta
                .nodes
                .par_iter()
                .map(|&p| {
                    let e = EnergyPoint::from_momentum(p, model.mass, positive)?;
                    let psi = eigen_profile(model, channel, &e, &radial, opts)?;
                    Ok((
                        psi.upper.iter().map(|z| z.re).collect(),
                        psi.lower.iter().map(|z| -z.im).collect(),
                    ))
                })
                .collect::<Result<_>>()?;
            let (mut upper, mut lower) = (Vec::new(), Vec::new());
            for (u, l) in rows {
                upper.extend(u);
                lower.extend(l);
            }
            Ok(KernelTable { upper, lower })
        };
        let positive = table(true)?;
        let negative = if model.is_coulomb() { None } else { Some(table(false)?) };
        Ok(HankelPlan {
            model: *model,
            channel,
            spec,
            radial,
            momenta,
            positive,
            negative,
        })
    }

    pub fn two_sided(&self) -> bool {
        self.negative.is_some()
    }

    /// Samples f on the plan's radial rule.
    pub fn sample(&self, f: impl Fn(f64) -> [C64; 2]) -> RadialSpinor {
        RadialSpinor::from_fn(self.model.n, &self.radial, f)
    }

    pub fn zero_density(&self) -> SpectralDensity {
        SpectralDensity::zeros(self.model.mass, self.momenta.clone(), self.two_sided())
    }

    /// Builds a density on the plan's momentum rule from φ(E).
    pub fn density(&self, f: impl Fn(f64) -> C64) -> SpectralDensity {
        SpectralDensity::from_fn(self.model.mass, self.momenta.clone(), self.two_sided(), f)
    }

    fn check_grid(&self, psi: &RadialSpinor) -> Result<()> {
        if psi.r != self.radial.nodes || psi.n != self.model.n {
            return Err(domain("hankel", "spinor is not sampled on the plan's radial rule"));
        }
        Ok(())
    }

    /// Fraction of ‖ψ‖² carried by the outer tenth of [0, R_max].
    pub fn radial_tail(&self, psi: &RadialSpinor) -> f64 {
        let cut = 0.9 * self.spec.r_max;
        let total = psi.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = (0..psi.len())
            .filter(|&j| psi.r[j] > cut)
            .map(|j| psi.measure(j) * (psi.upper[j].norm_sqr() + psi.lower[j].norm_sqr()))
            .sum();
        tail / total
    }

    /// Fraction of ‖φ‖² carried by the outer tenth of [0, P_max].
    pub fn spectral_tail(&self, phi: &SpectralDensity) -> f64 {
        let cut = 0.9 * self.spec.p_max;
        let total = phi.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = phi
            .sectors()
            .map(|(_, v)| {
                (0..phi.len())
                    .filter(|&i| phi.momenta.nodes[i] > cut)
                    .map(|i| phi.measure(i) * v[i].norm_sqr())
                    .sum::<f64>()
            })
            .sum();
        tail / total
    }

    pub fn truncation(&self, psi: &RadialSpinor, phi: &SpectralDensity) -> TruncationReport {
        TruncationReport {
            r_max: self.spec.r_max,
            p_max: self.spec.p_max,
            radial_tail: self.radial_tail(psi),
            spectral_tail: self.spectral_tail(phi),
        }
    }

    /// φ(E) = ∫ ψ_E(r)^† f(r) r^{n−1} dr on every momentum node and sector.
    pub fn forward(&self, f: &RadialSpinor) -> Result<SpectralDensity> {
        self.check_grid(f)?;
        let tail = self.radial_tail(f);
        if tail > self.spec.tail_tolerance {
            return Err(Error::Truncation {
                mass: tail,
                r_max: self.spec.r_max,
            });
        }
        Ok(self.analyse(f))
    }

    fn analyse(&self, f: &RadialSpinor) -> SpectralDensity {
        let nr = self.radial.len();
        let mu: Vec<f64> = (0..nr).map(|j| f.measure(j)).collect();
        let i = C64::new(0.0, 1.0);
        let analyse = |t: &KernelTable| -> Vec<C64> {
            (0..self.momenta.len())
                .into_par_iter()
                .map(|row| {
                    let (ku, kl) = (&t.upper[row * nr..(row + 1) * nr], &t.lower[row * nr..(row + 1) * nr]);
                    (0..nr).map(|j| (f.upper[j] * ku[j] + i * f.lower[j] * kl[j]) * mu[j]).sum()
                })
                .collect()
        };
        SpectralDensity {
            mass: self.model.mass,
            momenta: self.momenta.clone(),
            positive: analyse(&self.positive),
            negative: self.negative.as_ref().map(analyse),
        }
    }

    /// f(r) = Σ_± ∫ φ(±E) ψ_{±E}(r) p dp.
    pub fn inverse(&self, phi: &SpectralDensity) -> Result<RadialSpinor> {
        if phi.momenta != self.momenta {
            return Err(domain("hankel", "density is not on the plan's momentum rule"));
        }
        if phi.negative.is_some() && self.negative.is_none() {
            return Err(Error::UnsupportedSector("the Coulomb transform"));
        }
        let nr = self.radial.len();
        let np = self.momenta.len();
        let mut out = RadialSpinor::zeros(self.model.n, &self.radial);
        let i = C64::new(0.0, 1.0);
        let sectors = std::iter::once((&self.positive, &phi.positive))
            .chain(self.negative.iter().zip(phi.negative.iter()));
        for (t, v) in sectors {
            let cols: Vec<(C64, C64)> = (0..nr)
                .into_par_iter()
                .map(|j| {
                    let (mut u, mut l) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                    for row in 0..np {
                        let c = v[row] * phi.measure(row);
                        u += c * t.upper[row * nr + j];
                        l += c * t.lower[row * nr + j];
                    }
                    (u, -i * l)
                })
                .collect();
            for (j, (u, l)) in cols.into_iter().enumerate() {
                out.upper[j] += u;
                out.lower[j] += l;
            }
        }
        Ok(out)
    }

    /// |‖Pf‖/‖f‖ − 1| together with the truncation tails.
    pub fn isometry(&self, f: &RadialSpinor) -> Result<IsometryReport> {
        let phi = self.forward(f)?;
        let (a, b) = (phi.norm(), f.norm());
        Ok(IsometryReport {
            ratio: if b == 0.0 { 1.0 } else { a / b },
            truncation: self.truncation(f, &phi),
        })
    }

    /// ‖P⁻¹Pf − f‖/‖f‖.
    pub fn round_trip(&self, f: &RadialSpinor) -> Result<f64> {
        let back = self.inverse(&self.forward(f)?)?;
        let n = f.norm();
        Ok(if n == 0.0 { back.norm() } else { back.sub(f).norm() / n })
    }

    /// Synthesizes φ and analyses it again: ‖P P⁻¹φ − φ‖/‖φ‖.
    pub fn spectral_round_trip(&self, phi: &SpectralDensity) -> Result<f64> {
        let again = self.forward(&self.inverse(phi)?)?;
        let n = phi.norm();
        Ok(if n == 0.0 { again.norm() } else { again.sub(phi).norm() / n })
    }

    /// Compares P(d_k f) with E·P f, d_k applied by finite differences.
    pub fn verify_diagonalization(&self, f: &RadialSpinor) -> Result<DiagonalizationReport> {
        self.check_grid(f)?;
        let df = radial_dirac_apply(&self.model, self.channel, f)?;
        let lhs = self.analyse(&df);
        let rhs = self.analyse(f).multiply(|e| C64::new(e, 0.0));
        let numerator = lhs.sub(&rhs).norm();
        let denominator = rhs.norm();
        Ok(DiagonalizationReport {
            numerator,
            denominator,
            residual: if denominator == 0.0 { 0.0 } else { numerator / denominator },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub r_max: f64,
    pub p_max: f64,
    pub radial_tail: f64,
    pub spectral_tail: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub ratio: f64,
    pub truncation: TruncationReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagonalizationReport {
    pub numerator: f64,
    pub denominator: f64,
    pub residual: f64,
}

/// One-shot forward transform of `f` (sampled on the spec's radial rule).
pub fn forward_transform(model: &Model, channel: Channel, f: &RadialSpinor, spec: QuadratureSpec, opts: &EigenOptions) -> Result<SpectralDensity> {
    HankelPlan::new(model, channel, spec, opts)?.forward(f)
}

/// One-shot inverse transform of a density on the spec's momentum rule.
pub fn inverse_transform(model: &Model, channel: Channel, phi: &SpectralDensity, spec: QuadratureSpec, opts: &EigenOptions) -> Result<RadialSpinor> {
    if model.is_coulomb() && phi.negative.is_some() {
        return Err(Error::UnsupportedSector("the Coulomb transform"));
    }
    HankelPlan::new(model, channel, spec, opts)?.inverse(phi)
}

/// K_P(r, r′) = ∫₀^P J_ν(pr) J_ν(pr′) p dp at each r′ of `rs`, a discretized
/// delta at r as P grows.
pub fn bessel_closure(nu: f64, r: f64, rs: &[f64], p_max: f64, panels_per_wavelength: f64) -> Result<Vec<f64>> {
    let r_far = rs.iter().fold(r, |a, &b| a.max(b));
    let rule = Rule::composite(0.0, p_max, TAU / r_far / panels_per_wavelength, 8);
    let jr: Vec<f64> = rule.nodes.iter().map(|&p| bessel_j(nu, p * r)).collect::<Result<_>>()?;
    rs.par_iter()
        .map(|&s| {
            let mut acc = 0.0;
            for (i, &p) in rule.nodes.iter().enumerate() {
                acc += rule.weights[i] * p * jr[i] * bessel_j(nu, p * s)?;
            }
            Ok(acc)
        })
        .collect()
}
