//! Time evolution e^{itD} as the spectral multiplier e^{itE}, energy filters and
//! the full field pipeline decompose → transform → filter → evolve → synthesize.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{decompose, synthesize, Channel, ChannelMap, Model, PolarField, RadialSpinor};
use crate::eigenbasis::EigenOptions;
use crate::error::{domain, Error, Result};
use crate::hankel::{HankelPlan, QuadratureSpec, SpectralDensity};
use crate::C64;

/// A closed interval of |E|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Band {
        Band { lo, hi }
    }

    /// The low-frequency block [m, m+1].
    pub fn low(mass: f64) -> Band {
        Band::new(mass, mass + 1.0)
    }

    pub fn contains(&self, e: f64) -> bool {
        let a = e.abs();
        a >= self.lo && a <= self.hi
    }
}

/// Multiplies φ by the indicator of |E| ∈ band. An empty band gives zero.
pub fn energy_filter(phi: &SpectralDensity, band: Band) -> SpectralDensity {
    phi.multiply(|e| C64::new(if band.contains(e) { 1.0 } else { 0.0 }, 0.0))
}

/// φ − energy_filter(φ, band).
pub fn energy_filter_complement(phi: &SpectralDensity, band: Band) -> SpectralDensity {
    phi.multiply(|e| C64::new(if band.contains(e) { 0.0 } else { 1.0 }, 0.0))
}

/// Zeroes the negative-energy sector. Coulomb densities have none to begin with.
pub fn positive_projection(phi: &SpectralDensity) -> SpectralDensity {
    SpectralDensity {
        negative: phi.negative.as_ref().map(|v| vec![C64::new(0.0, 0.0); v.len()]),
        ..phi.clone()
    }
}

/// e^{itE} φ(E).
pub fn evolve_density(phi: &SpectralDensity, t: f64) -> SpectralDensity {
    phi.multiply(|e| C64::from_polar(1.0, t * e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionPlan {
    pub times: Vec<f64>,
    pub band: Option<Band>,
    pub positive_only: bool,
}

impl EvolutionPlan {
    /// Coulomb evolution is always restricted to the positive sector.
    pub fn new(model: &Model, times: Vec<f64>, band: Option<Band>, positive_only: bool) -> Result<EvolutionPlan> {
        if times.iter().any(|t| !t.is_finite()) {
            return Err(domain("EvolutionPlan", "times must be finite"));
        }
        if let Some(b) = band {
            if !(b.lo <= b.hi) || b.hi < model.mass {
                return Err(domain("EvolutionPlan", format!("band [{}, {}] misses the spectrum |E| >= {}", b.lo, b.hi, model.mass)));
            }
        }
        Ok(EvolutionPlan {
            times,
            band,
            positive_only: positive_only || model.is_coulomb(),
        })
    }

    /// Applies the band and sector restrictions of the plan.
    pub fn restrict(&self, phi: &SpectralDensity) -> SpectralDensity {
        let phi = match self.band {
            Some(b) => energy_filter(phi, b),
            None => phi.clone(),
        };
        if self.positive_only {
            positive_projection(&phi)
        } else {
            phi
        }
    }
}

/// Transform plans for every channel up to `k_max`, shared between the channels
/// that differ only in m_k.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub model: Model,
    pub k_max: u32,
    plans: BTreeMap<i32, HankelPlan>,
}

impl Propagator {
    pub fn new(model: &Model, k_max: u32, spec: QuadratureSpec, opts: &EigenOptions) -> Result<Propagator> {
        let mut ks: Vec<Channel> = Vec::new();
        for ch in model.channels(k_max) {
            if !ks.iter().any(|c| c.k == ch.k) {
                ks.push(ch);
            }
        }
        let plans = ks
            .into_iter()
            .map(|ch| Ok((ch.k, HankelPlan::new(model, ch, spec, opts)?)))
            .collect::<Result<_>>()?;
        Ok(Propagator {
            model: *model,
            k_max,
            plans,
        })
    }

    pub fn plan(&self, channel: Channel) -> Result<&HankelPlan> {
        self.plans
            .get(&channel.k)
            .ok_or_else(|| Error::InvalidChannel(format!("{channel:?} is outside |k| <= {}", self.k_max)))
    }

    pub fn channels(&self) -> Vec<Channel> {
        self.model.channels(self.k_max)
    }

    pub fn radial_rule(&self) -> &crate::quad::Rule {
        &self.plans.values().next().expect("at least one channel").radial
    }

    pub fn forward(&self, data: &ChannelMap<RadialSpinor>) -> Result<ChannelMap<SpectralDensity>> {
        data.iter().map(|(&ch, f)| Ok((ch, self.plan(ch)?.forward(f)?))).collect()
    }

    /// u_k(t) = P_k⁻¹(e^{itE}φ_k) for every channel of the map.
    pub fn evolve(&self, densities: &ChannelMap<SpectralDensity>, t: f64) -> Result<ChannelMap<RadialSpinor>> {
        let items: Vec<(&Channel, &SpectralDensity)> = densities.iter().collect();
        let out: Vec<(Channel, RadialSpinor)> = items
            .par_iter()
            .map(|(&ch, phi)| Ok((ch, self.plan(ch)?.inverse(&evolve_density(phi, t))?)))
            .collect::<Result<_>>()?;
        Ok(out.into_iter().collect())
    }

    /// The full pipeline for a field sampled on the propagator's radial rule.
    pub fn evolve_field(&self, u0: &PolarField, plan: &EvolutionPlan) -> Result<FieldEvolution> {
        if u0.radial.nodes != self.radial_rule().nodes {
            return Err(domain("evolve_field", "field is not sampled on the transform's radial rule"));
        }
        let field_norm = u0.norm_sqr().sqrt();
        let parts = decompose(&self.model, u0, self.k_max)?;
        let channel_norm = parts.values().map(|f| f.norm_sqr()).sum::<f64>().sqrt();
        let spectra: ChannelMap<SpectralDensity> = self.forward(&parts)?.iter().map(|(&c, phi)| (c, plan.restrict(phi))).collect();
        let spectral_norm = spectra.values().map(|p| p.norm_sqr()).sum::<f64>().sqrt();
        let mut fields = Vec::with_capacity(plan.times.len());
        let mut norms = Vec::with_capacity(plan.times.len());
        for &t in &plan.times {
            let u = self.evolve(&spectra, t)?;
            let field = synthesize(&self.model, &u, &u0.radial, u0.angular)?;
            norms.push(field.norm_sqr().sqrt());
            fields.push(field);
        }
        Ok(FieldEvolution {
            times: plan.times.clone(),
            fields,
            stages: StageNorms {
                field: field_norm,
                channels: channel_norm,
                spectral: spectral_norm,
                synthesized: norms,
            },
        })
    }
}

/// L² norms after each stage of the pipeline; their disagreements attribute
/// the error to decomposition, analysis or synthesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageNorms {
    pub field: f64,
    pub channels: f64,
    pub spectral: f64,
    pub synthesized: Vec<f64>,
}

impl StageNorms {
    pub fn decomposition_defect(&self) -> f64 {
        rel(self.channels, self.field)
    }

    pub fn analysis_defect(&self) -> f64 {
        rel(self.spectral, self.channels)
    }

    /// Worst |‖u(t)‖ − ‖φ‖|/‖φ‖ over the times.
    pub fn synthesis_defect(&self) -> f64 {
        self.synthesized.iter().map(|&n| rel(n, self.spectral)).fold(0.0, f64::max)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a
    } else {
        (a - b).abs() / b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldEvolution {
    pub times: Vec<f64>,
    pub fields: Vec<PolarField>,
    pub stages: StageNorms,
}
