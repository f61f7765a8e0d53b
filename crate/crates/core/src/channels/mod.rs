//! Partial-wave decomposition of spinor fields and the radial Dirac operators
//! acting on each channel.

mod angular;
mod field;
mod radial;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::Rule;
use crate::C64;

pub use angular::{angular_basis_2d, angular_basis_3d, spherical_harmonic};
pub use field::{decompose, synthesize, AngularGrid, PolarField};
pub use radial::{derivative, radial_dirac_apply};

/// Upper end of the Coulomb coupling range, √15/4.
pub const NU_CRITICAL: f64 = 0.968_245_836_551_854_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    Free,
    AharonovBohm { alpha: f64 },
    Coulomb { nu: f64 },
}

/// Dimension, potential and mass of a Dirac operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub n: usize,
    pub potential: Potential,
    pub mass: f64,
}

impl Model {
    pub fn new(n: usize, potential: Potential, mass: f64) -> Result<Model> {
        let bad = |s: String| Err(Error::InvalidModel(s));
        if n != 2 && n != 3 {
            return bad(format!("dimension must be 2 or 3, got {n}"));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return bad(format!("mass must be positive, got {mass}"));
        }
        match potential {
            Potential::Free => {}
            Potential::AharonovBohm { alpha } => {
                if n != 2 {
                    return bad("Aharonov-Bohm flux is only defined in 2D".into());
                }
                if !(alpha > 0.0 && alpha < 1.0) {
                    return bad(format!("flux alpha must lie in (0,1), got {alpha}"));
                }
            }
            Potential::Coulomb { nu } => {
                if n != 3 {
                    return bad("Coulomb coupling is only supported in 3D".into());
                }
                if !(nu < 0.0 && nu > -NU_CRITICAL) {
                    return bad(format!("coupling nu must lie in (-sqrt(15)/4, 0), got {nu}"));
                }
            }
        }
        Ok(Model { n, potential, mass })
    }

    pub fn free(n: usize, mass: f64) -> Result<Model> {
        Model::new(n, Potential::Free, mass)
    }

    pub fn aharonov_bohm(alpha: f64, mass: f64) -> Result<Model> {
        Model::new(2, Potential::AharonovBohm { alpha }, mass)
    }

    pub fn coulomb(nu: f64, mass: f64) -> Result<Model> {
        Model::new(3, Potential::Coulomb { nu }, mass)
    }

    pub fn alpha(&self) -> f64 {
        match self.potential {
            Potential::AharonovBohm { alpha } => alpha,
            _ => 0.0,
        }
    }

    pub fn nu(&self) -> f64 {
        match self.potential {
            Potential::Coulomb { nu } => nu,
            _ => 0.0,
        }
    }

    pub fn is_coulomb(&self) -> bool {
        matches!(self.potential, Potential::Coulomb { .. })
    }

    /// Every channel with |k| ≤ k_max (and all admissible m_k in 3D).
    pub fn channels(&self, k_max: u32) -> Vec<Channel> {
        let k_max = k_max as i32;
        let mut out = Vec::new();
        if self.n == 2 {
            out.extend((-k_max..=k_max).map(Channel::planar));
        } else {
            for k in (-k_max..=k_max).filter(|&k| k != 0) {
                let top = 2 * k.abs() - 1;
                out.extend((-top..=top).step_by(2).map(|t| Channel::spatial(k, t)));
            }
        }
        out
    }

    /// Number of spinor components of a field (2 in the plane, 4 in space).
    pub fn components(&self) -> usize {
        if self.n == 2 {
            2
        } else {
            4
        }
    }
}

/// A partial wave: the index k and, in 3D, the magnetic number m_k stored as 2m_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Channel {
    pub k: i32,
    pub twice_mk: Option<i32>,
}

/// sgn with the convention sgn(0) = 1.
pub fn sgn(k: i32) -> f64 {
    if k < 0 {
        -1.0
    } else {
        1.0
    }
}

impl Channel {
    pub fn planar(k: i32) -> Channel {
        Channel { k, twice_mk: None }
    }

    pub fn spatial(k: i32, twice_mk: i32) -> Channel {
        Channel {
            k,
            twice_mk: Some(twice_mk),
        }
    }

    pub fn mk(&self) -> Option<f64> {
        self.twice_mk.map(|t| 0.5 * t as f64)
    }

    pub fn validate(&self, model: &Model) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidChannel(s));
        match (model.n, self.twice_mk) {
            (2, None) => Ok(()),
            (2, Some(_)) => bad("planar channels carry no m_k".into()),
            (3, Some(t)) => {
                if self.k == 0 {
                    return bad("k = 0 is not a 3D channel".into());
                }
                if t % 2 == 0 || t.abs() > 2 * self.k.abs() - 1 {
                    return bad(format!("m_k = {}/2 is not admissible for k = {}", t, self.k));
                }
                Ok(())
            }
            (3, None) => bad("3D channels need m_k".into()),
            _ => bad(format!("dimension {}", model.n)),
        }
    }

    /// Bessel orders of the upper and lower components of the free/AB
    /// generalized eigenfunctions.
    pub fn bessel_orders(&self, model: &Model) -> (f64, f64) {
        let k = self.k;
        let s = sgn(k);
        match (model.n, model.potential) {
            (2, Potential::AharonovBohm { alpha }) if k == 0 => (-alpha, 1.0 - alpha),
            (2, _) => {
                let up = (k as f64 - model.alpha()).abs();
                (up, up + s)
            }
            _ => {
                let a = k.abs() as f64;
                (a + 0.5 * s, a - 0.5 * s)
            }
        }
    }

    /// γ = √(k² − ν²) of the Coulomb channel.
    pub fn gamma(&self, nu: f64) -> f64 {
        let k = self.k as f64;
        (k * k - nu * nu).sqrt()
    }

    pub fn is_radial(&self, model: &Model) -> bool {
        if model.n == 2 {
            self.k == 0
        } else {
            self.k.abs() == 1
        }
    }
}

/// Two complex components sampled on a radial quadrature grid, measure r^{n−1}dr.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSpinor {
    pub n: usize,
    pub r: Vec<f64>,
    pub w: Vec<f64>,
    pub upper: Vec<C64>,
    pub lower: Vec<C64>,
}

impl RadialSpinor {
    pub fn zeros(n: usize, rule: &Rule) -> RadialSpinor {
        let z = vec![C64::new(0.0, 0.0); rule.len()];
        RadialSpinor {
            n,
            r: rule.nodes.clone(),
            w: rule.weights.clone(),
            upper: z.clone(),
            lower: z,
        }
    }

    pub fn from_fn(n: usize, rule: &Rule, f: impl Fn(f64) -> [C64; 2]) -> RadialSpinor {
        let (upper, lower) = rule.nodes.iter().map(|&r| {
            let v = f(r);
            (v[0], v[1])
        }).unzip();
        RadialSpinor {
            n,
            r: rule.nodes.clone(),
            w: rule.weights.clone(),
            upper,
            lower,
        }
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Quadrature weight of node j for the measure r^{n−1}dr.
    pub fn measure(&self, j: usize) -> f64 {
        self.w[j] * self.r[j].powi(self.n as i32 - 1)
    }

    pub fn norm_sqr(&self) -> f64 {
        (0..self.len())
            .map(|j| self.measure(j) * (self.upper[j].norm_sqr() + self.lower[j].norm_sqr()))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self, other⟩ in L²(r^{n−1}dr), antilinear in the first slot.
    pub fn inner(&self, other: &RadialSpinor) -> C64 {
        (0..self.len())
            .map(|j| {
                (self.upper[j].conj() * other.upper[j] + self.lower[j].conj() * other.lower[j]) * self.measure(j)
            })
            .sum()
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> RadialSpinor {
        RadialSpinor {
            upper: self.upper.iter().map(|&z| f(z)).collect(),
            lower: self.lower.iter().map(|&z| f(z)).collect(),
            ..self.clone()
        }
    }

    /// self − other on the same grid.
    pub fn sub(&self, other: &RadialSpinor) -> RadialSpinor {
        RadialSpinor {
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a - b).collect(),
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }
}

pub type ChannelMap<T> = BTreeMap<Channel, T>;

/// Keeps the Dirac-radial channels: k = 0 in 2D, k = ±1 in 3D.
pub fn project_rad<T: Clone>(model: &Model, map: &ChannelMap<T>) -> ChannelMap<T> {
    map.iter()
        .filter(|(c, _)| c.is_radial(model))
        .map(|(c, v)| (*c, v.clone()))
        .collect()
}

/// The complement of [`project_rad`].
pub fn project_perp<T: Clone>(model: &Model, map: &ChannelMap<T>) -> ChannelMap<T> {
    map.iter()
        .filter(|(c, _)| !c.is_radial(model))
        .map(|(c, v)| (*c, v.clone()))
        .collect()
}
