use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{angular_basis_2d, angular_basis_3d, Channel, ChannelMap, Model, RadialSpinor};
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, Rule};
use crate::C64;

/// Angular quadrature: uniform nodes on the circle, or Gauss–Legendre in cos θ₁
/// times uniform θ₂ on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngularGrid {
    Circle { nodes: usize },
    Sphere { polar: usize, azimuthal: usize },
}

impl AngularGrid {
    /// Smallest grid on which channels |k| ≤ k_max are resolved exactly.
    pub fn for_band(n: usize, k_max: u32) -> AngularGrid {
        let k = k_max as usize;
        if n == 2 {
            AngularGrid::Circle { nodes: 2 * k + 2 }
        } else {
            AngularGrid::Sphere {
                polar: k + 1,
                azimuthal: 2 * k + 1,
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AngularGrid::Circle { .. } => 2,
            AngularGrid::Sphere { .. } => 3,
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            AngularGrid::Circle { nodes } => nodes,
            AngularGrid::Sphere { polar, azimuthal } => polar * azimuthal,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest band limit the grid integrates without aliasing.
    pub fn band_limit(&self) -> i64 {
        match *self {
            AngularGrid::Circle { nodes } => (nodes as i64 - 2).div_euclid(2),
            AngularGrid::Sphere { polar, azimuthal } => (polar as i64 - 1).min((azimuthal as i64 - 1).div_euclid(2)),
        }
    }

    fn nodes_needed(&self, k_max: u32) -> usize {
        match AngularGrid::for_band(self.dim(), k_max) {
            AngularGrid::Circle { nodes } => nodes,
            AngularGrid::Sphere { polar, azimuthal } => polar * azimuthal,
        }
    }

    /// (θ₁, θ₂, weight) triples; θ₂ = 0 on the circle.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        match *self {
            AngularGrid::Circle { nodes } => {
                let h = 2.0 * PI / nodes as f64;
                (0..nodes).map(|j| (h * j as f64, 0.0, h)).collect()
            }
            AngularGrid::Sphere { polar, azimuthal } => {
                let (x, w) = gauss_legendre(polar);
                let h = 2.0 * PI / azimuthal as f64;
                let mut out = Vec::with_capacity(polar * azimuthal);
                for (xi, wi) in x.iter().zip(&w) {
                    for j in 0..azimuthal {
                        out.push((xi.acos(), h * j as f64, wi * h));
                    }
                }
                out
            }
        }
    }
}

/// Spinor field sampled on radial × angular nodes; values indexed
/// `(radial * angles + angle) * components + component`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarField {
    pub n: usize,
    pub radial: Rule,
    pub angular: AngularGrid,
    pub values: Vec<C64>,
}

impl PolarField {
    pub fn components(&self) -> usize {
        if self.n == 2 {
            2
        } else {
            4
        }
    }

    pub fn zeros(n: usize, radial: Rule, angular: AngularGrid) -> PolarField {
        let len = radial.len() * angular.len() * if n == 2 { 2 } else { 4 };
        PolarField {
            n,
            radial,
            angular,
            values: vec![C64::new(0.0, 0.0); len],
        }
    }

    /// Samples f(r, θ₁, θ₂), which must return one value per component.
    pub fn from_fn(n: usize, radial: Rule, angular: AngularGrid, f: impl Fn(f64, f64, f64) -> Vec<C64>) -> PolarField {
        let pts = angular.points();
        let mut values = Vec::new();
        for &r in &radial.nodes {
            for &(t1, t2, _) in &pts {
                values.extend(f(r, t1, t2));
            }
        }
        PolarField {
            n,
            radial,
            angular,
            values,
        }
    }

    pub fn at(&self, ir: usize, ia: usize) -> &[C64] {
        let nc = self.components();
        let start = (ir * self.angular.len() + ia) * nc;
        &self.values[start..start + nc]
    }

    /// ‖u‖² in L²(r^{n−1}dr dσ).
    pub fn norm_sqr(&self) -> f64 {
        let pts = self.angular.points();
        let mut total = 0.0;
        for (ir, (&r, &w)) in self.radial.nodes.iter().zip(&self.radial.weights).enumerate() {
            let rw = w * r.powi(self.n as i32 - 1);
            for (ia, p) in pts.iter().enumerate() {
                total += rw * p.2 * self.at(ir, ia).iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
        }
        total
    }
}

fn basis_vectors(model: &Model, ch: Channel, pts: &[(f64, f64, f64)]) -> Result<Vec<[Vec<C64>; 2]>> {
    ch.validate(model)?;
    pts.iter()
        .map(|&(t1, t2, _)| {
            if model.n == 2 {
                let b = angular_basis_2d(ch.k, t1);
                Ok([b[0].to_vec(), b[1].to_vec()])
            } else {
                let b = angular_basis_3d(ch.k, ch.twice_mk.unwrap_or(0), t1, t2)?;
                Ok([b[0].to_vec(), b[1].to_vec()])
            }
        })
        .collect()
}

/// Radial coefficients ψ±_k(r) = ⟨Ξ±_k, u(r, ·)⟩ for every channel with |k| ≤ k_max.
pub fn decompose(model: &Model, field: &PolarField, k_max: u32) -> Result<ChannelMap<RadialSpinor>> {
    if field.n != model.n {
        return Err(Error::InvalidModel(format!("field is {}D, model is {}D", field.n, model.n)));
    }
    if field.angular.band_limit() < k_max as i64 {
        return Err(Error::Aliasing {
            k_max: k_max as i64,
            needed: field.angular.nodes_needed(k_max),
            got: field.angular.len(),
        });
    }
    let pts = field.angular.points();
    let nc = field.components();
    let chans = model.channels(k_max);
    let parts: Vec<(Channel, RadialSpinor)> = chans
        .par_iter()
        .map(|&ch| {
            let basis = basis_vectors(model, ch, &pts)?;
            let mut spinor = RadialSpinor::zeros(model.n, &field.radial);
            for ir in 0..field.radial.len() {
                let (mut up, mut dn) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                for (ia, p) in pts.iter().enumerate() {
                    let v = field.at(ir, ia);
                    for c in 0..nc {
                        up += basis[ia][0][c].conj() * v[c] * p.2;
                        dn += basis[ia][1][c].conj() * v[c] * p.2;
                    }
                }
                spinor.upper[ir] = up;
                spinor.lower[ir] = dn;
            }
            Ok((ch, spinor))
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().collect())
}

/// Σ_k ψ⁺_k(r)Ξ⁺_k + ψ⁻_k(r)Ξ⁻_k on the given grids.
pub fn synthesize(model: &Model, map: &ChannelMap<RadialSpinor>, radial: &Rule, angular: AngularGrid) -> Result<PolarField> {
    if angular.dim() != model.n {
        return Err(Error::InvalidModel(format!("angular grid is {}D, model is {}D", angular.dim(), model.n)));
    }
    let pts = angular.points();
    let mut field = PolarField::zeros(model.n, radial.clone(), angular);
    let nc = field.components();
    let na = pts.len();
    for (&ch, spinor) in map {
        if spinor.len() != radial.len() {
            return Err(Error::InvalidChannel(format!("channel {ch:?} sampled on {} nodes, grid has {}", spinor.len(), radial.len())));
        }
        let basis = basis_vectors(model, ch, &pts)?;
        for ir in 0..radial.len() {
            for (ia, b) in basis.iter().enumerate() {
                let base = (ir * na + ia) * nc;
                for c in 0..nc {
                    field.values[base + c] += spinor.upper[ir] * b[0][c] + spinor.lower[ir] * b[1][c];
                }
            }
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_rule() -> Rule {
        Rule::composite(0.0, 8.0, 0.5, 10)
    }

    #[test]
    fn pure_mode_decomposes_to_single_channel() {
        let model = Model::free(2, 1.0).unwrap();
        let rule = gaussian_rule();
        let f = |r: f64| (-r * r).exp() * r;
        let field = PolarField::from_fn(2, rule.clone(), AngularGrid::Circle { nodes: 16 }, |r, t, _| {
            angular_basis_2d(2, t)[0].iter().map(|z| z * f(r)).collect()
        });
        let map = decompose(&model, &field, 3).unwrap();
        for (ch, s) in &map {
            let mass = s.norm();
            if ch.k == 2 {
                for (j, &r) in s.r.iter().enumerate() {
                    assert!((s.upper[j] - f(r)).norm() < 1e-14);
                    assert!(s.lower[j].norm() < 1e-14);
                }
            } else {
                assert!(mass < 1e-14, "leak into {ch:?}: {mass}");
            }
        }
    }

    #[test]
    fn aliasing_is_reported() {
        let model = Model::free(2, 1.0).unwrap();
        let field = PolarField::zeros(2, gaussian_rule(), AngularGrid::Circle { nodes: 6 });
        assert!(matches!(decompose(&model, &field, 3), Err(Error::Aliasing { .. })));
        let m3 = Model::free(3, 1.0).unwrap();
        let f3 = PolarField::zeros(3, gaussian_rule(), AngularGrid::Sphere { polar: 3, azimuthal: 9 });
        assert!(matches!(decompose(&m3, &f3, 3), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn round_trip_and_parseval_in_3d() {
        let model = Model::free(3, 1.0).unwrap();
        let rule = gaussian_rule();
        let grid = AngularGrid::for_band(3, 2);
        // band-limited random-ish field assembled from channel data
        let mut map = ChannelMap::new();
        for (i, ch) in model.channels(2).into_iter().enumerate() {
            let a = 0.3 + 0.1 * i as f64;
            let s = RadialSpinor::from_fn(3, &rule, |r| {
                let g = (-a * r * r).exp();
                [C64::new(g, 0.2 * g * r), C64::new(-0.5 * g * r, g * (i as f64).sin())]
            });
            map.insert(ch, s);
        }
        let field = synthesize(&model, &map, &rule, grid).unwrap();
        let back = decompose(&model, &field, 2).unwrap();
        let total: f64 = map.values().map(|s| s.norm_sqr()).sum();
        assert!((field.norm_sqr() - total).abs() < 1e-12 * total);
        for (ch, s) in &map {
            assert!(back[ch].sub(s).norm() < 1e-12 * s.norm(), "{ch:?}");
        }
        let empty = synthesize(&model, &ChannelMap::new(), &rule, grid).unwrap();
        assert!(empty.values.iter().all(|z| z.norm() == 0.0));
    }
}
