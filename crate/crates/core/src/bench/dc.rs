use serde::{Deserialize, Serialize};

use super::{BoundParams, BoundReport, Relation};
use crate::eigenbasis::{dc_phi, DcBranch};
use crate::error::{domain, Result};
use crate::norms::beta_exponent;
use crate::quad::Rule;

const FIT_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcSectorOptions {
    pub mass: f64,
    /// Exponential rate D of the inner sector; fitted from the data when `None`.
    pub rate: Option<f64>,
    /// Exponent of the dyadic L^q checks.
    pub q: f64,
    pub branch: DcBranch,
}

impl Default for DcSectorOptions {
    fn default() -> Self {
        DcSectorOptions {
            mass: 1.0,
            rate: None,
            q: 4.0,
            branch: DcBranch::Conjugate,
        }
    }
}

struct Block {
    r: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn blocks(radii: &[f64]) -> Result<Vec<Block>> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] < 2.0 * w[0]) {
        return Err(domain("dc_sector_bounds", "block radii must be positive and at least a factor 2 apart"));
    }
    Ok(radii
        .iter()
        .map(|&r| {
            let rule = Rule::composite(r, 2.0 * r, (r / 4.0).min(std::f64::consts::FRAC_PI_4), 8);
            Block {
                r,
                nodes: rule.nodes,
                weights: rule.weights,
            }
        })
        .collect())
}

// |Φ| on every block, one sweep over the concatenated nodes.
fn moduli(k: i32, nu: f64, n: f64, blocks: &[Block], opts: &DcSectorOptions) -> Result<Vec<Vec<f64>>> {
    let all: Vec<f64> = blocks.iter().flat_map(|b| b.nodes.iter().copied()).collect();
    let phi = dc_phi(k, nu, opts.mass, n, &all, opts.branch)?;
    let mut out = Vec::with_capacity(blocks.len());
    let mut at = 0;
    for b in blocks {
        out.push(phi[at..at + b.nodes.len()].iter().map(|z| z.norm()).collect());
        at += b.nodes.len();
    }
    if out.iter().flatten().any(|v: &f64| !v.is_finite()) {
        return Err(domain("dc_sector_bounds", "non-finite kernel value"));
    }
    Ok(out)
}

/// The sector envelopes of |Φ_k| as (label, domain test, bound).
type Sector = (&'static str, Box<dyn Fn(f64) -> bool>, Box<dyn Fn(f64) -> f64>);

fn sectors(k: i32, gamma: f64, rate: f64) -> Vec<Sector> {
    let kk = k.unsigned_abs() as f64;
    if kk == 1.0 {
        return vec![
            ("sector-origin", Box::new(|r| r <= 1.0), Box::new(move |r: f64| r.powf(gamma - 1.0))),
            ("sector-far", Box::new(|r| r > 1.0), Box::new(|r: f64| 1.0 / r)),
        ];
    }
    let inner = (kk / 2.0).max(2.0);
    vec![
        (
            "sector-origin",
            Box::new(move |r| r <= inner),
            Box::new(move |r: f64| (r / 2.0).min(1.0).powf(gamma - 1.0) * (-rate * kk).exp()),
        ),
        (
            "sector-turning",
            Box::new(move |r| r >= kk / 2.0 && r <= 2.0 * kk),
            Box::new(move |r: f64| kk.powf(-0.75) * ((kk - r).abs() + kk.cbrt()).powf(-0.25)),
        ),
        ("sector-far", Box::new(move |r| r >= 2.0 * kk), Box::new(|r: f64| 1.0 / r)),
    ]
}

/// D from the inner sector of k = 4 at N = 1 with the constant set to 1:
/// sup_{ρ ≤ 2} |Φ_4|/min(ρ/2, 1)^{γ−1} = e^{−4D}.
pub fn fit_sector_rate(nu: f64, mass: f64, branch: DcBranch) -> Result<f64> {
    let k = 4;
    let gamma = (16.0 - nu * nu).sqrt();
    let radii: Vec<f64> = (-8..=0).map(|j| 2f64.powi(j)).collect();
    let bl = blocks(&radii)?;
    let opts = DcSectorOptions {
        mass,
        branch,
        ..Default::default()
    };
    let mods = moduli(k, nu, 1.0, &bl, &opts)?;
    let sup = bl
        .iter()
        .zip(&mods)
        .flat_map(|(b, m)| b.nodes.iter().zip(m).map(|(&r, v)| v / (r / 2.0).min(1.0).powf(gamma - 1.0)))
        .fold(0.0, f64::max);
    Ok(-sup.ln() / 4.0)
}

/// Sector ratios |Φ_k|/envelope on dyadic blocks [R, 2R], block-sup slopes near
/// the origin (γ − 1) and in the far field (−1), and the dyadic L^q exponents.
///
/// `sup_ratio` is the largest sector ratio, i.e. the constant the envelope
/// needs for this k; far-field fits use blocks with R ≥ 16|k| only.
pub fn dc_sector_bounds(k: i32, nu: f64, frequencies: &[f64], radii: &[f64], opts: &DcSectorOptions) -> Result<BoundReport> {
    if !(-1.0..0.0).contains(&nu) {
        return Err(domain("dc_sector_bounds", format!("need nu in [-1, 0), got {nu}")));
    }
    if frequencies.is_empty() || frequencies.iter().any(|n| !(*n > 0.0)) {
        return Err(domain("dc_sector_bounds", "need positive frequencies"));
    }
    let kk = k.unsigned_abs() as f64;
    let gamma = (kk * kk - nu * nu).sqrt();
    let rate = match (opts.rate, k.abs()) {
        (Some(d), _) => d,
        (None, 1) => 0.0,
        (None, _) => fit_sector_rate(nu, opts.mass, opts.branch)?,
    };
    let q = opts.q;
    let bl = blocks(radii)?;
    let sec = sectors(k, gamma, rate);
    let mut report = BoundReport::new(format!("dc-sectors k={k} nu={nu}"));
    for &n in frequencies {
        let mods = moduli(k, nu, n, &bl, opts)?;
        for (b, m) in bl.iter().zip(&mods) {
            let params = BoundParams {
                k: Some(k),
                coupling: Some(nu),
                n_freq: Some(n),
                r: Some(b.r),
                q: Some(q),
                ..Default::default()
            };
            for (label, inside, bound) in &sec {
                let best = b
                    .nodes
                    .iter()
                    .zip(m)
                    .filter(|(r, _)| inside(**r))
                    .map(|(&r, &v)| (v, bound(r)))
                    .max_by(|a, b| (a.0 / a.1).total_cmp(&(b.0 / b.1)));
                if let Some((v, bnd)) = best {
                    report.push(label, params, v, bnd);
                }
            }
            let sup = m.iter().cloned().fold(0.0, f64::max);
            let lq = b.nodes.iter().zip(&b.weights).zip(m).map(|((_, w), v)| w * v.powf(q)).sum::<f64>().powf(1.0 / q);
            if b.r < 1.0 {
                report.push("sup-origin", params, sup, b.r.powf(gamma - 1.0));
                report.push("lq-small", params, lq, b.r.powf(gamma + 1.0 / q - 1.0));
            }
            if b.r >= 2.0 * kk {
                report.push("sup-far", params, sup, 1.0 / b.r);
            }
            if b.r >= 1.0 {
                let a = if kk == 1.0 { 1.0 / q - 1.0 } else { beta_exponent(q, 3)? };
                report.push("lq-large", params, lq, b.r.powf(a));
            }
        }
    }
    report.sup_ratio = report
        .samples
        .iter()
        .filter(|s| s.regime.starts_with("sector-"))
        .map(|s| s.ratio)
        .fold(0.0, f64::max);
    let far = move |p: &BoundParams| p.r.filter(|r| *r >= 16.0 * kk);
    // one fit per regime needs a single frequency; use the first
    let n0 = frequencies[0];
    let first = move |p: &BoundParams| p.n_freq == Some(n0);
    report.fit_regime("sup-origin", |p| p.r.filter(|_| first(p)), gamma - 1.0, FIT_TOLERANCE, Relation::Equal);
    report.fit_regime("sup-far", |p| far(p).filter(|_| first(p)), -1.0, FIT_TOLERANCE, Relation::Equal);
    report.fit_regime("lq-small", |p| p.r.filter(|_| first(p)), gamma + 1.0 / q - 1.0, FIT_TOLERANCE, Relation::Equal);
    if kk == 1.0 {
        report.fit_regime("lq-large", |p| far(p).filter(|_| first(p)), 1.0 / q - 1.0, FIT_TOLERANCE, Relation::Equal);
    } else {
        report.fit_regime("lq-large", |p| far(p).filter(|_| first(p)), beta_exponent(q, 3)?, FIT_TOLERANCE, Relation::AtMost);
    }
    report.constants.push(("rate_D".into(), rate));
    report.constants.push(("sector_constant".into(), report.sup_ratio));
    Ok(report)
}
