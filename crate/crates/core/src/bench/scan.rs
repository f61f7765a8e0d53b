use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BoundParams, BoundReport, BumpProfile, Modulation, ScanSpread};
use crate::channels::{Channel, ChannelMap, Model, Potential};
use crate::eigenbasis::EigenOptions;
use crate::error::{domain, Result};
use crate::hankel::{HankelPlan, QuadratureSpec, RuleKind, SpectralDensity};
use crate::norms::{channel_l2, radial_lq, sobolev_norm, time_lp, AdmissibleRegion, Frequency};
use crate::propagator::evolve_density;
use crate::quad::Rule;
use crate::C64;

/// Spectrally drawn datum φ_k(E) = c_k·h(p/N) on the positive sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub n_freq: f64,
    pub channels: Vec<(Channel, C64)>,
    pub profile: BumpProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataFamily {
    pub model: Model,
    pub band: Frequency,
    pub members: Vec<FamilyMember>,
}

fn band_edges(n_freq: f64, mass: f64) -> (f64, f64) {
    ((0.5 * n_freq).hypot(mass), n_freq.hypot(mass))
}

impl DataFamily {
    /// Checks channels and that every member lies in its frequency block
    /// (|E| ≤ m + 1 for low, |E| > m + 1 for high).
    pub fn new(model: &Model, band: Frequency, members: Vec<FamilyMember>) -> Result<DataFamily> {
        if members.is_empty() {
            return Err(domain("DataFamily", "the family is empty"));
        }
        for m in &members {
            if !(m.n_freq > 0.0) || m.channels.is_empty() {
                return Err(domain("DataFamily", "members need N > 0 and at least one channel"));
            }
            for (ch, _) in &m.channels {
                ch.validate(model)?;
            }
            let (lo, hi) = band_edges(m.n_freq, model.mass);
            let inside = match band {
                Frequency::Low => hi <= model.mass + 1.0,
                Frequency::High => lo > model.mass + 1.0,
            };
            if !inside {
                return Err(domain("DataFamily", format!("N = {} leaves the {band:?} frequency block", m.n_freq)));
            }
        }
        Ok(DataFamily {
            model: *model,
            band,
            members,
        })
    }

    /// `count` members cycling through five dyadic centres (4..64 for high, 1..1/16
    /// for low), alternating a single lowest channel with a three-channel mix
    /// every five members, each with its own modulation of h.
    pub fn dyadic(model: &Model, band: Frequency, count: usize) -> Result<DataFamily> {
        let mixes = channel_mixes(model);
        let members = (0..count)
            .map(|j| {
                let step = (j % 5) as i32;
                let n_freq = match band {
                    Frequency::High => 4.0 * 2f64.powi(step),
                    Frequency::Low => 2f64.powi(-step),
                };
                let modulation = Modulation {
                    amplitude: 0.3,
                    frequency: (j % 3 + 1) as f64,
                    phase: 0.7 * j as f64,
                };
                FamilyMember {
                    n_freq,
                    channels: mixes[(j / 5) % 2].clone(),
                    profile: BumpProfile {
                        modulations: vec![modulation],
                    },
                }
            })
            .collect();
        DataFamily::new(model, band, members)
    }

    /// Radial-channel data with smooth h at the given centres, ordered by
    /// increasing concentration towards the origin.
    pub fn radial(model: &Model, band: Frequency, frequencies: &[f64]) -> Result<DataFamily> {
        let ch = channel_mixes(model)[0].clone();
        let members = frequencies
            .iter()
            .map(|&n_freq| FamilyMember {
                n_freq,
                channels: ch.clone(),
                profile: BumpProfile::smooth(),
            })
            .collect();
        DataFamily::new(model, band, members)
    }
}

fn channel_mixes(model: &Model) -> [Vec<(Channel, C64)>; 2] {
    let c = |re: f64, im: f64| C64::new(re, im);
    if model.n == 2 {
        [
            vec![(Channel::planar(0), c(1.0, 0.0))],
            vec![(Channel::planar(0), c(1.0, 0.0)), (Channel::planar(1), c(0.0, 0.6)), (Channel::planar(-2), c(-0.4, 0.0))],
        ]
    } else {
        [
            vec![(Channel::spatial(-1, 1), c(1.0, 0.0))],
            vec![
                (Channel::spatial(-1, 1), c(1.0, 0.0)),
                (Channel::spatial(1, -1), c(0.0, 0.6)),
                (Channel::spatial(2, 3), c(-0.4, 0.0)),
            ],
        ]
    }
}

/// Grids of a scan, all scaled to the member's frequency N: the time window is
/// `window`·E/N² on each side, the radial truncation (margin + window)/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    pub window: f64,
    pub margin: f64,
    pub panels_per_wavelength: f64,
    pub nodes_per_panel: usize,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings {
            window: 64.0,
            margin: 24.0,
            panels_per_wavelength: 4.0,
            nodes_per_panel: 6,
        }
    }
}

struct MemberResult {
    /// (lhs on the full window, lhs on the half window) per pair.
    lhs: Vec<(f64, f64)>,
    /// H^s norm of the datum per pair.
    sobolev: Vec<f64>,
}

fn run_member(model: &Model, member: &FamilyMember, pairs: &[(f64, f64)], exponents: &[f64], settings: &ScanSettings) -> Result<MemberResult> {
    let n_freq = member.n_freq;
    let e_c = n_freq.hypot(model.mass);
    let tau = e_c / (n_freq * n_freq);
    let window = settings.window * tau;
    let spec = QuadratureSpec {
        panels_per_wavelength: settings.panels_per_wavelength,
        nodes_per_panel: settings.nodes_per_panel,
        kind: match model.potential {
            Potential::Free => RuleKind::CompositeGauss,
            _ => RuleKind::GradedGauss,
        },
        ..QuadratureSpec::new((settings.margin + settings.window) / n_freq, n_freq)
    };
    let opts = EigenOptions::default();
    let mut plans: BTreeMap<i32, HankelPlan> = BTreeMap::new();
    let mut spectra: ChannelMap<SpectralDensity> = ChannelMap::new();
    for &(ch, weight) in &member.channels {
        if let std::collections::btree_map::Entry::Vacant(e) = plans.entry(ch.k) {
            e.insert(HankelPlan::new(model, ch, spec, &opts)?);
        }
        let momenta = plans[&ch.k].momenta.clone();
        let phi = SpectralDensity::from_fn(model.mass, momenta, false, |e| {
            let p = ((e - model.mass) * (e + model.mass)).max(0.0).sqrt();
            weight * member.profile.eval(p / n_freq)
        });
        spectra.insert(ch, phi);
    }
    let radial = plans.values().next().expect("one channel").radial.clone();
    let (lo, hi) = band_edges(n_freq, model.mass);
    // a multiple of four panels so that the half window is a sub-rule
    let panels = 4 * ((2.0 * window * (hi - lo) / FRAC_PI_2 / 4.0).ceil() as usize).max(1);
    let times = Rule::composite_panels(-window, window, panels, 6);
    let profiles: Vec<Vec<f64>> = times
        .nodes
        .iter()
        .map(|&t| {
            let u = spectra
                .iter()
                .map(|(&ch, phi)| Ok((ch, plans[&ch.k].inverse(&evolve_density(phi, t))?)))
                .collect::<Result<ChannelMap<_>>>()?;
            Ok(channel_l2(&u))
        })
        .collect::<Result<_>>()?;
    let inner: Vec<usize> = (0..times.len()).filter(|&i| times.nodes[i].abs() <= 0.5 * window).collect();
    let half = Rule {
        nodes: inner.iter().map(|&i| times.nodes[i]).collect(),
        weights: inner.iter().map(|&i| times.weights[i]).collect(),
    };
    let mut lhs = Vec::with_capacity(pairs.len());
    for &(p, q) in pairs {
        let per_time: Vec<f64> = profiles.iter().map(|a| radial_lq(a, &radial, model.n, q)).collect();
        let inner_vals: Vec<f64> = inner.iter().map(|&i| per_time[i]).collect();
        lhs.push((time_lp(&per_time, &times, p), time_lp(&inner_vals, &half, p)));
    }
    let sobolev = exponents.iter().map(|&s| sobolev_norm(&spectra, s)).collect::<Result<_>>()?;
    Ok(MemberResult { lhs, sobolev })
}

/// ‖e^{itD}u₀‖_{L^p_t L^q_r L²_θ}/‖u₀‖_{H^s} for every member and pair, with
/// s the regularity of the frequency block. Pairs outside the admissible
/// region of the family's channels are reported as exploratory.
pub fn strichartz_scan(family: &DataFamily, pairs: &[(f64, f64)], settings: &ScanSettings) -> Result<BoundReport> {
    let model = &family.model;
    for &(p, q) in pairs {
        crate::norms::MixedNormSpec::new(p, q)?;
    }
    let radial_free = family
        .members
        .iter()
        .all(|m| m.channels.iter().all(|(ch, _)| !ch.is_radial(model)));
    let region = AdmissibleRegion::new(model, radial_free);
    let exponents: Vec<f64> = pairs.iter().map(|&(p, q)| region.regularity(p, q, family.band)).collect();
    let results: Vec<MemberResult> = family
        .members
        .par_iter()
        .map(|m| run_member(model, m, pairs, &exponents, settings))
        .collect::<Result<_>>()?;
    let mut report = BoundReport::new(format!("strichartz-scan {:?} {:?}", model.potential, family.band));
    let coupling = match model.potential {
        Potential::Free => None,
        Potential::AharonovBohm { alpha } => Some(alpha),
        Potential::Coulomb { nu } => Some(nu),
    };
    let mut worst_window = 0.0f64;
    for (ip, &(p, q)) in pairs.iter().enumerate() {
        let inside = region.contains(p, q);
        let regime = if inside { "in-region" } else { "exploratory" };
        let mut ratios = Vec::with_capacity(results.len());
        for (m, res) in family.members.iter().zip(&results) {
            let (full, half) = res.lhs[ip];
            let change = (full - half).abs() / full;
            if inside {
                worst_window = worst_window.max(change);
            }
            if change >= 0.02 {
                report.notes.push(format!("N = {}, (p,q) = ({p},{q}): window change {change:.3e}", m.n_freq));
            }
            let params = BoundParams {
                coupling,
                n_freq: Some(m.n_freq),
                p: Some(p),
                q: Some(q),
                ..Default::default()
            };
            report.push(regime, params, full, res.sobolev[ip]);
            ratios.push(full / res.sobolev[ip]);
        }
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        report.spreads.push(ScanSpread {
            p,
            q,
            in_region: inside,
            min,
            max,
            spread: max / min,
            monotone_growth: (!inside).then(|| ratios.windows(2).all(|w| w[1] > w[0])),
        });
    }
    report.sup_ratio = report.samples.iter().filter(|s| s.regime == "in-region").map(|s| s.ratio).fold(0.0, f64::max);
    report.constants.push(("max_window_change".into(), worst_window));
    Ok(report)
}
