//! `evolve` and `transform`: a datum per channel pushed through the Hankel
//! transform of its channel.

use diracspec_core::channels::{Channel, Model, RadialSpinor};
use diracspec_core::eigenbasis::EigenOptions;
use diracspec_core::hankel::{HankelPlan, SpectralDensity};
use diracspec_core::propagator::{evolve_density, Band, EvolutionPlan};
use diracspec_core::Result;

use super::{channel_weight, rel, spatial_datum, spectral_datum, twice_mk};
use crate::config::{Config, Datum, DatumKind, EvolveParams, TransformParams};
use crate::output::{model_cells, model_table, Cell, Check, Outcome};
use crate::row;

fn plan(cfg: &Config, model: &Model, ch: Channel) -> Result<HankelPlan> {
    HankelPlan::new(model, ch, cfg.grids.spec, &EigenOptions::default())
}

/// The datum's spectral density: analysed for a spatial datum, sampled for a
/// spectral one.
fn initial_density(pl: &HankelPlan, d: &Datum, seed: u64) -> Result<SpectralDensity> {
    let w = channel_weight(seed, pl.channel);
    match d.kind {
        DatumKind::Spatial => pl.forward(&pl.sample(spatial_datum(d, w))),
        DatumKind::Spectral => Ok(pl.density(spectral_datum(d, w, pl.model.mass))),
    }
}

fn spinor_cells(f: &RadialSpinor, j: usize) -> Vec<Cell> {
    row![f.upper[j].re, f.upper[j].im, f.lower[j].re, f.lower[j].im]
}

pub fn evolve(cfg: &Config, model: &Model, p: &EvolveParams) -> Result<Outcome> {
    let ep = EvolutionPlan::new(model, p.times.clone(), p.band.map(|(lo, hi)| Band::new(lo, hi)), false)?;
    let mut snapshots = model_table("snapshots", &["k", "twice_mk", "t", "r", "upper_re", "upper_im", "lower_re", "lower_im"]);
    let mut norms = model_table("norms", &["k", "twice_mk", "t", "spectral_norm", "synthesized_norm", "spectral_drift", "synthesis_drift"]);
    let mut checks = Vec::new();
    let mc = model_cells(model);
    for &ch in &p.channels {
        let pl = plan(cfg, model, ch)?;
        let phi = ep.restrict(&initial_density(&pl, &p.datum, cfg.seed)?);
        let n0 = phi.norm();
        let (mut worst_spectral, mut worst_synth) = (0.0f64, 0.0f64);
        for &t in &p.times {
            let u = evolve_density(&phi, t);
            let f = pl.inverse(&u)?;
            let (ns, nf) = (u.norm(), f.norm());
            let (ds, df) = (rel(ns, n0), rel(nf, n0));
            worst_spectral = worst_spectral.max(ds);
            worst_synth = worst_synth.max(df);
            let key = [mc.clone(), row![ch.k, twice_mk(ch), t]].concat();
            norms.push([key.clone(), row![ns, nf, ds, df]].concat());
            for (j, &r) in f.r.iter().enumerate() {
                snapshots.push([key.clone(), row![r], spinor_cells(&f, j)].concat());
            }
        }
        let label = format!("k={} twice_mk={}", ch.k, twice_mk(ch));
        checks.push(Check::below(format!("spectral conservation {label}"), worst_spectral, 1e-12, "worst |‖e^{itE}φ‖ − ‖φ‖|/‖φ‖"));
        checks.push(Check::below(
            format!("synthesis conservation {label}"),
            worst_synth,
            p.synthesis_tolerance,
            "worst |‖u(t)‖ − ‖φ‖|/‖φ‖ after synthesis",
        ));
    }
    Ok(Outcome {
        tables: vec![norms, snapshots],
        checks,
        ..Default::default()
    })
}

pub fn transform(cfg: &Config, model: &Model, p: &TransformParams) -> Result<Outcome> {
    let mc = model_cells(model);
    let mut radial = model_table(
        "radial",
        &[
            "k", "twice_mk", "r", "upper_re", "upper_im", "lower_re", "lower_im", "rt_upper_re", "rt_upper_im", "rt_lower_re", "rt_lower_im",
        ],
    );
    let mut spectrum = model_table("spectrum", &["k", "twice_mk", "sector", "p", "energy", "re", "im", "rt_re", "rt_im"]);
    let mut summary = model_table(
        "isometry",
        &["k", "twice_mk", "datum", "datum_norm", "image_norm", "isometry_defect", "round_trip", "radial_tail", "spectral_tail"],
    );
    let mut checks = Vec::new();
    for &ch in &p.channels {
        let pl = plan(cfg, model, ch)?;
        let phi = initial_density(&pl, &p.datum, cfg.seed)?;
        let f = match p.datum.kind {
            DatumKind::Spatial => pl.sample(spatial_datum(&p.datum, channel_weight(cfg.seed, ch))),
            DatumKind::Spectral => pl.inverse(&phi)?,
        };
        let f_rt = pl.inverse(&pl.forward(&f)?)?;
        let phi_rt = pl.forward(&pl.inverse(&phi)?)?;
        // norms and round trip measured in the domain the datum was given in
        let (datum_norm, image_norm, round_trip) = match p.datum.kind {
            DatumKind::Spatial => (f.norm(), phi.norm(), relative_error(f_rt.sub(&f).norm(), f.norm())),
            DatumKind::Spectral => (phi.norm(), f.norm(), relative_error(phi_rt.sub(&phi).norm(), phi.norm())),
        };
        let key = [mc.clone(), row![ch.k, twice_mk(ch)]].concat();
        for (j, &r) in f.r.iter().enumerate() {
            radial.push([key.clone(), row![r], spinor_cells(&f, j), spinor_cells(&f_rt, j)].concat());
        }
        let energies = phi.energies();
        for (sector, values) in phi.sectors() {
            let rt_values = phi_rt.sectors().find(|(s, _)| *s == sector).map(|(_, v)| v).expect("same sectors");
            for (i, z) in values.iter().enumerate() {
                let e = sector * energies[i].abs();
                spectrum.push([key.clone(), row![sector as i32, phi.momenta.nodes[i], e, z.re, z.im, rt_values[i].re, rt_values[i].im]].concat());
            }
        }
        let iso = rel(image_norm, datum_norm);
        let tails = pl.truncation(&f, &phi);
        let kind = match p.datum.kind {
            DatumKind::Spatial => "spatial",
            DatumKind::Spectral => "spectral",
        };
        summary.push([key, row![kind, datum_norm, image_norm, iso, round_trip, tails.radial_tail, tails.spectral_tail]].concat());
        let label = format!("k={} twice_mk={}", ch.k, twice_mk(ch));
        checks.push(Check::below(format!("isometry {label}"), iso, p.tolerance, "|‖image‖/‖datum‖ − 1|"));
        checks.push(Check::below(format!("round trip {label}"), round_trip, p.tolerance, "relative error after both transforms"));
    }
    Ok(Outcome {
        tables: vec![summary, spectrum, radial],
        checks,
        ..Default::default()
    })
}

/// err/norm, or err itself for a zero datum.
fn relative_error(err: f64, norm: f64) -> f64 {
    if norm == 0.0 {
        err
    } else {
        err / norm
    }
}
