//! `scan-strichartz`: Strichartz ratios over a dyadic data family.

use diracspec_core::bench::{strichartz_scan, DataFamily, Modulation, ScanSettings};
use diracspec_core::channels::Model;
use diracspec_core::norms::Frequency;
use diracspec_core::{bench::BumpProfile, Result};
use rand::Rng;
use serde_json::json;

use super::ReportTables;
use crate::config::{Config, ScanParams};
use crate::output::{model_cells, model_table, Check, Outcome};
use crate::row;

/// Spread allowed at interior admissible pairs, and at (∞, 2) where the
/// ratio is the conserved L² norm.
const INTERIOR_SPREAD: f64 = 10.0;
const ENERGY_SPREAD: f64 = 1.0 + 1e-3;

pub fn scan(cfg: &Config, model: &Model, p: &ScanParams) -> Result<Outcome> {
    let mut family = DataFamily::dyadic(model, p.band, p.members)?;
    if p.random_modulations {
        for (j, m) in family.members.iter_mut().enumerate() {
            let tuple = format!("scan-strichartz/{:?}/n={}/band={:?}/member={j}/N={}", model.potential, model.n, p.band, m.n_freq);
            let mut rng = crate::seed::rng(cfg.seed, &tuple);
            let modulation = Modulation {
                amplitude: rng.gen_range(0.1..0.4),
                frequency: rng.gen_range(0.5..3.0),
                phase: rng.gen_range(0.0..std::f64::consts::TAU),
            };
            m.profile = BumpProfile::modulated(vec![modulation])?;
        }
    }
    let settings = ScanSettings {
        window: p.window,
        margin: p.margin,
        panels_per_wavelength: p.panels_per_wavelength,
        nodes_per_panel: p.nodes_per_panel,
    };
    let report = strichartz_scan(&family, &p.pairs, &settings)?;
    let band = match p.band {
        Frequency::Low => "low",
        Frequency::High => "high",
    };
    let mc = model_cells(model);
    let mut tables = ReportTables::new(&["n", "potential", "mass", "coupling", "band"]);
    tables.add(&[mc.clone(), row![band]].concat(), &report);
    let mut spreads = model_table("spreads", &["band", "lp", "lq", "in_region", "min", "max", "spread", "monotone_growth"]);
    let mut checks = Vec::new();
    for s in &report.spreads {
        let growth = s.monotone_growth.map_or(String::new(), |g| g.to_string());
        spreads.push([mc.clone(), row![band, s.p, s.q, s.in_region, s.min, s.max, s.spread, growth]].concat());
        let label = format!("spread (p,q)=({},{})", s.p, s.q);
        if s.p.is_infinite() && s.q == 2.0 {
            checks.push(Check::hard(label, s.spread, ENERGY_SPREAD, s.spread <= ENERGY_SPREAD, "L² ratio is constant over the family"));
        } else if s.in_region {
            checks.push(Check::hard(label, s.spread, INTERIOR_SPREAD, s.spread <= INTERIOR_SPREAD, "bounded ratio at an admissible pair"));
        } else {
            let detail = format!("exploratory pair, monotone growth {:?}", s.monotone_growth);
            checks.push(Check::hard(label, s.spread, INTERIOR_SPREAD, s.spread <= INTERIOR_SPREAD, detail).soft());
        }
    }
    let w = report.constant("max_window_change").unwrap_or(f64::NAN);
    checks.push(Check::below("window stability", w, 0.02, "time norm on T against T/2 at admissible pairs").soft());
    Ok(Outcome {
        tables: vec![spreads, tables.samples],
        documents: vec![("report".into(), json!({ "report": report, "settings": settings, "members": family.members }))],
        checks,
    })
}
