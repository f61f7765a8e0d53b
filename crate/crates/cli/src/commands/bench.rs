//! `bench-bessel`, `bench-dc-bounds` and `bench-localized`. Parameter tuples
//! run in parallel; reports are merged in tuple order.

use diracspec_core::bench::{
    bessel_dyadic_norms, dc_sector_bounds, dyadic, fit_sector_rate, hausdorff_young_check, localized_strichartz_check, BoundReport, DcComponent,
    DcSectorOptions, KernelFamily, LocalizedSpec,
};
use diracspec_core::eigenbasis::DcBranch;
use diracspec_core::Result;
use rayon::prelude::*;
use serde_json::json;

use super::{fit_checks, random_profile, ReportTables};
use crate::config::{BesselParams, DcBoundParams, FamilyConfig, LocalizedParams};
use crate::output::{Cell, Check, Outcome};
use crate::row;

fn radii(small: (i32, i32), large: (i32, i32)) -> Vec<f64> {
    dyadic(small).into_iter().chain(dyadic(large)).collect()
}

fn finish(tables: ReportTables, reports: Vec<BoundReport>, checks: Vec<Check>, extra: serde_json::Value) -> Outcome {
    Outcome {
        tables: vec![tables.fits, tables.samples],
        documents: vec![("reports".into(), json!({ "reports": reports, "parameters": extra }))],
        checks,
    }
}

pub fn bessel(p: &BesselParams) -> Result<Outcome> {
    let rs = radii(p.small_radii, p.large_radii);
    let tuples: Vec<(usize, f64, f64)> = p
        .dimensions
        .iter()
        .flat_map(|&n| p.orders.iter().flat_map(move |&nu| p.q.iter().map(move |&q| (n, nu, q))))
        .collect();
    let reports: Vec<BoundReport> = tuples
        .par_iter()
        .map(|&(n, nu, q)| bessel_dyadic_norms(nu, q, n, &rs, p.uniform, p.derivative))
        .collect::<Result<_>>()?;
    let mut tables = ReportTables::new(&["dim", "order", "lq", "uniform", "derivative"]);
    let mut checks = Vec::new();
    for (&(n, nu, q), r) in tuples.iter().zip(&reports) {
        tables.add(&row![n, nu, q, p.uniform, p.derivative], r);
        let label = format!("bessel n={n} nu={nu} q={q}");
        // the order-uniform comparison is reported only
        let hard: &[&str] = if p.uniform { &[] } else { &["small-R", "large-R"] };
        checks.extend(fit_checks(&label, r, hard));
        if let Some(b) = r.constant("boundary_ratio") {
            let c = Check::hard(format!("{label} boundary ratio"), b, 4.0, (0.25..=4.0).contains(&b), "norm at R = 1 over the small-R law, within [1/4, 4]");
            checks.push(if p.uniform { c.soft() } else { c });
        }
    }
    Ok(finish(tables, reports, checks, json!({ "radii": rs })))
}

pub fn dc_bounds(p: &DcBoundParams) -> Result<Outcome> {
    let branch = DcBranch::Conjugate;
    let rate = fit_sector_rate(p.nu, p.mass, branch)?;
    let opts = DcSectorOptions {
        mass: p.mass,
        rate: Some(rate),
        q: p.q,
        branch,
    };
    let rs = radii(p.small_radii, p.large_radii);
    let reports: Vec<BoundReport> = p
        .ks
        .par_iter()
        .map(|&k| dc_sector_bounds(k, p.nu, &p.frequencies, &rs, &opts))
        .collect::<Result<_>>()?;
    let mut tables = ReportTables::new(&["nu", "k_channel", "mass", "lq"]);
    let mut checks = Vec::new();
    for (&k, r) in p.ks.iter().zip(&reports) {
        tables.add(&row![p.nu, k, p.mass, p.q], r);
        let label = format!("coulomb k={k} nu={}", p.nu);
        checks.extend(fit_checks(&label, r, &["sup-origin", "sup-far"]));
        let finite = r.ratios_finite() && r.sup_ratio.is_finite();
        checks.push(Check::hard(format!("{label} finite ratios"), r.sup_ratio, f64::MAX, finite, "every measured/bound ratio is finite"));
    }
    Ok(finish(tables, reports, checks, json!({ "radii": rs, "rate_D": rate })))
}

fn kernel_family(f: FamilyConfig) -> KernelFamily {
    match f {
        FamilyConfig::Free { n, order: None } => KernelFamily::free_minimal(n),
        FamilyConfig::Free { n, order: Some(order) } => KernelFamily::Free { n, order },
        FamilyConfig::AharonovBohm { alpha } => KernelFamily::AharonovBohm { alpha },
        FamilyConfig::Coulomb { k, nu, component } => KernelFamily::Coulomb { k, nu, component },
    }
}

fn family_cells(f: &KernelFamily) -> Vec<Cell> {
    match *f {
        KernelFamily::Free { n, order } => row!["free", n, order, "", ""],
        KernelFamily::AharonovBohm { alpha } => row!["aharonov-bohm", 2usize, alpha, "", ""],
        KernelFamily::Coulomb { k, nu, component } => {
            let c = match component {
                DcComponent::F => "F",
                DcComponent::G => "G",
            };
            row!["coulomb", 3usize, nu, k, c]
        }
    }
}

pub fn localized(seed: u64, p: &LocalizedParams) -> Result<Outcome> {
    let specs: Vec<LocalizedSpec> = p
        .families
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let family = kernel_family(f);
            let tuple = format!("bench-localized/{i}/{family:?}/N={}/p={}/q={}", p.n_freq, p.p, p.q);
            LocalizedSpec {
                family,
                mass: p.mass,
                n_freq: p.n_freq,
                radii: dyadic(p.radii),
                p: p.p,
                q: p.q,
                profile: random_profile(seed, &tuple, p.modulations),
            }
        })
        .collect();
    let mut reports: Vec<BoundReport> = specs.par_iter().map(localized_strichartz_check).collect::<Result<_>>()?;
    let header = ["family", "dim", "coupling", "k_channel", "component", "mass", "lp", "lq"];
    let mut tables = ReportTables::new(&header);
    let mut checks = Vec::new();
    for (s, r) in specs.iter().zip(&reports) {
        let mut tuple = family_cells(&s.family);
        tuple.extend(row![p.mass, p.p, p.q]);
        tables.add(&tuple, r);
        let label = format!("localized {:?}", s.family);
        checks.extend(fit_checks(&label, r, &["small-R"]));
        let w = r.constant("max_window_change").unwrap_or(f64::NAN);
        checks.push(Check::below(format!("{label} window stability"), w, 0.02, "relative change of the time norm when the window doubles").soft());
    }
    let profile = random_profile(seed, &format!("bench-localized/cn/p={}", p.p), p.modulations);
    let ns = radii(p.cn_low, p.cn_high);
    let hy = hausdorff_young_check(&ns, p.p, p.mass, &profile)?;
    tables.add(&row!["time-transform", "", "", "", "", p.mass, p.p, ""], &hy);
    checks.extend(fit_checks("frequency constant", &hy, &["cn-high", "cn-low"]));
    reports.push(hy);
    Ok(finish(tables, reports, checks, json!({ "modulations": p.modulations })))
}
