//! `verify`: the invariant suite for one model. Eigen-equation residuals with
//! their h⁴ decay, transform isometry and round trip, diagonalization,
//! conservation under evolution and the exact structural identities.

use diracspec_core::channels::{Channel, Model};
use diracspec_core::eigenbasis::{dc_params, eigen_residual, EigenOptions, EnergyPoint};
use diracspec_core::hankel::HankelPlan;
use diracspec_core::propagator::{energy_filter, energy_filter_complement, evolve_density, Band};
use diracspec_core::quad::Rule;
use diracspec_core::{Result, C64};

use super::{rel, twice_mk};
use crate::config::{Config, VerifyParams};
use crate::output::{model_cells, model_table, Cell, Check, Outcome, Table};
use crate::row;

/// Equally spaced nodes, which the finite-difference residual expects.
fn uniform(a: f64, b: f64, n: usize) -> Rule {
    let h = (b - a) / (n - 1) as f64;
    Rule {
        nodes: (0..n).map(|j| a + h * j as f64).collect(),
        weights: vec![h; n],
    }
}

fn shell(r: f64) -> [C64; 2] {
    let g = (-(r - 5.0).powi(2) / 2.0).exp();
    [C64::new(g, 0.0), C64::new(0.3 * g, 0.5 * g)]
}

fn positive_bump(mass: f64) -> impl Fn(f64) -> C64 {
    move |e| {
        if e < 0.0 {
            return C64::new(0.0, 0.0);
        }
        let p = ((e - mass) * (e + mass)).max(0.0).sqrt();
        C64::new((-(p - 3.0).powi(2) * 2.0).exp(), 0.0) * C64::from_polar(1.0, 2.0 * p)
    }
}

/// Checks with their parameter tuple, mirrored into one table.
struct Suite {
    model: Vec<Cell>,
    table: Table,
    checks: Vec<Check>,
}

impl Suite {
    fn add(&mut self, ch: Option<Channel>, energy: Option<f64>, time: Option<f64>, check: Check) {
        let blank = || Cell::S(String::new());
        let mut r = self.model.clone();
        r.push(ch.map_or_else(blank, |c| c.k.into()));
        r.push(ch.map_or_else(blank, |c| twice_mk(c).into()));
        r.push(energy.map_or_else(blank, Cell::F));
        r.push(time.map_or_else(blank, Cell::F));
        r.extend(row![check.name.as_str(), check.value, check.threshold, check.passed]);
        self.table.push(r);
        self.checks.push(check);
    }
}

pub fn verify(cfg: &Config, model: &Model, p: &VerifyParams) -> Result<Outcome> {
    let opts = EigenOptions::default();
    let mut suite = Suite {
        model: model_cells(model),
        table: model_table("checks", &["k", "twice_mk", "energy", "time", "check", "value", "threshold", "passed"]),
        checks: Vec::new(),
    };
    let fine = uniform(0.5, 8.0, 600);
    for &ch in &p.channels {
        for &e in &p.energies {
            let en = EnergyPoint::new(e, model.mass)?;
            let r = eigen_residual(model, ch, &en, &fine, &opts)?;
            suite.add(Some(ch), Some(e), None, Check::below("eigen residual", r, p.residual_tolerance, "‖d_kψ − Eψ‖/‖ψ‖"));
        }
    }
    if let (Some(&ch), Some(&e)) = (p.channels.first(), p.energies.first()) {
        let en = EnergyPoint::new(e, model.mass)?;
        let coarse = eigen_residual(model, ch, &en, &uniform(0.5, 8.0, 150), &opts)?;
        let halved = eigen_residual(model, ch, &en, &uniform(0.5, 8.0, 299), &opts)?;
        let ratio = coarse / halved;
        let ok = (8.0..=32.0).contains(&ratio);
        suite.add(Some(ch), Some(e), None, Check::hard("residual halving ratio", ratio, 16.0, ok, "fourth-order decay: ratio within [8, 32]"));
    }

    for &ch in &p.channels {
        let pl = HankelPlan::new(model, ch, cfg.grids.spec, &opts)?;
        let tol = p.transform_tolerance;
        let phi = if model.is_coulomb() {
            // Coulomb data live on the positive sector: synthesize, then re-analyse
            let phi = pl.density(positive_bump(model.mass));
            let f = pl.inverse(&phi)?;
            suite.add(Some(ch), None, None, Check::below("isometry", rel(f.norm(), phi.norm()), tol, "|‖P⁻¹φ‖/‖φ‖ − 1|"));
            suite.add(Some(ch), None, None, Check::below("round trip", pl.spectral_round_trip(&phi)?, tol, "‖PP⁻¹φ − φ‖/‖φ‖"));
            phi
        } else {
            let f = pl.sample(shell);
            let iso = pl.isometry(&f)?;
            suite.add(Some(ch), None, None, Check::below("isometry", (iso.ratio - 1.0).abs(), tol, "|‖Pf‖/‖f‖ − 1|"));
            suite.add(Some(ch), None, None, Check::below("round trip", pl.round_trip(&f)?, tol, "‖P⁻¹Pf − f‖/‖f‖"));
            let diag = pl.verify_diagonalization(&f)?;
            suite.add(Some(ch), None, None, Check::below("diagonalization", diag.residual, tol, "‖P(d_k f) − E·Pf‖/‖E·Pf‖"));
            pl.forward(&f)?
        };
        let n0 = phi.norm();
        for &t in &p.times {
            let u = evolve_density(&phi, t);
            suite.add(Some(ch), None, Some(t), Check::below("spectral conservation", rel(u.norm(), n0), 1e-12, "|‖e^{itE}φ‖ − ‖φ‖|/‖φ‖"));
            let f = pl.inverse(&u)?;
            suite.add(Some(ch), None, Some(t), Check::below("synthesis conservation", rel(f.norm(), n0), tol, "|‖u(t)‖ − ‖φ‖|/‖φ‖"));
        }
        let band = Band::new(model.mass + 1.0, model.mass + 3.0);
        let (a, b) = (energy_filter(&phi, band), energy_filter_complement(&phi, band));
        let exact = a
            .sectors()
            .zip(b.sectors())
            .zip(phi.sectors())
            .all(|(((_, x), (_, y)), (_, z))| x.iter().zip(y).zip(z).all(|((x, y), z)| x + y == *z && (x.norm() == 0.0 || y.norm() == 0.0)));
        let value = if exact { 0.0 } else { 1.0 };
        suite.add(Some(ch), None, None, Check::hard("filter partition", value, 0.0, exact, "χφ + (1 − χ)φ = φ with disjoint supports"));
    }

    for &e in &p.energies {
        let en = EnergyPoint::new(e, model.mass)?;
        let defect = (en.n_plus.powi(2) + en.n_minus.powi(2) - 1.0).abs();
        suite.add(None, Some(e), None, Check::hard("weight identity", defect, 1e-15, defect <= 1e-15, "|N⁺² + N⁻² − 1|"));
        if model.is_coulomb() {
            for &ch in &p.channels {
                let par = dc_params(ch.k, model.nu(), model.mass, &en)?;
                let defect = (par.phase.norm() - 1.0).abs();
                suite.add(Some(ch), Some(e), None, Check::hard("unit phase", defect, 1e-12, defect <= 1e-12, "||e^{2iξ}| − 1|"));
            }
        }
    }
    Ok(Outcome {
        tables: vec![suite.table],
        checks: suite.checks,
        ..Default::default()
    })
}
