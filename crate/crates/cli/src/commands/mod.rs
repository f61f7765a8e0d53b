//! One module per subcommand. Each turns a validated config into an
//! [`Outcome`]: tables, JSON documents and pass/fail checks.

mod bench;
mod evolve;
mod region;
mod scan;
mod verify;

use diracspec_core::bench::{BoundParams, BoundReport, BumpProfile, Modulation, Relation};
use diracspec_core::channels::Channel;
use diracspec_core::C64;
use rand::Rng;

use crate::config::{Config, Datum, DatumKind, Experiment};
use crate::output::{Cell, Check, Outcome, Table};
use crate::row;

pub fn run(cfg: &Config) -> diracspec_core::Result<Outcome> {
    let model = cfg.model.as_ref();
    match &cfg.experiment {
        Experiment::Evolve(p) => evolve::evolve(cfg, model.expect("validated"), p),
        Experiment::Transform(p) => evolve::transform(cfg, model.expect("validated"), p),
        Experiment::Verify(p) => verify::verify(cfg, model.expect("validated"), p),
        Experiment::BenchBessel(p) => bench::bessel(p),
        Experiment::BenchDcBounds(p) => bench::dc_bounds(p),
        Experiment::BenchLocalized(p) => bench::localized(cfg.seed, p),
        Experiment::ScanStrichartz(p) => scan::scan(cfg, model.expect("validated"), p),
        Experiment::Region(p) => Ok(region::region(p)),
    }
}

/// 2m_k in 3D, 0 in the plane.
fn twice_mk(ch: Channel) -> i32 {
    ch.twice_mk.unwrap_or(0)
}

/// A unit phase per channel, drawn from the seed and the channel indices.
fn channel_weight(seed: u64, ch: Channel) -> C64 {
    let mut rng = crate::seed::rng(seed, &format!("datum/k={}/twice_mk={}", ch.k, twice_mk(ch)));
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Gaussian shell w·A·g(r)·(1, 0.3 + 0.5i) with g centred at `center`.
fn spatial_datum(d: &Datum, w: C64) -> impl Fn(f64) -> [C64; 2] + '_ {
    debug_assert_eq!(d.kind, DatumKind::Spatial);
    move |r| {
        let g = d.amplitude * (-(r - d.center).powi(2) / (2.0 * d.width * d.width)).exp();
        [w * g, w * C64::new(0.3 * g, 0.5 * g)]
    }
}

/// w·A·exp(−(p − center)²/(2 width²)) on E > 0, zero on the negative sector.
fn spectral_datum(d: &Datum, w: C64, mass: f64) -> impl Fn(f64) -> C64 + '_ {
    move |e| {
        if e < 0.0 {
            return C64::new(0.0, 0.0);
        }
        let p = ((e - mass) * (e + mass)).max(0.0).sqrt();
        w * (d.amplitude * (-(p - d.center).powi(2) / (2.0 * d.width * d.width)).exp())
    }
}

/// `count` cosine modulations with amplitudes summing to at most 0.8.
fn random_profile(seed: u64, tuple: &str, count: usize) -> BumpProfile {
    if count == 0 {
        return BumpProfile::smooth();
    }
    let mut rng = crate::seed::rng(seed, tuple);
    let modulations = (0..count)
        .map(|_| Modulation {
            amplitude: rng.gen_range(0.0..0.8 / count as f64),
            frequency: rng.gen_range(0.5..4.0),
            phase: rng.gen_range(0.0..std::f64::consts::TAU),
        })
        .collect();
    BumpProfile::modulated(modulations).expect("amplitudes sum below 1")
}

fn opt(x: Option<f64>) -> Cell {
    x.map_or(Cell::S(String::new()), Cell::F)
}

fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::Equal => "equal",
        Relation::AtLeast => "at-least",
        Relation::AtMost => "at-most",
    }
}

const SAMPLE_HEADER: [&str; 10] = ["regime", "k", "coupling", "n_freq", "r", "p", "q", "measured", "bound", "ratio"];
const FIT_HEADER: [&str; 10] = ["regime", "slope", "intercept", "residual", "points", "expected", "tolerance", "relation", "flagged", "passes"];

/// Sample and fit tables for a sequence of reports, each row prefixed by the
/// report's parameter tuple.
struct ReportTables {
    samples: Table,
    fits: Table,
}

impl ReportTables {
    fn new(tuple_header: &[&str]) -> ReportTables {
        let table = |name: &str, tail: &[&str]| {
            let mut t = Table::new(name, tuple_header);
            t.header.extend(tail.iter().map(|s| s.to_string()));
            t
        };
        ReportTables {
            samples: table("samples", &SAMPLE_HEADER),
            fits: table("fits", &FIT_HEADER),
        }
    }

    fn add(&mut self, tuple: &[Cell], report: &BoundReport) {
        for s in &report.samples {
            let BoundParams { k, coupling, n_freq, r, p, q } = s.params;
            let mut row = tuple.to_vec();
            row.extend([
                Cell::from(s.regime.as_str()),
                k.map_or(Cell::S(String::new()), Cell::from),
                opt(coupling),
                opt(n_freq),
                opt(r),
                opt(p),
                opt(q),
            ]);
            row.extend(row![s.measured, s.bound, s.ratio]);
            self.samples.push(row);
        }
        for f in &report.fits {
            let mut row = tuple.to_vec();
            row.extend(row![
                f.regime.as_str(),
                f.slope,
                f.intercept,
                f.residual,
                f.points,
                f.expected,
                f.tolerance,
                relation_name(f.relation),
                f.flagged,
                f.passes()
            ]);
            self.fits.push(row);
        }
    }
}

/// One check per fit of `report`; fits in `hard` gate the exit status.
fn fit_checks(label: &str, report: &BoundReport, hard: &[&str]) -> Vec<Check> {
    report
        .fits
        .iter()
        .map(|f| {
            let c = Check::hard(
                format!("{label} {}", f.regime),
                f.slope,
                f.expected,
                f.passes(),
                format!("slope {:.4} vs {:.4} ({}, tolerance {})", f.slope, f.expected, relation_name(f.relation), f.tolerance),
            );
            if hard.contains(&f.regime.as_str()) {
                c
            } else {
                c.soft()
            }
        })
        .collect()
}

/// |a − b|/b, or |a| when b = 0.
fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b
    }
}
