//! Experiment configuration: a TOML document read into `toml::Value` and
//! checked by hand so that every schema violation is reported at once.

use std::collections::BTreeSet;
use std::path::PathBuf;

use diracspec_core::bench::DcComponent;
use diracspec_core::channels::{Channel, Model, Potential};
use diracspec_core::hankel::{QuadratureSpec, RuleKind};
use diracspec_core::norms::Frequency;
use toml::{Table, Value};

use crate::Command;

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub model: Option<Model>,
    pub grids: Grids,
    pub output_dir: PathBuf,
    pub experiment: Experiment,
    /// The document as written, echoed into the manifest.
    pub text: String,
}

#[derive(Debug, Clone, Copy)]
pub struct Grids {
    pub spec: QuadratureSpec,
    pub k_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DatumKind {
    /// Gaussian shell in r, analysed by the forward transform.
    Spatial,
    /// Gaussian in momentum on the positive sector, synthesized by the inverse.
    Spectral,
}

#[derive(Debug, Clone, Copy)]
pub struct Datum {
    pub kind: DatumKind,
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone)]
pub struct EvolveParams {
    pub datum: Datum,
    pub channels: Vec<Channel>,
    pub times: Vec<f64>,
    pub band: Option<(f64, f64)>,
    pub synthesis_tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct TransformParams {
    pub datum: Datum,
    pub channels: Vec<Channel>,
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyParams {
    pub channels: Vec<Channel>,
    pub energies: Vec<f64>,
    pub times: Vec<f64>,
    pub residual_tolerance: f64,
    pub transform_tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct BesselParams {
    pub orders: Vec<f64>,
    pub q: Vec<f64>,
    pub dimensions: Vec<usize>,
    pub small_radii: (i32, i32),
    pub large_radii: (i32, i32),
    pub uniform: bool,
    pub derivative: bool,
}

#[derive(Debug, Clone)]
pub struct DcBoundParams {
    pub nu: f64,
    pub ks: Vec<i32>,
    pub mass: f64,
    pub q: f64,
    pub frequencies: Vec<f64>,
    pub small_radii: (i32, i32),
    pub large_radii: (i32, i32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyConfig {
    Free { n: usize, order: Option<f64> },
    AharonovBohm { alpha: f64 },
    Coulomb { k: i32, nu: f64, component: DcComponent },
}

#[derive(Debug, Clone)]
pub struct LocalizedParams {
    pub families: Vec<FamilyConfig>,
    pub mass: f64,
    pub n_freq: f64,
    pub radii: (i32, i32),
    pub p: f64,
    pub q: f64,
    pub modulations: usize,
    pub cn_high: (i32, i32),
    pub cn_low: (i32, i32),
}

#[derive(Debug, Clone)]
pub struct ScanParams {
    pub band: Frequency,
    pub members: usize,
    pub pairs: Vec<(f64, f64)>,
    pub window: f64,
    pub margin: f64,
    pub panels_per_wavelength: f64,
    pub nodes_per_panel: usize,
    pub random_modulations: bool,
}

#[derive(Debug, Clone)]
pub struct RegionParams {
    pub alphas: Vec<f64>,
    pub nus: Vec<f64>,
    pub ps: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum Experiment {
    Evolve(EvolveParams),
    Transform(TransformParams),
    Verify(VerifyParams),
    BenchBessel(BesselParams),
    BenchDcBounds(DcBoundParams),
    BenchLocalized(LocalizedParams),
    ScanStrichartz(ScanParams),
    Region(RegionParams),
}

/// Collects violations while reading; lookups fall back to defaults so that
/// reading continues past the first error.
struct Reader {
    errors: Vec<String>,
}

impl Reader {
    fn fail(&mut self, msg: String) {
        self.errors.push(msg);
    }

    fn ensure(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }

    fn unknown_keys(&mut self, t: &Table, path: &str, allowed: &[&str]) {
        for key in t.keys() {
            if !allowed.contains(&key.as_str()) {
                self.fail(format!("{}: unknown key", join(path, key)));
            }
        }
    }

    fn table<'a>(&mut self, t: &'a Table, path: &str, key: &str) -> Option<&'a Table> {
        match t.get(key) {
            None => None,
            Some(Value::Table(inner)) => Some(inner),
            Some(_) => {
                self.fail(format!("{}: expected a table", join(path, key)));
                None
            }
        }
    }

    fn float(&mut self, t: &Table, path: &str, key: &str) -> Option<f64> {
        match t.get(key)? {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.fail(format!("{}: expected a number", join(path, key)));
                None
            }
        }
    }

    fn float_or(&mut self, t: &Table, path: &str, key: &str, default: f64) -> f64 {
        self.float(t, path, key).unwrap_or(default)
    }

    fn required_float(&mut self, t: &Table, path: &str, key: &str) -> f64 {
        if !t.contains_key(key) {
            self.fail(format!("{}: missing", join(path, key)));
        }
        self.float(t, path, key).unwrap_or(f64::NAN)
    }

    fn int(&mut self, t: &Table, path: &str, key: &str) -> Option<i64> {
        match t.get(key)? {
            Value::Integer(i) => Some(*i),
            _ => {
                self.fail(format!("{}: expected an integer", join(path, key)));
                None
            }
        }
    }

    fn count(&mut self, t: &Table, path: &str, key: &str, default: usize, min: usize) -> usize {
        let v = self.int(t, path, key).unwrap_or(default as i64);
        if v < min as i64 {
            self.fail(format!("{}: must be at least {min}, got {v}", join(path, key)));
            return default;
        }
        v as usize
    }

    fn boolean(&mut self, t: &Table, path: &str, key: &str, default: bool) -> bool {
        match t.get(key) {
            None => default,
            Some(Value::Boolean(b)) => *b,
            Some(_) => {
                self.fail(format!("{}: expected true or false", join(path, key)));
                default
            }
        }
    }

    fn string<'a>(&mut self, t: &'a Table, path: &str, key: &str) -> Option<&'a str> {
        match t.get(key)? {
            Value::String(s) => Some(s),
            _ => {
                self.fail(format!("{}: expected a string", join(path, key)));
                None
            }
        }
    }

    fn floats(&mut self, t: &Table, path: &str, key: &str, default: &[f64]) -> Vec<f64> {
        let Some(v) = t.get(key) else {
            return default.to_vec();
        };
        let p = join(path, key);
        let Value::Array(items) = v else {
            self.fail(format!("{p}: expected an array of numbers"));
            return default.to_vec();
        };
        let mut out = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            match item {
                Value::Float(x) => out.push(*x),
                Value::Integer(n) => out.push(*n as f64),
                _ => self.fail(format!("{p}[{i}]: expected a number")),
            }
        }
        if out.is_empty() {
            self.fail(format!("{p}: must not be empty"));
        }
        out
    }

    fn ints(&mut self, t: &Table, path: &str, key: &str, default: &[i64]) -> Vec<i64> {
        let Some(v) = t.get(key) else {
            return default.to_vec();
        };
        let p = join(path, key);
        let Value::Array(items) = v else {
            self.fail(format!("{p}: expected an array of integers"));
            return default.to_vec();
        };
        let out: Vec<i64> = items
            .iter()
            .enumerate()
            .filter_map(|(i, item)| match item {
                Value::Integer(n) => Some(*n),
                _ => {
                    self.fail(format!("{p}[{i}]: expected an integer"));
                    None
                }
            })
            .collect();
        if out.is_empty() {
            self.fail(format!("{p}: must not be empty"));
        }
        out
    }

    /// An inclusive range of dyadic exponents written `[a, b]`.
    fn exponents(&mut self, t: &Table, path: &str, key: &str, default: (i32, i32)) -> (i32, i32) {
        if !t.contains_key(key) {
            return default;
        }
        let v = self.ints(t, path, key, &[]);
        match v[..] {
            [a, b] if a <= b && a.abs() <= 60 && b.abs() <= 60 => (a as i32, b as i32),
            _ => {
                self.fail(format!("{}: expected [a, b] with a <= b and |a|, |b| <= 60", join(path, key)));
                default
            }
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn needs_model(sub: Command) -> bool {
    matches!(sub, Command::Evolve | Command::Transform | Command::Verify | Command::ScanStrichartz)
}

impl Config {
    /// Parses and validates a document for one subcommand; `Err` lists every violation.
    pub fn parse(text: &str, sub: Command) -> Result<Config, Vec<String>> {
        let root: Table = text.parse().map_err(|e: toml::de::Error| vec![format!("not valid TOML: {}", e.message())])?;
        let mut rd = Reader { errors: Vec::new() };
        rd.unknown_keys(&root, "", &["seed", "model", "grids", "experiment", "output"]);
        let seed = match rd.int(&root, "", "seed") {
            Some(s) if s >= 0 => s as u64,
            Some(s) => {
                rd.fail(format!("seed: must be non-negative, got {s}"));
                0
            }
            None => 0,
        };
        let model = match rd.table(&root, "", "model") {
            Some(t) => read_model(&mut rd, t),
            None => {
                rd.ensure(!needs_model(sub), || "model: missing (required by this subcommand)".into());
                None
            }
        };
        let grids_table = rd.table(&root, "", "grids");
        let grids = read_grids(&mut rd, grids_table, model.as_ref());
        let output_dir = match rd.table(&root, "", "output") {
            Some(t) => {
                rd.unknown_keys(t, "output", &["dir"]);
                PathBuf::from(rd.string(t, "output", "dir").unwrap_or("out"))
            }
            None => PathBuf::from("out"),
        };
        let empty = Table::new();
        let exp = rd.table(&root, "", "experiment").unwrap_or(&empty);
        let experiment = match sub {
            Command::Evolve => Experiment::Evolve(read_evolve(&mut rd, exp, model.as_ref(), &grids)),
            Command::Transform => Experiment::Transform(read_transform(&mut rd, exp, model.as_ref(), &grids)),
            Command::Verify => Experiment::Verify(read_verify(&mut rd, exp, model.as_ref(), &grids)),
            Command::BenchBessel => Experiment::BenchBessel(read_bessel(&mut rd, exp)),
            Command::BenchDcBounds => Experiment::BenchDcBounds(read_dc(&mut rd, exp)),
            Command::BenchLocalized => Experiment::BenchLocalized(read_localized(&mut rd, exp)),
            Command::ScanStrichartz => Experiment::ScanStrichartz(read_scan(&mut rd, exp)),
            Command::Region => Experiment::Region(read_region(&mut rd, exp)),
        };
        if !rd.errors.is_empty() {
            return Err(rd.errors);
        }
        Ok(Config {
            seed,
            model,
            grids,
            output_dir,
            experiment,
            text: text.to_string(),
        })
    }
}

fn read_model(rd: &mut Reader, t: &Table) -> Option<Model> {
    rd.unknown_keys(t, "model", &["n", "potential", "mass", "coupling"]);
    let n = rd.int(t, "model", "n");
    rd.ensure(n.is_some() || t.contains_key("n"), || "model.n: missing".into());
    let mass = rd.float_or(t, "model", "mass", 1.0);
    let coupling = rd.float(t, "model", "coupling");
    let potential = match rd.string(t, "model", "potential").unwrap_or("free") {
        "free" => {
            rd.ensure(coupling.is_none(), || "model.coupling: not used by the free model".into());
            Some(Potential::Free)
        }
        "aharonov-bohm" => match coupling {
            Some(alpha) => Some(Potential::AharonovBohm { alpha }),
            None => {
                rd.fail("model.coupling: the flux alpha is required for aharonov-bohm".into());
                None
            }
        },
        "coulomb" => match coupling {
            Some(nu) => Some(Potential::Coulomb { nu }),
            None => {
                rd.fail("model.coupling: the coupling nu is required for coulomb".into());
                None
            }
        },
        other => {
            rd.fail(format!("model.potential: expected free, aharonov-bohm or coulomb, got {other:?}"));
            None
        }
    };
    if let Some(n) = n.filter(|n| !(2..=3).contains(n)) {
        rd.fail(format!("model.n: must be 2 or 3, got {n}"));
        return None;
    }
    let (n, potential) = (n?, potential?);
    match Model::new(n as usize, potential, mass) {
        Ok(m) => Some(m),
        Err(e) => {
            rd.fail(format!("model: {e}"));
            None
        }
    }
}

fn read_grids(rd: &mut Reader, t: Option<&Table>, model: Option<&Model>) -> Grids {
    let mass = model.map_or(1.0, |m| m.mass);
    let kind = match model.map(|m| m.potential) {
        Some(Potential::Free) | None => RuleKind::CompositeGauss,
        _ => RuleKind::GradedGauss,
    };
    // R_max = 40/m and P_max = 40m with one 8-node panel per wavelength
    let mut spec = QuadratureSpec {
        panels_per_wavelength: 1.0,
        nodes_per_panel: 8,
        kind,
        ..QuadratureSpec::for_mass(mass)
    };
    let Some(t) = t else {
        return Grids { spec, k_max: 1 };
    };
    let p = "grids";
    rd.unknown_keys(t, p, &["r_max", "p_max", "panels_per_wavelength", "nodes_per_panel", "rule", "k_max", "tail_tolerance"]);
    spec.r_max = rd.float_or(t, p, "r_max", spec.r_max);
    spec.p_max = rd.float_or(t, p, "p_max", spec.p_max);
    spec.panels_per_wavelength = rd.float_or(t, p, "panels_per_wavelength", spec.panels_per_wavelength);
    spec.nodes_per_panel = rd.count(t, p, "nodes_per_panel", spec.nodes_per_panel, 1);
    spec.tail_tolerance = rd.float_or(t, p, "tail_tolerance", spec.tail_tolerance);
    match rd.string(t, p, "rule") {
        None => {}
        Some("composite") => spec.kind = RuleKind::CompositeGauss,
        Some("graded") => spec.kind = RuleKind::GradedGauss,
        Some(other) => rd.fail(format!("grids.rule: expected composite or graded, got {other:?}")),
    }
    if let Err(e) = spec.validate() {
        rd.fail(format!("grids: {e}"));
    }
    rd.ensure(spec.tail_tolerance > 0.0 && spec.tail_tolerance < 1.0, || "grids.tail_tolerance: must lie in (0, 1)".into());
    let k_max = rd.count(t, p, "k_max", 1, 0).min(32) as u32;
    Grids { spec, k_max }
}

fn read_datum(rd: &mut Reader, exp: &Table, model: Option<&Model>, r_max: f64) -> Datum {
    let coulomb = model.is_some_and(|m| m.is_coulomb());
    let default_kind = if coulomb { DatumKind::Spectral } else { DatumKind::Spatial };
    let empty = Table::new();
    let t = rd.table(exp, "experiment", "datum").unwrap_or(&empty);
    let p = "experiment.datum";
    rd.unknown_keys(t, p, &["kind", "center", "width", "amplitude"]);
    let kind = match rd.string(t, p, "kind") {
        None => default_kind,
        Some("spatial") => DatumKind::Spatial,
        Some("spectral") => DatumKind::Spectral,
        Some(other) => {
            rd.fail(format!("{p}.kind: expected spatial or spectral, got {other:?}"));
            default_kind
        }
    };
    rd.ensure(!(coulomb && kind == DatumKind::Spatial), || {
        format!("{p}.kind: Coulomb data live on the positive spectral sector and must be given as spectral")
    });
    let (c0, w0) = match kind {
        DatumKind::Spatial => (5.0, 1.0),
        DatumKind::Spectral => (3.0, 0.5),
    };
    let d = Datum {
        kind,
        center: rd.float_or(t, p, "center", c0),
        width: rd.float_or(t, p, "width", w0),
        amplitude: rd.float_or(t, p, "amplitude", 1.0),
    };
    rd.ensure(d.center >= 0.0 && d.center.is_finite(), || format!("{p}.center: must be finite and non-negative"));
    rd.ensure(d.width > 0.0 && d.width.is_finite(), || format!("{p}.width: must be positive"));
    rd.ensure(d.amplitude.is_finite(), || format!("{p}.amplitude: must be finite"));
    if kind == DatumKind::Spatial {
        rd.ensure(d.center + 8.0 * d.width <= 0.9 * r_max, || {
            format!("{p}: the shell at {} with width {} reaches the outer tenth of r_max = {r_max}", d.center, d.width)
        });
    }
    d
}

/// Channels named by k; in 3D each k is taken with m_k = ½.
fn read_channels(rd: &mut Reader, exp: &Table, model: Option<&Model>, k_max: u32) -> Vec<Channel> {
    let Some(model) = model else {
        return Vec::new();
    };
    let make = |k: i32| if model.n == 2 { Channel::planar(k) } else { Channel::spatial(k, 1) };
    if !exp.contains_key("channels") {
        let k = k_max as i32;
        return (-k..=k).map(make).filter(|ch| ch.validate(model).is_ok()).collect();
    }
    let ks = rd.ints(exp, "experiment", "channels", &[]);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for k in ks {
        if k.abs() > 64 {
            rd.fail(format!("experiment.channels: |k| must be at most 64, got {k}"));
            continue;
        }
        let ch = make(k as i32);
        match ch.validate(model) {
            Ok(()) if seen.insert(k) => out.push(ch),
            Ok(()) => rd.fail(format!("experiment.channels: k = {k} listed twice")),
            Err(e) => rd.fail(format!("experiment.channels: {e}")),
        }
    }
    out
}

fn finite_times(rd: &mut Reader, times: &[f64], path: &str) {
    rd.ensure(times.iter().all(|t| t.is_finite()), || format!("{path}: times must be finite"));
}

fn read_evolve(rd: &mut Reader, t: &Table, model: Option<&Model>, grids: &Grids) -> EvolveParams {
    rd.unknown_keys(t, "experiment", &["datum", "channels", "times", "band", "synthesis_tolerance"]);
    let times = rd.floats(t, "experiment", "times", &[0.0, 1.0, 2.0, 4.0]);
    finite_times(rd, &times, "experiment.times");
    let band = t.contains_key("band").then(|| rd.floats(t, "experiment", "band", &[])).and_then(|b| match b[..] {
        [lo, hi] if lo <= hi && hi >= model.map_or(0.0, |m| m.mass) => Some((lo, hi)),
        _ => {
            rd.fail("experiment.band: expected [lo, hi] with lo <= hi and hi at least the mass".into());
            None
        }
    });
    let synthesis_tolerance = rd.float_or(t, "experiment", "synthesis_tolerance", 1e-3);
    rd.ensure(synthesis_tolerance > 0.0, || "experiment.synthesis_tolerance: must be positive".into());
    EvolveParams {
        datum: read_datum(rd, t, model, grids.spec.r_max),
        channels: read_channels(rd, t, model, grids.k_max),
        times,
        band,
        synthesis_tolerance,
    }
}

fn read_transform(rd: &mut Reader, t: &Table, model: Option<&Model>, grids: &Grids) -> TransformParams {
    rd.unknown_keys(t, "experiment", &["datum", "channels", "tolerance"]);
    let tolerance = rd.float_or(t, "experiment", "tolerance", 1e-3);
    rd.ensure(tolerance > 0.0, || "experiment.tolerance: must be positive".into());
    TransformParams {
        datum: read_datum(rd, t, model, grids.spec.r_max),
        channels: read_channels(rd, t, model, grids.k_max),
        tolerance,
    }
}

fn read_verify(rd: &mut Reader, t: &Table, model: Option<&Model>, grids: &Grids) -> VerifyParams {
    rd.unknown_keys(t, "experiment", &["channels", "energies", "times", "residual_tolerance", "transform_tolerance"]);
    let coulomb = model.is_some_and(|m| m.is_coulomb());
    let default_energies: &[f64] = if coulomb { &[1.5, 2.0, 3.0] } else { &[2.0, -2.0, 3.5] };
    let energies = rd.floats(t, "experiment", "energies", default_energies);
    if let Some(m) = model {
        for &e in &energies {
            rd.ensure(e.abs() > m.mass && e.is_finite(), || format!("experiment.energies: |E| must exceed the mass, got {e}"));
            rd.ensure(!(coulomb && e < 0.0), || format!("experiment.energies: Coulomb energies must be positive, got {e}"));
        }
    }
    let times = rd.floats(t, "experiment", "times", &[0.5, 2.0, -3.0]);
    finite_times(rd, &times, "experiment.times");
    let residual_tolerance = rd.float_or(t, "experiment", "residual_tolerance", 1e-4);
    let transform_tolerance = rd.float_or(t, "experiment", "transform_tolerance", 1e-3);
    rd.ensure(residual_tolerance > 0.0 && transform_tolerance > 0.0, || "experiment: tolerances must be positive".into());
    VerifyParams {
        channels: read_channels(rd, t, model, grids.k_max),
        energies,
        times,
        residual_tolerance,
        transform_tolerance,
    }
}

fn read_bessel(rd: &mut Reader, t: &Table) -> BesselParams {
    let p = "experiment";
    rd.unknown_keys(t, p, &["orders", "q", "dimensions", "small_radii", "large_radii", "uniform", "derivative"]);
    let orders = rd.floats(t, p, "orders", &[0.5, 2.0, 5.0, 10.0]);
    rd.ensure(orders.iter().all(|&nu| nu > 0.0 && nu <= 200.0), || format!("{p}.orders: must lie in (0, 200]"));
    let q = rd.floats(t, p, "q", &[2.0, 4.0, 6.0]);
    rd.ensure(q.iter().all(|&q| q >= 1.0 && q.is_finite()), || format!("{p}.q: must be finite and at least 1"));
    let dimensions: Vec<usize> = rd.ints(t, p, "dimensions", &[2, 3]).into_iter().map(|n| n as usize).collect();
    rd.ensure(dimensions.iter().all(|n| (2..=3).contains(n)), || format!("{p}.dimensions: must be 2 or 3"));
    let small_radii = rd.exponents(t, p, "small_radii", (-8, -4));
    let large_radii = rd.exponents(t, p, "large_radii", (8, 12));
    rd.ensure(small_radii.1 < 0 && large_radii.0 > 0, || format!("{p}: small radii must lie below 1 and large radii above"));
    BesselParams {
        orders,
        q,
        dimensions,
        small_radii,
        large_radii,
        uniform: rd.boolean(t, p, "uniform", false),
        derivative: rd.boolean(t, p, "derivative", false),
    }
}

fn read_dc(rd: &mut Reader, t: &Table) -> DcBoundParams {
    let p = "experiment";
    rd.unknown_keys(t, p, &["nu", "ks", "mass", "q", "frequencies", "small_radii", "large_radii"]);
    let nu = rd.float_or(t, p, "nu", -0.5);
    rd.ensure(nu < 0.0 && nu > -diracspec_core::channels::NU_CRITICAL, || format!("{p}.nu: must lie in (-sqrt(15)/4, 0), got {nu}"));
    let ks: Vec<i32> = rd.ints(t, p, "ks", &[-1, 1, 2, 3, 4, 5, 6]).into_iter().map(|k| k as i32).collect();
    rd.ensure(ks.iter().all(|&k| k != 0 && k.abs() <= 40), || format!("{p}.ks: must be non-zero with |k| <= 40"));
    let mass = rd.float_or(t, p, "mass", 1.0);
    rd.ensure(mass > 0.0 && mass.is_finite(), || format!("{p}.mass: must be positive"));
    let q = rd.float_or(t, p, "q", 4.0);
    rd.ensure(q >= 1.0 && q.is_finite(), || format!("{p}.q: must be finite and at least 1"));
    let frequencies = rd.floats(t, p, "frequencies", &[1.0]);
    rd.ensure(frequencies.iter().all(|&n| n > 0.0 && n.is_finite()), || format!("{p}.frequencies: must be positive"));
    let small_radii = rd.exponents(t, p, "small_radii", (-10, -5));
    let large_radii = rd.exponents(t, p, "large_radii", (6, 10));
    rd.ensure(small_radii.1 < large_radii.0, || format!("{p}: small radii must lie below the large radii"));
    DcBoundParams {
        nu,
        ks,
        mass,
        q,
        frequencies,
        small_radii,
        large_radii,
    }
}

fn read_family(rd: &mut Reader, t: &Table, path: &str) -> Option<FamilyConfig> {
    let kind = rd.string(t, path, "kind");
    let fam = match kind {
        Some("free") => {
            rd.unknown_keys(t, path, &["kind", "n", "order"]);
            let n = rd.int(t, path, "n").unwrap_or(3);
            rd.ensure((2..=3).contains(&n), || format!("{path}.n: must be 2 or 3"));
            let order = rd.float(t, path, "order");
            rd.ensure(order.is_none_or(|o| o >= 0.0), || format!("{path}.order: must be non-negative"));
            FamilyConfig::Free { n: n as usize, order }
        }
        Some("aharonov-bohm") => {
            rd.unknown_keys(t, path, &["kind", "alpha"]);
            let alpha = rd.required_float(t, path, "alpha");
            rd.ensure(alpha > 0.0 && alpha < 1.0, || format!("{path}.alpha: must lie in (0, 1)"));
            FamilyConfig::AharonovBohm { alpha }
        }
        Some("coulomb") => {
            rd.unknown_keys(t, path, &["kind", "k", "nu", "component"]);
            let k = rd.int(t, path, "k").unwrap_or(-1);
            rd.ensure(k == 1 || k == -1, || format!("{path}.k: the localized kernels are for k = +-1, got {k}"));
            let nu = rd.required_float(t, path, "nu");
            rd.ensure(nu < 0.0 && nu > -diracspec_core::channels::NU_CRITICAL, || format!("{path}.nu: must lie in (-sqrt(15)/4, 0)"));
            let component = match rd.string(t, path, "component").unwrap_or("G") {
                "F" => DcComponent::F,
                "G" => DcComponent::G,
                other => {
                    rd.fail(format!("{path}.component: expected F or G, got {other:?}"));
                    DcComponent::G
                }
            };
            FamilyConfig::Coulomb { k: k as i32, nu, component }
        }
        Some(other) => {
            rd.fail(format!("{path}.kind: expected free, aharonov-bohm or coulomb, got {other:?}"));
            return None;
        }
        None => {
            rd.ensure(t.contains_key("kind"), || format!("{path}.kind: missing"));
            return None;
        }
    };
    Some(fam)
}

fn read_localized(rd: &mut Reader, t: &Table) -> LocalizedParams {
    let p = "experiment";
    rd.unknown_keys(t, p, &["family", "mass", "n_freq", "radii", "p", "q", "modulations", "cn_high", "cn_low"]);
    let families = match t.get("family") {
        None => vec![
            FamilyConfig::Free { n: 2, order: None },
            FamilyConfig::Free { n: 3, order: None },
            FamilyConfig::AharonovBohm { alpha: 0.25 },
            FamilyConfig::Coulomb {
                k: -1,
                nu: -0.5,
                component: DcComponent::G,
            },
        ],
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .filter_map(|(i, item)| {
                let path = format!("{p}.family[{i}]");
                match item {
                    Value::Table(ft) => read_family(rd, ft, &path),
                    _ => {
                        rd.fail(format!("{path}: expected a table"));
                        None
                    }
                }
            })
            .collect(),
        Some(_) => {
            rd.fail(format!("{p}.family: expected an array of tables ([[experiment.family]])"));
            Vec::new()
        }
    };
    let mass = rd.float_or(t, p, "mass", 1.0);
    let n_freq = rd.float_or(t, p, "n_freq", 1.0);
    rd.ensure(mass > 0.0 && n_freq > 0.0 && mass.is_finite() && n_freq.is_finite(), || format!("{p}: mass and n_freq must be positive"));
    let lp = rd.float_or(t, p, "p", 4.0);
    let lq = rd.float_or(t, p, "q", 4.0);
    rd.ensure(lp >= 2.0 && lq >= 2.0 && lq.is_finite(), || format!("{p}: need p in [2, inf] and q in [2, inf)"));
    LocalizedParams {
        families,
        mass,
        n_freq,
        radii: rd.exponents(t, p, "radii", (-10, -5)),
        p: lp,
        q: lq,
        modulations: rd.count(t, p, "modulations", 0, 0).min(8),
        cn_high: rd.exponents(t, p, "cn_high", (3, 8)),
        cn_low: rd.exponents(t, p, "cn_low", (-8, -3)),
    }
}

fn read_scan(rd: &mut Reader, t: &Table) -> ScanParams {
    let p = "experiment";
    rd.unknown_keys(
        t,
        p,
        &["band", "members", "pairs", "window", "margin", "panels_per_wavelength", "nodes_per_panel", "random_modulations"],
    );
    let band = match rd.string(t, p, "band").unwrap_or("high") {
        "high" => Frequency::High,
        "low" => Frequency::Low,
        other => {
            rd.fail(format!("{p}.band: expected high or low, got {other:?}"));
            Frequency::High
        }
    };
    let pairs = match t.get("pairs") {
        None => vec![(f64::INFINITY, 2.0), (4.0, 4.0), (f64::INFINITY, 4.0)],
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .filter_map(|(i, item)| {
                let pair = item.as_array().and_then(|a| match a[..] {
                    [ref x, ref y] => Some((as_f64(x)?, as_f64(y)?)),
                    _ => None,
                });
                match pair {
                    Some((lp, lq)) if lp >= 2.0 && lq >= 2.0 && lq.is_finite() => Some((lp, lq)),
                    _ => {
                        rd.fail(format!("{p}.pairs[{i}]: expected [p, q] with p in [2, inf] and q in [2, inf)"));
                        None
                    }
                }
            })
            .collect(),
        Some(_) => {
            rd.fail(format!("{p}.pairs: expected an array of [p, q] pairs"));
            Vec::new()
        }
    };
    rd.ensure(!pairs.is_empty(), || format!("{p}.pairs: must not be empty"));
    let window = rd.float_or(t, p, "window", 64.0);
    let margin = rd.float_or(t, p, "margin", 24.0);
    let panels_per_wavelength = rd.float_or(t, p, "panels_per_wavelength", 4.0);
    rd.ensure(window > 0.0 && margin > 0.0 && panels_per_wavelength > 0.0, || {
        format!("{p}: window, margin and panels_per_wavelength must be positive")
    });
    ScanParams {
        band,
        members: rd.count(t, p, "members", 10, 1),
        pairs,
        window,
        margin,
        panels_per_wavelength,
        nodes_per_panel: rd.count(t, p, "nodes_per_panel", 6, 1),
        random_modulations: rd.boolean(t, p, "random_modulations", true),
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn read_region(rd: &mut Reader, t: &Table) -> RegionParams {
    let p = "experiment";
    rd.unknown_keys(t, p, &["alphas", "nus", "ps"]);
    let grid = |a: f64, b: f64, n: usize| -> Vec<f64> { (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect() };
    let alphas = rd.floats(t, p, "alphas", &grid(0.05, 0.95, 18));
    rd.ensure(alphas.iter().all(|&a| a > 0.0 && a < 1.0), || format!("{p}.alphas: must lie in (0, 1)"));
    let nus = rd.floats(t, p, "nus", &grid(-0.95, -0.05, 18));
    rd.ensure(nus.iter().all(|&nu| nu < 0.0 && nu > -diracspec_core::channels::NU_CRITICAL), || {
        format!("{p}.nus: must lie in (-sqrt(15)/4, 0)")
    });
    let ps = rd.floats(t, p, "ps", &[2.0, 3.0, 4.0, 6.0, 8.0, 12.0, f64::INFINITY]);
    rd.ensure(ps.iter().all(|&x| x >= 2.0), || format!("{p}.ps: must be at least 2"));
    RegionParams { alphas, nus, ps }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_an_empty_experiment() {
        let cfg = Config::parse("[model]\nn = 3\n", Command::Verify).unwrap();
        let Experiment::Verify(v) = &cfg.experiment else { panic!() };
        assert_eq!(v.channels, vec![Channel::spatial(-1, 1), Channel::spatial(1, 1)]);
        assert_eq!(cfg.grids.spec.r_max, 40.0);
        assert_eq!(cfg.grids.spec.p_max, 40.0);
        assert_eq!(cfg.seed, 0);
    }

    #[test]
    fn every_violation_is_listed() {
        let text = "seed = -1\nbogus = 2\n[model]\nn = 4\npotential = \"coulomb\"\n[grids]\nr_max = \"far\"\n[experiment]\ntimes = [1, \"x\"]\n";
        let errs = Config::parse(text, Command::Evolve).unwrap_err();
        for needle in ["seed", "bogus", "model.n", "model.coupling", "grids.r_max", "experiment.times[1]"] {
            assert!(errs.iter().any(|e| e.starts_with(needle)), "{needle} not in {errs:?}");
        }
    }

    #[test]
    fn model_block_is_optional_for_region() {
        assert!(Config::parse("", Command::Region).is_ok());
        assert!(Config::parse("", Command::Transform).is_err());
    }

    #[test]
    fn coulomb_spatial_datum_is_rejected() {
        let text = "[model]\nn = 3\npotential = \"coulomb\"\ncoupling = -0.5\n[experiment.datum]\nkind = \"spatial\"\n";
        let errs = Config::parse(text, Command::Transform).unwrap_err();
        assert_eq!(errs.len(), 1, "{errs:?}");
    }

    #[test]
    fn inf_pairs_parse() {
        let cfg = Config::parse("[model]\nn = 2\n[experiment]\npairs = [[inf, 2], [6, 6]]\n", Command::ScanStrichartz).unwrap();
        let Experiment::ScanStrichartz(s) = &cfg.experiment else { panic!() };
        assert_eq!(s.pairs, vec![(f64::INFINITY, 2.0), (6.0, 6.0)]);
    }
}
