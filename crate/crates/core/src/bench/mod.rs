//! Numerical experiments behind the pointwise, dyadic and Strichartz bounds.
//!
//! Every experiment returns a [`BoundReport`]: the measured quantity and the
//! printed bound (with constant 1) per sample, and log₂–log₂ slope fits that
//! compare the measured exponents with the printed ones.

mod bessel;
mod dc;
mod localized;
mod scan;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use bessel::bessel_dyadic_norms;
pub use dc::{dc_sector_bounds, fit_sector_rate, DcSectorOptions};
pub use localized::{hausdorff_young_check, localized_strichartz_check, DcComponent, KernelFamily, LocalizedSpec};
pub use scan::{strichartz_scan, DataFamily, FamilyMember, ScanSettings};

/// Parameters attached to a sample; unused ones stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub k: Option<i32>,
    /// ν for Coulomb, α for Aharonov–Bohm, the Bessel order otherwise.
    pub coupling: Option<f64>,
    pub n_freq: Option<f64>,
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSample {
    pub regime: String,
    pub params: BoundParams,
    pub measured: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// How a fitted slope is compared with the printed exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// |slope − expected| ≤ tolerance.
    Equal,
    /// The bound is an upper bound that decays at least as fast towards the
    /// regime's end: slope ≥ expected − tolerance.
    AtLeast,
    /// slope ≤ expected + tolerance.
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub regime: String,
    pub slope: f64,
    pub intercept: f64,
    /// RMS deviation from the fitted line, in log₂ units.
    pub residual: f64,
    pub points: usize,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: Relation,
    /// Set when the residual is ≥ 0.05 or fewer than 4 points were fitted.
    pub flagged: bool,
}

impl SlopeFit {
    pub fn passes(&self) -> bool {
        let ok = match self.relation {
            Relation::Equal => (self.slope - self.expected).abs() <= self.tolerance,
            Relation::AtLeast => self.slope >= self.expected - self.tolerance,
            Relation::AtMost => self.slope <= self.expected + self.tolerance,
        };
        ok && self.slope.is_finite()
    }
}

/// Per-(p, q) summary of a Strichartz scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpread {
    pub p: f64,
    pub q: f64,
    pub in_region: bool,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    /// Exploratory pairs: whether the ratio grows along the family order.
    pub monotone_growth: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub experiment: String,
    pub samples: Vec<BoundSample>,
    pub fits: Vec<SlopeFit>,
    pub sup_ratio: f64,
    /// Named scalars measured by the experiment (fitted constants, continuity ratios).
    pub constants: Vec<(String, f64)>,
    pub spreads: Vec<ScanSpread>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(experiment: impl Into<String>) -> BoundReport {
        BoundReport {
            experiment: experiment.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, regime: &str, params: BoundParams, measured: f64, bound: f64) {
        let ratio = measured / bound;
        self.sup_ratio = self.sup_ratio.max(ratio);
        self.samples.push(BoundSample {
            regime: regime.to_string(),
            params,
            measured,
            bound,
            ratio,
        });
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.iter().find(|(n, _)| n == name).map(|c| c.1)
    }

    pub fn fit(&self, regime: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.regime == regime)
    }

    pub fn ratios_finite(&self) -> bool {
        self.samples.iter().all(|s| s.ratio.is_finite())
    }

    /// Fits log₂ measured against log₂ of `x` over the samples of one regime.
    pub(crate) fn fit_regime(&mut self, regime: &str, x: impl Fn(&BoundParams) -> Option<f64>, expected: f64, tolerance: f64, relation: Relation) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .samples
            .iter()
            .filter(|s| s.regime == regime)
            .filter_map(|s| x(&s.params).map(|x| (x, s.measured)))
            .unzip();
        if let Some(fit) = slope_fit(regime, &xs, &ys, expected, tolerance, relation) {
            self.fits.push(fit);
        }
    }
}

/// Least-squares line through (log₂ x, log₂ y): (slope, intercept, RMS residual).
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(domain("fit_loglog", format!("need two or more points, got {}", xs.len())));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(domain("fit_loglog", "values must be positive and finite"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.log2()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log2()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(domain("fit_loglog", "abscissae coincide"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok((slope, intercept, (rss / n).sqrt()))
}

pub fn slope_fit(regime: &str, xs: &[f64], ys: &[f64], expected: f64, tolerance: f64, relation: Relation) -> Option<SlopeFit> {
    let (slope, intercept, residual) = fit_loglog(xs, ys).ok()?;
    Some(SlopeFit {
        regime: regime.to_string(),
        slope,
        intercept,
        residual,
        points: xs.len(),
        expected,
        tolerance,
        relation,
        flagged: residual >= 0.05 || xs.len() < 4,
    })
}

/// Dyadic frequency and radius ranges 2^a..=2^b with a bump profile on [½, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicSpec {
    pub n_exponents: (i32, i32),
    pub r_exponents: (i32, i32),
    pub profile: BumpProfile,
}

impl DyadicSpec {
    pub fn new(n_exponents: (i32, i32), r_exponents: (i32, i32), profile: BumpProfile) -> Result<DyadicSpec> {
        if n_exponents.0 > n_exponents.1 || r_exponents.0 > r_exponents.1 {
            return Err(domain("DyadicSpec", "empty exponent range"));
        }
        Ok(DyadicSpec {
            n_exponents,
            r_exponents,
            profile,
        })
    }

    pub fn frequencies(&self) -> Vec<f64> {
        dyadic(self.n_exponents)
    }

    pub fn radii(&self) -> Vec<f64> {
        dyadic(self.r_exponents)
    }
}

pub fn dyadic((a, b): (i32, i32)) -> Vec<f64> {
    (a..=b).map(|j| 2f64.powi(j)).collect()
}

/// One cosine modulation a·cos(2πf y + φ) of the base bump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulation {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

/// h(y) = 64·((y − ½)(1 − y))³·(1 + Σ a cos(2πf y + φ)) on [½, 1], zero outside;
/// the factor 64 makes the peak of the base bump 1/64.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    pub modulations: Vec<Modulation>,
}

impl BumpProfile {
    pub fn smooth() -> BumpProfile {
        BumpProfile::default()
    }

    pub fn modulated(modulations: Vec<Modulation>) -> Result<BumpProfile> {
        if modulations.iter().map(|m| m.amplitude.abs()).sum::<f64>() >= 1.0 {
            return Err(domain("BumpProfile", "modulation amplitudes must sum to less than 1"));
        }
        if modulations.iter().any(|m| !(m.frequency >= 0.0) || !m.frequency.is_finite()) {
            return Err(domain("BumpProfile", "frequencies must be finite and non-negative"));
        }
        Ok(BumpProfile { modulations })
    }

    pub fn eval(&self, y: f64) -> f64 {
        if !(y > 0.5 && y < 1.0) {
            return 0.0;
        }
        let base = 64.0 * ((y - 0.5) * (1.0 - y)).powi(3);
        let m: f64 = self
            .modulations
            .iter()
            .map(|m| m.amplitude * (std::f64::consts::TAU * m.frequency * y + m.phase).cos())
            .sum();
        base * (1.0 + m)
    }

    /// Highest modulation frequency, for quadrature sizing.
    pub fn max_frequency(&self) -> f64 {
        self.modulations.iter().map(|m| m.frequency).fold(0.0, f64::max)
    }

    /// Gauss–Legendre rule on the support fine enough for the modulations and a
    /// phase that turns by at most `phase_span` radians across [½, 1].
    pub fn rule(&self, phase_span: f64) -> crate::quad::Rule {
        let turns = phase_span + std::f64::consts::PI * self.max_frequency();
        let panels = ((turns / std::f64::consts::FRAC_PI_2).ceil() as usize).max(4);
        crate::quad::Rule::composite_panels(0.5, 1.0, panels, 8)
    }

    /// ‖h‖_{L^r[½,1]}, r ∈ [1, ∞].
    pub fn lp_norm(&self, r: f64) -> f64 {
        let rule = self.rule(0.0);
        if r.is_infinite() {
            return rule.nodes.iter().map(|&y| self.eval(y).abs()).fold(0.0, f64::max);
        }
        rule.integrate(|y| self.eval(y).abs().powf(r)).powf(1.0 / r)
    }
}

/// C_N = N^{−1/2} for N ≥ 1 and N^{−1} for N < 1, with constant 1.
pub fn c_n(n: f64) -> f64 {
    if n >= 1.0 {
        n.powf(-0.5)
    } else {
        1.0 / n
    }
}

/// Q_n(x) = x^{n/q} for x < 1 and x^{1/q + (1−2/q)β(p)} otherwise, evaluated at
/// x = N·R (the dyadic radius of the frequency-N piece in rescaled units).
pub fn q_n(n: usize, p: f64, q: f64, nr: f64) -> Result<f64> {
    if !(nr > 0.0) || !(q >= 2.0) {
        return Err(domain("q_n", format!("need NR > 0 and q >= 2, got {nr}, {q}")));
    }
    let beta = crate::norms::beta_exponent(p, n)?;
    Ok(if nr < 1.0 {
        nr.powf(n as f64 / q)
    } else {
        nr.powf(1.0 / q + (1.0 - 2.0 / q) * beta)
    })
}

#[cfg(test)]
mod tests;
