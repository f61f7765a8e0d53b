//! Kummer's confluent hypergeometric function ₁F₁(a; b; z) on the imaginary axis.
//!
//! Two independent routes are provided. The power series is summed in double
//! precision first; when the largest term exceeds the sum by more than three
//! decades it is re-summed in complex fixed point with enough guard bits. The
//! integral route uses the Euler representation on (−1, 1), deformed into the
//! upper half plane so that the oscillatory factor turns into a decaying one.

use std::f64::consts::{FRAC_PI_2, LN_2};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::bigfix::{CFixed, Fixed};
use super::gamma::log_gamma_complex;
use crate::error::{domain, Error, Result};
use crate::quad::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodKind {
    SeriesSum,
    IntegralQuadrature,
}

/// Evaluation route for [`kummer_1f1`]. `terms` caps the series length, or sets
/// the initial node count per panel of the contour quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalMethod {
    pub kind: MethodKind,
    pub terms: usize,
    pub tolerance: f64,
}

impl EvalMethod {
    pub fn new(kind: MethodKind, terms: usize, tolerance: f64) -> Result<Self> {
        if terms < 8 {
            return Err(domain("EvalMethod", format!("terms/nodes must be at least 8, got {terms}")));
        }
        if !(tolerance > 0.0) {
            return Err(domain("EvalMethod", format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(EvalMethod {
            kind,
            terms,
            tolerance,
        })
    }

    pub fn series() -> Self {
        EvalMethod {
            kind: MethodKind::SeriesSum,
            terms: 10_000,
            tolerance: 1e-16,
        }
    }

    pub fn quadrature() -> Self {
        EvalMethod {
            kind: MethodKind::IntegralQuadrature,
            terms: 16,
            tolerance: 1e-13,
        }
    }
}

impl Default for EvalMethod {
    fn default() -> Self {
        EvalMethod::series()
    }
}

/// ₁F₁(a; b; z) for real b > 0 and purely imaginary z.
pub fn kummer_1f1(a: C64, b: f64, z: C64, method: EvalMethod) -> Result<C64> {
    EvalMethod::new(method.kind, method.terms, method.tolerance)?;
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain("kummer_1f1", format!("b must be positive, got {b}")));
    }
    if z.re != 0.0 || !z.im.is_finite() {
        return Err(domain("kummer_1f1", format!("z must be purely imaginary, got {z}")));
    }
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(domain("kummer_1f1", "a must be finite"));
    }
    let y = z.im;
    if y == 0.0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if y < 0.0 {
        // ₁F₁(a; b; −iy) = conj ₁F₁(ā; b; iy) for real b
        return Ok(kummer_1f1(a.conj(), b, C64::new(0.0, -y), method)?.conj());
    }
    match method.kind {
        MethodKind::SeriesSum => series(a, b, y, method.tolerance, method.terms),
        MethodKind::IntegralQuadrature => contour(a, b, y, method.tolerance, method.terms),
    }
}

struct F64Pass {
    sum: C64,
    max_term: f64,
}

fn series_f64(a: C64, b: f64, y: f64, tol: f64, cap: usize) -> Result<F64Pass> {
    let z = C64::new(0.0, y);
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut max_term = 1.0f64;
    let mut quiet = 0;
    for k in 0..cap {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        let t = term.norm();
        max_term = max_term.max(t);
        if kf + 1.0 > y && t <= tol * sum.norm() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(F64Pass { sum, max_term });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence {
        op: "kummer_1f1 series",
        terms: cap,
        tail: term.norm(),
    })
}

fn series(a: C64, b: f64, y: f64, tol: f64, cap: usize) -> Result<C64> {
    let tol = tol.max(1e-17);
    let pass = series_f64(a, b, y, tol, cap)?;
    if pass.max_term < 1e3 * pass.sum.norm() {
        return Ok(pass.sum);
    }
    let mut prec = pass.max_term.log2().max(0.0).ceil() as u32 + 128;
    loop {
        let (sum, terms) = series_fixed(a, b, y, tol, cap, prec)?;
        let s = sum.to_c64(prec);
        let k = terms as f64 + 1.0;
        let budget = k * k * pass.max_term * 2f64.powi(-(prec as i32));
        if budget <= 1e-2 * tol * s.norm() {
            return Ok(s);
        }
        let deficit = (budget / (1e-2 * tol * s.norm().max(1e-300))).log2().ceil();
        prec += deficit.clamp(32.0, 4096.0) as u32;
    }
}

fn series_fixed(a: C64, b: f64, y: f64, tol: f64, cap: usize, prec: u32) -> Result<(CFixed, usize)> {
    let a_fx = CFixed::from_parts(a.re, a.im, prec);
    let b_fx = Fixed::from_f64(b, prec);
    let y_fx = Fixed::from_f64(y, prec);
    let mut term = CFixed::from_parts(1.0, 0.0, prec);
    let mut sum = term.clone();
    let mut quiet = 0;
    for k in 0..cap {
        let kfx = Fixed::from_int(k as i64, prec);
        let ak = CFixed {
            re: a_fx.re.add(&kfx),
            im: a_fx.im.clone(),
        };
        let den = b_fx.add(&kfx).mul(&Fixed::from_int(k as i64 + 1, prec), prec);
        term = term.mul(&ak, prec).mul_imag(&y_fx, prec).div_real(&den, prec);
        sum = sum.add(&term);
        if (k as f64) + 1.0 > y {
            let t = term.to_c64(prec).norm();
            if t <= tol * sum.to_c64(prec).norm() {
                quiet += 1;
                if quiet >= 3 {
                    return Ok((sum, k + 1));
                }
            } else {
                quiet = 0;
            }
        }
    }
    Err(Error::Convergence {
        op: "kummer_1f1 fixed-point series",
        terms: cap,
        tail: term.to_c64(prec).norm(),
    })
}

/// Euler integral on (−1, 1) with the endpoint powers (1+s)^{a−1}(1−s)^{b−a−1}
/// and oscillatory factor e^{iys/2}, integrated around the rectangle
/// −1 → −1+iσH → 1+iσH → 1.
///
/// The half plane σ is the one in which the endpoint powers decay, which is
/// the upper one when Im a ≥ 0. In the upper half plane e^{iys/2} also decays,
/// so for large y the sides become rays and the top is dropped. In the lower
/// half plane the depth is kept at H ≤ 2/y so that e^{iys/2} stays O(1).
fn contour(a: C64, b: f64, y: f64, tol: f64, nodes: usize) -> Result<C64> {
    let bma = C64::new(b, 0.0) - a;
    if !(a.re > 0.0) || !(bma.re > 0.0) {
        return Err(domain(
            "kummer_1f1 quadrature",
            format!("needs Re a > 0 and Re(b − a) > 0, got a = {a}, b = {b}"),
        ));
    }
    let rho = 0.5 * y;
    let c1 = a - 1.0;
    let c2 = bma - 1.0;
    let log_pref = log_gamma_complex(C64::new(b, 0.0))? - log_gamma_complex(a)? - log_gamma_complex(bma)?
        + (1.0 - b) * LN_2
        + C64::new(0.0, rho);
    let i = C64::new(0.0, 1.0);

    let upper = a.im >= 0.0;
    let sigma = if upper { 1.0 } else { -1.0 };
    let (h, with_top) = if upper {
        // height beyond which e^{−ρτ} has killed the integrand
        let grow = (c1.re + c2.re + 2.0).max(1.0);
        let tau_kill = (45.0 + grow * (2.0 + grow / rho).ln().max(0.0)) / rho;
        if tau_kill <= 4.0 || rho >= 4.0 {
            (tau_kill.max(1.0), false)
        } else {
            (1.0, true)
        }
    } else {
        ((1.0f64).min(1.0 / rho), true)
    };

    // Left side s = −1 + iστ, where ln(1+s) = ln τ + iσπ/2.
    let left = |v: f64| {
        let s = C64::new(-1.0, sigma * v.exp());
        let ln = log_pref + i * rho * s + c1 * C64::new(v, sigma * FRAC_PI_2) + c2 * (1.0 - s).ln() + v;
        i * sigma * ln.exp()
    };
    // Right side s = 1 + iστ, where ln(1−s) = ln τ − iσπ/2.
    let right = |v: f64| {
        let s = C64::new(1.0, sigma * v.exp());
        let ln = log_pref + i * rho * s + c1 * (1.0 + s).ln() + c2 * C64::new(v, -sigma * FRAC_PI_2) + v;
        i * sigma * ln.exp()
    };
    let top = |x: f64| {
        let s = C64::new(x, sigma * h);
        (log_pref + i * rho * s + c1 * (1.0 + s).ln() + c2 * (1.0 - s).ln()).exp()
    };

    let v_hi = h.ln();
    let lo1 = v_hi.min(0.0) - 42.0 / (c1.re + 1.0);
    let lo2 = v_hi.min(0.0) - 42.0 / (c2.re + 1.0);
    let side_w = (0.5f64).min(2.0 / (1.0 + a.im.abs()));
    let top_w = (0.5f64).min(h).min(3.0 / (1.0 + rho + a.im.abs()));

    let mut n = nodes;
    let mut prev: Option<C64> = None;
    for _ in 0..7 {
        let (l, l1) = panels(&left, lo1, v_hi, side_w, n);
        let (r, r1) = panels(&right, lo2, v_hi, side_w, n);
        let (t, t1) = if with_top {
            panels(&top, -1.0, 1.0, top_w, n)
        } else {
            (C64::new(0.0, 0.0), 0.0)
        };
        let total = l - r + t;
        // rounding floor of the summation relative to the integrand's L¹ mass
        let floor = 64.0 * f64::EPSILON * (l1 + r1 + t1);
        if let Some(p) = prev {
            if (total - p).norm() <= (tol * total.norm()).max(floor) {
                return Ok(total);
            }
        }
        prev = Some(total);
        n *= 2;
    }
    let last = prev.unwrap_or_default();
    Err(Error::Convergence {
        op: "kummer_1f1 quadrature",
        terms: n,
        tail: last.norm(),
    })
}

fn panels(f: &impl Fn(f64) -> C64, lo: f64, hi: f64, width: f64, n: usize) -> (C64, f64) {
    let (gx, gw) = gauss_legendre(n);
    let count = ((hi - lo) / width).ceil().max(1.0) as usize;
    let h = (hi - lo) / count as f64;
    let mut acc = C64::new(0.0, 0.0);
    let mut mass = 0.0;
    for j in 0..count {
        let a = lo + h * j as f64;
        for (x, w) in gx.iter().zip(&gw) {
            let t = f(a + 0.5 * h * (x + 1.0)) * (0.5 * h * w);
            acc += t;
            mass += t.norm();
        }
    }
    (acc, mass)
}

/// ₁F₁(a; b; iy) at every y of a sorted, non-negative list, by Taylor
/// continuation of Kummer's equation z M″ + (b − z) M′ − a M = 0 along the
/// imaginary axis. Values for y ≤ 1 come straight from the series.
pub fn kummer_imag_sweep(a: C64, b: f64, ys: &[f64]) -> Result<Vec<C64>> {
    if !(b > 0.0) {
        return Err(domain("kummer_imag_sweep", format!("b must be positive, got {b}")));
    }
    if ys.iter().any(|y| !(y.is_finite() && *y >= 0.0)) || ys.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("kummer_imag_sweep", "ordinates must be finite, non-negative and sorted"));
    }
    let mut out = Vec::with_capacity(ys.len());
    let mut idx = 0;
    while idx < ys.len() && ys[idx] <= 1.0 {
        out.push(series_small(a, b, ys[idx])?);
        idx += 1;
    }
    if idx == ys.len() {
        return Ok(out);
    }
    let mut y0 = 1.0;
    let mut m = series_small(a, b, 1.0)?;
    let mut dm = a / b * series_small(a + 1.0, b + 1.0, 1.0)?;
    let mut coef: Vec<C64> = Vec::with_capacity(96);
    while idx < ys.len() {
        let target = ys[idx];
        let step = (target - y0).min(2.0f64.min(0.5 * y0));
        let hit = step == target - y0;
        if step > 0.0 {
            let (mn, dmn) = taylor_step(a, b, y0, m, dm, step, &mut coef);
            m = mn;
            dm = dmn;
            y0 = if hit { target } else { y0 + step };
        }
        if hit || step == 0.0 {
            out.push(m);
            idx += 1;
        }
    }
    Ok(out)
}

fn series_small(a: C64, b: f64, y: f64) -> Result<C64> {
    Ok(series_f64(a, b, y, 1e-17, 400)?.sum)
}

fn taylor_step(a: C64, b: f64, y0: f64, m: C64, dm: C64, dy: f64, coef: &mut Vec<C64>) -> (C64, C64) {
    let z0 = C64::new(0.0, y0);
    let w = C64::new(0.0, dy);
    coef.clear();
    coef.push(m);
    coef.push(dm);
    let mut val = m + dm * w;
    let mut der = dm;
    let mut wn = w; // w^{n+1} for the coefficient index n+1
    let scale = m.norm() + dm.norm() * dy;
    let mut n = 0usize;
    let mut quiet = 0;
    while n < 400 {
        let nf = n as f64;
        let c = (-(nf + 1.0) * (nf + b - z0) * coef[n + 1] + (nf + a) * coef[n]) / (z0 * ((nf + 2.0) * (nf + 1.0)));
        coef.push(c);
        der += c * (nf + 2.0) * wn;
        wn *= w;
        let t = c * wn;
        val += t;
        n += 1;
        if t.norm() < 1e-18 * scale {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (val, der)
}
