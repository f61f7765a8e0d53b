//! Bessel functions of the first kind for real order ν ≥ −1.
//!
//! Three evaluation routes:
//! - the ascending series, while its terms do not grow much (x ≤ 2 or x² ≤ 4(ν+1));
//! - the Hankel expansion in 1/x for x ≥ 25 and x ≥ ν²;
//! - Steed's continued-fraction method otherwise, which yields J_μ, Y_μ together
//!   so that negative orders follow from J_{−μ} = cos(μπ)J_μ − sin(μπ)Y_μ.

use std::f64::consts::{FRAC_2_PI, PI};

use super::gamma::ln_gamma;
use crate::error::{domain, Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 200_000;

fn check(order: f64, x: f64, op: &'static str) -> Result<()> {
    if !order.is_finite() || order < -1.0 {
        return Err(domain(op, format!("order {order} < -1")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(domain(op, format!("x = {x} must be finite and non-negative")));
    }
    Ok(())
}

/// J_ν(x) for ν ≥ −1 and x ≥ 0.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    check(order, x, "bessel_j")?;
    if order == -1.0 {
        return Ok(-bessel_j(1.0, x)?);
    }
    if x == 0.0 {
        return Ok(if order == 0.0 {
            1.0
        } else if order > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    if x <= 2.0 || x * x <= 4.0 * (order + 1.0) {
        return series(order, x);
    }
    if x >= 25.0 && x >= order * order {
        return Ok(hankel_asymptotic(order, x));
    }
    if order >= 0.0 {
        Ok(steed(order, x)?.j)
    } else {
        let mu = -order;
        let s = steed(mu, x)?;
        Ok((mu * PI).cos() * s.j - (mu * PI).sin() * s.y)
    }
}

/// Ascending power series Σ (−1)^k (x/2)^{2k+ν} / (k! Γ(k+ν+1)).
pub fn bessel_j_series(order: f64, x: f64) -> Result<f64> {
    check(order, x, "bessel_j_series")?;
    if order == -1.0 {
        return Ok(-bessel_j_series(1.0, x)?);
    }
    if x == 0.0 {
        return bessel_j(order, 0.0);
    }
    series(order, x)
}

fn series(order: f64, x: f64) -> Result<f64> {
    let half = 0.5 * x;
    let mut term = (order * half.ln() - ln_gamma(order + 1.0)?).exp();
    let q = -half * half;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + order));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > half {
            break;
        }
        if k > 5000.0 {
            return Err(Error::Convergence {
                op: "bessel_j_series",
                terms: k as usize,
                tail: term.abs(),
            });
        }
    }
    Ok(sum)
}

/// Hankel's large-argument expansion J_ν(x) = √(2/πx)(P cos χ − Q sin χ),
/// χ = x − (ν/2 + 1/4)π, summed until the terms stop decreasing.
pub fn bessel_j_asymptotic(order: f64, x: f64) -> Result<f64> {
    check(order, x, "bessel_j_asymptotic")?;
    if x < 1.0 {
        return Err(domain("bessel_j_asymptotic", "x must be at least 1"));
    }
    Ok(hankel_asymptotic(order, x))
}

fn hankel_asymptotic(order: f64, x: f64) -> f64 {
    let mu = 4.0 * order * order;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 * p.abs().max(q.abs()) {
            break;
        }
    }
    let phase = (0.5 * order + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (FRAC_2_PI / x).sqrt() * (p * cos_chi - q * sin_chi)
}

struct Steed {
    j: f64,
    y: f64,
    jp: f64,
}

/// Steed's method for x > 2: CF1 for J'/J, downward recurrence to |μ| ≤ ½,
/// CF2 for (J' + iY')/(J + iY) and the Wronskian to fix the scale.
fn steed(nu: f64, x: f64) -> Result<Steed> {
    debug_assert!(x > 2.0 && nu >= 0.0);
    let nl = ((nu - x + 1.5).floor().max(0.0)) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            op: "bessel_j (CF1)",
            terms: MAXIT,
            tail: f64::NAN,
        });
    }

    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let tmp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * tmp - rjl;
        rjl = tmp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut tmp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = tmp;
    let mut converged = false;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        tmp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = tmp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            op: "bessel_j (CF2)",
            terms: MAXIT,
            tail: f64::NAN,
        });
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    let mut rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let mut ry1 = xmu * xi * rymu - rymup;

    let scale = rjmu / rjl;
    for i in 1..=nl {
        let t = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = t;
    }
    Ok(Steed {
        j: rjl1 * scale,
        y: rymu,
        jp: rjp1 * scale,
    })
}

/// (J_μ(x), J_{μ+1}(x)); shares the continued fractions when Steed's method applies.
pub fn bessel_j_pair(mu: f64, x: f64) -> Result<(f64, f64)> {
    check(mu, x, "bessel_j_pair")?;
    let uses_steed = |nu: f64| {
        x > 2.0 && x * x > 4.0 * (nu + 1.0) && !(x >= 25.0 && x >= nu * nu)
    };
    if mu >= 0.0 && uses_steed(mu) && uses_steed(mu + 1.0) {
        let s = steed(mu, x)?;
        return Ok((s.j, mu / x * s.j - s.jp));
    }
    Ok((bessel_j(mu, x)?, bessel_j(mu + 1.0, x)?))
}

/// J′_ν(x) through the order recurrences.
pub fn bessel_j_deriv(order: f64, x: f64) -> Result<f64> {
    check(order, x, "bessel_j_deriv")?;
    if x == 0.0 {
        return if order < 1.0 {
            Err(domain("bessel_j_deriv", format!("derivative of J_{order} is singular at 0")))
        } else if order == 1.0 {
            Ok(0.5)
        } else {
            Ok(0.0)
        };
    }
    let j = bessel_j(order, x)?;
    if order >= 0.0 {
        Ok(bessel_j(order - 1.0, x)? - order / x * j)
    } else {
        Ok(-bessel_j(order + 1.0, x)? + order / x * j)
    }
}
