use super::{Channel, Model, RadialSpinor};
use crate::error::{Error, Result};
use crate::C64;

// Fornberg's recursion for the first-derivative weights at x0 on `xs`.
fn fd_weights(x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// First derivative by five-point stencils: centred in the interior, one-sided
/// at the two ends. Fourth order on smooth data.
pub fn derivative(r: &[f64], f: &[C64]) -> Result<Vec<C64>> {
    let n = r.len();
    if n < 5 {
        return Err(Error::GridTooSmall(n));
    }
    Ok((0..n)
        .map(|i| {
            let lo = i.saturating_sub(2).min(n - 5);
            let w = fd_weights(r[i], &r[lo..lo + 5]);
            w.iter().zip(&f[lo..lo + 5]).map(|(w, v)| v * *w).sum()
        })
        .collect())
}

/// Applies the channel operator d_k of the model to ψ = (F, −iG).
///
/// Plane (free is α = 0): [[m, i(∂ + (k+1−α)/r)], [i(∂ + (α−k)/r), −m]].
/// Space (free is ν = 0): [[m − ν/r, i(−∂ + (k−1)/r)], [−i(∂ + (k+1)/r), −m − ν/r]].
pub fn radial_dirac_apply(model: &Model, channel: Channel, psi: &RadialSpinor) -> Result<RadialSpinor> {
    channel.validate(model)?;
    let du = derivative(&psi.r, &psi.upper)?;
    let dl = derivative(&psi.r, &psi.lower)?;
    let i = C64::new(0.0, 1.0);
    let m = model.mass;
    let k = channel.k as f64;
    let mut out = psi.clone();
    for j in 0..psi.len() {
        let r = psi.r[j];
        let (u, l) = (psi.upper[j], psi.lower[j]);
        if model.n == 2 {
            let a = model.alpha();
            out.upper[j] = u * m + i * (dl[j] + l * ((k + 1.0 - a) / r));
            out.lower[j] = i * (du[j] + u * ((a - k) / r)) - l * m;
        } else {
            let v = model.nu() / r;
            out.upper[j] = u * (m - v) + i * (-dl[j] + l * ((k - 1.0) / r));
            out.lower[j] = -i * (du[j] + u * ((k + 1.0) / r)) - l * (m + v);
        }
    }
    Ok(out)
}
