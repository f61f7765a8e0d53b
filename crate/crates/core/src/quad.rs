//! Gauss–Legendre rules and composite panel grids.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p0) / (z * z - 1.0))
}

/// A one-dimensional quadrature: sorted nodes with positive weights.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Composite Gauss–Legendre on [a, b] with panels no wider than `max_panel`.
    pub fn composite(a: f64, b: f64, max_panel: f64, per_panel: usize) -> Rule {
        assert!(b > a && max_panel > 0.0);
        let panels = ((b - a) / max_panel).ceil().max(1.0) as usize;
        Rule::composite_panels(a, b, panels, per_panel)
    }

    pub fn composite_panels(a: f64, b: f64, panels: usize, per_panel: usize) -> Rule {
        let (gx, gw) = gauss_legendre(per_panel);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for j in 0..panels {
            let lo = a + h * j as f64;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Rule { nodes, weights }
    }

    /// Gauss–Legendre panels whose breakpoints follow a geometric progression
    /// from `a` towards `b`; used where the integrand has a power-law endpoint.
    pub fn graded(a: f64, b: f64, ratio: f64, levels: usize, per_panel: usize) -> Rule {
        assert!(b > a && ratio > 0.0 && ratio < 1.0);
        let mut breaks = vec![b];
        let mut x = b;
        for _ in 0..levels {
            x = a + (x - a) * ratio;
            breaks.push(x);
        }
        breaks.push(a);
        breaks.reverse();
        let (gx, gw) = gauss_legendre(per_panel);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for win in breaks.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(lo + 0.5 * (hi - lo) * (x + 1.0));
                weights.push(0.5 * (hi - lo) * w);
            }
        }
        Rule { nodes, weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 8, 16, 33] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn composite_rule_on_oscillatory_integrand() {
        let rule = Rule::composite(0.0, 30.0, 0.5, 8);
        let got = rule.integrate(|x| (3.0 * x).cos());
        assert!((got - (90.0f64).sin() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn graded_rule_handles_sqrt_endpoint() {
        let rule = Rule::graded(0.0, 1.0, 0.25, 30, 12);
        let got = rule.integrate(|x| x.sqrt());
        assert!((got - 2.0 / 3.0).abs() < 1e-13);
    }
}
