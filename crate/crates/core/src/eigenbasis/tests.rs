use proptest::prelude::*;

use super::*;
use crate::specfun::bessel_j;

fn uniform(a: f64, b: f64, n: usize) -> Rule {
    let h = (b - a) / (n - 1) as f64;
    Rule {
        nodes: (0..n).map(|j| a + h * j as f64).collect(),
        weights: vec![h; n],
    }
}

fn residual(model: &Model, ch: Channel, e: f64, n: usize, opts: &EigenOptions) -> f64 {
    let en = EnergyPoint::new(e, model.mass).unwrap();
    eigen_residual(model, ch, &en, &uniform(0.5, 8.0, n), opts).unwrap()
}

#[test]
fn energy_point_weights() {
    let at_mass = EnergyPoint::new(1.0, 1.0).unwrap();
    assert_eq!(at_mass.n_minus, 0.0);
    assert_eq!(at_mass.p, 0.0);
    let big = EnergyPoint::new(1e12, 1.0).unwrap();
    assert!((big.n_plus - 0.5f64.sqrt()).abs() < 1e-12 && (big.n_minus - 0.5f64.sqrt()).abs() < 1e-12);
    assert!(EnergyPoint::new(0.5, 1.0).is_err());
    let neg = EnergyPoint::new(-3.0, 1.0).unwrap();
    assert_eq!(neg.weights(), (neg.n_minus, neg.n_plus));
}

#[test]
fn free_lower_component_vanishes_at_threshold() {
    let model = Model::free(3, 1.0).unwrap();
    let e = EnergyPoint::new(1.0, 1.0).unwrap();
    let v = free_eigenfunction(&model, Channel::spatial(1, 1), &e, 2.0, Normalization::default()).unwrap();
    assert_eq!(v[1].norm(), 0.0);
}

#[test]
fn free_eigenfunctions_solve_the_channel_equation() {
    let opts = EigenOptions::default();
    for n in [2usize, 3] {
        let model = Model::free(n, 1.0).unwrap();
        for ch in model.channels(3) {
            for e in [2.0, -2.0, 1.3] {
                let r = residual(&model, ch, e, 600, &opts);
                assert!(r < 1e-6, "n={n} {ch:?} E={e}: {r}");
            }
        }
    }
}

#[test]
fn free_3d_residual_is_fourth_order() {
    let model = Model::free(3, 1.0).unwrap();
    let opts = EigenOptions::default();
    let ch = Channel::spatial(1, 1);
    let ratio = residual(&model, ch, 2.0, 150, &opts) / residual(&model, ch, 2.0, 299, &opts);
    assert!((8.0..32.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn ab_eigenfunctions_solve_the_channel_equation() {
    let opts = EigenOptions::default();
    let model = Model::aharonov_bohm(0.25, 1.0).unwrap();
    for k in -3..=3 {
        for e in [2.0, -2.0] {
            let r = residual(&model, Channel::planar(k), e, 600, &opts);
            assert!(r < 1e-6, "k={k} E={e}: {r}");
        }
    }
}

#[test]
fn ab_radial_channel_is_singular_at_origin() {
    let e = EnergyPoint::new(2.0, 1.0).unwrap();
    let alpha = 0.25;
    let small = 1e-6;
    let v = ab_eigenfunction(alpha, 0, &e, small, Normalization::default()).unwrap();
    let want = e.n_plus * bessel_j(-alpha, e.p * small).unwrap();
    assert!((v[0].re - want).abs() < 1e-12 * want.abs());
    let v2 = ab_eigenfunction(alpha, 0, &e, small / 16.0, Normalization::default()).unwrap();
    // r^{−α}: shrinking r by 16 multiplies by 16^α = 2
    assert!((v2[0].re / v[0].re - 2.0).abs() < 1e-4);
}

#[test]
fn ab_tends_to_free_as_flux_vanishes() {
    let free = Model::free(2, 1.0).unwrap();
    let e = EnergyPoint::new(2.0, 1.0).unwrap();
    for k in 1..=3 {
        for r in [0.3, 1.7, 5.0] {
            let a = ab_eigenfunction(1e-6, k, &e, r, Normalization::default()).unwrap();
            let f = free_eigenfunction(&free, Channel::planar(k), &e, r, Normalization::default()).unwrap();
            assert!((a[0] - f[0]).norm() < 1e-5 && (a[1] - f[1]).norm() < 1e-5);
        }
    }
}

#[test]
fn as_printed_normalizations() {
    let e = EnergyPoint::new(2.5, 1.0).unwrap();
    let a = ab_eigenfunction(0.4, 2, &e, 1.1, Normalization::AsPrinted).unwrap();
    let b = ab_eigenfunction(0.4, 2, &e, 1.1, Normalization::FreeConsistent).unwrap();
    assert!((a[0] * (5.0f64).sqrt() - b[0]).norm() < 1e-15);
    let m3 = Model::free(3, 1.0).unwrap();
    let c = free_eigenfunction(&m3, Channel::spatial(2, 1), &e, 1.1, Normalization::AsPrinted).unwrap();
    let d = free_eigenfunction(&m3, Channel::spatial(2, 1), &e, 1.1, Normalization::FreeConsistent).unwrap();
    assert!((c[0] - d[0] * std::f64::consts::FRAC_PI_2.sqrt()).norm() < 1e-15);
}

#[test]
fn coulomb_conjugate_branch_solves_the_equation() {
    let model = Model::coulomb(-0.3, 1.0).unwrap();
    let conj = EigenOptions::default();
    let printed = EigenOptions {
        branch: DcBranch::AsPrinted,
        ..EigenOptions::default()
    };
    let ch = Channel::spatial(-1, 1);
    let good = residual(&model, ch, 2.0, 600, &conj);
    let bad = residual(&model, ch, 2.0, 600, &printed);
    assert!(good < 1e-6, "conjugate branch residual {good}");
    assert!(bad > 1e-2, "printed branch residual {bad}");
    let ratio = residual(&model, ch, 2.0, 150, &conj) / residual(&model, ch, 2.0, 299, &conj);
    assert!((8.0..32.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn coulomb_residuals_over_channels() {
    let model = Model::coulomb(-0.5, 1.0).unwrap();
    let opts = EigenOptions::default();
    for k in [-3, -2, -1, 1, 2, 3] {
        for e in [1.2, 2.0, 4.0] {
            let r = residual(&model, Channel::spatial(k, 1), e, 800, &opts);
            assert!(r < 1e-5, "k={k} E={e}: {r}");
        }
    }
}

#[test]
fn coulomb_dual_method_agreement() {
    let (k, nu, m) = (2, -0.5, 1.0);
    let e = EnergyPoint::new(1.5, m).unwrap();
    let r = 3.0 / e.p;
    let norm = Normalization::default();
    let a = dc_eigenfunction(k, nu, m, &e, r, EvalMethod::series(), norm, DcBranch::default()).unwrap();
    let b = dc_eigenfunction(k, nu, m, &e, r, EvalMethod::quadrature(), norm, DcBranch::default()).unwrap();
    let scale = a[0].norm().max(a[1].norm());
    assert!((a[0] - b[0]).norm() < 1e-8 * scale && (a[1] - b[1]).norm() < 1e-8 * scale);
}

#[test]
fn coulomb_profile_matches_pointwise() {
    let (k, nu, m) = (-2, -0.7, 1.0);
    let e = EnergyPoint::new(3.0, m).unwrap();
    let rs: Vec<f64> = (1..200).map(|j| 0.05 * j as f64).collect();
    let prof = dc_profile(k, nu, m, &e, &rs, Normalization::default(), DcBranch::default()).unwrap();
    for (j, &r) in rs.iter().enumerate().step_by(11) {
        let v = dc_eigenfunction(k, nu, m, &e, r, EvalMethod::series(), Normalization::default(), DcBranch::default()).unwrap();
        let s = v[0].norm() + v[1].norm();
        assert!((prof[j][0] - v[0]).norm() + (prof[j][1] - v[1]).norm() < 1e-11 * s, "r={r}");
    }
}

#[test]
fn coulomb_small_r_power_law() {
    let (k, nu, m) = (1, -0.6, 1.0);
    let e = EnergyPoint::new(2.0, m).unwrap();
    let g = (1.0f64 - 0.36).sqrt();
    let f = |r: f64| {
        let v = dc_eigenfunction(k, nu, m, &e, r, EvalMethod::series(), Normalization::default(), DcBranch::default()).unwrap();
        (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
    };
    let slope = (f(1e-6) / f(1e-7)).log10();
    assert!((slope - (g - 1.0)).abs() < 1e-4, "slope {slope}");
}

#[test]
fn dc_params_examples_and_limits() {
    let e = EnergyPoint::new(2.0, 1.0).unwrap();
    let par = dc_params(2, -0.5, 1.0, &e).unwrap();
    assert!((par.gamma - 3.75f64.sqrt()).abs() < 1e-15);
    assert!(par.alpha_e < 0.0);
    assert!((par.phase.norm() - 1.0).abs() < 1e-12);
    let tiny = dc_params(3, -1e-9, 1.0, &e).unwrap();
    assert!(tiny.alpha_e.abs() < 1e-8 && (tiny.gamma - 3.0).abs() < 1e-12);
    assert!(dc_params(2, -0.5, 1.0, &EnergyPoint::new(-2.0, 1.0).unwrap()).is_err());
    assert!(dc_params(2, -0.5, 1.0, &EnergyPoint::new(1.0, 1.0).unwrap()).is_err());
    assert!(dc_params(0, -0.5, 1.0, &e).is_err());
}

#[test]
fn rescaled_form_matches_direct_substitution() {
    let (k, nu, m) = (2, -0.5, 1.0);
    let norm = Normalization::default();
    for n in [0.25, 1.0, 8.0] {
        let e = EnergyPoint::from_momentum(n, m, true).unwrap();
        for rho in [0.3, 2.0, 9.0] {
            let a = dc_eigenfunction_rescaled(k, nu, m, n, 1.0, rho, EvalMethod::series(), norm, DcBranch::default()).unwrap();
            let b = dc_eigenfunction(k, nu, m, &e, rho / n, EvalMethod::series(), norm, DcBranch::default()).unwrap();
            let s = 2.0 * n.sqrt();
            assert!((a[0] * s - b[0]).norm() + (a[1] * s - b[1]).norm() < 1e-8 * (b[0].norm() + b[1].norm()));
        }
    }
}

#[test]
fn rescaled_alpha_limits() {
    let e_big = EnergyPoint::from_momentum(2f64.powi(12), 1.0, true).unwrap();
    let par = dc_params(1, -0.5, 1.0, &e_big).unwrap();
    assert!((par.alpha_e + 0.5).abs() < 1e-6);
    let n = 2f64.powi(-8);
    let e_small = EnergyPoint::from_momentum(n, 1.0, true).unwrap();
    let par = dc_params(1, -0.5, 1.0, &e_small).unwrap();
    assert!((par.alpha_e * n / -0.5 - 1.0).abs() < 1e-4);
}

#[test]
fn phi_modulus_tracks_rescaled_spinor() {
    let (k, nu, m, n) = (3, -0.4, 1.0, 2.0);
    let rhos = [0.5, 1.0, 4.0, 12.0];
    let phi = dc_phi(k, nu, m, n, &rhos, DcBranch::default()).unwrap();
    let e = EnergyPoint::from_momentum(n, m, true).unwrap();
    for (rho, ph) in rhos.iter().zip(phi) {
        let v = dc_eigenfunction_rescaled(k, nu, m, n, 1.0, *rho, EvalMethod::series(), Normalization::AsPrinted, DcBranch::default()).unwrap();
        // G = N⁻ Re w, F = N⁺ Im w with w = Φ/√2
        let w = C64::new(-v[1].im / e.n_minus, v[0].re / e.n_plus);
        assert!((w * 2f64.sqrt() - ph).norm() < 1e-10 * ph.norm(), "rho={rho}");
    }
}

#[test]
fn sommerfeld_examples() {
    use SommerfeldVariant::*;
    let m = 1.0;
    for nu in [-0.3, 0.5] {
        let a = sommerfeld_eigenvalue(-1, 0, nu, m, AsPrinted).unwrap();
        let b = sommerfeld_eigenvalue(-1, 0, nu, m, Standard).unwrap();
        let want = nu.signum() * m * (1.0 - nu * nu).sqrt();
        assert!((a - want).abs() < 1e-15 && (b - want).abs() < 1e-15);
    }
    let a = sommerfeld_eigenvalue(-1, 1, -0.5, m, AsPrinted).unwrap();
    let b = sommerfeld_eigenvalue(-1, 1, -0.5, m, Standard).unwrap();
    assert!((a + m / (1.0 + 0.25 / 1.75f64).sqrt()).abs() < 1e-15);
    assert!((b + m / (1.0 + 0.25 / (0.75f64.sqrt() + 1.0).powi(2)).sqrt()).abs() < 1e-15);
    assert!((a - b).abs() > 1e-3);
    let far = sommerfeld_eigenvalue(2, 100_000, -0.5, m, AsPrinted).unwrap();
    assert!((far + m).abs() < 1e-9);
    assert!(sommerfeld_eigenvalue(1, 0, -0.5, m, AsPrinted).is_err());
    assert!(sommerfeld_eigenvalue(-1, 0, -1.5, m, AsPrinted).is_err());
}

proptest! {
    #[test]
    fn weights_are_unit_vectors(e in 1.0f64..1e6, neg in any::<bool>()) {
        let p = EnergyPoint::new(if neg { -e } else { e }, 1.0).unwrap();
        prop_assert!((p.n_plus.powi(2) + p.n_minus.powi(2) - 1.0).abs() < 1e-15);
        prop_assert!((p.p * p.p + 1.0 - e * e).abs() <= 1e-12 * e * e);
    }

    #[test]
    fn xi_phase_is_unimodular(k in prop::sample::select(vec![-6, -3, -2, -1, 1, 2, 4, 7]), nu in -0.95f64..-0.01, e in 1.0001f64..50.0) {
        let en = EnergyPoint::new(e, 1.0).unwrap();
        let par = dc_params(k, nu, 1.0, &en).unwrap();
        prop_assert!((par.phase.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn rescaled_kernel_matches_pointwise_form() {
    let (k, nu, m) = (-1, -0.4, 1.0);
    let rhos = [0.2, 1.0, 3.5, 11.0];
    for (n, y) in [(0.125, 0.75), (4.0, 0.5), (1.0, 1.0)] {
        let w = dc_rescaled_kernel(k, nu, m, n, y, &rhos, DcBranch::default()).unwrap();
        let e = EnergyPoint::from_momentum(n * y, m, true).unwrap();
        for (rho, w) in rhos.iter().zip(w) {
            let v = dc_eigenfunction_rescaled(k, nu, m, n, y, *rho, EvalMethod::series(), Normalization::AsPrinted, DcBranch::default()).unwrap();
            assert!((v[0].re - e.n_plus * w.im).abs() < 1e-11 * w.norm());
            assert!((v[1].im + e.n_minus * w.re).abs() < 1e-11 * w.norm());
        }
    }
    let phi = dc_phi(3, -0.2, 1.0, 2.0, &rhos, DcBranch::default()).unwrap();
    let w = dc_rescaled_kernel(3, -0.2, 1.0, 2.0, 1.0, &rhos, DcBranch::default()).unwrap();
    for (a, b) in phi.iter().zip(w) {
        assert!((a - b * 2f64.sqrt()).norm() < 1e-12 * a.norm());
    }
}
