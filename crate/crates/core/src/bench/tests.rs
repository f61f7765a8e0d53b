use super::*;
use crate::channels::Model;
use crate::eigenbasis::DcBranch;
use crate::norms::Frequency;
use proptest::prelude::*;

#[test]
fn q_n_hand_values() {
    // n = 3, (p, q) = (4, 4): β(4) = 1/4 − 5/6, large exponent 1/4 + β/2 = −1/24
    assert_eq!(q_n(3, 4.0, 4.0, 0.5).unwrap(), 0.5f64.powf(0.75));
    assert!((q_n(3, 4.0, 4.0, 4.0).unwrap() - 4f64.powf(-1.0 / 24.0)).abs() < 1e-15);
    // n = 2, (∞, 4): β(∞) = −1/3, exponent 1/4 − 1/6 = 1/12
    assert!((q_n(2, f64::INFINITY, 4.0, 16.0).unwrap() - 16f64.powf(1.0 / 12.0)).abs() < 1e-15);
    assert_eq!(q_n(2, 4.0, 2.0, 1.0).unwrap(), 1.0);
    assert!(q_n(2, 4.0, 1.0, 1.0).is_err());
    assert_eq!(c_n(4.0), 0.5);
    assert_eq!(c_n(0.25), 4.0);
}

#[test]
fn loglog_fit_recovers_power_law() {
    let xs = dyadic((-3, 4));
    let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.7)).collect();
    let (s, c, res) = fit_loglog(&xs, &ys).unwrap();
    assert!((s + 0.7).abs() < 1e-13 && (c - 3f64.log2()).abs() < 1e-13 && res < 1e-13);
    assert!(fit_loglog(&xs[..1], &ys[..1]).is_err());
    let fit = slope_fit("x", &xs[..3], &ys[..3], -0.7, 0.1, Relation::Equal).unwrap();
    assert!(fit.flagged && fit.passes());
}

#[test]
fn bump_profile_norm_matches_beta_integral() {
    // ∫ 4096 u⁶(½ − u)⁶ du over [0, ½] = 4096·B(7, 7)/2¹³
    let b77 = 720.0 * 720.0 / 6_227_020_800.0;
    let exact = (4096.0 * b77 / 8192.0f64).sqrt();
    let h = BumpProfile::smooth();
    assert!((h.lp_norm(2.0) - exact).abs() < 1e-14);
    // GL nodes miss the peak at y = ¾ by at most one node spacing
    assert!((h.lp_norm(f64::INFINITY) * 64.0 - 1.0).abs() < 1e-2);
    assert_eq!(h.eval(0.5), 0.0);
    assert_eq!(h.eval(1.2), 0.0);
    assert!(BumpProfile::modulated(vec![Modulation { amplitude: 1.0, frequency: 1.0, phase: 0.0 }]).is_err());
    let spec = DyadicSpec::new((-2, 1), (0, 2), h).unwrap();
    assert_eq!(spec.frequencies(), vec![0.25, 0.5, 1.0, 2.0]);
    assert!(DyadicSpec::new((1, 0), (0, 2), BumpProfile::smooth()).is_err());
}

#[test]
fn bessel_small_r_fixed_order_slope() {
    let r = bessel_dyadic_norms(0.5, 2.0, 2, &dyadic((-8, -3)), false, false).unwrap();
    let fit = r.fit("small-R").unwrap();
    assert!(fit.passes() && !fit.flagged, "{fit:?}");
    assert!((fit.expected - 1.0).abs() < 1e-15);
    let ratio = r.constant("boundary_ratio").unwrap();
    assert!((0.25..=4.0).contains(&ratio), "{ratio}");
}

#[test]
fn bessel_large_r_slope_in_space() {
    let r = bessel_dyadic_norms(5.0, 2.0, 3, &dyadic((4, 8)), false, false).unwrap();
    let fit = r.fit("large-R").unwrap();
    assert!((fit.slope + 0.5).abs() < 0.1, "{fit:?}");
    let u = bessel_dyadic_norms(5.0, 4.0, 3, &dyadic((6, 9)), true, false).unwrap();
    assert!(u.fit("large-R").unwrap().passes());
    assert!(bessel_dyadic_norms(1.0, 2.0, 2, &[1.0], true, false).is_err());
}

#[test]
fn bessel_derivative_small_r() {
    let r = bessel_dyadic_norms(2.0, 4.0, 2, &dyadic((-8, -4)), false, true).unwrap();
    let fit = r.fit("small-R").unwrap();
    assert!(fit.passes(), "{fit:?}");
}

#[test]
fn dc_radial_channel_slopes() {
    let nu = -0.5;
    let radii: Vec<f64> = dyadic((-10, -5)).into_iter().chain(dyadic((6, 10))).collect();
    let r = dc_sector_bounds(-1, nu, &[1.0], &radii, &DcSectorOptions::default()).unwrap();
    let g1 = (1.0 - nu * nu).sqrt();
    let origin = r.fit("sup-origin").unwrap();
    assert!((origin.expected - (g1 - 1.0)).abs() < 1e-15 && origin.passes(), "{origin:?}");
    assert!(r.fit("sup-far").unwrap().passes(), "{:?}", r.fit("sup-far"));
    assert!(r.fit("lq-small").unwrap().passes());
    assert!(r.ratios_finite() && r.sup_ratio < 10.0);
}

#[test]
fn dc_sector_constant_is_finite_and_rate_positive() {
    let d = fit_sector_rate(-0.5, 1.0, DcBranch::Conjugate).unwrap();
    assert!(d > 0.0);
    let opts = DcSectorOptions { rate: Some(d), ..Default::default() };
    let radii = dyadic((-4, 6));
    let r = dc_sector_bounds(5, -0.5, &[1.0], &radii, &opts).unwrap();
    assert!(r.sup_ratio.is_finite() && r.sup_ratio > 0.0);
    for label in ["sector-origin", "sector-turning", "sector-far"] {
        assert!(r.samples.iter().any(|s| s.regime == label), "{label}");
    }
    assert!(dc_sector_bounds(2, -1.5, &[1.0], &radii, &opts).is_err());
    assert!(dc_sector_bounds(2, -0.5, &[1.0], &[1.0, 1.5], &opts).is_err());
}

#[test]
fn plancherel_oracle_for_time_transform() {
    // ‖F[h]‖₂² = 2π ∫ h(y)² E/(N² y) dy
    let h = BumpProfile::smooth();
    for (n, m) in [(4.0, 1.0), (0.25, 1.0)] {
        let r = hausdorff_young_check(&[n], 2.0, m, &h).unwrap();
        let exact = (std::f64::consts::TAU * h.rule(0.0).integrate(|y| h.eval(y).powi(2) * (n * y).hypot(m) / (n * n * y))).sqrt();
        let got = r.samples[0].measured;
        assert!((got - exact).abs() < 1e-3 * exact, "{got} {exact}");
    }
}

#[test]
fn c_n_regression_slopes() {
    let h = BumpProfile::smooth();
    let ns: Vec<f64> = dyadic((3, 8)).into_iter().chain(dyadic((-8, -3))).collect();
    let r = hausdorff_young_check(&ns, 4.0, 1.0, &h).unwrap();
    for regime in ["cn-high", "cn-low"] {
        let f = r.fit(regime).unwrap();
        assert!(f.passes() && !f.flagged, "{f:?}");
    }
    assert!(r.ratios_finite());
}

fn localized(family: KernelFamily) -> BoundReport {
    localized_strichartz_check(&LocalizedSpec {
        family,
        mass: 1.0,
        n_freq: 1.0,
        radii: dyadic((-7, -2)),
        p: 4.0,
        q: 4.0,
        profile: BumpProfile::smooth(),
    })
    .unwrap()
}

#[test]
fn localized_small_r_slopes() {
    for family in [
        KernelFamily::free_minimal(2),
        KernelFamily::free_minimal(3),
        KernelFamily::AharonovBohm { alpha: 0.25 },
        KernelFamily::Coulomb { k: -1, nu: -0.5, component: DcComponent::G },
    ] {
        let r = localized(family);
        let f = r.fit("small-R").unwrap();
        assert!(f.passes(), "{family:?}: {f:?}");
        assert!(r.constant("max_refinement_change").unwrap() < 1e-3, "{:?}", r.constants);
    }
}

#[test]
fn scan_l2_pair_is_conserved() {
    let model = Model::free(3, 1.0).unwrap();
    let family = DataFamily::dyadic(&model, Frequency::High, 2).unwrap();
    let settings = ScanSettings { window: 16.0, ..Default::default() };
    let r = strichartz_scan(&family, &[(f64::INFINITY, 2.0), (4.0, 4.0)], &settings).unwrap();
    let l2 = &r.spreads[0];
    assert!(l2.in_region && (l2.max - 1.0).abs() < 1e-3 && (l2.min - 1.0).abs() < 1e-3, "{l2:?}");
    assert!(r.spreads[1].in_region && r.ratios_finite());
}

#[test]
fn family_rejects_wrong_block() {
    let model = Model::free(2, 1.0).unwrap();
    let bad = FamilyMember {
        n_freq: 1.0,
        channels: vec![(crate::channels::Channel::planar(0), crate::C64::new(1.0, 0.0))],
        profile: BumpProfile::smooth(),
    };
    assert!(DataFamily::new(&model, Frequency::High, vec![bad.clone()]).is_err());
    assert!(DataFamily::new(&model, Frequency::Low, vec![bad]).is_ok());
    assert!(DataFamily::dyadic(&model, Frequency::Low, 10).is_ok());
}

proptest! {
    #[test]
    fn q_n_is_continuous_from_the_left_of_one(n in 2usize..4, p in 2.0f64..20.0, q in 2.0f64..20.0) {
        let below = q_n(n, p, q, 1.0 - 1e-12).unwrap();
        let at = q_n(n, p, q, 1.0).unwrap();
        prop_assert!((below - at).abs() < 1e-10);
    }

    #[test]
    fn modulated_bump_stays_nonnegative(a in 0.0f64..0.9, f in 0.0f64..6.0, ph in 0.0f64..6.3, y in 0.0f64..1.5) {
        let h = BumpProfile::modulated(vec![Modulation { amplitude: a, frequency: f, phase: ph }]).unwrap();
        prop_assert!(h.eval(y) >= 0.0);
    }
}
