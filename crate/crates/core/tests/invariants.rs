use proptest::prelude::*;

use ss_optics::helmholtz::{gplus_linear, scattering};
use ss_optics::linear_ss::{
    bilayer_ss_exact, bilayer_threshold, bilayer_threshold_eta1, bilayer_threshold_general,
    exact_residuals, Regime,
};
use ss_optics::nonlinear_ss::{emission, perturbation_coefficients};

#[test]
fn asymptotic_general_close_to_exact() {
    for eta in [2.0, 2.5, 3.0, 3.5, 3.9] {
        for m in [2000, 3000, 4000] {
            let guess = bilayer_threshold_general(eta, m, 1000.0).unwrap();
            let exact = bilayer_ss_exact(eta, 1000.0, &guess).unwrap();
            let err = (guess.g0_cm_inv - exact.g0_cm_inv).abs() / exact.g0_cm_inv;
            assert!(err < 1e-2, "eta {eta} m {m}: {err}");
        }
    }
}

#[test]
fn eta1_asymptotic_kappa_matches_exact() {
    // the asymptotic error falls off like 1/m^1.8 and crosses 1e-6 near m = 300
    for m in [300, 1000, 3000] {
        let guess = bilayer_threshold_eta1(m, 1000.0).unwrap();
        let exact = bilayer_ss_exact(1.0, 1000.0, &guess).unwrap();
        let err = (guess.kappa0 - exact.kappa0).abs() / exact.kappa0.abs();
        assert!(err < 1e-6, "m {m}: {err}");
    }
}

#[test]
fn exact_roots_are_singular_and_self_dual() {
    for (eta, m) in [
        (1.0, 900),
        (1.2, 1200),
        (2.0, 2000),
        (3.0, 3000),
        (3.9, 3900),
    ] {
        let s = bilayer_threshold(eta, m, 1000.0, true).unwrap();
        assert_eq!(s.regime, Regime::Exact);
        let n2 = eta * eta + s.kappa0 * s.kappa0;
        assert!(
            s.residual.max() < 1e-10 * (n2 + 1.0),
            "{eta} {m}: {:?}",
            s.residual
        );
        let partner = s.partner();
        let g = gplus_linear(partner.index().unwrap(), partner.k0()).unwrap();
        assert!(g.u.abs().max(g.v.abs()) < 1e-10 * (n2 + 1.0));
        let r = exact_residuals(eta, s.k0(), -s.kappa0);
        assert!(r[0].abs().max(r[1].abs()) < 1e-10);
        let sc = scattering(s.index().unwrap(), s.k0()).unwrap();
        assert!(sc.transfer.m22().norm() < 1e-8 * sc.transfer.norm());
        assert!(sc.is_near_singular());
    }
}

#[test]
fn lasing_roots_emit_positive_intensity() {
    for m in [2500, 3000, 3500] {
        let ss = bilayer_threshold(3.0, m, 1000.0, true).unwrap();
        let pr = perturbation_coefficients(&ss).unwrap();
        assert!(pr.intensity_coef > 0.0, "m {m}: {}", pr.intensity_coef);
    }
}

#[test]
fn wavelength_shift_is_negligible_at_eta3() {
    // a wavelength-shift coefficient of order 1e-7 keeps δλ/λ₀ far below (g−g₀)/g₀
    for m in [2500, 3000, 3500] {
        let ss = bilayer_threshold(3.0, m, 1000.0, true).unwrap();
        let pr = perturbation_coefficients(&ss).unwrap();
        let g0 = ss.g0_cm_inv;
        let curve = emission(&ss, &pr, 1.0, &[1.5 * g0]).unwrap();
        let ratio = (curve.dlambda_um[0] / ss.mode.lambda0_um).abs() / 0.5;
        assert!(ratio < 1e-6, "m {m}: |δλ/λ₀| / ((g−g₀)/g₀) = {ratio:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bound_holds_when_valid(m in 50u32..5000, eta in 1.05f64..3.99) {
        for s in [bilayer_threshold_eta1(m, 1000.0).unwrap(), bilayer_threshold_general(eta, m, 1000.0).unwrap()] {
            let a_g = 1000.0 * s.g0_cm_inv / 1e4;
            if a_g > 1.0 {
                prop_assert!(s.g0_cm_inv <= s.upper_bound_g0.unwrap());
            }
        }
    }

    #[test]
    fn exact_solver_converges_across_regimes(m in 100u32..4000, eta in 1.01f64..3.99) {
        let s = bilayer_threshold(eta, m, 1000.0, true).unwrap();
        prop_assert!(s.kappa0 < 0.0);
        let r = exact_residuals(eta, s.k0(), s.kappa0);
        prop_assert!(r[0].abs().max(r[1].abs()) < 1e-11);
    }
}
