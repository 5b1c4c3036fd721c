use brillouin_tap::attack::{clean_output, disturbed_output, RhoFamily};
use brillouin_tap::detection::{
    heterodyne_exponent, photon_threshold_exponent, relative_entropy, stein_exponent,
    stein_exponent_expanded, ThresholdMean,
};
use brillouin_tap::estimation::{
    classical_fisher_info, qfi, qfi_gaussian_general, rho_derivatives, GaussianQfiInputs,
    MeasurementScheme,
};
use brillouin_tap::model::{cascade, compose};
use brillouin_tap::photon::pnr_until;
use brillouin_tap::{AttackScenario, Complex, Convention, DisplacedThermalState, GaussianChannel};
use proptest::prelude::*;

fn segment() -> impl Strategy<Value = GaussianChannel> {
    (0.5..1.0f64, -0.05..0.05f64, -0.05..0.05f64, 0.0..0.3f64, 0.0..0.3f64, 0.0..3.0f64).prop_map(
        |(eta, kr, ki, nr, ni, n_th)| {
            GaussianChannel::sbs_segment(eta, Complex::new(kr, ki), Complex::new(nr, ni), n_th).unwrap()
        },
    )
}

fn state() -> impl Strategy<Value = DisplacedThermalState> {
    (0.0..4.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_map(|(n, re, im)| DisplacedThermalState::new(n, Complex::new(re, im)).unwrap())
}

/// Random scenario; `segment_index` is drawn as a fraction of `L`.
fn scenario() -> impl Strategy<Value = AttackScenario> {
    (
        (5u32..150, 0.0..1.0f64, 0.9..1.0f64, 0.0..6.0f64),
        (0.0..0.1f64, -0.05..0.05f64, 0.01..0.4f64, 0.0..3.0f64),
        (0.0..0.95f64, 0.0..3.0f64, prop::bool::ANY),
    )
        .prop_map(|((l, frac, eta, e), (kr, ki, nu, n_th), (rho, n_e, physical))| {
            let index = 1 + ((l - 1) as f64 * frac) as u32;
            AttackScenario {
                segments: l,
                eta,
                segment_index: index,
                probe_energy: e,
                kappa: Complex::new(kr, ki),
                nu: Complex::new(nu, 0.0),
                n_th,
                tau_e: 1.0 - rho,
                n_e,
                convention: if physical { Convention::Physical } else { Convention::PaperLiteral },
            }
        })
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative(a in segment(), b in segment(), c in segment()) {
        let left = compose(&compose(&c, &b), &a);
        let right = compose(&c, &compose(&b, &a));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn cascade_scalars_match_matrix_fold(segs in prop::collection::vec(segment(), 1..40)) {
        let c = cascade(&segs).unwrap();
        let (mu, y) = c.channel.scalar_form().unwrap();
        let mu_tot = c.mu_tot.unwrap();
        prop_assert!((mu - mu_tot).norm() <= 1e-12);
        prop_assert!((y - c.y_tot.unwrap()).abs() <= 1e-12 * y.abs().max(1.0));
    }

    #[test]
    fn tap_scales_displacement_by_root_tau(sc in scenario()) {
        let clean = clean_output(&sc).unwrap();
        let tapped = match disturbed_output(&sc) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let expected = sc.tau_e.sqrt() * clean.alpha;
        prop_assert!((tapped.alpha - expected).norm() <= 1e-12 * clean.alpha.norm().max(1.0));
        let family = RhoFamily::new(&sc).unwrap();
        prop_assert!((family.nbar_at(sc.rho()) - tapped.nbar).abs() <= 1e-10);
    }

    #[test]
    fn heterodyne_respects_data_processing(a in state(), b in state()) {
        let d = relative_entropy(&b, &a);
        prop_assert!(d >= -1e-12);
        let dh = heterodyne_exponent(&a, &b);
        prop_assert!(dh <= d + 1e-9, "D_H {} > D {}", dh, d);
    }

    // the threshold exponent is a large-deviation rate of the tapped counts,
    // not a divergence in D's direction, so it is only checked on attack
    // scenarios rather than arbitrary state pairs
    #[test]
    fn threshold_exponent_below_stein_on_scenarios(sc in scenario()) {
        let sc = AttackScenario { convention: Convention::PaperLiteral, ..sc };
        let clean = clean_output(&sc).unwrap();
        let tapped = disturbed_output(&sc).unwrap();
        let d = relative_entropy(&tapped, &clean);
        let dp = photon_threshold_exponent(&clean, &tapped, ThresholdMean::Thermal);
        prop_assert!(dp <= d + 1e-9, "D_P {} > D {}", dp, d);
    }

    #[test]
    fn stein_paths_agree(sc in scenario()) {
        let sc = AttackScenario { convention: Convention::PaperLiteral, ..sc };
        let a = stein_exponent(&sc).unwrap();
        let b = stein_exponent_expanded(&sc).unwrap();
        prop_assert!(a == b || (a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn rho_derivatives_match_finite_differences(sc in scenario()) {
        let rho = sc.rho().min(0.9);
        let family = RhoFamily::new(&sc).unwrap();
        let d = rho_derivatives(&sc, rho).unwrap();
        let h = 1e-6;
        let fd_beta = (family.beta_at(rho + h) - family.beta_at(rho - h)) / (2.0 * h);
        let fd_nbar = (family.nbar_at(rho + h) - family.nbar_at(rho - h)) / (2.0 * h);
        prop_assert!((fd_beta - d.d_beta).norm() <= 1e-6 * d.d_beta.norm().max(1e-3));
        prop_assert!((fd_nbar - d.d_nbar).abs() <= 1e-6 * d.d_nbar.abs().max(1e-3));
    }

    #[test]
    fn photon_statistics_are_normalised(s in state()) {
        let p = pnr_until(s.nbar, s.alpha, 1e-13, 0).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_qfi_equals_general_gaussian_formula(sc in scenario()) {
        let rho = sc.rho();
        let family = RhoFamily::new(&sc).unwrap();
        let nbar = family.nbar_at(rho);
        prop_assume!(nbar > 0.0);
        let d = rho_derivatives(&sc, rho).unwrap();
        let general = qfi_gaussian_general(&GaussianQfiInputs::isotropic(nbar, &d)).unwrap();
        let closed = qfi(&sc, rho).unwrap();
        prop_assert!(rel_diff(general, closed) <= 1e-9, "{} vs {}", general, closed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn receivers_never_beat_qfi(sc in scenario()) {
        let rho = sc.rho();
        let q = qfi(&sc, rho).unwrap();
        prop_assume!(q > 1e-8 && q.is_finite());
        for scheme in [MeasurementScheme::Heterodyne, MeasurementScheme::Homodyne, MeasurementScheme::PhotonCounting] {
            let f = classical_fisher_info(&sc, rho, scheme).unwrap();
            prop_assert!(f / q <= 1.0 + 1e-3, "{} gives {} > {}", scheme, f, q);
        }
    }
}
