//! WebAssembly bindings for the browser demo. Every export returns a JSON
//! string — `{"error": "..."}` on bad input — so the page needs no glue
//! beyond `JSON.parse`, and the same functions are testable natively.

use brillouin_tap::detection::{exponent_sweep, linspace, ThresholdMean};
use brillouin_tap::estimation::{classical_fisher_info, qfi, MeasurementScheme};
use brillouin_tap::model::{segment_channel, segment_gain_params, susceptibility};
use brillouin_tap::{AttackScenario, Complex, Convention, SegmentPhysical};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Finite values pass through; anything else becomes `null`.
fn finite(xs: impl IntoIterator<Item = f64>) -> Vec<Option<f64>> {
    xs.into_iter().map(|x| x.is_finite().then_some(x)).collect()
}

fn scenario(energy: f64, n_th: f64, n_e: f64, physical: bool) -> AttackScenario {
    AttackScenario {
        probe_energy: energy,
        n_th,
        n_e,
        convention: if physical { Convention::Physical } else { Convention::PaperLiteral },
        ..AttackScenario::exponent_figure()
    }
}

/// Stein, photon-threshold and heterodyne exponents (nats per probe) on
/// `steps` points of `ρ ∈ [0, rho_max]`.
#[wasm_bindgen]
pub fn exponent_curves(energy: f64, n_th: f64, n_e: f64, physical: bool, rho_max: f64, steps: usize) -> String {
    respond((|| {
        let sc = scenario(energy, n_th, n_e, physical);
        sc.validate().map_err(|e| e.to_string())?;
        if !(0.0..1.0).contains(&rho_max) || steps < 2 {
            return Err("need rho_max in [0, 1) and at least 2 steps".into());
        }
        let rows = exponent_sweep(&sc, &linspace(0.0, rho_max, steps), ThresholdMean::Thermal)
            .map_err(|e| e.to_string())?;
        Ok(json!({
            "rho": finite(rows.iter().map(|r| r.rho)),
            "D": finite(rows.iter().map(|r| r.exponents.d_quantum)),
            "DP": finite(rows.iter().map(|r| r.exponents.d_photon)),
            "DH": finite(rows.iter().map(|r| r.exponents.d_heterodyne)),
        }))
    })())
}

/// Cramér–Rao floors `1/(k F)` for the quantum bound and each receiver on
/// `steps` points of `ρ ∈ [rho_lo, rho_hi]`.
#[wasm_bindgen]
pub fn estimation_floors(
    energy: f64,
    n_th: f64,
    n_e: f64,
    probes: f64,
    rho_lo: f64,
    rho_hi: f64,
    steps: usize,
) -> String {
    respond((|| {
        let sc = scenario(energy, n_th, n_e, false);
        sc.validate().map_err(|e| e.to_string())?;
        if !(0.0 <= rho_lo && rho_lo < rho_hi && rho_hi < 1.0) || steps < 2 || !(probes >= 1.0) {
            return Err("need 0 <= rho_lo < rho_hi < 1, at least 2 steps and k >= 1".into());
        }
        let grid = linspace(rho_lo, rho_hi, steps);
        let floor = |f: f64| 1.0 / (probes * f);
        let mut out = serde_json::Map::new();
        out.insert("rho".into(), json!(grid));
        let q: Vec<f64> = grid.iter().map(|&r| qfi(&sc, r).map(floor).unwrap_or(f64::NAN)).collect();
        out.insert("quantum".into(), json!(finite(q)));
        for scheme in [
            MeasurementScheme::Heterodyne,
            MeasurementScheme::Homodyne,
            MeasurementScheme::PhotonCounting,
            MeasurementScheme::SldOptimalAtTruth,
        ] {
            let v: Vec<f64> = grid
                .iter()
                .map(|&r| classical_fisher_info(&sc, r, scheme).map(floor).unwrap_or(f64::NAN))
                .collect();
            out.insert(scheme.to_string(), json!(finite(v)));
        }
        Ok(Value::Object(out))
    })())
}

/// Couplings and channel matrices of one segment; `detuning` is `Ω − Ω_B`.
#[wasm_bindgen]
pub fn segment_parameters(g_re: f64, g_im: f64, gamma: f64, detuning: f64, eta: f64, n_th: f64) -> String {
    respond((|| {
        let seg = SegmentPhysical {
            eta,
            g_tilde: Complex::new(g_re, g_im),
            gamma,
            omega: detuning,
            omega_b: 0.0,
            delta_z: 1.0,
            n_th,
        };
        let err = |e: brillouin_tap::Error| e.to_string();
        let chi = susceptibility(seg.omega, seg.omega_b, seg.gamma).map_err(err)?;
        let gain = segment_gain_params(&seg).map_err(err)?;
        let ch = segment_channel(&seg).map_err(err)?;
        let z = |c: Complex| json!([c.re, c.im]);
        Ok(json!({
            "chi": z(chi),
            "mu": z(gain.mu),
            "kappa": z(gain.kappa),
            "nu": z(gain.nu),
            "nu_abs2": gain.nu.norm_sqr(),
            "X": ch.x.0,
            "Y": ch.y.0,
        }))
    })())
}
