use anyhow::Result;
use brillouin_tap::detection::{exponent_sweep, k_min, rho_min};
use brillouin_tap::estimation::{classical_fisher_info, crb, mc_estimator_variance, qfi, McSettings};
use brillouin_tap::model::{bose_occupation, segment_channel, segment_gain_params, susceptibility};
use brillouin_tap::{Error, SegmentPhysical};

use crate::config::RunConfig;
use crate::output::{Cell, Dataset};

fn dataset(cfg: &RunConfig, command: &'static str, columns: &[&'static str]) -> Dataset {
    Dataset {
        command,
        parameters: cfg.echo(),
        columns: columns.to_vec(),
        rows: Vec::new(),
        failures: Vec::new(),
    }
}

/// Stein, photon-threshold and heterodyne exponents over the ρ sweep.
pub fn exponents(cfg: &RunConfig) -> Result<Dataset> {
    let mut ds = dataset(
        cfg,
        "exponents",
        &[
            "rho", "D", "DP", "DH", "DP_over_D", "DH_over_D", "Delta", "M", "N", "beta_re", "alpha_re",
            "D_bits", "DP_bits", "DH_bits",
        ],
    );
    let bits = std::f64::consts::LN_2.recip();
    for row in exponent_sweep(&cfg.scenario, &cfg.sweep.grid(), cfg.threshold_mean)? {
        let e = row.exponents;
        ds.rows.push(
            [
                row.rho,
                e.d_quantum,
                e.d_photon,
                e.d_heterodyne,
                e.photon_ratio(),
                e.heterodyne_ratio(),
                row.delta,
                row.clean.nbar,
                row.disturbed.nbar,
                row.disturbed.alpha.re,
                row.clean.alpha.re,
                e.d_quantum * bits,
                e.d_photon * bits,
                e.d_heterodyne * bits,
            ]
            .into_iter()
            .map(Cell::Num)
            .collect(),
        );
    }
    Ok(ds)
}

/// Minimum detectable tap, probe budget, scan time and leaked data.
pub fn scaling(cfg: &RunConfig) -> Result<Dataset> {
    let mut ds = dataset(cfg, "scaling", &["rho", "rho_min", "k_min", "T_scan", "B_stolen"]);
    let s = &cfg.scaling;
    s.validate()?;
    let floor = rho_min(&cfg.scenario, s.p, s.k)?;
    for rho in cfg.sweep.grid() {
        let k = match k_min(&cfg.scenario, s.lambda, rho) {
            Ok(k) => k,
            Err(e @ Error::InfeasibleDetection(_)) => {
                ds.failures.push(format!("rho = {rho:?}: {e}"));
                f64::INFINITY
            }
            Err(e) => return Err(e.into()),
        };
        let t_scan = s.t_l * k;
        ds.rows
            .push(vec![rho.into(), floor.into(), k.into(), t_scan.into(), (s.capacity * t_scan).into()]);
    }
    Ok(ds)
}

/// Monte Carlo estimator variance per (scheme, ρ) against the Cramér–Rao
/// floors. `crb` is the quantum floor `1/(k·QFI)`; `crb_classical` uses the
/// scheme's own Fisher information.
pub fn estimate(cfg: &RunConfig) -> Result<Dataset> {
    let mut ds = dataset(
        cfg,
        "estimate",
        &[
            "scheme", "rho_true", "k", "trials", "variance", "stderr", "crb", "fi_classical", "qfi",
            "failed_trials", "crb_classical",
        ],
    );
    let mc = &cfg.mc;
    for &rho in &mc.rho_true {
        let sc = cfg.scenario.with_rho(rho);
        let q = qfi(&sc, rho)?;
        let crb_q = crb(mc.k as u64, q).unwrap_or(f64::INFINITY);
        for &scheme in &mc.schemes {
            let label = scheme.to_string();
            let fi = classical_fisher_info(&sc, rho, scheme);
            let run = mc_estimator_variance(
                &sc,
                &McSettings {
                    scheme,
                    rho_true: rho,
                    k: mc.k,
                    trials: mc.trials,
                    seed: mc.seed,
                    threads: cfg.threads,
                },
            );
            let (fi, crb_c) = match fi {
                Ok(f) => (f, crb(mc.k as u64, f).unwrap_or(f64::INFINITY)),
                Err(e) => {
                    ds.failures.push(format!("{label} at rho = {rho:?}: Fisher information: {e}"));
                    (f64::NAN, f64::NAN)
                }
            };
            let (variance, stderr, failed) = match run {
                Ok(r) => {
                    if r.failed_trials > 0 {
                        ds.failures.push(format!(
                            "{label} at rho = {rho:?}: {} of {} trials failed to converge",
                            r.failed_trials, mc.trials
                        ));
                    }
                    (r.variance, r.stderr, r.failed_trials)
                }
                Err(e) => {
                    ds.failures.push(format!("{label} at rho = {rho:?}: {e}"));
                    (f64::NAN, f64::NAN, mc.trials)
                }
            };
            ds.rows.push(vec![
                label.into(),
                rho.into(),
                mc.k.into(),
                mc.trials.into(),
                variance.into(),
                stderr.into(),
                crb_q.into(),
                fi.into(),
                q.into(),
                failed.into(),
                crb_c.into(),
            ]);
        }
    }
    Ok(ds)
}

/// Couplings and channel matrices of one segment.
pub fn segment(cfg: &RunConfig) -> Result<Dataset> {
    let mut ds = dataset(cfg, "segment", &["quantity", "value"]);
    let si = &cfg.segment;
    let n_th = match si.temperature {
        Some(t) => bose_occupation(si.omega_b, t)?,
        None => cfg.scenario.n_th,
    };
    let seg = SegmentPhysical {
        eta: cfg.scenario.eta,
        g_tilde: si.g_tilde,
        gamma: si.gamma,
        omega: si.omega,
        omega_b: si.omega_b,
        delta_z: si.delta_z,
        n_th,
    };
    let chi = susceptibility(seg.omega, seg.omega_b, seg.gamma)?;
    let gain = segment_gain_params(&seg)?;
    let ch = segment_channel(&seg)?;
    let mut push = |name: &str, v: f64| ds.rows.push(vec![name.into(), v.into()]);
    for (name, z) in [("chi", chi), ("mu", gain.mu), ("kappa", gain.kappa), ("nu", gain.nu)] {
        push(&format!("{name}_re"), z.re);
        push(&format!("{name}_im"), z.im);
    }
    push("nu_abs2", gain.nu.norm_sqr());
    push("n_th", n_th);
    for (name, m) in [("X", ch.x), ("Y", ch.y)] {
        for (i, v) in m.0.iter().enumerate() {
            push(&format!("{name}_{}{}", i / 2 + 1, i % 2 + 1), *v);
        }
    }
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(pairs: &[(&str, &str)]) -> RunConfig {
        let owned: Vec<(String, String)> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        RunConfig::from_pairs(&owned).unwrap()
    }

    fn column(ds: &Dataset, name: &str) -> Vec<f64> {
        let j = ds.columns.iter().position(|c| *c == name).unwrap();
        ds.rows
            .iter()
            .map(|r| match r[j] {
                Cell::Num(x) => x,
                Cell::Int(n) => n as f64,
                Cell::Text(_) => f64::NAN,
            })
            .collect()
    }

    #[test]
    fn exponent_columns_are_monotone() {
        let ds = exponents(&cfg(&[("rho_steps", "20")])).unwrap();
        for name in ["D", "DP", "DH"] {
            let c = column(&ds, name);
            assert!(c.windows(2).all(|w| w[1] >= w[0]), "{name}");
        }
        assert!(ds.failures.is_empty());
    }

    #[test]
    fn scaling_flags_zero_tap() {
        let ds = scaling(&cfg(&[("rho_start", "0"), ("rho_steps", "3")])).unwrap();
        assert_eq!(ds.failures.len(), 1);
        assert_eq!(column(&ds, "k_min")[0], f64::INFINITY);
        let floor = column(&ds, "rho_min");
        assert!(floor.iter().all(|&r| r == floor[0]));
    }

    #[test]
    fn segment_defaults_reproduce_scenario_couplings() {
        let ds = segment(&cfg(&[])).unwrap();
        let find = |q: &str| {
            ds.rows
                .iter()
                .find(|r| r[0] == Cell::Text(q.into()))
                .map(|r| match r[1] {
                    Cell::Num(x) => x,
                    _ => unreachable!(),
                })
                .unwrap()
        };
        assert!((find("kappa_re") - 0.02).abs() < 1e-15);
        assert!((find("nu_abs2") - 0.04).abs() < 1e-15);
        assert_eq!(find("n_th"), 1.0);
    }

    #[test]
    fn estimate_flags_degenerate_sld() {
        // noise-matched attacker: λ = 0, the SLD frame offset is undefined
        let c = cfg(&[
            ("preset", "estimation"),
            ("nu_abs2", "0.25"),
            ("n_th", "3.5"),
            ("n_E", "0.5"),
            ("schemes", "sld_at_truth"),
            ("k", "50"),
            ("trials", "100"),
        ]);
        let ds = estimate(&c).unwrap();
        assert_eq!(ds.rows.len(), 1);
        assert!(!ds.failures.is_empty());
    }
}
