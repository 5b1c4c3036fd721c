//! Flat `key = value` run configuration.
//!
//! Values are applied in order — config file lines, then `--set` overrides,
//! then dedicated flags — so later settings win. Unknown keys are errors.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use brillouin_tap::attack::{DEFAULT_KAPPA, DEFAULT_NU_ABS2};
use brillouin_tap::detection::{linspace, ScalingInputs, ThresholdMean};
use brillouin_tap::estimation::MeasurementScheme;
use brillouin_tap::{AttackScenario, Complex, Convention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format `{other}` (expected csv or json)"),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Scenario baseline selected by the `preset` key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preset {
    /// η = 0.98, L = 100, i = 50, E = 5, n_th = 1, n_E = 0.5.
    #[default]
    Exponent,
    /// As `Exponent` with E = 0.5, n_E = 2.
    Estimation,
}

impl Preset {
    fn scenario(self) -> AttackScenario {
        match self {
            Preset::Exponent => AttackScenario::exponent_figure(),
            Preset::Estimation => AttackScenario::estimation_figure(),
        }
    }
}

impl FromStr for Preset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exponent" | "exponents" => Ok(Preset::Exponent),
            "estimation" | "estimate" => Ok(Preset::Estimation),
            other => bail!("unknown preset `{other}` (expected exponent or estimation)"),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Exponent => "exponent",
            Preset::Estimation => "estimation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarlo {
    pub rho_true: Vec<f64>,
    pub schemes: Vec<MeasurementScheme>,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Physical inputs of the `segment` command. Frequencies share one unit;
/// only ratios to Γ matter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentInputs {
    pub g_tilde: Complex,
    pub gamma: f64,
    pub omega: f64,
    pub omega_b: f64,
    pub delta_z: f64,
    /// When set (K), the phonon occupation follows from Ω_B and T instead
    /// of `n_th`; Ω_B must then be in rad/s.
    pub temperature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub scenario: AttackScenario,
    pub sweep: Sweep,
    pub threshold_mean: ThresholdMean,
    pub scaling: ScalingInputs,
    pub mc: MonteCarlo,
    pub segment: SegmentInputs,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::with_preset(Preset::default())
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| anyhow!("bad value `{value}` for `{key}`: {e}"))
}

/// Shortest decimal that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

impl RunConfig {
    pub fn with_preset(preset: Preset) -> Self {
        Self {
            preset,
            scenario: preset.scenario(),
            sweep: Sweep {
                start: 0.01,
                end: 0.5,
                steps: 50,
            },
            threshold_mean: ThresholdMean::Thermal,
            scaling: ScalingInputs {
                p: 1e-6,
                lambda: 1e-9,
                k: 1e3,
                capacity: 1e11,
                t_l: 5e-4,
            },
            mc: MonteCarlo {
                rho_true: vec![0.3],
                schemes: vec![
                    MeasurementScheme::Heterodyne,
                    MeasurementScheme::PhotonCounting,
                    MeasurementScheme::SldOptimalAtTruth,
                    MeasurementScheme::AdaptiveSld {
                        pilot_fraction: MeasurementScheme::DEFAULT_PILOT_FRACTION,
                    },
                ],
                k: 1000,
                trials: 2000,
                seed: 1,
            },
            // on resonance these reproduce κ = 0.02 and |ν|² = 0.04
            segment: SegmentInputs {
                g_tilde: Complex::new(0.1, 0.0),
                gamma: 1.0,
                omega: 0.0,
                omega_b: 0.0,
                delta_z: 1.0,
                temperature: None,
            },
            threads: None,
            out: None,
            format: Format::Csv,
        }
    }

    /// Builds a configuration from ordered `(key, value)` pairs. A `preset`
    /// pair, wherever it appears, selects the baseline before the others
    /// are applied.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let preset = match pairs.iter().rev().find(|(k, _)| k == "preset") {
            Some((k, v)) => parse::<Preset>(k, v)?,
            None => Preset::default(),
        };
        let mut cfg = Self::with_preset(preset);
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies one setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let sc = &mut self.scenario;
        match key {
            "preset" => self.preset = parse(key, value)?,
            "L" => sc.segments = parse(key, value)?,
            "eta" => sc.eta = parse(key, value)?,
            "segment_index" => sc.segment_index = parse(key, value)?,
            "E" => sc.probe_energy = parse(key, value)?,
            "kappa_re" => sc.kappa.re = parse(key, value)?,
            "kappa_im" => sc.kappa.im = parse(key, value)?,
            "nu_abs2" => {
                let v: f64 = parse(key, value)?;
                if !(v >= 0.0) {
                    bail!("`nu_abs2` must be >= 0, got {v}");
                }
                // only |ν|² enters the outputs; the phase is fixed to zero
                sc.nu = Complex::new(v.sqrt(), 0.0);
            }
            "n_th" => sc.n_th = parse(key, value)?,
            "tau_E" => sc.tau_e = parse(key, value)?,
            "n_E" => sc.n_e = parse(key, value)?,
            "convention" => sc.convention = parse::<Convention>(key, value)?,
            "rho_start" => self.sweep.start = parse(key, value)?,
            "rho_end" => self.sweep.end = parse(key, value)?,
            "rho_steps" => self.sweep.steps = parse(key, value)?,
            "dp_mean_includes_displacement" => {
                self.threshold_mean = if parse::<bool>(key, value)? {
                    ThresholdMean::IncludesDisplacement
                } else {
                    ThresholdMean::Thermal
                }
            }
            "p" => self.scaling.p = parse(key, value)?,
            "lambda" => self.scaling.lambda = parse(key, value)?,
            "k_probes" => self.scaling.k = parse(key, value)?,
            "C" => self.scaling.capacity = parse(key, value)?,
            "t_L" => self.scaling.t_l = parse(key, value)?,
            "schemes" => {
                self.mc.schemes = value
                    .split([',', ';'])
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse::<MeasurementScheme>(key, s))
                    .collect::<Result<_>>()?;
            }
            "rho_true" => {
                self.mc.rho_true = value
                    .split([',', ';'])
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse::<f64>(key, s))
                    .collect::<Result<_>>()?;
            }
            "k" => self.mc.k = parse(key, value)?,
            "trials" => self.mc.trials = parse(key, value)?,
            "seed" => self.mc.seed = parse(key, value)?,
            "g_tilde_re" => self.segment.g_tilde.re = parse(key, value)?,
            "g_tilde_im" => self.segment.g_tilde.im = parse(key, value)?,
            "Gamma" => self.segment.gamma = parse(key, value)?,
            "Omega" => self.segment.omega = parse(key, value)?,
            "Omega_B" => self.segment.omega_b = parse(key, value)?,
            "delta_z" => self.segment.delta_z = parse(key, value)?,
            "temperature" => {
                self.segment.temperature = match value.trim() {
                    "" | "none" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "threads" => {
                let n: usize = parse(key, value)?;
                self.threads = (n > 0).then_some(n);
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "format" => self.format = parse(key, value)?,
            other => bail!("unknown configuration key `{other}`"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        let Sweep { start, end, steps } = self.sweep;
        for (name, v) in [("rho_start", start), ("rho_end", end)] {
            if !(0.0..1.0).contains(&v) {
                bail!("`{name}` must lie in [0, 1), got {v}");
            }
        }
        if steps < 2 {
            bail!("`rho_steps` must be >= 2, got {steps}");
        }
        if self.mc.k == 0 || self.mc.trials == 0 {
            bail!("`k` and `trials` must be positive");
        }
        if self.mc.rho_true.is_empty() || self.mc.rho_true.iter().any(|r| !(0.0..1.0).contains(r)) {
            bail!("`rho_true` must list values in [0, 1)");
        }
        if self.mc.schemes.is_empty() {
            bail!("`schemes` must name at least one scheme");
        }
        self.scaling.validate()?;
        Ok(())
    }

    /// Every setting in canonical form, for provenance records.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let sc = &self.scenario;
        let seg = &self.segment;
        vec![
            ("preset", self.preset.to_string()),
            ("L", sc.segments.to_string()),
            ("eta", num(sc.eta)),
            ("segment_index", sc.segment_index.to_string()),
            ("E", num(sc.probe_energy)),
            ("kappa_re", num(sc.kappa.re)),
            ("kappa_im", num(sc.kappa.im)),
            ("nu_abs2", num(sc.nu.norm_sqr())),
            ("n_th", num(sc.n_th)),
            ("tau_E", num(sc.tau_e)),
            ("n_E", num(sc.n_e)),
            ("convention", sc.convention.as_str().to_string()),
            ("rho_start", num(self.sweep.start)),
            ("rho_end", num(self.sweep.end)),
            ("rho_steps", self.sweep.steps.to_string()),
            (
                "dp_mean_includes_displacement",
                (self.threshold_mean == ThresholdMean::IncludesDisplacement).to_string(),
            ),
            ("p", num(self.scaling.p)),
            ("lambda", num(self.scaling.lambda)),
            ("k_probes", num(self.scaling.k)),
            ("C", num(self.scaling.capacity)),
            ("t_L", num(self.scaling.t_l)),
            (
                "schemes",
                self.mc.schemes.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
            ),
            (
                "rho_true",
                self.mc.rho_true.iter().map(|&r| num(r)).collect::<Vec<_>>().join(";"),
            ),
            ("k", self.mc.k.to_string()),
            ("trials", self.mc.trials.to_string()),
            ("seed", self.mc.seed.to_string()),
            ("g_tilde_re", num(seg.g_tilde.re)),
            ("g_tilde_im", num(seg.g_tilde.im)),
            ("Gamma", num(seg.gamma)),
            ("Omega", num(seg.omega)),
            ("Omega_B", num(seg.omega_b)),
            ("delta_z", num(seg.delta_z)),
            ("temperature", seg.temperature.map_or_else(|| "none".to_string(), num)),
            ("threads", self.threads.map_or_else(|| "auto".to_string(), |n| n.to_string())),
            ("default_kappa", num(DEFAULT_KAPPA)),
            ("default_nu_abs2", num(DEFAULT_NU_ABS2)),
        ]
    }
}

/// Splits `key=value`, trimming both sides.
pub fn split_pair(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| anyhow!("expected key=value, got `{s}`"))?;
    let k = k.trim();
    if k.is_empty() {
        bail!("empty key in `{s}`");
    }
    Ok((k.to_string(), v.trim().to_string()))
}

/// Parses a config file: one `key = value` per line, `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter_map(|(n, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then(|| split_pair(line).with_context(|| format!("line {}", n + 1)))
        })
        .collect()
}

pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config_text(&text).with_context(|| format!("in {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
        items.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn later_settings_win() {
        let cfg = RunConfig::from_pairs(&pairs(&[("E", "2"), ("E", "3.5")])).unwrap();
        assert_eq!(cfg.scenario.probe_energy, 3.5);
    }

    #[test]
    fn preset_applies_before_other_keys() {
        let cfg = RunConfig::from_pairs(&pairs(&[("n_E", "7"), ("preset", "estimation")])).unwrap();
        assert_eq!(cfg.scenario.probe_energy, 0.5);
        assert_eq!(cfg.scenario.n_e, 7.0);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(RunConfig::from_pairs(&pairs(&[("etaa", "0.9")])).is_err());
        assert!(RunConfig::from_pairs(&pairs(&[("rho_steps", "1")])).is_err());
        assert!(RunConfig::from_pairs(&pairs(&[("rho_end", "1.0")])).is_err());
        assert!(RunConfig::from_pairs(&pairs(&[("eta", "abc")])).is_err());
        assert!(RunConfig::from_pairs(&pairs(&[("schemes", "heterodyne,teleport")])).is_err());
    }

    #[test]
    fn config_text_with_comments() {
        let text = "# scenario\nE = 4  # probe\n\nschemes = heterodyne, adaptive_sld(0.2)\n";
        let cfg = RunConfig::from_pairs(&parse_config_text(text).unwrap()).unwrap();
        assert_eq!(cfg.scenario.probe_energy, 4.0);
        assert_eq!(cfg.mc.schemes.len(), 2);
        assert!(parse_config_text("no equals sign").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let cfg = RunConfig::from_pairs(&pairs(&[
            ("E", "0.1"),
            ("kappa_im", "-0.003"),
            ("schemes", "homodyne;sld_at_truth"),
            ("threads", "3"),
            ("temperature", "300"),
        ]))
        .unwrap();
        let again: Vec<(String, String)> = cfg
            .echo()
            .into_iter()
            .filter(|(k, _)| !k.starts_with("default_"))
            .filter(|(k, v)| !(*k == "threads" && v == "auto"))
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        assert_eq!(RunConfig::from_pairs(&again).unwrap(), cfg);
    }
}
