//! Estimating the tap strength ρ from the tapped output `S_{N(ρ)}(β(ρ))`:
//! quantum Fisher information, the SLD measurement, classical Fisher
//! information of concrete receivers, and Monte Carlo MLE variance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::attack::{AttackScenario, RhoFamily};
use crate::error::{invalid, Error, Result};
use crate::model::Mat2;
use crate::optimize::grid_then_golden_max;
use crate::parallel::map_ordered;
use crate::photon::{pnr_fixed, pnr_until};
use crate::Complex;

/// Upper end of the MLE search range.
pub const RHO_MAX: f64 = 1.0 - 1e-6;
/// Coarse grid used to seed each MLE.
pub const MLE_GRID_POINTS: usize = 64;
/// Golden-section tolerance of the MLE, in ρ.
pub const MLE_TOL: f64 = 1e-9;
/// Step of the central differences behind counting Fisher information.
pub const FD_STEP: f64 = 1e-5;
/// Tail mass ignored when tabulating photon-count distributions.
const PNR_TAIL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoDerivatives {
    /// `∂ρβ`.
    pub d_beta: Complex,
    /// `∂ρN`, constant in ρ.
    pub d_nbar: f64,
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(invalid("rho", format!("must lie in [0, 1), got {rho}")));
    }
    if 1.0 - rho < 1e-12 {
        return Err(Error::Divergence(format!("∂ρβ diverges as ρ → 1 (ρ = {rho})")));
    }
    Ok(())
}

pub fn rho_derivatives(sc: &AttackScenario, rho: f64) -> Result<RhoDerivatives> {
    check_rho(rho)?;
    let family = RhoFamily::new(sc)?;
    Ok(derivatives_in(&family, rho))
}

fn derivatives_in(family: &RhoFamily, rho: f64) -> RhoDerivatives {
    RhoDerivatives {
        d_beta: -family.beta_at(rho) / (2.0 * (1.0 - rho)),
        d_nbar: family.nbar_slope,
    }
}

/// QFI of `S_N(β)` along a curve with tangents `(∂β, ∂N)`:
/// `4|∂β|²/(2N+1) + (∂N)²/(N(N+1))`.
pub fn qfi_displaced_thermal(nbar: f64, d: &RhoDerivatives) -> f64 {
    let displacement = 4.0 * d.d_beta.norm_sqr() / (2.0 * nbar + 1.0);
    let noise = if d.d_nbar == 0.0 {
        0.0
    } else if nbar == 0.0 {
        f64::INFINITY
    } else {
        d.d_nbar * d.d_nbar / (nbar * (nbar + 1.0))
    };
    displacement + noise
}

/// Quantum Fisher information about ρ per probe.
pub fn qfi(sc: &AttackScenario, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let family = RhoFamily::new(sc)?;
    Ok(qfi_displaced_thermal(family.nbar_at(rho), &derivatives_in(&family, rho)))
}

/// Inputs of the single-mode Gaussian QFI formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianQfiInputs {
    pub cov: Mat2,
    pub d_cov: Mat2,
    pub purity: f64,
    pub d_purity: f64,
    pub d_disp: [f64; 2],
}

impl GaussianQfiInputs {
    /// Isotropic inputs of `S_N(β)`: `Σ = (N+½)I`, `P = 1/(2N+1)`,
    /// quadrature mean `√2 (Re β, Im β)`.
    pub fn isotropic(nbar: f64, d: &RhoDerivatives) -> Self {
        let s = std::f64::consts::SQRT_2;
        let purity = 1.0 / (2.0 * nbar + 1.0);
        Self {
            cov: Mat2::scalar(nbar + 0.5),
            d_cov: Mat2::scalar(d.d_nbar),
            purity,
            d_purity: -2.0 * d.d_nbar * purity * purity,
            d_disp: [s * d.d_beta.re, s * d.d_beta.im],
        }
    }
}

/// General single-mode Gaussian QFI
/// `½ tr[(Σ⁻¹Σ̇)²]/(1+P²) + 2Ṗ²/(1−P⁴) + ẋᵀΣ⁻¹ẋ`.
pub fn qfi_gaussian_general(inputs: &GaussianQfiInputs) -> Result<f64> {
    let inv = inputs
        .cov
        .inverse()
        .ok_or_else(|| Error::Numerical("covariance matrix is singular".into()))?;
    let p = inputs.purity;
    let dp = inputs.d_purity;
    let m = inv * inputs.d_cov;
    let cov_term = 0.5 * (m * m).trace() / (1.0 + p * p);
    let purity_term = if dp == 0.0 {
        0.0
    } else {
        let denom = 1.0 - p.powi(4);
        if denom <= 0.0 {
            return Err(Error::Divergence("pure state with changing purity".into()));
        }
        2.0 * dp * dp / denom
    };
    let disp_term = inv.quadratic_form(inputs.d_disp);
    Ok(cov_term + purity_term + disp_term)
}

/// Variance floor `1/(k F)` after `k` probes.
pub fn crb(k: u64, fisher: f64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "need at least one probe"));
    }
    if !(fisher > 0.0) {
        return Err(Error::InfeasibleDetection(format!(
            "Fisher information {fisher} leaves ρ unidentifiable"
        )));
    }
    Ok(1.0 / (k as f64 * fisher))
}

/// SLD of `S_N(β)` written as `A b† + A* b + (λ/2)(b†b − N)` with
/// `b = a − β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SldSpec {
    /// `A = 2∂ρβ/(2N+1)`.
    pub a_coeff: Complex,
    /// `λ = 2∂ρN/(N(N+1))`.
    pub lambda_coeff: f64,
}

impl SldSpec {
    /// The SLD has no number-like part, so its eigenbasis is a quadrature
    /// basis rather than displaced number states.
    pub fn is_degenerate(&self) -> bool {
        self.lambda_coeff == 0.0
    }

    /// Displacement of the number basis that diagonalises the SLD, relative
    /// to the state's own displacement: `(λ/2)(b + 2A/λ)†(b + 2A/λ)`
    /// gives `−2A/λ`.
    pub fn frame_offset(&self) -> Result<Complex> {
        if self.is_degenerate() {
            return Err(Error::DegeneratePovm);
        }
        Ok(-2.0 * self.a_coeff / self.lambda_coeff)
    }

    /// Absolute displacement `δ` of the optimal POVM `D(δ)|n⟩⟨n|D(δ)†`.
    pub fn povm_displacement(&self, beta: Complex) -> Result<Complex> {
        Ok(beta + self.frame_offset()?)
    }
}

fn sld_in(family: &RhoFamily, rho: f64) -> Result<SldSpec> {
    let nbar = family.nbar_at(rho);
    let d = derivatives_in(family, rho);
    let lambda_coeff = if d.d_nbar == 0.0 {
        0.0
    } else if nbar == 0.0 {
        return Err(Error::Divergence("SLD noise term diverges at N = 0".into()));
    } else {
        2.0 * d.d_nbar / (nbar * (nbar + 1.0))
    };
    Ok(SldSpec {
        a_coeff: 2.0 * d.d_beta / (2.0 * nbar + 1.0),
        lambda_coeff,
    })
}

pub fn sld_spec(sc: &AttackScenario, rho: f64) -> Result<SldSpec> {
    check_rho(rho)?;
    sld_in(&RhoFamily::new(sc)?, rho)
}

/// Receiver applied to each probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementScheme {
    Heterodyne,
    /// Homodyne of the quadrature along `∂ρβ`; the fallback when the SLD
    /// has no number-like part.
    Homodyne,
    /// Photon counting on the undisplaced output.
    PhotonCounting,
    /// The SLD POVM built at the true ρ.
    SldOptimalAtTruth,
    /// A heterodyne pilot on `pilot_fraction` of the probes, then the SLD
    /// POVM built at the pilot estimate on the rest.
    AdaptiveSld { pilot_fraction: f64 },
}

impl MeasurementScheme {
    pub const DEFAULT_PILOT_FRACTION: f64 = 0.1;

    pub fn validate(&self) -> Result<()> {
        if let MeasurementScheme::AdaptiveSld { pilot_fraction } = *self {
            if !(pilot_fraction > 0.0 && pilot_fraction < 1.0) {
                return Err(invalid(
                    "pilot_fraction",
                    format!("must lie in (0, 1), got {pilot_fraction}"),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Display for MeasurementScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementScheme::Heterodyne => write!(f, "heterodyne"),
            MeasurementScheme::Homodyne => write!(f, "homodyne"),
            MeasurementScheme::PhotonCounting => write!(f, "photon_counting"),
            MeasurementScheme::SldOptimalAtTruth => write!(f, "sld_at_truth"),
            MeasurementScheme::AdaptiveSld { pilot_fraction } => {
                write!(f, "adaptive_sld({pilot_fraction})")
            }
        }
    }
}

impl FromStr for MeasurementScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let scheme = match s.as_str() {
            "heterodyne" | "het" => MeasurementScheme::Heterodyne,
            "homodyne" | "hom" => MeasurementScheme::Homodyne,
            "photon_counting" | "counting" | "pnr" => MeasurementScheme::PhotonCounting,
            "sld_at_truth" | "sld" => MeasurementScheme::SldOptimalAtTruth,
            "adaptive_sld" | "adaptive" => MeasurementScheme::AdaptiveSld {
                pilot_fraction: Self::DEFAULT_PILOT_FRACTION,
            },
            other => {
                let inner = other
                    .strip_prefix("adaptive_sld(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| invalid("scheme", format!("unknown scheme `{other}`")))?;
                let pilot_fraction = inner
                    .parse::<f64>()
                    .map_err(|e| invalid("scheme", format!("bad pilot fraction `{inner}`: {e}")))?;
                MeasurementScheme::AdaptiveSld { pilot_fraction }
            }
        };
        scheme.validate()?;
        Ok(scheme)
    }
}

/// Heterodyne Fisher information per probe for the complex Gaussian outcome
/// `z ~ CN(β, N+1)`: `2|∂β|²/(N+1) + (∂N)²/(N+1)²`.
pub fn heterodyne_fisher(nbar: f64, d: &RhoDerivatives) -> f64 {
    let s = nbar + 1.0;
    2.0 * d.d_beta.norm_sqr() / s + d.d_nbar * d.d_nbar / (s * s)
}

/// Phase of the homodyne quadrature: the direction of `∂ρβ`, which is
/// fixed along the family.
fn homodyne_phase(family: &RhoFamily) -> Complex {
    let b = -family.beta_at(0.0);
    if b.norm() > 0.0 {
        b / b.norm()
    } else {
        Complex::new(1.0, 0.0)
    }
}

/// Mean and variance of the homodyne outcome `x = √2 Re(e^{−iφ} a)`.
fn homodyne_moments(family: &RhoFamily, phase: Complex, rho: f64) -> (f64, f64) {
    let mean = std::f64::consts::SQRT_2 * (phase.conj() * family.beta_at(rho)).re;
    (mean, state_nbar(family, rho) + 0.5)
}

/// Homodyne Fisher information per probe: `(∂x̄)²/v + (∂v)²/(2v²)` with
/// `v = N + ½`.
fn homodyne_fisher(family: &RhoFamily, rho: f64, d: &RhoDerivatives) -> f64 {
    let phase = homodyne_phase(family);
    let (_, v) = homodyne_moments(family, phase, rho);
    let d_mean = std::f64::consts::SQRT_2 * (phase.conj() * d.d_beta).re;
    d_mean * d_mean / v + d.d_nbar * d.d_nbar / (2.0 * v * v)
}

/// Fisher information of photon counting in the frame displaced by `frame`,
/// from central differences of the count distribution.
fn counting_fisher(family: &RhoFamily, rho: f64, frame: Complex) -> Result<f64> {
    let centre = family.state_at(rho);
    let probs = pnr_until(centre.nbar, centre.alpha - frame, PNR_TAIL, 0)?;
    let n_max = probs.len() - 1 + 10;
    let probs = pnr_fixed(centre.nbar, centre.alpha - frame, n_max);
    let lo = family.state_at(rho - FD_STEP);
    let hi = family.state_at(rho + FD_STEP);
    let p_lo = pnr_fixed(lo.nbar.max(0.0), lo.alpha - frame, n_max);
    let p_hi = pnr_fixed(hi.nbar.max(0.0), hi.alpha - frame, n_max);
    let scale = 1.0 / (2.0 * FD_STEP);
    Ok(probs
        .iter()
        .zip(p_lo.iter().zip(&p_hi))
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, (l, h))| {
            let dp = (h - l) * scale;
            dp * dp / p
        })
        .sum())
}

/// Classical Fisher information per probe of `scheme` at ρ.
///
/// For [`MeasurementScheme::AdaptiveSld`] this is the asymptotic mixture
/// `f·F_het + (1−f)·F_SLD`, i.e. assuming the pilot has converged.
pub fn classical_fisher_info(sc: &AttackScenario, rho: f64, scheme: MeasurementScheme) -> Result<f64> {
    check_rho(rho)?;
    scheme.validate()?;
    let family = RhoFamily::new(sc)?;
    let d = derivatives_in(&family, rho);
    match scheme {
        MeasurementScheme::Heterodyne => Ok(heterodyne_fisher(family.nbar_at(rho), &d)),
        MeasurementScheme::Homodyne => Ok(homodyne_fisher(&family, rho, &d)),
        MeasurementScheme::PhotonCounting => counting_fisher(&family, rho, Complex::new(0.0, 0.0)),
        MeasurementScheme::SldOptimalAtTruth => {
            let delta = sld_in(&family, rho)?.povm_displacement(family.beta_at(rho))?;
            counting_fisher(&family, rho, delta)
        }
        MeasurementScheme::AdaptiveSld { pilot_fraction } => {
            let het = heterodyne_fisher(family.nbar_at(rho), &d);
            let delta = sld_in(&family, rho)?.povm_displacement(family.beta_at(rho))?;
            let sld = counting_fisher(&family, rho, delta)?;
            Ok(pilot_fraction * het + (1.0 - pilot_fraction) * sld)
        }
    }
}

/// Sufficient statistics of heterodyne outcomes.
#[derive(Debug, Clone, Copy, Default)]
struct HeterodyneData {
    count: f64,
    sum: Complex,
    sum_abs2: f64,
}

impl HeterodyneData {
    fn push(&mut self, z: Complex) {
        self.count += 1.0;
        self.sum += z;
        self.sum_abs2 += z.norm_sqr();
    }

    fn log_likelihood(&self, family: &RhoFamily, rho: f64) -> f64 {
        if self.count == 0.0 {
            return 0.0;
        }
        let s = state_nbar(family, rho) + 1.0;
        let beta = family.beta_at(rho);
        let spread = self.sum_abs2 - 2.0 * (beta.conj() * self.sum).re + self.count * beta.norm_sqr();
        -self.count * (PI * s).ln() - spread / s
    }
}

/// Sufficient statistics of homodyne outcomes.
#[derive(Debug, Clone, Copy, Default)]
struct HomodyneData {
    count: f64,
    sum: f64,
    sum_sq: f64,
}

impl HomodyneData {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn log_likelihood(&self, family: &RhoFamily, phase: Complex, rho: f64) -> f64 {
        let (mean, v) = homodyne_moments(family, phase, rho);
        let spread = self.sum_sq - 2.0 * mean * self.sum + self.count * mean * mean;
        -0.5 * self.count * (2.0 * PI * v).ln() - spread / (2.0 * v)
    }
}

/// Histogram of photon counts taken in a fixed displaced frame.
#[derive(Debug, Clone)]
struct CountData {
    frame: Complex,
    counts: Vec<u64>,
}

impl CountData {
    fn new(frame: Complex) -> Self {
        Self {
            frame,
            counts: Vec::new(),
        }
    }

    fn push(&mut self, n: usize) {
        if n >= self.counts.len() {
            self.counts.resize(n + 1, 0);
        }
        self.counts[n] += 1;
    }

    fn log_likelihood(&self, family: &RhoFamily, rho: f64) -> f64 {
        if self.counts.is_empty() {
            return 0.0;
        }
        let probs = pnr_fixed(state_nbar(family, rho), family.beta_at(rho) - self.frame, self.counts.len() - 1);
        self.counts
            .iter()
            .zip(&probs)
            .filter(|(c, _)| **c > 0)
            .map(|(&c, &p)| if p > 0.0 { c as f64 * p.ln() } else { f64::NEG_INFINITY })
            .sum()
    }
}

fn state_nbar(family: &RhoFamily, rho: f64) -> f64 {
    family.nbar_at(rho).max(0.0)
}

/// Inverse-CDF sampler for photon counts.
#[derive(Debug, Clone)]
struct CountSampler {
    cdf: Vec<f64>,
}

impl CountSampler {
    fn new(nbar: f64, d: Complex) -> Result<Self> {
        let probs = pnr_until(nbar, d, PNR_TAIL, 0)?;
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self { cdf })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }
}

fn heterodyne_sample<R: Rng>(rng: &mut R, nbar: f64, beta: Complex) -> Complex {
    let sigma = (0.5 * (nbar + 1.0)).sqrt();
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    beta + Complex::new(sigma * x, sigma * y)
}

fn mle<F: Fn(f64) -> f64>(log_likelihood: F) -> Option<f64> {
    let best = grid_then_golden_max(log_likelihood, 0.0, RHO_MAX, MLE_GRID_POINTS, MLE_TOL);
    (best.value.is_finite() && best.arg.is_finite()).then_some(best.arg)
}

/// Settings of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub scheme: MeasurementScheme,
    pub rho_true: f64,
    /// Probes per experiment.
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Worker count; `None` uses the global pool. Results do not depend on it.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    /// Sample variance of the successful estimates.
    pub variance: f64,
    /// Standard error of `variance`.
    pub stderr: f64,
    pub mean: f64,
    /// Trials whose likelihood could not be maximised.
    pub failed_trials: usize,
    /// Per-trial estimates in trial order, `None` for failed trials.
    pub estimates: Vec<Option<f64>>,
}

/// Simulates `trials` experiments of `k` probes each at `rho_true` and
/// reports the spread of the maximum-likelihood estimates.
///
/// Trial `t` draws from its own ChaCha stream `(seed, t)`, so the result is
/// bit-identical for any worker count.
pub fn mc_estimator_variance(sc: &AttackScenario, settings: &McSettings) -> Result<McResult> {
    let McSettings {
        scheme,
        rho_true,
        k,
        trials,
        seed,
        threads,
    } = *settings;
    check_rho(rho_true)?;
    scheme.validate()?;
    if k < 10 {
        return Err(invalid("k", format!("need at least 10 probes, got {k}")));
    }
    if trials < 100 {
        return Err(invalid("trials", format!("need at least 100 trials, got {trials}")));
    }
    if threads == Some(0) {
        return Err(invalid("threads", "need at least one worker"));
    }
    let family = RhoFamily::new(sc)?;
    let truth = family.state_at(rho_true);

    // samplers shared by all trials
    let fixed_sampler = match scheme {
        MeasurementScheme::PhotonCounting => Some((Complex::new(0.0, 0.0), CountSampler::new(truth.nbar, truth.alpha)?)),
        MeasurementScheme::SldOptimalAtTruth => {
            let delta = sld_in(&family, rho_true)?.povm_displacement(truth.alpha)?;
            Some((delta, CountSampler::new(truth.nbar, truth.alpha - delta)?))
        }
        _ => None,
    };
    if let MeasurementScheme::AdaptiveSld { .. } = scheme {
        if family.nbar_slope == 0.0 {
            return Err(Error::DegeneratePovm);
        }
    }

    let trial_ids: Vec<u64> = (0..trials as u64).collect();
    let estimates: Vec<Option<f64>> = map_ordered(&trial_ids, threads, |&t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        run_trial(&family, scheme, k, rho_true, &truth, fixed_sampler.as_ref(), &mut rng)
    });

    let ok: Vec<f64> = estimates.iter().flatten().copied().collect();
    let failed_trials = estimates.len() - ok.len();
    let (mean, variance, stderr) = variance_with_stderr(&ok);
    Ok(McResult {
        variance,
        stderr,
        mean,
        failed_trials,
        estimates,
    })
}

fn run_trial(
    family: &RhoFamily,
    scheme: MeasurementScheme,
    k: usize,
    truth_rho: f64,
    truth: &crate::model::DisplacedThermalState,
    fixed_sampler: Option<&(Complex, CountSampler)>,
    rng: &mut ChaCha8Rng,
) -> Option<f64> {
    match scheme {
        MeasurementScheme::Heterodyne => {
            let mut data = HeterodyneData::default();
            for _ in 0..k {
                data.push(heterodyne_sample(rng, truth.nbar, truth.alpha));
            }
            mle(|r| data.log_likelihood(family, r))
        }
        MeasurementScheme::Homodyne => {
            let phase = homodyne_phase(family);
            let (mean, v) = homodyne_moments(family, phase, truth_rho);
            let sd = v.sqrt();
            let mut data = HomodyneData::default();
            for _ in 0..k {
                let g: f64 = rng.sample(StandardNormal);
                data.push(mean + sd * g);
            }
            mle(|r| data.log_likelihood(family, phase, r))
        }
        MeasurementScheme::PhotonCounting | MeasurementScheme::SldOptimalAtTruth => {
            let (frame, sampler) = fixed_sampler?;
            let mut data = CountData::new(*frame);
            for _ in 0..k {
                data.push(sampler.sample(rng));
            }
            mle(|r| data.log_likelihood(family, r))
        }
        MeasurementScheme::AdaptiveSld { pilot_fraction } => {
            let pilot = ((pilot_fraction * k as f64).round() as usize).clamp(1, k - 1);
            let mut het = HeterodyneData::default();
            for _ in 0..pilot {
                het.push(heterodyne_sample(rng, truth.nbar, truth.alpha));
            }
            let rho_pilot = mle(|r| het.log_likelihood(family, r))?;
            let delta = sld_in(family, rho_pilot)
                .and_then(|s| s.povm_displacement(family.beta_at(rho_pilot)))
                .ok()?;
            let sampler = CountSampler::new(truth.nbar, truth.alpha - delta).ok()?;
            let mut counts = CountData::new(delta);
            for _ in pilot..k {
                counts.push(sampler.sample(rng));
            }
            mle(|r| het.log_likelihood(family, r) + counts.log_likelihood(family, r))
        }
    }
}

/// Mean, unbiased variance and the standard error of that variance (from
/// the fourth central moment).
fn variance_with_stderr(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len();
    if n < 2 {
        return (xs.first().copied().unwrap_or(f64::NAN), f64::NAN, f64::NAN);
    }
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let variance = m2 * nf / (nf - 1.0);
    let var_of_var = (m4 - variance * variance * (nf - 3.0) / (nf - 1.0)) / nf;
    (mean, variance, var_of_var.max(0.0).sqrt())
}
