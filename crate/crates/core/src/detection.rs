//! Error exponents for telling the tapped fiber from the clean one, and the
//! probe-budget scaling laws that follow from them.
//!
//! Every divergence takes the tapped state `S_N(β)` as its first argument and
//! the clean state `S_M(α)` as its second, so the Stein exponent is
//! `D(S_N(β) ‖ S_M(α))`. All exponents are in nats per probe.

use std::f64::consts::PI;

use crate::attack::{clean_output, disturbed_output, AttackScenario};
use crate::error::{invalid, Error, Result};
use crate::model::{Convention, DisplacedThermalState};
use crate::optimize::grid_then_golden_max;
use crate::parallel::map_ordered;
use crate::Complex;

/// Left end of the tilt-parameter search for the photon-threshold exponent.
pub const TILT_MIN: f64 = -40.0;
/// Coarse grid size for the tilt search.
pub const TILT_GRID_POINTS: usize = 2001;
/// Golden-section stopping width in the tilt parameter.
pub const TILT_TOL: f64 = 1e-12;

/// `(x+1) ln(x+1) − x ln x`, the entropy of a thermal state with mean
/// photon number `x`.
pub fn g_entropy(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", format!("must be >= 0, got {x}")));
    }
    Ok(g_unchecked(x))
}

fn g_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (x + 1.0) * x.ln_1p() - x * x.ln()
    }
}

/// `ln((M+1)/M)`, infinite at `M = 0`.
fn log_odds(m: f64) -> f64 {
    if m == 0.0 {
        f64::INFINITY
    } else {
        (1.0 / m).ln_1p()
    }
}

/// Quantum relative entropy `D(S_N(β) ‖ S_M(α))`.
///
/// Infinite when the clean state is pure (`M = 0`) and the states differ.
pub fn relative_entropy(numerator: &DisplacedThermalState, denominator: &DisplacedThermalState) -> f64 {
    let n = numerator.nbar;
    let m = denominator.nbar;
    let gap = (numerator.alpha - denominator.alpha).norm_sqr();
    if n == m && gap == 0.0 {
        return 0.0;
    }
    if m == 0.0 {
        return f64::INFINITY;
    }
    -g_unchecked(n) + m.ln_1p() + log_odds(m) * (n + gap)
}

/// Quantum Stein exponent of the scenario, via the constructed states.
pub fn stein_exponent(sc: &AttackScenario) -> Result<f64> {
    Ok(relative_entropy(&disturbed_output(sc)?, &clean_output(sc)?))
}

/// Stein exponent evaluated from the substituted closed form, with the
/// displacement gap written as `η^{L−1}|√τ_E − 1|²|√η + κ_i|² E`.
///
/// Independent of [`stein_exponent`] for the literal convention: `M` and `N`
/// are recomputed inline from the scenario parameters.
pub fn stein_exponent_expanded(sc: &AttackScenario) -> Result<f64> {
    sc.validate()?;
    let (m, n) = match sc.convention {
        Convention::PaperLiteral => {
            let l = sc.segments as i32;
            let i = sc.segment_index as i32;
            let base = (1.0 - sc.eta.powi(l)) / 2.0;
            let weight = sc.eta.powi(l - i);
            let sbs = (sc.n_th + 0.5) * sc.nu.norm_sqr();
            let m = base + weight * sbs;
            let n = base + weight * (sc.tau_e * sbs + (1.0 - sc.tau_e) * (sc.n_e + 0.5));
            (m, n)
        }
        Convention::Physical => (clean_output(sc)?.nbar, disturbed_output(sc)?.nbar),
    };
    let l = sc.segments as i32;
    let amp = Complex::new(sc.eta.sqrt(), 0.0) + sc.kappa;
    let gap = sc.eta.powi(l - 1) * (sc.tau_e.sqrt() - 1.0).powi(2) * amp.norm_sqr() * sc.probe_energy;
    if m == 0.0 {
        return Ok(if n == 0.0 && gap == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(-g_unchecked(n) + (m + 1.0).ln() + ((m + 1.0) / m).ln() * (n + gap))
}

/// `D(S_M(α) ‖ S_N(β))`, the direction entering the false-alarm security
/// condition.
pub fn reverse_stein_exponent(sc: &AttackScenario) -> Result<f64> {
    Ok(relative_entropy(&clean_output(sc)?, &disturbed_output(sc)?))
}

/// Leading-order Stein exponent for a weak tap:
/// `(ρ²/4) ln((M+1)/M) η^{L−1}|√η+κ_i|² E`.
pub fn weak_attack_exponent(sc: &AttackScenario, rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(invalid("rho", format!("must lie in [0, 1), got {rho}")));
    }
    let strength = weak_strength(sc)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    Ok(0.25 * rho * rho * strength)
}

/// `ln((M+1)/M)·η^{L−1}|√η+κ_i|²E`, the common denominator of the scaling
/// laws.
fn weak_strength(sc: &AttackScenario) -> Result<f64> {
    let m = clean_output(sc)?.nbar;
    let energy = sc.received_energy();
    if energy == 0.0 {
        return Ok(0.0);
    }
    Ok(log_odds(m) * energy)
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must lie in (0, 1), got {p}")))
    }
}

/// Smallest tap strength detectable with miss probability `p` after `k`
/// probes, to leading order.
pub fn rho_min(sc: &AttackScenario, p: f64, k: f64) -> Result<f64> {
    check_probability("p", p)?;
    if !(k >= 1.0) {
        return Err(invalid("k", format!("must be >= 1, got {k}")));
    }
    let strength = weak_strength(sc)?;
    if strength == 0.0 {
        return Err(Error::InfeasibleDetection(
            "no received probe energy, a tap leaves no displacement signature".into(),
        ));
    }
    Ok(2.0 * ((1.0 / p).ln() / (k * strength)).sqrt())
}

/// Probes needed for security parameter `lambda` against a tap of
/// strength `rho`.
pub fn k_min(sc: &AttackScenario, lambda: f64, rho: f64) -> Result<f64> {
    check_probability("lambda", lambda)?;
    if !(0.0..1.0).contains(&rho) {
        return Err(invalid("rho", format!("must lie in [0, 1), got {rho}")));
    }
    if rho == 0.0 {
        return Err(Error::InfeasibleDetection("a zero-strength tap is undetectable".into()));
    }
    let strength = weak_strength(sc)?;
    if strength == 0.0 {
        return Err(Error::InfeasibleDetection(
            "no received probe energy, a tap leaves no displacement signature".into(),
        ));
    }
    Ok(4.0 * (1.0 / lambda).ln() / (rho * rho * strength))
}

/// Operating point for the scan-time and leaked-data estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingInputs {
    /// Target miss probability.
    pub p: f64,
    /// Security parameter.
    pub lambda: f64,
    /// Probe count.
    pub k: f64,
    /// Line capacity, bits/s.
    pub capacity: f64,
    /// Single-pass time of flight, s.
    pub t_l: f64,
}

impl ScalingInputs {
    pub fn validate(&self) -> Result<()> {
        check_probability("p", self.p)?;
        check_probability("lambda", self.lambda)?;
        if !(self.k >= 1.0) {
            return Err(invalid("k", format!("must be >= 1, got {}", self.k)));
        }
        if !(self.capacity >= 0.0) {
            return Err(invalid("C", format!("must be >= 0, got {}", self.capacity)));
        }
        if !(self.t_l >= 0.0) {
            return Err(invalid("t_L", format!("must be >= 0, got {}", self.t_l)));
        }
        Ok(())
    }
}

/// Data an eavesdropper can copy while the `k_min` probes run:
/// `C · t_L · k_min(λ, ρ)`.
pub fn stolen_bits(sc: &AttackScenario, inputs: &ScalingInputs, rho: f64) -> Result<f64> {
    inputs.validate()?;
    let k = k_min(sc, inputs.lambda, rho)?;
    Ok(inputs.capacity * inputs.t_l * k)
}

/// Mean count used as the threshold in the photon-counting test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdMean {
    /// The clean thermal parameter `M`, as written.
    #[default]
    Thermal,
    /// `M + |α|²`, the full clean mean photon number.
    IncludesDisplacement,
}

/// Objective of the photon-threshold exponent at tilt `s ≤ 0`.
pub fn threshold_objective(threshold: f64, n: f64, gap: f64, s: f64) -> f64 {
    let es = s.exp();
    let denom = n + 1.0 - n * es;
    s * threshold + denom.ln() + gap * (1.0 - es) / denom
}

/// Photon-threshold exponent
/// `sup_{s≤0} [sM + ln(N+1−Ne^s) + Δ(1−e^s)/(N+1−Ne^s)]`.
pub fn photon_threshold_exponent(
    clean: &DisplacedThermalState,
    disturbed: &DisplacedThermalState,
    mean: ThresholdMean,
) -> f64 {
    let threshold = match mean {
        ThresholdMean::Thermal => clean.nbar,
        ThresholdMean::IncludesDisplacement => clean.mean_photon_number(),
    };
    let n = disturbed.nbar;
    let gap = (disturbed.alpha - clean.alpha).norm_sqr();
    if n == threshold && gap == 0.0 {
        return 0.0;
    }
    let best = grid_then_golden_max(
        |s| threshold_objective(threshold, n, gap, s),
        TILT_MIN,
        0.0,
        TILT_GRID_POINTS,
        TILT_TOL,
    );
    best.value.max(0.0)
}

/// Heterodyne outcome density `q(z | n̄, γ)`.
pub fn heterodyne_pdf(z: Complex, state: &DisplacedThermalState) -> f64 {
    let s = state.nbar + 1.0;
    (-(z - state.alpha).norm_sqr() / s).exp() / (PI * s)
}

/// Classical relative entropy between the heterodyne outcome densities.
pub fn heterodyne_exponent(clean: &DisplacedThermalState, disturbed: &DisplacedThermalState) -> f64 {
    let m1 = clean.nbar + 1.0;
    let n1 = disturbed.nbar + 1.0;
    let gap = (disturbed.alpha - clean.alpha).norm_sqr();
    // ln((M+1)/(N+1)) + (N+1)/(M+1) − 1 = t − ln(1 + t), t = (N − M)/(M + 1)
    let t = (disturbed.nbar - clean.nbar) / m1;
    debug_assert!(n1 > 0.0);
    (t - t.ln_1p()) + gap / m1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentTriple {
    pub d_quantum: f64,
    pub d_photon: f64,
    pub d_heterodyne: f64,
}

impl ExponentTriple {
    /// `D_P / D`, zero when `D = 0`.
    pub fn photon_ratio(&self) -> f64 {
        ratio(self.d_photon, self.d_quantum)
    }

    /// `D_H / D`, zero when `D = 0`.
    pub fn heterodyne_ratio(&self) -> f64 {
        ratio(self.d_heterodyne, self.d_quantum)
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn exponents(sc: &AttackScenario, mean: ThresholdMean) -> Result<ExponentTriple> {
    let clean = clean_output(sc)?;
    let dist = disturbed_output(sc)?;
    Ok(ExponentTriple {
        d_quantum: relative_entropy(&dist, &clean),
        d_photon: photon_threshold_exponent(&clean, &dist, mean),
        d_heterodyne: heterodyne_exponent(&clean, &dist),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub rho: f64,
    pub exponents: ExponentTriple,
    /// `|β − α|²`.
    pub delta: f64,
    pub clean: DisplacedThermalState,
    pub disturbed: DisplacedThermalState,
}

/// Exponent triple at each attack strength in `rho_grid`, in grid order.
pub fn exponent_sweep(sc: &AttackScenario, rho_grid: &[f64], mean: ThresholdMean) -> Result<Vec<SweepRow>> {
    for &rho in rho_grid {
        if !(0.0..1.0).contains(&rho) {
            return Err(invalid("rho", format!("grid values must lie in [0, 1), got {rho}")));
        }
    }
    map_ordered(rho_grid, None, |&rho| {
        let s = sc.with_rho(rho);
        let clean = clean_output(&s)?;
        let disturbed = disturbed_output(&s)?;
        Ok(SweepRow {
            rho,
            exponents: exponents(&s, mean)?,
            delta: (disturbed.alpha - clean.alpha).norm_sqr(),
            clean,
            disturbed,
        })
    })
    .into_iter()
    .collect()
}

/// `n` equally spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => (0..n)
            .map(|j| {
                if j + 1 == n {
                    end
                } else {
                    start + (end - start) * j as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
