//! Clean and tapped output states of a uniformly lossy fiber whose segment
//! `i` is probed by the Brillouin pump.
//!
//! The tap is a beam splitter of transmissivity `τ_E` acting right after the
//! SBS interaction in the probed segment; `ρ = 1 − τ_E` is the attack
//! strength used throughout the crate.

use crate::error::{invalid, Error, Result};
use crate::model::{
    segment_gain_params, Convention, DisplacedThermalState, GaussianChannel, SegmentPhysical,
    PHYSICAL_TOL,
};
use crate::Complex;

/// Default SBS gain at the probed segment (on resonance, real).
pub const DEFAULT_KAPPA: f64 = 0.02;
/// Default `|ν_i|²` at the probed segment.
pub const DEFAULT_NU_ABS2: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackScenario {
    /// Number of segments `L`.
    pub segments: u32,
    /// Uniform per-segment power transmissivity.
    pub eta: f64,
    /// Probed segment, 1-based from the probe-input end.
    pub segment_index: u32,
    /// Mean photon number of the coherent probe (`α_in = √E`).
    pub probe_energy: f64,
    pub kappa: Complex,
    pub nu: Complex,
    pub n_th: f64,
    /// Tap transmissivity `τ_E`.
    pub tau_e: f64,
    /// Thermal occupation injected by the tap.
    pub n_e: f64,
    pub convention: Convention,
}

impl AttackScenario {
    /// Exponent-figure setting: η = 0.98, L = 100, i = 50, E = 5, n_th = 1,
    /// n_E = 0.5, with the documented κ_i, ν_i defaults and no tap.
    pub fn exponent_figure() -> Self {
        Self {
            segments: 100,
            eta: 0.98,
            segment_index: 50,
            probe_energy: 5.0,
            kappa: Complex::new(DEFAULT_KAPPA, 0.0),
            nu: Complex::new(DEFAULT_NU_ABS2.sqrt(), 0.0),
            n_th: 1.0,
            tau_e: 1.0,
            n_e: 0.5,
            convention: Convention::PaperLiteral,
        }
    }

    /// Estimation-figure setting: as [`Self::exponent_figure`] with E = 0.5,
    /// n_E = 2.
    pub fn estimation_figure() -> Self {
        Self {
            probe_energy: 0.5,
            n_e: 2.0,
            ..Self::exponent_figure()
        }
    }

    /// Takes κ_i and ν_i from a physical segment description (its `eta`,
    /// `n_th` replace the scenario's).
    pub fn with_segment(mut self, seg: &SegmentPhysical) -> Result<Self> {
        let gain = segment_gain_params(seg)?;
        self.kappa = gain.kappa;
        self.nu = gain.nu;
        self.eta = seg.eta;
        self.n_th = seg.n_th;
        Ok(self)
    }

    pub fn rho(&self) -> f64 {
        1.0 - self.tau_e
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.tau_e = 1.0 - rho;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments == 0 {
            return Err(invalid("L", "need at least one segment"));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(invalid("eta", format!("must lie in (0, 1], got {}", self.eta)));
        }
        if self.segment_index == 0 || self.segment_index > self.segments {
            return Err(invalid(
                "segment_index",
                format!("must lie in [1, {}], got {}", self.segments, self.segment_index),
            ));
        }
        if !(self.probe_energy >= 0.0 && self.probe_energy.is_finite()) {
            return Err(invalid("E", format!("must be >= 0, got {}", self.probe_energy)));
        }
        for (name, z) in [("kappa", self.kappa), ("nu", self.nu)] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(invalid(name, "must be finite"));
            }
        }
        if !(self.n_th >= 0.0 && self.n_th.is_finite()) {
            return Err(invalid("n_th", format!("must be >= 0, got {}", self.n_th)));
        }
        if !(self.tau_e > 0.0 && self.tau_e <= 1.0) {
            return Err(invalid("tau_E", format!("must lie in (0, 1], got {}", self.tau_e)));
        }
        if !(self.n_e >= 0.0 && self.n_e.is_finite()) {
            return Err(invalid("n_E", format!("must be >= 0, got {}", self.n_e)));
        }
        Ok(())
    }

    fn len(&self) -> i32 {
        self.segments as i32
    }

    fn index(&self) -> i32 {
        self.segment_index as i32
    }

    /// `η^{L−i}`: loss seen by noise injected at the probed segment.
    pub fn downstream_loss(&self) -> f64 {
        self.eta.powi(self.len() - self.index())
    }

    /// `(1 − η^L)/2`.
    pub fn loss_noise(&self) -> f64 {
        0.5 * (1.0 - self.eta.powi(self.len()))
    }

    /// `η^{(L−1)/2}(√η + κ_i)`: end-to-end amplitude gain of the clean fiber.
    pub fn clean_gain(&self) -> Complex {
        self.eta.powf(0.5 * (self.len() - 1) as f64) * (self.eta.sqrt() + self.kappa)
    }

    /// `η^{L−1}|√η + κ_i|² E`: received probe energy, clean.
    pub fn received_energy(&self) -> f64 {
        self.clean_gain().norm_sqr() * self.probe_energy
    }

    /// Noise the probed segment adds above vacuum,
    /// `y − (1 − |μ_i|²)/2 = (n_th + ½)|ν_i|² + √η Re κ_i + |κ_i|²/2`.
    ///
    /// Written without the `η` terms that cancel, so pure-loss segments
    /// contribute exactly zero.
    pub fn excess_noise(&self) -> f64 {
        (self.n_th + 0.5) * self.nu.norm_sqr() + self.eta.sqrt() * self.kappa.re + 0.5 * self.kappa.norm_sqr()
    }

    /// Thermal occupation right after the probed segment under the physical
    /// convention. Upstream segments are quantum-limited attenuators and
    /// leave the coherent probe pure.
    fn physical_occupation_at_probe(&self) -> Result<f64> {
        let eps = self.excess_noise();
        if eps < -PHYSICAL_TOL {
            return Err(Error::NonPhysicalChannel { variance: eps + 0.5 });
        }
        Ok(eps.max(0.0))
    }

    #[cfg(test)]
    fn probe(&self) -> DisplacedThermalState {
        DisplacedThermalState::coherent(Complex::new(self.probe_energy.sqrt(), 0.0))
    }

    /// Segment channels of the clean fiber, probe-input end first.
    pub fn clean_channels(&self) -> Result<Vec<GaussianChannel>> {
        let loss = GaussianChannel::loss(self.eta)?;
        let probed = GaussianChannel::sbs_segment(self.eta, self.kappa, self.nu, self.n_th)?;
        let mut chans = vec![loss; self.segments as usize];
        chans[self.segment_index as usize - 1] = probed;
        Ok(chans)
    }

    /// Clean channels with the tap inserted right after the probed segment.
    pub fn disturbed_channels(&self) -> Result<Vec<GaussianChannel>> {
        let mut chans = self.clean_channels()?;
        let tap = GaussianChannel::thermal_beam_splitter(self.tau_e, self.n_e)?;
        chans.insert(self.segment_index as usize, tap);
        Ok(chans)
    }
}

/// `S_O(γ)` for a pump-free fiber: `O = (1 − η^L)/2`, `γ = η^{L/2}√E`.
pub fn pure_loss_output(segments: u32, eta: f64, probe_energy: f64) -> Result<DisplacedThermalState> {
    if segments == 0 {
        return Err(invalid("L", "need at least one segment"));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid("eta", format!("must lie in (0, 1], got {eta}")));
    }
    if !(probe_energy >= 0.0) {
        return Err(invalid("E", format!("must be >= 0, got {probe_energy}")));
    }
    let l = segments as i32;
    DisplacedThermalState::new(
        0.5 * (1.0 - eta.powi(l)),
        Complex::new(eta.powf(0.5 * l as f64) * probe_energy.sqrt(), 0.0),
    )
}

/// Output `S_M(α)` with the pump on segment `i` and no tap.
pub fn clean_output(sc: &AttackScenario) -> Result<DisplacedThermalState> {
    sc.validate()?;
    match sc.convention {
        Convention::PaperLiteral => {
            let m = sc.loss_noise() + sc.downstream_loss() * (sc.n_th + 0.5) * sc.nu.norm_sqr();
            let alpha = sc.clean_gain() * sc.probe_energy.sqrt();
            DisplacedThermalState::new(m, alpha)
        }
        Convention::Physical => {
            // excess noise above vacuum attenuates like photons
            let m = sc.downstream_loss() * sc.physical_occupation_at_probe()?;
            DisplacedThermalState::new(m, sc.clean_gain() * sc.probe_energy.sqrt())
        }
    }
}

/// Output `S_N(β)` with the tap active.
pub fn disturbed_output(sc: &AttackScenario) -> Result<DisplacedThermalState> {
    sc.validate()?;
    match sc.convention {
        Convention::PaperLiteral => {
            let tau = sc.tau_e;
            let injected = tau * (sc.n_th + 0.5) * sc.nu.norm_sqr() + (1.0 - tau) * (sc.n_e + 0.5);
            let n = sc.loss_noise() + sc.downstream_loss() * injected;
            let beta = tau.sqrt() * sc.clean_gain() * sc.probe_energy.sqrt();
            DisplacedThermalState::new(n, beta)
        }
        Convention::Physical => {
            let tau = sc.tau_e;
            let tapped = tau * sc.physical_occupation_at_probe()? + (1.0 - tau) * sc.n_e;
            let beta = tau.sqrt() * sc.clean_gain() * sc.probe_energy.sqrt();
            DisplacedThermalState::new(sc.downstream_loss() * tapped, beta)
        }
    }
}

/// `Δ = |β − α|² = η^{L−1}(√τ_E − 1)²|√η + κ_i|² E`.
pub fn displacement_gap(sc: &AttackScenario) -> Result<f64> {
    sc.validate()?;
    let shrink = sc.tau_e.sqrt() - 1.0;
    Ok(shrink * shrink * sc.received_energy())
}

/// Disturbed output as a function of attack strength:
/// `N(ρ) = N₀ + ρ·∂ρN` and `β(ρ) = √(1 − ρ)·α`.
///
/// Both conventions are affine in ρ for the thermal parameter, so the
/// family is fixed by the clean state and one slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoFamily {
    pub clean: DisplacedThermalState,
    pub nbar_slope: f64,
}

impl RhoFamily {
    pub fn new(sc: &AttackScenario) -> Result<Self> {
        let base = sc.with_rho(0.0);
        let clean = clean_output(&base)?;
        let nbar_slope = match sc.convention {
            Convention::PaperLiteral => base.downstream_loss() * ((sc.n_e + 0.5) - (sc.n_th + 0.5) * sc.nu.norm_sqr()),
            Convention::Physical => base.downstream_loss() * (sc.n_e - base.physical_occupation_at_probe()?),
        };
        Ok(Self { clean, nbar_slope })
    }

    pub fn nbar_at(&self, rho: f64) -> f64 {
        self.clean.nbar + rho * self.nbar_slope
    }

    pub fn beta_at(&self, rho: f64) -> Complex {
        (1.0 - rho).sqrt() * self.clean.alpha
    }

    /// State at `rho` without range checks; usable slightly outside [0, 1)
    /// for finite differences.
    pub fn state_at(&self, rho: f64) -> DisplacedThermalState {
        DisplacedThermalState {
            nbar: self.nbar_at(rho),
            alpha: self.beta_at(rho),
        }
    }
}
