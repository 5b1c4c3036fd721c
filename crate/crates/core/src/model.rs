//! Single-mode Gaussian channels for fiber segments and their cascades.
//!
//! Quadratures follow `q = (a + a†)/√2`, `p = (a − a†)/(i√2)`, so the vacuum
//! covariance is `I/2` and a displacement `α` sits at `√2 (Re α, Im α)`.

use std::ops::{Add, Mul};

use crate::error::{invalid, Error, Result};
use crate::Complex;

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const K_B: f64 = 1.380_649e-23;

/// Absolute tolerance for symmetry, positivity and physicality checks.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Real 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [f64; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([1.0, 0.0, 0.0, 1.0]);
    pub const ZERO: Mat2 = Mat2([0.0; 4]);

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn scalar(s: f64) -> Self {
        Mat2([s, 0.0, 0.0, s])
    }

    /// `[[Re z, −Im z], [Im z, Re z]]`, the quadrature action of multiplying
    /// the mode amplitude by `z`.
    pub fn rotation_scaling(z: Complex) -> Self {
        Mat2([z.re, -z.im, z.im, z.re])
    }

    pub fn transpose(&self) -> Self {
        let [a, b, c, d] = self.0;
        Mat2([a, c, b, d])
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn scale(&self, s: f64) -> Self {
        Mat2(self.0.map(|v| v * s))
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [a, b, c, d] = self.0;
        Some(Mat2([d / det, -b / det, -c / det, a / det]))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let [a, b, c, d] = self.0;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: [f64; 2]) -> f64 {
        let mv = self.apply(v);
        v[0] * mv[0] + v[1] * mv[1]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.0[1] - self.0[2]).abs() <= tol
    }

    /// Positive semidefinite test for a symmetric matrix.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue_symmetric() >= -tol
    }

    fn min_eigenvalue_symmetric(&self) -> f64 {
        let [a, b, _, d] = self.0;
        let half_tr = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        half_tr - disc
    }

    /// Reads back `z` when the matrix has rotation-scaling form.
    pub fn as_rotation_scaling(&self, tol: f64) -> Option<Complex> {
        let [a, b, c, d] = self.0;
        if (a - d).abs() <= tol && (b + c).abs() <= tol {
            Some(Complex::new(0.5 * (a + d), 0.5 * (c - b)))
        } else {
            None
        }
    }

    /// Reads back `s` when the matrix is `s·I`.
    pub fn as_scalar(&self, tol: f64) -> Option<f64> {
        let [a, b, c, d] = self.0;
        if (a - d).abs() <= tol && b.abs() <= tol && c.abs() <= tol {
            Some(0.5 * (a + d))
        } else {
            None
        }
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a + e, b + f, c + g, d + h])
    }
}

/// Which photon-number bookkeeping maps a channel output to `S_n̄(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Convention {
    /// `n̄_out = y + |μ|² n̄_in`: the added-noise scalar is read as thermal
    /// occupation (reproduces the figure-level formulas).
    #[default]
    PaperLiteral,
    /// `n̄_out = V_out − 1/2` with `V_out = |μ|²(n̄_in + 1/2) + y`.
    Physical,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::PaperLiteral => "paper_literal",
            Convention::Physical => "physical",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper_literal" | "paperliteral" | "literal" => Ok(Convention::PaperLiteral),
            "physical" => Ok(Convention::Physical),
            other => Err(invalid("convention", format!("unknown convention `{other}`"))),
        }
    }
}

/// Displaced thermal state `S_n̄(α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacedThermalState {
    pub nbar: f64,
    pub alpha: Complex,
}

impl DisplacedThermalState {
    pub fn new(nbar: f64, alpha: Complex) -> Result<Self> {
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(invalid("nbar", format!("must be finite and >= 0, got {nbar}")));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(invalid("alpha", "must be finite"));
        }
        Ok(Self { nbar, alpha })
    }

    pub fn coherent(alpha: Complex) -> Self {
        Self { nbar: 0.0, alpha }
    }

    pub fn thermal(nbar: f64) -> Self {
        Self {
            nbar,
            alpha: Complex::new(0.0, 0.0),
        }
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.nbar + self.alpha.norm_sqr()
    }

    /// Quadrature covariance `(n̄ + 1/2) I`.
    pub fn covariance(&self) -> Mat2 {
        Mat2::scalar(self.nbar + 0.5)
    }

    /// Quadrature mean `√2 (Re α, Im α)`.
    pub fn quadrature_mean(&self) -> [f64; 2] {
        let s = std::f64::consts::SQRT_2;
        [s * self.alpha.re, s * self.alpha.im]
    }
}

/// Phase-insensitive single-mode Gaussian channel: `d → X d`,
/// `V → X V Xᵀ + Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannel {
    pub x: Mat2,
    pub y: Mat2,
}

impl GaussianChannel {
    pub fn new(x: Mat2, y: Mat2) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidInput("channel matrices must be finite".into()));
        }
        if !y.is_symmetric(PHYSICAL_TOL) {
            return Err(Error::InvalidInput("noise matrix Y must be symmetric".into()));
        }
        if !y.is_psd(PHYSICAL_TOL) {
            return Err(Error::InvalidInput(
                "noise matrix Y must be positive semidefinite".into(),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn identity() -> Self {
        Self {
            x: Mat2::IDENTITY,
            y: Mat2::ZERO,
        }
    }

    /// Rotation-scaling channel with amplitude gain `mu` and isotropic noise `y`.
    pub fn phase_insensitive(mu: Complex, y: f64) -> Result<Self> {
        Self::new(Mat2::rotation_scaling(mu), Mat2::scalar(y))
    }

    /// Pure attenuation: `X = √η I`, `Y = (1 − η)/2 I`.
    pub fn loss(eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Self::phase_insensitive(Complex::new(eta.sqrt(), 0.0), 0.5 * (1.0 - eta))
    }

    /// Beam splitter of transmissivity `tau` mixing in a thermal mode of
    /// occupation `n_env`.
    pub fn thermal_beam_splitter(tau: f64, n_env: f64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(invalid("tau", format!("must lie in (0, 1], got {tau}")));
        }
        if !(n_env >= 0.0 && n_env.is_finite()) {
            return Err(invalid("n_env", format!("must be >= 0, got {n_env}")));
        }
        Self::phase_insensitive(Complex::new(tau.sqrt(), 0.0), (1.0 - tau) * (n_env + 0.5))
    }

    /// Segment channel from the dimensionless SBS couplings:
    /// `μ = √η + κ`, `y = (n_th + 1/2)|ν|² + (1 − η)/2`.
    pub fn sbs_segment(eta: f64, kappa: Complex, nu: Complex, n_th: f64) -> Result<Self> {
        check_eta(eta)?;
        if !(n_th >= 0.0 && n_th.is_finite()) {
            return Err(invalid("n_th", format!("must be >= 0, got {n_th}")));
        }
        let mu = eta.sqrt() + kappa;
        let y = (n_th + 0.5) * nu.norm_sqr() + 0.5 * (1.0 - eta);
        Self::phase_insensitive(mu, y)
    }

    /// `(μ, y)` when `X` is rotation-scaling and `Y ∝ I`.
    pub fn scalar_form(&self) -> Option<(Complex, f64)> {
        let mu = self.x.as_rotation_scaling(PHYSICAL_TOL)?;
        let y = self.y.as_scalar(PHYSICAL_TOL)?;
        Some((mu, y))
    }

    pub fn max_abs_diff(&self, other: &GaussianChannel) -> f64 {
        self.x.max_abs_diff(&other.x).max(self.y.max_abs_diff(&other.y))
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(invalid("eta", format!("must lie in (0, 1], got {eta}")))
    }
}

/// Physical description of one fiber segment. Frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPhysical {
    /// Power transmissivity `e^{−α_s δz}`.
    pub eta: f64,
    /// Pump-enhanced coupling, phase-matching phase included.
    pub g_tilde: Complex,
    /// Phonon linewidth Γ.
    pub gamma: f64,
    /// Absolute probe frequency Ω.
    pub omega: f64,
    /// Local Brillouin resonance Ω_B.
    pub omega_b: f64,
    pub delta_z: f64,
    /// Phonon occupation.
    pub n_th: f64,
}

impl SegmentPhysical {
    pub fn validate(&self) -> Result<()> {
        check_eta(self.eta)?;
        if !(self.gamma > 0.0) {
            return Err(invalid("gamma", format!("must be > 0, got {}", self.gamma)));
        }
        if !(self.delta_z > 0.0) {
            return Err(invalid("delta_z", format!("must be > 0, got {}", self.delta_z)));
        }
        if !(self.n_th >= 0.0 && self.n_th.is_finite()) {
            return Err(invalid("n_th", format!("must be >= 0, got {}", self.n_th)));
        }
        if !(self.omega.is_finite() && self.omega_b.is_finite()) {
            return Err(invalid("omega", "frequencies must be finite"));
        }
        if !(self.g_tilde.re.is_finite() && self.g_tilde.im.is_finite()) {
            return Err(invalid("g_tilde", "must be finite"));
        }
        Ok(())
    }
}

/// Dimensionless per-segment couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentGain {
    pub mu: Complex,
    pub kappa: Complex,
    pub nu: Complex,
}

/// Local Brillouin susceptibility `1 / (Γ/2 + i(Ω − Ω_B))`.
pub fn susceptibility(omega: f64, omega_b: f64, gamma: f64) -> Result<Complex> {
    if !(gamma > 0.0) {
        return Err(invalid("gamma", format!("must be > 0, got {gamma}")));
    }
    Ok(Complex::new(0.5 * gamma, omega - omega_b).inv())
}

/// Bose–Einstein occupation of the acoustic mode at `temperature` (K).
pub fn bose_occupation(omega_b: f64, temperature: f64) -> Result<f64> {
    if !(omega_b > 0.0) {
        return Err(invalid("omega_b", format!("must be > 0, got {omega_b}")));
    }
    if !(temperature > 0.0) {
        return Err(invalid("temperature", format!("must be > 0, got {temperature}")));
    }
    Ok(occupation_from_ratio(HBAR * omega_b / (K_B * temperature)))
}

/// `1/(e^x − 1)` for `x = ħΩ/(k_B T) > 0`.
pub fn occupation_from_ratio(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

pub fn segment_gain_params(seg: &SegmentPhysical) -> Result<SegmentGain> {
    seg.validate()?;
    let chi = susceptibility(seg.omega, seg.omega_b, seg.gamma)?;
    let kappa = seg.g_tilde.norm_sqr() * chi * seg.delta_z;
    let nu = Complex::new(0.0, -1.0) * seg.g_tilde * seg.gamma.sqrt() * chi * seg.delta_z;
    let mu = seg.eta.sqrt() + kappa;
    Ok(SegmentGain { mu, kappa, nu })
}

pub fn segment_channel(seg: &SegmentPhysical) -> Result<GaussianChannel> {
    let gain = segment_gain_params(seg)?;
    GaussianChannel::sbs_segment(seg.eta, gain.kappa, gain.nu, seg.n_th)
}

/// Applies `first`, then `second`.
pub fn compose(second: &GaussianChannel, first: &GaussianChannel) -> GaussianChannel {
    let x = second.x * first.x;
    let y = second.x * first.y * second.x.transpose() + second.y;
    GaussianChannel { x, y }
}

/// Full-fiber channel together with its scalar summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cascade {
    /// Left fold of [`compose`] over the segments.
    pub channel: GaussianChannel,
    /// `Π μ_k`, present when every segment is phase-insensitive.
    pub mu_tot: Option<Complex>,
    /// `Σ_k (Π_{j>k} |μ_j|²) y_k`.
    pub y_tot: Option<f64>,
}

/// Cascade of segments; index 0 is the probe-input end.
pub fn cascade(segments: &[GaussianChannel]) -> Result<Cascade> {
    let (first, rest) = segments
        .split_first()
        .ok_or_else(|| Error::InvalidInput("cascade needs at least one segment".into()))?;
    let channel = rest.iter().fold(*first, |acc, seg| compose(seg, &acc));

    let scalars: Option<Vec<(Complex, f64)>> =
        segments.iter().map(GaussianChannel::scalar_form).collect();
    let (mu_tot, y_tot) = match scalars {
        Some(s) => {
            let mu_tot = s.iter().fold(Complex::new(1.0, 0.0), |acc, (mu, _)| mu * acc);
            // suffix products of |μ_j|², walked from the output end
            let mut weight = 1.0;
            let mut y_tot = 0.0;
            for (mu, y) in s.iter().rev() {
                y_tot += weight * y;
                weight *= mu.norm_sqr();
            }
            (Some(mu_tot), Some(y_tot))
        }
        None => (None, None),
    };
    Ok(Cascade {
        channel,
        mu_tot,
        y_tot,
    })
}

/// Pushes a displaced thermal state through a phase-insensitive channel.
pub fn apply_channel(
    channel: &GaussianChannel,
    input: &DisplacedThermalState,
    convention: Convention,
) -> Result<DisplacedThermalState> {
    let (mu, y) = channel.scalar_form().ok_or_else(|| {
        Error::InvalidInput("apply_channel needs a phase-insensitive channel".into())
    })?;
    let alpha = mu * input.alpha;
    let gain = mu.norm_sqr();
    let nbar = match convention {
        Convention::PaperLiteral => y + gain * input.nbar,
        Convention::Physical => {
            let variance = gain * (input.nbar + 0.5) + y;
            if variance < 0.5 - PHYSICAL_TOL {
                return Err(Error::NonPhysicalChannel { variance });
            }
            (variance - 0.5).max(0.0)
        }
    };
    Ok(DisplacedThermalState { nbar, alpha })
}
