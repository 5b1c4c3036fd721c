//! Truncated number-basis numerics, used as an independent check on the
//! closed-form Gaussian expressions.
//!
//! States are dense `(cutoff+1)²` complex matrices. A displaced thermal state
//! is built as `U diag(p) U†`, with `U` the exponential of the truncated
//! generator `αa† − α*a`, so `U` is exactly unitary in the truncated space
//! and the construction doubles as a spectral decomposition. Matrix
//! logarithms and square roots of such states are formed from that
//! decomposition; eigenvalues far below machine precision cannot be
//! recovered from the dense matrix itself.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::Complex;

/// Largest tolerated trace deficit of a built state.
pub const TRACE_DEFICIT_TOL: f64 = 1e-8;
/// Eigenvalue floor below which a numerically diagonalised state is treated
/// as rank deficient.
pub const EIGEN_FLOOR: f64 = 1e-14;
/// Probability mass outside the support of `σ` that makes `D(ρ‖σ)` infinite.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Wrapped matrices with eigenvalues below `−NEGATIVE_EIGEN_TOL` are rejected.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-8;
/// Cutoff increment of the convergence loops.
pub const CUTOFF_STEP: usize = 20;
/// Largest cutoff the convergence loops will try.
pub const MAX_CUTOFF: usize = 400;

type CMatrix = DMatrix<Complex>;

/// Spectral data `ρ = U diag(w) U†`.
#[derive(Debug, Clone)]
struct Spectrum {
    vectors: CMatrix,
    weights: Vec<f64>,
    /// `ln w`, exact where known (−∞ on zero weights).
    log_weights: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    cutoff: usize,
    matrix: CMatrix,
    spectrum: Option<Spectrum>,
}

/// Cutoff heuristic `⌈10(n̄ + |α|² + 1)⌉ + 30`.
pub fn recommended_cutoff(nbar: f64, alpha: Complex) -> usize {
    (10.0 * (nbar + alpha.norm_sqr() + 1.0)).ceil() as usize + 30
}

fn c(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

/// Truncated annihilation operator on levels `0..=cutoff`.
pub fn annihilation(cutoff: usize) -> CMatrix {
    let dim = cutoff + 1;
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    a
}

/// `exp(αa† − α*a)` in the truncated space, through the Hermitian matrix
/// `i(αa† − α*a)`.
pub fn displacement_operator(alpha: Complex, cutoff: usize) -> CMatrix {
    let a = annihilation(cutoff);
    let generator = a.adjoint() * alpha - &a * alpha.conj();
    let hermitian = &generator * Complex::new(0.0, 1.0);
    let hermitian = (&hermitian + hermitian.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(hermitian);
    let phases = DVector::from_iterator(
        cutoff + 1,
        eig.eigenvalues.iter().map(|&l| Complex::new(0.0, -l).exp()),
    );
    let v = &eig.eigenvectors;
    v * CMatrix::from_diagonal(&phases) * v.adjoint()
}

fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(sym);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

impl FockDensityMatrix {
    /// Displaced thermal state `D(α) τ_n̄ D(α)†` on levels `0..=cutoff`.
    pub fn displaced_thermal(nbar: f64, alpha: Complex, cutoff: usize) -> Result<Self> {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(invalid("nbar", format!("must be >= 0, got {nbar}")));
        }
        let needed = 10.0 * (nbar + alpha.norm_sqr() + 1.0);
        if (cutoff as f64) < needed {
            return Err(invalid(
                "cutoff",
                format!("{cutoff} is below 10(n̄ + |α|² + 1) = {needed:.1}"),
            ));
        }
        let dim = cutoff + 1;
        let (weights, log_weights): (Vec<f64>, Vec<f64>) = (0..dim)
            .map(|n| {
                if nbar == 0.0 {
                    if n == 0 {
                        (1.0, 0.0)
                    } else {
                        (0.0, f64::NEG_INFINITY)
                    }
                } else {
                    let log_w = n as f64 * (nbar / (nbar + 1.0)).ln() - nbar.ln_1p();
                    (log_w.exp(), log_w)
                }
            })
            .unzip();
        let deficit = 1.0 - weights.iter().sum::<f64>();
        if deficit > TRACE_DEFICIT_TOL {
            return Err(Error::TailMass {
                tail: deficit,
                tolerance: TRACE_DEFICIT_TOL,
            });
        }
        let vectors = displacement_operator(alpha, cutoff);
        let diag = DVector::from_iterator(dim, weights.iter().map(|&w| c(w)));
        let matrix = &vectors * CMatrix::from_diagonal(&diag) * vectors.adjoint();
        Ok(Self {
            cutoff,
            matrix,
            spectrum: Some(Spectrum {
                vectors,
                weights,
                log_weights,
            }),
        })
    }

    /// Number state `|n⟩⟨n|`.
    pub fn number_state(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(invalid("n", format!("{n} exceeds cutoff {cutoff}")));
        }
        let mut m = CMatrix::zeros(cutoff + 1, cutoff + 1);
        m[(n, n)] = c(1.0);
        Self::from_matrix(m)
    }

    /// Wraps an arbitrary density matrix, checking Hermiticity, trace and
    /// positivity.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidInput("density matrix must be square and non-empty".into()));
        }
        let herm_err = (&matrix - matrix.adjoint()).iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        if herm_err > 1e-12 {
            return Err(Error::InvalidInput(format!("matrix not Hermitian (error {herm_err:e})")));
        }
        let tr = matrix.trace().re;
        if !(tr >= 1.0 - TRACE_DEFICIT_TOL && tr <= 1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!("trace {tr} out of range")));
        }
        let (evals, _) = hermitian_eigen(&matrix);
        if evals.iter().any(|&e| e < -NEGATIVE_EIGEN_TOL) {
            return Err(Error::InvalidInput("matrix has negative eigenvalues".into()));
        }
        Ok(Self {
            cutoff: matrix.nrows() - 1,
            matrix,
            spectrum: None,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Number-basis populations `⟨n|ρ|n⟩`.
    pub fn photon_distribution(&self) -> Vec<f64> {
        (0..=self.cutoff).map(|n| self.matrix[(n, n)].re).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.photon_distribution()
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    fn spectrum(&self) -> Spectrum {
        match &self.spectrum {
            Some(s) => s.clone(),
            None => {
                let (evals, vectors) = hermitian_eigen(&self.matrix);
                let weights: Vec<f64> = evals.iter().map(|&e| e.max(0.0)).collect();
                let log_weights = evals
                    .iter()
                    .map(|&e| if e > EIGEN_FLOOR { e.ln() } else { f64::NEG_INFINITY })
                    .collect();
                Spectrum {
                    vectors,
                    weights,
                    log_weights,
                }
            }
        }
    }

    fn from_spectrum(s: &Spectrum, f: impl Fn(f64, f64) -> f64) -> CMatrix {
        let diag = DVector::from_iterator(
            s.weights.len(),
            s.weights.iter().zip(&s.log_weights).map(|(&w, &lw)| c(f(w, lw))),
        );
        &s.vectors * CMatrix::from_diagonal(&diag) * s.vectors.adjoint()
    }
}

/// Outcome of a numeric relative-entropy evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeEntropyReport {
    /// `Tr ρ(ln ρ − ln σ)`, `+∞` on a support violation.
    pub value: f64,
    /// Mass of `ρ` on the kernel of `σ`.
    pub support_leak: f64,
}

fn check_shared_cutoff(rho: &FockDensityMatrix, sigma: &FockDensityMatrix) -> Result<()> {
    if rho.cutoff != sigma.cutoff {
        return Err(Error::InvalidInput(format!(
            "cutoff mismatch: {} vs {}",
            rho.cutoff, sigma.cutoff
        )));
    }
    Ok(())
}

/// `Tr ρ(ln ρ − ln σ)` with `0·ln 0 = 0`.
pub fn numeric_relative_entropy(rho: &FockDensityMatrix, sigma: &FockDensityMatrix) -> Result<f64> {
    relative_entropy_report(rho, sigma).map(|r| r.value)
}

pub fn relative_entropy_report(
    rho: &FockDensityMatrix,
    sigma: &FockDensityMatrix,
) -> Result<RelativeEntropyReport> {
    check_shared_cutoff(rho, sigma)?;

    // Tr ρ ln ρ from a fresh diagonalisation of ρ
    let (evals, _) = hermitian_eigen(&rho.matrix);
    let neg_entropy: f64 = evals
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum();

    // Tr ρ ln σ in the eigenbasis of σ
    let s = sigma.spectrum();
    let rotated = s.vectors.adjoint() * &rho.matrix * &s.vectors;
    let mut cross = 0.0;
    let mut leak = 0.0;
    for (j, &lw) in s.log_weights.iter().enumerate() {
        let w = rotated[(j, j)].re;
        if lw.is_finite() {
            cross += w * lw;
        } else {
            leak += w;
        }
    }
    let value = if leak > SUPPORT_TOL {
        f64::INFINITY
    } else {
        (neg_entropy - cross).max(0.0)
    };
    Ok(RelativeEntropyReport {
        value,
        support_leak: leak,
    })
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
pub fn numeric_fidelity(rho: &FockDensityMatrix, sigma: &FockDensityMatrix) -> Result<f64> {
    check_shared_cutoff(rho, sigma)?;
    // Tr√(√ρσ√ρ) = ‖√ρ√σ‖₁; singular values keep absolute accuracy where
    // square roots of tiny eigenvalues of √ρσ√ρ would not
    let sqrt_rho = FockDensityMatrix::from_spectrum(&rho.spectrum(), |w, _| w.sqrt());
    let sqrt_sigma = FockDensityMatrix::from_spectrum(&sigma.spectrum(), |w, _| w.sqrt());
    let product = &sqrt_rho * &sqrt_sigma;
    let svd = product.svd(false, false);
    let root_sum: f64 = svd.singular_values.iter().sum();
    Ok(root_sum * root_sum)
}

/// Quantum Fisher information of the family `θ ↦ S_{n̄(θ)}(α(θ))` from the
/// Bures expansion `F ≈ 8(1 − √Fid)/δ²`, with the pair placed
/// symmetrically at `θ ± δ/2`.
pub fn fidelity_qfi<F>(family: F, theta: f64, delta: f64, cutoff: usize) -> Result<f64>
where
    F: Fn(f64) -> (f64, Complex),
{
    let (n_lo, a_lo) = family(theta - 0.5 * delta);
    let (n_hi, a_hi) = family(theta + 0.5 * delta);
    let lo = FockDensityMatrix::displaced_thermal(n_lo, a_lo, cutoff)?;
    let hi = FockDensityMatrix::displaced_thermal(n_hi, a_hi, cutoff)?;
    let fid = numeric_fidelity(&lo, &hi)?;
    Ok(8.0 * (1.0 - fid.sqrt()) / (delta * delta))
}

/// An oracle value together with the cutoff at which it settled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converged {
    pub value: f64,
    pub cutoff: usize,
}

/// Raises the cutoff in steps of [`CUTOFF_STEP`] until two successive values
/// agree within `max(abs_tol, rel_tol·|v|)`.
///
/// The trace-deficit heuristic alone is not enough for these quantities:
/// relative entropy weights the truncated tail by `−ln σ`, and the fidelity
/// QFI divides truncation effects of order δ by δ².
fn converge<F>(start: usize, abs_tol: f64, rel_tol: f64, f: F) -> Result<Converged>
where
    F: Fn(usize) -> Result<f64>,
{
    let mut cutoff = start;
    let mut prev = f(cutoff)?;
    loop {
        let next = cutoff + CUTOFF_STEP;
        if next > MAX_CUTOFF {
            return Err(Error::Numerical(format!(
                "oracle value still moving at cutoff {cutoff} (last {prev})"
            )));
        }
        let v = f(next)?;
        let settled = if v.is_infinite() || prev.is_infinite() {
            v == prev
        } else {
            (v - prev).abs() <= abs_tol.max(rel_tol * v.abs())
        };
        if settled {
            return Ok(Converged { value: v, cutoff: next });
        }
        prev = v;
        cutoff = next;
    }
}

/// `D(S_{n₁}(α₁) ‖ S_{n₂}(α₂))` with the cutoff raised from
/// `max(min_cutoff, heuristic)` until it moves by at most `abs_tol`.
pub fn converged_relative_entropy(
    numerator: (f64, Complex),
    denominator: (f64, Complex),
    min_cutoff: usize,
    abs_tol: f64,
) -> Result<Converged> {
    let start = min_cutoff
        .max(recommended_cutoff(numerator.0, numerator.1))
        .max(recommended_cutoff(denominator.0, denominator.1));
    converge(start, abs_tol, 0.0, |cutoff| {
        let rho = FockDensityMatrix::displaced_thermal(numerator.0, numerator.1, cutoff)?;
        let sigma = FockDensityMatrix::displaced_thermal(denominator.0, denominator.1, cutoff)?;
        numeric_relative_entropy(&rho, &sigma)
    })
}

/// [`fidelity_qfi`] with the cutoff raised from the heuristic until it moves
/// by at most `rel_tol` relative.
pub fn converged_fidelity_qfi<F>(family: F, theta: f64, delta: f64, rel_tol: f64) -> Result<Converged>
where
    F: Fn(f64) -> (f64, Complex),
{
    let start = [theta - 0.5 * delta, theta + 0.5 * delta]
        .iter()
        .map(|&t| {
            let (n, a) = family(t);
            recommended_cutoff(n, a)
        })
        .max()
        .unwrap_or(0);
    converge(start, 0.0, rel_tol, |cutoff| fidelity_qfi(&family, theta, delta, cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn z(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn vacuum_and_thermal() {
        let vac = FockDensityMatrix::displaced_thermal(0.0, z(0.0, 0.0), 12).unwrap();
        assert_abs_diff_eq!(vac.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert!(vac.matrix().iter().skip(1).all(|v| v.norm() < 1e-14));

        let th = FockDensityMatrix::displaced_thermal(1.0, z(0.0, 0.0), 40).unwrap();
        let p = th.photon_distribution();
        for (n, &pn) in p.iter().enumerate().take(10) {
            assert_abs_diff_eq!(pn, 0.5f64.powi(n as i32 + 1), epsilon = 1e-14);
        }
    }

    #[test]
    fn state_invariants_and_mean() {
        let alpha = z(0.8, -0.6);
        let nbar = 1.3;
        let rho = FockDensityMatrix::displaced_thermal(nbar, alpha, recommended_cutoff(nbar, alpha)).unwrap();
        let m = rho.matrix();
        assert!((m - m.adjoint()).iter().all(|v| v.norm() <= 1e-12));
        let tr = rho.trace();
        assert!(tr >= 1.0 - 1e-8 && tr <= 1.0 + 1e-12);
        let (evals, _) = hermitian_eigen(m);
        assert!(evals.iter().all(|&e| e >= -1e-10));
        assert_abs_diff_eq!(rho.mean_photon_number(), nbar + alpha.norm_sqr(), epsilon = 1e-8);
    }

    #[test]
    fn convergence_raises_cutoff_where_tails_matter() {
        let num = (3.0, z(1.0, 0.0));
        let den = (0.5, z(-1.0, 0.0));
        let r = converged_relative_entropy(num, den, 60, 1e-10).unwrap();
        let closed = crate::detection::relative_entropy(
            &crate::DisplacedThermalState::new(num.0, num.1).unwrap(),
            &crate::DisplacedThermalState::new(den.0, den.1).unwrap(),
        );
        assert!(r.cutoff > recommended_cutoff(num.0, num.1));
        assert_abs_diff_eq!(r.value, closed, epsilon = 1e-9);

        let pure = converged_relative_entropy(num, (0.0, z(0.0, 0.0)), 60, 1e-10).unwrap();
        assert_eq!(pure.value, f64::INFINITY);
    }

    #[test]
    fn insufficient_cutoff_is_rejected() {
        assert!(FockDensityMatrix::displaced_thermal(3.0, z(1.0, 0.0), 30).is_err());
        // precondition holds but the thermal tail is too heavy
        let err = FockDensityMatrix::displaced_thermal(3.0, z(0.0, 0.0), 60).unwrap_err();
        assert!(matches!(err, Error::TailMass { .. }));
    }

    #[test]
    fn relative_entropy_basics() {
        let a = FockDensityMatrix::displaced_thermal(0.7, z(0.3, 0.2), 60).unwrap();
        assert!(numeric_relative_entropy(&a, &a).unwrap().abs() < 1e-10);

        let coh = FockDensityMatrix::displaced_thermal(0.0, z(1.0, 0.0), 60).unwrap();
        let th = FockDensityMatrix::displaced_thermal(1.0, z(1.0, 0.0), 60).unwrap();
        assert_abs_diff_eq!(numeric_relative_entropy(&coh, &th).unwrap(), 2f64.ln(), epsilon = 1e-6);

        let fwd = numeric_relative_entropy(&a, &th).unwrap();
        let rev = numeric_relative_entropy(&th, &a).unwrap();
        assert!((fwd - rev).abs() > 1e-3);
    }

    #[test]
    fn relative_entropy_to_pure_state_diverges() {
        let coh = FockDensityMatrix::displaced_thermal(0.0, z(1.0, 0.0), 60).unwrap();
        let th = FockDensityMatrix::displaced_thermal(0.5, z(1.0, 0.0), 60).unwrap();
        let r = relative_entropy_report(&th, &coh).unwrap();
        assert_eq!(r.value, f64::INFINITY);
        assert!(r.support_leak > 0.1);
    }

    #[test]
    fn generic_matrices_use_numeric_spectrum() {
        let a = FockDensityMatrix::displaced_thermal(0.5, z(0.2, 0.0), 40).unwrap();
        let b = FockDensityMatrix::displaced_thermal(0.9, z(-0.1, 0.3), 40).unwrap();
        let a_plain = FockDensityMatrix::from_matrix(a.matrix().clone()).unwrap();
        let b_plain = FockDensityMatrix::from_matrix(b.matrix().clone()).unwrap();
        let exact = numeric_relative_entropy(&a, &b).unwrap();
        let plain = numeric_relative_entropy(&a_plain, &b_plain).unwrap();
        assert_abs_diff_eq!(exact, plain, epsilon = 1e-6);
    }

    #[test]
    fn fidelity_examples() {
        let a = FockDensityMatrix::displaced_thermal(0.7, z(0.3, 0.2), 60).unwrap();
        assert_abs_diff_eq!(numeric_fidelity(&a, &a).unwrap(), 1.0, epsilon = 1e-10);
        let n2 = FockDensityMatrix::number_state(2, 10).unwrap();
        let n5 = FockDensityMatrix::number_state(5, 10).unwrap();
        assert!(numeric_fidelity(&n2, &n5).unwrap().abs() < 1e-14);
        // coherent states: |⟨α|β⟩|² = e^{−|α−β|²}
        let x = FockDensityMatrix::displaced_thermal(0.0, z(0.5, 0.0), 60).unwrap();
        let y = FockDensityMatrix::displaced_thermal(0.0, z(0.0, 0.5), 60).unwrap();
        assert_abs_diff_eq!(numeric_fidelity(&x, &y).unwrap(), (-0.5f64).exp(), epsilon = 1e-10);
    }

    #[test]
    fn mismatched_cutoffs() {
        let a = FockDensityMatrix::displaced_thermal(0.1, z(0.0, 0.0), 20).unwrap();
        let b = FockDensityMatrix::displaced_thermal(0.1, z(0.0, 0.0), 30).unwrap();
        assert!(numeric_relative_entropy(&a, &b).is_err());
        assert!(numeric_fidelity(&a, &b).is_err());
    }
}
