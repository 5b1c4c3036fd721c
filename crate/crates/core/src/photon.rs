//! Photon-number statistics of displaced thermal states.
//!
//! `P(n) = rⁿ/(n̄+1) · e^{−|d|²/(n̄+1)} · L_n(−|d|²/(n̄(n̄+1)))` with
//! `r = n̄/(n̄+1)`. The Laguerre recurrence is run directly on `P(n)` after
//! absorbing `rⁿ`, which keeps it finite at `n̄ = 0` (Poisson limit) and
//! stable, since the argument is non-positive.

use crate::error::{invalid, Error, Result};
use crate::Complex;

/// Maximum tail mass tolerated by [`displaced_thermal_pnr`].
pub const PNR_TAIL_TOL: f64 = 1e-10;

fn pnr_unchecked(nbar: f64, d2: f64, n_max: usize) -> Vec<f64> {
    let s = nbar + 1.0;
    let r = nbar / s;
    let shift = d2 / (s * s);
    let mut p = Vec::with_capacity(n_max + 1);
    let p0 = (-d2 / s).exp() / s;
    p.push(p0);
    if n_max == 0 {
        return p;
    }
    p.push(p0 * (r + shift));
    for n in 1..n_max {
        let nf = n as f64;
        let next = ((r * (2.0 * nf + 1.0) + shift) * p[n] - r * r * nf * p[n - 1]) / (nf + 1.0);
        p.push(next.max(0.0));
    }
    p
}

/// `P(0..=n_max)` without any tail-mass check.
pub(crate) fn pnr_fixed(nbar: f64, d: Complex, n_max: usize) -> Vec<f64> {
    pnr_unchecked(nbar, d.norm_sqr(), n_max)
}

fn check_state(nbar: f64, d: Complex) -> Result<()> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(invalid("nbar", format!("must be >= 0, got {nbar}")));
    }
    if !(d.re.is_finite() && d.im.is_finite()) {
        return Err(invalid("d", "displacement must be finite"));
    }
    Ok(())
}

/// `P(0..=n_max)` for `S_n̄(d)`. Fails when the mass beyond `n_max`
/// exceeds [`PNR_TAIL_TOL`].
pub fn displaced_thermal_pnr(nbar: f64, d: Complex, n_max: usize) -> Result<Vec<f64>> {
    check_state(nbar, d)?;
    let p = pnr_unchecked(nbar, d.norm_sqr(), n_max);
    let tail = 1.0 - p.iter().sum::<f64>();
    if tail > PNR_TAIL_TOL {
        return Err(Error::TailMass {
            tail,
            tolerance: PNR_TAIL_TOL,
        });
    }
    Ok(p)
}

/// Like [`displaced_thermal_pnr`] but grows the table until the tail mass
/// drops below `tail_tol`, covering at least `0..=min_len - 1`.
pub fn pnr_until(nbar: f64, d: Complex, tail_tol: f64, min_len: usize) -> Result<Vec<f64>> {
    check_state(nbar, d)?;
    let d2 = d.norm_sqr();
    let mean = nbar + d2;
    let mut n_max = ((4.0 * mean + 10.0 * mean.sqrt() + 20.0) as usize).max(min_len);
    loop {
        let p = pnr_unchecked(nbar, d2, n_max);
        let tail = 1.0 - p.iter().sum::<f64>();
        if tail <= tail_tol || n_max > 100_000 {
            return Ok(p);
        }
        n_max *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn thermal_is_geometric() {
        let nbar = 1.7;
        let p = displaced_thermal_pnr(nbar, c(0.0, 0.0), 120).unwrap();
        for (n, &pn) in p.iter().enumerate().take(60) {
            let expected = nbar.powi(n as i32) / (nbar + 1.0).powi(n as i32 + 1);
            assert_relative_eq!(pn, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn coherent_is_poisson() {
        let d = c(1.2, -0.7);
        let lambda = d.norm_sqr();
        let p = displaced_thermal_pnr(0.0, d, 40).unwrap();
        let mut fact = 1.0;
        for (n, &pn) in p.iter().enumerate().take(25) {
            if n > 0 {
                fact *= n as f64;
            }
            let expected = (-lambda).exp() * lambda.powi(n as i32) / fact;
            assert_relative_eq!(pn, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn normalised_with_right_mean() {
        let (nbar, d) = (0.8, c(1.5, 0.4));
        let p = displaced_thermal_pnr(nbar, d, 200).unwrap();
        let total: f64 = p.iter().sum();
        let mean: f64 = p.iter().enumerate().map(|(n, pn)| n as f64 * pn).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((mean - (nbar + d.norm_sqr())).abs() < 1e-10);
    }

    #[test]
    fn short_table_is_rejected() {
        let err = displaced_thermal_pnr(2.0, c(1.0, 0.0), 5).unwrap_err();
        assert!(matches!(err, Error::TailMass { .. }));
        assert!(displaced_thermal_pnr(-1.0, c(0.0, 0.0), 5).is_err());
    }

    #[test]
    fn auto_length_meets_tolerance() {
        let p = pnr_until(3.0, c(2.0, 0.0), 1e-13, 0).unwrap();
        assert!(1.0 - p.iter().sum::<f64>() <= 1e-13);
    }
}
