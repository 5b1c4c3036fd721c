//! One-dimensional maximisation: coarse grid followed by golden-section
//! refinement of the bracketing cell.

/// `(φ − 1)`, the golden-section shrink factor.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub arg: f64,
    pub value: f64,
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `tol`. Assumes `f` is unimodal on the
/// bracket; the returned point is the best one evaluated, endpoints included.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Maximum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa = f(a);
    let fb = f(b);
    let mut best = if fb > fa {
        Maximum { arg: b, value: fb }
    } else {
        Maximum { arg: a, value: fa }
    };

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // bracket shrinks by 0.618 per step; 200 steps covers any f64 range
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.value || best.value.is_nan() {
            best = Maximum { arg: x, value: v };
        }
    }
    best
}

/// Maximises `f` on `[lo, hi]`: evaluates `points` equally spaced samples,
/// then refines around the best sample with golden-section search.
pub fn grid_then_golden_max<F>(mut f: F, lo: f64, hi: f64, points: usize, tol: f64) -> Maximum
where
    F: FnMut(f64) -> f64,
{
    assert!(points >= 2, "grid needs at least two points");
    let step = (hi - lo) / (points - 1) as f64;
    let grid = |j: usize| if j + 1 == points { hi } else { lo + step * j as f64 };

    let mut best_j = 0;
    let mut best_v = f64::NEG_INFINITY;
    for j in 0..points {
        let v = f(grid(j));
        if v > best_v {
            best_v = v;
            best_j = j;
        }
    }
    if !best_v.is_finite() && best_v != f64::INFINITY {
        return Maximum {
            arg: grid(best_j),
            value: best_v,
        };
    }
    let left = grid(best_j.saturating_sub(1));
    let right = grid((best_j + 1).min(points - 1));
    let refined = golden_section_max(&mut f, left, right, tol);
    if refined.value >= best_v {
        refined
    } else {
        Maximum {
            arg: grid(best_j),
            value: best_v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let m = golden_section_max(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 1.0, 1e-12);
        assert!((m.arg - 0.3).abs() < 1e-6);
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_maximum() {
        let m = golden_section_max(|x| x, 0.0, 1.0, 1e-10);
        assert_eq!(m.arg, 1.0);
        let m = grid_then_golden_max(|x| -x, 0.0, 5.0, 11, 1e-10);
        assert_eq!(m.arg, 0.0);
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn grid_escapes_local_maximum() {
        // global peak at x = 4, weaker local peak at x = 1
        let f = |x: f64| (-(x - 1.0).powi(2) * 20.0).exp() + 2.0 * (-(x - 4.0).powi(2) * 20.0).exp();
        let m = grid_then_golden_max(f, 0.0, 5.0, 101, 1e-12);
        assert!((m.arg - 4.0).abs() < 1e-6);
    }
}
