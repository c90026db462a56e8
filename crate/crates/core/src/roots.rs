//! Bracketed one-dimensional root finding.
//!
//! All target functions in this crate are continuous on the brackets they are
//! handed, so plain bisection is always safe. Once the bracket is small a
//! secant step is tried; it is only accepted if it stays strictly inside the
//! current bracket.

/// Outcome of a bracketed solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a sign change root of `f` on `[lo, hi]`.
///
/// Returns `None` if `f(lo)` and `f(hi)` have the same strict sign.
pub fn bisect_secant<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Option<Root>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(Root {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Some(Root {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }

    let mut iterations = 0;
    while hi - lo > x_tol && iterations < 400 {
        iterations += 1;
        // secant candidate, falling back to the midpoint
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        let x = if secant.is_finite() && secant > lo + 0.05 * width && secant < hi - 0.05 * width {
            secant
        } else {
            mid
        };
        let fx = f(x);
        if fx == 0.0 {
            return Some(Root {
                x,
                residual: 0.0,
                iterations,
            });
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        // a secant step that barely moves one end would stall; force a halving
        if x != mid && hi - lo > 0.5 * width {
            let m = 0.5 * (lo + hi);
            let fm = f(m);
            if fm == 0.0 {
                return Some(Root {
                    x: m,
                    residual: 0.0,
                    iterations,
                });
            }
            if fm.signum() == f_lo.signum() {
                lo = m;
                f_lo = fm;
            } else {
                hi = m;
                f_hi = fm;
            }
        }
    }
    let (x, residual) = if f_lo.abs() < f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    Some(Root {
        x,
        residual,
        iterations,
    })
}

/// Scans `(lo, hi)` on `samples` evenly spaced interior points and refines
/// every sign change. Endpoints themselves are never sampled.
pub fn all_sign_change_roots<F>(f: F, lo: f64, hi: f64, samples: usize, x_tol: f64) -> Vec<Root>
where
    F: Fn(f64) -> f64,
{
    let mut roots = Vec::new();
    if !(hi > lo) || samples < 2 {
        return roots;
    }
    let step = (hi - lo) / samples as f64;
    let mut prev_x = lo + 0.5 * step;
    let mut prev_f = f(prev_x);
    for i in 1..samples {
        let x = lo + (i as f64 + 0.5) * step;
        let fx = f(x);
        if prev_f.is_finite() && fx.is_finite() && prev_f.signum() != fx.signum() {
            if let Some(r) = bisect_secant(&f, prev_x, x, x_tol) {
                roots.push(r);
            }
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}
