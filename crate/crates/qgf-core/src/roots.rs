//! Safeguarded Newton iteration for increasing scalar functions.

use crate::error::{Error, Result};

pub(crate) const MAX_ITER: usize = 200;

/// Bracket history of one solve, for inspecting convergence.
#[derive(Debug, Clone, Default)]
pub struct SolveTrace {
    pub brackets: Vec<(f64, f64)>,
    pub iterations: usize,
}

/// Solves g(x) = target for an increasing g.
///
/// `eval` returns (g, g'). `upper` is an open upper limit of the domain
/// (g may blow up there). Newton steps that leave the current bracket are
/// replaced by bisection.
pub(crate) fn solve_increasing<F>(
    eval: F,
    target: f64,
    x0: f64,
    upper: Option<f64>,
    rel_tol: f64,
    trace: &mut SolveTrace,
) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let mut x = match upper {
        Some(u) if x0 >= u => u - 1e-3 * (1.0 + u.abs()),
        _ => x0,
    };
    let (mut gx, mut dg) = eval(x)?;
    let (mut lo, mut hi);
    if gx < target {
        lo = x;
        hi = f64::NAN;
        let mut step = 1.0;
        for _ in 0..2000 {
            let cand = match upper {
                Some(u) => {
                    let c = u - (u - lo) / 4.0;
                    if !(c > lo && c < u) {
                        return Err(Error::NoSolution(format!("target {target} not reached below {u}")));
                    }
                    c
                }
                None => lo + step,
            };
            let (gc, dc) = eval(cand)?;
            if gc >= target {
                hi = cand;
                x = cand;
                gx = gc;
                dg = dc;
                break;
            }
            lo = cand;
            step *= 2.0;
        }
    } else {
        hi = x;
        lo = f64::NAN;
        let mut step = 1.0;
        for _ in 0..2000 {
            let cand = hi - step;
            let (gc, dc) = eval(cand)?;
            if gc < target {
                lo = cand;
                break;
            }
            hi = cand;
            x = cand;
            gx = gc;
            dg = dc;
            step *= 2.0;
        }
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Convergence(format!("could not bracket target {target}")));
    }
    trace.brackets.push((lo, hi));
    for it in 0..MAX_ITER {
        trace.iterations = it + 1;
        let resid = gx - target;
        if resid.abs() <= rel_tol * target.abs() {
            return Ok(x);
        }
        if resid < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        trace.brackets.push((lo, hi));
        let newton = x - resid / dg;
        let next = if dg > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (hi - lo) <= 4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE) || next == x {
            // bracket exhausted at machine precision
            let (g, _) = eval(next)?;
            if (g - target).abs() <= rel_tol.max(1e-8) * target.abs() {
                return Ok(next);
            }
            return Err(Error::Convergence(format!("stalled at x={next}, residual {}", g - target)));
        }
        x = next;
        let (g, d) = eval(x)?;
        gx = g;
        dg = d;
    }
    Err(Error::Convergence(format!("no convergence after {MAX_ITER} iterations")))
}
