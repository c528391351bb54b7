//! Reference integration and differentiation.
//!
//! Nothing in this module depends on the quadrature rule or the bound
//! formulas; it is the ground truth the rest of the crate is checked against.

use serde::Serialize;

use crate::error::{CertError, Result};
use crate::funcat::{Fn2, Interval};

/// Default absolute tolerance used by identity and validity checks.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Smallest tolerance [`integrate`] accepts.
pub const MIN_TOL: f64 = 1e-14;

/// Evaluation budget of a single [`integrate`] call.
pub const MAX_EVALUATIONS: usize = 1 << 22;

// Cells are always split this many times before the acceptance test runs.
const MIN_DEPTH: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub abs_err_estimate: f64,
    pub evaluations: usize,
}

struct Cell {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    depth: u32,
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson quadrature of `g` over `[lo, hi]` with Richardson
/// extrapolation of each accepted cell.
///
/// A cell is accepted once `|S_left + S_right - S_whole| <= 15 * tol_cell`,
/// where `tol_cell` is `tol` scaled by the cell's share of the interval.
pub fn integrate<G>(g: G, lo: f64, hi: f64, tol: f64) -> Result<OracleResult>
where
    G: Fn(f64) -> f64,
{
    if tol.is_nan() || tol < MIN_TOL {
        return Err(CertError::InvalidRequest(format!(
            "oracle tolerance {tol:e} below the minimum {MIN_TOL:e}"
        )));
    }
    if lo == hi {
        return Ok(OracleResult {
            value: 0.0,
            abs_err_estimate: 0.0,
            evaluations: 0,
        });
    }
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(CertError::InvalidInterval { a: lo, b: hi });
    }

    let mut evaluations = 0usize;
    let eval = |t: f64, count: &mut usize| -> Result<f64> {
        *count += 1;
        let v = g(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CertError::NonFiniteSample { t })
        }
    };

    let span = hi - lo;
    let fa = eval(lo, &mut evaluations)?;
    let fb = eval(hi, &mut evaluations)?;
    let m = 0.5 * (lo + hi);
    let fm = eval(m, &mut evaluations)?;
    let mut stack = vec![Cell {
        a: lo,
        b: hi,
        fa,
        fm,
        fb,
        whole: simpson(lo, hi, fa, fm, fb),
        depth: 0,
    }];

    // Neumaier-compensated accumulation keeps the sum order-insensitive at
    // the 1e-16 level.
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut err = 0.0;

    while let Some(c) = stack.pop() {
        let m = 0.5 * (c.a + c.b);
        let lm = 0.5 * (c.a + m);
        let rm = 0.5 * (m + c.b);
        if !(c.a < lm && lm < m && m < rm && rm < c.b) {
            return Err(CertError::OracleNonConvergence { tol, evaluations });
        }
        let flm = eval(lm, &mut evaluations)?;
        let frm = eval(rm, &mut evaluations)?;
        let left = simpson(c.a, m, c.fa, flm, c.fm);
        let right = simpson(m, c.b, c.fm, frm, c.fb);
        let delta = left + right - c.whole;
        let cell_tol = tol * (c.b - c.a) / span;

        if c.depth >= MIN_DEPTH && delta.abs() <= 15.0 * cell_tol {
            let v = left + right + delta / 15.0;
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
            err += delta.abs() / 15.0;
            continue;
        }
        if evaluations + 2 > MAX_EVALUATIONS {
            return Err(CertError::OracleNonConvergence { tol, evaluations });
        }
        // Right first so the left half is processed next.
        stack.push(Cell {
            a: m,
            b: c.b,
            fa: c.fm,
            fm: frm,
            fb: c.fb,
            whole: right,
            depth: c.depth + 1,
        });
        stack.push(Cell {
            a: c.a,
            b: m,
            fa: c.fa,
            fm: flm,
            fb: c.fm,
            whole: left,
            depth: c.depth + 1,
        });
    }

    Ok(OracleResult {
        value: sum + comp,
        abs_err_estimate: err,
        evaluations,
    })
}

/// `(1/(b-a)) ∫_a^b f(t) dt` to absolute tolerance `tol`.
pub fn mean_value(func: &Fn2, iv: &Interval, tol: f64) -> Result<OracleResult> {
    func.check_interval(iv)?;
    let w = iv.width();
    let r = integrate(|t| func.f(t), iv.a(), iv.b(), (tol * w).max(MIN_TOL))?;
    Ok(OracleResult {
        value: r.value / w,
        abs_err_estimate: r.abs_err_estimate / w,
        evaluations: r.evaluations,
    })
}

/// Central first difference with step `cbrt(eps) * (1 + |t|)`.
pub fn central_diff<G: Fn(f64) -> f64>(g: G, t: f64) -> f64 {
    let h = f64::EPSILON.cbrt() * (1.0 + t.abs());
    let (up, down) = (t + h, t - h);
    (g(up) - g(down)) / (up - down)
}

/// Central second difference with step `eps^(1/4) * (1 + |t|)`.
pub fn second_central_diff<G: Fn(f64) -> f64>(g: G, t: f64) -> f64 {
    let h = f64::EPSILON.powf(0.25) * (1.0 + t.abs());
    let up = t + h;
    let down = t - h;
    // Use the representable step actually taken.
    let h = 0.5 * (up - down);
    (g(up) - 2.0 * g(t) + g(down)) / (h * h)
}
