//! Function catalog, derivative evaluation and empirical shape checks.
//!
//! Every certificate family needs a hypothesis on `|f''|^q` (convex or
//! concave on the interval). Those hypotheses are checked here by sampling
//! midpoint convexity on a uniform grid. The check is a sampling test, not a
//! proof.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{CertError, Result};
use crate::oracle;

/// Default number of grid intervals used by [`check_shape`].
pub const DEFAULT_SHAPE_GRID: usize = 256;

/// Smallest grid accepted by [`check_shape`].
pub const MIN_SHAPE_GRID: usize = 16;

/// Closed integration domain `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(CertError::InvalidInterval { a, b });
        }
        let m = 0.5 * (a + b);
        if !(a < m && m < b) {
            return Err(CertError::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        (self.a + self.b) / 2.0
    }

    /// `(3a + b) / 4`, the point where the derivative correction vanishes.
    #[inline]
    pub fn quarter_point(&self) -> f64 {
        (3.0 * self.a + self.b) / 4.0
    }

    /// Mirror image `a + b - x`.
    #[inline]
    pub fn reflect(&self, x: f64) -> f64 {
        self.a + self.b - x
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }

    /// Errors unless `x ∈ [a, (a+b)/2]`.
    pub fn check_left_half(&self, x: f64) -> Result<()> {
        let hi = self.midpoint();
        if x.is_finite() && self.a <= x && x <= hi {
            Ok(())
        } else {
            Err(CertError::PointOutOfRange { x, lo: self.a, hi })
        }
    }

    /// `n` equal cells; endpoints are computed from the original end points so
    /// the last cell ends exactly at `b`.
    pub fn split(&self, n: usize) -> Result<Vec<Interval>> {
        let w = self.width();
        (0..n)
            .map(|i| {
                let lo = if i == 0 {
                    self.a
                } else {
                    self.a + w * (i as f64) / (n as f64)
                };
                let hi = if i + 1 == n {
                    self.b
                } else {
                    self.a + w * ((i + 1) as f64) / (n as f64)
                };
                Interval::new(lo, hi)
            })
            .collect()
    }

    /// `n + 1` equally spaced points from `lo` to `hi` inclusive.
    pub(crate) fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
        (0..=n).map(move |i| {
            if i == n {
                hi
            } else {
                lo + (hi - lo) * (i as f64) / (n as f64)
            }
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Where a function may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Real,
    Positive,
    NonNegative,
    NonZero,
}

impl Domain {
    pub fn contains(self, t: f64) -> bool {
        match self {
            Domain::Real => t.is_finite(),
            Domain::Positive => t > 0.0,
            Domain::NonNegative => t >= 0.0,
            Domain::NonZero => t != 0.0,
        }
    }

    /// First offending point of `iv`, if any.
    pub fn violation_in(self, iv: &Interval) -> Option<f64> {
        if !self.contains(iv.a()) {
            return Some(iv.a());
        }
        if !self.contains(iv.b()) {
            return Some(iv.b());
        }
        if self == Domain::NonZero && iv.a() < 0.0 && iv.b() > 0.0 {
            return Some(0.0);
        }
        None
    }

    fn describe(self) -> &'static str {
        match self {
            Domain::Real => "t finite",
            Domain::Positive => "t > 0",
            Domain::NonNegative => "t >= 0",
            Domain::NonZero => "t != 0",
        }
    }
}

/// Closed-form catalog entries.
#[derive(Debug, Clone, PartialEq)]
pub enum Catalog {
    /// `t^n`; integer or real exponent.
    Power(f64),
    /// `1/t`
    Recip,
    /// `-ln t`
    NegLog,
    /// `e^t`
    Exp,
    /// `c0 + c1 t + c2 t^2 + ...`
    Poly(Vec<f64>),
}

impl Catalog {
    fn domain(&self) -> Domain {
        match self {
            Catalog::Power(n) => {
                if is_integer(*n) {
                    if *n >= 0.0 {
                        Domain::Real
                    } else {
                        Domain::NonZero
                    }
                } else if *n >= 2.0 {
                    Domain::NonNegative
                } else {
                    Domain::Positive
                }
            }
            Catalog::Recip | Catalog::NegLog => Domain::Positive,
            Catalog::Exp | Catalog::Poly(_) => Domain::Real,
        }
    }

    fn f(&self, t: f64) -> f64 {
        match self {
            Catalog::Power(n) => pow(t, *n),
            Catalog::Recip => 1.0 / t,
            Catalog::NegLog => -t.ln(),
            Catalog::Exp => t.exp(),
            Catalog::Poly(c) => horner(c, t),
        }
    }

    fn df(&self, t: f64) -> f64 {
        match self {
            Catalog::Power(n) => {
                if *n == 0.0 {
                    0.0
                } else {
                    n * pow(t, n - 1.0)
                }
            }
            Catalog::Recip => -1.0 / (t * t),
            Catalog::NegLog => -1.0 / t,
            Catalog::Exp => t.exp(),
            Catalog::Poly(c) => horner(&derivative(c), t),
        }
    }

    fn d2f(&self, t: f64) -> f64 {
        match self {
            Catalog::Power(n) => {
                if *n == 0.0 || *n == 1.0 {
                    0.0
                } else {
                    n * (n - 1.0) * pow(t, n - 2.0)
                }
            }
            Catalog::Recip => 2.0 / (t * t * t),
            Catalog::NegLog => 1.0 / (t * t),
            Catalog::Exp => t.exp(),
            Catalog::Poly(c) => horner(&derivative(&derivative(c)), t),
        }
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Catalog::Power(n) => write!(f, "power:{n}"),
            Catalog::Recip => f.write_str("recip"),
            Catalog::NegLog => f.write_str("neglog"),
            Catalog::Exp => f.write_str("exp"),
            Catalog::Poly(c) => {
                f.write_str("poly:")?;
                for (i, v) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

fn is_integer(n: f64) -> bool {
    n.fract() == 0.0 && n.abs() < i32::MAX as f64
}

fn pow(t: f64, n: f64) -> f64 {
    if is_integer(n) {
        t.powi(n as i32)
    } else {
        t.powf(n)
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| ci * i as f64)
        .collect()
}

/// Real-valued evaluator shared across threads.
pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied function; missing derivatives fall back to central
/// differences.
#[derive(Clone)]
pub struct UserFn {
    label: String,
    f: Evaluator,
    df: Option<Evaluator>,
    d2f: Option<Evaluator>,
}

impl fmt::Debug for UserFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UserFn")
            .field("label", &self.label)
            .field("df", &self.df.is_some())
            .field("d2f", &self.d2f.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum FnKind {
    Catalog(Catalog),
    UserSampled(UserFn),
}

/// A twice-differentiable function together with its first two derivatives.
#[derive(Debug, Clone)]
pub struct Fn2 {
    kind: FnKind,
    domain: Domain,
}

impl Fn2 {
    /// Wraps user-supplied evaluators.
    pub fn user(
        label: impl Into<String>,
        f: Evaluator,
        df: Option<Evaluator>,
        d2f: Option<Evaluator>,
        domain: Domain,
    ) -> Self {
        Self {
            kind: FnKind::UserSampled(UserFn {
                label: label.into(),
                f,
                df,
                d2f,
            }),
            domain,
        }
    }

    pub fn from_catalog(entry: Catalog) -> Self {
        let domain = entry.domain();
        Self {
            kind: FnKind::Catalog(entry),
            domain,
        }
    }

    pub fn kind(&self) -> &FnKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn label(&self) -> String {
        match &self.kind {
            FnKind::Catalog(c) => c.to_string(),
            FnKind::UserSampled(u) => u.label.clone(),
        }
    }

    #[inline]
    pub fn f(&self, t: f64) -> f64 {
        match &self.kind {
            FnKind::Catalog(c) => c.f(t),
            FnKind::UserSampled(u) => (u.f)(t),
        }
    }

    #[inline]
    pub fn df(&self, t: f64) -> f64 {
        match &self.kind {
            FnKind::Catalog(c) => c.df(t),
            FnKind::UserSampled(u) => match &u.df {
                Some(df) => df(t),
                None => oracle::central_diff(|s| (u.f)(s), t),
            },
        }
    }

    #[inline]
    pub fn d2f(&self, t: f64) -> f64 {
        match &self.kind {
            FnKind::Catalog(c) => c.d2f(t),
            FnKind::UserSampled(u) => match &u.d2f {
                Some(d2f) => d2f(t),
                None => oracle::second_central_diff(|s| (u.f)(s), t),
            },
        }
    }

    /// Errors when any point of `iv` falls outside the domain.
    pub fn check_interval(&self, iv: &Interval) -> Result<()> {
        match self.domain.violation_in(iv) {
            Some(t) => Err(CertError::DomainViolation {
                t,
                constraint: self.domain.describe(),
            }),
            None => Ok(()),
        }
    }

    /// `|f''(t)|`, erroring on non-finite values.
    pub fn abs_d2f(&self, t: f64) -> Result<f64> {
        let v = self.d2f(t).abs();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CertError::NonFiniteSample { t })
        }
    }
}

/// Builds a catalog function from its name and numeric parameters.
///
/// Accepted names: `power` (one exponent), `recip`, `neglog`, `exp` (no
/// parameters) and `poly` (coefficients in increasing degree).
pub fn make_catalog_fn(name: &str, params: &[f64]) -> Result<Fn2> {
    let invalid = |reason: &str| CertError::InvalidParams {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    if params.iter().any(|p| !p.is_finite()) {
        return Err(invalid("parameters must be finite"));
    }
    let entry = match name {
        "power" => match params {
            [n] => Catalog::Power(*n),
            _ => return Err(invalid("expected exactly one exponent")),
        },
        "recip" | "neglog" | "exp" => {
            if !params.is_empty() {
                return Err(invalid("takes no parameters"));
            }
            match name {
                "recip" => Catalog::Recip,
                "neglog" => Catalog::NegLog,
                _ => Catalog::Exp,
            }
        }
        "poly" => {
            if params.is_empty() {
                return Err(invalid("expected at least one coefficient"));
            }
            Catalog::Poly(params.to_vec())
        }
        other => return Err(CertError::UnknownCatalogName(other.to_string())),
    };
    Ok(Fn2::from_catalog(entry))
}

/// Parses the CLI form `name[:p1,p2,...]`, e.g. `power:2` or `poly:1,0,3`.
pub fn parse_fn_spec(spec: &str) -> Result<Fn2> {
    let spec = spec.trim();
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (spec, None),
    };
    let params = match rest {
        None => Vec::new(),
        Some(r) => r
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CertError::InvalidParams {
                        name: name.to_string(),
                        reason: format!("`{}` is not a number", s.trim()),
                    })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    make_catalog_fn(name, &params)
}

/// Empirical shape of `|f''|^q` on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeVerdict {
    Convex,
    Concave,
    Neither,
    Affine,
}

impl ShapeVerdict {
    /// Accepted by the convex-hypothesis certificate families.
    pub fn admits_convex(self) -> bool {
        matches!(self, ShapeVerdict::Convex | ShapeVerdict::Affine)
    }

    /// Accepted by the concave-hypothesis certificate family.
    pub fn admits_concave(self) -> bool {
        matches!(self, ShapeVerdict::Concave | ShapeVerdict::Affine)
    }
}

impl fmt::Display for ShapeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeVerdict::Convex => "convex",
            ShapeVerdict::Concave => "concave",
            ShapeVerdict::Neither => "neither convex nor concave",
            ShapeVerdict::Affine => "affine",
        })
    }
}

/// Outcome of [`check_shape`].
///
/// `max_violation` measures the evidence against the opposite shape for a
/// strict verdict (how far from concave a `Convex` sample is, and vice
/// versa), the larger defect for `Affine`, and the smaller of the two defects
/// for `Neither`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeReport {
    pub q: f64,
    pub verdict: ShapeVerdict,
    pub grid_size: usize,
    pub max_violation: f64,
    pub violating_point: Option<f64>,
    pub convex_defect: f64,
    pub concave_defect: f64,
    pub tol: f64,
}

/// Largest midpoint defects over all grid pairs `(i, j)` with `i + j` even.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointDefects {
    /// `max(0, max g_mid - (g_i + g_j)/2)`; zero for a convex sample.
    pub convex_defect: f64,
    /// `max(0, max (g_i + g_j)/2 - g_mid)`; zero for a concave sample.
    pub concave_defect: f64,
    /// Midpoint index of the worst convexity violation.
    pub convex_at: Option<usize>,
    /// Midpoint index of the worst concavity violation.
    pub concave_at: Option<usize>,
}

pub fn midpoint_defects(g: &[f64]) -> MidpointDefects {
    let n = g.len();
    let mut out = MidpointDefects {
        convex_defect: 0.0,
        concave_defect: 0.0,
        convex_at: None,
        concave_at: None,
    };
    for i in 0..n {
        for j in ((i + 2)..n).step_by(2) {
            let k = (i + j) / 2;
            let d = g[k] - 0.5 * (g[i] + g[j]);
            if d > out.convex_defect {
                out.convex_defect = d;
                out.convex_at = Some(k);
            } else if -d > out.concave_defect {
                out.concave_defect = -d;
                out.concave_at = Some(k);
            }
        }
    }
    out
}

/// Classifies already-sampled values with slack `1e-12 * (1 + max|g|)`.
pub fn classify_samples(g: &[f64]) -> (ShapeVerdict, MidpointDefects, f64) {
    let scale = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * (1.0 + scale);
    let d = midpoint_defects(g);
    let convex = d.convex_defect <= tol;
    let concave = d.concave_defect <= tol;
    let verdict = match (convex, concave) {
        (true, true) => ShapeVerdict::Affine,
        (true, false) => ShapeVerdict::Convex,
        (false, true) => ShapeVerdict::Concave,
        (false, false) => ShapeVerdict::Neither,
    };
    (verdict, d, tol)
}

/// Samples `g = |f''|^q` on `grid_size + 1` uniform points of `iv` and tests
/// midpoint convexity on every symmetric pair.
pub fn check_shape(func: &Fn2, iv: &Interval, q: f64, grid_size: usize) -> Result<ShapeReport> {
    if grid_size < MIN_SHAPE_GRID {
        return Err(CertError::InvalidRequest(format!(
            "shape grid must have at least {MIN_SHAPE_GRID} intervals, got {grid_size}"
        )));
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(CertError::InvalidRequest(format!(
            "shape exponent q = {q} must be >= 1"
        )));
    }
    func.check_interval(iv)?;
    let pts: Vec<f64> = Interval::grid(iv.a(), iv.b(), grid_size).collect();
    let g = pts
        .iter()
        .map(|&t| {
            let v = func.abs_d2f(t)?;
            let gv = if q == 1.0 { v } else { v.powf(q) };
            if gv.is_finite() {
                Ok(gv)
            } else {
                Err(CertError::NonFiniteSample { t })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (verdict, d, tol) = classify_samples(&g);
    let (max_violation, at) = match verdict {
        ShapeVerdict::Convex => (d.concave_defect, d.concave_at),
        ShapeVerdict::Concave => (d.convex_defect, d.convex_at),
        ShapeVerdict::Affine => {
            if d.convex_defect >= d.concave_defect {
                (d.convex_defect, d.convex_at)
            } else {
                (d.concave_defect, d.concave_at)
            }
        }
        ShapeVerdict::Neither => {
            if d.convex_defect <= d.concave_defect {
                (d.convex_defect, d.convex_at)
            } else {
                (d.concave_defect, d.concave_at)
            }
        }
    };
    Ok(ShapeReport {
        q,
        verdict,
        grid_size,
        max_violation,
        violating_point: at.map(|k| pts[k]),
        convex_defect: d.convex_defect,
        concave_defect: d.concave_defect,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn power_two_values() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        assert_eq!(f.f(3.0), 9.0);
        assert_eq!(f.df(3.0), 6.0);
        assert_eq!(f.d2f(3.0), 2.0);
    }

    #[test]
    fn recip_and_neglog_second_derivatives() {
        let r = make_catalog_fn("recip", &[]).unwrap();
        assert_eq!(r.d2f(2.0), 2.0 / 8.0);
        assert_eq!(r.domain(), Domain::Positive);
        let l = make_catalog_fn("neglog", &[]).unwrap();
        assert_eq!(l.d2f(2.0), 0.25);
        assert_eq!(l.domain(), Domain::Positive);
    }

    #[test]
    fn low_order_powers_have_zero_derivatives_at_origin() {
        for n in [0.0, 1.0] {
            let f = make_catalog_fn("power", &[n]).unwrap();
            assert_eq!(f.d2f(0.0), 0.0);
            assert!(f.df(0.0).is_finite());
        }
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(
            make_catalog_fn("sin", &[]),
            Err(CertError::UnknownCatalogName(_))
        ));
        assert!(matches!(
            make_catalog_fn("power", &[]),
            Err(CertError::InvalidParams { .. })
        ));
        assert!(matches!(
            make_catalog_fn("recip", &[1.0]),
            Err(CertError::InvalidParams { .. })
        ));
        assert!(matches!(
            make_catalog_fn("poly", &[]),
            Err(CertError::InvalidParams { .. })
        ));
        assert!(parse_fn_spec("poly:1,x").is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "power:2",
            "power:-3",
            "power:2.5",
            "recip",
            "neglog",
            "exp",
            "poly:1,-2,0.5",
        ] {
            assert_eq!(parse_fn_spec(s).unwrap().label(), s);
        }
    }

    #[test]
    fn poly_derivatives() {
        // t^3 - 1.5 t^2
        let f = parse_fn_spec("poly:0,0,-1.5,1").unwrap();
        assert_eq!(f.df(0.0), 0.0);
        assert_eq!(f.df(1.0), 0.0);
        assert_eq!(f.d2f(0.5), 0.0);
    }

    #[test]
    fn interval_invariants() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        let i = iv(0.0, 1.0);
        assert_eq!(i.midpoint(), 0.5);
        assert_eq!(i.quarter_point(), 0.25);
        assert!(i.check_left_half(0.5).is_ok());
        assert!(i.check_left_half(0.0).is_ok());
        assert!(i.check_left_half(0.6).is_err());
        let cells = i.split(3).unwrap();
        assert_eq!(cells.len(), 3);
        assert_eq!(cells[2].b(), 1.0);
        assert_eq!(cells[0].b(), cells[1].a());
    }

    #[test]
    fn constant_second_derivative_is_affine() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        let r = check_shape(&f, &iv(0.0, 1.0), 1.0, 256).unwrap();
        assert_eq!(r.verdict, ShapeVerdict::Affine);
        assert_eq!(r.max_violation, 0.0);
    }

    #[test]
    fn recip_is_convex() {
        let f = make_catalog_fn("recip", &[]).unwrap();
        let r = check_shape(&f, &iv(1.0, 2.0), 1.0, 256).unwrap();
        assert_eq!(r.verdict, ShapeVerdict::Convex);
        assert!(r.max_violation > 10.0 * r.tol);
    }

    #[test]
    fn neglog_squared_is_convex() {
        let f = make_catalog_fn("neglog", &[]).unwrap();
        let r = check_shape(&f, &iv(1.0, 2.0), 2.0, 256).unwrap();
        assert_eq!(r.verdict, ShapeVerdict::Convex);
    }

    #[test]
    fn sqrt_second_derivative_is_concave() {
        // f'' = 3.75 sqrt(t)
        let f = make_catalog_fn("power", &[2.5]).unwrap();
        let r = check_shape(&f, &iv(1.0, 4.0), 1.5, 256).unwrap();
        assert_eq!(r.verdict, ShapeVerdict::Concave);
        let r = check_shape(&f, &iv(1.0, 4.0), 3.0, 256).unwrap();
        assert_eq!(r.verdict, ShapeVerdict::Convex);
    }

    #[test]
    fn sign_changing_curvature_is_neither() {
        // f'' = 2 - 12 t^2 changes sign inside [0, 1]
        let f = parse_fn_spec("poly:0,0,1,0,-1").unwrap();
        let r = check_shape(&f, &iv(0.0, 1.0), 1.0, 256).unwrap();
        assert_eq!(r.verdict, ShapeVerdict::Neither);
        assert!(r.violating_point.is_some());
    }

    #[test]
    fn shape_errors() {
        let f = make_catalog_fn("recip", &[]).unwrap();
        assert!(matches!(
            check_shape(&f, &iv(0.0, 1.0), 1.0, 256),
            Err(CertError::DomainViolation { .. })
        ));
        assert!(matches!(
            check_shape(&f, &iv(-1.0, 1.0), 1.0, 256),
            Err(CertError::DomainViolation { .. })
        ));
        assert!(check_shape(&f, &iv(1.0, 2.0), 1.0, 8).is_err());
        assert!(check_shape(&f, &iv(1.0, 2.0), 0.5, 64).is_err());
        let huge = make_catalog_fn("exp", &[]).unwrap();
        assert!(matches!(
            check_shape(&huge, &iv(700.0, 720.0), 1.0, 64),
            Err(CertError::NonFiniteSample { .. })
        ));
    }

    #[test]
    fn user_function_falls_back_to_finite_differences() {
        let f = Fn2::user(
            "cube",
            Arc::new(|t: f64| t * t * t),
            None,
            None,
            Domain::Real,
        );
        assert!((f.df(2.0) - 12.0).abs() < 1e-7);
        assert!((f.d2f(2.0) - 12.0).abs() < 1e-5);
    }
}
