//! Certified error bounds for the companion rule.
//!
//! Three families bound `|mean - Q(x)|`:
//!
//! * [`Theorem::T21ConvexAbs`]: `|f''|` convex, samples at `a, x, a+b-x, b`;
//! * [`Theorem::T22ConvexQ`]: `|f''|^q` convex, Hölder pair `(p, q)`, same samples;
//! * [`Theorem::T23ConcaveQ`]: `|f''|^q` concave, samples at the three
//!   piece midpoints `(x+a)/2, (a+b)/2, (a+2b-x)/2`.
//!
//! The fixed-point specializations (midpoint, quarter point, trapezoid) are
//! evaluated from their own closed forms so they can be cross-checked against
//! the general formulas. Each formula is written term by term in the same
//! order as its closed form.

use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{CertError, Result};
use crate::funcat::{check_shape, Fn2, Interval, ShapeVerdict, DEFAULT_SHAPE_GRID};
use crate::identity::companion_rule;

/// Largest admissible Hölder exponent `p`.
pub const MAX_P: f64 = 1024.0;

/// Conjugate exponents with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderPair {
    p: f64,
    q: f64,
}

impl HolderPair {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0 && p <= MAX_P) {
            return Err(CertError::InvalidHolder(p));
        }
        let q = p / (p - 1.0);
        debug_assert!((1.0 / p + 1.0 / q - 1.0).abs() <= 1e-14);
        Ok(Self { p, q })
    }

    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 1.0 && q.is_finite()) {
            return Err(CertError::InvalidHolder(f64::NAN));
        }
        Self::new(q / (q - 1.0))
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Which inequality a certificate comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Theorem {
    #[serde(rename = "T21_ConvexAbs")]
    T21ConvexAbs,
    #[serde(rename = "T22_ConvexQ")]
    T22ConvexQ,
    #[serde(rename = "T23_ConcaveQ")]
    T23ConcaveQ,
    #[serde(rename = "Baseline_Ostrowski")]
    BaselineOstrowski,
    #[serde(rename = "Cor11_s1")]
    Cor11S1,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T21ConvexAbs => "T21_ConvexAbs",
            Theorem::T22ConvexQ => "T22_ConvexQ",
            Theorem::T23ConcaveQ => "T23_ConcaveQ",
            Theorem::BaselineOstrowski => "Baseline_Ostrowski",
            Theorem::Cor11S1 => "Cor11_s1",
        })
    }
}

/// The three certificate families the dispatcher can choose from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    ConvexAbs,
    ConvexQ,
    ConcaveQ,
}

impl Family {
    pub fn theorem(self) -> Theorem {
        match self {
            Family::ConvexAbs => Theorem::T21ConvexAbs,
            Family::ConvexQ => Theorem::T22ConvexQ,
            Family::ConcaveQ => Theorem::T23ConcaveQ,
        }
    }

    pub fn needs_holder(self) -> bool {
        !matches!(self, Family::ConvexAbs)
    }
}

/// Where along `[a, (a+b)/2]` a certificate was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Specialization {
    General,
    Midpoint,
    QuarterPoint,
    Trapezoid,
}

/// How the shape hypothesis of a family is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Run [`check_shape`] on a grid of this many intervals.
    Verify { grid_size: usize },
    /// Skip the check; the certificate records that it was forced.
    Forced,
}

impl Default for Hypothesis {
    fn default() -> Self {
        Hypothesis::Verify {
            grid_size: DEFAULT_SHAPE_GRID,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub label: &'static str,
    pub abscissa: f64,
    pub value: f64,
}

/// A certified bound on `|mean - estimate|` together with everything needed
/// to recompute it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub theorem: Theorem,
    pub specialization: Specialization,
    pub x: f64,
    pub holder: Option<HolderPair>,
    pub bound: f64,
    /// Rule value the bound applies to.
    pub estimate: f64,
    /// `|f''|` values the formula reads.
    pub samples: Vec<Sample>,
    pub assumes_symmetric_derivative: bool,
    pub hypothesis_forced: bool,
    /// Shape verdict the hypothesis check produced, if it ran.
    pub shape: Option<ShapeVerdict>,
    /// Derivative correction that turns a symmetric-derivative estimate into
    /// an unconditional one: `mean - (estimate - correction)` is bounded.
    pub correction_term: Option<f64>,
    /// Set when the symmetric-derivative hypothesis fails numerically.
    pub symmetry_violated: Option<bool>,
}

impl BoundCertificate {
    /// Estimate with the derivative correction applied, when one is recorded.
    pub fn corrected_estimate(&self) -> f64 {
        self.estimate - self.correction_term.unwrap_or(0.0)
    }
}

/// Shortest round-trip text of a float, used as a JSON object key.
pub fn float_key(v: f64) -> String {
    serde_json::to_string(&v).unwrap_or_else(|_| v.to_string())
}

struct SampleMap<'a>(&'a [Sample]);

impl Serialize for SampleMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seen: Vec<f64> = Vec::with_capacity(self.0.len());
        let mut map = s.serialize_map(None)?;
        for smp in self.0 {
            if seen.contains(&smp.abscissa) {
                continue;
            }
            seen.push(smp.abscissa);
            map.serialize_entry(&float_key(smp.abscissa), &smp.value)?;
        }
        map.end()
    }
}

impl Serialize for BoundCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundCertificate", 13)?;
        st.serialize_field("theorem", &self.theorem)?;
        st.serialize_field("specialization", &self.specialization)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("p", &self.holder.map(|h| h.p()))?;
        st.serialize_field("q", &self.holder.map(|h| h.q()))?;
        st.serialize_field("estimate", &self.estimate)?;
        st.serialize_field("bound", &self.bound)?;
        st.serialize_field("samples", &SampleMap(&self.samples))?;
        st.serialize_field(
            "assumes_symmetric_derivative",
            &self.assumes_symmetric_derivative,
        )?;
        st.serialize_field("hypothesis_forced", &self.hypothesis_forced)?;
        st.serialize_field("shape", &self.shape)?;
        if let Some(c) = self.correction_term {
            st.serialize_field("correction_term", &c)?;
        } else {
            st.skip_field("correction_term")?;
        }
        if let Some(v) = self.symmetry_violated {
            st.serialize_field("symmetry_violated", &v)?;
        } else {
            st.skip_field("symmetry_violated")?;
        }
        st.end()
    }
}

// ---------------------------------------------------------------------------
// Closed forms. Sample arguments are |f''| values at the documented abscissae.

/// `(u^q + v^q)^(1/q)`, scaled by the larger argument so neither overflow nor
/// underflow can change the value.
pub fn q_sum(u: f64, v: f64, q: f64) -> f64 {
    let m = u.max(v);
    if m == 0.0 {
        return 0.0;
    }
    m * ((u / m).powf(q) + (v / m).powf(q)).powf(1.0 / q)
}

fn holder_factor(p: f64) -> f64 {
    (2.0 * p + 1.0).powf(1.0 / p)
}

/// `|f''|` convex; samples `[a, x, a+b-x, b]`.
pub fn t21_formula(iv: &Interval, x: f64, s: [f64; 4]) -> f64 {
    let [fa, fx, fy, fb] = s;
    let (a, b) = (iv.a(), iv.b());
    let u3 = (x - a).powi(3);
    let w3 = (a + b - 2.0 * x).powi(3);
    u3 / (24.0 * (b - a)) * (fa + fb) + (6.0 * u3 + w3) / (48.0 * (b - a)) * (fx + fy)
}

/// `|f''|^q` convex; samples `[a, x, a+b-x, b]`.
pub fn t22_formula(iv: &Interval, x: f64, hp: HolderPair, s: [f64; 4]) -> f64 {
    let [fa, fx, fy, fb] = s;
    let (a, b) = (iv.a(), iv.b());
    let (p, q) = (hp.p(), hp.q());
    let u3 = (x - a).powi(3);
    let w3 = (a + b - 2.0 * x).powi(3);
    let pre = 1.0 / (2f64.powf(1.0 + 1.0 / q) * (b - a) * holder_factor(p));
    pre * (u3 * q_sum(fa, fx, q) + w3 / 4.0 * q_sum(fx, fy, q) + u3 * q_sum(fy, fb, q))
}

/// `|f''|^q` concave; samples `[(x+a)/2, (a+b)/2, (a+2b-x)/2]`. Only `p`
/// enters.
pub fn t23_formula(iv: &Interval, x: f64, p: f64, s: [f64; 3]) -> f64 {
    let [fl, fm, fr] = s;
    let (a, b) = (iv.a(), iv.b());
    let u3 = (x - a).powi(3);
    let w3 = (a + b - 2.0 * x).powi(3);
    1.0 / (2.0 * (b - a) * holder_factor(p)) * (u3 * fl + w3 / 4.0 * fm + u3 * fr)
}

/// Midpoint rule, `|f''|` convex; samples `[a, (a+b)/2, b]`.
pub fn midpoint_convex_abs_formula(iv: &Interval, s: [f64; 3]) -> f64 {
    let [fa, fm, fb] = s;
    iv.width().powi(2) / 192.0 * (fa + 6.0 * fm + fb)
}

/// Quarter-point rule, `|f''|` convex; samples `[a, (3a+b)/4, (a+3b)/4, b]`.
pub fn quarter_convex_abs_formula(iv: &Interval, s: [f64; 4]) -> f64 {
    let [fa, f1, f3, fb] = s;
    iv.width().powi(2) / 1536.0 * (fa + 7.0 * f1 + 7.0 * f3 + fb)
}

/// Trapezoid rule under `f'(a) = f'(b)`, `|f''|^q` convex; samples `[a, b]`.
pub fn trapezoid_convex_q_formula(iv: &Interval, hp: HolderPair, s: [f64; 2]) -> f64 {
    let [fa, fb] = s;
    let (p, q) = (hp.p(), hp.q());
    iv.width().powi(2) / (2f64.powf(3.0 + 1.0 / q) * holder_factor(p)) * q_sum(fa, fb, q)
}

/// Midpoint rule, `|f''|^q` convex; samples `[a, (a+b)/2, b]`.
pub fn midpoint_convex_q_formula(iv: &Interval, hp: HolderPair, s: [f64; 3]) -> f64 {
    let [fa, fm, fb] = s;
    let (p, q) = (hp.p(), hp.q());
    iv.width().powi(2) / (2f64.powf(4.0 + 1.0 / q) * holder_factor(p))
        * (q_sum(fa, fm, q) + q_sum(fm, fb, q))
}

/// Quarter-point rule, `|f''|^q` convex; samples `[a, (3a+b)/4, (a+3b)/4, b]`.
pub fn quarter_convex_q_formula(iv: &Interval, hp: HolderPair, s: [f64; 4]) -> f64 {
    let [fa, f1, f3, fb] = s;
    let (p, q) = (hp.p(), hp.q());
    iv.width().powi(2) / (2f64.powf(7.0 + 1.0 / q) * holder_factor(p))
        * (q_sum(fa, f1, q) + 2.0 * q_sum(f1, f3, q) + q_sum(f3, fb, q))
}

/// Quarter-point rule, `|f''|^q` concave; samples `[(7a+b)/8, (a+b)/2, (a+7b)/8]`.
pub fn quarter_concave_q_formula(iv: &Interval, p: f64, s: [f64; 3]) -> f64 {
    let [fl, fm, fr] = s;
    iv.width().powi(2) / (128.0 * holder_factor(p)) * (fl + 2.0 * fm + fr)
}

/// Midpoint rule, `|f''|^q` concave (s = 1); samples `[(3a+b)/4, (a+3b)/4]`.
pub fn midpoint_concave_q_formula(iv: &Interval, p: f64, s: [f64; 2]) -> f64 {
    let [f1, f3] = s;
    iv.width().powi(2) / (16.0 * holder_factor(p)) * (f1 + f3)
}

// ---------------------------------------------------------------------------

fn require_shape(
    func: &Fn2,
    iv: &Interval,
    q: f64,
    hyp: Hypothesis,
    family: Family,
) -> Result<Option<ShapeVerdict>> {
    let grid_size = match hyp {
        Hypothesis::Forced => return Ok(None),
        Hypothesis::Verify { grid_size } => grid_size,
    };
    let report = check_shape(func, iv, q, grid_size)?;
    let ok = match family {
        Family::ConvexAbs | Family::ConvexQ => report.verdict.admits_convex(),
        Family::ConcaveQ => report.verdict.admits_concave(),
    };
    if ok {
        Ok(Some(report.verdict))
    } else {
        Err(CertError::ShapeHypothesisUnverified {
            q,
            verdict: report.verdict.to_string(),
            required: match family {
                Family::ConcaveQ => "concave",
                _ => "convex",
            },
        })
    }
}

fn sample(func: &Fn2, label: &'static str, t: f64) -> Result<Sample> {
    Ok(Sample {
        label,
        abscissa: t,
        value: func.abs_d2f(t)?,
    })
}

fn four_samples(func: &Fn2, iv: &Interval, x: f64) -> Result<Vec<Sample>> {
    Ok(vec![
        sample(func, "a", iv.a())?,
        sample(func, "x", x)?,
        sample(func, "a+b-x", iv.reflect(x))?,
        sample(func, "b", iv.b())?,
    ])
}

fn piece_midpoints(func: &Fn2, iv: &Interval, x: f64) -> Result<Vec<Sample>> {
    let (a, b) = (iv.a(), iv.b());
    Ok(vec![
        sample(func, "(x+a)/2", (x + a) / 2.0)?,
        sample(func, "(a+b)/2", iv.midpoint())?,
        sample(func, "(a+2b-x)/2", (a + 2.0 * b - x) / 2.0)?,
    ])
}

fn values<const N: usize>(s: &[Sample]) -> [f64; N] {
    let mut out = [0.0; N];
    for (o, smp) in out.iter_mut().zip(s) {
        *o = smp.value;
    }
    out
}

fn checked_bound(bound: f64) -> Result<f64> {
    if bound.is_finite() && bound >= 0.0 {
        Ok(bound)
    } else {
        Err(CertError::NonFiniteSample { t: f64::NAN })
    }
}

fn holder_for(family: Family, p: Option<f64>) -> Result<Option<HolderPair>> {
    match (family.needs_holder(), p) {
        (false, _) => Ok(None),
        (true, Some(p)) => HolderPair::new(p).map(Some),
        (true, None) => Err(CertError::InvalidRequest(format!(
            "{} needs a Hölder exponent",
            family.theorem()
        ))),
    }
}

/// Bound of `family` at `x` with the shape hypothesis skipped. This is the
/// objective the parameter optimizers minimize.
pub fn family_bound(
    func: &Fn2,
    iv: &Interval,
    x: f64,
    family: Family,
    p: Option<f64>,
) -> Result<f64> {
    iv.check_left_half(x)?;
    let hp = holder_for(family, p)?;
    let bound = match family {
        Family::ConvexAbs => t21_formula(iv, x, values(&four_samples(func, iv, x)?)),
        Family::ConvexQ => t22_formula(iv, x, hp.unwrap(), values(&four_samples(func, iv, x)?)),
        Family::ConcaveQ => t23_formula(
            iv,
            x,
            hp.unwrap().p(),
            values(&piece_midpoints(func, iv, x)?),
        ),
    };
    checked_bound(bound)
}

/// Certificate of `family` at a general `x ∈ [a, (a+b)/2]`.
pub fn certificate_for(
    func: &Fn2,
    iv: &Interval,
    x: f64,
    family: Family,
    p: Option<f64>,
    hyp: Hypothesis,
) -> Result<BoundCertificate> {
    let hp = holder_for(family, p)?;
    match family {
        Family::ConvexAbs => bound_convex_abs(func, iv, x, hyp),
        Family::ConvexQ => bound_convex_q(func, iv, x, hp.unwrap(), hyp),
        Family::ConcaveQ => bound_concave_q(func, iv, x, hp.unwrap(), hyp),
    }
}

/// Bound for `|f''|` convex, from `|f''|` at `a, x, a+b-x, b`.
pub fn bound_convex_abs(
    func: &Fn2,
    iv: &Interval,
    x: f64,
    hyp: Hypothesis,
) -> Result<BoundCertificate> {
    iv.check_left_half(x)?;
    let rule = companion_rule(func, iv, x)?;
    let shape = require_shape(func, iv, 1.0, hyp, Family::ConvexAbs)?;
    let samples = four_samples(func, iv, x)?;
    let bound = checked_bound(t21_formula(iv, x, values(&samples)))?;
    Ok(BoundCertificate {
        theorem: Theorem::T21ConvexAbs,
        specialization: Specialization::General,
        x,
        holder: None,
        bound,
        estimate: rule.rule_value,
        samples,
        assumes_symmetric_derivative: false,
        hypothesis_forced: hyp == Hypothesis::Forced,
        shape,
        correction_term: None,
        symmetry_violated: None,
    })
}

/// Bound for `|f''|^q` convex, from `|f''|` at `a, x, a+b-x, b`.
pub fn bound_convex_q(
    func: &Fn2,
    iv: &Interval,
    x: f64,
    hp: HolderPair,
    hyp: Hypothesis,
) -> Result<BoundCertificate> {
    iv.check_left_half(x)?;
    let rule = companion_rule(func, iv, x)?;
    let shape = require_shape(func, iv, hp.q(), hyp, Family::ConvexQ)?;
    let samples = four_samples(func, iv, x)?;
    let bound = checked_bound(t22_formula(iv, x, hp, values(&samples)))?;
    Ok(BoundCertificate {
        theorem: Theorem::T22ConvexQ,
        specialization: Specialization::General,
        x,
        holder: Some(hp),
        bound,
        estimate: rule.rule_value,
        samples,
        assumes_symmetric_derivative: false,
        hypothesis_forced: hyp == Hypothesis::Forced,
        shape,
        correction_term: None,
        symmetry_violated: None,
    })
}

/// Bound for `|f''|^q` concave, from `|f''|` at the three piece midpoints.
pub fn bound_concave_q(
    func: &Fn2,
    iv: &Interval,
    x: f64,
    hp: HolderPair,
    hyp: Hypothesis,
) -> Result<BoundCertificate> {
    iv.check_left_half(x)?;
    let rule = companion_rule(func, iv, x)?;
    let shape = require_shape(func, iv, hp.q(), hyp, Family::ConcaveQ)?;
    let samples = piece_midpoints(func, iv, x)?;
    let bound = checked_bound(t23_formula(iv, x, hp.p(), values(&samples)))?;
    Ok(BoundCertificate {
        theorem: Theorem::T23ConcaveQ,
        specialization: Specialization::General,
        x,
        holder: Some(hp),
        bound,
        estimate: rule.rule_value,
        samples,
        assumes_symmetric_derivative: false,
        hypothesis_forced: hyp == Hypothesis::Forced,
        shape,
        correction_term: None,
        symmetry_violated: None,
    })
}

fn shape_admits(
    func: &Fn2,
    iv: &Interval,
    q: f64,
    hyp: Hypothesis,
    family: Family,
) -> Result<Option<Option<ShapeVerdict>>> {
    match require_shape(func, iv, q, hyp, family) {
        Ok(v) => Ok(Some(v)),
        Err(CertError::ShapeHypothesisUnverified { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[allow(clippy::too_many_arguments)]
fn fixed_point_cert(
    theorem: Theorem,
    specialization: Specialization,
    x: f64,
    holder: Option<HolderPair>,
    bound: f64,
    estimate: f64,
    samples: Vec<Sample>,
    hyp: Hypothesis,
    shape: Option<ShapeVerdict>,
) -> Result<BoundCertificate> {
    Ok(BoundCertificate {
        theorem,
        specialization,
        x,
        holder,
        bound: checked_bound(bound)?,
        estimate,
        samples,
        assumes_symmetric_derivative: false,
        hypothesis_forced: hyp == Hypothesis::Forced,
        shape,
        correction_term: None,
        symmetry_violated: None,
    })
}

/// Every applicable certificate for the midpoint rule `f((a+b)/2)`.
pub fn midpoint_certificates(
    func: &Fn2,
    iv: &Interval,
    hp: Option<HolderPair>,
    hyp: Hypothesis,
) -> Result<Vec<BoundCertificate>> {
    func.check_interval(iv)?;
    let m = iv.midpoint();
    let estimate = func.f(m);
    let mut out = Vec::new();
    if let Some(shape) = shape_admits(func, iv, 1.0, hyp, Family::ConvexAbs)? {
        let samples = vec![
            sample(func, "a", iv.a())?,
            sample(func, "(a+b)/2", m)?,
            sample(func, "b", iv.b())?,
        ];
        let bound = midpoint_convex_abs_formula(iv, values(&samples));
        out.push(fixed_point_cert(
            Theorem::T21ConvexAbs,
            Specialization::Midpoint,
            m,
            None,
            bound,
            estimate,
            samples,
            hyp,
            shape,
        )?);
    }
    if let Some(hp) = hp {
        if let Some(shape) = shape_admits(func, iv, hp.q(), hyp, Family::ConvexQ)? {
            let samples = vec![
                sample(func, "a", iv.a())?,
                sample(func, "(a+b)/2", m)?,
                sample(func, "b", iv.b())?,
            ];
            let bound = midpoint_convex_q_formula(iv, hp, values(&samples));
            out.push(fixed_point_cert(
                Theorem::T22ConvexQ,
                Specialization::Midpoint,
                m,
                Some(hp),
                bound,
                estimate,
                samples,
                hyp,
                shape,
            )?);
        }
        if let Some(shape) = shape_admits(func, iv, hp.q(), hyp, Family::ConcaveQ)? {
            let samples = vec![
                sample(func, "(3a+b)/4", iv.quarter_point())?,
                sample(func, "(a+3b)/4", iv.reflect(iv.quarter_point()))?,
            ];
            let bound = midpoint_concave_q_formula(iv, hp.p(), values(&samples));
            out.push(fixed_point_cert(
                Theorem::T23ConcaveQ,
                Specialization::Midpoint,
                m,
                Some(hp),
                bound,
                estimate,
                samples,
                hyp,
                shape,
            )?);
        }
    }
    if out.is_empty() {
        return Err(no_family(func, iv, hp)?);
    }
    Ok(out)
}

/// Every applicable certificate for the quarter-point rule
/// `½[f((3a+b)/4) + f((a+3b)/4)]`.
pub fn quarter_certificates(
    func: &Fn2,
    iv: &Interval,
    hp: Option<HolderPair>,
    hyp: Hypothesis,
) -> Result<Vec<BoundCertificate>> {
    func.check_interval(iv)?;
    let (a, b) = (iv.a(), iv.b());
    let x1 = iv.quarter_point();
    let x3 = iv.reflect(x1);
    let estimate = 0.5 * (func.f(x1) + func.f(x3));
    let four = || -> Result<Vec<Sample>> {
        Ok(vec![
            sample(func, "a", a)?,
            sample(func, "(3a+b)/4", x1)?,
            sample(func, "(a+3b)/4", x3)?,
            sample(func, "b", b)?,
        ])
    };
    let mut out = Vec::new();
    if let Some(shape) = shape_admits(func, iv, 1.0, hyp, Family::ConvexAbs)? {
        let samples = four()?;
        let bound = quarter_convex_abs_formula(iv, values(&samples));
        out.push(fixed_point_cert(
            Theorem::T21ConvexAbs,
            Specialization::QuarterPoint,
            x1,
            None,
            bound,
            estimate,
            samples,
            hyp,
            shape,
        )?);
    }
    if let Some(hp) = hp {
        if let Some(shape) = shape_admits(func, iv, hp.q(), hyp, Family::ConvexQ)? {
            let samples = four()?;
            let bound = quarter_convex_q_formula(iv, hp, values(&samples));
            out.push(fixed_point_cert(
                Theorem::T22ConvexQ,
                Specialization::QuarterPoint,
                x1,
                Some(hp),
                bound,
                estimate,
                samples,
                hyp,
                shape,
            )?);
        }
        if let Some(shape) = shape_admits(func, iv, hp.q(), hyp, Family::ConcaveQ)? {
            let samples = vec![
                sample(func, "(7a+b)/8", (7.0 * a + b) / 8.0)?,
                sample(func, "(a+b)/2", iv.midpoint())?,
                sample(func, "(a+7b)/8", (a + 7.0 * b) / 8.0)?,
            ];
            let bound = quarter_concave_q_formula(iv, hp.p(), values(&samples));
            out.push(fixed_point_cert(
                Theorem::T23ConcaveQ,
                Specialization::QuarterPoint,
                x1,
                Some(hp),
                bound,
                estimate,
                samples,
                hyp,
                shape,
            )?);
        }
    }
    if out.is_empty() {
        return Err(no_family(func, iv, hp)?);
    }
    Ok(out)
}

fn no_family(func: &Fn2, iv: &Interval, hp: Option<HolderPair>) -> Result<CertError> {
    let q = hp.map_or(1.0, |h| h.q());
    let report = check_shape(func, iv, q, DEFAULT_SHAPE_GRID)?;
    Ok(CertError::ShapeHypothesisUnverified {
        q,
        verdict: report.verdict.to_string(),
        required: "convex or concave",
    })
}

/// Trapezoid certificate `(f(a) + f(b))/2` for `|f''|^q` convex.
///
/// The closed form is only valid when `f'(a) = f'(b)`; the certificate
/// therefore carries `assumes_symmetric_derivative = true`, flags a numeric
/// violation of that hypothesis, and records the derivative correction
/// `-(b-a)/8 [f'(a) - f'(b)]`. With the correction subtracted from the
/// estimate the bound holds unconditionally.
pub fn trapezoid_certificate(
    func: &Fn2,
    iv: &Interval,
    hp: HolderPair,
    hyp: Hypothesis,
) -> Result<BoundCertificate> {
    func.check_interval(iv)?;
    let shape = require_shape(func, iv, hp.q(), hyp, Family::ConvexQ)?;
    let (a, b) = (iv.a(), iv.b());
    let samples = vec![sample(func, "a", a)?, sample(func, "b", b)?];
    let bound = trapezoid_convex_q_formula(iv, hp, values(&samples));
    let (da, db) = (func.df(a), func.df(b));
    let correction = -(b - a) / 8.0 * (da - db);
    Ok(BoundCertificate {
        theorem: Theorem::T22ConvexQ,
        specialization: Specialization::Trapezoid,
        x: a,
        holder: Some(hp),
        bound: checked_bound(bound)?,
        estimate: 0.5 * (func.f(a) + func.f(b)),
        samples,
        assumes_symmetric_derivative: true,
        hypothesis_forced: hyp == Hypothesis::Forced,
        shape,
        correction_term: Some(correction),
        symmetry_violated: Some((da - db).abs() > 1e-12 * (1.0 + da.abs())),
    })
}

/// Bound `M` on `|f'|` for the classical comparison bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OstrowskiBaseline {
    m: f64,
}

impl OstrowskiBaseline {
    pub fn new(m: f64) -> Result<Self> {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(CertError::InvalidRequest(format!(
                "derivative bound M = {m} must be >= 0"
            )));
        }
        Ok(Self { m })
    }

    /// `max |f'|` over a uniform grid of `grid_size + 1` points.
    pub fn from_grid(func: &Fn2, iv: &Interval, grid_size: usize) -> Result<Self> {
        func.check_interval(iv)?;
        let mut m = 0.0_f64;
        for t in Interval::grid(iv.a(), iv.b(), grid_size.max(1)) {
            let d = func.df(t).abs();
            if !d.is_finite() {
                return Err(CertError::NonFiniteSample { t });
            }
            m = m.max(d);
        }
        Self::new(m)
    }

    pub fn m(&self) -> f64 {
        self.m
    }
}

/// Classical bound `M(b-a)[1/4 + (x-(a+b)/2)²/(b-a)²]` on `|f(x) - mean|`.
pub fn baseline_ostrowski(func: &Fn2, iv: &Interval, x: f64, m: &OstrowskiBaseline) -> Result<f64> {
    if !iv.contains(x) {
        return Err(CertError::PointOutOfRange {
            x,
            lo: iv.a(),
            hi: iv.b(),
        });
    }
    func.check_interval(iv)?;
    let w = iv.width();
    let d = x - iv.midpoint();
    Ok(m.m() * w * (0.25 + d * d / (w * w)))
}

/// Midpoint bound for `|f''|^q` concave from the prior `s = 1` result:
/// `(b-a)²/(16(2p+1)^(1/p)) [|f''((3a+b)/4)| + |f''((a+3b)/4)|]`.
pub fn cor11_s1_bound(func: &Fn2, iv: &Interval, hp: HolderPair, hyp: Hypothesis) -> Result<f64> {
    func.check_interval(iv)?;
    require_shape(func, iv, hp.q(), hyp, Family::ConcaveQ)?;
    let x1 = iv.quarter_point();
    let s = [func.abs_d2f(x1)?, func.abs_d2f(iv.reflect(x1))?];
    checked_bound(midpoint_concave_q_formula(iv, hp.p(), s))
}
