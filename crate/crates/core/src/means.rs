//! Arithmetic, logarithmic, generalized logarithmic and identric means, and
//! the inequalities between them that follow from the companion-rule bounds.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bounds::{
    bound_convex_abs, bound_convex_q, q_sum, trapezoid_certificate, HolderPair, Hypothesis,
};
use crate::error::{CertError, Result};
use crate::funcat::{make_catalog_fn, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeanKind {
    Arithmetic,
    Logarithmic,
    /// `L_n`, `n ∉ {-1, 0}`.
    GeneralizedLog(i32),
    Identric,
}

fn ordered(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(CertError::NonPositiveArgument(alpha, beta));
    }
    Ok(if alpha <= beta {
        (alpha, beta)
    } else {
        (beta, alpha)
    })
}

/// `L_n^n(a, b) = (b^(n+1) - a^(n+1)) / ((b - a)(n + 1))` for `a < b`,
/// expanded so the `b - a` cancels algebraically.
fn gen_log_power(a: f64, b: f64, n: i32) -> f64 {
    if n >= 1 {
        let s: f64 = (0..=n).map(|k| a.powi(k) * b.powi(n - k)).sum();
        s / f64::from(n + 1)
    } else {
        // n = -(m + 1): b^-m - a^-m = -(b - a) Σ a^k b^(m-1-k) / (a b)^m.
        let m = -(n + 1);
        let s: f64 = (0..m).map(|k| a.powi(k) * b.powi(m - 1 - k)).sum();
        s / (f64::from(m) * a.powi(m) * b.powi(m))
    }
}

/// `ln I(a, b) = ln b + ln(1+r)/r - 1` with `r = (b - a)/a`.
fn ln_identric(a: f64, b: f64) -> f64 {
    let r = (b - a) / a;
    b.ln() + r.ln_1p() / r - 1.0
}

pub fn mean(kind: MeanKind, alpha: f64, beta: f64) -> Result<f64> {
    if let MeanKind::GeneralizedLog(n) = kind {
        if n == 0 || n == -1 {
            return Err(CertError::InvalidOrder(n));
        }
    }
    let (a, b) = ordered(alpha, beta)?;
    if a == b {
        return Ok(a);
    }
    Ok(match kind {
        MeanKind::Arithmetic => 0.5 * a + 0.5 * b,
        MeanKind::Logarithmic => (b - a) / ((b - a) / a).ln_1p(),
        MeanKind::GeneralizedLog(n) => gen_log_power(a, b, n).powf(1.0 / f64::from(n)),
        MeanKind::Identric => ln_identric(a, b).exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PropositionId {
    P31,
    P32,
    /// `^{1/q}` restored on the endpoint sum, uncorrected trapezoid.
    P33,
    #[serde(rename = "P33_paper_literal")]
    P33PaperLiteral,
    /// Endpoint rule with its derivative correction against the restored rhs.
    #[serde(rename = "P33_rigorous")]
    P33Rigorous,
    /// Endpoint samples raised with their constants: `(2/a³)^q`, `(128/(3a+b)³)^q`.
    P34,
    #[serde(rename = "P34_paper_literal")]
    P34PaperLiteral,
}

impl PropositionId {
    pub const ALL: [PropositionId; 7] = [
        PropositionId::P31,
        PropositionId::P32,
        PropositionId::P33PaperLiteral,
        PropositionId::P33,
        PropositionId::P33Rigorous,
        PropositionId::P34,
        PropositionId::P34PaperLiteral,
    ];

    /// Readings the test suites require to hold.
    pub fn asserted(self) -> bool {
        matches!(
            self,
            PropositionId::P31
                | PropositionId::P32
                | PropositionId::P33Rigorous
                | PropositionId::P34
        )
    }

    pub fn needs_p(self) -> bool {
        !matches!(self, PropositionId::P31 | PropositionId::P32)
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PropositionId::P31 => "P31",
            PropositionId::P32 => "P32",
            PropositionId::P33 => "P33",
            PropositionId::P33PaperLiteral => "P33_paper_literal",
            PropositionId::P33Rigorous => "P33_rigorous",
            PropositionId::P34 => "P34",
            PropositionId::P34PaperLiteral => "P34_paper_literal",
        };
        f.write_str(s)
    }
}

/// Proposition groups as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropositionGroup {
    P31,
    P32,
    P33,
    P34,
}

impl PropositionGroup {
    pub fn readings(self) -> &'static [PropositionId] {
        match self {
            PropositionGroup::P31 => &[PropositionId::P31],
            PropositionGroup::P32 => &[PropositionId::P32],
            PropositionGroup::P33 => &[
                PropositionId::P33PaperLiteral,
                PropositionId::P33,
                PropositionId::P33Rigorous,
            ],
            PropositionGroup::P34 => &[PropositionId::P34, PropositionId::P34PaperLiteral],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PropositionParams {
    /// Order of the generalized logarithmic mean (P32).
    pub n: Option<i32>,
    /// Hölder exponent (P33, P34).
    pub p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionReport {
    pub id: PropositionId,
    pub a: f64,
    pub b: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub params: BTreeMap<&'static str, f64>,
    /// The same bound from the general certificate operations.
    pub general_rhs: f64,
    /// `general_rhs` and `rhs` agree to relative `1e-12`.
    pub general_consistent: bool,
    pub asserted: bool,
}

impl PropositionReport {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

pub fn holds(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + 1e-12 * (1.0 + rhs)
}

fn agree(general: f64, printed: f64) -> bool {
    (general - printed).abs() <= 1e-12 * general.abs().max(printed.abs())
}

fn holder(p: Option<f64>) -> Result<HolderPair> {
    match p {
        Some(p) => HolderPair::new(p),
        None => Err(CertError::InvalidRequest("this proposition needs p".into())),
    }
}

pub fn check_proposition(
    id: PropositionId,
    a: f64,
    b: f64,
    params: &PropositionParams,
) -> Result<PropositionReport> {
    if !(a > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(CertError::NonPositiveArgument(a, b));
    }
    let iv = Interval::new(a, b)?;
    let w = b - a;
    let hyp = Hypothesis::default();
    let mut pm = BTreeMap::new();

    let (lhs, rhs, general_rhs) = match id {
        PropositionId::P31 => {
            let lhs = (1.0 / mean(MeanKind::Logarithmic, a, b)?
                - mean(
                    MeanKind::Arithmetic,
                    4.0 / (3.0 * a + b),
                    4.0 / (a + 3.0 * b),
                )?)
            .abs();
            let rhs = w * w / 768.0
                * ((a.powi(3) + b.powi(3)) / (a.powi(3) * b.powi(3))
                    + 448.0 * ((3.0 * a + b).powi(-3) + (a + 3.0 * b).powi(-3)));
            let f = make_catalog_fn("recip", &[])?;
            let general = bound_convex_abs(&f, &iv, iv.quarter_point(), hyp)?.bound;
            (lhs, rhs, general)
        }
        PropositionId::P32 => {
            let n = params
                .n
                .ok_or_else(|| CertError::InvalidRequest("P32 needs n".into()))?;
            if n.abs() < 2 {
                return Err(CertError::InvalidOrder(n));
            }
            pm.insert("n", f64::from(n));
            let am = 0.5 * a + 0.5 * b;
            let lhs = if n >= 2 {
                // Mean of t^n minus m^n, expanded about m: only even moments
                // of t - m survive, so nothing cancels.
                let h = 0.5 * w;
                let mut s = 0.0;
                let mut binom = 1.0;
                for k in 1..=n {
                    binom = binom * f64::from(n - k + 1) / f64::from(k);
                    if k % 2 == 0 {
                        s += binom * am.powi(n - k) * h.powi(k) / f64::from(k + 1);
                    }
                }
                s
            } else {
                (gen_log_power(a, b, n) - am.powi(n)).abs()
            };
            let nf = f64::from(n);
            let rhs = nf * (nf - 1.0) * w * w / 192.0
                * (a.powi(n - 2) + 6.0 * am.powi(n - 2) + b.powi(n - 2));
            let f = make_catalog_fn("power", &[nf])?;
            let general = bound_convex_abs(&f, &iv, iv.midpoint(), hyp)?.bound;
            (lhs, rhs, general)
        }
        PropositionId::P33 | PropositionId::P33PaperLiteral | PropositionId::P33Rigorous => {
            let hp = holder(params.p)?;
            let (p, q) = (hp.p(), hp.q());
            pm.insert("p", p);
            pm.insert("q", q);
            let r = w / a;
            let l = r.ln_1p();
            // A(ln a, ln b) - ln I = 1 - ln(1+r)/r - ln(1+r)/2
            let trap_err = 1.0 - l / r - 0.5 * l;
            let scale = w * w / (2f64.powf(3.0 + 1.0 / q) * (2.0 * p + 1.0).powf(1.0 / p));
            let f = make_catalog_fn("neglog", &[])?;
            match id {
                PropositionId::P33Rigorous => {
                    let lhs = (trap_err + w * w / (8.0 * a * b)).abs();
                    let rhs = scale * q_sum(a.powi(-2), b.powi(-2), q);
                    let general = bound_convex_q(&f, &iv, a, hp, hyp)?.bound;
                    (lhs, rhs, general)
                }
                _ => {
                    let rhs = if id == PropositionId::P33 {
                        scale * q_sum(a.powi(-2), b.powi(-2), q)
                    } else {
                        scale * (a.powf(-2.0 * q) + b.powf(-2.0 * q))
                    };
                    let general = trapezoid_certificate(&f, &iv, hp, hyp)?.bound;
                    (trap_err.abs(), rhs, general)
                }
            }
        }
        PropositionId::P34 | PropositionId::P34PaperLiteral => {
            let hp = holder(params.p)?;
            let (p, q) = (hp.p(), hp.q());
            pm.insert("p", p);
            pm.insert("q", q);
            let lhs = (1.0 / mean(MeanKind::Logarithmic, a, b)?
                - mean(
                    MeanKind::Arithmetic,
                    4.0 / (3.0 * a + b),
                    4.0 / (a + 3.0 * b),
                )?)
            .abs();
            let scale = w * w / (2f64.powf(7.0 + 1.0 / q) * (2.0 * p + 1.0).powf(1.0 / p));
            let (u, v) = (3.0 * a + b, a + 3.0 * b);
            let rhs = if id == PropositionId::P34 {
                let (ea, e1, e3, eb) = (
                    2.0 / a.powi(3),
                    128.0 / u.powi(3),
                    128.0 / v.powi(3),
                    2.0 / b.powi(3),
                );
                scale * (q_sum(ea, e1, q) + 2.0 * q_sum(e1, e3, q) + q_sum(e3, eb, q))
            } else {
                let t = |c: f64, base: f64| c / base.powf(3.0 * q);
                let inv_q = 1.0 / q;
                scale
                    * ((t(2.0, a) + t(128.0, u)).powf(inv_q)
                        + 2.0 * (t(128.0, u) + t(128.0, v)).powf(inv_q)
                        + (t(128.0, v) + t(2.0, b)).powf(inv_q))
            };
            let f = make_catalog_fn("recip", &[])?;
            let general = bound_convex_q(&f, &iv, iv.quarter_point(), hp, hyp)?.bound;
            (lhs, rhs, general)
        }
    };

    Ok(PropositionReport {
        id,
        a,
        b,
        lhs,
        rhs,
        holds: holds(lhs, rhs),
        params: pm,
        general_rhs,
        general_consistent: agree(general_rhs, rhs),
        asserted: id.asserted(),
    })
}

/// Every reading of a proposition group.
pub fn check_group(
    group: PropositionGroup,
    a: f64,
    b: f64,
    params: &PropositionParams,
) -> Result<Vec<PropositionReport>> {
    group
        .readings()
        .iter()
        .map(|&id| check_proposition(id, a, b, params))
        .collect()
}
