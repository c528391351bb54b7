//! The two-point companion rule and its exact kernel error representation.
//!
//! For `x ∈ [a, (a+b)/2]` the rule
//!
//! ```text
//! Q(x) = ½[f(x) + f(a+b-x)] - ½(x - (3a+b)/4)[f'(x) - f'(a+b-x)]
//! ```
//!
//! approximates the mean value of `f`, and its error equals
//!
//! ```text
//! 1/(2(b-a)) [ ∫_a^x (t-a)² f'' + ∫_x^{a+b-x} (t-(a+b)/2)² f'' + ∫_{a+b-x}^b (t-b)² f'' ].
//! ```

use serde::Serialize;

use crate::error::Result;
use crate::funcat::{Fn2, Interval};
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompanionValue {
    pub x: f64,
    pub rule_value: f64,
    /// `½(x - (3a+b)/4)[f'(x) - f'(a+b-x)]`, already subtracted from `rule_value`.
    pub derivative_term: f64,
}

impl CompanionValue {
    /// `½[f(x) + f(a+b-x)]`, the rule without its derivative correction.
    pub fn symmetric_part(&self) -> f64 {
        self.rule_value + self.derivative_term
    }
}

/// Evaluates the companion rule at `x ∈ [a, (a+b)/2]`.
pub fn companion_rule(func: &Fn2, iv: &Interval, x: f64) -> Result<CompanionValue> {
    iv.check_left_half(x)?;
    func.check_interval(iv)?;
    let m = iv.midpoint();
    if x == m {
        // Both abscissae coincide; the correction has the factor f'(m) - f'(m).
        return Ok(CompanionValue {
            x,
            rule_value: func.f(m),
            derivative_term: 0.0,
        });
    }
    let y = iv.reflect(x);
    let offset = x - iv.quarter_point();
    let derivative_term = if offset == 0.0 {
        0.0
    } else {
        0.5 * offset * (func.df(x) - func.df(y))
    };
    let rule_value = 0.5 * (func.f(x) + func.f(y)) - derivative_term;
    Ok(CompanionValue {
        x,
        rule_value,
        derivative_term,
    })
}

fn weighted_piece(func: &Fn2, lo: f64, hi: f64, centre: f64, tol: f64) -> Result<f64> {
    if lo >= hi {
        return Ok(0.0);
    }
    let r = oracle::integrate(
        |t| {
            let d = t - centre;
            d * d * func.d2f(t)
        },
        lo,
        hi,
        tol,
    )?;
    Ok(r.value)
}

/// Kernel-weighted integral of `f''`, each of the three pieces integrated by
/// the oracle to absolute tolerance `oracle_tol`.
pub fn kernel_rhs(func: &Fn2, iv: &Interval, x: f64, oracle_tol: f64) -> Result<f64> {
    iv.check_left_half(x)?;
    func.check_interval(iv)?;
    let (a, b) = (iv.a(), iv.b());
    let y = iv.reflect(x);
    let left = weighted_piece(func, a, x, a, oracle_tol)?;
    let middle = weighted_piece(func, x, y, iv.midpoint(), oracle_tol)?;
    let right = weighted_piece(func, y, b, b, oracle_tol)?;
    Ok((left + middle + right) / (2.0 * iv.width()))
}

/// `|(mean - rule_value) - kernel_rhs|` with both the mean and the kernel
/// integrals taken from the oracle at [`oracle::DEFAULT_TOL`].
pub fn identity_residual(func: &Fn2, iv: &Interval, x: f64) -> Result<f64> {
    let rule = companion_rule(func, iv, x)?;
    let mean = oracle::mean_value(func, iv, oracle::DEFAULT_TOL)?.value;
    let rhs = kernel_rhs(func, iv, x, oracle::DEFAULT_TOL)?;
    Ok(((mean - rule.rule_value) - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CertError;
    use crate::funcat::{make_catalog_fn, parse_fn_spec};

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn square_at_midpoint() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        let v = companion_rule(&f, &unit(), 0.5).unwrap();
        assert_eq!(v.rule_value, 0.25);
        assert_eq!(v.derivative_term, 0.0);
    }

    #[test]
    fn square_at_quarter_point() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        let v = companion_rule(&f, &unit(), 0.25).unwrap();
        assert_eq!(v.rule_value, 5.0 / 16.0);
        assert_eq!(v.derivative_term, 0.0);
    }

    #[test]
    fn square_at_left_endpoint_keeps_correction() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        let v = companion_rule(&f, &unit(), 0.0).unwrap();
        assert_eq!(v.derivative_term, 0.25);
        assert_eq!(v.rule_value, 0.25);
        assert_eq!(v.symmetric_part(), 0.5);
    }

    #[test]
    fn kernel_matches_exact_errors() {
        let sq = make_catalog_fn("power", &[2.0]).unwrap();
        let rhs = kernel_rhs(&sq, &unit(), 0.25, 1e-13).unwrap();
        assert!((rhs - 1.0 / 48.0).abs() < 1e-12);

        let cube = make_catalog_fn("power", &[3.0]).unwrap();
        let rhs = kernel_rhs(&cube, &unit(), 0.5, 1e-13).unwrap();
        assert!((rhs - 1.0 / 8.0).abs() < 1e-9);
    }

    #[test]
    fn kernel_vanishes_for_linear_functions() {
        let f = parse_fn_spec("poly:3,-2").unwrap();
        for x in [0.0, 0.1, 0.25, 0.5] {
            assert_eq!(kernel_rhs(&f, &unit(), x, 1e-12).unwrap(), 0.0);
        }
    }

    #[test]
    fn residuals_are_negligible() {
        let cases = [
            ("power:2", 0.0, 1.0, 0.3),
            ("exp", -1.0, 1.0, -0.25),
            ("recip", 1.0, 3.0, 1.5),
        ];
        for (spec, a, b, x) in cases {
            let f = parse_fn_spec(spec).unwrap();
            let iv = Interval::new(a, b).unwrap();
            let r = identity_residual(&f, &iv, x).unwrap();
            assert!(r <= 1e-9, "{spec}: residual {r:e}");
        }
    }

    #[test]
    fn range_and_domain_errors() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        assert!(matches!(
            companion_rule(&f, &unit(), 0.75),
            Err(CertError::PointOutOfRange { .. })
        ));
        assert!(matches!(
            companion_rule(&f, &unit(), -0.1),
            Err(CertError::PointOutOfRange { .. })
        ));
        let r = make_catalog_fn("recip", &[]).unwrap();
        assert!(matches!(
            companion_rule(&r, &unit(), 0.25),
            Err(CertError::DomainViolation { .. })
        ));
    }
}
