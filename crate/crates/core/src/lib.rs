//! Two-point companion quadrature with a-priori error certificates.
//!
//! For `x ∈ [a, (a+b)/2]` the mean value of `f` over `[a, b]` is approximated
//! by
//!
//! ```text
//! Q(x) = ½[f(x) + f(a+b-x)] - ½(x - (3a+b)/4)[f'(x) - f'(a+b-x)]
//! ```
//!
//! and the error is bounded using convexity or concavity of `|f''|^q`,
//! which is checked by sampling before a bound is issued.
//!
//! ```
//! use certquad::{certify, make_catalog_fn, CertRequest, Interval};
//!
//! let f = make_catalog_fn("recip", &[]).unwrap();
//! let iv = Interval::new(1.0, 2.0).unwrap();
//! let c = certify(&CertRequest::new(f, iv)).unwrap();
//! assert!((c.estimate() - std::f64::consts::LN_2).abs() <= c.bound());
//! ```

pub mod bounds;
pub mod certify;
pub mod error;
pub mod funcat;
pub mod identity;
pub mod means;
pub mod oracle;

pub use bounds::{BoundCertificate, Family, HolderPair, Hypothesis, Theorem};
pub use certify::{
    certify, composite_certify, optimize_p, optimize_x, CertRequest, Certification,
    CompositeCertificate, FamilyChoice, XChoice,
};
pub use error::{CertError, Result};
pub use funcat::{check_shape, make_catalog_fn, parse_fn_spec, Fn2, Interval, ShapeVerdict};
pub use identity::{companion_rule, identity_residual, kernel_rhs};
pub use means::{check_proposition, mean, MeanKind, PropositionId, PropositionReport};
