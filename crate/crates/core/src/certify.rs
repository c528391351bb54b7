//! Theorem selection, parameter optimization and composite subdivision.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{certificate_for, family_bound, BoundCertificate, Family, Hypothesis, MAX_P};
use crate::error::{CertError, Result};
use crate::funcat::{check_shape, Fn2, Interval, DEFAULT_SHAPE_GRID};

/// Number of points in the coarse scan that precedes golden-section refinement
/// of `x`.
pub const X_SCAN_POINTS: usize = 33;

/// Number of points in the coarse `ln p` scan.
pub const P_SCAN_POINTS: usize = 65;

/// Smallest `p` the optimizer visits; `q = p/(p-1)` stays finite.
pub const P_MIN: f64 = 1.001;

/// Hölder exponents `q` probed when deciding whether a q-family applies.
pub const Q_FEASIBILITY_GRID: [f64; 5] = [1.25, 1.5, 2.0, 3.0, 4.0];

/// Largest number of composite cells.
pub const MAX_SUBDIVISIONS: usize = 1 << 20;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Family requested by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyChoice {
    Auto,
    ConvexAbs,
    ConvexQ,
    ConcaveQ,
}

impl From<Family> for FamilyChoice {
    fn from(f: Family) -> Self {
        match f {
            Family::ConvexAbs => FamilyChoice::ConvexAbs,
            Family::ConvexQ => FamilyChoice::ConvexQ,
            Family::ConcaveQ => FamilyChoice::ConcaveQ,
        }
    }
}

/// How the evaluation point of each cell is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum XChoice {
    /// Optimize when there is a single cell, quarter point otherwise.
    Default,
    Optimize,
    Quarter,
    /// A point of `[a, (a+b)/2]`; composite cells use the same relative
    /// position.
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct CertRequest {
    pub func: Fn2,
    pub iv: Interval,
    pub x: XChoice,
    /// `None` optimizes `p` for the q-families.
    pub p: Option<f64>,
    pub family: FamilyChoice,
    pub subdivisions: usize,
    pub shape_grid: usize,
}

impl CertRequest {
    pub fn new(func: Fn2, iv: Interval) -> Self {
        Self {
            func,
            iv,
            x: XChoice::Default,
            p: None,
            family: FamilyChoice::Auto,
            subdivisions: 1,
            shape_grid: DEFAULT_SHAPE_GRID,
        }
    }

    pub fn with_x(mut self, x: XChoice) -> Self {
        self.x = x;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_family(mut self, family: FamilyChoice) -> Self {
        self.family = family;
        self
    }

    pub fn with_subdivisions(mut self, n: usize) -> Self {
        self.subdivisions = n;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.subdivisions == 0 || self.subdivisions > MAX_SUBDIVISIONS {
            return Err(CertError::InvalidRequest(format!(
                "subdivisions must lie in [1, {MAX_SUBDIVISIONS}], got {}",
                self.subdivisions
            )));
        }
        if let XChoice::Fixed(x) = self.x {
            self.iv.check_left_half(x)?;
        }
        if let Some(p) = self.p {
            if !(p > 1.0 && p <= MAX_P) {
                return Err(CertError::InvalidHolder(p));
            }
        }
        self.func.check_interval(&self.iv)
    }
}

/// Per-cell certificates combined with weights `width / (b - a)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeCertificate {
    pub estimate: f64,
    pub total_bound: f64,
    pub n: usize,
    pub family: Family,
    pub cells: Vec<BoundCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "certificate", rename_all = "snake_case")]
pub enum Certificate {
    Single(BoundCertificate),
    Composite(CompositeCertificate),
}

/// Result of [`certify`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    pub family: Family,
    /// Why this family was chosen when more than one applied.
    pub note: Option<String>,
    #[serde(flatten)]
    pub certificate: Certificate,
}

impl Certification {
    /// Mean-value estimate.
    pub fn estimate(&self) -> f64 {
        match &self.certificate {
            Certificate::Single(c) => c.estimate,
            Certificate::Composite(c) => c.estimate,
        }
    }

    /// Certified bound on `|mean - estimate|`.
    pub fn bound(&self) -> f64 {
        match &self.certificate {
            Certificate::Single(c) => c.bound,
            Certificate::Composite(c) => c.total_bound,
        }
    }
}

/// Pairwise summation in a fixed tree order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let (l, r) = v.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

fn admits(func: &Fn2, iv: &Interval, q: f64, family: Family, grid: usize) -> Result<bool> {
    match check_shape(func, iv, q, grid) {
        Ok(r) => Ok(match family {
            Family::ConvexAbs | Family::ConvexQ => r.verdict.admits_convex(),
            Family::ConcaveQ => r.verdict.admits_concave(),
        }),
        Err(CertError::NonFiniteSample { .. }) if q > 1.0 => Ok(false),
        Err(e) => Err(e),
    }
}

fn require(func: &Fn2, iv: &Interval, q: f64, family: Family, grid: usize) -> Result<()> {
    let r = check_shape(func, iv, q, grid)?;
    let ok = match family {
        Family::ConcaveQ => r.verdict.admits_concave(),
        _ => r.verdict.admits_convex(),
    };
    if ok {
        Ok(())
    } else {
        Err(CertError::ShapeHypothesisUnverified {
            q,
            verdict: r.verdict.to_string(),
            required: if family == Family::ConcaveQ {
                "concave"
            } else {
                "convex"
            },
        })
    }
}

/// Golden-section minimization of `phi` on `[lo, hi]`; returns the best point
/// evaluated and its value.
fn golden_section<F>(mut phi: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut c = hi - GOLDEN * (hi - lo);
    let mut d = lo + GOLDEN * (hi - lo);
    let mut fc = phi(c)?;
    let mut fd = phi(d)?;
    let mut best = if fd <= fc { (d, fd) } else { (c, fc) };
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - GOLDEN * (hi - lo);
            fc = phi(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + GOLDEN * (hi - lo);
            fd = phi(d)?;
            if fd <= best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

/// Evaluation point in `[a, (a+b)/2]` minimizing the certified bound of
/// `family` (with `p` for the q-families).
///
/// A 33-point scan brackets the minimum, golden-section refines the bracket
/// to `1e-10 (b - a)`. Ties go to the larger `x`.
pub fn optimize_x(func: &Fn2, iv: &Interval, family: Family, p: Option<f64>) -> Result<f64> {
    optimize_x_with_grid(func, iv, family, p, DEFAULT_SHAPE_GRID)
}

pub fn optimize_x_with_grid(
    func: &Fn2,
    iv: &Interval,
    family: Family,
    p: Option<f64>,
    shape_grid: usize,
) -> Result<f64> {
    let q = match (family, p) {
        (Family::ConvexAbs, _) => 1.0,
        (_, Some(p)) => crate::bounds::HolderPair::new(p)?.q(),
        (_, None) => {
            return Err(CertError::InvalidRequest(format!(
                "{} needs p to optimize x",
                family.theorem()
            )))
        }
    };
    require(func, iv, q, family, shape_grid)?;
    minimize_x(func, iv, family, p)
}

fn minimize_x(func: &Fn2, iv: &Interval, family: Family, p: Option<f64>) -> Result<f64> {
    let (a, m) = (iv.a(), iv.midpoint());
    let phi = |x: f64| family_bound(func, iv, x, family, p);
    let grid: Vec<f64> = Interval::grid(a, m, X_SCAN_POINTS - 1).collect();
    let vals = grid.iter().map(|&x| phi(x)).collect::<Result<Vec<_>>>()?;
    let mut i_best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v <= vals[i_best] {
            i_best = i;
        }
    }
    let mut best = (grid[i_best], vals[i_best]);
    if best.1 == 0.0 {
        return Ok(best.0);
    }
    let lo = grid[i_best.saturating_sub(1)];
    let hi = grid[(i_best + 1).min(grid.len() - 1)];
    let (xg, vg) = golden_section(|x| phi(x.clamp(a, m)), lo, hi, 1e-10 * iv.width())?;
    if vg < best.1 {
        best = (xg.clamp(a, m), vg);
    }
    Ok(best.0)
}

/// Hölder pair minimizing the bound of a q-family at `x`.
///
/// Searches `ln p` over `[ln 1.001, ln 1024]`: a 65-point scan, bisection onto
/// the shape-feasibility boundary when the best scan point borders an
/// infeasible one, then golden-section to relative tolerance `1e-8` in `p`.
/// `p` values whose `q` fails the shape check are excluded. An identically
/// zero bound returns `p = 2`.
pub fn optimize_p(
    func: &Fn2,
    iv: &Interval,
    x: f64,
    family: Family,
) -> Result<crate::bounds::HolderPair> {
    optimize_p_with_grid(func, iv, x, family, DEFAULT_SHAPE_GRID)
}

pub fn optimize_p_with_grid(
    func: &Fn2,
    iv: &Interval,
    x: f64,
    family: Family,
    shape_grid: usize,
) -> Result<crate::bounds::HolderPair> {
    use crate::bounds::HolderPair;
    if family == Family::ConvexAbs {
        return Err(CertError::InvalidRequest(
            "optimize_p applies to the q-families only".into(),
        ));
    }
    iv.check_left_half(x)?;
    func.check_interval(iv)?;

    let q_of = |s: f64| {
        let p = s.exp();
        p / (p - 1.0)
    };
    let feasible = |s: f64| admits(func, iv, q_of(s), family, shape_grid);
    let bound = |s: f64| family_bound(func, iv, x, family, Some(s.exp().clamp(P_MIN, MAX_P)));

    let (s_lo, s_hi) = (P_MIN.ln(), MAX_P.ln());
    let grid: Vec<f64> = Interval::grid(s_lo, s_hi, P_SCAN_POINTS - 1).collect();
    let mut ok = Vec::with_capacity(grid.len());
    let mut vals = Vec::with_capacity(grid.len());
    for &s in &grid {
        let f = feasible(s)?;
        ok.push(f);
        vals.push(if f { bound(s)? } else { f64::INFINITY });
    }
    let mut i_best = None;
    for i in 0..grid.len() {
        if ok[i] && i_best.is_none_or(|j: usize| vals[i] < vals[j]) {
            i_best = Some(i);
        }
    }
    let i_best = i_best.ok_or(CertError::NoFeasibleP)?;
    if vals[i_best] == 0.0 {
        let two = 2f64.ln();
        if feasible(two)? && bound(two)? == 0.0 {
            return HolderPair::new(2.0);
        }
        return HolderPair::new(grid[i_best].exp().clamp(P_MIN, MAX_P));
    }

    // Feasible sub-bracket around the best scan point.
    let boundary = |inside: f64, outside: f64| -> Result<f64> {
        let (mut good, mut bad) = (inside, outside);
        while (good - bad).abs() > 1e-12 {
            let mid = 0.5 * (good + bad);
            if feasible(mid)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        Ok(good)
    };
    let lo = if i_best == 0 {
        grid[0]
    } else if ok[i_best - 1] {
        grid[i_best - 1]
    } else {
        boundary(grid[i_best], grid[i_best - 1])?
    };
    let last = grid.len() - 1;
    let hi = if i_best == last {
        grid[last]
    } else if ok[i_best + 1] {
        grid[i_best + 1]
    } else {
        boundary(grid[i_best], grid[i_best + 1])?
    };

    let mut best = (grid[i_best], vals[i_best]);
    for s in [lo, hi] {
        let v = bound(s)?;
        if v < best.1 {
            best = (s, v);
        }
    }
    if hi > lo {
        let (sg, vg) = golden_section(|s| bound(s.clamp(lo, hi)), lo, hi, 1e-8)?;
        if vg < best.1 && feasible(sg)? {
            best = (sg, vg);
        }
    }
    HolderPair::new(best.0.exp().clamp(P_MIN, MAX_P))
}

fn any_feasible(
    func: &Fn2,
    iv: &Interval,
    family: Family,
    p: Option<f64>,
    grid: usize,
) -> Result<bool> {
    match p {
        Some(p) => admits(func, iv, p / (p - 1.0), family, grid),
        None => {
            for q in Q_FEASIBILITY_GRID {
                if admits(func, iv, q, family, grid)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Certificate for one cell with the family fixed.
fn certify_cell(
    func: &Fn2,
    iv: &Interval,
    family: Family,
    x: XChoice,
    fraction: Option<f64>,
    p: Option<f64>,
    grid: usize,
) -> Result<BoundCertificate> {
    let hyp = Hypothesis::Verify { grid_size: grid };
    let fixed_x = match (x, fraction) {
        (_, Some(theta)) => Some((iv.a() + theta * iv.width()).clamp(iv.a(), iv.midpoint())),
        (XChoice::Quarter, _) => Some(iv.quarter_point()),
        _ => None,
    };
    match family {
        Family::ConvexAbs => {
            let x = match fixed_x {
                Some(x) => x,
                None => optimize_x_with_grid(func, iv, family, None, grid)?,
            };
            certificate_for(func, iv, x, family, None, hyp)
        }
        Family::ConvexQ | Family::ConcaveQ => {
            let (x, p) = match (fixed_x, p) {
                (Some(x), Some(p)) => (x, p),
                (None, Some(p)) => (optimize_x_with_grid(func, iv, family, Some(p), grid)?, p),
                (Some(x), None) => (x, optimize_p_with_grid(func, iv, x, family, grid)?.p()),
                (None, None) => joint_optimize(func, iv, family, grid)?,
            };
            certificate_for(func, iv, x, family, Some(p), hyp)
        }
    }
}

/// Alternating minimization over `x` and `p`, keeping the best pair seen.
fn joint_optimize(func: &Fn2, iv: &Interval, family: Family, grid: usize) -> Result<(f64, f64)> {
    let mut x = iv.quarter_point();
    let mut p = optimize_p_with_grid(func, iv, x, family, grid)?.p();
    let mut best = (x, p, family_bound(func, iv, x, family, Some(p))?);
    for _ in 0..2 {
        x = minimize_x(func, iv, family, Some(p))?;
        let v = family_bound(func, iv, x, family, Some(p))?;
        if v < best.2 {
            best = (x, p, v);
        }
        p = optimize_p_with_grid(func, iv, x, family, grid)?.p();
        let v = family_bound(func, iv, x, family, Some(p))?;
        if v < best.2 {
            best = (x, p, v);
        }
    }
    Ok((best.0, best.1))
}

fn certify_with_family(req: &CertRequest, family: Family) -> Result<Certificate> {
    let n = req.subdivisions;
    let x = match req.x {
        XChoice::Default if n == 1 => XChoice::Optimize,
        XChoice::Default => XChoice::Quarter,
        other => other,
    };
    let fraction = match x {
        XChoice::Fixed(x) => Some((x - req.iv.a()) / req.iv.width()),
        _ => None,
    };
    if n == 1 {
        let cell = match x {
            XChoice::Fixed(x) => {
                let p = match (family.needs_holder(), req.p) {
                    (false, _) => None,
                    (true, Some(p)) => Some(p),
                    (true, None) => Some(
                        optimize_p_with_grid(&req.func, &req.iv, x, family, req.shape_grid)?.p(),
                    ),
                };
                certificate_for(
                    &req.func,
                    &req.iv,
                    x,
                    family,
                    p,
                    Hypothesis::Verify {
                        grid_size: req.shape_grid,
                    },
                )?
            }
            _ => certify_cell(&req.func, &req.iv, family, x, None, req.p, req.shape_grid)?,
        };
        return Ok(Certificate::Single(cell));
    }
    let cells = req.iv.split(n)?;
    let certs = cells
        .par_iter()
        .map(|c| certify_cell(&req.func, c, family, x, fraction, req.p, req.shape_grid))
        .collect::<Result<Vec<_>>>()?;
    let w = req.iv.width();
    let weighted = |get: &dyn Fn(&BoundCertificate) -> f64| -> Vec<f64> {
        cells
            .iter()
            .zip(&certs)
            .map(|(c, cert)| get(cert) * c.width() / w)
            .collect()
    };
    let total_bound = pairwise_sum(&weighted(&|c| c.bound));
    let estimate = pairwise_sum(&weighted(&|c| c.estimate));
    Ok(Certificate::Composite(CompositeCertificate {
        estimate,
        total_bound,
        n,
        family,
        cells: certs,
    }))
}

/// Uniform `n`-cell composite certificate; every cell re-verifies its
/// shape hypothesis.
pub fn composite_certify(req: &CertRequest) -> Result<CompositeCertificate> {
    req.validate()?;
    let family = resolve_family(req)?.0;
    let forced = CertRequest {
        subdivisions: req.subdivisions.max(2),
        ..req.clone()
    };
    if req.subdivisions == 1 {
        // Route the single cell through the composite aggregation so the
        // result has the same layout.
        let cert = match certify_with_family(req, family)? {
            Certificate::Single(c) => c,
            Certificate::Composite(_) => unreachable!(),
        };
        return Ok(CompositeCertificate {
            estimate: cert.estimate,
            total_bound: cert.bound,
            n: 1,
            family,
            cells: vec![cert],
        });
    }
    match certify_with_family(&forced, family)? {
        Certificate::Composite(c) => Ok(c),
        Certificate::Single(_) => unreachable!(),
    }
}

/// Families that apply on the whole interval, in dispatch order.
fn resolve_family(req: &CertRequest) -> Result<(Family, Vec<Family>)> {
    let grid = req.shape_grid;
    let (func, iv) = (&req.func, &req.iv);
    match req.family {
        FamilyChoice::ConvexAbs => Ok((Family::ConvexAbs, vec![Family::ConvexAbs])),
        FamilyChoice::ConvexQ => Ok((Family::ConvexQ, vec![Family::ConvexQ])),
        FamilyChoice::ConcaveQ => Ok((Family::ConcaveQ, vec![Family::ConcaveQ])),
        FamilyChoice::Auto => {
            if admits(func, iv, 1.0, Family::ConvexAbs, grid)? {
                return Ok((Family::ConvexAbs, vec![Family::ConvexAbs]));
            }
            let mut found = Vec::new();
            for fam in [Family::ConcaveQ, Family::ConvexQ] {
                if any_feasible(func, iv, fam, req.p, grid)? {
                    found.push(fam);
                }
            }
            match found.first() {
                Some(&f) => Ok((f, found)),
                None => Err(CertError::NoApplicableTheorem),
            }
        }
    }
}

/// Certifies the mean value of `req.func` on `req.iv`.
///
/// `Auto` tries, in order: `|f''|` convex (no Hölder parameter), then the
/// concave and convex q-families over [`Q_FEASIBILITY_GRID`]. When both
/// q-families apply, both are computed and the smaller bound is kept.
pub fn certify(req: &CertRequest) -> Result<Certification> {
    req.validate()?;
    let (family, candidates) = resolve_family(req)?;
    if candidates.len() < 2 {
        return Ok(Certification {
            family,
            note: None,
            certificate: certify_with_family(req, family)?,
        });
    }
    let mut results = Vec::new();
    for fam in candidates {
        match certify_with_family(req, fam) {
            Ok(c) => results.push((fam, c)),
            Err(CertError::ShapeHypothesisUnverified { .. }) | Err(CertError::NoFeasibleP) => {}
            Err(e) => return Err(e),
        }
    }
    let bound_of = |c: &Certificate| match c {
        Certificate::Single(s) => s.bound,
        Certificate::Composite(s) => s.total_bound,
    };
    let mut iter = results.into_iter();
    let mut best = iter.next().ok_or(CertError::NoApplicableTheorem)?;
    let mut note = None;
    for other in iter {
        let (keep, drop) = if bound_of(&other.1) < bound_of(&best.1) {
            (other, best)
        } else {
            (best, other)
        };
        note = Some(format!(
            "{} and {} both apply; kept {} (bound {:e} vs {:e})",
            keep.0.theorem(),
            drop.0.theorem(),
            keep.0.theorem(),
            bound_of(&keep.1),
            bound_of(&drop.1)
        ));
        best = keep;
    }
    Ok(Certification {
        family: best.0,
        note,
        certificate: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcat::{make_catalog_fn, parse_fn_spec};

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn pairwise_sum_small_cases() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.5]), 1.5);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0, 4.0, 5.0]), 15.0);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, v) = golden_section(|x| Ok((x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-9);
        assert!(v < 1e-18);
    }

    #[test]
    fn square_optimum_is_quarter_point() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        let x = optimize_x(&f, &unit(), Family::ConvexAbs, None).unwrap();
        assert!((x - 0.25).abs() < 1e-8, "x* = {x}");
    }

    #[test]
    fn zero_curvature_ties_go_to_midpoint() {
        let f = parse_fn_spec("poly:1,1").unwrap();
        assert_eq!(
            optimize_x(&f, &unit(), Family::ConvexAbs, None).unwrap(),
            0.5
        );
        let hp = optimize_p(&f, &unit(), 0.25, Family::ConcaveQ).unwrap();
        assert_eq!(hp.p(), 2.0);
    }

    #[test]
    fn concave_p_goes_to_the_feasibility_boundary() {
        // |f''|^q = c t^(q/2) is concave exactly for q <= 2, i.e. p >= 2.
        let f = make_catalog_fn("power", &[2.5]).unwrap();
        let iv = Interval::new(1.0, 4.0).unwrap();
        let hp = optimize_p(&f, &iv, 1.75, Family::ConcaveQ).unwrap();
        assert!(hp.p() >= 1.99 && hp.p() <= 2.01, "p* = {}", hp.p());
    }

    #[test]
    fn optimize_p_rejects_abs_family() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        assert!(optimize_p(&f, &unit(), 0.25, Family::ConvexAbs).is_err());
    }

    #[test]
    fn auto_routes() {
        let r = make_catalog_fn("recip", &[]).unwrap();
        let c = certify(&CertRequest::new(r, Interval::new(1.0, 2.0).unwrap())).unwrap();
        assert_eq!(c.family, Family::ConvexAbs);

        let sq = make_catalog_fn("power", &[2.0]).unwrap();
        let c = certify(&CertRequest::new(sq, unit())).unwrap();
        assert_eq!(c.family, Family::ConvexAbs);

        let root = make_catalog_fn("power", &[2.5]).unwrap();
        // |f''|^q ∝ t^(q/2): concave for q <= 2, convex for q >= 2. Both
        // q-families apply and the smaller bound is kept.
        let c = certify(&CertRequest::new(root, Interval::new(1.0, 4.0).unwrap())).unwrap();
        assert!(c.family.needs_holder());
        assert!(c.note.is_some());

        let bad = parse_fn_spec("poly:0,0,1,0,-1").unwrap();
        assert_eq!(
            certify(&CertRequest::new(bad, unit())).unwrap_err(),
            CertError::NoApplicableTheorem
        );
    }

    #[test]
    fn composite_quarter_scaling() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        for n in [1usize, 2, 4] {
            let req = CertRequest::new(f.clone(), unit())
                .with_family(FamilyChoice::ConvexAbs)
                .with_x(XChoice::Quarter)
                .with_subdivisions(n);
            let c = composite_certify(&req).unwrap();
            let expect = 1.0 / 48.0 / (n * n) as f64;
            assert!((c.total_bound - expect).abs() <= 1e-14 * expect);
            assert_eq!(c.cells.len(), n);
        }
    }

    #[test]
    fn request_validation() {
        let f = make_catalog_fn("power", &[2.0]).unwrap();
        let bad_x = CertRequest::new(f.clone(), unit()).with_x(XChoice::Fixed(0.8));
        assert!(matches!(
            certify(&bad_x),
            Err(CertError::PointOutOfRange { .. })
        ));
        let zero = CertRequest::new(f.clone(), unit()).with_subdivisions(0);
        assert!(certify(&zero).is_err());
        let bad_p = CertRequest::new(f, unit()).with_p(0.5);
        assert!(matches!(certify(&bad_p), Err(CertError::InvalidHolder(_))));
    }
}
