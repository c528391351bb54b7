//! The property suites behind `certquad suite`.

use certquad::bounds::{
    certificate_for, cor11_s1_bound, midpoint_certificates, quarter_certificates,
    trapezoid_certificate, Family, HolderPair, Hypothesis, Specialization, Theorem,
};
use certquad::funcat::{check_shape, parse_fn_spec, Fn2, Interval, DEFAULT_SHAPE_GRID};
use certquad::means::{check_proposition, PropositionId, PropositionParams};
use certquad::{companion_rule, identity_residual, oracle, CertError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::report::{case, CaseResult, Report, Status};

pub const FUNCTIONS: [&str; 9] = [
    "power:2",
    "power:3",
    "power:2.5",
    "power:-2",
    "recip",
    "neglog",
    "exp",
    "poly:1,-2,0.5,1",
    "poly:0,0,1,0,-1",
];
pub const INTERVALS: [(f64, f64); 3] = [(0.0, 1.0), (1.0, 2.0), (0.5, 3.0)];
pub const PS: [f64; 5] = [1.1, 1.5, 2.0, 4.0, 16.0];
pub const PROPOSITION_PAIRS: usize = 100;

#[derive(Debug, Clone, Copy)]
pub struct SuiteArgs {
    pub seed: u64,
    /// Points of the `x` grid over `[a, (a+b)/2]`.
    pub grid: usize,
}

fn fun(spec: &str) -> Fn2 {
    parse_fn_spec(spec).expect("suite functions parse")
}

fn x_grid(iv: &Interval, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                iv.midpoint()
            } else {
                iv.a() + (iv.midpoint() - iv.a()) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn iv_id(iv: &Interval) -> String {
    format!("{}_{}", iv.a(), iv.b())
}

fn admits(f: &Fn2, iv: &Interval, family: Family, q: f64) -> bool {
    match check_shape(f, iv, q, DEFAULT_SHAPE_GRID) {
        Ok(r) if family == Family::ConcaveQ => r.verdict.admits_concave(),
        Ok(r) => r.verdict.admits_convex(),
        Err(_) => false,
    }
}

fn in_domain(f: &Fn2, iv: &Interval) -> bool {
    f.check_interval(iv).is_ok()
}

fn identity(grid: usize) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for spec in FUNCTIONS {
        let f = fun(spec);
        for (a, b) in INTERVALS {
            let iv = Interval::new(a, b)?;
            if !in_domain(&f, &iv) {
                continue;
            }
            let mean = oracle::mean_value(&f, &iv, oracle::DEFAULT_TOL)?.value;
            let tol = 1e-9 * (1.0 + mean.abs());
            for (i, x) in x_grid(&iv, grid).into_iter().enumerate() {
                let r = identity_residual(&f, &iv, x)?;
                out.push(case(
                    format!("identity/{spec}/{}/x{i:03}", iv_id(&iv)),
                    "kernel identity",
                    (a, b),
                    Some(x),
                    None,
                    r,
                    tol,
                    r <= tol,
                    Status::Fail,
                ));
            }
        }
    }
    Ok(out)
}

fn validity(grid: usize) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for spec in FUNCTIONS {
        let f = fun(spec);
        for (a, b) in INTERVALS {
            let iv = Interval::new(a, b)?;
            if !in_domain(&f, &iv) {
                continue;
            }
            let mean = oracle::mean_value(&f, &iv, oracle::DEFAULT_TOL)?.value;
            let xs = x_grid(&iv, grid);
            for family in [Family::ConvexAbs, Family::ConvexQ, Family::ConcaveQ] {
                let ps: Vec<Option<f64>> = if family.needs_holder() {
                    PS.iter().copied().map(Some).collect()
                } else {
                    vec![None]
                };
                for p in ps {
                    let q = match p {
                        Some(p) => HolderPair::new(p)?.q(),
                        None => 1.0,
                    };
                    if !admits(&f, &iv, family, q) {
                        continue;
                    }
                    for (i, &x) in xs.iter().enumerate() {
                        let c = certificate_for(&f, &iv, x, family, p, Hypothesis::Forced)?;
                        let err = (mean - companion_rule(&f, &iv, x)?.rule_value).abs();
                        let ok = err <= c.bound + 1e-12 * (1.0 + c.bound);
                        out.push(case(
                            format!(
                                "validity/{spec}/{}/{}/p{}/x{i:03}",
                                iv_id(&iv),
                                family.theorem(),
                                p.map_or("-".to_string(), |p| p.to_string())
                            ),
                            family.theorem().to_string(),
                            (a, b),
                            Some(x),
                            p,
                            err,
                            c.bound,
                            ok,
                            Status::Fail,
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn family_of(t: Theorem) -> Family {
    match t {
        Theorem::T22ConvexQ => Family::ConvexQ,
        Theorem::T23ConcaveQ => Family::ConcaveQ,
        _ => Family::ConvexAbs,
    }
}

fn specialization() -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for spec in FUNCTIONS {
        let f = fun(spec);
        for (a, b) in INTERVALS {
            let iv = Interval::new(a, b)?;
            if !in_domain(&f, &iv) {
                continue;
            }
            for p in PS {
                let hp = HolderPair::new(p)?;
                let certs = midpoint_certificates(&f, &iv, Some(hp), Hypothesis::Forced)?
                    .into_iter()
                    .chain(quarter_certificates(&f, &iv, Some(hp), Hypothesis::Forced)?)
                    .chain(std::iter::once(trapezoid_certificate(
                        &f,
                        &iv,
                        hp,
                        Hypothesis::Forced,
                    )?));
                for c in certs {
                    let family = family_of(c.theorem);
                    let (x, label) = match c.specialization {
                        Specialization::Midpoint => (iv.midpoint(), "midpoint"),
                        Specialization::QuarterPoint => (iv.quarter_point(), "quarter"),
                        _ => (iv.a(), "trapezoid"),
                    };
                    let hp_arg = family.needs_holder().then_some(p);
                    let general =
                        certificate_for(&f, &iv, x, family, hp_arg, Hypothesis::Forced)?.bound;
                    let tol = 1e-14 * general.abs().max(c.bound.abs());
                    let gap = (c.bound - general).abs();
                    out.push(case(
                        format!(
                            "specialization/{spec}/{}/p{p}/{label}/{}",
                            iv_id(&iv),
                            c.theorem
                        ),
                        c.theorem.to_string(),
                        (a, b),
                        Some(x),
                        hp_arg,
                        gap,
                        tol,
                        gap <= tol,
                        Status::Fail,
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn sharpness() -> Result<Vec<CaseResult>> {
    let f = fun("power:2");
    let iv = Interval::new(0.0, 1.0)?;
    let hyp = Hypothesis::default();
    let mean = 1.0 / 3.0;
    let mid = midpoint_certificates(&f, &iv, None, hyp)?.remove(0);
    let quarter = quarter_certificates(&f, &iv, None, hyp)?.remove(0);
    let p32 = check_proposition(
        PropositionId::P32,
        1.0,
        2.0,
        &PropositionParams {
            n: Some(2),
            p: None,
        },
    )?;
    let eq = |id: &str, theorem: &str, ab, x, u: f64, v: f64| {
        let gap = (u - v).abs();
        let tol = 1e-14 * u.abs().max(v.abs());
        case(
            format!("sharpness/{id}"),
            theorem,
            ab,
            x,
            None,
            gap,
            tol,
            gap <= tol,
            Status::Fail,
        )
    };
    Ok(vec![
        eq(
            "midpoint_bound",
            "T21 midpoint",
            (0.0, 1.0),
            Some(0.5),
            mid.bound,
            1.0 / 12.0,
        ),
        eq(
            "midpoint_error",
            "T21 midpoint",
            (0.0, 1.0),
            Some(0.5),
            mean - mid.estimate,
            1.0 / 12.0,
        ),
        eq(
            "quarter_bound",
            "T21 quarter",
            (0.0, 1.0),
            Some(0.25),
            quarter.bound,
            1.0 / 48.0,
        ),
        eq(
            "quarter_error",
            "T21 quarter",
            (0.0, 1.0),
            Some(0.25),
            mean - quarter.estimate,
            1.0 / 48.0,
        ),
        eq("p32_lhs", "P32", (1.0, 2.0), None, p32.lhs, 1.0 / 12.0),
        eq("p32_rhs", "P32", (1.0, 2.0), None, p32.rhs, 1.0 / 12.0),
    ])
}

fn midpoint_concave() -> Result<Vec<CaseResult>> {
    let cases = [
        ("power:2", 0.0, 1.0),
        ("power:2.5", 1.0, 4.0),
        ("poly:1,-2,0.5,1", 0.0, 1.0),
    ];
    let mut out = Vec::new();
    for (spec, a, b) in cases {
        let f = fun(spec);
        let iv = Interval::new(a, b)?;
        for p in PS {
            let general = certificate_for(
                &f,
                &iv,
                iv.midpoint(),
                Family::ConcaveQ,
                Some(p),
                Hypothesis::Forced,
            )?
            .bound;
            let special = cor11_s1_bound(&f, &iv, HolderPair::new(p)?, Hypothesis::Forced)?;
            let gap = (general - special).abs();
            let tol = 1e-14 * general.abs().max(special.abs());
            out.push(case(
                format!("remark21/{spec}/{}/p{p}", iv_id(&iv)),
                "T23 midpoint",
                (a, b),
                Some(iv.midpoint()),
                Some(p),
                gap,
                tol,
                gap <= tol,
                Status::Fail,
            ));
        }
    }
    Ok(out)
}

fn trapezoid() -> Result<Vec<CaseResult>> {
    let f = fun("power:2");
    let iv = Interval::new(0.0, 1.0)?;
    let c = trapezoid_certificate(&f, &iv, HolderPair::new(2.0)?, Hypothesis::default())?;
    let mean = 1.0 / 3.0;
    let raw = (mean - c.estimate).abs();
    let corrected = (mean - c.corrected_estimate()).abs();
    Ok(vec![
        // The closed form presumes f'(a) = f'(b), false here.
        case(
            "trapezoid/literal".into(),
            "T22 trapezoid",
            (0.0, 1.0),
            Some(0.0),
            Some(2.0),
            raw,
            c.bound,
            raw <= c.bound,
            Status::Flagged,
        ),
        case(
            "trapezoid/corrected".into(),
            "T22 trapezoid",
            (0.0, 1.0),
            Some(0.0),
            Some(2.0),
            corrected,
            c.bound,
            corrected <= c.bound,
            Status::Fail,
        ),
    ])
}

pub fn random_pairs(seed: u64, count: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = 10.0 * (1.0 - rng.gen::<f64>());
        let v = 10.0 * (1.0 - rng.gen::<f64>());
        if u != v {
            out.push((u.min(v), u.max(v)));
        }
    }
    out
}

fn propositions(seed: u64) -> Result<Vec<CaseResult>> {
    let pairs = random_pairs(seed, PROPOSITION_PAIRS);
    let per_pair: Vec<Vec<CaseResult>> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(a, b))| -> Result<Vec<CaseResult>> {
            let mut runs: Vec<(PropositionId, PropositionParams)> =
                vec![(PropositionId::P31, PropositionParams::default())];
            for n in [2, 3, 4, -2, -3, -4] {
                runs.push((
                    PropositionId::P32,
                    PropositionParams {
                        n: Some(n),
                        p: None,
                    },
                ));
            }
            for p in [1.5, 2.0, 4.0] {
                for id in PropositionId::ALL.into_iter().filter(|id| id.needs_p()) {
                    runs.push((
                        id,
                        PropositionParams {
                            n: None,
                            p: Some(p),
                        },
                    ));
                }
            }
            runs.into_iter()
                .map(|(id, params)| {
                    let r = check_proposition(id, a, b, &params)?;
                    let tag = match (params.n, params.p) {
                        (Some(n), _) => format!("n{n}"),
                        (_, Some(p)) => format!("p{p}"),
                        _ => "-".into(),
                    };
                    Ok(case(
                        format!("propositions/{k:03}/{id}/{tag}"),
                        id.to_string(),
                        (a, b),
                        None,
                        params.p,
                        r.lhs,
                        r.rhs,
                        r.holds,
                        if r.asserted {
                            Status::Fail
                        } else {
                            Status::Flagged
                        },
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_pair.into_iter().flatten().collect())
}

type Group = dyn Fn() -> Result<Vec<CaseResult>> + Send + Sync;

pub fn cmd_suite(args: &SuiteArgs) -> Result<Report> {
    if args.grid < 2 {
        return Err(CertError::InvalidRequest(format!(
            "--grid must be at least 2, got {}",
            args.grid
        )));
    }
    let grid = args.grid;
    let seed = args.seed;
    let groups: Vec<(&str, Box<Group>)> = vec![
        ("identity", Box::new(move || identity(grid))),
        ("validity", Box::new(move || validity(grid))),
        ("specialization", Box::new(specialization)),
        ("sharpness", Box::new(sharpness)),
        ("remark21", Box::new(midpoint_concave)),
        ("trapezoid", Box::new(trapezoid)),
        ("propositions", Box::new(move || propositions(seed))),
    ];
    let results = groups
        .par_iter()
        .map(|(name, run)| run().map(|cases| (*name, cases)))
        .collect::<Result<Vec<_>>>()?;

    let mut r = Report::new("suite");
    r.input("seed", args.seed);
    r.input("grid", args.grid);
    let mut summary = serde_json::Map::new();
    let mut all = Vec::new();
    for (name, cases) in results {
        let count = |s: Status| cases.iter().filter(|c| c.status == s).count();
        summary.insert(
            name.to_string(),
            json!({"pass": count(Status::Pass), "fail": count(Status::Fail), "flagged": count(Status::Flagged)}),
        );
        all.extend(cases);
    }
    all.sort_by(|x, y| x.case_id.cmp(&y.case_id));
    let count = |s: Status| all.iter().filter(|c| c.status == s).count();
    r.output("cases", all.len());
    r.output("pass", count(Status::Pass));
    r.output("fail", count(Status::Fail));
    r.output("flagged", count(Status::Flagged));
    r.output("groups", summary);
    r.suite_results = Some(all);
    Ok(r)
}
