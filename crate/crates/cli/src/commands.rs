use certquad::certify::{certify, CertRequest, Certificate, FamilyChoice, XChoice};
use certquad::funcat::{parse_fn_spec, Interval};
use certquad::means::{check_group, PropositionGroup, PropositionParams};
use certquad::oracle;
use certquad::Result;
use serde_json::{json, Value};

use crate::report::{case, Report, Status};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Choice {
    Auto,
    Quarter,
    At(f64),
}

pub fn parse_choice(s: &str) -> std::result::Result<Choice, String> {
    match s {
        "auto" => Ok(Choice::Auto),
        "quarter" => Ok(Choice::Quarter),
        _ => s
            .parse::<f64>()
            .map(Choice::At)
            .map_err(|_| format!("expected a number, `auto` or `quarter`, got `{s}`")),
    }
}

pub struct CertifyArgs {
    pub func: String,
    pub a: f64,
    pub b: f64,
    pub x: Option<Choice>,
    pub p: Option<Choice>,
    pub family: FamilyChoice,
    pub cells: usize,
    pub grid: usize,
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, Value::from)
}

pub fn cmd_certify(args: &CertifyArgs) -> Result<Report> {
    let func = parse_fn_spec(&args.func)?;
    let iv = Interval::new(args.a, args.b)?;
    let mut req = CertRequest::new(func.clone(), iv)
        .with_family(args.family)
        .with_subdivisions(args.cells);
    req.shape_grid = args.grid;
    req.x = match args.x {
        None => XChoice::Default,
        Some(Choice::Auto) => XChoice::Optimize,
        Some(Choice::Quarter) => XChoice::Quarter,
        Some(Choice::At(x)) => XChoice::Fixed(x),
    };
    match args.p {
        None | Some(Choice::Auto) => {}
        Some(Choice::At(p)) => req = req.with_p(p),
        Some(Choice::Quarter) => {
            return Err(certquad::CertError::InvalidRequest(
                "--p takes a number or `auto`".into(),
            ))
        }
    }

    let cert = certify(&req)?;
    let oracle_mean = oracle::mean_value(&func, &iv, oracle::DEFAULT_TOL)?.value;
    let (estimate, bound) = (cert.estimate(), cert.bound());
    let observed = (oracle_mean - estimate).abs();
    let validated = observed <= bound + 1e-12 * (1.0 + bound);
    let (x, p, q) = match &cert.certificate {
        Certificate::Single(c) => (Some(c.x), c.holder.map(|h| h.p()), c.holder.map(|h| h.q())),
        Certificate::Composite(c) => {
            let p = c.cells.first().and_then(|c| c.holder.map(|h| h.p()));
            let uniform = c.cells.iter().all(|cell| cell.holder.map(|h| h.p()) == p);
            let q = c.cells.first().and_then(|c| c.holder.map(|h| h.q()));
            (None, p.filter(|_| uniform), q.filter(|_| uniform))
        }
    };

    let mut r = Report::new("certify");
    r.input("fn", func.label());
    r.input("a", args.a);
    r.input("b", args.b);
    r.input("x", args.x.map_or(json!("default"), choice_json));
    r.input("p", args.p.map_or(json!("auto"), choice_json));
    r.input("family", serde_json::to_value(args.family).unwrap());
    r.input("cells", args.cells);
    r.output("theorem", cert.family.theorem().to_string());
    r.output("x", opt(x));
    r.output("p", opt(p));
    r.output("q", opt(q));
    r.output("mean_estimate", estimate);
    r.output("integral_estimate", estimate * iv.width());
    r.output("bound", bound);
    r.output("integral_bound", bound * iv.width());
    r.output("cells", args.cells);
    r.output("note", cert.note.clone().map_or(Value::Null, Value::from));
    r.output("oracle_mean", oracle_mean);
    r.output("observed_error", observed);
    r.output("validated", validated);
    r.output("certificate", serde_json::to_value(&cert).unwrap());
    r.suite_results = Some(vec![case(
        "certify".into(),
        cert.family.theorem().to_string(),
        (args.a, args.b),
        x,
        p,
        observed,
        bound,
        validated,
        Status::Fail,
    )]);
    Ok(r)
}

fn choice_json(c: Choice) -> Value {
    match c {
        Choice::Auto => json!("auto"),
        Choice::Quarter => json!("quarter"),
        Choice::At(v) => json!(v),
    }
}

pub struct MeansArgs {
    pub groups: Vec<PropositionGroup>,
    pub a: f64,
    pub b: f64,
    pub n: i32,
    pub p: f64,
}

pub fn cmd_means(args: &MeansArgs) -> Result<Report> {
    let params = PropositionParams {
        n: Some(args.n),
        p: Some(args.p),
    };
    let mut r = Report::new("means");
    r.input("a", args.a);
    r.input("b", args.b);
    r.input("n", args.n);
    r.input("p", args.p);
    let mut cases = Vec::new();
    let mut reports = Vec::new();
    for &g in &args.groups {
        for rep in check_group(g, args.a, args.b, &params)? {
            let on_failure = if rep.asserted {
                Status::Fail
            } else {
                Status::Flagged
            };
            let p = rep.params.get("p").copied();
            cases.push(case(
                rep.id.to_string(),
                rep.id.to_string(),
                (args.a, args.b),
                None,
                p,
                rep.lhs,
                rep.rhs,
                rep.holds,
                on_failure,
            ));
            reports.push(serde_json::to_value(&rep).unwrap());
        }
    }
    r.output("reports", reports);
    r.suite_results = Some(cases);
    Ok(r)
}
