use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A known caveat: reported, never counted as a failure.
    Flagged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Flagged => "flagged",
        }
    }
}

/// One checked inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case_id: String,
    pub theorem: String,
    pub a: f64,
    pub b: f64,
    pub x: Option<f64>,
    pub p: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub suite_results: Option<Vec<CaseResult>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            outputs: Map::new(),
            suite_results: None,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.to_string(), v.into());
    }

    pub fn output(&mut self, key: &str, v: impl Into<Value>) {
        self.outputs.insert(key.to_string(), v.into());
    }

    pub fn cases(&self) -> &[CaseResult] {
        self.suite_results.as_deref().unwrap_or(&[])
    }

    pub fn failures(&self) -> usize {
        self.cases()
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "case_id", "theorem", "a", "b", "x", "p", "lhs", "rhs", "margin", "status",
        ])?;
        for c in self.cases() {
            w.write_record([
                c.case_id.clone(),
                c.theorem.clone(),
                real(c.a),
                real(c.b),
                c.x.map(real).unwrap_or_default(),
                c.p.map(real).unwrap_or_default(),
                real(c.lhs),
                real(c.rhs),
                real(c.margin),
                c.status.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

#[allow(clippy::too_many_arguments)]
pub fn case(
    case_id: String,
    theorem: impl Into<String>,
    (a, b): (f64, f64),
    x: Option<f64>,
    p: Option<f64>,
    lhs: f64,
    rhs: f64,
    ok: bool,
    on_failure: Status,
) -> CaseResult {
    CaseResult {
        case_id,
        theorem: theorem.into(),
        a,
        b,
        x,
        p,
        lhs,
        rhs,
        margin: rhs - lhs,
        status: if ok { Status::Pass } else { on_failure },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5e17] {
            assert_eq!(real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_has_fixed_columns() {
        let mut r = Report::new("suite");
        r.suite_results = Some(vec![case(
            "x,1".into(),
            "T21",
            (0.0, 1.0),
            Some(0.25),
            None,
            0.5,
            1.0,
            true,
            Status::Fail,
        )]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "case_id,theorem,a,b,x,p,lhs,rhs,margin,status"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("\"x,1\",T21,"));
        assert!(row
            .ends_with(",,5.0000000000000000e-1,1.0000000000000000e0,5.0000000000000000e-1,pass"));
    }

    #[test]
    fn json_round_trips() {
        let mut r = Report::new("means");
        r.input("a", 1.0);
        r.output("lhs", 1.0 / 12.0);
        r.output("tiny", 1e-5);
        let text = r.to_json();
        let back: Value = serde_json::from_str(&text).unwrap();
        let mut again = serde_json::to_string_pretty(&back).unwrap();
        again.push('\n');
        assert_eq!(again, text);
        let parsed: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, r);
    }
}
