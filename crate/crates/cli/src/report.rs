//! Reports: what was asked, what came out, and which checks passed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use elliptio::suite::CaseResult;
use elliptio::{ErrorKind, EvalError};
use serde::Serialize;

use crate::complex::format_c64;

#[derive(Debug, Clone, Serialize)]
pub struct Output {
    pub name: String,
    /// `a+bi` text; `None` for purely textual outputs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub err_est: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Output {
    pub fn value(name: impl Into<String>, v: num_complex::Complex64, err_est: Option<f64>) -> Self {
        Output {
            name: name.into(),
            value: Some(format_c64(v)),
            err_est,
            note: None,
        }
    }

    pub fn note(name: impl Into<String>, note: impl Into<String>) -> Self {
        Output {
            name: name.into(),
            value: None,
            err_est: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// The invoked command line without the program name.
    pub command: String,
    /// Function, term, suite or integral the command acted on.
    pub suite: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<Output>,
    pub cases: Vec<CaseResult>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    /// Omitted under `--no-timing`, which makes reports byte-reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(command: String, suite: impl Into<String>) -> Self {
        Report {
            command,
            suite: suite.into(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            cases: Vec::new(),
            pass: true,
            error: None,
            elapsed_ms: None,
        }
    }

    pub fn input(&mut self, name: &str, value: impl Into<String>) {
        self.inputs.insert(name.to_string(), value.into());
    }

    pub fn fail_with(&mut self, e: &EvalError) {
        self.pass = false;
        self.error = Some(ErrorInfo {
            kind: kind_name(e.kind).to_string(),
            detail: e.to_string(),
        });
    }

    /// Folds the case verdicts into `pass`.
    pub fn finish(&mut self) {
        self.pass = self.pass && self.error.is_none() && self.cases.iter().all(|c| c.pass);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "  {k} = {v}");
        }
        for o in &self.outputs {
            match (&o.value, &o.note) {
                (Some(v), _) => {
                    let _ = write!(s, "{} = {v}", o.name);
                    if let Some(e) = o.err_est {
                        let _ = write!(s, "  (err_est {e:.2e})");
                    }
                    s.push('\n');
                }
                (None, Some(n)) => {
                    let _ = writeln!(s, "{}: {n}", o.name);
                }
                (None, None) => {}
            }
        }
        for c in &self.cases {
            let r = c.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "-".into());
            let _ = write!(
                s,
                "[{}] {}  residual {r}  threshold {:.0e}",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.threshold
            );
            if let Some(e) = &c.error {
                let _ = write!(s, "  ({e})");
            }
            s.push('\n');
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {}", e.detail);
        }
        let _ = write!(s, "{}", if self.pass { "PASS" } else { "FAIL" });
        if let Some(ms) = self.elapsed_ms {
            let _ = write!(s, " in {ms} ms");
        }
        s.push('\n');
        s
    }

    /// 0 on success, 1 on a failed check, 2–4 by error kind.
    pub fn exit_code(&self) -> u8 {
        match &self.error {
            Some(e) => match e.kind.as_str() {
                "pole-proximity" => 3,
                "non-convergence" => 4,
                _ => 2,
            },
            None if self.pass => 0,
            None => 1,
        }
    }
}

pub fn kind_name(k: ErrorKind) -> &'static str {
    match k {
        ErrorKind::PoleProximity => "pole-proximity",
        ErrorKind::NonConvergence => "non-convergence",
        ErrorKind::DomainViolation => "domain-violation",
        ErrorKind::DegenerateLattice => "degenerate-lattice",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_taxonomy() {
        let mut r = Report::new("x".into(), "x");
        assert_eq!(r.exit_code(), 0);
        for (kind, code) in [
            (ErrorKind::DomainViolation, 2),
            (ErrorKind::DegenerateLattice, 2),
            (ErrorKind::PoleProximity, 3),
            (ErrorKind::NonConvergence, 4),
        ] {
            r.fail_with(&EvalError::new(kind, "d", None));
            assert_eq!(r.exit_code(), code);
        }
        let mut r = Report::new("x".into(), "x");
        r.cases.push(CaseResult::new("c", 1.0, 0.5));
        r.finish();
        assert_eq!(r.exit_code(), 1);
    }
}
