//! Run summaries: plain text for people, JSON under `--json`.

use std::fmt::Write;

use ratsos::cert::Certificate;
use ratsos::facial::ReductionLog;
use ratsos::pipeline::{Decomposition, Outcome};
use ratsos::sdp::SdpResult;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Certificate,
    NoDecomposition,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Certificate => 0,
            Status::NoDecomposition => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Certificate => "certificate",
            Status::NoDecomposition => "no-decomposition",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub label: String,
    pub constraints: usize,
    pub dim: Option<usize>,
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverReport {
    pub status: String,
    pub min_eigenvalue: f64,
    pub iterations: usize,
    pub converged: bool,
    pub denominator: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub minpoly: Option<String>,
    pub coefficients: Vec<String>,
    pub polynomials: Vec<String>,
    pub text: String,
}

impl CertificateReport {
    pub fn new(c: &Certificate) -> Self {
        let k = &c.field;
        CertificateReport {
            minpoly: (!c.is_rational()).then(|| k.minpoly().to_string()),
            coefficients: c.coefficients.iter().map(|x| ratsos::arith::Field::fmt_elem(k, x)).collect(),
            polynomials: c.polynomials.iter().map(|p| p.to_string()).collect(),
            text: c.to_text(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RefusalReport {
    pub reason: String,
    pub detail: String,
    pub witness: Option<Vec<String>>,
}

/// Everything a run produced.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub exit_code: u8,
    pub warnings: Vec<String>,
    pub reduction: Vec<StepReport>,
    pub unique: bool,
    pub solver: Option<SolverReport>,
    /// The rational form a certificate was built for, when it is derived.
    pub form: Option<String>,
    pub certificate: Option<CertificateReport>,
    pub refusal: Option<RefusalReport>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: &str, status: Status) -> Self {
        RunReport {
            command: command.to_string(),
            status,
            exit_code: status.exit_code(),
            warnings: Vec::new(),
            reduction: Vec::new(),
            unique: false,
            solver: None,
            form: None,
            certificate: None,
            refusal: None,
            elapsed_ms: 0,
        }
    }

    pub fn from_decomposition(d: &Decomposition) -> Self {
        let status = match &d.outcome {
            Outcome::Certificate(_) => Status::Certificate,
            Outcome::Refused { reason, .. } if reason.is_proof() => Status::NoDecomposition,
            Outcome::Refused { .. } => Status::Inconclusive,
        };
        let mut r = RunReport::new("decompose", status);
        r.reduction = steps(&d.log);
        r.unique = d.unique;
        r.solver = d.sdp.as_ref().map(|s| solver(s, d.denominator));
        match &d.outcome {
            Outcome::Certificate(c) => r.certificate = Some(CertificateReport::new(c)),
            Outcome::Refused { reason, detail, witness } => {
                r.refusal = Some(RefusalReport { reason: reason.to_string(), detail: detail.clone(), witness: witness.clone() })
            }
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable summary in the style of an interactive session.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let known: Vec<&StepReport> = self.reduction.iter().filter(|st| st.dim.is_some()).collect();
        if let (Some(first), Some(last)) = (known.first(), known.last()) {
            let _ = writeln!(s, "Facial reduction results:");
            let _ = writeln!(s, "Original matrix");
            let _ = writeln!(s, " - Rank: {}", first.rank.unwrap_or(0));
            let _ = writeln!(s, " - Number of indeterminates: {}", first.dim.unwrap_or(0));
            let _ = writeln!(s, "Matrix after facial reduction");
            if known.len() < self.reduction.len() {
                let _ = writeln!(s, " - empty: the constraints are inconsistent");
            } else {
                let _ = writeln!(s, " - Rank: {}", last.rank.unwrap_or(0));
                let _ = writeln!(s, " - Number of indeterminates: {}", last.dim.unwrap_or(0));
            }
            let _ = writeln!(s, "Steps:");
            for st in &self.reduction {
                match (st.dim, st.rank) {
                    (Some(d), Some(r)) => {
                        let _ = writeln!(s, "  {:<24} constraints {:>3}  dim {:>4}  rank {:>3}", st.label, st.constraints, d, r);
                    }
                    _ => {
                        let _ = writeln!(s, "  {:<24} constraints {:>3}  empty", st.label, st.constraints);
                    }
                }
            }
        }
        if self.unique {
            let _ = writeln!(
                s,
                "An exact solution was found without calling the numerical solver. \
                 The solution matrix is unique under the specified conditions."
            );
        }
        if let Some(sv) = &self.solver {
            let _ = writeln!(
                s,
                "Numerical solver: {} after {} Newton steps, smallest eigenvalue {:.6e}",
                sv.status, sv.iterations, sv.min_eigenvalue
            );
            if let Some(d) = sv.denominator {
                let _ = writeln!(s, "Rounded with denominators up to {d}.");
            }
        }
        if let Some(f) = &self.form {
            let _ = writeln!(s, "form: {f}");
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(s, "Coefficients: [{}]", c.coefficients.join(", "));
            let _ = writeln!(s, "Polynomials:");
            for p in &c.polynomials {
                let _ = writeln!(s, "  {p}");
            }
            let _ = writeln!(s, "Certificate verified exactly.");
        }
        if let Some(r) = &self.refusal {
            if r.reason == "not-psd-unique-solution" {
                let _ = writeln!(
                    s,
                    "The solution is not positive semidefinite. \
                     A SOS decomposition does not exist under the specified conditions."
                );
            }
            let _ = writeln!(s, "refusal: {} ({})", r.reason, r.detail);
            if let Some(w) = &r.witness {
                let _ = writeln!(s, "witness: [{}]", w.join(", "));
            }
        }
        let _ = writeln!(s, "status: {} (exit {})", self.status.as_str(), self.exit_code);
        let _ = writeln!(s, "elapsed: {} ms", self.elapsed_ms);
        s
    }
}

fn steps(log: &ReductionLog) -> Vec<StepReport> {
    log.steps
        .iter()
        .map(|s| StepReport { label: s.label.clone(), constraints: s.constraints, dim: s.dim, rank: s.rank })
        .collect()
}

fn solver(s: &SdpResult, denominator: Option<u64>) -> SolverReport {
    SolverReport {
        status: s.status.to_string(),
        min_eigenvalue: s.min_eigenvalue,
        iterations: s.iterations,
        converged: s.converged,
        denominator,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_and_names() {
        assert_eq!(Status::Certificate.exit_code(), 0);
        assert_eq!(Status::NoDecomposition.exit_code(), 1);
        assert_eq!(Status::Inconclusive.exit_code(), 2);
        assert_eq!(serde_json::to_string(&Status::NoDecomposition).unwrap(), "\"no-decomposition\"");
    }

    #[test]
    fn text_mentions_uniqueness() {
        let mut r = RunReport::new("decompose", Status::Certificate);
        r.unique = true;
        r.reduction = vec![
            StepReport { label: "original".into(), constraints: 0, dim: Some(6), rank: Some(6) },
            StepReport { label: "trace".into(), constraints: 1, dim: Some(0), rank: Some(2) },
        ];
        let t = r.to_text();
        assert!(t.contains("unique under the specified conditions"));
        assert!(t.contains(" - Number of indeterminates: 0"));
    }
}
