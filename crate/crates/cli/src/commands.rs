use std::io::Read;
use std::path::Path;
use std::time::Instant;

use log::info;
use ratsos::arith::parse::{embed_rational, parse_poly, parse_poly_over, parse_poly_with_vars, parse_unipoly, PolySource};
use ratsos::arith::{Field, MultiPoly, NumberField, RatPoly};
use ratsos::cert::{verify_certificate, Certificate};
use ratsos::descent::{conjugate_product, gen_three_squares, rational_part, two_square_descent, Descent};
use ratsos::facial::{parse_zeros, search_rational_zeros, ZeroMode, ZeroPoint};
use ratsos::gram::{build_pencil, GramPencil, MonomialBasis};
use ratsos::pipeline::{decompose as run_pipeline, DecomposeOptions, Outcome};
use thiserror::Error;

use crate::report::{CertificateReport, RefusalReport, RunReport, Status};
use crate::{DecomposeArgs, Descend2Args, Gen3Args, PencilArgs, PolyInput, VerifyArgs, YesNo};

pub const USAGE_EXIT: u8 = 64;

pub const TRACE_WARNING: &str =
    "Option trace-equations: yes - Only valid when looking for rational decompositions.";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] ratsos::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Input problems map to 64; failures inside the numeric pipeline are
    /// inconclusive.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(ratsos::Error::Numerical(_)) | CliError::Core(ratsos::Error::NotPsd) => 2,
            _ => USAGE_EXIT,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_text(path: &Path) -> Result<String> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn split_vars(list: &str) -> Vec<String> {
    list.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect()
}

fn read_form(input: &PolyInput) -> Result<RatPoly> {
    let mut src = PolySource::parse(&read_text(&input.input)?)?;
    if let Some(v) = &input.vars {
        src.vars = Some(split_vars(v));
    }
    let f = src.rational()?;
    if f.is_zero() {
        return Err(CliError::Usage("the polynomial is zero".into()));
    }
    Ok(f)
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
}

/// Variables in order of first appearance across expressions, minus `skip`.
fn vars_of(exprs: &[&str], skip: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for e in exprs {
        for v in parse_poly(e)?.vars() {
            if v != skip && !out.contains(v) {
                out.push(v.clone());
            }
        }
    }
    Ok(out)
}

fn half_degree(f: &RatPoly) -> Result<u32> {
    let d = f.total_degree().ok_or_else(|| CliError::Usage("the form is zero".into()))?;
    if !f.is_homogeneous() || d % 2 == 1 {
        return Err(CliError::Usage(format!("expected a form of even degree, got {f}")));
    }
    Ok(d / 2)
}

fn squares_certificate(field: &NumberField, f: &RatPoly, squares: Vec<MultiPoly<NumberField>>) -> Result<Certificate> {
    let squares: Vec<_> = squares.into_iter().filter(|q| !q.is_zero()).collect();
    let basis = MonomialBasis::full(f.vars(), half_degree(f)?);
    let ones = vec![field.one(); squares.len()];
    let cert = Certificate::from_squares(field.clone(), basis, ones, squares)?;
    if !verify_certificate(&cert, f)? {
        return Err(ratsos::Error::Numerical("constructed certificate failed exact verification".into()).into());
    }
    Ok(cert)
}

pub fn decompose(a: &DecomposeArgs) -> Result<u8> {
    let start = Instant::now();
    let f = read_form(&a.poly)?;
    let mut zeros: Vec<(ZeroPoint, Option<ZeroMode>)> = Vec::new();
    if let Some(path) = &a.zeros {
        zeros.extend(parse_zeros(&read_text(path)?, &f)?.into_iter().map(|z| (z.point, z.mode)));
    }
    if a.search_zeros > 0 {
        let found = search_rational_zeros(&f, a.search_zeros)?;
        info!("zero search found {} points", found.len());
        zeros.extend(found.into_iter().map(|z| (z, None)));
    }
    let trace = a.trace_equations == YesNo::Yes;
    let mut opts = DecomposeOptions::default();
    opts.reduce.mode = if trace { ZeroMode::Trace } else { ZeroMode::Plain };
    opts.reduce.force_rational = a.force_rational == YesNo::Yes;
    opts.reduce.minor_ghosts = !a.no_minor_ghosts;
    opts.reduce.seed = a.seed;
    opts.sdp.gap_tol = a.sdp_tol;
    opts.sdp.max_iters = a.sdp_iters;
    opts.sdp.seed = a.seed;
    opts.max_denom = a.max_denom;
    let d = run_pipeline(&f, &zeros, &opts)?;
    let mut report = RunReport::from_decomposition(&d);
    if trace && zeros.iter().any(|(z, m)| m.is_none() && !z.is_rational()) {
        report.warnings.push(TRACE_WARNING.into());
    }
    if let (Outcome::Certificate(c), Some(path)) = (&d.outcome, &a.output) {
        write_text(path, &c.to_text())?;
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    emit(&report, a.json);
    Ok(report.exit_code)
}

pub fn verify(a: &VerifyArgs) -> Result<u8> {
    let cert = Certificate::parse(&read_text(&a.certificate)?)?;
    let f = read_form(&a.poly)?;
    let ok = verify_certificate(&cert, &f)?;
    if a.json {
        println!("{}", serde_json::json!({ "command": "verify", "verified": ok, "exit_code": u8::from(!ok) }));
    } else if ok {
        println!("certificate verified: f = sum of {} weighted squares", cert.len());
    } else {
        println!("certificate does NOT verify");
    }
    Ok(u8::from(!ok))
}

pub fn pencil(a: &PencilArgs) -> Result<u8> {
    let p = if a.from_dump {
        GramPencil::parse_dump(&read_text(&a.poly.input)?)?
    } else {
        build_pencil(&read_form(&a.poly)?)?
    };
    let rank = p.generic_rank(3, a.seed);
    if let Some(path) = &a.dump {
        write_text(path, &p.dump())?;
    }
    if a.json {
        println!(
            "{}",
            serde_json::json!({ "command": "pencil", "size": p.size(), "dim": p.nparams(), "rank": rank })
        );
    } else {
        println!("size: {}", p.size());
        println!("dim: {}", p.nparams());
        println!("rank: {rank}");
    }
    Ok(0)
}

pub fn descend2(a: &Descend2Args) -> Result<u8> {
    let start = Instant::now();
    let k = NumberField::new("a", parse_unipoly(&a.minpoly, "Z")?)?;
    let vars = match &a.vars {
        Some(v) => split_vars(v),
        None => vars_of(&[&a.p1, &a.p2], "a")?,
    };
    let p1 = parse_poly_over(&a.p1, &k, &vars)?;
    let p2 = parse_poly_over(&a.p2, &k, &vars)?;
    let f = rational_part(&p1.square().add(&p2.square()))
        .ok_or_else(|| CliError::Usage("p1² + p2² does not have rational coefficients".into()))?;
    let (big1, big2) = conjugate_product(&p1, &p2)?;
    let d = k.degree() as u32;
    let mut report = match two_square_descent(&f, &big1, &big2, d, a.max_depth)? {
        Descent::Complete { q1, q2 } => {
            let one = NumberField::rational("a");
            let cert = squares_certificate(&one, &f, vec![embed_rational(&q1, &one), embed_rational(&q2, &one)])?;
            if let Some(path) = &a.output {
                write_text(path, &cert.to_text())?;
            }
            let mut r = RunReport::new("descend2", Status::Certificate);
            r.certificate = Some(CertificateReport::new(&cert));
            r
        }
        Descent::Incomplete { p1, p2, power } => {
            let mut r = RunReport::new("descend2", Status::Inconclusive);
            r.refusal = Some(RefusalReport {
                reason: ratsos::pipeline::Refusal::DescentIncomplete.to_string(),
                detail: format!("only f = ((P1)² + (P2)²) / f^{} is known, with P1 = {p1}, P2 = {p2}", 2 * power),
                witness: None,
            });
            r
        }
    };
    report.form = Some(f.to_string());
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    emit(&report, a.json);
    Ok(report.exit_code)
}

pub fn gen3(a: &Gen3Args) -> Result<u8> {
    let start = Instant::now();
    let exprs: Vec<&str> = a.inputs.iter().map(String::as_str).collect();
    let vars = match &a.vars {
        Some(v) => split_vars(v),
        None => vars_of(&exprs, "")?,
    };
    let l = exprs.iter().map(|e| parse_poly_with_vars(e, &vars)).collect::<ratsos::Result<Vec<_>>>()?;
    let t = gen_three_squares(&l[0], &l[1], &l[2], &l[3], &l[4], &l[5], &l[6])?;
    let cert = squares_certificate(&t.field, &t.f, t.squares.to_vec())?;
    if let Some(path) = &a.output {
        write_text(path, &cert.to_text())?;
    }
    let mut report = RunReport::new("gen3", Status::Certificate);
    report.form = Some(t.f.to_string());
    report.certificate = Some(CertificateReport::new(&cert));
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    emit(&report, a.json);
    Ok(report.exit_code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variables_in_order_of_appearance() {
        assert_eq!(vars_of(&["y*a + x", "z + x"], "a").unwrap(), ["y", "x", "z"]);
        assert_eq!(split_vars(" x, y ,,z"), ["x", "y", "z"]);
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 64);
        assert_eq!(CliError::Core(ratsos::Error::Parse("x".into())).exit_code(), 64);
        assert_eq!(CliError::Core(ratsos::Error::Numerical("x".into())).exit_code(), 2);
    }

    #[test]
    fn odd_degree_is_rejected() {
        assert!(half_degree(&parse_poly("x^3").unwrap()).is_err());
        assert_eq!(half_degree(&parse_poly("x^2*y^2").unwrap()).unwrap(), 2);
    }
}
