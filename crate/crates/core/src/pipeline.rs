//! End-to-end decomposition: reduce, solve numerically when parameters
//! remain, round, and certify exactly.

use std::fmt;

use log::{debug, info};

use crate::arith::RatPoly;
use crate::cert::{extract_certificate, ldl_decompose, round_params, verify_certificate, Certificate, IntoCertField, LdlOutcome};
use crate::facial::{reduce, Pencil, ReduceOptions, ReductionLog, ZeroMode, ZeroPoint};
use crate::gram::GramPencil;
use crate::sdp::{full_rank_principal_submatrix, max_min_eigenvalue, SdpConfig, SdpResult, SdpStatus};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    pub reduce: ReduceOptions,
    pub sdp: SdpConfig,
    /// Initial denominator bound for rounding the solver output.
    pub max_denom: u64,
    /// Extra rounding attempts, each doubling the denominator bound.
    pub retries: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { reduce: ReduceOptions::default(), sdp: SdpConfig::default(), max_denom: 1_000_000, retries: 3 }
    }
}

/// Why no certificate was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Refusal {
    /// The reduced pencil is a single matrix and it is not PSD.
    NotPsdUniqueSolution,
    /// The constraints are inconsistent.
    EmptyPencil,
    /// The solver found no positive definite point, or rounding failed.
    SolverBoundary,
    DescentIncomplete,
}

impl Refusal {
    /// Proven absence of a decomposition under the applied constraints.
    pub fn is_proof(self) -> bool {
        matches!(self, Refusal::NotPsdUniqueSolution | Refusal::EmptyPencil)
    }
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Refusal::NotPsdUniqueSolution => "not-psd-unique-solution",
            Refusal::EmptyPencil => "empty-pencil",
            Refusal::SolverBoundary => "solver-boundary",
            Refusal::DescentIncomplete => "descent-incomplete",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Certificate(Certificate),
    Refused {
        reason: Refusal,
        detail: String,
        /// Vector `w` with `wᵀMw < 0` for the unique solution `M`.
        witness: Option<Vec<String>>,
    },
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub log: ReductionLog,
    /// Whether the reduced pencil had no parameters left.
    pub unique: bool,
    pub sdp: Option<SdpResult>,
    /// Denominator bound that produced the certificate.
    pub denominator: Option<u64>,
    pub outcome: Outcome,
}

/// Runs the whole pipeline on `f` with the given zeros.
pub fn decompose(f: &RatPoly, zeros: &[(ZeroPoint, Option<ZeroMode>)], opts: &DecomposeOptions) -> Result<Decomposition> {
    let reducer = reduce(f, zeros, &opts.reduce)?;
    let log = reducer.log().clone();
    info!("reduction:\n{log}");
    let Some(pencil) = reducer.into_pencil() else {
        return Ok(Decomposition {
            log,
            unique: false,
            sdp: None,
            denominator: None,
            outcome: Outcome::Refused {
                reason: Refusal::EmptyPencil,
                detail: "the constraints admit no Gram matrix".into(),
                witness: None,
            },
        });
    };
    let mut d = match &pencil {
        Pencil::Rational(p) => certify(p, opts)?,
        Pencil::Algebraic(p) => certify(p, opts)?,
    };
    d.log = log;
    if let Outcome::Certificate(c) = &d.outcome {
        if !verify_certificate(c, f)? {
            return Err(Error::Numerical("extracted certificate failed exact verification".into()));
        }
    }
    Ok(d)
}

/// Certifies a reduced pencil: exact check when no parameters remain,
/// otherwise eigenvalue maximization on a full-rank principal submatrix
/// followed by rounding.
pub fn certify<F: IntoCertField>(p: &GramPencil<F>, opts: &DecomposeOptions) -> Result<Decomposition> {
    let field = p.field();
    let done = |unique, sdp, denominator, outcome| Decomposition {
        log: ReductionLog::default(),
        unique,
        sdp,
        denominator,
        outcome,
    };
    if p.nparams() == 0 {
        let m = p.constant_matrix();
        return Ok(match ldl_decompose(field, &m)? {
            LdlOutcome::Psd(_) => done(true, None, None, Outcome::Certificate(extract_certificate(field, &m, p.basis())?)),
            LdlOutcome::NotPsd { witness, value } => done(
                true,
                None,
                None,
                Outcome::Refused {
                    reason: Refusal::NotPsdUniqueSolution,
                    detail: format!("the unique solution matrix is not positive semidefinite (wᵀMw = {})", field.fmt_elem(&value)),
                    witness: Some(witness.iter().map(|x| field.fmt_elem(x)).collect()),
                },
            ),
        });
    }
    let draws = opts.reduce.rank_draws;
    let rank = p.generic_rank(draws, opts.reduce.seed);
    let omega = full_rank_principal_submatrix(p, rank, draws.max(3), opts.sdp.seed)?;
    debug!("principal submatrix {omega:?} of rank {rank}");
    let res = max_min_eigenvalue(p, &omega, &opts.sdp)?;
    if res.status != SdpStatus::PositiveDefinite {
        let detail = format!("largest smallest eigenvalue found is {:.3e} ({})", res.min_eigenvalue, res.status);
        return Ok(done(false, Some(res), None, Outcome::Refused { reason: Refusal::SolverBoundary, detail, witness: None }));
    }
    let mut denom = opts.max_denom.max(1);
    for attempt in 0..=opts.retries {
        let t = round_params(&res.params, denom)?;
        let m = p.eval_rational(&t)?;
        if ldl_decompose(field, &m)?.is_psd() {
            let cert = extract_certificate(field, &m, p.basis())?;
            return Ok(done(false, Some(res), Some(denom), Outcome::Certificate(cert)));
        }
        debug!("rounding attempt {attempt} with denominators up to {denom} is not PSD");
        denom = denom.saturating_mul(2);
    }
    let detail = format!("rounded matrices were not positive semidefinite after {} attempts", opts.retries + 1);
    Ok(done(false, Some(res), None, Outcome::Refused { reason: Refusal::SolverBoundary, detail, witness: None }))
}
