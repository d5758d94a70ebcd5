//! End-to-end pipelines: bounded satisfiability of a formula, and bounded
//! reachability of a target in a Kripke structure. Every positive answer is
//! decoded into a witness and re-checked with [`eval_bounded`] before it is
//! reported.

use std::fmt;
use std::time::Duration;

use crate::encode::{count_symbols, encode, EncodeError, InitialAssignment};
use crate::eval::{eval_bounded, EvalError};
use crate::formula::{to_pnf, Formula, Theory};
use crate::kripke::{kripke_to_formula, KripkeError, KripkeStructure};
use crate::solver::{solve, SolverConfig, SolverError, Status};
use crate::witness::{decode_witness, DecodeError, Witness};

#[derive(Debug, thiserror::Error)]
pub enum BrpError {
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error("target must not contain temporal operators: `{0}`")]
    MalformedTarget(String),
    #[error("empty bound range {0}..{1}")]
    EmptyRange(u32, u32),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("cannot decode model: {0}")]
    Decode(#[from] DecodeError),
    #[error("cannot evaluate witness: {0}")]
    Eval(#[from] EvalError),
    #[error("solver model at k = {k} does not satisfy the formula under the bounded semantics")]
    SoundnessViolation { k: u32, witness: Box<Witness> },
}

/// Solver work for one bound.
#[derive(Debug, Clone)]
pub struct BoundStats {
    pub k: u32,
    pub status: Status,
    pub elapsed: Duration,
    pub ints: usize,
    pub preds: usize,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub status: Status,
    /// Present iff `status` is `Sat`; already verified.
    pub witness: Option<Witness>,
    pub stats: BoundStats,
    pub diagnostics: String,
}

/// Encodes `phi` at bound `k`, solves, and on `sat` returns a verified
/// witness.
pub fn check_formula(
    phi: &Formula,
    k: u32,
    theory: Theory,
    init: Option<&InitialAssignment>,
    solver: &SolverConfig,
) -> Result<CheckOutcome, BrpError> {
    let pnf = to_pnf(phi);
    let artifact = encode(&pnf, k, theory, init)?;
    let verdict = solve(&artifact, solver)?;
    let (ints, preds) = count_symbols(&artifact.script);
    let stats = BoundStats {
        k,
        status: verdict.status,
        elapsed: verdict.elapsed,
        ints,
        preds,
    };
    let witness = match verdict.status {
        Status::Sat => {
            let w = decode_witness(&verdict, &artifact.symtab, k, &artifact.metrics)?;
            if !eval_bounded(&w, phi)? {
                return Err(BrpError::SoundnessViolation {
                    k,
                    witness: Box::new(w),
                });
            }
            Some(w)
        }
        _ => None,
    };
    Ok(CheckOutcome {
        status: verdict.status,
        witness,
        stats,
        diagnostics: verdict.diagnostics,
    })
}

#[derive(Debug, Clone)]
pub enum BrpStatus {
    Reachable { k: u32, witness: Witness },
    UnreachableUpTo(u32),
    /// No bound was sat and the solver gave up at bound `k`.
    Unknown { k: u32 },
}

impl fmt::Display for BrpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BrpStatus::Reachable { k, .. } => write!(f, "reachable at k = {k}"),
            BrpStatus::UnreachableUpTo(k) => write!(f, "unreachable up to k = {k}"),
            BrpStatus::Unknown { k } => write!(f, "unknown (solver gave up at k = {k})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BrpResult {
    pub status: BrpStatus,
    pub stats: Vec<BoundStats>,
}

/// The formula whose bounded models are the runs of `m` reaching `target`:
/// `PNF(chi_M & F target)`.
pub fn reachability_formula(m: &KripkeStructure, target: &Formula) -> Result<Formula, BrpError> {
    if !target.is_state_formula() {
        return Err(BrpError::MalformedTarget(target.to_string()));
    }
    let chi = kripke_to_formula(m)?;
    Ok(Formula::and(chi, Formula::eventually(target.clone())))
}

/// Tries bounds `k_min..=k_max` in order and stops at the first `sat`.
pub fn check_brp(
    m: &KripkeStructure,
    target: &Formula,
    k_min: u32,
    k_max: u32,
    theory: Theory,
    solver: &SolverConfig,
) -> Result<BrpResult, BrpError> {
    if k_min > k_max {
        return Err(BrpError::EmptyRange(k_min, k_max));
    }
    let phi = reachability_formula(m, target)?;
    let mut stats = Vec::new();
    let mut first_unknown = None;
    for k in k_min..=k_max {
        let outcome = check_formula(&phi, k, theory, None, solver)?;
        stats.push(outcome.stats);
        match outcome.status {
            Status::Sat => {
                return Ok(BrpResult {
                    status: BrpStatus::Reachable {
                        k,
                        witness: outcome.witness.expect("sat outcome carries a witness"),
                    },
                    stats,
                })
            }
            Status::Unknown => {
                first_unknown.get_or_insert(k);
            }
            Status::Unsat => {}
        }
    }
    let status = match first_unknown {
        Some(k) => BrpStatus::Unknown { k },
        None => BrpStatus::UnreachableUpTo(k_max),
    };
    Ok(BrpResult { status, stats })
}
