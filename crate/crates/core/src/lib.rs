//! Bounded satisfiability and reachability checking for linear temporal
//! logic with past operators and integer constraints between variables at
//! nearby instants.
//!
//! Formulas are compiled into quantifier-free SMT-LIB (difference logic or
//! linear integer arithmetic, both with uninterpreted functions) and handed
//! to an external solver. A model is decoded into an ultimately periodic
//! witness, which is re-checked against the bounded semantics in [`eval`].

pub mod brp;
pub mod cli;
pub mod encode;
pub mod eval;
pub mod formula;
pub mod kripke;
pub mod oracle;
pub mod smt;
pub mod solver;
pub mod syntax;
pub mod witness;

#[cfg(test)]
pub(crate) mod testing;
