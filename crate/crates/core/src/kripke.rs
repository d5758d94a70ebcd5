//! Finite transition systems whose states carry propositions and arithmetic
//! constraints, and their translation into a temporal formula.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{ConstraintAtom, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StateLabel {
    pub props: BTreeSet<String>,
    pub constraints: Vec<ConstraintAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeStructure {
    pub states: Vec<String>,
    pub init: String,
    pub transitions: Vec<(String, String)>,
    pub labels: BTreeMap<String, StateLabel>,
    /// Constraints on the initial valuation, asserted at instant 0.
    pub initially: Vec<ConstraintAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KripkeError {
    #[error("state `{0}` has no outgoing transition")]
    Deadlock(String),
    #[error("state `{0}` is not declared")]
    Undeclared(String),
    #[error("state `{0}` has no label")]
    Unlabelled(String),
}

impl KripkeStructure {
    /// Atomic propositions used in any label.
    pub fn props(&self) -> BTreeSet<String> {
        self.labels.values().flat_map(|l| l.props.iter().cloned()).collect()
    }

    /// The constraint set `C`: every constraint used in some label.
    pub fn constraints(&self) -> BTreeSet<ConstraintAtom> {
        self.labels
            .values()
            .flat_map(|l| l.constraints.iter().cloned())
            .collect()
    }

    pub fn successors<'a>(&'a self, s: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.transitions
            .iter()
            .filter(move |(a, _)| a == s)
            .map(|(_, b)| b.as_str())
    }

    pub fn validate(&self) -> Result<(), KripkeError> {
        let declared: BTreeSet<&str> = self.states.iter().map(String::as_str).collect();
        if !declared.contains(self.init.as_str()) {
            return Err(KripkeError::Undeclared(self.init.clone()));
        }
        for (a, b) in &self.transitions {
            for s in [a, b] {
                if !declared.contains(s.as_str()) {
                    return Err(KripkeError::Undeclared(s.clone()));
                }
            }
        }
        for s in &self.states {
            if !self.labels.contains_key(s) {
                return Err(KripkeError::Unlabelled(s.clone()));
            }
            if self.successors(s).next().is_none() {
                return Err(KripkeError::Deadlock(s.clone()));
            }
        }
        Ok(())
    }

    /// Name of the location proposition for state `s`, chosen so it does not
    /// clash with any label proposition.
    pub fn location_prop(&self, s: &str) -> String {
        let taken = self.props();
        let mut name = format!("at_{s}");
        while taken.contains(&name) {
            name.push('_');
        }
        name
    }
}

/// Builds the formula describing the runs of `m`:
///
/// `at(s0) & initially & G( AND_s at(s) -> (exactly-one & label(s) & X OR_{s->t} at(t)) )`
pub fn kripke_to_formula(m: &KripkeStructure) -> Result<Formula, KripkeError> {
    m.validate()?;
    let at: BTreeMap<&str, Formula> = m
        .states
        .iter()
        .map(|s| (s.as_str(), Formula::prop(m.location_prop(s))))
        .collect();
    let props = m.props();

    let mut per_state = Vec::new();
    for s in &m.states {
        let label = &m.labels[s];
        let mut body = Vec::new();
        for other in m.states.iter().filter(|o| *o != s) {
            body.push(Formula::not(at[other.as_str()].clone()));
        }
        for p in &props {
            let lit = Formula::prop(p.clone());
            body.push(if label.props.contains(p) {
                lit
            } else {
                Formula::not(lit)
            });
        }
        body.extend(label.constraints.iter().cloned().map(Formula::atom));
        let mut succ: Vec<&str> = m.successors(s).collect();
        succ.dedup();
        body.push(Formula::next(Formula::disj(
            succ.into_iter().map(|t| at[t].clone()),
        )));
        per_state.push(Formula::implies(at[s.as_str()].clone(), Formula::conj(body)));
    }

    let mut top = vec![at[m.init.as_str()].clone()];
    top.extend(m.initially.iter().cloned().map(Formula::atom));
    top.push(Formula::globally(Formula::conj(per_state)));
    Ok(Formula::conj(top))
}
