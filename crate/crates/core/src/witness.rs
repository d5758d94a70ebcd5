//! Bounded witnesses: a labelled path of length `k`, an optional loop
//! position and a finite valuation window per variable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::encode::SymbolTable;
use crate::formula::WindowMetrics;
use crate::smt::Value;
use crate::solver::{SolverVerdict, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub k: u32,
    /// Propositions true at instants `0..=k`.
    pub labels: Vec<BTreeSet<String>>,
    /// Position the path returns to after `k`, in `1..=k`.
    pub loop_pos: Option<u32>,
    /// Per variable, a contiguous range of instants and their values.
    pub sigma: BTreeMap<String, BTreeMap<i64, i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("expected {expected} labels for bound {k}, found {found}")]
    LabelCount { k: u32, expected: usize, found: usize },
    #[error("loop position {0} is outside 1..=k")]
    LoopRange(u32),
    #[error("labels at {0} and {1} differ although the path loops")]
    LoopMismatch(u32, u32),
    #[error("values of `{0}` do not form a contiguous window")]
    Gap(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("solver answered {0}, no model to decode")]
    NoModel(Status),
    #[error("model has no value for `{0}`")]
    Missing(String),
    #[error("model value for `{0}` has the wrong sort")]
    Sort(String),
}

impl Witness {
    pub fn validate(&self) -> Result<(), WitnessError> {
        let expected = self.k as usize + 1;
        if self.labels.len() != expected {
            return Err(WitnessError::LabelCount {
                k: self.k,
                expected,
                found: self.labels.len(),
            });
        }
        if let Some(l) = self.loop_pos {
            if l < 1 || l > self.k {
                return Err(WitnessError::LoopRange(l));
            }
            if self.labels[l as usize - 1] != self.labels[self.k as usize] {
                return Err(WitnessError::LoopMismatch(l - 1, self.k));
            }
        }
        for (var, values) in &self.sigma {
            if let (Some((&lo, _)), Some((&hi, _))) = (values.first_key_value(), values.last_key_value())
            {
                if (hi - lo + 1) as usize != values.len() {
                    return Err(WitnessError::Gap(var.clone()));
                }
            }
        }
        Ok(())
    }

    /// Declared window `(lo, hi)` of `var`, if it has any values.
    pub fn window(&self, var: &str) -> Option<(i64, i64)> {
        let values = self.sigma.get(var)?;
        Some((*values.first_key_value()?.0, *values.last_key_value()?.0))
    }

    pub fn value(&self, var: &str, instant: i64) -> Option<i64> {
        self.sigma.get(var)?.get(&instant).copied()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bound: {}", self.k)?;
        match self.loop_pos {
            Some(l) => writeln!(f, "loop: {l}")?,
            None => writeln!(f, "loop: none")?,
        }
        writeln!(f, "labels:")?;
        for (i, label) in self.labels.iter().enumerate() {
            let props: Vec<&str> = label.iter().map(String::as_str).collect();
            writeln!(f, "  {i:>3}: {{{}}}", props.join(", "))?;
        }
        if !self.sigma.is_empty() {
            writeln!(f, "values:")?;
            for (var, values) in &self.sigma {
                let cells: Vec<String> = values.iter().map(|(t, v)| format!("{t}:{v}")).collect();
                writeln!(f, "  {var}: {}", cells.join(" "))?;
            }
        }
        Ok(())
    }
}

pub fn decode_witness(
    verdict: &SolverVerdict,
    symtab: &SymbolTable,
    k: u32,
    metrics: &WindowMetrics,
) -> Result<Witness, DecodeError> {
    let model = match (&verdict.status, &verdict.model) {
        (Status::Sat, Some(m)) => m,
        (s, _) => return Err(DecodeError::NoModel(*s)),
    };
    let int_const = |name: &str| match model.constant(name) {
        Some(Value::Int(n)) => Ok(n),
        Some(_) => Err(DecodeError::Sort(name.into())),
        None => Err(DecodeError::Missing(name.into())),
    };
    let loop_val = int_const(&symtab.loop_var)?;
    for j in symtab.eventualities.values() {
        int_const(j)?;
    }
    let loop_pos = (1..=k as i64).contains(&loop_val).then_some(loop_val as u32);

    let mut labels = vec![BTreeSet::new(); k as usize + 1];
    for (prop, &idx) in &symtab.props {
        let pred = &symtab.preds[idx];
        for (t, label) in labels.iter_mut().enumerate() {
            match model.apply(pred, t as i64) {
                Some(Value::Bool(true)) => {
                    label.insert(prop.clone());
                }
                Some(Value::Bool(false)) => {}
                Some(_) => return Err(DecodeError::Sort(format!("({pred} {t})"))),
                None => return Err(DecodeError::Missing(format!("({pred} {t})"))),
            }
        }
    }

    let mut sigma = BTreeMap::new();
    for (var, f) in &symtab.term_fns {
        let (lo, hi) = metrics.window(var, k);
        let mut values = BTreeMap::new();
        for t in lo..=hi {
            match model.apply(f, t) {
                Some(Value::Int(v)) => {
                    values.insert(t, v);
                }
                Some(_) => return Err(DecodeError::Sort(format!("({f} {t})"))),
                None => return Err(DecodeError::Missing(format!("({f} {t})"))),
            }
        }
        sigma.insert(var.clone(), values);
    }
    Ok(Witness {
        k,
        labels,
        loop_pos,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode;
    use crate::formula::{to_pnf, Theory};
    use crate::smt::Model;
    use crate::syntax::parse_formula;
    use std::time::Duration;

    const FIG1: &str = "(x = Y y + 1 | y = x + 2) U (y <= X^2 x & x < X x)";

    fn verdict(model: Model) -> SolverVerdict {
        SolverVerdict {
            status: Status::Sat,
            model: Some(model),
            diagnostics: String::new(),
            elapsed: Duration::ZERO,
        }
    }

    /// A model assigning every request of the Fig. 1 encoding at k = 3, with
    /// the Fig. 2 values where they exist.
    fn fig2_model(loop_val: i64) -> (crate::encode::EncodingArtifact, Model) {
        let f = to_pnf(&parse_formula(FIG1, Theory::Dl).unwrap());
        let a = encode(&f, 3, Theory::Dl, None).unwrap();
        let mut m = Model::default();
        m.consts.insert("loop".into(), Value::Int(loop_val));
        for j in a.symtab.eventualities.values() {
            m.consts.insert(j.clone(), Value::Int(2));
        }
        for p in &a.symtab.preds {
            for t in 0..=4 {
                m.funcs.entry(p.clone()).or_default().insert(t, Value::Bool(false));
            }
        }
        let x = [1, 4, 3, 4, 5, 6, 7];
        let y = [0, 3, 5, 5, 6, 7];
        for (t, v) in x.iter().enumerate() {
            m.funcs.entry("v_x".into()).or_default().insert(t as i64, Value::Int(*v));
        }
        for (t, v) in y.iter().enumerate() {
            m.funcs.entry("v_y".into()).or_default().insert(t as i64 - 1, Value::Int(*v));
        }
        (a, m)
    }

    #[test]
    fn decodes_fig2_values() {
        let (a, m) = fig2_model(0);
        let w = decode_witness(&verdict(m), &a.symtab, 3, &a.metrics).unwrap();
        assert_eq!(w.loop_pos, None);
        assert_eq!(w.value("x", 1), Some(4));
        assert_eq!(w.value("y", -1), Some(0));
        assert_eq!(w.window("x"), Some((0, 6)));
        assert_eq!(w.window("y"), Some((-1, 4)));
        assert!(w.validate().is_ok());
    }

    #[test]
    fn loop_outside_range_is_none() {
        let (a, m) = fig2_model(7);
        let w = decode_witness(&verdict(m), &a.symtab, 3, &a.metrics).unwrap();
        assert_eq!(w.loop_pos, None);
        let (a, m) = fig2_model(2);
        let w = decode_witness(&verdict(m), &a.symtab, 3, &a.metrics).unwrap();
        assert_eq!(w.loop_pos, Some(2));
    }

    #[test]
    fn missing_eventuality_is_named() {
        let (a, mut m) = fig2_model(0);
        let j = a.symtab.eventualities.values().next().unwrap().clone();
        m.consts.remove(&j);
        assert_eq!(
            decode_witness(&verdict(m), &a.symtab, 3, &a.metrics),
            Err(DecodeError::Missing(j))
        );
    }

    #[test]
    fn validation() {
        let mut w = Witness {
            k: 2,
            labels: vec![BTreeSet::from(["p".to_string()]), BTreeSet::new(), BTreeSet::new()],
            loop_pos: Some(2),
            sigma: BTreeMap::new(),
        };
        assert!(w.validate().is_ok());
        w.loop_pos = Some(1);
        assert_eq!(w.validate(), Err(WitnessError::LoopMismatch(0, 2)));
        w.loop_pos = Some(3);
        assert_eq!(w.validate(), Err(WitnessError::LoopRange(3)));
        w.loop_pos = None;
        w.sigma.insert("x".into(), BTreeMap::from([(0, 1), (2, 3)]));
        assert_eq!(w.validate(), Err(WitnessError::Gap("x".into())));
    }

    #[test]
    fn report_format() {
        let w = Witness {
            k: 1,
            labels: vec![BTreeSet::from(["p".to_string(), "q".to_string()]), BTreeSet::new()],
            loop_pos: Some(1),
            sigma: BTreeMap::from([("x".to_string(), BTreeMap::from([(-1, 0), (0, 2), (1, 3)]))]),
        };
        assert_eq!(
            w.to_string(),
            "bound: 1\nloop: 1\nlabels:\n    0: {p, q}\n    1: {}\nvalues:\n  x: -1:0 0:2 1:3\n"
        );
    }
}
