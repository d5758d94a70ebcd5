use std::collections::BTreeMap;

use super::{ArithTerm, Formula};

/// Net temporal shift of a canonical arithmetic term.
pub fn att_depth(t: &ArithTerm) -> i64 {
    t.offset
}

/// Per-variable look-forward (`>= 0`) and look-backward (`<= 0`) extents and
/// their global extrema.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WindowMetrics {
    per_var: BTreeMap<String, (i64, i64)>,
    forward: i64,
    backward: i64,
}

impl WindowMetrics {
    pub fn look_forward(&self, var: &str) -> i64 {
        self.per_var.get(var).map_or(0, |e| e.0)
    }

    pub fn look_backward(&self, var: &str) -> i64 {
        self.per_var.get(var).map_or(0, |e| e.1)
    }

    pub fn forward(&self) -> i64 {
        self.forward
    }

    pub fn backward(&self) -> i64 {
        self.backward
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.per_var.keys().map(String::as_str)
    }

    /// Instants at which `var` must carry a value for a bound `k`:
    /// `[backward_x, k + 1 + forward_x]`.
    pub fn window(&self, var: &str, k: u32) -> (i64, i64) {
        (
            self.look_backward(var),
            k as i64 + 1 + self.look_forward(var),
        )
    }
}

pub fn window_metrics(phi: &Formula) -> WindowMetrics {
    let mut m = WindowMetrics::default();
    for atom in phi.atoms() {
        for (_, t) in atom.terms() {
            let d = att_depth(t);
            let e = m.per_var.entry(t.var.clone()).or_insert((0, 0));
            e.0 = e.0.max(d);
            e.1 = e.1.min(d);
        }
    }
    m.forward = m.per_var.values().map(|e| e.0).max().unwrap_or(0);
    m.backward = m.per_var.values().map(|e| e.1).min().unwrap_or(0);
    m
}
