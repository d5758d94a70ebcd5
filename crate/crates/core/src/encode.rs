//! Translation of a PNF formula and a bound `k` into an SMT-LIB script whose
//! models are exactly the bounded (lasso or finite) models of length `k`.
//!
//! Symbols: `loop` (the loop position), `j_<i>` (eventuality witness of the
//! `U`/`R` entry `i`), `phi_<i>: Int -> Bool` (truth of table entry `i`
//! per instant) and `v_<x>: Int -> Int` (value of variable `x` per instant).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::formula::{
    is_pnf, window_metrics, ConstraintAtom, Formula, Node, Relation, SubformulaTable, Theory,
    WindowMetrics,
};

/// Values of variables before instant 0, keyed by variable then instant.
pub type InitialAssignment = BTreeMap<String, BTreeMap<i64, i64>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("formula is not in positive normal form")]
    NotPnf,
    #[error("constraint `{atom}` is not a difference constraint; use the lia theory")]
    TheoryMismatch { atom: String },
    #[error("bound must be at least 1, got {0}")]
    InvalidBound(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    pub loop_var: String,
    /// Predicate name per closure-table index.
    pub preds: Vec<String>,
    /// Eventuality variable per `U`/`R` table index.
    pub eventualities: BTreeMap<usize, String>,
    /// Term function per program variable.
    pub term_fns: BTreeMap<String, String>,
    /// Table index of each atomic proposition.
    pub props: BTreeMap<String, usize>,
}

/// A term whose value is asked for after `sat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueRequest {
    Const(String),
    App(String, i64),
}

impl ValueRequest {
    pub fn to_smt(&self) -> String {
        match self {
            ValueRequest::Const(c) => c.clone(),
            ValueRequest::App(f, i) => format!("({f} {})", int(*i)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EncodingArtifact {
    /// Declarations, assertions and `(check-sat)`.
    pub script: String,
    pub symtab: SymbolTable,
    pub k: u32,
    pub theory: Theory,
    pub table: SubformulaTable,
    pub metrics: WindowMetrics,
    pub value_requests: Vec<ValueRequest>,
}

impl EncodingArtifact {
    pub fn get_value_command(&self) -> String {
        let terms: Vec<String> = self.value_requests.iter().map(ValueRequest::to_smt).collect();
        format!("(get-value ({}))", terms.join(" "))
    }

    /// The script followed by the `get-value` request, as written to disk.
    pub fn full_script(&self) -> String {
        format!("{}{}\n", self.script, self.get_value_command())
    }
}

pub(crate) fn int(n: i64) -> String {
    if n < 0 {
        format!("(- {})", -n)
    } else {
        n.to_string()
    }
}

fn conj(items: Vec<String>) -> String {
    match items.len() {
        0 => "true".into(),
        1 => items.into_iter().next().unwrap(),
        _ => format!("(and {})", items.join(" ")),
    }
}

struct Emitter<'a> {
    table: &'a SubformulaTable,
    symtab: &'a SymbolTable,
    theory: Theory,
}

impl Emitter<'_> {
    fn pred(&self, idx: usize, t: i64) -> String {
        format!("({} {})", self.symtab.preds[idx], int(t))
    }

    fn term(&self, var: &str, t: i64) -> String {
        format!("({} {})", self.symtab.term_fns[var], int(t))
    }

    fn atom(&self, a: &ConstraintAtom, t: i64) -> String {
        let lhs = match self.theory {
            Theory::Dl => match a.terms() {
                [] => "0".to_string(),
                [(_, x)] => self.term(&x.var, t + x.offset),
                [(_, x), (_, y)] => format!(
                    "(- {} {})",
                    self.term(&x.var, t + x.offset),
                    self.term(&y.var, t + y.offset)
                ),
                _ => unreachable!("checked by fits()"),
            },
            Theory::Lia => {
                let summands: Vec<String> = a
                    .terms()
                    .iter()
                    .map(|(c, x)| {
                        let v = self.term(&x.var, t + x.offset);
                        match c {
                            1 => v,
                            -1 => format!("(- {v})"),
                            _ => format!("(* {} {v})", int(*c)),
                        }
                    })
                    .collect();
                match summands.len() {
                    0 => "0".into(),
                    1 => summands.into_iter().next().unwrap(),
                    _ => format!("(+ {})", summands.join(" ")),
                }
            }
        };
        let c = int(a.constant());
        match a.relation() {
            Relation::Ne => format!("(not (= {lhs} {c}))"),
            r => format!("({} {lhs} {c})", r.symbol()),
        }
    }

    /// State-level definition of entry `idx` at instant `t`, if it has one.
    fn definition(&self, idx: usize, t: i64) -> Option<String> {
        let rhs = match self.table.node(idx) {
            Node::True => "true".to_string(),
            Node::False => "false".to_string(),
            Node::Atom(a) => self.atom(a, t),
            Node::Not(a) => format!("(not {})", self.pred(*a, t)),
            Node::And(a, b) => format!("(and {} {})", self.pred(*a, t), self.pred(*b, t)),
            Node::Or(a, b) => format!("(or {} {})", self.pred(*a, t), self.pred(*b, t)),
            _ => return None,
        };
        Some(format!("(= {} {rhs})", self.pred(idx, t)))
    }

    /// Fixpoint constraint of a temporal entry at instant `t` (0..=k).
    fn fixpoint(&self, idx: usize, t: i64) -> Option<String> {
        let p = |i, t| self.pred(i, t);
        let rhs = match *self.table.node(idx) {
            Node::Next(a) => p(a, t + 1),
            Node::Until(a, b) => format!("(or {} (and {} {}))", p(b, t), p(a, t), p(idx, t + 1)),
            Node::Release(a, b) => {
                format!("(and {} (or {} {}))", p(b, t), p(a, t), p(idx, t + 1))
            }
            Node::Prev(_) if t == 0 => "false".into(),
            Node::WeakPrev(_) if t == 0 => "true".into(),
            Node::Prev(a) | Node::WeakPrev(a) => p(a, t - 1),
            Node::Since(_, b) | Node::Trigger(_, b) if t == 0 => p(b, 0),
            Node::Since(a, b) => format!("(or {} (and {} {}))", p(b, t), p(a, t), p(idx, t - 1)),
            Node::Trigger(a, b) => {
                format!("(and {} (or {} {}))", p(b, t), p(a, t), p(idx, t - 1))
            }
            _ => return None,
        };
        Some(format!("(= {} {rhs})", p(idx, t)))
    }
}

fn assert_family(out: &mut String, title: &str, items: Vec<String>) {
    let _ = writeln!(out, "; {title}");
    match items.len() {
        0 => out.push_str("(assert true)\n"),
        1 => {
            let _ = writeln!(out, "(assert {})", items[0]);
        }
        _ => {
            out.push_str("(assert (and\n");
            for it in &items {
                let _ = writeln!(out, "  {it}");
            }
            out.push_str("))\n");
        }
    }
}

pub fn encode(
    phi: &Formula,
    k: u32,
    theory: Theory,
    init: Option<&InitialAssignment>,
) -> Result<EncodingArtifact, EncodeError> {
    if k < 1 {
        return Err(EncodeError::InvalidBound(k));
    }
    if !is_pnf(phi) {
        return Err(EncodeError::NotPnf);
    }
    if let Some(a) = phi.atoms().into_iter().find(|a| !a.fits(theory)) {
        return Err(EncodeError::TheoryMismatch {
            atom: a.to_string(),
        });
    }

    let table = SubformulaTable::build(phi);
    let metrics = window_metrics(phi);
    let m = table.m();
    let symtab = SymbolTable {
        loop_var: "loop".into(),
        preds: (0..m).map(|i| format!("phi_{i}")).collect(),
        eventualities: (0..m)
            .filter(|&i| table.node(i).is_eventuality())
            .map(|i| (i, format!("j_{i}")))
            .collect(),
        term_fns: metrics.vars().map(|v| (v.to_string(), format!("v_{v}"))).collect(),
        props: (0..m)
            .filter_map(|i| match table.node(i) {
                Node::Prop(p) => Some((p.clone(), i)),
                _ => None,
            })
            .collect(),
    };
    let em = Emitter {
        table: &table,
        symtab: &symtab,
        theory,
    };
    let k64 = k as i64;
    let has_loop = format!("(and (<= 1 loop) (<= loop {k}))");

    let mut out = String::new();
    let _ = writeln!(out, "(set-logic {})", theory.smt_logic());
    let _ = writeln!(out, "; bound k = {k}");
    out.push_str("(declare-const loop Int)\n");
    for j in symtab.eventualities.values() {
        let _ = writeln!(out, "(declare-const {j} Int)");
    }
    for (i, name) in symtab.preds.iter().enumerate() {
        let _ = writeln!(out, "(declare-fun {name} (Int) Bool) ; {}", table.formula(i));
    }
    for f in symtab.term_fns.values() {
        let _ = writeln!(out, "(declare-fun {f} (Int) Int)");
    }

    // 1. loop: labels at loop-1 and k agree
    let mut fam = Vec::new();
    for i in 1..=k64 {
        let same: Vec<String> = symtab
            .props
            .values()
            .map(|&p| format!("(= {} {})", em.pred(p, i - 1), em.pred(p, k64)))
            .collect();
        fam.push(format!("(=> (= loop {i}) {})", conj(same)));
    }
    assert_family(&mut out, "loop constraints", fam);

    // 3. state-level definitions; at k+1 only on a lasso
    let mut fam = Vec::new();
    let mut border = Vec::new();
    for i in 0..m {
        for t in 0..=k64 {
            fam.extend(em.definition(i, t));
        }
        border.extend(em.definition(i, k64 + 1));
    }
    if !border.is_empty() {
        fam.push(format!("(=> {has_loop} {})", conj(border)));
    }
    assert_family(&mut out, "propositional and constraint definitions", fam);

    // 4. temporal fixpoints
    let mut fam = Vec::new();
    for i in 0..m {
        for t in 0..=k64 {
            fam.extend(em.fixpoint(i, t));
        }
    }
    assert_family(&mut out, "temporal fixpoints", fam);

    // 5. last state: k+1 mirrors the loop position, or is false without a loop
    let mut fam = Vec::new();
    for i in 0..m {
        for l in 1..=k64 {
            fam.push(format!(
                "(=> (= loop {l}) (= {} {}))",
                em.pred(i, k64 + 1),
                em.pred(i, l)
            ));
        }
        fam.push(format!("(=> (not {has_loop}) (not {}))", em.pred(i, k64 + 1)));
    }
    assert_family(&mut out, "last-state constraints", fam);

    // 6. eventualities
    let mut fam = Vec::new();
    for (&i, j) in &symtab.eventualities {
        let (trigger, goal) = match *table.node(i) {
            Node::Until(_, b) => (em.pred(i, k64), format!("({} {j})", symtab.preds[b])),
            Node::Release(_, b) => (
                format!("(not {})", em.pred(i, k64)),
                format!("(not ({} {j}))", symtab.preds[b]),
            ),
            _ => unreachable!(),
        };
        fam.push(format!(
            "(=> {has_loop} (=> {trigger} (and (<= loop {j}) (<= {j} {k}) {goal})))"
        ));
    }
    assert_family(&mut out, "eventualities", fam);

    // 7. initial values before instant 0
    let mut fam = Vec::new();
    if let Some(init) = init {
        for (var, values) in init {
            if !symtab.term_fns.contains_key(var) {
                continue;
            }
            let lo = metrics.look_backward(var);
            for (&t, &v) in values.range(lo..=-1) {
                fam.push(format!("(= {} {})", em.term(var, t), int(v)));
            }
        }
    }
    assert_family(&mut out, "initialisation", fam);

    out.push_str("; root\n");
    let _ = writeln!(out, "(assert {})", em.pred(table.root(), 0));
    out.push_str("(check-sat)\n");

    let mut value_requests = vec![ValueRequest::Const("loop".into())];
    value_requests.extend(
        symtab
            .eventualities
            .values()
            .map(|j| ValueRequest::Const(j.clone())),
    );
    for name in &symtab.preds {
        for t in 0..=k64 + 1 {
            value_requests.push(ValueRequest::App(name.clone(), t));
        }
    }
    for (var, f) in &symtab.term_fns {
        let (lo, hi) = metrics.window(var, k);
        for t in lo..=hi {
            value_requests.push(ValueRequest::App(f.clone(), t));
        }
    }

    Ok(EncodingArtifact {
        script: out,
        symtab,
        k,
        theory,
        table,
        metrics,
        value_requests,
    })
}

/// Counts `(ints, preds)`: integer constants and unary Boolean predicates
/// declared in `script`.
pub fn count_symbols(script: &str) -> (usize, usize) {
    let mut ints = 0;
    let mut preds = 0;
    let Ok(exprs) = crate::smt::parse_all(script) else {
        return (0, 0);
    };
    for e in &exprs {
        let Some(items) = e.as_list() else { continue };
        let head = items.first().and_then(|h| h.as_atom());
        match (head, items.len()) {
            (Some("declare-const"), 3) if items[2].as_atom() == Some("Int") => ints += 1,
            (Some("declare-fun"), 4) => {
                let args: Vec<Option<&str>> = items[2]
                    .as_list()
                    .unwrap_or(&[])
                    .iter()
                    .map(|a| a.as_atom())
                    .collect();
                match (args.as_slice(), items[3].as_atom()) {
                    ([], Some("Int")) => ints += 1,
                    ([Some("Int")], Some("Bool")) => preds += 1,
                    _ => {}
                }
            }
            _ => {}
        }
    }
    (ints, preds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::to_pnf;
    use crate::syntax::parse_formula;
    use proptest::prelude::*;

    const FIG1: &str = "(x = Y y + 1 | y = x + 2) U (y <= X^2 x & x < X x)";

    fn enc(src: &str, k: u32) -> EncodingArtifact {
        let f = parse_formula(src, Theory::Dl).unwrap();
        encode(&to_pnf(&f), k, Theory::Dl, None).unwrap()
    }

    #[test]
    fn until_counts() {
        let a = enc("p U q", 4);
        assert_eq!(count_symbols(&a.script), (2, 3));
    }

    #[test]
    fn single_prop_counts() {
        assert_eq!(count_symbols(&enc("p", 2).script), (1, 1));
    }

    #[test]
    fn fig1_counts() {
        let a = enc(FIG1, 3);
        assert_eq!(count_symbols(&a.script), (2, 7));
        assert!(a.script.starts_with("(set-logic QF_UFIDL)\n"));
        assert!(a.script.contains("(v_y (- 1))"));
        // y ranges over [-1, 4], x over [0, 6]
        let x_req = a
            .value_requests
            .iter()
            .filter(|r| matches!(r, ValueRequest::App(f, _) if f == "v_x"))
            .count();
        assert_eq!(x_req, 7);
    }

    #[test]
    fn deterministic_output() {
        assert_eq!(enc(FIG1, 3).full_script(), enc(FIG1, 3).full_script());
    }

    #[test]
    fn rejects_bad_input() {
        let f = parse_formula("!(p U q)", Theory::Dl).unwrap();
        assert_eq!(encode(&f, 2, Theory::Dl, None).unwrap_err(), EncodeError::NotPnf);
        let g = parse_formula("2*x + y < 3", Theory::Lia).unwrap();
        assert!(matches!(
            encode(&g, 2, Theory::Dl, None),
            Err(EncodeError::TheoryMismatch { atom }) if atom == "2*x + y < 3"
        ));
        assert!(encode(&g, 2, Theory::Lia, None).is_ok());
        assert_eq!(
            encode(&Formula::prop("p"), 0, Theory::Dl, None).unwrap_err(),
            EncodeError::InvalidBound(0)
        );
    }

    #[test]
    fn init_values_in_window_only() {
        let f = parse_formula("x = Y^2 x", Theory::Dl).unwrap();
        let mut init = InitialAssignment::new();
        init.entry("x".into()).or_default().extend([(-3, 9), (-2, 5), (-1, 7), (0, 1)]);
        let a = encode(&f, 1, Theory::Dl, Some(&init)).unwrap();
        assert!(a.script.contains("(= (v_x (- 2)) 5)"));
        assert!(a.script.contains("(= (v_x (- 1)) 7)"));
        assert!(!a.script.contains("(v_x (- 3))"));
        assert!(!a.script.contains("(= (v_x 0) 1)"));
    }

    #[test]
    fn eventuality_goal_uses_j() {
        let a = enc("p U q", 2);
        assert!(a.script.contains("(=> (phi_2 2) (and (<= loop j_2) (<= j_2 2) (phi_1 j_2)))"));
        let r = enc("p R q", 2);
        assert!(r.script.contains("(not (phi_2 2)) (and (<= loop j_2) (<= j_2 2) (not (phi_1 j_2)))"));
    }

    #[test]
    fn lia_atom_syntax() {
        let f = parse_formula("2*x - 3*Y y >= -4", Theory::Lia).unwrap();
        let a = encode(&f, 1, Theory::Lia, None).unwrap();
        assert!(a.script.contains("(>= (+ (* 2 (v_x 0)) (* (- 3) (v_y (- 1)))) (- 4))"), "{}", a.script);
        assert!(a.script.contains("(set-logic QF_UFLIA)"));
    }

    proptest! {
        #[test]
        fn symbol_counts_match_table(f in crate::testing::arb_formula(4), k in 1u32..6) {
            let f = to_pnf(&f);
            let a = encode(&f, k, Theory::Lia, None).unwrap();
            let t = SubformulaTable::build(&f);
            prop_assert_eq!(count_symbols(&a.script), (t.n() + 1, t.m()));
        }
    }
}
