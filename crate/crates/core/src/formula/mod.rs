//! Abstract syntax of the logic: propositions, arithmetic constraints over
//! shifted variables, Boolean connectives and past/future temporal operators.

mod closure;
mod metrics;
mod pnf;

use std::collections::BTreeSet;
use std::fmt;

pub use closure::{Node, SubformulaTable};
pub use metrics::{att_depth, window_metrics, WindowMetrics};
pub use pnf::{is_pnf, to_pnf};

/// A variable under a stack of next/previous shifts, flattened to a single
/// offset (number of `X` minus number of `Y`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArithTerm {
    pub var: String,
    pub offset: i64,
}

impl ArithTerm {
    pub fn new(var: impl Into<String>, offset: i64) -> Self {
        ArithTerm {
            var: var.into(),
            offset,
        }
    }

    /// Applies one more `X` (positive) or `Y` (negative) shift.
    pub fn shifted(&self, by: i64) -> Self {
        ArithTerm::new(self.var.clone(), self.offset + by)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Lt,
        Relation::Le,
        Relation::Eq,
        Relation::Ne,
        Relation::Ge,
        Relation::Gt,
    ];

    /// The relation holding exactly when `self` does not.
    pub fn complement(self) -> Relation {
        match self {
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
            Relation::Ge => Relation::Lt,
            Relation::Gt => Relation::Le,
        }
    }

    /// The relation obtained when both sides are negated.
    pub fn mirrored(self) -> Relation {
        match self {
            Relation::Lt => Relation::Gt,
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Gt => Relation::Lt,
            r => r,
        }
    }

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// Constraint system the atoms are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theory {
    /// Integer difference logic: `t1 - t2 ~ c` or `t ~ c`.
    Dl,
    /// Linear integer arithmetic: `sum a_i * t_i ~ c`.
    Lia,
}

impl Theory {
    pub fn smt_logic(self) -> &'static str {
        match self {
            Theory::Dl => "QF_UFIDL",
            Theory::Lia => "QF_UFLIA",
        }
    }
}

/// `sum(coef * term) rel constant`, kept in canonical form (like terms merged,
/// zero coefficients dropped, difference shapes ordered positive-first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintAtom {
    terms: Vec<(i64, ArithTerm)>,
    rel: Relation,
    constant: i64,
}

impl ConstraintAtom {
    pub fn new(terms: Vec<(i64, ArithTerm)>, rel: Relation, constant: i64) -> Self {
        let mut merged: Vec<(i64, ArithTerm)> = Vec::with_capacity(terms.len());
        for (coef, term) in terms {
            match merged.iter_mut().find(|(_, t)| *t == term) {
                Some(slot) => slot.0 += coef,
                None => merged.push((coef, term)),
            }
        }
        merged.retain(|(c, _)| *c != 0);

        let (mut terms, mut rel, mut constant) = (merged, rel, constant);
        let coefs: Vec<i64> = terms.iter().map(|(c, _)| *c).collect();
        let negate = match coefs.as_slice() {
            [1] | [1, -1] => false,
            [-1, 1] => {
                terms.swap(0, 1);
                false
            }
            [-1] => true,
            _ => {
                terms.sort_by(|a, b| a.1.cmp(&b.1));
                terms.first().is_some_and(|(c, _)| *c < 0)
            }
        };
        if negate {
            for (c, _) in terms.iter_mut() {
                *c = -*c;
            }
            rel = rel.mirrored();
            constant = -constant;
        }
        ConstraintAtom {
            terms,
            rel,
            constant,
        }
    }

    /// `lhs - rhs rel constant`.
    pub fn difference(lhs: ArithTerm, rhs: ArithTerm, rel: Relation, constant: i64) -> Self {
        ConstraintAtom::new(vec![(1, lhs), (-1, rhs)], rel, constant)
    }

    /// `term rel constant`.
    pub fn bound(term: ArithTerm, rel: Relation, constant: i64) -> Self {
        ConstraintAtom::new(vec![(1, term)], rel, constant)
    }

    pub fn terms(&self) -> &[(i64, ArithTerm)] {
        &self.terms
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    /// Same terms, complemented relation.
    pub fn complement(&self) -> Self {
        ConstraintAtom {
            terms: self.terms.clone(),
            rel: self.rel.complement(),
            constant: self.constant,
        }
    }

    /// True for the difference-logic shapes `t1 - t2 ~ c`, `t ~ c` (and the
    /// degenerate constant comparison).
    pub fn is_difference(&self) -> bool {
        let coefs: Vec<i64> = self.terms.iter().map(|(c, _)| *c).collect();
        matches!(coefs.as_slice(), [] | [1] | [1, -1])
    }

    pub fn fits(&self, theory: Theory) -> bool {
        theory == Theory::Lia || self.is_difference()
    }

    /// Evaluates the atom given a lookup for each term; `None` from the lookup
    /// (an undefined value) makes the atom vacuously true.
    pub fn eval_with(&self, mut value: impl FnMut(&ArithTerm) -> Option<i64>) -> bool {
        let mut sum = 0i64;
        for (coef, term) in &self.terms {
            match value(term) {
                Some(v) => sum += coef * v,
                None => return true,
            }
        }
        self.rel.holds(sum, self.constant)
    }
}

impl fmt::Display for ArithTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.offset >= 0 { "X" } else { "Y" };
        match self.offset.abs() {
            0 => write!(f, "{}", self.var),
            1 => write!(f, "{op} {}", self.var),
            n => write!(f, "{op}^{n} {}", self.var),
        }
    }
}

impl fmt::Display for ConstraintAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 {} {}", self.rel.symbol(), self.constant);
        }
        for (i, (coef, term)) in self.terms.iter().enumerate() {
            let (sign, mag) = if *coef < 0 { ("-", -coef) } else { ("+", *coef) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{term}")?;
        }
        write!(f, " {} {}", self.rel.symbol(), self.constant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Prop(String),
    Atom(ConstraintAtom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `X`
    Next(Box<Formula>),
    /// `Y`, false at instant 0
    Prev(Box<Formula>),
    /// `Z`, true at instant 0
    WeakPrev(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Trigger(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    pub fn atom(atom: ConstraintAtom) -> Self {
        Formula::Atom(atom)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn prev(f: Formula) -> Self {
        Formula::Prev(Box::new(f))
    }

    pub fn weak_prev(f: Formula) -> Self {
        Formula::WeakPrev(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn since(a: Formula, b: Formula) -> Self {
        Formula::Since(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn trigger(a: Formula, b: Formula) -> Self {
        Formula::Trigger(Box::new(a), Box::new(b))
    }

    /// `F f`, stored as `true U f`.
    pub fn eventually(f: Formula) -> Self {
        Formula::until(Formula::True, f)
    }

    /// `G f`, stored as `false R f`.
    pub fn globally(f: Formula) -> Self {
        Formula::release(Formula::False, f)
    }

    /// Conjunction of all items, `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Disjunction of all items, `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Prop(_) | Atom(_) => vec![],
            Not(a) | Next(a) | Prev(a) | WeakPrev(a) => vec![a],
            And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) | Release(a, b) | Trigger(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Pre-order walk over every node.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    /// True when no temporal operator occurs outside arithmetic terms.
    pub fn is_state_formula(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |f| {
            if matches!(
                f,
                Formula::Next(_)
                    | Formula::Prev(_)
                    | Formula::WeakPrev(_)
                    | Formula::Until(..)
                    | Formula::Since(..)
                    | Formula::Release(..)
                    | Formula::Trigger(..)
            ) {
                ok = false;
            }
        });
        ok
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Prop(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn atoms(&self) -> BTreeSet<ConstraintAtom> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.atoms()
            .iter()
            .flat_map(|a| a.terms().iter().map(|(_, t)| t.var.clone()))
            .collect()
    }

    /// Number of nodes in the syntax tree (not deduplicated).
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_formula(self))
    }
}
