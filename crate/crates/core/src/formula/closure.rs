use std::collections::HashMap;

use super::{ConstraintAtom, Formula};

/// One closure entry, children referenced by table index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    True,
    False,
    Prop(String),
    Atom(ConstraintAtom),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Prev(usize),
    WeakPrev(usize),
    Until(usize, usize),
    Since(usize, usize),
    Release(usize, usize),
    Trigger(usize, usize),
}

impl Node {
    pub fn is_eventuality(&self) -> bool {
        matches!(self, Node::Until(..) | Node::Release(..))
    }
}

/// Syntactic closure of a formula: each distinct subformula once, indexed in
/// post-order (children before parents, left before right). The root is the
/// last entry.
#[derive(Debug, Clone)]
pub struct SubformulaTable {
    nodes: Vec<Node>,
    formulas: Vec<Formula>,
}

impl SubformulaTable {
    pub fn build(phi: &Formula) -> Self {
        let mut table = SubformulaTable {
            nodes: Vec::new(),
            formulas: Vec::new(),
        };
        let mut seen = HashMap::new();
        table.intern(phi, &mut seen);
        table
    }

    fn intern(&mut self, f: &Formula, seen: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let mut go = |g: &Formula| self.intern(g, seen);
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Prop(p) => Node::Prop(p.clone()),
            Formula::Atom(a) => Node::Atom(a.clone()),
            Formula::Not(a) => Node::Not(go(a)),
            Formula::Next(a) => Node::Next(go(a)),
            Formula::Prev(a) => Node::Prev(go(a)),
            Formula::WeakPrev(a) => Node::WeakPrev(go(a)),
            Formula::And(a, b) => {
                let a = go(a);
                Node::And(a, go(b))
            }
            Formula::Or(a, b) => {
                let a = go(a);
                Node::Or(a, go(b))
            }
            Formula::Until(a, b) => {
                let a = go(a);
                Node::Until(a, go(b))
            }
            Formula::Since(a, b) => {
                let a = go(a);
                Node::Since(a, go(b))
            }
            Formula::Release(a, b) => {
                let a = go(a);
                Node::Release(a, go(b))
            }
            Formula::Trigger(a, b) => {
                let a = go(a);
                Node::Trigger(a, go(b))
            }
        };
        let idx = self.nodes.len();
        self.nodes.push(node);
        self.formulas.push(f.clone());
        seen.insert(f.clone(), idx);
        idx
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.formulas[i]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Number of distinct subformulae.
    pub fn m(&self) -> usize {
        self.nodes.len()
    }

    /// Number of distinct `U`/`R` subformulae.
    pub fn n(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_eventuality()).count()
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.formulas.iter().position(|g| g == f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::formula::Theory;

    #[test]
    fn until_closure() {
        let t = SubformulaTable::build(&Formula::until(Formula::prop("p"), Formula::prop("q")));
        assert_eq!((t.m(), t.n()), (3, 1));
        assert_eq!(t.node(0), &Node::Prop("p".into()));
        assert_eq!(t.node(1), &Node::Prop("q".into()));
        assert_eq!(t.node(t.root()), &Node::Until(0, 1));
    }

    #[test]
    fn single_prop() {
        let t = SubformulaTable::build(&Formula::prop("p"));
        assert_eq!((t.m(), t.n()), (1, 0));
    }

    #[test]
    fn fig1_closure_counted_by_hand() {
        // four distinct atoms, one `|`, one `&`, one `U`
        let phi = parse_formula(
            "(x = Y y + 1 | y = x + 2) U (y <= X^2 x & x < X x)",
            Theory::Dl,
        )
        .unwrap();
        let t = SubformulaTable::build(&phi);
        assert_eq!(t.m(), 7);
        assert_eq!(t.n(), 1);
    }

    #[test]
    fn shared_subformulae_are_deduplicated() {
        let p = Formula::prop("p");
        let f = Formula::and(Formula::next(p.clone()), Formula::until(p.clone(), Formula::next(p)));
        let t = SubformulaTable::build(&f);
        // p, X p, p U X p, root
        assert_eq!(t.m(), 4);
        assert_eq!(t.n(), 1);
    }
}
