//! Feasibility of integer difference constraints via negative-cycle
//! detection on the constraint graph.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::{ConstraintAtom, Relation};

/// A variable at a concrete instant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub var: String,
    pub instant: i64,
}

impl Cell {
    pub fn new(var: impl Into<String>, instant: i64) -> Self {
        Cell {
            var: var.into(),
            instant,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.var, self.instant)
    }
}

/// `lhs - rhs rel constant`, or `lhs rel constant` without `rhs`, or the
/// constant comparison `0 rel constant` without either.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundAtom {
    pub lhs: Option<Cell>,
    pub rhs: Option<Cell>,
    pub rel: Relation,
    pub constant: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a difference constraint")]
pub struct NotDifference(pub String);

impl GroundAtom {
    pub fn difference(lhs: Cell, rhs: Cell, rel: Relation, constant: i64) -> Self {
        GroundAtom {
            lhs: Some(lhs),
            rhs: Some(rhs),
            rel,
            constant,
        }
    }

    pub fn bound(cell: Cell, rel: Relation, constant: i64) -> Self {
        GroundAtom {
            lhs: Some(cell),
            rhs: None,
            rel,
            constant,
        }
    }

    /// Instantiates `a` at `instant`.
    pub fn ground(a: &ConstraintAtom, instant: i64) -> Result<Self, NotDifference> {
        let at = |t: &crate::formula::ArithTerm| Cell::new(t.var.clone(), instant + t.offset);
        let (lhs, rhs) = match a.terms() {
            [] => (None, None),
            [(1, t)] => (Some(at(t)), None),
            [(1, t), (-1, u)] => (Some(at(t)), Some(at(u))),
            _ => return Err(NotDifference(a.to_string())),
        };
        Ok(GroundAtom {
            lhs,
            rhs,
            rel: a.relation(),
            constant: a.constant(),
        })
    }

    pub fn complement(&self) -> Self {
        GroundAtom {
            rel: self.rel.complement(),
            ..self.clone()
        }
    }

    pub fn holds(&self, model: &BTreeMap<Cell, i64>) -> bool {
        let v = |c: &Option<Cell>| c.as_ref().map_or(0, |c| model.get(c).copied().unwrap_or(0));
        self.rel.holds(v(&self.lhs) - v(&self.rhs), self.constant)
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lhs, &self.rhs) {
            (Some(l), Some(r)) => write!(f, "{l} - {r}")?,
            (Some(l), None) => write!(f, "{l}")?,
            _ => write!(f, "0")?,
        }
        write!(f, " {} {}", self.rel.symbol(), self.constant)
    }
}

/// `dst - src <= w` as node indices; `ZERO` stands for the constant 0.
#[derive(Clone, Copy)]
struct Edge {
    src: usize,
    dst: usize,
    w: i64,
}

const ZERO: usize = 0;

/// Satisfiability over the integers; on success an assignment to every cell
/// mentioned in `atoms`.
pub fn dl_feasible(atoms: &[GroundAtom]) -> Option<BTreeMap<Cell, i64>> {
    let mut index: BTreeMap<&Cell, usize> = BTreeMap::new();
    for a in atoms {
        for c in a.lhs.iter().chain(a.rhs.iter()) {
            let next = index.len() + 1;
            index.entry(c).or_insert(next);
        }
    }
    let node = |c: &Option<Cell>| c.as_ref().map_or(ZERO, |c| index[c]);

    let mut edges = Vec::new();
    let mut disequalities = Vec::new();
    for a in atoms {
        let (u, v, c) = (node(&a.lhs), node(&a.rhs), a.constant);
        // u - v rel c
        let mut le = |dst, src, w| edges.push(Edge { src, dst, w });
        match a.rel {
            Relation::Le => le(u, v, c),
            Relation::Lt => le(u, v, c - 1),
            Relation::Ge => le(v, u, -c),
            Relation::Gt => le(v, u, -c - 1),
            Relation::Eq => {
                le(u, v, c);
                le(v, u, -c);
            }
            Relation::Ne => disequalities.push((u, v, c)),
        }
    }
    let dist = solve(index.len() + 1, &mut edges, &disequalities)?;
    Some(
        index
            .into_iter()
            .map(|(c, i)| (c.clone(), dist[i] - dist[ZERO]))
            .collect(),
    )
}

/// Bellman–Ford from a virtual source; `u - v != c` is split lazily into
/// `< c` or `> c` only when the current solution violates it.
fn solve(n: usize, edges: &mut Vec<Edge>, neq: &[(usize, usize, i64)]) -> Option<Vec<i64>> {
    let dist = bellman_ford(n, edges)?;
    let Some(&(u, v, c)) = neq.iter().find(|&&(u, v, c)| dist[u] - dist[v] == c) else {
        return Some(dist);
    };
    let base = edges.len();
    for (dst, src, w) in [(u, v, c - 1), (v, u, -c - 1)] {
        edges.push(Edge { src, dst, w });
        if let Some(d) = solve(n, edges, neq) {
            edges.truncate(base);
            return Some(d);
        }
        edges.truncate(base);
    }
    None
}

fn bellman_ford(n: usize, edges: &[Edge]) -> Option<Vec<i64>> {
    let mut dist = vec![0i64; n];
    for round in 0..=n {
        let mut changed = false;
        for e in edges {
            let cand = dist[e.src] + e.w;
            if cand < dist[e.dst] {
                dist[e.dst] = cand;
                changed = true;
            }
        }
        if !changed {
            return Some(dist);
        }
        if round == n {
            break;
        }
    }
    None
}
