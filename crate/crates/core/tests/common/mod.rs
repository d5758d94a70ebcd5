//! Seeded generators shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use cltlb::formula::{
    to_pnf, window_metrics, ArithTerm, ConstraintAtom, Formula, Relation, SubformulaTable,
};
use cltlb::kripke::{KripkeStructure, StateLabel};
use cltlb::oracle::{Cell, GroundAtom};
use cltlb::solver::SolverConfig;
use cltlb::witness::Witness;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub const FIG1: &str = "(x = Y y + 1 | y = x + 2) U (y <= X^2 x & x < X x)";
pub const RELATIONS: [Relation; 6] = [
    Relation::Lt,
    Relation::Le,
    Relation::Eq,
    Relation::Ne,
    Relation::Ge,
    Relation::Gt,
];

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

/// The configured solver, or `None` (with a note) when it is not installed.
pub fn solver() -> Option<SolverConfig> {
    let s = SolverConfig::from_env();
    if s.is_available() {
        Some(s)
    } else {
        eprintln!("no solver at {}; skipping", s.path.display());
        None
    }
}

fn relation(rng: &mut TestRng) -> Relation {
    *RELATIONS.choose(rng).unwrap()
}

fn term(rng: &mut TestRng, vars: &[&str]) -> ArithTerm {
    ArithTerm::new(*vars.choose(rng).unwrap(), rng.gen_range(-2..=2))
}

/// `t rel c` or `t - u rel c` with distinct terms, offsets in `[-2, 2]`.
pub fn dl_atom(rng: &mut TestRng, vars: &[&str]) -> ConstraintAtom {
    let t = term(rng, vars);
    let c = rng.gen_range(-3..=3);
    if rng.gen_bool(0.3) {
        return ConstraintAtom::bound(t, relation(rng), c);
    }
    let mut u = term(rng, vars);
    while u == t {
        u = term(rng, vars);
    }
    ConstraintAtom::difference(t, u, relation(rng), c)
}

/// Random formula over props `p`, `q` and difference atoms over `vars`,
/// using every connective (including non-PNF negations).
pub fn formula(rng: &mut TestRng, depth: u32, vars: &[&str]) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            2..=4 => Formula::prop(*["p", "q"].choose(rng).unwrap()),
            _ => Formula::atom(dl_atom(rng, vars)),
        };
    }
    let sub = |rng: &mut TestRng| formula(rng, depth - 1, vars);
    match rng.gen_range(0..12) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::next(sub(rng)),
        4 => Formula::prev(sub(rng)),
        5 => Formula::weak_prev(sub(rng)),
        6 => Formula::until(sub(rng), sub(rng)),
        7 => Formula::release(sub(rng), sub(rng)),
        8 => Formula::since(sub(rng), sub(rng)),
        9 => Formula::trigger(sub(rng), sub(rng)),
        10 => Formula::eventually(sub(rng)),
        _ => Formula::globally(sub(rng)),
    }
}

/// A PNF formula with at most `max_m` closure-table entries; retries until
/// one is found.
pub fn small_pnf(rng: &mut TestRng, max_m: usize, vars: &[&str]) -> Formula {
    loop {
        let f = to_pnf(&formula(rng, 3, vars));
        if SubformulaTable::build(&f).m() <= max_m {
            return f;
        }
    }
}

/// A witness of bound `k` whose valuation covers the full window of `phi`,
/// with values in `[-3, 3]`.
pub fn witness(rng: &mut TestRng, phi: &Formula, k: u32) -> Witness {
    let props: Vec<String> = phi.props().into_iter().collect();
    let mut labels: Vec<BTreeSet<String>> = (0..=k)
        .map(|_| props.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect())
        .collect();
    let loop_pos = rng.gen_bool(0.6).then(|| rng.gen_range(1..=k));
    if let Some(l) = loop_pos {
        labels[l as usize - 1] = labels[k as usize].clone();
    }
    let metrics = window_metrics(phi);
    let mut sigma = BTreeMap::new();
    for var in phi.vars() {
        let (lo, hi) = metrics.window(&var, k);
        let values = (lo..=hi).map(|i| (i, rng.gen_range(-3..=3))).collect();
        sigma.insert(var, values);
    }
    Witness {
        k,
        labels,
        loop_pos,
        sigma,
    }
}

/// A difference-constraint system over at most six cells, constants in
/// `[-4, 4]`.
pub fn dl_system(rng: &mut TestRng) -> Vec<GroundAtom> {
    let mut pool: Vec<Cell> = ["x", "y", "z"]
        .iter()
        .flat_map(|v| (0..3).map(move |i| Cell::new(*v, i)))
        .collect();
    pool.shuffle(rng);
    pool.truncate(rng.gen_range(1..=6));
    let n_atoms = rng.gen_range(1..=8);
    (0..n_atoms)
        .map(|_| {
            let c = rng.gen_range(-4..=4);
            let lhs = pool.choose(rng).unwrap().clone();
            if pool.len() == 1 || rng.gen_bool(0.25) {
                return GroundAtom::bound(lhs, relation(rng), c);
            }
            let mut rhs = pool.choose(rng).unwrap().clone();
            while rhs == lhs {
                rhs = pool.choose(rng).unwrap().clone();
            }
            GroundAtom::difference(lhs, rhs, relation(rng), c)
        })
        .collect()
}

/// Exhaustive search for a model of `atoms` with every cell in `[lo, hi]`.
pub fn brute_force(atoms: &[GroundAtom], lo: i64, hi: i64) -> bool {
    let cells: Vec<Cell> = atoms
        .iter()
        .flat_map(|a| a.lhs.iter().chain(a.rhs.iter()).cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // an atom is checked as soon as its last cell is assigned
    let position = |c: &Option<Cell>| c.as_ref().map_or(0, |c| cells.iter().position(|d| d == c).unwrap() + 1);
    let mut by_depth: Vec<Vec<&GroundAtom>> = vec![Vec::new(); cells.len() + 1];
    for a in atoms {
        by_depth[position(&a.lhs).max(position(&a.rhs))].push(a);
    }
    if !by_depth[0].iter().all(|a| a.holds(&BTreeMap::new())) {
        return false;
    }
    fn go(
        d: usize,
        cells: &[Cell],
        by_depth: &[Vec<&GroundAtom>],
        model: &mut BTreeMap<Cell, i64>,
        lo: i64,
        hi: i64,
    ) -> bool {
        if d == cells.len() {
            return true;
        }
        for v in lo..=hi {
            model.insert(cells[d].clone(), v);
            if by_depth[d + 1].iter().all(|a| a.holds(model)) && go(d + 1, cells, by_depth, model, lo, hi) {
                return true;
            }
        }
        model.remove(&cells[d]);
        false
    }
    go(0, &cells, &by_depth, &mut BTreeMap::new(), lo, hi)
}

/// A one- or two-state counter-like structure over `x` and `p`, without
/// deadlocks.
pub fn kripke(rng: &mut TestRng) -> KripkeStructure {
    let n = rng.gen_range(1..=2);
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut transitions = Vec::new();
    for s in &states {
        let mut succ: Vec<&String> = states.iter().filter(|_| rng.gen_bool(0.6)).collect();
        if succ.is_empty() {
            succ.push(states.choose(rng).unwrap());
        }
        transitions.extend(succ.into_iter().map(|t| (s.clone(), t.clone())));
    }
    let x = |o| ArithTerm::new("x", o);
    let mut labels = BTreeMap::new();
    for s in &states {
        let mut label = StateLabel::default();
        if rng.gen_bool(0.5) {
            label.props.insert("p".into());
        }
        if rng.gen_bool(0.8) {
            let atom = if rng.gen_bool(0.7) {
                ConstraintAtom::difference(x(1), x(0), relation(rng), rng.gen_range(-2..=2))
            } else {
                ConstraintAtom::bound(x(0), relation(rng), rng.gen_range(-2..=2))
            };
            label.constraints.push(atom);
        }
        labels.insert(s.clone(), label);
    }
    let initially = if rng.gen_bool(0.7) {
        vec![ConstraintAtom::bound(x(0), Relation::Eq, 0)]
    } else {
        Vec::new()
    };
    KripkeStructure {
        states: states.clone(),
        init: states[0].clone(),
        transitions,
        labels,
        initially,
    }
}

/// A state formula over `p` and `x`.
pub fn target(rng: &mut TestRng) -> Formula {
    let atom = Formula::atom(ConstraintAtom::bound(
        ArithTerm::new("x", 0),
        relation(rng),
        rng.gen_range(-3..=3),
    ));
    match rng.gen_range(0..4) {
        0 => Formula::prop("p"),
        1 => Formula::and(Formula::prop("p"), atom),
        _ => atom,
    }
}
