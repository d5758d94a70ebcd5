//! Random formula generators for property tests.

use proptest::prelude::*;

use crate::formula::{ArithTerm, ConstraintAtom, Formula, Relation};

pub fn arb_relation() -> impl Strategy<Value = Relation> {
    prop::sample::select(Relation::ALL.to_vec())
}

pub fn arb_term() -> impl Strategy<Value = ArithTerm> {
    (prop::sample::select(vec!["x", "y"]), -2i64..=2).prop_map(|(v, d)| ArithTerm::new(v, d))
}

pub fn arb_dl_atom() -> impl Strategy<Value = ConstraintAtom> {
    prop_oneof![
        (arb_term(), arb_relation(), -3i64..=3).prop_map(|(t, r, c)| ConstraintAtom::bound(t, r, c)),
        (arb_term(), arb_term(), arb_relation(), -3i64..=3)
            .prop_filter("distinct terms", |(a, b, _, _)| a != b)
            .prop_map(|(a, b, r, c)| ConstraintAtom::difference(a, b, r, c)),
    ]
}

fn arb_lia_atom() -> impl Strategy<Value = ConstraintAtom> {
    (
        prop::collection::vec((-3i64..=3, arb_term()), 1..=3),
        arb_relation(),
        -5i64..=5,
    )
        .prop_map(|(terms, r, c)| ConstraintAtom::new(terms, r, c))
        .prop_filter("non-trivial", |a| !a.terms().is_empty())
}

fn arb_leaf() -> impl Strategy<Value = Formula> {
    prop_oneof![
        1 => Just(Formula::True),
        1 => Just(Formula::False),
        4 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::prop),
        3 => arb_dl_atom().prop_map(Formula::atom),
        1 => arb_lia_atom().prop_map(Formula::atom),
    ]
}

/// Formulas over props `p q r` and variables `x y`, using every operator.
pub fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    arb_leaf().prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::prev),
            inner.clone().prop_map(Formula::weak_prev),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::since(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::release(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::trigger(a, b)),
        ]
    })
}
