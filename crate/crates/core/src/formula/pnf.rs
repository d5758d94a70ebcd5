use super::Formula;

/// Pushes negations down to literals. Negated constraints become the
/// complement relation; negated propositions stay as `!p`.
pub fn to_pnf(phi: &Formula) -> Formula {
    positive(phi, false)
}

fn positive(phi: &Formula, neg: bool) -> Formula {
    use Formula::*;
    let b = |f: &Formula, n: bool| Box::new(positive(f, n));
    match (phi, neg) {
        (True, false) | (False, true) => True,
        (False, false) | (True, true) => False,
        (Prop(p), false) => Prop(p.clone()),
        (Prop(p), true) => Formula::not(Prop(p.clone())),
        (Atom(a), false) => Atom(a.clone()),
        (Atom(a), true) => Atom(a.complement()),
        (Not(a), n) => positive(a, !n),
        (And(a, c), false) | (Or(a, c), true) => And(b(a, neg), b(c, neg)),
        (Or(a, c), false) | (And(a, c), true) => Or(b(a, neg), b(c, neg)),
        (Next(a), n) => Next(b(a, n)),
        (Prev(a), false) | (WeakPrev(a), true) => Prev(b(a, neg)),
        (WeakPrev(a), false) | (Prev(a), true) => WeakPrev(b(a, neg)),
        (Until(a, c), false) | (Release(a, c), true) => Until(b(a, neg), b(c, neg)),
        (Release(a, c), false) | (Until(a, c), true) => Release(b(a, neg), b(c, neg)),
        (Since(a, c), false) | (Trigger(a, c), true) => Since(b(a, neg), b(c, neg)),
        (Trigger(a, c), false) | (Since(a, c), true) => Trigger(b(a, neg), b(c, neg)),
    }
}

/// Negation occurs only directly above propositions or constraints.
pub fn is_pnf(phi: &Formula) -> bool {
    match phi {
        Formula::Not(inner) => matches!(**inner, Formula::Prop(_) | Formula::Atom(_)),
        other => other.children().into_iter().all(is_pnf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{window_metrics, ArithTerm, ConstraintAtom, Relation};
    use proptest::prelude::*;

    fn p(n: &str) -> Formula {
        Formula::prop(n)
    }

    #[test]
    fn until_dualizes_to_release() {
        let f = Formula::not(Formula::until(p("p"), p("q")));
        assert_eq!(
            to_pnf(&f),
            Formula::release(Formula::not(p("p")), Formula::not(p("q")))
        );
    }

    #[test]
    fn prev_dualizes_to_weak_prev() {
        let f = Formula::not(Formula::prev(p("p")));
        assert_eq!(to_pnf(&f), Formula::weak_prev(Formula::not(p("p"))));
    }

    #[test]
    fn negated_constraint_uses_complement() {
        let lt = ConstraintAtom::difference(
            ArithTerm::new("x", 0),
            ArithTerm::new("x", 1),
            Relation::Lt,
            0,
        );
        let ge = ConstraintAtom::difference(
            ArithTerm::new("x", 0),
            ArithTerm::new("x", 1),
            Relation::Ge,
            0,
        );
        assert_eq!(to_pnf(&Formula::not(Formula::atom(lt))), Formula::atom(ge));
    }

    #[test]
    fn double_negation_cancels() {
        let f = Formula::not(Formula::not(Formula::next(p("a"))));
        assert_eq!(to_pnf(&f), Formula::next(p("a")));
        assert!(is_pnf(&to_pnf(&f)));
        assert!(!is_pnf(&f));
    }

    #[test]
    fn since_and_trigger_are_dual() {
        let f = Formula::not(Formula::trigger(p("a"), Formula::not(p("b"))));
        assert_eq!(to_pnf(&f), Formula::since(Formula::not(p("a")), p("b")));
    }

    proptest! {
        #[test]
        fn pnf_is_idempotent(f in crate::testing::arb_formula(4)) {
            let once = to_pnf(&f);
            prop_assert!(is_pnf(&once));
            prop_assert_eq!(to_pnf(&once), once.clone());
        }

        #[test]
        fn pnf_keeps_window_metrics(f in crate::testing::arb_formula(4)) {
            prop_assert_eq!(window_metrics(&to_pnf(&f)), window_metrics(&f));
        }
    }
}
