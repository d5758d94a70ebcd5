//! Bounded semantics, evaluated directly on a witness.
//!
//! Positions are `0..=k`. Without a loop the path is finite: `X` at `k` is
//! false and `U`/`R` must be decided within `0..=k`. With a loop at `l` the
//! successor of `k` is `l`, and the path stands for `s_0 .. s_{l-1} (s_l .. s_k)^ω`.
//! Past operators look at absolute positions `0..i`.
//!
//! A constraint atom referring to an instant above the witness's valuation
//! window holds vacuously.

use crate::formula::{to_pnf, window_metrics, ConstraintAtom, Formula};
use crate::witness::{Witness, WitnessError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("valuation of `{var}` starts at {declared:?}, formula needs instant {needed}")]
    WindowUnderflow {
        var: String,
        needed: i64,
        declared: Option<i64>,
    },
    #[error("invalid witness: {0}")]
    Witness(#[from] WitnessError),
}

/// Truth of the letters a formula is built from. `None` means "not yet
/// decided", which the engine propagates with Kleene logic.
pub(crate) trait Letters {
    fn prop(&self, name: &str, i: u32) -> Option<bool>;
    fn atom(&self, a: &ConstraintAtom, i: u32) -> Option<bool>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    Finite,
    Lasso(u32),
    /// Loop choice still open (partial evaluation).
    Undecided,
}

enum Succ {
    At(u32),
    End,
    Unknown,
}

pub(crate) struct Engine<'a, L> {
    pub k: u32,
    pub shape: Shape,
    pub letters: &'a L,
}

fn not3(a: Option<bool>) -> Option<bool> {
    a.map(|b| !b)
}

fn and3(a: Option<bool>, b: impl FnOnce() -> Option<bool>) -> Option<bool> {
    match a {
        Some(false) => Some(false),
        Some(true) => b(),
        None => match b() {
            Some(false) => Some(false),
            _ => None,
        },
    }
}

fn or3(a: Option<bool>, b: impl FnOnce() -> Option<bool>) -> Option<bool> {
    not3(and3(not3(a), || not3(b())))
}

impl<L: Letters> Engine<'_, L> {
    fn succ(&self, i: u32) -> Succ {
        if i < self.k {
            return Succ::At(i + 1);
        }
        match self.shape {
            Shape::Finite => Succ::End,
            Shape::Lasso(l) => Succ::At(l),
            Shape::Undecided => Succ::Unknown,
        }
    }

    pub fn holds(&self, f: &Formula, i: u32) -> Option<bool> {
        use Formula::*;
        match f {
            True => Some(true),
            False => Some(false),
            Prop(p) => self.letters.prop(p, i),
            Atom(a) => self.letters.atom(a, i),
            Not(g) => match &**g {
                Prop(p) => not3(self.letters.prop(p, i)),
                Atom(a) => self.letters.atom(&a.complement(), i),
                _ => match self.shape {
                    Shape::Lasso(_) => not3(self.holds(g, i)),
                    Shape::Finite => self.holds(&to_pnf(f), i),
                    Shape::Undecided => None,
                },
            },
            And(a, b) => and3(self.holds(a, i), || self.holds(b, i)),
            Or(a, b) => or3(self.holds(a, i), || self.holds(b, i)),
            Next(g) => match self.succ(i) {
                Succ::At(j) => self.holds(g, j),
                Succ::End => Some(false),
                Succ::Unknown => None,
            },
            Prev(g) => and3(Some(i > 0), || self.holds(g, i.wrapping_sub(1))),
            WeakPrev(g) => or3(Some(i == 0), || self.holds(g, i.wrapping_sub(1))),
            Until(a, b) => self.future(a, b, i, true),
            Release(a, b) => self.future(a, b, i, false),
            Since(a, b) => self.past(a, b, i, true),
            Trigger(a, b) => self.past(a, b, i, false),
        }
    }

    /// `a U b` (`until`) or `a R b` along the successor walk from `i`.
    fn future(&self, a: &Formula, b: &Formula, i: u32, until: bool) -> Option<bool> {
        let mut steps = Vec::new();
        let mut pos = i;
        // k + 2 steps visit every position reachable from i
        let mut terminal = None;
        for _ in 0..self.k + 2 {
            let (vb, va) = (self.holds(b, pos), self.holds(a, pos));
            // until: decided by b = true or a = false; release dually
            if vb == Some(until) {
                terminal = Some(Some(until));
                break;
            }
            if va == Some(!until) {
                terminal = Some(vb);
                break;
            }
            steps.push((va, vb));
            match self.succ(pos) {
                Succ::At(j) => pos = j,
                Succ::End => {
                    terminal = Some(Some(false));
                    break;
                }
                Succ::Unknown => {
                    terminal = Some(None);
                    break;
                }
            }
        }
        // exhausted walk on a lasso: b never (un)satisfied on the loop
        let mut acc = terminal.unwrap_or(Some(!until));
        for (va, vb) in steps.into_iter().rev() {
            acc = if until {
                or3(vb, || and3(va, || acc))
            } else {
                and3(vb, || or3(va, || acc))
            };
        }
        acc
    }

    /// `a S b` (`since`) or `a T b` looking back from `i` to 0.
    fn past(&self, a: &Formula, b: &Formula, i: u32, since: bool) -> Option<bool> {
        let mut steps = Vec::new();
        let mut terminal = Some(!since);
        for pos in (0..=i).rev() {
            let (vb, va) = (self.holds(b, pos), self.holds(a, pos));
            if vb == Some(since) {
                terminal = Some(since);
                break;
            }
            if va == Some(!since) {
                terminal = vb;
                break;
            }
            steps.push((va, vb));
        }
        let mut acc = terminal;
        for (va, vb) in steps.into_iter().rev() {
            acc = if since {
                or3(vb, || and3(va, || acc))
            } else {
                and3(vb, || or3(va, || acc))
            };
        }
        acc
    }
}

struct SigmaLetters<'w>(&'w Witness);

impl Letters for SigmaLetters<'_> {
    fn prop(&self, name: &str, i: u32) -> Option<bool> {
        Some(self.0.labels[i as usize].contains(name))
    }

    fn atom(&self, a: &ConstraintAtom, i: u32) -> Option<bool> {
        Some(atom_at(self.0, a, i as i64))
    }
}

fn atom_at(w: &Witness, a: &ConstraintAtom, instant: i64) -> bool {
    a.eval_with(|t| w.value(&t.var, instant + t.offset))
}

fn check_windows(w: &Witness, phi: &Formula) -> Result<(), EvalError> {
    w.validate()?;
    let metrics = window_metrics(phi);
    for var in metrics.vars() {
        let needed = metrics.look_backward(var);
        let declared = w.window(var).map(|(lo, _)| lo);
        if declared.is_none_or(|lo| lo > needed) {
            return Err(EvalError::WindowUnderflow {
                var: var.to_string(),
                needed,
                declared,
            });
        }
    }
    Ok(())
}

/// Truth of `phi` at instant 0 of `w`.
pub fn eval_bounded(w: &Witness, phi: &Formula) -> Result<bool, EvalError> {
    eval_at(w, phi, 0)
}

/// Truth of `phi` at position `i` (`0..=k`) of `w`.
pub fn eval_at(w: &Witness, phi: &Formula, i: u32) -> Result<bool, EvalError> {
    check_windows(w, phi)?;
    let letters = SigmaLetters(w);
    let (shape, body) = match w.loop_pos {
        Some(l) => {
            // the instant after k must look like the loop position
            let k = w.k as i64;
            let border_ok = to_pnf(phi)
                .atoms()
                .iter()
                .all(|a| atom_at(w, a, k + 1) == atom_at(w, a, l as i64));
            if !border_ok {
                return Ok(false);
            }
            (Shape::Lasso(l), phi.clone())
        }
        None => (Shape::Finite, to_pnf(phi)),
    };
    let engine = Engine {
        k: w.k,
        shape,
        letters: &letters,
    };
    Ok(engine
        .holds(&body, i.min(w.k))
        .expect("fully assigned letters always decide"))
}
