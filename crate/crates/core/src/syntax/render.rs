use crate::formula::Formula;

// binding strength, higher binds tighter
const OR: u8 = 1;
const AND: u8 = 2;
const TEMPORAL: u8 = 3;
const UNARY: u8 = 4;
const LEAF: u8 = 5;

fn strength(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        True | False | Prop(_) | Atom(_) => LEAF,
        Not(_) | Next(_) | Prev(_) | WeakPrev(_) => UNARY,
        Until(..) | Since(..) | Release(..) | Trigger(..) => TEMPORAL,
        And(..) => AND,
        Or(..) => OR,
    }
}

/// Renders a formula in the concrete syntax accepted by
/// [`parse_formula`](super::parse_formula); parsing the output yields the
/// same AST.
pub fn render_formula(phi: &Formula) -> String {
    let mut out = String::new();
    write(phi, &mut out);
    out
}

fn wrapped(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

fn write(phi: &Formula, out: &mut String) {
    use Formula::*;
    match phi {
        True => out.push_str("true"),
        False => out.push_str("false"),
        Prop(p) => out.push_str(p),
        Atom(a) => out.push_str(&a.to_string()),
        Not(a) => {
            out.push('!');
            wrapped(a, strength(a) < UNARY, out);
        }
        Next(a) | Prev(a) | WeakPrev(a) => {
            out.push_str(match phi {
                Next(_) => "X ",
                Prev(_) => "Y ",
                _ => "Z ",
            });
            // `X x < 1` would read as a shifted term
            wrapped(a, strength(a) < UNARY || matches!(**a, Atom(_)), out);
        }
        And(a, b) | Or(a, b) => {
            let (level, op) = if matches!(phi, And(..)) {
                (AND, " & ")
            } else {
                (OR, " | ")
            };
            wrapped(a, strength(a) < level, out);
            out.push_str(op);
            wrapped(b, strength(b) <= level, out);
        }
        Until(a, b) | Since(a, b) | Release(a, b) | Trigger(a, b) => {
            let op = match phi {
                Until(..) => " U ",
                Since(..) => " S ",
                Release(..) => " R ",
                _ => " T ",
            };
            wrapped(a, strength(a) <= TEMPORAL, out);
            out.push_str(op);
            wrapped(b, strength(b) < TEMPORAL, out);
        }
    }
}
