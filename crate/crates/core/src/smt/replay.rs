//! Independent check of a model against a script: every `assert` is
//! evaluated under the reported values.

use super::{parse_all, Model, SExpr, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("script does not parse: {0}")]
    Syntax(String),
    #[error("no value for `{0}` in the model")]
    Missing(String),
    #[error("cannot evaluate `{0}`")]
    Unsupported(String),
}

/// Returns whether all assertions of `script` hold under `model`.
/// Implications and conjunctions short-circuit, so guarded applications
/// outside the requested window are never looked up.
pub fn replay(script: &str, model: &Model) -> Result<bool, ReplayError> {
    let exprs = parse_all(script).map_err(|e| ReplayError::Syntax(e.to_string()))?;
    let ev = Evaluator { model };
    for e in &exprs {
        if let Some([SExpr::Atom(head), body]) = e.as_list() {
            if head == "assert" && !ev.boolean(body)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct Evaluator<'a> {
    model: &'a Model,
}

impl Evaluator<'_> {
    fn unsupported(e: &SExpr) -> ReplayError {
        ReplayError::Unsupported(e.to_string())
    }

    fn boolean(&self, e: &SExpr) -> Result<bool, ReplayError> {
        match self.value(e)? {
            Value::Bool(b) => Ok(b),
            Value::Int(_) => Err(Self::unsupported(e)),
        }
    }

    fn int(&self, e: &SExpr) -> Result<i64, ReplayError> {
        match self.value(e)? {
            Value::Int(n) => Ok(n),
            Value::Bool(_) => Err(Self::unsupported(e)),
        }
    }

    fn value(&self, e: &SExpr) -> Result<Value, ReplayError> {
        let items = match e {
            SExpr::Atom(a) => {
                return match a.as_str() {
                    "true" => Ok(Value::Bool(true)),
                    "false" => Ok(Value::Bool(false)),
                    _ => match a.parse() {
                        Ok(n) => Ok(Value::Int(n)),
                        Err(_) => self
                            .model
                            .constant(a)
                            .ok_or_else(|| ReplayError::Missing(a.clone())),
                    },
                }
            }
            SExpr::List(items) => items,
        };
        let Some((SExpr::Atom(head), args)) = items.split_first() else {
            return Err(Self::unsupported(e));
        };
        let v = match (head.as_str(), args) {
            ("not", [a]) => Value::Bool(!self.boolean(a)?),
            ("and", _) => {
                for a in args {
                    if !self.boolean(a)? {
                        return Ok(Value::Bool(false));
                    }
                }
                Value::Bool(true)
            }
            ("or", _) => {
                for a in args {
                    if self.boolean(a)? {
                        return Ok(Value::Bool(true));
                    }
                }
                Value::Bool(false)
            }
            ("=>", [a, b]) => Value::Bool(!self.boolean(a)? || self.boolean(b)?),
            ("=", [a, b]) => Value::Bool(self.value(a)? == self.value(b)?),
            ("-", [a]) => Value::Int(-self.int(a)?),
            ("-", [a, rest @ ..]) => {
                let mut acc = self.int(a)?;
                for r in rest {
                    acc -= self.int(r)?;
                }
                Value::Int(acc)
            }
            ("+", _) => Value::Int(args.iter().map(|a| self.int(a)).sum::<Result<i64, _>>()?),
            ("*", _) => Value::Int(
                args.iter()
                    .map(|a| self.int(a))
                    .product::<Result<i64, _>>()?,
            ),
            ("<" | "<=" | ">" | ">=", [a, b]) => {
                let (a, b) = (self.int(a)?, self.int(b)?);
                Value::Bool(match head.as_str() {
                    "<" => a < b,
                    "<=" => a <= b,
                    ">" => a > b,
                    _ => a >= b,
                })
            }
            (f, [arg]) if self.model.funcs.contains_key(f) || !is_builtin(f) => {
                let n = self.int(arg)?;
                self.model
                    .apply(f, n)
                    .ok_or_else(|| ReplayError::Missing(format!("({f} {n})")))?
            }
            _ => return Err(Self::unsupported(e)),
        };
        Ok(v)
    }
}

fn is_builtin(f: &str) -> bool {
    matches!(
        f,
        "not" | "and" | "or" | "=>" | "=" | "-" | "+" | "*" | "<" | "<=" | ">" | ">=" | "ite"
    )
}
