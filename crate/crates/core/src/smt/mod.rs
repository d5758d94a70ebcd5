//! SMT-LIB plumbing shared by the encoder and the solver driver.

mod replay;
pub mod sexpr;

use std::collections::BTreeMap;
use std::fmt;

pub use replay::{replay, ReplayError};
pub use sexpr::{parse_all, SExpr, SExprError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Values reported by `get-value`: constants by name and unary function
/// applications by name and integer argument.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    pub consts: BTreeMap<String, Value>,
    pub funcs: BTreeMap<String, BTreeMap<i64, Value>>,
}

impl Model {
    pub fn constant(&self, name: &str) -> Option<Value> {
        self.consts.get(name).copied()
    }

    pub fn apply(&self, f: &str, arg: i64) -> Option<Value> {
        self.funcs.get(f)?.get(&arg).copied()
    }

    /// Reads a `get-value` response: `((term value) ...)`.
    pub fn from_response(resp: &SExpr) -> Result<Model, String> {
        let mut model = Model::default();
        let pairs = resp.as_list().ok_or("get-value response is not a list")?;
        for pair in pairs {
            let (term, value) = match pair.as_list() {
                Some([t, v]) => (t, v),
                _ => return Err(format!("malformed value pair `{pair}`")),
            };
            let value = value
                .as_bool()
                .map(Value::Bool)
                .or_else(|| value.as_int().map(Value::Int))
                .ok_or_else(|| format!("unsupported value `{value}`"))?;
            match term {
                SExpr::Atom(name) => {
                    model.consts.insert(name.clone(), value);
                }
                SExpr::List(app) => match app.as_slice() {
                    [SExpr::Atom(f), arg] => {
                        let arg = arg.as_int().ok_or_else(|| format!("bad argument in `{term}`"))?;
                        model.funcs.entry(f.clone()).or_default().insert(arg, value);
                    }
                    _ => return Err(format!("unsupported term `{term}`")),
                },
            }
        }
        Ok(model)
    }
}
