use std::fmt;

/// Minimal SMT-LIB s-expression: atoms (symbols, numerals, keywords) and
/// lists. String literals and quoted symbols are kept verbatim as atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("s-expression error at byte {offset}: {message}")]
pub struct SExprError {
    pub offset: usize,
    pub message: String,
}

impl SExpr {
    pub fn atom(s: impl Into<String>) -> Self {
        SExpr::Atom(s.into())
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s) => Some(s),
            SExpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items) => Some(items),
            SExpr::Atom(_) => None,
        }
    }

    /// Reads an integer written either as a numeral or as `(- n)`.
    pub fn as_int(&self) -> Option<i64> {
        match self {
            SExpr::Atom(s) => s.parse().ok(),
            SExpr::List(items) => match items.as_slice() {
                [SExpr::Atom(minus), inner] if minus == "-" => inner.as_int().map(|n| -n),
                _ => None,
            },
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.as_atom()? {
            "true" => Some(true),
            "false" => Some(false),
            _ => None,
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(s) => f.write_str(s),
            SExpr::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses every top-level expression in `src`; `;` comments are skipped.
pub fn parse_all(src: &str) -> Result<Vec<SExpr>, SExprError> {
    let mut r = Reader {
        src: src.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.pos >= r.src.len() {
            return Ok(out);
        }
        out.push(r.expr()?);
    }
}

/// Net parenthesis depth of `line`, ignoring string literals, quoted
/// symbols and comments. Used to tell when a multi-line response is complete.
pub fn paren_balance(line: &str) -> i64 {
    let mut depth = 0;
    let mut in_str = false;
    let mut in_quote = false;
    for c in line.chars() {
        match c {
            '"' if !in_quote => in_str = !in_str,
            '|' if !in_str => in_quote = !in_quote,
            ';' if !in_str && !in_quote => break,
            '(' if !in_str && !in_quote => depth += 1,
            ')' if !in_str && !in_quote => depth -= 1,
            _ => {}
        }
    }
    depth
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, message: &str) -> SExprError {
        SExprError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_trivia(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                c if c.is_ascii_whitespace() => self.pos += 1,
                b';' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn expr(&mut self) -> Result<SExpr, SExprError> {
        self.skip_trivia();
        match self.src.get(self.pos) {
            None => Err(self.err("unexpected end of input")),
            Some(b')') => Err(self.err("unbalanced `)`")),
            Some(b'(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.src.get(self.pos) {
                        None => return Err(self.err("unclosed `(`")),
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(SExpr::List(items));
                        }
                        _ => items.push(self.expr()?),
                    }
                }
            }
            Some(&delim @ (b'"' | b'|')) => {
                let start = self.pos;
                self.pos += 1;
                loop {
                    match self.src.get(self.pos) {
                        None => return Err(self.err("unterminated literal")),
                        Some(&c) if c == delim => {
                            // "" is an escaped quote inside string literals
                            if delim == b'"' && self.src.get(self.pos + 1) == Some(&b'"') {
                                self.pos += 2;
                                continue;
                            }
                            self.pos += 1;
                            break;
                        }
                        _ => self.pos += 1,
                    }
                }
                Ok(SExpr::Atom(
                    String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                ))
            }
            Some(_) => {
                let start = self.pos;
                while let Some(&c) = self.src.get(self.pos) {
                    if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b';' {
                        break;
                    }
                    self.pos += 1;
                }
                Ok(SExpr::Atom(
                    String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                ))
            }
        }
    }
}
