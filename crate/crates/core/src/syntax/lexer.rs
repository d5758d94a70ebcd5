use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Plus,
    Minus,
    Star,
    Caret,
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Not => "!",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Caret => "^",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Ge => ">=",
            Tok::Gt => ">",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits formula text into tokens. `#` starts a comment running to the end
/// of the line.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let text = &src[start..i];
            let n = text.parse::<i64>().map_err(|_| {
                ParseError::new(
                    format!("integer literal `{text}` is out of range"),
                    SourceSpan::at(src, start, i),
                )
            })?;
            Tok::Int(n)
        } else {
            let rest = &src[start..];
            let ops: [(&str, Tok); 17] = [
                ("<->", Tok::Iff),
                ("->", Tok::Implies),
                ("<=", Tok::Le),
                (">=", Tok::Ge),
                ("!=", Tok::Ne),
                ("(", Tok::LParen),
                (")", Tok::RParen),
                ("!", Tok::Not),
                ("&", Tok::And),
                ("|", Tok::Or),
                ("+", Tok::Plus),
                ("-", Tok::Minus),
                ("*", Tok::Star),
                ("^", Tok::Caret),
                ("<", Tok::Lt),
                ("=", Tok::Eq),
                (">", Tok::Gt),
            ];
            match ops.into_iter().find(|(text, _)| rest.starts_with(text)) {
                Some((text, tok)) => {
                    // `=>`, `==`, `&&`, `||` are common typos for the real operators
                    if let Some(next) = rest.as_bytes().get(text.len()) {
                        let doubled = matches!(
                            (text, next),
                            ("=", b'>') | ("=", b'=') | ("&", b'&') | ("|", b'|')
                        );
                        if doubled {
                            let end = start + text.len() + 1;
                            return Err(ParseError::new(
                                format!("unknown operator `{}`", &src[start..end]),
                                SourceSpan::at(src, start, end),
                            ));
                        }
                    }
                    i += text.len();
                    tok
                }
                None => {
                    let ch = rest.chars().next().unwrap();
                    let end = start + ch.len_utf8();
                    return Err(ParseError::new(
                        format!("unknown operator `{ch}`"),
                        SourceSpan::at(src, start, end),
                    ));
                }
            }
        };
        out.push(Token {
            tok,
            span: SourceSpan::at(src, start, i),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::at(src, src.len(), src.len()),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn longest_operator_wins() {
        assert_eq!(
            toks("a <-> b -> c <= 1"),
            vec![
                Tok::Ident("a".into()),
                Tok::Iff,
                Tok::Ident("b".into()),
                Tok::Implies,
                Tok::Ident("c".into()),
                Tok::Le,
                Tok::Int(1),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(toks("# header\np # trailing\n"), vec![Tok::Ident("p".into()), Tok::Eof]);
    }

    #[test]
    fn unknown_character() {
        let e = tokenize("p ~ q").unwrap_err();
        assert!(e.message.contains('~'));
        assert_eq!((e.span.begin, e.span.end), (2, 3));
        assert_eq!((e.span.line, e.span.column), (1, 3));
    }

    #[test]
    fn arrow_typo_is_rejected() {
        let e = tokenize("p => q").unwrap_err();
        assert!(e.message.contains("=>"));
    }
}
