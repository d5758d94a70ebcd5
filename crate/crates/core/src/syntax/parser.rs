use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::formula::{ArithTerm, ConstraintAtom, Formula, Relation, Theory};

const KEYWORDS: &[&str] = &["X", "Y", "Z", "U", "S", "R", "T", "F", "G", "true", "false"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses one formula. In [`Theory::Dl`] mode, constraints that are not
/// difference constraints are rejected.
pub fn parse_formula(text: &str, theory: Theory) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        src: text,
        tokens,
        pos: 0,
        theory,
    };
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses a single constraint atom, used for Kripke labels.
pub(crate) fn parse_atom(text: &str, theory: Theory) -> Result<ConstraintAtom, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        src: text,
        tokens,
        pos: 0,
        theory,
    };
    let start = p.peek_span();
    match p.try_atom()? {
        Some(a) => {
            p.expect_eof()?;
            Ok(a)
        }
        None => Err(ParseError::new("expected a constraint", start)),
    }
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    theory: Theory,
}

/// Linear sum built while reading one side of a relation.
#[derive(Default)]
struct Sum {
    terms: Vec<(i64, ArithTerm)>,
    constant: i64,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn is_keyword_tok(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn unexpected(&self, what: &str) -> ParseError {
        ParseError::new(
            format!("expected {what}, found {}", self.peek().describe()),
            self.peek_span(),
        )
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("an operator or end of input"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.binary_temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        let ctor: fn(Formula, Formula) -> Formula = match self.peek() {
            Tok::Ident(s) if s == "U" => Formula::until,
            Tok::Ident(s) if s == "S" => Formula::since,
            Tok::Ident(s) if s == "R" => Formula::release,
            Tok::Ident(s) if s == "T" => Formula::trigger,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.binary_temporal()?;
        Ok(ctor(lhs, rhs))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if let Some(atom) = self.try_atom()? {
            return Ok(Formula::atom(atom));
        }
        let ctor: fn(Formula) -> Formula = match self.peek() {
            Tok::Not => Formula::not,
            Tok::Ident(s) => match s.as_str() {
                "X" => Formula::next,
                "Y" => Formula::prev,
                "Z" => Formula::weak_prev,
                "F" => Formula::eventually,
                "G" => Formula::globally,
                _ => return self.primary(),
            },
            _ => return self.primary(),
        };
        self.bump();
        Ok(ctor(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(Formula::Prop(s))
            }
            Tok::Ident(s) => Err(ParseError::new(
                format!("operator `{s}` is missing an operand"),
                self.peek_span(),
            )),
            _ => Err(self.unexpected("a formula")),
        }
    }

    /// Attempts `sum rel sum` at the current position; rewinds and returns
    /// `None` when the tokens do not form a constraint.
    fn try_atom(&mut self) -> Result<Option<ConstraintAtom>, ParseError> {
        let start = self.pos;
        let begin = self.peek_span().begin;
        let Some(lhs) = self.sum() else {
            self.pos = start;
            return Ok(None);
        };
        let rel = match self.peek() {
            Tok::Lt => Relation::Lt,
            Tok::Le => Relation::Le,
            Tok::Eq => Relation::Eq,
            Tok::Ne => Relation::Ne,
            Tok::Ge => Relation::Ge,
            Tok::Gt => Relation::Gt,
            _ => {
                self.pos = start;
                return Ok(None);
            }
        };
        self.bump();
        let Some(rhs) = self.sum() else {
            return Err(self.unexpected("an arithmetic expression"));
        };
        let end = self.tokens[self.pos - 1].span.end;
        let mut terms = lhs.terms;
        terms.extend(rhs.terms.into_iter().map(|(c, t)| (-c, t)));
        let atom = ConstraintAtom::new(terms, rel, rhs.constant - lhs.constant);
        if !atom.fits(self.theory) {
            return Err(ParseError::new(
                format!("`{atom}` is not a difference constraint (difference-logic mode)"),
                SourceSpan::at(self.src, begin, end),
            ));
        }
        Ok(Some(atom))
    }

    fn sum(&mut self) -> Option<Sum> {
        let mut sum = Sum::default();
        let mut sign = 1;
        if *self.peek() == Tok::Minus {
            self.bump();
            sign = -1;
        }
        loop {
            self.summand(sign, &mut sum)?;
            sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Some(sum),
            };
            self.bump();
        }
    }

    fn summand(&mut self, sign: i64, sum: &mut Sum) -> Option<()> {
        if let Tok::Int(n) = *self.peek() {
            self.bump();
            if *self.peek() == Tok::Star {
                self.bump();
                let t = self.att()?;
                sum.terms.push((sign * n, t));
            } else {
                sum.constant += sign * n;
            }
            return Some(());
        }
        let t = self.att()?;
        sum.terms.push((sign, t));
        Some(())
    }

    fn att(&mut self) -> Option<ArithTerm> {
        let shift = if self.is_keyword_tok("X") {
            1
        } else if self.is_keyword_tok("Y") {
            -1
        } else {
            return match self.peek().clone() {
                Tok::Ident(v) if !is_keyword(&v) => {
                    self.bump();
                    Some(ArithTerm::new(v, 0))
                }
                _ => None,
            };
        };
        self.bump();
        let mut times = 1;
        if *self.peek() == Tok::Caret {
            self.bump();
            match *self.peek() {
                Tok::Int(n) => {
                    self.bump();
                    times = n;
                }
                _ => return None,
            }
        }
        Some(self.att()?.shifted(shift * times))
    }
}
