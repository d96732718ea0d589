//! Equation-file parser.
//!
//! ```text
//! file  := { line }            blank lines and `#` comments are skipped
//! line  := "p" J "+" "l" J "=" expr
//! expr  := term { ("+" | "-") term }
//! term  := unary { "*" unary }
//! unary := "-" unary | power
//! power := atom [ "^" INT ]
//! atom  := INT | VAR | "(" expr ")"
//! ```

use thiserror::Error;

use super::{EquationSystem, Expr, Var};
use crate::graph::Side;

/// Maximum expression tree depth accepted by the parser and the compiler.
pub const MAX_DEPTH: usize = 64;

const MAX_NESTING: usize = 4 * MAX_DEPTH;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("left-hand side must read `p{0} + l{0}`")]
    MalformedLhs(usize),
    #[error("expected equation for index {expected}, found {found}")]
    IndexOrder { expected: usize, found: usize },
    #[error("{var} is not among the {admissible} admissible variables of f_{equation}", admissible = 2 * .equation - 2)]
    Scope { equation: usize, var: Var },
    #[error("expression nests deeper than {MAX_DEPTH}")]
    TooDeep,
    #[error("no equations found")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Var(Side, usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
}

fn describe(tok: Option<Tok>) -> String {
    match tok {
        None => "end of line".into(),
        Some(Tok::Int(n)) => format!("`{n}`"),
        Some(Tok::Var(Side::Point, i)) => format!("`p{i}`"),
        Some(Tok::Var(Side::Line, i)) => format!("`l{i}`"),
        Some(Tok::Plus) => "`+`".into(),
        Some(Tok::Minus) => "`-`".into(),
        Some(Tok::Star) => "`*`".into(),
        Some(Tok::Caret) => "`^`".into(),
        Some(Tok::LParen) => "`(`".into(),
        Some(Tok::RParen) => "`)`".into(),
        Some(Tok::Eq) => "`=`".into(),
    }
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let err = |column: usize, msg: String| ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg),
    };
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits
                .parse()
                .map_err(|_| err(col, format!("integer literal {digits} is too large")))?;
            out.push((Tok::Int(n), col));
        } else if c == 'p' || c == 'l' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i || (i < chars.len() && chars[i].is_alphanumeric()) {
                return Err(err(col, "variables are written p<index> or l<index>".into()));
            }
            let digits: String = chars[start..i].iter().collect();
            let index = digits
                .parse()
                .map_err(|_| err(col, format!("variable index {digits} is too large")))?;
            let side = if c == 'p' { Side::Point } else { Side::Line };
            out.push((Tok::Var(side, index), col));
        } else {
            return Err(err(col, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct LineParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_column: usize,
    equation: usize,
    nesting: usize,
}

impl LineParser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.1)
    }

    fn fail(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column(),
            kind,
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.fail(ParseErrorKind::Syntax(format!(
            "expected {wanted}, found {}",
            describe(self.peek())
        )))
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(self.fail(ParseErrorKind::TooDeep));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.nesting -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(Tok::Star) {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            self.enter()?;
            let inner = self.unary()?;
            self.nesting -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(Tok::Int(k)) => {
                let k = u32::try_from(k).map_err(|_| {
                    self.fail(ParseErrorKind::Syntax(format!("exponent {k} is too large")))
                })?;
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), k))
            }
            _ => Err(self.unexpected("a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Const(n))
            }
            Some(Tok::Var(side, index)) => {
                let var = Var { side, index };
                if index == 0 || index >= self.equation {
                    return Err(self.fail(ParseErrorKind::Scope {
                        equation: self.equation,
                        var,
                    }));
                }
                self.pos += 1;
                Ok(Expr::Var(var))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, variable or `(`")),
        }
    }
}

fn parse_line(
    text: &str,
    line: usize,
    expected: usize,
) -> Result<Expr, ParseError> {
    let toks = lex(text, line)?;
    let lhs_col = toks.first().map_or(1, |t| t.1);
    let lhs_err = |j| ParseError {
        line,
        column: lhs_col,
        kind: ParseErrorKind::MalformedLhs(j),
    };
    let j = match toks.as_slice() {
        [(Tok::Var(Side::Point, a), _), (Tok::Plus, _), (Tok::Var(Side::Line, b), _), (Tok::Eq, _), ..]
            if a == b =>
        {
            *a
        }
        _ => return Err(lhs_err(expected)),
    };
    if j != expected {
        return Err(ParseError {
            line,
            column: lhs_col,
            kind: ParseErrorKind::IndexOrder { expected, found: j },
        });
    }
    let mut parser = LineParser {
        toks: &toks[4..],
        pos: 0,
        line,
        end_column: text.chars().count() + 1,
        equation: j,
        nesting: 0,
    };
    let rhs = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.unexpected("an operator or end of line"));
    }
    if rhs.depth() > MAX_DEPTH {
        return Err(ParseError {
            line,
            column: lhs_col,
            kind: ParseErrorKind::TooDeep,
        });
    }
    Ok(rhs)
}

/// Parses an equation file: lines `p<j> + l<j> = <expr>` for `j = 2, 3, ...`
/// in order.
pub fn parse_system(text: &str) -> Result<EquationSystem, ParseError> {
    let mut rhs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        rhs.push(parse_line(content, i + 1, rhs.len() + 2)?);
    }
    if rhs.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            kind: ParseErrorKind::Empty,
        });
    }
    Ok(EquationSystem::new_unchecked(rhs))
}
