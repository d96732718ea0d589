//! Systems of edge-defining polynomials `p_j + l_j = f_j(...)`, `j = 2..=n`.
//!
//! `f_j` may only read `p_1..p_{j-1}` and `l_1..l_{j-1}`; that triangular
//! shape is what lets the neighbor oracle solve for one coordinate at a time.

mod compile;
mod parse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use compile::{CompiledSystem, EvalError};
pub use parse::{parse_system, ParseError, ParseErrorKind, MAX_DEPTH};

use crate::graph::Side;

/// Which graph family an equation system (or graph) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    D,
    A,
    #[serde(rename = "custom")]
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::D => "D",
            Family::A => "A",
            Family::Custom => "custom",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "D" | "d" => Ok(Family::D),
            "A" | "a" => Ok(Family::A),
            other => Err(format!("unknown family {other:?} (expected D or A)")),
        }
    }
}

/// A coordinate reference: `p<index>` or `l<index>`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var {
    pub side: Side,
    pub index: usize,
}

impl Var {
    pub fn p(index: usize) -> Self {
        Var {
            side: Side::Point,
            index,
        }
    }

    pub fn l(index: usize) -> Self {
        Var {
            side: Side::Line,
            index,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Point => write!(f, "p{}", self.index),
            Side::Line => write!(f, "l{}", self.index),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(u64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) => 1 + a.depth(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Variables in left-to-right order of appearance.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => out.push(*v),
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// Fully parenthesized form; parsing it back yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, k) => write!(f, "({a} ^ {k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("f_{equation} references {var}, outside p1..p{max}, l1..l{max}", max = .equation - 1)]
pub struct ScopeViolation {
    pub equation: usize,
    pub var: Var,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error(transparent)]
    Scope(#[from] ScopeViolation),
    #[error("expression for f_{equation} nests deeper than {MAX_DEPTH}")]
    TooDeep { equation: usize },
    #[error("only the D and A families have built-in systems")]
    NoBuiltin,
}

/// The right-hand sides `f_2, ..., f_n` of an edge relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    n: usize,
    rhs: Vec<Expr>,
}

impl EquationSystem {
    /// `rhs[0]` is `f_2`. The variable-scope rule is checked here.
    pub fn new(rhs: Vec<Expr>) -> Result<Self, SystemError> {
        let system = EquationSystem {
            n: rhs.len() + 1,
            rhs,
        };
        system.validate()?;
        for j in 2..=system.n {
            if system.rhs(j).depth() > MAX_DEPTH {
                return Err(SystemError::TooDeep { equation: j });
            }
        }
        Ok(system)
    }

    pub(crate) fn new_unchecked(rhs: Vec<Expr>) -> Self {
        EquationSystem {
            n: rhs.len() + 1,
            rhs,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `f_j` for `2 <= j <= n`.
    pub fn rhs(&self, j: usize) -> &Expr {
        &self.rhs[j - 2]
    }

    pub fn equations(&self) -> impl Iterator<Item = (usize, &Expr)> {
        self.rhs.iter().enumerate().map(|(i, e)| (i + 2, e))
    }

    /// First violation of the variable-scope rule, if any.
    pub fn validate(&self) -> Result<(), ScopeViolation> {
        if self.n < 2 {
            return Ok(());
        }
        for (j, f) in self.equations() {
            if let Some(var) = f.vars().into_iter().find(|v| v.index == 0 || v.index >= j) {
                return Err(ScopeViolation { equation: j, var });
            }
        }
        Ok(())
    }

    /// The system made of the first `m - 1` equations, i.e. dimension `m`.
    pub fn truncate(&self, m: usize) -> Result<Self, SystemError> {
        if m < 2 || m > self.n {
            return Err(SystemError::Dimension(m));
        }
        Ok(EquationSystem {
            n: m,
            rhs: self.rhs[..m - 1].to_vec(),
        })
    }

    /// Equation-file form, one line per `j`, accepted by [`parse_system`].
    pub fn pretty(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, rhs) in self.equations() {
            writeln!(f, "p{j} + l{j} = {rhs}")?;
        }
        Ok(())
    }
}

fn pl(a: usize, b: usize) -> Expr {
    Expr::mul(Expr::var(Var::p(a)), Expr::var(Var::l(b)))
}

/// The built-in systems of the D and A families.
pub fn builtin_system(family: Family, n: usize) -> Result<EquationSystem, SystemError> {
    if family == Family::Custom {
        return Err(SystemError::NoBuiltin);
    }
    if n < 2 {
        return Err(SystemError::Dimension(n));
    }
    let rhs = (2..=n)
        .map(|j| match family {
            Family::D => match j {
                2 => pl(1, 1),
                3 => pl(1, 2),
                _ if j % 4 == 0 || j % 4 == 1 => pl(j - 2, 1),
                _ => pl(1, j - 2),
            },
            _ => {
                if j % 2 == 0 {
                    pl(j - 1, 1)
                } else {
                    pl(1, j - 1)
                }
            }
        })
        .collect();
    Ok(EquationSystem::new_unchecked(rhs))
}
