//! Postfix compilation of `f_j` for a fixed field.

use thiserror::Error;

use super::{EquationSystem, Expr, MAX_DEPTH};
use crate::field::Field;
use crate::graph::Side;

const STACK: usize = MAX_DEPTH + 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Instr {
    Const(u32),
    /// 0-based coordinate indices.
    P(u32),
    L(u32),
    /// `p_a * l_b`, the only shape the built-in families use.
    MulPL(u32, u32),
    Add,
    Sub,
    Mul,
    Neg,
    Pow(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("equation index {j} outside 2..={n}")]
    Index { j: usize, n: usize },
    #[error("f_{j} needs {needed} point and line coordinates, got {points} and {lines}")]
    PrefixTooShort {
        j: usize,
        needed: usize,
        points: usize,
        lines: usize,
    },
}

/// An equation system compiled against one field. Immutable and shareable.
#[derive(Debug, Clone)]
pub struct CompiledSystem {
    field: Field,
    n: usize,
    programs: Vec<Vec<Instr>>,
}

fn emit(field: &Field, e: &Expr, out: &mut Vec<Instr>) {
    match e {
        Expr::Const(c) => out.push(Instr::Const(field.from_integer(*c))),
        Expr::Var(v) => out.push(match v.side {
            Side::Point => Instr::P(v.index as u32 - 1),
            Side::Line => Instr::L(v.index as u32 - 1),
        }),
        Expr::Neg(a) => {
            emit(field, a, out);
            out.push(Instr::Neg);
        }
        Expr::Pow(a, k) => {
            emit(field, a, out);
            out.push(Instr::Pow(*k));
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            if let (Expr::Mul(..), Expr::Var(x), Expr::Var(y)) = (e, a.as_ref(), b.as_ref()) {
                match (x.side, y.side) {
                    (Side::Point, Side::Line) => {
                        out.push(Instr::MulPL(x.index as u32 - 1, y.index as u32 - 1));
                        return;
                    }
                    (Side::Line, Side::Point) => {
                        out.push(Instr::MulPL(y.index as u32 - 1, x.index as u32 - 1));
                        return;
                    }
                    _ => {}
                }
            }
            emit(field, a, out);
            emit(field, b, out);
            out.push(match e {
                Expr::Add(..) => Instr::Add,
                Expr::Sub(..) => Instr::Sub,
                _ => Instr::Mul,
            });
        }
    }
}

impl CompiledSystem {
    pub fn new(system: &EquationSystem, field: &Field) -> Self {
        let programs = system
            .equations()
            .map(|(_, f)| {
                let mut code = Vec::new();
                emit(field, f, &mut code);
                code
            })
            .collect();
        CompiledSystem {
            field: field.clone(),
            n: system.dimension(),
            programs,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Evaluates `f_j` reading only the first `j - 1` entries of each slice.
    /// No bounds checking beyond slice indexing.
    #[inline]
    pub(crate) fn eval_unchecked(&self, j: usize, p: &[u32], l: &[u32]) -> u32 {
        let f = &self.field;
        let code = &self.programs[j - 2];
        if let [Instr::MulPL(a, b)] = code.as_slice() {
            return f.mul(p[*a as usize], l[*b as usize]);
        }
        let mut stack = [0u32; STACK];
        let mut sp = 0;
        for ins in code {
            match *ins {
                Instr::Const(c) => {
                    stack[sp] = c;
                    sp += 1;
                }
                Instr::P(i) => {
                    stack[sp] = p[i as usize];
                    sp += 1;
                }
                Instr::L(i) => {
                    stack[sp] = l[i as usize];
                    sp += 1;
                }
                Instr::MulPL(a, b) => {
                    stack[sp] = f.mul(p[a as usize], l[b as usize]);
                    sp += 1;
                }
                Instr::Neg => stack[sp - 1] = f.neg(stack[sp - 1]),
                Instr::Pow(k) => stack[sp - 1] = f.pow(stack[sp - 1], u64::from(k)),
                Instr::Add | Instr::Sub | Instr::Mul => {
                    sp -= 1;
                    let (a, b) = (stack[sp - 1], stack[sp]);
                    stack[sp - 1] = match ins {
                        Instr::Add => f.add(a, b),
                        Instr::Sub => f.sub(a, b),
                        _ => f.mul(a, b),
                    };
                }
            }
        }
        debug_assert_eq!(sp, 1);
        stack[0]
    }

    /// `f_j(p_1, l_1, ..., p_{j-1}, l_{j-1})`; the prefixes may be longer.
    pub fn eval_rhs(&self, j: usize, points: &[u32], lines: &[u32]) -> Result<u32, EvalError> {
        if j < 2 || j > self.n {
            return Err(EvalError::Index { j, n: self.n });
        }
        if points.len() < j - 1 || lines.len() < j - 1 {
            return Err(EvalError::PrefixTooShort {
                j,
                needed: j - 1,
                points: points.len(),
                lines: lines.len(),
            });
        }
        Ok(self.eval_unchecked(j, points, lines))
    }
}
