use std::str::FromStr;

use thiserror::Error;

use super::Term;

/// Integer literals above this are refused rather than materialized.
pub const MAX_INTEGER_LITERAL: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected `{found}` at byte {at}")]
    Unexpected { found: char, at: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unbalanced `)` at byte {0}")]
    Unbalanced(usize),
    #[error("unclosed `(`")]
    Unclosed,
    #[error("bad integer literal `{0}`")]
    BadInteger(String),
    #[error("empty input")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Star,
    Circ,
    Open,
}

impl Op {
    fn prec(self) -> u8 {
        match self {
            Op::Star => 2,
            Op::Circ => 1,
            Op::Open => 0,
        }
    }
}

fn reduce(out: &mut Vec<Term>, op: Op) {
    let r = out.pop().unwrap();
    let l = out.pop().unwrap();
    out.push(match op {
        Op::Star => Term::apply(&l, &r),
        Op::Circ => Term::compose(&l, &r),
        Op::Open => unreachable!(),
    });
}

/// Operator-precedence parse; nesting depth is not limited by the stack.
pub fn parse_term(s: &str) -> Result<Term, ParseError> {
    let bytes = s.as_bytes();
    let mut out: Vec<Term> = Vec::new();
    let mut ops: Vec<Op> = Vec::new();
    let mut expect_operand = true;
    let mut i = 0;
    let unexpected = |at: usize| ParseError::Unexpected {
        found: s[at..].chars().next().unwrap(),
        at,
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if expect_operand {
            match c {
                b'(' => {
                    ops.push(Op::Open);
                    i += 1;
                }
                b'0'..=b'9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let lit = &s[start..i];
                    out.push(literal(lit)?);
                    expect_operand = false;
                }
                _ => return Err(unexpected(i)),
            }
        } else {
            let op = match c {
                b'*' => Op::Star,
                b'o' => Op::Circ,
                b')' => {
                    loop {
                        match ops.pop() {
                            Some(Op::Open) => break,
                            Some(op) => reduce(&mut out, op),
                            None => return Err(ParseError::Unbalanced(i)),
                        }
                    }
                    i += 1;
                    continue;
                }
                _ => return Err(unexpected(i)),
            };
            // Both operators are left-associative.
            while let Some(&top) = ops.last() {
                if top != Op::Open && top.prec() >= op.prec() {
                    ops.pop();
                    reduce(&mut out, top);
                } else {
                    break;
                }
            }
            ops.push(op);
            expect_operand = true;
            i += 1;
        }
    }
    if expect_operand {
        return Err(if out.is_empty() && ops.is_empty() {
            ParseError::Empty
        } else {
            ParseError::UnexpectedEnd
        });
    }
    while let Some(op) = ops.pop() {
        if op == Op::Open {
            return Err(ParseError::Unclosed);
        }
        reduce(&mut out, op);
    }
    debug_assert_eq!(out.len(), 1);
    Ok(out.pop().unwrap())
}

fn literal(lit: &str) -> Result<Term, ParseError> {
    match lit {
        "0" => Ok(Term::zero()),
        "1" => Ok(Term::one()),
        _ if lit.starts_with('0') => Err(ParseError::BadInteger(lit.into())),
        _ => match lit.parse::<u64>() {
            Ok(k) if k <= MAX_INTEGER_LITERAL => Ok(Term::integer_word(k).unwrap()),
            _ => Err(ParseError::BadInteger(lit.into())),
        },
    }
}

impl FromStr for Term {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}
