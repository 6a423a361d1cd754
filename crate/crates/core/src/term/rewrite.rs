use std::fmt;

use thiserror::Error;

use super::{Dir, Position, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `x(yz) -> (xy)(xz)`
    Expand,
    /// `(xy)(xz) -> x(yz)`
    Contract,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Expand => Direction::Contract,
            Direction::Contract => Direction::Expand,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Expand => "expand",
            Direction::Contract => "contract",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub pos: Position,
    pub dir: Direction,
}

impl Step {
    pub fn expand(pos: Position) -> Self {
        Step {
            pos,
            dir: Direction::Expand,
        }
    }

    pub fn contract(pos: Position) -> Self {
        Step {
            pos,
            dir: Direction::Contract,
        }
    }

    pub fn under(&self, prefix: &[Dir]) -> Step {
        Step {
            pos: self.pos.under(prefix),
            dir: self.dir,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("no subterm at position {0}")]
    NoSuchPosition(Position),
    #[error("position {pos} is not a redex for {dir}")]
    NotARedex { pos: Position, dir: Direction },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {index}: {source}")]
    Step { index: usize, source: RewriteError },
    #[error("replay ends at {actual}, declared end is {declared}")]
    EndMismatch { actual: Term, declared: Term },
}

/// Positions of every subterm of shape `x(yz)`, in preorder.
pub fn ld_redexes(t: &Term) -> Vec<Position> {
    let mut out = Vec::new();
    let mut stack = vec![(t, Vec::new())];
    while let Some((s, path)) = stack.pop() {
        if let Some((_, r)) = s.as_apply() {
            if r.as_apply().is_some() {
                out.push(Position(path.clone()));
            }
        }
        if let Some((l, r)) = s.children() {
            let mut rp = path.clone();
            rp.push(Dir::Right);
            let mut lp = path;
            lp.push(Dir::Left);
            stack.push((r, rp));
            stack.push((l, lp));
        }
    }
    out
}

/// Rewrites the node at `pos` itself, without the surrounding term.
pub(crate) fn rewrite_node(s: &Term, dir: Direction) -> Option<Term> {
    let (x, yz) = s.as_apply()?;
    match dir {
        Direction::Expand => {
            let (y, z) = yz.as_apply()?;
            Some(Term::apply(&Term::apply(x, y), &Term::apply(x, z)))
        }
        Direction::Contract => {
            let (x1, y) = x.as_apply()?;
            let (x2, z) = yz.as_apply()?;
            (x1 == x2).then(|| Term::apply(x1, &Term::apply(y, z)))
        }
    }
}

pub fn ld_step(t: &Term, pos: &Position, dir: Direction) -> Result<Term, RewriteError> {
    let s = t
        .subterm(&pos.0)
        .ok_or_else(|| RewriteError::NoSuchPosition(pos.clone()))?;
    let new = rewrite_node(s, dir).ok_or_else(|| RewriteError::NotARedex { pos: pos.clone(), dir })?;
    Ok(t.replace(&pos.0, new).unwrap())
}

/// A sequence of single steps with its endpoints. Fields are public;
/// [`Derivation::replay`] is the validator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub start: Term,
    pub steps: Vec<Step>,
    pub end: Term,
}

impl Derivation {
    pub fn empty(t: Term) -> Self {
        Derivation {
            start: t.clone(),
            steps: Vec::new(),
            end: t,
        }
    }

    /// Replays `steps` from `start` to compute `end`.
    pub fn from_steps(start: Term, steps: Vec<Step>) -> Result<Self, ReplayError> {
        let end = run(&start, &steps, |_| {})?;
        Ok(Derivation { start, steps, end })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_expand_only(&self) -> bool {
        self.steps.iter().all(|s| s.dir == Direction::Expand)
    }

    /// Validates every step and the declared end.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let actual = run(&self.start, &self.steps, |_| {})?;
        if actual != self.end {
            return Err(ReplayError::EndMismatch {
                actual,
                declared: self.end.clone(),
            });
        }
        Ok(())
    }

    /// Every intermediate term, `start` first and `end` last.
    pub fn terms(&self) -> Result<Vec<Term>, ReplayError> {
        let mut out = vec![self.start.clone()];
        let actual = run(&self.start, &self.steps, |t| out.push(t.clone()))?;
        if actual != self.end {
            return Err(ReplayError::EndMismatch {
                actual,
                declared: self.end.clone(),
            });
        }
        Ok(out)
    }

    pub fn reversed(&self) -> Derivation {
        Derivation {
            start: self.end.clone(),
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step {
                    pos: s.pos.clone(),
                    dir: s.dir.flip(),
                })
                .collect(),
            end: self.start.clone(),
        }
    }

    /// Concatenation; `None` if the endpoints do not meet.
    pub fn then(&self, next: &Derivation) -> Option<Derivation> {
        if self.end != next.start {
            return None;
        }
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Some(Derivation {
            start: self.start.clone(),
            steps,
            end: next.end.clone(),
        })
    }
}

fn run(start: &Term, steps: &[Step], mut each: impl FnMut(&Term)) -> Result<Term, ReplayError> {
    let mut t = start.clone();
    for (index, step) in steps.iter().enumerate() {
        t = ld_step(&t, &step.pos, step.dir).map_err(|source| ReplayError::Step { index, source })?;
        each(&t);
    }
    Ok(t)
}
