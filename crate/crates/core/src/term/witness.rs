//! The saturation map `∂`, the auxiliary product `⊗`, and builders for the
//! expansion derivations relating them.
//!
//! Every builder emits steps at positions relative to a prefix so that the
//! pieces can be assembled inside larger terms without rewriting.

use std::collections::HashMap;

use thiserror::Error;

use super::rewrite::{rewrite_node, ReplayError};
use super::{Derivation, Dir, Position, Shape, Step, Term};
use crate::fuel::{Fuel, OutOfFuel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{0} is not a word in `1` and `*` alone")]
    NotATerm(Term),
    #[error("derivation contains a contract step")]
    NotExpandOnly,
    #[error("the second term is not one expansion step away from the first")]
    NotOneStep,
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error(transparent)]
    OutOfFuel(#[from] OutOfFuel),
}

fn require_a_term(t: &Term) -> Result<(), WitnessError> {
    if t.is_a_term() {
        Ok(())
    } else {
        Err(WitnessError::NotATerm(t.clone()))
    }
}

/// Memo tables keyed by node address; the key terms are kept alive so the
/// addresses stay unique.
#[derive(Default)]
pub(crate) struct Memo {
    partial: HashMap<usize, (Term, Term)>,
    otimes: HashMap<(usize, usize), (Term, Term, Term)>,
}

impl Memo {
    /// `a ⊗ 1 = a·1`, `a ⊗ bc = (a ⊗ b)(a ⊗ c)`.
    pub(crate) fn otimes(&mut self, a: &Term, b: &Term) -> Term {
        let mut stack: Vec<(&Term, bool)> = vec![(b, false)];
        while let Some((t, expanded)) = stack.pop() {
            let key = (a.addr(), t.addr());
            if self.otimes.contains_key(&key) {
                continue;
            }
            let value = match t.shape() {
                Shape::One => Term::apply(a, t),
                Shape::Apply(l, r) if expanded => {
                    let lv = self.otimes[&(a.addr(), l.addr())].2.clone();
                    let rv = self.otimes[&(a.addr(), r.addr())].2.clone();
                    Term::apply(&lv, &rv)
                }
                Shape::Apply(l, r) => {
                    stack.push((t, true));
                    stack.push((r, false));
                    stack.push((l, false));
                    continue;
                }
                _ => panic!("otimes is defined on words in `1` and `*` only"),
            };
            self.otimes.insert(key, (a.clone(), t.clone(), value));
        }
        self.otimes[&(a.addr(), b.addr())].2.clone()
    }

    /// `∂1 = 1`, `∂(ab) = ∂a ⊗ ∂b`.
    pub(crate) fn partial(&mut self, a: &Term) -> Term {
        let mut stack: Vec<(&Term, bool)> = vec![(a, false)];
        while let Some((t, expanded)) = stack.pop() {
            if self.partial.contains_key(&t.addr()) {
                continue;
            }
            let value = match t.shape() {
                Shape::One => t.clone(),
                Shape::Apply(l, r) if expanded => {
                    let lv = self.partial[&l.addr()].1.clone();
                    let rv = self.partial[&r.addr()].1.clone();
                    self.otimes(&lv, &rv)
                }
                Shape::Apply(l, r) => {
                    stack.push((t, true));
                    stack.push((r, false));
                    stack.push((l, false));
                    continue;
                }
                _ => panic!("partial is defined on words in `1` and `*` only"),
            };
            self.partial.insert(t.addr(), (t.clone(), value));
        }
        self.partial[&a.addr()].1.clone()
    }
}

/// `a ⊗ b`. Panics unless `b` is built from `1` and `*` only.
pub fn otimes(a: &Term, b: &Term) -> Term {
    Memo::default().otimes(a, b)
}

/// `∂a`. Panics unless `a` is built from `1` and `*` only.
pub fn partial(a: &Term) -> Term {
    Memo::default().partial(a)
}

/// Accumulates expansion steps under a movable prefix.
pub(crate) struct Builder<'f> {
    pub(crate) fuel: &'f mut Fuel,
    pub(crate) memo: Memo,
    pub(crate) steps: Vec<Step>,
    prefix: Vec<Dir>,
}

impl<'f> Builder<'f> {
    pub(crate) fn new(fuel: &'f mut Fuel) -> Self {
        Builder {
            fuel,
            memo: Memo::default(),
            steps: Vec::new(),
            prefix: Vec::new(),
        }
    }

    fn emit(&mut self, rel: &[Dir]) -> Result<(), OutOfFuel> {
        self.fuel.spend(1)?;
        let mut pos = Vec::with_capacity(self.prefix.len() + rel.len());
        pos.extend_from_slice(&self.prefix);
        pos.extend_from_slice(rel);
        self.steps.push(Step::expand(Position(pos)));
        Ok(())
    }

    fn at<T>(&mut self, rel: &[Dir], f: impl FnOnce(&mut Self) -> Result<T, OutOfFuel>) -> Result<T, OutOfFuel> {
        let depth = self.prefix.len();
        self.prefix.extend_from_slice(rel);
        let out = f(self);
        self.prefix.truncate(depth);
        out
    }

    /// `ab -> a ⊗ b`.
    pub(crate) fn apply_to_otimes(&mut self, b: &Term) -> Result<(), OutOfFuel> {
        // Preorder over the internal nodes of b: expand, then recurse.
        let mut stack: Vec<(&Term, Vec<Dir>)> = vec![(b, Vec::new())];
        while let Some((t, path)) = stack.pop() {
            if let Some((l, r)) = t.as_apply() {
                self.emit(&path)?;
                let mut rp = path.clone();
                rp.push(Dir::Right);
                let mut lp = path;
                lp.push(Dir::Left);
                stack.push((r, rp));
                stack.push((l, lp));
            }
        }
        Ok(())
    }

    /// `a ⊗ (b ⊗ c) -> (a ⊗ b) ⊗ (a ⊗ c)`.
    pub(crate) fn otimes_assoc(&mut self, a: &Term, c: &Term) -> Result<(), OutOfFuel> {
        // Each leaf of c contributes `(a ⊗ b)(a·1) -> (a ⊗ b) ⊗ (a·1)`,
        // whose steps do not depend on b.
        let a1 = Term::apply(a, &Term::one());
        let paths = c.leaf_paths(self.fuel)?;
        for q in paths {
            self.at(&q, |s| s.apply_to_otimes(&a1))?;
        }
        Ok(())
    }

    /// Replays the relative steps of `a -> a'` inside `a ⊗ b`.
    pub(crate) fn otimes_left(&mut self, inner: &[Step], b: &Term) -> Result<(), OutOfFuel> {
        self.fuel.check(b.leaves().saturating_mul(inner.len() as u64))?;
        let paths = b.leaf_paths(self.fuel)?;
        for mut q in paths {
            q.push(Dir::Left);
            for s in inner {
                self.emit(&[q.as_slice(), &s.pos.0].concat())?;
            }
        }
        Ok(())
    }

    /// `a -> ∂a`.
    pub(crate) fn expand(&mut self, a: &Term) -> Result<(), OutOfFuel> {
        let mut stack: Vec<(&Term, Vec<Dir>, bool)> = vec![(a, Vec::new(), false)];
        while let Some((t, path, done)) = stack.pop() {
            let Some((l, r)) = t.as_apply() else { continue };
            if done {
                let dr = self.memo.partial(r);
                self.at(&path, |s| s.apply_to_otimes(&dr))?;
            } else {
                let mut rp = path.clone();
                rp.push(Dir::Right);
                let mut lp = path.clone();
                lp.push(Dir::Left);
                stack.push((t, path, true));
                stack.push((r, rp, false));
                stack.push((l, lp, false));
            }
        }
        Ok(())
    }

    /// For `b` obtained from `a` by expanding at `pos`: `b -> ∂a`.
    pub(crate) fn absorb(&mut self, a: &Term, pos: &[Dir]) -> Result<(), OutOfFuel> {
        let (a1, rest) = a.as_apply().expect("absorb position out of range");
        use Dir::{Left as L, Right as R};
        match pos.split_first() {
            None => {
                let (a2, a3) = rest.as_apply().expect("absorb position is not a redex");
                self.at(&[L, L], |s| s.expand(a1))?;
                self.at(&[L, R], |s| s.expand(a2))?;
                self.at(&[R, L], |s| s.expand(a1))?;
                self.at(&[R, R], |s| s.expand(a3))?;
                let (d2, d3) = (self.memo.partial(a2), self.memo.partial(a3));
                self.at(&[L], |s| s.apply_to_otimes(&d2))?;
                self.at(&[R], |s| s.apply_to_otimes(&d3))?;
                // ∂a1 ⊗ (∂a2 ∂a3) -> ∂a1 ⊗ (∂a2 ⊗ ∂a3), at the same positions.
                self.apply_to_otimes(&d3)
            }
            Some((L, q)) => {
                self.at(&[L], |s| s.absorb(a1, q))?;
                self.at(&[R], |s| s.expand(rest))?;
                let d = self.memo.partial(rest);
                self.apply_to_otimes(&d)
            }
            Some((R, q)) => {
                self.at(&[L], |s| s.expand(a1))?;
                self.at(&[R], |s| s.absorb(rest, q))?;
                let d = self.memo.partial(rest);
                self.apply_to_otimes(&d)
            }
        }
    }

    /// For `b` obtained from `a` by expanding at `pos`: `∂a -> ∂b`.
    pub(crate) fn lift_step(&mut self, a: &Term, pos: &[Dir]) -> Result<(), OutOfFuel> {
        let (a1, rest) = a.as_apply().expect("lift position out of range");
        match pos.split_first() {
            None => {
                // ∂a1 ⊗ (∂a2 ⊗ ∂a3) -> (∂a1 ⊗ ∂a2) ⊗ (∂a1 ⊗ ∂a3)
                let (_, a3) = rest.as_apply().expect("lift position is not a redex");
                let (d1, d3) = (self.memo.partial(a1), self.memo.partial(a3));
                self.otimes_assoc(&d1, &d3)
            }
            Some((Dir::Left, q)) => {
                let inner = {
                    let mut sub = Builder::new(&mut *self.fuel);
                    sub.memo = std::mem::take(&mut self.memo);
                    sub.lift_step(a1, q)?;
                    self.memo = std::mem::take(&mut sub.memo);
                    sub.steps
                };
                let d2 = self.memo.partial(rest);
                self.otimes_left(&inner, &d2)
            }
            Some((Dir::Right, q)) => self.lift_step(rest, q),
        }
    }
}

/// Position `p` with `b = ld_step(a, p, Expand)`, if any.
fn find_expansion(a: &Term, b: &Term) -> Option<Vec<Dir>> {
    let mut path = Vec::new();
    let (mut x, mut y) = (a, b);
    loop {
        if rewrite_node(x, super::Direction::Expand).as_ref() == Some(y) {
            return Some(path);
        }
        let ((xl, xr), (yl, yr)) = (x.as_apply()?, y.as_apply()?);
        if xl == yl {
            path.push(Dir::Right);
            (x, y) = (xr, yr);
        } else if xr == yr {
            path.push(Dir::Left);
            (x, y) = (xl, yl);
        } else {
            return None;
        }
    }
}

pub fn witness_expand(a: &Term) -> Result<Derivation, WitnessError> {
    witness_expand_with(a, &mut Fuel::default())
}

/// Expand-only derivation `a -> ∂a`.
pub fn witness_expand_with(a: &Term, fuel: &mut Fuel) -> Result<Derivation, WitnessError> {
    require_a_term(a)?;
    let mut b = Builder::new(fuel);
    b.expand(a)?;
    let end = b.memo.partial(a);
    Ok(Derivation {
        start: a.clone(),
        steps: b.steps,
        end,
    })
}

pub fn witness_absorb(a: &Term, b: &Term) -> Result<Derivation, WitnessError> {
    witness_absorb_with(a, b, &mut Fuel::default())
}

/// For `b` one expansion step from `a`: expand-only derivation `b -> ∂a`.
pub fn witness_absorb_with(a: &Term, b: &Term, fuel: &mut Fuel) -> Result<Derivation, WitnessError> {
    require_a_term(a)?;
    require_a_term(b)?;
    let pos = find_expansion(a, b).ok_or(WitnessError::NotOneStep)?;
    let mut builder = Builder::new(fuel);
    builder.absorb(a, &pos)?;
    let end = builder.memo.partial(a);
    Ok(Derivation {
        start: b.clone(),
        steps: builder.steps,
        end,
    })
}

pub fn lift_derivation(d: &Derivation) -> Result<Derivation, WitnessError> {
    lift_derivation_with(d, &mut Fuel::default())
}

/// Expand-only `a -> b` to expand-only `∂a -> ∂b`.
pub fn lift_derivation_with(d: &Derivation, fuel: &mut Fuel) -> Result<Derivation, WitnessError> {
    require_a_term(&d.start)?;
    if !d.is_expand_only() {
        return Err(WitnessError::NotExpandOnly);
    }
    let terms = d.terms()?;
    let mut b = Builder::new(fuel);
    for (t, step) in terms.iter().zip(&d.steps) {
        b.lift_step(t, &step.pos.0)?;
    }
    let start = b.memo.partial(&d.start);
    let end = b.memo.partial(&d.end);
    Ok(Derivation {
        start,
        steps: b.steps,
        end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{ld_step, Direction};

    fn p(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn otimes_examples() {
        let a = p("(1*1)*1");
        assert_eq!(otimes(&a, &Term::one()), Term::apply(&a, &Term::one()));
        assert_eq!(otimes(&p("1"), &p("1*1")), p("(1*1)*(1*1)"));
        assert_eq!(otimes(&p("1*1"), &p("1")), p("(1*1)*1"));
    }

    #[test]
    fn partial_examples() {
        assert_eq!(partial(&p("1")), p("1"));
        assert_eq!(partial(&p("1*1")), p("1*1"));
        assert_eq!(partial(&p("1*(1*1)")), p("(1*1)*(1*1)"));
    }

    #[test]
    fn partial_of_large_words_is_shared() {
        let v = Term::full_word(12);
        let d = partial(&v);
        assert!(d.leaves() > v.leaves());
        let again = partial(&v);
        assert_eq!(d, again);
    }

    #[test]
    fn expand_examples() {
        let d = witness_expand(&p("1")).unwrap();
        assert!(d.is_empty());
        let d = witness_expand(&p("1*(1*1)")).unwrap();
        assert_eq!(d.steps, vec![Step::expand(Position::root())]);
        d.replay().unwrap();
        let d = witness_expand(&Term::full_word(3)).unwrap();
        assert_eq!(d.end, partial(&Term::full_word(3)));
        d.replay().unwrap();
    }

    #[test]
    fn absorb_examples() {
        let a = p("1*(1*1)");
        let b = p("(1*1)*(1*1)");
        let d = witness_absorb(&a, &b).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.end, b);
        let a = p("1*(1*(1*1))");
        let b = ld_step(&a, &Position::root(), Direction::Expand).unwrap();
        let d = witness_absorb(&a, &b).unwrap();
        d.replay().unwrap();
        assert_eq!(d.end, partial(&a));
        assert_eq!(witness_absorb(&a, &a), Err(WitnessError::NotOneStep));
    }

    #[test]
    fn absorb_at_every_redex() {
        for s in [
            "1*(1*(1*1))",
            "(1*(1*1))*(1*(1*1))",
            "1*((1*1)*(1*(1*1)))",
            "(1*1)*(1*(1*1))",
        ] {
            let a = p(s);
            for pos in crate::term::ld_redexes(&a) {
                let b = ld_step(&a, &pos, Direction::Expand).unwrap();
                let d = witness_absorb(&a, &b).unwrap();
                d.replay().unwrap();
                assert!(d.is_expand_only());
            }
        }
    }

    #[test]
    fn lift_examples() {
        let a = p("1*(1*1)");
        let empty = Derivation::empty(a.clone());
        let l = lift_derivation(&empty).unwrap();
        assert!(l.is_empty());
        assert_eq!(l.start, partial(&a));

        let one = Derivation::from_steps(a.clone(), vec![Step::expand(Position::root())]).unwrap();
        let l = lift_derivation(&one).unwrap();
        l.replay().unwrap();
        assert_eq!(l.start, partial(&a));
        assert_eq!(l.end, partial(&p("(1*1)*(1*1)")));

        let a = p("1*(1*(1*1))");
        let two = Derivation::from_steps(
            a.clone(),
            vec![Step::expand(Position(vec![Dir::Right])), Step::expand(Position::root())],
        )
        .unwrap();
        let whole = lift_derivation(&two).unwrap();
        whole.replay().unwrap();
        let terms = two.terms().unwrap();
        let first =
            lift_derivation(&Derivation::from_steps(terms[0].clone(), two.steps[..1].to_vec()).unwrap()).unwrap();
        let second =
            lift_derivation(&Derivation::from_steps(terms[1].clone(), two.steps[1..].to_vec()).unwrap()).unwrap();
        assert_eq!(first.then(&second).unwrap(), whole);
    }

    #[test]
    fn lift_rejects_contractions() {
        let d = Derivation::from_steps(p("(1*1)*(1*1)"), vec![Step::contract(Position::root())]).unwrap();
        assert_eq!(lift_derivation(&d), Err(WitnessError::NotExpandOnly));
    }

    #[test]
    fn fuel_is_enforced() {
        let mut fuel = Fuel::new(3);
        let e = witness_expand_with(&Term::full_word(4), &mut fuel);
        assert!(matches!(e, Err(WitnessError::OutOfFuel(_))));
    }

    #[test]
    fn non_a_terms_rejected() {
        assert!(matches!(witness_expand(&p("1 o 1")), Err(WitnessError::NotATerm(_))));
        assert!(matches!(witness_expand(&p("1*0")), Err(WitnessError::NotATerm(_))));
    }
}
