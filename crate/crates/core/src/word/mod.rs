//! Comparison of free left-distributive words and the translation between
//! composition forms and plain words.

mod compare;
mod compose;

use thiserror::Error;

pub use compare::{
    compare, compare_detailed, compare_pipeline, CompareOptions, CompareOutcome, CompareResult, CompareWitness, Stage,
};
pub use compose::{composition_neighbours, normalize_composition, spine_compose, spine_decompose, CompositionForm};

use crate::fuel::{Fuel, OutOfFuel};
use crate::term::{ld_step, Derivation, Dir, Direction, Position, ReplayError, Step, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("{0} is not a word in `1` and `*` alone")]
    NotATerm(Term),
    #[error("{0} contains the constant 0")]
    ContainsZero(Term),
    #[error("depth {depth} exceeds the bound {bound}")]
    DepthTooLarge { depth: u32, bound: u32 },
    #[error("the first word is not a left subterm of the second")]
    NotLeftSubterm,
    #[error("derivation does not start at the given word")]
    StartMismatch,
    #[error("derivation contains a contract step")]
    NotExpandOnly,
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error(transparent)]
    OutOfFuel(#[from] OutOfFuel),
}

fn require_a_term(t: &Term) -> Result<(), WordError> {
    if t.is_a_term() {
        Ok(())
    } else {
        Err(WordError::NotATerm(t.clone()))
    }
}

/// `[c_1, …, c_k]` with `b = a c_1 … c_k` syntactically and `k > 0`.
pub fn left_subterm_witness(a: &Term, b: &Term) -> Option<Vec<Term>> {
    spine_depth(a, b).map(|k| {
        let (_, args) = b.left_spine();
        args[args.len() - k..].to_vec()
    })
}

/// The `k > 0` with `a` at position `L^k` of `b`.
pub(crate) fn spine_depth(a: &Term, b: &Term) -> Option<usize> {
    if a.depth() >= b.depth() {
        return None;
    }
    let mut t = b;
    let mut k = 0;
    while let Some((l, _)) = t.as_apply() {
        t = l;
        k += 1;
        if t.leaves() < a.leaves() {
            return None;
        }
        if t == a {
            return Some(k);
        }
    }
    None
}

pub fn lemma27_derivation(a: &Term, k: u32) -> Result<Derivation, WordError> {
    lemma27_derivation_with(a, k, &mut Fuel::default())
}

/// Mixed derivation from `a·u_k` to `u_{k+1}`, for `depth(a) <= k`.
///
/// For `a = bc`: `(bc)u_k` becomes `(bc)(b u_{k-1})` by the reversed
/// derivation for `b` at `k - 1`, contracts to `b(c u_{k-1})`, then the
/// derivation for `c` at `k - 1` gives `b u_k`, and the one for `b` at `k`
/// finishes.
pub fn lemma27_derivation_with(a: &Term, k: u32, fuel: &mut Fuel) -> Result<Derivation, WordError> {
    require_a_term(a)?;
    if a.depth() > k {
        return Err(WordError::DepthTooLarge {
            depth: a.depth(),
            bound: k,
        });
    }
    let mut steps = Vec::new();
    let mut prefix = Vec::new();
    herringbone_steps(a, false, &mut prefix, &mut steps, fuel)?;
    Ok(Derivation {
        start: Term::apply(a, &Term::herringbone(k)),
        steps,
        end: Term::herringbone(k + 1),
    })
}

fn herringbone_steps(
    w: &Term,
    reversed: bool,
    prefix: &mut Vec<Dir>,
    out: &mut Vec<Step>,
    fuel: &mut Fuel,
) -> Result<(), OutOfFuel> {
    let Some((b, c)) = w.as_apply() else {
        return Ok(());
    };
    let step = |prefix: &[Dir], dir: Direction, out: &mut Vec<Step>, fuel: &mut Fuel| {
        fuel.spend(1)?;
        out.push(Step {
            pos: Position(prefix.to_vec()),
            dir,
        });
        Ok::<(), OutOfFuel>(())
    };
    // Errors abandon the whole construction, so the prefix is not restored.
    if !reversed {
        prefix.push(Dir::Right);
        herringbone_steps(b, true, prefix, out, fuel)?;
        prefix.pop();
        step(prefix, Direction::Contract, out, fuel)?;
        prefix.push(Dir::Right);
        herringbone_steps(c, false, prefix, out, fuel)?;
        prefix.pop();
        herringbone_steps(b, false, prefix, out, fuel)
    } else {
        herringbone_steps(b, true, prefix, out, fuel)?;
        prefix.push(Dir::Right);
        herringbone_steps(c, true, prefix, out, fuel)?;
        prefix.pop();
        step(prefix, Direction::Expand, out, fuel)?;
        prefix.push(Dir::Right);
        herringbone_steps(b, false, prefix, out, fuel)?;
        prefix.pop();
        Ok(())
    }
}

/// Follows the left subterm `a` of `b` through an expand-only derivation
/// `d: b -> b'`, returning `a'` (a left subterm of `b'`) and `a -> a'`.
///
/// A step inside the tracked copy is replayed on it; a step at a spine node
/// above it pushes it one level down the spine; any other step is disjoint.
pub fn track_left_subterm(a: &Term, b: &Term, d: &Derivation) -> Result<(Term, Derivation), WordError> {
    track_left_subterm_with(a, b, d, &mut Fuel::default())
}

pub fn track_left_subterm_with(
    a: &Term,
    b: &Term,
    d: &Derivation,
    fuel: &mut Fuel,
) -> Result<(Term, Derivation), WordError> {
    if &d.start != b {
        return Err(WordError::StartMismatch);
    }
    if !d.is_expand_only() {
        return Err(WordError::NotExpandOnly);
    }
    let depth = spine_depth(a, b).ok_or(WordError::NotLeftSubterm)?;
    let (a_end, steps, _) = track_steps(a, depth, &d.start, &d.steps, fuel)?;
    Ok((
        a_end.clone(),
        Derivation {
            start: a.clone(),
            steps,
            end: a_end,
        },
    ))
}

/// Core of the tracking; also validates the replay of `steps` from `start`.
/// Returns the tracked word, its derivation and its final spine depth.
pub(crate) fn track_steps(
    a: &Term,
    mut depth: usize,
    start: &Term,
    steps: &[Step],
    fuel: &mut Fuel,
) -> Result<(Term, Vec<Step>, usize), WordError> {
    let mut t = start.clone();
    let mut cur = a.clone();
    let mut out = Vec::new();
    for (index, step) in steps.iter().enumerate() {
        fuel.spend(1)?;
        let p = &step.pos.0;
        let lefts = p.iter().take_while(|&&d| d == Dir::Left).count();
        if lefts >= depth {
            let q = Position(p[depth..].to_vec());
            cur = ld_step(&cur, &q, Direction::Expand).map_err(|source| ReplayError::Step { index, source })?;
            out.push(Step::expand(q));
        } else if lefts == p.len() {
            depth += 1;
        }
        t = ld_step(&t, &step.pos, step.dir).map_err(|source| ReplayError::Step { index, source })?;
    }
    debug_assert!(t.subterm(&vec![Dir::Left; depth]) == Some(&cur));
    Ok((cur, out, depth))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn left_subterm_examples() {
        assert_eq!(left_subterm_witness(&p("1"), &p("1*1")), Some(vec![p("1")]));
        assert_eq!(left_subterm_witness(&p("1*1"), &p("1*1")), None);
        assert_eq!(
            left_subterm_witness(&p("1*1"), &p("((1*1)*1)*1")),
            Some(vec![p("1"), p("1")])
        );
        assert_eq!(left_subterm_witness(&p("1*1"), &p("1*(1*1)")), None);
    }

    #[test]
    fn lemma27_examples() {
        let d = lemma27_derivation(&p("1"), 0).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.start, Term::herringbone(1));
        for (a, k) in [("1*1", 1), ("2", 2), ("1*(1*1)", 2), ("(1*1)*(1*1)", 2), ("3", 3)] {
            let d = lemma27_derivation(&p(a), k).unwrap();
            d.replay().unwrap();
            assert_eq!(d.end, Term::herringbone(k + 1));
        }
        assert!(matches!(
            lemma27_derivation(&p("1*(1*1)"), 1),
            Err(WordError::DepthTooLarge { depth: 2, bound: 1 })
        ));
    }

    #[test]
    fn lemma27_respects_fuel() {
        let mut fuel = Fuel::new(10);
        let r = lemma27_derivation_with(&Term::full_word(3), 5, &mut fuel);
        assert!(matches!(r, Err(WordError::OutOfFuel(_))));
    }

    #[test]
    fn tracking_examples() {
        let b = p("1*1");
        let (a2, d) = track_left_subterm(&p("1"), &b, &Derivation::empty(b.clone())).unwrap();
        assert_eq!(a2, p("1"));
        assert!(d.is_empty());

        // The step sits in the right argument, away from the tracked word.
        let b = p("1*(1*(1*1))");
        let d = Derivation::from_steps(b.clone(), vec![Step::expand(Position(vec![Dir::Right]))]).unwrap();
        let (a2, _) = track_left_subterm(&p("1"), &b, &d).unwrap();
        assert_eq!(a2, p("1"));

        // A spine step above the tracked word moves it down.
        let d = Derivation::from_steps(b.clone(), vec![Step::expand(Position::root())]).unwrap();
        let (a2, da) = track_left_subterm(&p("1"), &b, &d).unwrap();
        assert_eq!(a2, p("1"));
        assert!(da.is_empty());
        assert_eq!(left_subterm_witness(&a2, &d.end).unwrap().len(), 2);

        // A step inside the tracked word is replayed on it.
        let a = p("1*(1*1)");
        let b = Term::apply(&a, &p("1"));
        let d = Derivation::from_steps(b.clone(), vec![Step::expand(Position(vec![Dir::Left]))]).unwrap();
        let (a2, da) = track_left_subterm(&a, &b, &d).unwrap();
        assert_eq!(a2, p("(1*1)*(1*1)"));
        da.replay().unwrap();
    }

    #[test]
    fn tracking_rejects_bad_input() {
        let b = p("1*1");
        let e = Derivation::empty(b.clone());
        assert_eq!(track_left_subterm(&b, &b, &e), Err(WordError::NotLeftSubterm));
        assert_eq!(
            track_left_subterm(&p("1"), &p("(1*1)*1"), &e),
            Err(WordError::StartMismatch)
        );
        let c = Derivation::from_steps(p("(1*1)*(1*1)"), vec![Step::contract(Position::root())]).unwrap();
        assert_eq!(
            track_left_subterm(&p("1*1"), &c.start, &c),
            Err(WordError::NotExpandOnly)
        );
    }
}
