use std::fmt;

use super::WordError;
use crate::term::{Shape, Term};

/// `a_1 o … o a_n` with every part a word in `1` and `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositionForm {
    parts: Vec<Term>,
}

impl CompositionForm {
    /// `None` if `parts` is empty or some part uses `o` or `0`.
    pub fn new(parts: Vec<Term>) -> Option<Self> {
        (!parts.is_empty() && parts.iter().all(Term::is_a_term)).then_some(CompositionForm { parts })
    }

    pub fn parts(&self) -> &[Term] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Term> {
        self.parts
    }

    /// Left-associated `o` chain of the parts.
    pub fn to_term(&self) -> Term {
        let mut it = self.parts.iter();
        let first = it.next().unwrap().clone();
        it.fold(first, |acc, p| Term::compose(&acc, p))
    }
}

impl fmt::Display for CompositionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" o ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// `a_1(a_2(…(a_n(x))…))`.
fn apply_chain(parts: &[Term], x: &Term) -> Term {
    parts.iter().rev().fold(x.clone(), |acc, a| Term::apply(a, &acc))
}

/// Rewrites a word in `1`, `*` and `o` as a composition of plain words:
/// `q o r` concatenates, and `qr` has parts `a_1(…(a_n(b_j))…)` for the
/// parts `a_i` of `q` and `b_j` of `r`.
pub fn normalize_composition(p: &Term) -> Result<CompositionForm, WordError> {
    if p.contains_zero() {
        return Err(WordError::ContainsZero(p.clone()));
    }
    let parts = p.fold::<Vec<Term>, WordError>(
        |_| Ok(vec![Term::one()]),
        |shape, q, r| {
            Ok(match shape {
                Shape::Compose(..) => {
                    let mut out = q;
                    out.extend(r);
                    out
                }
                _ => r.iter().map(|b| apply_chain(&q, b)).collect(),
            })
        },
    )?;
    Ok(CompositionForm { parts })
}

/// The unique `a_1, …, a_n` with `a = a_1(a_2(…(a_n(1))…))`.
pub fn spine_decompose(a: &Term) -> Result<Vec<Term>, WordError> {
    if !a.is_a_term() {
        return Err(WordError::NotATerm(a.clone()));
    }
    let mut out = Vec::new();
    let mut t = a;
    while let Some((l, r)) = t.as_apply() {
        out.push(l.clone());
        t = r;
    }
    Ok(out)
}

pub fn spine_compose(parts: &[Term]) -> Term {
    apply_chain(parts, &Term::one())
}

/// Forms reachable in one move `a o b <-> ab o a` on adjacent parts.
pub fn composition_neighbours(form: &CompositionForm) -> Vec<CompositionForm> {
    let parts = form.parts();
    let mut out = Vec::new();
    for i in 0..parts.len().saturating_sub(1) {
        let (a, b) = (&parts[i], &parts[i + 1]);
        // a o b -> ab o a
        let mut next = parts.to_vec();
        next[i] = Term::apply(a, b);
        next[i + 1] = a.clone();
        out.push(CompositionForm { parts: next });
        // ab o a -> a o b
        if let Some((x, y)) = a.as_apply() {
            if x == b {
                let mut next = parts.to_vec();
                next[i] = x.clone();
                next[i + 1] = y.clone();
                out.push(CompositionForm { parts: next });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_composition(&p("1")).unwrap().parts(), &[p("1")]);
        assert_eq!(normalize_composition(&p("1 o 1")).unwrap().parts(), &[p("1"), p("1")]);
        assert_eq!(normalize_composition(&p("(1 o 1)*1")).unwrap().parts(), &[p("1*(1*1)")]);
        assert_eq!(
            normalize_composition(&p("1*(1 o 1)")).unwrap().parts(),
            &[p("1*1"), p("1*1")]
        );
        assert!(normalize_composition(&p("1 o 0")).is_err());
    }

    #[test]
    fn spine_examples() {
        assert!(spine_decompose(&p("1")).unwrap().is_empty());
        assert_eq!(spine_decompose(&p("1*(1*1)")).unwrap(), vec![p("1"), p("1")]);
        assert_eq!(spine_decompose(&p("(1*1)*1")).unwrap(), vec![p("1*1")]);
        for s in ["1", "1*(1*1)", "((1*1)*1)*(1*(1*1))", "5"] {
            let t = p(s);
            assert_eq!(spine_compose(&spine_decompose(&t).unwrap()), t);
        }
    }

    #[test]
    fn neighbours_are_involutive() {
        let f = CompositionForm::new(vec![p("1"), p("1*1"), p("1")]).unwrap();
        for g in composition_neighbours(&f) {
            assert!(composition_neighbours(&g).contains(&f));
        }
        assert!(CompositionForm::new(vec![]).is_none());
        assert!(CompositionForm::new(vec![p("1 o 1")]).is_none());
    }
}
