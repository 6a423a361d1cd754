//! Level-wise values `[a]_n` of words, signatures, and freeness probes.
//!
//! The adjoined constant `0` needs no special rules: in the zero convention
//! it is the table element `0`, for which `0 * a = a`, `a * 0 = 0` and
//! `a o 0 = 0 o a = a` already hold.

use std::fmt;

use thiserror::Error;

use crate::laver::{TableCache, TableError};
use crate::term::{Shape, Term};

pub const DEFAULT_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{0} contains the constant 0")]
    ContainsZero(Term),
    #[error("k must be at least 1")]
    ZeroArgument,
    #[error("values of {term} at levels {level} and {next} are incoherent ({low} then {high})")]
    Incoherent {
        term: Term,
        level: u32,
        next: u32,
        low: u32,
        high: u32,
    },
}

/// `[t]_n`.
pub fn eval_level(t: &Term, n: u32, cache: &TableCache) -> Result<u32, LimitError> {
    let table = cache.get(n)?;
    let mask = (table.size() - 1) as u32;
    let v = t.fold::<u32, LimitError>(
        |leaf| {
            Ok(match leaf {
                Shape::One => 1 & mask,
                _ => 0,
            })
        },
        |shape, a, b| {
            Ok(match shape {
                Shape::Apply(..) => table.apply_raw(a, b),
                _ => table.compose_raw(a, b),
            })
        },
    )?;
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelProfile {
    pub term: Term,
    /// `[t]_0, …, [t]_cap`.
    pub values: Vec<u32>,
    pub cap: u32,
}

impl LevelProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (n, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{v}\n"));
        }
        out
    }

    /// Least level with a nonzero value.
    pub fn first_nonzero(&self) -> Option<u32> {
        self.values.iter().position(|&v| v != 0).map(|n| n as u32)
    }
}

/// `[t]_n` for `n = 0..=cap`; each value is checked to be the previous one
/// or the previous one plus `2^n`.
pub fn eval_profile(t: &Term, cap: u32, cache: &TableCache) -> Result<LevelProfile, LimitError> {
    let mut values = Vec::with_capacity(cap as usize + 1);
    for n in 0..=cap {
        let v = eval_level(t, n, cache)?;
        if let Some(&low) = values.last() {
            if v != low && v as u64 != low as u64 + (1u64 << (n - 1)) {
                return Err(LimitError::Incoherent {
                    term: t.clone(),
                    level: n - 1,
                    next: n,
                    low,
                    high: v,
                });
            }
        }
        values.push(v);
    }
    Ok(LevelProfile {
        term: t.clone(),
        values,
        cap,
    })
}

/// Outcome of a search for a level; nonexistence is never claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignatureResult {
    Known(u32),
    Undecided(u32),
}

impl fmt::Display for SignatureResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureResult::Known(n) => write!(f, "known {n}"),
            SignatureResult::Undecided(cap) => write!(f, "undecided {cap}"),
        }
    }
}

/// The largest `n` with `[t]_n = 0`, found once some level up to `cap` is
/// nonzero.
pub fn signature(t: &Term, cap: u32, cache: &TableCache) -> Result<SignatureResult, LimitError> {
    if t.contains_zero() {
        return Err(LimitError::ContainsZero(t.clone()));
    }
    for n in 0..=cap {
        if eval_level(t, n, cache)? != 0 {
            // Level 0 is the one-element algebra, so n >= 1 here.
            return Ok(SignatureResult::Known(n - 1));
        }
    }
    Ok(SignatureResult::Undecided(cap))
}

/// Least `n <= cap` with `[1·k]_n != 0`, via `[1·k]_n != 0` iff the period of
/// row `1` at level `n` does not divide `k`.
pub fn freeness_probe(k: u128, cap: u32, cache: &TableCache) -> Result<SignatureResult, LimitError> {
    if k == 0 {
        return Err(LimitError::ZeroArgument);
    }
    for n in 1..=cap {
        let p = cache.get(n)?.period_raw(1) as u128;
        if !k.is_multiple_of(p) {
            return Ok(SignatureResult::Known(n));
        }
    }
    Ok(SignatureResult::Undecided(cap))
}

/// `s(u_k)` by `s(u_0) = 0` and `s(u_{j+1}) = s(1 · 2^{s(u_j)})`.
pub fn herringbone_probe(k: u32, cap: u32, cache: &TableCache) -> Result<SignatureResult, LimitError> {
    let mut s = 0u32;
    for _ in 0..k {
        // s(1·m) is one less than the first level where 1·m is nonzero;
        // s < cap <= 31 keeps 2^s in range.
        match freeness_probe(1u128 << s, cap, cache)? {
            SignatureResult::Known(n) => s = n - 1,
            undecided => return Ok(undecided),
        }
    }
    Ok(SignatureResult::Known(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfEquivalence {
    Distinguished(u32),
    IndistinguishableUpTo(u32),
}

impl fmt::Display for InfEquivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfEquivalence::Distinguished(n) => write!(f, "distinguished {n}"),
            InfEquivalence::IndistinguishableUpTo(cap) => write!(f, "indistinguishable {cap}"),
        }
    }
}

/// Least level `<= cap` where `a` and `b` differ.
pub fn equiv_inf(a: &Term, b: &Term, cap: u32, cache: &TableCache) -> Result<InfEquivalence, LimitError> {
    for n in 0..=cap {
        if eval_level(a, n, cache)? != eval_level(b, n, cache)? {
            return Ok(InfEquivalence::Distinguished(n));
        }
    }
    Ok(InfEquivalence::IndistinguishableUpTo(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laver::BuildLimits;

    fn p(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let c = TableCache::default();
        assert_eq!(eval_level(&p("1"), 0, &c).unwrap(), 0);
        for n in 1..6 {
            assert_eq!(eval_level(&p("1"), n, &c).unwrap(), 1);
        }
        assert_eq!(eval_level(&p("1*1"), 1, &c).unwrap(), 0);
        assert_eq!(eval_level(&p("1*3"), 3, &c).unwrap(), 6);
    }

    #[test]
    fn zero_rules() {
        let c = TableCache::default();
        for n in 0..5 {
            for s in ["1", "1*1", "3", "1*(1 o 1)"] {
                let a = p(s);
                let v = eval_level(&a, n, &c).unwrap();
                let z = Term::zero();
                assert_eq!(eval_level(&Term::apply(&z, &a), n, &c).unwrap(), v);
                assert_eq!(eval_level(&Term::apply(&a, &z), n, &c).unwrap(), 0);
                assert_eq!(eval_level(&Term::compose(&a, &z), n, &c).unwrap(), v);
                assert_eq!(eval_level(&Term::compose(&z, &a), n, &c).unwrap(), v);
            }
        }
    }

    #[test]
    fn profile_examples() {
        let c = TableCache::default();
        assert_eq!(eval_profile(&p("1"), 3, &c).unwrap().values, vec![0, 1, 1, 1]);
        assert_eq!(eval_profile(&p("1*1"), 3, &c).unwrap().values, vec![0, 0, 2, 2]);
        let u2 = Term::herringbone(2);
        let prof = eval_profile(&u2, 3, &c).unwrap();
        assert_eq!(prof.values, vec![0, 0, 0, 4]);
        assert_eq!(prof.to_csv(), "n,value\n0,0\n1,0\n2,0\n3,4\n");
    }

    #[test]
    fn signature_examples() {
        let c = TableCache::default();
        assert_eq!(signature(&p("1"), 4, &c).unwrap(), SignatureResult::Known(0));
        assert_eq!(signature(&p("1*1"), 4, &c).unwrap(), SignatureResult::Known(1));
        assert_eq!(
            signature(&Term::herringbone(2), 4, &c).unwrap(),
            SignatureResult::Known(2)
        );
        assert_eq!(
            signature(&Term::herringbone(3), 3, &c).unwrap(),
            SignatureResult::Undecided(3)
        );
        assert!(signature(&p("1*0"), 4, &c).is_err());
    }

    #[test]
    fn probe_examples() {
        let c = TableCache::default();
        assert_eq!(freeness_probe(1, 8, &c).unwrap(), SignatureResult::Known(2));
        assert_eq!(freeness_probe(4, 8, &c).unwrap(), SignatureResult::Known(5));
        assert_eq!(freeness_probe(16, 12, &c).unwrap(), SignatureResult::Undecided(12));
        assert!(freeness_probe(0, 8, &c).is_err());
        let h: Vec<_> = (0..4).map(|k| herringbone_probe(k, 12, &c).unwrap()).collect();
        use SignatureResult::Known;
        assert_eq!(h, vec![Known(0), Known(1), Known(2), Known(4)]);
        assert_eq!(herringbone_probe(4, 12, &c).unwrap(), SignatureResult::Undecided(12));
        assert_eq!(SignatureResult::Known(5).to_string(), "known 5");
        assert_eq!(SignatureResult::Undecided(12).to_string(), "undecided 12");
    }

    #[test]
    fn equiv_inf_examples() {
        let c = TableCache::default();
        assert_eq!(
            equiv_inf(&p("1*(1*1)"), &p("(1*1)*(1*1)"), 10, &c).unwrap(),
            InfEquivalence::IndistinguishableUpTo(10)
        );
        assert_eq!(
            equiv_inf(&p("1"), &p("1*1"), 10, &c).unwrap(),
            InfEquivalence::Distinguished(1)
        );
        assert_eq!(
            equiv_inf(&p("2"), &p("3"), 10, &c).unwrap(),
            InfEquivalence::Distinguished(1)
        );
    }

    #[test]
    fn cap_beyond_ceiling_is_refused() {
        let c = TableCache::new(BuildLimits {
            max_level: 4,
            ..BuildLimits::default()
        });
        assert!(matches!(
            eval_profile(&p("1"), 5, &c),
            Err(LimitError::Table(TableError::LevelTooLarge { .. }))
        ));
    }
}
