//! Candidate embedding algebras given as finite prefixes of strictly
//! increasing functions with a partial `·` table, and the two-sorted
//! structure built from them by formal compositions.
//!
//! Every verdict is relative to the finite data: an instance needing a
//! missing table entry or a value past the prefix is counted as unchecked.

mod check;
mod formal;
mod format;
mod report;
mod two_sorted;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use check::{check_candidate, replay_candidate, CheckOptions};
pub use formal::{
    formal_apply, formal_compose, formal_crit, formal_equal, formal_product, Equality, PartialMagma, TableMagma,
};
pub use report::{Axiom, AxiomEntry, AxiomReport, AxiomStatus, Instance, Reason};
pub use two_sorted::{
    build_two_sorted, check_two_sorted, FormalComposition, TwoSorted, TwoSortedBounds, DEFAULT_MAX_BFS,
};

/// Name of the implicit identity prefix.
pub const ID: &str = "id";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("`{0}` is not a valid function name")]
    BadName(String),
    #[error("`id` is reserved for the identity prefix")]
    ReservedName,
    #[error("function `{0}` is declared twice")]
    DuplicateFunction(String),
    #[error("prefix length must be at least 1")]
    EmptyPrefix,
    #[error("function `{name}` has {found} values, expected {expected}")]
    UnequalLength {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`{0}` is not a declared function")]
    Dangling(String),
    #[error("conflicting entries {a}·{b} = {first} and {a}·{b} = {second}")]
    ConflictingOp {
        a: String,
        b: String,
        first: String,
        second: String,
    },
    #[error("generator declared twice")]
    DuplicateGenerator,
    #[error("the generator cannot be `id`")]
    IdentityGenerator,
    #[error("candidate refutes {axiom} at {instance}")]
    CandidateRefuted { axiom: Axiom, instance: Instance },
    #[error("`{0}` has no critical point within its prefix")]
    NoCriticalPoint(String),
}

pub(crate) fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The values `f(0), …, f(L-1)` of a function on the naturals.
///
/// Strict monotonicity is not enforced here; the checkers report it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FnPrefix {
    name: String,
    values: Vec<u64>,
}

impl FnPrefix {
    pub fn new(name: impl Into<String>, values: Vec<u64>) -> Result<Self, EmbedError> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(EmbedError::BadName(name));
        }
        if values.is_empty() {
            return Err(EmbedError::EmptyPrefix);
        }
        Ok(FnPrefix { name, values })
    }

    /// `0, 1, …, len-1` under the reserved name.
    pub fn identity(len: usize) -> Self {
        FnPrefix {
            name: ID.to_string(),
            values: (0..len as u64).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `f(i)`, or `None` past the prefix.
    pub fn get(&self, i: u64) -> Option<u64> {
        usize::try_from(i).ok().and_then(|i| self.values.get(i).copied())
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v == i as u64)
    }

    /// Least `i` with `f(i) >= f(i+1)`.
    pub fn first_non_increase(&self) -> Option<usize> {
        self.values.windows(2).position(|w| w[0] >= w[1])
    }

    /// Least `i` with `f(i) > i`.
    pub fn crit(&self) -> Result<u64, EmbedError> {
        self.values
            .iter()
            .enumerate()
            .find(|&(i, &v)| v > i as u64)
            .map(|(i, _)| i as u64)
            .ok_or_else(|| EmbedError::NoCriticalPoint(self.name.clone()))
    }
}

pub fn crit(f: &FnPrefix) -> Result<u64, EmbedError> {
    f.crit()
}

/// The first terms of `c, f(c), f(f(c)), …` with `c` the critical point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalSequence {
    pub values: Vec<u64>,
    /// False when the prefix ran out before the requested length.
    pub complete: bool,
}

impl fmt::Display for CriticalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(" "))?;
        if !self.complete {
            f.write_str(if parts.is_empty() { "..." } else { " ..." })?;
        }
        Ok(())
    }
}

pub(crate) fn iterate_sequence(start: u64, m: usize, mut step: impl FnMut(u64) -> Option<u64>) -> CriticalSequence {
    let mut values = Vec::with_capacity(m);
    let mut x = start;
    while values.len() < m {
        values.push(x);
        if values.len() == m {
            break;
        }
        match step(x) {
            Some(y) => x = y,
            None => {
                return CriticalSequence {
                    values,
                    complete: false,
                }
            }
        }
    }
    CriticalSequence { values, complete: true }
}

pub fn critical_sequence(f: &FnPrefix, m: usize) -> Result<CriticalSequence, EmbedError> {
    let c = f.crit()?;
    Ok(iterate_sequence(c, m, |x| f.get(x)))
}

/// Critical sequence of `f_1 o … o f_k`: it starts at the least critical
/// point of the parts and iterates `f_1(…(f_k(x))…)`.
pub fn composition_critical_sequence(parts: &[&FnPrefix], m: usize) -> Result<CriticalSequence, EmbedError> {
    let c = parts.iter().filter_map(|f| f.crit().ok()).min().ok_or_else(|| {
        let names: Vec<&str> = parts.iter().map(|f| f.name()).collect();
        EmbedError::NoCriticalPoint(names.join(" o "))
    })?;
    Ok(iterate_sequence(c, m, |x| {
        parts.iter().rev().try_fold(x, |y, f| f.get(y))
    }))
}

/// Function prefixes of a common length with a partial `·` table.
///
/// `id` is always present and never declared; entries involving it follow
/// `id·a = a` and `a·id = id` unless the table says otherwise (which the
/// checker then refutes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    prefix_len: usize,
    identity: FnPrefix,
    functions: Vec<FnPrefix>,
    ops: BTreeMap<(String, String), String>,
    generator: Option<String>,
}

impl Candidate {
    pub fn new(
        prefix_len: usize,
        functions: Vec<FnPrefix>,
        ops: Vec<(String, String, String)>,
        generator: Option<String>,
    ) -> Result<Self, EmbedError> {
        if prefix_len == 0 {
            return Err(EmbedError::EmptyPrefix);
        }
        let mut seen = std::collections::HashSet::new();
        for f in &functions {
            if f.name == ID {
                return Err(EmbedError::ReservedName);
            }
            if !seen.insert(f.name.as_str()) {
                return Err(EmbedError::DuplicateFunction(f.name.clone()));
            }
            if f.len() != prefix_len {
                return Err(EmbedError::UnequalLength {
                    name: f.name.clone(),
                    expected: prefix_len,
                    found: f.len(),
                });
            }
        }
        let known = |n: &str| n == ID || seen.contains(n);
        let mut table: BTreeMap<(String, String), String> = BTreeMap::new();
        for (a, b, c) in ops {
            for n in [&a, &b, &c] {
                if !known(n) {
                    return Err(EmbedError::Dangling(n.clone()));
                }
            }
            match table.get(&(a.clone(), b.clone())) {
                Some(prev) if prev != &c => {
                    return Err(EmbedError::ConflictingOp {
                        a,
                        b,
                        first: prev.clone(),
                        second: c,
                    })
                }
                _ => {
                    table.insert((a, b), c);
                }
            }
        }
        if let Some(g) = &generator {
            if g == ID {
                return Err(EmbedError::IdentityGenerator);
            }
            if !known(g) {
                return Err(EmbedError::Dangling(g.clone()));
            }
        }
        Ok(Candidate {
            prefix_len,
            identity: FnPrefix::identity(prefix_len),
            functions,
            ops: table,
            generator,
        })
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    /// Declared functions in declaration order, without `id`.
    pub fn functions(&self) -> &[FnPrefix] {
        &self.functions
    }

    /// `id` followed by the declared functions.
    pub fn all_functions(&self) -> impl Iterator<Item = &FnPrefix> {
        std::iter::once(&self.identity).chain(self.functions.iter())
    }

    pub fn function(&self, name: &str) -> Option<&FnPrefix> {
        if name == ID {
            Some(&self.identity)
        } else {
            self.functions.iter().find(|f| f.name == name)
        }
    }

    /// Explicit table entries `(a, b, a·b)`, ordered by `(a, b)`.
    pub fn ops(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.ops.iter().map(|((a, b), c)| (a.as_str(), b.as_str(), c.as_str()))
    }

    pub fn op(&self, a: &str, b: &str) -> Option<&str> {
        self.ops.get(&(a.to_string(), b.to_string())).map(String::as_str)
    }

    /// `a·b` from the table, falling back on the identity rules.
    pub fn product(&self, a: &str, b: &str) -> Option<&str> {
        self.op(a, b).or(if a == ID {
            self.function(b).map(FnPrefix::name)
        } else if b == ID {
            Some(ID)
        } else {
            None
        })
    }

    pub fn generator(&self) -> Option<&str> {
        self.generator.as_deref()
    }
}

impl std::str::FromStr for Candidate {
    type Err = EmbedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        format::parse(s)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format::write(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(name: &str, v: &[u64]) -> FnPrefix {
        FnPrefix::new(name, v.to_vec()).unwrap()
    }

    #[test]
    fn crit_examples() {
        assert_eq!(f("s", &[1, 2, 3, 4]).crit().unwrap(), 0);
        assert_eq!(f("g", &[0, 1, 2, 5, 6]).crit().unwrap(), 3);
        assert_eq!(
            FnPrefix::identity(4).crit(),
            Err(EmbedError::NoCriticalPoint("id".into()))
        );
        assert!(FnPrefix::new("1x", vec![0]).is_err());
        assert!(FnPrefix::new("x", vec![]).is_err());
    }

    #[test]
    fn critical_sequence_examples() {
        let g = f("g", &[0, 1, 4, 5, 7, 8, 9, 10]);
        let s = critical_sequence(&g, 3).unwrap();
        assert_eq!(s.values, vec![2, 4, 7]);
        assert!(s.complete);
        let s = critical_sequence(&g, 5).unwrap();
        assert_eq!(s.values, vec![2, 4, 7, 10]);
        assert!(!s.complete);
        assert_eq!(s.to_string(), "2 4 7 10 ...");
        assert!(critical_sequence(&FnPrefix::identity(5), 3).is_err());
    }

    #[test]
    fn composition_sequences() {
        let g = f("g", &[0, 1, 4, 5, 7, 8, 9, 10]);
        let h = f("h", &[0, 2, 3, 4, 5, 6, 7, 8]);
        // crit = min(2, 1) = 1, then g(h(1)) = 4, g(h(4)) = 8.
        let s = composition_critical_sequence(&[&g, &h], 3).unwrap();
        assert_eq!(s.values, vec![1, 4, 8]);
        let id = FnPrefix::identity(8);
        assert!(composition_critical_sequence(&[&id], 2).is_err());
    }

    #[test]
    fn candidate_validation() {
        let s = f("s", &[1, 2, 3]);
        let op = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), c.to_string());
        assert!(Candidate::new(3, vec![s.clone()], vec![op("s", "s", "s")], None).is_ok());
        assert_eq!(
            Candidate::new(3, vec![s.clone()], vec![op("s", "t", "s")], None),
            Err(EmbedError::Dangling("t".into()))
        );
        assert!(matches!(
            Candidate::new(4, vec![s.clone()], vec![], None),
            Err(EmbedError::UnequalLength { .. })
        ));
        assert!(matches!(
            Candidate::new(3, vec![s.clone()], vec![op("s", "s", "s"), op("s", "s", "id")], None),
            Err(EmbedError::ConflictingOp { .. })
        ));
        assert_eq!(
            Candidate::new(3, vec![s.clone(), s.clone()], vec![], None),
            Err(EmbedError::DuplicateFunction("s".into()))
        );
        assert_eq!(
            Candidate::new(3, vec![FnPrefix::identity(3)], vec![], None),
            Err(EmbedError::ReservedName)
        );
        assert_eq!(
            Candidate::new(3, vec![s.clone()], vec![], Some("id".into())),
            Err(EmbedError::IdentityGenerator)
        );
    }

    #[test]
    fn identity_rules_fill_gaps() {
        let c = Candidate::new(3, vec![f("s", &[1, 2, 3])], vec![], None).unwrap();
        assert_eq!(c.product("id", "s"), Some("s"));
        assert_eq!(c.product("s", "id"), Some("id"));
        assert_eq!(c.product("s", "s"), None);
    }
}
