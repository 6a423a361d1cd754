use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Elem, LaverTable, TableError};

/// Largest number of tuples an exhaustive check will visit by default.
pub const DEFAULT_EXHAUSTIVE_CEILING: u128 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// `a * (b * c) = (a * b) * (a * c)`
    Ld,
    /// The four two-operation laws relating `*` and `o`.
    Sigma,
    /// Reduction modulo `2^n` is a homomorphism for `*` and `o`.
    Hom,
    /// Periods at level `n + 1` against level `n`.
    Periods,
}

impl Law {
    pub const ALL: [Law; 4] = [Law::Ld, Law::Sigma, Law::Hom, Law::Periods];

    fn arity(self) -> u32 {
        match self {
            Law::Ld | Law::Sigma => 3,
            Law::Hom => 2,
            Law::Periods => 1,
        }
    }

    fn needs_next(self) -> bool {
        matches!(self, Law::Hom | Law::Periods)
    }

    /// Returns the violated clause for one tuple, if any.
    ///
    /// Tuples range over the level-`n` table, except for `Hom` whose pairs
    /// range over the level-`n + 1` table.
    pub fn violation(self, table: &LaverTable, next: Option<&LaverTable>, tuple: &[u32]) -> Option<&'static str> {
        let star = |a, b| table.apply_raw(a, b);
        let circ = |a, b| table.compose_raw(a, b);
        match self {
            Law::Ld => {
                let (a, b, c) = (tuple[0], tuple[1], tuple[2]);
                (star(a, star(b, c)) != star(star(a, b), star(a, c))).then_some("a*(b*c) = (a*b)*(a*c)")
            }
            Law::Sigma => {
                let (a, b, c) = (tuple[0], tuple[1], tuple[2]);
                if circ(circ(a, b), c) != circ(a, circ(b, c)) {
                    Some("(a o b) o c = a o (b o c)")
                } else if star(circ(a, b), c) != star(a, star(b, c)) {
                    Some("(a o b)*c = a*(b*c)")
                } else if star(a, circ(b, c)) != circ(star(a, b), star(a, c)) {
                    Some("a*(b o c) = (a*b) o (a*c)")
                } else if circ(a, b) != circ(star(a, b), a) {
                    Some("a o b = (a*b) o a")
                } else {
                    None
                }
            }
            Law::Hom => {
                let hi = next?;
                let mask = (table.size() - 1) as u32;
                let (a, b) = (tuple[0], tuple[1]);
                if hi.apply_raw(a, b) & mask != star(a & mask, b & mask) {
                    Some("(a *' b) mod 2^n = (a mod 2^n) * (b mod 2^n)")
                } else if hi.compose_raw(a, b) & mask != circ(a & mask, b & mask) {
                    Some("(a o' b) mod 2^n = (a mod 2^n) o (b mod 2^n)")
                } else {
                    None
                }
            }
            Law::Periods => {
                let hi = next?;
                let a = tuple[0];
                let p = table.period_raw(a);
                let lifted = a as u64 + table.size();
                if hi.period_raw(lifted as u32) != p {
                    Some("p'(a + 2^n) = p(a)")
                } else {
                    let q = hi.period_raw(a);
                    (q != p && q != 2 * p).then_some("p'(a) in {p(a), 2p(a)}")
                }
            }
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Ld => "LD",
            Law::Sigma => "Sigma",
            Law::Hom => "Hom",
            Law::Periods => "Periods",
        })
    }
}

impl FromStr for Law {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ld" => Ok(Law::Ld),
            "sigma" => Ok(Law::Sigma),
            "hom" => Ok(Law::Hom),
            "periods" => Ok(Law::Periods),
            other => Err(format!("unknown law `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleBudget {
    Exhaustive,
    /// `count` uniformly drawn tuples from a seeded generator.
    Samples {
        count: u64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: Law,
    pub level: u32,
    pub holds: bool,
    /// First violating tuple found, present iff `holds` is false.
    pub counterexample: Option<Vec<Elem>>,
    pub clause: Option<&'static str>,
    pub checked: u64,
}

impl LawReport {
    /// Re-evaluates the counterexample; true iff it still violates the law.
    pub fn replay(&self, table: &LaverTable, next: Option<&LaverTable>) -> bool {
        match &self.counterexample {
            Some(t) => {
                let raw: Vec<u32> = t.iter().map(|e| e.0).collect();
                self.law.violation(table, next, &raw).is_some()
            }
            None => false,
        }
    }
}

pub fn verify_law(
    table: &LaverTable,
    next: Option<&LaverTable>,
    law: Law,
    budget: SampleBudget,
) -> Result<LawReport, TableError> {
    verify_law_with_ceiling(table, next, law, budget, DEFAULT_EXHAUSTIVE_CEILING)
}

pub fn verify_law_with_ceiling(
    table: &LaverTable,
    next: Option<&LaverTable>,
    law: Law,
    budget: SampleBudget,
    ceiling: u128,
) -> Result<LawReport, TableError> {
    if law.needs_next() {
        match next {
            Some(hi) if hi.level() == table.level() + 1 => {}
            _ => return Err(TableError::NeedsNextLevel(law)),
        }
    }
    // Hom pairs live in the upper table.
    let domain = match law {
        Law::Hom => next.unwrap().size(),
        _ => table.size(),
    };
    let arity = law.arity();
    let mut report = LawReport {
        law,
        level: table.level(),
        holds: true,
        counterexample: None,
        clause: None,
        checked: 0,
    };
    let mut tuple = vec![0u32; arity as usize];
    let record = |tuple: &[u32], report: &mut LawReport| -> bool {
        report.checked += 1;
        if let Some(clause) = law.violation(table, next, tuple) {
            report.holds = false;
            report.clause = Some(clause);
            report.counterexample = Some(tuple.iter().map(|&v| Elem(v)).collect());
            return false;
        }
        true
    };
    match budget {
        SampleBudget::Exhaustive => {
            let tuples = (domain as u128).pow(arity);
            if tuples > ceiling {
                return Err(TableError::ExhaustiveTooLarge { law, tuples, ceiling });
            }
            for index in 0..tuples {
                let mut rest = index;
                for slot in tuple.iter_mut().rev() {
                    *slot = (rest % domain as u128) as u32;
                    rest /= domain as u128;
                }
                if !record(&tuple, &mut report) {
                    break;
                }
            }
        }
        SampleBudget::Samples { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                for slot in tuple.iter_mut() {
                    *slot = rng.gen_range(0..domain) as u32;
                }
                if !record(&tuple, &mut report) {
                    break;
                }
            }
        }
    }
    Ok(report)
}
