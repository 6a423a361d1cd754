use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::{left_subterm_witness, lemma27_derivation_with, require_a_term, track_steps, WordError};
use crate::fuel::{Fuel, OutOfFuel, DEFAULT_FUEL};
use crate::term::{
    ld_redexes, ld_step, lift_derivation_with, witness_absorb_with, witness_expand_with, Derivation, Direction,
    Position, Step, Term, WitnessError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Syntactic,
    /// Bounded search for common expansions and left subterms.
    Search,
    /// Building the mixed derivations `a·u_k ≡ u_{k+1}`.
    Herringbone,
    /// Turning them into expansions of `∂^m u_{k+1}`.
    Convert,
    /// Following `a` and `b` through those expansions.
    Track,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Syntactic => "syntactic",
            Stage::Search => "search",
            Stage::Herringbone => "herringbone",
            Stage::Convert => "convert",
            Stage::Track => "track",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareResult {
    Equiv,
    Less,
    Greater,
    OutOfFuel(Stage),
}

impl fmt::Display for CompareResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompareResult::Equiv => f.write_str("equiv"),
            CompareResult::Less => f.write_str("less"),
            CompareResult::Greater => f.write_str("greater"),
            CompareResult::OutOfFuel(s) => write!(f, "out-of-fuel {s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompareOptions {
    /// Step budget given to each pipeline stage separately.
    pub fuel: u64,
    /// Distinct words the search may visit, both sides together.
    pub search_states: u64,
    /// Words with more leaves are not explored by the search.
    pub search_leaves: u64,
    /// Fall back to the saturation pipeline when the search gives up.
    pub pipeline: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            fuel: DEFAULT_FUEL,
            search_states: 200_000,
            search_leaves: 48,
            pipeline: true,
        }
    }
}

impl CompareOptions {
    pub fn with_fuel(fuel: u64) -> Self {
        CompareOptions {
            fuel,
            ..CompareOptions::default()
        }
    }
}

/// Expansions `a -> a'` and `b -> b'` whose ends are equal (`Equiv`), or
/// satisfy `b' = a' c_1 … c_k` (`Less`) or `a' = b' c_1 … c_k` (`Greater`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareWitness {
    pub left: Derivation,
    pub right: Derivation,
    pub suffix: Vec<Term>,
}

impl CompareWitness {
    /// Replays both derivations and checks the syntactic relation they claim.
    pub fn verify(&self, result: CompareResult) -> bool {
        if self.left.replay().is_err() || self.right.replay().is_err() {
            return false;
        }
        if !self.left.is_expand_only() || !self.right.is_expand_only() {
            return false;
        }
        let (x, y) = (&self.left.end, &self.right.end);
        let chain = |head: &Term| self.suffix.iter().fold(head.clone(), |acc, c| Term::apply(&acc, c));
        match result {
            CompareResult::Equiv => x == y && self.suffix.is_empty(),
            CompareResult::Less => !self.suffix.is_empty() && &chain(x) == y,
            CompareResult::Greater => !self.suffix.is_empty() && &chain(y) == x,
            CompareResult::OutOfFuel(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareOutcome {
    pub result: CompareResult,
    /// Stage that produced the verdict, or the last one to run out of fuel.
    pub stage: Stage,
    pub witness: Option<CompareWitness>,
    /// Fuel consumed by each stage that ran.
    pub fuel_used: Vec<(Stage, u64)>,
}

pub fn compare(a: &Term, b: &Term, fuel: u64) -> Result<CompareResult, WordError> {
    Ok(compare_detailed(a, b, &CompareOptions::with_fuel(fuel))?.result)
}

pub fn compare_detailed(a: &Term, b: &Term, opts: &CompareOptions) -> Result<CompareOutcome, WordError> {
    require_a_term(a)?;
    require_a_term(b)?;
    let mut fuel_used = vec![(Stage::Syntactic, 0)];
    if let Some((result, witness)) = syntactic(a, b) {
        return Ok(CompareOutcome {
            result,
            stage: Stage::Syntactic,
            witness: Some(witness),
            fuel_used,
        });
    }
    let mut fuel = Fuel::new(opts.search_states);
    let found = search(a, b, opts.search_leaves, &mut fuel);
    fuel_used.push((Stage::Search, fuel.used()));
    let mut last = Stage::Search;
    if let Ok(Some((result, witness))) = found {
        return Ok(CompareOutcome {
            result,
            stage: Stage::Search,
            witness: Some(witness),
            fuel_used,
        });
    }
    if opts.pipeline {
        let out = compare_pipeline(a, b, None, opts.fuel)?;
        fuel_used.extend(out.fuel_used);
        if !matches!(out.result, CompareResult::OutOfFuel(_)) {
            return Ok(CompareOutcome { fuel_used, ..out });
        }
        last = out.stage;
    }
    Ok(CompareOutcome {
        result: CompareResult::OutOfFuel(last),
        stage: last,
        witness: None,
        fuel_used,
    })
}

fn syntactic(a: &Term, b: &Term) -> Option<(CompareResult, CompareWitness)> {
    let witness = |suffix| CompareWitness {
        left: Derivation::empty(a.clone()),
        right: Derivation::empty(b.clone()),
        suffix,
    };
    if a == b {
        return Some((CompareResult::Equiv, witness(Vec::new())));
    }
    if let Some(cs) = left_subterm_witness(a, b) {
        return Some((CompareResult::Less, witness(cs)));
    }
    left_subterm_witness(b, a).map(|cs| (CompareResult::Greater, witness(cs)))
}

/// Words reached from one side, with the step that first reached each.
struct Side {
    parent: HashMap<Term, Option<(Term, Position)>>,
    /// Proper left-spine prefix -> a visited word containing it.
    prefixes: HashMap<Term, Term>,
    queue: VecDeque<Term>,
}

impl Side {
    fn new(root: &Term) -> Self {
        let mut s = Side {
            parent: HashMap::new(),
            prefixes: HashMap::new(),
            queue: VecDeque::new(),
        };
        s.parent.insert(root.clone(), None);
        s.add_prefixes(root);
        s.queue.push_back(root.clone());
        s
    }

    fn add_prefixes(&mut self, t: &Term) {
        let mut cur = t;
        while let Some((l, _)) = cur.as_apply() {
            self.prefixes.entry(l.clone()).or_insert_with(|| t.clone());
            cur = l;
        }
    }

    fn derivation_to(&self, t: &Term) -> Derivation {
        let mut steps = Vec::new();
        let mut cur = t.clone();
        while let Some(Some((prev, pos))) = self.parent.get(&cur) {
            steps.push(Step::expand(pos.clone()));
            cur = prev.clone();
        }
        steps.reverse();
        Derivation {
            start: cur,
            steps,
            end: t.clone(),
        }
    }
}

/// How a new word `y` on one side relates to the other side.
enum Meet {
    Same,
    /// `y` is a proper left subterm of the given word of the other side.
    Below(Term),
    /// The given word of the other side is a proper left subterm of `y`.
    Above(Term),
}

fn meet(y: &Term, other: &Side) -> Option<Meet> {
    if other.parent.contains_key(y) {
        return Some(Meet::Same);
    }
    if let Some(w) = other.prefixes.get(y) {
        return Some(Meet::Below(w.clone()));
    }
    let mut cur = y;
    while let Some((l, _)) = cur.as_apply() {
        if other.parent.contains_key(l) {
            return Some(Meet::Above(l.clone()));
        }
        cur = l;
    }
    None
}

/// Breadth-first expansion of both words, alternating sides, until some
/// expansion of one equals or is a left subterm of an expansion of the other.
/// `Ok(None)` means the bounded space was exhausted without a meeting.
fn search(
    a: &Term,
    b: &Term,
    max_leaves: u64,
    fuel: &mut Fuel,
) -> Result<Option<(CompareResult, CompareWitness)>, OutOfFuel> {
    let mut sides = [Side::new(a), Side::new(b)];
    let conclude = |sides: &[Side; 2], from: usize, y: &Term, m: Meet| {
        let here = sides[from].derivation_to(y);
        let (there_end, result_if_a) = match &m {
            Meet::Same => (y.clone(), CompareResult::Equiv),
            Meet::Below(w) => (w.clone(), CompareResult::Less),
            Meet::Above(w) => (w.clone(), CompareResult::Greater),
        };
        let there = sides[1 - from].derivation_to(&there_end);
        let (left, right, result) = if from == 0 {
            (here, there, result_if_a)
        } else {
            let flipped = match result_if_a {
                CompareResult::Less => CompareResult::Greater,
                CompareResult::Greater => CompareResult::Less,
                r => r,
            };
            (there, here, flipped)
        };
        let suffix = match result {
            CompareResult::Less => left_subterm_witness(&left.end, &right.end).unwrap(),
            CompareResult::Greater => left_subterm_witness(&right.end, &left.end).unwrap(),
            _ => Vec::new(),
        };
        (result, CompareWitness { left, right, suffix })
    };
    let mut turn = 0;
    while !sides[0].queue.is_empty() || !sides[1].queue.is_empty() {
        let from = if sides[turn].queue.is_empty() { 1 - turn } else { turn };
        turn = 1 - turn;
        let x = sides[from].queue.pop_front().unwrap();
        for pos in ld_redexes(&x) {
            let y = ld_step(&x, &pos, Direction::Expand).expect("redex position");
            if y.leaves() > max_leaves || sides[from].parent.contains_key(&y) {
                continue;
            }
            fuel.spend(1)?;
            sides[from].parent.insert(y.clone(), Some((x.clone(), pos)));
            if let Some(m) = meet(&y, &sides[1 - from]) {
                return Ok(Some(conclude(&sides, from, &y, m)));
            }
            sides[from].add_prefixes(&y);
            sides[from].queue.push_back(y);
        }
    }
    Ok(None)
}

/// The saturation pipeline alone: with `k` at least both depths, expand
/// `a·u_k` and `b·u_k` into `∂^m u_{k+1}`, follow `a` and `b` into that word,
/// and compare their positions on its left spine. Each stage gets `fuel`.
pub fn compare_pipeline(a: &Term, b: &Term, k: Option<u32>, fuel: u64) -> Result<CompareOutcome, WordError> {
    require_a_term(a)?;
    require_a_term(b)?;
    let k = k.unwrap_or(0).max(a.depth()).max(b.depth());
    let mut fuel_used = Vec::new();
    let give_up = |stage, fuel_used| {
        Ok(CompareOutcome {
            result: CompareResult::OutOfFuel(stage),
            stage,
            witness: None,
            fuel_used,
        })
    };

    let mut f = Fuel::new(fuel);
    let mixed = (|| {
        Ok::<_, WordError>((
            lemma27_derivation_with(a, k, &mut f)?,
            lemma27_derivation_with(b, k, &mut f)?,
        ))
    })();
    fuel_used.push((Stage::Herringbone, f.used()));
    let (da, db) = match mixed {
        Ok(pair) => pair,
        Err(WordError::OutOfFuel(_)) => return give_up(Stage::Herringbone, fuel_used),
        Err(e) => return Err(e),
    };
    let m = da.len().max(db.len());

    let mut f = Fuel::new(fuel);
    let converted = (|| Ok::<_, WitnessError>((to_saturated(&da, m, &mut f)?, to_saturated(&db, m, &mut f)?)))();
    fuel_used.push((Stage::Convert, f.used()));
    let (ea, eb) = match converted {
        Ok(pair) => pair,
        Err(WitnessError::OutOfFuel(_)) => return give_up(Stage::Convert, fuel_used),
        Err(e) => panic!("pipeline conversion failed: {e}"),
    };
    debug_assert_eq!(ea.end, eb.end);

    let mut f = Fuel::new(fuel);
    let tracked = (|| {
        Ok::<_, WordError>((
            track_steps(a, 1, &ea.start, &ea.steps, &mut f)?,
            track_steps(b, 1, &eb.start, &eb.steps, &mut f)?,
        ))
    })();
    fuel_used.push((Stage::Track, f.used()));
    let ((a2, sa, depth_a), (b2, sb, depth_b)) = match tracked {
        Ok(pair) => pair,
        Err(WordError::OutOfFuel(_)) => return give_up(Stage::Track, fuel_used),
        Err(e) => return Err(e),
    };
    let left = Derivation {
        start: a.clone(),
        steps: sa,
        end: a2,
    };
    let right = Derivation {
        start: b.clone(),
        steps: sb,
        end: b2,
    };
    // Deeper on the common spine means a left subterm of the other.
    let (result, suffix) = match depth_a.cmp(&depth_b) {
        std::cmp::Ordering::Equal => (CompareResult::Equiv, Vec::new()),
        std::cmp::Ordering::Greater => (
            CompareResult::Less,
            left_subterm_witness(&left.end, &right.end).unwrap(),
        ),
        std::cmp::Ordering::Less => (
            CompareResult::Greater,
            left_subterm_witness(&right.end, &left.end).unwrap(),
        ),
    };
    Ok(CompareOutcome {
        result,
        stage: Stage::Track,
        witness: Some(CompareWitness { left, right, suffix }),
        fuel_used,
    })
}

/// Expand-only `w_0 -> ∂^m w_n` from a mixed derivation `w_0 ≡ w_n` of
/// length `n <= m`.
///
/// Each step gives `w_{i-1} -> ∂w_i` (the step followed by an expansion, or
/// an absorption for a contraction), lifted `i - 1` times; the tail is
/// padded with lifted expansions of `w_n`.
fn to_saturated(d: &Derivation, m: usize, fuel: &mut Fuel) -> Result<Derivation, WitnessError> {
    let terms = d.terms()?;
    let mut steps = Vec::new();
    let mut end = d.start.clone();
    let lift_times = |mut x: Derivation, times: usize, fuel: &mut Fuel| {
        for _ in 0..times {
            x = lift_derivation_with(&x, fuel)?;
        }
        Ok::<_, WitnessError>(x)
    };
    for (i, step) in d.steps.iter().enumerate() {
        let (prev, next) = (&terms[i], &terms[i + 1]);
        let one = match step.dir {
            Direction::Expand => {
                fuel.spend(1)?;
                let rest = witness_expand_with(next, fuel)?;
                let mut s = vec![step.clone()];
                s.extend(rest.steps);
                Derivation {
                    start: prev.clone(),
                    steps: s,
                    end: rest.end,
                }
            }
            Direction::Contract => witness_absorb_with(next, prev, fuel)?,
        };
        let lifted = lift_times(one, i, fuel)?;
        steps.extend(lifted.steps);
        end = lifted.end;
    }
    for j in d.len()..m {
        let x = witness_expand_with(&d.end, fuel)?;
        let lifted = lift_times(x, j, fuel)?;
        steps.extend(lifted.steps);
        end = lifted.end;
    }
    if m == 0 {
        end = d.end.clone();
    }
    Ok(Derivation {
        start: d.start.clone(),
        steps,
        end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn cmp(a: &str, b: &str) -> CompareResult {
        compare(&p(a), &p(b), DEFAULT_FUEL).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(cmp("1", "1*1"), CompareResult::Less);
        assert_eq!(cmp("1*(1*1)", "(1*1)*(1*1)"), CompareResult::Equiv);
        assert_eq!(cmp("3", "1*2"), CompareResult::Less);
        assert_eq!(cmp("1*2", "3"), CompareResult::Greater);
        assert_eq!(cmp("1*(1*1)", "1*(1*1)"), CompareResult::Equiv);
    }

    #[test]
    fn witnesses_verify() {
        let words = ["1", "2", "3", "1*2", "4", "2*2", "1*3", "1*(1*2)", "(1*2)*1"];
        for a in words {
            for b in words {
                let out = compare_detailed(&p(a), &p(b), &CompareOptions::default()).unwrap();
                let w = out.witness.as_ref().expect("definite verdict");
                assert!(w.verify(out.result), "{a} vs {b}: {:?}", out.result);
            }
        }
    }

    #[test]
    fn pipeline_on_tiny_inputs() {
        let out = compare_pipeline(&p("1"), &p("1*1"), Some(1), DEFAULT_FUEL).unwrap();
        assert_eq!(out.result, CompareResult::Less);
        assert!(out.witness.unwrap().verify(CompareResult::Less));
        let out = compare_pipeline(&p("1"), &p("1"), None, DEFAULT_FUEL).unwrap();
        assert_eq!(out.result, CompareResult::Equiv);
    }

    #[test]
    fn pipeline_reports_its_stage() {
        let out = compare_pipeline(&p("2*2"), &p("1*3"), None, 50).unwrap();
        assert!(matches!(out.result, CompareResult::OutOfFuel(_)));
        assert_ne!(out.stage, Stage::Search);
    }

    #[test]
    fn out_of_fuel_when_all_stages_starve() {
        let opts = CompareOptions {
            fuel: 5,
            search_states: 0,
            search_leaves: 48,
            pipeline: true,
        };
        let out = compare_detailed(&p("3"), &p("1*2"), &opts).unwrap();
        assert!(matches!(out.result, CompareResult::OutOfFuel(_)));
        assert_eq!(out.result.to_string(), format!("out-of-fuel {}", out.stage));
    }

    #[test]
    fn rejects_non_a_terms() {
        assert!(compare(&p("1 o 1"), &p("1"), 10).is_err());
    }
}
