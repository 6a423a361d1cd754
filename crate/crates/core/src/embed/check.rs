//! Axioms of a single-sorted candidate, checked on every instance the
//! finite data can evaluate.

use super::report::{Tally, Verdict};
use super::{Axiom, AxiomEntry, AxiomReport, AxiomStatus, Candidate, FnPrefix, Instance, Reason, ID};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Also check `ab(a(n)) = a(b(n))`.
    pub coherence: bool,
    /// How many skipped instances each entry lists.
    pub skip_limit: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            coherence: true,
            skip_limit: 1 << 16,
        }
    }
}

fn same_values(c: &Candidate, x: &str, y: &str) -> bool {
    c.function(x).map(FnPrefix::values) == c.function(y).map(FnPrefix::values)
}

fn eval_monotone(f: &FnPrefix, i: u64) -> Verdict {
    match (f.get(i), f.get(i + 1)) {
        (Some(x), Some(y)) => Verdict::from_bool(x < y),
        _ => Verdict::Skip(Reason::PrefixTooShort),
    }
}

fn eval_inflationary(f: &FnPrefix, i: u64) -> Verdict {
    match f.get(i) {
        Some(x) => Verdict::from_bool(x >= i),
        None => Verdict::Skip(Reason::PrefixTooShort),
    }
}

fn eval_identity(c: &Candidate, a: &str, b: &str) -> Verdict {
    let Some(r) = c.op(a, b) else {
        return Verdict::Skip(Reason::MissingOp);
    };
    if a == ID {
        Verdict::from_bool(same_values(c, r, b))
    } else if b == ID {
        Verdict::from_bool(same_values(c, r, ID))
    } else {
        Verdict::Holds
    }
}

fn eval_ld(c: &Candidate, a: &str, b: &str, d: &str) -> Verdict {
    let lhs = c.product(b, d).and_then(|bd| c.product(a, bd));
    let rhs = match (c.product(a, b), c.product(a, d)) {
        (Some(ab), Some(ad)) => c.product(ab, ad),
        _ => None,
    };
    match (lhs, rhs) {
        (Some(l), Some(r)) => Verdict::from_bool(same_values(c, l, r)),
        _ => Verdict::Skip(Reason::MissingOp),
    }
}

fn eval_crit(c: &Candidate, a: &str, b: &str) -> Verdict {
    let Some(ab) = c.product(a, b).and_then(|n| c.function(n)) else {
        return Verdict::Skip(Reason::MissingOp);
    };
    let Ok(cb) = c.function(b).unwrap().crit() else {
        return Verdict::Skip(Reason::NoCriticalPoint);
    };
    let Some(target) = c.function(a).unwrap().get(cb) else {
        return Verdict::Skip(Reason::PrefixTooShort);
    };
    match ab.crit() {
        Ok(x) => Verdict::from_bool(x == target),
        // `ab` fixes the whole prefix, so it must not be asked to move
        // a point inside it.
        Err(_) if (target as usize) < c.prefix_len() => Verdict::Fails,
        Err(_) => Verdict::Skip(Reason::PrefixTooShort),
    }
}

fn eval_coherence(c: &Candidate, a: &str, b: &str, n: u64) -> Verdict {
    let Some(ab) = c.product(a, b).and_then(|x| c.function(x)) else {
        return Verdict::Skip(Reason::MissingOp);
    };
    let (fa, fb) = (c.function(a).unwrap(), c.function(b).unwrap());
    let lhs = fa.get(n).and_then(|x| ab.get(x));
    let rhs = fb.get(n).and_then(|x| fa.get(x));
    match (lhs, rhs) {
        (Some(l), Some(r)) => Verdict::from_bool(l == r),
        _ => Verdict::Skip(Reason::PrefixTooShort),
    }
}

fn sorted_names(c: &Candidate) -> Vec<&str> {
    let mut names: Vec<&str> = c.all_functions().map(FnPrefix::name).collect();
    names.sort_unstable();
    names
}

/// Checks, in order: monotonicity, `f(i) >= i`, the identity rules on
/// explicit entries, left distributivity, `crit(ab) = a(crit b)` and
/// (optionally) `ab(a(n)) = a(b(n))`. Instances run in lexicographic order
/// of names, then ordinals.
pub fn check_candidate(c: &Candidate, opts: &CheckOptions) -> AxiomReport {
    let names = sorted_names(c);
    let len = c.prefix_len() as u64;
    let lim = opts.skip_limit;
    let mut entries = Vec::new();

    let mut t = Tally::new(Axiom::Monotone, lim);
    for &f in &names {
        let g = c.function(f).unwrap();
        for i in 0..len.saturating_sub(1) {
            t.record(eval_monotone(g, i), || Instance::named(&[f], vec![i]));
        }
    }
    entries.push(t.finish());

    let mut t = Tally::new(Axiom::Inflationary, lim);
    for &f in &names {
        let g = c.function(f).unwrap();
        for i in 0..len {
            t.record(eval_inflationary(g, i), || Instance::named(&[f], vec![i]));
        }
    }
    entries.push(t.finish());

    let mut t = Tally::new(Axiom::Identity, lim);
    for (a, b, _) in c.ops().filter(|(a, b, _)| *a == ID || *b == ID) {
        t.record(eval_identity(c, a, b), || Instance::named(&[a, b], vec![]));
    }
    entries.push(t.finish());

    let mut t = Tally::new(Axiom::Ld, lim);
    'ld: for &a in &names {
        for &b in &names {
            for &d in &names {
                t.record(eval_ld(c, a, b, d), || Instance::named(&[a, b, d], vec![]));
                if t.done() {
                    break 'ld;
                }
            }
        }
    }
    entries.push(t.finish());

    let mut t = Tally::new(Axiom::Crit, lim);
    for &a in &names {
        for &b in names.iter().filter(|&&b| b != ID) {
            let cb = c.function(b).unwrap().crit().ok();
            t.record(eval_crit(c, a, b), || {
                Instance::named(&[a, b], cb.into_iter().collect())
            });
        }
    }
    entries.push(t.finish());

    if opts.coherence {
        let mut t = Tally::new(Axiom::Coherence, lim);
        for &a in &names {
            for &b in &names {
                for n in 0..len {
                    t.record(eval_coherence(c, a, b, n), || Instance::named(&[a, b], vec![n]));
                }
            }
        }
        entries.push(t.finish());
    } else {
        entries.push(AxiomEntry {
            axiom: Axiom::Coherence,
            status: AxiomStatus::Unchecked(Reason::Disabled),
            skipped: 0,
            skipped_instances: Vec::new(),
        });
    }
    AxiomReport { entries }
}

/// Re-evaluates one instance: `Some(true)` if it violates the axiom,
/// `Some(false)` if it holds, `None` if it cannot be evaluated.
pub fn replay_candidate(c: &Candidate, axiom: Axiom, instance: &Instance) -> Option<bool> {
    let mut names = Vec::new();
    for e in &instance.elements {
        match e.as_slice() {
            [n] if c.function(n).is_some() => names.push(n.as_str()),
            _ => return None,
        }
    }
    let verdict = match (axiom, names.as_slice(), instance.ordinals.as_slice()) {
        (Axiom::Monotone, [f], [i]) => eval_monotone(c.function(f)?, *i),
        (Axiom::Inflationary, [f], [i]) => eval_inflationary(c.function(f)?, *i),
        (Axiom::Identity, [a, b], []) => eval_identity(c, a, b),
        (Axiom::Ld, [a, b, d], []) => eval_ld(c, a, b, d),
        (Axiom::Crit, [a, b], _) if *b != ID => eval_crit(c, a, b),
        (Axiom::Coherence, [a, b], [n]) => eval_coherence(c, a, b, *n),
        _ => return None,
    };
    match verdict {
        Verdict::Holds => Some(false),
        Verdict::Fails => Some(true),
        Verdict::Vacuous | Verdict::Skip(_) => None,
    }
}
