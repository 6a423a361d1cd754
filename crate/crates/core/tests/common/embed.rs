//! Direct evaluation of the single-sorted axioms on raw prefix data, and
//! random corruption of candidates.

use std::collections::{BTreeMap, BTreeSet};

use laver_core::embed::{Axiom, Candidate, FnPrefix};
use rand::seq::SliceRandom;
use rand::Rng;

pub struct Raw {
    len: usize,
    funs: BTreeMap<String, Vec<u64>>,
    ops: BTreeMap<(String, String), String>,
}

impl Raw {
    pub fn of(c: &Candidate) -> Self {
        let len = c.prefix_len();
        let mut funs = BTreeMap::new();
        funs.insert("id".to_string(), (0..len as u64).collect());
        for f in c.functions() {
            funs.insert(f.name().to_string(), f.values().to_vec());
        }
        let ops = c
            .ops()
            .map(|(a, b, r)| ((a.to_string(), b.to_string()), r.to_string()))
            .collect();
        Raw { len, funs, ops }
    }

    fn v(&self, f: &str) -> &[u64] {
        &self.funs[f]
    }

    fn prod(&self, a: &str, b: &str) -> Option<String> {
        if let Some(r) = self.ops.get(&(a.to_string(), b.to_string())) {
            return Some(r.clone());
        }
        match (a, b) {
            ("id", b) => Some(b.to_string()),
            (_, "id") => Some("id".to_string()),
            _ => None,
        }
    }

    fn crit(&self, f: &str) -> Option<u64> {
        self.v(f)
            .iter()
            .enumerate()
            .find(|(i, &x)| x > *i as u64)
            .map(|(i, _)| i as u64)
    }

    fn at(&self, f: &str, i: u64) -> Option<u64> {
        self.v(f).get(i as usize).copied()
    }

    /// Axioms with at least one evaluable violated instance.
    pub fn violated(&self) -> BTreeSet<Axiom> {
        let names: Vec<&str> = self.funs.keys().map(String::as_str).collect();
        let mut out = BTreeSet::new();
        for &f in &names {
            let v = self.v(f);
            if v.windows(2).any(|w| w[0] >= w[1]) {
                out.insert(Axiom::Monotone);
            }
            if v.iter().enumerate().any(|(i, &x)| x < i as u64) {
                out.insert(Axiom::Inflationary);
            }
        }
        for ((a, b), r) in &self.ops {
            let bad = (a == "id" && self.v(r) != self.v(b)) || (b == "id" && self.v(r) != self.v("id"));
            if bad {
                out.insert(Axiom::Identity);
            }
        }
        for &a in &names {
            for &b in &names {
                for &d in &names {
                    let lhs = self.prod(b, d).and_then(|bd| self.prod(a, &bd));
                    let rhs = match (self.prod(a, b), self.prod(a, d)) {
                        (Some(ab), Some(ad)) => self.prod(&ab, &ad),
                        _ => None,
                    };
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if self.v(&l) != self.v(&r) {
                            out.insert(Axiom::Ld);
                        }
                    }
                }
                let Some(ab) = self.prod(a, b) else { continue };
                if b != "id" {
                    if let Some(target) = self.crit(b).and_then(|cb| self.at(a, cb)) {
                        let bad = match self.crit(&ab) {
                            Some(x) => x != target,
                            None => target < self.len as u64,
                        };
                        if bad {
                            out.insert(Axiom::Crit);
                        }
                    }
                }
                for n in 0..self.len as u64 {
                    let l = self.at(a, n).and_then(|x| self.at(&ab, x));
                    let r = self.at(b, n).and_then(|x| self.at(a, x));
                    if let (Some(l), Some(r)) = (l, r) {
                        if l != r {
                            out.insert(Axiom::Coherence);
                        }
                    }
                }
            }
        }
        out
    }
}

/// One to three random edits: a bumped or lowered prefix value, a
/// redirected table entry, a new entry, or a dropped entry.
pub fn corrupt<R: Rng>(c: &Candidate, rng: &mut R) -> Candidate {
    let mut funs: Vec<(String, Vec<u64>)> = c
        .functions()
        .iter()
        .map(|f| (f.name().to_string(), f.values().to_vec()))
        .collect();
    let mut ops: Vec<(String, String, String)> = c
        .ops()
        .map(|(a, b, r)| (a.to_string(), b.to_string(), r.to_string()))
        .collect();
    let mut names: Vec<String> = funs.iter().map(|(n, _)| n.clone()).collect();
    names.push("id".into());
    for _ in 0..rng.gen_range(1..=3) {
        match rng.gen_range(0..4) {
            0 if !funs.is_empty() => {
                let (_, v) = funs.choose_mut(rng).unwrap();
                let i = rng.gen_range(0..v.len());
                let delta = rng.gen_range(1..=3);
                v[i] = if rng.gen_bool(0.5) {
                    v[i] + delta
                } else {
                    v[i].saturating_sub(delta)
                };
            }
            1 if !ops.is_empty() => {
                let e = ops.choose_mut(rng).unwrap();
                e.2 = names.choose(rng).unwrap().clone();
            }
            2 => {
                let a = names.choose(rng).unwrap().clone();
                let b = names.choose(rng).unwrap().clone();
                let r = names.choose(rng).unwrap().clone();
                ops.retain(|(x, y, _)| !(x == &a && y == &b));
                ops.push((a, b, r));
            }
            _ if !ops.is_empty() => {
                let i = rng.gen_range(0..ops.len());
                ops.remove(i);
            }
            _ => {}
        }
    }
    let functions = funs.into_iter().map(|(n, v)| FnPrefix::new(n, v).unwrap()).collect();
    Candidate::new(c.prefix_len(), functions, ops, c.generator().map(String::from)).unwrap()
}
