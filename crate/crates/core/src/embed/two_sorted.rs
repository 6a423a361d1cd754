//! The two-sorted structure over a candidate: embeddings are formal
//! compositions of its non-identity functions (plus `id`, the empty
//! composition), ordinals are its critical points.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::check::{check_candidate, CheckOptions};
use super::formal::{formal_apply, formal_compose, formal_crit, formal_equal, formal_product, Equality, PartialMagma};
use super::report::{Tally, Verdict};
use super::{
    iterate_sequence, Axiom, AxiomReport, AxiomStatus, Candidate, CriticalSequence, EmbedError, FnPrefix, Instance,
    Reason, ID,
};

pub const DEFAULT_MAX_BFS: usize = 10_000;

/// Parts are indices into [`TwoSorted::names`]; no parts is `id`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalComposition {
    parts: Vec<u32>,
}

impl FormalComposition {
    pub fn id() -> Self {
        FormalComposition::default()
    }

    pub fn new(parts: Vec<u32>) -> Self {
        FormalComposition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_id(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

pub struct TwoSorted {
    prefix_len: usize,
    /// One representative per distinct non-identity prefix.
    names: Vec<FnPrefix>,
    aliases: HashMap<String, u32>,
    crits: Vec<Option<u64>>,
    table: HashMap<(u32, u32), u32>,
    factors: HashMap<u32, Vec<(u32, u32)>>,
    ordinals: Vec<u64>,
    generator: Option<u32>,
    /// Least depth of a word in the generator naming each function.
    depths: Vec<Option<u32>>,
    max_parts: usize,
    max_bfs: usize,
}

impl fmt::Debug for TwoSorted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoSorted")
            .field("names", &self.names.iter().map(FnPrefix::name).collect::<Vec<_>>())
            .field("ordinals", &self.ordinals)
            .field("max_parts", &self.max_parts)
            .finish()
    }
}

const CORE: [Axiom; 5] = [
    Axiom::Monotone,
    Axiom::Inflationary,
    Axiom::Identity,
    Axiom::Ld,
    Axiom::Crit,
];

/// Builds the structure, refusing candidates with a refuted core axiom.
///
/// Functions with equal prefixes are identified; table entries involving
/// `id` are left to the identity rules.
pub fn build_two_sorted(c: &Candidate, max_parts: usize, max_bfs: usize) -> Result<TwoSorted, EmbedError> {
    let report = check_candidate(
        c,
        &CheckOptions {
            coherence: false,
            skip_limit: 0,
        },
    );
    for e in &report.entries {
        if let (true, AxiomStatus::Refuted(i)) = (CORE.contains(&e.axiom), &e.status) {
            return Err(EmbedError::CandidateRefuted {
                axiom: e.axiom,
                instance: i.clone(),
            });
        }
    }

    let mut names: Vec<FnPrefix> = Vec::new();
    let mut aliases = HashMap::new();
    for f in c.functions() {
        let idx = match names.iter().position(|g| g.values() == f.values()) {
            Some(i) => i,
            None => {
                names.push(f.clone());
                names.len() - 1
            }
        };
        aliases.insert(f.name().to_string(), idx as u32);
    }

    let mut table: HashMap<(u32, u32), u32> = HashMap::new();
    for (a, b, r) in c.ops() {
        if a == ID || b == ID || r == ID {
            continue;
        }
        let key = (aliases[a], aliases[b]);
        let r = aliases[r];
        if let Some(&prev) = table.get(&key) {
            if prev != r {
                return Err(EmbedError::ConflictingOp {
                    a: a.to_string(),
                    b: b.to_string(),
                    first: names[prev as usize].name().to_string(),
                    second: names[r as usize].name().to_string(),
                });
            }
        }
        table.insert(key, r);
    }
    let mut factors: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
    let mut entries: Vec<_> = table.iter().map(|(&k, &v)| (k, v)).collect();
    entries.sort_unstable();
    for ((a, b), r) in entries {
        factors.entry(r).or_default().push((a, b));
    }

    let crits: Vec<Option<u64>> = names.iter().map(|f| f.crit().ok()).collect();

    // Every a(crit b) is crit(ab), so the critical points are closed under
    // application.
    let mut ords: BTreeSet<u64> = crits.iter().flatten().copied().collect();
    let mut frontier: Vec<u64> = ords.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        for f in &names {
            if let Some(y) = f.get(x) {
                if ords.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }

    let generator = c.generator().map(|g| aliases[g]);
    let mut depths = vec![None; names.len()];
    if let Some(g) = generator {
        depths[g as usize] = Some(0);
        loop {
            let mut changed = false;
            for (&(a, b), &r) in &table {
                if let (Some(da), Some(db)) = (depths[a as usize], depths[b as usize]) {
                    let d = da.max(db) + 1;
                    if depths[r as usize].is_none_or(|old| d < old) {
                        depths[r as usize] = Some(d);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    Ok(TwoSorted {
        prefix_len: c.prefix_len(),
        names,
        aliases,
        crits,
        table,
        factors,
        ordinals: ords.into_iter().collect(),
        generator,
        depths,
        max_parts,
        max_bfs,
    })
}

impl PartialMagma for TwoSorted {
    fn product(&self, a: u32, b: u32) -> Option<u32> {
        self.table.get(&(a, b)).copied()
    }

    fn factors(&self, c: u32) -> Vec<(u32, u32)> {
        self.factors.get(&c).cloned().unwrap_or_default()
    }

    fn apply(&self, a: u32, x: u64) -> Option<u64> {
        self.names[a as usize].get(x)
    }

    fn crit(&self, a: u32) -> Option<u64> {
        self.crits[a as usize]
    }
}

impl TwoSorted {
    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn max_parts(&self) -> usize {
        self.max_parts
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(FnPrefix::name)
    }

    /// Index of a declared function (after identification of equal prefixes).
    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.aliases.get(name).copied()
    }

    /// `None` if some name is unknown; `id` parts are dropped.
    pub fn composition(&self, names: &[&str]) -> Option<FormalComposition> {
        names
            .iter()
            .filter(|&&n| n != ID)
            .map(|n| self.lookup(n))
            .collect::<Option<Vec<_>>>()
            .map(FormalComposition::new)
    }

    pub fn part_names(&self, a: &FormalComposition) -> Vec<String> {
        a.parts
            .iter()
            .map(|&p| self.names[p as usize].name().to_string())
            .collect()
    }

    pub fn show(&self, a: &FormalComposition) -> String {
        if a.is_id() {
            ID.to_string()
        } else {
            self.part_names(a).join(" o ")
        }
    }

    /// The ordinal sort, ascending.
    pub fn ordinals(&self) -> &[u64] {
        &self.ordinals
    }

    pub fn generator(&self) -> Option<u32> {
        self.generator
    }

    pub fn depth(&self, name: u32) -> Option<u32> {
        self.depths.get(name as usize).copied().flatten()
    }

    pub fn product(&self, a: &FormalComposition, b: &FormalComposition) -> Option<FormalComposition> {
        formal_product(self, &a.parts, &b.parts).map(FormalComposition::new)
    }

    pub fn compose(&self, a: &FormalComposition, b: &FormalComposition) -> FormalComposition {
        FormalComposition::new(formal_compose(&a.parts, &b.parts))
    }

    pub fn apply(&self, a: &FormalComposition, x: u64) -> Option<u64> {
        formal_apply(self, &a.parts, x)
    }

    /// `None` for `id`, or when no part moves a point of the prefix.
    pub fn crit(&self, a: &FormalComposition) -> Option<u64> {
        formal_crit(self, &a.parts)
    }

    pub fn equal(&self, a: &FormalComposition, b: &FormalComposition) -> Equality {
        formal_equal(self, &a.parts, &b.parts, self.max_bfs)
    }

    pub fn critical_sequence(&self, a: &FormalComposition, m: usize) -> Result<CriticalSequence, EmbedError> {
        let c = self.crit(a).ok_or_else(|| EmbedError::NoCriticalPoint(self.show(a)))?;
        Ok(iterate_sequence(c, m, |x| self.apply(a, x)))
    }

    /// `κ_0 = crit j`, `κ_{n+1} = j(κ_n)` while the prefix allows.
    pub fn kappa(&self) -> Vec<u64> {
        let Some(j) = self.generator else {
            return Vec::new();
        };
        match self.critical_sequence(&FormalComposition::new(vec![j]), self.prefix_len + 1) {
            Ok(s) => s.values,
            Err(_) => Vec::new(),
        }
    }

    /// Every composition with at most `max_parts` parts, shortest first.
    pub fn elements(&self, max_parts: usize) -> Vec<FormalComposition> {
        let n = self.names.len() as u32;
        let mut out = vec![FormalComposition::id()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_parts {
            let mut next = Vec::new();
            for p in &layer {
                for x in 0..n {
                    let mut q: Vec<u32> = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
            out.extend(next.iter().cloned().map(FormalComposition::new));
            layer = next;
        }
        out
    }

    fn is_generated(&self, a: &FormalComposition) -> bool {
        a.parts.iter().all(|&p| self.depths[p as usize].is_some())
    }

    fn to_instance(&self, elems: &[FormalComposition], ords: Vec<u64>) -> Instance {
        Instance::new(elems.iter().map(|e| self.part_names(e)).collect(), ords)
    }

    fn elements_of(&self, i: &Instance) -> Option<Vec<FormalComposition>> {
        i.elements
            .iter()
            .map(|e| self.composition(&e.iter().map(String::as_str).collect::<Vec<_>>()))
            .collect()
    }

    /// Re-evaluates one instance under `bounds`: `Some(true)` if it
    /// violates the axiom, `Some(false)` if it holds, `None` otherwise.
    pub fn replay(&self, axiom: Axiom, instance: &Instance, bounds: &TwoSortedBounds) -> Option<bool> {
        let elems = self.elements_of(instance)?;
        match Checker::new(self, bounds).eval(axiom, &elems, &instance.ordinals) {
            Verdict::Holds => Some(false),
            Verdict::Fails => Some(true),
            Verdict::Vacuous | Verdict::Skip(_) => None,
        }
    }
}

/// Enumeration bounds for [`check_two_sorted`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoSortedBounds {
    /// Parts of the embeddings the axioms quantify over.
    pub max_parts: usize,
    /// Longest context `c_1 … c_k` in the relations `≡_γ`.
    pub ctx_len: usize,
    /// Parts of each context element.
    pub ctx_parts: usize,
    /// Parts of the embeddings compared in the `≡_γ` axioms.
    pub equiv_parts: usize,
    /// Parts of the outer embedding `r` when establishing a hypothesis
    /// `a ≡_γ b`; conclusions use one part fewer.
    pub r_parts: usize,
    pub skip_limit: usize,
}

impl Default for TwoSortedBounds {
    fn default() -> Self {
        TwoSortedBounds {
            max_parts: 3,
            ctx_len: 3,
            ctx_parts: 1,
            equiv_parts: 1,
            r_parts: 2,
            skip_limit: 64,
        }
    }
}

type Fc = FormalComposition;

struct Checker<'a> {
    ts: &'a TwoSorted,
    bounds: TwoSortedBounds,
    contexts: Vec<Fc>,
    hyp_rs: Vec<Fc>,
    concl_rs: Vec<Fc>,
    kappa: Vec<u64>,
    memo: RefCell<HashMap<(Fc, Fc, u64), bool>>,
}

fn eq_verdict(e: Equality) -> Verdict {
    match e {
        Equality::Equal => Verdict::Holds,
        Equality::Distinct => Verdict::Fails,
        Equality::Unknown => Verdict::Skip(Reason::BfsBudget),
    }
}

fn both<T>(x: Option<T>, y: Option<T>) -> Option<(T, T)> {
    x.zip(y)
}

impl<'a> Checker<'a> {
    fn new(ts: &'a TwoSorted, bounds: &TwoSortedBounds) -> Self {
        let contexts = ts
            .elements(bounds.ctx_parts)
            .into_iter()
            .filter(|c| !c.is_id())
            .collect();
        Checker {
            ts,
            bounds: *bounds,
            contexts,
            hyp_rs: ts.elements(bounds.r_parts),
            concl_rs: ts.elements(bounds.r_parts.saturating_sub(1)),
            kappa: ts.kappa(),
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn prod(&self, a: &Fc, b: &Fc) -> Option<Fc> {
        self.ts.product(a, b)
    }

    fn eq_opt(&self, x: Option<Fc>, y: Option<Fc>) -> Verdict {
        match both(x, y) {
            Some((x, y)) => eq_verdict(self.ts.equal(&x, &y)),
            None => Verdict::Skip(Reason::MissingOp),
        }
    }

    fn val_eq(&self, x: Option<u64>, y: Option<u64>) -> Verdict {
        match both(x, y) {
            Some((x, y)) => Verdict::from_bool(x == y),
            None => Verdict::Skip(Reason::PrefixTooShort),
        }
    }

    /// `crit a > x`, with an unknown critical point lying past the prefix.
    fn crit_exceeds(&self, a: &Fc, x: u64) -> Option<bool> {
        match self.ts.crit(a) {
            Some(c) => Some(c > x),
            None => ((x as usize) < self.ts.prefix_len).then_some(true),
        }
    }

    /// Searches `r ∈ rs`, contexts of length `<= ctx_len` and `δ` for a
    /// witness that `ra c_1…c_k` and `rb c_1…c_k` differ at a point where
    /// one of them is below `rγ`.
    fn refute(&self, a: &Fc, b: &Fc, gamma: u64, rs: &[Fc], ctx_len: usize) -> bool {
        rs.iter().any(|r| {
            let (Some(rg), Some(ra), Some(rb)) = (self.ts.apply(r, gamma), self.prod(r, a), self.prod(r, b)) else {
                return false;
            };
            self.refute_from(&ra, &rb, rg, ctx_len)
        })
    }

    fn refute_from(&self, x: &Fc, y: &Fc, bound: u64, depth: usize) -> bool {
        let differs = self
            .ts
            .ordinals
            .iter()
            .any(|&d| match both(self.ts.apply(x, d), self.ts.apply(y, d)) {
                Some((vx, vy)) => (vx < bound || vy < bound) && vx != vy,
                None => false,
            });
        if differs {
            return true;
        }
        depth > 0
            && self
                .contexts
                .iter()
                .any(|c| match both(self.prod(x, c), self.prod(y, c)) {
                    Some((xc, yc)) => self.refute_from(&xc, &yc, bound, depth - 1),
                    None => false,
                })
    }

    /// `a ≡_γ b` survives the search at hypothesis bounds.
    fn hyp(&self, a: &Fc, b: &Fc, gamma: u64) -> bool {
        let key = if a <= b {
            (a.clone(), b.clone(), gamma)
        } else {
            (b.clone(), a.clone(), gamma)
        };
        if let Some(&v) = self.memo.borrow().get(&key) {
            return v;
        }
        let v = !self.refute(a, b, gamma, &self.hyp_rs, self.bounds.ctx_len);
        self.memo.borrow_mut().insert(key, v);
        v
    }

    fn crit_seq(&self, a: &Fc) -> Option<CriticalSequence> {
        self.ts.critical_sequence(a, self.ts.prefix_len + 1).ok()
    }

    fn eval(&self, axiom: Axiom, e: &[Fc], o: &[u64]) -> Verdict {
        use Axiom::*;
        let ts = self.ts;
        match (axiom, e, o) {
            (Ld, [a, b, c], []) => {
                let l = self.prod(b, c).and_then(|bc| self.prod(a, &bc));
                let r = both(self.prod(a, b), self.prod(a, c)).and_then(|(ab, ac)| self.prod(&ab, &ac));
                self.eq_opt(l, r)
            }
            (Monotone, [a], [x, y]) if x < y => match both(ts.apply(a, *x), ts.apply(a, *y)) {
                Some((u, v)) => Verdict::from_bool(u < v),
                None => Verdict::Skip(Reason::PrefixTooShort),
            },
            (Inflationary, [a], [x]) => match ts.apply(a, *x) {
                Some(v) => Verdict::from_bool(v >= *x),
                None => Verdict::Skip(Reason::PrefixTooShort),
            },
            (CritMoves, [a], []) if !a.is_id() => match ts.crit(a) {
                Some(c) => match ts.apply(a, c) {
                    Some(v) => Verdict::from_bool(v > c),
                    None => Verdict::Skip(Reason::PrefixTooShort),
                },
                None => Verdict::Skip(Reason::NoCriticalPoint),
            },
            (FixedBelowCrit, [a], [x]) if !a.is_id() => match ts.crit(a) {
                Some(c) if *x < c => self.val_eq(ts.apply(a, *x), Some(*x)),
                Some(_) => Verdict::Vacuous,
                None => Verdict::Skip(Reason::NoCriticalPoint),
            },
            (Crit, [a, b], []) if !b.is_id() => {
                let Some(ab) = self.prod(a, b) else {
                    return Verdict::Skip(Reason::MissingOp);
                };
                let Some(cb) = ts.crit(b) else {
                    return Verdict::Skip(Reason::NoCriticalPoint);
                };
                let Some(target) = ts.apply(a, cb) else {
                    return Verdict::Skip(Reason::PrefixTooShort);
                };
                match ts.crit(&ab) {
                    Some(x) => Verdict::from_bool(x == target),
                    None if (target as usize) < ts.prefix_len => Verdict::Fails,
                    None => Verdict::Skip(Reason::PrefixTooShort),
                }
            }
            (Coherence, [a, b], [x]) => {
                let Some(ab) = self.prod(a, b) else {
                    return Verdict::Skip(Reason::MissingOp);
                };
                let l = ts.apply(a, *x).and_then(|v| ts.apply(&ab, v));
                let r = ts.apply(b, *x).and_then(|v| ts.apply(a, v));
                self.val_eq(l, r)
            }
            (SigmaAssoc, [a, b, c], []) => {
                let l = ts.compose(&ts.compose(a, b), c);
                let r = ts.compose(a, &ts.compose(b, c));
                eq_verdict(ts.equal(&l, &r))
            }
            (SigmaComposeApply, [a, b, c], []) => {
                let l = self.prod(&ts.compose(a, b), c);
                let r = self.prod(b, c).and_then(|bc| self.prod(a, &bc));
                self.eq_opt(l, r)
            }
            (SigmaApplyCompose, [a, b, c], []) => {
                let l = self.prod(a, &ts.compose(b, c));
                let r = both(self.prod(a, b), self.prod(a, c)).map(|(ab, ac)| ts.compose(&ab, &ac));
                self.eq_opt(l, r)
            }
            (SigmaExchange, [a, b], []) => {
                let r = self.prod(a, b).map(|ab| ts.compose(&ab, a));
                self.eq_opt(Some(ts.compose(a, b)), r)
            }
            (ComposeApplication, [a, b], [x]) => self.val_eq(
                ts.apply(&ts.compose(a, b), *x),
                ts.apply(b, *x).and_then(|v| ts.apply(a, v)),
            ),
            (ComposeCrit, [a, b], []) if !a.is_id() && !b.is_id() => {
                let m = match (ts.crit(a), ts.crit(b)) {
                    (None, None) => return Verdict::Skip(Reason::NoCriticalPoint),
                    (x, y) => x.into_iter().chain(y).min(),
                };
                Verdict::from_bool(ts.crit(&ts.compose(a, b)) == m)
            }
            (Identity, [a], [x]) => {
                let id = Fc::id();
                let ok = ts.apply(&id, *x) == Some(*x)
                    && self.prod(a, &id) == Some(id.clone())
                    && self.prod(&id, a).as_ref() == Some(a)
                    && ts.compose(a, &id) == *a
                    && ts.compose(&id, a) == *a;
                Verdict::from_bool(ok)
            }
            (LinearOrder, [], [x, y]) => Verdict::from_bool([x < y, x == y, x > y].iter().filter(|&&t| t).count() == 1),
            (EquivTransitive, [a, b, c], [g]) => {
                if self.hyp(a, b, *g) && self.hyp(b, c, *g) {
                    Verdict::from_bool(self.hyp(a, c, *g))
                } else {
                    Verdict::Vacuous
                }
            }
            (EquivRespects, [a, a2, b], [g]) => {
                if !self.hyp(a, a2, *g) {
                    return Verdict::Vacuous;
                }
                let n = self.bounds.ctx_len;
                let mut pairs = vec![(ts.compose(a, b), ts.compose(a2, b), self.hyp_rs.as_slice(), n)];
                if let Some(p) = both(self.prod(a, b), self.prod(a2, b)) {
                    pairs.push((p.0, p.1, &self.hyp_rs, n.saturating_sub(1)));
                }
                if let Some(p) = both(self.prod(b, a), self.prod(b, a2)) {
                    pairs.push((p.0, p.1, &self.concl_rs, n));
                }
                pairs.push((ts.compose(b, a), ts.compose(b, a2), &self.concl_rs, n.saturating_sub(1)));
                Verdict::from_bool(pairs.iter().all(|(x, y, rs, k)| !self.refute(x, y, *g, rs, *k)))
            }
            (EquivMonotone, [a, b], [g, d]) if g <= d => {
                if self.hyp(a, b, *d) {
                    Verdict::from_bool(self.hyp(a, b, *g))
                } else {
                    Verdict::Vacuous
                }
            }
            (EquivAgreement, [a, b], [g, d]) => {
                if !self.hyp(a, b, *g) {
                    return Verdict::Vacuous;
                }
                match ts.apply(a, *d) {
                    Some(v) if v < *g => self.val_eq(Some(v), ts.apply(b, *d)),
                    Some(_) => Verdict::Vacuous,
                    None => Verdict::Skip(Reason::PrefixTooShort),
                }
            }
            (EquivCrit, [a], []) if !a.is_id() => match ts.crit(a) {
                Some(c) => Verdict::from_bool(!self.refute(a, &Fc::id(), c, &self.hyp_rs, self.bounds.ctx_len)),
                None => Verdict::Skip(Reason::NoCriticalPoint),
            },
            (EquivCoherence, [a, b, c], [g]) => {
                if !self.hyp(a, b, *g) {
                    return Verdict::Vacuous;
                }
                let Some(cg) = ts.apply(c, *g) else {
                    return Verdict::Skip(Reason::PrefixTooShort);
                };
                match both(self.prod(c, a), self.prod(c, b)) {
                    Some((ca, cb)) => {
                        Verdict::from_bool(!self.refute(&ca, &cb, cg, &self.concl_rs, self.bounds.ctx_len))
                    }
                    None => Verdict::Skip(Reason::MissingOp),
                }
            }
            (FixedUnderSmallImage | FixedUnderSmallValue, [a, bs @ ..], [g]) if !a.is_id() => {
                let chain = |start: Fc| bs.iter().try_fold(start, |x, b| self.prod(&x, b));
                let inner = match bs.split_first() {
                    None => Some(Fc::id()),
                    Some((b1, rest)) => rest.iter().try_fold(b1.clone(), |x, b| self.prod(&x, b)),
                };
                let (Some(inner), Some(outer)) = (inner, chain(a.clone())) else {
                    return Verdict::Skip(Reason::MissingOp);
                };
                let (Some(x), Some(y)) = (ts.apply(&inner, *g), ts.apply(&outer, *g)) else {
                    return Verdict::Skip(Reason::PrefixTooShort);
                };
                let pivot = if axiom == FixedUnderSmallImage { x } else { y };
                match self.crit_exceeds(a, pivot) {
                    Some(true) => Verdict::from_bool(x == y),
                    Some(false) => Verdict::Vacuous,
                    None => Verdict::Skip(Reason::NoCriticalPoint),
                }
            }
            (LeastMoved, [a], [x]) if !a.is_id() => match ts.crit(a) {
                Some(c) if *x < c => self.val_eq(ts.apply(a, *x), Some(*x)),
                Some(c) if *x == c => match ts.apply(a, c) {
                    Some(v) => Verdict::from_bool(v > c),
                    None => Verdict::Skip(Reason::PrefixTooShort),
                },
                Some(_) => Verdict::Vacuous,
                None => Verdict::Skip(Reason::NoCriticalPoint),
            },
            (CritSequenceDominates | MovesAboveCrit | CritSequenceCofinal, [a], [x]) if !a.is_id() => {
                if ts.generator.is_none() {
                    return Verdict::Skip(Reason::NoGenerator);
                }
                if !ts.is_generated(a) {
                    return Verdict::Vacuous;
                }
                let Some(seq) = self.crit_seq(a) else {
                    return Verdict::Skip(Reason::NoCriticalPoint);
                };
                match axiom {
                    CritSequenceDominates => {
                        let m = *x as usize;
                        match both(seq.values.get(m), self.kappa.get(m)) {
                            Some((al, ka)) => Verdict::from_bool(al >= ka),
                            None => Verdict::Skip(Reason::PrefixTooShort),
                        }
                    }
                    MovesAboveCrit => {
                        if *x < seq.values[0] {
                            return Verdict::Vacuous;
                        }
                        match ts.apply(a, *x) {
                            Some(v) => Verdict::from_bool(v > *x),
                            None => Verdict::Skip(Reason::PrefixTooShort),
                        }
                    }
                    _ => {
                        if seq.values.iter().any(|v| v >= x) {
                            Verdict::Holds
                        } else {
                            Verdict::Skip(Reason::PrefixTooShort)
                        }
                    }
                }
            }
            (DepthMapsKappa, [a], [n]) => {
                if ts.generator.is_none() {
                    return Verdict::Skip(Reason::NoGenerator);
                }
                let d = match a.parts() {
                    [p] => ts.depth(*p),
                    _ => None,
                };
                match d {
                    Some(d) if u64::from(d) <= *n => {
                        let n = *n as usize;
                        match both(self.kappa.get(n), self.kappa.get(n + 1)) {
                            Some((&k, &k1)) => self.val_eq(ts.apply(a, k), Some(k1)),
                            None => Verdict::Skip(Reason::PrefixTooShort),
                        }
                    }
                    _ => Verdict::Vacuous,
                }
            }
            _ => Verdict::Vacuous,
        }
    }
}

/// Bounded check of the two-sorted axioms, then the derived facts about
/// small critical points, least moved points, critical sequences and the
/// `κ` sequence of the generator. Instances run shortest embedding first,
/// then lexicographically, then by ordinal.
pub fn check_two_sorted(ts: &TwoSorted, bounds: &TwoSortedBounds) -> AxiomReport {
    use Axiom::*;
    let ch = Checker::new(ts, bounds);
    let all = ts.elements(bounds.max_parts.min(ts.max_parts));
    let eqs = ts.elements(bounds.equiv_parts.min(ts.max_parts));
    let ords = ts.ordinals.clone();
    let lim = bounds.skip_limit;
    let mut entries = Vec::new();

    let mut run = |axiom: Axiom, instances: &mut dyn Iterator<Item = (Vec<Fc>, Vec<u64>)>| {
        let mut t = Tally::new(axiom, lim);
        for (e, o) in instances {
            t.record(ch.eval(axiom, &e, &o), || ts.to_instance(&e, o.clone()));
            if t.done() {
                break;
            }
        }
        entries.push(t.finish());
    };

    let pairs = |xs: &[Fc], ys: &[Fc]| -> Vec<(Fc, Fc)> {
        xs.iter()
            .flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone())))
            .collect()
    };
    let all2 = pairs(&all, &all);
    let triples = |xs: &[Fc]| -> Vec<Vec<Fc>> {
        let mut out = Vec::new();
        for a in xs {
            for b in xs {
                for c in xs {
                    out.push(vec![a.clone(), b.clone(), c.clone()]);
                }
            }
        }
        out
    };
    let all3 = triples(&all);
    let with_ords = |xs: &[Vec<Fc>], k: usize| -> Vec<(Vec<Fc>, Vec<u64>)> {
        let mut out = Vec::new();
        for x in xs {
            match k {
                0 => out.push((x.clone(), vec![])),
                1 => out.extend(ords.iter().map(|&g| (x.clone(), vec![g]))),
                _ => {
                    for &g in &ords {
                        for &d in &ords {
                            out.push((x.clone(), vec![g, d]));
                        }
                    }
                }
            }
        }
        out
    };
    let singles: Vec<Vec<Fc>> = all.iter().map(|a| vec![a.clone()]).collect();
    let doubles: Vec<Vec<Fc>> = all2.iter().map(|(a, b)| vec![a.clone(), b.clone()]).collect();

    // First list: laws of the given functions, now over all compositions.
    run(Ld, &mut all3.iter().map(|e| (e.clone(), vec![])));
    run(
        Monotone,
        &mut with_ords(&singles, 2).into_iter().filter(|(_, o)| o[0] < o[1]),
    );
    run(Inflationary, &mut with_ords(&singles, 1).into_iter());
    run(
        CritMoves,
        &mut with_ords(&singles, 0).into_iter().filter(|(e, _)| !e[0].is_id()),
    );
    run(
        FixedBelowCrit,
        &mut with_ords(&singles, 1).into_iter().filter(|(e, _)| !e[0].is_id()),
    );
    run(
        Crit,
        &mut with_ords(&doubles, 0).into_iter().filter(|(e, _)| !e[1].is_id()),
    );
    run(Coherence, &mut with_ords(&doubles, 1).into_iter());

    // Second list: the composition laws.
    run(SigmaAssoc, &mut all3.iter().map(|e| (e.clone(), vec![])));
    run(SigmaComposeApply, &mut all3.iter().map(|e| (e.clone(), vec![])));
    run(SigmaApplyCompose, &mut all3.iter().map(|e| (e.clone(), vec![])));
    run(SigmaExchange, &mut with_ords(&doubles, 0).into_iter());
    run(ComposeApplication, &mut with_ords(&doubles, 1).into_iter());
    run(
        ComposeCrit,
        &mut with_ords(&doubles, 0)
            .into_iter()
            .filter(|(e, _)| !e[0].is_id() && !e[1].is_id()),
    );
    run(Identity, &mut with_ords(&singles, 1).into_iter());

    // Remaining axioms of the two-sorted structure.
    run(LinearOrder, &mut with_ords(&[vec![]], 2).into_iter());
    let eq2: Vec<Vec<Fc>> = pairs(&eqs, &eqs).into_iter().map(|(a, b)| vec![a, b]).collect();
    let eq3 = triples(&eqs);
    run(EquivTransitive, &mut with_ords(&eq3, 1).into_iter());
    run(EquivRespects, &mut with_ords(&eq3, 1).into_iter());
    run(
        EquivMonotone,
        &mut with_ords(&eq2, 2).into_iter().filter(|(_, o)| o[0] <= o[1]),
    );
    run(EquivAgreement, &mut with_ords(&eq2, 2).into_iter());
    run(
        EquivCrit,
        &mut with_ords(&singles, 0).into_iter().filter(|(e, _)| !e[0].is_id()),
    );
    run(EquivCoherence, &mut with_ords(&eq3, 1).into_iter());

    // Points below a critical point stay fixed through contexts.
    let mut chains: Vec<Vec<Fc>> = vec![vec![]];
    let mut layer: Vec<Vec<Fc>> = vec![vec![]];
    for _ in 0..bounds.ctx_len {
        let next: Vec<Vec<Fc>> = layer
            .iter()
            .flat_map(|p| {
                ch.contexts.iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c.clone());
                    q
                })
            })
            .collect();
        chains.extend(next.iter().cloned());
        layer = next;
    }
    let lemma: Vec<Vec<Fc>> = all
        .iter()
        .filter(|a| !a.is_id())
        .flat_map(|a| {
            chains.iter().map(move |bs| {
                let mut e = vec![a.clone()];
                e.extend(bs.iter().cloned());
                e
            })
        })
        .collect();
    run(FixedUnderSmallImage, &mut with_ords(&lemma, 1).into_iter());
    run(FixedUnderSmallValue, &mut with_ords(&lemma, 1).into_iter());

    let nonid: Vec<Vec<Fc>> = singles.iter().filter(|e| !e[0].is_id()).cloned().collect();
    run(LeastMoved, &mut with_ords(&nonid, 1).into_iter());
    // Without a usable κ sequence one instance per element still reports why.
    let steps: Vec<u64> = (0..ch.kappa.len().max(1) as u64).collect();
    run(
        CritSequenceDominates,
        &mut nonid
            .iter()
            .flat_map(|e| steps.iter().map(move |&m| (e.clone(), vec![m]))),
    );
    run(MovesAboveCrit, &mut with_ords(&nonid, 1).into_iter());
    run(CritSequenceCofinal, &mut with_ords(&nonid, 1).into_iter());
    let names: Vec<Vec<Fc>> = (0..ts.names.len() as u32).map(|p| vec![Fc::new(vec![p])]).collect();
    let levels: Vec<u64> = (0..ch.kappa.len().saturating_sub(1).max(1) as u64).collect();
    run(
        DepthMapsKappa,
        &mut names
            .iter()
            .flat_map(|e| levels.iter().map(move |&n| (e.clone(), vec![n]))),
    );

    AxiomReport { entries }
}
