//! Independent oracles. Nothing here goes through the library's table
//! builder or rewriting engine.
#![allow(dead_code)]

pub mod embed;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use laver_core::term::Term;
use rand::Rng;

/// Full `2^n x 2^n` table on `{1, …, 2^n}` from the three defining rules:
/// `2^n * b = b`, `a * 1 = a + 1`, `a * (b + 1) = (a * b) * (a + 1)`.
/// Rows are filled for descending `a`; each entry reads a row already done.
pub struct NaiveTable {
    pub n: u32,
    size: usize,
    // one-based, index [a][b], a and b in 1..=size
    cells: Vec<Vec<u32>>,
}

impl NaiveTable {
    pub fn new(n: u32) -> Self {
        let size = 1usize << n;
        let mut cells = vec![vec![0u32; size + 1]; size + 1];
        for (b, cell) in cells[size].iter_mut().enumerate().skip(1) {
            *cell = b as u32;
        }
        for a in (1..size).rev() {
            cells[a][1] = a as u32 + 1;
            for b in 1..size {
                let ab = cells[a][b] as usize;
                assert!(ab > a, "a * b must exceed a below the top row");
                cells[a][b + 1] = cells[ab][a + 1];
            }
        }
        NaiveTable { n, size, cells }
    }

    pub fn size(&self) -> u32 {
        self.size as u32
    }

    /// Product on `{1, …, 2^n}`.
    pub fn star_one(&self, a: u32, b: u32) -> u32 {
        self.cells[a as usize][b as usize]
    }

    /// Product on `{0, …, 2^n - 1}`, where `0` stands for `2^n`.
    pub fn star(&self, a: u32, b: u32) -> u32 {
        let up = |x: u32| if x == 0 { self.size as u32 } else { x };
        self.star_one(up(a), up(b)) % self.size as u32
    }

    /// `a o b = (a * (b + 1)) - 1` in the zero convention.
    pub fn compose(&self, a: u32, b: u32) -> u32 {
        let m = self.size as u32;
        (self.star(a, (b + 1) % m) + m - 1) % m
    }

    /// Least `p` with `a * p = 2^n`.
    pub fn period(&self, a: u32) -> u32 {
        let a = if a == 0 { self.size } else { a as usize };
        (1..=self.size)
            .find(|&b| self.cells[a][b] as usize == self.size)
            .unwrap() as u32
    }

    /// `a,b,a*b` lines for every pair, with a header.
    pub fn csv(&self) -> String {
        let m = self.size as u32;
        let mut out = String::from("a,b,product\n");
        for a in 0..m {
            for b in 0..m {
                out.push_str(&format!("{a},{b},{}\n", self.star(a, b)));
            }
        }
        out
    }
}

/// Word over `1` and `*` kept as an owned tree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum W {
    One,
    App(Box<W>, Box<W>),
}

impl W {
    pub fn app(a: W, b: W) -> W {
        W::App(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> usize {
        match self {
            W::One => 1,
            W::App(a, b) => a.leaves() + b.leaves(),
        }
    }

    pub fn from_term(t: &Term) -> W {
        match t.children() {
            None => {
                assert!(t.is_one(), "only words in 1 and * are supported");
                W::One
            }
            Some((a, b)) => W::app(W::from_term(a), W::from_term(b)),
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            W::One => Term::one(),
            W::App(a, b) => Term::apply(&a.to_term(), &b.to_term()),
        }
    }

    /// Every word reachable by one use of `x(yz) = (xy)(xz)` in either
    /// direction at any position.
    pub fn neighbours(&self) -> Vec<W> {
        let mut out = Vec::new();
        if let W::App(x, r) = self {
            if let W::App(y, z) = r.as_ref() {
                out.push(W::app(
                    W::app((**x).clone(), (**y).clone()),
                    W::app((**x).clone(), (**z).clone()),
                ));
            }
            if let (W::App(x1, y), W::App(x2, z)) = (x.as_ref(), r.as_ref()) {
                if x1 == x2 {
                    out.push(W::app((**x1).clone(), W::app((**y).clone(), (**z).clone())));
                }
            }
            for l in x.neighbours() {
                out.push(W::app(l, (**r).clone()));
            }
            for rr in r.neighbours() {
                out.push(W::app((**x).clone(), rr));
            }
        }
        out
    }

    /// Proper left subterms: the heads of the left spine.
    pub fn left_prefixes(&self) -> Vec<W> {
        let mut out = Vec::new();
        let mut t = self;
        while let W::App(l, _) = t {
            out.push((**l).clone());
            t = l;
        }
        out
    }

    /// Value in the zero-convention table.
    pub fn eval(&self, t: &NaiveTable) -> u32 {
        match self {
            W::One => 1 % t.size(),
            W::App(a, b) => t.star(a.eval(t), b.eval(t)),
        }
    }
}

impl fmt::Debug for W {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            W::One => f.write_str("1"),
            W::App(a, b) => write!(f, "({a:?}*{b:?})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equiv,
    Less,
    Greater,
    Unknown,
}

/// One side of the search: a breadth-first closure under both rewriting
/// directions, restricted to words with at most `max_leaves` leaves.
struct Side {
    seen: HashSet<W>,
    queue: VecDeque<W>,
    prefixes: HashSet<W>,
}

impl Side {
    fn new(w: &W) -> Self {
        let mut s = Side {
            seen: HashSet::new(),
            queue: VecDeque::new(),
            prefixes: HashSet::new(),
        };
        s.add(w.clone());
        s
    }

    fn add(&mut self, w: W) -> bool {
        if self.seen.contains(&w) {
            return false;
        }
        self.prefixes.extend(w.left_prefixes());
        self.seen.insert(w.clone());
        self.queue.push_back(w);
        true
    }

    fn layer(&mut self, max_leaves: usize) {
        let n = self.queue.len();
        for _ in 0..n {
            let w = self.queue.pop_front().unwrap();
            for v in w.neighbours() {
                if v.leaves() <= max_leaves {
                    self.add(v);
                }
            }
        }
    }
}

fn decide(a: &Side, b: &Side) -> Option<Verdict> {
    let (small, large) = if a.seen.len() <= b.seen.len() { (a, b) } else { (b, a) };
    if small.seen.iter().any(|w| large.seen.contains(w)) {
        return Some(Verdict::Equiv);
    }
    if a.seen.iter().any(|w| b.prefixes.contains(w)) {
        return Some(Verdict::Less);
    }
    if b.seen.iter().any(|w| a.prefixes.contains(w)) {
        return Some(Verdict::Greater);
    }
    None
}

/// Grows both closures a layer at a time, alternating sides, until they
/// meet or one of them shows the other's left subterm.
pub fn bfs_compare(a: &W, b: &W, max_leaves: usize, max_states: usize) -> Verdict {
    let mut sa = Side::new(a);
    let mut sb = Side::new(b);
    let mut turn = 0;
    loop {
        if let Some(v) = decide(&sa, &sb) {
            return v;
        }
        if sa.seen.len() + sb.seen.len() > max_states {
            return Verdict::Unknown;
        }
        if sa.queue.is_empty() && sb.queue.is_empty() {
            return Verdict::Unknown;
        }
        if (turn % 2 == 0 && !sa.queue.is_empty()) || sb.queue.is_empty() {
            sa.layer(max_leaves);
        } else {
            sb.layer(max_leaves);
        }
        turn += 1;
    }
}

/// Every word with exactly `k` leaves.
pub fn words_with_leaves(k: usize) -> Vec<W> {
    if k == 1 {
        return vec![W::One];
    }
    let mut out = Vec::new();
    for i in 1..k {
        for l in words_with_leaves(i) {
            for r in words_with_leaves(k - i) {
                out.push(W::app(l.clone(), r));
            }
        }
    }
    out
}

/// Every word with at most `k` leaves, smallest first.
pub fn words_up_to(k: usize) -> Vec<W> {
    (1..=k).flat_map(words_with_leaves).collect()
}

/// Uniformly shaped random word with between 1 and `max_leaves` leaves.
pub fn random_word<R: Rng>(rng: &mut R, max_leaves: usize) -> W {
    let n = rng.gen_range(1..=max_leaves);
    random_word_exact(rng, n)
}

pub fn random_word_exact<R: Rng>(rng: &mut R, leaves: usize) -> W {
    if leaves == 1 {
        return W::One;
    }
    let split = rng.gen_range(1..leaves);
    W::app(random_word_exact(rng, split), random_word_exact(rng, leaves - split))
}

/// Table of `1`'s periods from the naive oracle, `n = 0..=max`.
pub fn naive_periods_of_one(max: u32) -> Vec<u32> {
    (0..=max).map(|n| NaiveTable::new(n).period(1 % (1 << n))).collect()
}
