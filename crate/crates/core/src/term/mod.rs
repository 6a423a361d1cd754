//! Words over one generator built from `*` (written `·` in prose) and `o`,
//! with an optional adjoined `0`.

mod parse;
mod rewrite;
mod witness;

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use parse::{parse_term, ParseError, MAX_INTEGER_LITERAL};
pub use rewrite::{ld_redexes, ld_step, Derivation, Direction, ReplayError, RewriteError, Step};
pub use witness::{
    lift_derivation, lift_derivation_with, otimes, partial, witness_absorb, witness_absorb_with, witness_expand,
    witness_expand_with, WitnessError,
};

use crate::fuel::Fuel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Right,
}

/// Path from the root; empty means the root itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<Dir>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, d: Dir) -> Self {
        let mut p = self.0.clone();
        p.push(d);
        Position(p)
    }

    /// `prefix ++ self`.
    pub fn under(&self, prefix: &[Dir]) -> Self {
        let mut p = Vec::with_capacity(prefix.len() + self.0.len());
        p.extend_from_slice(prefix);
        p.extend_from_slice(&self.0);
        Position(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for d in &self.0 {
            f.write_str(match d {
                Dir::Left => "L",
                Dir::Right => "R",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum Shape {
    One,
    Zero,
    Apply(Term, Term),
    Compose(Term, Term),
}

#[derive(Debug)]
struct Node {
    shape: Shape,
    hash: u64,
    leaves: u64,
    depth: u32,
    has_zero: bool,
    has_compose: bool,
}

/// Immutable term with structural sharing. Cloning is O(1).
#[derive(Clone)]
pub struct Term(Arc<Node>);

const HASH_ONE: u64 = 0x243f_6a88_85a3_08d3;
const HASH_ZERO: u64 = 0x1319_8a2e_0370_7344;
const TAG_APPLY: u64 = 0xa409_3822_299f_31d0;
const TAG_COMPOSE: u64 = 0x082e_fa98_ec4e_6c89;

fn mix(tag: u64, l: u64, r: u64) -> u64 {
    let mut z = tag ^ l.rotate_left(17) ^ r.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

thread_local! {
    static ONE: Term = Term::leaf(Shape::One, HASH_ONE);
    static ZERO: Term = Term::leaf(Shape::Zero, HASH_ZERO);
}

impl Term {
    fn leaf(shape: Shape, hash: u64) -> Term {
        let has_zero = matches!(shape, Shape::Zero);
        Term(Arc::new(Node {
            shape,
            hash,
            leaves: 1,
            depth: 0,
            has_zero,
            has_compose: false,
        }))
    }

    fn node(shape: Shape) -> Term {
        let (l, r, tag, compose) = match &shape {
            Shape::Apply(l, r) => (l, r, TAG_APPLY, false),
            Shape::Compose(l, r) => (l, r, TAG_COMPOSE, true),
            _ => unreachable!(),
        };
        let (ln, rn) = (&*l.0, &*r.0);
        let node = Node {
            hash: mix(tag, ln.hash, rn.hash),
            leaves: ln.leaves.saturating_add(rn.leaves),
            depth: ln.depth.max(rn.depth) + 1,
            has_zero: ln.has_zero || rn.has_zero,
            has_compose: compose || ln.has_compose || rn.has_compose,
            shape,
        };
        Term(Arc::new(node))
    }

    pub fn one() -> Term {
        ONE.with(Term::clone)
    }

    pub fn zero() -> Term {
        ZERO.with(Term::clone)
    }

    /// `a · b`.
    pub fn apply(a: &Term, b: &Term) -> Term {
        Term::node(Shape::Apply(a.clone(), b.clone()))
    }

    /// `a o b`.
    pub fn compose(a: &Term, b: &Term) -> Term {
        Term::node(Shape::Compose(a.clone(), b.clone()))
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0.shape, Shape::One)
    }

    pub fn as_apply(&self) -> Option<(&Term, &Term)> {
        match &self.0.shape {
            Shape::Apply(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn children(&self) -> Option<(&Term, &Term)> {
        match &self.0.shape {
            Shape::Apply(l, r) | Shape::Compose(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Leaf count, saturating at `u64::MAX`.
    pub fn leaves(&self) -> u64 {
        self.0.leaves
    }

    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    pub fn contains_zero(&self) -> bool {
        self.0.has_zero
    }

    pub fn contains_compose(&self) -> bool {
        self.0.has_compose
    }

    /// No `o` node and no `0` leaf.
    pub fn is_a_term(&self) -> bool {
        !self.0.has_zero && !self.0.has_compose
    }

    pub fn ptr_eq(a: &Term, b: &Term) -> bool {
        Arc::ptr_eq(&a.0, &b.0)
    }

    /// Address used as a memo key; valid while the term is alive.
    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// `u_0 = 1`, `u_{k+1} = 1 · u_k`.
    pub fn herringbone(k: u32) -> Term {
        let one = Term::one();
        let mut t = one.clone();
        for _ in 0..k {
            t = Term::apply(&one, &t);
        }
        t
    }

    /// `v_0 = 1`, `v_{k+1} = v_k · v_k`.
    pub fn full_word(k: u32) -> Term {
        let mut t = Term::one();
        for _ in 0..k {
            t = Term::apply(&t, &t);
        }
        t
    }

    /// The left chain `1·1·…·1` with `k` leaves; `k = 0` is rejected.
    pub fn integer_word(k: u64) -> Option<Term> {
        if k == 0 {
            return None;
        }
        let one = Term::one();
        let mut t = one.clone();
        for _ in 1..k {
            t = Term::apply(&t, &one);
        }
        Some(t)
    }

    /// Left spine `a c_1 … c_k` split into `(a, [c_1, …, c_k])` for the
    /// innermost non-`Apply` head.
    pub fn left_spine(&self) -> (Term, Vec<Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Some((l, r)) = t.as_apply() {
            args.push(r.clone());
            t = l;
        }
        args.reverse();
        (t.clone(), args)
    }

    pub fn subterm(&self, pos: &[Dir]) -> Option<&Term> {
        let mut t = self;
        for d in pos {
            let (l, r) = t.children()?;
            t = match d {
                Dir::Left => l,
                Dir::Right => r,
            };
        }
        Some(t)
    }

    /// Replaces the subterm at `pos`, sharing everything off the path.
    pub fn replace(&self, pos: &[Dir], new: Term) -> Option<Term> {
        let mut path: Vec<&Term> = Vec::with_capacity(pos.len());
        let mut t = self;
        for d in pos {
            path.push(t);
            let (l, r) = t.children()?;
            t = match d {
                Dir::Left => l,
                Dir::Right => r,
            };
        }
        let mut acc = new;
        for (node, d) in path.into_iter().zip(pos).rev() {
            let (l, r) = node.children().unwrap();
            let (l, r) = match d {
                Dir::Left => (&acc, r),
                Dir::Right => (l, &acc),
            };
            acc = match node.shape() {
                Shape::Apply(..) => Term::apply(l, r),
                _ => Term::compose(l, r),
            };
        }
        Some(acc)
    }

    /// Paths to all leaves, left to right. Charged one unit of fuel per leaf.
    pub(crate) fn leaf_paths(&self, fuel: &mut Fuel) -> Result<Vec<Vec<Dir>>, crate::fuel::OutOfFuel> {
        fuel.check(self.leaves())?;
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((t, path)) = stack.pop() {
            match t.children() {
                Some((l, r)) => {
                    let mut rp = path.clone();
                    rp.push(Dir::Right);
                    let mut lp = path;
                    lp.push(Dir::Left);
                    stack.push((r, rp));
                    stack.push((l, lp));
                }
                None => {
                    fuel.spend(1)?;
                    out.push(path);
                }
            }
        }
        Ok(out)
    }

    /// Bottom-up fold evaluated once per distinct shared node.
    pub fn fold<T: Clone, E>(
        &self,
        mut leaf: impl FnMut(&Shape) -> Result<T, E>,
        mut node: impl FnMut(&Shape, T, T) -> Result<T, E>,
    ) -> Result<T, E> {
        use std::collections::HashMap;
        let mut memo: HashMap<usize, T> = HashMap::new();
        let mut stack: Vec<(&Term, bool)> = vec![(self, false)];
        while let Some((t, expanded)) = stack.pop() {
            if memo.contains_key(&t.addr()) {
                continue;
            }
            match t.children() {
                None => {
                    let v = leaf(t.shape())?;
                    memo.insert(t.addr(), v);
                }
                Some((l, r)) if expanded => {
                    let lv = memo[&l.addr()].clone();
                    let rv = memo[&r.addr()].clone();
                    let v = node(t.shape(), lv, rv)?;
                    memo.insert(t.addr(), v);
                }
                Some((l, r)) => {
                    stack.push((t, true));
                    stack.push((r, false));
                    stack.push((l, false));
                }
            }
        }
        Ok(memo.remove(&self.addr()).unwrap())
    }
}

impl Drop for Term {
    fn drop(&mut self) {
        // Deep chains would overflow the stack under recursive drop.
        let mut pending: Vec<Term> = Vec::new();
        if let Some(node) = Arc::get_mut(&mut self.0) {
            take_children(&mut node.shape, &mut pending);
        }
        while let Some(mut t) = pending.pop() {
            if let Some(node) = Arc::get_mut(&mut t.0) {
                take_children(&mut node.shape, &mut pending);
            }
        }
    }
}

fn take_children(shape: &mut Shape, out: &mut Vec<Term>) {
    if matches!(shape, Shape::Apply(..) | Shape::Compose(..)) {
        // Shape::One is a fresh placeholder, not the shared leaf.
        match std::mem::replace(shape, Shape::One) {
            Shape::Apply(l, r) | Shape::Compose(l, r) => {
                out.push(l);
                out.push(r);
            }
            _ => unreachable!(),
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        // Pairs already compared are remembered once the walk gets long, so
        // separately built shared terms compare in time linear in their nodes.
        const REMEMBER_AFTER: usize = 256;
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut visits = 0usize;
        let mut stack = vec![(self, other)];
        while let Some((a, b)) = stack.pop() {
            if Term::ptr_eq(a, b) {
                continue;
            }
            visits += 1;
            if visits > REMEMBER_AFTER && !seen.insert((a.addr(), b.addr())) {
                continue;
            }
            let (na, nb) = (&*a.0, &*b.0);
            if na.hash != nb.hash || na.leaves != nb.leaves || na.depth != nb.depth {
                return false;
            }
            match (&na.shape, &nb.shape) {
                (Shape::One, Shape::One) | (Shape::Zero, Shape::Zero) => {}
                (Shape::Apply(al, ar), Shape::Apply(bl, br)) | (Shape::Compose(al, ar), Shape::Compose(bl, br)) => {
                    stack.push((ar, br));
                    stack.push((al, bl));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Fully parenthesized: `1`, `0`, `(a*b)`, `(a o b)`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Task<'a> {
            Visit(&'a Term),
            Emit(&'static str),
        }
        let mut stack = vec![Task::Visit(self)];
        while let Some(task) = stack.pop() {
            match task {
                Task::Emit(s) => f.write_str(s)?,
                Task::Visit(t) => match t.shape() {
                    Shape::One => f.write_str("1")?,
                    Shape::Zero => f.write_str("0")?,
                    Shape::Apply(l, r) | Shape::Compose(l, r) => {
                        let op = if matches!(t.shape(), Shape::Apply(..)) {
                            "*"
                        } else {
                            " o "
                        };
                        stack.push(Task::Emit(")"));
                        stack.push(Task::Visit(r));
                        stack.push(Task::Emit(op));
                        stack.push(Task::Visit(l));
                        f.write_str("(")?;
                    }
                },
            }
        }
        Ok(())
    }
}
