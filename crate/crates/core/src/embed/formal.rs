//! Formal compositions `a_1 o … o a_n` over a partial magma, identified
//! under `a o b = ab o a`.

use std::collections::{HashSet, VecDeque};

use crate::laver::LaverTable;

/// A partial `·` on elements `0..` that also act on naturals.
pub trait PartialMagma {
    fn product(&self, a: u32, b: u32) -> Option<u32>;
    /// Every `(x, y)` with `x·y = c`.
    fn factors(&self, c: u32) -> Vec<(u32, u32)>;
    /// `a(x)`, or `None` past the known part of `a`.
    fn apply(&self, a: u32, x: u64) -> Option<u64>;
    /// `None` when `a` moves nothing within the known part.
    fn crit(&self, a: u32) -> Option<u64>;
}

/// `A_n` acting on itself by left multiplication.
pub struct TableMagma<'a>(pub &'a LaverTable);

impl PartialMagma for TableMagma<'_> {
    fn product(&self, a: u32, b: u32) -> Option<u32> {
        Some(self.0.apply_raw(a, b))
    }

    fn factors(&self, c: u32) -> Vec<(u32, u32)> {
        let n = self.0.size() as u32;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.0.apply_raw(x, y) == c)
            .collect()
    }

    fn apply(&self, a: u32, x: u64) -> Option<u64> {
        (x < self.0.size()).then(|| self.0.apply_raw(a, x as u32) as u64)
    }

    fn crit(&self, _a: u32) -> Option<u64> {
        None
    }
}

/// `(a_1 o … o a_n)·(b_1 o … o b_m)` has parts `a_1(a_2(…(a_n b_j)…))`;
/// the empty composition is `id`.
pub fn formal_product<M: PartialMagma + ?Sized>(m: &M, a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    b.iter()
        .map(|&bj| a.iter().rev().try_fold(bj, |x, &ai| m.product(ai, x)))
        .collect()
}

pub fn formal_compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out
}

/// `a_1(a_2(…a_n(x)…))`.
pub fn formal_apply<M: PartialMagma + ?Sized>(m: &M, a: &[u32], x: u64) -> Option<u64> {
    a.iter().rev().try_fold(x, |x, &ai| m.apply(ai, x))
}

/// Minimum of the critical points of the parts; `None` for `id` or when
/// no part moves anything within the known range.
pub fn formal_crit<M: PartialMagma + ?Sized>(m: &M, a: &[u32]) -> Option<u64> {
    a.iter().filter_map(|&ai| m.crit(ai)).min()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equality {
    Equal,
    Distinct,
    /// The search budget ran out first.
    Unknown,
}

/// Breadth-first search over `x o y <-> xy o x` replacements. Lengths are
/// invariant, so unequal lengths are distinct at once.
pub fn formal_equal<M: PartialMagma + ?Sized>(m: &M, a: &[u32], b: &[u32], max_states: usize) -> Equality {
    if a == b {
        return Equality::Equal;
    }
    if a.len() != b.len() {
        return Equality::Distinct;
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::from([a.to_vec()]);
    let mut queue = VecDeque::from([a.to_vec()]);
    while let Some(s) = queue.pop_front() {
        for i in 0..s.len().saturating_sub(1) {
            let (x, y) = (s[i], s[i + 1]);
            let mut next = Vec::new();
            if let Some(z) = m.product(x, y) {
                next.push((z, x));
            }
            // s[i] = uv and s[i+1] = u  ->  u, v
            for (u, v) in m.factors(x) {
                if u == y {
                    next.push((u, v));
                }
            }
            for (p, q) in next {
                let mut t = s.clone();
                t[i] = p;
                t[i + 1] = q;
                if t == b {
                    return Equality::Equal;
                }
                if seen.contains(&t) {
                    continue;
                }
                if seen.len() >= max_states {
                    return Equality::Unknown;
                }
                seen.insert(t.clone());
                queue.push_back(t);
            }
        }
    }
    Equality::Distinct
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laver::{build_table, BuildLimits};

    #[test]
    fn p2_cross_check() {
        let t = build_table(2, BuildLimits::default()).unwrap();
        let m = TableMagma(&t);
        // Under a ↦ a*1 the composition [a, b] goes to a*(b*1) = (a o b)*1.
        for a in 0..4u32 {
            for b in 0..4u32 {
                let v = formal_apply(&m, &[a, b], 1).unwrap();
                assert_eq!(v, t.apply_raw(t.compose_raw(a, b), 1) as u64);
            }
        }
        assert_eq!(t.compose_raw(1, 1), 3);
        assert_eq!(formal_apply(&m, &[1, 1], 1), Some(0));
        assert_eq!(t.apply_raw(3, 1), 0);
    }

    #[test]
    fn exchange_is_an_identification() {
        let t = build_table(3, BuildLimits::default()).unwrap();
        let m = TableMagma(&t);
        for a in 0..8u32 {
            for b in 0..8u32 {
                let ab = t.apply_raw(a, b);
                assert_eq!(formal_equal(&m, &[a, b], &[ab, a], 10_000), Equality::Equal);
                // Identified compositions act alike.
                for x in 0..8 {
                    assert_eq!(formal_apply(&m, &[a, b], x), formal_apply(&m, &[ab, a], x));
                }
            }
        }
        assert_eq!(formal_equal(&m, &[1], &[1, 1], 100), Equality::Distinct);
    }

    #[test]
    fn budget_gives_unknown() {
        let t = build_table(3, BuildLimits::default()).unwrap();
        let m = TableMagma(&t);
        let a = [1, 2, 3];
        let target = [7, 7, 7];
        assert_eq!(formal_equal(&m, &a, &target, 1), Equality::Unknown);
    }

    #[test]
    fn products() {
        let t = build_table(2, BuildLimits::default()).unwrap();
        let m = TableMagma(&t);
        assert_eq!(formal_product(&m, &[], &[1, 2]), Some(vec![1, 2]));
        assert_eq!(formal_product(&m, &[1, 2], &[]), Some(vec![]));
        let x = t.apply_raw(1, t.apply_raw(2, 3));
        assert_eq!(formal_product(&m, &[1, 2], &[3]), Some(vec![x]));
        assert_eq!(formal_compose(&[1], &[2, 3]), vec![1, 2, 3]);
    }
}
