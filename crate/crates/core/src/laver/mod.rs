//! The finite left-distributive algebras `A_n = P_n = {0, .., 2^n - 1}`.
//!
//! Elements use the zero convention: `0` plays the role of the top element
//! `2^n`, so `a * 1 = a + 1 mod 2^n` and reduction modulo `2^n` is the
//! projection from level `n + 1` to level `n`.
//!
//! Each row `a * 1, a * 2, ...` is periodic with a power-of-two period and is
//! strictly increasing inside one period until it reaches `0`. Only one
//! period per row is stored, and row `0` (the identity row) is never
//! materialized.

mod cache;
mod file;
mod laws;

pub use cache::TableCache;
pub use file::{read_table, write_products_csv, write_table};
pub use laws::{verify_law, verify_law_with_ceiling, Law, LawReport, SampleBudget, DEFAULT_EXHAUSTIVE_CEILING};

use thiserror::Error;

/// Default byte budget for table construction.
pub const DEFAULT_MEMORY_CAP: u64 = 1 << 30;
/// Highest level built without an explicit override.
pub const DEFAULT_MAX_LEVEL: u32 = 16;
/// Elements are stored as `u32`, which bounds the level.
pub const ABSOLUTE_MAX_LEVEL: u32 = 31;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("memory cap of {cap} bytes exceeded while building row {row} of level {level}")]
    MemoryCap { level: u32, row: u32, cap: u64 },
    #[error("level {level} exceeds the configured maximum {max}")]
    LevelTooLarge { level: u32, max: u32 },
    #[error("element {value} is out of range for level {level}")]
    OutOfRange { value: u64, level: u32 },
    #[error("{law} check over {tuples} tuples exceeds the exhaustive ceiling {ceiling}")]
    ExhaustiveTooLarge { law: Law, tuples: u128, ceiling: u128 },
    #[error("{0} needs the tables at levels n and n+1")]
    NeedsNextLevel(Law),
    #[error("invalid row {row}: {reason}")]
    InvalidRow { row: u32, reason: String },
    #[error("table file: {0}")]
    Format(String),
}

/// An element of a table at a fixed level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub fn value(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Resource limits for [`build_table`].
#[derive(Debug, Clone, Copy)]
pub struct BuildLimits {
    pub memory_cap: u64,
    pub max_level: u32,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits {
            memory_cap: DEFAULT_MEMORY_CAP,
            max_level: DEFAULT_MAX_LEVEL,
        }
    }
}

/// The algebra `P_n` with `*_n` stored as period-compressed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaverTable {
    level: u32,
    // Rows are laid out in build order (descending a). Row a occupies
    // entries[starts[a]..starts[a - 1]]; starts[0] is the end sentinel.
    starts: Vec<usize>,
    entries: Vec<u32>,
}

const BYTES_PER_ENTRY: u64 = std::mem::size_of::<u32>() as u64;
const BYTES_PER_ROW: u64 = std::mem::size_of::<usize>() as u64;

/// Builds `P_n` by the descending double recursion
/// `a * 1 = a + 1`, `a * (b + 1) = (a * b) * (a + 1)`.
///
/// Each entry costs one lookup into an already complete higher row, so the
/// work is proportional to the sum of the periods.
pub fn build_table(level: u32, limits: BuildLimits) -> Result<LaverTable, TableError> {
    let max = limits.max_level.min(ABSOLUTE_MAX_LEVEL);
    if level > max {
        return Err(TableError::LevelTooLarge { level, max });
    }
    let size: u64 = 1 << level;
    let mut used = size * BYTES_PER_ROW;
    if used > limits.memory_cap {
        return Err(TableError::MemoryCap {
            level,
            row: (size - 1) as u32,
            cap: limits.memory_cap,
        });
    }
    let mut starts = vec![0usize; size as usize];
    let mut entries: Vec<u32> = Vec::new();
    let mask = (size - 1) as u32;
    for a in (1..size as u32).rev() {
        let start = entries.len();
        starts[a as usize] = start;
        let next = (a + 1) & mask;
        let mut v = next;
        loop {
            used += BYTES_PER_ENTRY;
            if used > limits.memory_cap {
                return Err(TableError::MemoryCap {
                    level,
                    row: a,
                    cap: limits.memory_cap,
                });
            }
            entries.push(v);
            if v == 0 {
                break;
            }
            // v > a, so row v is complete and ends where row v - 1 >= a starts
            let vs = starts[v as usize];
            let period = starts[v as usize - 1] - vs;
            v = entries[vs + (a as usize & (period - 1))];
        }
        debug_assert!((entries.len() - start).is_power_of_two());
    }
    starts[0] = entries.len();
    entries.shrink_to_fit();
    Ok(LaverTable { level, starts, entries })
}

impl LaverTable {
    /// Builds a table from explicit rows `rows[a - 1] = [a*1, .., a*p(a)]`,
    /// checking only the structural row invariants (not the recursion).
    pub fn from_rows(level: u32, rows: Vec<Vec<u32>>) -> Result<LaverTable, TableError> {
        if level > ABSOLUTE_MAX_LEVEL {
            return Err(TableError::LevelTooLarge {
                level,
                max: ABSOLUTE_MAX_LEVEL,
            });
        }
        let size: u64 = 1 << level;
        if rows.len() as u64 != size - 1 {
            return Err(TableError::Format(format!(
                "expected {} rows, found {}",
                size - 1,
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            check_row(level, i as u32 + 1, row)?;
        }
        let mut starts = vec![0usize; size as usize];
        let mut entries = Vec::new();
        for (i, row) in rows.into_iter().enumerate().rev() {
            starts[i + 1] = entries.len();
            entries.extend(row);
        }
        starts[0] = entries.len();
        Ok(LaverTable { level, starts, entries })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of elements, `2^n`.
    pub fn size(&self) -> u64 {
        1u64 << self.level
    }

    /// Bytes held by the compressed representation.
    pub fn memory_bytes(&self) -> u64 {
        self.entries.len() as u64 * BYTES_PER_ENTRY + self.starts.len() as u64 * BYTES_PER_ROW
    }

    /// Sum of the periods of rows `1 .. 2^n - 1`.
    pub fn total_period(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn elem(&self, value: u64) -> Result<Elem, TableError> {
        if value < self.size() {
            Ok(Elem(value as u32))
        } else {
            Err(TableError::OutOfRange {
                value,
                level: self.level,
            })
        }
    }

    /// The stored period of row `a` (`a >= 1`).
    pub fn row(&self, a: u32) -> &[u32] {
        let i = a as usize;
        &self.entries[self.starts[i]..self.starts[i - 1]]
    }

    /// `a *_n b`, with `0 * b = b` and `a * 0 = 0`.
    #[inline]
    pub fn apply_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return 0;
        }
        let s = self.starts[a as usize];
        let p = self.starts[a as usize - 1] - s;
        self.entries[s + ((b as usize - 1) & (p - 1))]
    }

    /// `a o_n b = (a * (b + 1)) - 1 mod 2^n`.
    #[inline]
    pub fn compose_raw(&self, a: u32, b: u32) -> u32 {
        let mask = (self.size() - 1) as u32;
        self.apply_raw(a, b.wrapping_add(1) & mask).wrapping_sub(1) & mask
    }

    #[inline]
    pub fn period_raw(&self, a: u32) -> u64 {
        if a == 0 {
            self.size()
        } else {
            (self.starts[a as usize - 1] - self.starts[a as usize]) as u64
        }
    }

    fn check(&self, e: Elem) -> Result<u32, TableError> {
        if (e.0 as u64) < self.size() {
            Ok(e.0)
        } else {
            Err(TableError::OutOfRange {
                value: e.0 as u64,
                level: self.level,
            })
        }
    }

    pub fn apply(&self, a: Elem, b: Elem) -> Result<Elem, TableError> {
        Ok(Elem(self.apply_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn compose(&self, a: Elem, b: Elem) -> Result<Elem, TableError> {
        Ok(Elem(self.compose_raw(self.check(a)?, self.check(b)?)))
    }

    /// Period of `a`; `p(0) = 2^n`.
    pub fn period(&self, a: Elem) -> Result<u64, TableError> {
        Ok(self.period_raw(self.check(a)?))
    }

    /// Converts to the one-based presentation, where `0` is shown as `2^n`.
    pub fn display_one_based(&self, e: Elem) -> u64 {
        if e.0 == 0 {
            self.size()
        } else {
            e.0 as u64
        }
    }
}

/// Reduction modulo `2^n`: the homomorphism `P_{n+1} -> P_n`.
pub fn project(x: Elem, level: u32) -> Elem {
    Elem(((x.0 as u64) & ((1u64 << level) - 1)) as u32)
}

pub(crate) fn check_row(level: u32, a: u32, row: &[u32]) -> Result<(), TableError> {
    let size: u64 = 1 << level;
    let bad = |reason: String| TableError::InvalidRow { row: a, reason };
    if a as u64 >= size || a == 0 {
        return Err(bad(format!("row index out of range for level {level}")));
    }
    let p = row.len() as u64;
    if p == 0 || !p.is_power_of_two() || !size.is_multiple_of(p) {
        return Err(bad(format!("period {p} is not a power of two dividing {size}")));
    }
    if *row.last().unwrap() != 0 {
        return Err(bad("last entry of the period is not 0".into()));
    }
    let mut prev = a;
    for &v in &row[..row.len() - 1] {
        if v as u64 >= size {
            return Err(bad(format!("entry {v} out of range")));
        }
        if v <= prev {
            return Err(bad(format!("entry {v} does not exceed {prev}")));
        }
        prev = v;
    }
    if row[0] != ((a as u64 + 1) % size) as u32 {
        return Err(bad(format!("first entry must be {}", (a as u64 + 1) % size)));
    }
    Ok(())
}
