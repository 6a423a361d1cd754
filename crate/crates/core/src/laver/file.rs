//! Line-based text cache for tables.
//!
//! ```text
//! LAVERTABLE v1 n=<n> convention=zero
//! <a> <p(a)> <v_1> ... <v_p>          for a = 1 .. 2^n - 1
//! ```

use std::io::{self, BufRead, Write};

use super::{LaverTable, TableError, ABSOLUTE_MAX_LEVEL};

pub fn write_table<W: Write>(table: &LaverTable, mut out: W) -> io::Result<()> {
    writeln!(out, "LAVERTABLE v1 n={} convention=zero", table.level())?;
    let mut line = String::new();
    for a in 1..table.size() as u32 {
        let row = table.row(a);
        line.clear();
        line.push_str(&format!("{} {}", a, row.len()));
        for v in row {
            line.push(' ');
            line.push_str(&v.to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Every product as `a,b,product` under a header, rows in increasing `a`
/// then `b`. With `one_based` the elements are `1 ..= 2^n` and `2^n`
/// replaces `0`.
pub fn write_products_csv<W: Write>(table: &LaverTable, one_based: bool, mut out: W) -> io::Result<()> {
    let size = table.size() as u32;
    let show = |x: u32| if one_based && x == 0 { size } else { x };
    let elems: Vec<u32> = if one_based {
        (1..=size).map(|x| x % size).collect()
    } else {
        (0..size).collect()
    };
    let mut buf = String::from("a,b,product\n");
    for &a in &elems {
        for &b in &elems {
            buf.push_str(&format!("{},{},{}\n", show(a), show(b), show(table.apply_raw(a, b))));
        }
    }
    out.write_all(buf.as_bytes())
}

pub fn read_table<R: BufRead>(input: R) -> Result<LaverTable, TableError> {
    let fmt = |msg: String| TableError::Format(msg);
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| fmt("empty file".into()))?
        .map_err(|e| fmt(e.to_string()))?;
    let level = parse_header(&header).ok_or_else(|| fmt(format!("bad header `{header}`")))?;
    if level > ABSOLUTE_MAX_LEVEL {
        return Err(TableError::LevelTooLarge {
            level,
            max: ABSOLUTE_MAX_LEVEL,
        });
    }
    let size = 1u64 << level;
    let mut rows = Vec::with_capacity((size - 1) as usize);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| fmt(e.to_string()))?;
        let lineno = i + 2;
        let nums: Vec<u64> = line
            .split(' ')
            .map(|w| w.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                fmt(format!(
                    "line {lineno}: expected decimal numbers separated by single spaces"
                ))
            })?;
        if nums.len() < 2 {
            return Err(fmt(format!("line {lineno}: missing row index or period")));
        }
        let expected = rows.len() as u64 + 1;
        if nums[0] != expected {
            return Err(fmt(format!(
                "line {lineno}: expected row {expected}, found {}",
                nums[0]
            )));
        }
        if nums[1] != nums.len() as u64 - 2 {
            return Err(fmt(format!(
                "line {lineno}: period {} but {} values",
                nums[1],
                nums.len() - 2
            )));
        }
        if nums[2..].iter().any(|&v| v >= size) {
            return Err(fmt(format!("line {lineno}: value out of range")));
        }
        rows.push(nums[2..].iter().map(|&v| v as u32).collect());
    }
    LaverTable::from_rows(level, rows)
}

fn parse_header(line: &str) -> Option<u32> {
    let rest = line.strip_prefix("LAVERTABLE v1 n=")?;
    let level = rest.strip_suffix(" convention=zero")?;
    if level.is_empty() || !level.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    level.parse().ok()
}
