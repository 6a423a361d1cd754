//! The `EMBEDALG v1` text format.
//!
//! ```text
//! EMBEDALG v1 prefix=4
//! fun s 1 2 3 4
//! op s s s
//! gen s
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;

use super::{valid_name, Candidate, EmbedError, FnPrefix};

fn err(line: usize, msg: impl Into<String>) -> EmbedError {
    EmbedError::Format { line, msg: msg.into() }
}

pub(super) fn parse(text: &str) -> Result<Candidate, EmbedError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let prefix_len = match words.as_slice() {
        ["EMBEDALG", "v1", p] => p
            .strip_prefix("prefix=")
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| err(hline, format!("bad prefix field `{p}`")))?,
        _ => return Err(err(hline, "expected `EMBEDALG v1 prefix=<L>`")),
    };

    let mut functions = Vec::new();
    let mut ops = Vec::new();
    let mut generator = None;
    for (line, l) in lines {
        let words: Vec<&str> = l.split_whitespace().collect();
        let name = |w: &str| {
            if valid_name(w) {
                Ok(w.to_string())
            } else {
                Err(err(line, format!("`{w}` is not a valid name")))
            }
        };
        match words.as_slice() {
            ["fun", n, values @ ..] => {
                let values = values
                    .iter()
                    .map(|v| v.parse::<u64>().map_err(|_| err(line, format!("bad value `{v}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                functions.push(FnPrefix::new(name(n)?, values).map_err(|e| err(line, e.to_string()))?);
            }
            ["op", a, b, c] => ops.push((name(a)?, name(b)?, name(c)?)),
            ["gen", g] => {
                if generator.is_some() {
                    return Err(EmbedError::DuplicateGenerator);
                }
                generator = Some(name(g)?);
            }
            _ => return Err(err(line, format!("unrecognised line `{l}`"))),
        }
    }
    Candidate::new(prefix_len, functions, ops, generator)
}

pub(super) fn write(c: &Candidate, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "EMBEDALG v1 prefix={}", c.prefix_len())?;
    for g in c.functions() {
        write!(f, "fun {}", g.name())?;
        for v in g.values() {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
    }
    for (a, b, r) in c.ops() {
        writeln!(f, "op {a} {b} {r}")?;
    }
    if let Some(g) = c.generator() {
        writeln!(f, "gen {g}")?;
    }
    Ok(())
}
