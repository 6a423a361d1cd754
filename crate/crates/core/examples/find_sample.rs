//! Brute-force search for a sample candidate: the functions `j`, `jj = j·j`,
//! `j3 = j·jj = jj·jj` and `k = jj·j` on a prefix of length `L` with values
//! below `M`, filled in one at a time and kept only if no axiom is refuted.
//!
//! Usage: `cargo run --release --example find_sample [L] [M]`

use laver_core::embed::{
    build_two_sorted, check_candidate, check_two_sorted, critical_sequence, Candidate, CheckOptions, FnPrefix,
    TwoSortedBounds, DEFAULT_MAX_BFS,
};

const NAMES: [&str; 4] = ["j", "jj", "j3", "k"];
const OPS: [(&str, &str, &str); 4] = [
    ("j", "j", "jj"),
    ("j", "jj", "j3"),
    ("jj", "jj", "j3"),
    ("jj", "j", "k"),
];

/// Strictly increasing sequences of length `len` with `f(i) >= i`, values below `max`.
fn sequences(len: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, len: usize, max: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let i = prefix.len() as u64;
        let lo = prefix.last().map_or(0, |&v| v + 1).max(i);
        for v in lo..max {
            prefix.push(v);
            go(prefix, len, max, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), len, max, &mut out);
    out
}

fn candidate(len: usize, values: &[Vec<u64>]) -> Candidate {
    let n = values.len();
    let functions = values
        .iter()
        .zip(NAMES)
        .map(|(v, name)| FnPrefix::new(name, v.clone()).unwrap())
        .collect();
    let ops = OPS
        .iter()
        .filter(|(a, b, c)| [a, b, c].iter().all(|x| NAMES[..n].contains(x)))
        .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
        .collect();
    Candidate::new(len, functions, ops, Some("j".into())).unwrap()
}

fn passes(c: &Candidate) -> bool {
    !check_candidate(c, &CheckOptions::default()).any_refuted()
}

fn search(
    len: usize,
    seqs: &[Vec<u64>],
    values: &mut Vec<Vec<u64>>,
    found: &mut dyn FnMut(&Candidate) -> bool,
) -> bool {
    if values.len() == NAMES.len() {
        return found(&candidate(len, values));
    }
    for s in seqs {
        if values.contains(s) {
            continue;
        }
        values.push(s.clone());
        if passes(&candidate(len, values)) && search(len, seqs, values, found) {
            return true;
        }
        values.pop();
    }
    false
}

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let len = args.first().copied().unwrap_or(6) as usize;
    let max = args.get(1).copied().unwrap_or(10);
    // The generator fixes 0 and has its first four critical points inside
    // the prefix; smaller critical points are tried first.
    let seqs = sequences(len, max);
    let mut js: Vec<(u64, Vec<u64>)> = seqs
        .iter()
        .filter_map(|v| {
            let f = FnPrefix::new("j", v.to_vec()).unwrap();
            let c = f.crit().ok()?;
            let s = critical_sequence(&f, 4).ok()?;
            (c >= 1 && s.complete && (s.values[3] as usize) < len).then(|| (c, v.clone()))
        })
        .collect();
    js.sort();
    let js: Vec<Vec<u64>> = js.into_iter().map(|(_, v)| v).collect();
    eprintln!("{} sequences, {} generators", seqs.len(), js.len());
    let bounds = TwoSortedBounds::default();
    let mut tried = 0;
    for j in &js {
        let mut values = vec![j.clone()];
        let mut found = |c: &Candidate| {
            tried += 1;
            let ts = build_two_sorted(c, bounds.max_parts, DEFAULT_MAX_BFS).unwrap();
            let report = check_two_sorted(&ts, &bounds);
            if report.any_refuted() {
                for e in report.refuted() {
                    eprintln!("  rejected: {} {}", e.axiom, e.status);
                }
                return false;
            }
            print!("{c}");
            eprint!("{report}");
            true
        };
        if search(len, &seqs, &mut values, &mut found) {
            eprintln!("{tried} complete candidates tried");
            return;
        }
    }
    eprintln!("no candidate found");
    std::process::exit(1);
}
