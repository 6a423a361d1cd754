//! Prints build time, total period and memory for each level.

use std::time::Instant;

use laver_core::laver::{build_table, BuildLimits};

fn main() {
    let top: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    println!("n,seconds,total_period,bytes,p(1)");
    for n in 0..=top {
        let start = Instant::now();
        let t = build_table(n, BuildLimits::default()).expect("build");
        let secs = start.elapsed().as_secs_f64();
        let p1 = if n == 0 { 1 } else { t.period_raw(1) };
        println!("{n},{secs:.4},{},{},{p1}", t.total_period(), t.memory_bytes());
    }
}
