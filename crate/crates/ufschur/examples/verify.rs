//! Runs the verification suites and prints one line per check.
//!
//! cargo run --release --example verify -- [suite] [trunc] [max_size]

use std::time::Instant;
use ufschur::verify::{run, VerifyOptions};

fn main() -> ufschur::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let suite = args.first().map(String::as_str).unwrap_or("all");
    let mut opts = VerifyOptions::default();
    if let Some(t) = args.get(1) {
        opts.trunc = t.parse().expect("trunc");
    }
    if let Some(m) = args.get(2) {
        opts.max_size = m.parse().expect("max_size");
    }
    let mut ok = true;
    for name in if suite == "all" { ufschur::verify::SUITES.to_vec() } else { vec![suite] } {
        let start = Instant::now();
        for report in run(name, &opts)? {
            for c in &report.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                println!("{mark} {}: {} {}", report.suite, c.name, c.detail);
            }
            ok &= report.passed();
        }
        println!("-- {name} in {:.2?}", start.elapsed());
    }
    if !ok {
        std::process::exit(1);
    }
    Ok(())
}
