//! Run a JSON pipeline spec (default: the Example 3.5 construction).
//!
//! `cargo run --example pipeline -- crates/core/examples/specs/ex3_4_asymptotes.json`

use genorlicz::gallery::{run_pipeline_json, RunSettings};

fn main() -> genorlicz::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/specs/ex3_5_restore_ainc.json").to_string()
    });
    let text = std::fs::read_to_string(&path)?;
    let bundle = run_pipeline_json(&text, &RunSettings::default())?;
    for r in &bundle.reports {
        println!("{:<28} {}", r.label, r.report.table_row());
    }
    for c in &bundle.claims {
        println!("{} {}", if c.matches { "ok  " } else { "FAIL" }, c.statement);
    }
    println!("verdict: {:?}", bundle.verdict);
    Ok(())
}
