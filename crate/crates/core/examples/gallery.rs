//! Run every catalogued example and print its claims.
//!
//! `cargo run --release --example gallery -- ex3_4` runs a single one.

use genorlicz::gallery::{run_example, RunSettings, Verdict, EXAMPLE_NAMES};

fn main() -> genorlicz::Result<()> {
    let picked: Vec<String> = std::env::args().skip(1).collect();
    let names: Vec<&str> =
        if picked.is_empty() { EXAMPLE_NAMES.to_vec() } else { picked.iter().map(String::as_str).collect() };
    for name in names {
        let bundle = run_example(name, &RunSettings::default())?;
        println!("== {name}: {:?}", bundle.verdict);
        for c in &bundle.claims {
            let mark = if c.matches { "ok  " } else { "FAIL" };
            println!("  {mark} {} [{}]", c.statement, c.evidence);
        }
        if let Verdict::Errored { stage, message } = &bundle.verdict {
            println!("  errored in {stage}: {message}");
        }
    }
    Ok(())
}
