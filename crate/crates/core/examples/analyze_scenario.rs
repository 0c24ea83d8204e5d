//! Loads a scenario from JSON and prints the full report.
//!
//! `cargo run --example analyze_scenario -- path/to/scenario.json`; without an
//! argument the contact-point scenario of the golden corpus is used.

use lipop::criteria::analyze;
use lipop::scenario::{golden_corpus, load_scenario};

fn main() -> lipop::Result<()> {
    let sc = match std::env::args().nth(1) {
        Some(path) => load_scenario(path.as_ref())?,
        None => golden_corpus().into_iter().find(|s| s.id == "contact-point").unwrap(),
    };
    let report = analyze(&sc.operator()?, &sc.sampler, &sc.classifier)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
