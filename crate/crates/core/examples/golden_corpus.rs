//! Prints the built-in 30-scenario corpus as JSON, the same text as
//! `data/golden_corpus.json`.

use lipop::scenario::{corpus_json, golden_corpus};

fn main() -> lipop::Result<()> {
    print!("{}", corpus_json(&golden_corpus())?);
    Ok(())
}
