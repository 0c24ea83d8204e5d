//! Criterion constant against the lower bound on part of the golden corpus, as CSV.

use lipop::estimation::{equivalence_sweep, write_sweep_csv};
use lipop::scenario::golden_corpus;

fn main() -> lipop::Result<()> {
    let corpus: Vec<_> = golden_corpus().into_iter().take(8).collect();
    let summary = equivalence_sweep(&corpus)?;
    write_sweep_csv(&summary.rows, std::io::stdout())?;
    if let Some((lo, hi)) = summary.min_ratio.zip(summary.max_ratio) {
        eprintln!("L/C in [{lo:.6}, {hi:.6}]");
    }
    Ok(())
}
