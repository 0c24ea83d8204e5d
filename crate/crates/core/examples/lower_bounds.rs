//! Operator-norm lower bounds from extremal families and the witness sequence.

use lipop::criteria::DiskSampler;
use lipop::estimation::{lower_bound_opnorm, noncompact_witness, ExtremalFamily};
use lipop::scenario::golden_corpus;
use lipop::C64;

fn main() -> lipop::Result<()> {
    let s = DiskSampler::default();
    for id in ["identity", "automorphism", "diagonal", "shear"] {
        let sc = golden_corpus().into_iter().find(|x| x.id == id).unwrap();
        let w = sc.operator()?;
        let lb = lower_bound_opnorm(&w, &ExtremalFamily::standard(w.alpha()), &s)?;
        println!("{id}: |W| >= {:.6}", lb.value);
        for (family, v) in &lb.per_family {
            println!("    {family:<12} {v:.6}");
        }
    }

    let w = golden_corpus()[0].operator()?;
    let zs: Vec<C64> = (2..=10).map(|n| C64::new(1.0 - 0.5f64.powi(n), 0.0)).collect();
    for row in noncompact_witness(&w, 2, &zs, &s)? {
        println!("n = {:>2}: |W f_n| = {:.4} >= {:.4}", row.n, row.image_norm, row.bound);
    }
    Ok(())
}
