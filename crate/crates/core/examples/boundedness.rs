//! Boundedness from the q-quantity and the symbol norm.

use lipop::criteria::{boundedness_verdict, hinf_criterion, ClassifierParams, DiskSampler};
use lipop::vspaces::SpaceSpec;
use lipop::wcop::{OperatorSymbol, WeightedCompositionOp};
use lipop::{AnalyticScalar, NormedSpace, SelfMap};

fn op(phi: AnalyticScalar, alpha: f64, beta: f64) -> lipop::Result<WeightedCompositionOp> {
    let s = NormedSpace::scalar();
    WeightedCompositionOp::new(
        OperatorSymbol::scalar(AnalyticScalar::one()),
        SelfMap::new(phi)?,
        SpaceSpec::big(alpha, s)?,
        SpaceSpec::big(beta, s)?,
    )
}

fn main() -> lipop::Result<()> {
    let s = DiskSampler::default();
    let p = ClassifierParams::default();

    println!("phi = id, psi = 1:");
    for a in [0.25, 0.5, 0.75] {
        for b in [0.25, 0.5, 0.75] {
            let r = boundedness_verdict(&op(AnalyticScalar::identity(), a, b)?, &s, &p)?;
            println!("  alpha {a} beta {b}: {:?} (q profile tail {:.3e})", r.verdict, r.q.profile.last().unwrap());
        }
    }

    let contact = op(AnalyticScalar::affine(0.5.into(), 0.5.into()), 0.5, 0.5)?;
    let r = boundedness_verdict(&contact, &s, &p)?;
    println!("phi = (1 + z)/2: q = {:.6} at {}, {:?}", r.q.value, r.q.witness, r.verdict);

    let w = hinf_criterion(
        &OperatorSymbol::scalar(AnalyticScalar::one()),
        &SelfMap::new(AnalyticScalar::affine(0.5.into(), 0.0.into()))?,
        0.5,
        0.5,
        &s,
    )?;
    println!("weighted-sup criterion for z/2: {:.6} at {}", w.value, w.witness);
    Ok(())
}
