//! Compactness through the annulus profile.

use lipop::criteria::{compactness_verdict, ClassifierParams, DiskSampler};
use lipop::vspaces::SpaceSpec;
use lipop::wcop::{OperatorSymbol, WeightedCompositionOp};
use lipop::{AnalyticScalar, NormedSpace, SelfMap};

fn main() -> lipop::Result<()> {
    let s = DiskSampler::default();
    let p = ClassifierParams::default();
    let sc = NormedSpace::scalar();
    let cases = [
        ("phi = z/2", AnalyticScalar::one(), AnalyticScalar::affine(0.5.into(), 0.0.into())),
        ("phi = id", AnalyticScalar::one(), AnalyticScalar::identity()),
        (
            "phi = (1 + z)/2, psi = 1 - z",
            AnalyticScalar::affine((-1.0).into(), 1.0.into()),
            AnalyticScalar::affine(0.5.into(), 0.5.into()),
        ),
    ];
    for (label, psi, phi) in cases {
        let w = WeightedCompositionOp::new(
            OperatorSymbol::scalar(psi),
            SelfMap::new(phi)?,
            SpaceSpec::big(0.5, sc)?,
            SpaceSpec::big(0.5, sc)?,
        )?;
        let r = compactness_verdict(&w, &s, &p)?;
        let t: Vec<String> = r.annulus_profile.iter().map(|a| format!("{:.4}", a.value)).collect();
        println!("{label}: {:?}, T(delta) = [{}]", r.verdict, t.join(", "));
    }
    Ok(())
}
