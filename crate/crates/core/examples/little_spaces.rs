//! Operators between the little spaces and relative compactness of families.

use lipop::criteria::{
    little_boundedness_verdict, little_compactness_verdict, set_compactness_check, ClassifierParams, DiskSampler,
};
use lipop::vspaces::{SpaceSpec, VectorFunction};
use lipop::wcop::{OperatorSymbol, WeightedCompositionOp};
use lipop::{AnalyticScalar, NormedSpace, SelfMap, C64};

fn main() -> lipop::Result<()> {
    let s = DiskSampler::default();
    let p = ClassifierParams::default();
    let sc = NormedSpace::scalar();
    let w = WeightedCompositionOp::new(
        OperatorSymbol::scalar(AnalyticScalar::one()),
        SelfMap::new(AnalyticScalar::affine(0.5.into(), 0.0.into()))?,
        SpaceSpec::big(0.5, sc)?,
        SpaceSpec::big(0.5, sc)?,
    )?;
    let b = little_boundedness_verdict(&w, &s, &p)?;
    println!("phi = z/2 on little spaces: {:?} (psi {:?}, phi' psi {:?})", b.verdict, b.psi_little, b.phi_psi);
    let c = little_compactness_verdict(&w, &s, &p)?;
    println!("little compactness: {:?}, radial {:?}", c.verdict, c.radial_decay);

    let fam = DiskSampler::with_depth(10);
    let lines: Vec<VectorFunction> = (1..=10)
        .map(|k| VectorFunction::scalar(AnalyticScalar::real_poly(&[0.0, k as f64 / 10.0])))
        .collect();
    let r = set_compactness_check(&lines, 0.5, &fam, &p)?;
    println!("{{c z}}: {:?}", r.relatively_compact);
    let tests = (1..=10)
        .map(|k| Ok(VectorFunction::scalar(AnalyticScalar::test_fn(C64::new(1.0 - 0.5f64.powi(k), 0.0), 0.5)?)))
        .collect::<lipop::Result<Vec<_>>>()?;
    let r = set_compactness_check(&tests, 0.5, &fam, &p)?;
    println!("test functions toward 1: {:?}, circle sups {:.3?}", r.relatively_compact, r.family_profile);
    Ok(())
}
