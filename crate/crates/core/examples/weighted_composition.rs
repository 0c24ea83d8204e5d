//! Applying W f = psi (f o phi), its derivative and the helper operators.

use lipop::criteria::DiskSampler;
use lipop::vspaces::{SpaceSpec, VectorFunction};
use lipop::wcop::{coefficient, dilate, restrict_extend_check, t_psi, truncate, OperatorSymbol, WeightedCompositionOp};
use lipop::{AnalyticScalar, NormKind, NormedSpace, SelfMap, C64};

fn main() -> lipop::Result<()> {
    let l2 = NormedSpace::new(2, NormKind::L2)?;
    let psi = OperatorSymbol::new(
        l2,
        l2,
        vec![
            vec![AnalyticScalar::one(), AnalyticScalar::zero()],
            vec![AnalyticScalar::zero(), AnalyticScalar::identity()],
        ],
    )?;
    let phi = SelfMap::new(AnalyticScalar::affine(C64::new(0.5, 0.0), C64::new(0.0, 0.0)))?;
    let w = WeightedCompositionOp::new(psi, phi, SpaceSpec::big(0.5, l2)?, SpaceSpec::big(0.5, l2)?)?;

    let f = VectorFunction::new(l2, vec![AnalyticScalar::one(), AnalyticScalar::identity()])?;
    let one = C64::new(1.0, 0.0);
    println!("(W f)(1)  = {:?}", w.apply(&f, one)?.entries);
    println!("(W f)'(1) = {:?}", w.apply_deriv(&f, one)?.entries);
    let (a, b) = w.decomposition_terms(&f, one)?;
    println!("decomposition terms: {:?} + {:?}", a.entries, b.entries);

    let s = DiskSampler::default();
    println!("|W f| in Lambda_0.5 = {:.9}", w.image_norm(&f, &s)?.value);
    println!("|T_psi e_2| = {:.9}", lipop::vspaces::space_norm(&t_psi(&w.psi, &l2.basis(1))?, 0.5, &s)?.value);

    let g = VectorFunction::scalar(AnalyticScalar::real_poly(&[1.0, 2.0, 3.0, 4.0]));
    println!("L_2 g at 0.5 = {:?}", truncate(&g, 2).value(C64::new(0.5, 0.0)));
    println!("K_0.5 g at 1 = {:?}", dilate(&g, 0.5)?.value(one));
    println!("q_3 g = {:?}", coefficient(&g, 3).entries);

    let boundary: Vec<C64> = (0..8).map(|k| C64::from_polar(1.0, k as f64 * 0.785)).collect();
    println!("boundary extension gap = {:.2e}", restrict_extend_check(&w, &f, &boundary)?);
    Ok(())
}
