//! Norms of vector-valued analytic functions and little-space membership.

use lipop::criteria::DiskSampler;
use lipop::vspaces::{
    hinf_nu_norm, lambda1_norm, lambda_norm, lipschitz_seminorm_estimate, little_space_profile, VectorFunction,
    WeightSpec,
};
use lipop::{AnalyticScalar, NormKind, NormedSpace, Vector, C64};

fn main() -> lipop::Result<()> {
    let s = DiskSampler::default();
    let z2 = VectorFunction::scalar(AnalyticScalar::real_poly(&[0.0, 0.0, 1.0]));
    let n = lambda_norm(&z2, 0.5, &s)?;
    println!("|z^2| in Lambda_0.5 = {:.9} at {}", n.value, n.witness);
    println!("|z^2| in Lambda_1   = {:.6}", lambda1_norm(&z2, &s)?.value);
    println!("|z| in H^inf_nu_1   = {:.9}", hinf_nu_norm(&VectorFunction::scalar(AnalyticScalar::identity()), &WeightSpec::new(1.0)?, &s)?.value);

    let x = Vector::new(NormedSpace::new(2, NormKind::L2)?, vec![C64::new(0.0, 0.0), C64::new(2.0, 0.0)])?;
    let fx = VectorFunction::tensor(&AnalyticScalar::identity(), &x);
    println!("|z x| with |x| = 2: {:.9}", lambda_norm(&fx, 0.5, &s)?.value);

    let two = lipschitz_seminorm_estimate(&VectorFunction::scalar(AnalyticScalar::identity()), 0.5, 4000, 1)?;
    println!("two-point seminorm of z, alpha 0.5: >= {two:.6}");

    for (label, f) in [
        ("z^2", z2.clone()),
        ("(1 - 0.9 z)^0.5", VectorFunction::scalar(AnalyticScalar::power(C64::new(1.0, 0.0), C64::new(0.9, 0.0), 0.5)?)),
    ] {
        let p = little_space_profile(&f, 0.5, &s)?;
        println!("{label}: little-space verdict {:?}, last circle sup {:.3e}", p.verdict, p.values.last().unwrap());
    }
    Ok(())
}
