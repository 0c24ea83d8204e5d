//! Scalar analytic functions: evaluation, derivatives, Taylor data and self-maps.

use lipop::{AnalyticScalar, SelfMap, C64};

fn main() -> lipop::Result<()> {
    let z = C64::new(0.3, -0.2);

    let p = AnalyticScalar::real_poly(&[1.0, -2.0, 0.5]);
    println!("p(z)  = {}", p.eval(z)?);
    println!("p'(z) = {}", p.deriv(z)?);

    // (1 - 0.5 z)^(-1) and its first Taylor coefficients 0.5^k.
    let geo = AnalyticScalar::power(C64::new(1.0, 0.0), C64::new(0.5, 0.0), -1.0)?;
    println!("taylor (1 - z/2)^-1: {:?}", geo.taylor_coeffs(4));

    let a = C64::new(0.5, 0.0);
    let f = AnalyticScalar::test_fn(a, 0.5)?;
    println!("test function at a: value {}, derivative {}", f.eval(a)?, f.deriv(a)?);

    let blaschke = SelfMap::new(AnalyticScalar::blaschke(C64::new(0.3, 0.4))?)?;
    println!("automorphism maps 0 to {}, boundary max {}", blaschke.value(C64::new(0.0, 0.0)), blaschke.certificate());

    match SelfMap::new(AnalyticScalar::affine(C64::new(0.8, 0.0), C64::new(0.4, 0.0))) {
        Ok(_) => println!("0.8 z + 0.4 accepted"),
        Err(e) => println!("0.8 z + 0.4 rejected: {e}"),
    }
    Ok(())
}
