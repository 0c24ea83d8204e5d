//! Induced operator norms between finite-dimensional normed spaces.

use lipop::{NormKind, NormedSpace, OperatorMatrix, C64};

fn main() -> lipop::Result<()> {
    let r = |x: f64| C64::new(x, 0.0);
    for (x, y) in [
        (NormKind::L2, NormKind::L2),
        (NormKind::L1, NormKind::L2),
        (NormKind::L1, NormKind::Linf),
        (NormKind::Linf, NormKind::Linf),
    ] {
        let a = OperatorMatrix::from_rows(
            NormedSpace::new(2, x)?,
            NormedSpace::new(2, y)?,
            &[&[r(1.0), r(2.0)], &[C64::new(0.0, 1.0), r(-1.0)]],
        )?;
        let (n, v) = a.norming_vector()?;
        println!("{x:?} -> {y:?}: |A| = {n:.9}, attained at {:?}", v.entries);
    }

    let l2 = NormedSpace::new(2, NormKind::L2)?;
    let l1 = NormedSpace::new(2, NormKind::L1)?;
    let a = OperatorMatrix::from_rows(l2, l1, &[&[r(1.0), r(0.0)], &[r(0.0), r(1.0)]])?;
    if let Err(e) = a.op_norm() {
        println!("l2 -> l1: {e}");
    }
    Ok(())
}
