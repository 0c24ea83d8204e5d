//! Operator-norm lower bounds from normalized extremal families, the
//! non-compactness witness sequence, and the equivalence sweep.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{
    boundedness_verdict, compactness_verdict, q_quantity, CompactVerdict, DiskSampler, Finiteness,
};
use crate::error::{Error, Result};
use crate::fnkernel::{AnalyticScalar, C64, MIN_TEST_PARAM};
use crate::normedspace::{NormedSpace, Vector};
use crate::scenario::Scenario;
use crate::vspaces::{space_norm, VectorFunction};
use crate::wcop::WeightedCompositionOp;

/// Seed of the random unit directions.
pub const DIRECTION_SEED: u64 = 0x5eed_d1ec;

/// Random unit directions added to the basis vectors.
pub const RANDOM_DIRECTIONS: usize = 64;

/// Angles per circle when evaluating images of family members.
pub const ESTIMATION_ANGLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ExtremalFamily {
    /// `1_x`.
    Constants,
    /// `z^k x`, `1 <= k <= max_degree`.
    Monomials { max_degree: usize },
    /// The test functions `f_{a, x}` with `a` in the image of sampled points.
    TestFns,
    /// `(z - a) x`, for the `alpha = 1` source space.
    Linear,
    /// `f_n` built at `b = phi(z_n)` with exponents `alpha - 2`, `alpha - 1`.
    WitnessSeq,
}

impl ExtremalFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ExtremalFamily::Constants => "constants",
            ExtremalFamily::Monomials { .. } => "monomials",
            ExtremalFamily::TestFns => "testfns",
            ExtremalFamily::Linear => "linear",
            ExtremalFamily::WitnessSeq => "witness_seq",
        }
    }

    /// The families that apply to the source exponent.
    pub fn standard(alpha: f64) -> Vec<ExtremalFamily> {
        let mut v = vec![
            ExtremalFamily::Constants,
            ExtremalFamily::Monomials { max_degree: 4 },
        ];
        if alpha < 1.0 {
            v.push(ExtremalFamily::TestFns);
            v.push(ExtremalFamily::WitnessSeq);
        } else {
            v.push(ExtremalFamily::Linear);
        }
        v
    }
}

/// Basis vectors followed by seeded random unit vectors (basis only in
/// dimension 1).
pub fn unit_directions(space: &NormedSpace, seed: u64) -> Vec<Vector> {
    let mut out: Vec<Vector> = (0..space.dim).map(|j| space.basis(j)).collect();
    if space.dim == 1 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < space.dim + RANDOM_DIRECTIONS {
        let v: Vec<C64> = (0..space.dim)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let n = space.norm_of(&v);
        if n > 1e-3 {
            out.push(Vector {
                space: *space,
                entries: v.into_iter().map(|c| c / n).collect(),
            });
        }
    }
    out
}

/// A scalar profile `g` used in elementary tensors `g x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profile {
    pub family: &'static str,
    pub index: usize,
    /// Parameter point for the test functions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub g: AnalyticScalar,
    /// Source norm of `g`; `|g x| = |g| |x|` for every norm on `X`.
    pub norm: f64,
}

/// Best member found by [`lower_bound_opnorm`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemberDescriptor {
    pub family: &'static str,
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub x: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    pub best: Option<MemberDescriptor>,
    /// Best ratio per family, in the order requested.
    pub per_family: Vec<(String, f64)>,
}

/// `f_n` from the non-compactness argument, built at `b`:
/// `(1/conj b) ((1-|b|^2)^2 (1 - conj(b) z)^(alpha-2) - (1-|b|^2)(1 - conj(b) z)^(alpha-1))`.
///
/// Vanishes at `b` and has `f'(b) = (1-|b|^2)^(alpha-1)`.
pub fn witness_profile(b: C64, alpha: f64) -> Result<AnalyticScalar> {
    if !(b.norm() >= MIN_TEST_PARAM && b.norm() < 1.0) {
        return Err(Error::DegenerateParameter(format!(
            "witness point |b| = {} outside [1e-6, 1)",
            b.norm()
        )));
    }
    let m = 1.0 - b.norm_sqr();
    let inv = C64::new(1.0, 0.0) / b.conj();
    Ok(AnalyticScalar::sum(vec![
        AnalyticScalar::power(inv * (m * m), b, alpha - 2.0)?,
        AnalyticScalar::power(-inv * m, b, alpha - 1.0)?,
    ]))
}

/// Points `a = phi(w)` for the sampled maximizers `w` of the q-quantity.
fn image_points(w: &WeightedCompositionOp, sampler: &DiskSampler) -> Result<Vec<C64>> {
    let q = crate::criteria::q_criterion(w, sampler)?;
    let mut pts = Vec::new();
    for z in std::iter::once(q.witness).chain(q.circle_witness.iter().copied()) {
        let a = w.phi.value(z);
        if a.norm() >= MIN_TEST_PARAM && a.norm() < 1.0 && !pts.contains(&a) {
            pts.push(a);
        }
    }
    Ok(pts)
}

/// Scalar profiles of one family, with their source norms.
pub fn family_profiles(
    w: &WeightedCompositionOp,
    family: ExtremalFamily,
    sampler: &DiskSampler,
) -> Result<Vec<Profile>> {
    let alpha = w.alpha();
    let name = family.name();
    let raw: Vec<(Option<C64>, Option<usize>, AnalyticScalar)> = match family {
        ExtremalFamily::Constants => vec![(None, None, AnalyticScalar::one())],
        ExtremalFamily::Monomials { max_degree } => (1..=max_degree)
            .map(|k| {
                let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
                coeffs[k] = C64::new(1.0, 0.0);
                (None, Some(k), AnalyticScalar::poly(coeffs))
            })
            .collect(),
        ExtremalFamily::TestFns => {
            if alpha >= 1.0 {
                return Err(Error::InvalidParameter("test functions need alpha < 1".into()));
            }
            image_points(w, sampler)?
                .into_iter()
                .map(|a| Ok((Some(a), None, AnalyticScalar::test_fn(a, alpha)?)))
                .collect::<Result<_>>()?
        }
        ExtremalFamily::Linear => image_points(w, sampler)?
            .into_iter()
            .chain(std::iter::once(C64::new(0.0, 0.0)))
            .map(|a| (Some(a), None, AnalyticScalar::affine(C64::new(1.0, 0.0), -a)))
            .collect(),
        ExtremalFamily::WitnessSeq => {
            if alpha >= 1.0 {
                return Err(Error::InvalidParameter("witness sequence needs alpha < 1".into()));
            }
            image_points(w, sampler)?
                .into_iter()
                .filter(|b| b.norm() > 0.5)
                .map(|b| Ok((Some(b), None, witness_profile(b, alpha)?)))
                .collect::<Result<_>>()?
        }
    };
    raw.into_par_iter()
        .enumerate()
        .map(|(index, (a, degree, g))| {
            let norm = space_norm(&VectorFunction::scalar(g.clone()), alpha, sampler)?.value;
            Ok(Profile {
                family: name,
                index,
                a,
                degree,
                g,
                norm,
            })
        })
        .collect()
}

fn estimation_sampler(sampler: &DiskSampler) -> DiskSampler {
    DiskSampler {
        angles: sampler.angles.min(ESTIMATION_ANGLES),
        ..*sampler
    }
}

/// `max |W m| / |m|` over normalized family members `m = g x`.
///
/// Member norms use `sampler`; images use the same schedule with at most
/// [`ESTIMATION_ANGLES`] angles, which can only lower the estimate.
pub fn lower_bound_opnorm(
    w: &WeightedCompositionOp,
    families: &[ExtremalFamily],
    sampler: &DiskSampler,
) -> Result<LowerBound> {
    let dirs = unit_directions(&w.source.space, DIRECTION_SEED);
    let image_sampler = estimation_sampler(sampler);
    let mut best = 0.0;
    let mut best_member = None;
    let mut per_family = Vec::new();
    for &family in families {
        let profiles = family_profiles(w, family, sampler)?;
        let jobs: Vec<(usize, usize)> = (0..profiles.len())
            .flat_map(|p| (0..dirs.len()).map(move |d| (p, d)))
            .collect();
        let ratios: Vec<f64> = jobs
            .par_iter()
            .map(|&(p, d)| {
                let prof = &profiles[p];
                let x = &dirs[d];
                let denom = prof.norm * x.norm();
                if denom <= 0.0 {
                    return Ok(0.0);
                }
                let f = VectorFunction::tensor(&prof.g, x);
                Ok(w.image_norm(&f, &image_sampler)?.value / denom)
            })
            .collect::<Result<_>>()?;
        let mut fam_best = 0.0;
        for (&(p, d), &r) in jobs.iter().zip(&ratios) {
            if r > fam_best {
                fam_best = r;
            }
            if r > best {
                best = r;
                let prof = &profiles[p];
                best_member = Some(MemberDescriptor {
                    family: prof.family,
                    index: prof.index,
                    a: prof.a,
                    degree: prof.degree,
                    x: dirs[d].entries.clone(),
                });
            }
        }
        per_family.push((family.name().to_string(), fam_best));
    }
    Ok(LowerBound {
        value: best,
        best: best_member,
        per_family,
    })
}

/// `(f(a), f'(a))` for `f = f_{a, x}`.
pub fn test_fn_properties(a: C64, x: &Vector, alpha: f64) -> Result<(Vector, Vector)> {
    if !(a.norm() >= MIN_TEST_PARAM) {
        return Err(Error::DegenerateParameter(format!(
            "test-function parameter |a| = {} below 1e-6",
            a.norm()
        )));
    }
    let f = VectorFunction::tensor(&AnalyticScalar::test_fn(a, alpha)?, x);
    Ok((f.eval(a)?, f.deriv(a)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessRow {
    pub n: usize,
    pub z: C64,
    pub phi_z: C64,
    /// `|W f_n|` in the target space.
    pub image_norm: f64,
    /// The q-quantity at `z_n`.
    pub q_at: f64,
    /// `q_at n / (n + 1)`.
    pub bound: f64,
}

impl WitnessRow {
    pub fn holds(&self, tol: f64) -> bool {
        self.image_norm >= self.bound - tol
    }
}

/// `|W f_n|` along a sequence `z_n`, numbered from `first_n`.
///
/// `x_n` is a norming vector of `psi_{z_n}` and `z_n` is added to the sample
/// set, so each norm is at least the q-quantity at `z_n`.
pub fn noncompact_witness(
    w: &WeightedCompositionOp,
    first_n: usize,
    z_seq: &[C64],
    sampler: &DiskSampler,
) -> Result<Vec<WitnessRow>> {
    if w.alpha() >= 1.0 {
        return Err(Error::Precondition("witness sequence needs alpha < 1".into()));
    }
    for &z in z_seq {
        let m = w.phi.value(z).norm();
        if !(m > 0.5) {
            return Err(Error::Precondition(format!(
                "|phi(z_n)| = {m} at z_n = {z} is not above 1/2"
            )));
        }
    }
    z_seq
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let n = first_n + i;
            let b = w.phi.value(z);
            let (_, x) = w.psi.at(z).norming_vector()?;
            let f = VectorFunction::tensor(&witness_profile(b, w.alpha())?, &x);
            let image_norm = w.image_norm_with_probes(&f, sampler, &[z])?.value;
            let q_at = q_quantity(w, z);
            Ok(WitnessRow {
                n,
                z,
                phi_z: b,
                image_norm,
                q_at,
                bound: q_at * n as f64 / (n as f64 + 1.0),
            })
        })
        .collect()
}

/// One line of the sweep table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub scenario_id: String,
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub psi_norm: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "L")]
    pub l: f64,
    /// `L / C`, only for bounded scenarios.
    pub ratio: Option<f64>,
    pub bounded_verdict: Finiteness,
    pub compact_verdict: CompactVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

/// Criterion `C = max{q, |psi|}` against the family lower bound `L`.
pub fn sweep_row(s: &Scenario) -> Result<SweepRow> {
    let w = s.operator()?;
    let b = boundedness_verdict(&w, &s.sampler, &s.classifier)?;
    let compact_verdict = match compactness_verdict(&w, &s.sampler, &s.classifier) {
        Ok(r) => r.verdict,
        Err(Error::Precondition(_)) => CompactVerdict::Inconclusive,
        Err(e) => return Err(e),
    };
    let lb = lower_bound_opnorm(&w, &ExtremalFamily::standard(w.alpha()), &s.sampler)?;
    let c = b.q.value.max(b.psi.value);
    let ratio = (b.verdict == Finiteness::Bounded && c > 0.0).then(|| lb.value / c);
    Ok(SweepRow {
        scenario_id: s.id.clone(),
        alpha: s.alpha,
        beta: s.beta,
        q: b.q.value,
        psi_norm: b.psi.value,
        c,
        l: lb.value,
        ratio,
        bounded_verdict: b.verdict,
        compact_verdict,
    })
}

/// Runs [`sweep_row`] over a corpus, keeping corpus order.
pub fn equivalence_sweep(corpus: &[Scenario]) -> Result<SweepSummary> {
    let rows: Vec<SweepRow> = corpus.iter().map(sweep_row).collect::<Result<_>>()?;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    Ok(SweepSummary {
        min_ratio: ratios.iter().copied().reduce(f64::min),
        max_ratio: ratios.iter().copied().reduce(f64::max),
        rows,
    })
}

/// CSV with columns `scenario_id,alpha,beta,q,psi_norm,C,L,ratio,bounded_verdict,compact_verdict`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    wtr.write_record([
        "scenario_id",
        "alpha",
        "beta",
        "q",
        "psi_norm",
        "C",
        "L",
        "ratio",
        "bounded_verdict",
        "compact_verdict",
    ])?;
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnkernel::SelfMap;
    use crate::normedspace::{NormKind, OperatorMatrix};
    use crate::vspaces::{lambda_norm, SpaceSpec};
    use crate::wcop::OperatorSymbol;
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn scalar_op(phi: AnalyticScalar, psi: AnalyticScalar) -> WeightedCompositionOp {
        let s = NormedSpace::scalar();
        WeightedCompositionOp::new(
            OperatorSymbol::scalar(psi),
            SelfMap::new(phi).unwrap(),
            SpaceSpec::big(0.5, s).unwrap(),
            SpaceSpec::big(0.5, s).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn lower_bound_examples() {
        let s = DiskSampler::default();
        let id = scalar_op(AnalyticScalar::identity(), AnalyticScalar::one());
        let lb = lower_bound_opnorm(&id, &ExtremalFamily::standard(0.5), &s).unwrap();
        assert!(lb.value >= 1.0 - 1e-6, "{}", lb.value);

        let half = scalar_op(AnalyticScalar::affine(c(0.5), c(0.0)), AnalyticScalar::one());
        let lb = lower_bound_opnorm(&half, &[ExtremalFamily::Constants], &s).unwrap();
        assert!(lb.value >= 1.0 - 1e-12);

        let l2 = NormedSpace::new(2, NormKind::L2).unwrap();
        let a = OperatorMatrix::from_rows(l2, l2, &[&[c(2.0), c(0.0)], &[c(0.0), c(1.0)]]).unwrap();
        let sp = SpaceSpec::big(0.5, l2).unwrap();
        let w = WeightedCompositionOp::new(
            OperatorSymbol::constant(&a).unwrap(),
            SelfMap::identity(),
            sp,
            sp,
        )
        .unwrap();
        let lb = lower_bound_opnorm(&w, &[ExtremalFamily::Constants], &s).unwrap();
        assert!(lb.value >= 2.0 - 1e-12);
        assert_eq!(lb.best.unwrap().x, vec![c(1.0), c(0.0)]);
    }

    #[test]
    fn test_fn_property_examples() {
        let x = NormedSpace::scalar().basis(0);
        let (v, d) = test_fn_properties(c(0.5), &x, 0.5).unwrap();
        assert!(v.entries[0].norm() < 1e-15);
        assert_abs_diff_eq!(d.entries[0].re, 0.75f64.powf(-0.5), epsilon = 1e-12);
        let l2 = NormedSpace::new(3, NormKind::L2).unwrap();
        let (v, _) = test_fn_properties(C64::new(0.0, 0.9), &l2.basis(0), 0.25).unwrap();
        assert!(v.norm() < 1e-12);
        assert!(test_fn_properties(c(1e-8), &x, 0.5).is_err());
    }

    #[test]
    fn witness_profile_identities() {
        for (b, alpha) in [(c(0.7), 0.5), (C64::new(-0.3, 0.6), 0.25)] {
            let f = witness_profile(b, alpha).unwrap();
            assert!(f.value(b).norm() < 1e-12);
            let expect = (1.0 - b.norm_sqr()).powf(alpha - 1.0);
            assert!((f.derivative_at(b) - c(expect)).norm() < 1e-9 * expect);
        }
    }

    #[test]
    fn witness_growth_on_identity() {
        let s = DiskSampler::default();
        let id = scalar_op(AnalyticScalar::identity(), AnalyticScalar::one());
        let zs: Vec<C64> = (2..=10).map(|n| c(1.0 - 0.5f64.powi(n))).collect();
        let rows = noncompact_witness(&id, 2, &zs, &s).unwrap();
        for r in &rows {
            assert!(r.holds(1e-3), "{r:?}");
        }
        let half = scalar_op(AnalyticScalar::affine(c(0.5), c(0.0)), AnalyticScalar::one());
        assert!(noncompact_witness(&half, 2, &zs, &s).is_err());
        let zero = scalar_op(AnalyticScalar::identity(), AnalyticScalar::zero());
        for r in noncompact_witness(&zero, 2, &zs, &s).unwrap() {
            assert_eq!(r.image_norm, 0.0);
            assert!(r.holds(0.0));
        }
    }

    #[test]
    fn constants_family_is_t_psi() {
        let s = DiskSampler::new(12, 64, 8).unwrap();
        let l2 = NormedSpace::new(2, NormKind::L2).unwrap();
        let psi = OperatorSymbol::new(
            l2,
            l2,
            vec![
                vec![AnalyticScalar::real_poly(&[1.0, 0.5]), AnalyticScalar::zero()],
                vec![AnalyticScalar::real_poly(&[0.0, 0.0, 0.3]), AnalyticScalar::one()],
            ],
        )
        .unwrap();
        let sp = SpaceSpec::big(0.5, l2).unwrap();
        let w = WeightedCompositionOp::new(psi.clone(), SelfMap::scaled_identity(0.5).unwrap(), sp, sp).unwrap();
        let lb = lower_bound_opnorm(&w, &[ExtremalFamily::Constants], &s).unwrap();
        let t = unit_directions(&l2, DIRECTION_SEED)
            .iter()
            .map(|x| lambda_norm(&crate::wcop::t_psi(&psi, x).unwrap(), 0.5, &s).unwrap().value)
            .fold(0.0, f64::max);
        assert_eq!(lb.value, t);
    }

    #[test]
    fn directions_are_unit() {
        let sp = NormedSpace::new(3, NormKind::Linf).unwrap();
        let d = unit_directions(&sp, 1);
        assert_eq!(d.len(), 3 + RANDOM_DIRECTIONS);
        for v in d {
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
        }
        assert_eq!(unit_directions(&NormedSpace::scalar(), 1).len(), 1);
    }

    #[test]
    fn csv_layout() {
        let row = SweepRow {
            scenario_id: "u".into(),
            alpha: 0.25,
            beta: 0.75,
            q: 1.0,
            psi_norm: 1.0,
            c: 1.0,
            l: 1.0,
            ratio: None,
            bounded_verdict: Finiteness::Unbounded,
            compact_verdict: CompactVerdict::Inconclusive,
        };
        let mut buf = Vec::new();
        write_sweep_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "scenario_id,alpha,beta,q,psi_norm,C,L,ratio,bounded_verdict,compact_verdict\n\
             u,0.25,0.75,1.0,1.0,1.0,1.0,,unbounded,inconclusive\n"
        );
        let mut buf = Vec::new();
        write_sweep_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }
}
