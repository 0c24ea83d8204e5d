//! Vector-valued analytic functions and the function-space norms on them.
//!
//! For `alpha` in `(0, 1)` the primary norm on `Λ_α(X)` is the Bloch form
//! `|f(0)| + sup (1-|z|^2)^(1-alpha) |f'(z)|`. The two-point Hölder quotient is
//! available only as a lower-bound estimator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::classify::{classify_decay, ClassifierParams, Decay};
use crate::criteria::sampler::DiskSampler;
use crate::error::{Error, Result};
use crate::fnkernel::{check_point, AnalyticScalar, C64};
use crate::normedspace::{NormedSpace, Vector};

/// An analytic function `D -> C^n`, one [`AnalyticScalar`] per component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFunction {
    pub space: NormedSpace,
    pub components: Vec<AnalyticScalar>,
}

impl VectorFunction {
    pub fn new(space: NormedSpace, components: Vec<AnalyticScalar>) -> Result<Self> {
        let f = VectorFunction { space, components };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        if self.components.len() != self.space.dim {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim,
                got: self.components.len(),
            });
        }
        self.components.iter().try_for_each(|c| c.validate())
    }

    /// A scalar function viewed in the one-dimensional space.
    pub fn scalar(f: AnalyticScalar) -> Self {
        VectorFunction {
            space: NormedSpace::scalar(),
            components: vec![f],
        }
    }

    /// The elementary tensor `z -> f(z) x`.
    pub fn tensor(f: &AnalyticScalar, x: &Vector) -> Self {
        VectorFunction {
            space: x.space,
            components: x
                .entries
                .iter()
                .map(|&c| {
                    if c == C64::new(0.0, 0.0) {
                        AnalyticScalar::zero()
                    } else {
                        f.clone().scale(c)
                    }
                })
                .collect(),
        }
    }

    pub fn constant(x: &Vector) -> Self {
        Self::tensor(&AnalyticScalar::one(), x)
    }

    pub fn value(&self, z: C64) -> Vec<C64> {
        self.components.iter().map(|c| c.value(z)).collect()
    }

    pub fn derivative_at(&self, z: C64) -> Vec<C64> {
        self.components.iter().map(|c| c.derivative_at(z)).collect()
    }

    pub fn eval(&self, z: C64) -> Result<Vector> {
        check_point(z)?;
        self.validate()?;
        Ok(Vector {
            space: self.space,
            entries: self.value(z),
        })
    }

    pub fn deriv(&self, z: C64) -> Result<Vector> {
        check_point(z)?;
        self.validate()?;
        Ok(Vector {
            space: self.space,
            entries: self.derivative_at(z),
        })
    }

    /// The derivation operator `D`.
    pub fn derivative(&self) -> VectorFunction {
        self.map(|c| c.derivative())
    }

    pub fn map(&self, f: impl Fn(&AnalyticScalar) -> AnalyticScalar) -> VectorFunction {
        VectorFunction {
            space: self.space,
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn sub(&self, other: &VectorFunction) -> Result<VectorFunction> {
        self.combine(other, C64::new(-1.0, 0.0))
    }

    pub fn add(&self, other: &VectorFunction) -> Result<VectorFunction> {
        self.combine(other, C64::new(1.0, 0.0))
    }

    fn combine(&self, other: &VectorFunction, c: C64) -> Result<VectorFunction> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim,
                got: other.space.dim,
            });
        }
        Ok(VectorFunction {
            space: self.space,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| AnalyticScalar::sum(vec![a.clone(), b.clone().scale(c)]))
                .collect(),
        })
    }

    pub fn scaled(&self, c: C64) -> VectorFunction {
        self.map(|f| f.clone().scale(c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// `Λ_α(X)`
    Big,
    /// `Λ_α^0(X)`
    Little,
}

/// A Lipschitz-type space `Λ_α(X)` or `Λ_α^0(X)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub alpha: f64,
    pub space: NormedSpace,
    pub flavor: Flavor,
}

impl SpaceSpec {
    pub fn new(alpha: f64, space: NormedSpace, flavor: Flavor) -> Result<Self> {
        check_alpha(alpha)?;
        space.validate()?;
        Ok(SpaceSpec {
            alpha,
            space,
            flavor,
        })
    }

    pub fn big(alpha: f64, space: NormedSpace) -> Result<Self> {
        Self::new(alpha, space, Flavor::Big)
    }
}

/// The standard weight `nu_gamma(z) = (1-|z|^2)^gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub gamma: f64,
}

impl WeightSpec {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("weight exponent {gamma} < 0")));
        }
        Ok(WeightSpec { gamma })
    }

    pub fn at(&self, z: C64) -> f64 {
        weight(z, self.gamma)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Lipschitz exponent {alpha} outside (0, 1]"
        )));
    }
    Ok(())
}

/// `(1-|z|^2)^gamma`, with `0^0 = 1`.
pub fn weight(z: C64, gamma: f64) -> f64 {
    if gamma == 0.0 {
        1.0
    } else {
        (1.0 - z.norm_sqr()).max(0.0).powf(gamma)
    }
}

/// A sampled norm value with the point where its supremum part peaked.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub witness: C64,
    /// Running-maximum profile of the supremum part.
    pub profile: Vec<f64>,
}

/// Bloch-form norm `|f(0)| + sup (1-|z|^2)^(1-alpha) |f'(z)|`, `alpha` in `(0, 1)`.
pub fn lambda_norm(f: &VectorFunction, alpha: f64, sampler: &DiskSampler) -> Result<NormEstimate> {
    lambda_norm_with_probes(f, alpha, sampler, &[])
}

pub fn lambda_norm_with_probes(
    f: &VectorFunction,
    alpha: f64,
    sampler: &DiskSampler,
    probes: &[C64],
) -> Result<NormEstimate> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Bloch-form norm needs alpha in (0, 1), got {alpha}; use lambda1_norm for alpha = 1"
        )));
    }
    f.validate()?;
    pointwise_norm(
        alpha,
        &f.space,
        |z| f.value(z),
        |z| f.derivative_at(z),
        sampler,
        probes,
    )
}

/// `sup |f| + sup |f'|`, the norm used on `Λ_1(X)`.
pub fn lambda1_norm(f: &VectorFunction, sampler: &DiskSampler) -> Result<NormEstimate> {
    f.validate()?;
    pointwise_norm(
        1.0,
        &f.space,
        |z| f.value(z),
        |z| f.derivative_at(z),
        sampler,
        &[],
    )
}

/// Space norm of a function known only through pointwise value and derivative.
///
/// Bloch form for `alpha < 1`, `sup |f| + sup |f'|` at `alpha = 1`. The
/// witness and profile belong to the derivative part.
pub fn pointwise_norm<V, D>(
    alpha: f64,
    space: &NormedSpace,
    value: V,
    deriv: D,
    sampler: &DiskSampler,
    probes: &[C64],
) -> Result<NormEstimate>
where
    V: Fn(C64) -> Vec<C64> + Sync,
    D: Fn(C64) -> Vec<C64> + Sync,
{
    check_alpha(alpha)?;
    let head = if alpha < 1.0 {
        space.norm_of(&value(C64::new(0.0, 0.0)))
    } else {
        sampler
            .sup_with_probes(|z| space.norm_of(&value(z)), probes)?
            .value
    };
    let sup = sampler.sup_with_probes(
        |z| weight(z, 1.0 - alpha) * space.norm_of(&deriv(z)),
        probes,
    )?;
    Ok(NormEstimate {
        value: head + sup.value,
        witness: sup.witness,
        profile: sup.profile,
    })
}

/// Weighted sup norm `sup nu_gamma(z) |f(z)|`.
pub fn hinf_nu_norm(
    f: &VectorFunction,
    w: &WeightSpec,
    sampler: &DiskSampler,
) -> Result<NormEstimate> {
    f.validate()?;
    let sup = sampler.sup(|z| w.at(z) * f.space.norm_of(&f.value(z)))?;
    Ok(NormEstimate {
        value: sup.value,
        witness: sup.witness,
        profile: sup.profile,
    })
}

/// Source- or target-space norm: Bloch form for `alpha < 1`, `Λ_1` form at 1.
pub fn space_norm(f: &VectorFunction, alpha: f64, sampler: &DiskSampler) -> Result<NormEstimate> {
    space_norm_with_probes(f, alpha, sampler, &[])
}

pub fn space_norm_with_probes(
    f: &VectorFunction,
    alpha: f64,
    sampler: &DiskSampler,
    probes: &[C64],
) -> Result<NormEstimate> {
    f.validate()?;
    pointwise_norm(
        alpha,
        &f.space,
        |z| f.value(z),
        |z| f.derivative_at(z),
        sampler,
        probes,
    )
}

/// Lower bound for the two-point seminorm `sup |f(z1)-f(z2)| / |z1-z2|^alpha`.
///
/// Pairs: `pair_budget` seeded random pairs (half in the open disk, half on the
/// boundary circle) plus near-diagonal pairs around the Bloch-form witness.
pub fn lipschitz_seminorm_estimate(
    f: &VectorFunction,
    alpha: f64,
    pair_budget: usize,
    seed: u64,
) -> Result<f64> {
    check_alpha(alpha)?;
    if pair_budget == 0 {
        return Err(Error::InvalidParameter("pair_budget must be >= 1".into()));
    }
    f.validate()?;
    let quotient = |a: C64, b: C64| -> f64 {
        let d = (a - b).norm();
        if d == 0.0 {
            return 0.0;
        }
        let fa = f.value(a);
        let fb = f.value(b);
        let diff: Vec<C64> = fa.iter().zip(&fb).map(|(x, y)| x - y).collect();
        f.space.norm_of(&diff) / d.powf(alpha)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for i in 0..pair_budget {
        let (a, b) = if i % 2 == 0 {
            (random_disk_point(&mut rng), random_disk_point(&mut rng))
        } else {
            (
                C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)),
                C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)),
            )
        };
        best = best.max(quotient(a, b));
    }

    // near-diagonal pairs around the point where the weighted derivative peaks
    let centre = if alpha < 1.0 {
        lambda_norm(f, alpha, &DiskSampler::with_depth(16))?.witness
    } else {
        DiskSampler::with_depth(16)
            .sup(|z| f.space.norm_of(&f.derivative_at(z)))?
            .witness
    };
    let dirs: Vec<C64> = (0..8)
        .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0))
        .collect();
    for j in 1..=24 {
        let h = 0.5f64.powi(j);
        for &u in &dirs {
            let a = centre - u * (h / 2.0);
            let b = centre + u * (h / 2.0);
            if a.norm() <= 1.0 && b.norm() <= 1.0 {
                best = best.max(quotient(a, b));
            }
        }
        // radial pair reaching towards the boundary
        let r = centre.norm();
        if r > 0.0 {
            let u = centre / r;
            let outer = (r + h).min(1.0);
            best = best.max(quotient(centre, u * outer));
        }
    }
    Ok(best)
}

fn random_disk_point(rng: &mut ChaCha8Rng) -> C64 {
    let r = rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Radial decay profile of the weighted derivative and a membership verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayProfile {
    pub radii: Vec<f64>,
    /// `S(r_j) = max_{|z| = r_j} (1-|z|^2)^(1-alpha) |f'(z)|`.
    pub values: Vec<f64>,
    pub verdict: Decay,
}

impl DecayProfile {
    pub fn is_member(&self) -> bool {
        self.verdict == Decay::Vanishing
    }
}

/// Little-space membership check for a single function.
///
/// Member when `S(r_max) <= 1e-6 (1 + |f|)` or the tail decays geometrically.
pub fn little_space_profile(
    f: &VectorFunction,
    alpha: f64,
    sampler: &DiskSampler,
) -> Result<DecayProfile> {
    let norm = lambda_norm(f, alpha, sampler)?;
    let sup = sampler.sup(|z| weight(z, 1.0 - alpha) * f.space.norm_of(&f.derivative_at(z)))?;
    let verdict = classify_decay(
        &sup.circle,
        1e-6 * (1.0 + norm.value),
        &ClassifierParams::default(),
    );
    Ok(DecayProfile {
        radii: sampler.radii(),
        values: sup.circle,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normedspace::NormKind;
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn scalar(coeffs: &[f64]) -> VectorFunction {
        VectorFunction::scalar(AnalyticScalar::real_poly(coeffs))
    }

    #[test]
    fn lambda_norm_examples() {
        let s = DiskSampler::default();
        let v = lambda_norm(&scalar(&[0.0, 1.0]), 0.5, &s).unwrap();
        assert_abs_diff_eq!(v.value, 1.0, epsilon = 1e-12);
        assert_eq!(v.witness, r(0.0));

        let x = Vector::new(NormedSpace::new(2, NormKind::L2).unwrap(), vec![r(0.0), r(2.0)]).unwrap();
        let fx = VectorFunction::tensor(&AnalyticScalar::identity(), &x);
        assert_abs_diff_eq!(lambda_norm(&fx, 0.5, &s).unwrap().value, 2.0, epsilon = 1e-12);

        assert!(lambda_norm(&scalar(&[0.0, 1.0]), 1.0, &s).is_err());
    }

    #[test]
    fn lambda1_norm_examples() {
        let s = DiskSampler::default();
        let x = Vector::new(NormedSpace::new(2, NormKind::L1).unwrap(), vec![r(1.0), r(-2.0)]).unwrap();
        let c = VectorFunction::constant(&x);
        assert_abs_diff_eq!(lambda1_norm(&c, &s).unwrap().value, 3.0, epsilon = 1e-12);
        let id = lambda1_norm(&scalar(&[0.0, 1.0]), &s).unwrap().value;
        assert_abs_diff_eq!(id, 2.0, epsilon = 1e-5);
    }

    #[test]
    fn hinf_examples() {
        let s = DiskSampler::default();
        let one = hinf_nu_norm(&scalar(&[1.0]), &WeightSpec::new(0.5).unwrap(), &s).unwrap();
        assert_eq!(one.value, 1.0);
        assert_eq!(one.witness, r(0.0));
        assert!(WeightSpec::new(-0.1).is_err());
    }

    #[test]
    fn seminorm_estimate_examples() {
        let c = lipschitz_seminorm_estimate(&scalar(&[0.7]), 0.5, 100, 1).unwrap();
        assert_eq!(c, 0.0);
        let id = lipschitz_seminorm_estimate(&scalar(&[0.0, 1.0]), 1.0, 100, 1).unwrap();
        assert_abs_diff_eq!(id, 1.0, epsilon = 1e-12);
        assert!(lipschitz_seminorm_estimate(&scalar(&[0.0, 1.0]), 0.5, 0, 1).is_err());
    }

    #[test]
    fn zero_function_is_degenerate_but_fine() {
        let s = DiskSampler::default();
        let z = scalar(&[0.0]);
        assert_eq!(lambda_norm(&z, 0.5, &s).unwrap().value, 0.0);
        assert_eq!(lambda1_norm(&z, &s).unwrap().value, 0.0);
        assert!(little_space_profile(&z, 0.5, &s).unwrap().is_member());
    }

    #[test]
    fn dimension_checks() {
        let sp = NormedSpace::new(2, NormKind::L2).unwrap();
        assert!(VectorFunction::new(sp, vec![AnalyticScalar::one()]).is_err());
        assert!(scalar(&[1.0]).eval(r(2.0)).is_err());
    }
}
