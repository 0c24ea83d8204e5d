//! Weighted composition operators `W f(z) = psi_z f(phi(z))` and the auxiliary
//! operators built around them: derivation, dilation `K_r`, Taylor truncation
//! `L_n`, `T_psi`, multiplication by `phi^k`, coefficient functionals and the
//! boundary extension check.
//!
//! Compositions `f ∘ phi` are never expanded into coefficients; everything is
//! evaluated pointwise.

use serde::{Deserialize, Serialize};

use crate::criteria::sampler::DiskSampler;
use crate::error::{Error, Result};
use crate::fnkernel::{check_point, AnalyticScalar, SelfMap, C64};
use crate::normedspace::{check_pair, NormedSpace, OperatorMatrix, Vector};
use crate::vspaces::{pointwise_norm, NormEstimate, SpaceSpec, VectorFunction};

/// An analytic `L(X, Y)`-valued symbol, one scalar function per matrix entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorSymbol {
    pub domain: NormedSpace,
    pub codomain: NormedSpace,
    /// Row-major, `codomain.dim` rows of `domain.dim` entries.
    pub entries: Vec<Vec<AnalyticScalar>>,
}

/// JSON form of a symbol: `{"entries": [[fnspec, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub entries: Vec<Vec<AnalyticScalar>>,
}

impl OperatorSymbol {
    pub fn new(
        domain: NormedSpace,
        codomain: NormedSpace,
        entries: Vec<Vec<AnalyticScalar>>,
    ) -> Result<Self> {
        domain.validate()?;
        codomain.validate()?;
        check_pair(domain, codomain)?;
        if entries.len() != codomain.dim {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim,
                got: entries.len(),
            });
        }
        for row in &entries {
            if row.len() != domain.dim {
                return Err(Error::DimensionMismatch {
                    expected: domain.dim,
                    got: row.len(),
                });
            }
            row.iter().try_for_each(|e| e.validate())?;
        }
        Ok(OperatorSymbol {
            domain,
            codomain,
            entries,
        })
    }

    /// Scalar symbol `psi: D -> C` acting on `C` with the given norm kind.
    pub fn scalar(f: AnalyticScalar) -> Self {
        let s = NormedSpace::scalar();
        OperatorSymbol {
            domain: s,
            codomain: s,
            entries: vec![vec![f]],
        }
    }

    /// The constant symbol `z -> A`.
    pub fn constant(a: &OperatorMatrix) -> Result<Self> {
        let entries = (0..a.rows())
            .map(|i| {
                (0..a.cols())
                    .map(|j| AnalyticScalar::constant(a.get(i, j)))
                    .collect()
            })
            .collect();
        Self::new(a.domain, a.codomain, entries)
    }

    /// `z -> f(z) I` on a single space.
    pub fn diagonal(space: NormedSpace, f: &AnalyticScalar) -> Result<Self> {
        let entries = (0..space.dim)
            .map(|i| {
                (0..space.dim)
                    .map(|j| {
                        if i == j {
                            f.clone()
                        } else {
                            AnalyticScalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(space, space, entries)
    }

    pub fn identity(space: NormedSpace) -> Result<Self> {
        Self::diagonal(space, &AnalyticScalar::one())
    }

    pub fn from_spec(spec: &SymbolSpec, domain: NormedSpace, codomain: NormedSpace) -> Result<Self> {
        Self::new(domain, codomain, spec.entries.clone())
    }

    pub fn to_spec(&self) -> SymbolSpec {
        SymbolSpec {
            entries: self.entries.clone(),
        }
    }

    fn assemble(&self, f: impl Fn(&AnalyticScalar) -> C64) -> OperatorMatrix {
        OperatorMatrix {
            domain: self.domain,
            codomain: self.codomain,
            entries: self.entries.iter().flatten().map(f).collect(),
        }
    }

    /// `psi_z`, unchecked.
    pub fn at(&self, z: C64) -> OperatorMatrix {
        self.assemble(|e| e.value(z))
    }

    /// `psi'_z`, unchecked.
    pub fn deriv_at(&self, z: C64) -> OperatorMatrix {
        self.assemble(|e| e.derivative_at(z))
    }

    pub fn eval(&self, z: C64) -> Result<OperatorMatrix> {
        check_point(z)?;
        Ok(self.at(z))
    }

    /// `|psi_z|` in `L(X, Y)`.
    ///
    /// The norm pair is checked at construction, so an error here cannot
    /// happen; NaN is returned instead of panicking and surfaces as an
    /// evaluation error in the sampler.
    pub fn norm_at(&self, z: C64) -> f64 {
        self.at(z).op_norm().unwrap_or(f64::NAN)
    }

    pub fn deriv_norm_at(&self, z: C64) -> f64 {
        self.deriv_at(z).op_norm().unwrap_or(f64::NAN)
    }

    fn map(&self, f: impl Fn(&AnalyticScalar) -> AnalyticScalar) -> OperatorSymbol {
        OperatorSymbol {
            domain: self.domain,
            codomain: self.codomain,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Entrywise derivative `psi'`.
    pub fn derivative(&self) -> OperatorSymbol {
        self.map(|e| e.derivative())
    }

    /// `g psi`, used for `phi' psi`.
    pub fn times_scalar(&self, g: &AnalyticScalar) -> OperatorSymbol {
        self.map(|e| g.mul(e))
    }

    pub fn scaled(&self, c: C64) -> OperatorSymbol {
        self.map(|e| e.clone().scale(c))
    }

    /// `psi_z x` for every `z`, unchecked.
    pub fn apply_at(&self, z: C64, x: &[C64]) -> Vec<C64> {
        self.at(z).apply(x)
    }
}

/// `W_{psi, phi}: Λ_alpha(X) -> Λ_beta(Y)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedCompositionOp {
    pub psi: OperatorSymbol,
    pub phi: SelfMap,
    pub source: SpaceSpec,
    pub target: SpaceSpec,
}

impl WeightedCompositionOp {
    pub fn new(psi: OperatorSymbol, phi: SelfMap, source: SpaceSpec, target: SpaceSpec) -> Result<Self> {
        if psi.domain != source.space {
            return Err(Error::DimensionMismatch {
                expected: source.space.dim,
                got: psi.domain.dim,
            });
        }
        if psi.codomain != target.space {
            return Err(Error::DimensionMismatch {
                expected: target.space.dim,
                got: psi.codomain.dim,
            });
        }
        Ok(WeightedCompositionOp {
            psi,
            phi,
            source,
            target,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.source.alpha
    }

    pub fn beta(&self) -> f64 {
        self.target.alpha
    }

    fn check_input(&self, f: &VectorFunction) -> Result<()> {
        if f.space != self.source.space {
            return Err(Error::DimensionMismatch {
                expected: self.source.space.dim,
                got: f.space.dim,
            });
        }
        Ok(())
    }

    /// `psi_z f(phi(z))`.
    pub fn apply(&self, f: &VectorFunction, z: C64) -> Result<Vector> {
        check_point(z)?;
        self.check_input(f)?;
        Ok(Vector {
            space: self.target.space,
            entries: self.value_unchecked(f, z),
        })
    }

    /// `phi'(z) psi_z f'(phi(z)) + psi'_z f(phi(z))`.
    pub fn apply_deriv(&self, f: &VectorFunction, z: C64) -> Result<Vector> {
        check_point(z)?;
        self.check_input(f)?;
        Ok(Vector {
            space: self.target.space,
            entries: self.deriv_unchecked(f, z),
        })
    }

    pub(crate) fn value_unchecked(&self, f: &VectorFunction, z: C64) -> Vec<C64> {
        self.psi.apply_at(z, &f.value(self.phi.value(z)))
    }

    pub(crate) fn deriv_unchecked(&self, f: &VectorFunction, z: C64) -> Vec<C64> {
        let w = self.phi.value(z);
        let dphi = self.phi.derivative_at(z);
        let first = self.psi.at(z).apply(&f.derivative_at(w));
        let second = self.psi.deriv_at(z).apply(&f.value(w));
        first
            .iter()
            .zip(&second)
            .map(|(a, b)| dphi * a + b)
            .collect()
    }

    /// The two operators of `D W = W_{phi' psi, phi} D + W_{psi', phi}`.
    pub fn decomposition(&self) -> (WeightedCompositionOp, WeightedCompositionOp) {
        let dphi = self.phi.function().derivative();
        let first = WeightedCompositionOp {
            psi: self.psi.times_scalar(&dphi),
            ..self.clone()
        };
        let second = WeightedCompositionOp {
            psi: self.psi.derivative(),
            ..self.clone()
        };
        (first, second)
    }

    /// `W_{phi' psi, phi}(f')(z)` and `W_{psi', phi}(f)(z)`.
    pub fn decomposition_terms(&self, f: &VectorFunction, z: C64) -> Result<(Vector, Vector)> {
        let (first, second) = self.decomposition();
        Ok((first.apply(&f.derivative(), z)?, second.apply(f, z)?))
    }

    /// Target-space norm of `W f`.
    pub fn image_norm(&self, f: &VectorFunction, sampler: &DiskSampler) -> Result<NormEstimate> {
        self.image_norm_with_probes(f, sampler, &[])
    }

    pub fn image_norm_with_probes(
        &self,
        f: &VectorFunction,
        sampler: &DiskSampler,
        probes: &[C64],
    ) -> Result<NormEstimate> {
        self.check_input(f)?;
        f.validate()?;
        pointwise_norm(
            self.beta(),
            &self.target.space,
            |z| self.value_unchecked(f, z),
            |z| self.deriv_unchecked(f, z),
            sampler,
            probes,
        )
    }

    /// `|W f - W K_r f|` in the target space.
    pub fn dilation_defect(&self, f: &VectorFunction, r: f64, sampler: &DiskSampler) -> Result<f64> {
        let diff = f.sub(&dilate(f, r)?)?;
        Ok(self.image_norm(&diff, sampler)?.value)
    }
}

/// `K_r f(z) = f(r z)`.
pub fn dilate(f: &VectorFunction, r: f64) -> Result<VectorFunction> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("dilation radius {r} outside (0, 1)")));
    }
    Ok(f.map(|c| c.dilate(r)))
}

/// `L_n f`, the degree-`n` Taylor polynomial.
pub fn truncate(f: &VectorFunction, n: usize) -> VectorFunction {
    f.map(|c| c.truncate(n))
}

/// `T_psi x = (z -> psi_z x)`.
pub fn t_psi(psi: &OperatorSymbol, x: &Vector) -> Result<VectorFunction> {
    if x.space != psi.domain {
        return Err(Error::DimensionMismatch {
            expected: psi.domain.dim,
            got: x.space.dim,
        });
    }
    let zero = C64::new(0.0, 0.0);
    let components = psi
        .entries
        .iter()
        .map(|row| {
            let terms: Vec<AnalyticScalar> = row
                .iter()
                .zip(&x.entries)
                .filter(|(_, &c)| c != zero)
                .map(|(e, &c)| {
                    if c == C64::new(1.0, 0.0) {
                        e.clone()
                    } else {
                        e.clone().scale(c)
                    }
                })
                .collect();
            match terms.len() {
                0 => AnalyticScalar::zero(),
                1 => terms.into_iter().next().unwrap(),
                _ => AnalyticScalar::sum(terms),
            }
        })
        .collect();
    VectorFunction::new(psi.codomain, components)
}

/// `M_{phi^k} f = phi^k f`.
pub fn multiply_phik(phi: &SelfMap, k: usize, f: &VectorFunction) -> Result<VectorFunction> {
    if k == 0 {
        return Err(Error::InvalidParameter("multiply_phik needs k >= 1".into()));
    }
    let base = phi.function();
    let mut pk = base.clone();
    for _ in 1..k {
        pk = pk.mul(base);
    }
    Ok(f.map(|c| pk.mul(c)))
}

/// The coefficient functional `q_k f`, the `k`-th Taylor coefficient vector.
pub fn coefficient(f: &VectorFunction, k: usize) -> Vector {
    Vector {
        space: f.space,
        entries: f.components.iter().map(|c| c.taylor_coeff(k)).collect(),
    }
}

/// Radial levels used to approach a boundary point.
pub const RADIAL_LEVELS: std::ops::RangeInclusive<i32> = 10..=20;

/// Largest gap between `psi_w f(phi(w))` evaluated on the circle and its
/// radial limit along `(1 - 2^-j) w`.
///
/// The radial values have errors of order `2^-j`, so the limit is read off a
/// Richardson table built on the last levels of the sequence.
pub fn restrict_extend_check(
    w_op: &WeightedCompositionOp,
    f: &VectorFunction,
    boundary_points: &[C64],
) -> Result<f64> {
    w_op.check_input(f)?;
    let mut worst: f64 = 0.0;
    for &w in boundary_points {
        if !((w.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::Precondition(format!("boundary point {w} is not unimodular")));
        }
        let direct = w_op.value_unchecked(f, w);
        let seq: Vec<Vec<C64>> = RADIAL_LEVELS
            .map(|j| w_op.value_unchecked(f, w * (1.0 - 0.5f64.powi(j))))
            .collect();
        let limit = richardson(&seq, 3);
        let gap: Vec<C64> = direct.iter().zip(&limit).map(|(a, b)| a - b).collect();
        worst = worst.max(w_op.target.space.norm_of(&gap));
    }
    Ok(worst)
}

/// Richardson extrapolation for a sequence with step ratio 1/2.
fn richardson(seq: &[Vec<C64>], order: usize) -> Vec<C64> {
    let mut table: Vec<Vec<C64>> = seq.to_vec();
    let mut factor = 1.0;
    for _ in 0..order.min(seq.len().saturating_sub(1)) {
        factor *= 2.0;
        table = table
            .windows(2)
            .map(|p| {
                p[1].iter()
                    .zip(&p[0])
                    .map(|(hi, lo)| (hi * factor - lo) / (factor - 1.0))
                    .collect()
            })
            .collect();
    }
    table.pop().unwrap_or_default()
}
