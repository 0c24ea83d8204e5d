//! Finite-dimensional complex normed spaces and induced operator norms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fnkernel::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl NormKind {
    pub fn norm(self, v: &[C64]) -> f64 {
        match self {
            NormKind::L1 => v.iter().map(|x| x.norm()).sum(),
            NormKind::L2 => v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
            NormKind::Linf => v.iter().map(|x| x.norm()).fold(0.0, f64::max),
        }
    }

    /// The norm of the dual space, used for functionals `x -> <row, x>`.
    fn dual(self) -> NormKind {
        match self {
            NormKind::L1 => NormKind::Linf,
            NormKind::L2 => NormKind::L2,
            NormKind::Linf => NormKind::L1,
        }
    }
}

/// `C^dim` with one of the classical norms. JSON: `{"dim": n, "norm": "l2"}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormedSpace {
    pub dim: usize,
    pub norm: NormKind,
}

impl NormedSpace {
    pub fn new(dim: usize, norm: NormKind) -> Result<Self> {
        let s = NormedSpace { dim, norm };
        s.validate()?;
        Ok(s)
    }

    /// The scalar field as a one-dimensional space.
    pub fn scalar() -> Self {
        NormedSpace {
            dim: 1,
            norm: NormKind::L2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("space dimension must be >= 1".into()));
        }
        Ok(())
    }

    pub fn norm_of(&self, v: &[C64]) -> f64 {
        self.norm.norm(v)
    }

    pub fn basis(&self, j: usize) -> Vector {
        let mut entries = vec![C64::new(0.0, 0.0); self.dim];
        entries[j] = C64::new(1.0, 0.0);
        Vector {
            space: *self,
            entries,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vector {
    pub space: NormedSpace,
    pub entries: Vec<C64>,
}

impl Vector {
    pub fn new(space: NormedSpace, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != space.dim {
            return Err(Error::DimensionMismatch {
                expected: space.dim,
                got: entries.len(),
            });
        }
        Ok(Vector { space, entries })
    }

    pub fn norm(&self) -> f64 {
        self.space.norm_of(&self.entries)
    }

    pub fn scaled(&self, c: f64) -> Vector {
        Vector {
            space: self.space,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }
}

/// Shorthand for [`Vector::norm`].
pub fn vec_norm(v: &Vector) -> f64 {
    v.norm()
}

/// A linear map between two [`NormedSpace`]s, stored row-major (`codomain.dim` rows).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorMatrix {
    pub domain: NormedSpace,
    pub codomain: NormedSpace,
    pub entries: Vec<C64>,
}

impl OperatorMatrix {
    pub fn new(domain: NormedSpace, codomain: NormedSpace, entries: Vec<C64>) -> Result<Self> {
        let expected = domain.dim * codomain.dim;
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: entries.len(),
            });
        }
        Ok(OperatorMatrix {
            domain,
            codomain,
            entries,
        })
    }

    pub fn from_rows(domain: NormedSpace, codomain: NormedSpace, rows: &[&[C64]]) -> Result<Self> {
        if rows.len() != codomain.dim {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim,
                got: rows.len(),
            });
        }
        let entries: Vec<C64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(domain, codomain, entries)
    }

    pub fn rows(&self) -> usize {
        self.codomain.dim
    }

    pub fn cols(&self) -> usize {
        self.domain.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols() + j]
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        apply_raw(&self.entries, self.rows(), self.cols(), x)
    }

    pub fn apply_vector(&self, x: &Vector) -> Result<Vector> {
        if x.space.dim != self.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                got: x.space.dim,
            });
        }
        Ok(Vector {
            space: self.codomain,
            entries: self.apply(&x.entries),
        })
    }

    pub fn scaled(&self, c: C64) -> OperatorMatrix {
        OperatorMatrix {
            domain: self.domain,
            codomain: self.codomain,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if other.codomain.dim != self.domain.dim {
            return Err(Error::DimensionMismatch {
                expected: self.domain.dim,
                got: other.codomain.dim,
            });
        }
        let (m, k, n) = (self.rows(), self.cols(), other.cols());
        let mut entries = vec![C64::new(0.0, 0.0); m * n];
        for i in 0..m {
            for l in 0..k {
                let a = self.get(i, l);
                for j in 0..n {
                    entries[i * n + j] += a * other.get(l, j);
                }
            }
        }
        OperatorMatrix::new(other.domain, self.codomain, entries)
    }

    /// Induced norm `sup_{|x| <= 1} |A x|`.
    pub fn op_norm(&self) -> Result<f64> {
        check_pair(self.domain, self.codomain)?;
        Ok(induced_norm(
            self.domain,
            self.codomain,
            &self.entries,
        ))
    }

    /// Induced norm together with a unit vector attaining it.
    pub fn norming_vector(&self) -> Result<(f64, Vector)> {
        check_pair(self.domain, self.codomain)?;
        let (v, x) = norming(self.domain, self.codomain, &self.entries);
        Ok((
            v,
            Vector {
                space: self.domain,
                entries: x,
            },
        ))
    }
}

/// Shorthand for [`OperatorMatrix::op_norm`].
pub fn op_norm(a: &OperatorMatrix) -> Result<f64> {
    a.op_norm()
}

/// Rejects norm pairs whose induced norm is not computed exactly or by power iteration.
pub fn check_pair(domain: NormedSpace, codomain: NormedSpace) -> Result<()> {
    use NormKind::*;
    let ok = domain.dim == 1
        || codomain.dim == 1
        || domain.norm == L1
        || matches!((domain.norm, codomain.norm), (L2, L2) | (Linf, Linf));
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedNormPair {
            from: domain.norm,
            to: codomain.norm,
        })
    }
}

pub(crate) fn apply_raw(a: &[C64], rows: usize, cols: usize, x: &[C64]) -> Vec<C64> {
    (0..rows)
        .map(|i| {
            a[i * cols..(i + 1) * cols]
                .iter()
                .zip(x)
                .map(|(p, q)| p * q)
                .sum()
        })
        .collect()
}

/// Induced norm for a pair already accepted by [`check_pair`].
pub(crate) fn induced_norm(domain: NormedSpace, codomain: NormedSpace, a: &[C64]) -> f64 {
    norming(domain, codomain, a).0
}

fn unit_phase(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        z / r
    }
}

fn norming(domain: NormedSpace, codomain: NormedSpace, a: &[C64]) -> (f64, Vec<C64>) {
    let (m, n) = (codomain.dim, domain.dim);
    let zero = C64::new(0.0, 0.0);
    if n == 1 {
        // every unit vector is a unimodular multiple of e_1
        let mut x = vec![zero; 1];
        x[0] = C64::new(1.0, 0.0);
        return (codomain.norm_of(a), x);
    }
    if m == 1 {
        // a functional: its norm is the dual norm of the row
        let v = domain.norm.dual().norm(a);
        let x: Vec<C64> = match domain.norm {
            NormKind::L1 => {
                let j = argmax(a.iter().map(|c| c.norm()));
                let mut x = vec![zero; n];
                x[j] = unit_phase(a[j]).conj();
                x
            }
            NormKind::L2 => {
                if v == 0.0 {
                    let mut x = vec![zero; n];
                    x[0] = C64::new(1.0, 0.0);
                    x
                } else {
                    a.iter().map(|c| c.conj() / v).collect()
                }
            }
            NormKind::Linf => a.iter().map(|c| unit_phase(*c).conj()).collect(),
        };
        return (v, x);
    }
    match (domain.norm, codomain.norm) {
        (NormKind::L1, _) => {
            let cols: Vec<f64> = (0..n)
                .map(|j| {
                    let col: Vec<C64> = (0..m).map(|i| a[i * n + j]).collect();
                    codomain.norm_of(&col)
                })
                .collect();
            let j = argmax(cols.iter().copied());
            let mut x = vec![zero; n];
            x[j] = C64::new(1.0, 0.0);
            (cols[j], x)
        }
        (NormKind::Linf, NormKind::Linf) => {
            let sums: Vec<f64> = (0..m)
                .map(|i| a[i * n..(i + 1) * n].iter().map(|c| c.norm()).sum())
                .collect();
            let i = argmax(sums.iter().copied());
            let x = a[i * n..(i + 1) * n]
                .iter()
                .map(|c| unit_phase(*c).conj())
                .collect();
            (sums[i], x)
        }
        (NormKind::L2, NormKind::L2) => spectral_norm(a, m, n),
        _ => unreachable!("pair rejected by check_pair"),
    }
}

fn argmax(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in it.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Iteration cap for the spectral-norm power iteration.
pub const POWER_ITERATION_CAP: usize = 500;
/// Relative-change stopping threshold for the power iteration.
pub const POWER_ITERATION_TOL: f64 = 1e-12;
/// Number of times `A*A` is squared before iterating.
const SQUARINGS: usize = 6;

/// Largest singular value by power iteration on `A*A`.
///
/// `A*A` is first squared a few times (trace-normalised) so that the iteration
/// converges even for close top eigenvalues; the eigenvalue is then read off the
/// Rayleigh quotient of `A*A` itself. Starts: all-ones, then every basis vector.
fn spectral_norm(a: &[C64], m: usize, n: usize) -> (f64, Vec<C64>) {
    let zero = C64::new(0.0, 0.0);
    let mut gram = vec![zero; n * n];
    for i in 0..n {
        for j in 0..n {
            gram[i * n + j] = (0..m).map(|k| a[k * n + i].conj() * a[k * n + j]).sum();
        }
    }
    let trace: f64 = (0..n).map(|i| gram[i * n + i].re).sum();
    let mut fallback = vec![zero; n];
    fallback[0] = C64::new(1.0, 0.0);
    if trace <= 0.0 {
        return (0.0, fallback);
    }
    let mut pow: Vec<C64> = gram.iter().map(|x| x / trace).collect();
    for _ in 0..SQUARINGS {
        let mut sq = vec![zero; n * n];
        for i in 0..n {
            for l in 0..n {
                let p = pow[i * n + l];
                for j in 0..n {
                    sq[i * n + j] += p * pow[l * n + j];
                }
            }
        }
        let t: f64 = (0..n).map(|i| sq[i * n + i].re).sum();
        if t <= 0.0 || !t.is_finite() {
            break;
        }
        pow = sq.into_iter().map(|x| x / t).collect();
    }

    let rayleigh = |v: &[C64]| -> f64 {
        let gv = apply_raw(&gram, n, n, v);
        v.iter().zip(&gv).map(|(p, q)| p.conj() * q).sum::<C64>().re
    };
    let mut starts: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0); n]];
    for j in 0..n {
        let mut e = vec![zero; n];
        e[j] = C64::new(1.0, 0.0);
        starts.push(e);
    }
    let mut best = (f64::NEG_INFINITY, fallback);
    for start in starts {
        let norm = NormKind::L2.norm(&start);
        let mut v: Vec<C64> = start.iter().map(|x| x / norm).collect();
        let mut lambda = rayleigh(&v);
        for _ in 0..POWER_ITERATION_CAP {
            let w = apply_raw(&pow, n, n, &v);
            let wn = NormKind::L2.norm(&w);
            if wn < 1e-300 {
                break;
            }
            v = w.into_iter().map(|x| x / wn).collect();
            let next = rayleigh(&v);
            let done = (next - lambda).abs() <= POWER_ITERATION_TOL * next.abs();
            lambda = next;
            if done {
                break;
            }
        }
        if lambda > best.0 {
            best = (lambda, v);
        }
    }
    (best.0.max(0.0).sqrt(), best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn sp(dim: usize, norm: NormKind) -> NormedSpace {
        NormedSpace::new(dim, norm).unwrap()
    }

    #[test]
    fn vec_norm_examples() {
        let v = Vector::new(sp(2, NormKind::L2), vec![r(3.0), r(4.0)]).unwrap();
        assert_abs_diff_eq!(vec_norm(&v), 5.0);
        let v = Vector::new(sp(3, NormKind::L1), vec![r(1.0), r(-1.0), C64::new(0.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(vec_norm(&v), 3.0);
        let v = Vector::new(sp(2, NormKind::Linf), vec![r(0.2), r(-0.7)]).unwrap();
        assert_abs_diff_eq!(vec_norm(&v), 0.7);
        assert!(Vector::new(sp(2, NormKind::L1), vec![r(1.0)]).is_err());
        assert!(NormedSpace::new(0, NormKind::L1).is_err());
    }

    #[test]
    fn op_norm_examples() {
        let l2 = sp(2, NormKind::L2);
        let a = OperatorMatrix::from_rows(l2, l2, &[&[r(2.0), r(0.0)], &[r(0.0), r(1.0)]]).unwrap();
        assert_abs_diff_eq!(a.op_norm().unwrap(), 2.0, epsilon = 1e-12);

        let l1 = sp(2, NormKind::L1);
        let a = OperatorMatrix::from_rows(l1, l1, &[&[r(1.0), r(0.0)], &[r(1.0), r(0.0)]]).unwrap();
        assert_abs_diff_eq!(a.op_norm().unwrap(), 2.0);

        let a = OperatorMatrix::from_rows(l2, l2, &[&[r(0.0), r(1.0)], &[r(0.0), r(0.0)]]).unwrap();
        assert_abs_diff_eq!(a.op_norm().unwrap(), 1.0, epsilon = 1e-12);

        let linf = sp(2, NormKind::Linf);
        let a = OperatorMatrix::from_rows(linf, l1, &[&[r(1.0), r(1.0)], &[r(1.0), r(-1.0)]]).unwrap();
        assert!(matches!(a.op_norm(), Err(Error::UnsupportedNormPair { .. })));
    }

    #[test]
    fn orthogonal_start_vector_is_not_a_trap() {
        // top right-singular vector (1,-1) is orthogonal to the all-ones start
        let l2 = sp(2, NormKind::L2);
        let a = OperatorMatrix::from_rows(l2, l2, &[&[r(2.0), r(-2.0)], &[r(1.0), r(1.0)]]).unwrap();
        assert_abs_diff_eq!(a.op_norm().unwrap(), 8f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn norming_vector_attains_norm() {
        let l2 = sp(3, NormKind::L2);
        let linf = sp(3, NormKind::Linf);
        let l1 = sp(3, NormKind::L1);
        let rows: [&[C64]; 3] = [
            &[r(1.0), C64::new(0.0, 2.0), r(-0.5)],
            &[r(0.3), r(0.0), C64::new(1.0, 1.0)],
            &[r(-1.0), r(0.2), r(0.1)],
        ];
        for (d, c) in [(l2, l2), (linf, linf), (l1, l2), (l1, linf)] {
            let a = OperatorMatrix::from_rows(d, c, &rows).unwrap();
            let (v, x) = a.norming_vector().unwrap();
            assert_abs_diff_eq!(x.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(a.apply_vector(&x).unwrap().norm(), v, epsilon = 1e-10);
        }
    }
}
