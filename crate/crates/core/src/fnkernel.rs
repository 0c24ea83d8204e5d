//! Scalar analytic functions on the closed unit disk.
//!
//! Every function is a member of a closed union of closed-form variants, so
//! values, derivatives and Taylor coefficients are all exact: nothing here
//! differentiates numerically.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Slack allowed on `|z| <= 1` so that points computed as `e^{i theta}` pass.
pub const DISK_SLACK: f64 = 1e-12;

/// Smallest admissible `|a|` for [`AnalyticScalar::TestFn`].
pub const MIN_TEST_PARAM: f64 = 1e-6;

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// A scalar analytic function on the closed unit disk.
///
/// The JSON form is tagged by `kind`, with complex numbers written as
/// `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AnalyticScalar {
    /// `c_0 + c_1 z + ... + c_N z^N`.
    Poly { coeffs: Vec<C64> },
    /// `c (1 - conj(a) z)^gamma`, principal branch, `|a| < 1`.
    Power { c: C64, a: C64, gamma: f64 },
    /// `(1/conj(a)) ((1-|a|^2)(1 - conj(a) z)^(alpha-1) - (1 - conj(a) z)^alpha)`.
    ///
    /// Vanishes at `a` and has `(1-|a|^2)^(1-alpha) f'(a) = 1`.
    #[serde(rename = "testfn")]
    TestFn { a: C64, alpha: f64 },
    /// `s z + c`.
    Affine { s: C64, c: C64 },
    /// `(a - z) / (1 - conj(a) z)`, `|a| < 1`.
    Blaschke { a: C64 },
    Sum { terms: Vec<AnalyticScalar> },
    Scale { c: C64, inner: Box<AnalyticScalar> },
    Product { factors: Vec<AnalyticScalar> },
    /// `inner(r z)` for `0 < r <= 1`.
    Dilate { r: f64, inner: Box<AnalyticScalar> },
}

impl AnalyticScalar {
    pub fn poly(coeffs: Vec<C64>) -> Self {
        AnalyticScalar::Poly { coeffs }
    }

    pub fn real_poly(coeffs: &[f64]) -> Self {
        AnalyticScalar::Poly {
            coeffs: coeffs.iter().map(|&c| C64::new(c, 0.0)).collect(),
        }
    }

    pub fn constant(c: C64) -> Self {
        AnalyticScalar::Poly { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// The identity map `z`.
    pub fn identity() -> Self {
        AnalyticScalar::Affine { s: ONE, c: ZERO }
    }

    pub fn affine(s: C64, c: C64) -> Self {
        AnalyticScalar::Affine { s, c }
    }

    pub fn power(c: C64, a: C64, gamma: f64) -> Result<Self> {
        let f = AnalyticScalar::Power { c, a, gamma };
        f.validate()?;
        Ok(f)
    }

    pub fn test_fn(a: C64, alpha: f64) -> Result<Self> {
        let f = AnalyticScalar::TestFn { a, alpha };
        f.validate()?;
        Ok(f)
    }

    pub fn blaschke(a: C64) -> Result<Self> {
        let f = AnalyticScalar::Blaschke { a };
        f.validate()?;
        Ok(f)
    }

    pub fn scale(self, c: C64) -> Self {
        AnalyticScalar::Scale {
            c,
            inner: Box::new(self),
        }
    }

    pub fn sum(terms: Vec<AnalyticScalar>) -> Self {
        AnalyticScalar::Sum { terms }
    }

    /// Pointwise product; polynomial factors are multiplied out exactly.
    pub fn mul(&self, other: &AnalyticScalar) -> Self {
        match (self.as_poly(), other.as_poly()) {
            (Some(p), Some(q)) => AnalyticScalar::Poly {
                coeffs: poly_mul(&p, &q),
            },
            _ => AnalyticScalar::Product {
                factors: vec![self.clone(), other.clone()],
            },
        }
    }

    /// Coefficients when the function is a polynomial in closed form.
    pub fn as_poly(&self) -> Option<Vec<C64>> {
        match self {
            AnalyticScalar::Poly { coeffs } => Some(coeffs.clone()),
            AnalyticScalar::Affine { s, c } => Some(vec![*c, *s]),
            AnalyticScalar::Scale { c, inner } => inner
                .as_poly()
                .map(|p| p.into_iter().map(|x| x * c).collect()),
            AnalyticScalar::Sum { terms } => {
                let mut acc: Vec<C64> = Vec::new();
                for t in terms {
                    let p = t.as_poly()?;
                    if p.len() > acc.len() {
                        acc.resize(p.len(), ZERO);
                    }
                    for (a, b) in acc.iter_mut().zip(p) {
                        *a += b;
                    }
                }
                Some(acc)
            }
            AnalyticScalar::Product { factors } => {
                let mut acc = vec![ONE];
                for f in factors {
                    acc = poly_mul(&acc, &f.as_poly()?);
                }
                Some(acc)
            }
            AnalyticScalar::Dilate { r, inner } => inner.as_poly().map(|p| {
                let mut rk = 1.0;
                p.into_iter()
                    .map(|c| {
                        let v = c * rk;
                        rk *= r;
                        v
                    })
                    .collect()
            }),
            _ => None,
        }
    }

    /// Checks every parameter constraint of the variant tree.
    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticScalar::Poly { coeffs } => {
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidParameter("non-finite coefficient".into()));
                }
            }
            AnalyticScalar::Power { c, a, gamma } => {
                if !c.is_finite() || !gamma.is_finite() {
                    return Err(Error::InvalidParameter("non-finite power parameter".into()));
                }
                check_inside("power", *a)?;
            }
            AnalyticScalar::TestFn { a, alpha } => {
                if !(*alpha > 0.0 && *alpha <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "test function exponent {alpha} outside (0, 1]"
                    )));
                }
                check_inside("testfn", *a)?;
                if a.norm() < MIN_TEST_PARAM {
                    return Err(Error::DegenerateParameter(format!(
                        "test function needs |a| >= {MIN_TEST_PARAM}, got {}",
                        a.norm()
                    )));
                }
            }
            AnalyticScalar::Affine { s, c } => {
                if !s.is_finite() || !c.is_finite() {
                    return Err(Error::InvalidParameter("non-finite affine parameter".into()));
                }
            }
            AnalyticScalar::Blaschke { a } => check_inside("blaschke", *a)?,
            AnalyticScalar::Sum { terms } => terms.iter().try_for_each(|t| t.validate())?,
            AnalyticScalar::Product { factors } => {
                factors.iter().try_for_each(|t| t.validate())?
            }
            AnalyticScalar::Scale { c, inner } => {
                if !c.is_finite() {
                    return Err(Error::InvalidParameter("non-finite scale".into()));
                }
                inner.validate()?;
            }
            AnalyticScalar::Dilate { r, inner } => {
                if !(*r > 0.0 && *r <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "dilation radius {r} outside (0, 1]"
                    )));
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    /// Value at `z`, checked: `|z| <= 1` and valid parameters.
    pub fn eval(&self, z: C64) -> Result<C64> {
        check_point(z)?;
        self.validate()?;
        Ok(self.value(z))
    }

    /// Derivative at `z`, checked like [`eval`](Self::eval).
    pub fn deriv(&self, z: C64) -> Result<C64> {
        check_point(z)?;
        self.validate()?;
        Ok(self.derivative_at(z))
    }

    /// Unchecked value; the caller guarantees a validated function and `|z| <= 1`.
    pub fn value(&self, z: C64) -> C64 {
        match self {
            AnalyticScalar::Poly { coeffs } => horner(coeffs, z),
            AnalyticScalar::Power { c, a, gamma } => c * branch_pow(ONE - a.conj() * z, *gamma),
            AnalyticScalar::TestFn { a, alpha } => {
                let w = ONE - a.conj() * z;
                let m = 1.0 - a.norm_sqr();
                (branch_pow(w, alpha - 1.0) * m - branch_pow(w, *alpha)) / a.conj()
            }
            AnalyticScalar::Affine { s, c } => s * z + c,
            AnalyticScalar::Blaschke { a } => (a - z) / (ONE - a.conj() * z),
            AnalyticScalar::Sum { terms } => terms.iter().map(|t| t.value(z)).sum(),
            AnalyticScalar::Scale { c, inner } => c * inner.value(z),
            AnalyticScalar::Product { factors } => factors.iter().map(|t| t.value(z)).product(),
            AnalyticScalar::Dilate { r, inner } => inner.value(z * r),
        }
    }

    /// Unchecked closed-form derivative.
    pub fn derivative_at(&self, z: C64) -> C64 {
        match self {
            AnalyticScalar::Poly { coeffs } => {
                let mut acc = ZERO;
                for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * z + c * k as f64;
                }
                acc
            }
            AnalyticScalar::Power { c, a, gamma } => {
                -c * a.conj() * *gamma * branch_pow(ONE - a.conj() * z, gamma - 1.0)
            }
            AnalyticScalar::TestFn { a, alpha } => {
                let w = ONE - a.conj() * z;
                let m = 1.0 - a.norm_sqr();
                branch_pow(w, alpha - 2.0) * (m * (1.0 - alpha)) + branch_pow(w, alpha - 1.0) * *alpha
            }
            AnalyticScalar::Affine { s, .. } => *s,
            AnalyticScalar::Blaschke { a } => {
                let w = ONE - a.conj() * z;
                C64::new(a.norm_sqr() - 1.0, 0.0) / (w * w)
            }
            AnalyticScalar::Sum { terms } => terms.iter().map(|t| t.derivative_at(z)).sum(),
            AnalyticScalar::Scale { c, inner } => c * inner.derivative_at(z),
            AnalyticScalar::Product { factors } => {
                let values: Vec<C64> = factors.iter().map(|f| f.value(z)).collect();
                let mut total = ZERO;
                for (i, f) in factors.iter().enumerate() {
                    let mut term = f.derivative_at(z);
                    for (j, v) in values.iter().enumerate() {
                        if i != j {
                            term *= v;
                        }
                    }
                    total += term;
                }
                total
            }
            AnalyticScalar::Dilate { r, inner } => inner.derivative_at(z * r) * *r,
        }
    }

    /// The derivative as a function in the same closed union.
    pub fn derivative(&self) -> AnalyticScalar {
        match self {
            AnalyticScalar::Poly { coeffs } => AnalyticScalar::Poly {
                coeffs: if coeffs.len() <= 1 {
                    vec![ZERO]
                } else {
                    coeffs
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, c)| c * k as f64)
                        .collect()
                },
            },
            AnalyticScalar::Power { c, a, gamma } => AnalyticScalar::Power {
                c: -c * a.conj() * *gamma,
                a: *a,
                gamma: gamma - 1.0,
            },
            AnalyticScalar::TestFn { a, alpha } => {
                let m = 1.0 - a.norm_sqr();
                AnalyticScalar::Sum {
                    terms: vec![
                        AnalyticScalar::Power {
                            c: C64::new(m * (1.0 - alpha), 0.0),
                            a: *a,
                            gamma: alpha - 2.0,
                        },
                        AnalyticScalar::Power {
                            c: C64::new(*alpha, 0.0),
                            a: *a,
                            gamma: alpha - 1.0,
                        },
                    ],
                }
            }
            AnalyticScalar::Affine { s, .. } => AnalyticScalar::constant(*s),
            AnalyticScalar::Blaschke { a } => AnalyticScalar::Power {
                c: C64::new(a.norm_sqr() - 1.0, 0.0),
                a: *a,
                gamma: -2.0,
            },
            AnalyticScalar::Sum { terms } => AnalyticScalar::Sum {
                terms: terms.iter().map(|t| t.derivative()).collect(),
            },
            AnalyticScalar::Scale { c, inner } => AnalyticScalar::Scale {
                c: *c,
                inner: Box::new(inner.derivative()),
            },
            AnalyticScalar::Product { factors } => AnalyticScalar::Sum {
                terms: (0..factors.len())
                    .map(|i| {
                        let mut fs = factors.clone();
                        fs[i] = factors[i].derivative();
                        AnalyticScalar::Product { factors: fs }
                    })
                    .collect(),
            },
            AnalyticScalar::Dilate { r, inner } => AnalyticScalar::Scale {
                c: C64::new(*r, 0.0),
                inner: Box::new(AnalyticScalar::Dilate {
                    r: *r,
                    inner: Box::new(inner.derivative()),
                }),
            },
        }
    }

    /// `k`-th Taylor coefficient at the origin, `f^(k)(0) / k!`.
    pub fn taylor_coeff(&self, k: usize) -> C64 {
        self.taylor_coeffs(k)[k]
    }

    /// Taylor coefficients `0..=n` at the origin.
    pub fn taylor_coeffs(&self, n: usize) -> Vec<C64> {
        match self {
            AnalyticScalar::Poly { coeffs } => (0..=n)
                .map(|k| coeffs.get(k).copied().unwrap_or(ZERO))
                .collect(),
            AnalyticScalar::Affine { s, c } => (0..=n)
                .map(|k| match k {
                    0 => *c,
                    1 => *s,
                    _ => ZERO,
                })
                .collect(),
            AnalyticScalar::Power { c, a, gamma } => binomial_series(*gamma, -a.conj(), n)
                .into_iter()
                .map(|b| b * c)
                .collect(),
            AnalyticScalar::TestFn { a, alpha } => {
                let m = 1.0 - a.norm_sqr();
                let lo = binomial_series(alpha - 1.0, -a.conj(), n);
                let hi = binomial_series(*alpha, -a.conj(), n);
                lo.into_iter()
                    .zip(hi)
                    .map(|(l, h)| (l * m - h) / a.conj())
                    .collect()
            }
            AnalyticScalar::Blaschke { a } => {
                let ab = a.conj();
                let mut out = Vec::with_capacity(n + 1);
                out.push(*a);
                let mut p = ONE;
                for _ in 1..=n {
                    out.push(p * (a.norm_sqr() - 1.0));
                    p *= ab;
                }
                out
            }
            AnalyticScalar::Sum { terms } => {
                let mut acc = vec![ZERO; n + 1];
                for t in terms {
                    for (a, b) in acc.iter_mut().zip(t.taylor_coeffs(n)) {
                        *a += b;
                    }
                }
                acc
            }
            AnalyticScalar::Scale { c, inner } => {
                inner.taylor_coeffs(n).into_iter().map(|x| x * c).collect()
            }
            AnalyticScalar::Product { factors } => {
                let mut acc = vec![ZERO; n + 1];
                acc[0] = ONE;
                for f in factors {
                    let fc = f.taylor_coeffs(n);
                    let mut next = vec![ZERO; n + 1];
                    for (i, a) in acc.iter().enumerate() {
                        for (j, b) in fc.iter().enumerate().take(n + 1 - i) {
                            next[i + j] += a * b;
                        }
                    }
                    acc = next;
                }
                acc
            }
            AnalyticScalar::Dilate { r, inner } => {
                let mut rk = 1.0;
                inner
                    .taylor_coeffs(n)
                    .into_iter()
                    .map(|c| {
                        let v = c * rk;
                        rk *= r;
                        v
                    })
                    .collect()
            }
        }
    }

    /// `z -> f(r z)`, simplified to a closed variant where one exists.
    pub fn dilate(&self, r: f64) -> AnalyticScalar {
        match self {
            AnalyticScalar::Poly { coeffs } => {
                let mut rk = 1.0;
                AnalyticScalar::Poly {
                    coeffs: coeffs
                        .iter()
                        .map(|c| {
                            let v = c * rk;
                            rk *= r;
                            v
                        })
                        .collect(),
                }
            }
            AnalyticScalar::Affine { s, c } => AnalyticScalar::Affine { s: s * r, c: *c },
            AnalyticScalar::Power { c, a, gamma } => AnalyticScalar::Power {
                c: *c,
                a: a * r,
                gamma: *gamma,
            },
            AnalyticScalar::TestFn { a, alpha } => {
                let m = 1.0 - a.norm_sqr();
                AnalyticScalar::Sum {
                    terms: vec![
                        AnalyticScalar::Power {
                            c: C64::new(m, 0.0) / a.conj(),
                            a: a * r,
                            gamma: alpha - 1.0,
                        },
                        AnalyticScalar::Power {
                            c: -ONE / a.conj(),
                            a: a * r,
                            gamma: *alpha,
                        },
                    ],
                }
            }
            AnalyticScalar::Sum { terms } => AnalyticScalar::Sum {
                terms: terms.iter().map(|t| t.dilate(r)).collect(),
            },
            AnalyticScalar::Scale { c, inner } => AnalyticScalar::Scale {
                c: *c,
                inner: Box::new(inner.dilate(r)),
            },
            AnalyticScalar::Product { factors } => AnalyticScalar::Product {
                factors: factors.iter().map(|t| t.dilate(r)).collect(),
            },
            AnalyticScalar::Dilate { r: s, inner } => AnalyticScalar::Dilate {
                r: r * s,
                inner: inner.clone(),
            },
            AnalyticScalar::Blaschke { .. } => AnalyticScalar::Dilate {
                r,
                inner: Box::new(self.clone()),
            },
        }
    }

    /// Degree-`n` Taylor polynomial.
    pub fn truncate(&self, n: usize) -> AnalyticScalar {
        AnalyticScalar::Poly {
            coeffs: self.taylor_coeffs(n),
        }
    }
}

fn check_inside(what: &str, a: C64) -> Result<()> {
    if !a.is_finite() || a.norm() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "{what} parameter a = {a} must satisfy |a| < 1"
        )));
    }
    Ok(())
}

pub(crate) fn check_point(z: C64) -> Result<()> {
    if !z.is_finite() || z.norm() > 1.0 + DISK_SLACK {
        return Err(Error::Domain { z });
    }
    Ok(())
}

/// Principal-branch power of a base with positive real part.
fn branch_pow(w: C64, gamma: f64) -> C64 {
    debug_assert!(w.re > 0.0, "principal branch requires Re(w) > 0, got {w}");
    if gamma == 0.0 {
        return ONE;
    }
    w.powf(gamma)
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

/// Coefficients of `(1 + t z)^gamma`, `k = 0..=n`.
fn binomial_series(gamma: f64, t: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut binom = 1.0;
    let mut tk = ONE;
    for k in 0..=n {
        out.push(tk * binom);
        binom *= (gamma - k as f64) / (k as f64 + 1.0);
        tk *= t;
    }
    out
}

pub(crate) fn poly_mul(p: &[C64], q: &[C64]) -> Vec<C64> {
    if p.is_empty() || q.is_empty() {
        return vec![ZERO];
    }
    let mut out = vec![ZERO; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Number of equispaced boundary angles used to certify a self-map.
pub const SELF_MAP_ANGLES: usize = 4096;

/// An analytic self-map of the disk with its boundary certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfMap {
    map: AnalyticScalar,
    certificate: f64,
    constant: bool,
}

impl SelfMap {
    /// Validates `f(D) ⊆ D` through the maximum modulus on the boundary.
    pub fn new(f: AnalyticScalar) -> Result<Self> {
        f.validate()?;
        let (certificate, max_deriv) = boundary_sup(&f);
        if !(certificate <= 1.0 + DISK_SLACK) {
            return Err(Error::NotSelfMap { certificate });
        }
        Ok(SelfMap {
            map: f,
            certificate,
            constant: max_deriv <= 1e-12,
        })
    }

    pub fn identity() -> Self {
        SelfMap::new(AnalyticScalar::identity()).expect("identity is a self-map")
    }

    /// `z -> r z`.
    pub fn scaled_identity(r: f64) -> Result<Self> {
        SelfMap::new(AnalyticScalar::affine(C64::new(r, 0.0), ZERO))
    }

    pub fn function(&self) -> &AnalyticScalar {
        &self.map
    }

    /// Measured boundary supremum of `|phi|`.
    pub fn certificate(&self) -> f64 {
        self.certificate
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn value(&self, z: C64) -> C64 {
        self.map.value(z)
    }

    pub fn derivative_at(&self, z: C64) -> C64 {
        self.map.derivative_at(z)
    }
}

/// Shorthand for [`SelfMap::new`].
pub fn make_self_map(f: AnalyticScalar) -> Result<SelfMap> {
    SelfMap::new(f)
}

fn boundary_sup(f: &AnalyticScalar) -> (f64, f64) {
    let at = |theta: f64| f.value(C64::from_polar(1.0, theta)).norm();
    let step = TAU / SELF_MAP_ANGLES as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut max_deriv: f64 = 0.0;
    for k in 0..SELF_MAP_ANGLES {
        let theta = k as f64 * step;
        let v = at(theta);
        if v > best.0 {
            best = (v, theta);
        }
        max_deriv = max_deriv.max(f.derivative_at(C64::from_polar(1.0, theta)).norm());
    }
    // ternary refinement around the best boundary angle
    let (mut lo, mut hi) = (best.1 - step, best.1 + step);
    for _ in 0..60 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let (v1, v2) = (at(m1), at(m2));
        best.0 = best.0.max(v1).max(v2);
        if v1 < v2 {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    (best.0, max_deriv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn eval_examples() {
        let f = AnalyticScalar::real_poly(&[1.0, 1.0]);
        assert_abs_diff_eq!(f.eval(c(0.5)).unwrap().re, 1.5, epsilon = 1e-15);

        let p = AnalyticScalar::power(c(1.0), c(0.0), 0.5).unwrap();
        for z in [c(0.3), C64::new(0.0, -1.0), C64::new(0.6, 0.8)] {
            assert_abs_diff_eq!((p.eval(z).unwrap() - c(1.0)).norm(), 0.0, epsilon = 1e-15);
        }

        let t = AnalyticScalar::test_fn(c(0.5), 0.5).unwrap();
        assert!(t.eval(c(0.5)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn eval_errors() {
        let f = AnalyticScalar::real_poly(&[1.0]);
        assert!(matches!(f.eval(c(1.5)), Err(Error::Domain { .. })));
        let t = AnalyticScalar::TestFn { a: c(1e-7), alpha: 0.5 };
        assert!(matches!(t.eval(c(0.1)), Err(Error::DegenerateParameter(_))));
        assert!(AnalyticScalar::power(c(1.0), c(1.0), 0.5).is_err());
    }

    #[test]
    fn deriv_examples() {
        let f = AnalyticScalar::real_poly(&[0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(f.deriv(c(0.3)).unwrap().re, 0.6, epsilon = 1e-15);

        let t = AnalyticScalar::test_fn(c(0.5), 0.5).unwrap();
        let d = t.deriv(c(0.5)).unwrap();
        assert_abs_diff_eq!(d.re, 1.154700538, epsilon = 1e-9);
        // central difference cross-check
        let h = 1e-6;
        let fd = (t.value(c(0.5 + h)) - t.value(c(0.5 - h))) / (2.0 * h);
        assert!((fd - d).norm() < 1e-8);

        let b = AnalyticScalar::blaschke(c(0.0)).unwrap();
        assert_abs_diff_eq!(b.deriv(c(0.0)).unwrap().re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn taylor_examples() {
        let f = AnalyticScalar::real_poly(&[2.0, 0.0, 5.0]);
        assert_eq!(f.taylor_coeff(2), c(5.0));
        assert_eq!(f.taylor_coeff(7), c(0.0));
        let p = AnalyticScalar::power(c(1.0), c(0.5), 1.0).unwrap();
        assert_abs_diff_eq!(p.taylor_coeff(1).re, -0.5, epsilon = 1e-15);
        let b = AnalyticScalar::blaschke(c(0.5)).unwrap();
        assert_eq!(b.taylor_coeff(0), c(0.5));
    }

    #[test]
    fn symbolic_derivative_matches_pointwise() {
        let fs = vec![
            AnalyticScalar::power(C64::new(0.3, 1.0), C64::new(0.2, -0.7), -1.3).unwrap(),
            AnalyticScalar::test_fn(C64::new(-0.4, 0.6), 0.3).unwrap(),
            AnalyticScalar::blaschke(C64::new(0.1, 0.5)).unwrap(),
            AnalyticScalar::real_poly(&[1.0, 2.0, 3.0]).mul(&AnalyticScalar::blaschke(c(0.3)).unwrap()),
            AnalyticScalar::blaschke(c(0.7)).unwrap().dilate(0.8),
        ];
        for f in &fs {
            let g = f.derivative();
            for z in [c(0.0), C64::new(0.3, -0.5), C64::new(-0.9, 0.1), C64::new(0.0, 1.0)] {
                assert!((g.value(z) - f.derivative_at(z)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dilate_matches_composition() {
        let fs = vec![
            AnalyticScalar::real_poly(&[0.0, 0.0, 1.0]),
            AnalyticScalar::power(c(2.0), C64::new(0.3, 0.4), 0.7).unwrap(),
            AnalyticScalar::test_fn(C64::new(0.2, -0.8), 0.5).unwrap(),
            AnalyticScalar::blaschke(C64::new(0.5, 0.5)).unwrap(),
        ];
        for f in &fs {
            let g = f.dilate(0.6);
            for z in [c(0.9), C64::new(-0.2, 0.95), c(0.0)] {
                assert!((g.value(z) - f.value(z * 0.6)).norm() < 1e-13);
                assert!((g.derivative_at(z) - f.derivative_at(z * 0.6) * 0.6).norm() < 1e-12);
            }
        }
        let sq = AnalyticScalar::real_poly(&[0.0, 0.0, 1.0]).dilate(0.5);
        assert_eq!(sq.as_poly().unwrap()[2], c(0.25));
    }

    #[test]
    fn self_map_examples() {
        let half = SelfMap::new(AnalyticScalar::affine(c(0.5), c(0.5))).unwrap();
        assert_abs_diff_eq!(half.certificate(), 1.0, epsilon = 1e-15);
        assert!(!half.is_constant());

        let err = SelfMap::new(AnalyticScalar::affine(c(1.0), c(0.5))).unwrap_err();
        assert!(matches!(err, Error::NotSelfMap { certificate } if (certificate - 1.5).abs() < 1e-12));

        let shrink = SelfMap::new(AnalyticScalar::affine(c(0.5), c(0.0))).unwrap();
        assert_abs_diff_eq!(shrink.certificate(), 0.5, epsilon = 1e-15);
        assert!(!shrink.is_constant());

        let constant = SelfMap::new(AnalyticScalar::constant(c(0.3))).unwrap();
        assert!(constant.is_constant());
    }

    #[test]
    fn json_fragments() {
        let f: AnalyticScalar = serde_json::from_str(
            r#"{"kind":"sum","terms":[{"kind":"poly","coeffs":[[1,0],[0,1]]},
                {"kind":"scale","c":[2,0],"inner":{"kind":"testfn","a":[0.5,0],"alpha":0.5}},
                {"kind":"power","c":[1,0],"a":[0.5,0],"gamma":-1},
                {"kind":"affine","s":[1,0],"c":[0,0]},{"kind":"blaschke","a":[0,0.3]}]}"#,
        )
        .unwrap();
        f.validate().unwrap();
        let back: AnalyticScalar = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(f, back);
        assert!(serde_json::from_str::<AnalyticScalar>(r#"{"kind":"spline"}"#).is_err());
    }
}
