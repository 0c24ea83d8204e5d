use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fnkernel::C64;

/// Deterministic radial-angular sampling schedule for suprema over the disk.
///
/// Sample set: the origin, then `angles` equispaced points on each circle
/// `|z| = r_j = 1 - 2^-j`, `j = 1..=depth`, then a local refinement of the best
/// cell (golden-section in radius alternating with angular trisection).
///
/// JSON: `{"J": 20, "angles": 256, "refine": 24}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSampler {
    #[serde(rename = "J")]
    pub depth: usize,
    pub angles: usize,
    pub refine: usize,
}

impl Default for DiskSampler {
    fn default() -> Self {
        DiskSampler {
            depth: 20,
            angles: 256,
            refine: 24,
        }
    }
}

/// Alternating radius/angle refinement rounds.
const REFINE_ROUNDS: usize = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupResult {
    pub value: f64,
    pub witness: C64,
    /// Running maximum `S(r_j)` over sampled points with `|z| <= r_j`.
    pub profile: Vec<f64>,
    /// Maximum over the circle `|z| = r_j` alone.
    pub circle: Vec<f64>,
    pub circle_witness: Vec<C64>,
}

impl SupResult {
    pub fn is_divergent(&self) -> bool {
        self.value == f64::INFINITY
    }
}

impl DiskSampler {
    pub fn new(depth: usize, angles: usize, refine: usize) -> Result<Self> {
        let s = DiskSampler {
            depth,
            angles,
            refine,
        };
        s.validate()?;
        Ok(s)
    }

    /// Default angles and refinement with a custom schedule depth.
    pub fn with_depth(depth: usize) -> Self {
        DiskSampler {
            depth,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 || self.depth > 50 {
            return Err(Error::InvalidParameter(format!(
                "sampler depth J = {} outside 1..=50",
                self.depth
            )));
        }
        if self.angles < 3 {
            return Err(Error::InvalidParameter("sampler needs at least 3 angles".into()));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        (1..=self.depth).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
    }

    pub fn r_max(&self) -> f64 {
        1.0 - 0.5f64.powi(self.depth as i32)
    }

    fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.angles as f64
    }

    /// Grid points in traversal order: origin, then radius-major, angle-minor.
    pub fn grid(&self) -> Vec<C64> {
        let mut pts = Vec::with_capacity(1 + self.depth * self.angles);
        pts.push(C64::new(0.0, 0.0));
        for r in self.radii() {
            for k in 0..self.angles {
                pts.push(C64::from_polar(r, self.angle(k)));
            }
        }
        pts
    }

    /// Supremum of a nonnegative evaluator (`+inf` allowed, NaN rejected).
    pub fn sup<F>(&self, g: F) -> Result<SupResult>
    where
        F: Fn(C64) -> f64 + Sync,
    {
        self.sup_with_probes(g, &[])
    }

    /// Like [`sup`](Self::sup), with extra points added to the sample set.
    pub fn sup_with_probes<F>(&self, g: F, probes: &[C64]) -> Result<SupResult>
    where
        F: Fn(C64) -> f64 + Sync,
    {
        let eval = |z: C64| -> Result<f64> {
            let v = g(z);
            if v.is_nan() {
                Err(Error::Evaluation { z })
            } else {
                Ok(v)
            }
        };
        let radii = self.radii();
        // per-circle (max, first argmax index); order-preserving collect
        let circles: Vec<(f64, usize)> = radii
            .par_iter()
            .map(|&r| -> Result<(f64, usize)> {
                let mut best = (f64::NEG_INFINITY, 0);
                for k in 0..self.angles {
                    let v = eval(C64::from_polar(r, self.angle(k)))?;
                    if v > best.0 {
                        best = (v, k);
                    }
                }
                Ok(best)
            })
            .collect::<Result<_>>()?;

        let origin = eval(C64::new(0.0, 0.0))?;
        // best cell: None = origin, Some(j) = circle j
        let mut best_val = origin;
        let mut best_cell: Option<usize> = None;
        for (j, &(v, _)) in circles.iter().enumerate() {
            if v > best_val {
                best_val = v;
                best_cell = Some(j);
            }
        }
        let mut profile = Vec::with_capacity(self.depth);
        let mut run = origin;
        for &(v, _) in &circles {
            run = run.max(v);
            profile.push(run);
        }
        let circle: Vec<f64> = circles.iter().map(|c| c.0).collect();
        let circle_witness: Vec<C64> = circles
            .iter()
            .zip(&radii)
            .map(|(&(_, k), &r)| C64::from_polar(r, self.angle(k)))
            .collect();

        let mut track = Tracker {
            best_v: best_val,
            best_z: match best_cell {
                None => C64::new(0.0, 0.0),
                Some(j) => circle_witness[j],
            },
            radii: &radii,
            profile,
        };

        for &z in probes {
            track.consider(z, eval(z)?);
        }

        if self.refine > 0 && track.best_v.is_finite() {
            let (j, k) = match best_cell {
                None => (None, 0),
                Some(j) => (Some(j), circles[j].1),
            };
            let r_lo = match j {
                None | Some(0) => 0.0,
                Some(j) => radii[j - 1],
            };
            let r_hi = match j {
                None => radii[0],
                Some(j) => radii.get(j + 1).copied().unwrap_or(self.r_max()),
            };
            let dtheta = TAU / self.angles as f64;
            let mut theta = self.angle(k);
            let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..REFINE_ROUNDS {
                // golden-section in radius at fixed angle
                let mut probe = |r: f64| -> Result<f64> {
                    let z = C64::from_polar(r, theta);
                    let v = eval(z)?;
                    track.consider(z, v);
                    Ok(v)
                };
                let (mut a, mut b) = (r_lo, r_hi);
                let mut c = b - inv_phi * (b - a);
                let mut d = a + inv_phi * (b - a);
                let mut fc = probe(c)?;
                let mut fd = probe(d)?;
                for _ in 0..self.refine {
                    if fc >= fd {
                        b = d;
                        d = c;
                        fd = fc;
                        c = b - inv_phi * (b - a);
                        fc = probe(c)?;
                    } else {
                        a = c;
                        c = d;
                        fc = fd;
                        d = a + inv_phi * (b - a);
                        fd = probe(d)?;
                    }
                }
                let rad = track.best_z.norm();
                if rad == 0.0 {
                    break;
                }
                theta = track.best_z.arg();
                // angular trisection at fixed radius
                let (mut lo, mut hi) = (theta - dtheta, theta + dtheta);
                for _ in 0..self.refine {
                    let m1 = lo + (hi - lo) / 3.0;
                    let m2 = hi - (hi - lo) / 3.0;
                    let z1 = C64::from_polar(rad, m1);
                    let z2 = C64::from_polar(rad, m2);
                    let (v1, v2) = (eval(z1)?, eval(z2)?);
                    track.consider(z1, v1);
                    track.consider(z2, v2);
                    if v1 < v2 {
                        lo = m1;
                    } else {
                        hi = m2;
                    }
                }
                theta = track.best_z.arg();
            }
        }

        let Tracker {
            best_v,
            best_z,
            profile,
            ..
        } = track;
        Ok(SupResult {
            value: best_v,
            witness: best_z,
            profile,
            circle,
            circle_witness,
        })
    }
}

struct Tracker<'a> {
    best_v: f64,
    best_z: C64,
    radii: &'a [f64],
    profile: Vec<f64>,
}

impl Tracker<'_> {
    fn consider(&mut self, z: C64, v: f64) {
        let rz = z.norm();
        for (p, &r) in self.profile.iter_mut().zip(self.radii) {
            if rz <= r && v > *p {
                *p = v;
            }
        }
        if v > self.best_v {
            self.best_v = v;
            self.best_z = z;
        }
    }
}

/// Shorthand for [`DiskSampler::sup`].
pub fn sup_over_disk<F>(g: F, sampler: &DiskSampler) -> Result<SupResult>
where
    F: Fn(C64) -> f64 + Sync,
{
    sampler.sup(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weight_peaks_at_origin() {
        let s = DiskSampler::default();
        let res = s.sup(|z| 1.0 - z.norm_sqr()).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!(res.witness, C64::new(0.0, 0.0));
    }

    #[test]
    fn modulus_sup_not_attained() {
        let s = DiskSampler::default();
        let res = s.sup(|z| z.norm()).unwrap();
        assert_abs_diff_eq!(res.value, s.r_max(), epsilon = 1e-15);
        assert!(res.profile.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn interior_maximum_is_refined() {
        let s = DiskSampler::default();
        let res = s
            .sup(|z| 2.0 * z.norm() * (1.0 - z.norm_sqr()).sqrt())
            .unwrap();
        assert_abs_diff_eq!(res.value, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(res.witness.norm(), 0.5f64.sqrt(), epsilon = 1e-4);
    }

    #[test]
    fn nan_reports_offending_point() {
        let s = DiskSampler::default();
        let err = s
            .sup(|z| if z.norm() > 0.7 { f64::NAN } else { 0.0 })
            .unwrap_err();
        match err {
            Error::Evaluation { z } => assert!(z.norm() > 0.7),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ties_break_to_smallest_radius_then_angle() {
        let s = DiskSampler::default();
        let res = s.sup(|_| 1.0).unwrap();
        assert_eq!(res.witness, C64::new(0.0, 0.0));
        assert_eq!(res.circle_witness[3], C64::from_polar(s.radii()[3], 0.0));
    }

    #[test]
    fn schedule_shape() {
        let s = DiskSampler::default();
        let r = s.radii();
        assert_eq!(r.len(), 20);
        assert_eq!(r[0], 0.5);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.grid().len(), 1 + 20 * 256);
        assert!(DiskSampler::new(0, 10, 1).is_err());
    }
}
