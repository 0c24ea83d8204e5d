//! Three-valued classification of sampled profiles.
//!
//! No finite sample proves that a supremum is finite or that a limit is zero;
//! the classifiers read the shape of a profile over the radius schedule and
//! answer with an explicit inconclusive zone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Steps of the schedule inspected by the growth and decay tests.
pub const TAIL_STEPS: usize = 5;

/// JSON: `{"rel_tol":0.05,"growth_factor":2.0,"abs_tol":1e-3,"deltas":[...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifierParams {
    pub rel_tol: f64,
    pub growth_factor: f64,
    pub abs_tol: f64,
    pub deltas: Vec<f64>,
}

impl Default for ClassifierParams {
    fn default() -> Self {
        ClassifierParams {
            rel_tol: 0.05,
            growth_factor: 2.0,
            abs_tol: 1e-3,
            deltas: vec![0.5, 0.9, 0.99, 0.999, 0.9999],
        }
    }
}

impl ClassifierParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 0.0) || !(self.growth_factor > 1.0) || !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidParameter(
                "classifier needs rel_tol >= 0, growth_factor > 1, abs_tol >= 0".into(),
            ));
        }
        if self.deltas.is_empty()
            || self.deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0))
            || self.deltas.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidParameter(
                "deltas must be strictly increasing in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Finiteness {
    Bounded,
    Unbounded,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decay {
    /// The profile tends to zero.
    Vanishing,
    /// The profile has not decayed from its peak.
    Persistent,
    Inconclusive,
}

/// Plateau-versus-growth test on a running-maximum profile.
///
/// Bounded when `S(r_max) <= (1 + rel_tol) S(r_mid)` with `r_mid` the
/// `J/2`-th radius; unbounded when `S` grows by `growth_factor` over the last
/// [`TAIL_STEPS`] steps or is infinite somewhere.
pub fn classify_finiteness(profile: &[f64], params: &ClassifierParams) -> Finiteness {
    let Some(&last) = profile.last() else {
        return Finiteness::Inconclusive;
    };
    if last == f64::INFINITY {
        return Finiteness::Unbounded;
    }
    let j = profile.len();
    if j > TAIL_STEPS {
        let earlier = profile[j - 1 - TAIL_STEPS];
        if last >= params.growth_factor * earlier && last > 0.0 {
            return Finiteness::Unbounded;
        }
    }
    let mid = profile[(j / 2).max(1) - 1];
    if last <= (1.0 + params.rel_tol) * mid {
        return Finiteness::Bounded;
    }
    Finiteness::Inconclusive
}

/// Decay test for a profile that should tend to zero.
///
/// Vanishing when the last value is below `floor`, or when the tail fell
/// monotonically by `growth_factor` over the last [`TAIL_STEPS`] steps.
/// Persistent when the last value is still at least half the peak.
pub fn classify_decay(profile: &[f64], floor: f64, params: &ClassifierParams) -> Decay {
    let Some(&last) = profile.last() else {
        return Decay::Inconclusive;
    };
    if last <= floor {
        return Decay::Vanishing;
    }
    let j = profile.len();
    if j > TAIL_STEPS && last.is_finite() {
        let tail = &profile[j - 1 - TAIL_STEPS..];
        let monotone = tail.windows(2).all(|w| w[1] <= w[0]);
        if monotone && last * params.growth_factor <= tail[0] {
            return Decay::Vanishing;
        }
    }
    let peak = profile.iter().copied().fold(0.0, f64::max);
    if peak > 0.0 && last >= 0.5 * peak {
        return Decay::Persistent;
    }
    Decay::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schedule(f: impl Fn(f64) -> f64) -> Vec<f64> {
        (1..=20).map(|j| f(1.0 - 0.5f64.powi(j))).collect()
    }

    #[test]
    fn exponent_profiles() {
        let p = ClassifierParams::default();
        // (1-r^2)^e with e >= 0 has running max 1 (attained at the origin)
        assert_eq!(classify_finiteness(&[1.0; 20], &p), Finiteness::Bounded);
        let grow = schedule(|r| (1.0 - r * r).powf(-0.25));
        assert_eq!(classify_finiteness(&grow, &p), Finiteness::Unbounded);
        let log = schedule(|r| (1.0 / (1.0 - r)).ln());
        assert_eq!(classify_finiteness(&log, &p), Finiteness::Inconclusive);
        assert_eq!(classify_finiteness(&[1.0, f64::INFINITY], &p), Finiteness::Unbounded);
    }

    #[test]
    fn decay_profiles() {
        let p = ClassifierParams::default();
        let w = schedule(|r| (1.0 - r * r).sqrt());
        assert_eq!(classify_decay(&w, 0.0, &p), Decay::Vanishing);
        assert_eq!(classify_decay(&[1.0; 20], 0.0, &p), Decay::Persistent);
        assert_eq!(classify_decay(&[0.0; 20], 0.0, &p), Decay::Vanishing);
        let slow = schedule(|r| (1.0 - r * r).powf(0.01));
        assert_eq!(classify_decay(&slow, 0.0, &p), Decay::Persistent);
        let mut bump = vec![1.0; 20];
        bump[18] = 0.3;
        bump[19] = 0.35;
        assert_eq!(classify_decay(&bump, 0.0, &p), Decay::Inconclusive);
    }

    #[test]
    fn params_json_defaults() {
        let p: ClassifierParams = serde_json::from_str(r#"{"rel_tol":0.1}"#).unwrap();
        assert_eq!(p.rel_tol, 0.1);
        assert_eq!(p.growth_factor, 2.0);
        p.validate().unwrap();
        let bad = ClassifierParams {
            deltas: vec![0.9, 0.5],
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
