//! Boundedness and compactness criteria for weighted composition operators,
//! answered as three-valued verdicts with witnesses and sampled profiles.

pub mod classify;
pub mod sampler;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use classify::{classify_decay, classify_finiteness, ClassifierParams, Decay, Finiteness};
pub use sampler::{sup_over_disk, DiskSampler, SupResult};

use crate::error::{Error, Result};
use crate::fnkernel::{SelfMap, C64};
use crate::vspaces::{check_alpha, weight};
use crate::wcop::{OperatorSymbol, WeightedCompositionOp};

/// Below this value of `1 - |phi(z)|^2` the point is treated as lying on the
/// boundary: the quantity is 0 when its numerator vanishes and `+inf` otherwise.
pub const BOUNDARY_GAP: f64 = 1e-14;

/// Report string for the `T_psi` hypothesis, which holds in finite dimension.
pub const T_PSI_AUTOMATIC: &str = "automatic (finite dim)";

/// `(1-|z|^2)^(1-beta) (1-|phi(z)|^2)^(alpha-1) |phi'(z)| |psi_z|`.
///
/// At `alpha = 1` the `phi` factor is dropped.
pub fn q_quantity(w: &WeightedCompositionOp, z: C64) -> f64 {
    let num = weight(z, 1.0 - w.beta()) * w.phi.derivative_at(z).norm() * w.psi.norm_at(z);
    let alpha = w.alpha();
    if alpha >= 1.0 {
        return num;
    }
    boundary_ratio(num, 1.0 - w.phi.value(z).norm_sqr(), 1.0 - alpha)
}

fn boundary_ratio(num: f64, gap: f64, exponent: f64) -> f64 {
    if gap < BOUNDARY_GAP {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / gap.powf(exponent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QResult {
    pub value: f64,
    pub witness: C64,
    /// Running maximum over `|z| <= r_j`.
    pub profile: Vec<f64>,
    /// Maximum over the circle `|z| = r_j`.
    pub circle: Vec<f64>,
    #[serde(skip)]
    pub circle_witness: Vec<C64>,
    /// Some sampled point had `|phi(z)| = 1` with a nonzero numerator.
    pub divergent: bool,
}

/// Sampled supremum of [`q_quantity`].
pub fn q_criterion(w: &WeightedCompositionOp, sampler: &DiskSampler) -> Result<QResult> {
    check_alpha(w.alpha())?;
    let sup = sampler.sup(|z| q_quantity(w, z))?;
    Ok(QResult {
        value: sup.value,
        witness: sup.witness,
        divergent: sup.is_divergent() || sup.circle.iter().any(|v| v.is_infinite()),
        profile: sup.profile,
        circle: sup.circle,
        circle_witness: sup.circle_witness,
    })
}

/// Norm of an operator symbol in `Λ_beta(L(X, Y))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolNorm {
    pub value: f64,
    /// `|psi_0|` for `beta < 1`, `sup |psi_z|` at `beta = 1`.
    pub head: f64,
    pub witness: C64,
    /// Running maximum of `(1-|z|^2)^(1-beta) |psi'_z|`.
    pub profile: Vec<f64>,
    /// Per-circle maximum of the same quantity.
    pub circle: Vec<f64>,
    /// Running maximum of `|psi_z|` (`beta = 1` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub head_profile: Option<Vec<f64>>,
}

/// `|psi_0| + sup (1-|z|^2)^(1-beta) |psi'_z|`; at `beta = 1`, `sup |psi| + sup |psi'|`.
pub fn psi_lambda_norm(psi: &OperatorSymbol, beta: f64, sampler: &DiskSampler) -> Result<SymbolNorm> {
    check_alpha(beta)?;
    let sup = sampler.sup(|z| weight(z, 1.0 - beta) * psi.deriv_norm_at(z))?;
    let (head, head_profile) = if beta < 1.0 {
        let h = psi.norm_at(C64::new(0.0, 0.0));
        if h.is_nan() {
            return Err(Error::Evaluation { z: C64::new(0.0, 0.0) });
        }
        (h, None)
    } else {
        let s = sampler.sup(|z| psi.norm_at(z))?;
        (s.value, Some(s.profile))
    };
    Ok(SymbolNorm {
        value: head + sup.value,
        head,
        witness: sup.witness,
        profile: sup.profile,
        circle: sup.circle,
        head_profile,
    })
}

/// `sup (1-|z|^2)^beta_w (1-|phi(z)|^2)^(-alpha_w) |psi_z|`, the weighted-sup
/// composition criterion between `H^inf_{nu_alpha_w}` and `H^inf_{nu_beta_w}`.
pub fn hinf_criterion(
    psi: &OperatorSymbol,
    phi: &SelfMap,
    alpha_w: f64,
    beta_w: f64,
    sampler: &DiskSampler,
) -> Result<SupResult> {
    if !(alpha_w > 0.0 && alpha_w < 1.0) || !(beta_w > 0.0 && beta_w <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "weighted-sup criterion needs alpha_w in (0,1), beta_w in (0,1]; got {alpha_w}, {beta_w}"
        )));
    }
    sampler.sup(|z| {
        let num = weight(z, beta_w) * psi.norm_at(z);
        boundary_ratio(num, 1.0 - phi.value(z).norm_sqr(), alpha_w)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub verdict: Finiteness,
    pub q: QResult,
    pub q_verdict: Finiteness,
    pub psi: SymbolNorm,
    pub psi_verdict: Finiteness,
}

fn combine(verdicts: &[Finiteness]) -> Finiteness {
    if verdicts.contains(&Finiteness::Unbounded) {
        Finiteness::Unbounded
    } else if verdicts.iter().all(|v| *v == Finiteness::Bounded) {
        Finiteness::Bounded
    } else {
        Finiteness::Inconclusive
    }
}

/// Bounded when `psi` lies in `Λ_beta(L(X, Y))` and `q` is finite, each read
/// from the plateau/growth shape of its sampled profile.
pub fn boundedness_verdict(
    w: &WeightedCompositionOp,
    sampler: &DiskSampler,
    params: &ClassifierParams,
) -> Result<BoundednessReport> {
    params.validate()?;
    let q = q_criterion(w, sampler)?;
    let q_verdict = if q.divergent {
        Finiteness::Unbounded
    } else {
        classify_finiteness(&q.profile, params)
    };
    let psi = psi_lambda_norm(&w.psi, w.beta(), sampler)?;
    let mut parts = vec![classify_finiteness(&psi.profile, params)];
    if let Some(h) = &psi.head_profile {
        parts.push(classify_finiteness(h, params));
    }
    let psi_verdict = combine(&parts);
    Ok(BoundednessReport {
        verdict: combine(&[q_verdict, psi_verdict]),
        q,
        q_verdict,
        psi,
        psi_verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactVerdict {
    Compact,
    NotCompact,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnnulusPoint {
    pub delta: f64,
    /// Largest sampled q-quantity with `|phi(z)| > delta`; 0 for an empty set.
    pub value: f64,
    /// Number of sampled points in the set.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactnessReport {
    pub verdict: CompactVerdict,
    pub annulus_profile: Vec<AnnulusPoint>,
    pub t_psi_compact: String,
    pub notes: Vec<String>,
}

/// Annulus profile `T(delta)` of the q-quantity over the sampler grid plus
/// `extra` points.
pub fn annulus_profile(
    w: &WeightedCompositionOp,
    sampler: &DiskSampler,
    deltas: &[f64],
    extra: &[C64],
) -> Result<Vec<AnnulusPoint>> {
    let mut pts = sampler.grid();
    pts.extend_from_slice(extra);
    let vals: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&z| -> Result<(f64, f64)> {
            let v = q_quantity(w, z);
            if v.is_nan() {
                Err(Error::Evaluation { z })
            } else {
                Ok((w.phi.value(z).norm(), v))
            }
        })
        .collect::<Result<_>>()?;
    Ok(deltas
        .iter()
        .map(|&delta| {
            let (count, value) = vals
                .iter()
                .filter(|(m, _)| *m > delta)
                .fold((0, 0.0f64), |(c, best), (_, v)| (c + 1, best.max(*v)));
            AnnulusPoint {
                delta,
                value,
                count,
            }
        })
        .collect())
}

/// Classifies an annulus profile against the scale `q`.
///
/// Compact when the last value is below `abs_tol (1 + q)`, every set is
/// empty, or the profile falls geometrically across the schedule. Not compact
/// when it stays above half its first value.
pub fn classify_annulus(profile: &[AnnulusPoint], q: f64, params: &ClassifierParams) -> CompactVerdict {
    let (Some(first), Some(last)) = (profile.first(), profile.last()) else {
        return CompactVerdict::Inconclusive;
    };
    if profile.iter().all(|p| p.count == 0) || last.value <= params.abs_tol * (1.0 + q) {
        return CompactVerdict::Compact;
    }
    if first.value > 0.0 && profile.iter().all(|p| p.value >= 0.5 * first.value) {
        return CompactVerdict::NotCompact;
    }
    // geometric decay: strictly falling, by growth_factor per step on average
    let steps = profile.len() as i32 - 1;
    if steps > 0
        && profile.windows(2).all(|w| w[1].value < w[0].value)
        && last.value * params.growth_factor.powi(steps) <= first.value
    {
        return CompactVerdict::Compact;
    }
    CompactVerdict::Inconclusive
}

/// Compactness on the big spaces: `T_psi` compact and the q-quantity
/// vanishing as `|phi(z)| -> 1`. Requires a bounded operator.
pub fn compactness_verdict(
    w: &WeightedCompositionOp,
    sampler: &DiskSampler,
    params: &ClassifierParams,
) -> Result<CompactnessReport> {
    let b = boundedness_verdict(w, sampler, params)?;
    compactness_given(w, &b, sampler, params)
}

fn compactness_given(
    w: &WeightedCompositionOp,
    b: &BoundednessReport,
    sampler: &DiskSampler,
    params: &ClassifierParams,
) -> Result<CompactnessReport> {
    if b.verdict != Finiteness::Bounded {
        return Err(Error::Precondition(format!(
            "compactness needs a bounded operator, boundedness verdict is {:?}",
            b.verdict
        )));
    }
    let mut probes = vec![b.q.witness];
    probes.extend_from_slice(&b.q.circle_witness);
    let annulus = annulus_profile(w, sampler, &params.deltas, &probes)?;
    let mut notes = Vec::new();
    let verdict = if w.alpha() < 1.0 {
        classify_annulus(&annulus, b.q.value, params)
    } else {
        notes.push("compactness characterization covers alpha < 1 only; annulus profile reported as data".into());
        CompactVerdict::Inconclusive
    };
    Ok(CompactnessReport {
        verdict,
        annulus_profile: annulus,
        t_psi_compact: T_PSI_AUTOMATIC.into(),
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SufficiencyVerdict {
    SufficientConditionsMet,
    NotMet,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LittleBoundednessReport {
    /// These conditions are sufficient, not necessary.
    pub verdict: SufficiencyVerdict,
    pub big_bounded: Finiteness,
    /// `max_{|z|=r_j} (1-|z|^2)^(1-beta) |psi'_z|`.
    pub psi_little_profile: Vec<f64>,
    pub psi_little: Decay,
    /// `max_{|z|=r_j} (1-|z|^2)^(1-beta) |phi'(z)| |psi_z|`.
    pub phi_psi_profile: Vec<f64>,
    pub phi_psi: Decay,
}

/// Sufficient conditions for `W: Λ_alpha^0(X) -> Λ_beta^0(Y)` to be bounded.
pub fn little_boundedness_verdict(
    w: &WeightedCompositionOp,
    sampler: &DiskSampler,
    params: &ClassifierParams,
) -> Result<LittleBoundednessReport> {
    let b = boundedness_verdict(w, sampler, params)?;
    little_boundedness_given(w, &b, sampler, params)
}

fn little_boundedness_given(
    w: &WeightedCompositionOp,
    b: &BoundednessReport,
    sampler: &DiskSampler,
    params: &ClassifierParams,
) -> Result<LittleBoundednessReport> {
    let floor = 1e-6 * (1.0 + b.psi.value);
    let psi_little = classify_decay(&b.psi.circle, floor, params);
    let pp = sampler.sup(|z| {
        weight(z, 1.0 - w.beta()) * w.phi.derivative_at(z).norm() * w.psi.norm_at(z)
    })?;
    let phi_psi = classify_decay(&pp.circle, 1e-6 * (1.0 + pp.value), params);
    let verdict = if b.verdict == Finiteness::Unbounded
        || psi_little == Decay::Persistent
        || phi_psi == Decay::Persistent
    {
        SufficiencyVerdict::NotMet
    } else if b.verdict == Finiteness::Bounded
        && psi_little == Decay::Vanishing
        && phi_psi == Decay::Vanishing
    {
        SufficiencyVerdict::SufficientConditionsMet
    } else {
        SufficiencyVerdict::Inconclusive
    };
    Ok(LittleBoundednessReport {
        verdict,
        big_bounded: b.verdict,
        psi_little_profile: b.psi.circle.clone(),
        psi_little,
        phi_psi_profile: pp.circle,
        phi_psi,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LittleCompactnessReport {
    pub verdict: CompactVerdict,
    /// `max_{|z|=r_j}` of the q-quantity; must tend to 0 for compactness.
    pub radial_profile: Vec<f64>,
    /// Decay of the radial profile, necessary for compactness.
    pub radial_decay: Decay,
    /// `psi` in the little space; together with radial decay this is sufficient.
    pub psi_little: Decay,
    pub notes: Vec<String>,
}

/// Compactness on the little spaces. A persistent radial profile refutes
/// compactness; a vanishing one proves it only together with `psi` in the
/// little space.
pub fn little_compactness_verdict(
    w: &WeightedCompositionOp,
    sampler: &DiskSampler,
    params: &ClassifierParams,
) -> Result<LittleCompactnessReport> {
    let b = boundedness_verdict(w, sampler, params)?;
    little_compactness_given(w, &b, params)
}

fn little_compactness_given(
    w: &WeightedCompositionOp,
    b: &BoundednessReport,
    params: &ClassifierParams,
) -> Result<LittleCompactnessReport> {
    if b.verdict == Finiteness::Unbounded {
        return Err(Error::Precondition(
            "little-space compactness needs a bounded operator".into(),
        ));
    }
    let radial = classify_decay(&b.q.circle, params.abs_tol * (1.0 + b.q.value), params);
    let psi_little = classify_decay(&b.psi.circle, 1e-6 * (1.0 + b.psi.value), params);
    let mut notes = Vec::new();
    if b.verdict == Finiteness::Inconclusive {
        notes.push("boundedness inconclusive; little-space verdict is conditional".into());
    }
    let verdict = match (radial, psi_little) {
        (Decay::Persistent, _) => CompactVerdict::NotCompact,
        (Decay::Vanishing, Decay::Vanishing) => CompactVerdict::Compact,
        (Decay::Vanishing, _) => {
            notes.push("necessary condition holds; sufficiency also needs psi in the little space".into());
            CompactVerdict::Inconclusive
        }
        _ => CompactVerdict::Inconclusive,
    };
    let _ = w;
    Ok(LittleCompactnessReport {
        verdict,
        radial_profile: b.q.circle.clone(),
        radial_decay: radial,
        psi_little,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetCompactnessReport {
    pub relatively_compact: CompactVerdict,
    /// `sup_K |f|` finite.
    pub bounded: Finiteness,
    pub max_norm: f64,
    /// Pointwise relative compactness, automatic in finite dimension.
    pub pointwise: String,
    /// Family-wise `sup_K (1-|z|^2)^(1-alpha) |f'(z)|` on each circle.
    pub family_profile: Vec<f64>,
    pub uniform_decay: Decay,
}

/// Relative compactness of a finite family in `Λ_alpha^0(X)` through the
/// uniform weighted-derivative decay condition.
pub fn set_compactness_check(
    family: &[crate::vspaces::VectorFunction],
    alpha: f64,
    sampler: &DiskSampler,
    params: &ClassifierParams,
) -> Result<SetCompactnessReport> {
    if family.is_empty() {
        return Err(Error::Precondition("set compactness needs a nonempty family".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside (0, 1)")));
    }
    let mut circle = vec![0.0f64; sampler.depth];
    let mut running = vec![0.0f64; sampler.depth];
    let mut max_norm: f64 = 0.0;
    for f in family {
        f.validate()?;
        let sup = sampler.sup(|z| weight(z, 1.0 - alpha) * f.space.norm_of(&f.derivative_at(z)))?;
        let head = f.space.norm_of(&f.value(C64::new(0.0, 0.0)));
        max_norm = max_norm.max(head + sup.value);
        for (c, v) in circle.iter_mut().zip(&sup.circle) {
            *c = c.max(*v);
        }
        for (c, v) in running.iter_mut().zip(&sup.profile) {
            *c = c.max(head + v);
        }
    }
    let bounded = classify_finiteness(&running, params);
    let uniform_decay = classify_decay(&circle, 1e-6 * (1.0 + max_norm), params);
    let relatively_compact = match (bounded, uniform_decay) {
        (Finiteness::Unbounded, _) | (_, Decay::Persistent) => CompactVerdict::NotCompact,
        (Finiteness::Bounded, Decay::Vanishing) => CompactVerdict::Compact,
        _ => CompactVerdict::Inconclusive,
    };
    Ok(SetCompactnessReport {
        relatively_compact,
        bounded,
        max_norm,
        pointwise: T_PSI_AUTOMATIC.into(),
        family_profile: circle,
        uniform_decay,
    })
}

/// Everything the criteria say about one operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub q_value: f64,
    pub q_witness: C64,
    pub q_divergent: bool,
    pub q_profile: Vec<f64>,
    pub psi_lambda_value: f64,
    pub psi_witness: C64,
    pub psi_profile: Vec<f64>,
    pub psi_little_profile: Vec<f64>,
    pub bounded_verdict: Finiteness,
    pub compact_verdict: CompactVerdict,
    pub annulus_profile: Vec<AnnulusPoint>,
    pub t_psi_compact: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub little_boundedness: Option<LittleBoundednessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub little_compactness: Option<LittleCompactnessReport>,
    pub notes: Vec<String>,
}

/// Runs every criterion that applies and collects the results.
pub fn analyze(
    w: &WeightedCompositionOp,
    sampler: &DiskSampler,
    params: &ClassifierParams,
) -> Result<CriterionReport> {
    sampler.validate()?;
    let b = boundedness_verdict(w, sampler, params)?;
    let mut notes = Vec::new();
    if b.q.divergent {
        notes.push("q-quantity diverges where |phi(z)| = 1".into());
    }
    let (compact_verdict, annulus, t_psi) = match compactness_given(w, &b, sampler, params) {
        Ok(c) => {
            notes.extend(c.notes);
            (c.verdict, c.annulus_profile, c.t_psi_compact)
        }
        Err(Error::Precondition(msg)) => {
            notes.push(format!("compactness refused: {msg}"));
            (CompactVerdict::Inconclusive, Vec::new(), T_PSI_AUTOMATIC.into())
        }
        Err(e) => return Err(e),
    };
    let little_boundedness = Some(little_boundedness_given(w, &b, sampler, params)?);
    let little_compactness = match little_compactness_given(w, &b, params) {
        Ok(r) => Some(r),
        Err(Error::Precondition(msg)) => {
            notes.push(format!("little-space compactness refused: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    Ok(CriterionReport {
        q_value: b.q.value,
        q_witness: b.q.witness,
        q_divergent: b.q.divergent,
        q_profile: b.q.profile.clone(),
        psi_lambda_value: b.psi.value,
        psi_witness: b.psi.witness,
        psi_profile: b.psi.profile.clone(),
        psi_little_profile: b.psi.circle.clone(),
        bounded_verdict: b.verdict,
        compact_verdict,
        annulus_profile: annulus,
        t_psi_compact: t_psi,
        little_boundedness,
        little_compactness,
        notes,
    })
}
