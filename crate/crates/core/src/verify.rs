//! Built-in property suites run by `lipop verify`.
//!
//! Every tolerance is multiplied by the `LIPOP_TOL_SCALE` environment variable
//! (default 1), so a zero scale makes the suites fail on purpose.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::{
    compactness_verdict, boundedness_verdict, q_criterion, q_quantity, ClassifierParams, CompactVerdict,
    DiskSampler, Finiteness,
};
use crate::error::Result;
use crate::estimation::{equivalence_sweep, SweepSummary};
use crate::fnkernel::{AnalyticScalar, SelfMap, C64};
use crate::normedspace::{check_pair, NormKind, NormedSpace, Vector};
use crate::scenario::golden_corpus;
use crate::vspaces::{lambda_norm, lipschitz_seminorm_estimate, SpaceSpec, VectorFunction};
use crate::wcop::{coefficient, dilate, truncate, OperatorSymbol, WeightedCompositionOp};

pub const TOL_SCALE_VAR: &str = "LIPOP_TOL_SCALE";

/// Envelope for `L / C` on the golden corpus.
pub const RATIO_ENVELOPE: (f64, f64) = (1.0 / 20.0, 20.0);

/// Mutual-boundedness factor between the two-point and Bloch-form seminorms.
pub const HL_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Norms,
    Criteria,
    Equivalence,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Counterexample or measured values.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope: Option<(f64, f64)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Tolerance multiplier read from the environment.
pub fn tol_scale() -> f64 {
    std::env::var(TOL_SCALE_VAR)
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|v| v.is_finite() && *v >= 0.0)
        .unwrap_or(1.0)
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let t = tol_scale();
    match suite {
        Suite::Identities => identities(t),
        Suite::Norms => norms(t),
        Suite::Criteria => criteria(t),
        Suite::Equivalence => equivalence(t),
    }
}

/// Collects a pass flag and the first counterexample.
struct Tally {
    name: String,
    failure: Option<String>,
    worst: f64,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.into(),
            failure: None,
            worst: 0.0,
        }
    }

    fn record(&mut self, err: f64, tol: f64, what: impl FnOnce() -> String) {
        self.worst = self.worst.max(err);
        if !(err <= tol) && self.failure.is_none() {
            self.failure = Some(format!("{} (error {err:e} > tol {tol:e})", what()));
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            passed: self.failure.is_none(),
            detail: self
                .failure
                .unwrap_or_else(|| format!("worst error {:e}", self.worst)),
        }
    }
}

pub fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> AnalyticScalar {
    let deg = rng.gen_range(0..=max_degree);
    AnalyticScalar::poly((0..=deg).map(|_| random_c64(rng)).collect())
}

/// A polynomial self-map with coefficient sum at most `0.9`.
pub fn random_self_map(rng: &mut ChaCha8Rng, max_degree: usize) -> SelfMap {
    let mut coeffs: Vec<C64> = (0..=rng.gen_range(1..=max_degree)).map(|_| random_c64(rng)).collect();
    let total: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let scale = rng.gen_range(0.1..0.9) / total.max(1e-12);
    coeffs.iter_mut().for_each(|c| *c *= scale);
    SelfMap::new(AnalyticScalar::poly(coeffs)).expect("coefficient sum below 1")
}

pub fn random_space(rng: &mut ChaCha8Rng) -> NormedSpace {
    let kinds = [NormKind::L1, NormKind::L2, NormKind::Linf];
    NormedSpace {
        dim: rng.gen_range(1..=3),
        norm: kinds[rng.gen_range(0..3)],
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, r_max: f64) -> C64 {
    C64::from_polar(r_max * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// A random operator with polynomial data of degree at most `max_degree`,
/// together with a random polynomial input.
pub fn random_instance(rng: &mut ChaCha8Rng, max_degree: usize) -> (WeightedCompositionOp, VectorFunction) {
    let (x, y) = loop {
        let x = random_space(rng);
        let y = random_space(rng);
        if check_pair(x, y).is_ok() {
            break (x, y);
        }
    };
    let entries = (0..y.dim)
        .map(|_| (0..x.dim).map(|_| random_poly(rng, max_degree)).collect())
        .collect();
    let psi = OperatorSymbol::new(x, y, entries).expect("supported pair");
    let phi = random_self_map(rng, max_degree);
    let exps = [0.25, 0.5, 0.75];
    let w = WeightedCompositionOp::new(
        psi,
        phi,
        SpaceSpec::big(exps[rng.gen_range(0..3)], x).unwrap(),
        SpaceSpec::big(exps[rng.gen_range(0..3)], y).unwrap(),
    )
    .unwrap();
    let f = VectorFunction::new(x, (0..x.dim).map(|_| random_poly(rng, max_degree)).collect()).unwrap();
    (w, f)
}

fn diff_norm(space: &NormedSpace, a: &[C64], b: &[C64]) -> f64 {
    let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    space.norm_of(&d)
}

fn identities(t: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut deriv = Tally::new("derivative identity vs central difference");
    let mut decomp = Tally::new("D W = W_{phi' psi, phi} D + W_{psi', phi}");
    let mut trunc = Tally::new("truncation idempotent and exact on polynomials");
    let mut semi = Tally::new("dilation semigroup K_r K_s = K_rs");
    let mut coef = Tally::new("coefficient functional survives truncation");
    let h = 1e-6;
    for i in 0..100 {
        let (w, f) = random_instance(&mut rng, 8);
        let ys = w.target.space;
        for _ in 0..20 {
            let z = random_point(&mut rng, 0.95);
            let exact = w.apply_deriv(&f, z)?.entries;
            let plus = w.apply(&f, z + h)?.entries;
            let minus = w.apply(&f, z - h)?.entries;
            let fd: Vec<C64> = plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * h)).collect();
            let scale = ys.norm_of(&exact).max(ys.norm_of(&w.apply(&f, z)?.entries)).max(1.0);
            deriv.record(diff_norm(&ys, &exact, &fd) / scale, 1e-6 * t, || {
                format!("instance {i} at z = {z}")
            });

            let (a, b) = w.decomposition_terms(&f, z)?;
            let sum: Vec<C64> = a.entries.iter().zip(&b.entries).map(|(x, y)| x + y).collect();
            decomp.record(diff_norm(&ys, &sum, &exact) / scale, 1e-10 * t, || {
                format!("instance {i} at z = {z}")
            });
        }
        let n = rng.gen_range(0..=8);
        let once = truncate(&f, n);
        let twice = truncate(&once, n);
        let full = truncate(&f, 8);
        let z = random_point(&mut rng, 1.0);
        trunc.record(diff_norm(&f.space, &once.value(z), &twice.value(z)), 1e-12 * t, || {
            format!("instance {i}, n = {n}")
        });
        trunc.record(diff_norm(&f.space, &full.value(z), &f.value(z)), 1e-12 * t, || {
            format!("instance {i}, full degree")
        });
        for k in 0..=n {
            let e = diff_norm(&f.space, &coefficient(&once, k).entries, &coefficient(&f, k).entries);
            coef.record(e, 1e-12 * t, || format!("instance {i}, k = {k}, n = {n}"));
        }
        let (r, s) = (rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
        let two = dilate(&dilate(&f, s)?, r)?;
        let one = dilate(&f, r * s)?;
        semi.record(diff_norm(&f.space, &two.value(z), &one.value(z)), 1e-12 * t, || {
            format!("instance {i}, r = {r}, s = {s}")
        });
    }
    Ok(SuiteReport {
        suite: Suite::Identities,
        checks: vec![deriv.finish(), decomp.finish(), trunc.finish(), semi.finish(), coef.finish()],
        envelope: None,
    })
}

fn norms(t: f64) -> Result<SuiteReport> {
    let s = DiskSampler::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut homog = Tally::new("lambda norm of f x is |f| |x|");
    for i in 0..50 {
        let g = random_poly(&mut rng, 6);
        let sp = random_space(&mut rng);
        let x = Vector::new(sp, (0..sp.dim).map(|_| random_c64(&mut rng)).collect())?;
        let alpha = rng.gen_range(0.1..0.9);
        let scalar = lambda_norm(&VectorFunction::scalar(g.clone()), alpha, &s)?.value;
        let tensor = lambda_norm(&VectorFunction::tensor(&g, &x), alpha, &s)?.value;
        let expect = scalar * x.norm();
        homog.record((tensor - expect).abs() / expect.max(1e-300), 1e-9 * t, || {
            format!("sample {i}")
        });
    }

    let mut hl = Tally::new("two-point and Bloch-form seminorms within a factor 10");
    let mut tri = Tally::new("triangle inequality");
    let mut mono = Tally::new("Bloch seminorm nondecreasing in alpha");
    let mut ratios: Vec<f64> = Vec::new();
    for i in 0..20 {
        let f = VectorFunction::scalar(random_poly(&mut rng, 8));
        let g = VectorFunction::scalar(random_poly(&mut rng, 8));
        let head = f.space.norm_of(&f.value(C64::new(0.0, 0.0)));
        let mut prev = 0.0;
        for alpha in [0.25, 0.5, 0.75] {
            let bloch = lambda_norm(&f, alpha, &s)?.value - head;
            if bloch > 1e-12 {
                let two = lipschitz_seminorm_estimate(&f, alpha, 2000, i as u64)?;
                let r = two / bloch;
                ratios.push(r);
                let excess = (r / HL_FACTOR).max(1.0 / (r * HL_FACTOR)) - 1.0;
                hl.record(excess.max(0.0), 0.0 + 1e-12 * t, || {
                    format!("polynomial {i}, alpha {alpha}: ratio {r}")
                });
            }
            mono.record(prev - bloch, 1e-12 * t, || format!("polynomial {i}, alpha {alpha}"));
            prev = bloch;
            let sum = lambda_norm(&f.add(&g)?, alpha, &s)?.value;
            let parts = lambda_norm(&f, alpha, &s)?.value + lambda_norm(&g, alpha, &s)?.value;
            tri.record(sum - parts, 1e-9 * t, || format!("pair {i}, alpha {alpha}"));
        }
    }
    let mut hl_check = hl.finish();
    if let (Some(lo), Some(hi)) = (
        ratios.iter().copied().reduce(f64::min),
        ratios.iter().copied().reduce(f64::max),
    ) {
        hl_check.detail = format!("{}; ratio envelope [{lo:.4}, {hi:.4}]", hl_check.detail);
    }

    let mut three = Tally::new("test functions have norm at most 3 |x|");
    for i in 0..100 {
        let a = random_point(&mut rng, 0.999);
        if a.norm() < 1e-6 {
            continue;
        }
        let alpha = rng.gen_range(0.05..0.95);
        let f = VectorFunction::scalar(AnalyticScalar::test_fn(a, alpha)?);
        let v = lambda_norm(&f, alpha, &s)?.value;
        three.record(v - 3.0, 1e-6 * t, || format!("sample {i}: a = {a}, alpha = {alpha}, norm {v}"));
    }

    Ok(SuiteReport {
        suite: Suite::Norms,
        checks: vec![homog.finish(), hl_check, tri.finish(), mono.finish(), three.finish()],
        envelope: None,
    })
}

fn scalar_op(psi: AnalyticScalar, phi: AnalyticScalar, alpha: f64, beta: f64) -> Result<WeightedCompositionOp> {
    let sp = NormedSpace::scalar();
    WeightedCompositionOp::new(
        OperatorSymbol::scalar(psi),
        SelfMap::new(phi)?,
        SpaceSpec::big(alpha, sp)?,
        SpaceSpec::big(beta, sp)?,
    )
}

fn criteria(t: f64) -> Result<SuiteReport> {
    let s = DiskSampler::default();
    let p = ClassifierParams::default();
    let one = AnalyticScalar::one;
    let id = AnalyticScalar::identity;
    let rz = |r: f64| AnalyticScalar::affine(C64::new(r, 0.0), C64::new(0.0, 0.0));

    let mut closed = Tally::new("q closed forms");
    let q = q_criterion(&scalar_op(one(), id(), 0.5, 0.5)?, &s)?.value;
    closed.record((q - 1.0).abs(), 1e-9 * t, || "identity".into());
    for r in [0.3, 0.6, 0.9] {
        let q = q_criterion(&scalar_op(one(), rz(r), 0.5, 0.5)?, &s)?.value;
        closed.record((q - r).abs(), 1e-6 * t, || format!("phi = {r} z"));
    }

    let mut grid = Tally::new("exponent grid: bounded exactly when alpha >= beta");
    for a in [0.25, 0.5, 0.75] {
        for b in [0.25, 0.5, 0.75] {
            let v = boundedness_verdict(&scalar_op(one(), id(), a, b)?, &s, &p)?.verdict;
            let expect = if a >= b { Finiteness::Bounded } else { Finiteness::Unbounded };
            grid.record(if v == expect { 0.0 } else { 1.0 }, 0.0, || {
                format!("alpha {a}, beta {b}: got {v:?}")
            });
        }
    }

    let mut scaling = Tally::new("q scales with |c| and verdicts are scale invariant");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let coarse = DiskSampler::new(12, 64, 8)?;
    for i in 0..10 {
        let (w, _) = random_instance(&mut rng, 4);
        let c = random_c64(&mut rng) * 3.0;
        let scaled = WeightedCompositionOp {
            psi: w.psi.scaled(c),
            ..w.clone()
        };
        let q0 = q_criterion(&w, &coarse)?.value;
        let q1 = q_criterion(&scaled, &coarse)?.value;
        scaling.record((q1 - c.norm() * q0).abs() / (c.norm() * q0).max(1e-300), 1e-9 * t, || {
            format!("instance {i}, c = {c}")
        });
        let v0 = boundedness_verdict(&w, &coarse, &p)?.verdict;
        let v1 = boundedness_verdict(&scaled, &coarse, &p)?.verdict;
        scaling.record(if v0 == v1 { 0.0 } else { 1.0 }, 0.0, || {
            format!("instance {i}: {v0:?} vs {v1:?}")
        });
    }

    let mut pick = Tally::new("Schwarz-Pick bound on sampled points");
    for i in 0..10 {
        let phi = if i % 2 == 0 {
            random_self_map(&mut rng, 6)
        } else {
            SelfMap::new(AnalyticScalar::blaschke(random_point(&mut rng, 0.95))?)?
        };
        let w = WeightedCompositionOp {
            phi,
            ..scalar_op(one(), id(), 0.5, 0.5)?
        };
        for z in coarse.grid() {
            let v = (1.0 - z.norm_sqr()) * w.phi.derivative_at(z).norm() / (1.0 - w.phi.value(z).norm_sqr());
            pick.record(v - 1.0, 1e-9 * t, || format!("map {i} at z = {z}"));
        }
        let _ = q_quantity(&w, C64::new(0.0, 0.0));
    }

    let mut compact = Tally::new("compactness dichotomy");
    let v = compactness_verdict(&scalar_op(one(), rz(0.5), 0.5, 0.5)?, &s, &p)?.verdict;
    compact.record(if v == CompactVerdict::Compact { 0.0 } else { 1.0 }, 0.0, || {
        format!("phi = z/2: {v:?}")
    });
    let r = compactness_verdict(&scalar_op(one(), id(), 0.5, 0.5)?, &s, &p)?;
    compact.record(if r.verdict == CompactVerdict::NotCompact { 0.0 } else { 1.0 }, 0.0, || {
        format!("phi = id: {:?}", r.verdict)
    });
    for a in &r.annulus_profile {
        compact.record((a.value - 1.0).abs(), 1e-9 * t, || format!("annulus delta {}", a.delta));
    }

    Ok(SuiteReport {
        suite: Suite::Criteria,
        checks: vec![
            closed.finish(),
            grid.finish(),
            scaling.finish(),
            pick.finish(),
            compact.finish(),
        ],
        envelope: None,
    })
}

fn equivalence(t: f64) -> Result<SuiteReport> {
    let corpus = golden_corpus();
    let SweepSummary {
        rows,
        min_ratio,
        max_ratio,
    } = equivalence_sweep(&corpus)?;
    let (lo, hi) = RATIO_ENVELOPE;
    let mut env = Tally::new("L / C within [1/20, 20] on the golden corpus");
    let mut bounded = Tally::new("every golden scenario is bounded");
    for r in &rows {
        bounded.record(if r.bounded_verdict == Finiteness::Bounded { 0.0 } else { 1.0 }, 0.0, || {
            format!("{}: {:?}", r.scenario_id, r.bounded_verdict)
        });
        if let Some(ratio) = r.ratio {
            let excess = (lo / ratio).max(ratio / hi) - 1.0;
            env.record(excess.max(0.0), 1e-12 * t, || format!("{}: ratio {ratio}", r.scenario_id));
        }
    }
    let mut ident = Tally::new("identity scenario ratio in [0.99, 1.01]");
    match rows.iter().find(|r| r.scenario_id == "identity").and_then(|r| r.ratio) {
        Some(ratio) => ident.record((ratio - 1.0).abs() - 0.01, 1e-12 * t, || format!("ratio {ratio}")),
        None => ident.record(1.0, 0.0, || "identity scenario missing or unbounded".into()),
    }
    Ok(SuiteReport {
        suite: Suite::Equivalence,
        checks: vec![bounded.finish(), env.finish(), ident.finish()],
        envelope: min_ratio.zip(max_ratio),
    })
}
