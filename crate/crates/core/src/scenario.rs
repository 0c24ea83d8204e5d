//! Scenario files and the built-in golden corpus.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::{ClassifierParams, DiskSampler};
use crate::error::Result;
use crate::fnkernel::{AnalyticScalar, SelfMap, C64};
use crate::normedspace::{check_pair, NormKind, NormedSpace};
use crate::vspaces::{Flavor, SpaceSpec};
use crate::wcop::{OperatorSymbol, SymbolSpec, WeightedCompositionOp};

/// One operator together with the sampling configuration used to analyze it.
///
/// ```json
/// {"id": "identity", "alpha": 0.5, "beta": 0.5,
///  "X": {"dim": 1, "norm": "l2"}, "Y": {"dim": 1, "norm": "l2"},
///  "phi": {"kind": "affine", "s": [1, 0], "c": [0, 0]},
///  "psi": {"entries": [[{"kind": "poly", "coeffs": [[1, 0]]}]]}}
/// ```
///
/// `sampler` and `classifier` are optional and default to the documented values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "X")]
    pub x: NormedSpace,
    #[serde(rename = "Y")]
    pub y: NormedSpace,
    pub phi: AnalyticScalar,
    pub psi: SymbolSpec,
    #[serde(default)]
    pub sampler: DiskSampler,
    #[serde(default)]
    pub classifier: ClassifierParams,
}

impl Scenario {
    pub fn scalar(id: &str, psi: AnalyticScalar, phi: AnalyticScalar, alpha: f64, beta: f64) -> Self {
        let s = NormedSpace::scalar();
        Scenario {
            id: id.into(),
            alpha,
            beta,
            x: s,
            y: s,
            phi,
            psi: SymbolSpec {
                entries: vec![vec![psi]],
            },
            sampler: DiskSampler::default(),
            classifier: ClassifierParams::default(),
        }
    }

    /// Checks every field and assembles the operator.
    pub fn operator(&self) -> Result<WeightedCompositionOp> {
        self.sampler.validate()?;
        self.classifier.validate()?;
        let source = SpaceSpec::new(self.alpha, self.x, Flavor::Big)?;
        let target = SpaceSpec::new(self.beta, self.y, Flavor::Big)?;
        let psi = OperatorSymbol::from_spec(&self.psi, self.x, self.y)?;
        let phi = SelfMap::new(self.phi.clone())?;
        WeightedCompositionOp::new(psi, phi, source, target)
    }

    pub fn validate(&self) -> Result<()> {
        self.operator().map(|_| ())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }
}

/// Parses a corpus file: a JSON array of scenarios.
pub fn load_corpus(path: &Path) -> Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path)?;
    parse_corpus(&text)
}

pub fn parse_corpus(text: &str) -> Result<Vec<Scenario>> {
    let corpus: Vec<Scenario> = serde_json::from_str(text)?;
    for s in &corpus {
        s.validate()?;
    }
    Ok(corpus)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    Scenario::from_json(&std::fs::read_to_string(path)?)
}

/// Seed of the random part of the golden corpus.
pub const CORPUS_SEED: u64 = 20_240_611;

/// Size of the golden corpus.
pub const CORPUS_SIZE: usize = 30;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn one() -> AnalyticScalar {
    AnalyticScalar::one()
}

/// The 30 built-in scenarios: hand-picked operators first, then seeded random
/// polynomial ones whose `phi` has coefficient sum at most 0.9.
pub fn golden_corpus() -> Vec<Scenario> {
    let id = AnalyticScalar::identity;
    let rz = |r: f64| AnalyticScalar::affine(c(r), c(0.0));
    let mut out = vec![
        Scenario::scalar("identity", one(), id(), 0.5, 0.5),
        Scenario::scalar("dilation-0.3", one(), rz(0.3), 0.5, 0.5),
        Scenario::scalar("dilation-0.6", one(), rz(0.6), 0.5, 0.5),
        Scenario::scalar("dilation-0.9", one(), rz(0.9), 0.5, 0.5),
        Scenario::scalar("half", one(), rz(0.5), 0.5, 0.5),
        Scenario::scalar(
            "contact-point",
            AnalyticScalar::affine(c(-1.0), c(1.0)),
            AnalyticScalar::affine(c(0.5), c(0.5)),
            0.5,
            0.5,
        ),
        Scenario::scalar("lowering", one(), id(), 0.75, 0.25),
        Scenario::scalar(
            "automorphism",
            one(),
            AnalyticScalar::Blaschke { a: C64::new(0.3, 0.4) },
            0.5,
            0.5,
        ),
        Scenario::scalar("lipschitz-source", one(), rz(0.5), 1.0, 0.5),
        Scenario::scalar(
            "power-weight",
            AnalyticScalar::Power {
                c: c(1.0),
                a: c(0.5),
                gamma: 0.5,
            },
            id(),
            0.5,
            0.5,
        ),
    ];
    let l2 = NormedSpace {
        dim: 2,
        norm: NormKind::L2,
    };
    let l1 = NormedSpace {
        dim: 2,
        norm: NormKind::L1,
    };
    out.push(Scenario {
        id: "diagonal".into(),
        alpha: 0.5,
        beta: 0.5,
        x: l2,
        y: l2,
        phi: id(),
        psi: SymbolSpec {
            entries: vec![
                vec![AnalyticScalar::constant(c(2.0)), AnalyticScalar::zero()],
                vec![AnalyticScalar::zero(), one()],
            ],
        },
        sampler: DiskSampler::default(),
        classifier: ClassifierParams::default(),
    });
    out.push(Scenario {
        id: "shear".into(),
        alpha: 0.5,
        beta: 0.5,
        x: l1,
        y: l1,
        phi: rz(0.5),
        psi: SymbolSpec {
            entries: vec![
                vec![one(), AnalyticScalar::real_poly(&[0.0, 0.0, 1.0])],
                vec![AnalyticScalar::zero(), one()],
            ],
        },
        sampler: DiskSampler::default(),
        classifier: ClassifierParams::default(),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut k = 0;
    while out.len() < CORPUS_SIZE {
        k += 1;
        out.push(random_scenario(&mut rng, &format!("random-{k:02}")));
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize, scale: f64) -> Vec<C64> {
    let deg = rng.gen_range(0..=max_degree);
    (0..=deg)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale)
        .collect()
}

fn round(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn rounded(v: Vec<C64>) -> Vec<C64> {
    v.into_iter().map(|z| C64::new(round(z.re), round(z.im))).collect()
}

fn random_space(rng: &mut ChaCha8Rng) -> NormedSpace {
    let kinds = [NormKind::L1, NormKind::L2, NormKind::Linf];
    NormedSpace {
        dim: rng.gen_range(1..=2),
        norm: kinds[rng.gen_range(0..3)],
    }
}

/// A random bounded scenario: `phi` is a polynomial with coefficient sum
/// `<= 0.9`, so `|phi| <= 0.9` on the closed disk.
pub fn random_scenario(rng: &mut ChaCha8Rng, id: &str) -> Scenario {
    let mut phi = random_poly(rng, 3, 1.0);
    if phi.len() < 2 {
        phi.push(c(0.5));
    }
    let total: f64 = phi.iter().map(|z| z.norm()).sum();
    let target = rng.gen_range(0.3..0.9);
    let phi = rounded(phi.into_iter().map(|z| z * (target / total)).collect());
    let (x, y) = loop {
        let x = random_space(rng);
        let y = random_space(rng);
        if check_pair(x, y).is_ok() {
            break (x, y);
        }
    };
    let entries = (0..y.dim)
        .map(|_| {
            (0..x.dim)
                .map(|_| AnalyticScalar::poly(rounded(random_poly(rng, 3, 1.0))))
                .collect()
        })
        .collect();
    let exps = [0.25, 0.5, 0.75];
    Scenario {
        id: id.into(),
        alpha: exps[rng.gen_range(0..3)],
        beta: exps[rng.gen_range(0..3)],
        x,
        y,
        phi: AnalyticScalar::poly(phi),
        psi: SymbolSpec { entries },
        sampler: DiskSampler::default(),
        classifier: ClassifierParams::default(),
    }
}

/// Pretty JSON of a corpus, newline-terminated.
pub fn corpus_json(corpus: &[Scenario]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(corpus)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid_and_deterministic() {
        let a = golden_corpus();
        assert_eq!(a.len(), CORPUS_SIZE);
        assert_eq!(a, golden_corpus());
        for s in &a {
            s.validate().unwrap_or_else(|e| panic!("{}: {e}", s.id));
        }
        let mut ids: Vec<_> = a.iter().map(|s| s.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CORPUS_SIZE);
    }

    #[test]
    fn round_trip() {
        for s in golden_corpus() {
            let text = serde_json::to_string(&s).unwrap();
            assert_eq!(Scenario::from_json(&text).unwrap(), s);
        }
    }

    #[test]
    fn defaults_and_rejections() {
        let text = r#"{"id":"x","alpha":0.5,"beta":0.5,"X":{"dim":1,"norm":"l2"},"Y":{"dim":1,"norm":"l2"},
            "phi":{"kind":"affine","s":[1,0],"c":[0,0]},"psi":{"entries":[[{"kind":"poly","coeffs":[[1,0]]}]]}}"#;
        let s = Scenario::from_json(text).unwrap();
        assert_eq!(s.sampler, DiskSampler::default());
        assert!(Scenario::from_json(&text.replace("\"alpha\":0.5", "\"alpha\":1.5")).is_err());
        assert!(Scenario::from_json(&text.replace("\"s\":[1,0]", "\"s\":[2,0]")).is_err());
        assert!(Scenario::from_json(&text.replace("\"id\"", "\"name\"")).is_err());
        assert!(Scenario::from_json("{").is_err());
    }
}
