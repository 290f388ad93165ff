//! Experiment configuration: one JSON document, one optional section per
//! command. Sections are self-contained so a config can drive a single
//! command or the whole suite.

use cqms_core::automorphism::{Action, GroupAutomorphism};
use cqms_core::entropy::DEFAULT_CARDINALITY_CAP;
use cqms_core::group::{Group, GroupElement, IntMatrix};
use cqms_core::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Root seed for every random stream; runs with equal seeds and equal
    /// sections produce byte-identical reports.
    pub seed: u64,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub growth: Option<GrowthConfig>,
    #[serde(default)]
    pub leibniz: Option<LeibnizConfig>,
    #[serde(default)]
    pub seminorm: Option<SeminormConfig>,
    #[serde(default)]
    pub mdim: Option<MdimConfig>,
    #[serde(default)]
    pub entropy: Option<EntropyConfig>,
    #[serde(default)]
    pub hyperbolic: Option<HyperbolicConfig>,
    #[serde(default)]
    pub lipschitz: Option<LipschitzConfig>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    FreeAbelian { rank: usize },
    Free { rank: usize },
    SemidirectZ { twist: Vec<Vec<i64>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        match self {
            GroupSpec::FreeAbelian { rank } => Group::free_abelian(*rank),
            GroupSpec::Free { rank } => Group::free(*rank),
            GroupSpec::SemidirectZ { twist } => {
                Group::semidirect_z(IntMatrix::from_rows(twist)?)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementSpec {
    Vector { coords: Vec<i64> },
    Word { letters: Vec<i16> },
    Semi { v: Vec<i64>, k: i64 },
}

impl ElementSpec {
    pub fn build(&self) -> GroupElement {
        match self {
            ElementSpec::Vector { coords } => GroupElement::Vector(coords.clone()),
            ElementSpec::Word { letters } => GroupElement::Word(letters.clone()),
            ElementSpec::Semi { v, k } => GroupElement::Semi { v: v.clone(), k: *k },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AutomorphismSpec {
    Identity,
    Matrix { rows: Vec<Vec<i64>> },
    Extended { rows: Vec<Vec<i64>> },
    Inner { element: ElementSpec },
}

impl AutomorphismSpec {
    pub fn build(&self, group: &Group) -> Result<GroupAutomorphism> {
        let action = match self {
            AutomorphismSpec::Identity => Action::Identity,
            AutomorphismSpec::Matrix { rows } => Action::Linear(IntMatrix::from_rows(rows)?),
            AutomorphismSpec::Extended { rows } => {
                Action::ExtendedLinear(IntMatrix::from_rows(rows)?)
            }
            AutomorphismSpec::Inner { element } => Action::Inner(element.build()),
        };
        GroupAutomorphism::new(group.clone(), action)
    }

    /// The lattice matrix behind the action, where one exists.
    pub fn matrix(&self) -> Option<Result<IntMatrix>> {
        match self {
            AutomorphismSpec::Matrix { rows } | AutomorphismSpec::Extended { rows } => {
                Some(IntMatrix::from_rows(rows))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthConfig {
    pub scenarios: Vec<GrowthScenario>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthScenario {
    pub label: String,
    pub group: GroupSpec,
    pub n_max: u32,
    /// Inclusive fit window; defaults to the tail of the radius range.
    #[serde(default)]
    pub window: Option<[u32; 2]>,
    pub expect: GrowthExpect,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrowthExpect {
    /// Enumerated counts equal the closed-form counts at every radius.
    ClosedFormExact,
    PolynomialExponentNear { value: f64, tol: f64 },
    PolynomialExponentAtMost { limit: f64 },
    ExponentialRateAtLeast { min: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeibnizConfig {
    pub groups: Vec<GroupSpec>,
    /// Random factor tuples drawn per group; n and k cycle through the
    /// configured values so every combination is exercised.
    pub tuples_per_group: u32,
    pub n_values: Vec<u32>,
    pub k_values: Vec<u32>,
    pub support_radius: u32,
    #[serde(default = "default_composition_cap")]
    pub composition_cap: u64,
}

fn default_composition_cap() -> u64 {
    100_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormConfig {
    #[serde(default)]
    pub tightness: Option<TightnessConfig>,
    #[serde(default)]
    pub ordering: Option<OrderingConfig>,
    #[serde(default)]
    pub fourier: Option<FourierConfig>,
    #[serde(default)]
    pub conjugation: Option<ConjugationConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugationConfig {
    pub group: GroupSpec,
    pub samples: u32,
    /// Conjugators are drawn from this ball.
    pub h_radius: u32,
    pub support_radius: u32,
    pub max_terms: u32,
    pub k_values: Vec<u32>,
    pub schedule: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TightnessConfig {
    pub groups: Vec<GroupSpec>,
    pub samples_per_group: u32,
    pub ball_radius: u32,
    pub k_values: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderingConfig {
    pub families: Vec<OrderingFamily>,
    pub schedule: Vec<u32>,
    pub k_values: Vec<u32>,
    pub support_radius: u32,
    pub max_terms: u32,
    /// Relative slack for the bracketing comparisons, which hold up to
    /// rounding.
    pub slack: f64,
    /// Relative slack for the nondecreasing-in-radius comparison. The
    /// power iteration stops on a relative-change test, which can fire on a
    /// plateau short of the limit, so neighboring radii need more room than
    /// rounding noise.
    pub monotonicity_slack: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderingFamily {
    pub group: GroupSpec,
    pub samples: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierConfig {
    pub line_samples: u32,
    pub plane_samples: u32,
    pub support_radius: u32,
    pub compression_radius: u32,
    pub line_grid: usize,
    pub plane_grid: usize,
    /// Allowed undershoot of the compression below the grid maximum.
    pub lower_slack: f64,
    /// Allowed absolute gap between compression and grid maximum.
    pub gap_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MdimConfig {
    pub runs: Vec<MdimRun>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MdimRun {
    pub label: String,
    pub group: GroupSpec,
    pub k: u32,
    pub growth_exponent: f64,
    #[serde(default = "default_c_hat")]
    pub c_hat: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_points: usize,
    pub expect: MdimExpect,
}

fn default_c_hat() -> f64 {
    2.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MdimExpect {
    /// Measured slope inside the theoretical bracket, widened by slack.
    SlopeWithinBracket { slack: f64 },
    InfiniteSignature,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyConfig {
    pub scenarios: Vec<EntropyScenario>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyScenario {
    pub label: String,
    pub group: GroupSpec,
    pub automorphism: AutomorphismSpec,
    pub seed_set: SeedSpec,
    pub n_max: u32,
    #[serde(default = "default_cap")]
    pub cap: u64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub verdict: EntropyVerdict,
}

fn default_cap() -> u64 {
    DEFAULT_CARDINALITY_CAP
}

fn default_delta() -> f64 {
    0.5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeedSpec {
    Elements {
        elements: Vec<ElementSpec>,
        /// Padding the seed with the identity makes product sets monotone.
        #[serde(default = "default_true")]
        include_identity: bool,
    },
    /// All positive words of exactly this length: products of n of them
    /// never cancel, so the counts are powers.
    PositiveWords { length: u32 },
}

fn default_true() -> bool {
    true
}

impl SeedSpec {
    pub fn build(&self, group: &Group) -> Result<Vec<GroupElement>> {
        match self {
            SeedSpec::Elements {
                elements,
                include_identity,
            } => {
                let mut out: Vec<GroupElement> = Vec::new();
                if *include_identity {
                    out.push(group.identity());
                }
                for e in elements {
                    let el = e.build();
                    if !out.contains(&el) {
                        out.push(el);
                    }
                }
                Ok(out)
            }
            SeedSpec::PositiveWords { length } => {
                let rank = match group {
                    Group::Free { rank } => *rank as i16,
                    _ => {
                        return Err(Error::InvalidParameter(
                            "positive-word seeds need a free group".into(),
                        ))
                    }
                };
                if *length == 0 || *length > 12 {
                    return Err(Error::InvalidParameter(format!(
                        "positive-word length {length} out of range"
                    )));
                }
                let mut words = vec![Vec::new()];
                for _ in 0..*length {
                    let mut next = Vec::with_capacity(words.len() * rank as usize);
                    for w in &words {
                        for l in 1..=rank {
                            let mut v: Vec<i16> = w.clone();
                            v.push(l);
                            next.push(v);
                        }
                    }
                    words = next;
                }
                Ok(words.into_iter().map(GroupElement::Word).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EntropyVerdict {
    RateNear {
        value: f64,
        tol: f64,
    },
    /// Conservative rate below the cutoff, with the counts fitting a
    /// polynomial in log-log coordinates.
    RateBelow {
        max: f64,
        #[serde(default = "default_residual_tol")]
        max_fit_residual: f64,
    },
    /// Lower estimate pinned near a value; upper certificate from the
    /// growth exponent and the Lipschitz constant of the automorphism.
    BracketAgainstGrowthCertificate {
        lower_value: f64,
        lower_tol: f64,
        growth_exponent: f64,
        validation_radius: u32,
    },
    /// Measured rate at most the spectral entropy of the acting matrix
    /// plus the margin.
    SpectralCeiling {
        margin: f64,
    },
}

fn default_residual_tol() -> f64 {
    0.1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperbolicConfig {
    pub matrix: Vec<Vec<i64>>,
    pub search_radius: u32,
    pub n_check: u32,
    /// Matrices expected to produce no witness.
    #[serde(default)]
    pub controls: Vec<HyperbolicControl>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperbolicControl {
    pub label: String,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LipschitzConfig {
    pub cases: Vec<LipschitzCase>,
    #[serde(default)]
    pub polynomial: Option<PolynomialBoundCase>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LipschitzCase {
    pub label: String,
    pub group: GroupSpec,
    pub automorphism: AutomorphismSpec,
    pub validation_radius: u32,
    #[serde(default)]
    pub expected_lambda: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialBoundCase {
    pub rows: Vec<Vec<i64>>,
    pub ball_radius: u32,
    pub n_max: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_a_minimal_config() {
        let text = r#"{
            "seed": 11,
            "growth": { "scenarios": [ {
                "label": "plane",
                "group": { "kind": "free_abelian", "rank": 2 },
                "n_max": 12,
                "expect": { "kind": "polynomial_exponent_near", "value": 2.0, "tol": 0.2 }
            } ] }
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.seed, 11);
        let sc = &cfg.growth.as_ref().unwrap().scenarios[0];
        assert!(matches!(sc.expect, GrowthExpect::PolynomialExponentNear { .. }));
        sc.group.build().unwrap();
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{ "seed": 1, "typo_section": {} }"#;
        assert!(ExperimentConfig::from_json(text).is_err());
    }

    #[test]
    fn positive_word_seeds_enumerate_all_words() {
        let g = Group::free(2).unwrap();
        let seed = SeedSpec::PositiveWords { length: 3 }.build(&g).unwrap();
        assert_eq!(seed.len(), 8);
        assert!(seed.iter().all(|w| matches!(w, GroupElement::Word(l) if l.len() == 3)));
    }

    #[test]
    fn element_seed_includes_identity_once() {
        let g = Group::free_abelian(2).unwrap();
        let seeds = SeedSpec::Elements {
            elements: vec![
                ElementSpec::Vector { coords: vec![0, 0] },
                ElementSpec::Vector { coords: vec![1, 0] },
            ],
            include_identity: true,
        };
        let seed = seeds.build(&g).unwrap();
        assert_eq!(seed.len(), 2);
    }
}
