//! Destabilization search over coordinate frames.
//!
//! Each frame is a coordinate change `sigma`; the torus LP is run on
//! `sigma f`, strict mode first. Frames are generated in a fixed order:
//! the input frame, one frame per rational singular point (moved to
//! `Q = [0:...:0:1]`), then seeded random frames built from unipotent and
//! permutation factors that keep the chosen point at `Q`.

use std::collections::HashMap;
use std::fmt;

use clap::ValueEnum;
use gitstab_core::hilbert_mumford::{
    torus_destabilize, verify_certificate, weight_inequality_filter, Certificate, CertificateCheck, TorusDecision,
    WeightVector,
};
use gitstab_core::num::rat;
use gitstab_core::singularity::ProjectivePoint;
use gitstab_core::verdict::Status;
use gitstab_core::{ExponentVector, HomogeneousPoly, RationalMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    SingularPointToQ,
    Permutations,
    RandomUnipotent,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::SingularPointToQ, Strategy::Permutations, Strategy::RandomUnipotent];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::SingularPointToQ => "singular-point-to-q",
            Strategy::Permutations => "permutations",
            Strategy::RandomUnipotent => "random-unipotent",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Number of coordinate frames to try.
    pub budget: u64,
    pub seed: u64,
    /// Bound on the entries of random factors.
    pub bound: i64,
    pub strategies: Vec<Strategy>,
    /// Singular-locus dimension used to flag certificates failing the weight filter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assume_s: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 100, seed: 1, bound: 2, strategies: Strategy::ALL.to_vec(), assume_s: None }
    }
}

impl SearchConfig {
    pub fn validate(&self, f: &HomogeneousPoly) -> CliResult<()> {
        if self.budget < 1 {
            return Err(CliError::input("search budget must be at least 1"));
        }
        if self.bound < 1 {
            return Err(CliError::input("matrix entry bound must be at least 1"));
        }
        if self.strategies.is_empty() {
            return Err(CliError::input("no search strategy selected"));
        }
        if let Some(s) = self.assume_s {
            if s + 2 > f.n() {
                return Err(CliError::input(format!("--assume-s {s} outside [0, n - 2 = {}]", f.n() as i64 - 2)));
            }
        }
        Ok(())
    }
}

/// Where a frame came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameSource {
    Input,
    Strategy(Strategy),
}

impl fmt::Display for FrameSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameSource::Input => f.write_str("input"),
            FrameSource::Strategy(s) => s.fmt(f),
        }
    }
}

/// Torus decisions in one frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub index: u64,
    pub source: FrameSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<ProjectivePoint>,
    pub sigma: RationalMatrix,
    pub strict_feasible: bool,
    /// `None` when the non-strict LP was skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_strict_feasible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WeightVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundCertificate {
    pub certificate: Certificate,
    pub status: Status,
    pub source: FrameSource,
    pub frame: u64,
    /// Result of the weight filter on the sorted weights when `assume_s` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passes_filter: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    pub frames_tried: u64,
    pub frames: Vec<FrameRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<FoundCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_strict: Option<FoundCertificate>,
    pub summary: String,
}

impl SearchOutcome {
    /// The strongest certificate found.
    pub fn best(&self) -> Option<&FoundCertificate> {
        self.strict.as_ref().or(self.non_strict.as_ref())
    }

    pub fn certificates(&self) -> Vec<&FoundCertificate> {
        self.strict.iter().chain(self.non_strict.iter()).collect()
    }
}

struct Frame {
    source: FrameSource,
    point: Option<ProjectivePoint>,
    sigma: RationalMatrix,
}

fn random_unipotent(rng: &mut ChaCha8Rng, size: usize, bound: i64) -> RationalMatrix {
    let mut u = RationalMatrix::identity(size);
    for i in 0..size {
        for j in i + 1..size {
            u.set(i, j, rat(rng.gen_range(-bound..=bound)));
        }
    }
    u
}

/// Random permutation; it fixes the last coordinate when `keep_last`.
fn random_permutation(rng: &mut ChaCha8Rng, size: usize, keep_last: bool) -> RationalMatrix {
    let movable = if keep_last { size - 1 } else { size };
    let mut perm: Vec<usize> = (0..size).collect();
    perm[..movable].shuffle(rng);
    RationalMatrix::permutation(&perm)
}

struct FrameGenerator<'a> {
    size: usize,
    cfg: &'a SearchConfig,
    rng: ChaCha8Rng,
    fixed: Vec<Frame>,
    bases: Vec<(Option<ProjectivePoint>, RationalMatrix)>,
    random: Vec<Strategy>,
    next_random: usize,
}

impl<'a> FrameGenerator<'a> {
    fn new(size: usize, points: &[ProjectivePoint], cfg: &'a SearchConfig) -> Self {
        let identity = RationalMatrix::identity(size);
        let mut fixed = vec![Frame { source: FrameSource::Input, point: None, sigma: identity.clone() }];
        let mut bases = vec![(None, identity.clone())];
        for p in points {
            let sigma = p.move_to_last();
            bases.push((Some(p.clone()), sigma.clone()));
            if !cfg.strategies.contains(&Strategy::SingularPointToQ) {
                continue;
            }
            let source = FrameSource::Strategy(Strategy::SingularPointToQ);
            if sigma == identity {
                // the point already sits at Q: the input frame is this frame
                fixed[0].source = source;
                fixed[0].point = Some(p.clone());
            } else {
                fixed.push(Frame { source, point: Some(p.clone()), sigma });
            }
        }
        if !points.is_empty() {
            // random frames start from the singular points
            bases.remove(0);
        }
        fixed.reverse();
        let random = cfg
            .strategies
            .iter()
            .copied()
            .filter(|s| *s != Strategy::SingularPointToQ)
            .collect();
        FrameGenerator { size, cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed), fixed, bases, random, next_random: 0 }
    }

    fn next(&mut self) -> Option<Frame> {
        if let Some(f) = self.fixed.pop() {
            return Some(f);
        }
        if self.random.is_empty() {
            return None;
        }
        let k = self.next_random;
        self.next_random += 1;
        let strategy = self.random[k % self.random.len()];
        let (point, base) = &self.bases[(k / self.random.len()) % self.bases.len()];
        let u = random_unipotent(&mut self.rng, self.size, self.cfg.bound);
        let factor = match strategy {
            Strategy::RandomUnipotent => u,
            _ => {
                let p = random_permutation(&mut self.rng, self.size, point.is_some());
                u.mul(&p).expect("square matrices of equal size")
            }
        };
        let sigma = factor.mul(base).expect("square matrices of equal size");
        Some(Frame { source: FrameSource::Strategy(strategy), point: point.clone(), sigma })
    }
}

fn found(
    f: &HomogeneousPoly,
    frame: &Frame,
    index: u64,
    r: WeightVector,
    strict: bool,
    cfg: &SearchConfig,
) -> CliResult<FoundCertificate> {
    let certificate = Certificate { sigma: frame.sigma.clone(), r, strict };
    match verify_certificate(f, &certificate)? {
        CertificateCheck::Verified { status } => {
            let passes_filter = match cfg.assume_s {
                Some(s) => Some(weight_inequality_filter(&certificate.r.sorted().0, s, f.d(), strict)?),
                None => None,
            };
            Ok(FoundCertificate { certificate, status, source: frame.source, frame: index, passes_filter })
        }
        CertificateCheck::Rejected { monomial, weight } => Err(CliError::internal(format!(
            "certificate from frame {index} failed re-verification at {monomial:?} (weight {weight})"
        ))),
    }
}

/// Torus decisions depend only on the support, which random frames tend to share.
#[derive(Default)]
struct DecisionCache {
    strict: HashMap<Vec<ExponentVector>, TorusDecision>,
    non_strict: HashMap<Vec<ExponentVector>, TorusDecision>,
}

impl DecisionCache {
    fn decide(&mut self, g: &HomogeneousPoly, strict: bool) -> CliResult<TorusDecision> {
        let key: Vec<ExponentVector> = g.support().cloned().collect();
        let map = if strict { &mut self.strict } else { &mut self.non_strict };
        if let Some(d) = map.get(&key) {
            return Ok(d.clone());
        }
        let d = torus_destabilize(g, strict)?;
        map.insert(key, d.clone());
        Ok(d)
    }
}

/// Runs the search. Deterministic given `cfg.seed`; absence of a certificate
/// is a normal outcome and never a stability claim.
pub fn search(f: &HomogeneousPoly, points: &[ProjectivePoint], cfg: &SearchConfig) -> CliResult<SearchOutcome> {
    cfg.validate(f)?;
    let mut generator = FrameGenerator::new(f.num_vars(), points, cfg);
    let mut frames = Vec::new();
    let mut strict = None;
    let mut non_strict: Option<FoundCertificate> = None;
    let mut cache = DecisionCache::default();
    let mut index = 0;
    while index < cfg.budget {
        let Some(frame) = generator.next() else { break };
        let g = f.apply_linear_change(&frame.sigma)?;
        let strict_decision = cache.decide(&g, true)?;
        let mut record = FrameRecord {
            index,
            source: frame.source,
            point: frame.point.clone(),
            sigma: frame.sigma.clone(),
            strict_feasible: strict_decision.feasible,
            non_strict_feasible: None,
            witness: strict_decision.witness.clone(),
        };
        if let Some(r) = strict_decision.witness {
            strict = Some(found(f, &frame, index, r, true, cfg)?);
            frames.push(record);
            index += 1;
            break;
        }
        if non_strict.is_none() {
            let decision = cache.decide(&g, false)?;
            record.non_strict_feasible = Some(decision.feasible);
            if let Some(r) = decision.witness {
                record.witness = Some(r.clone());
                non_strict = Some(found(f, &frame, index, r, false, cfg)?);
            }
        }
        frames.push(record);
        index += 1;
    }
    let summary = match (&strict, &non_strict) {
        (Some(c), _) => format!("strict certificate found in frame {} ({})", c.frame, c.source),
        (None, Some(c)) => format!(
            "non-strict certificate found in frame {} ({}); no strict certificate found within budget",
            c.frame, c.source
        ),
        (None, None) => "no certificate found within budget".to_string(),
    };
    Ok(SearchOutcome { config: cfg.clone(), frames_tried: index, frames, strict, non_strict, summary })
}
