//! Sufficient conditions for (semi-)stability in terms of `n`, `d`, the
//! singular-locus dimension `s`, the maximal multiplicity `delta` and the
//! minimal Hessian rank at double points.
//!
//! Every comparison is exact. The one irrational threshold,
//! `1 + a + sqrt(a^2 - delta + 1)` with `a = delta (s+2) / 2`, is decided by
//! checking signs and then squaring.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::literature::LiteratureTable;
use crate::num::{frac, rat, Rational};
use crate::verdict::{ClaimSource, Reason, StabilityVerdict, Status};

pub const SMOOTH: &str = "smooth";
pub const DELTA_FORM: &str = "multiplicity/delta-form";
pub const DEGREE_FORM: &str = "multiplicity/degree-form";
pub const HESSIAN_RANK: &str = "hessian/rank";
pub const HESSIAN_CORANK: &str = "hessian/corank";
pub const BASELINE_MULTIPLICITY: &str = "baseline/multiplicity";
pub const BASELINE_TANGENT_CONE: &str = "baseline/tangent-cone";
pub const LITERATURE: &str = "literature";

// Both forms use the degree-form pairing; the delta-form as usually stated swaps it.
const PAIRING_NOTE: &str = "strict inequality gives stable, equality gives semi-stable";

/// How a profile field was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldSource {
    UserAsserted,
    VerifiedAtPoints,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub s: FieldSource,
    pub delta: FieldSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_hessian_rank: Option<FieldSource>,
}

impl Provenance {
    pub fn user_asserted() -> Self {
        Provenance { s: FieldSource::UserAsserted, delta: FieldSource::UserAsserted, min_hessian_rank: None }
    }
}

/// Singularity data of a hypersurface `V(f)` of degree `d` in `P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityProfile {
    pub n: usize,
    pub d: u32,
    /// Dimension of the singular locus; `-1` when smooth.
    pub s: i64,
    pub delta: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_hessian_rank: Option<usize>,
    pub provenance: Provenance,
}

impl SingularityProfile {
    pub fn new(n: usize, d: u32, s: i64, delta: u32, min_hessian_rank: Option<usize>) -> Result<Self> {
        let mut provenance = Provenance::user_asserted();
        provenance.min_hessian_rank = min_hessian_rank.map(|_| FieldSource::UserAsserted);
        let p = SingularityProfile { n, d, s, delta, min_hessian_rank, provenance };
        p.validate()?;
        Ok(p)
    }

    pub fn smooth(n: usize, d: u32) -> Result<Self> {
        Self::new(n, d, -1, 1, None)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn is_smooth(&self) -> bool {
        self.s < 0
    }

    pub fn corank(&self) -> Option<usize> {
        self.min_hessian_rank.map(|r| self.n - r)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.n < 2 {
            return bad(format!("n = {} < 2", self.n));
        }
        if self.d < 3 {
            return bad(format!("d = {} < 3", self.d));
        }
        if self.s < -1 || self.s > self.n as i64 - 1 {
            return bad(format!("s = {} outside [-1, {}]", self.s, self.n - 1));
        }
        if self.delta < 1 || self.delta > self.d {
            return bad(format!("delta = {} outside [1, d = {}]", self.delta, self.d));
        }
        if self.s == -1 && self.delta != 1 {
            return bad(format!("a smooth hypersurface has delta = 1, got {}", self.delta));
        }
        if let Some(r) = self.min_hessian_rank {
            if self.delta > 2 {
                return bad(format!("a Hessian rank is only meaningful for delta <= 2, got {}", self.delta));
            }
            if r > self.n {
                return bad(format!("Hessian rank {r} exceeds n = {}", self.n));
            }
        }
        Ok(())
    }
}

fn status_from(cmp: Ordering, want: Ordering) -> Status {
    // `want` is the ordering that makes the strict inequality hold
    if cmp == want {
        Status::Stable
    } else if cmp == Ordering::Equal {
        Status::SemiStable
    } else {
        Status::Inconclusive
    }
}

fn smooth_verdict(p: &SingularityProfile) -> StabilityVerdict {
    StabilityVerdict::new(
        Status::Stable,
        vec![Reason::theorem(SMOOTH, None, format!("non-singular hypersurfaces of degree {} >= 3 are stable", p.d))],
    )
}

fn sym(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

/// Multiplicity bound: `delta < d(d-2)/((s+2)d-(s+3))` for `s <= n-2`,
/// `delta < d/(n+1)` for `s = n-1`.
pub fn evaluate_thm1_delta_form(p: &SingularityProfile) -> Result<StabilityVerdict> {
    p.validate()?;
    if p.is_smooth() {
        return Ok(smooth_verdict(p));
    }
    let (d, s, n) = (p.d as i64, p.s, p.n as i64);
    let bound = if s <= n - 2 {
        frac(d * (d - 2), (s + 2) * d - (s + 3))
    } else {
        frac(d, n + 1)
    };
    let cmp = rat(p.delta as i64).cmp(&bound);
    let status = status_from(cmp, Ordering::Less);
    let margin = format!("{} {} {}", p.delta, sym(cmp), bound);
    Ok(StabilityVerdict::new(status, vec![Reason::theorem(DELTA_FORM, Some(margin), PAIRING_NOTE)]))
}

/// The same bound solved for `d`: `d > 1 + a + sqrt(a^2 - delta + 1)` with
/// `a = delta(s+2)/2`, or `d > delta(n+1)` for `s = n-1`.
pub fn evaluate_thm1_d_form(p: &SingularityProfile) -> Result<StabilityVerdict> {
    p.validate()?;
    if p.is_smooth() {
        return Ok(smooth_verdict(p));
    }
    let delta = p.delta as i64;
    let (status, margin) = if p.s <= p.n as i64 - 2 {
        let a = frac(delta * (p.s + 2), 2);
        let rad = &a * &a - rat(delta) + rat(1);
        let lhs = rat(p.d as i64) - rat(1) - &a;
        // d vs 1 + a + sqrt(rad): compare lhs with sqrt(rad) >= 0
        let cmp = if lhs.is_negative() { Ordering::Less } else { (&lhs * &lhs).cmp(&rad) };
        let margin = format!("d - 1 - a = {lhs} {} sqrt({rad}) (a = {a})", sym(cmp));
        (status_from(cmp, Ordering::Greater), margin)
    } else {
        let t = delta * (p.n as i64 + 1);
        let cmp = (p.d as i64).cmp(&t);
        (status_from(cmp, Ordering::Greater), format!("{} {} {t}", p.d, sym(cmp)))
    };
    Ok(StabilityVerdict::new(status, vec![Reason::theorem(DEGREE_FORM, Some(margin), PAIRING_NOTE)]))
}

fn check_hessian_preconditions(p: &SingularityProfile) -> Result<usize> {
    p.validate()?;
    let mut problems = Vec::new();
    if p.d != 3 && p.d != 4 {
        problems.push(format!("d = {} is not 3 or 4", p.d));
    }
    if p.s != 0 {
        problems.push(format!("s = {} is not 0", p.s));
    }
    if p.delta != 2 {
        problems.push(format!("delta = {} is not 2", p.delta));
    }
    match p.min_hessian_rank {
        Some(r) if problems.is_empty() => Ok(r),
        Some(_) => Err(Error::Precondition(problems.join("; "))),
        None => {
            problems.push("no Hessian rank given".into());
            Err(Error::Precondition(problems.join("; ")))
        }
    }
}

pub fn hessian_criterion_applies(p: &SingularityProfile) -> bool {
    check_hessian_preconditions(p).is_ok()
}

/// For `d in {3, 4}`, isolated double points: `rank > 2(n+1)/d`.
pub fn evaluate_thm2(p: &SingularityProfile) -> Result<StabilityVerdict> {
    let r = check_hessian_preconditions(p)?;
    let bound = frac(2 * (p.n as i64 + 1), p.d as i64);
    let cmp = rat(r as i64).cmp(&bound);
    let status = status_from(cmp, Ordering::Greater);
    let note = if cmp == Ordering::Equal {
        "equality case: semi-stable"
    } else {
        "minimal Hessian rank over the double points"
    };
    Ok(StabilityVerdict::new(status, vec![Reason::theorem(HESSIAN_RANK, Some(format!("{r} {} {bound}", sym(cmp))), note)]))
}

/// The rank condition rewritten for `cr = n - rank`:
/// `cr < (n-2)/3` when `d = 3`, `cr < (n-1)/2` when `d = 4`.
pub fn evaluate_corank_form(p: &SingularityProfile) -> Result<StabilityVerdict> {
    let r = check_hessian_preconditions(p)?;
    let n = p.n as i64;
    let cr = n - r as i64;
    let bound = if p.d == 3 { frac(n - 2, 3) } else { frac(n - 1, 2) };
    let cmp = rat(cr).cmp(&bound);
    let status = status_from(cmp, Ordering::Less);
    let note = "maximal Hessian corank over the double points";
    Ok(StabilityVerdict::new(status, vec![Reason::theorem(HESSIAN_CORANK, Some(format!("{cr} {} {bound}", sym(cmp))), note)]))
}

/// Earlier baseline: `d >= delta min(n+1, s+3)` gives semi-stable, `>` stable;
/// with a cone-free tangent cone at every point of multiplicity `delta`,
/// `delta` may be replaced by `delta - 1`.
pub fn evaluate_mordant(p: &SingularityProfile, cone_free: bool) -> Result<StabilityVerdict> {
    p.validate()?;
    let span = (p.n as i64 + 1).min(p.s + 3);
    let d = p.d as i64;
    let mut best = Status::Inconclusive;
    let mut reasons = Vec::new();
    let mut consider = |criterion: &str, t: i64, note: String| {
        let cmp = d.cmp(&t);
        let status = if cmp == Ordering::Greater {
            Status::Stable
        } else if cmp == Ordering::Equal {
            Status::SemiStable
        } else {
            Status::Inconclusive
        };
        if status.strength() > best.strength() {
            best = status;
        }
        reasons.push(Reason::theorem(criterion, Some(format!("{d} {} {t}", sym(cmp))), note));
    };
    consider(
        BASELINE_MULTIPLICITY,
        p.delta as i64 * span,
        format!("threshold delta * min(n+1, s+3) = {} * {span}", p.delta),
    );
    if cone_free {
        consider(
            BASELINE_TANGENT_CONE,
            (p.delta as i64 - 1) * span,
            format!("tangent cones are not cones over hyperplane sections; threshold (delta-1) * {span}"),
        );
    }
    Ok(StabilityVerdict::new(best, reasons))
}

/// Exact comparison of the degree-form threshold `1 + a + sqrt(a^2 - delta + 1)`
/// with the baseline threshold `delta (s + 3)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundComparison {
    /// `1 + a`, the rational part of the new threshold.
    #[serde(with = "crate::num::serde_rational")]
    pub rational_part: Rational,
    /// `a^2 - delta + 1`, under the square root.
    #[serde(with = "crate::num::serde_rational")]
    pub radicand: Rational,
    pub mordant_threshold: i64,
    pub strictly_better: bool,
    pub never_exceeds: bool,
}

impl BoundComparison {
    pub fn new_threshold_description(&self) -> String {
        format!("{} + sqrt({})", self.rational_part, self.radicand)
    }
}

pub fn compare_bounds(delta: u32, s: i64) -> Result<BoundComparison> {
    if delta < 1 || s < 0 {
        return Err(Error::InvalidArgument(format!("need delta >= 1 and s >= 0, got delta = {delta}, s = {s}")));
    }
    let delta_i = delta as i64;
    let a = frac(delta_i * (s + 2), 2);
    let radicand = &a * &a - rat(delta_i) + rat(1);
    let mordant = delta_i * (s + 3);
    // 1 + a + sqrt(rad) vs mordant  <=>  sqrt(rad) vs gap
    let gap = rat(mordant) - rat(1) - &a;
    let cmp = if gap.is_negative() { Ordering::Greater } else { radicand.cmp(&(&gap * &gap)) };
    Ok(BoundComparison {
        rational_part: rat(1) + a,
        radicand,
        mordant_threshold: mordant,
        strictly_better: cmp == Ordering::Less,
        never_exceeds: cmp != Ordering::Greater,
    })
}

fn merge_status(verdicts: &[&StabilityVerdict]) -> Status {
    verdicts
        .iter()
        .map(|v| v.status)
        .max_by_key(|s| s.strength())
        .unwrap_or(Status::Inconclusive)
}

/// Best conclusion over every applicable criterion, with all reasons listed.
///
/// `cone_free = None` means the tangent-cone condition is unknown. The
/// literature entry for `class`, if any, is merged with source `literature`.
pub fn combined_verdict(
    p: &SingularityProfile,
    cone_free: Option<bool>,
    class: Option<&str>,
) -> Result<StabilityVerdict> {
    combined_verdict_with(p, cone_free, class, &LiteratureTable::builtin())
}

pub fn combined_verdict_with(
    p: &SingularityProfile,
    cone_free: Option<bool>,
    class: Option<&str>,
    table: &LiteratureTable,
) -> Result<StabilityVerdict> {
    p.validate()?;
    if p.is_smooth() {
        return Ok(smooth_verdict(p));
    }
    let delta_form = evaluate_thm1_delta_form(p)?;
    let degree_form = evaluate_thm1_d_form(p)?;
    if delta_form.status != degree_form.status {
        return Err(Error::Internal(format!(
            "multiplicity criterion forms disagree on {p:?}: {} vs {}",
            delta_form.status, degree_form.status
        )));
    }
    let mut parts = vec![delta_form, degree_form];
    if hessian_criterion_applies(p) {
        let rank = evaluate_thm2(p)?;
        let corank = evaluate_corank_form(p)?;
        if rank.status != corank.status {
            return Err(Error::Internal(format!(
                "Hessian rank and corank forms disagree on {p:?}: {} vs {}",
                rank.status, corank.status
            )));
        }
        parts.push(rank);
        parts.push(corank);
    }
    parts.push(evaluate_mordant(p, cone_free.unwrap_or(false))?);

    let mut literature = None;
    if let Some(class) = class {
        if let Some(entry) = table.lookup(p.n, p.d, class) {
            literature = Some(entry.source.clone());
            parts.push(StabilityVerdict::new(
                entry.status,
                vec![Reason {
                    criterion: LITERATURE.into(),
                    margin: None,
                    note: format!("(n, d) = ({}, {}) with {} singularities: {}", p.n, p.d, entry.class, entry.source),
                    source: ClaimSource::Literature,
                }],
            ));
        }
    }

    let status = merge_status(&parts.iter().collect::<Vec<_>>());
    if status.is_negative() {
        return Err(Error::Internal("a sufficient criterion produced a negative verdict".into()));
    }
    let reasons = parts.into_iter().flat_map(|v| v.reasons).collect();
    Ok(StabilityVerdict { status, reasons, literature })
}

/// `ceil(d(d-2)/(2d-3))`: the multiplicity forced at `Q` for isolated singularities.
pub fn isolated_multiplicity_floor(d: u32) -> u32 {
    let d = d as i64;
    let q = frac(d * (d - 2), 2 * d - 3);
    let c: BigInt = q.ceil().to_integer();
    u32::try_from(c).expect("small bound")
}
