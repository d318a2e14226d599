//! The `analyze` pipeline: singular points, profile, criteria, search, verdict.

use gitstab_core::criteria::{combined_verdict, FieldSource, Provenance, SingularityProfile};
use gitstab_core::hilbert_mumford::{verify_certificate, Certificate, CertificateCheck};
use gitstab_core::singularity::{
    default_scan_height, local_data, scan_singular_points, LocalData, ProjectivePoint, SingularScan, DEFAULT_PRIMES,
};
use gitstab_core::verdict::{ClaimSource, Reason, StabilityVerdict, Status};
use gitstab_core::{parse_poly, HomogeneousPoly, Rational};
use serde::{Deserialize, Serialize};

use crate::report::{timestamp_now, Header, InputEcho};
use crate::search::{search, FoundCertificate, SearchConfig, SearchOutcome};
use crate::{require_hypersurface, CliError, CliResult};

/// Candidate vectors allowed in the default rational point scan.
pub const DEFAULT_SCAN_BUDGET: u64 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// User-asserted singular-locus dimension.
    pub s: Option<i64>,
    pub points: Vec<ProjectivePoint>,
    pub height: Option<u64>,
    pub primes: Vec<u64>,
    pub search: SearchConfig,
    pub class: Option<String>,
    /// Overrides the tangent-cone condition computed at the points.
    pub cone_free: Option<bool>,
    pub timestamp: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            s: None,
            points: Vec::new(),
            height: None,
            primes: DEFAULT_PRIMES.to_vec(),
            search: SearchConfig::default(),
            class: None,
            cone_free: None,
            timestamp: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalVerdict {
    pub status: Status,
    pub source: ClaimSource,
    pub reasons: Vec<Reason>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    #[serde(flatten)]
    pub header: Header,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub input: InputEcho,
    pub scan: SingularScan,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub supplied_points: Vec<ProjectivePoint>,
    pub singular_points: Vec<LocalData>,
    pub profile: SingularityProfile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_free: Option<bool>,
    pub criteria: StabilityVerdict,
    pub search: SearchOutcome,
    pub certificates: Vec<FoundCertificate>,
    pub verdict: FinalVerdict,
    pub caveats: Vec<String>,
}

/// Parses a points file: a JSON array of points, each an array of integers
/// (numbers or decimal strings).
pub fn parse_points_json(text: &str) -> CliResult<Vec<ProjectivePoint>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("points file: {e}")))?;
    let list = value.as_array().ok_or_else(|| CliError::input("points file: expected a JSON array"))?;
    list.iter()
        .enumerate()
        .map(|(i, p)| {
            let coords = p
                .as_array()
                .ok_or_else(|| CliError::input(format!("point {i}: expected an array of coordinates")))?;
            let coords = coords
                .iter()
                .map(|c| {
                    let text = match c {
                        serde_json::Value::Number(x) if x.is_i64() || x.is_u64() => x.to_string(),
                        serde_json::Value::String(s) => s.trim().to_string(),
                        other => return Err(CliError::input(format!("point {i}: bad coordinate {other}"))),
                    };
                    text.parse::<num_bigint::BigInt>()
                        .map(Rational::from_integer)
                        .map_err(|e| CliError::input(format!("point {i}: bad coordinate {text:?}: {e}")))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(ProjectivePoint::new(&coords)?)
        })
        .collect()
}

fn downgrade(reasons: &mut [Reason]) {
    for r in reasons {
        if r.source == ClaimSource::Theorem {
            r.source = ClaimSource::Heuristic;
        }
    }
}

fn certificate_reason(c: &FoundCertificate) -> Reason {
    Reason {
        criterion: "certificate".into(),
        margin: None,
        note: format!(
            "{} via weights {} in frame {} ({}), re-verified exactly",
            c.status, c.certificate.r, c.frame, c.source
        ),
        source: ClaimSource::Certificate,
    }
}

pub fn analyze(f: &HomogeneousPoly, opts: &AnalyzeOptions) -> CliResult<AnalysisReport> {
    require_hypersurface(f)?;
    let n = f.n();
    if let Some(s) = opts.s {
        if s < -1 || s > n as i64 - 1 {
            return Err(CliError::input(format!("--s {s} outside [-1, {}]", n - 1)));
        }
    }
    let mut caveats = Vec::new();

    let height = opts.height.unwrap_or_else(|| default_scan_height(n, DEFAULT_SCAN_BUDGET));
    let scan = scan_singular_points(f, height, &opts.primes)?;
    let mut points = scan.points.clone();
    for p in &opts.points {
        if p.n() != n {
            return Err(CliError::input(format!("supplied point {p} is not in P^{n}")));
        }
        if !points.contains(p) {
            points.push(p.clone());
        }
    }
    points.sort_by(|a, b| a.cmp_descending(b));
    let mut singular_points = Vec::new();
    for p in &points {
        let data = local_data(f, p).map_err(|e| CliError::input(format!("point {p}: {e}")))?;
        if !data.is_singular() {
            return Err(CliError::input(format!("supplied point {p} is a smooth point of V(f)")));
        }
        singular_points.push(data);
    }

    // profile
    let (s, s_source) = match opts.s {
        Some(s) => (s, FieldSource::UserAsserted),
        None if singular_points.is_empty() => (scan.estimated_dimension, FieldSource::Heuristic),
        None => (scan.estimated_dimension.max(0), FieldSource::Heuristic),
    };
    if s == -1 && !singular_points.is_empty() {
        return Err(CliError::input(format!("--s -1 contradicts the singular point {}", singular_points[0].point)));
    }
    let max_mult = singular_points.iter().map(|l| l.multiplicity).max();
    let (delta, delta_source) = match (s, max_mult) {
        (-1, _) => (1, s_source),
        (_, Some(m)) => (m, FieldSource::VerifiedAtPoints),
        (_, None) => {
            caveats.push("no rational singular point found; multiplicity taken as the degree".into());
            (f.d(), FieldSource::Heuristic)
        }
    };
    let min_rank = if max_mult == Some(2) {
        singular_points.iter().filter_map(|l| l.hessian_rank).min()
    } else {
        None
    };
    let provenance = Provenance {
        s: s_source,
        delta: delta_source,
        min_hessian_rank: min_rank.map(|_| FieldSource::VerifiedAtPoints),
    };
    let profile = SingularityProfile::new(n, f.d(), s, delta, min_rank)
        .map_err(|e| CliError::input(format!("profile: {e}")))?
        .with_provenance(provenance);
    if delta_source == FieldSource::VerifiedAtPoints {
        caveats.push("multiplicity and Hessian rank are taken over the rational singular points found".into());
    }
    let cone_free = opts.cone_free.or_else(|| {
        max_mult.map(|m| {
            singular_points
                .iter()
                .filter(|l| l.multiplicity == m)
                .all(LocalData::tangent_cone_is_cone_free)
        })
    });

    let class = opts.class.as_deref();
    let mut criteria = combined_verdict(&profile, cone_free, class)?;
    let theorem_only = combined_verdict(&profile, cone_free, None)?;
    let heuristic = s_source == FieldSource::Heuristic;
    if heuristic {
        downgrade(&mut criteria.reasons);
        if criteria.status.is_positive() {
            caveats.push(format!(
                "the {} claim rests on the heuristic singular-locus dimension s = {s}; pass --s to assert it",
                criteria.status
            ));
        }
    }

    let outcome = search(f, &points, &opts.search)?;
    let certificates: Vec<FoundCertificate> = outcome.certificates().into_iter().cloned().collect();
    if let Some(c) = certificates.iter().find(|c| c.passes_filter == Some(false)) {
        caveats.push(format!(
            "certificate weights {} fail the weight filter for the assumed s; the assumption is likely wrong",
            c.certificate.r
        ));
    }

    let criteria_source = if theorem_only.status == criteria.status {
        if heuristic {
            ClaimSource::Heuristic
        } else {
            ClaimSource::Theorem
        }
    } else {
        ClaimSource::Literature
    };
    let contradiction = |c: &FoundCertificate| {
        format!("{} certificate contradicts the {} verdict of the criteria", c.status, criteria.status)
    };
    let mut reasons = criteria.reasons.clone();
    let (status, source) = match (&outcome.strict, &outcome.non_strict) {
        (Some(c), _) => {
            if criteria.status.is_positive() {
                if !heuristic {
                    return Err(CliError::internal(contradiction(c)));
                }
                caveats.push(contradiction(c) + "; the heuristic profile is wrong");
            }
            reasons.push(certificate_reason(c));
            (Status::NotSemiStable, ClaimSource::Certificate)
        }
        (None, Some(c)) => {
            reasons.push(certificate_reason(c));
            match criteria.status {
                Status::Stable if !heuristic => return Err(CliError::internal(contradiction(c))),
                Status::Stable => {
                    caveats.push(contradiction(c) + "; the heuristic profile is wrong");
                    (Status::NotStable, ClaimSource::Certificate)
                }
                // semi-stable and not stable: both claims stand
                Status::SemiStable => (Status::SemiStable, criteria_source),
                _ => (Status::NotStable, ClaimSource::Certificate),
            }
        }
        (None, None) => (criteria.status, criteria_source),
    };
    let verdict = FinalVerdict { status, source, reasons };

    let report = AnalysisReport {
        header: Header::new("analyze"),
        seed: opts.search.seed,
        timestamp: opts.timestamp.then(timestamp_now),
        input: InputEcho::of(f),
        scan,
        supplied_points: opts.points.clone(),
        singular_points,
        profile,
        cone_free,
        criteria,
        search: outcome,
        certificates,
        verdict,
        caveats,
    };
    verify_report(&report.input, &report.certificates, report.verdict.status).map_err(CliError::internal)?;
    Ok(report)
}

/// Independent pass: reparses the echoed polynomial and re-verifies every
/// certificate; a negative status must be backed by one of them.
pub fn verify_report(input: &InputEcho, certificates: &[FoundCertificate], status: Status) -> Result<(), String> {
    let f = parse_poly(&input.polynomial, input.n).map_err(|e| format!("echoed polynomial does not parse: {e}"))?;
    if f.d() != input.d {
        return Err(format!("echoed degree {} does not match {}", input.d, f.d()));
    }
    let certs: Vec<&Certificate> = certificates.iter().map(|c| &c.certificate).collect();
    verify_claim(&f, &certs, status)
}

pub fn verify_claim(f: &HomogeneousPoly, certs: &[&Certificate], status: Status) -> Result<(), String> {
    let mut proven = Vec::new();
    for c in certs {
        match verify_certificate(f, c).map_err(|e| e.to_string())? {
            CertificateCheck::Verified { status } => proven.push(status),
            CertificateCheck::Rejected { monomial, weight } => {
                return Err(format!("certificate with weights {} rejected at {monomial:?} (weight {weight})", c.r))
            }
        }
    }
    if status.is_negative() && !proven.iter().any(|p| p.implies(status)) {
        return Err(format!("{status} claimed without a certificate proving it"));
    }
    Ok(())
}

pub fn matrix_text(m: &gitstab_core::RationalMatrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Plain-text rendering.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("polynomial: {} (n = {}, d = {})", r.input.polynomial, r.input.n, r.input.d));
    line(format!(
        "rational singular points (height <= {}): {}",
        r.scan.height_bound,
        if r.singular_points.is_empty() { "none".to_string() } else { r.singular_points.len().to_string() }
    ));
    for l in &r.singular_points {
        let hess = match (l.hessian_rank, l.hessian_corank) {
            (Some(a), Some(b)) => format!(", Hessian rank {a} (corank {b})"),
            _ => String::new(),
        };
        line(format!("  {}: multiplicity {}{hess}, tangent cone {}", l.point, l.multiplicity, l.tangent_cone));
    }
    let p = &r.profile;
    let rank = p.min_hessian_rank.map(|x| format!(", min Hessian rank {x}")).unwrap_or_default();
    line(format!(
        "profile: s = {} ({:?}), delta = {} ({:?}){rank}",
        p.s, p.provenance.s, p.delta, p.provenance.delta
    ));
    line(format!("criteria: {}", r.criteria.status));
    line(format!("search: {} ({} frames)", r.search.summary, r.search.frames_tried));
    for c in &r.certificates {
        line(format!(
            "  certificate: {} with r = {}, sigma = {}",
            c.status,
            c.certificate.r,
            matrix_text(&c.certificate.sigma)
        ));
    }
    line(format!("verdict: {} [{:?}]", r.verdict.status, r.verdict.source));
    for reason in &r.verdict.reasons {
        let margin = reason.margin.as_deref().map(|m| format!(" [{m}]")).unwrap_or_default();
        line(format!("  - {}{margin}: {} ({:?})", reason.criterion, reason.note, reason.source));
    }
    for c in &r.caveats {
        line(format!("caveat: {c}"));
    }
    out
}
