//! `example`, `search`, `criteria`, `oracle` and `certify`.

use gitstab_core::criteria::{combined_verdict, compare_bounds, BoundComparison, SingularityProfile};
use gitstab_core::hilbert_mumford::{
    enumerate_weight_oracle, membership, torus_destabilize, verify_certificate, Certificate, CertificateCheck,
    TorusDecision, WeightVector,
};
use gitstab_core::singularity::{default_scan_height, scan_singular_points, ProjectivePoint};
use gitstab_core::verdict::{StabilityVerdict, Status};
use gitstab_core::HomogeneousPoly;
use serde::Serialize;

use crate::analyze::DEFAULT_SCAN_BUDGET;
use crate::families::{family_member, Family};
use crate::report::{Header, InputEcho};
use crate::search::{search, SearchConfig, SearchOutcome};
use crate::{require_hypersurface, CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    #[serde(flatten)]
    pub header: Header,
    pub family: Family,
    pub input: InputEcho,
    pub certificate: Certificate,
    pub check: CertificateCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_case: Option<String>,
}

pub fn run_example(family: Family, n: usize) -> CliResult<ExampleReport> {
    let m = family_member(family, n)?;
    let check = verify_certificate(&m.poly, &m.certificate)?;
    if check != (CertificateCheck::Verified { status: Status::NotSemiStable }) {
        return Err(CliError::internal(format!("{family} n = {n}: certificate did not verify: {check:?}")));
    }
    Ok(ExampleReport {
        header: Header::new("example"),
        family,
        input: InputEcho::of(&m.poly),
        certificate: m.certificate,
        check,
        edge_case: m.edge_case,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    #[serde(flatten)]
    pub header: Header,
    pub input: InputEcho,
    pub singular_points: Vec<ProjectivePoint>,
    pub outcome: SearchOutcome,
}

pub fn run_search(f: &HomogeneousPoly, cfg: &SearchConfig) -> CliResult<SearchReport> {
    require_hypersurface(f)?;
    cfg.validate(f)?;
    let height = default_scan_height(f.n(), DEFAULT_SCAN_BUDGET);
    let points = scan_singular_points(f, height, &[])?.points;
    let outcome = search(f, &points, cfg)?;
    Ok(SearchReport { header: Header::new("search"), input: InputEcho::of(f), singular_points: points, outcome })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CriteriaArgs {
    pub n: usize,
    pub d: u32,
    pub s: i64,
    pub delta: u32,
    pub rank: Option<usize>,
    pub corank: Option<usize>,
    pub cone_free: bool,
    pub class: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriteriaReport {
    #[serde(flatten)]
    pub header: Header,
    pub profile: SingularityProfile,
    pub verdict: StabilityVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_comparison: Option<BoundComparison>,
}

pub fn run_criteria(args: &CriteriaArgs) -> CliResult<CriteriaReport> {
    let rank = match (args.rank, args.corank) {
        (Some(_), Some(_)) => return Err(CliError::input("--rank and --corank are mutually exclusive")),
        (Some(r), None) => Some(r),
        (None, Some(c)) if c <= args.n => Some(args.n - c),
        (None, Some(c)) => return Err(CliError::input(format!("corank {c} exceeds n = {}", args.n))),
        (None, None) => None,
    };
    let profile = SingularityProfile::new(args.n, args.d, args.s, args.delta, rank)?;
    let cone_free = args.cone_free.then_some(true);
    let verdict = combined_verdict(&profile, cone_free, args.class.as_deref())?;
    let bound_comparison = if args.s >= 0 { compare_bounds(args.delta, args.s).ok() } else { None };
    Ok(CriteriaReport { header: Header::new("criteria"), profile, verdict, bound_comparison })
}

/// Largest number of candidate weight vectors the oracle may scan.
pub const MAX_ORACLE_CANDIDATES: f64 = 5e7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    #[serde(flatten)]
    pub header: Header,
    pub input: InputEcho,
    pub bound: i64,
    pub strict: bool,
    pub lp: TorusDecision,
    pub oracle: Option<WeightVector>,
    pub agree: bool,
    pub note: String,
}

/// Runs the LP and the brute-force oracle; `agree = false` signals a bug.
pub fn run_oracle(f: &HomogeneousPoly, bound: i64, strict: bool) -> CliResult<OracleReport> {
    if bound < 1 {
        return Err(CliError::input("--bound must be at least 1"));
    }
    let candidates = ((2 * bound + 1) as f64).powi(f.n() as i32);
    if candidates > MAX_ORACLE_CANDIDATES {
        return Err(CliError::input(format!(
            "oracle would scan about {candidates:.0} weight vectors; lower --bound or n"
        )));
    }
    let lp = torus_destabilize(f, strict)?;
    let oracle = enumerate_weight_oracle(f, bound, strict);
    if let Some(w) = &oracle {
        if !membership(f, w, strict) {
            return Err(CliError::internal(format!("oracle witness {w} does not satisfy the weight conditions")));
        }
    }
    let (agree, note) = match (&lp.witness, &oracle) {
        (Some(_), Some(w)) => (true, format!("agree: feasible (oracle witness {w})")),
        (None, None) => (true, "agree: infeasible".to_string()),
        (None, Some(w)) => (false, format!("disagree: LP infeasible but oracle found {w}")),
        (Some(w), None) => {
            let w = w.normalized();
            let size = w.entries().iter().map(|x| x.abs()).max().unwrap_or(0);
            if size <= bound {
                (false, format!("disagree: LP witness {w} lies within the bound but the oracle found nothing"))
            } else {
                (true, format!("agree: feasible, LP witness {w} lies outside the bound"))
            }
        }
    };
    Ok(OracleReport { header: Header::new("oracle"), input: InputEcho::of(f), bound, strict, lp, oracle, agree, note })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    #[serde(flatten)]
    pub header: Header,
    pub input: InputEcho,
    pub certificate: Certificate,
    pub check: CertificateCheck,
}

pub fn parse_certificate_json(text: &str) -> CliResult<Certificate> {
    serde_json::from_str(text).map_err(|e| CliError::input(format!("certificate file: {e}")))
}

pub fn run_certify(f: &HomogeneousPoly, certificate: Certificate) -> CliResult<CertifyReport> {
    let check = verify_certificate(f, &certificate)?;
    Ok(CertifyReport { header: Header::new("certify"), input: InputEcho::of(f), certificate, check })
}
