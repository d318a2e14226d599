use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gitstab_cli::analyze::{analyze, matrix_text, parse_points_json, render_text, AnalyzeOptions};
use gitstab_cli::commands::{
    parse_certificate_json, run_certify, run_criteria, run_example, run_oracle, run_search, CriteriaArgs,
};
use gitstab_cli::families::Family;
use gitstab_cli::report::emit_json;
use gitstab_cli::search::{SearchConfig, Strategy};
use gitstab_cli::{read_poly, read_text, CliError, CliResult, EXIT_INTERNAL, EXIT_OK};
use gitstab_core::singularity::DEFAULT_PRIMES;

#[derive(Parser, Debug)]
#[command(name = "gitstab", version, about = "Exact GIT stability checks for projective hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON report to PATH (`-` for stdout, which suppresses the text report).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PolyInput {
    /// Polynomial file (`#` starts a comment).
    file: PathBuf,
    /// Projective dimension; inferred from the variables when omitted.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Number of coordinate frames to try.
    #[arg(long, default_value_t = 100)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Bound on the entries of random coordinate changes.
    #[arg(long, default_value_t = 2)]
    bound: i64,
    /// Strategies to use, in priority order.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = Strategy::ALL.to_vec())]
    strategies: Vec<Strategy>,
}

impl SearchArgs {
    fn config(&self, assume_s: Option<usize>) -> SearchConfig {
        SearchConfig {
            budget: self.budget,
            seed: self.seed,
            bound: self.bound,
            strategies: self.strategies.clone(),
            assume_s,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full analysis: singular points, criteria and destabilization search.
    Analyze {
        #[command(flatten)]
        input: PolyInput,
        /// Assert the dimension of the singular locus (-1 = smooth).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<i64>,
        /// JSON file with extra singular points, e.g. [[0,0,1]].
        #[arg(long, value_name = "FILE")]
        points: Option<PathBuf>,
        /// Height bound for the rational singular point scan.
        #[arg(long)]
        height: Option<u64>,
        /// Primes for the singular-locus dimension estimate.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PRIMES.to_vec())]
        primes: Vec<u64>,
        #[command(flatten)]
        search: SearchArgs,
        /// Singularity class for the literature table (e.g. A1, ADE).
        #[arg(long)]
        class: Option<String>,
        /// Assert that the tangent cone is not a cone over a hyperplane section.
        #[arg(long)]
        cone_free: bool,
        /// Leave the timestamp out of the JSON report.
        #[arg(long)]
        no_timestamp: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Emit a member of an example family with its certificate.
    Example {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Write the polynomial to FILE.
        #[arg(long, value_name = "FILE")]
        poly_out: Option<PathBuf>,
        /// Write the certificate JSON to FILE.
        #[arg(long, value_name = "FILE")]
        cert_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Search for a destabilizing certificate.
    Search {
        #[command(flatten)]
        input: PolyInput,
        #[command(flatten)]
        search: SearchArgs,
        /// Flag certificates failing the weight filter for this singular-locus dimension.
        #[arg(long)]
        assume_s: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the sufficient criteria on a singularity profile.
    Criteria {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long)]
        delta: u32,
        #[arg(long, conflicts_with = "corank")]
        rank: Option<usize>,
        #[arg(long)]
        corank: Option<usize>,
        #[arg(long)]
        cone_free: bool,
        #[arg(long)]
        class: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Cross-check the torus LP against brute-force weight enumeration.
    Oracle {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Verify a certificate against a polynomial.
    Certify {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, value_name = "FILE")]
        cert: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

fn show<T: serde::Serialize>(report: &T, output: &Output, text: impl FnOnce() -> String) -> CliResult<()> {
    let to_stdout = output.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if !to_stdout {
        print!("{}", text());
    }
    if let Some(path) = &output.json {
        emit_json(report, path)?;
    }
    Ok(())
}

fn write_file(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Analyze { input, s, points, height, primes, search, class, cone_free, no_timestamp, output } => {
            let f = read_poly(&input.file, input.n)?;
            let points = match points {
                Some(p) => parse_points_json(&read_text(&p)?)?,
                None => Vec::new(),
            };
            let opts = AnalyzeOptions {
                s,
                points,
                height,
                primes,
                search: search.config(None),
                class,
                cone_free: cone_free.then_some(true),
                timestamp: !no_timestamp,
            };
            let report = analyze(&f, &opts)?;
            show(&report, &output, || render_text(&report))?;
        }
        Command::Example { family, n, poly_out, cert_out, output } => {
            let report = run_example(family, n)?;
            if let Some(p) = &poly_out {
                write_file(p, &format!("# {family}, n = {n}\n{}\n", report.input.polynomial))?;
            }
            if let Some(p) = &cert_out {
                write_file(p, &gitstab_cli::report::to_json(&report.certificate)?)?;
            }
            show(&report, &output, || {
                format!(
                    "{family}, n = {n}: {}\ncertificate: r = {}, sigma = identity\ncheck: {}\n{}",
                    report.input.polynomial,
                    report.certificate.r,
                    gitstab_core::verdict::Status::NotSemiStable,
                    report.edge_case.as_deref().map(|e| format!("note: {e}\n")).unwrap_or_default()
                )
            })?;
        }
        Command::Search { input, search, assume_s, output } => {
            let f = read_poly(&input.file, input.n)?;
            let report = run_search(&f, &search.config(assume_s))?;
            show(&report, &output, || {
                let mut t = format!("{} ({} frames)\n", report.outcome.summary, report.outcome.frames_tried);
                for c in report.outcome.certificates() {
                    let filter = match c.passes_filter {
                        Some(false) => " (fails the weight filter for the assumed s)",
                        _ => "",
                    };
                    t.push_str(&format!(
                        "{}: r = {}, sigma = {}{filter}\n",
                        c.status,
                        c.certificate.r,
                        matrix_text(&c.certificate.sigma)
                    ));
                }
                t
            })?;
        }
        Command::Criteria { n, d, s, delta, rank, corank, cone_free, class, output } => {
            let report = run_criteria(&CriteriaArgs { n, d, s, delta, rank, corank, cone_free, class })?;
            show(&report, &output, || {
                let mut t = format!("{}\n", report.verdict.status);
                for r in &report.verdict.reasons {
                    let margin = r.margin.as_deref().map(|m| format!(" [{m}]")).unwrap_or_default();
                    t.push_str(&format!("  - {}{margin}: {}\n", r.criterion, r.note));
                }
                t
            })?;
        }
        Command::Oracle { input, bound, strict, output } => {
            let f = read_poly(&input.file, input.n)?;
            let report = run_oracle(&f, bound, strict)?;
            show(&report, &output, || format!("{}\n", report.note))?;
            if !report.agree {
                return Ok(EXIT_INTERNAL);
            }
        }
        Command::Certify { input, cert, output } => {
            let f = read_poly(&input.file, input.n)?;
            let certificate = parse_certificate_json(&read_text(&cert)?)?;
            let report = run_certify(&f, certificate)?;
            show(&report, &output, || match &report.check {
                gitstab_core::hilbert_mumford::CertificateCheck::Verified { status } => format!("verified: {status}\n"),
                gitstab_core::hilbert_mumford::CertificateCheck::Rejected { monomial, weight } => {
                    format!("rejected: monomial {:?} has weight {weight}\n", monomial.exps())
                }
            })?;
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("gitstab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
