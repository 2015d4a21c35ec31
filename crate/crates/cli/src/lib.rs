//! Command-line front end for `fuglede-core`.
//!
//! [`run`] is a pure dispatcher: it takes a parsed [`RunConfig`] and returns
//! the exit code together with everything that would be written to stdout and
//! stderr, so the binary and the tests share one code path.
//!
//! Exit codes: 0 when the property holds or the object is found, 1 when it is
//! refuted or not found, 2 for usage, parse and feasibility errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuglede_core::counterexample::{construct_a, construct_e, verify_counterexample, CounterexampleReport};
use fuglede_core::exhaustive::{
    audit_size_restrictions, canonical_plane_demo, orbit_consistency, prove_fuglede, random_subspace_tiling,
    ClassificationRecord, OrbitReport, ProofReport, ProveOptions, SizeAudit,
};
use fuglede_core::index::ElementIndex;
use fuglede_core::setfile::{format_set, parse_set};
use fuglede_core::spectral::{counting_vector, find_spectrum, is_spectrum};
use fuglede_core::tiling::{tiling_partner_search, TilingCertificate};
use fuglede_core::{Error, GroupParams, GroupVector, PointSet, SearchLimits};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "fuglede", version, about = "Spectral and tiling sets in (Z/pZ)^d, decided exactly")]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub format: OutputFormat,

    /// Seed for every random choice (random maps, sampled sets).
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct SearchArgs {
    /// Threads for the top-level search branches.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,

    /// Largest group order p^d the search will tabulate.
    #[arg(long, default_value_t = SearchLimits::default().max_group_order)]
    pub max_order: u64,
}

impl SearchArgs {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_group_order: self.max_order,
            workers: self.workers.max(1),
            ..SearchLimits::default()
        }
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Check that A is a spectrum of E.
    VerifySpectral {
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        a: PathBuf,
        /// Include the counting vector of every pair of A.
        #[arg(long)]
        counting_vectors: bool,
    },
    /// Check that E tiles the group with partner T.
    VerifyTiling {
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        t: PathBuf,
    },
    /// Search for a spectrum of E.
    SearchSpectrum {
        #[arg(long)]
        e: PathBuf,
        /// Include the counting vector of every pair of the spectrum found.
        #[arg(long)]
        counting_vectors: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search for a tiling partner of E.
    SearchPartner {
        #[arg(long)]
        e: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build and check the spectral non-tiling set in (Z/pZ)^4.
    Counterexample {
        #[arg(long)]
        p: u32,
        /// Non-square mod p; defaults to the smallest one.
        #[arg(long)]
        n: Option<u32>,
        /// Write E.set and A.set into this directory.
        #[arg(long)]
        emit_sets: Option<PathBuf>,
    },
    /// Classify every subset of (Z/pZ)^d and compare spectral and tiling status.
    Prove {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Allow groups with up to 63 elements.
        #[arg(long)]
        force: bool,
        /// Write every classification record to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Random (E, M) pairs checked for invariance under invertible maps.
        #[arg(long, default_value_t = 0)]
        orbit_samples: usize,
        /// Random subspace tilings E + W checked for spectrum perp(W).
        #[arg(long, default_value_t = 0)]
        subspace_samples: usize,
    },
    /// The two size-4 configurations in (Z/2Z)^4 with subspace partners.
    Demo,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifySpectral { .. } => "verify-spectral",
            Command::VerifyTiling { .. } => "verify-tiling",
            Command::SearchSpectrum { .. } => "search-spectrum",
            Command::SearchPartner { .. } => "search-partner",
            Command::Counterexample { .. } => "counterexample",
            Command::Prove { .. } => "prove",
            Command::Demo => "demo",
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A finished report before rendering.
struct Report {
    command: &'static str,
    params: GroupParams,
    pass: bool,
    details: Value,
    text: String,
    csv: Option<String>,
    warnings: Vec<String>,
}

impl Report {
    fn envelope(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "params": { "p": self.params.p(), "d": self.params.d() },
            "pass": self.pass,
            "details": self.details,
        })
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stderr: rendered,
                    ..Outcome::default()
                }
            } else {
                Outcome {
                    code,
                    stdout: rendered,
                    ..Outcome::default()
                }
            }
        }
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    let report = match dispatch(config) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                code: EXIT_ERROR,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            };
        }
    };
    let mut stderr = String::new();
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let stdout = match config.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report.envelope()).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => report.text.clone(),
        OutputFormat::Csv => match &report.csv {
            Some(csv) => csv.clone(),
            None => {
                return Outcome {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: format!("error: --format csv is only available for prove, not {}\n", report.command),
                };
            }
        },
    };
    Outcome {
        code: if report.pass { EXIT_PASS } else { EXIT_FAIL },
        stdout,
        stderr,
    }
}

fn load_set(path: &Path) -> CliResult<PointSet> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    parse_set(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_pair(first: &Path, second: &Path) -> CliResult<(PointSet, PointSet)> {
    let x = load_set(first)?;
    let y = load_set(second)?;
    if x.params() != y.params() {
        return Err(CliError::Usage(format!(
            "{} is over {} but {} is over {}",
            first.display(),
            x.params(),
            second.display(),
            y.params()
        )));
    }
    Ok((x, y))
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn describe(set: &PointSet) -> String {
    let items: Vec<String> = set.iter().map(|v| format!("({v})")).collect();
    format!("{{{}}}", items.join(" "))
}

#[derive(Serialize)]
struct PairCounts<'a> {
    a: &'a GroupVector,
    b: &'a GroupVector,
    counts: Vec<u64>,
    constant: bool,
}

/// Counting vectors of `a - b` over `set` for every unordered pair of `spectrum`.
fn pair_counts<'a>(spectrum: &'a PointSet, set: &PointSet) -> CliResult<Vec<PairCounts<'a>>> {
    let elems: Vec<&GroupVector> = spectrum.iter().collect();
    let mut out = Vec::new();
    for (k, &a) in elems.iter().enumerate() {
        for &b in &elems[k + 1..] {
            let cv = counting_vector(&(a - b), set)?;
            out.push(PairCounts {
                a,
                b,
                constant: cv.is_constant(),
                counts: cv.counts().to_vec(),
            });
        }
    }
    Ok(out)
}

fn dispatch(config: &RunConfig) -> CliResult<Report> {
    let name = config.command.name();
    match &config.command {
        Command::VerifySpectral { e, a, counting_vectors } => {
            let (set, spectrum) = load_pair(e, a)?;
            let verified = is_spectrum(&spectrum, &set)?;
            let pairs = if set.is_empty() { Vec::new() } else { pair_counts(&spectrum, &set)? };
            let orthogonal = pairs.iter().filter(|c| c.constant).count();
            let mut details = json!({
                "e_size": set.len(),
                "a_size": spectrum.len(),
                "pairs": pairs.len(),
                "orthogonal_pairs": orthogonal,
                "is_spectrum": verified,
            });
            if *counting_vectors {
                details["counting_vectors"] = to_value(&pairs);
            }
            let text = format!(
                "|E| = {}, |A| = {}, orthogonal pairs {}/{}\nA is {}a spectrum of E\n",
                set.len(),
                spectrum.len(),
                orthogonal,
                pairs.len(),
                if verified { "" } else { "not " }
            );
            Ok(simple(name, set.params(), verified, details, text))
        }
        Command::VerifyTiling { e, t } => {
            let (set, partner) = load_pair(e, t)?;
            let params = set.params();
            let cert = TilingCertificate::check(set, partner)?;
            let text = format!(
                "|E| = {}, |T| = {}\nE + T {} the group\n",
                cert.set.len(),
                cert.partner.len(),
                if cert.verified { "tiles" } else { "does not tile" }
            );
            Ok(simple(name, params, cert.verified, to_value(&cert), text))
        }
        Command::SearchSpectrum { e, counting_vectors, search } => {
            let set = load_set(e)?;
            let found = find_spectrum(&set, &search.limits())?;
            let pairs = match &found {
                Some(a) => pair_counts(a, &set)?,
                None => Vec::new(),
            };
            let mut details = json!({
                "found": found.is_some(),
                "orthogonal_pairs": pairs.iter().filter(|c| c.constant).count(),
            });
            if *counting_vectors {
                details["counting_vectors"] = to_value(&pairs);
            }
            if let Some(a) = &found {
                details["spectrum"] = to_value(a);
            }
            let text = match &found {
                Some(a) => format!("spectrum found: {}\n", describe(a)),
                None => "no spectrum\n".to_string(),
            };
            Ok(simple(name, set.params(), found.is_some(), details, text))
        }
        Command::SearchPartner { e, search } => {
            let set = load_set(e)?;
            let result = tiling_partner_search(&set, &search.limits())?;
            let text = match &result.partner {
                Some(t) => format!("partner found: {}\nnodes explored: {}\n", describe(t), result.nodes_explored),
                None => format!("no tiling partner\nnodes explored: {}\n", result.nodes_explored),
            };
            Ok(simple(name, set.params(), result.found, to_value(&result), text))
        }
        Command::Counterexample { p, n, emit_sets } => counterexample(*p, *n, emit_sets.as_deref()),
        Command::Prove {
            p,
            d,
            workers,
            force,
            csv,
            orbit_samples,
            subspace_samples,
        } => {
            let params = GroupParams::new(*p, *d)?;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            prove(
                params,
                ProveOptions {
                    workers: (*workers).max(1),
                    force: *force,
                },
                csv.as_deref(),
                *orbit_samples,
                *subspace_samples,
                &mut rng,
            )
        }
        Command::Demo => {
            let demo = canonical_plane_demo()?;
            let mut text = String::new();
            for case in &demo.cases {
                let _ = writeln!(
                    text,
                    "{}: E = {} T = {} tiles={} subspace={} dual_spectrum={} pass={}",
                    case.name,
                    describe(&case.set),
                    describe(&case.partner),
                    case.tiles,
                    case.partner_is_subspace,
                    case.dual_is_spectrum,
                    case.pass
                );
            }
            Ok(simple(name, GroupParams::new(2, 4)?, demo.pass, to_value(&demo), text))
        }
    }
}

fn simple(command: &'static str, params: GroupParams, pass: bool, details: Value, text: String) -> Report {
    Report {
        command,
        params,
        pass,
        details,
        text,
        csv: None,
        warnings: Vec::new(),
    }
}

fn counterexample(p: u32, n: Option<u32>, emit: Option<&Path>) -> CliResult<Report> {
    let report: CounterexampleReport = verify_counterexample(p, n)?;
    let params = GroupParams::new(p, 4)?;
    let mut details = to_value(&report);
    if let Some(dir) = emit {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
        let mut written = Vec::new();
        for (file, set) in [("E.set", construct_e(p, report.n)?), ("A.set", construct_a(p, report.n)?)] {
            let path = dir.join(file);
            fs::write(&path, format_set(&set)).map_err(|e| CliError::Io(path.clone(), e))?;
            written.push(path.display().to_string());
        }
        details["emitted"] = json!(written);
    }
    let mut text = format!("p = {p}, n = {}, |E| = {}, |A| = {}\n", report.n, report.e_size, report.a_size);
    for step in &report.steps {
        let _ = writeln!(
            text,
            "{:<36} {} ({} checks)",
            step.step,
            if step.pass { "ok" } else { "FAILED" },
            step.checked
        );
    }
    Ok(simple("counterexample", params, report.pass, details, text))
}

#[derive(Serialize)]
struct SubspaceSample {
    set: PointSet,
    dual: PointSet,
}

#[derive(Serialize)]
struct SubspaceSampleReport {
    samples: usize,
    failures: Vec<SubspaceSample>,
    pass: bool,
}

fn subspace_samples(
    params: GroupParams,
    samples: usize,
    limits: &SearchLimits,
    rng: &mut ChaCha8Rng,
) -> CliResult<SubspaceSampleReport> {
    let index = ElementIndex::new(params, limits.max_group_order)?;
    let mut failures = Vec::new();
    for _ in 0..samples {
        let (set, w) = random_subspace_tiling(&index, limits, rng)?;
        let dual = w.perp().elements(limits.max_group_order)?;
        if !is_spectrum(&dual, &set)? {
            failures.push(SubspaceSample { set, dual });
        }
    }
    let pass = failures.is_empty();
    Ok(SubspaceSampleReport {
        samples,
        failures,
        pass,
    })
}

fn records_csv(records: &[ClassificationRecord]) -> String {
    let mut out = String::from("id,size,spectral,tiling\n");
    for r in records {
        let id = r.id.map(|id| id.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{id},{},{},{}", r.size, r.spectral, r.tiling);
    }
    out
}

fn prove(
    params: GroupParams,
    options: ProveOptions,
    csv_path: Option<&Path>,
    orbit_samples: usize,
    subspace_sample_count: usize,
    rng: &mut ChaCha8Rng,
) -> CliResult<Report> {
    let report: ProofReport = prove_fuglede(params, options)?;
    let audit: SizeAudit = audit_size_restrictions(&report);
    let limits = SearchLimits::default();
    let orbit: Option<OrbitReport> = if orbit_samples > 0 {
        Some(orbit_consistency(params, orbit_samples, &limits, rng)?)
    } else {
        None
    };
    let subspace = if subspace_sample_count > 0 {
        Some(subspace_samples(params, subspace_sample_count, &limits, rng)?)
    } else {
        None
    };
    let csv = records_csv(&report.records);
    if let Some(path) = csv_path {
        fs::write(path, &csv).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    }

    let mut details = to_value(&report);
    details["size_audit"] = to_value(&audit);
    if let Some(o) = &orbit {
        details["orbit_consistency"] = to_value(o);
    }
    if let Some(s) = &subspace {
        details["subspace_duals"] = to_value(s);
    }

    let mut text = format!(
        "{} subsets of (Z/{}Z)^{}, {} discrepancies\n",
        report.total_subsets,
        params.p(),
        params.d(),
        report.discrepancies.len()
    );
    let _ = writeln!(text, "size audit: {}", if audit.pass { "ok" } else { "FAILED" });
    if let Some(o) = &orbit {
        let _ = writeln!(text, "orbit consistency: {} samples, {} mismatches", o.samples, o.mismatches.len());
    }
    if let Some(s) = &subspace {
        let _ = writeln!(text, "subspace duals: {} samples, {} failures", s.samples, s.failures.len());
    }
    for c in &report.counts {
        let _ = writeln!(
            text,
            "size {:>3} spectral={:<5} tiling={:<5} {}",
            c.size, c.spectral, c.tiling, c.count
        );
    }

    Ok(Report {
        command: "prove",
        params,
        pass: report.verified(),
        details,
        text,
        csv: Some(csv),
        warnings: report.cost_warning.iter().cloned().collect(),
    })
}
