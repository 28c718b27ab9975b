//! The `metrilog` command line.
//!
//! Exit codes: 0 definite yes or success, 1 definite no or violation,
//! 2 unknown at the chosen depth, 3 usage, input or parse error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::corpus::check_corpus;
use crate::omitting::{
    metrically_principal_over, omit_search, omits, principal_over, realizes, thicken, MetricPrincipality,
    OmittingError, PartialType, Principality, PrincipalityWitnessPool, TripleFailure,
};
use crate::parser::{
    parse_formula, parse_registry, parse_signature, parse_structure, parse_theory, parse_type_document, print_formula,
    print_pool, print_registry, print_signature, print_structure, print_theory, print_type, ParseError, TypeDocument,
};
use crate::rational::Rational01;
use crate::semantics::{
    compare_l, evaluate, mod_interval, models, Comparison, EvalConfig, EvalError, Registry, SatStrictness, Theory,
    Verdict, DEFAULT_DEPTH,
};
use crate::signature::Signature;
use crate::structure::{validate, Assignment, MetricStructure, MetricViolation, MetricWarning, Point, StructureError};
use crate::syntax::Formula;
use crate::ultraproduct::{check_claim3, ultraproduct, StructureSequence, UltraError, UltrafilterSpec};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Environment variable overriding the default truncation depth.
pub const DEPTH_ENV: &str = "METRILOG_DEPTH";

#[derive(Debug, Parser)]
#[command(name = "metrilog", version, about = "Exact evaluation and finite checks for [0,1]-valued infinitary logic")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Schema instances inspected per infinitary node [default: 16, or METRILOG_DEPTH]
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Reading of "satisfiable" for principality witnesses
    #[arg(long = "strict-sat", global = true, value_enum, default_value_t = Strictness::Eq1)]
    pub strict_sat: Strictness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strictness {
    /// Value exactly 1
    Eq1,
    /// Value above 0
    Gt0,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a document and print it canonically (or its AST with --json)
    Parse {
        file: PathBuf,
        /// Signature (.msig or .mstr) for .mfla, .mthy and .mtyp files
        #[arg(long)]
        sig: Option<PathBuf>,
    },
    /// Check the metric axioms and every declared modulus
    Validate { structure: PathBuf },
    /// Evaluate a formula to a value interval
    Eval {
        structure: PathBuf,
        formula: PathBuf,
        #[arg(long)]
        assignment: Option<String>,
    },
    /// Whether a formula has value 1
    Sat {
        structure: PathBuf,
        formula: PathBuf,
        #[arg(long)]
        assignment: Option<String>,
    },
    /// Whether a structure satisfies every sentence of a theory
    Models { structure: PathBuf, theory: PathBuf },
    /// Split a registry by whether a sentence's value lies in [lo, hi]
    ModInterval {
        registry: PathBuf,
        sentence: PathBuf,
        #[arg(long)]
        lo: Rational01,
        #[arg(long)]
        hi: Rational01,
    },
    /// Compare two structures on the sentences of a theory file
    Compare { left: PathBuf, right: PathBuf, pool: PathBuf },
    /// Build an ultraproduct of a registry sequence
    Ultraproduct {
        sequence: PathBuf,
        /// `frechet` or `principal:K`
        #[arg(long, value_parser = parse_ultra)]
        ultra: UltrafilterSpec,
    },
    /// Compare a sentence in the ultraproduct with the limit of its values
    Claim3 {
        sequence: PathBuf,
        sentence: PathBuf,
        #[arg(long, value_parser = parse_ultra)]
        ultra: UltrafilterSpec,
    },
    /// Whether a tuple realizes a type
    Realizes {
        structure: PathBuf,
        #[arg(value_name = "TYPE")]
        type_file: PathBuf,
        /// Comma-separated point names
        #[arg(long, default_value = "")]
        tuple: String,
    },
    /// Whether a structure omits a type
    Omits {
        structure: PathBuf,
        #[arg(value_name = "TYPE")]
        type_file: PathBuf,
    },
    /// Print the delta-thickening of a type
    Thicken {
        #[arg(value_name = "TYPE")]
        type_file: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        delta: Rational01,
    },
    /// Test principality of a type over a theory, relative to a registry and pool
    Principal {
        theory: PathBuf,
        #[arg(value_name = "TYPE")]
        type_file: PathBuf,
        #[arg(long)]
        pool: PathBuf,
        #[arg(long)]
        registry: PathBuf,
    },
    /// Test principality of every listed thickening
    MetricallyPrincipal {
        theory: PathBuf,
        #[arg(value_name = "TYPE")]
        type_file: PathBuf,
        #[arg(long)]
        pool: PathBuf,
        #[arg(long)]
        registry: PathBuf,
        /// Comma-separated deltas in (0, 1)
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<Rational01>,
    },
    /// Find the first registry model of a theory omitting every type
    OmitSearch {
        theory: PathBuf,
        #[arg(value_name = "TYPE")]
        types: Vec<PathBuf>,
        #[arg(long)]
        registry: PathBuf,
    },
    /// Parse-check the bundled axiom corpus
    Corpus,
}

fn parse_ultra(s: &str) -> Result<UltrafilterSpec, String> {
    if s == "frechet" {
        return Ok(UltrafilterSpec::FrechetLimit);
    }
    s.strip_prefix("principal:")
        .and_then(|k| k.parse().ok())
        .map(UltrafilterSpec::principal)
        .ok_or_else(|| format!("expected `frechet` or `principal:K`, got `{s}`"))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{}:{}: {}", path.display(), source.line, source.column, source.kind)]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Omitting(#[from] OmittingError),
    #[error(transparent)]
    Ultra(#[from] UltraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A verb's answer: exit code, text rendering and JSON rendering.
struct Report {
    code: i32,
    text: String,
    json: serde_json::Value,
}

impl Report {
    fn new(code: i32, text: String, json: impl Serialize) -> Self {
        Report { code, text, json: serde_json::to_value(json).expect("reports serialize") }
    }
}

fn code_of(v: Verdict) -> i32 {
    match v {
        Verdict::Yes => EXIT_YES,
        Verdict::No => EXIT_NO,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn load_structure(path: &Path) -> Result<MetricStructure, CliError> {
    parsed(path, parse_structure(&read(path)?))
}

/// A signature from a `.msig` file, or the signature of a `.mstr` file.
fn load_signature(path: &Path) -> Result<Signature, CliError> {
    if path.extension().is_some_and(|e| e == "mstr") {
        return Ok(load_structure(path)?.signature().clone());
    }
    Ok(parsed(path, parse_signature(&read(path)?))?.1)
}

fn load_formula(path: &Path, sig: &Signature) -> Result<Formula, CliError> {
    parsed(path, parse_formula(&read(path)?, sig))
}

fn load_theory(path: &Path, sig: &Signature) -> Result<Theory, CliError> {
    parsed(path, parse_theory(&read(path)?, sig))
}

fn load_type(path: &Path, sig: &Signature) -> Result<PartialType, CliError> {
    match parsed(path, parse_type_document(&read(path)?, sig))? {
        TypeDocument::Type(t) => Ok(t),
        TypeDocument::Pool(_) => Err(CliError::Usage(format!("{}: expected a type, found a pool", path.display()))),
    }
}

fn load_pool(path: &Path, sig: &Signature) -> Result<PrincipalityWitnessPool, CliError> {
    match parsed(path, parse_type_document(&read(path)?, sig))? {
        TypeDocument::Pool(p) => Ok(p),
        TypeDocument::Type(_) => Err(CliError::Usage(format!("{}: expected a pool, found a type", path.display()))),
    }
}

/// A registry file with its structures loaded, paths relative to the file.
struct LoadedRegistry {
    name: String,
    entries: Vec<MetricStructure>,
    tail: Option<MetricStructure>,
    cycle: Option<Vec<MetricStructure>>,
}

fn load_registry(path: &Path) -> Result<LoadedRegistry, CliError> {
    let doc = parsed(path, parse_registry(&read(path)?))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let load_all =
        |names: &[String]| names.iter().map(|n| load_structure(&base.join(n))).collect::<Result<Vec<_>, _>>();
    Ok(LoadedRegistry {
        name: doc.name.clone(),
        entries: load_all(&doc.entries)?,
        tail: doc.tail.as_ref().map(|t| load_structure(&base.join(t))).transpose()?,
        cycle: doc.cycle.as_deref().map(load_all).transpose()?,
    })
}

impl LoadedRegistry {
    fn into_registry(self) -> Result<Registry, CliError> {
        let mut all = self.entries;
        all.extend(self.tail);
        all.extend(self.cycle.into_iter().flatten());
        Ok(Registry::new(&self.name, all)?)
    }

    fn into_sequence(self) -> Result<StructureSequence, CliError> {
        Ok(match (self.tail, self.cycle) {
            (_, Some(period)) => StructureSequence::cyclic(period)?,
            (Some(tail), None) => StructureSequence::eventually(self.entries, tail)?,
            (None, None) => StructureSequence::finite(self.entries)?,
        })
    }
}

fn registry_signature(registry: &Registry) -> Result<Signature, CliError> {
    registry.signature().cloned().ok_or_else(|| CliError::Usage(format!("registry `{}` is empty", registry.name())))
}

fn assignment(text: Option<&str>, m: &MetricStructure) -> Result<Assignment, CliError> {
    match text {
        None => Ok(Assignment::new()),
        Some(t) => Assignment::parse(t, m).map_err(|e| CliError::Usage(format!("--assignment: {e}"))),
    }
}

fn point_tuple(text: &str, m: &MetricStructure) -> Result<Vec<Point>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| m.point_named(name).ok_or_else(|| CliError::Usage(format!("--tuple: unknown point `{name}`"))))
        .collect()
}

fn names(m: &MetricStructure, tuple: &[Point]) -> String {
    tuple.iter().map(|&p| m.point_name(p)).collect::<Vec<_>>().join(", ")
}

fn tuple_list(tuples: &[Vec<String>]) -> String {
    tuples.iter().map(|t| format!("({})", t.join(", "))).collect::<Vec<_>>().join(" ")
}

/// Runs one invocation. `env_depth` is the value of [`DEPTH_ENV`], if set.
pub fn run<I, T>(args: I, env_depth: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let depth = match (cli.global.depth, env_depth) {
        (Some(d), _) => d,
        (None, Some(v)) => match v.trim().parse() {
            Ok(d) => d,
            Err(_) => {
                let _ = writeln!(err, "error: {DEPTH_ENV}={v:?} is not a depth");
                return EXIT_USAGE;
            }
        },
        (None, None) => DEFAULT_DEPTH,
    };
    let cfg = EvalConfig {
        depth,
        strictness: match cli.global.strict_sat {
            Strictness::Eq1 => SatStrictness::Eq1,
            Strictness::Gt0 => SatStrictness::Gt0,
        },
        ..EvalConfig::default()
    };
    match execute(&cli.command, &cfg) {
        Ok(report) => {
            let body = if cli.global.json {
                serde_json::to_string_pretty(&report.json).expect("json values print") + "\n"
            } else {
                report.text
            };
            let _ = out.write_all(body.as_bytes());
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: &Command, cfg: &EvalConfig) -> Result<Report, CliError> {
    match command {
        Command::Parse { file, sig } => cmd_parse(file, sig.as_deref()),
        Command::Validate { structure } => cmd_validate(structure),
        Command::Eval { structure, formula, assignment: a } => {
            let m = load_structure(structure)?;
            let phi = load_formula(formula, m.signature())?;
            let iv = evaluate(&m, &phi, &assignment(a.as_deref(), &m)?, cfg)?;
            let code = if iv.is_exact() { EXIT_YES } else { EXIT_UNKNOWN };
            Ok(Report::new(code, format!("{iv}\n"), &iv))
        }
        Command::Sat { structure, formula, assignment: a } => {
            let m = load_structure(structure)?;
            let phi = load_formula(formula, m.signature())?;
            let iv = evaluate(&m, &phi, &assignment(a.as_deref(), &m)?, cfg)?;
            let verdict = Verdict::of_interval(&iv);
            Ok(Report::new(code_of(verdict), format!("{verdict}\n{iv}\n"), json!({ "verdict": verdict, "value": iv })))
        }
        Command::Models { structure, theory } => {
            let m = load_structure(structure)?;
            let t = load_theory(theory, m.signature())?;
            let report = models(&m, &t, cfg)?;
            let mut text = format!("{}\n", report.verdict);
            for s in &report.sentences {
                let _ = writeln!(text, "{:<8} {}  {}", s.verdict.to_string(), s.value, s.sentence);
            }
            Ok(Report::new(code_of(report.verdict), text, &report))
        }
        Command::ModInterval { registry, sentence, lo, hi } => {
            let reg = load_registry(registry)?.into_registry()?;
            let sig = registry_signature(&reg)?;
            let sigma = load_formula(sentence, &sig)?;
            let report = mod_interval(&reg, &sigma, lo, hi, cfg)?;
            let name = |ks: &[usize]| ks.iter().map(|&k| reg.structures()[k].name()).collect::<Vec<_>>().join(" ");
            let mut text = String::new();
            let _ = writeln!(text, "inside:  {}", name(&report.inside));
            let _ = writeln!(text, "outside: {}", name(&report.outside));
            let _ = writeln!(text, "unknown: {}", name(&report.unknown));
            for (m, v) in reg.structures().iter().zip(&report.values) {
                let _ = writeln!(text, "{}: {v}", m.name());
            }
            let code = if report.unknown.is_empty() { EXIT_YES } else { EXIT_UNKNOWN };
            Ok(Report::new(code, text, &report))
        }
        Command::Compare { left, right, pool } => {
            let m = load_structure(left)?;
            let n = load_structure(right)?;
            let t = load_theory(pool, m.signature())?;
            let report = compare_l(&m, &n, t.sentences(), cfg)?;
            let mut text = format!("{}\n", report.verdict);
            for r in &report.rows {
                let _ =
                    writeln!(text, "{:<9} left {}  right {}  {}", r.verdict.to_string(), r.left, r.right, r.sentence);
            }
            let code = match report.verdict {
                Comparison::Equal => EXIT_YES,
                Comparison::Different => EXIT_NO,
                Comparison::Unknown => EXIT_UNKNOWN,
            };
            Ok(Report::new(code, text, &report))
        }
        Command::Ultraproduct { sequence, ultra } => {
            let seq = load_registry(sequence)?.into_sequence()?;
            let factor = seq.factor(*ultra)?;
            let u = ultraproduct(&seq, *ultra)?;
            let verified = u.verify(factor);
            let mut text = print_structure(&u.structure);
            let _ = writeln!(text, "# factor: {}", factor.name());
            for (p, &q) in u.witness.iter().enumerate() {
                let _ = writeln!(text, "# {} -> {}", factor.point_name(p), u.structure.point_name(q));
            }
            let _ = writeln!(text, "# verified: {verified}");
            let witness: Vec<(&str, &str)> =
                u.witness.iter().enumerate().map(|(p, &q)| (factor.point_name(p), u.structure.point_name(q))).collect();
            let json = json!({
                "ultrafilter": ultra,
                "factor": factor.name(),
                "structure": print_structure(&u.structure),
                "witness": witness,
                "verified": verified,
            });
            Ok(Report::new(if verified { EXIT_YES } else { EXIT_NO }, text, json))
        }
        Command::Claim3 { sequence, sentence, ultra } => {
            let seq = load_registry(sequence)?.into_sequence()?;
            let sig = seq.at(0).expect("sequences are nonempty").signature().clone();
            let sigma = load_formula(sentence, &sig)?;
            let r = check_claim3(&seq, *ultra, &sigma, cfg)?;
            let text = format!(
                "{}\nultraproduct={} limit={}\n",
                if r.equal { "equal" } else { "unequal" },
                r.ultraproduct_value,
                r.limit_value
            );
            Ok(Report::new(if r.equal { EXIT_YES } else { EXIT_NO }, text, &r))
        }
        Command::Realizes { structure, type_file, tuple } => {
            let m = load_structure(structure)?;
            let sigma = load_type(type_file, m.signature())?;
            let t = point_tuple(tuple, &m)?;
            let v = realizes(&m, &sigma, &t, cfg)?;
            let text = format!("{v}\n");
            Ok(Report::new(code_of(v), text, json!({ "verdict": v, "tuple": names(&m, &t) })))
        }
        Command::Omits { structure, type_file } => {
            let m = load_structure(structure)?;
            let sigma = load_type(type_file, m.signature())?;
            let r = omits(&m, &sigma, cfg)?;
            let mut text = format!("{}\n", r.verdict);
            if !r.realizing.is_empty() {
                let _ = writeln!(text, "realized at: {}", tuple_list(&r.realizing));
            }
            if !r.undecided.is_empty() {
                let _ = writeln!(text, "undecided at: {}", tuple_list(&r.undecided));
            }
            Ok(Report::new(code_of(r.verdict), text, &r))
        }
        Command::Thicken { type_file, sig, delta } => {
            let sig = load_signature(sig)?;
            let sigma = load_type(type_file, &sig)?;
            let thick = thicken(&sigma, delta)?;
            let text = print_type(&thick);
            Ok(Report::new(EXIT_YES, text.clone(), json!({ "type": thick, "text": text })))
        }
        Command::Principal { theory, type_file, pool, registry } => {
            let reg = load_registry(registry)?.into_registry()?;
            let sig = registry_signature(&reg)?;
            let (t, sigma, pool) = (load_theory(theory, &sig)?, load_type(type_file, &sig)?, load_pool(pool, &sig)?);
            let report = principal_over(&t, &sigma, &pool, &reg, cfg)?;
            let code = if report.verdict == Principality::Principal { EXIT_YES } else { EXIT_NO };
            Ok(Report::new(code, principal_text(&report, reg.name()), &report))
        }
        Command::MetricallyPrincipal { theory, type_file, pool, registry, deltas } => {
            let reg = load_registry(registry)?.into_registry()?;
            let sig = registry_signature(&reg)?;
            let (t, sigma, pool) = (load_theory(theory, &sig)?, load_type(type_file, &sig)?, load_pool(pool, &sig)?);
            let report = metrically_principal_over(&t, &sigma, &pool, &reg, deltas, cfg)?;
            let mut text = match report.verdict {
                MetricPrincipality::MetricallyPrincipalRelative => {
                    format!("metrically principal relative to registry `{}` and the pool\n", reg.name())
                }
                MetricPrincipality::NotMetricallyPrincipal => format!(
                    "not metrically principal: fails at delta={}\n",
                    report.failing_delta.as_ref().expect("set on failure")
                ),
            };
            if report.vacuous {
                text.push_str("vacuous: no deltas given\n");
            }
            for d in &report.per_delta {
                let _ = write!(text, "delta={}: {}", d.delta, principal_text(&d.report, reg.name()));
            }
            let code = match report.verdict {
                MetricPrincipality::MetricallyPrincipalRelative => EXIT_YES,
                MetricPrincipality::NotMetricallyPrincipal => EXIT_NO,
            };
            Ok(Report::new(code, text, &report))
        }
        Command::OmitSearch { theory, types, registry } => {
            let reg = load_registry(registry)?.into_registry()?;
            let sig = registry_signature(&reg)?;
            let t = load_theory(theory, &sig)?;
            let types = types.iter().map(|p| load_type(p, &sig)).collect::<Result<Vec<_>, _>>()?;
            let report = omit_search(&t, &types, &reg, cfg)?;
            let mut text = match report.found {
                Some(k) => format!("found {}\n", reg.structures()[k].name()),
                None => "exhausted\n".to_string(),
            };
            for s in &report.scanned {
                let _ = write!(text, "{}: models={}", s.structure_name, s.model);
                for (ty, o) in types.iter().zip(&s.omissions) {
                    let _ = write!(text, " omits {}={}", ty.name(), o.verdict);
                    if !o.realizing.is_empty() {
                        let _ = write!(text, " at {}", tuple_list(&o.realizing));
                    }
                }
                text.push('\n');
            }
            Ok(Report::new(if report.found.is_some() { EXIT_YES } else { EXIT_NO }, text, &report))
        }
        Command::Corpus => {
            let checks = check_corpus();
            let mut text = String::new();
            for c in &checks {
                match &c.error {
                    None => {
                        let _ = writeln!(text, "{:<18} {}", c.name, if c.ok() { "ok" } else { "not a fixed point" });
                    }
                    Some(e) => {
                        let _ = writeln!(text, "{:<18} error: {e}", c.name);
                    }
                }
            }
            let code = if checks.iter().all(|c| c.ok()) { EXIT_YES } else { EXIT_NO };
            Ok(Report::new(code, text, &checks))
        }
    }
}

fn principal_text(report: &crate::omitting::PrincipalityReport, registry: &str) -> String {
    let mut text = match &report.witness {
        Some(w) => format!(
            "principal relative to registry `{registry}` and the pool\nwitness: {} >= {} with terms ({})\n",
            w.triple.formula,
            w.triple.threshold,
            w.triple.terms.join(", ")
        ),
        None => format!("not principal relative to registry `{registry}` and the pool\n"),
    };
    if report.vacuous {
        text.push_str("vacuous: the type is realized in no registry model of the theory\n");
    }
    if report.witness.is_none() {
        for t in &report.trials {
            let reason = match &t.failure {
                Some(TripleFailure::Unsatisfied) => "formula not satisfied in any registry model".to_string(),
                Some(TripleFailure::NotEntailed { at, realization, .. }) => format!(
                    "{} at ({}) meets the threshold but realization is {realization}",
                    at.structure_name,
                    at.tuple.join(", ")
                ),
                None => "accepted".to_string(),
            };
            let _ = writeln!(
                text,
                "  {} >= {} with ({}): {reason}",
                t.triple.formula,
                t.triple.threshold,
                t.triple.terms.join(", ")
            );
        }
    }
    text
}

fn cmd_validate(path: &Path) -> Result<Report, CliError> {
    let m = load_structure(path)?;
    let report = validate(&m);
    let mut text = format!("{}\n", if report.is_valid() { "valid" } else { "invalid" });
    for v in &report.metric.violations {
        let line = match v {
            MetricViolation::Reflexivity { point, value } => format!("reflexivity: d({point}, {point}) = {value}"),
            MetricViolation::Symmetry { a, b, ab, ba } => {
                format!("symmetry: d({a}, {b}) = {ab} but d({b}, {a}) = {ba}")
            }
            MetricViolation::Triangle { a, b, via } => {
                format!("triangle: d({a}, {b}) > d({a}, {via}) + d({via}, {b})")
            }
        };
        let _ = writeln!(text, "{line}");
    }
    for w in &report.metric.warnings {
        let MetricWarning::ZeroDistance { a, b } = w;
        let _ = writeln!(text, "warning: d({a}, {b}) = 0 for distinct points");
    }
    for r in &report.moduli {
        let _ = writeln!(text, "modulus {}: {}", r.symbol, if r.holds() { "holds" } else { "fails" });
        for c in &r.counterexamples {
            let _ = writeln!(
                text,
                "  ({}) vs ({}): distance {} < delta({}) but variation {}",
                c.left.join(", "),
                c.right.join(", "),
                c.distance,
                c.epsilon,
                c.variation
            );
        }
    }
    Ok(Report::new(if report.is_valid() { EXIT_YES } else { EXIT_NO }, text, &report))
}

fn cmd_parse(path: &Path, sig: Option<&Path>) -> Result<Report, CliError> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let needs_sig = || -> Result<Signature, CliError> {
        match sig {
            Some(s) => load_signature(s),
            None => Err(CliError::Usage(format!("parsing a .{ext} file needs --sig"))),
        }
    };
    let text = read(path)?;
    match ext {
        "msig" => {
            let (name, s) = parsed(path, parse_signature(&text))?;
            Ok(Report::new(EXIT_YES, print_signature(name.as_deref(), &s), json!({ "name": name, "signature": s })))
        }
        "mstr" => {
            let m = parsed(path, parse_structure(&text))?;
            Ok(Report::new(EXIT_YES, print_structure(&m), &m))
        }
        "mfla" => {
            let phi = parsed(path, parse_formula(&text, &needs_sig()?))?;
            Ok(Report::new(EXIT_YES, print_formula(&phi) + "\n", &phi))
        }
        "mthy" => {
            let t = parsed(path, parse_theory(&text, &needs_sig()?))?;
            Ok(Report::new(EXIT_YES, print_theory(&t), &t))
        }
        "mtyp" => match parsed(path, parse_type_document(&text, &needs_sig()?))? {
            TypeDocument::Type(t) => Ok(Report::new(EXIT_YES, print_type(&t), &t)),
            TypeDocument::Pool(p) => Ok(Report::new(EXIT_YES, print_pool(&p), &p)),
        },
        "mreg" => {
            let r = parsed(path, parse_registry(&text))?;
            Ok(Report::new(EXIT_YES, print_registry(&r), &r))
        }
        _ => Err(CliError::Usage(format!(
            "{}: unknown document kind (expected .msig, .mstr, .mfla, .mthy, .mtyp or .mreg)",
            path.display()
        ))),
    }
}
