//! The `nacurve` command line.
//!
//! Every subcommand reads one JSON document (stdin or `--input`), writes one
//! JSON document to stdout and exits with 0 (affirmative or clean), 1
//! (negative or inconclusive) or 2 (bad input or usage).

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cover::{
    almost_semistable_verdict, check_semistable, fiber_counts, pgroup_corollary_check, validate_cover, CoverJson,
    CoverSpec, SearchBounds,
};
use crate::disks::{ClosedDisk, DiskJson};
use crate::error::{Error, Result};
use crate::fuzz::run_fuzz;
use crate::skeleton::{stabilize, Skeleton, SkeletonJson, Stabilized};
use crate::tree::{build_tree, minimal_supporting_model};
use crate::ultrametric::{is_prime, Prime};
use crate::SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nacurve",
    version,
    about = "Trees of p-adic disks, curve skeletons and semistability criteria for Galois covers"
)]
pub struct Cli {
    #[command(flatten)]
    pub session: SessionArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SessionArgs {
    /// Residue characteristic. Documents that carry a prime take precedence
    /// and must agree.
    #[arg(long, global = true, env = "NACURVE_PRIME")]
    pub prime: Option<u64>,
    /// Auxiliary coefficient prime; must differ from p and not divide |G|.
    #[arg(long, global = true, env = "NACURVE_ELL")]
    pub ell: Option<u64>,
    #[arg(long, global = true, env = "NACURVE_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true, env = "NACURVE_COUNT")]
    pub count: Option<u64>,
    /// Read the input document from this file instead of stdin.
    #[arg(long, global = true, env = "NACURVE_INPUT")]
    pub input: Option<PathBuf>,
    /// Also write a Graphviz rendering to this file.
    #[arg(long, global = true, env = "NACURVE_DOT")]
    pub dot: Option<PathBuf>,
    /// Build the tree from the disks as given; fail if they are not closed.
    #[arg(long, global = true, env = "NACURVE_NO_CLOSURE")]
    pub no_closure: bool,
    /// Largest vertex set tried when searching for residual witnesses.
    #[arg(long, global = true, env = "NACURVE_MAX_SUBSET")]
    pub max_subset: Option<usize>,
    /// Fuzz worker threads (default: available parallelism).
    #[arg(long, global = true, env = "NACURVE_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal tree of disks supporting a set of disks.
    Tree,
    /// Cohomology dimensions or stabilization of a skeleton.
    Skeleton {
        #[arg(value_enum)]
        mode: SkeletonMode,
    },
    /// Consistency and semistability verdicts for a cover.
    Cover {
        #[arg(value_enum)]
        mode: CoverMode,
    },
    /// Random contractions checked against the vanishing-cycle identity.
    Fuzz,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SkeletonMode {
    Analyze,
    Stabilize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CoverMode {
    Validate,
    Check,
    Counts,
    Corollary,
}

/// Disks input: a bare list (prime from `--prime`) or a document.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DisksInput {
    Doc {
        #[serde(default)]
        schema_version: Option<u32>,
        #[serde(default)]
        prime: Option<Prime>,
        disks: Vec<DiskJson>,
    },
    List(Vec<DiskJson>),
}

/// Validated session settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    pub prime: Option<Prime>,
    pub ell: Option<Prime>,
    pub seed: Option<u64>,
    pub count: u64,
    pub bounds: SearchBounds,
    pub workers: usize,
}

impl SessionConfig {
    pub fn from_args(args: &SessionArgs) -> Result<Self> {
        let prime = args.prime.map(Prime::new).transpose()?;
        let ell = match args.ell {
            Some(l) if !is_prime(l) => return Err(Error::config(format!("--ell {l} is not prime"))),
            Some(l) => Some(Prime::new(l)?),
            None => None,
        };
        if let (Some(p), Some(l)) = (prime, ell) {
            if p == l {
                return Err(Error::config(format!("ell must differ from p, both are {p}")));
            }
        }
        let workers = args.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Ok(SessionConfig {
            prime,
            ell,
            seed: args.seed,
            count: args.count.unwrap_or(10_000),
            bounds: SearchBounds { max_subset: args.max_subset },
            workers,
        })
    }

    /// The document's prime wins; a different `--prime` is an error.
    fn resolve_prime(&self, doc: Option<Prime>) -> Result<Prime> {
        match (doc, self.prime) {
            (Some(d), Some(f)) if d != f => {
                Err(Error::config(format!("input declares p = {d} but --prime {f} was given")))
            }
            (Some(d), _) => Ok(d),
            (None, Some(f)) => Ok(f),
            (None, None) => Err(Error::config("no prime: pass --prime or put \"prime\" in the input")),
        }
    }

    fn check_ell(&self, p: Prime, group_order: Option<usize>) -> Result<()> {
        let Some(l) = self.ell else { return Ok(()) };
        if l == p {
            return Err(Error::config(format!("ell must differ from p, both are {p}")));
        }
        if let Some(n) = group_order {
            if (n as u64).is_multiple_of(l.get()) {
                return Err(Error::config(format!("ell = {l} divides the group order {n}")));
            }
        }
        Ok(())
    }
}

/// JSON report and exit code.
pub struct Report {
    pub body: Value,
    pub exit: i32,
    pub dot: Option<String>,
}

fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::data(format!("malformed JSON: {e}")))?;
    if let Some(v) = value.get("schema_version") {
        if v != &json!(SCHEMA_VERSION) {
            return Err(Error::data(format!("unsupported schema_version {v}")));
        }
    }
    serde_json::from_value(value).map_err(|e| Error::data(format!("input does not match the schema: {e}")))
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub fn cmd_tree(input: &str, cfg: &SessionConfig, no_closure: bool) -> Result<Report> {
    let (doc_prime, disks) = match parse_doc::<DisksInput>(input)? {
        DisksInput::Doc { prime, disks, schema_version } => {
            if schema_version.is_some_and(|v| v != SCHEMA_VERSION) {
                return Err(Error::data("unsupported schema_version"));
            }
            (prime, disks)
        }
        DisksInput::List(disks) => (None, disks),
    };
    let p = cfg.resolve_prime(doc_prime)?;
    cfg.check_ell(p, None)?;
    let disks = disks.iter().map(|d| ClosedDisk::from_json(d, p)).collect::<Result<Vec<_>>>()?;
    let tree = if no_closure { build_tree(&disks)? } else { minimal_supporting_model(&disks)? };
    Ok(Report { body: to_value(&tree.to_json()), exit: EXIT_OK, dot: Some(tree.to_dot()) })
}

#[derive(Serialize)]
struct Analysis {
    schema_version: u32,
    components: usize,
    total_genus: u64,
    betti1: u64,
    h1c: u64,
    h1: u64,
    csp: u64,
    #[serde(rename = "B")]
    boundary: u64,
    h1_proper: u64,
    tree_like: bool,
}

pub fn analyze(s: &Skeleton) -> Result<Value> {
    Ok(to_value(&Analysis {
        schema_version: SCHEMA_VERSION,
        components: s.num_components(),
        total_genus: s.total_genus(),
        betti1: s.betti1(),
        h1c: s.dim_h1c()?,
        h1: s.dim_h1()?,
        csp: s.dim_h1_csp()?,
        boundary: s.dim_boundary_module()?,
        h1_proper: s.dim_h1_proper(),
        tree_like: s.is_tree_like(),
    }))
}

pub fn cmd_skeleton(input: &str, cfg: &SessionConfig, mode: SkeletonMode) -> Result<Report> {
    let _ = cfg;
    let s = Skeleton::from_json(&parse_doc::<SkeletonJson>(input)?)?;
    match mode {
        SkeletonMode::Analyze => Ok(Report { body: analyze(&s)?, exit: EXIT_OK, dot: Some(s.to_dot()) }),
        SkeletonMode::Stabilize => {
            let parts = stabilize(&s)?;
            let components: Vec<Value> = parts
                .iter()
                .map(|c| match c {
                    Stabilized::Stable(k) => json!({"kind": c.kind(), "skeleton": k}),
                    _ => json!({"kind": c.kind()}),
                })
                .collect();
            let dot = parts.iter().map(|c| c.as_skeleton().to_dot()).collect::<String>();
            Ok(Report {
                body: json!({"schema_version": SCHEMA_VERSION, "components": components}),
                exit: EXIT_OK,
                dot: Some(dot),
            })
        }
    }
}

pub fn cmd_cover(input: &str, cfg: &SessionConfig, mode: CoverMode) -> Result<Report> {
    let json: CoverJson = parse_doc(input)?;
    let p = cfg.resolve_prime(Some(json.prime))?;
    let spec = CoverSpec::from_json(&json)?;
    cfg.check_ell(p, Some(spec.group().order()))?;
    let dot = Some(spec.base().to_dot());
    let (body, exit) = match mode {
        CoverMode::Validate => {
            let violations = validate_cover(&spec);
            let clean = violations.is_empty();
            (
                json!({"schema_version": SCHEMA_VERSION, "clean": clean, "violations": violations}),
                if clean { EXIT_OK } else { EXIT_NEGATIVE },
            )
        }
        CoverMode::Check => {
            let violations = validate_cover(&spec);
            if let Some(v) = violations.first() {
                return Err(Error::data(format!(
                    "cover data is inconsistent ({} violations), first: {v}",
                    violations.len()
                )));
            }
            let standing = almost_semistable_verdict(&spec, cfg.bounds)?;
            let (semistable, failing, note) = if !standing.almost_semistable_and_tree_like {
                (None, vec![], Some("per-edge test skipped: almost semistability is not established"))
            } else if !spec.is_p_group_cover() {
                (None, vec![], Some("per-edge test skipped: the Galois group is not a p-group"))
            } else {
                let v = check_semistable(&spec, &standing)?;
                (Some(v.semistable), v.failing_edges, None)
            };
            let exit = if semistable == Some(true) { EXIT_OK } else { EXIT_NEGATIVE };
            (
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "almost_semistable": standing.almost_semistable_and_tree_like,
                    "semistable": semistable,
                    "conditional_on": standing.conditional_on,
                    "failing_edges": failing,
                    "blocking": standing.blocking,
                    "per_tau": standing.per_tau,
                    "note": note,
                }),
                exit,
            )
        }
        CoverMode::Counts => (json!({"schema_version": SCHEMA_VERSION, "vertices": fiber_counts(&spec)?}), EXIT_OK),
        CoverMode::Corollary => {
            let x = spec.x_skeleton().ok_or_else(|| Error::config("the corollary check needs x_skeleton"))?;
            let r = pgroup_corollary_check(&spec, x)?;
            let exit = if r.holds { EXIT_OK } else { EXIT_NEGATIVE };
            let mut body = to_value(&r);
            body["schema_version"] = json!(SCHEMA_VERSION);
            (body, exit)
        }
    };
    Ok(Report { body, exit, dot })
}

pub fn cmd_fuzz(cfg: &SessionConfig) -> Result<Report> {
    let seed = cfg.seed.ok_or_else(|| Error::config("fuzz needs --seed"))?;
    let summary = run_fuzz(seed, cfg.count, cfg.workers)?;
    let exit = if summary.discrepancies == 0 { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Report { body: to_value(&summary), exit, dot: None })
}

fn read_input(args: &SessionArgs, stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    match &args.input {
        Some(path) => {
            text = std::fs::read_to_string(path)
                .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?
        }
        None => {
            stdin.read_to_string(&mut text).map_err(|e| Error::config(format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Report> {
    let cfg = SessionConfig::from_args(&cli.session)?;
    let report = match &cli.command {
        Command::Fuzz => cmd_fuzz(&cfg)?,
        Command::Tree => cmd_tree(&read_input(&cli.session, stdin)?, &cfg, cli.session.no_closure)?,
        Command::Skeleton { mode } => cmd_skeleton(&read_input(&cli.session, stdin)?, &cfg, *mode)?,
        Command::Cover { mode } => cmd_cover(&read_input(&cli.session, stdin)?, &cfg, *mode)?,
    };
    if let (Some(path), Some(dot)) = (&cli.session.dot, &report.dot) {
        std::fs::write(path, dot).map_err(|e| Error::config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(report)
}

/// Parse `args`, run, write the report. Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.body).expect("JSON values print");
            let _ = writeln!(stdout, "{text}");
            report.exit
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("nacurve").chain(args.iter().copied());
        let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn tree_closure_example() {
        let input = r#"{"prime": 2, "disks": [{"center": 0, "v": 2}, {"center": 2, "v": 3}]}"#;
        let (code, out, _) = call(&["tree"], input);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
        assert_eq!(v["schema_version"], 1);
        let (code, _, err) = call(&["tree", "--no-closure"], input);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn tree_prime_handling() {
        let list = r#"[{"center": 0, "v": 1}]"#;
        assert_eq!(call(&["tree"], list).0, 2);
        assert_eq!(call(&["tree", "--prime", "3"], list).0, 0);
        assert_eq!(call(&["tree", "--prime", "4"], list).0, 2);
        let doc = r#"{"prime": 2, "disks": [{"center": 0, "v": 1}]}"#;
        assert_eq!(call(&["tree", "--prime", "3"], doc).0, 2);
        assert_eq!(call(&["tree", "--prime", "2", "--ell", "2"], doc).0, 2);
        assert_eq!(call(&["tree", "--ell", "3"], doc).0, 0);
    }

    #[test]
    fn skeleton_analyze_example() {
        let input = r#"{"vertices": [{"g": 2}], "edges": [], "legs": [0, 0, 0]}"#;
        let (code, out, _) = call(&["skeleton", "analyze"], input);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            (v["h1c"].as_u64(), v["h1"].as_u64(), v["csp"].as_u64(), v["B"].as_u64()),
            (Some(6), Some(6), Some(4), Some(2))
        );
    }

    #[test]
    fn skeleton_stabilize_disk() {
        let input = r#"{"vertices": [{"g": 0}], "legs": [0]}"#;
        let (code, out, _) = call(&["skeleton", "stabilize"], input);
        assert_eq!(code, 0);
        assert!(out.contains("\"Disk\""), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["bogus"], "").0, 2);
        assert_eq!(call(&["skeleton", "analyze"], "not json").0, 2);
        assert_eq!(call(&["fuzz"], "").0, 2);
        assert_eq!(call(&["--help"], "").0, 0);
    }

    #[test]
    fn fuzz_is_deterministic() {
        let a = call(&["fuzz", "--seed", "5", "--count", "200", "--workers", "3"], "");
        let b = call(&["fuzz", "--seed", "5", "--count", "200", "--workers", "1"], "");
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        let (code, out, _) = call(&["fuzz", "--seed", "5", "--count", "0"], "");
        assert_eq!(code, 0);
        assert!(out.contains("\"checked\": 0"));
    }
}
