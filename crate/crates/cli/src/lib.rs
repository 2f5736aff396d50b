//! Command-line front end for `segrekit-core`: configuration loading,
//! dispatch to the checks, and JSON reports with replayable witnesses.

mod commands;
mod recheck;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use segrekit_core::field::parse_rational;
use segrekit_core::hypersurface::{HypersurfaceParams, ParamsJson};

pub use commands::run;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "segrekit", version, about = "Checks for the M_eps hypersurface family")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// JSON file with eps0, c, eps, seed and samples.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Exact hyperquadric embedding identity and a sampled immersion check.
    VerifyEmbedding,
    /// Gradient and Levi scan over sampled surface points.
    LeviScan {
        /// Also write an n x n grid of Levi values as CSV.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Seeded Segre variety checks.
    Segre,
    /// Base locus, restricted degrees and Cramer reconstruction for a map.
    DegreeCheck {
        /// Map JSON; defaults to the hyperquadric embedding.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Base points for the Cramer reconstruction.
        #[arg(long, default_value_t = 1)]
        points: usize,
    },
    /// Coefficient bounds for polynomials without zeros in the unit disk.
    Bounds {
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Monodromy of sqrt(w) and its Segre restriction.
    MonodromyDemo,
    /// Re-verifies the witnesses of a saved report.
    Recheck {
        #[arg(long)]
        report: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyEmbedding => "verify-embedding",
            Command::LeviScan { .. } => "levi-scan",
            Command::Segre => "segre",
            Command::DegreeCheck { .. } => "degree-check",
            Command::Bounds { .. } => "bounds",
            Command::MonodromyDemo => "monodromy-demo",
            Command::Recheck { .. } => "recheck",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: HypersurfaceParams,
    pub seed: u64,
    /// Per-subcommand default when absent.
    pub samples: Option<usize>,
    pub out_path: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    eps0: Option<Value>,
    c: Option<Value>,
    eps: Option<Value>,
    seed: Option<u64>,
    samples: Option<usize>,
}

fn rational_field(name: &str, v: &Value) -> Result<num_rational::BigRational, String> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(format!("{name}: expected a rational, got {other}")),
    };
    parse_rational(&text).map_err(|e| format!("{name}: {e}"))
}

impl RunConfig {
    /// Canonical params and defaults, overridden by the config file and
    /// then by command-line flags. Parameter constraints are checked here.
    pub fn load(args: &GlobalArgs) -> Result<Self, String> {
        let file: ConfigFile = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("malformed config {}: {e}", path.display()))?
            }
            None => ConfigFile::default(),
        };
        let canon = HypersurfaceParams::canonical();
        let pick = |name: &str, v: &Option<Value>, d: &num_rational::BigRational| match v {
            Some(v) => rational_field(name, v),
            None => Ok(d.clone()),
        };
        let params = HypersurfaceParams::new(
            pick("eps0", &file.eps0, canon.eps0())?,
            pick("c", &file.c, canon.c())?,
            pick("eps", &file.eps, canon.eps())?,
        )
        .map_err(|e| e.to_string())?;
        Ok(Self {
            params,
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            samples: args.samples.or(file.samples),
            out_path: args.out.clone(),
        })
    }

    /// Side file next to the report, or in the working directory.
    pub fn side_path(&self, suffix: &str, fallback: &str) -> PathBuf {
        match &self.out_path {
            Some(p) => p.with_extension(suffix),
            None => PathBuf::from(fallback),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

/// Evidence for a failed check, precise enough for `recheck` to reproduce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    IdentityResidual {
        symbolic: bool,
        residual_terms: usize,
        terms: Vec<String>,
    },
    Immersion {
        point: [f64; 4],
        min_max_minor: f64,
        collisions: usize,
    },
    LeviPoint {
        point: [f64; 4],
        levi: f64,
        grad_norm: f64,
    },
    SegreCase {
        check: String,
        index: usize,
    },
    DegreeSample {
        point: [f64; 4],
        restricted_degree: usize,
        total_degree: u32,
        reason: String,
    },
    Cramer {
        base_index: usize,
        point: [f64; 4],
        reason: String,
    },
    BoundsTrial {
        m: u32,
        trial: usize,
        coeffs: Vec<String>,
        reason: String,
    },
    BoundsExtremal {
        m: u32,
    },
    Monodromy {
        quantity: String,
        value: f64,
        limit: f64,
    },
    Unconfirmed {
        index: usize,
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check_name: String,
    pub status: Status,
    pub params: Option<ParamsJson>,
    pub metrics: BTreeMap<String, Value>,
    pub witnesses: Vec<Witness>,
    pub tool_version: String,
    pub seed: u64,
}

impl Report {
    pub fn new(check_name: &str, params: Option<ParamsJson>, seed: u64) -> Self {
        Self {
            check_name: check_name.to_string(),
            status: Status::Pass,
            params,
            metrics: BTreeMap::new(),
            witnesses: Vec::new(),
            tool_version: TOOL_VERSION.to_string(),
            seed,
        }
    }

    pub fn error(check_name: &str, params: Option<ParamsJson>, seed: u64, message: &str) -> Self {
        let mut r = Self::new(check_name, params, seed);
        r.status = Status::Error;
        r.metric("error", message);
        r
    }

    pub fn metric<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).expect("metrics serialize");
        self.metrics.insert(key.to_string(), v);
    }

    /// Pass or fail; a failure without witnesses is reported as an error.
    pub fn conclude(mut self, passed: bool) -> Self {
        self.status = if passed {
            Status::Pass
        } else if self.witnesses.is_empty() {
            self.metric("error", "check failed without a witness");
            Status::Error
        } else {
            Status::Fail
        };
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn emit(report: &Report, out: Option<&Path>) -> std::io::Result<()> {
    let text = report.to_json();
    match out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// writes the report. Returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return if code == 0 { 0 } else { 2 };
        }
    };
    let name = cli.command.name();
    let report = match RunConfig::load(&cli.global) {
        Ok(cfg) => run(&cli.command, &cfg),
        Err(msg) => Report::error(name, None, cli.global.seed.unwrap_or(DEFAULT_SEED), &msg),
    };
    if let Some(Value::String(msg)) = report.metrics.get("error") {
        eprintln!("segrekit {name}: {msg}");
    }
    if let Err(e) = emit(&report, cli.global.out.as_deref()) {
        eprintln!("segrekit: cannot write report: {e}");
        return 2;
    }
    report.status.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_through_json() {
        let mut r = Report::new("levi-scan", Some(HypersurfaceParams::canonical().to_json()), 7);
        r.metric("min_levi", 0.1 + 0.2);
        r.metric("scan", serde_json::json!({"n": 3, "ok": true}));
        r.witnesses.push(Witness::LeviPoint {
            point: [0.1, -1.0 / 3.0, 0.7, 1e-300],
            levi: -2.0f64.sqrt(),
            grad_norm: 5e-324,
        });
        r.witnesses.push(Witness::SegreCase { check: "symmetry".into(), index: 3 });
        let r = r.conclude(false);
        assert_eq!(r.status, Status::Fail);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn failure_needs_a_witness() {
        let r = Report::new("segre", None, 1).conclude(false);
        assert_eq!(r.status, Status::Error);
        assert_eq!(r.status.exit_code(), 2);
    }

    #[test]
    fn config_layers_and_validation() {
        let dir = std::env::temp_dir().join(format!("segrekit-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        fs::write(&path, r#"{"eps0": "1/100", "c": 2.25, "eps": "0", "seed": 9, "samples": 50}"#).unwrap();
        let mut args = GlobalArgs { config: Some(path.clone()), ..Default::default() };
        let cfg = RunConfig::load(&args).unwrap();
        assert_eq!(cfg.params.eps().to_string(), "0");
        assert_eq!((cfg.seed, cfg.samples), (9, Some(50)));
        args.seed = Some(3);
        assert_eq!(RunConfig::load(&args).unwrap().seed, 3);
        fs::write(&path, r#"{"eps0": "1/100", "c": "3", "eps": "1/4"}"#).unwrap();
        assert!(RunConfig::load(&args).unwrap_err().contains("c < 16/7"));
        fs::write(&path, r#"{"eps0": "1/100", "colour": 1}"#).unwrap();
        assert!(RunConfig::load(&args).unwrap_err().contains("malformed"));
        fs::remove_dir_all(&dir).unwrap();
    }
}
