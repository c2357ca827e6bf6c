//! Command-line driver: one decision per invocation, a single JSON report on
//! standard output, and the verdict in the exit code.
//!
//! Exit codes: 0 = yes/valid, 1 = no/invalid, 2 = inconclusive, 64 = usage
//! error, 65 = data format error.

pub mod corpus;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use sft_core::conjugacy::{conjugate_higher_powers, one_sided_conjugate};
use sft_core::dimension::bowen_franks;
use sft_core::graph::is_canonical_form;
use sft_core::matrix::{Int, IntMatrix};
use sft_core::moves::total_amalgamation;
use sft_core::poly::char_poly;
use sft_core::se::{
    balanced_to_unital_se, boyle_pse_identity, unital_condition, verify_se, SeCertificate,
    UnitalVerdict,
};
use sft_core::search::{search_balanced_path, SearchLimits};
use sft_core::parse_matrix;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

/// Outcome of one invocation: what to print and what to return.
pub struct CommandOutcome {
    pub exit_code: i32,
    pub report: String,
}

#[derive(Parser)]
#[command(
    name = "sft",
    about = "Invariants and decision procedures for one-sided shifts of finite type",
    disable_help_subcommand = true
)]
struct Cli {
    /// Emit the report as a single compact JSON line (default: pretty JSON).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SearchArgs {
    /// Cap on the size of intermediate matrices.
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    /// Cap on the total path length.
    #[arg(long, default_value_t = 6)]
    max_depth: usize,
    /// Cap on entries of intermediate matrices.
    #[arg(long, default_value_t = 16)]
    max_entry: u64,
    /// Cap on the number of distinct matrices visited.
    #[arg(long, default_value_t = 20_000)]
    max_nodes: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Total amalgamation of a matrix, with the certified move chain.
    Amalg { matrix: PathBuf },
    /// One-sided conjugacy of two matrices (total amalgamations agree).
    Conjugate { a: PathBuf, b: PathBuf },
    /// Conjugate higher powers of two matrices.
    HigherPowers {
        a: PathBuf,
        b: PathBuf,
        /// Power level n (defaults to the larger size; below that is rejected).
        #[arg(long)]
        power: Option<usize>,
    },
    /// Unital signed Bowen-Franks data of a matrix.
    Bf { matrix: PathBuf },
    /// Characteristic polynomial, computed fraction-free.
    Charpoly { matrix: PathBuf },
    /// Verify a shift-equivalence certificate file.
    VerifySe {
        certificate: PathBuf,
        /// Override the certificate's lag.
        #[arg(long)]
        lag: Option<usize>,
    },
    /// Decide the unital condition of a verified certificate.
    UnitalSe {
        certificate: PathBuf,
        #[arg(long)]
        lag: Option<usize>,
        /// Bound on the witness search (default 2(|A|+|B|) + lag).
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Verify a balanced elementary equivalence and emit its lag-2 unital
    /// certificate. Arguments: A B S R_A R_B (matrix files).
    Balanced {
        a: PathBuf,
        b: PathBuf,
        s: PathBuf,
        r_a: PathBuf,
        r_b: PathBuf,
    },
    /// Verify the polynomial shift-equivalence identity of a certificate.
    BoylePse { certificate: PathBuf },
    /// Verify an SL+ equivalence from a JSON description.
    SlPlus { input: PathBuf },
    /// Canonical-form predicate with the violated clauses.
    CanonicalForm { matrix: PathBuf },
    /// Bounded bidirectional search for a balanced move path.
    SearchPath {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        limits: SearchArgs,
    },
    /// List the example corpus, or replay every stored verdict.
    Corpus {
        /// Replay all stored certificates and expected verdicts.
        #[arg(long)]
        verify: bool,
    },
}

enum CommandError {
    Data(String),
}

impl CommandError {
    fn outcome(&self, pretty: bool) -> CommandOutcome {
        let CommandError::Data(message) = self;
        CommandOutcome {
            exit_code: EXIT_DATA,
            report: render(&json!({ "error": message }), pretty),
        }
    }
}

fn render(value: &serde_json::Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("report serializes")
    } else {
        serde_json::to_string(value).expect("report serializes")
    }
}

fn load_matrix(path: &Path) -> Result<IntMatrix, CommandError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CommandError::Data(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| CommandError::Data(format!("{}: {e}", path.display())))
}

fn load_certificate(path: &Path) -> Result<SeCertificate, CommandError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CommandError::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CommandError::Data(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report serializes")
}

/// Run one command. The report is returned rather than printed so tests can
/// drive the command surface directly.
pub fn run_command<I, S>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders its own message; --help and --version are not
            // usage errors
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            return CommandOutcome {
                exit_code: if benign { EXIT_YES } else { EXIT_USAGE },
                report: err.render().to_string(),
            };
        }
    };
    let pretty = !cli.json;
    match dispatch(cli.command) {
        Ok((exit_code, value)) => CommandOutcome {
            exit_code,
            report: render(&value, pretty),
        },
        Err(e) => e.outcome(pretty),
    }
}

fn dispatch(command: Command) -> Result<(i32, serde_json::Value), CommandError> {
    match command {
        Command::Amalg { matrix } => {
            let m = load_matrix(&matrix)?;
            let result = total_amalgamation(&m).map_err(|e| CommandError::Data(e.to_string()))?;
            Ok((
                EXIT_YES,
                json!({
                    "command": "amalg",
                    "input": to_value(&m),
                    "total": to_value(&result.total),
                    "moves": to_value(&result.seq),
                }),
            ))
        }
        Command::Conjugate { a, b } => {
            let a = load_matrix(&a)?;
            let b = load_matrix(&b)?;
            let decision =
                one_sided_conjugate(&a, &b).map_err(|e| CommandError::Data(e.to_string()))?;
            let code = if decision.conjugate { EXIT_YES } else { EXIT_NO };
            Ok((
                code,
                json!({
                    "command": "conjugate",
                    "conjugate": decision.conjugate,
                    "certificate": to_value(&decision.certificate),
                }),
            ))
        }
        Command::HigherPowers { a, b, power } => {
            let a = load_matrix(&a)?;
            let b = load_matrix(&b)?;
            let report = conjugate_higher_powers(&a, &b, power)
                .map_err(|e| CommandError::Data(e.to_string()))?;
            let code = if report.conjugate_higher_powers {
                EXIT_YES
            } else {
                EXIT_NO
            };
            Ok((
                code,
                json!({
                    "command": "higher-powers",
                    "report": to_value(&report),
                }),
            ))
        }
        Command::Bf { matrix } => {
            let m = load_matrix(&matrix)?;
            let data = bowen_franks(&m).map_err(|e| CommandError::Data(e.to_string()))?;
            Ok((
                EXIT_YES,
                json!({
                    "command": "bf",
                    "bowen_franks": to_value(&data),
                }),
            ))
        }
        Command::Charpoly { matrix } => {
            let m = load_matrix(&matrix)?;
            let p = char_poly(&m).map_err(|e| CommandError::Data(e.to_string()))?;
            Ok((
                EXIT_YES,
                json!({
                    "command": "charpoly",
                    "polynomial": to_value(&p),
                    "display": p.to_string(),
                }),
            ))
        }
        Command::VerifySe { certificate, lag } => {
            let mut cert = load_certificate(&certificate)?;
            if let Some(lag) = lag {
                cert.lag = lag;
            }
            let result = verify_se(&cert);
            let code = if result.is_ok() { EXIT_YES } else { EXIT_NO };
            Ok((
                code,
                json!({
                    "command": "verify-se",
                    "valid": result.is_ok(),
                    "failure": result.err().map(|e| e.to_string()),
                }),
            ))
        }
        Command::UnitalSe {
            certificate,
            lag,
            k_max,
        } => {
            let mut cert = load_certificate(&certificate)?;
            if let Some(lag) = lag {
                cert.lag = lag;
            }
            let verdict =
                unital_condition(&cert, k_max).map_err(|e| CommandError::Data(e.to_string()))?;
            // diagnostics only: the reversed certificate's verdict does not
            // enter the decision
            let reversed = unital_condition(&cert.reversed(), k_max).ok();
            let code = match &verdict {
                UnitalVerdict::Yes { .. } => EXIT_YES,
                UnitalVerdict::No { .. } => EXIT_NO,
                UnitalVerdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
            };
            Ok((
                code,
                json!({
                    "command": "unital-se",
                    "verdict": to_value(&verdict),
                    "reversed_certificate_verdict": reversed.as_ref().map(to_value),
                }),
            ))
        }
        Command::Balanced { a, b, s, r_a, r_b } => {
            let a = load_matrix(&a)?;
            let b = load_matrix(&b)?;
            let s = load_matrix(&s)?;
            let r_a = load_matrix(&r_a)?;
            let r_b = load_matrix(&r_b)?;
            match balanced_to_unital_se(&a, &b, &s, &r_a, &r_b) {
                Ok((cert, verdict)) => Ok((
                    EXIT_YES,
                    json!({
                        "command": "balanced",
                        "valid": true,
                        "certificate": to_value(&cert),
                        "verdict": to_value(&verdict),
                    }),
                )),
                Err(e) => Ok((
                    EXIT_NO,
                    json!({
                        "command": "balanced",
                        "valid": false,
                        "failure": e.to_string(),
                    }),
                )),
            }
        }
        Command::BoylePse { certificate } => {
            let cert = load_certificate(&certificate)?;
            let (a, b) = (cert.a.clone(), cert.b.clone());
            let report =
                boyle_pse_identity(&a, &b, &cert).map_err(|e| CommandError::Data(e.to_string()))?;
            let code = if report.holds { EXIT_YES } else { EXIT_NO };
            Ok((
                code,
                json!({
                    "command": "boyle-pse",
                    "report": to_value(&report),
                }),
            ))
        }
        Command::SlPlus { input } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| CommandError::Data(format!("{}: {e}", input.display())))?;
            let spec: SlPlusInput = serde_json::from_str(&text)
                .map_err(|e| CommandError::Data(format!("{}: {e}", input.display())))?;
            let n = spec.ma.rows();
            let blocks = spec.blocks.clone().unwrap_or_else(|| vec![n]);
            let zero = vec![Int::from(0); n];
            let v_a = spec.v_a.clone().map(|r| r.0).unwrap_or_else(|| zero.clone());
            let v_b = spec.v_b.clone().map(|r| r.0).unwrap_or(zero);
            let ok = sft_core::se::verify_sl_plus(
                &spec.u, &spec.v, &spec.ma, &spec.mb, &v_a, &v_b, &blocks,
            )
            .map_err(|e| CommandError::Data(e.to_string()))?;
            Ok((
                if ok { EXIT_YES } else { EXIT_NO },
                json!({
                    "command": "sl-plus",
                    "equivalent": ok,
                }),
            ))
        }
        Command::CanonicalForm { matrix } => {
            let m = load_matrix(&matrix)?;
            let report = is_canonical_form(&m).map_err(|e| CommandError::Data(e.to_string()))?;
            let code = if report.canonical { EXIT_YES } else { EXIT_NO };
            Ok((
                code,
                json!({
                    "command": "canonical-form",
                    "report": to_value(&report),
                }),
            ))
        }
        Command::SearchPath { a, b, limits } => {
            let a = load_matrix(&a)?;
            let b = load_matrix(&b)?;
            let limits = SearchLimits {
                max_matrix_size: limits.max_size,
                max_depth: limits.max_depth,
                max_entry: Int::from(limits.max_entry),
                max_nodes: limits.max_nodes,
            };
            if !limits.is_valid() {
                return Err(CommandError::Data(
                    "all search bounds must be positive".into(),
                ));
            }
            let found = search_balanced_path(&a, &b, &limits)
                .map_err(|e| CommandError::Data(e.to_string()))?;
            match found {
                Some(seq) => Ok((
                    EXIT_YES,
                    json!({
                        "command": "search-path",
                        "found": true,
                        "path": to_value(&seq),
                    }),
                )),
                // exhaustion is inconclusive, never a "no"
                None => Ok((
                    EXIT_INCONCLUSIVE,
                    json!({
                        "command": "search-path",
                        "found": false,
                        "limits": to_value(&limits),
                    }),
                )),
            }
        }
        Command::Corpus { verify } => {
            if !verify {
                let entries: Vec<_> = corpus::corpus()
                    .iter()
                    .map(|e| {
                        json!({
                            "name": e.name,
                            "description": e.description,
                            "matrices": e.matrices.iter().map(|(n, _)| n).collect::<Vec<_>>(),
                            "certificates": e.certificates.iter().map(|(n, _)| n).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                return Ok((EXIT_YES, json!({ "command": "corpus", "entries": entries })));
            }
            let results = corpus::verify_corpus();
            let failed: Vec<_> = results.iter().filter(|r| !r.pass).collect();
            let code = if failed.is_empty() { EXIT_YES } else { EXIT_NO };
            Ok((
                code,
                json!({
                    "command": "corpus",
                    "checks": results.len(),
                    "failures": failed.len(),
                    "results": to_value(&results),
                }),
            ))
        }
    }
}

#[derive(serde::Deserialize)]
struct SlPlusInput {
    #[serde(rename = "U")]
    u: IntMatrix,
    #[serde(rename = "V")]
    v: IntMatrix,
    #[serde(rename = "MA")]
    ma: IntMatrix,
    #[serde(rename = "MB")]
    mb: IntMatrix,
    #[serde(rename = "vA", default)]
    v_a: Option<IntRow>,
    #[serde(rename = "vB", default)]
    v_b: Option<IntRow>,
    #[serde(default)]
    blocks: Option<Vec<usize>>,
}

/// A plain row vector of integers in JSON.
#[derive(Clone)]
struct IntRow(Vec<Int>);

impl<'de> serde::Deserialize<'de> for IntRow {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        sft_core::matrix::int_vec_serde::deserialize(deserializer).map(IntRow)
    }
}
