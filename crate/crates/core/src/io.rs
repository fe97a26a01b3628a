//! Spec files, network serialization, message CSV and run manifests.
//!
//! Specs and manifests are JSON, bulk results are CSV. Every data file is
//! written deterministically: re-running the same spec and seed reproduces
//! the CSV bytes exactly. Only the manifest carries wall-clock information.
//!
//! CSV schemas:
//!
//! | file                  | columns                                          |
//! |-----------------------|--------------------------------------------------|
//! | `table1.csv`          | `n_it,M,trial,connections,added,erased`          |
//! | `table1_summary.csv`  | `n_it,M,trials,connections,added,erased` (means) |
//! | `curve.csv`           | `M,trial,density,probes,errors,error_rate`       |
//! | `trace.csv`           | `iteration,pre,post`                             |
//! | `pmf_signal.csv`, `pmf_silent.csv` | `value,probability`                 |
//! | completions           | one row per probe, `c` columns, `ERASED` marks a silent cluster |

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::clique::CliqueNetwork;
use crate::dynamics::{HebbianNetwork, NetworkConfig, WeightMatrix};
use crate::error::{Error, ParamError, Result};
use crate::message::Message;
use crate::noise::{FiringContext, InterferenceModel, NoiseChannel, SynapticModel};

/// Marker for an unknown or silent cluster in message CSV files.
pub const ERASED: &str = "ERASED";

const HEBBIAN_FORMAT: &str = "hebbclique.hebbian";
const CLIQUE_FORMAT: &str = "hebbclique.clique";
const FORMAT_VERSION: u32 = 1;

/// Why a spec file was rejected. Each kind maps to a distinct diagnostic.
#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: malformed JSON: {message}", path.display())]
    Syntax {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}:{line}: missing field `{field}`", path.display())]
    MissingField {
        path: PathBuf,
        line: usize,
        field: String,
    },
    #[error("{}:{line}: unknown field `{field}`", path.display())]
    UnknownField {
        path: PathBuf,
        line: usize,
        field: String,
    },
    #[error("{}:{line}: value out of range: {message}", path.display())]
    OutOfRange {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}:{line}: inconsistent dimensions: {message}", path.display())]
    Dimension {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}:{line}: invalid value: {message}", path.display())]
    Invalid {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

fn backtick_name(msg: &str) -> String {
    msg.split('`').nth(1).unwrap_or("?").to_string()
}

fn classify(path: &Path, err: serde_json::Error) -> SpecError {
    let path = path.to_path_buf();
    let line = err.line();
    let message = err.to_string();
    // serde_json appends " at line L column C"
    let message = message
        .rsplit_once(" at line ")
        .map_or(message.clone(), |(head, _)| head.to_string());
    if err.is_syntax() || err.is_eof() {
        SpecError::Syntax {
            path,
            line,
            message,
        }
    } else if message.starts_with("missing field") {
        SpecError::MissingField {
            path,
            line,
            field: backtick_name(&message),
        }
    } else if message.starts_with("unknown field") {
        SpecError::UnknownField {
            path,
            line,
            field: backtick_name(&message),
        }
    } else if message.contains(DIMENSION_HINT) || message.contains("positions, expected") {
        SpecError::Dimension {
            path,
            line,
            message,
        }
    } else if message.contains(RANGE_HINT) {
        SpecError::OutOfRange {
            path,
            line,
            message,
        }
    } else {
        SpecError::Invalid {
            path,
            line,
            message,
        }
    }
}

// fragments of the ParamError messages used for classification
const DIMENSION_HINT: &str = "n = c * ell";
const RANGE_HINT: &str = "must lie in";

/// Reads and validates a spec, also returning the raw JSON (for hashing).
pub fn parse_spec<T: DeserializeOwned>(path: &Path) -> Result<(T, serde_json::Value), SpecError> {
    let text = fs::read_to_string(path).map_err(|source| SpecError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed: T = serde_json::from_str(&text).map_err(|e| classify(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| classify(path, e))?;
    Ok((parsed, value))
}

/// Like [`parse_spec`] for files holding either one object or an array.
pub fn parse_spec_list<T: DeserializeOwned>(
    path: &Path,
) -> Result<(Vec<T>, serde_json::Value), SpecError> {
    let text = fs::read_to_string(path).map_err(|source| SpecError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed = if text.trim_start().starts_with('[') {
        serde_json::from_str::<Vec<T>>(&text)
    } else {
        serde_json::from_str::<T>(&text).map(|one| vec![one])
    }
    .map_err(|e| classify(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| classify(path, e))?;
    Ok((parsed, value))
}

/// Parameters of the noise reduction, as one flat JSON object.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNoiseParams", into = "RawNoiseParams")]
pub struct NoiseParams {
    pub synaptic: SynapticModel,
    pub interference: InterferenceModel,
    pub firing: FiringContext,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoiseParams {
    n_syn: u32,
    p_rel: f64,
    n_ex: u32,
    n_in: u32,
    f_ext: f64,
    t_int: f64,
    sigma: f64,
    n_inputs: u32,
}

impl TryFrom<RawNoiseParams> for NoiseParams {
    type Error = ParamError;
    fn try_from(r: RawNoiseParams) -> Result<Self, ParamError> {
        Ok(NoiseParams {
            synaptic: SynapticModel::new(r.n_syn, r.p_rel)?,
            interference: InterferenceModel::new(r.n_ex, r.n_in, r.f_ext, r.t_int)?,
            firing: FiringContext::new(r.sigma, r.n_inputs)?,
        })
    }
}

impl From<NoiseParams> for RawNoiseParams {
    fn from(p: NoiseParams) -> Self {
        RawNoiseParams {
            n_syn: p.synaptic.n_syn(),
            p_rel: p.synaptic.p_rel(),
            n_ex: p.interference.n_ex(),
            n_in: p.interference.n_in(),
            f_ext: p.interference.f_ext(),
            t_int: p.interference.t_int(),
            sigma: p.firing.sigma(),
            n_inputs: p.firing.n_inputs(),
        }
    }
}

/// Settings for learning a message file into a Hebbian network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnSpec {
    pub config: NetworkConfig,
    pub channel: NoiseChannel,
    pub n_it: usize,
    #[serde(default)]
    pub seed: u64,
}

/// SHA-256 of the canonical (sorted-key, compact) JSON of a spec.
pub fn spec_hash(value: &serde_json::Value) -> String {
    // serde_json's default map is ordered by key, so this is canonical
    let canonical = serde_json::to_string(value).expect("JSON values serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Serialize, Deserialize)]
struct HebbianFile {
    format: String,
    version: u32,
    config: NetworkConfig,
    consolidated: Vec<(usize, usize)>,
    transient: Vec<(usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct CliqueFile {
    format: String,
    version: u32,
    c: usize,
    ell: usize,
    edges: Vec<(usize, usize)>,
}

fn check_header(found: &str, version: u32, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Format(format!(
            "expected a `{expected}` file, found `{found}`"
        )));
    }
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported {expected} version {version}"
        )));
    }
    Ok(())
}

pub fn hebbian_to_json(net: &HebbianNetwork) -> String {
    let file = HebbianFile {
        format: HEBBIAN_FORMAT.into(),
        version: FORMAT_VERSION,
        config: net.config().clone(),
        consolidated: net.weights().consolidated_edges(),
        transient: net.weights().transient_entries(),
    };
    serde_json::to_string(&file).expect("network serializes")
}

pub fn hebbian_from_json(text: &str) -> Result<HebbianNetwork> {
    let file: HebbianFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("network file: {e}")))?;
    check_header(&file.format, file.version, HEBBIAN_FORMAT)?;
    let weights = WeightMatrix::from_parts(
        file.config.n,
        file.config.self_loops,
        &file.consolidated,
        &file.transient,
    )?;
    HebbianNetwork::from_parts(file.config, weights)
}

pub fn clique_to_json(net: &CliqueNetwork) -> String {
    let file = CliqueFile {
        format: CLIQUE_FORMAT.into(),
        version: FORMAT_VERSION,
        c: net.clusters(),
        ell: net.cluster_size(),
        edges: net.edges(),
    };
    serde_json::to_string(&file).expect("network serializes")
}

pub fn clique_from_json(text: &str) -> Result<CliqueNetwork> {
    let file: CliqueFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("network file: {e}")))?;
    check_header(&file.format, file.version, CLIQUE_FORMAT)?;
    CliqueNetwork::from_edges(file.c, file.ell, &file.edges)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads messages, one per row, `c` columns each. Empty fields and
/// `ERASED` mark unknown positions.
pub fn read_messages(path: &Path, c: usize, ell: usize) -> Result<Vec<Message>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let at = |msg: String| Error::Format(format!("{}:{}: {msg}", path.display(), row + 1));
        if record.len() != c {
            return Err(at(format!("{} columns, expected {c}", record.len())));
        }
        let units = record
            .iter()
            .map(|field| {
                if field.is_empty() || field == ERASED {
                    Ok(None)
                } else {
                    field
                        .parse::<usize>()
                        .map(Some)
                        .map_err(|_| at(format!("`{field}` is not a unit index")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Message::new(units, ell).map_err(|e| at(e.to_string()))?);
    }
    Ok(out)
}

pub fn messages_to_csv(messages: &[Message]) -> String {
    let mut out = String::new();
    for msg in messages {
        let fields: Vec<String> = msg
            .units()
            .iter()
            .map(|u| u.map_or_else(|| ERASED.to_string(), |v| v.to_string()))
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Renders rows as CSV with a header line, even when there are no rows.
pub fn csv_string<T: Serialize>(header: &[&str], rows: &[T]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Format(format!("csv: {e}"));
    writer.write_record(header).map_err(csv_err)?;
    for row in rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Format(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// What a run produced and under which inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub spec_hash: String,
    pub master_seed: u64,
    pub threads: usize,
    pub started_at: String,
    pub finished_at: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

/// Collects output files of one run and writes `manifest.json` last.
pub struct RunRecorder {
    out_dir: PathBuf,
    subcommand: String,
    spec_hash: String,
    master_seed: u64,
    started_at: String,
    clock: Instant,
    outputs: Vec<String>,
}

impl RunRecorder {
    pub fn start(
        out_dir: &Path,
        subcommand: &str,
        spec: &serde_json::Value,
        master_seed: u64,
    ) -> Result<Self> {
        fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            subcommand: subcommand.to_string(),
            spec_hash: spec_hash(spec),
            master_seed,
            started_at: chrono::Utc::now().to_rfc3339(),
            clock: Instant::now(),
            outputs: Vec::new(),
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        write_text(&path, contents)?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn write_csv<T: Serialize>(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[T],
    ) -> Result<PathBuf> {
        let text = csv_string(header, rows)?;
        self.write(name, &text)
    }

    pub fn finish(self) -> Result<RunManifest> {
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: self.subcommand,
            spec_hash: self.spec_hash,
            master_seed: self.master_seed,
            threads: rayon::current_num_threads(),
            started_at: self.started_at,
            finished_at: chrono::Utc::now().to_rfc3339(),
            wall_time_seconds: self.clock.elapsed().as_secs_f64(),
            outputs: self.outputs,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        write_text(&self.out_dir.join("manifest.json"), &text)?;
        Ok(manifest)
    }
}

pub const TABLE1_HEADER: [&str; 6] = ["n_it", "M", "trial", "connections", "added", "erased"];
pub const TABLE1_SUMMARY_HEADER: [&str; 6] =
    ["n_it", "M", "trials", "connections", "added", "erased"];
pub const CURVE_HEADER: [&str; 6] = ["M", "trial", "density", "probes", "errors", "error_rate"];
pub const TRACE_HEADER: [&str; 3] = ["iteration", "pre", "post"];
pub const PMF_HEADER: [&str; 2] = ["value", "probability"];
