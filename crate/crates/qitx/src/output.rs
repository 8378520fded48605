//! Serialization: JSON with 17 significant digits, CSV with a metadata
//! sidecar.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use qitx_core::measures::{GRID_PHI, GRID_THETA, REFINE_EVALS};
use qitx_core::tol;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;

/// Pretty-printed JSON whose floats always carry 17 significant digits, so
/// every `f64` survives a text round trip. Non-finite values become `null`.
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| CliError::internal("serializing output", e))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::internal("serializing output", e))
}

/// The same 17-digit rendering for CSV cells.
pub fn number(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else if value.is_nan() {
        "nan".to_owned()
    } else if value > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

/// Everything needed to rerun a command and get the same bytes back.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub arguments: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub generator: Option<&'static str>,
    pub bell_convention: &'static str,
    pub tolerances: Tolerances,
    pub discord_search: DiscordSearch,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub eigen: f64,
    pub svd: f64,
    pub solve: f64,
    pub rank: f64,
    pub psd: f64,
    pub optimizer: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiscordSearch {
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub refine_evals: usize,
}

impl Metadata {
    pub fn new(command: &str, arguments: BTreeMap<String, String>) -> Self {
        Metadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_owned(),
            arguments,
            seed: None,
            generator: None,
            bell_convention: "|b_mn> = (|0,n> + (-1)^m |1,1-n>)/sqrt(2); qubit order C, A, B",
            tolerances: Tolerances {
                hermitian: tol::HERM,
                eigen: tol::EIG,
                svd: tol::SVD,
                solve: tol::SOLVE,
                rank: tol::RANK,
                psd: tol::PSD,
                optimizer: tol::OPT,
            },
            discord_search: DiscordSearch { grid_theta: GRID_THETA, grid_phi: GRID_PHI, refine_evals: REFINE_EVALS },
        }
    }

    pub fn with_seed(mut self, seed: u64, generator: &'static str) -> Self {
        self.seed = Some(seed);
        self.generator = Some(generator);
        self
    }
}

/// Writes to `path`, or stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::internal(&p.display().to_string(), e)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::internal("stdout", e)),
    }
}

/// `<out>.meta.json` next to a CSV file.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes `rows` under `header` as CSV, plus the metadata sidecar.
pub fn write_csv(out: &Path, header: &[&str], rows: &[Vec<String>], meta: &Metadata) -> Result<(), CliError> {
    let ctx = out.display().to_string();
    let mut w = csv::Writer::from_path(out).map_err(|e| CliError::internal(&ctx, e))?;
    w.write_record(header).map_err(|e| CliError::internal(&ctx, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| CliError::internal(&ctx, e))?;
    }
    w.flush().map_err(|e| CliError::internal(&ctx, e))?;
    emit(Some(&sidecar_path(out)), &to_json(meta)?)
}
