use std::collections::BTreeMap;
use std::path::Path;

use qitx_core::measures::{concurrence, discord, Side};
use qitx_core::protocol::{rank_classify, transmit, BellOutcome, OutcomeStatus, TransmissionRecord};
use qitx_core::states::{correlation_from_channel, to_bloch, werner, DensityState, PauliVector};
use qitx_core::tomography::{remote_tomography, GENERATOR};
use qitx_core::Error as CoreError;
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{ChannelArgs, Command, DiscordArgs, Format, SweepArgs, TomographyArgs, TransmitArgs};
use crate::error::CliError;
use crate::input::{load_channel, load_qubit};
use crate::output::{emit, number, to_json, write_csv, Metadata};
use crate::report::{
    DegradationReport, DiscordReport, RankCommandReport, RankView, SecurityReport, TomographyReport, TransmitReport,
};

/// Default input for the sweep's reconstruction column.
pub const SWEEP_INPUT: [f64; 3] = [0.3, -0.2, 0.4];

/// Largest deviation from 1/4 still counted as an equal outcome probability.
pub const EQUAL_PROB_TOL: f64 = 1e-10;

pub fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Transmit(a) => cmd_transmit(a),
        Command::SweepWerner(a) => cmd_sweep_werner(a),
        Command::Discord(a) => cmd_discord(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Security(a) => cmd_security(a),
        Command::Tomography(a) => cmd_tomography(a),
    }
}

fn args<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

fn path_arg(p: &Path) -> String {
    p.display().to_string()
}

fn format_name(f: Format) -> String {
    match f {
        Format::Json => "json".to_owned(),
        Format::Csv => "csv".to_owned(),
    }
}

fn require_out(out: Option<&Path>) -> Result<&Path, CliError> {
    out.ok_or_else(|| CliError::Input("--format csv needs --out".to_owned()))
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_owned(), number)
}

pub fn cmd_transmit(a: &TransmitArgs) -> Result<(), CliError> {
    let rho_c = load_qubit(&a.input_c)?;
    let rho_ab = load_channel(&a.channel)?;
    let rec = transmit(&rho_c, &rho_ab).map_err(|e| CliError::validation("transmit", e))?;
    let meta = Metadata::new(
        "transmit",
        args([
            ("input_c", path_arg(&a.input_c)),
            ("channel", path_arg(&a.channel)),
            ("format", format_name(a.format)),
        ]),
    );
    let report = TransmitReport::new(meta, &rec);
    match a.format {
        Format::Json => emit(a.out.as_deref(), &to_json(&report)?),
        Format::Csv => {
            let out = require_out(a.out.as_deref())?;
            let header = [
                "outcome", "probability", "status", "s1", "s2", "s3", "c1", "c2", "c3", "error", "cond", "det_t",
                "det_identity",
            ];
            let rows: Vec<Vec<String>> = report
                .outcomes
                .iter()
                .map(|o| {
                    let s = o.s.map(|v| v.map(Some)).unwrap_or([None; 3]);
                    let c = o.reconstruction.map(|v| v.map(Some)).unwrap_or([None; 3]);
                    vec![
                        o.outcome.clone(),
                        number(o.probability),
                        o.status.to_owned(),
                        cell(s[0]),
                        cell(s[1]),
                        cell(s[2]),
                        cell(c[0]),
                        cell(c[1]),
                        cell(c[2]),
                        cell(o.error),
                        cell(o.cond),
                        cell(o.det_t),
                        cell(o.det_identity),
                    ]
                })
                .collect();
            write_csv(out, &header, &rows, &report.metadata)
        }
    }
}

/// One row of the Werner sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub rank: usize,
    pub discord: f64,
    pub concurrence: f64,
    /// Largest reconstruction error over the four outcomes; `None` when
    /// some outcome cannot be reconstructed.
    pub reconstruction_error: Option<f64>,
    /// Largest `1/σ_min(T)` over the four outcomes.
    pub cond: Option<f64>,
    pub equal_prob_flag: bool,
}

fn worst_cond(rec: &TransmissionRecord) -> Option<f64> {
    if !rec.all_reconstructed() {
        return None;
    }
    rec.reconstructions().map(|(_, r)| r.cond).reduce(f64::max)
}

fn equal_probabilities(rec: &TransmissionRecord) -> bool {
    rec.channel.is_security_form()
        && rec.outcomes.iter().all(|o| {
            (o.probability - 0.25).abs() <= EQUAL_PROB_TOL && !matches!(o.status, OutcomeStatus::Skipped { .. })
        })
}

pub fn sweep_row(x: f64, input: &DensityState) -> Result<SweepRow, CoreError> {
    let rho = werner(x)?;
    let rec = transmit(input, &rho)?;
    let error = if rec.all_reconstructed() { rec.max_error() } else { None };
    Ok(SweepRow {
        x,
        rank: rec.rank.rank,
        discord: discord(&rho, Side::A)?.discord,
        concurrence: concurrence(&rho)?.concurrence,
        reconstruction_error: error,
        cond: worst_cond(&rec),
        equal_prob_flag: equal_probabilities(&rec),
    })
}

/// Evenly spaced grid with exact endpoints.
pub fn grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { stop } else { start + (stop - start) * i as f64 / last })
        .collect()
}

#[derive(Debug, Serialize)]
struct SweepReport<'a> {
    metadata: &'a Metadata,
    input: [f64; 3],
    rows: &'a [SweepRow],
}

pub fn cmd_sweep_werner(a: &SweepArgs) -> Result<(), CliError> {
    if a.points < 2 {
        return Err(CliError::Input(format!("--points must be at least 2, got {}", a.points)));
    }
    for (name, v) in [("--start", a.start), ("--stop", a.stop)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::Physics(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    let input = match &a.input_c {
        Some(p) => load_qubit(p)?,
        None => PauliVector::from_bloch(SWEEP_INPUT).map_err(|e| CliError::internal("sweep input", e))?.to_state(),
    };
    let c = to_bloch(&input).map_err(|e| CliError::internal("sweep input", e))?.bloch();
    let xs = grid(a.start, a.stop, a.points);
    let rows: Vec<SweepRow> = xs
        .par_iter()
        .map(|&x| sweep_row(x, &input))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::validation("sweep", e))?;

    let meta = Metadata::new(
        "sweep-werner",
        args([
            ("points", a.points.to_string()),
            ("start", number(a.start)),
            ("stop", number(a.stop)),
            ("input_c", a.input_c.as_deref().map_or_else(|| "default".to_owned(), path_arg)),
            ("format", format_name(a.format)),
        ]),
    );
    match a.format {
        Format::Json => emit(Some(&a.out), &to_json(&SweepReport { metadata: &meta, input: c, rows: &rows })?),
        Format::Csv => {
            let header = ["x", "rank", "discord", "concurrence", "reconstruction_error", "cond", "equal_prob_flag"];
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        number(r.x),
                        r.rank.to_string(),
                        number(r.discord),
                        number(r.concurrence),
                        cell(r.reconstruction_error),
                        cell(r.cond),
                        r.equal_prob_flag.to_string(),
                    ]
                })
                .collect();
            write_csv(&a.out, &header, &body, &meta)
        }
    }
}

pub fn cmd_discord(a: &DiscordArgs) -> Result<(), CliError> {
    let rho = load_channel(&a.channel)?;
    let side = Side::from(a.side);
    let d = discord(&rho, side).map_err(|e| CliError::validation("discord", e))?;
    let c = concurrence(&rho).map_err(|e| CliError::validation("concurrence", e))?;
    let meta = Metadata::new("discord", args([("channel", path_arg(&a.channel)), ("side", side.to_string())]));
    emit(a.out.as_deref(), &to_json(&DiscordReport::new(meta, side, &d, &c))?)
}

pub fn cmd_rank(a: &ChannelArgs) -> Result<(), CliError> {
    let rho = load_channel(&a.channel)?;
    let r = correlation_from_channel(&rho).map_err(|e| CliError::validation("rank", e))?;
    let report = RankCommandReport {
        metadata: Metadata::new("rank", args([("channel", path_arg(&a.channel))])),
        channel: *r.entries(),
        det_r: r.det(),
        det_r_block: qitx_core::linalg::det(&r.block()),
        rank: RankView::from(&rank_classify(&r)),
    };
    emit(a.out.as_deref(), &to_json(&report)?)
}

pub fn cmd_security(a: &ChannelArgs) -> Result<(), CliError> {
    let rho = load_channel(&a.channel)?;
    let r = correlation_from_channel(&rho).map_err(|e| CliError::validation("security", e))?;
    let meta = Metadata::new("security", args([("channel", path_arg(&a.channel))]));
    emit(a.out.as_deref(), &to_json(&SecurityReport::new(meta, &r))?)
}

pub fn cmd_tomography(a: &TomographyArgs) -> Result<(), CliError> {
    let outcome: BellOutcome =
        a.outcome.parse().map_err(|e| CliError::Input(format!("--outcome {:?}: {e}", a.outcome)))?;
    let rho_c = load_qubit(&a.input_c)?;
    let rho_ab = load_channel(&a.channel)?;
    let meta = Metadata::new(
        "tomography",
        args([
            ("input_c", path_arg(&a.input_c)),
            ("channel", path_arg(&a.channel)),
            ("shots", a.shots.to_string()),
            ("seed", a.seed.to_string()),
            ("outcome", outcome.to_string()),
        ]),
    )
    .with_seed(a.seed, GENERATOR);
    let text = match remote_tomography(&rho_c, &rho_ab, outcome, a.shots, a.seed) {
        Ok(est) => {
            let c = to_bloch(&rho_c).map_err(|e| CliError::internal("input", e))?.bloch();
            to_json(&TomographyReport::new(meta, c, a.shots, &est))?
        }
        Err(CoreError::RankDeficient(d)) => to_json(&DegradationReport::new(meta, &d))?,
        Err(CoreError::InvalidParameter { name: "shots", value }) => {
            return Err(CliError::Input(format!("--shots must be at least 3, got {value}")));
        }
        Err(e) => return Err(CliError::validation("tomography", e)),
    };
    emit(a.out.as_deref(), &text)
}
