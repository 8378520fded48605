//! Serializable views of core results.

use qitx_core::linalg::RealMatrix4;
use qitx_core::measures::{ConcurrenceResult, DiscordResult, Side};
use qitx_core::protocol::{OutcomeRecord, OutcomeStatus, RankDeficiency, RankReport, TransmissionRecord};
use qitx_core::states::{CorrelationMatrix, MixtureTerm};
use qitx_core::tomography::TomographyEstimate;
use serde::Serialize;

use crate::output::Metadata;

#[derive(Debug, Serialize)]
pub struct MixtureTermView {
    pub singular_value: f64,
    pub weight: f64,
    pub a: [f64; 4],
    pub b: [f64; 4],
    pub alpha_a: Option<[f64; 4]>,
    pub alpha_b: Option<[f64; 4]>,
    pub physical_a: Option<bool>,
    pub physical_b: Option<bool>,
}

impl From<&MixtureTerm> for MixtureTermView {
    fn from(t: &MixtureTerm) -> Self {
        MixtureTermView {
            singular_value: t.singular_value,
            weight: t.weight,
            a: t.a,
            b: t.b,
            alpha_a: t.factors.map(|f| f.alpha_a),
            alpha_b: t.factors.map(|f| f.alpha_b),
            physical_a: t.factors.map(|f| f.physical_a),
            physical_b: t.factors.map(|f| f.physical_b),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RankView {
    pub rank: usize,
    pub affine_dim: usize,
    /// Shape of the set of Bob's collapsed states.
    pub geometry: &'static str,
    pub singular_values: [f64; 4],
    pub pseudo_mixture_weight_sum: f64,
    pub pseudo_mixture: Vec<MixtureTermView>,
}

pub fn geometry(affine_dim: usize) -> &'static str {
    match affine_dim {
        0 => "point",
        1 => "line",
        2 => "plane",
        _ => "solid",
    }
}

impl From<&RankReport> for RankView {
    fn from(r: &RankReport) -> Self {
        RankView {
            rank: r.rank,
            affine_dim: r.affine_dim,
            geometry: geometry(r.affine_dim),
            singular_values: r.singular_values,
            pseudo_mixture_weight_sum: r.mixture.weight_sum(),
            pseudo_mixture: r.mixture.terms.iter().map(MixtureTermView::from).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DeficiencyView {
    pub det_t: f64,
    pub least_squares: Option<[f64; 3]>,
    pub pure_candidates: Vec<[f64; 3]>,
}

impl From<&RankDeficiency> for DeficiencyView {
    fn from(d: &RankDeficiency) -> Self {
        DeficiencyView { det_t: d.det_t, least_squares: d.least_squares, pure_candidates: d.pure_candidates.clone() }
    }
}

#[derive(Debug, Serialize)]
pub struct OutcomeView {
    pub outcome: String,
    pub probability: f64,
    pub status: &'static str,
    pub s: Option<[f64; 3]>,
    pub reconstruction: Option<[f64; 3]>,
    pub error: Option<f64>,
    pub cond: Option<f64>,
    pub relative_cond: Option<f64>,
    pub det_t: Option<f64>,
    pub det_identity: Option<f64>,
    pub deficiency: Option<DeficiencyView>,
    pub message: Option<String>,
}

impl OutcomeView {
    fn new(o: &OutcomeRecord, input: &[f64; 3]) -> Self {
        let mut view = OutcomeView {
            outcome: o.outcome.to_string(),
            probability: o.probability,
            status: "",
            s: o.collapse.as_ref().map(|c| c.s),
            reconstruction: None,
            error: None,
            cond: None,
            relative_cond: None,
            det_t: o.det_t,
            det_identity: o.det_identity,
            deficiency: None,
            message: None,
        };
        match &o.status {
            OutcomeStatus::Reconstructed(r) => {
                view.status = "reconstructed";
                view.reconstruction = Some(r.bloch);
                view.error = Some(distance(&r.bloch, input));
                view.cond = Some(r.cond);
                view.relative_cond = Some(r.relative_cond);
            }
            OutcomeStatus::RankDeficient(d) => {
                view.status = "rank_deficient";
                view.deficiency = Some(DeficiencyView::from(d.as_ref()));
            }
            OutcomeStatus::Skipped { .. } => {
                view.status = "skipped";
                view.message = Some("outcome has zero probability".to_owned());
            }
            OutcomeStatus::Failed(e) => {
                view.status = "failed";
                view.message = Some(e.to_string());
            }
        }
        view
    }
}

pub fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Serialize)]
pub struct TransmitReport {
    pub metadata: Metadata,
    pub input: [f64; 4],
    pub channel: RealMatrix4,
    pub security_form: bool,
    /// Set when the channel cannot reconstruct every input uniquely.
    pub degraded: bool,
    pub rank: RankView,
    pub det_r: f64,
    pub det_r_block: f64,
    /// `max |D·det(T) + det(R)|` over outcomes.
    pub det_identity_residual: f64,
    /// The same residual with the 3×3 block determinant in place of `det(R)`.
    pub det_block_residual: f64,
    pub probability_sum: f64,
    pub max_error: Option<f64>,
    pub outcomes: Vec<OutcomeView>,
}

impl TransmitReport {
    pub fn new(metadata: Metadata, rec: &TransmissionRecord) -> Self {
        let input = rec.input.bloch();
        TransmitReport {
            metadata,
            input: rec.input.coeffs(),
            channel: *rec.channel.entries(),
            security_form: rec.channel.is_security_form(),
            degraded: !rec.all_reconstructed(),
            rank: RankView::from(&rec.rank),
            det_r: rec.det_r,
            det_r_block: rec.det_r_block,
            det_identity_residual: rec.det_identity_residual(),
            det_block_residual: rec.det_block_residual(),
            probability_sum: rec.probability_sum(),
            max_error: rec.max_error(),
            outcomes: rec.outcomes.iter().map(|o| OutcomeView::new(o, &input)).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Serialize)]
pub struct DiscordReport {
    pub metadata: Metadata,
    pub measured_side: String,
    pub discord: f64,
    pub classical_correlation: f64,
    pub mutual_information: f64,
    pub optimal_measurement: Angles,
    pub optimizer_evals: usize,
    pub concurrence: f64,
    pub spin_flip_eigs: [f64; 4],
}

impl DiscordReport {
    pub fn new(metadata: Metadata, side: Side, d: &DiscordResult, c: &ConcurrenceResult) -> Self {
        DiscordReport {
            metadata,
            measured_side: side.to_string(),
            discord: d.discord,
            classical_correlation: d.classical_correlation,
            mutual_information: d.mutual_information,
            optimal_measurement: Angles { theta: d.optimal_measurement.0, phi: d.optimal_measurement.1 },
            optimizer_evals: d.optimizer_evals,
            concurrence: c.concurrence,
            spin_flip_eigs: c.spin_flip_eigs,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RankCommandReport {
    pub metadata: Metadata,
    pub channel: RealMatrix4,
    pub det_r: f64,
    pub det_r_block: f64,
    #[serde(flatten)]
    pub rank: RankView,
}

#[derive(Debug, Serialize)]
pub struct SecurityReport {
    pub metadata: Metadata,
    pub security_form: bool,
    /// `r_j0`: Alice's local Bloch vector.
    pub local_a: [f64; 3],
    /// `r_0k`: Bob's local Bloch vector.
    pub local_b: [f64; 3],
    pub channel: RealMatrix4,
}

impl SecurityReport {
    pub fn new(metadata: Metadata, r: &CorrelationMatrix) -> Self {
        SecurityReport {
            metadata,
            security_form: r.is_security_form(),
            local_a: r.local_a(),
            local_b: r.local_b(),
            channel: *r.entries(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ShotView {
    pub axis: String,
    pub shots: u64,
    pub plus_counts: u64,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct TomographyReport {
    pub metadata: Metadata,
    pub outcome: String,
    pub probability: f64,
    pub seed: u64,
    pub shots: u64,
    pub records: Vec<ShotView>,
    pub input: [f64; 3],
    pub s_exact: [f64; 3],
    pub s_hat: [f64; 3],
    pub s_stderr: [f64; 3],
    pub unphysical_estimate: bool,
    pub c_hat: [f64; 3],
    pub c_cov: [[f64; 3]; 3],
    pub c_stderr: [f64; 3],
    pub cond: f64,
    pub error: f64,
}

impl TomographyReport {
    pub fn new(metadata: Metadata, input: [f64; 3], shots: u64, est: &TomographyEstimate) -> Self {
        TomographyReport {
            metadata,
            outcome: est.outcome.to_string(),
            probability: est.probability,
            seed: est.seed,
            shots,
            records: est
                .records
                .iter()
                .map(|r| ShotView { axis: r.axis.to_string(), shots: r.shots, plus_counts: r.plus_counts, seed: r.seed })
                .collect(),
            input,
            s_exact: est.s_exact,
            s_hat: est.s_hat,
            s_stderr: est.s_stderr,
            unphysical_estimate: est.unphysical,
            c_hat: est.c_hat,
            c_cov: est.c_cov,
            c_stderr: est.c_stderr(),
            cond: est.cond,
            error: distance(&est.c_hat, &input),
        }
    }
}

/// Emitted instead of a result when the channel cannot support the request.
#[derive(Debug, Serialize)]
pub struct DegradationReport {
    pub metadata: Metadata,
    pub degraded: bool,
    pub reason: String,
    pub rank: RankView,
    pub deficiency: DeficiencyView,
}

impl DegradationReport {
    pub fn new(metadata: Metadata, d: &RankDeficiency) -> Self {
        DegradationReport {
            metadata,
            degraded: true,
            reason: format!("correlation matrix has rank {} < 4; the input is not uniquely recoverable", d.rank.rank),
            rank: RankView::from(&d.rank),
            deficiency: DeficiencyView::from(d),
        }
    }
}
