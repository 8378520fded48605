//! JSON state files.
//!
//! ```json
//! {"kind": "pauli", "c": [1, 0.3, -0.2, 0.4]}
//! {"kind": "correlation", "r": [[1, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, -0.5, 0], [0, 0, 0, 0.5]]}
//! {"kind": "dense", "re": [[0.5, 0], [0, 0.5]], "im": [[0, 0], [0, 0]]}
//! {"kind": "werner", "x": 0.25}
//! ```

use std::fs;
use std::path::Path;

use qitx_core::linalg::ComplexMatrix;
use qitx_core::states::{channel_from_correlation, werner, CorrelationMatrix, DensityState, PauliVector};
use qitx_core::{tol, Complex64};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Pauli { c: Vec<f64> },
    Correlation { r: Vec<Vec<f64>> },
    Dense { re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
    Werner { x: f64 },
}

impl StateSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StateSpec::Pauli { .. } => "pauli",
            StateSpec::Correlation { .. } => "correlation",
            StateSpec::Dense { .. } => "dense",
            StateSpec::Werner { .. } => "werner",
        }
    }

    /// Builds and validates the density matrix.
    pub fn to_state(&self, what: &str) -> Result<DensityState, CliError> {
        match self {
            StateSpec::Pauli { c } => {
                let c = fixed::<_, 4>(c, &format!("{what}: field `c`"))?;
                if (c[0] - 1.0).abs() > tol::HERM {
                    return Err(CliError::Physics(format!("{what}: c[0] must be 1 (unit trace), got {}", c[0])));
                }
                let p = PauliVector::new(c[1], c[2], c[3]).map_err(|e| CliError::validation(what, e))?;
                Ok(p.to_state())
            }
            StateSpec::Correlation { r } => {
                let rows: Vec<[f64; 4]> = r
                    .iter()
                    .enumerate()
                    .map(|(i, row)| fixed::<_, 4>(row, &format!("{what}: field `r`, row {i}")))
                    .collect::<Result<_, _>>()?;
                let r = fixed::<_, 4>(&rows, &format!("{what}: field `r`"))?;
                let r = CorrelationMatrix::new(r).map_err(|e| CliError::validation(what, e))?;
                channel_from_correlation(&r).map_err(|e| CliError::validation(what, e))
            }
            StateSpec::Dense { re, im } => {
                let n = re.len();
                if !matches!(n, 2 | 4) {
                    return Err(CliError::Input(format!("{what}: field `re` must be 2x2 or 4x4, got {n} rows")));
                }
                if im.len() != n {
                    return Err(CliError::Input(format!("{what}: field `im` has {} rows, `re` has {n}", im.len())));
                }
                for (name, m) in [("re", re), ("im", im)] {
                    if let Some((i, row)) = m.iter().enumerate().find(|(_, row)| row.len() != n) {
                        return Err(CliError::Input(format!(
                            "{what}: field `{name}`, row {i} has {} entries, expected {n}",
                            row.len()
                        )));
                    }
                }
                let m = ComplexMatrix::from_fn(n, |i, j| Complex64::new(re[i][j], im[i][j]))
                    .map_err(|e| CliError::validation(what, e))?;
                DensityState::new(m).map_err(|e| CliError::validation(what, e))
            }
            StateSpec::Werner { x } => werner(*x).map_err(|e| CliError::validation(what, e)),
        }
    }
}

fn fixed<T: Copy, const N: usize>(v: &[T], what: &str) -> Result<[T; N], CliError> {
    <[T; N]>::try_from(v).map_err(|_| CliError::Input(format!("{what} must have {N} entries, got {}", v.len())))
}

pub fn parse_spec(text: &str, what: &str) -> Result<StateSpec, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

pub fn read_spec(path: &Path) -> Result<StateSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_spec(&text, &path.display().to_string())
}

/// Loads a one-qubit state.
pub fn load_qubit(path: &Path) -> Result<DensityState, CliError> {
    load(path, 1)
}

/// Loads a two-qubit channel.
pub fn load_channel(path: &Path) -> Result<DensityState, CliError> {
    load(path, 2)
}

fn load(path: &Path, qubits: usize) -> Result<DensityState, CliError> {
    let what = path.display().to_string();
    let spec = read_spec(path)?;
    let allowed = match qubits {
        1 => matches!(spec, StateSpec::Pauli { .. } | StateSpec::Dense { .. }),
        _ => !matches!(spec, StateSpec::Pauli { .. }),
    };
    if !allowed {
        return Err(CliError::Input(format!("{what}: kind `{}` does not describe a {qubits}-qubit state", spec.kind())));
    }
    let state = spec.to_state(&what)?;
    if state.qubits() != qubits {
        return Err(CliError::Input(format!("{what}: expected {qubits} qubit(s), got {}", state.qubits())));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(text: &str) -> u8 {
        match parse_spec(text, "t").and_then(|s| s.to_state("t")) {
            Ok(_) => 0,
            Err(e) => e.code(),
        }
    }

    #[test]
    fn all_kinds_parse() {
        assert_eq!(code(r#"{"kind": "pauli", "c": [1, 0.1, 0.2, 0.3]}"#), 0);
        assert_eq!(code(r#"{"kind": "werner", "x": 0.25}"#), 0);
        assert_eq!(code(r#"{"kind": "dense", "re": [[0.5, 0], [0, 0.5]], "im": [[0, 0], [0, 0]]}"#), 0);
        assert_eq!(
            code(r#"{"kind": "correlation", "r": [[1,0,0,0],[0,0.5,0,0],[0,0,-0.5,0],[0,0,0,0.5]]}"#),
            0
        );
    }

    #[test]
    fn schema_problems_are_input_errors() {
        assert_eq!(code(r#"{"kind": "pauli", "c": [1, 0.1, 0.2]}"#), 2);
        assert_eq!(code(r#"{"kind": "qutrit", "c": [1]}"#), 2);
        assert_eq!(code(r#"{"kind": "werner", "x": 0.25, "extra": 1}"#), 2);
        assert_eq!(code(r#"{"kind": "werner", "x": 0.25"#), 2);
        assert_eq!(code(r#"{"kind": "dense", "re": [[1]], "im": [[0]]}"#), 2);
    }

    #[test]
    fn physics_problems_are_validation_errors() {
        assert_eq!(code(r#"{"kind": "pauli", "c": [1, 0.9, 0.9, 0.0]}"#), 3);
        assert_eq!(code(r#"{"kind": "pauli", "c": [2, 0.0, 0.0, 0.0]}"#), 3);
        assert_eq!(code(r#"{"kind": "werner", "x": 1.5}"#), 3);
        assert_eq!(code(r#"{"kind": "dense", "re": [[0.5, 0.6], [0.6, 0.5]], "im": [[0, 0], [0, 0]]}"#), 3);
        assert_eq!(
            code(r#"{"kind": "correlation", "r": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#),
            3
        );
    }

    #[test]
    fn syntax_errors_carry_a_line_number() {
        let err = parse_spec("{\n\"kind\": \"werner\",\n\"x\": }", "t").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
