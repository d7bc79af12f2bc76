//! State files.
//!
//! ```json
//! {"probs": [0.5, 0.5],
//!  "eve_states": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
//!                 [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]}
//! ```
//!
//! Each Eve state is a list of rows; an entry is `[re, im]` or a bare real number.
//! `{"preset": "tilted-qubit"}` refers to a built-in state, optionally with `"power": n`.

use std::path::Path;

use qpa_core::state::Preset;
use qpa_core::{CQState, Complex64, HermitianMatrix};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(&self) -> Complex64 {
        match *self {
            Entry::Complex([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    preset: Option<String>,
    power: Option<usize>,
    probs: Option<Vec<f64>>,
    eve_states: Option<Vec<Vec<Vec<Entry>>>>,
}

/// A state with the label used in reports.
#[derive(Debug, Clone)]
pub struct NamedState {
    pub name: String,
    pub state: CQState,
}

fn matrix(index: usize, rows: &[Vec<Entry>]) -> Result<HermitianMatrix, CliError> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(CliError::InvalidState(format!(
            "Eve state {index} is not square: {n} rows but a row of length {}",
            bad.len()
        )));
    }
    HermitianMatrix::from_fn(n, |i, j| rows[i][j].value())
        .map_err(|e| CliError::InvalidState(format!("Eve state {index}: {e}")))
}

/// Parses a state file's contents; `source` labels error messages.
pub fn parse_state(text: &str, source: &str) -> Result<NamedState, CliError> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| {
        CliError::Parse(format!(
            "{source}: malformed state JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let (name, state) = match (file.preset, file.probs, file.eve_states) {
        (Some(p), None, None) => {
            let preset: Preset = p.parse()?;
            (preset.to_string(), preset.state()?)
        }
        (None, Some(probs), Some(states)) => {
            let mats = states
                .iter()
                .enumerate()
                .map(|(i, s)| matrix(i, s))
                .collect::<Result<Vec<_>, _>>()?;
            (source.to_string(), CQState::new(probs, mats)?)
        }
        (Some(_), _, _) => {
            return Err(CliError::Parse(format!(
                "{source}: give either \"preset\" or \"probs\"/\"eve_states\", not both"
            )))
        }
        _ => {
            return Err(CliError::Parse(format!(
                "{source}: a state needs \"preset\" or both \"probs\" and \"eve_states\""
            )))
        }
    };
    power(NamedState { name, state }, file.power.unwrap_or(1))
}

pub fn load_state(path: &Path) -> Result<NamedState, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_state(&text, &path.display().to_string())
}

pub fn preset_state(name: &str) -> Result<NamedState, CliError> {
    let preset: Preset = name.parse()?;
    Ok(NamedState {
        name: preset.to_string(),
        state: preset.state()?,
    })
}

/// The `n`-fold tensor power (`n = 1` is the identity).
pub fn power(s: NamedState, n: usize) -> Result<NamedState, CliError> {
    match n {
        0 => Err(CliError::Parse("--power must be at least 1".to_string())),
        1 => Ok(s),
        n => Ok(NamedState {
            name: format!("{}^{n}", s.name),
            state: s.state.tensor_power(n)?,
        }),
    }
}
