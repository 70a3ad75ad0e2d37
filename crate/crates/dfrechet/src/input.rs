//! Reading point sequences from JSON documents or CSV files.

use std::fs;
use std::path::Path;

use dfrechet_core::{Point2, PointSequence};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `{"P": [[x, y], ...], "Q": [[x, y], ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(rename = "P")]
    pub p: Vec<[f64; 2]>,
    #[serde(rename = "Q")]
    pub q: Vec<[f64; 2]>,
}

impl InputDocument {
    pub fn sequences(&self) -> Result<(PointSequence, PointSequence), CliError> {
        Ok((to_sequence(&self.p, "P")?, to_sequence(&self.q, "Q")?))
    }
}

fn to_sequence(points: &[[f64; 2]], name: &str) -> Result<PointSequence, CliError> {
    let pts = points.iter().map(|&[x, y]| Point2::new(x, y)).collect();
    PointSequence::new(pts).map_err(|e| CliError::Invariant(format!("{name}: {e}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_json(text: &str) -> Result<InputDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn load_json(path: &Path) -> Result<InputDocument, CliError> {
    parse_json(&read(path)?).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// One point per line, `x,y`, no header.
pub fn parse_csv(text: &str) -> Result<Vec<[f64; 2]>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(e.to_string()))?;
        if record.len() != 2 {
            return Err(CliError::Parse(format!(
                "line {}: expected 2 fields, found {}",
                line + 1,
                record.len()
            )));
        }
        let field = |k: usize| {
            record[k]
                .parse::<f64>()
                .map_err(|e| CliError::Parse(format!("line {}: {e}", line + 1)))
        };
        out.push([field(0)?, field(1)?]);
    }
    Ok(out)
}

pub fn load_csv(p: &Path, q: &Path) -> Result<InputDocument, CliError> {
    let wrap = |path: &Path| {
        parse_csv(&read(path)?).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    };
    Ok(InputDocument {
        p: wrap(p)?,
        q: wrap(q)?,
    })
}
