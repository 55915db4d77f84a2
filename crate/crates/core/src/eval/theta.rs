use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{LabelSet, NoiseMatrix};
use crate::tensor::Tensor;

const CORNER: &str = "clean\\noisy";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaCsvError {
    #[error("empty table")]
    Empty,
    #[error("line {line}: expected {expected} fields, found {found}")]
    Width {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: `{field}` is not a number")]
    Number { line: usize, field: String },
    #[error("row classes do not match column classes")]
    Names,
}

/// Labeled view of a noise matrix. Rows are the clean class `i`, columns
/// the noisy class `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaReport {
    pub classes: Vec<String>,
    pub theta: Tensor,
    pub weights: Tensor,
}

pub fn theta_report(noise: &NoiseMatrix, labels: &LabelSet) -> ThetaReport {
    debug_assert_eq!(noise.k(), labels.k());
    ThetaReport {
        classes: labels.names().to_vec(),
        theta: noise.theta(),
        weights: noise.weights().clone(),
    }
}

impl ThetaReport {
    pub fn theta_csv(&self) -> String {
        matrix_csv(&self.classes, &self.theta)
    }

    /// The raw weights `b`.
    pub fn weights_csv(&self) -> String {
        matrix_csv(&self.classes, &self.weights)
    }
}

/// Square matrix as CSV with a header row and a leading column of class
/// names. Values use the shortest representation that parses back exactly.
pub fn matrix_csv(classes: &[String], m: &Tensor) -> String {
    let mut out = String::from(CORNER);
    for c in classes {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (i, c) in classes.iter().enumerate() {
        out.push_str(c);
        for v in m.row(i) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`matrix_csv`].
pub fn parse_matrix_csv(text: &str) -> Result<(Vec<String>, Tensor), ThetaCsvError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(ThetaCsvError::Empty)?;
    let classes: Vec<String> = header
        .split(',')
        .skip(1)
        .map(|s| s.trim().to_string())
        .collect();
    let k = classes.len();
    let mut rows = Vec::with_capacity(k);
    let mut names = Vec::with_capacity(k);
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != k + 1 {
            return Err(ThetaCsvError::Width {
                line: i + 1,
                expected: k + 1,
                found: fields.len(),
            });
        }
        names.push(fields[0].trim().to_string());
        let row = fields[1..]
            .iter()
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| ThetaCsvError::Number {
                    line: i + 1,
                    field: f.to_string(),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    if names != classes {
        return Err(ThetaCsvError::Names);
    }
    let m = Tensor::from_rows(&rows).map_err(|_| ThetaCsvError::Empty)?;
    Ok((classes, m))
}
