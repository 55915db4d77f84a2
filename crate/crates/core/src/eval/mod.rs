//! Entity-level scoring and noise-matrix reports.

mod prf;
mod spans;
mod theta;

pub use prf::{annotation_quality, entity_prf, token_confusion, ClassScores, EvalError, PrfReport};
pub use spans::{extract_spans, spans_to_labels, EntitySpan};
pub use theta::{matrix_csv, parse_matrix_csv, theta_report, ThetaCsvError, ThetaReport};
