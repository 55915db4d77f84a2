use serde::{Deserialize, Serialize};

/// Inclusive token range carrying one non-null class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub class: usize,
}

/// Maximal runs of one non-null label (IO scheme).
pub fn extract_spans(labels: &[usize], null: usize) -> Vec<EntitySpan> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < labels.len() {
        let class = labels[i];
        let start = i;
        while i + 1 < labels.len() && labels[i + 1] == class {
            i += 1;
        }
        if class != null {
            spans.push(EntitySpan {
                start,
                end: i,
                class,
            });
        }
        i += 1;
    }
    spans
}

/// Writes spans back into a label sequence of length `len`.
pub fn spans_to_labels(spans: &[EntitySpan], len: usize, null: usize) -> Vec<usize> {
    let mut out = vec![null; len];
    for s in spans {
        out[s.start..=s.end].fill(s.class);
    }
    out
}
