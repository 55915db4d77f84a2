use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabelError {
    #[error("a label set needs at least two classes, got {0}")]
    TooFew(usize),
    #[error("label set must contain the null class `O`")]
    MissingNull,
    #[error("duplicate class `{0}`")]
    Duplicate(String),
    #[error("unknown class `{0}`")]
    Unknown(String),
}

/// Ordered class inventory. Indices are stable for the lifetime of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct LabelSet {
    classes: Vec<String>,
    null: usize,
}

impl LabelSet {
    pub fn new<S: Into<String>>(classes: impl IntoIterator<Item = S>) -> Result<Self, LabelError> {
        let classes: Vec<String> = classes.into_iter().map(Into::into).collect();
        if classes.len() < 2 {
            return Err(LabelError::TooFew(classes.len()));
        }
        for (i, c) in classes.iter().enumerate() {
            if classes[..i].contains(c) {
                return Err(LabelError::Duplicate(c.clone()));
            }
        }
        let null = classes
            .iter()
            .position(|c| c == "O")
            .ok_or(LabelError::MissingNull)?;
        Ok(LabelSet { classes, null })
    }

    /// `O, PER, ORG, LOC, MISC`.
    pub fn conll() -> Self {
        LabelSet::new(["O", "PER", "ORG", "LOC", "MISC"]).expect("valid default classes")
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn null(&self) -> usize {
        self.null
    }

    pub fn names(&self) -> &[String] {
        &self.classes
    }

    pub fn name(&self, index: usize) -> &str {
        &self.classes[index]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == name)
    }

    /// Resolves a tag, accepting `B-`/`I-` prefixed forms of a class.
    pub fn parse_tag(&self, tag: &str) -> Result<usize, LabelError> {
        if let Some(i) = self.index(tag) {
            return Ok(i);
        }
        let stripped = tag
            .strip_prefix("B-")
            .or_else(|| tag.strip_prefix("I-"))
            .ok_or_else(|| LabelError::Unknown(tag.to_string()))?;
        self.index(stripped)
            .filter(|&i| i != self.null)
            .ok_or_else(|| LabelError::Unknown(tag.to_string()))
    }

    /// Non-null classes in index order.
    pub fn entity_classes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.k()).filter(move |&i| i != self.null)
    }
}

impl Default for LabelSet {
    fn default() -> Self {
        LabelSet::conll()
    }
}

impl TryFrom<Vec<String>> for LabelSet {
    type Error = LabelError;
    fn try_from(v: Vec<String>) -> Result<Self, Self::Error> {
        LabelSet::new(v)
    }
}

impl From<LabelSet> for Vec<String> {
    fn from(l: LabelSet) -> Self {
        l.classes
    }
}
