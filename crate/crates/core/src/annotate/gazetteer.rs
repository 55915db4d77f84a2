use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::model::LabelSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GazetteerError {
    #[error("line {line}: expected `surface form<TAB>CLASS`")]
    Malformed { line: usize },
    #[error("line {line}: unknown class `{class}`")]
    UnknownClass { line: usize, class: String },
    #[error("priority names unknown class `{0}`")]
    UnknownPriority(String),
}

/// English weekday and month names. They collide with person and
/// organization lists but are almost never entities on their own.
pub const DEFAULT_BLOCKLIST: &[&str] = &[
    "Monday",
    "Tuesday",
    "Wednesday",
    "Thursday",
    "Friday",
    "Saturday",
    "Sunday",
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

/// Surface-form lists per entity class.
///
/// Matching is exact and case-sensitive. At each position the longest
/// matching entry wins; among classes listing the same form the first in
/// `priority` wins; forms whose classes are all outside `priority`, and
/// blocklisted forms, are left as `O`.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    labels: LabelSet,
    entries: HashMap<Vec<String>, Vec<usize>>,
    max_len: usize,
    priority: Vec<usize>,
    blocklist: HashSet<String>,
}

impl Gazetteer {
    /// Empty gazetteer with priority `PER > LOC > ORG` (restricted to the
    /// classes the label set has) and the default blocklist.
    pub fn new(labels: LabelSet) -> Self {
        let priority = ["PER", "LOC", "ORG"]
            .iter()
            .filter_map(|c| labels.index(c))
            .collect();
        Gazetteer {
            labels,
            entries: HashMap::new(),
            max_len: 0,
            priority,
            blocklist: DEFAULT_BLOCKLIST.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn insert(&mut self, tokens: Vec<String>, class: usize) {
        if tokens.is_empty() || class == self.labels.null() {
            return;
        }
        self.max_len = self.max_len.max(tokens.len());
        let classes = self.entries.entry(tokens).or_default();
        if !classes.contains(&class) {
            classes.push(class);
        }
    }

    /// Parses `surface form<TAB>CLASS` lines; blank lines and lines starting
    /// with `#` are skipped.
    pub fn load_entries(&mut self, text: &str) -> Result<(), GazetteerError> {
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (form, class) = trimmed
                .split_once('\t')
                .ok_or(GazetteerError::Malformed { line: line_no })?;
            let tokens: Vec<String> = form.split_whitespace().map(str::to_string).collect();
            if tokens.is_empty() {
                return Err(GazetteerError::Malformed { line: line_no });
            }
            let class_name = class.trim();
            let class =
                self.labels
                    .index(class_name)
                    .ok_or_else(|| GazetteerError::UnknownClass {
                        line: line_no,
                        class: class_name.to_string(),
                    })?;
            self.insert(tokens, class);
        }
        Ok(())
    }

    /// Adds one blocked surface form per non-empty line.
    pub fn load_blocklist(&mut self, text: &str) {
        for line in text.lines() {
            let form = line.split_whitespace().collect::<Vec<_>>().join(" ");
            if !form.is_empty() {
                self.blocklist.insert(form);
            }
        }
    }

    pub fn clear_blocklist(&mut self) {
        self.blocklist.clear();
    }

    pub fn set_priority(&mut self, names: &[&str]) -> Result<(), GazetteerError> {
        self.priority = names
            .iter()
            .map(|n| {
                self.labels
                    .index(n)
                    .ok_or_else(|| GazetteerError::UnknownPriority(n.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(())
    }

    fn resolve(&self, classes: &[usize]) -> Option<usize> {
        self.priority.iter().copied().find(|p| classes.contains(p))
    }

    /// Labels every token of a sentence.
    pub fn annotate<S: AsRef<str>>(&self, sentence: &[S]) -> Vec<usize> {
        let n = sentence.len();
        let mut out = vec![self.labels.null(); n];
        let mut i = 0;
        let mut key: Vec<String> = Vec::with_capacity(self.max_len);
        while i < n {
            let mut advanced = false;
            for len in (1..=self.max_len.min(n - i)).rev() {
                key.clear();
                key.extend(sentence[i..i + len].iter().map(|t| t.as_ref().to_string()));
                let Some(classes) = self.entries.get(&key) else {
                    continue;
                };
                if self.blocklist.contains(&key.join(" ")) {
                    continue;
                }
                let Some(class) = self.resolve(classes) else {
                    continue;
                };
                out[i..i + len].fill(class);
                i += len;
                advanced = true;
                break;
            }
            if !advanced {
                i += 1;
            }
        }
        out
    }
}
