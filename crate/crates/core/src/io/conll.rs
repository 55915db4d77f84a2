use std::fmt::Write as _;

use thiserror::Error;

use crate::model::LabelSet;

const DOCSTART: &str = "-DOCSTART-";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConllError {
    #[error("line {line}: unknown tag `{tag}`")]
    Tag { line: usize, tag: String },
    #[error("line {line}: sentence mixes labeled and unlabeled tokens")]
    MixedLabels { line: usize },
}

/// One sentence; `labels` is present when the source carried tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub labels: Option<Vec<usize>>,
}

impl Sentence {
    pub fn labeled(tokens: Vec<String>, labels: Vec<usize>) -> Self {
        debug_assert_eq!(tokens.len(), labels.len());
        Sentence {
            tokens,
            labels: Some(labels),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    /// Whether the document was opened by a `-DOCSTART-` line.
    pub has_marker: bool,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    /// A single unmarked document.
    pub fn from_sentences(sentences: Vec<Sentence>) -> Self {
        Corpus {
            documents: vec![Document {
                has_marker: false,
                sentences,
            }],
        }
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.documents.iter().flat_map(|d| d.sentences.iter())
    }

    pub fn sentences_mut(&mut self) -> impl Iterator<Item = &mut Sentence> {
        self.documents
            .iter_mut()
            .flat_map(|d| d.sentences.iter_mut())
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn token_count(&self) -> usize {
        self.sentences().map(Sentence::len).sum()
    }

    pub fn is_labeled(&self) -> bool {
        self.sentences().all(|s| s.labels.is_some())
    }
}

/// Reads whitespace-separated columns, one token per line. With two or more
/// columns the last one is the tag; middle columns are ignored.
pub fn parse_conll(text: &str, labels: &LabelSet) -> Result<Corpus, ConllError> {
    let mut corpus = Corpus::default();
    let mut doc = Document::default();
    let mut tokens: Vec<String> = Vec::new();
    let mut tags: Vec<usize> = Vec::new();
    let mut labeled: Option<bool> = None;

    fn flush(
        doc: &mut Document,
        tokens: &mut Vec<String>,
        tags: &mut Vec<usize>,
        labeled: &mut Option<bool>,
    ) {
        if !tokens.is_empty() {
            let labels = labeled.unwrap_or(false).then(|| std::mem::take(tags));
            doc.sentences.push(Sentence {
                tokens: std::mem::take(tokens),
                labels,
            });
        }
        tags.clear();
        *labeled = None;
    }

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            flush(&mut doc, &mut tokens, &mut tags, &mut labeled);
            continue;
        }
        if fields[0] == DOCSTART {
            flush(&mut doc, &mut tokens, &mut tags, &mut labeled);
            if doc.has_marker || !doc.sentences.is_empty() {
                corpus.documents.push(std::mem::take(&mut doc));
            }
            doc.has_marker = true;
            continue;
        }
        let has_tag = fields.len() > 1;
        if *labeled.get_or_insert(has_tag) != has_tag {
            return Err(ConllError::MixedLabels { line: line_no });
        }
        if has_tag {
            let tag = fields[fields.len() - 1];
            let id = labels.parse_tag(tag).map_err(|_| ConllError::Tag {
                line: line_no,
                tag: tag.to_string(),
            })?;
            tags.push(id);
        }
        tokens.push(fields[0].to_string());
    }
    flush(&mut doc, &mut tokens, &mut tags, &mut labeled);
    if doc.has_marker || !doc.sentences.is_empty() {
        corpus.documents.push(doc);
    }
    Ok(corpus)
}

/// Two-column output (`token tag`), or one column for unlabeled sentences.
pub fn write_conll(corpus: &Corpus, labels: &LabelSet) -> String {
    let mut out = String::new();
    for doc in &corpus.documents {
        if doc.has_marker {
            out.push_str("-DOCSTART- O\n\n");
        }
        for s in &doc.sentences {
            for (t, tok) in s.tokens.iter().enumerate() {
                match &s.labels {
                    Some(l) => {
                        let _ = writeln!(out, "{tok} {}", labels.name(l[t]));
                    }
                    None => {
                        let _ = writeln!(out, "{tok}");
                    }
                }
            }
            out.push('\n');
        }
    }
    out
}
