use std::collections::BTreeSet;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::annotate::{apply_channel, ChannelError, Gazetteer, GazetteerError};
use crate::eval::{entity_prf, EvalError, PrfReport};
use crate::io::{
    generate_toy, load_embeddings, parse_conll, sample_clean_subset, toy_gazetteer, toy_vocabulary,
    ConfigError, ConllError, Corpus, EmbeddingError, ExperimentConfig, NoiseSource, SampleError,
    ToyConfig,
};
use crate::model::{sentence_windows, Classifier, Embeddings, LabelSet, VocabError, Window};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Conll {
        path: String,
        #[source]
        source: ConllError,
    },
    #[error("{path}: corpus has unlabeled sentences")]
    Unlabeled { path: String },
    #[error("{path}: {source}")]
    Embeddings {
        path: String,
        #[source]
        source: EmbeddingError,
    },
    #[error("{path}: {source}")]
    Gazetteer {
        path: String,
        #[source]
        source: GazetteerError,
    },
    #[error("`{0}` is required when a training file is given")]
    MissingPath(&'static str),
    #[error("embedding file has dimension {found}, config asks for {expected}")]
    EmbeddingDim { expected: usize, found: usize },
    #[error(transparent)]
    Vocabulary(#[from] VocabError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{sentences} sentences but {labels} noisy label sequences")]
    NoisyAlignment { sentences: usize, labels: usize },
}

/// Wraps a dataset and counts how often it is read.
#[derive(Debug, Default)]
pub struct Tracked<T> {
    inner: T,
    reads: AtomicUsize,
}

impl<T> Tracked<T> {
    pub fn new(inner: T) -> Self {
        Tracked {
            inner,
            reads: AtomicUsize::new(0),
        }
    }

    pub fn read(&self) -> &T {
        self.reads.fetch_add(1, Ordering::Relaxed);
        &self.inner
    }

    pub fn reads(&self) -> usize {
        self.reads.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledWindows {
    pub windows: Vec<Window>,
    pub labels: Vec<usize>,
}

/// Clean windows with their trusted labels and the labels the automatic
/// process assigned to the same tokens.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CleanSet {
    pub windows: Vec<Window>,
    pub labels: Vec<usize>,
    pub noisy_labels: Vec<usize>,
}

/// Gold-labeled windows that keep their sentence grouping for entity-level
/// scoring.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalSet {
    pub windows: Vec<Window>,
    pub labels: Vec<usize>,
    pub sentence_lengths: Vec<usize>,
}

impl EvalSet {
    pub fn from_corpus(
        corpus: &Corpus,
        embeddings: &Embeddings,
        path: &str,
    ) -> Result<Self, DataError> {
        let mut set = EvalSet::default();
        for s in corpus.sentences() {
            let labels = s
                .labels
                .as_ref()
                .ok_or_else(|| DataError::Unlabeled { path: path.into() })?;
            set.windows
                .extend(sentence_windows(&embeddings.vocab, &s.tokens));
            set.labels.extend_from_slice(labels);
            set.sentence_lengths.push(s.len());
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Splits a flat per-token sequence back into sentences.
    pub fn group(&self, flat: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.sentence_lengths.len());
        let mut at = 0;
        for &n in &self.sentence_lengths {
            out.push(flat[at..at + n].to_vec());
            at += n;
        }
        out
    }

    pub fn score_predictions(
        &self,
        predicted: &[usize],
        labels: &LabelSet,
    ) -> Result<PrfReport, EvalError> {
        entity_prf(&self.group(&self.labels), &self.group(predicted), labels)
    }

    pub fn score(&self, model: &Classifier, labels: &LabelSet) -> Result<PrfReport, EvalError> {
        self.score_predictions(&model.predict(&self.windows), labels)
    }
}

/// The per-trial view: clean set `C`, noisy set `N` and the evaluation
/// splits. `C` and `N` are read through access counters.
#[derive(Debug)]
pub struct SplitDataset<'a> {
    pub labels: &'a LabelSet,
    pub clean: Tracked<CleanSet>,
    pub noisy: Tracked<LabeledWindows>,
    pub dev: &'a EvalSet,
    pub test: &'a EvalSet,
    pub clean_len: usize,
    pub noisy_len: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct TrainSentence {
    windows: Vec<Window>,
    gold: Vec<usize>,
    noisy: Vec<usize>,
}

/// Corpus-level material shared by all trials of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentData {
    pub labels: LabelSet,
    pub embeddings: Embeddings,
    pub dev: EvalSet,
    pub test: EvalSet,
    train: Vec<TrainSentence>,
}

impl ExperimentData {
    /// `noisy` holds the automatic labels of every training sentence.
    pub fn new(
        labels: LabelSet,
        embeddings: Embeddings,
        train: &Corpus,
        noisy: Vec<Vec<usize>>,
        dev: &Corpus,
        test: &Corpus,
    ) -> Result<Self, DataError> {
        if noisy.len() != train.sentence_count() {
            return Err(DataError::NoisyAlignment {
                sentences: train.sentence_count(),
                labels: noisy.len(),
            });
        }
        let mut sentences = Vec::with_capacity(noisy.len());
        for (s, z) in train.sentences().zip(noisy) {
            let gold = s.labels.clone().ok_or_else(|| DataError::Unlabeled {
                path: "train".into(),
            })?;
            if z.len() != gold.len() {
                return Err(DataError::NoisyAlignment {
                    sentences: gold.len(),
                    labels: z.len(),
                });
            }
            sentences.push(TrainSentence {
                windows: sentence_windows(&embeddings.vocab, &s.tokens),
                gold,
                noisy: z,
            });
        }
        Ok(ExperimentData {
            dev: EvalSet::from_corpus(dev, &embeddings, "dev")?,
            test: EvalSet::from_corpus(test, &embeddings, "test")?,
            labels,
            embeddings,
            train: sentences,
        })
    }

    /// Loads the corpora, embeddings and noisy labels a config describes.
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, DataError> {
        let labels = LabelSet::conll();
        let (train, dev, test, toy) = match &cfg.train_path {
            Some(train_path) => {
                let dev_path = cfg
                    .dev_path
                    .as_deref()
                    .ok_or(DataError::MissingPath("dev_path"))?;
                let test_path = cfg
                    .test_path
                    .as_deref()
                    .ok_or(DataError::MissingPath("test_path"))?;
                (
                    read_corpus(train_path, &labels)?,
                    read_corpus(dev_path, &labels)?,
                    read_corpus(test_path, &labels)?,
                    false,
                )
            }
            None => {
                let toy = generate_toy(&ToyConfig {
                    seed: cfg.toy_seed,
                    train_tokens: cfg.toy_train_tokens,
                    dev_tokens: cfg.toy_dev_tokens,
                    test_tokens: cfg.toy_test_tokens,
                });
                (toy.train, toy.dev, toy.test, true)
            }
        };
        for (c, path) in [(&train, "train"), (&dev, "dev"), (&test, "test")] {
            if !c.is_labeled() {
                return Err(DataError::Unlabeled { path: path.into() });
            }
        }

        let embeddings = match &cfg.embeddings_path {
            Some(path) => {
                let text = read_text(path)?;
                let e = load_embeddings(&text, None).map_err(|source| DataError::Embeddings {
                    path: path.clone(),
                    source,
                })?;
                if e.dim() != cfg.embedding_dim {
                    return Err(DataError::EmbeddingDim {
                        expected: cfg.embedding_dim,
                        found: e.dim(),
                    });
                }
                e
            }
            None => {
                let words = if toy {
                    toy_vocabulary()
                } else {
                    let mut set = BTreeSet::new();
                    for c in [&train, &dev, &test] {
                        for s in c.sentences() {
                            set.extend(s.tokens.iter().cloned());
                        }
                    }
                    set.into_iter().collect()
                };
                Embeddings::random(words, cfg.embedding_dim, cfg.embedding_seed)?
            }
        };

        let noisy = match cfg.noise_source {
            NoiseSource::Channel => {
                let spec = cfg.channel_spec(&labels)?;
                let gold: Vec<usize> = train
                    .sentences()
                    .flat_map(|s| s.labels.as_ref().expect("checked above").iter().copied())
                    .collect();
                let flat = apply_channel(&gold, &spec, labels.k())?;
                let mut out = Vec::with_capacity(train.sentence_count());
                let mut at = 0;
                for s in train.sentences() {
                    out.push(flat[at..at + s.len()].to_vec());
                    at += s.len();
                }
                out
            }
            NoiseSource::Gazetteer => {
                let gaz = load_gazetteer(cfg, &labels)?;
                train.sentences().map(|s| gaz.annotate(&s.tokens)).collect()
            }
        };
        ExperimentData::new(labels, embeddings, &train, noisy, &dev, &test)
    }

    pub fn train_sentences(&self) -> usize {
        self.train.len()
    }

    pub fn train_tokens(&self) -> usize {
        self.train.iter().map(|s| s.gold.len()).sum()
    }

    /// Gold and automatic labels of the training sentences.
    pub fn train_labels(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        self.train
            .iter()
            .map(|s| (s.gold.clone(), s.noisy.clone()))
            .unzip()
    }

    /// Samples `C` by sentence with the given seed. `N` is the remainder, or
    /// the whole training set with `overlap`.
    pub fn split(
        &self,
        clean_tokens: usize,
        overlap: bool,
        seed: u64,
    ) -> Result<SplitDataset<'_>, DataError> {
        let lengths: Vec<usize> = self.train.iter().map(|s| s.gold.len()).collect();
        let subset = sample_clean_subset(&lengths, clean_tokens, seed)?;
        let mut clean = CleanSet::default();
        for &i in &subset.clean {
            let s = &self.train[i];
            clean.windows.extend_from_slice(&s.windows);
            clean.labels.extend_from_slice(&s.gold);
            clean.noisy_labels.extend_from_slice(&s.noisy);
        }
        let noisy_ids: Vec<usize> = if overlap {
            (0..self.train.len()).collect()
        } else {
            subset.rest
        };
        let mut noisy = LabeledWindows::default();
        for i in noisy_ids {
            let s = &self.train[i];
            noisy.windows.extend_from_slice(&s.windows);
            noisy.labels.extend_from_slice(&s.noisy);
        }
        Ok(SplitDataset {
            labels: &self.labels,
            clean_len: clean.windows.len(),
            noisy_len: noisy.windows.len(),
            clean: Tracked::new(clean),
            noisy: Tracked::new(noisy),
            dev: &self.dev,
            test: &self.test,
        })
    }
}

fn read_text(path: &str) -> Result<String, DataError> {
    std::fs::read_to_string(Path::new(path)).map_err(|source| DataError::Io {
        path: path.to_string(),
        source,
    })
}

fn read_corpus(path: &str, labels: &LabelSet) -> Result<Corpus, DataError> {
    parse_conll(&read_text(path)?, labels).map_err(|source| DataError::Conll {
        path: path.to_string(),
        source,
    })
}

/// The configured gazetteer, or the bundled toy one when no path is set.
pub fn load_gazetteer(cfg: &ExperimentConfig, labels: &LabelSet) -> Result<Gazetteer, DataError> {
    let mut gaz = match &cfg.gazetteer_path {
        Some(path) => {
            let mut g = Gazetteer::new(labels.clone());
            g.load_entries(&read_text(path)?)
                .map_err(|source| DataError::Gazetteer {
                    path: path.clone(),
                    source,
                })?;
            g
        }
        None => toy_gazetteer(labels),
    };
    if let Some(path) = &cfg.blocklist_path {
        gaz.load_blocklist(&read_text(path)?);
    }
    Ok(gaz)
}
