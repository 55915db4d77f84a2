use noisy_ner::io::{
    load_embeddings, parse_conll, sample_clean_subset, write_conll, write_embeddings, Corpus,
    Document, ExperimentConfig, Sentence,
};
use noisy_ner::model::{Embeddings, LabelSet, Vocabulary};
use noisy_ner::tensor::Tensor;
use proptest::prelude::*;

fn token() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9.,'-]{0,8}".prop_filter("reserved", |t| t != "-DOCSTART-")
}

fn sentence(labeled: bool) -> impl Strategy<Value = Sentence> {
    proptest::collection::vec((token(), 0usize..5), 1..8).prop_map(move |pairs| {
        let (tokens, labels): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Sentence {
            tokens,
            labels: labeled.then_some(labels),
        }
    })
}

fn corpus() -> impl Strategy<Value = Corpus> {
    (any::<bool>(), any::<bool>()).prop_flat_map(|(labeled, first_marked)| {
        proptest::collection::vec(proptest::collection::vec(sentence(labeled), 1..4), 0..4)
            .prop_map(move |docs| Corpus {
                documents: docs
                    .into_iter()
                    .enumerate()
                    .map(|(i, sentences)| Document {
                        has_marker: i > 0 || first_marked,
                        sentences,
                    })
                    .collect(),
            })
    })
}

proptest! {
    #[test]
    fn conll_round_trip(c in corpus()) {
        let labels = LabelSet::conll();
        let text = write_conll(&c, &labels);
        prop_assert_eq!(parse_conll(&text, &labels).unwrap(), c);
    }

    #[test]
    fn embedding_round_trip(values in proptest::collection::vec(-1e3f64..1e3, 3 * 4)) {
        let vocab = Vocabulary::new(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let mut data = values.clone();
        data.extend([0.0; 8]);
        let e = Embeddings::new(vocab, Tensor::from_vec(&[5, 4], data).unwrap()).unwrap();
        prop_assert_eq!(load_embeddings(&write_embeddings(&e), Some(4)).unwrap(), e);
    }

    #[test]
    fn clean_subset_reaches_budget_minimally(
        lengths in proptest::collection::vec(1usize..30, 1..60),
        seed in any::<u64>(),
        frac in 0.01f64..1.0,
    ) {
        let total: usize = lengths.iter().sum();
        let budget = ((total as f64 * frac).ceil() as usize).max(1);
        let s = sample_clean_subset(&lengths, budget, seed).unwrap();
        let taken: usize = s.clean.iter().map(|&i| lengths[i]).sum();
        prop_assert!(taken >= budget);
        let mut all: Vec<usize> = s.clean.iter().chain(&s.rest).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..lengths.len()).collect::<Vec<_>>());
    }
}

#[test]
fn conll_2003_fixture() {
    let text = "\
-DOCSTART- -X- -X- O

EU NNP B-NP B-ORG
rejects VBZ B-VP O
German JJ B-NP B-MISC
call NN I-NP O
. . O O

Peter NNP B-NP B-PER
Blackburn NNP I-NP I-PER

-DOCSTART- -X- -X- O

BRUSSELS NNP B-NP B-LOC
";
    let labels = LabelSet::conll();
    let c = parse_conll(text, &labels).unwrap();
    assert_eq!(c.documents.len(), 2);
    assert_eq!(c.sentence_count(), 3);
    assert_eq!(c.token_count(), 8);
    let per = labels.index("PER").unwrap();
    assert_eq!(c.documents[0].sentences[1].labels, Some(vec![per, per]));
}

#[test]
fn config_file_reproduces_the_config() {
    let cfg = ExperimentConfig {
        variant: "noise-cleaning-model".into(),
        learning_rate: 0.0123,
        channel_kind: "permutation".into(),
        channel_mapping: Some(vec![0, 2, 1, 4, 3]),
        ..Default::default()
    };
    let text = cfg.to_toml().unwrap();
    assert!(text.lines().all(|l| l.contains(" = ")), "not flat:\n{text}");
    assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
}
