#![allow(clippy::needless_range_loop)]

mod common;

use noisy_ner::annotate::{
    apply_channel, estimate_confusion, init_noise_weights, ChannelKind, NoiseChannelSpec,
    ANNOTATION_SHAPED,
};
use noisy_ner::eval::entity_prf;
use noisy_ner::model::{theta_from_b, Classifier, LabelSet, ModelDims, NoiseLayer, Pooling};
use noisy_ner::rng::substream;
use noisy_ner::tensor::{cross_entropy, AdamConfig, AdamState, Graph, Tensor};
use proptest::prelude::*;
use rand::Rng;

fn labels5() -> LabelSet {
    LabelSet::conll()
}

fn sequence_pair() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (0usize..=20).prop_flat_map(|n| {
        (
            proptest::collection::vec(0usize..5, n),
            proptest::collection::vec(0usize..5, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn entity_prf_matches_span_set_oracle(pairs in proptest::collection::vec(sequence_pair(), 1..4)) {
        let (gold, pred): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let report = entity_prf(&gold, &pred, &labels5()).unwrap();
        let counts = common::brute_counts(&gold, &pred, 5, 0);
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        for c in 1..5 {
            let row = &report.classes[c - 1];
            let (t, f, n) = counts[c];
            prop_assert_eq!((row.true_positives, row.false_positives, row.false_negatives), (t, f, n));
            prop_assert_eq!((row.precision, row.recall, row.f1), common::prf(t, f, n));
            tp += t;
            fp += f;
            fn_ += n;
        }
        let o = &report.overall;
        prop_assert_eq!((o.true_positives, o.false_positives, o.false_negatives), (tp, fp, fn_));
        prop_assert_eq!((o.precision, o.recall, o.f1), common::prf(tp, fp, fn_));
        for v in [o.precision, o.recall, o.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn noisy_distribution_is_the_k_term_sum(
        k in 2usize..=6,
        seed in any::<u64>(),
    ) {
        let mut rng = substream(seed, "eq3", 0);
        let logits: Vec<f64> = (0..k).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let p = common::softmax(&logits);
        let b: Vec<Vec<f64>> = (0..k).map(|_| (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
        let want = common::brute_noisy(&p, &b);

        let theta = theta_from_b(&Tensor::from_rows(&b).unwrap());
        let mut ps = noisy_ner::tensor::ParamSet::new();
        let bid = ps.add("b", Tensor::from_rows(&b).unwrap(), true);
        let mut g = Graph::new(&ps);
        let pv = g.constant(Tensor::from_vec(&[1, k], p.clone()).unwrap());
        let bv = g.param(bid);
        let th = g.softmax_rows(bv);
        let out = g.matmul(pv, th).unwrap();
        for j in 0..k {
            prop_assert!((g.value(out).data()[j] - want[j]).abs() < 1e-12);
            prop_assert!((g.value(th).get(0, j) - theta.get(0, j)).abs() < 1e-15);
        }
        let total: f64 = g.value(out).data().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn count_init_softmax_is_the_smoothed_confusion(
        k in 2usize..=6,
        pairs in proptest::collection::vec((0usize..6, 0usize..6), 0..200),
        alpha in 0.1f64..3.0,
    ) {
        let (y, z): (Vec<usize>, Vec<usize>) = pairs.into_iter().map(|(a, b)| (a % k, b % k)).unzip();
        let counts = estimate_confusion(&y, &z, k).unwrap();
        let theta = theta_from_b(&init_noise_weights(&counts, alpha).unwrap());
        let want = common::smoothed_rows(counts.rows(), alpha);
        for i in 0..k {
            for j in 0..k {
                prop_assert!((theta.get(i, j) - want[i][j]).abs() < 1e-12);
            }
        }
    }
}

fn tiny(seed: u64) -> Classifier {
    let dims = ModelDims {
        vocab_size: 8,
        embedding_dim: 4,
        state_size: 3,
        dense_size: 4,
        classes: 5,
        cleaner_size: 2,
    };
    let mut rng = substream(seed, "tiny", 0);
    let emb =
        Tensor::from_vec(&[8, 4], (0..32).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
    Classifier::new(dims, Pooling::FinalStates, emb, true, &mut rng).unwrap()
}

#[test]
fn identity_noise_layer_is_transparent() {
    let m = tiny(1);
    let windows = vec![
        [0, 1, 2, 3, 4, 5, 6],
        [7, 7, 1, 1, 2, 2, 3],
        [6, 6, 6, 6, 6, 6, 6],
    ];
    let eye = Tensor::identity(5);
    let mut g = Graph::new(m.params());
    let base = m.base_forward(&mut g, &windows).unwrap();
    let noisy = m
        .noisy_forward(&mut g, &windows, NoiseLayer::Fixed(&eye))
        .unwrap();
    for (a, b) in g.value(base).data().iter().zip(g.value(noisy).data()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn theta_rows_stay_stochastic_after_every_step() {
    let mut m = tiny(2);
    let mut adam = AdamState::new(
        AdamConfig {
            learning_rate: 0.5,
            ..Default::default()
        },
        m.params(),
    );
    let mut rng = substream(2, "steps", 0);
    for _ in 0..200 {
        let windows: Vec<[usize; 7]> = (0..4)
            .map(|_| std::array::from_fn(|_| rng.gen_range(0..8)))
            .collect();
        let z: Vec<usize> = (0..4).map(|_| rng.gen_range(0..5)).collect();
        let grads = {
            let mut g = Graph::new(m.params());
            let p = m
                .noisy_forward(&mut g, &windows, NoiseLayer::Learned)
                .unwrap();
            let l = cross_entropy(&mut g, p, &z).unwrap();
            g.backward(l).unwrap()
        };
        m.params_mut().accumulate(&grads);
        adam.step(m.params_mut()).unwrap();
        let theta = m.noise_matrix().theta();
        for i in 0..5 {
            let s: f64 = theta.row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}

fn rate_of(labels: &[usize], noisy: &[usize], from: usize, to: usize) -> f64 {
    let n = labels.iter().filter(|&&l| l == from).count();
    let hits = labels
        .iter()
        .zip(noisy)
        .filter(|&(&l, &z)| l == from && z == to)
        .count();
    hits as f64 / n as f64
}

#[test]
fn channel_marginals_within_two_points() {
    let n = 10_000;
    let labels: Vec<usize> = (0..5).flat_map(|c| std::iter::repeat_n(c, n)).collect();

    for rate in [0.1, 0.3, 0.5] {
        let spec = NoiseChannelSpec {
            kind: ChannelKind::Uniform { rate },
            seed: 17,
        };
        let noisy = apply_channel(&labels, &spec, 5).unwrap();
        for c in 0..5 {
            let kept = rate_of(&labels, &noisy, c, c);
            assert!(
                (1.0 - kept - rate).abs() < 0.02,
                "class {c}: {}",
                1.0 - kept
            );
        }
    }

    let spec = NoiseChannelSpec::annotation_shaped(&labels5(), 5).unwrap();
    let noisy = apply_channel(&labels, &spec, 5).unwrap();
    for (i, (_, row)) in ANNOTATION_SHAPED.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let got = rate_of(&labels, &noisy, i, j);
            assert!((got - want).abs() < 0.02, "({i},{j}): {got} vs {want}");
        }
    }

    let mapping = vec![0, 2, 1, 4, 3];
    let spec = NoiseChannelSpec {
        kind: ChannelKind::Permutation {
            mapping: mapping.clone(),
        },
        seed: 0,
    };
    let noisy = apply_channel(&labels, &spec, 5).unwrap();
    assert!(labels.iter().zip(&noisy).all(|(&l, &z)| z == mapping[l]));
}
