//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#![allow(clippy::needless_range_loop)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use noisy_ner::annotate::{
    apply_channel, estimate_confusion, init_noise_weights, ChannelKind, NoiseChannelSpec,
    ANNOTATION_SHAPED,
};
use noisy_ner::eval::entity_prf;
use noisy_ner::io::ExperimentConfig;
use noisy_ner::model::{
    theta_from_b, Classifier, LabelSet, ModelDims, NoiseLayer, Pooling, Window,
};
use noisy_ner::rng::substream;
use noisy_ner::tensor::{
    absolute_error, cross_entropy, gradient_check, AdamConfig, AdamState, Graph, ParamId, ParamSet,
    Tensor, TensorError, Var,
};
use noisy_ner::train::{
    run_trial, run_trials, sweep, sweep_csv, ExperimentData, SweepAxis, TrialSummary, Variant,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random(shape: &[usize], lo: f64, hi: f64, seed: u64) -> Tensor {
    let mut rng = substream(seed, "acceptance", 0);
    let n = shape.iter().product();
    Tensor::from_vec(shape, (0..n).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
}

// ---------------------------------------------------------------- gradients

const H: f64 = 1e-5;
const GRAD_TOL: f64 = 1e-4;

type Op = Box<dyn Fn(&mut Graph, &[Var]) -> Result<Var, TensorError>>;
type OpCase<'a> = (&'a str, Vec<(&'a [usize], f64, f64)>, Op);

/// Worst relative error over every input of `op`, reducing its output through
/// fixed random weights.
fn op_error(inputs: &[(&[usize], f64, f64)], op: Op) -> f64 {
    let mut ps = ParamSet::new();
    let ids: Vec<ParamId> = inputs
        .iter()
        .enumerate()
        .map(|(i, (shape, lo, hi))| {
            ps.add(format!("x{i}"), random(shape, *lo, *hi, i as u64 + 1), true)
        })
        .collect();
    let expr = |g: &mut Graph| {
        let vars: Vec<Var> = ids.iter().map(|&id| g.param(id)).collect();
        let out = op(g, &vars)?;
        let shape = g.value(out).shape().to_vec();
        let w = g.constant(random(&shape, -1.0, 1.0, 99));
        let p = g.mul(out, w)?;
        Ok(g.sum(p))
    };
    ids.iter()
        .map(|&id| gradient_check(&mut ps, id, H, expr).unwrap())
        .fold(0.0, f64::max)
}

fn tiny_model(classes: usize, seed: u64) -> Classifier {
    let dims = ModelDims {
        vocab_size: 6,
        embedding_dim: 4,
        state_size: 3,
        dense_size: 5,
        classes,
        cleaner_size: 2,
    };
    let emb = random(&[6, 4], -1.0, 1.0, seed);
    let mut m = Classifier::new(
        dims,
        Pooling::FinalStates,
        emb,
        true,
        &mut substream(seed, "init", 0),
    )
    .unwrap();
    let ids: Vec<ParamId> = m.params().ids().collect();
    for (i, id) in ids.into_iter().enumerate() {
        let shape = m.params().value(id).shape().to_vec();
        let noise = random(&shape, -0.3, 0.3, 100 + i as u64);
        m.params_mut().value_mut(id).add_assign(&noise);
    }
    m
}

fn model_error(
    model: &mut Classifier,
    ids: &[ParamId],
    expr: impl Fn(&Classifier, &mut Graph) -> Result<Var, TensorError>,
) -> f64 {
    let frozen = model.clone();
    ids.iter()
        .map(|&id| gradient_check(model.params_mut(), id, H, |g| expr(&frozen, g)).unwrap())
        .fold(0.0, f64::max)
}

fn gradient_integrity() -> Outcome {
    let start = Instant::now();
    let m34: &[usize] = &[3, 4];
    let ops: Vec<OpCase> = vec![
        (
            "matmul",
            vec![(m34, -1.0, 1.0), (&[4, 2], -1.0, 1.0)],
            Box::new(|g, v| g.matmul(v[0], v[1])),
        ),
        (
            "add",
            vec![(m34, -1.0, 1.0), (&[1, 4], -1.0, 1.0)],
            Box::new(|g, v| g.add(v[0], v[1])),
        ),
        (
            "sub",
            vec![(m34, -1.0, 1.0), (m34, -1.0, 1.0)],
            Box::new(|g, v| g.sub(v[0], v[1])),
        ),
        (
            "mul",
            vec![(m34, -1.0, 1.0), (m34, -1.0, 1.0)],
            Box::new(|g, v| g.mul(v[0], v[1])),
        ),
        (
            "scale",
            vec![(m34, -1.0, 1.0)],
            Box::new(|g, v| Ok(g.scale(v[0], -2.5))),
        ),
        (
            "concat",
            vec![(m34, -1.0, 1.0), (&[3, 2], -1.0, 1.0)],
            Box::new(|g, v| g.concat_cols(&[v[0], v[1], v[0]])),
        ),
        (
            "slice",
            vec![(m34, -1.0, 1.0)],
            Box::new(|g, v| g.slice_cols(v[0], 1, 3)),
        ),
        (
            "sigmoid",
            vec![(m34, -3.0, 3.0)],
            Box::new(|g, v| Ok(g.sigmoid(v[0]))),
        ),
        (
            "tanh",
            vec![(m34, -3.0, 3.0)],
            Box::new(|g, v| Ok(g.tanh(v[0]))),
        ),
        (
            "relu+",
            vec![(m34, 0.1, 2.0)],
            Box::new(|g, v| Ok(g.relu(v[0]))),
        ),
        (
            "relu-",
            vec![(m34, -2.0, -0.1)],
            Box::new(|g, v| Ok(g.relu(v[0]))),
        ),
        (
            "softmax",
            vec![(m34, -3.0, 3.0)],
            Box::new(|g, v| Ok(g.softmax_rows(v[0]))),
        ),
        (
            "log",
            vec![(m34, 0.1, 2.0)],
            Box::new(|g, v| Ok(g.log(v[0], 1e-12))),
        ),
        (
            "abs",
            vec![(m34, -2.0, -0.1)],
            Box::new(|g, v| Ok(g.abs(v[0]))),
        ),
        (
            "clip",
            vec![(m34, 0.1, 0.9)],
            Box::new(|g, v| Ok(g.clip(v[0], 0.0, 1.0))),
        ),
        (
            "sum",
            vec![(m34, -1.0, 1.0)],
            Box::new(|g, v| Ok(g.sum(v[0]))),
        ),
        (
            "mean",
            vec![(m34, -1.0, 1.0)],
            Box::new(|g, v| Ok(g.mean(v[0]))),
        ),
        (
            "gather",
            vec![(&[5, 3], -1.0, 1.0)],
            Box::new(|g, v| g.gather_rows(v[0], &[4, 0, 4, 2])),
        ),
        (
            "pick",
            vec![(m34, -1.0, 1.0)],
            Box::new(|g, v| g.pick(v[0], &[3, 0, 3])),
        ),
        (
            "cross-entropy",
            vec![(m34, -2.0, 2.0)],
            Box::new(|g, v| {
                let p = g.softmax_rows(v[0]);
                cross_entropy(g, p, &[0, 3, 2])
            }),
        ),
        (
            "absolute-error",
            vec![(m34, -2.0, 2.0)],
            Box::new(|g, v| {
                let p = g.sigmoid(v[0]);
                let t = g.constant(random(&[3, 4], 0.0, 1.0, 6));
                absolute_error(g, p, t)
            }),
        ),
    ];
    let mut worst = (0.0f64, "");
    for (name, inputs, op) in ops {
        let e = op_error(&inputs, op);
        if e > worst.0 {
            worst = (e, name);
        }
    }

    let windows: Vec<Window> = vec![
        [4, 4, 0, 1, 2, 3, 5],
        [0, 1, 2, 3, 0, 4, 4],
        [3, 3, 3, 1, 4, 4, 4],
    ];
    let mut m = tiny_model(3, 21);
    let base_ids = m.base_param_ids();
    let base = model_error(&mut m, &base_ids, |m, g| {
        let p = m.base_forward(g, &windows)?;
        cross_entropy(g, p, &[0, 2, 1])
    });
    let mut with_b = base_ids.clone();
    with_b.push(m.noise_param());
    let noisy = model_error(&mut m, &with_b, |m, g| {
        let p = m.noisy_forward(g, &windows, NoiseLayer::Learned)?;
        cross_entropy(g, p, &[1, 1, 0])
    });
    let c = m.cleaner();
    let cleaner_ids = [c.projection, c.projection_bias, c.combiner, c.combiner_bias];
    let cleaner = model_error(&mut m, &cleaner_ids, |m, g| {
        let out = m.cleaning_forward(g, &windows, &[0, 1, 2], true)?;
        let target = g.constant(random(&[3, 3], 0.2, 0.8, 31));
        let d = g.sub(out, target)?;
        let sq = g.mul(d, d)?;
        Ok(g.sum(sq))
    });
    let secs = start.elapsed().as_secs_f64();
    let all = worst.0.max(base).max(noisy).max(cleaner);
    verdict(
        all < GRAD_TOL && secs < 60.0,
        format!(
            "ops worst {:.1e} ({}), base {base:.1e}, noisy incl. b {noisy:.1e}, cleaner {cleaner:.1e}; {secs:.1}s",
            worst.0, worst.1
        ),
    )
}

// --------------------------------------------------------------- identities

fn algebraic_identities() -> Outcome {
    let mut rng = substream(5, "identities", 0);

    // Row sums of θ after each of 200 optimizer steps.
    let mut m = tiny_model(5, 2);
    let mut adam = AdamState::new(
        AdamConfig {
            learning_rate: 0.5,
            ..Default::default()
        },
        m.params(),
    );
    let mut row_err = 0.0f64;
    for _ in 0..200 {
        let windows: Vec<Window> = (0..4)
            .map(|_| std::array::from_fn(|_| rng.gen_range(0..6)))
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
        m.params_mut().zero_grad();
        let theta = m.noise_matrix().theta();
        for i in 0..5 {
            row_err = row_err.max((theta.row(i).iter().sum::<f64>() - 1.0).abs());
        }
    }

    // Softmax of the count initialization against smoothed counts.
    let mut init_err = 0.0f64;
    for _ in 0..1000 {
        let k = rng.gen_range(2..=6);
        let n = rng.gen_range(0..200);
        let y: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let z: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let alpha = rng.gen_range(0.1..3.0);
        let counts = estimate_confusion(&y, &z, k).unwrap();
        let theta = theta_from_b(&init_noise_weights(&counts, alpha).unwrap());
        let want = common::smoothed_rows(counts.rows(), alpha);
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                init_err = init_err.max((theta.get(i, j) - w).abs());
            }
        }
    }

    // Identity channel and the k-term sum, on the model's own paths.
    let mut eye_err = 0.0f64;
    let mut sum_err = 0.0f64;
    for pair in 0..1000 {
        let k = rng.gen_range(2..=6);
        let mut m = tiny_model(k, 1000 + pair);
        let b: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        m.set_noise_weights(&Tensor::from_rows(&b).unwrap())
            .unwrap();
        let windows: Vec<Window> = vec![std::array::from_fn(|_| rng.gen_range(0..6))];
        let eye = Tensor::identity(k);
        let mut g = Graph::new(m.params());
        let base = m.base_forward(&mut g, &windows).unwrap();
        let fixed = m
            .noisy_forward(&mut g, &windows, NoiseLayer::Fixed(&eye))
            .unwrap();
        let learned = m
            .noisy_forward(&mut g, &windows, NoiseLayer::Learned)
            .unwrap();
        let p = g.value(base).data().to_vec();
        let want = common::brute_noisy(&p, &b);
        for j in 0..k {
            eye_err = eye_err.max((g.value(fixed).data()[j] - p[j]).abs());
            sum_err = sum_err.max((g.value(learned).data()[j] - want[j]).abs());
        }
    }

    let worst = row_err.max(init_err).max(eye_err).max(sum_err);
    verdict(
        worst < 1e-12,
        format!("row sums {row_err:.1e}, init {init_err:.1e}, identity {eye_err:.1e}, k-term sum {sum_err:.1e}"),
    )
}

// ------------------------------------------------------------------ scoring

fn scoring_oracle() -> Outcome {
    let labels = LabelSet::conll();
    let mut rng = substream(9, "scoring", 0);
    let mut all_gold = Vec::new();
    let mut all_pred = Vec::new();
    let mut mismatches = 0;
    let check = |gold: &[Vec<usize>], pred: &[Vec<usize>]| -> bool {
        let report = entity_prf(gold, pred, &labels).unwrap();
        let counts = common::brute_counts(gold, pred, 5, 0);
        let mut total = (0, 0, 0);
        for c in 1..5 {
            let row = &report.classes[c - 1];
            let (t, f, n) = counts[c];
            if (row.true_positives, row.false_positives, row.false_negatives) != (t, f, n)
                || (row.precision, row.recall, row.f1) != common::prf(t, f, n)
            {
                return false;
            }
            total = (total.0 + t, total.1 + f, total.2 + n);
        }
        let o = &report.overall;
        (o.true_positives, o.false_positives, o.false_negatives) == total
            && (o.precision, o.recall, o.f1) == common::prf(total.0, total.1, total.2)
    };
    for _ in 0..1000 {
        let n = rng.gen_range(0..=20);
        // Skew towards O so spans of every shape occur.
        let mut draw = || -> Vec<usize> {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        0
                    } else {
                        rng.gen_range(0..5)
                    }
                })
                .collect()
        };
        let gold = draw();
        let pred = draw();
        if !check(std::slice::from_ref(&gold), std::slice::from_ref(&pred)) {
            mismatches += 1;
        }
        all_gold.push(gold);
        all_pred.push(pred);
    }
    let pooled = check(&all_gold, &all_pred);
    verdict(
        mismatches == 0 && pooled,
        format!(
            "{mismatches} of 1000 pairs differ; pooled counts {}",
            if pooled { "agree" } else { "differ" }
        ),
    )
}

// ------------------------------------------------------------------ channel

fn channel_statistics() -> Outcome {
    let n = 10_000;
    let labels: Vec<usize> = (0..5).flat_map(|c| std::iter::repeat_n(c, n)).collect();
    let rate = |noisy: &[usize], from: usize, to: usize| {
        let hits = labels
            .iter()
            .zip(noisy)
            .filter(|&(&l, &z)| l == from && z == to)
            .count();
        hits as f64 / n as f64
    };
    let mut worst = 0.0f64;
    let mut specs = vec![NoiseChannelSpec::annotation_shaped(&LabelSet::conll(), 5).unwrap()];
    for r in [0.1, 0.3, 0.5] {
        specs.push(NoiseChannelSpec {
            kind: ChannelKind::Uniform { rate: r },
            seed: 17,
        });
    }
    specs.push(NoiseChannelSpec {
        kind: ChannelKind::Permutation {
            mapping: vec![0, 2, 1, 4, 3],
        },
        seed: 0,
    });
    for spec in &specs {
        let want = spec.transition_matrix(5).unwrap();
        let noisy = apply_channel(&labels, spec, 5).unwrap();
        for (i, row) in want.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                worst = worst.max((rate(&noisy, i, j) - p).abs());
            }
        }
    }
    let per = rate(&apply_channel(&labels, &specs[0], 5).unwrap(), 1, 1);
    verdict(
        worst < 0.02,
        format!(
            "worst deviation {worst:.4} over {} channels; PER retention {per:.4}",
            specs.len()
        ),
    )
}

// ------------------------------------------------------------ desk scale run

fn desk_config() -> ExperimentConfig {
    ExperimentConfig {
        learning_rate: 0.01,
        ..Default::default()
    }
}

struct DeskRun {
    base: TrialSummary,
    base_noise: TrialSummary,
    noise: TrialSummary,
    identity: TrialSummary,
    secs: f64,
}

fn desk_run() -> DeskRun {
    let start = Instant::now();
    let cfg = desk_config();
    let data = ExperimentData::from_config(&cfg).unwrap();
    let run = |v| run_trials(v, &data, &cfg).unwrap();
    DeskRun {
        base: run(Variant::BaseModel),
        base_noise: run(Variant::BaseModelWithNoise),
        noise: run(Variant::NoiseModel),
        identity: run(Variant::NoiseModelWithIdentityInit),
        secs: start.elapsed().as_secs_f64(),
    }
}

fn desk_comparison(run: &DeskRun) -> Outcome {
    let s = |t: &TrialSummary| {
        format!(
            "{} {:.3}±{:.3}",
            t.variant.name(),
            t.summary.mean,
            t.summary.se
        )
    };
    let noise = &run.noise.summary;
    let beats = |other: &TrialSummary| {
        noise.mean - other.summary.mean > 2.0 * noise.pooled_se(&other.summary)
    };
    let rel = (noise.mean - run.base.summary.mean) / run.base.summary.mean;
    let ok = beats(&run.base)
        && beats(&run.base_noise)
        && noise.mean > run.identity.summary.mean
        && rel >= 0.10
        && run.secs < 600.0;
    verdict(
        ok,
        format!(
            "{}; {}; {}; {}; relative gain {:.1}%; {:.0}s",
            s(&run.base),
            s(&run.base_noise),
            s(&run.noise),
            s(&run.identity),
            100.0 * rel,
            run.secs
        ),
    )
}

fn theta_shape(run: &DeskRun) -> Outcome {
    let labels = LabelSet::conll();
    let k = labels.k();
    let mut mean = Tensor::zeros(&[k, k]);
    for t in &run.noise.trials {
        mean.add_assign(t.theta.as_ref().expect("noise model has θ"));
    }
    let n = run.noise.trials.len() as f64;
    mean.data_mut().iter_mut().for_each(|v| *v /= n);

    let argmax = |row: &[f64]| {
        (0..row.len())
            .max_by(|&a, &b| row[a].total_cmp(&row[b]))
            .unwrap()
    };
    let o = labels.null();
    // Classes are split by the channel's retention rate.
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, row) in ANNOTATION_SHAPED.iter().filter(|(name, _)| *name != "O") {
        let i = labels.index(name).unwrap();
        let high_recall = row[i] > 0.5;
        let want = if high_recall { i } else { o };
        let got = argmax(mean.row(i));
        ok &= got == want;
        lines.push(format!(
            "{name}→{} ({:.2})",
            labels.name(got),
            mean.get(i, got)
        ));
    }
    verdict(
        ok,
        format!("mean learned θ row maxima: {}", lines.join(", ")),
    )
}

// ----------------------------------------------------------------- recovery

fn channel_recovery() -> Outcome {
    let cfg = ExperimentConfig {
        noisy_factor: 5.0,
        ..desk_config()
    };
    let data = ExperimentData::from_config(&cfg).unwrap();
    let labels = &data.labels;
    let (gold, _) = data.train_labels();
    let split = data.split(cfg.clean_tokens, cfg.overlap, cfg.seed).unwrap();
    let mut in_noisy = vec![0i64; labels.k()];
    gold.iter().flatten().for_each(|&c| in_noisy[c] += 1);
    split
        .clean
        .read()
        .labels
        .iter()
        .for_each(|&c| in_noisy[c] -= 1);

    let (result, _) =
        run_trial(Variant::NoiseModelWithIdentityInit, &data, &cfg, cfg.seed).unwrap();
    let theta = result.theta.unwrap();
    let mut ok = true;
    let mut checked = Vec::new();
    for (name, row) in ANNOTATION_SHAPED {
        let i = labels.index(name).unwrap();
        if in_noisy[i] < 500 {
            checked.push(format!("{name} skipped ({} examples)", in_noisy[i]));
            continue;
        }
        let err = row
            .iter()
            .enumerate()
            .map(|(j, p)| (theta.get(i, labels.index(ANNOTATION_SHAPED[j].0).unwrap()) - p).abs())
            .fold(0.0, f64::max);
        ok &= err <= 0.15;
        checked.push(format!("{name} {err:.3}"));
    }
    verdict(ok, format!("max-abs row error: {}", checked.join(", ")))
}

// -------------------------------------------------------------------- sweep

fn sweep_harness() -> Outcome {
    let cfg = ExperimentConfig {
        n_seeds: 2,
        ..desk_config()
    };
    let data = ExperimentData::from_config(&cfg).unwrap();
    let values = [0.5, 1.0, 2.0, 5.0, 10.0];
    let rows = sweep(
        SweepAxis::NoisyFactor,
        &values,
        &[Variant::NoiseModel],
        &data,
        &cfg,
    )
    .unwrap();
    let text = sweep_csv(&rows);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_string)
        .collect();
    let records: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().unwrap();
    let well_formed = header == ["axis_value", "variant", "mean_f1", "se", "n_seeds"]
        && records.len() == values.len()
        && records.iter().zip(&values).all(|(r, v)| {
            r[0].parse::<f64>().ok() == Some(*v)
                && &r[1] == "noise-model"
                && r[2].parse::<f64>().is_ok_and(|f| (0.0..=1.0).contains(&f))
                && r[3].parse::<f64>().is_ok_and(|s| s >= 0.0)
                && &r[4] == "2"
        });
    let f1: Vec<f64> = rows.iter().map(|r| r.mean_f1).collect();
    let peak = (0..f1.len())
        .max_by(|&a, &b| f1[a].total_cmp(&f1[b]))
        .unwrap();
    let shape = if peak > 0 && peak + 1 < f1.len() {
        "rises then falls"
    } else {
        "no interior peak"
    };
    let table: Vec<String> = rows
        .iter()
        .map(|r| format!("{}:{:.3}", r.axis_value, r.mean_f1))
        .collect();
    verdict(
        well_formed,
        format!("{} rows [{}], {shape}", rows.len(), table.join(" ")),
    )
}

// -------------------------------------------------------------- determinism

fn determinism(run: &DeskRun) -> Outcome {
    let saved = desk_config().to_toml().unwrap();
    let cfg = ExperimentConfig::from_toml(&saved).unwrap();
    let data = ExperimentData::from_config(&cfg).unwrap();
    let again = run_trials(Variant::NoiseModel, &data, &cfg).unwrap();
    let json = |t: &TrialSummary| serde_json::to_string(t).unwrap();
    let same = json(&again) == json(&run.noise) && again.epoch_jsonl() == run.noise.epoch_jsonl();
    verdict(
        same,
        format!(
            "noise-model rerun from saved config: summary and {} epoch records {}",
            again.trials.iter().map(|t| t.epochs.len()).sum::<usize>(),
            if same { "bit-identical" } else { "differ" }
        ),
    )
}

// --------------------------------------------------------------------- main

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |name: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS  {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("FAIL  {name}: {detail}");
        }
    };
    report("gradient integrity", guarded(gradient_integrity));
    report("algebraic identities", guarded(algebraic_identities));
    report("scoring oracle", guarded(scoring_oracle));
    report("channel statistics", guarded(channel_statistics));
    match catch_unwind(desk_run) {
        Ok(run) => {
            report("desk-scale comparison", guarded(|| desk_comparison(&run)));
            report("learned channel shape", guarded(|| theta_shape(&run)));
            report("determinism", guarded(|| determinism(&run)));
        }
        Err(_) => {
            for name in [
                "desk-scale comparison",
                "learned channel shape",
                "determinism",
            ] {
                report(name, Err("training run panicked".into()));
            }
        }
    }
    report("channel recovery", guarded(channel_recovery));
    report("sweep harness", guarded(sweep_harness));
    println!("SKIP  annotation quality on user-supplied CoNLL-2003 data: needs external data");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
