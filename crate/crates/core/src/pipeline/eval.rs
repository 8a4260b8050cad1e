//! Repeated stratified 80/20 evaluation with 5-fold cross-validated choice of `C`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::features::FeatureTable;
use super::svm::{ClassifierModel, SvmParams};
use crate::error::{Error, Result};
use crate::graph::Label;
use crate::solver::stream_rng;

pub const C_GRID: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub repetitions: usize,
    pub folds: usize,
    pub test_fraction: f64,
    pub c_grid: Vec<f64>,
    pub svm: SvmParams,
    pub rng_seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            repetitions: 5,
            folds: 5,
            test_fraction: 0.2,
            c_grid: C_GRID.to_vec(),
            svm: SvmParams::default(),
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracies: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation of `accuracies`.
    pub stdev: f64,
    pub per_repetition_seeds: Vec<u64>,
    pub chosen_hyper_c: Vec<f64>,
    /// How contrast subgraphs relate to the splits, e.g. `leak-free` or `fixed-contrast`.
    pub protocol: String,
}

pub fn mean_stdev(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
    (mean, var.sqrt())
}

/// Stratified split of `0..labels.len()` into sorted `(train, test)` index lists.
pub fn stratified_split<R: Rng + ?Sized>(
    labels: &[Label],
    test_fraction: f64,
    rng: &mut R,
) -> (Vec<usize>, Vec<usize>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [Label::A, Label::B] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(rng);
        let k = idx.len();
        let mut n_test = (test_fraction * k as f64).round() as usize;
        if k >= 2 {
            n_test = n_test.clamp(1, k - 1);
        }
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

/// Stratified fold assignment over `indices`; returns one index list per fold.
pub fn stratified_folds<R: Rng + ?Sized>(
    indices: &[usize],
    labels: &[Label],
    folds: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); folds];
    let mut slot = 0;
    for class in [Label::A, Label::B] {
        let mut idx: Vec<usize> = indices.iter().copied().filter(|&i| labels[i] == class).collect();
        idx.shuffle(rng);
        for i in idx {
            out[slot % folds].push(i);
            slot += 1;
        }
    }
    out.iter_mut().for_each(|f| f.sort_unstable());
    out
}

fn gather<T: Copy>(values: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| values[i]).collect()
}

/// Mean fold accuracy of each grid value; the best (smallest on ties) is returned.
fn select_c(
    points: &[[f64; 2]],
    labels: &[Label],
    train: &[usize],
    cfg: &EvalConfig,
    rng: &mut impl Rng,
) -> f64 {
    let folds = stratified_folds(train, labels, cfg.folds, rng);
    let mut best = (cfg.c_grid[0], f64::NEG_INFINITY);
    for &c in &cfg.c_grid {
        let mut scores = Vec::new();
        for held in folds.iter().filter(|f| !f.is_empty()) {
            let fit: Vec<usize> = train.iter().copied().filter(|i| !held.contains(i)).collect();
            let model = ClassifierModel::train(
                &gather(points, &fit),
                &gather(labels, &fit),
                c,
                &cfg.svm,
            );
            scores.push(model.accuracy(&gather(points, held), &gather(labels, held)));
        }
        let score = mean_stdev(&scores).0;
        if score > best.1 {
            best = (c, score);
        }
    }
    best.0
}

fn check_labels(labels: &[Label], folds: usize) -> Result<()> {
    let count_a = labels.iter().filter(|&&l| l == Label::A).count();
    if count_a == 0 || count_a == labels.len() {
        return Err(Error::InvalidArgument(
            "classification needs both labels present (single-class input)".into(),
        ));
    }
    if labels.len() < folds.max(10) {
        return Err(Error::InvalidArgument(format!(
            "need at least {} rows for {folds}-fold evaluation, got {}",
            folds.max(10),
            labels.len()
        )));
    }
    Ok(())
}

/// Runs the protocol with split-dependent features: `features(train)` returns one point per
/// row, computed from whatever the training indices allow (e.g. contrast subgraphs mined
/// on the training split only).
pub fn evaluate_protocol(
    labels: &[Label],
    cfg: &EvalConfig,
    protocol: &str,
    mut features: impl FnMut(&[usize]) -> Result<Vec<[f64; 2]>>,
) -> Result<EvalReport> {
    check_labels(labels, cfg.folds)?;
    if cfg.repetitions == 0 || cfg.c_grid.is_empty() {
        return Err(Error::InvalidArgument(
            "repetitions and the C grid must be non-empty".into(),
        ));
    }
    let mut accuracies = Vec::with_capacity(cfg.repetitions);
    let mut seeds = Vec::with_capacity(cfg.repetitions);
    let mut chosen = Vec::with_capacity(cfg.repetitions);
    for rep in 0..cfg.repetitions {
        let seed = stream_rng(cfg.rng_seed, rep as u64 + 1).random::<u64>();
        let (accuracy, c) = run_repetition(labels, cfg, seed, &mut features)?;
        seeds.push(seed);
        accuracies.push(accuracy);
        chosen.push(c);
    }
    let (mean, stdev) = mean_stdev(&accuracies);
    Ok(EvalReport {
        accuracies,
        mean,
        stdev,
        per_repetition_seeds: seeds,
        chosen_hyper_c: chosen,
        protocol: protocol.to_string(),
    })
}

/// One repetition from its seed: `(test accuracy, chosen C)`.
pub fn run_repetition(
    labels: &[Label],
    cfg: &EvalConfig,
    seed: u64,
    features: &mut impl FnMut(&[usize]) -> Result<Vec<[f64; 2]>>,
) -> Result<(f64, f64)> {
    let mut rng = stream_rng(seed, 0);
    let (train, test) = stratified_split(labels, cfg.test_fraction, &mut rng);
    let points = features(&train)?;
    if points.len() != labels.len() {
        return Err(Error::DimensionMismatch(points.len(), labels.len()));
    }
    let c = select_c(&points, labels, &train, cfg, &mut rng);
    let model = ClassifierModel::train(
        &gather(&points, &train),
        &gather(labels, &train),
        c,
        &cfg.svm,
    );
    Ok((model.accuracy(&gather(&points, &test), &gather(labels, &test)), c))
}

/// Protocol on a fixed feature table.
pub fn train_eval(table: &FeatureTable, repetitions: usize, rng_seed: u64) -> Result<EvalReport> {
    let cfg = EvalConfig {
        repetitions,
        rng_seed,
        ..EvalConfig::default()
    };
    train_eval_with(table, &cfg)
}

pub fn train_eval_with(table: &FeatureTable, cfg: &EvalConfig) -> Result<EvalReport> {
    let points = table.points();
    evaluate_protocol(&table.labels(), cfg, "fixed-features", |_| Ok(points.clone()))
}

/// Model on all rows with `C` chosen by cross-validation over all rows; for display only.
pub fn fit_display_model(table: &FeatureTable, cfg: &EvalConfig) -> Result<ClassifierModel> {
    let labels = table.labels();
    check_labels(&labels, cfg.folds)?;
    let points = table.points();
    let all: Vec<usize> = (0..points.len()).collect();
    let mut rng = stream_rng(cfg.rng_seed, 0);
    let c = select_c(&points, &labels, &all, cfg, &mut rng);
    Ok(ClassifierModel::train(&points, &labels, c, &cfg.svm))
}
