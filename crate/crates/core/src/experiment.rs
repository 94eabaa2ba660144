//! Cross-validation and learning-curve experiments.
//!
//! Every (seed, fold) or (size, seed) job gets its own network and RNG
//! streams, derived from the job coordinates, so jobs run in parallel and
//! results are assembled in job order. Reports are identical run to run.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::data::{learning_curve_split, stratified_kfold, Dataset};
use crate::error::{Error, Result};
use crate::fri::FriVector;
use crate::init::{init_iann, init_standard};
use crate::net::{decide, Network, Topology};
use crate::train::{train_subset, TrainConfig};

/// How a network is initialized and trained.
#[derive(Debug, Clone, PartialEq)]
pub struct Method {
    pub name: String,
    /// FRI over network inputs for the first-layer initialization; `None` is uniform init.
    pub init_fri: Option<FriVector>,
    /// FRI over network inputs for the update rule; `None` is plain backprop.
    pub update_fri: Option<FriVector>,
}

impl Method {
    pub fn backprop() -> Self {
        Method {
            name: "backprop".into(),
            init_fri: None,
            update_fri: None,
        }
    }

    /// FRI-based initialization plus the importance-scaled update.
    pub fn iann(input_fri: FriVector) -> Self {
        Method {
            name: "iann".into(),
            init_fri: Some(input_fri.clone()),
            update_fri: Some(input_fri),
        }
    }

    fn init(&self, topology: Topology, seed: u64) -> Result<Network> {
        match &self.init_fri {
            Some(fri) => init_iann(topology, fri, seed),
            None => init_standard(topology, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub hidden: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub folds: usize,
    pub seeds: Vec<u64>,
    pub shuffle_each_epoch: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            hidden: 23,
            epochs: 100,
            learning_rate: 0.1,
            folds: 10,
            seeds: (0..10).collect(),
            shuffle_each_epoch: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden == 0 {
            return Err(Error::Config("hidden units must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        TrainConfig {
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            seed: 0,
            shuffle_each_epoch: self.shuffle_each_epoch,
        }
        .validate()
    }

    fn train_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            seed,
            shuffle_each_epoch: self.shuffle_each_epoch,
        }
    }
}

const STREAM_SPLIT: u64 = 1;
const STREAM_INIT: u64 = 2;
const STREAM_ORDER: u64 = 3;

/// Mixes a base seed with job coordinates (SplitMix64 finalizer).
pub fn derive_seed(base: u64, job: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(job.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Published accuracies, carried in reports for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PublishedTable {
    pub task: &'static str,
    pub note: &'static str,
    pub entries: &'static [(&'static str, f64)],
}

pub const PUBLISHED_PROMOTER: PublishedTable = PublishedTable {
    task: "promoter",
    note: "published, not reproduced",
    entries: &[
        ("IANN", 94.97),
        ("Backpropagation", 93.45),
        ("SVM", 89.74),
        ("C4.5", 89.95),
        ("Nearest neighbour (k=3)", 90.49),
        ("KBANN", 93.70),
    ],
};

pub const PUBLISHED_SPLICE: PublishedTable = PublishedTable {
    task: "splice-junction",
    note: "published, not reproduced",
    entries: &[
        ("IANN", 94.83),
        ("Backpropagation", 93.23),
        ("SVM", 88.77),
        ("C4.5", 90.86),
        ("Nearest neighbour (k=20)", 87.28),
        ("KBANN", 93.68),
    ],
};

/// Published table for a recognisable task (57-position binary or 60-position 3-class).
pub fn published_for(data: &Dataset) -> Option<PublishedTable> {
    match (data.positions, data.class_names.len()) {
        (57, 2) => Some(PUBLISHED_PROMOTER),
        (60, 3) => Some(PUBLISHED_SPLICE),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub seed: u64,
    pub fold: usize,
    pub test_size: usize,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub method: String,
    pub config: RunConfig,
    pub instances: usize,
    pub class_names: Vec<String>,
    pub folds: Vec<FoldResult>,
    /// Mean fold accuracy per seed, in seed order.
    pub seed_means: Vec<f64>,
    /// Mean of the per-seed fold means, in percent.
    pub mean_accuracy: f64,
    /// Sample standard deviation of all fold accuracies.
    pub fold_std: f64,
    /// Sample standard deviation of the per-seed means (0 for one seed).
    pub seed_std: f64,
    /// Correct over tested, pooled over every fold and seed.
    pub pooled_accuracy: f64,
    /// Rows are true classes, columns predicted classes, summed over folds and seeds.
    pub confusion: Vec<Vec<usize>>,
    pub notes: Vec<String>,
    pub published: Option<PublishedTable>,
}

impl EvalReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Initial and trained network of one cross-validation job.
#[derive(Debug, Clone)]
pub struct FoldModels {
    pub seed: u64,
    pub fold: usize,
    pub initial: Network,
    pub trained: Network,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_std(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn topology_for(data: &Dataset, hidden: usize) -> Result<Topology> {
    Topology::new(data.n_inputs(), hidden, data.output_units())
}

fn check_method(method: &Method, data: &Dataset) -> Result<()> {
    for fri in [&method.init_fri, &method.update_fri].into_iter().flatten() {
        fri.check_len(data.n_inputs(), "FRI for network inputs")?;
    }
    Ok(())
}

/// Confusion matrix of `net` on `indices`.
pub fn confusion(net: &Network, data: &Dataset, indices: &[usize]) -> Result<Vec<Vec<usize>>> {
    let k = data.class_names.len();
    let mut m = vec![vec![0; k]; k];
    for &i in indices {
        let inst = &data.instances[i];
        let out = net.forward(&inst.x)?;
        m[inst.class][decide(&out.output_post)] += 1;
    }
    Ok(m)
}

pub fn run_cross_validation(
    data: &Dataset,
    method: &Method,
    config: &RunConfig,
) -> Result<EvalReport> {
    run_cross_validation_detailed(data, method, config).map(|(report, _)| report)
}

/// Cross-validation returning the per-job networks alongside the report.
pub fn run_cross_validation_detailed(
    data: &Dataset,
    method: &Method,
    config: &RunConfig,
) -> Result<(EvalReport, Vec<FoldModels>)> {
    config.validate()?;
    data.validate()?;
    check_method(method, data)?;
    let topology = topology_for(data, config.hidden)?;

    let plans = config
        .seeds
        .iter()
        .map(|&s| stratified_kfold(data, config.folds, derive_seed(s, 0, STREAM_SPLIT)))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..config.seeds.len())
        .flat_map(|s| (0..config.folds).map(move |f| (s, f)))
        .collect();

    let outcomes = jobs
        .par_iter()
        .map(|&(s, f)| {
            let seed = config.seeds[s];
            let job = f as u64;
            let initial = method.init(topology, derive_seed(seed, job, STREAM_INIT))?;
            let train_idx = plans[s].training_indices(f);
            let trace = train_subset(
                initial.clone(),
                data,
                &train_idx,
                &config.train_config(derive_seed(seed, job, STREAM_ORDER)),
                method.update_fri.as_ref(),
                |_, _| {},
            )?;
            let m = confusion(&trace.network, data, &plans[s].folds[f])?;
            Ok((m, initial, trace.network))
        })
        .collect::<Result<Vec<_>>>()?;

    let k = data.class_names.len();
    let mut total = vec![vec![0; k]; k];
    let mut folds = Vec::with_capacity(jobs.len());
    let mut models = Vec::with_capacity(jobs.len());
    for (&(s, f), (m, initial, trained)) in jobs.iter().zip(outcomes) {
        let test_size: usize = m.iter().flatten().sum();
        let correct: usize = (0..k).map(|c| m[c][c]).sum();
        for (row, add) in total.iter_mut().zip(&m) {
            for (a, b) in row.iter_mut().zip(add) {
                *a += b;
            }
        }
        folds.push(FoldResult {
            seed: config.seeds[s],
            fold: f,
            test_size,
            correct,
            accuracy: 100.0 * correct as f64 / test_size as f64,
        });
        models.push(FoldModels {
            seed: config.seeds[s],
            fold: f,
            initial,
            trained,
        });
    }

    let seed_means: Vec<f64> = folds
        .chunks(config.folds)
        .map(|c| mean(&c.iter().map(|r| r.accuracy).collect::<Vec<_>>()))
        .collect();
    let fold_acc: Vec<f64> = folds.iter().map(|r| r.accuracy).collect();
    let tested: usize = total.iter().flatten().sum();
    let correct: usize = (0..k).map(|c| total[c][c]).sum();

    let report = EvalReport {
        method: method.name.clone(),
        config: config.clone(),
        instances: data.len(),
        class_names: data.class_names.clone(),
        mean_accuracy: mean(&seed_means),
        fold_std: sample_std(&fold_acc),
        seed_std: sample_std(&seed_means),
        seed_means,
        pooled_accuracy: 100.0 * correct as f64 / tested as f64,
        confusion: total,
        folds,
        notes: Vec::new(),
        published: published_for(data),
    };
    Ok((report, models))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub train_size: usize,
    pub seed: u64,
    pub error_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveMean {
    pub train_size: usize,
    pub mean_error_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveReport {
    pub method: String,
    pub config: RunConfig,
    pub population: usize,
    pub points: Vec<CurvePoint>,
    pub means: Vec<CurveMean>,
}

impl CurveReport {
    /// CSV with header `size,seed,error_pct`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["size", "seed", "error_pct"])?;
        for p in &self.points {
            w.write_record([
                p.train_size.to_string(),
                p.seed.to_string(),
                p.error_pct.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn mean_at(&self, train_size: usize) -> Option<f64> {
        self.means
            .iter()
            .find(|m| m.train_size == train_size)
            .map(|m| m.mean_error_pct)
    }
}

/// Test error for each training-set size and seed; `config.folds` is unused.
pub fn run_learning_curve(
    data: &Dataset,
    method: &Method,
    config: &RunConfig,
    sizes: &[usize],
) -> Result<CurveReport> {
    config.validate()?;
    data.validate()?;
    check_method(method, data)?;
    if sizes.is_empty() {
        return Err(Error::Config(
            "curve needs at least one training size".into(),
        ));
    }
    let topology = topology_for(data, config.hidden)?;
    let jobs: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&n| config.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let splits = jobs
        .iter()
        .map(|&(n, s)| learning_curve_split(data, n, derive_seed(s, n as u64, STREAM_SPLIT)))
        .collect::<Result<Vec<_>>>()?;

    let errors = jobs
        .par_iter()
        .zip(&splits)
        .map(|(&(n, seed), split)| {
            let job = n as u64;
            let net = method.init(topology, derive_seed(seed, job, STREAM_INIT))?;
            let trace = train_subset(
                net,
                data,
                &split.train,
                &config.train_config(derive_seed(seed, job, STREAM_ORDER)),
                method.update_fri.as_ref(),
                |_, _| {},
            )?;
            let m = confusion(&trace.network, data, &split.test)?;
            let correct: usize = (0..m.len()).map(|c| m[c][c]).sum();
            Ok(100.0 - 100.0 * correct as f64 / split.test.len() as f64)
        })
        .collect::<Result<Vec<f64>>>()?;

    let points: Vec<CurvePoint> = jobs
        .iter()
        .zip(&errors)
        .map(|(&(train_size, seed), &error_pct)| CurvePoint {
            train_size,
            seed,
            error_pct,
        })
        .collect();
    let means = sizes
        .iter()
        .enumerate()
        .map(|(i, &train_size)| {
            let chunk = &errors[i * config.seeds.len()..(i + 1) * config.seeds.len()];
            CurveMean {
                train_size,
                mean_error_pct: mean(chunk),
            }
        })
        .collect();
    Ok(CurveReport {
        method: method.name.clone(),
        config: config.clone(),
        population: data.len(),
        points,
        means,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Cv,
    Curve,
    Importance,
    Train,
}

/// Everything needed to run one experiment from the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub mode: Mode,
    pub data: PathBuf,
    /// Per-position FRI; `None` runs plain backprop.
    pub fri: Option<FriVector>,
    pub run: RunConfig,
    pub sizes: Vec<usize>,
    pub model: Option<PathBuf>,
    pub out: PathBuf,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.run.validate()?;
        match self.mode {
            Mode::Cv if self.run.folds < 2 => Err(Error::Config(
                "cross-validation needs at least 2 folds".into(),
            )),
            Mode::Curve if self.sizes.is_empty() => {
                Err(Error::Config("curve needs --sizes".into()))
            }
            Mode::Importance if self.model.is_none() || self.fri.is_none() => Err(Error::Config(
                "importance needs --model and an FRI source".into(),
            )),
            _ => Ok(()),
        }
    }
}
