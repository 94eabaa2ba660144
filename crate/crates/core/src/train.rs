//! Online backpropagation with importance-scaled first-layer updates.
//!
//! For a connection from input `i` into hidden unit `j` the change is
//! `α · δ_j · x_i · I_i`; every other parameter (hidden biases, output layer)
//! uses `I = 1`. With no FRI, or FRI ≡ 1, this is plain backprop for squared
//! error on sigmoid units. Increments are always evaluated as
//! `((α · δ) · x) · I`, so scaling by FRI changes each increment by exactly
//! the factor `I_i`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fri::FriVector;
use crate::net::{sigmoid_slope, Activations, Network};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    pub shuffle_each_epoch: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 100,
            seed: 0,
            shuffle_each_epoch: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deltas {
    pub delta_hidden: Vec<f64>,
    pub delta_output: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainTrace {
    /// Mean squared error per epoch, averaged over examples and output units,
    /// measured on each example just before its update.
    pub epoch_mse: Vec<f64>,
    pub network: Network,
}

impl TrainTrace {
    /// CSV with header `epoch,mse`, epochs numbered from 1.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["epoch", "mse"])?;
        for (e, mse) in self.epoch_mse.iter().enumerate() {
            w.write_record([(e + 1).to_string(), mse.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Sigmoid/squared-error deltas for one example.
pub fn backprop_deltas(net: &Network, acts: &Activations, target: &[f64]) -> Result<Deltas> {
    let t = net.topology();
    let dims = [
        ("target", t.n_outputs, target.len()),
        ("output activations", t.n_outputs, acts.output_post.len()),
        ("hidden activations", t.n_hidden, acts.hidden_post.len()),
    ];
    for (what, expected, actual) in dims {
        if expected != actual {
            return Err(Error::Dimension {
                what,
                expected,
                actual,
            });
        }
    }
    let mut d = Deltas {
        delta_hidden: vec![0.0; t.n_hidden],
        delta_output: vec![0.0; t.n_outputs],
    };
    deltas_into(net, acts, target, &mut d);
    Ok(d)
}

fn deltas_into(net: &Network, acts: &Activations, target: &[f64], d: &mut Deltas) {
    let t = net.topology();
    for (y, (&o, &goal)) in acts.output_post.iter().zip(target).enumerate() {
        d.delta_output[y] = sigmoid_slope(o) * (goal - o);
    }
    for j in 0..t.n_hidden {
        let mut downstream = 0.0;
        for y in 0..t.n_outputs {
            downstream += net.w_out[y * t.n_hidden + j] * d.delta_output[y];
        }
        d.delta_hidden[j] = sigmoid_slope(acts.hidden_post[j]) * downstream;
    }
}

/// Change applied to one first-layer weight.
#[inline]
pub fn weight_increment(learning_rate: f64, delta: f64, x: f64, importance: f64) -> f64 {
    learning_rate * delta * x * importance
}

/// Applies one update in place. `input_fri = None` is the unscaled rule.
pub fn iann_update(
    net: &mut Network,
    deltas: &Deltas,
    acts: &Activations,
    learning_rate: f64,
    input_fri: Option<&FriVector>,
) -> Result<()> {
    let t = *net.topology();
    if let Some(f) = input_fri {
        f.check_len(t.n_inputs, "FRI for network inputs")?;
    }
    let dims = [
        ("input activations", t.n_inputs, acts.input.len()),
        ("hidden activations", t.n_hidden, acts.hidden_post.len()),
        ("hidden deltas", t.n_hidden, deltas.delta_hidden.len()),
        ("output deltas", t.n_outputs, deltas.delta_output.len()),
    ];
    for (what, expected, actual) in dims {
        if expected != actual {
            return Err(Error::Dimension {
                what,
                expected,
                actual,
            });
        }
    }
    if apply_update(
        net,
        deltas,
        acts,
        learning_rate,
        input_fri.map(|f| f.values()),
    ) {
        Ok(())
    } else {
        Err(Error::Data("update produced non-finite weights".into()))
    }
}

/// Returns false if any updated parameter became non-finite.
fn apply_update(
    net: &mut Network,
    deltas: &Deltas,
    acts: &Activations,
    lr: f64,
    fri: Option<&[f64]>,
) -> bool {
    let t = *net.topology();
    let mut finite = true;

    for y in 0..t.n_outputs {
        let step = lr * deltas.delta_output[y];
        let row = &mut net.w_out[y * t.n_hidden..(y + 1) * t.n_hidden];
        for (w, &h) in row.iter_mut().zip(&acts.hidden_post) {
            *w += step * h;
            finite &= w.is_finite();
        }
        net.theta_out[y] += step;
        finite &= net.theta_out[y].is_finite();
    }

    for j in 0..t.n_hidden {
        let step = lr * deltas.delta_hidden[j];
        let row = &mut net.w_in[j * t.n_inputs..(j + 1) * t.n_inputs];
        match fri {
            Some(fri) => {
                for ((w, &x), &imp) in row.iter_mut().zip(&acts.input).zip(fri) {
                    // zero input or zero importance leaves the weight bit-identical
                    if x != 0.0 && imp != 0.0 {
                        *w += step * x * imp;
                        finite &= w.is_finite();
                    }
                }
            }
            None => {
                for (w, &x) in row.iter_mut().zip(&acts.input) {
                    if x != 0.0 {
                        *w += step * x;
                        finite &= w.is_finite();
                    }
                }
            }
        }
        net.theta_hidden[j] += step;
        finite &= net.theta_hidden[j].is_finite();
    }
    finite
}

/// Example visiting order: one ChaCha8 stream reshuffles the previous
/// epoch's order at the start of every epoch.
#[derive(Debug, Clone)]
pub struct EpochOrder {
    order: Vec<usize>,
    rng: ChaCha8Rng,
    shuffle: bool,
}

impl EpochOrder {
    pub fn new(indices: &[usize], seed: u64, shuffle: bool) -> Self {
        EpochOrder {
            order: indices.to_vec(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            shuffle,
        }
    }

    pub fn next_epoch(&mut self) -> &[usize] {
        if self.shuffle {
            self.order.shuffle(&mut self.rng);
        }
        &self.order
    }
}

/// Trains on every instance of `data`.
pub fn train(
    net: Network,
    data: &Dataset,
    config: &TrainConfig,
    input_fri: Option<&FriVector>,
) -> Result<TrainTrace> {
    let all: Vec<usize> = (0..data.len()).collect();
    train_subset(net, data, &all, config, input_fri, |_, _| {})
}

/// Trains on `indices` of `data`, calling `observe(epoch, &net)` after every epoch.
pub fn train_subset(
    mut net: Network,
    data: &Dataset,
    indices: &[usize],
    config: &TrainConfig,
    input_fri: Option<&FriVector>,
    mut observe: impl FnMut(usize, &Network),
) -> Result<TrainTrace> {
    config.validate()?;
    let t = *net.topology();
    if indices.is_empty() {
        return Err(Error::Data("training set is empty".into()));
    }
    if data.n_inputs() != t.n_inputs {
        return Err(Error::Dimension {
            what: "dataset inputs vs network inputs",
            expected: t.n_inputs,
            actual: data.n_inputs(),
        });
    }
    let classes = data.class_names.len();
    if !(t.n_outputs == classes || (t.n_outputs == 1 && classes == 2)) {
        return Err(Error::Dimension {
            what: "dataset classes vs network outputs",
            expected: t.n_outputs,
            actual: classes,
        });
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= data.len()) {
        return Err(Error::Data(format!("instance index {bad} out of range")));
    }
    if let Some(f) = input_fri {
        f.check_len(t.n_inputs, "FRI for network inputs")?;
    }
    let fri = input_fri.map(|f| f.values());

    let targets: Vec<Vec<f64>> = (0..classes)
        .map(|c| data.target_for(c, t.n_outputs))
        .collect();
    let mut acts = Activations::zeros(&t);
    let mut deltas = Deltas {
        delta_hidden: vec![0.0; t.n_hidden],
        delta_output: vec![0.0; t.n_outputs],
    };
    let mut order = EpochOrder::new(indices, config.seed, config.shuffle_each_epoch);
    let mut epoch_mse = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let mut sq_err = 0.0;
        for &idx in order.next_epoch() {
            let inst = &data.instances[idx];
            let target = &targets[inst.class];
            net.forward_into(&inst.x, &mut acts);
            for (o, goal) in acts.output_post.iter().zip(target) {
                sq_err += (goal - o) * (goal - o);
            }
            deltas_into(&net, &acts, target, &mut deltas);
            if !apply_update(&mut net, &deltas, &acts, config.learning_rate, fri) {
                return Err(Error::NonFinite {
                    epoch: epoch + 1,
                    example: idx,
                });
            }
        }
        epoch_mse.push(sq_err / (indices.len() * t.n_outputs) as f64);
        observe(epoch + 1, &net);
    }
    Ok(TrainTrace {
        epoch_mse,
        network: net,
    })
}
