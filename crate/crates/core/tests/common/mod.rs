//! Independent reference computations for the integration tests. Nothing here
//! calls into the library's forward, backprop or update code.

#![allow(dead_code, clippy::needless_range_loop)]

use iann::data::Instance;
use iann::{Dataset, Network, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Plain nested-array copy of a network's parameters.
#[derive(Debug, Clone)]
pub struct RefNet {
    /// w1[j][i]: input i -> hidden j
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    /// w2[y][j]: hidden j -> output y
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
}

impl RefNet {
    pub fn from_network(net: &Network) -> Self {
        let t = net.topology();
        RefNet {
            w1: (0..t.n_hidden)
                .map(|j| (0..t.n_inputs).map(|i| net.input_weight(i, j)).collect())
                .collect(),
            b1: net.theta_hidden().to_vec(),
            w2: (0..t.n_outputs)
                .map(|y| (0..t.n_hidden).map(|j| net.output_weight(j, y)).collect())
                .collect(),
            b2: net.theta_out().to_vec(),
        }
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.w1.iter().flatten().copied().collect();
        v.extend(&self.b1);
        v.extend(self.w2.iter().flatten());
        v.extend(&self.b2);
        v
    }

    /// Layered sigmoid expression evaluated term by term.
    pub fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let hidden: Vec<f64> = self
            .w1
            .iter()
            .zip(&self.b1)
            .map(|(row, b)| logistic(row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() + b))
            .collect();
        let out = self
            .w2
            .iter()
            .zip(&self.b2)
            .map(|(row, b)| logistic(row.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>() + b))
            .collect();
        (hidden, out)
    }

    /// One plain backprop step, `Δw = α δ X`.
    pub fn step(&mut self, x: &[f64], target: &[f64], lr: f64) {
        let (h, o) = self.forward(x);
        let d_out: Vec<f64> = o
            .iter()
            .zip(target)
            .map(|(o, t)| o * (1.0 - o) * (t - o))
            .collect();
        let d_hid: Vec<f64> = (0..h.len())
            .map(|j| {
                h[j] * (1.0 - h[j]) * (0..o.len()).map(|y| self.w2[y][j] * d_out[y]).sum::<f64>()
            })
            .collect();
        for y in 0..o.len() {
            for j in 0..h.len() {
                self.w2[y][j] += lr * d_out[y] * h[j];
            }
            self.b2[y] += lr * d_out[y];
        }
        for j in 0..h.len() {
            for i in 0..x.len() {
                self.w1[j][i] += lr * d_hid[j] * x[i];
            }
            self.b1[j] += lr * d_hid[j];
        }
    }
}

pub fn half_squared_error(net: &Network, x: &[f64], target: &[f64]) -> f64 {
    let (_, o) = RefNet::from_network(net).forward(x);
    0.5 * o
        .iter()
        .zip(target)
        .map(|(o, t)| (t - o) * (t - o))
        .sum::<f64>()
}

/// Central-difference gradient of `f` over every network parameter.
pub fn fd_gradient(net: &Network, h: f64, f: impl Fn(&Network) -> f64) -> Vec<f64> {
    let p = net.parameters();
    (0..p.len())
        .map(|k| {
            let mut up = p.clone();
            let mut dn = p.clone();
            up[k] += h;
            dn[k] -= h;
            (f(&net.with_parameters(&up).unwrap()) - f(&net.with_parameters(&dn).unwrap()))
                / (2.0 * h)
        })
        .collect()
}

/// `‖a − b‖ / max(‖a‖, ‖b‖)`, zero when both vanish.
pub fn rel_error(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        0.0
    } else {
        norm(&diff) / scale
    }
}

pub fn random_network(rng: &mut ChaCha8Rng, t: Topology, scale: f64) -> Network {
    let mut draw = |n: usize| {
        (0..n)
            .map(|_| rng.gen_range(-scale..scale))
            .collect::<Vec<f64>>()
    };
    Network::from_parts(
        t,
        draw(t.n_hidden * t.n_inputs),
        draw(t.n_hidden),
        draw(t.n_outputs * t.n_hidden),
        draw(t.n_outputs),
    )
    .unwrap()
}

pub fn random_topology(rng: &mut ChaCha8Rng, max: (usize, usize, usize)) -> Topology {
    Topology::new(
        rng.gen_range(1..=max.0),
        rng.gen_range(1..=max.1),
        rng.gen_range(1..=max.2),
    )
    .unwrap()
}

pub fn random_input(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

/// Random real-valued dataset with `classes` labels.
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, inputs: usize, classes: usize) -> Dataset {
    let instances = (0..n)
        .map(|k| Instance {
            x: random_input(rng, inputs),
            class: k % classes,
        })
        .collect();
    Dataset::from_instances(instances, (0..classes).map(|c| format!("c{c}")).collect()).unwrap()
}

pub fn workspace_file(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}
