//! Single-hidden-layer sigmoid network.
//!
//! Weights are stored row-major per receiving unit: `w_in` has one row of
//! `n_inputs` weights for every hidden unit, `w_out` one row of `n_hidden`
//! weights for every output unit. The JSON form mirrors that layout with
//! nested arrays (see `docs/schemas.md`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logistic squashing function `1 / (1 + e^-z)`.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Derivative of [`sigmoid`] expressed through its output `s = sigmoid(z)`.
#[inline]
pub fn sigmoid_slope(s: f64) -> f64 {
    s * (1.0 - s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub n_inputs: usize,
    pub n_hidden: usize,
    pub n_outputs: usize,
}

impl Topology {
    pub fn new(n_inputs: usize, n_hidden: usize, n_outputs: usize) -> Result<Self> {
        let t = Topology {
            n_inputs,
            n_hidden,
            n_outputs,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_inputs == 0 || self.n_hidden == 0 || self.n_outputs == 0 {
            return Err(Error::Topology(format!(
                "every layer needs at least one unit, got {}-{}-{}",
                self.n_inputs, self.n_hidden, self.n_outputs
            )));
        }
        Ok(())
    }

    /// Total count of weights and biases.
    pub fn parameter_count(&self) -> usize {
        self.n_hidden * (self.n_inputs + 1) + self.n_outputs * (self.n_hidden + 1)
    }
}

/// Values computed by one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Activations {
    pub input: Vec<f64>,
    pub hidden_pre: Vec<f64>,
    pub hidden_post: Vec<f64>,
    pub output_pre: Vec<f64>,
    pub output_post: Vec<f64>,
}

impl Activations {
    pub fn zeros(topology: &Topology) -> Self {
        Activations {
            input: vec![0.0; topology.n_inputs],
            hidden_pre: vec![0.0; topology.n_hidden],
            hidden_post: vec![0.0; topology.n_hidden],
            output_pre: vec![0.0; topology.n_outputs],
            output_post: vec![0.0; topology.n_outputs],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    topology: Topology,
    pub(crate) w_in: Vec<f64>,
    pub(crate) theta_hidden: Vec<f64>,
    pub(crate) w_out: Vec<f64>,
    pub(crate) theta_out: Vec<f64>,
}

impl Network {
    /// Network with every weight and bias set to zero.
    pub fn zeros(topology: Topology) -> Result<Self> {
        topology.validate()?;
        Ok(Network {
            topology,
            w_in: vec![0.0; topology.n_hidden * topology.n_inputs],
            theta_hidden: vec![0.0; topology.n_hidden],
            w_out: vec![0.0; topology.n_outputs * topology.n_hidden],
            theta_out: vec![0.0; topology.n_outputs],
        })
    }

    /// Builds a network from flat row-major parts, checking shapes and finiteness.
    pub fn from_parts(
        topology: Topology,
        w_in: Vec<f64>,
        theta_hidden: Vec<f64>,
        w_out: Vec<f64>,
        theta_out: Vec<f64>,
    ) -> Result<Self> {
        topology.validate()?;
        let checks = [
            ("w_in", topology.n_hidden * topology.n_inputs, w_in.len()),
            ("theta_hidden", topology.n_hidden, theta_hidden.len()),
            ("w_out", topology.n_outputs * topology.n_hidden, w_out.len()),
            ("theta_out", topology.n_outputs, theta_out.len()),
        ];
        for (what, expected, actual) in checks {
            if expected != actual {
                return Err(Error::Dimension {
                    what,
                    expected,
                    actual,
                });
            }
        }
        let net = Network {
            topology,
            w_in,
            theta_hidden,
            w_out,
            theta_out,
        };
        if !net.is_finite() {
            return Err(Error::Data("network contains non-finite weights".into()));
        }
        Ok(net)
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    /// First-layer weights, one row of `n_inputs` per hidden unit.
    pub fn w_in(&self) -> &[f64] {
        &self.w_in
    }

    pub fn theta_hidden(&self) -> &[f64] {
        &self.theta_hidden
    }

    /// Hidden-to-output weights, one row of `n_hidden` per output unit.
    pub fn w_out(&self) -> &[f64] {
        &self.w_out
    }

    pub fn theta_out(&self) -> &[f64] {
        &self.theta_out
    }

    /// Weight on the connection from input `i` to hidden unit `j`.
    pub fn input_weight(&self, i: usize, j: usize) -> f64 {
        self.w_in[j * self.topology.n_inputs + i]
    }

    /// Weight on the connection from hidden unit `j` to output unit `y`.
    pub fn output_weight(&self, j: usize, y: usize) -> f64 {
        self.w_out[y * self.topology.n_hidden + j]
    }

    /// All first-layer weights leaving input `i`, one per hidden unit.
    pub fn input_column(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        let n = self.topology.n_inputs;
        (0..self.topology.n_hidden).map(move |j| self.w_in[j * n + i])
    }

    /// Every parameter in the order `w_in`, `theta_hidden`, `w_out`, `theta_out`.
    pub fn parameters(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.topology.parameter_count());
        p.extend_from_slice(&self.w_in);
        p.extend_from_slice(&self.theta_hidden);
        p.extend_from_slice(&self.w_out);
        p.extend_from_slice(&self.theta_out);
        p
    }

    /// Copy of this network with parameters replaced, in [`Network::parameters`] order.
    pub fn with_parameters(&self, params: &[f64]) -> Result<Self> {
        let t = self.topology;
        if params.len() != t.parameter_count() {
            return Err(Error::Dimension {
                what: "parameter vector",
                expected: t.parameter_count(),
                actual: params.len(),
            });
        }
        let (w_in, rest) = params.split_at(t.n_hidden * t.n_inputs);
        let (theta_hidden, rest) = rest.split_at(t.n_hidden);
        let (w_out, theta_out) = rest.split_at(t.n_outputs * t.n_hidden);
        Network::from_parts(
            t,
            w_in.to_vec(),
            theta_hidden.to_vec(),
            w_out.to_vec(),
            theta_out.to_vec(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.w_in
            .iter()
            .chain(&self.theta_hidden)
            .chain(&self.w_out)
            .chain(&self.theta_out)
            .all(|w| w.is_finite())
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.topology.n_inputs {
            return Err(Error::Dimension {
                what: "input vector",
                expected: self.topology.n_inputs,
                actual: x.len(),
            });
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("input {i} is not finite")));
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Activations> {
        self.check_input(x)?;
        let mut acts = Activations::zeros(&self.topology);
        self.forward_into(x, &mut acts);
        Ok(acts)
    }

    /// Unchecked forward pass reusing `acts`. `x` must have `n_inputs` entries.
    pub(crate) fn forward_into(&self, x: &[f64], acts: &mut Activations) {
        let t = &self.topology;
        acts.input.copy_from_slice(x);
        for j in 0..t.n_hidden {
            let row = &self.w_in[j * t.n_inputs..(j + 1) * t.n_inputs];
            let mut sum = 0.0;
            for (w, &xi) in row.iter().zip(x) {
                // one-hot inputs are mostly zero; skipping them leaves the sum unchanged
                if xi != 0.0 {
                    sum += w * xi;
                }
            }
            let pre = sum + self.theta_hidden[j];
            acts.hidden_pre[j] = pre;
            acts.hidden_post[j] = sigmoid(pre);
        }
        for y in 0..t.n_outputs {
            let row = &self.w_out[y * t.n_hidden..(y + 1) * t.n_hidden];
            let mut sum = 0.0;
            for (w, h) in row.iter().zip(&acts.hidden_post) {
                sum += w * h;
            }
            let pre = sum + self.theta_out[y];
            acts.output_pre[y] = pre;
            acts.output_post[y] = sigmoid(pre);
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(decide(&self.forward(x)?.output_post))
    }
}

/// Decision rule over output activations.
///
/// A single output unit is thresholded at 0.5 (ties go to class 1); several
/// output units pick the argmax, ties going to the lowest index.
pub fn decide(outputs: &[f64]) -> usize {
    if outputs.len() == 1 {
        return usize::from(outputs[0] >= 0.5);
    }
    let mut best = 0;
    for (k, &o) in outputs.iter().enumerate().skip(1) {
        if o > outputs[best] {
            best = k;
        }
    }
    best
}

/// On-disk form of a [`Network`].
#[derive(Debug, Clone, Serialize, Deserialize)]
struct NetworkDoc {
    topology: Topology,
    w_in: Vec<Vec<f64>>,
    theta_hidden: Vec<f64>,
    w_out: Vec<Vec<f64>>,
    theta_out: Vec<f64>,
}

impl Network {
    pub fn to_json(&self) -> Result<String> {
        let t = &self.topology;
        let doc = NetworkDoc {
            topology: *t,
            w_in: self.w_in.chunks(t.n_inputs).map(<[f64]>::to_vec).collect(),
            theta_hidden: self.theta_hidden.clone(),
            w_out: self.w_out.chunks(t.n_hidden).map(<[f64]>::to_vec).collect(),
            theta_out: self.theta_out.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NetworkDoc = serde_json::from_str(text)?;
        let t = doc.topology;
        t.validate()?;
        let flatten = |rows: Vec<Vec<f64>>, what, n_rows: usize, width: usize| {
            if rows.len() != n_rows {
                return Err(Error::Dimension {
                    what,
                    expected: n_rows,
                    actual: rows.len(),
                });
            }
            if let Some(bad) = rows.iter().find(|r| r.len() != width) {
                return Err(Error::Dimension {
                    what,
                    expected: width,
                    actual: bad.len(),
                });
            }
            Ok(rows.concat())
        };
        let w_in = flatten(doc.w_in, "w_in rows", t.n_hidden, t.n_inputs)?;
        let w_out = flatten(doc.w_out, "w_out rows", t.n_outputs, t.n_hidden)?;
        Network::from_parts(t, w_in, doc.theta_hidden, w_out, doc.theta_out)
    }
}
