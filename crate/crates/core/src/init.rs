//! Weight initialization.
//!
//! [`init_standard`] draws every parameter uniformly from `[-0.5, 0.5]`.
//! [`init_iann`] does the same except for the first layer, where each hidden
//! unit picks a random subset of input features and sets those connections to
//! `±I_k`; the remaining connections use the half-width range. Setting every
//! first-layer weight to its FRI plus noise was reported not to work, so it is
//! not offered.
//!
//! Both use one ChaCha8 stream per network. Draw order: first-layer weights
//! hidden unit by hidden unit (for IANN: subset size, subset, then per input
//! a sign or a uniform draw), then hidden biases, output weights, output biases.

use rand::distributions::{Distribution, Uniform};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fri::FriVector;
use crate::net::{Network, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitConfig {
    /// Range of the selected features' weights; with FRI in `[0, 1]` they land in `[-1, 1]`.
    pub selected_range_halfwidth: f64,
    pub unselected_halfwidth: f64,
    pub seed: u64,
}

impl InitConfig {
    pub fn new(seed: u64) -> Self {
        InitConfig {
            selected_range_halfwidth: 1.0,
            unselected_halfwidth: 0.5,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.selected_range_halfwidth > 0.0 && self.selected_range_halfwidth.is_finite()) {
            return Err(Error::Config("selected half-width must be positive".into()));
        }
        if self.unselected_halfwidth != self.selected_range_halfwidth / 2.0 {
            return Err(Error::Config(
                "unselected half-width must be half the selected half-width".into(),
            ));
        }
        Ok(())
    }
}

fn fill_uniform(rng: &mut ChaCha8Rng, dist: &Uniform<f64>, out: &mut [f64]) {
    for w in out {
        *w = dist.sample(rng);
    }
}

fn fill_upper_layers(rng: &mut ChaCha8Rng, dist: &Uniform<f64>, net: &mut Network) {
    fill_uniform(rng, dist, &mut net.theta_hidden);
    fill_uniform(rng, dist, &mut net.w_out);
    fill_uniform(rng, dist, &mut net.theta_out);
}

pub fn init_standard(topology: Topology, seed: u64) -> Result<Network> {
    let mut net = Network::zeros(topology)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-0.5, 0.5);
    fill_uniform(&mut rng, &dist, &mut net.w_in);
    fill_upper_layers(&mut rng, &dist, &mut net);
    Ok(net)
}

pub fn init_iann(topology: Topology, fri: &FriVector, seed: u64) -> Result<Network> {
    init_iann_with(topology, fri, &InitConfig::new(seed))
}

pub fn init_iann_with(topology: Topology, fri: &FriVector, config: &InitConfig) -> Result<Network> {
    config.validate()?;
    fri.check_len(topology.n_inputs, "FRI for network inputs")?;
    let mut net = Network::zeros(topology)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let half = config.unselected_halfwidth;
    let dist = Uniform::new_inclusive(-half, half);
    let scale = config.selected_range_halfwidth;
    let n = topology.n_inputs;
    let mut selected = vec![false; n];
    for row in net.w_in.chunks_mut(n) {
        let c = rng.gen_range(0..=n);
        selected.fill(false);
        for k in index::sample(&mut rng, n, c) {
            selected[k] = true;
        }
        for (k, w) in row.iter_mut().enumerate() {
            *w = if selected[k] {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                fri[k] * scale * sign
            } else {
                dist.sample(&mut rng)
            };
        }
    }
    fill_upper_layers(&mut rng, &dist, &mut net);
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo(n: usize, h: usize) -> Topology {
        Topology::new(n, h, 1).unwrap()
    }

    #[test]
    fn standard_is_deterministic_and_bounded() {
        let t = Topology::new(10, 7, 3).unwrap();
        let a = init_standard(t, 42).unwrap();
        assert_eq!(a, init_standard(t, 42).unwrap());
        assert_ne!(a, init_standard(t, 43).unwrap());
        assert!(a.parameters().iter().all(|w| (-0.5..=0.5).contains(w)));
    }

    #[test]
    fn standard_mean_is_centered() {
        let net = init_standard(topo(100, 100), 7).unwrap();
        let w = net.w_in();
        assert_eq!(w.len(), 10_000);
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn zero_importance_selected_gives_zero() {
        let fri = FriVector::new(vec![0.0; 5]).unwrap();
        let net = init_iann(topo(5, 200), &fri, 3).unwrap();
        // with 200 units some selections are certain; every selected weight is ±0
        let zeros = net.w_in().iter().filter(|w| **w == 0.0).count();
        assert!(zeros > 0);
    }

    #[test]
    fn unit_importance_selected_gives_unit_magnitude() {
        let fri = FriVector::ones(6);
        let net = init_iann(topo(6, 100), &fri, 9).unwrap();
        let mut units = 0;
        for &w in net.w_in() {
            assert!(w.abs() == 1.0 || w.abs() <= 0.5);
            units += usize::from(w.abs() == 1.0);
        }
        assert!(units > 0);
    }

    #[test]
    fn magnitude_bound_holds() {
        let fri = FriVector::new(vec![0.9, 0.2, 0.55, 0.0, 1.0]).unwrap();
        let net = init_iann(topo(5, 300), &fri, 11).unwrap();
        for j in 0..300 {
            for k in 0..5 {
                assert!(net.input_weight(k, j).abs() <= fri[k].max(0.5));
            }
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let fri = FriVector::ones(3);
        assert!(matches!(
            init_iann(topo(4, 2), &fri, 0),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn config_invariant() {
        let mut c = InitConfig::new(0);
        assert!(c.validate().is_ok());
        c.unselected_halfwidth = 0.4;
        assert!(c.validate().is_err());
    }

    #[test]
    fn iann_is_deterministic() {
        let fri = FriVector::new(vec![0.9, 0.3, 0.6]).unwrap();
        let t = Topology::new(3, 8, 2).unwrap();
        let a = init_iann(t, &fri, 5).unwrap();
        let b = init_iann(t, &fri, 5).unwrap();
        let bits = |n: &Network| {
            n.parameters()
                .iter()
                .map(|w| w.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(a, init_iann(t, &fri, 6).unwrap());
    }
}
