mod common;

use iann::importance::empirical_importance;
use iann::init::{init_iann, init_standard};
use iann::{FriVector, Topology};
use proptest::prelude::*;

/// Mean |w| of first-layer weights over many hidden units.
fn mean_abs_first_layer(fri: &FriVector, units: usize, seed: u64) -> Vec<f64> {
    let net = init_iann(Topology::new(fri.len(), units, 1).unwrap(), fri, seed).unwrap();
    empirical_importance(&net).avg_abs_weight
}

#[test]
fn high_importance_raises_mean_magnitude() {
    // each column holds 10^5 draws
    let fri = FriVector::new(vec![0.9, 0.3]).unwrap();
    let m = mean_abs_first_layer(&fri, 100_000, 1);
    assert!(m[0] - m[1] > 0.05, "{m:?}");
    // selected with probability 1/2: 0.5 I + 0.5 * 0.25
    assert!((m[0] - 0.575).abs() < 0.01, "{m:?}");
    assert!((m[1] - 0.275).abs() < 0.01, "{m:?}");
}

#[test]
fn uniform_high_importance_beats_standard_init() {
    let t = Topology::new(10, 10_000, 1).unwrap();
    let iann = init_iann(t, &FriVector::uniform(10, 0.9).unwrap(), 2).unwrap();
    let std = init_standard(t, 2).unwrap();
    let mean = |w: &[f64]| w.iter().map(|x| x.abs()).sum::<f64>() / w.len() as f64;
    assert!(mean(iann.w_in()) > mean(std.w_in()) + 0.05);
    assert!((mean(std.w_in()) - 0.25).abs() < 0.01);
}

#[test]
fn mean_magnitude_grows_with_importance() {
    let levels = [0.25, 0.4, 0.55, 0.7, 0.85, 1.0];
    let fri = FriVector::new(levels.to_vec()).unwrap();
    let m = mean_abs_first_layer(&fri, 100_000, 3);
    for w in m.windows(2) {
        assert!(w[1] > w[0], "{m:?}");
    }
}

#[test]
fn selection_reconstructs_from_magnitudes() {
    // with FRI 1 every selected weight has magnitude exactly 1, unselected ones at most 0.5
    let n = 12;
    let net = init_iann(Topology::new(n, 5_000, 1).unwrap(), &FriVector::ones(n), 4).unwrap();
    let mut size_hist = vec![0usize; n + 1];
    for row in net.w_in().chunks(n) {
        let c = row.iter().filter(|w| w.abs() == 1.0).count();
        assert!(row.iter().all(|w| w.abs() == 1.0 || w.abs() <= 0.5));
        size_hist[c] += 1;
    }
    // subset size is uniform on 0..=n
    let expected = 5_000.0 / (n + 1) as f64;
    for (c, &count) in size_hist.iter().enumerate() {
        assert!(
            (count as f64 - expected).abs() < 0.25 * expected,
            "size {c}: {count}"
        );
    }
    // signs are balanced
    let ones: Vec<f64> = net
        .w_in()
        .iter()
        .copied()
        .filter(|w| w.abs() == 1.0)
        .collect();
    let pos = ones.iter().filter(|w| **w > 0.0).count() as f64 / ones.len() as f64;
    assert!((pos - 0.5).abs() < 0.02);
}

#[test]
fn initial_importance_follows_fri() {
    let fri = FriVector::new(vec![1.0, 0.3]).unwrap();
    let m = mean_abs_first_layer(&fri, 10_000, 5);
    assert!(m[0] > m[1]);
}

proptest! {
    #[test]
    fn weights_are_signed_importance_or_small(
        fri in proptest::collection::vec(0.0f64..=1.0, 1..12),
        hidden in 1usize..20,
        seed in any::<u64>(),
    ) {
        let n = fri.len();
        let f = FriVector::new(fri.clone()).unwrap();
        let net = init_iann(Topology::new(n, hidden, 2).unwrap(), &f, seed).unwrap();
        for j in 0..hidden {
            for (k, imp) in fri.iter().enumerate() {
                let w = net.input_weight(k, j);
                prop_assert!(w.abs() == *imp || (-0.5..=0.5).contains(&w));
            }
        }
        prop_assert!(net.theta_hidden().iter().chain(net.w_out()).chain(net.theta_out())
            .all(|w| (-0.5..=0.5).contains(w)));
    }
}
