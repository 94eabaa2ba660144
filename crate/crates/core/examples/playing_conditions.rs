//! FRI on a seven-feature "should we play?" problem.
//!
//! The data is synthetic: play happens when the sky is clear, temperature and
//! humidity are moderate and the wind is calm. Date and road traffic are noise
//! and get FRI 0, so their first-layer weights never move.

use iann::data::Instance;
use iann::importance::{empirical_importance, fri_agreement};
use iann::init::{init_iann, init_standard};
use iann::train::{train, TrainConfig};
use iann::{Dataset, FriVector, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FEATURES: [&str; 7] = [
    "sky",
    "temperature",
    "humidity",
    "wind",
    "date",
    "road traffic",
    "season",
];

fn make_data(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = (0..n)
        .map(|_| {
            let x: Vec<f64> = (0..7).map(|_| rng.gen_range(0.0..1.0)).collect();
            let score = 0.7 * x[0]
                + (1.0 - (x[1] - 0.5).abs() * 2.0)
                + (1.0 - x[2])
                + 0.7 * (1.0 - x[3])
                + 0.3 * x[6];
            Instance {
                x,
                class: usize::from(score > 2.0),
            }
        })
        .collect();
    Dataset::from_instances(instances, vec!["stay in".into(), "play".into()]).unwrap()
}

fn accuracy(net: &iann::Network, data: &Dataset) -> f64 {
    let hits = data
        .instances
        .iter()
        .filter(|i| net.predict(&i.x).unwrap() == i.class)
        .count();
    100.0 * hits as f64 / data.len() as f64
}

fn main() -> iann::Result<()> {
    let fri = FriVector::new(vec![0.7, 1.0, 1.0, 0.7, 0.0, 0.0, 0.3])?;
    let train_set = make_data(300, 1);
    let test_set = make_data(1000, 2);
    let topology = Topology::new(7, 5, 1)?;
    let cfg = TrainConfig {
        learning_rate: 0.3,
        epochs: 200,
        ..TrainConfig::default()
    };

    let start = init_iann(topology, &fri, 7)?;
    let iann = train(start.clone(), &train_set, &cfg, Some(&fri))?.network;
    let plain = train(init_standard(topology, 7)?, &train_set, &cfg, None)?.network;

    println!(
        "test accuracy: iann {:.1}%, backprop {:.1}%",
        accuracy(&iann, &test_set),
        accuracy(&plain, &test_set)
    );
    let imp = empirical_importance(&iann).avg_abs_weight;
    println!(
        "{:<14} {:>5} {:>10} {:>8}",
        "feature", "fri", "mean |w|", "frozen"
    );
    for (k, name) in FEATURES.iter().enumerate() {
        let frozen = start.input_column(k).eq(iann.input_column(k));
        println!("{name:<14} {:>5} {:>10.4} {:>8}", fri[k], imp[k], frozen);
    }
    println!("rank agreement with FRI: {:?}", fri_agreement(&iann, &fri)?);
    Ok(())
}
