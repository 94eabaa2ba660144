//! Trains on the splice fixture and ranks positions by learned importance.

use iann::importance::importance_report;
use iann::init::init_iann;
use iann::theory::DomainTheory;
use iann::train::{train, TrainConfig};
use iann::{Dataset, Topology};

fn main() -> iann::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/core/tests/fixtures/splice40.data".into());
    let data = Dataset::load(&path)?;
    let theory = DomainTheory::splice();
    let per_position = theory.fri();
    let fri = data.expand_fri(&per_position)?;
    let net = init_iann(
        Topology::new(data.n_inputs(), 12, data.output_units())?,
        &fri,
        0,
    )?;
    let cfg = TrainConfig {
        epochs: 50,
        ..TrainConfig::default()
    };
    let trained = train(net, &data, &cfg, Some(&fri))?.network;

    let report = importance_report(&trained, &data, &per_position)?;
    let mut rows = report.rows.clone();
    rows.sort_by(|a, b| b.avg_abs_weight.total_cmp(&a.avg_abs_weight));
    println!(
        "{:>8} {:>5} {:>10} {:>12}",
        "position", "fri", "mean |w|", "dependency"
    );
    for r in rows.iter().take(12) {
        println!(
            "{:>8} {:>5} {:>10.4} {:>12.6}",
            theory.frame.label_of(r.feature_index),
            r.fri,
            r.avg_abs_weight,
            r.dependency_mean_abs
        );
    }
    println!("rank agreement with FRI: {:?}", report.fri_agreement);
    Ok(())
}
