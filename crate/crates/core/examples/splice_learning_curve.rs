//! Test error against training-set size on the full splice population.
//!
//! `cargo run --release --example splice_learning_curve [-- data/splice.data] > curve.csv`

use iann::experiment::{run_learning_curve, Method, RunConfig};
use iann::theory::DomainTheory;
use iann::Dataset;

fn main() -> iann::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "data/splice.data".into());
    let data = Dataset::load(&path)?;
    let fri = data.expand_fri(&DomainTheory::splice().fri())?;
    let config = RunConfig {
        hidden: 24,
        seeds: (0..3).collect(),
        ..RunConfig::default()
    };
    let sizes = [50, 100, 200, 400, 700, 1000];

    for method in [Method::iann(fri), Method::backprop()] {
        let curve = run_learning_curve(&data, &method, &config, &sizes)?;
        for m in &curve.means {
            eprintln!(
                "{:<9} {:>5} {:>6.2}%",
                curve.method, m.train_size, m.mean_error_pct
            );
        }
        print!("{}", curve.to_csv()?);
    }
    Ok(())
}
