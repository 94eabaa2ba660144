//! IANN against plain backprop on a seeded 1007-instance splice subset.
//!
//! `cargo run --release --example splice_cross_validation [-- data/splice.data [seeds]]`

use iann::experiment::{run_cross_validation, Method, RunConfig};
use iann::theory::DomainTheory;
use iann::Dataset;

fn main() -> iann::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "data/splice.data".into());
    let seeds: u64 = args.next().map_or(3, |s| s.parse().expect("seed count"));

    let data = Dataset::load(&path)?.random_subset(1007, 0)?;
    let fri = data.expand_fri(&DomainTheory::splice().fri())?;
    let config = RunConfig {
        hidden: 24,
        seeds: (0..seeds).collect(),
        ..RunConfig::default()
    };

    for method in [Method::backprop(), Method::iann(fri)] {
        let r = run_cross_validation(&data, &method, &config)?;
        println!(
            "{:<9} mean {:.2}%  seed sd {:.2}  per seed {:?}",
            r.method,
            r.mean_accuracy,
            r.seed_std,
            r.seed_means
                .iter()
                .map(|a| format!("{a:.2}"))
                .collect::<Vec<_>>()
        );
        if let Some(p) = r.published {
            println!("          published: {p:?}");
        }
    }
    Ok(())
}
