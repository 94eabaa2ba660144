//! Promoter cross-validation. The data is not shipped; pass a file of
//! `+|-, id, 57-base sequence` records.
//!
//! `cargo run --release --example promoter_cross_validation -- promoters.data`

use iann::experiment::{run_cross_validation, Method, RunConfig};
use iann::theory::DomainTheory;
use iann::Dataset;

fn main() -> iann::Result<()> {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: promoter_cross_validation <promoters.data>");
        std::process::exit(2);
    };
    let data = Dataset::load(&path)?;
    let fri = data.expand_fri(&DomainTheory::promoter().fri())?;
    let config = RunConfig::default();
    for method in [Method::backprop(), Method::iann(fri)] {
        let r = run_cross_validation(&data, &method, &config)?;
        println!(
            "{:<9} mean {:.2}% (fold sd {:.2}) confusion {:?}",
            r.method, r.mean_accuracy, r.fold_std, r.confusion
        );
    }
    Ok(())
}
