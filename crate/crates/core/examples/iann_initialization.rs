//! Compares first-layer weights from the FRI-guided and the uniform initializers.

use iann::importance::empirical_importance;
use iann::init::{init_iann, init_standard};
use iann::{FriVector, Topology};

fn main() -> iann::Result<()> {
    let fri = FriVector::new(vec![1.0, 0.9, 0.6, 0.3, 0.0])?;
    let topology = Topology::new(fri.len(), 10_000, 1)?;
    let guided = empirical_importance(&init_iann(topology, &fri, 0)?).avg_abs_weight;
    let uniform = empirical_importance(&init_standard(topology, 0)?).avg_abs_weight;

    println!("{:>5} {:>12} {:>12}", "fri", "iann |w|", "uniform |w|");
    for k in 0..fri.len() {
        println!("{:>5} {:>12.4} {:>12.4}", fri[k], guided[k], uniform[k]);
    }

    let small = init_iann(Topology::new(fri.len(), 3, 1)?, &fri, 4)?;
    println!("\nfirst layer of a 3-unit network (±FRI marks a selected input):");
    for row in small.w_in().chunks(fri.len()) {
        println!(
            "{}",
            row.iter()
                .map(|w| format!("{w:>7.3}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    Ok(())
}
