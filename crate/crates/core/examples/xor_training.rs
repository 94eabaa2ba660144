//! XOR with a 2-4-1 network; FRI of 1 everywhere is plain backprop.

use iann::data::Instance;
use iann::init::init_standard;
use iann::train::{train, TrainConfig};
use iann::{Dataset, FriVector, Topology};

fn main() -> iann::Result<()> {
    let instances = [
        ([0.0, 0.0], 0),
        ([0.0, 1.0], 1),
        ([1.0, 0.0], 1),
        ([1.0, 1.0], 0),
    ]
    .iter()
    .map(|(x, c)| Instance {
        x: x.to_vec(),
        class: *c,
    })
    .collect();
    let data = Dataset::from_instances(instances, vec!["0".into(), "1".into()])?;
    let net = init_standard(Topology::new(2, 4, 1)?, 1)?;
    let cfg = TrainConfig {
        learning_rate: 0.5,
        epochs: 5000,
        seed: 1,
        shuffle_each_epoch: true,
    };
    let trace = train(net, &data, &cfg, Some(&FriVector::ones(2)))?;

    for epoch in [0, 99, 999, 4999] {
        println!("epoch {:>4}: mse {:.5}", epoch + 1, trace.epoch_mse[epoch]);
    }
    for inst in &data.instances {
        let out = trace.network.forward(&inst.x)?.output_post[0];
        println!("{:?} -> {out:.3} (class {})", inst.x, inst.class);
    }
    Ok(())
}
