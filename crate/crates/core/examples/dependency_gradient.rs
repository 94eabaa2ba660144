//! Output sensitivity to each input, checked against finite differences.

use iann::importance::dependency_gradient;
use iann::init::init_standard;
use iann::Topology;

fn main() -> iann::Result<()> {
    let net = init_standard(Topology::new(4, 3, 2)?, 5)?;
    let x = [0.2, -0.7, 1.0, 0.4];
    let dep = dependency_gradient(&net, &x)?;
    let h = 1e-6;
    for (y, grad) in dep.per_output.iter().enumerate() {
        for (k, g) in grad.iter().enumerate() {
            let (mut up, mut dn) = (x, x);
            up[k] += h;
            dn[k] -= h;
            let fd =
                (net.forward(&up)?.output_post[y] - net.forward(&dn)?.output_post[y]) / (2.0 * h);
            println!("d out{y} / d x{k}: {g:+.8}  (finite difference {fd:+.8})");
        }
    }
    Ok(())
}
