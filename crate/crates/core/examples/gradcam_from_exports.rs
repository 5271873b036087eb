//! Turn exported activations and gradients into a saliency map.
//!
//! Pass two RLT files to use real exports:
//! `cargo run --example gradcam_from_exports -- acts.rlt grads.rlt`

use relax::synth::{fuzz_tensor, XorShift64Star};
use relax::{compute_saliency, gradcam_coarse, neuron_weights, read_tensor, Tensor};

fn main() -> relax::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (acts, grads) = match args.as_slice() {
        [a, g] => (read_tensor(a)?, read_tensor(g)?),
        _ => {
            let mut rng = XorShift64Star::new(11);
            (
                fuzz_tensor(&mut rng, vec![8, 8, 16], 0.0, 1.0)?,
                fuzz_tensor(&mut rng, vec![8, 8, 16], -0.2, 0.4)?,
            )
        }
    };

    let w = neuron_weights(&grads)?;
    println!(
        "{} channel weights, first four {:.4?}",
        w.channels(),
        &w.alpha()[..4.min(w.channels())]
    );

    let coarse = gradcam_coarse(&acts, &w)?;
    let (lo, hi) = coarse.min_max();
    println!("coarse map {:?}, range [{lo:.4}, {hi:.4}]", coarse.dims());

    // 260x260 is the classifier's input size
    let s = compute_saliency(&acts, &grads, 260, 260)?;
    let peak = s
        .values()
        .iter()
        .enumerate()
        .fold((0, 0.0), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    println!(
        "saliency {:?}, peak at row {} col {}",
        s.dims(),
        peak.0 / 260,
        peak.0 % 260
    );

    let t: Tensor = s.to_tensor()?;
    println!("as tensor: {} bytes encoded", t.encode().len());
    Ok(())
}
