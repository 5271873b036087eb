//! Percent of model focus on each retinal layer for a small hand-made scan.

use relax::oracle::brute_force_attribution;
use relax::{layer_attribution, layer_masses, LabelMap, Layer, Saliency};

fn main() -> relax::Result<()> {
    let labels =
        LabelMap::from_rows(&[&[0, 0, 0, 0], &[1, 1, 2, 2], &[5, 5, 5, 5], &[8, 8, 8, 8]])?;
    let saliency = Saliency::from_rows(&[
        &[0.9, 0.9, 0.9, 0.9],
        &[0.2, 0.4, 0.1, 0.1],
        &[0.5, 0.5, 0.5, 0.5],
        &[0.0, 0.0, 0.0, 0.0],
    ])?;

    let masses = layer_masses(&saliency, &labels)?;
    for layer in Layer::ALL {
        println!("{:>8} mass {:.2}", layer.name(), masses.get(layer));
    }
    // the bright row above the retina is ignored
    let r = layer_attribution(&saliency, &labels)?;
    println!("attribution: {r}");
    println!("dominant layer: {}", r.dominant());

    let slow = brute_force_attribution(&saliency, &labels)?;
    assert_eq!(r, slow);

    let blank = Saliency::zeros(4, 4)?;
    println!(
        "all-zero saliency: {}",
        layer_attribution(&blank, &labels).unwrap_err()
    );
    Ok(())
}
