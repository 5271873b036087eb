//! Histogram of per-layer deviations from a class mean.

use relax::synth::XorShift64Star;
use relax::{deviation_histogram, DEFAULT_BIN_WIDTH};

fn main() -> relax::Result<()> {
    let mut rng = XorShift64Star::new(2024);
    // stand-in for ILM differences over 1000 correct predictions, sd about 1.5 points
    let diffs: Vec<f64> = (0..1000).map(|_| 1.5 * rng.normal()).collect();

    let h = deviation_histogram(&diffs, DEFAULT_BIN_WIDTH)?;
    let widest = h.bins().map(|b| b.count).max().unwrap_or(1);
    for b in h.bins() {
        let bar = "#".repeat(b.count * 50 / widest);
        println!("[{:5.1}, {:5.1}) {:4} {bar}", b.left, b.right, b.count);
    }
    let mode = h.mode().expect("nonempty");
    println!(
        "mode bin [{}, {}), {} values total",
        mode.left,
        mode.right,
        h.total()
    );
    print!(
        "{}",
        String::from_utf8_lossy(&relax::formats::encode_histogram(&h)?)
    );
    Ok(())
}
