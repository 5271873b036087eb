//! Render a saliency heatmap over a label map and over a grayscale scan.
//!
//! `cargo run --example overlay -- out_dir`

use relax::synth::{generate, Blob, SynthSpec};
use relax::{render_overlay, Base, Tensor};

fn main() -> relax::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    let spec = SynthSpec {
        height: 90,
        width: 120,
        bands: [10; 9],
        blobs: vec![
            Blob {
                row: 45.0,
                col: 40.0,
                sigma: 8.0,
                amplitude: 1.0,
            },
            Blob {
                row: 70.0,
                col: 90.0,
                sigma: 5.0,
                amplitude: 0.6,
            },
        ],
        jitter: 0.0,
        seed: 1,
    };
    let (s, labels) = generate(&spec)?;

    let on_labels = render_overlay(&s, Base::Labels(&labels), 0.5)?;
    let a = std::path::Path::new(&out).join("overlay_labels.ppm");
    on_labels.write_ppm(&a)?;

    // a smooth vertical gradient as a stand-in for the OCT scan
    let scan: Vec<f32> = (0..90 * 120).map(|i| (i / 120) as f32 / 89.0).collect();
    let scan = Tensor::new(vec![90, 120], scan)?;
    let on_scan = render_overlay(&s, Base::Scan(&scan), 0.4)?;
    let b = std::path::Path::new(&out).join("overlay_scan.ppm");
    on_scan.write_ppm(&b)?;

    println!("wrote {} and {}", a.display(), b.display());
    println!("pixel at blob center: {:?}", on_labels.pixel(45, 40));
    Ok(())
}
