//! Build per-class profiles from a batch of synthetic scans and save them.

use relax::formats::{encode_profiles, AttributionRow};
use relax::synth::{generate, SynthSpec};
use relax::{build_profiles, layer_attribution, AttributionRecord, Class, Layer, StdKind};

fn main() -> relax::Result<()> {
    let mut records = Vec::new();
    for i in 0..40u64 {
        let class = Class::ALL[i as usize % 4];
        // each class gets its own blob count so the profiles differ
        let spec = SynthSpec::random(45, 40, SynthSpec::equal_bands(45), 1 + class.index(), i);
        let (s, l) = generate(&spec)?;
        let predicted = if i == 7 { Class::Cnv } else { class };
        records.push(AttributionRecord {
            scan_id: format!("scan_{i:03}"),
            predicted,
            truth: Some(class),
            attribution: layer_attribution(&s, &l)?,
        });
    }

    let set = build_profiles(&records, StdKind::Sample)?;
    for (class, p) in &set.profiles {
        println!("{class} (n = {})", p.n);
        for (i, layer) in Layer::RETINAL.iter().enumerate() {
            println!(
                "  {:>8} {:6.2} +- {:5.2}",
                layer.name(),
                p.mean[i],
                p.std[i]
            );
        }
    }

    let rows: Vec<AttributionRow> = records.into_iter().map(Into::into).collect();
    println!("first CSV row: {:?}", rows[0].scan_id);
    println!("{}", String::from_utf8_lossy(&encode_profiles(&set)));
    Ok(())
}
