//! End to end on synthetic data: gradcam, attribution, profiles, scoring,
//! histogram and metrics, all in memory.

use relax::synth::{fuzz_tensor, generate, SynthSpec, XorShift64Star};
use relax::{
    build_profiles, compute_saliency, confusion, deviation_histogram, deviation_report, flag,
    layer_attribution, layer_attribution_at_label_resolution, metrics, AttributionRecord, Class,
    StdKind, DEFAULT_FLAG_THRESHOLD,
};

fn main() -> relax::Result<()> {
    let mut rng = XorShift64Star::new(5);
    let mut records = Vec::new();
    for i in 0..60u64 {
        let truth = Class::ALL[i as usize % 4];
        let predicted = if i % 17 == 3 {
            Class::ALL[(truth.index() + 1) % 4]
        } else {
            truth
        };
        let spec = SynthSpec::random(
            54,
            48,
            SynthSpec::equal_bands(54),
            1 + truth.index(),
            100 + i,
        );
        let (s, labels) = generate(&spec)?;
        let r = layer_attribution(&s, &labels)?;
        records.push(AttributionRecord {
            scan_id: format!("s{i:02}"),
            predicted,
            truth: Some(truth),
            attribution: r,
        });
    }

    // one scan explained through gradcam at the network's coarse resolution
    let acts = fuzz_tensor(&mut rng, vec![6, 6, 8], 0.0, 1.0)?;
    let grads = fuzz_tensor(&mut rng, vec![6, 6, 8], -0.1, 0.3)?;
    let cam = compute_saliency(&acts, &grads, 27, 24)?;
    let (_, labels) = generate(&SynthSpec::random(54, 48, SynthSpec::equal_bands(54), 1, 0))?;
    println!(
        "gradcam scan: {}",
        layer_attribution_at_label_resolution(&cam, &labels)?
    );

    let profiles = build_profiles(&records, StdKind::Sample)?;
    let mut flagged = 0;
    let mut ilm_diffs = Vec::new();
    for rec in &records {
        let Some(p) = profiles.get(rec.predicted) else {
            continue;
        };
        let report = deviation_report(&rec.attribution, p);
        ilm_diffs.push(report.layers[0].difference);
        let d = flag(&report, DEFAULT_FLAG_THRESHOLD)?;
        if d.suspicious {
            flagged += 1;
            println!(
                "{} ({} as {}) max |z| {:.2}",
                rec.scan_id,
                rec.truth.unwrap(),
                rec.predicted,
                d.max_abs_z
            );
        }
    }
    println!("{flagged} of {} scans flagged", records.len());

    let h = deviation_histogram(&ilm_diffs, 1.0)?;
    println!(
        "ILM deviation histogram: {} bins, mode {:?}",
        h.counts.len(),
        h.mode().map(|b| b.left)
    );

    let m = confusion(records.iter().map(|r| (r.truth.unwrap(), r.predicted)))?;
    println!("accuracy {:.3}", metrics(&m)?.accuracy);
    Ok(())
}
