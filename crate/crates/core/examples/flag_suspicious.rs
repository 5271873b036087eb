//! Score the two misclassified test scans of the original study against the
//! published Normal and CNV profiles.

use relax::{
    deviation_report, flag, Class, ClassProfile, LayerAttribution, DEFAULT_FLAG_THRESHOLD,
};

fn main() -> relax::Result<()> {
    let normal_mean = [7.96, 20.48, 8.75, 9.97, 30.91, 13.18, 8.75];
    let cnv_mean = [5.39, 14.03, 12.26, 12.73, 35.90, 9.90, 9.78];

    // spreads recovered as difference / z from the published deviation table
    let normal_std = [1.512, 3.017, 1.924, 1.217, 3.071, 1.812, 1.287];
    let cnv_std = [2.621, 4.458, 4.286, 3.786, 6.939, 2.774, 3.0];

    let cases = [
        (
            "DME scan predicted NORMAL",
            Class::Normal,
            normal_mean,
            normal_std,
            [16.76, 18.67, 14.54, 7.94, 33.52, 3.76, 4.80],
        ),
        (
            "DRUSEN scan predicted CNV",
            Class::Cnv,
            cnv_mean,
            cnv_std,
            [9.95, 21.43, 11.96, 12.20, 28.00, 9.05, 7.41],
        ),
    ];

    for (name, class, mean, std, observed) in cases {
        let profile = ClassProfile::new(class, mean, std, 242)?;
        let report = deviation_report(&LayerAttribution::from_raw(observed), &profile);
        println!("{name}");
        for d in &report.layers {
            let z = d.z.map_or("undefined".to_string(), |z| format!("{z:+.2}"));
            println!(
                "  {:>8} {:6.2}% diff {:+6.2} z {z}",
                d.layer.name(),
                d.observed,
                d.difference
            );
        }
        let decision = flag(&report, DEFAULT_FLAG_THRESHOLD)?;
        let offenders: Vec<&str> = decision.offending_layers.iter().map(|l| l.name()).collect();
        println!(
            "  suspicious: {} (max |z| {:.2}) {:?}\n",
            decision.suspicious, decision.max_abs_z, offenders
        );
    }
    Ok(())
}
