//! Confusion matrix, per-class metrics and training class weights.

use std::collections::BTreeMap;

use relax::{class_weights, confusion, metrics, Class};

fn main() -> relax::Result<()> {
    // 968 test scans, two mistakes
    let mut pairs = Vec::new();
    for truth in Class::ALL {
        for i in 0..242 {
            let predicted = match (truth, i) {
                (Class::Drusen, 0) => Class::Cnv,
                (Class::Dme, 0) => Class::Normal,
                _ => truth,
            };
            pairs.push((truth, predicted));
        }
    }
    let m = confusion(pairs)?;
    println!(
        "{:>8} {}",
        "",
        Class::ALL.map(|c| format!("{c:>7}")).join("")
    );
    for t in Class::ALL {
        let row = Class::ALL.map(|p| format!("{:>7}", m.get(t, p))).join("");
        println!("{t:>8} {row}");
    }

    let s = metrics(&m)?;
    println!("accuracy {:.4}", s.accuracy);
    for (c, cm) in &s.per_class {
        println!(
            "{c:>8} precision {:.4} recall {:.4} f1 {:.4}",
            cm.precision, cm.recall, cm.f1
        );
    }
    println!("macro f1 {:.4}", s.macro_avg.f1);

    let counts = BTreeMap::from([
        (Class::Cnv, 37_205),
        (Class::Dme, 11_348),
        (Class::Drusen, 8_616),
        (Class::Normal, 26_315),
    ]);
    let w = class_weights(&counts)?;
    for (c, v) in &w.weights {
        println!("weight {c:>8} {v:.3}");
    }
    Ok(())
}
