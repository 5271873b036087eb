#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use relax::synth::{fuzz_tensor, XorShift64Star};
use relax::{write_tensor, Class};

pub fn relax_bin() -> &'static str {
    env!("CARGO_BIN_EXE_relax")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(relax_bin())
        .args(args)
        .output()
        .expect("failed to spawn relax")
}

pub fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "relax {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// A small batch of synthetic scans with exported tensors, a manifest and
/// truth/prediction pairs: twelve scans, three per class, two of them
/// misclassified.
pub struct Fixture {
    pub dir: tempfile::TempDir,
}

pub const SCANS: usize = 12;

pub fn assignment(i: usize) -> (Class, Class) {
    let truth = Class::ALL[i % 4];
    let predicted = match i {
        6 => Class::Cnv,    // a DRUSEN scan read as CNV
        5 => Class::Normal, // a DME scan read as NORMAL
        _ => truth,
    };
    (truth, predicted)
}

impl Fixture {
    pub fn path(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }

    pub fn new() -> Fixture {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        run_ok(&[
            "synth",
            "--seed",
            "7",
            "--height",
            "36",
            "--width",
            "30",
            "--blobs",
            "3",
            "--count",
            &SCANS.to_string(),
            "--out-dir",
            p(&root.join("synth")),
        ]);

        fs::create_dir_all(root.join("export")).unwrap();
        let mut rng = XorShift64Star::new(99);
        let mut scans = Vec::new();
        let mut pairs = String::from("truth,predicted\n");
        for i in 0..SCANS {
            let id = format!("synth_{i:04}");
            let acts = fuzz_tensor(&mut rng, vec![6, 5, 4], 0.0, 1.0).unwrap();
            let grads = fuzz_tensor(&mut rng, vec![6, 5, 4], -0.5, 1.0).unwrap();
            write_tensor(&acts, root.join(format!("export/{id}_acts.rlt"))).unwrap();
            write_tensor(&grads, root.join(format!("export/{id}_grads.rlt"))).unwrap();
            let (truth, predicted) = assignment(i);
            scans.push(format!(
                r#"{{"id": "{id}", "acts": "export/{id}_acts.rlt", "grads": "export/{id}_grads.rlt", "labels": "synth/labels/{id}.pgm", "predicted": "{predicted}", "truth": "{truth}", "target": {}}}"#,
                predicted.index()
            ));
            pairs.push_str(&format!("{truth},{predicted}\n"));
        }
        fs::write(
            root.join("manifest.json"),
            format!("{{\"scans\": [\n{}\n]}}\n", scans.join(",\n")),
        )
        .unwrap();
        fs::write(root.join("pairs.csv"), pairs).unwrap();
        Fixture { dir }
    }
}
