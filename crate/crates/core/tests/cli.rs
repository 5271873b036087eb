mod common;

use std::fs;

use common::{p, run, run_ok, Fixture, SCANS};
use relax::formats::{read_attributions, read_profiles, read_scores};
use relax::{read_labelmap, read_tensor, Class, Layer, Tensor};

#[test]
fn synth_writes_valid_pairs() {
    let fx = Fixture::new();
    for i in 0..SCANS {
        let s = read_tensor(fx.path(&format!("synth/saliency/synth_{i:04}.rlt"))).unwrap();
        let l = read_labelmap(fx.path(&format!("synth/labels/synth_{i:04}.pgm"))).unwrap();
        assert_eq!(s.shape(), &[36, 30]);
        assert_eq!(l.dims(), (36, 30));
        assert!(s.data().iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(l.get(0, 0), Layer::RaR);
        assert_eq!(l.get(35, 0), Layer::RbR);
    }
}

#[test]
fn gradcam_command_writes_unit_range_saliency() {
    let fx = Fixture::new();
    let out = fx.path("sal.rlt");
    run_ok(&[
        "gradcam",
        "--acts",
        p(&fx.path("export/synth_0000_acts.rlt")),
        "--grads",
        p(&fx.path("export/synth_0000_grads.rlt")),
        "--height",
        "36",
        "--width",
        "30",
        "--out",
        p(&out),
    ]);
    let t = read_tensor(&out).unwrap();
    assert_eq!(t.shape(), &[36, 30]);
    assert!(t.data().iter().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn batch_chain_attribute_profile_score_histogram() {
    let fx = Fixture::new();
    let attr = fx.path("attr.csv");
    run_ok(&[
        "attribute",
        "--saliency-dir",
        p(&fx.path("synth/saliency")),
        "--labels-dir",
        p(&fx.path("synth/labels")),
        "--manifest",
        p(&fx.path("manifest.json")),
        "--out",
        p(&attr),
    ]);
    let rows = read_attributions(&attr).unwrap();
    assert_eq!(rows.len(), SCANS);
    assert_eq!(rows[5].truth, Some(Class::Dme));
    assert_eq!(rows[5].predicted, Some(Class::Normal));
    for r in &rows {
        assert!((r.attribution.total() - 100.0).abs() < 1e-3);
    }

    let profiles = fx.path("profiles.json");
    run_ok(&["profile", "--records", p(&attr), "--out", p(&profiles)]);
    let set = read_profiles(&profiles).unwrap();
    assert_eq!(set.profiles.len(), 4);
    assert_eq!(set.get(Class::Cnv).unwrap().n, 3);
    assert_eq!(set.get(Class::Dme).unwrap().n, 2);

    let scores = fx.path("scores.csv");
    run_ok(&[
        "score",
        "--records",
        p(&attr),
        "--profiles",
        p(&profiles),
        "--threshold",
        "3.0",
        "--out",
        p(&scores),
    ]);
    let score_rows = read_scores(&scores).unwrap();
    assert_eq!(score_rows.len(), SCANS * 7);
    assert_eq!(score_rows[0].layer, Layer::Ilm);
    assert_eq!(score_rows[6].layer, Layer::OsRpe);

    let hist = fx.path("hist.csv");
    run_ok(&[
        "histogram",
        "--scores",
        p(&scores),
        "--bin-width",
        "1.0",
        "--out",
        p(&hist),
    ]);
    let text = fs::read_to_string(&hist).unwrap();
    assert!(text.starts_with("bin_left,bin_right,count\n"));
    let total: usize = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, SCANS * 7);

    let ilm_hist = fx.path("hist_ilm.csv");
    run_ok(&[
        "histogram",
        "--scores",
        p(&scores),
        "--layer",
        "ILM",
        "--out",
        p(&ilm_hist),
    ]);
    let total: usize = fs::read_to_string(&ilm_hist)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, SCANS);
}

#[test]
fn attribute_without_manifest_leaves_classes_blank() {
    let fx = Fixture::new();
    let attr = fx.path("attr.csv");
    run_ok(&[
        "attribute",
        "--saliency-dir",
        p(&fx.path("synth/saliency")),
        "--labels-dir",
        p(&fx.path("synth/labels")),
        "--out",
        p(&attr),
    ]);
    let rows = read_attributions(&attr).unwrap();
    assert!(rows
        .iter()
        .all(|r| r.predicted.is_none() && r.truth.is_none()));
    // profiling needs classes
    let out = run(&[
        "profile",
        "--records",
        p(&attr),
        "--out",
        p(&fx.path("x.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn metrics_command_reports_accuracy() {
    let fx = Fixture::new();
    let out = fx.path("metrics.json");
    run_ok(&[
        "metrics",
        "--pairs",
        p(&fx.path("pairs.csv")),
        "--out",
        p(&out),
    ]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let acc = v["accuracy"].as_f64().unwrap();
    assert!((acc - 10.0 / 12.0).abs() < 1e-12);
    assert_eq!(v["confusion"]["counts"][1][3], 1);
    assert_eq!(v["confusion"]["counts"][2][0], 1);
    assert!(v["per_class"]["CNV"]["precision"].as_f64().unwrap() < 1.0);
    assert!(v["macro"]["f1"].as_f64().is_some());
}

#[test]
fn overlay_on_labels_and_scan() {
    let fx = Fixture::new();
    let sal = fx.path("synth/saliency/synth_0003.rlt");
    let ppm = fx.path("o.ppm");
    run_ok(&[
        "overlay",
        "--saliency",
        p(&sal),
        "--labels",
        p(&fx.path("synth/labels/synth_0003.pgm")),
        "--alpha",
        "0.5",
        "--out",
        p(&ppm),
    ]);
    let bytes = fs::read(&ppm).unwrap();
    assert!(bytes.starts_with(b"P6\n30 36\n255\n"));
    assert_eq!(bytes.len(), 13 + 36 * 30 * 3);

    let scan = fx.path("scan.rlt");
    relax::write_tensor(&Tensor::filled(vec![36, 30], 0.2).unwrap(), &scan).unwrap();
    let ppm2 = fx.path("o2.ppm");
    run_ok(&[
        "overlay",
        "--saliency",
        p(&sal),
        "--scan",
        p(&scan),
        "--alpha",
        "0",
        "--out",
        p(&ppm2),
    ]);
    let bytes = fs::read(&ppm2).unwrap();
    assert!(bytes[13..].iter().all(|&b| b == 51));
}

#[test]
fn exit_codes() {
    let fx = Fixture::new();
    // missing input file: I/O error
    let out = run(&[
        "gradcam",
        "--acts",
        "/no/such.rlt",
        "--grads",
        "/no/such.rlt",
        "--height",
        "4",
        "--width",
        "4",
        "--out",
        p(&fx.path("x.rlt")),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // malformed tensor: validation error
    let bad = fx.path("bad.rlt");
    fs::write(&bad, b"RLT1\x02\x02\x00\x00\x00\x02\x00\x00\x00\x00\x00").unwrap();
    let out = run(&[
        "gradcam",
        "--acts",
        p(&bad),
        "--grads",
        p(&bad),
        "--height",
        "4",
        "--width",
        "4",
        "--out",
        p(&fx.path("x.rlt")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 13"));

    // bad flag threshold
    let attr = fx.path("attr.csv");
    fs::write(
        &attr,
        "scan_id,predicted_class,true_class,r_ILM,r_NFLIPL,r_INL,r_OPL,r_ONLISM,r_ISE,r_OSRPE\n\
         a,CNV,CNV,10,20,10,10,30,10,10\nb,CNV,CNV,12,18,10,10,30,10,10\n",
    )
    .unwrap();
    let prof = fx.path("p.json");
    run_ok(&["profile", "--records", p(&attr), "--out", p(&prof)]);
    let out = run(&[
        "score",
        "--records",
        p(&attr),
        "--profiles",
        p(&prof),
        "--threshold",
        "-1",
        "--out",
        p(&fx.path("s.csv")),
    ]);
    assert_eq!(out.status.code(), Some(1));

    // unknown class label in pairs
    let pairs = fx.path("bad_pairs.csv");
    fs::write(&pairs, "truth,predicted\nCNV,AMD\n").unwrap();
    let out = run(&[
        "metrics",
        "--pairs",
        p(&pairs),
        "--out",
        p(&fx.path("m.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));

    // usage error
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn degenerate_scan_fails_the_batch_with_its_id() {
    let fx = Fixture::new();
    let sal_dir = fx.path("deg/saliency");
    let lab_dir = fx.path("deg/labels");
    fs::create_dir_all(&sal_dir).unwrap();
    fs::create_dir_all(&lab_dir).unwrap();
    relax::write_tensor(
        &Tensor::filled(vec![9, 2], 0.0).unwrap(),
        sal_dir.join("empty.rlt"),
    )
    .unwrap();
    let labels = relax::LabelMap::new(9, 2, (0..18).map(|i| (i / 2) as u8).collect()).unwrap();
    relax::write_labelmap(&labels, lab_dir.join("empty.pgm")).unwrap();
    let out = run(&[
        "attribute",
        "--saliency-dir",
        p(&sal_dir),
        "--labels-dir",
        p(&lab_dir),
        "--out",
        p(&fx.path("deg.csv")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("empty") && err.contains("degenerate"), "{err}");
}
