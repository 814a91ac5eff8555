use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lprfuse_core::io::{load_fused, write_predictions, LoadOptions};
use lprfuse_core::synth::{generate, ErrorModel, SynthConfig};
use lprfuse_core::{Ensemble, ModelId, Sample};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn lprfuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lprfuse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lprfuse(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TWELVE_MODELS: [&str; 12] = [
    "ViTSTR-Base", "STAR-Net", "TRBA", "CR-NET", "RARE", "Fast-OCR",
    "Rosetta", "Holistic-CNN", "GRCNN", "R2AM", "CRNN", "Multi-Task-LR",
];

/// A synthetic corpus whose twelve models carry the published names.
fn named_corpus(dir: &Path) -> PathBuf {
    let config = SynthConfig::uniform(5, 12, 50, 7, ErrorModel::with_substitution(0.05));
    let renamed: Vec<Sample> = generate(&config)
        .unwrap()
        .into_iter()
        .map(|mut s| {
            let preds: Ensemble = s
                .predictions
                .into_values()
                .zip(TWELVE_MODELS)
                .map(|(p, name)| (ModelId::new(name).unwrap(), p))
                .collect();
            s.predictions = preds;
            s
        })
        .collect();
    let file = dir.join("named.jsonl");
    let mut buf = Vec::new();
    write_predictions(&renamed, &mut buf).unwrap();
    std::fs::write(&file, buf).unwrap();
    file
}

#[test]
fn fuse_worked_examples_and_rerun_identically() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("fused.jsonl");
    let input = fixture("worked_examples.jsonl");
    let args = ["fuse", "--input", path(&input), "--strategy", "mv-hc", "--output", path(&out)];
    ok(&args);
    let first = std::fs::read(&out).unwrap();
    ok(&args);
    assert_eq!(first, std::fs::read(&out).unwrap());

    let records = load_fused(&out, &LoadOptions::strict()).unwrap();
    let texts: Vec<(&str, &str)> = records.iter().map(|r| (r.sample_id.as_str(), r.text.as_str())).collect();
    for expected in [
        ("case-a", "AIQ1056"),
        ("case-e", "KRM7E95"),
        ("case-f", "Y88096"),
        ("case-g", "HLP4594"),
        ("case-h", "MRD3095"),
    ] {
        assert!(texts.contains(&expected), "{expected:?}");
    }
    let a = &records[0];
    assert_eq!(a.winning_votes, 2);
    assert!(a.tie_broken);
    assert_eq!(a.contributors, ["CR-NET", "TRBA"]);
}

#[test]
fn single_model_passes_through() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("one.jsonl");
    std::fs::write(
        &input,
        "{\"sample_id\":\"s1\",\"dataset\":\"d\",\"predictions\":{\"solo\":{\"text\":\"abc-123\",\"confidence\":0.4}}}\n\
         {\"sample_id\":\"s2\",\"dataset\":\"d\",\"predictions\":{\"solo\":{\"text\":\"XY 9\",\"confidence\":0.9}}}\n",
    )
    .unwrap();
    let profiles = dir.path().join("p.toml");
    std::fs::write(&profiles, "[[model]]\nid = \"solo\"\naccuracy_rank = 1\nlatency_ms = 1.0\n").unwrap();
    for strategy in ["hc", "mv-bm", "mv-hc", "mvcp-bm", "mvcp-hc"] {
        let out = ok(&["fuse", "--input", path(&input), "--strategy", strategy, "--profiles", path(&profiles)]);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("\"text\":\"ABC123\""), "{strategy}: {}", lines[0]);
        assert!(lines[1].contains("\"text\":\"XY9\""));
    }
}

#[test]
fn best_model_strategy_without_profiles_is_a_usage_error() {
    let input = fixture("worked_examples.jsonl");
    for strategy in ["mvcp-bm", "mv-bm"] {
        let out = lprfuse(&["fuse", "--input", path(&input), "--strategy", strategy]);
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("needs --profiles"), "{err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unknown_strategy_is_rejected() {
    let input = fixture("worked_examples.jsonl");
    let out = lprfuse(&["fuse", "--input", path(&input), "--strategy", "vote"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_reports_line() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bad.jsonl");
    std::fs::write(
        &input,
        "{\"sample_id\":\"s1\",\"dataset\":\"d\",\"predictions\":{\"m\":{\"text\":\"A1\",\"confidence\":0.4}}}\n\
         {\"sample_id\":\"s2\",\"dataset\":\"d\",\"predictions\":{\"m\":{\"text\":\"A1\",\"confidence\":2}}}\n",
    )
    .unwrap();
    let out = lprfuse(&["fuse", "--input", path(&input), "--strategy", "hc"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("line 2") && err.contains("\"m\""), "{err}");

    let missing = lprfuse(&["fuse", "--input", "/nonexistent/x.jsonl", "--strategy", "hc"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn unknown_fields_warn_unless_strict() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("extra.jsonl");
    std::fs::write(
        &input,
        "{\"sample_id\":\"s1\",\"dataset\":\"d\",\"camera\":7,\"predictions\":{\"m\":{\"text\":\"A1\",\"confidence\":0.4}}}\n",
    )
    .unwrap();
    let lenient = lprfuse(&["fuse", "--input", path(&input), "--strategy", "hc"]);
    assert!(lenient.status.success());
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("camera"));
    let strict = lprfuse(&["--strict", "fuse", "--input", path(&input), "--strategy", "hc"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn zero_noise_simulation_scores_perfectly() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("sim.toml");
    std::fs::write(
        &config,
        "seed = 42\nn_models = 3\nn_samples = 100\nplate_length = 7\ndataset = \"clean\"\n\
         [model_defaults]\nper_char_sub_rate = 0.0\n",
    )
    .unwrap();
    let corpus = dir.path().join("corpus.jsonl");
    let profiles = dir.path().join("profiles.toml");
    ok(&["simulate", "--config", path(&config), "--output", path(&corpus), "--profiles-output", path(&profiles)]);
    let first = std::fs::read(&corpus).unwrap();
    ok(&["simulate", "--config", path(&config), "--output", path(&corpus)]);
    assert_eq!(first, std::fs::read(&corpus).unwrap());

    let report = dir.path().join("report.json");
    let table = ok(&[
        "eval", "--input", path(&corpus), "--strategy", "hc,mv-bm,mv-hc,mvcp-bm,mvcp-hc",
        "--profiles", path(&profiles), "--output", path(&report),
    ]);
    let rows: Vec<&str> = table.lines().skip(2).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let cells: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(cells[1..], ["100.0%", "100.0%"], "{row}");
    }
    assert!(table.starts_with("Approach  clean (#100)  Average"));
    assert_eq!(ok(&["report", "--input", path(&report)]), table);
    let csv = ok(&["report", "--input", path(&report), "--format", "delimited"]);
    assert_eq!(csv.lines().next(), Some("approach,clean,average"));
    assert!(csv.contains("MVCP-BM,100.0,100.0"));
}

#[test]
fn eval_scores_saved_fused_output() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("two.jsonl");
    std::fs::write(
        &input,
        "{\"sample_id\":\"s1\",\"dataset\":\"d\",\"ground_truth\":\"AB1\",\"predictions\":{\"a\":{\"text\":\"AB1\",\"confidence\":0.4},\"b\":{\"text\":\"AB7\",\"confidence\":0.9}}}\n\
         {\"sample_id\":\"s2\",\"dataset\":\"e\",\"ground_truth\":\"CD2\",\"predictions\":{\"a\":{\"text\":\"CD2\",\"confidence\":0.8},\"b\":{\"text\":\"CD2\",\"confidence\":0.1}}}\n",
    )
    .unwrap();
    let fused = dir.path().join("fused.jsonl");
    ok(&["fuse", "--input", path(&input), "--strategy", "hc", "--output", path(&fused)]);
    let table = ok(&["eval", "--input", path(&input), "--fused", path(&fused), "--format", "delimited"]);
    assert_eq!(table, "approach,d,e,average\nHC,0.0,100.0,50.0\n");
}

#[test]
fn sweep_follows_speed_ranking() {
    let dir = TempDir::new().unwrap();
    let input = named_corpus(dir.path());
    let profiles = fixture("twelve_model_profiles.toml");
    let csv = ok(&[
        "sweep", "--input", path(&input), "--profiles", path(&profiles), "--rank", "speed",
        "--format", "delimited",
    ]);
    let added: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(
        added,
        [
            "Multi-Task-LR", "Holistic-CNN", "CRNN", "Fast-OCR", "Rosetta", "CR-NET",
            "STAR-Net", "ViTSTR-Base", "GRCNN", "RARE", "R2AM", "TRBA",
        ]
    );
    assert!(csv.starts_with("n,added_model,HC,MV-BM,MV-HC,MVCP-BM,MVCP-HC,latency_ms,fps\n"));
}

#[test]
fn sweep_accuracy_latency_column() {
    let dir = TempDir::new().unwrap();
    let input = named_corpus(dir.path());
    let profiles = fixture("twelve_model_profiles.toml");
    let csv = ok(&[
        "sweep", "--input", path(&input), "--profiles", path(&profiles), "--strategies", "mv-hc",
        "--format", "delimited",
    ]);
    let expected = [7.3, 14.4, 31.3, 36.6, 49.6, 52.6, 57.2, 59.7, 68.2, 84.2, 87.1, 89.4];
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 12);
    for (row, want) in rows.iter().zip(expected) {
        let got: f64 = row[3].parse().unwrap();
        assert!((got - want).abs() <= 0.2 + 1e-9, "{row:?}");
    }
    let table = ok(&["sweep", "--input", path(&input), "--profiles", path(&profiles), "--strategies", "mv-hc"]);
    assert!(table.contains("Top 8 (+ Holistic-CNN)"));
    assert!(table.lines().nth(9).unwrap().ends_with("59.7 / 17"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    assert_eq!(lprfuse(&[]).status.code(), Some(2));
    assert_eq!(lprfuse(&["eval", "--input", "x"]).status.code(), Some(2));
}
