use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ctqw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctqw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = ctqw(args);
    assert!(
        out.status.success(),
        "ctqw {args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("UTF-8 temp path")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

fn write_file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn centrality_karate_to_stdout() {
    let out = ok(&["centrality", "--dataset", "karate"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("node,centrality,population"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(num).collect()).collect();
    assert_eq!(rows.len(), 34);
    assert!((rows.iter().map(|r| r[2]).sum::<f64>() - 1.0).abs() < 1e-9);
    assert_eq!(rows[0][1], num("0.484848484848"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spearman_rho = 0.9"));
}

#[test]
fn centrality_path_file_with_manifest() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "path.txt", "# 3-node path\n1 2\n2 3\n");
    let output = dir.path().join("out.csv");
    ok(&["centrality", "--input", path_str(&input), "-o", path_str(&output), "--T", "10pi"]);
    let (header, rows) = read_csv(&output);
    assert_eq!(header, ["node", "centrality", "population"]);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][1], "1");
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("out.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "centrality");
    assert!(manifest["duration_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(manifest["parameters"]["T"].as_f64().unwrap(), 10.0 * std::f64::consts::PI);
}

#[test]
fn centrality_json_format() {
    let dir = TempDir::new().unwrap();
    let output = dir.path().join("c.json");
    ok(&["centrality", "--dataset", "karate", "-o", path_str(&output)]);
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&output).unwrap()).unwrap();
    assert_eq!(doc["report"]["rows"].as_array().unwrap().len(), 34);
    assert!(doc["report"]["spearman_rho"].as_f64().unwrap() > 0.7);
    assert!(doc["manifest"].get("duration_seconds").is_none());
}

#[test]
fn missing_input_fails_without_output() {
    let dir = TempDir::new().unwrap();
    let output = dir.path().join("never.csv");
    let missing = dir.path().join("absent.txt");
    let out = ctqw(&["centrality", "--input", path_str(&missing), "-o", path_str(&output)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!output.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn malformed_input_reports_line() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "bad.txt", "1 2\n2 3\n3 3\n");
    let out = ctqw(&["centrality", "--input", path_str(&input)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.txt:3:"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(ctqw(&["centrality"]).status.code(), Some(1));
    assert_eq!(ctqw(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ctqw(&["compare", "--dataset", "karate", "--start", "35"]).status.code(), Some(1));
    assert_eq!(ctqw(&["centrality", "--dataset", "karate", "--T", "-1"]).status.code(), Some(1));
    assert_eq!(ctqw(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_karate_shapes() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("sweep");
    ok(&["sweep", "--dataset", "karate", "--out-dir", path_str(&out_dir)]);

    let (header, rows) = read_csv(&out_dir.join("deltas.csv"));
    assert_eq!(header.len(), 3 + 34);
    assert_eq!(&header[..4], ["edge", "u", "v", "1"]);
    assert_eq!(rows.len(), 78);
    for row in &rows {
        let total: f64 = row[3..].iter().map(|s| num(s)).sum();
        assert!(total.abs() < 1e-9, "row sum {total}");
    }
    let (_, signs) = read_csv(&out_dir.join("signs.csv"));
    assert_eq!(signs.len(), 78);
    for (d, s) in rows.iter().zip(&signs) {
        for (dv, sv) in d[3..].iter().zip(&s[3..]) {
            assert_eq!(sv, if num(dv) >= 0.0 { "1" } else { "-1" });
        }
    }
    let (_, baseline) = read_csv(&out_dir.join("baseline.csv"));
    assert_eq!(baseline.len(), 34);

    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "sweep");
    assert!(manifest["duration_seconds"].is_number());
}

#[test]
fn sweep_single_edge_graph() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "k2.txt", "1 2\n");
    let out_dir = dir.path().join("s");
    ok(&["sweep", "--input", path_str(&input), "--out-dir", path_str(&out_dir)]);
    let (_, rows) = read_csv(&out_dir.join("deltas.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][..3], ["1", "1", "2"]);
}

#[test]
fn affinity_karate_csv_and_svg() {
    let dir = TempDir::new().unwrap();
    let sweep_dir = dir.path().join("sweep");
    ok(&["sweep", "--dataset", "karate", "--out-dir", path_str(&sweep_dir)]);
    let output = dir.path().join("alpha.csv");
    ok(&[
        "affinity",
        "--sweep",
        path_str(&sweep_dir.join("sweep.json")),
        "-o",
        path_str(&output),
    ]);
    let (header, rows) = read_csv(&output);
    assert_eq!(header.len(), 35);
    assert_eq!(rows.len(), 34);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[i + 1], "1");
        for (j, v) in row[1..].iter().enumerate() {
            assert_eq!(v, &rows[j][i + 1]);
        }
    }
    assert!(num(&rows[0][2]) > 0.0);
    assert!(num(&rows[0][34]) < 0.0);

    let svg = fs::read_to_string(dir.path().join("alpha.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let cells = doc
        .descendants()
        .filter(|n| n.has_tag_name("rect") && n.attribute("width") == Some("14"))
        .count();
    assert_eq!(cells, 34 * 34);
}

#[test]
fn affinity_direct_matches_sweep_file() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "g.txt", "1 2\n2 3\n3 1\n3 4\n4 5\n5 6\n6 4\n");
    let sweep_dir = dir.path().join("s");
    ok(&["sweep", "--input", path_str(&input), "--out-dir", path_str(&sweep_dir)]);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    ok(&["affinity", "--input", path_str(&input), "-o", path_str(&a)]);
    ok(&["affinity", "--sweep", path_str(&sweep_dir.join("sweep.json")), "-o", path_str(&b)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn compare_on_cycle_agrees_and_on_karate_differs() {
    let dir = TempDir::new().unwrap();
    let c6 = write_file(&dir, "c6.txt", "1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n");
    let out = ok(&["compare", "--input", path_str(&c6), "--start", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("node,pop_adjacency,pop_laplacian,diff\n"));
    let diffs: Vec<f64> = text.lines().skip(1).map(|l| num(l.rsplit(',').next().unwrap())).collect();
    assert_eq!(diffs.len(), 6);
    assert!(diffs.iter().all(|d| d.abs() < 1e-9));

    let out = ok(&["compare", "--dataset", "karate", "--start", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let worst = text
        .lines()
        .skip(1)
        .map(|l| num(l.rsplit(',').next().unwrap()).abs())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
}

#[test]
fn contrast_reports_both_generators() {
    let out = ok(&["contrast", "--dataset", "karate"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let a = doc["report"]["adjacency"]["overall"].as_f64().unwrap();
    let l = doc["report"]["laplacian"]["overall"].as_f64().unwrap();
    assert!(a > l);

    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "p.txt", "1 2\n2 3\n");
    assert_eq!(ctqw(&["contrast", "--input", path_str(&input)]).status.code(), Some(1));
}

#[test]
fn generate_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for p in [&a, &b] {
        ok(&["generate", "-c", "4", "-s", "10", "--pin", "0.3", "--pout", "0.02", "--seed", "5", "-o", path_str(p)]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let labels = fs::read_to_string(a.with_extension("labels")).unwrap();
    assert_eq!(labels.lines().count(), 40);
    assert_eq!(labels, fs::read_to_string(b.with_extension("labels")).unwrap());

    let c = dir.path().join("c.txt");
    ok(&["generate", "-c", "4", "-s", "10", "--pin", "0.3", "--pout", "0.02", "--seed", "6", "-o", path_str(&c)]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn generate_rejects_bad_probabilities() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.txt");
    for (pin, pout) in [("0", "0"), ("0.1", "0.5"), ("1.5", "0.1")] {
        let o = ctqw(&["generate", "-c", "2", "-s", "5", "--pin", pin, "--pout", pout, "-o", path_str(&out)]);
        assert_eq!(o.status.code(), Some(1), "pin={pin} pout={pout}");
    }
    assert!(!out.exists());
}

#[test]
fn generated_files_load_back() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    let labels = dir.path().join("g.labels");
    ok(&["generate", "-c", "2", "-s", "8", "--pin", "0.7", "--pout", "0.1", "--seed", "1", "-o", path_str(&g)]);
    let out = ok(&["contrast", "--input", path_str(&g), "--labels", path_str(&labels), "--T", "20pi"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["report"]["adjacency"]["per_community"].as_array().unwrap().len(), 2);
}

#[test]
fn edge_list_round_trip() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    ok(&["generate", "-c", "3", "-s", "6", "--pin", "0.6", "--pout", "0.1", "--seed", "9", "-o", path_str(&g)]);
    let text = fs::read_to_string(&g).unwrap();
    let net = ctqw::datasets::load_edge_list(&g).unwrap();
    let body: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    assert_eq!(net.graph.to_edge_list(), body);
}

#[test]
fn csv_output_round_trips_through_parser() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("s");
    ok(&["sweep", "--dataset", "karate", "--out-dir", path_str(&out_dir)]);
    let path = out_dir.join("deltas.csv");
    let (header, rows) = read_csv(&path);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).unwrap();
    for row in &rows {
        let reformatted: Vec<String> = row
            .iter()
            .map(|s| ctqw::cli::output::fmt_sig12(num(s)))
            .collect();
        w.write_record(&reformatted).unwrap();
    }
    assert_eq!(w.into_inner().unwrap(), fs::read(&path).unwrap());
}

#[test]
fn planted_partition_golden_snapshot() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    ok(&["generate", "-c", "2", "-s", "20", "--pin", "0.5", "--pout", "0.05", "--seed", "42", "-o", path_str(&g)]);

    let body = |p: &Path| -> Vec<String> {
        fs::read_to_string(p).unwrap().lines().skip(1).map(String::from).collect()
    };
    assert_eq!(body(&g), body(&golden.join("planted_c2_s20_seed42.txt")));
    assert_eq!(
        fs::read_to_string(dir.path().join("g.labels")).unwrap(),
        fs::read_to_string(golden.join("planted_c2_s20_seed42.labels")).unwrap()
    );

    let first = fs::read_to_string(&g).unwrap().lines().next().unwrap().to_string();
    let manifest: serde_json::Value = serde_json::from_str(first.trim_start_matches("# ")).unwrap();
    assert_eq!(manifest["parameters"]["seed_used"], 42);
    assert_eq!(manifest["parameters"]["connected"], true);
}
