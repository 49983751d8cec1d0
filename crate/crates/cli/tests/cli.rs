use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sato-tate"));
    c.env_remove("SATO_TATE_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn sha256(path: &Path) -> String {
    hex::encode(Sha256::digest(fs::read(path).unwrap()))
}

#[test]
fn expand_delta12_begins_with_tau() {
    let o = run(&["expand", "--form", "delta12", "--prec", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let values: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(values.len(), 10);
    assert_eq!(&values[..3], ["0", "1", "-24"]);
    assert_eq!(values[9], "-113643");
}

#[test]
fn expand_formats_round_trip() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["expand", "--form", "11a", "--prec", "50", "--format", "binary", "--out", "f.bin"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_in(dir.path(), &["expand", "--form", "11a", "--prec", "50", "--format", "text", "--out", "f.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let bin = sato_tate_core::qexp::io::read_binary(fs::File::open(dir.path().join("f.bin")).unwrap()).unwrap();
    let txt = fs::read_to_string(dir.path().join("f.txt")).unwrap();
    let txt = sato_tate_core::qexp::io::read_text(txt.as_bytes()).unwrap();
    assert_eq!(bin, txt);
    assert_eq!(bin.prec(), 50);
    // q prod (1 - q^n)^2 (1 - q^11n)^2 = q - 2q^2 - q^3 + 2q^4 + q^5 + ...
    let head: Vec<i64> = bin.coeffs()[..6].iter().map(|c| c.to_string().parse().unwrap()).collect();
    assert_eq!(head, [0, 1, -2, -1, 2, 1]);
}

#[test]
fn outputs_are_reproducible_and_manifested() {
    let dir = TempDir::new().unwrap();
    let args = ["angles", "--form", "delta12", "--xmax", "2000", "--out", "a.csv"];
    assert_eq!(run_in(dir.path(), &args).status.code(), Some(0));
    let first = fs::read(dir.path().join("a.csv")).unwrap();
    let m1: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(run_in(dir.path(), &args).status.code(), Some(0));
    let second = fs::read(dir.path().join("a.csv")).unwrap();
    let m2: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(first, second);
    // only the timing block may differ between the two manifests
    assert_eq!(m1["content_sha256"], m2["content_sha256"]);
    let mut a = m1.clone();
    let mut b = m2.clone();
    a.as_object_mut().unwrap().remove("timing");
    b.as_object_mut().unwrap().remove("timing");
    assert_eq!(a, b);
    assert_eq!(m1["command"], "angles");
    assert_eq!(m1["outputs"][0]["sha256"], sha256(&dir.path().join("a.csv")));
    assert!(m1["timing"]["timestamp_unix"].as_u64().unwrap() > 0);

    let csv = String::from_utf8(first).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,theta_p"));
    let rows: Vec<(u64, f64)> = lines
        .map(|l| {
            let (p, t) = l.split_once(',').unwrap();
            (p.parse().unwrap(), t.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 303);
    // tau(2) = -24 = 2 * 2^{11/2} cos(theta_2)
    let expected = (-24.0 / (2.0 * 2f64.powf(5.5))).acos();
    assert!((rows[0].1 - expected).abs() < 1e-15);
}

#[test]
fn json_artifacts_name_their_manifest() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["sieve", "--hmax", "500", "--out", "sieve.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sieve.json")).unwrap()).unwrap();
    assert_eq!(v["manifest"], "sieve.json.manifest.json");
    assert!(dir.path().join("sieve.json.manifest.json").exists());
    let m = 3_094_972_416_000u64;
    for c in v["report"]["candidates"].as_array().unwrap() {
        assert_eq!(c.as_u64().unwrap() % m, m - 1);
    }
}

#[test]
fn cache_is_reused_and_validated() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("cache");
    let with_cache = |args: &[&str]| bin().env("SATO_TATE_CACHE", &cache).args(args).output().unwrap();

    let fresh = run(&["expand", "--form", "delta18", "--prec", "300"]);
    let first = with_cache(&["expand", "--form", "delta18", "--prec", "300"]);
    assert_eq!(first.stdout, fresh.stdout);
    let entry = cache.join("delta18.p300.qser");
    assert!(entry.exists());

    // a smaller request is served from the larger entry
    let small = with_cache(&["expand", "--form", "delta18", "--prec", "40"]);
    let fresh_small = run(&["expand", "--form", "delta18", "--prec", "40"]);
    assert_eq!(small.stdout, fresh_small.stdout);

    // corrupt the entry: its hash no longer matches, so it is rebuilt
    let mut bytes = fs::read(&entry).unwrap();
    let last = bytes.len() - 2;
    bytes[last] ^= 0xff;
    fs::write(&entry, bytes).unwrap();
    let again = with_cache(&["expand", "--form", "delta18", "--prec", "300"]);
    assert_eq!(again.stdout, fresh.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["expand", "--form", "delta12", "--prec", "5", "--frobnicate"][..],
        &["transmogrify"],
        &["expand", "--form", "delta14", "--prec", "5"],
        &["expand", "--form", "delta12"],
        &[
            "sandwich", "--form", "delta12", "--x", "100", "--alpha", "2", "--beta", "1", "--delta", "1e-3",
            "--ntrunc", "10",
        ],
        &["density", "--form", "delta12", "--x0", "1e23"],
        &["quadform", "--form", "q1", "--nmax", "10", "--check", "thm19"],
        &["report", "--only", "11"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn failing_check_exits_one() {
    // the level-11 density floor is out of reach at desk scale
    let o = run(&["report", "--only", "8", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["failed"], 1);
    assert_eq!(v["criteria"][0]["passed"], false);
}

#[test]
fn passing_report_exits_zero() {
    let o = run(&["report", "--only", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[PASS]  2 "));
}

#[test]
fn zero_bound_exposes_three_terms() {
    let o = run(&["bounds", "--which", "zero", "--N", "11", "--k", "2", "--x", "1e11"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    assert!(terms[0]["name"].as_str().unwrap().starts_with("7.392 x^{3/4}"));
    let x: f64 = 1e11;
    let (l, ll) = (x.ln(), x.ln().ln());
    let expected = [
        7.392 * x.powf(0.75) / l.sqrt(),
        -7.391 * x.powf(0.75) * ll / l.powf(1.5),
        (15.296 + 14.784 * 11f64.ln()) * x.powf(0.75) / l.powf(1.5),
    ];
    let mut sum = 0.0;
    for (t, e) in terms.iter().zip(expected) {
        let got = t["value"].as_f64().unwrap();
        assert!((got / e - 1.0).abs() < 1e-12, "{got} vs {e}");
        sum += got;
    }
    assert!((v["value"].as_f64().unwrap() / sum - 1.0).abs() < 1e-12);
    assert_eq!(v["regime"], "in-regime");
}

#[test]
fn bounds_context_file_and_overrides() {
    let dir = TempDir::new().unwrap();
    let ctx = dir.path().join("ctx.json");
    fs::write(&ctx, r#"{"level": 11, "weight": 2, "x": 1e5}"#).unwrap();
    let ctx = ctx.to_str().unwrap();
    let from_file = json(&run(&["bounds", "--which", "zero", "--json", ctx]));
    assert_eq!(from_file["regime"], "extrapolated");
    assert_eq!(from_file["context"]["N"], 11);
    let overridden = json(&run(&["bounds", "--which", "zero", "--json", ctx, "--x", "1e11"]));
    assert_eq!(overridden["regime"], "in-regime");
    let direct = json(&run(&["bounds", "--which", "zero", "--N", "11", "--k", "2", "--x", "1e11"]));
    assert_eq!(overridden["value"], direct["value"]);

    let hp = json(&run(&["bounds", "--which", "main", "--x", "1e17", "--alpha", "0.5", "--beta", "1.5", "--hp"]));
    let value_hp: f64 = hp["value_hp"].as_str().unwrap().parse().unwrap();
    assert!((value_hp / hp["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn density_emits_exact_alpha_and_table_value() {
    let o =
        run(&["density", "--form", "delta12", "--x0", "1e23", "--prime-count", "1810", "--prime-min", "3094972415999"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["alpha_f"]["num"], "1");
    assert_eq!(v["alpha_f"]["den"], "1");
    let lb = v["lower_bound"].as_f64().unwrap();
    assert!((0.9999912..0.9999912 + 2e-6).contains(&lb), "{lb}");
    for key in ["integral", "finite_product", "regime", "precision"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let v = json(&run(&["density", "--form", "11a", "--x0", "1e4", "--supersingular"]));
    assert_eq!(v["alpha_f"]["num"], "14");
    assert_eq!(v["alpha_f"]["den"], "15");
    assert!(v["lower_bound"].as_f64().unwrap() <= v["upper_bound"].as_f64().unwrap());
}

#[test]
fn congruence_table_and_rule_export() {
    let dir = TempDir::new().unwrap();
    let o =
        run_in(dir.path(), &["congruences", "--weight", "20", "--prec", "500", "--rules-out", "rules.json", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    let rules: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("rules.json")).unwrap()).unwrap();
    assert_eq!(rules["rules"].as_array().unwrap().len(), v["report"]["outcomes"].as_array().unwrap().len());
    assert!(dir.path().join("rules.json.manifest.json").exists());

    let text = stdout(&run(&["congruences", "--weight", "16", "--prec", "300", "--sturm"]));
    assert!(text.contains("Sturm certificate (bound 128): pass"));
    assert!(text.trim_end().ends_with("all rules pass"));
}

#[test]
fn quadform_report_and_table() {
    let dir = TempDir::new().unwrap();
    let o =
        run_in(dir.path(), &["quadform", "--form", "q2", "--nmax", "300", "--check", "thm19", "--table-out", "t.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    let table = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("n,r_Q,eis_num,eis_den,cusp_num,cusp_den"));
    let rows: Vec<Vec<i128>> = lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 301);
    for r in &rows {
        // r_Q = eis + cusp as rationals
        assert_eq!(r[1] * r[3] * r[5], r[2] * r[5] + r[4] * r[3], "n = {}", r[0]);
    }
    // 24 squares: r(1) = 48
    assert_eq!(rows[1][1], 48);
}

#[test]
fn sandwich_and_histogram() {
    let v = json(&run(&[
        "sandwich", "--form", "11a", "--x", "5000", "--alpha", "0.3", "--beta", "2.0", "--delta", "5e-4", "--ntrunc",
        "2000",
    ]));
    assert_eq!(v["holds"], true);
    let count = v["count"].as_f64().unwrap();
    let tail = v["tail"].as_f64().unwrap();
    assert!(v["lower"].as_f64().unwrap() - tail <= count && count <= v["upper"].as_f64().unwrap() + tail);

    let csv = stdout(&run(&["histogram", "--form", "delta12", "--x", "5000", "--bins", "6"]));
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    let mass: f64 = rows.iter().map(|r| r[3]).sum();
    assert!((mass - 1.0).abs() < 1e-12);
    // primes in (5000, 10000]
    assert_eq!(rows.iter().map(|r| r[2]).sum::<f64>(), 560.0);
}
