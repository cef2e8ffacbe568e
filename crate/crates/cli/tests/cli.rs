use std::process::{Command, Output};

fn sdf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdf")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV written by the tool: comment line checked and dropped.
fn rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    let first = lines.next().unwrap();
    let hash = first.strip_prefix("# config_hash=").expect("hash comment first");
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn rank_prints_benchmark_means() {
    let out = sdf(&["rank"]);
    assert!(out.status.success());
    let table = rows(&stdout(&out));
    assert_eq!(table[0], ["method", "mean_rank"]);
    let means: Vec<f64> = table[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    let want = [4.00, 4.15, 5.00, 5.65, 5.85, 1.80, 1.55];
    assert_eq!(means.len(), want.len());
    for (m, w) in means.iter().zip(want) {
        assert!((m - w).abs() < 0.01, "{means:?}");
    }
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text.contains("reject=true"), "{text}");
}

#[test]
fn run_is_byte_identical_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = sdf(&[
            "run", "--stream", "AGR_a", "-n", "3000", "--trees", "3", "--layers", "2", "--strategy", "avu", "--budget",
            "0.4", "--seed", "9", "--window", "500", "-o", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(stdout(&out).contains("model=sdf layers=2"));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let table = rows(std::str::from_utf8(&a).unwrap());
    assert_eq!(table[0][0], "end");
    assert_eq!(table.len(), 1 + 6);
    let fraction: f64 = table[6][6].parse().unwrap();
    assert!(fraction <= 0.4 + 1e-3);
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "# experiment\nstream = SEA_a\ninstances = 1500\ntrees = 2\nlayers = 1\nseed = 3\n").unwrap();
    let from_file = sdf(&["run", "--config", cfg.to_str().unwrap()]);
    let from_flags = sdf(&["run", "--stream", "SEA_a", "-n", "1500", "--trees", "2", "--layers", "1", "--seed", "3"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);
    // Flags override the file.
    let overridden = sdf(&["run", "--config", cfg.to_str().unwrap(), "--seed", "4"]);
    assert_ne!(overridden.stdout, from_file.stdout);
}

#[test]
fn sweep_has_one_row_per_budget_and_strategy() {
    let out = sdf(&["sweep", "--stream", "SEA_a", "-n", "1000", "--trees", "2", "--layers", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&stdout(&out));
    assert_eq!(table[0], ["strategy", "budget", "instances", "accuracy", "labels", "label_fraction"]);
    let body = &table[1..];
    assert_eq!(body.len(), 18);
    for (i, strategy) in ["VU", "AVU"].into_iter().enumerate() {
        for (j, row) in body[i * 9..(i + 1) * 9].iter().enumerate() {
            let budget: f64 = row[1].parse().unwrap();
            assert_eq!(row[0], strategy);
            assert!((budget - 0.1 * (j + 1) as f64).abs() < 1e-9);
            assert_eq!(row[2], "1000");
            let accuracy: f64 = row[3].parse().unwrap();
            let fraction: f64 = row[5].parse().unwrap();
            assert!((0.0..=1.0).contains(&accuracy));
            assert!(fraction <= budget + 1e-3, "{row:?}");
        }
    }
}

#[test]
fn depth_reports_every_layer_count() {
    let out = sdf(&["depth", "--stream", "SEA_a", "-n", "1000", "--trees", "2", "--layers", "3"]);
    assert!(out.status.success());
    let table = rows(&stdout(&out));
    assert_eq!(table[0], ["layers", "instances", "correct", "accuracy"]);
    let layers: Vec<&str> = table[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(layers, ["1", "2", "3"]);
}

#[test]
fn generated_csv_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("agr.csv");
    let out = sdf(&[
        "generate", "--generator", "agrawal", "--set", "function=3", "--set", "nominal=true", "-n", "300", "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(table.len(), 301);
    assert_eq!(table[0].len(), 10);
    assert!(table[1][4].starts_with("car"));
    let run = sdf(&["run", "--data", path.to_str().unwrap(), "--trees", "2", "--layers", "1"]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8(run.stderr).unwrap().contains("instances=300"));
}

#[test]
fn exit_codes() {
    assert_eq!(sdf(&["--help"]).status.code(), Some(0));
    let usage = sdf(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(1));
    assert!(String::from_utf8(usage.stderr).unwrap().contains("Usage"));
    assert_eq!(sdf(&["run", "--bogus-flag"]).status.code(), Some(1));
    assert_eq!(sdf(&["run", "--strategy", "avu", "-n", "10"]).status.code(), Some(1));
    assert_eq!(sdf(&["run", "--stream", "nope"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let data = sdf(&["run", "--data", missing.to_str().unwrap()]);
    assert_eq!(data.status.code(), Some(2));
    assert!(String::from_utf8(data.stderr).unwrap().contains("missing.csv"));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "a,class\n1,x\n2\n").unwrap();
    let row = sdf(&["run", "--data", bad.to_str().unwrap()]);
    assert_eq!(row.status.code(), Some(2));
    assert!(String::from_utf8(row.stderr).unwrap().contains("line 3"));

    let alpha = sdf(&["rank", "--set", "alpha=0.1"]);
    assert_eq!(alpha.status.code(), Some(3));
}

#[test]
fn rank_reads_a_custom_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("acc.csv");
    std::fs::write(&path, "dataset,A,B,C\nd1,0.9,0.8,0.7\nd2,0.6,0.8,0.7\nd3,0.9,0.9,0.1\n").unwrap();
    let out = sdf(&["rank", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let table = rows(&stdout(&out));
    let ranks: Vec<&str> = table[1..].iter().map(|r| r[1].as_str()).collect();
    // A ranks (1, 3, 1.5), B (2, 1, 1.5), C (3, 2, 3).
    assert_eq!(ranks, ["1.83", "1.50", "2.67"]);
}
