use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const TRACE: &str = "gen:stars,stars=4,leaves=7,length=20000,seed=5";

fn tmtnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmtnet")).args(args).env_remove("TMTNET_OUT").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = tmtnet(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn run_args<'a>(dir: &'a str, algo: &'a str) -> Vec<&'a str> {
    vec!["run", "--trace", TRACE, "--algo", algo, "--rate", "2000", "--window", "4000", "--seed", "9", "--out-dir", dir]
}

#[test]
fn generate_is_deterministic_and_stats_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        ok(&[
            "generate",
            "stars",
            "--stars",
            "4",
            "--leaves",
            "7",
            "--length",
            "5000",
            "--seed",
            "3",
            "-o",
            p.to_str().unwrap(),
        ]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(read(&a).lines().count(), 5000);

    let stats = ok(&["stats", "--trace", a.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stats).unwrap();
    assert_eq!(v["nodes"], 32);
    assert_eq!(v["length"], 5000);
}

#[test]
fn generate_forest_writes_a_demand_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("forest.txt");
    ok(&["generate", "forest", "--n", "20", "--seed", "1", "-o", p.to_str().unwrap()]);
    let total: f64 = read(&p)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn run_writes_reports_and_reruns_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let mut args = run_args(dir.path().to_str().unwrap(), "egotrees");
        args.extend(["--name", "r", "--activity"]);
        ok(&args);
    }
    let files = ["r.summary.csv", "r.json", "r.hist.csv", "r.activity.csv"];
    for f in files {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let summary = read(&a.path().join("r.summary.csv"));
    let row: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..8], ["egotrees", "stars4x7-m20000-s5", "32", "4", "2000", "4000", "9", "20000"]);
    let json: serde_json::Value = serde_json::from_str(&read(&a.path().join("r.json"))).unwrap();
    assert_eq!(json["reconfigs"], 10);
    assert_eq!(json["reconstructed"], false);
}

#[test]
fn one_point_sweep_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&run_args(d, "kmatching"));
    ok(&[
        "sweep",
        "--trace",
        TRACE,
        "--algos",
        "kmatching",
        "--rates",
        "2000",
        "--windows",
        "4000",
        "--seed",
        "9",
        "--out-dir",
        d,
    ]);
    let run = read(&dir.path().join("stars4x7-m20000-s5-kmatching-R2000-W4000.summary.csv"));
    assert_eq!(read(&dir.path().join("sweep.csv")), run);
    let best = read(&dir.path().join("sweep.best.csv"));
    assert_eq!(best.lines().count(), 2);
    assert!(best.starts_with("trace,algo,W,R,apl\nstars4x7-m20000-s5,kmatching,4000,2000,"));
}

#[test]
fn sweep_grid_order_and_best_point() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "sweep",
        "--trace",
        TRACE,
        "--algos",
        "egotrees,expander",
        "--rates",
        "2000,5000",
        "--windows",
        "4000",
        "--jobs",
        "2",
        "--out-dir",
        d,
    ]);
    let sweep = read(&dir.path().join("sweep.csv"));
    let keys: Vec<String> = sweep.lines().skip(1).map(|l| l.split(',').take(6).collect::<Vec<_>>().join(",")).collect();
    let want: Vec<String> = ["egotrees", "expander"]
        .iter()
        .flat_map(|a| ["2000", "5000"].map(|r| format!("{a},stars4x7-m20000-s5,32,4,{r},4000")))
        .collect();
    assert_eq!(keys, want);
    let apl = |line: &str| line.split(',').nth(9).unwrap().parse::<f64>().unwrap();
    let best = read(&dir.path().join("sweep.best.csv"));
    for b in best.lines().skip(1) {
        let algo = b.split(',').nth(1).unwrap();
        let min = sweep.lines().skip(1).filter(|l| l.starts_with(algo)).map(apl).fold(f64::INFINITY, f64::min);
        assert_eq!(b.rsplit(',').next().unwrap().parse::<f64>().unwrap(), min);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("from-file");
    fs::write(
        &cfg,
        serde_json::json!({
            "trace": TRACE, "algo": "bma", "rate": 2000, "window": 4000, "k": 3, "seed": 1,
            "out_dir": out, "name": "c"
        })
        .to_string(),
    )
    .unwrap();
    ok(&["run", "--config", cfg.to_str().unwrap(), "--k", "2"]);
    let row = read(&out.join("c.summary.csv"));
    let fields: Vec<&str> = row.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(fields[0], "bma");
    assert_eq!(fields[3], "2", "flag overrides file");
    assert_eq!(fields[6], "1");

    fs::write(&cfg, r#"{"trace": "x", "colour": 1}"#).unwrap();
    assert!(!tmtnet(&["run", "--config", cfg.to_str().unwrap()]).status.success());
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_tmtnet"))
        .args(["run", "--trace", TRACE, "--algo", "expander", "--rate", "never", "--window", "4000", "--name", "e"])
        .env("TMTNET_OUT", dir.path())
        .current_dir(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("e.summary.csv").exists());
    let json: serde_json::Value = serde_json::from_str(&read(&dir.path().join("e.json"))).unwrap();
    assert_eq!(json["R"], "never");
    assert_eq!(json["reconfigs"], 0);
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for args in [
        run_args(d, "dijkstra"),
        vec!["run", "--trace", "gen:stars,colour=red", "--algo", "egotrees", "--out-dir", d],
        vec!["run", "--trace", "/no/such/trace.txt", "--algo", "egotrees", "--out-dir", d],
        vec!["sweep", "--trace", TRACE, "--jobs", "0", "--out-dir", d],
    ] {
        let out = tmtnet(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error"), "{args:?}");
    }
}

#[test]
fn decompose_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let out = dir.path().join("m.json");
    // Two disjoint 3-cycles in each direction: 2-regular on 6 nodes.
    let edges = [[0, 1], [1, 2], [2, 0], [1, 0], [2, 1], [0, 2], [3, 4], [4, 5], [5, 3], [4, 3], [5, 4], [3, 5]];
    fs::write(&net, serde_json::json!({"n": 6, "k": 2, "edges": edges}).to_string()).unwrap();
    ok(&["decompose", "--network", net.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    let m: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let mut back: Vec<[u64; 2]> = m["matchings"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|p| p.as_array().unwrap().iter().enumerate().map(|(u, v)| [u as u64, v.as_u64().unwrap()]))
        .collect();
    back.sort();
    let mut want: Vec<[u64; 2]> = edges.iter().map(|&[u, v]| [u, v]).collect();
    want.sort();
    assert_eq!(back, want);

    let stdout = ok(&["decompose", "--network", net.to_str().unwrap()]);
    assert_eq!(stdout, read(&out));

    fs::write(&net, r#"{"n": 3, "k": 1, "edges": [[0, 1]]}"#).unwrap();
    assert!(!tmtnet(&["decompose", "--network", net.to_str().unwrap()]).status.success());
}
