//! Black-box tests of the binary: output shapes, determinism, exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lapenergy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

fn write_tmp(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

const K3: &str = "3 3\n0 1\n0 2\n1 2\n";

#[test]
fn gen_is_deterministic_and_respects_p_extremes() {
    let a = run(&["gen", "--n", "30", "--p", "0.4", "--seed", "11"]);
    let b = run(&["gen", "--n", "30", "--p", "0.4", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));

    // p = 1 gives the complete graph with lexicographic edges, p = 0 none
    let full = run(&["gen", "--n", "5", "--p", "1.0", "--seed", "3"]);
    let mut want = String::from("5 10\n");
    for i in 0..5 {
        for j in i + 1..5 {
            want.push_str(&format!("{i} {j}\n"));
        }
    }
    assert_eq!(stdout(&full), want);
    let empty = run(&["gen", "--n", "5", "--p", "0.0", "--seed", "3"]);
    assert_eq!(stdout(&empty), "5 0\n");
}

#[test]
fn gen_writes_to_a_file_with_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let out = run(&["gen", "--n", "12", "--p", "0.5", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let direct = run(&["gen", "--n", "12", "--p", "0.5", "--seed", "1"]);
    assert_eq!(text, stdout(&direct));
}

#[test]
fn energy_reports_known_values_for_a_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_tmp(dir.path(), "k3.txt", K3);
    let out = run(&["energy", "--graph", &path]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let v = json(&out);
    // K_3 adjacency spectrum {2, -1, -1}: E = 4, LEL of L spectrum {0,3,3}
    assert!((v["graph_energy"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert!((v["lel"].as_f64().unwrap() - 2.0 * 3f64.sqrt()).abs() < 1e-7);
    assert_eq!(v["meta"]["n"], 3);
    assert_eq!(v["meta"]["m"], 3);
    assert_eq!(v["meta"]["weight"], "unweighted");
    // file input carries no sampling metadata
    assert!(v["meta"].get("p").is_none());
    assert!(v["meta"].get("seed").is_none());
}

#[test]
fn energy_on_sampled_graph_records_p_and_seed() {
    let out = run(&["energy", "--n", "20", "--p", "0.5", "--seed", "9", "--weight", "harary"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["meta"]["p"], 0.5);
    assert_eq!(v["meta"]["seed"], 9);
    assert_eq!(v["meta"]["weight"], "harary");
}

#[test]
fn distance_weight_on_disconnected_graph_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_tmp(dir.path(), "split.txt", "4 2\n0 1\n2 3\n");
    let out = run(&["energy", "--graph", &path, "--weight", "rcw"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    let out = run(&["energy", "--n", "20", "--p", "0.5", "--weight", "no_such_weight"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["energy", "--graph", "/nonexistent/graph.txt"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = write_tmp(dir.path(), "bad.txt", "3 2\n0 1\nbroken\n");
    let out = run(&["energy", "--graph", &path]);
    assert_eq!(out.status.code(), Some(2));

    // clap's own usage handling
    let out = run(&["energy"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_config_errors_exit_2_and_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_tmp(dir.path(), "bad.toml", "weights = [\"harary\"\n");
    let out = run(&["sweep", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "stderr: {}", stderr(&out));

    let path = write_tmp(dir.path(), "unknown_field.toml",
        "weights = [\"harary\"]\nn_values = [20]\np = 0.5\ntrials = 1\nmaster_seed = 1\nquantities = [\"LEL_f\"]\nbogus = 1\n");
    let out = run(&["sweep", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn predict_emits_the_asymptotic_value_and_filters() {
    let out = run(&["predict", "--weight", "harary", "--n", "1000", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weight"], "harary");
    let preds = v["predictions"].as_array().unwrap();
    assert_eq!(preds.len(), 6);
    let lel = preds.iter().find(|p| p["quantity"] == "LEL_f").unwrap();
    // sqrt((1 + p)/2) n^1.5 at n = 1000, p = 0.5, roughly 27386.128
    let want = ((1.0 + 0.5) / 2.0f64).sqrt() * 1000f64.powf(1.5);
    assert!((lel["value"].as_f64().unwrap() - want).abs() < 1e-9 * want);
    assert!(v["bulk_location"].as_f64().unwrap() > 0.0);

    let out = run(&["predict", "--weight", "harary", "--n", "1000", "--p", "0.5", "--quantity", "LEL_f"]);
    let v = json(&out);
    assert_eq!(v["predictions"].as_array().unwrap().len(), 1);

    let out = run(&["predict", "--weight", "harary", "--n", "1000", "--p", "0.5", "--quantity", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_prints_descending_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_tmp(dir.path(), "k3.txt", K3);
    let out = run(&["spectrum", "--graph", &path, "--matrix", "A"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let values: Vec<f64> = stdout(&out).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values.len(), 3);
    assert!((values[0] - 2.0).abs() < 1e-10);
    assert!((values[1] + 1.0).abs() < 1e-10);
    assert!((values[2] + 1.0).abs() < 1e-10);
}

#[test]
fn esd_bins_the_laplacian_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write_tmp(dir.path(), "k4.txt", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let out = run(&["esd", "--graph", &k4, "--matrix", "L", "--bins", "2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("bin_left,bin_right,count"));
    // L(K_4) spectrum {0, 4, 4, 4} over two bins of [0, 4]
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][2], "1");
    assert_eq!(rows[1][2], "3");
    assert!((rows[0][0].parse::<f64>().unwrap() - 0.0).abs() < 1e-12);
    assert!((rows[1][1].parse::<f64>().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn sweep_output_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tmp(dir.path(), "sweep.toml",
        "weights = [\"unweighted\", \"harary\"]\nn_values = [40]\np = 0.5\ntrials = 2\nmaster_seed = 5\nquantities = [\"LEL_f\", \"LE_f\"]\n");
    let one = bin().args(["--jobs", "1", "sweep", "--config", &cfg]).output().unwrap();
    let two = bin().args(["--jobs", "2", "sweep", "--config", &cfg]).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(two.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, two.stdout);
    // verdict goes to stderr, data to stdout
    assert!(stderr(&one).contains("sweep verdict"));
    assert!(stdout(&one).starts_with("# sweep results"));
}

#[test]
fn sweep_writes_csv_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tmp(dir.path(), "sweep.toml",
        "weights = [\"unweighted\"]\nn_values = [30]\np = 0.5\ntrials = 1\nmaster_seed = 2\nquantities = [\"LEL_f\"]\n");
    let path = dir.path().join("results.csv");
    let out = run(&["sweep", "--config", &cfg, "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# sweep results"));
    assert!(text.contains("unweighted,LEL_f,30,0.5,0,"));
}
