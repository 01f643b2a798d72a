use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tclgate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tclgate")).args(args).output().expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn read(path: &Path) -> Self {
        let text = fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Table { header, rows }
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }

    fn raw(&self, name: &str) -> Vec<&str> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[i].as_str()).collect()
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn default_run_reproduces_the_swap() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run.csv");
    let cfg = write_config(&dir, "baseline.cfg", &format!("# baseline parameters\noutput_path = {}\n", s(&out)));
    let res = tclgate(&["run", "--config", s(&cfg)]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 401);
    assert!(!text.contains('\r'));
    let table = Table::read(&out);
    assert_eq!(
        table.header.join(","),
        "t,tbar,s1,s2,gate_fidelity,gate_purity,state_fidelity,state_purity,entropy_bits,trace_error,herm_error"
    );
    assert!(table.raw("state_fidelity").iter().all(|v| v.is_empty()));

    let t = table.column("t");
    let s1 = table.column("s1");
    let near_swap = (0..t.len()).min_by(|&a, &b| (t[a] - std::f64::consts::PI).abs().total_cmp(&(t[b] - std::f64::consts::PI).abs())).unwrap();
    assert!(s1[0].abs() < 1e-12);
    assert!(s1[near_swap] > 0.9 && s1[near_swap] < 1.0);
    let after: Vec<f64> = s1[near_swap + 1..].to_vec();
    assert!(after.windows(2).all(|w| w[1] <= w[0] + 1e-6));
    assert!(table.column("trace_error").iter().all(|&e| e < 1e-8));
}

#[test]
fn unitary_limit_is_perfect() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ideal.csv");
    let cfg = write_config(
        &dir,
        "ideal.cfg",
        &format!("lambda2_eta = 0\nt_max = 1\nn_points = 11\noutput_path = {}\n", s(&out)),
    );
    assert!(tclgate(&["run", "--config", s(&cfg)]).status.success());
    let table = Table::read(&out);
    let s1 = table.column("s1");
    assert!((s1[10] - 1.0).abs() < 1e-10);
    for name in ["gate_fidelity", "gate_purity"] {
        assert!(table.column(name).iter().all(|v| (v - 1.0).abs() < 1e-12), "{name}");
    }
}

#[test]
fn singlet_entropy_grows_from_zero() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("singlet.csv");
    let cfg = write_config(
        &dir,
        "singlet.cfg",
        &format!("initial_state = singlet\nbath_mode = high_t\nn_points = 50\noutput_path = {}\n", s(&out)),
    );
    assert!(tclgate(&["run", "--config", s(&cfg)]).status.success());
    let table = Table::read(&out);
    let entropy = table.column("entropy_bits");
    assert!(entropy[0].abs() < 1e-9);
    assert!(entropy.windows(2).all(|w| w[1] >= w[0] - 1e-6));
    assert!(entropy[49] > 0.01);
    let fidelity = table.column("state_fidelity");
    assert!((fidelity[0] - 1.0).abs() < 1e-12);
    assert!(fidelity.windows(2).all(|w| w[1] <= w[0] + 1e-6));
}

#[test]
fn output_is_deterministic_and_config_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "a.cfg", "bath_mode = high_t\nn_points = 40\nt_max = 2\nseed = 3\n");
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    let dumped = dir.path().join("dumped.cfg");
    assert!(tclgate(&["run", "--config", s(&cfg), "--output", s(&first), "--dump-config", s(&dumped)]).status.success());
    assert!(tclgate(&["run", "--config", s(&dumped), "--output", s(&second)]).status.success());
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    let dump = fs::read_to_string(&dumped).unwrap();
    assert!(dump.contains("bath_mode = high_t") && dump.contains("lambda2_eta = 1.8e-5"));
}

#[test]
fn sweep_degradation_is_linear_in_coupling() {
    let dir = TempDir::new().unwrap();
    let base = dir.path().join("sweep.csv");
    let cfg = write_config(&dir, "sweep.cfg", &format!("t_max = 1\nn_points = 5\noutput_path = {}\n", s(&base)));
    let res = tclgate(&["sweep", "--config", s(&cfg), "--param", "lambda2_eta", "--values", "0.5e-5,1.8e-5,3.0e-5"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for k in 0..3 {
        assert!(dir.path().join(format!("sweep_lambda2_eta_{k}.csv")).exists());
    }
    let summary = Table::read(&dir.path().join("sweep_lambda2_eta_summary.csv"));
    assert_eq!(summary.header.join(","), "value,s1_at_taus,gate_fidelity_at_taus,gate_purity_at_taus,entropy_at_taus");
    let x = summary.column("value");
    let s1 = summary.column("s1_at_taus");
    let loss: Vec<f64> = s1.iter().map(|v| 1.0 - v).collect();
    for k in 1..3 {
        let ratio = (loss[k] / loss[0]) / (x[k] / x[0]);
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }
}

#[test]
fn single_value_sweep_matches_run() {
    let dir = TempDir::new().unwrap();
    let base = dir.path().join("one.csv");
    let cfg = write_config(
        &dir,
        "one.cfg",
        &format!("bath_mode = high_t\nn_points = 30\ntemperature = 250\noutput_path = {}\n", s(&base)),
    );
    assert!(tclgate(&["sweep", "--config", s(&cfg), "--param", "temperature", "--values", "250"]).status.success());
    assert!(tclgate(&["run", "--config", s(&cfg)]).status.success());
    assert_eq!(
        fs::read(dir.path().join("one_temperature_0.csv")).unwrap(),
        fs::read(&base).unwrap()
    );
    let summary = Table::read(&dir.path().join("one_temperature_summary.csv"));
    assert_eq!(summary.rows.len(), 1);
}

#[test]
fn sweep_validation() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "v.cfg", &format!("output_path = {}\n", s(&dir.path().join("v.csv"))));
    let empty = tclgate(&["sweep", "--config", s(&cfg), "--param", "lambda2_eta", "--values"]);
    assert_eq!(empty.status.code(), Some(2));
    let bad = tclgate(&["sweep", "--config", s(&cfg), "--param", "n_points", "--values", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("n_points"));
}

#[test]
fn config_errors_exit_with_code_two_and_name_the_key() {
    let dir = TempDir::new().unwrap();
    for (body, key) in [
        ("colour = blue\n", "colour"),
        ("temperature = -1\n", "temperature"),
        ("n_points = 1\n", "n_points"),
        ("initial_state = custom\n", "custom_state"),
    ] {
        let cfg = write_config(&dir, "bad.cfg", body);
        let res = tclgate(&["run", "--config", s(&cfg)]);
        assert_eq!(res.status.code(), Some(2), "{body}");
        assert!(String::from_utf8_lossy(&res.stderr).contains(key), "{body}");
    }
}

#[test]
fn kernel_dump() {
    let dir = TempDir::new().unwrap();
    let exact_out = dir.path().join("exact.csv");
    let high_out = dir.path().join("high.csv");
    let exact = write_config(&dir, "e.cfg", "temperature = 4000\n");
    let high = write_config(&dir, "h.cfg", "temperature = 4000\nbath_mode = high_t\n");
    for (cfg, out) in [(&exact, &exact_out), (&high, &high_out)] {
        let res = tclgate(&["kernel", "--config", s(cfg), "--t-max", "0.0318", "--points", "201", "--output", s(out)]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    let a = Table::read(&exact_out);
    let b = Table::read(&high_out);
    assert_eq!(a.header.join(","), "u,gamma,delta");
    assert_eq!(a.rows.len(), 201);
    assert_eq!(a.column("delta")[0], 0.0);
    let (ga, gb) = (a.column("gamma"), b.column("gamma"));
    let peak = ga[0];
    let worst = ga.iter().zip(&gb).map(|(x, y)| (x - y).abs() / peak).fold(0.0, f64::max);
    assert!(worst < 2e-3, "{worst}");
    for (x, y) in a.column("delta").iter().zip(b.column("delta")) {
        assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300) + 1e-18);
    }

    let zero = write_config(&dir, "z.cfg", "lambda2_eta = 0\n");
    let zero_out = dir.path().join("zero.csv");
    assert!(tclgate(&["kernel", "--config", s(&zero), "--t-max", "1", "--points", "10", "--output", s(&zero_out)]).status.success());
    let z = Table::read(&zero_out);
    assert!(z.column("gamma").iter().chain(z.column("delta").iter()).all(|&v| v == 0.0));

    let markov = write_config(&dir, "m.cfg", "bath_mode = markov\n");
    let res = tclgate(&["kernel", "--config", s(&markov), "--t-max", "1", "--points", "10"]);
    assert_eq!(res.status.code(), Some(2));
}
