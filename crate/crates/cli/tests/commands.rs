use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sdwtrack"));
    c.env_remove("SDWTRACK_TOL_OVERRIDE");
    c
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, body).unwrap();
    p
}

fn csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn riemann_reports_wave_kinds() {
    let o = run(&["riemann", "--left", "1,2", "--right", "4,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "simple_sdw y=0.6666666666666666, xi_rate=4\n");
    assert_eq!(stdout(&run(&["riemann", "--left", "1,2", "--right", "1,2"])), "no wave\n");
    assert_eq!(stdout(&run(&["riemann", "--left", "1,1", "--right", "5,1"])), "contact speed=1\n");
    assert_eq!(stdout(&run(&["riemann", "--left", "1,-1", "--right", "1,1"])), "vacuum_fan u_left=-1, u_right=1\n");
}

#[test]
fn riemann_tabulates_a_delta_wave() {
    let o = run(&["riemann", "--left", "1,1", "--right", "1,-1", "--gamma", "1", "--c0", "0", "--times", "0,1,2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r[1], 1.0 + 2.0 * r[0]);
        assert_eq!(r[2], 0.0);
    }
}

#[test]
fn riemann_rejects_speed_outside_bounds() {
    let o = run(&["riemann", "--left", "1,1", "--right", "1,-1", "--gamma", "1", "--c0", "3"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn riemann_sweep_is_seeded() {
    let a = run(&["riemann", "--sweep", "200", "--seed", "11"]);
    let b = run(&["riemann", "--sweep", "200", "--seed", "11"]);
    let c = run(&["riemann", "--sweep", "200", "--seed", "12"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(stdout(&a).lines().count(), 201);
    assert!(stdout(&a).lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn bad_inputs_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["evolve", "--config", "/nonexistent/x.toml"]).status.code(), Some(2));
    let p = write_config(dir.path(), "epsilon = -1.0\nt_end = 1.0\n[initial]\ncatalog = \"case-i\"\n");
    assert_eq!(run(&["evolve", "--config", p.to_str().unwrap()]).status.code(), Some(2));
    let p = write_config(dir.path(), "epsilon = 1e-3\nt_end = 1.0\nmode = \"3x3\"\n[initial]\ncatalog = \"case-i\"\n");
    assert_eq!(run(&["evolve", "--config", p.to_str().unwrap()]).status.code(), Some(2));
    let o = bin()
        .args(["evolve", "--config", config("case-iii.toml").to_str().unwrap()])
        .arg("--out")
        .arg(dir.path())
        .env("SDWTRACK_TOL_OVERRIDE", "cluster=zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin()
        .args(["evolve", "--config", config("case-iii.toml").to_str().unwrap()])
        .arg("--out")
        .arg(dir.path())
        .env("SDWTRACK_TOL_OVERRIDE", "cluster=1e-10,root=1e-13")
        .output()
        .unwrap();
    assert!(o.status.success());
}

fn evolve_into(cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let o = bin().arg("evolve").arg("--config").arg(cfg).arg("--out").arg(out).args(extra).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    o
}

#[test]
fn identical_configs_give_identical_files() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = config("energy.toml");
    evolve_into(&cfg, a.path(), &[]);
    evolve_into(&cfg, b.path(), &[]);
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 7);
    for n in names {
        assert_eq!(std::fs::read(a.path().join(&n)).unwrap(), std::fs::read(b.path().join(&n)).unwrap());
    }
}

#[test]
fn constant_density_fronts_are_straight() {
    let dir = tempfile::tempdir().unwrap();
    let o = evolve_into(&config("constant-density.toml"), dir.path(), &[]);
    let line = stdout(&o);
    let k: f64 = line.split("max |c''| ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(k < 1e-12, "{line}");
}

#[test]
fn increasing_data_has_an_empty_event_log() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "epsilon = 1e-3\nt_end = 5.0\n[initial]\ncatalog = \"case-i\"\n");
    evolve_into(&cfg, &dir.path().join("out"), &[]);
    assert_eq!(std::fs::read_to_string(dir.path().join("out/events.jsonl")).unwrap(), "");
}

#[test]
fn stopping_case_ends_inside_a_fan() {
    let dir = tempfile::tempdir().unwrap();
    evolve_into(&config("case-ii-stopping.toml"), dir.path(), &[]);
    let events = sdwtrack::output::parse_events(&std::fs::read_to_string(dir.path().join("events.jsonl")).unwrap()).unwrap();
    let last = events.last().unwrap();
    assert_eq!(last.outcome, "A1");
    let fronts = csv(&dir.path().join("fronts.csv"));
    let edge = &fronts[*last.participants.last().unwrap()];
    assert_eq!(edge[1], "fan_left_edge");
    // u = x, so the fan between u_k and u_{k+1} sits at Y_k with u_k < u0 = 0.5 <= u_{k+1}
    let y: f64 = edge[4].parse().unwrap();
    assert!(y < 0.5 && y + 0.1 >= 0.5 - 1e-12, "{y}");
    // nothing further happens much later
    let later = tempfile::tempdir().unwrap();
    evolve_into(&config("case-ii-stopping.toml"), later.path(), &["--t-end", "200"]);
    let more = std::fs::read_to_string(later.path().join("events.jsonl")).unwrap();
    assert_eq!(more.lines().count(), events.len());
}

fn converge(cfg: &Path, out: &Path, extra: &[&str]) -> Vec<Vec<String>> {
    let o = bin().arg("converge").arg("--config").arg(cfg).arg("--out").arg(out).args(extra).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    csv(&out.join("converge.csv"))
}

#[test]
fn converge_tables() {
    let dir = tempfile::tempdir().unwrap();
    let rows = converge(&config("linear.toml"), dir.path(), &[]);
    assert_eq!(rows.len(), 4);
    let errs: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(converge(&config("linear.toml"), dir.path(), &["--levels", "1"]).len(), 1);

    let cfg = write_config(dir.path(), "epsilon = 1e-3\nt_end = 0.5\n[initial]\ncatalog = \"focusing\"\n[converge]\nlevels = 3\n");
    let rows = converge(&cfg, &dir.path().join("f"), &[]);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| !r[6].is_empty()));
    assert!(rows[..2].iter().all(|r| !r[5].is_empty()));
    // past the life span the oracle column is dropped, or required and fatal
    let rows = converge(&cfg, &dir.path().join("g"), &["--t-end", "1.5"]);
    assert!(rows.iter().all(|r| r[6].is_empty()));
    let strict = write_config(
        dir.path(),
        "epsilon = 1e-3\nt_end = 1.5\n[initial]\ncatalog = \"focusing\"\n[converge]\nlevels = 2\nrequire_oracle = true\n",
    );
    let o = bin().arg("converge").arg("--config").arg(&strict).arg("--out").arg(dir.path().join("h")).output().unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn three_state_entropy_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "epsilon = 0.125\nt_end = 2.0\n[initial]\nleft = { rho = 2.0, u = 3.0 }\nrho = { kind = \"constant\", value = 2.0 }\nu = { kind = \"linear\", a = 3.0, b = -2.0 }\n",
    );
    let o = bin().arg("entropy").arg("--config").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert!(o.status.success());
    let ev = csv(&dir.path().join("entropy_events.csv"));
    assert_eq!(ev.len(), 1);
    let dd: f64 = ev[0][6].parse().unwrap();
    assert!((dd - -0.375 * 2.0 * 2.0 * 1.0 * 1.0).abs() < 1e-10);
}

#[test]
fn constant_data_entropy_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "epsilon = 1e-3\nt_end = 2.0\n[initial]\nleft = { rho = 2.0, u = 0.5 }\nrho = { kind = \"constant\", value = 2.0 }\nu = { kind = \"constant\", value = 0.5 }\n",
    );
    let o = bin().arg("entropy").arg("--config").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert!(o.status.success());
    let trace = csv(&dir.path().join("entropy_trace.csv"));
    let e: Vec<f64> = trace.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(e.iter().all(|v| (v - e[0]).abs() < 1e-12 * e[0]));
    assert!(csv(&dir.path().join("entropy_events.csv")).is_empty());
}

#[test]
fn contact_absorption_costs_no_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "epsilon = 1e-3\nt_end = 3.0\n[initial]\nleft = { rho = 1.0, u = 1.0 }\nrho = { kind = \"linear\", a = 1.0, b = 1.0 }\nu = { kind = \"constant\", value = 0.0 }\n",
    );
    let o = bin().arg("entropy").arg("--config").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert!(o.status.success());
    let ev = csv(&dir.path().join("entropy_events.csv"));
    assert!(!ev.is_empty());
    for r in ev {
        let measured: f64 = r[4].parse().unwrap();
        assert!(measured.abs() < 1e-10);
        assert_eq!(r[5].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn energy_mode_entropy_never_increases() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().arg("entropy").arg("--config").arg(config("energy.toml")).arg("--out").arg(dir.path()).output().unwrap();
    assert!(o.status.success());
    for r in csv(&dir.path().join("entropy_events.csv")) {
        assert!(r[4].parse::<f64>().unwrap() <= 1e-10);
    }
}
