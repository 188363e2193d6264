use std::path::Path;
use std::process::{Command, Output};

fn ionspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionspin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

fn comment_value(csv: &str, key: &str) -> f64 {
    csv.lines()
        .filter(|l| l.starts_with('#'))
        .flat_map(|l| l.trim_start_matches('#').split(','))
        .find_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            (k.trim() == key).then(|| v.trim().parse().ok())?
        })
        .unwrap_or_else(|| panic!("{key} missing"))
}

#[test]
fn spectrum_sweep_has_721_rows_and_header() {
    let out = ionspin(&["spectrum-sweep"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("angles in rad"));
    let rows = data_rows(&text);
    assert_eq!(rows[0], "theta_rad,xi1,xi2,xi3,Theta_rad,eta");
    assert_eq!(rows.len(), 722);
}

#[test]
fn headers_match_schemas() {
    let cases = [
        ("multiplet", "energy_eV,multiplicity,J_assigned"),
        ("coupling-sweep", "theta_rad,cos2Theta,sin2Theta,resonant_rabi_hz"),
        ("ldos-sweep", "theta_rad,w_xi1_scaled,w_xi2_scaled"),
        ("pair", "d_m,j_ev,t_entangle_s"),
    ];
    for (cmd, header) in cases {
        let out = ionspin(&[cmd, "--points", "4"]);
        assert!(out.status.success(), "{cmd}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(data_rows(&text)[0], header, "{cmd}");
    }
}

#[test]
fn points_flag_controls_grid() {
    let out = ionspin(&["pair", "--points", "11"]);
    assert_eq!(data_rows(&String::from_utf8(out.stdout).unwrap()).len(), 12);
    let out = ionspin(&["pair", "--points", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = ionspin(&["coupling-sweep", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn output_path_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("m.csv");
    let cfg = with_config(
        dir.path(),
        &format!("output_path = {:?}\n", target.display().to_string()),
    );
    assert!(ionspin(&["multiplet", "--config", &cfg]).status.success());
    assert!(std::fs::read_to_string(target)
        .unwrap()
        .contains("ground_degeneracy = 3"));
}

#[test]
fn rabi_defaults_meet_twelve_gigahertz() {
    let out = ionspin(&["rabi", "--points", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let analytic = comment_value(&text, "rabi_hz_analytic");
    let measured = comment_value(&text, "rabi_hz_measured");
    assert!((analytic - 12.1e9).abs() / 12.1e9 < 0.01, "{analytic}");
    assert!((measured - analytic).abs() / analytic < 0.05, "{measured}");
    let rows = data_rows(&text);
    assert_eq!(rows[0], "t_s,p_xi1,p_xi2,p_xi3");
    let p3_max = rows[1..]
        .iter()
        .map(|r| r.split(',').nth(3).unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(p3_max < 1e-6);
}

#[test]
fn calibrate_reports_one_pulse() {
    let out = ionspin(&["calibrate"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows[0], "omega_hz,duration_s,fidelity");
    let cells: Vec<f64> = rows[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert!(cells[2] > 0.999);
    assert!((cells[1] - 20.7e-12).abs() < 0.5e-12);
}

#[test]
fn protocol_reads_out_xi2_and_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let cfg = with_config(
        dir.path(),
        &format!(
            "protocol_trace_path = {:?}\nsample_every = 50\n",
            trace.display().to_string()
        ),
    );
    let out = ionspin(&["protocol", "--config", &cfg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("decision,xi2"));
    let trace = std::fs::read_to_string(trace).unwrap();
    assert_eq!(data_rows(&trace)[0], "t_s,p_xi1,p_xi2,p_xi3");
}

#[test]
fn idle_protocol_reads_out_xi1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with_config(dir.path(), "pulse = \"none\"\n");
    let out = ionspin(&["protocol", "--config", &cfg]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("decision,xi1"));
}

#[test]
fn protocol_outside_xi1_regime_fails_precondition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with_config(dir.path(), "theta_deg = 150\n");
    let out = ionspin(&["protocol", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(5));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error[E_PROTOCOL_PRECONDITION]"));
}

#[test]
fn config_errors_are_single_line_codes() {
    let dir = tempfile::tempdir().unwrap();
    for (text, code) in [
        ("gamma_dipole = -1\n", "E_RANGE"),
        ("no_such_key = 1\n", "E_CONFIG"),
        ("e_dc = 2e9\n", "E_RANGE"),
    ] {
        let cfg = with_config(dir.path(), text);
        let out = ionspin(&["pair", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1);
        assert!(err.starts_with(&format!("error[{code}]")), "{err}");
    }
    let out = ionspin(&["pair", "--config", "/nonexistent/run.toml"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error[E_IO]"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = ionspin(&["plot"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error[E_USAGE]"));
}
