use std::process::Command;

use cone_wave::harness::config::{parse_config, parse_sweep_config, render_config, InitKind, RunConfig};
use cone_wave::harness::output::SERIES_HEADER;
use cone_wave::harness::run::{run, write_run, Classification, BLOWUP_EXIT_CODE};
use cone_wave::GridSpec;

fn small() -> RunConfig {
    let mut c = RunConfig {
        grid: GridSpec::new(3, 12, 4, -3.0),
        ..RunConfig::default()
    };
    c.init.kind = InitKind::NehariScaled;
    c.scheme.t_max = 5.0;
    c
}

#[test]
fn config_errors_name_every_key() {
    let text = "model.p = 5\nmodel.p = 3\ngrid.ns = 0\nscheme.cfl_safety = 2\nwat = 1\n";
    let err = parse_config(text).unwrap_err();
    for key in ["model.p", "grid.ns", "scheme.cfl_safety", "wat"] {
        assert!(err.mentions(key), "{key} missing from {err}");
    }
    let lines: Vec<Option<usize>> = err.iter().map(|e| e.line).collect();
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
}

#[test]
fn sweep_config_needs_axis_and_ordered_values() {
    let err = parse_sweep_config("sweep.values = 1, 2\n").unwrap_err();
    assert!(err.mentions("sweep.axis"));
    let err = parse_sweep_config("sweep.axis = gamma\nsweep.values = 0.1, 0.3, 0.2\n").unwrap_err();
    assert!(err.mentions("sweep.values"));
    let err = parse_sweep_config("sweep.axis = p\nsweep.values = 2.5, 4.5\n").unwrap_err();
    assert!(err.mentions("sweep.values"));
    let ok = parse_sweep_config("sweep.axis = m\nsweep.values = 2, 3, 4\nsweep.workers = 2\n").unwrap();
    assert_eq!(ok.values, vec![2.0, 3.0, 4.0]);
}

#[test]
fn rendered_config_parses_back() {
    let mut c = small();
    c.scheme.dt = Some(0.01);
    c.init.center_s = Some(-1.25);
    assert_eq!(parse_config(&render_config(&c)).unwrap(), c);
}

#[test]
fn zero_amplitude_run_is_global_and_exactly_zero() {
    let mut c = small();
    c.init.kind = InitKind::Eigenmode;
    c.init.amplitude = 0.0;
    let o = run(&c).unwrap();
    assert_eq!(o.classification, Classification::Global);
    assert!(o.trajectory.series.rows().iter().all(|r| r.e == 0.0 && r.l2 == 0.0));
    assert!(o.monitor.is_clean());
}

#[test]
fn summary_energy_matches_the_series_file() {
    let o = run(&small()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_run(&o, dir.path()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(SERIES_HEADER));
    let first_e = lines.next().unwrap().split(',').nth(1).unwrap().to_string();
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    let e0 = summary
        .lines()
        .find_map(|l| l.strip_prefix("E0 = "))
        .unwrap();
    assert_eq!(e0, first_e);
}

#[test]
fn cli_reports_blowup_through_its_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small();
    c.init.amplitude = 2.0;
    c.scheme.t_max = 20.0;
    let cfg = dir.path().join("blowup.conf");
    std::fs::write(&cfg, render_config(&c)).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_conewave"))
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(BLOWUP_EXIT_CODE));
    assert!(out.join("series.csv").exists());

    let constants = Command::new(env!("CARGO_BIN_EXE_conewave"))
        .args(["constants", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(constants.status.success());
    let text = String::from_utf8(constants.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("d = ")));

    std::fs::write(&cfg, "model.p = 9\n").unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_conewave"))
        .args(["run", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("model.p"));
}
