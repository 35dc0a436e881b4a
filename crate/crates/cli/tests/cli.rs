use std::process::{Command, Output};

fn jcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcm")).args(args).output().expect("spawn jcm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_names_every_scenario() {
    let o = jcm(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "custom"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn scenario_writes_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = jcm(&["scenario", "fig4a", "--out", out, "--tau-max", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for label in ["phi0", "phiPi6", "phiPi2"] {
        let text = std::fs::read_to_string(dir.path().join(format!("fig4a__{label}.csv"))).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "tau,clb,deficit,mutual,s_atom,s_rad,s_joint,rel_atom,rel_rad,inversion,inversion_asym"
        );
        assert_eq!(lines.count(), 41);
        assert!(!text.contains('\r'));
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = jcm(&["evolve", "--mean-photons", "5", "--gamma-bar", "0.01", "--tau-max", "3"]);
    let b = jcm(&["evolve", "--mean_photons", "5", "--gamma_bar", "0.01", "--tau-max", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn custom_scenario_reads_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# factored state\nmean_photons = 3\nlambda = 0\np11 = 1\n").unwrap();
    let out = dir.path().join("out");
    let o = jcm(&[
        "scenario",
        "custom",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--tau-max",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("custom__custom.csv")).unwrap();
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    // ground-state atom, no entanglement at τ = 0
    assert_eq!(first[1], "0.00000000e0");
    assert_eq!(first[9], "1.00000000e0");
}

#[test]
fn sweep_clb_has_zero_plateau() {
    let o = jcm(&["sweep-clb", "--mean-photons", "2", "--p11", "0.5", "--lambda-step", "0.1"]);
    assert!(o.status.success());
    let clb: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(clb.len(), 11);
    assert_eq!(clb[0], 0.0);
    assert!(clb[10] > 0.0);
}

#[test]
fn validate_reports_and_exits_by_tolerance() {
    let base = ["validate", "--mean-photons", "2", "--n-max", "20", "--tau-max", "2", "--gamma-bar", "0.01"];
    let ok = jcm(&base);
    assert!(ok.status.success());
    assert!(stdout(&ok).starts_with("ok"));

    let mut strict = base.to_vec();
    strict.extend(["--tol", "1e-30"]);
    let breach = jcm(&strict);
    assert_eq!(breach.status.code(), Some(1));
    assert!(stdout(&breach).starts_with("FAIL"));
}

#[test]
fn exit_codes() {
    assert_eq!(jcm(&["scenario", "fig9z"]).status.code(), Some(2));
    assert_eq!(jcm(&["--no-such-flag"]).status.code(), Some(2));
    assert_eq!(jcm(&["evolve", "--lambda", "1.5"]).status.code(), Some(1));
    assert_eq!(jcm(&["scenario", "custom"]).status.code(), Some(1));
    // several curves need an output directory
    assert_eq!(jcm(&["scenario", "fig2a", "--tau-max", "1"]).status.code(), Some(1));
}

#[test]
fn clb_formula_flag() {
    let run = |f: &str| jcm(&["sweep-clb", "--mean-photons", "2", "--lambda-step", "0.5", "--clb-formula", f]);
    let a = run("two-branch");
    let b = run("xstate");
    assert!(a.status.success() && b.status.success());
    assert_eq!(run("bogus").status.code(), Some(2));
}
