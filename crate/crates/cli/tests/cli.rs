use std::process::{Command, Output};

fn minmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minmax"))
        .args(args)
        .env_remove(minmax_cli::JOBS_ENV)
        .output()
        .expect("spawn minmax")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header row and data rows, without the `#` metadata.
fn body(text: &str) -> Vec<csv::StringRecord> {
    let data: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(data.as_bytes());
    r.records().map(Result::unwrap).collect()
}

fn column(text: &str, name: &str) -> Vec<String> {
    let rows = body(text);
    let idx = rows[0].iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows[1..].iter().map(|r| r[idx].to_string()).collect()
}

#[test]
fn output_is_identical_across_job_counts() {
    let cases: [&[&str]; 3] = [
        &["wgan-curve", "--r", "0.4,0.5,2", "--alpha-grid", "2:40:log:6"],
        &["simulate", "--alpha", "2", "--r", "2", "--d", "30", "--seeds", "6", "--max-steps", "3000", "--seed", "11"],
        &["bilinear", "--w-xy", "0.7", "--b-x", "0.2", "--d-list", "50,100,200"],
    ];
    for args in cases {
        let one = minmax(&[args, &["--jobs", "1"]].concat());
        let four = minmax(&[args, &["--jobs", "4"]].concat());
        assert_eq!(one.status.code(), four.status.code());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert!(!one.stdout.is_empty());
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# sweep settings\nalpha = 1e3\n[wgan-point]\nr = 0.8\neta_tilde = 1\n[asymptotic]\nr_grid = 0.5\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let from_file = stdout(&minmax(&["wgan-point", "--config", p]));
    assert!(from_file.contains("# r = 0.8\n"), "{from_file}");
    assert!(from_file.contains("# alpha = 1e3\n"));
    let overridden = stdout(&minmax(&["wgan-point", "--config", p, "--r", "0.5"]));
    assert!(overridden.contains("# r = 0.5\n"));
    assert_eq!(column(&overridden, "r"), vec!["5.0000000000000000e-1"]);
}

#[test]
fn config_errors_exit_2_naming_the_key() {
    let o = minmax(&["wgan-point", "--alpha", "3", "--r", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("r = -1") && err.contains(">= 0"), "{err}");

    let o = minmax(&["wgan-curve", "--r", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha-grid"));

    let o = minmax(&["bilinear", "--kappa", "two"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "gamma = 3\n").unwrap();
    let o = minmax(&["asymptotic", "--r-grid", "0.5", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gamma"));
}

#[test]
fn non_converged_points_exit_3_with_blank_fields() {
    // below the informative onset there is no admissible fixed point
    let o = minmax(&["wgan-curve", "--r", "0.5", "--alpha-grid", "0.5,10"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert_eq!(column(&text, "converged"), vec!["false", "true"]);
    assert_eq!(column(&text, "eps_g")[0], "");
    assert!(!text.contains("NaN") && !text.contains("nan"));
}

#[test]
fn unwritable_output_exits_4() {
    let o = minmax(&["asymptotic", "--r-grid", "0.5", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn empty_sweep_emits_metadata_and_header() {
    let o = minmax(&["asymptotic", "--r-grid", "0.1:1:linear:0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[..lines.len() - 1].iter().all(|l| l.starts_with('#')));
    assert_eq!(*lines.last().unwrap(), "r,alpha,plateau,two_term,correction,singular");
}

#[test]
fn floats_round_trip_through_csv() {
    let o = minmax(&["wgan-point", "--alpha", "7.3", "--r", "0.37"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let eps: f64 = column(&text, "eps_g")[0].parse().unwrap();
    let sol = minmax_core::gan::solve_wgan(
        &minmax_core::GanParams::unit(7.3, 0.37),
        &Default::default(),
        minmax_core::gan::Init::Auto,
    )
    .unwrap();
    assert_eq!(eps, sol.eps_g);
    assert_eq!(column(&text, "alpha")[0].parse::<f64>().unwrap(), 7.3);
}

#[test]
fn asymptotic_sweep_has_optimum_at_half() {
    let text = stdout(&minmax(&["asymptotic", "--r-grid", "0.05:2:linear:79"]));
    let r: Vec<f64> = column(&text, "r").iter().map(|s| s.parse().unwrap()).collect();
    let plateau: Vec<f64> = column(&text, "plateau").iter().map(|s| s.parse().unwrap()).collect();
    let best = (0..r.len()).min_by(|&a, &b| plateau[a].total_cmp(&plateau[b])).unwrap();
    assert!((r[best] - 0.5).abs() < 1e-12);
    assert!(plateau[best].abs() < 1e-10);
    assert!(r.iter().zip(&plateau).filter(|(r, _)| **r >= 1.0).all(|(_, p)| *p == 1.0));
}

#[test]
fn curve_at_large_ratio_is_flat() {
    let o = minmax(&["wgan-curve", "--r", "2", "--alpha-grid", "2:200:log:8"]);
    assert_eq!(o.status.code(), Some(0));
    for e in column(&stdout(&o), "eps_g") {
        assert!((e.parse::<f64>().unwrap() - 1.0).abs() < 1e-9, "{e}");
    }
}

#[test]
fn help_exits_zero() {
    let o = minmax(&["simulate", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("--grad-tol"));
}

#[test]
fn two_temp_reads_game_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("game.csv");
    std::fs::write(&path, "# rows: minimizer\n1, 2\n0, 3\n").unwrap();
    let o = minmax(&["two-temp", "--game", path.to_str().unwrap(), "--betas", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value: f64 = column(&text, "value")[0].parse().unwrap();
    let swapped: f64 = column(&text, "swapped")[0].parse().unwrap();
    assert!((value - 2.0).abs() < 5e-3 && (swapped - 2.0).abs() < 5e-3);
}
