use std::fs;
use std::process::{Command, Output};

fn weilheight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilheight"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn presets_are_listed_and_shown() {
    let o = weilheight(&["presets"]);
    assert_eq!(o.status.code(), Some(0));
    let names = stdout(&o);
    for name in [
        "schanuel-p1",
        "schanuel-p2",
        "restriction-check",
        "tamagawa-gaussian",
        "bt",
    ] {
        assert!(
            names.lines().any(|l| l == name),
            "missing {name} in {names}"
        );
    }
    let shown = weilheight(&["presets", "--show", "schanuel-p1"]);
    assert_eq!(shown.status.code(), Some(0));
    assert!(stdout(&shown).contains("experiment = \"schanuel\""));
    assert_eq!(
        weilheight(&["presets", "--show", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn malformed_configs_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.toml");
    fs::write(
        &broken,
        "experiment = \"enumerate\"\n[field\nname = \"Q\"\n",
    )
    .unwrap();
    let o = weilheight(&["run", "--config", broken.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let unknown = dir.path().join("unknown.toml");
    let text = weilheight(&["presets", "--show", "schanuel-p1"]);
    fs::write(&unknown, format!("{}\n[mystery]\nkey = 1\n", stdout(&text))).unwrap();
    let o = weilheight(&["run", "--config", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(weilheight(&["run"]).status.code(), Some(2));
    assert_eq!(
        weilheight(&["run", "--preset", "no-such-preset"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        weilheight(&["run", "--preset", "schanuel-p1", "--ladder", "3:x:2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn schanuel_preset_writes_its_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = weilheight(&[
        "run",
        "--preset",
        "schanuel-p1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let files: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(!files.is_empty());
    assert!(
        files.iter().all(|f| f.starts_with("schanuel-p1")),
        "{files:?}"
    );
    assert!(stdout(&o).contains("wrote "));
}

#[test]
fn fitting_a_series_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("series.csv");
    // N(B) = 3 B^2 exactly
    let mut text = String::from("B,count\n");
    for i in 0..10 {
        let b = 10u128 * 2u128.pow(i);
        text.push_str(&format!("{b},{}\n", 3 * b * b));
    }
    fs::write(&csv, text).unwrap();
    let o = weilheight(&["fit", "--series", csv.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(!stdout(&o).is_empty());

    let o = weilheight(&["fit", "--series", csv.to_str().unwrap(), "--fix-a", "two"]);
    assert_eq!(o.status.code(), Some(2));

    fs::write(&csv, "B,count\n10,300\n20,abc\n").unwrap();
    assert_eq!(
        weilheight(&["fit", "--series", csv.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn missing_series_file_is_a_config_error() {
    let o = weilheight(&["fit", "--series", "/nonexistent/series.csv"]);
    assert_eq!(o.status.code(), Some(2));
}
