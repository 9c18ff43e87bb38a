use std::process::{Command, Output};

fn patchwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patchwork")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_iv3_passes() {
    let o = patchwork(&["verify", "--construction", "iv3", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("b1") && out.contains("20"));
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn verify_iv4_even_passes() {
    let o = patchwork(&["verify", "--construction", "iv4-even", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("64"));
}

#[test]
fn verify_reports_mismatch_with_exit_one() {
    // The published AD zone sum does not match the direct count.
    let o = patchwork(&["verify", "--construction", "ad4", "--degree", "8", "--euler-only"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn bad_parameters_exit_two() {
    for args in [
        &["build", "--construction", "iv4-odd", "--degree", "3"][..],
        &["build", "--construction", "nope", "--degree", "3"],
        &["build", "--degree", "3"],
        &["census", "--construction", "ad4", "--degree", "6"],
        &["solve-orthants", "--vertices", "1,0;0,1", "--signs", "0,2", "--target", "0,0"],
    ] {
        let o = patchwork(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn build_round_trips_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let o = patchwork(&["build", "--construction", "iv4-odd", "--degree", "4", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["maximal_simplices"].as_array().unwrap().len(), 256);
    // Re-export through the parser.
    let o = patchwork(&["export", "--input", a.to_str().unwrap(), "--json", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let again = patchwork(&["build", "--construction", "iv4-odd", "--degree", "4"]);
    assert_eq!(stdout(&again).trim_end(), text);
}

#[test]
fn build_sd3_and_ad4_with_lift() {
    let o = patchwork(&["build", "--construction", "sd3", "--k", "4", "--a", "5,0,0", "--b", "0,3,0", "--lift"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["lift"].is_array());
    let o = patchwork(&["build", "--construction", "ad4", "--degree", "8"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn export_off_needs_slice_in_dimension_four() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("g.off");
    let o = patchwork(&["export", "--construction", "iv4-odd", "--degree", "4", "--off", off.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = patchwork(&[
        "export", "--construction", "ad4", "--degree", "8", "--slice", "x4=0", "--off", off.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&off).unwrap();
    assert!(text.starts_with("OFF"));
    assert!(patchwork_core::io::off_euler(&text).is_ok());
}

#[test]
fn export_off_and_polynomial_for_surfaces() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("g.off");
    let poly = dir.path().join("p.txt");
    let o = patchwork(&[
        "export", "--construction", "iv3", "--degree", "3", "--off", off.to_str().unwrap(),
        "--viro-polynomial", poly.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(patchwork_core::io::off_euler(&std::fs::read_to_string(&off).unwrap()).unwrap(), -5);
    let text = std::fs::read_to_string(&poly).unwrap();
    // One monomial per lattice point of the degree 3 tetrahedron.
    assert_eq!(text.split_whitespace().count(), 20);
}

#[test]
fn solve_orthants_prints_masks() {
    let o = patchwork(&["solve-orthants", "--vertices", "1,0;0,1", "--signs", "0,0", "--target", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "{00, 11}");
}

#[test]
fn census_json() {
    let o = patchwork(&["census", "--construction", "iv3", "--degree", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"]["b0"], "5/1");
    let o = patchwork(&["census", "--construction", "ad4", "--degree", "12"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"]["chi_plus_difference"], "268/1");
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_patchwork"))
            .args(["verify", "--construction", "iv3", "--degree", "6"])
            .env("PATCHWORK_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
}
