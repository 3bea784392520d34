//! Golden runs of the binary: exit codes, reports and written artifacts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const HAAR: &str = r#"{"offset":0,"coeffs":[[0.7071067811865476,0],[0.7071067811865476,0]]}"#;
const D4: &str = r#"{"offset":0,"coeffs":[[0.48296291314453416,0],[0.8365163037378079,0],[0.2241438680420134,0],[-0.12940952255126037,0]]}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        ws.write("haar.json", HAAR);
        ws.write("d4.json", D4);
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, contents: &str) {
        std::fs::write(self.path(name), contents).unwrap();
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_wavemra"))
            .current_dir(self.dir.path())
            .args(args)
            .output()
            .unwrap()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn signal_csv(values: &[(f64, f64)]) -> String {
    let mut s = String::from("re,im\n");
    for (re, im) in values {
        s.push_str(&format!("{re},{im}\n"));
    }
    s
}

fn read_signal(path: &Path) -> Vec<(f64, f64)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|line| {
            let mut parts = line.split(',').map(|p| p.trim().parse::<f64>().unwrap());
            (parts.next().unwrap(), parts.next().unwrap())
        })
        .collect()
}

#[test]
fn derive_haar_writes_the_normalized_wavelet() {
    let ws = Workspace::new();
    let out = ws.run(&[
        "derive",
        "haar.json",
        "--normalize-support",
        "--out",
        "sys.json",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["shift"], 1);
    assert_eq!(r["normalized_support"], true);

    let system: serde_json::Value = serde_json::from_str(&ws.read("sys.json")).unwrap();
    let wavelet = &system["wavelet"];
    assert_eq!(wavelet["offset"], 0);
    let coeffs: Vec<[f64; 2]> = serde_json::from_value(wavelet["coeffs"].clone()).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert_eq!(coeffs.len(), 2);
    assert!((coeffs[0][0] - h).abs() < 1e-15 && coeffs[0][1] == 0.0);
    assert!((coeffs[1][0] + h).abs() < 1e-15 && coeffs[1][1] == 0.0);
    assert!(!ws.read("sys.json").contains("-0.0000000000000000e0"));
}

#[test]
fn derive_rejects_bad_input_with_exit_2() {
    let ws = Workspace::new();
    let out = ws.run(&["derive", "missing.json", "--out", "sys.json"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());

    ws.write("ones.json", r#"{"offset":0,"coeffs":[[1,0],[1,0]]}"#);
    let out = ws.run(&["derive", "ones.json", "--out", "sys.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalization"));

    // normalized (sum √2, energy 1) but not a quadrature mirror filter
    let (x, y) = (2f64.sqrt() / 6.0, 2.0 * 2f64.sqrt() / 3.0);
    ws.write(
        "skew.json",
        &format!(r#"{{"offset":0,"coeffs":[[{x},0],[{y},0],[{x},0]]}}"#),
    );
    let out = ws.run(&["derive", "skew.json", "--out", "sys.json"]);
    assert_eq!(code(&out), 2);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("Smith-Barnwell"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    ws.write("garbage.json", "not json");
    assert_eq!(
        code(&ws.run(&["derive", "garbage.json", "--out", "sys.json"])),
        2
    );
    assert!(!ws.path("sys.json").exists());
}

#[test]
fn usage_errors_exit_2() {
    let ws = Workspace::new();
    assert_eq!(code(&ws.run(&[])), 2);
    assert_eq!(code(&ws.run(&["frobnicate"])), 2);
    assert_eq!(code(&ws.run(&["check", "smith-barnwell"])), 2);
    assert_eq!(
        code(&ws.run(&["dwt", "x.csv", "--levels", "1", "--out", "d.json"])),
        2
    );
}

#[test]
fn smith_barnwell_exit_codes() {
    let ws = Workspace::new();
    let out = ws.run(&[
        "check",
        "smith-barnwell",
        "haar.json",
        "--grid",
        "4096",
        "--tol",
        "1e-10",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["pass"], true);

    // the check accepts any coefficients, so an unnormalized filter is a failed check
    ws.write("ones.json", r#"{"offset":0,"coeffs":[[1,0],[1,0]]}"#);
    let out = ws.run(&["check", "smith-barnwell", "--filter", "ones.json"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["pass"], false);
    assert!((r["max_deviation"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["argmax_xi"].as_f64().unwrap(), 0.0);
}

#[test]
fn lemma1_is_truncation_limited() {
    let ws = Workspace::new();
    // the window tail alone is 2/(32π²) ≈ 6.3e-3, above 2e-3
    let out = ws.run(&[
        "check",
        "lemma1",
        "--filter",
        "haar.json",
        "--window",
        "32",
        "--depth",
        "24",
        "--tol",
        "2e-3",
    ]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert!((r["max_deviation"].as_f64().unwrap() - 6.332e-3).abs() < 1e-5);
    assert_eq!(r["params"]["window_start"].as_f64().unwrap(), -32.0);
    assert_eq!(r["params"]["depth"].as_f64().unwrap(), 24.0);

    let out = ws.run(&[
        "check",
        "lemma1",
        "--filter",
        "haar.json",
        "--window",
        "128",
        "--depth",
        "24",
        "--tol",
        "2e-3",
    ]);
    assert_eq!(code(&out), 0);

    let out = ws.run(&["check", "lemma1", "d4.json", "--tol", "1e-4"]);
    assert_eq!(code(&out), 0);

    // ψ̂ decays more slowly, so its tail is larger
    let out = ws.run(&[
        "check",
        "lemma1",
        "d4.json",
        "--function",
        "psi",
        "--tol",
        "1e-3",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn support_check_on_half_box_fails() {
    let ws = Workspace::new();
    let mut csv = String::from("xi,re,im\n");
    for i in 0..256 {
        let xi = -1.0 + i as f64 / 128.0;
        let v = if (0.0..0.5).contains(&xi) { 1.0 } else { 0.0 };
        csv.push_str(&format!("{xi},{v},0\n"));
    }
    ws.write("halfbox.csv", &csv);
    let out = ws.run(&[
        "check",
        "support",
        "--samples",
        "halfbox.csv",
        "--threshold",
        "1e-8",
    ]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["params"]["measure"].as_f64().unwrap(), 0.5);

    let out = ws.run(&["check", "lemma1", "--samples", "halfbox.csv"]);
    assert_eq!(code(&out), 1);

    let out = ws.run(&[
        "check",
        "support",
        "haar.json",
        "--window",
        "8",
        "--function",
        "psi",
    ]);
    assert_eq!(code(&out), 0);
    assert!(report(&out)["params"]["measure"].as_f64().unwrap() > 1.0);
}

#[test]
fn gram_checks() {
    let ws = Workspace::new();
    for function in ["phi", "psi", "cross"] {
        let out = ws.run(&["check", "gram", "haar.json", "--function", function]);
        assert_eq!(code(&out), 0, "{function}");
    }
    let out = ws.run(&[
        "check",
        "gram",
        "d4.json",
        "--function",
        "cross",
        "--tol",
        "1e-4",
    ]);
    assert_eq!(code(&out), 0);
    // grid-limited: the D4 scaling function misses 1e-4 at scale 8
    let out = ws.run(&[
        "check",
        "gram",
        "d4.json",
        "--function",
        "phi",
        "--tol",
        "1e-4",
    ]);
    assert_eq!(code(&out), 1);
    assert!(report(&out)["max_deviation"].as_f64().unwrap() < 1.2e-4);
}

#[test]
fn cascade_writes_samples_and_sidecar() {
    let ws = Workspace::new();
    let out = ws.run(&["cascade", "haar.json", "--scale", "6", "--out", "phi.csv"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["iterations"], 1);
    assert_eq!(r["samples"], 65);
    let lines: Vec<String> = ws.read("phi.csv").lines().map(str::to_owned).collect();
    assert_eq!(lines[0], "x,re,im");
    assert_eq!(lines.len(), 66);
    let sidecar: serde_json::Value = serde_json::from_str(&ws.read("phi.json")).unwrap();
    assert_eq!(sidecar["support_start"], 0);
    assert_eq!(sidecar["scale_log2"], 6);

    let out = ws.run(&["cascade", "d4.json", "--scale", "8", "--out", "d4phi.csv"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["converged"], true);
    assert!(r["iterations"].as_u64().unwrap() > 1);
    assert!(r["residual"].as_f64().unwrap() <= 1e-6);

    assert_eq!(
        code(&ws.run(&["cascade", "haar.json", "--iters", "0", "--out", "x.csv"])),
        2
    );
    assert_eq!(
        code(&ws.run(&["cascade", "haar.json", "--scale", "0", "--out", "x.csv"])),
        2
    );

    // too few iterations: the last iterate is still written and the run fails
    let out = ws.run(&["cascade", "d4.json", "--iters", "3", "--out", "short.csv"]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["converged"], false);
    assert!(ws.path("short.csv").exists());
}

#[test]
fn realize_wavelet_from_cascade_output() {
    let ws = Workspace::new();
    assert_eq!(
        code(&ws.run(&["cascade", "haar.json", "--scale", "4", "--out", "phi.csv"])),
        0
    );
    assert_eq!(
        code(&ws.run(&[
            "derive",
            "haar.json",
            "--normalize-support",
            "--out",
            "sys.json"
        ])),
        0
    );
    let out = ws.run(&[
        "realize-wavelet",
        "--phi",
        "phi.csv",
        "--system",
        "sys.json",
        "--out",
        "psi.csv",
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["support_start"], 0);
    assert!((r["discrete_norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let psi = ws.read("psi.csv");
    let values: Vec<f64> = psi
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 17);
    assert!(values[..8].iter().all(|v| (v - 1.0).abs() < 1e-12));
    assert!(values[8..16].iter().all(|v| (v + 1.0).abs() < 1e-12));

    // φ realized for another filter does not fit the system's grid
    assert_eq!(
        code(&ws.run(&["cascade", "d4.json", "--scale", "4", "--out", "d4phi.csv"])),
        0
    );
    let out = ws.run(&[
        "realize-wavelet",
        "--phi",
        "d4phi.csv",
        "--system",
        "sys.json",
        "--out",
        "x.csv",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn dwt_of_constant_has_zero_details() {
    let ws = Workspace::new();
    ws.write("const.csv", &signal_csv(&[(1.0, 0.0); 8]));
    let out = ws.run(&[
        "dwt",
        "const.csv",
        "--filter",
        "haar.json",
        "--levels",
        "3",
        "--out",
        "d.json",
    ]);
    assert_eq!(code(&out), 0);
    let decomposition: serde_json::Value = serde_json::from_str(&ws.read("d.json")).unwrap();
    assert_eq!(decomposition["levels"], 3);
    let details: Vec<Vec<[f64; 2]>> =
        serde_json::from_value(decomposition["details"].clone()).unwrap();
    assert_eq!(details.iter().map(Vec::len).collect::<Vec<_>>(), [1, 2, 4]);
    assert!(details
        .iter()
        .flatten()
        .all(|c| c[0].abs() < 1e-15 && c[1].abs() < 1e-15));
}

#[test]
fn dwt_rejects_bad_lengths() {
    let ws = Workspace::new();
    ws.write("six.csv", &signal_csv(&[(1.0, 0.0); 6]));
    let out = ws.run(&[
        "dwt",
        "six.csv",
        "--filter",
        "haar.json",
        "--levels",
        "2",
        "--out",
        "d.json",
    ]);
    assert_eq!(code(&out), 2);
    ws.write("eight.csv", &signal_csv(&[(1.0, 0.0); 8]));
    let out = ws.run(&[
        "dwt",
        "eight.csv",
        "--filter",
        "haar.json",
        "--levels",
        "4",
        "--out",
        "d.json",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn dwt_idwt_roundtrip() {
    let ws = Workspace::new();
    // deterministic pseudo-random samples
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let values: Vec<(f64, f64)> = (0..256).map(|_| (next(), next())).collect();
    ws.write("x.csv", &signal_csv(&values));
    assert_eq!(
        code(&ws.run(&[
            "derive",
            "d4.json",
            "--normalize-support",
            "--out",
            "sys.json"
        ])),
        0
    );

    let out = ws.run(&[
        "dwt", "x.csv", "--system", "sys.json", "--levels", "5", "--out", "d.json",
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let total = r["approx_energy"].as_f64().unwrap()
        + r["detail_energies"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .sum::<f64>();
    assert!((total - r["signal_energy"].as_f64().unwrap()).abs() < 1e-10);

    let out = ws.run(&[
        "idwt",
        "d.json",
        "--system",
        "sys.json",
        "--out",
        "y.csv",
        "--reference",
        "x.csv",
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert!(r["max_diff"].as_f64().unwrap() < 1e-10);
    let back = read_signal(&ws.path("y.csv"));
    for (a, b) in back.iter().zip(&values) {
        assert!((a.0 - b.0).abs() < 1e-10 && (a.1 - b.1).abs() < 1e-10);
    }

    // a different system cannot invert this decomposition
    let out = ws.run(&["idwt", "d.json", "--filter", "haar.json", "--out", "z.csv"]);
    assert_eq!(code(&out), 2);

    // a mismatched reference fails the comparison
    let shifted: Vec<(f64, f64)> = values.iter().map(|&(re, im)| (re + 1e-3, im)).collect();
    ws.write("other.csv", &signal_csv(&shifted));
    let out = ws.run(&[
        "idwt",
        "d.json",
        "--system",
        "sys.json",
        "--out",
        "y.csv",
        "--reference",
        "other.csv",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn reports_are_byte_identical() {
    let ws = Workspace::new();
    let runs: [&[&str]; 4] = [
        &["check", "smith-barnwell", "d4.json"],
        &["check", "lemma1", "haar.json", "--window", "16"],
        &[
            "derive",
            "d4.json",
            "--normalize-support",
            "--out",
            "sys.json",
        ],
        &["cascade", "d4.json", "--scale", "6", "--out", "phi.csv"],
    ];
    for args in runs {
        let a = ws.run(args);
        let first_artifacts = (
            ws.path("sys.json").exists().then(|| ws.read("sys.json")),
            ws.path("phi.csv").exists().then(|| ws.read("phi.csv")),
        );
        let b = ws.run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
        let second_artifacts = (
            ws.path("sys.json").exists().then(|| ws.read("sys.json")),
            ws.path("phi.csv").exists().then(|| ws.read("phi.csv")),
        );
        assert_eq!(first_artifacts, second_artifacts);
    }
}
