use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

const RUNS: &[&[&str]] = &[
    &[
        "bounds",
        "--n",
        "6",
        "--n1",
        "5",
        "--all",
        "--out",
        "bounds-n6",
    ],
    &["bounds-combine", "--in", "bounds-n6", "--out", "z-n6.csv"],
    &[
        "derive", "--kind", "m", "--in", "z-n6.csv", "--out", "m-n6.csv",
    ],
    &[
        "montecarlo",
        "--kind",
        "m",
        "--samples",
        "10000",
        "--window",
        "32",
        "--seed",
        "7",
        "--out",
        "montecarlo-m.csv",
    ],
    &[
        "montecarlo",
        "--kind",
        "z",
        "--samples",
        "20000",
        "--window",
        "64",
        "--seed",
        "7",
        "--out",
        "montecarlo-z.csv",
    ],
    &[
        "models",
        "fit",
        "--in",
        "montecarlo-z.csv",
        "--kmax",
        "15",
        "--out",
        "fit.json",
    ],
    &["models", "divot-scan", "--out", "divot-scan.json"],
    &[
        "models",
        "curve",
        "--family",
        "geometric",
        "--lambda",
        "0.765",
        "--kmax",
        "15",
        "--out",
        "curve.csv",
    ],
    &[
        "pair-prob",
        "--i",
        "2",
        "--j",
        "3",
        "--closed-form",
        "--out",
        "pair-prob.csv",
    ],
    &["variance", "--terms", "40", "--out", "variance.csv"],
    &[
        "lambda",
        "--config",
        "0,1,3",
        "--kmax",
        "12",
        "--out",
        "lambda.csv",
    ],
    &[
        "consecutive",
        "--k",
        "4",
        "--m",
        "3",
        "--out",
        "consecutive.csv",
    ],
    &["brute", "--n", "8", "--out", "brute-n8.csv"],
    &[
        "fringe",
        "--n",
        "64",
        "--samples",
        "2000",
        "--seed",
        "3",
        "--out",
        "fringe.csv",
    ],
];

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/samples")
}

fn files(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(files(&path));
        } else {
            out.push(path);
        }
    }
    out.sort();
    out
}

#[test]
fn documented_samples_regenerate_byte_for_byte() {
    let t = TempDir::new().unwrap();
    for args in RUNS {
        let status = Command::new(env!("CARGO_BIN_EXE_sumsets"))
            .args(*args)
            .current_dir(t.path())
            .output()
            .unwrap()
            .status;
        assert!(status.success(), "{args:?}");
    }
    let golden = samples();
    let mut compared = 0;
    for path in files(&golden) {
        let rel = path.strip_prefix(&golden).unwrap();
        let fresh = t.path().join(rel);
        if rel.to_string_lossy().ends_with(".manifest.json") {
            let text = fs::read_to_string(&fresh).unwrap();
            let want = fs::read_to_string(&path).unwrap();
            let strip = |s: &str| {
                s.lines()
                    .filter(|l| !l.contains("wall_time"))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            assert_eq!(strip(&text), strip(&want), "{}", rel.display());
        } else {
            assert_eq!(
                fs::read_to_string(&fresh).unwrap(),
                fs::read_to_string(&path).unwrap(),
                "{}",
                rel.display()
            );
        }
        compared += 1;
    }
    assert!(compared >= 15);
}
