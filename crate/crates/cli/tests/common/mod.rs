#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use nilcert::expr::parse_poly;
use nilcert::ring::Poly;
use nilcert::witness::{deserialize, serialize, Certificate, GeneratorSet, Setting, WitnessDag, WitnessNode};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn nilcert(args: &[&str], env: &[(&str, &str)], dir: &Path) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nilcert"));
    cmd.args(args).current_dir(dir).env_remove("NILCERT_MAX_NODES");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn nilcert");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn p(s: &str) -> Poly {
    parse_poly(s, &["x", "y", "z"]).unwrap()
}

/// `Intro` of the last of `gens`.
pub fn intro(setting: Setting, gens: &[&str]) -> WitnessDag {
    let elements: Vec<Poly> = gens.iter().map(|g| p(g)).collect();
    let last = elements.len() - 1;
    WitnessDag::from_topological(
        setting,
        vec!["x".into(), "y".into()],
        GeneratorSet::new(elements),
        vec![WitnessNode::Intro { gen: last }],
        0,
    )
    .unwrap()
}

pub fn save(dir: &Path, name: &str, cert: &Certificate) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serialize(cert)).unwrap();
    path
}

pub fn load(path: &Path) -> Certificate {
    deserialize(&std::fs::read(path).unwrap()).unwrap()
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}
