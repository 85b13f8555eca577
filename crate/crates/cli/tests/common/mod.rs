#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const BARE_SI: &str = "\
[[layers]]
name = \"air\"
sld = 0.0

[[layers]]
name = \"Si\"
sld = 2.074e-6
";

pub const FILM: &str = "\
[[layers]]
name = \"air\"
sld = 0.0

[[layers]]
name = \"film\"
thickness = 100.0
sld = 3.5e-6
roughness = 3.0

[[layers]]
name = \"Si\"
sld = 2.074e-6
roughness = 3.0

[[fit]]
layer = \"film\"
field = \"thickness\"
lower = 10.0
upper = 300.0

[[fit]]
layer = \"film\"
field = \"sld\"
lower = 1e-6
upper = 6e-6

[[fit]]
layer = \"film\"
field = \"roughness\"
lower = 0.0
upper = 10.0
";

pub fn refl(args: &[&str]) -> Output {
    refl_with_env(args, &[])
}

pub fn refl_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_refl"));
    cmd.args(args).env_remove("REFL_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("refl runs")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn ok(out: &Output) {
    assert!(out.status.success(), "refl failed: {}", stderr(out));
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Numeric rows of a column file, skipping `#` lines.
pub fn read_columns(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect()
}

pub fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// JSON text with every `timings` object removed.
pub fn without_timings(text: &str) -> String {
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(map) => {
                map.remove("timings");
                map.values_mut().for_each(strip);
            }
            serde_json::Value::Array(items) => items.iter_mut().for_each(strip),
            _ => {}
        }
    }
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    strip(&mut v);
    serde_json::to_string(&v).unwrap()
}

/// Parses as XML with an `<svg>` root and at least one drawn element.
pub fn check_svg(path: &Path) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(format!(
            "{}: root is <{}>",
            path.display(),
            root.tag_name().name()
        ));
    }
    let drawn = root
        .descendants()
        .any(|n| matches!(n.tag_name().name(), "polyline" | "circle" | "rect" | "line"));
    if !drawn || text.contains("NaN") || text.contains("inf\"") {
        return Err(format!(
            "{}: nothing drawn or non-finite coordinates",
            path.display()
        ));
    }
    Ok(())
}

/// Every file under `dir`, relative to it, sorted.
pub fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(dir).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}
