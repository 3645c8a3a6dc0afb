//! Atomic JSON and CSV writers.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use hpball::estimators::Trace;
use serde::Serialize;

/// Write `bytes` to `path` through a sibling temporary file and a rename,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

pub fn trace_csv(trace: &Trace) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([trace.x.as_str(), trace.y.as_str()])?;
    for [a, b] in &trace.points {
        w.write_record([a.to_string(), b.to_string()])?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

fn slug(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

/// `<dir>/<command>.json` plus `<dir>/<command>-<trace>.csv` per trace; the
/// document goes to stdout when `dir` is `None`. Returns the written paths.
pub fn emit<T: Serialize>(dir: Option<&Path>, command: &str, document: &T, traces: &[Trace]) -> io::Result<Vec<PathBuf>> {
    let text = to_json(document);
    let Some(dir) = dir else {
        print!("{text}");
        return Ok(Vec::new());
    };
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join(format!("{command}.json"));
    write_atomic(&path, text.as_bytes())?;
    written.push(path);
    let mut used = Vec::new();
    for trace in traces {
        let mut name = slug(&trace.name);
        let base = name.clone();
        let mut k = 2;
        while used.contains(&name) {
            name = format!("{base}-{k}");
            k += 1;
        }
        let path = dir.join(format!("{command}-{name}.csv"));
        write_atomic(&path, &trace_csv(trace)?)?;
        used.push(name);
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("extreme-set sigma mass"), "extreme-set-sigma-mass");
        assert_eq!(slug("||W(g^m)||_q"), "w-g-m-q");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let t = Trace::new("t", "h", "sup", vec![[2.0, 0.5], [0.5, 0.25]]);
        let text = String::from_utf8(trace_csv(&t).unwrap()).unwrap();
        assert_eq!(text, "h,sup\n2,0.5\n0.5,0.25\n");
    }
}
