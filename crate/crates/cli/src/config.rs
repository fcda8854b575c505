//! Config-file merging, SNR range parsing and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

/// Reads a flat `key=value` file. Blank lines and `#` comments are skipped.
pub fn read_pairs(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let k = k.trim();
        if k.is_empty() || k == "config" || k == "dump-config" {
            return Err(format!("config line {}: key {k:?} not allowed", i + 1));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Finds the value of `--config` in raw arguments, if any.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Splices file settings in front of the command-line flags, right after the
/// subcommand, so later flags override them.
pub fn merge_args(args: &[String], pairs: &[(String, String)]) -> Vec<String> {
    if args.len() < 2 {
        return args.to_vec();
    }
    let mut out = args[..2].to_vec();
    out.extend(pairs.iter().map(|(k, v)| format!("--{k}={v}")));
    out.extend_from_slice(&args[2..]);
    out
}

/// Renders `key=value` lines in the given order.
pub fn render_pairs(pairs: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        s.push_str(k);
        s.push('=');
        s.push_str(v);
        s.push('\n');
    }
    s
}

/// `start:stop:step` (inclusive), a single value, or a comma list.
pub fn parse_snr_range(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("bad Eb/N0 value {t:?}"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(num).collect(),
        3 => {
            let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if step <= 0.0 {
                return Err(format!("Eb/N0 step must be positive in {s:?}"));
            }
            if stop < start {
                return Err(format!("Eb/N0 range {s:?} is decreasing"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(format!("Eb/N0 range {s:?} is not start:stop:step")),
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn read_file(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}
