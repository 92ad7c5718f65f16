//! Optional `key = value` config files that mirror command-line flags.
//!
//! The file's entries are spliced in right after the subcommand name, so
//! any flag given explicitly on the command line overrides them.

use std::ffi::OsString;
use std::path::Path;

/// Parses a config file into `--key=value` arguments. `true` becomes a bare
/// switch and `false` drops the entry.
pub fn parse_config(text: &str) -> Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value, found '{line}'", n + 1));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            return Err(format!("line {}: invalid key '{key}'", n + 1));
        }
        match value {
            "true" => out.push(OsString::from(format!("--{key}"))),
            "false" => {}
            v => out.push(OsString::from(format!("--{key}={v}"))),
        }
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(OsString::from(p));
        }
    }
    None
}

/// Expands `--config FILE` in `argv` (program name first, subcommand second).
pub fn expand_config_args(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    if argv.len() < 2 {
        return Ok(argv);
    }
    let Some(path) = config_path(&argv[2..]) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config file {}: {e}", path.to_string_lossy()))?;
    let extra = parse_config(&text)?;
    let mut out = Vec::with_capacity(argv.len() + extra.len());
    out.extend_from_slice(&argv[..2]);
    out.extend(extra);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let args = parse_config("# c\na = 1/4\nq0 = 0,1,2  # trailing\nstrict = true\nquiet = false\nt_end=5\n").unwrap();
        let s: Vec<_> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(s, ["--a=1/4", "--q0=0,1,2", "--strict", "--t-end=5"]);
        assert!(parse_config("nonsense").is_err());
    }
}
