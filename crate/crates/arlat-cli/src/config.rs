//! `--config FILE`: `key = value` lines appended as `--key=value` for every
//! key not already given as a flag. Keys are checked by the argument parser,
//! so unknown ones are rejected like unknown flags.

use std::fs;

use arlat::{Error, Result};

pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if k.is_empty() || k == "config" {
            return Err(Error::Parse(format!(
                "config line {}: bad key `{}`",
                i + 1,
                k
            )));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn given(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter()
        .any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// The command line with config entries appended. The precision key yields
/// to `ARLAT_PRECISION` when that is set.
pub fn expand(args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text =
        fs::read_to_string(&path).map_err(|e| Error::Parse(format!("config {path}: {e}")))?;
    let mut out = args.clone();
    for (k, v) in parse(&text)? {
        if given(&args, &k) || (k == "precision" && std::env::var_os("ARLAT_PRECISION").is_some()) {
            continue;
        }
        match v.as_str() {
            "true" => out.push(format!("--{k}")),
            "false" => {}
            _ => out.push(format!("--{k}={v}")),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn parses_comments_and_underscores() {
        let kv = parse("# c\nsamples = 100  # trailing\n\ndim_cap=2\n").unwrap();
        assert_eq!(
            kv,
            vec![
                ("samples".into(), "100".into()),
                ("dim-cap".into(), "2".into())
            ]
        );
        assert!(parse("nonsense").is_err());
    }

    #[test]
    fn flags_win_over_config() {
        let dir = std::env::temp_dir().join(format!("arlat-config-{}", std::process::id()));
        std::fs::write(&dir, "samples = 100\nseed = 3\nsummary-only = true\n").unwrap();
        let args = s(&[
            "arlat",
            "nerve",
            "run",
            "--seed",
            "9",
            "--config",
            dir.to_str().unwrap(),
        ]);
        let out = expand(args).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert!(out.contains(&"--samples=100".to_string()));
        assert!(out.contains(&"--summary-only".to_string()));
        assert!(!out.iter().any(|a| a == "--seed=3"));
    }
}
