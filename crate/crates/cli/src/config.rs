//! `key=value` config files. Each key names a long flag of the subcommand;
//! the pairs are spliced into the argument list right after the subcommand
//! name, so explicit flags (which come later) win.

use std::fs;
use std::path::Path;

pub fn read_pairs(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse_pairs(&text)
}

pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got `{raw}`", no + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.starts_with('-') {
            return Err(format!("config line {}: bad key `{k}`", no + 1));
        }
        pairs.push((k.to_string(), v.to_string()));
    }
    Ok(pairs)
}

/// Pulls `--config PATH` (or `--config=PATH`) out of `args`.
pub fn take_config_flag(args: &mut Vec<String>) -> Result<Option<String>, String> {
    let mut found = None;
    let mut i = 0;
    while i < args.len() {
        if args[i] == "--config" {
            let v = args.get(i + 1).ok_or("--config needs a path")?.clone();
            args.drain(i..i + 2);
            found = Some(v);
        } else if let Some(v) = args[i].strip_prefix("--config=") {
            found = Some(v.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

/// Inserts the pairs as flags after the first argument equal to one of
/// `subcommands`. Boolean values `true` and `false` become a bare flag or
/// nothing.
pub fn splice(args: &mut Vec<String>, pairs: &[(String, String)], subcommands: &[&str]) -> Result<(), String> {
    let at = args
        .iter()
        .position(|a| subcommands.contains(&a.as_str()))
        .ok_or("a config file needs a subcommand")?;
    let mut flags = Vec::new();
    for (k, v) in pairs {
        match v.as_str() {
            "true" => flags.push(format!("--{k}")),
            "false" => {}
            _ => {
                flags.push(format!("--{k}"));
                flags.push(v.clone());
            }
        }
    }
    args.splice(at + 1..at + 1, flags);
    Ok(())
}
