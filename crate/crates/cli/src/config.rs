//! `--config` files: a flat JSON object whose keys are flag names.
//!
//! Values are appended to the command line as `--key=value` unless the
//! flag was given explicitly, so flags win over the file and the file wins
//! over environment defaults and built-in defaults. Arrays become
//! comma-separated lists, `true` a bare switch; `false` and `null` are
//! skipped. The `subcommand` and `config` keys of an echoed run
//! configuration are ignored, so an echo can be fed back in.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::CliError;

const IGNORED_KEYS: [&str; 2] = ["subcommand", "config"];

/// The `--config` value, if any, from raw arguments.
pub fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter().skip(1).map(|a| a.to_string_lossy());
    while let Some(arg) = iter.next() {
        if arg == "--" {
            break;
        }
        if arg == "--config" {
            return iter.next().map(|v| PathBuf::from(v.as_ref()));
        }
        if let Some(v) = arg.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn flag_given(args: &[OsString], flag: &str) -> bool {
    let long = format!("--{flag}");
    let with_value = format!("{long}=");
    args.iter()
        .skip(1)
        .map(|a| a.to_string_lossy())
        .take_while(|a| a != "--")
        .any(|a| a == long || a.starts_with(&with_value))
}

fn scalar_text(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(CliError::Usage(format!("config key {key:?}: unsupported value {other}"))),
    }
}

/// Flags contributed by `config` that the command line does not set.
pub fn injected_flags(args: &[OsString], config: &Value) -> Result<Vec<OsString>, CliError> {
    let Value::Object(map) = config else {
        return Err(CliError::Usage("config file must hold a JSON object".into()));
    };
    let mut out = Vec::new();
    for (key, value) in map {
        let flag = key.replace('_', "-");
        if IGNORED_KEYS.contains(&flag.as_str()) || flag_given(args, &flag) {
            continue;
        }
        let text = match value {
            Value::Null | Value::Bool(false) => continue,
            Value::Bool(true) => {
                out.push(OsString::from(format!("--{flag}")));
                continue;
            }
            Value::Array(items) => items.iter().map(|v| scalar_text(key, v)).collect::<Result<Vec<_>, _>>()?.join(","),
            v => scalar_text(key, v)?,
        };
        out.push(OsString::from(format!("--{flag}={text}")));
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {} is not valid JSON: {e}", path.display())))
}

/// Raw arguments with the config file's flags appended.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let extra = injected_flags(&args, &load(&path)?)?;
    if extra.is_empty() {
        return Ok(args);
    }
    // Appended flags must precede any `--` terminator.
    let split = args.iter().position(|a| a == "--").unwrap_or(args.len());
    let mut merged = args[..split].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&args[split..]);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn os(args: &[&str]) -> Vec<OsString> {
        args.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_config_in_both_spellings() {
        assert_eq!(config_path(&os(&["geotsp", "tour", "--config", "a.json"])), Some("a.json".into()));
        assert_eq!(config_path(&os(&["geotsp", "--config=b.json", "tour"])), Some("b.json".into()));
        assert_eq!(config_path(&os(&["geotsp", "tour"])), None);
    }

    #[test]
    fn explicit_flags_win() {
        let args = os(&["geotsp", "generate", "--n=5", "--seed", "3"]);
        let cfg = json!({"n": 9, "seed": 4, "p": 0.5, "plot": true, "radius": null, "subcommand": "generate"});
        let extra = injected_flags(&args, &cfg).unwrap();
        assert_eq!(extra, os(&["--p=0.5", "--plot"]));
    }

    #[test]
    fn arrays_join_and_underscores_map() {
        let cfg = json!({"omega_grid": [0.5, 1, 2], "paper_convention": false});
        assert_eq!(injected_flags(&os(&["geotsp"]), &cfg).unwrap(), os(&["--omega-grid=0.5,1,2"]));
    }

    #[test]
    fn rejects_non_objects_and_nested_values() {
        assert!(matches!(injected_flags(&os(&["geotsp"]), &json!([1])), Err(CliError::Usage(_))));
        assert!(matches!(injected_flags(&os(&["geotsp"]), &json!({"n": {"a": 1}})), Err(CliError::Usage(_))));
    }
}
