//! Flat `key=value` settings with layered precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::arith::{Kind, DEFAULT_BLOCK_LEN};
use crate::stats::Phi;
use crate::summatory::DEFAULT_STRIDE;
use crate::zeta::Target;

use super::UsageError;

/// Every key accepted in a config file. `checkpoint_stride` is an alias of
/// `stride`.
pub const KNOWN_KEYS: &[&str] = &[
    "block_len",
    "format",
    "kind",
    "lag",
    "lo",
    "n_max",
    "op",
    "out_dir",
    "phi",
    "stride",
    "t",
    "T",
    "target",
    "widths",
    "window",
    "workers",
    "x",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sieve,
    Walk,
    Stats,
    Perron,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sieve => "sieve",
            Command::Walk => "walk",
            Command::Stats => "stats",
            Command::Perron => "perron",
            Command::Report => "report",
        }
    }

    /// Keys this command reads, with their defaults.
    fn defaults(self) -> Vec<(&'static str, String)> {
        let mut d = vec![
            ("block_len", DEFAULT_BLOCK_LEN.to_string()),
            ("format", "both".to_string()),
            ("out_dir", "out".to_string()),
        ];
        let extra: &[(&str, &str)] = match self {
            Command::Sieve => &[("lo", "1"), ("n_max", "1000")],
            Command::Walk => &[("n_max", "10000000"), ("stride", "")],
            Command::Stats => &[
                ("kind", "liouville"),
                ("n_max", "10000000"),
                ("op", "distribution"),
                ("t", "0.5,1,2"),
                ("lag", "1"),
                ("window", "10000"),
                ("widths", "1000,2000,4000,8000"),
                ("phi", "log"),
            ],
            Command::Perron => &[("target", "mertens"), ("x", "100.5"), ("T", "1000")],
            Command::Report => &[
                ("n_max", "10000000"),
                ("stride", ""),
                ("phi", "log"),
                ("window", "10000"),
            ],
        };
        for (k, v) in extra {
            let v = if *k == "stride" {
                DEFAULT_STRIDE.to_string()
            } else {
                v.to_string()
            };
            d.push((k, v));
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        self != Format::Json
    }

    pub fn json(self) -> bool {
        self != Format::Csv
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "both" => Ok(Format::Both),
            _ => Err(format!("unknown format {s:?} (expected csv, json or both)")),
        }
    }
}

fn canonical_key(raw: &str) -> Option<&'static str> {
    let k = raw.trim().replace('-', "_");
    let k = if k == "checkpoint_stride" {
        "stride".to_string()
    } else {
        k
    };
    KNOWN_KEYS.iter().copied().find(|&known| known == k)
}

/// Parses a config file body into key/value pairs.
pub fn parse_config(text: &str, origin: &Path) -> Result<Vec<(&'static str, String)>, UsageError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let where_ = format!("{}:{}", origin.display(), i + 1);
        let Some((k, v)) = line.split_once('=') else {
            return Err(UsageError(format!("{where_}: expected key=value, got {line:?}")));
        };
        let key = canonical_key(k).ok_or_else(|| UsageError(format!("{where_}: unknown key {:?}", k.trim())))?;
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Resolved settings for one command.
#[derive(Debug, Clone)]
pub struct Settings {
    command: Command,
    values: BTreeMap<&'static str, String>,
    workers: Option<String>,
}

impl Settings {
    /// Layers defaults, then `file`, then `flags`. Keys from the file that
    /// another command uses are ignored here.
    pub fn resolve(
        command: Command,
        file: &[(&'static str, String)],
        flags: &[(&'static str, Option<String>)],
    ) -> Self {
        let mut values: BTreeMap<&'static str, String> = command.defaults().into_iter().collect();
        let mut workers = None;
        let layered = file
            .iter()
            .map(|(k, v)| (*k, Some(v.clone())))
            .chain(flags.iter().cloned());
        for (k, v) in layered {
            let Some(v) = v else { continue };
            if k == "workers" {
                workers = Some(v);
            } else if let Some(slot) = values.get_mut(k) {
                *slot = v;
            }
        }
        Settings {
            command,
            values,
            workers,
        }
    }

    pub fn command(&self) -> Command {
        self.command
    }

    fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("{key} is not a setting of {}", self.command.name()))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(key);
        raw.parse()
            .map_err(|e| UsageError(format!("invalid value {raw:?} for {key}: {e}")))
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(key);
        raw.split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|e| UsageError(format!("invalid value {p:?} in {key}: {e}")))
            })
            .collect()
    }

    pub fn kind(&self) -> Result<Kind, UsageError> {
        self.get("kind")
    }

    pub fn phi(&self) -> Result<Phi, UsageError> {
        self.get("phi")
    }

    pub fn target(&self) -> Result<Target, UsageError> {
        self.get("target")
    }

    pub fn format(&self) -> Result<Format, UsageError> {
        self.get("format")
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.raw("out_dir"))
    }

    /// Explicit worker count, if any.
    pub fn workers(&self) -> Result<Option<usize>, UsageError> {
        match &self.workers {
            None => Ok(None),
            Some(raw) => match raw.parse::<usize>() {
                Ok(w) if w >= 1 => Ok(Some(w)),
                _ => Err(UsageError(format!("invalid worker count {raw:?}"))),
            },
        }
    }

    /// `# summa <version> command=<name> key=value ...`, keys sorted. The
    /// worker count is left out because it never changes the results.
    pub fn provenance(&self) -> String {
        let mut line = format!("summa {} command={}", crate::VERSION, self.command.name());
        for (k, v) in &self.values {
            line.push(' ');
            line.push_str(k);
            line.push('=');
            line.push_str(v);
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_defaults_then_file_then_flags() {
        let file = parse_config("# comment\nn_max = 500\nstride=50\nphi=loglog\n", Path::new("c")).unwrap();
        let flags = vec![("n_max", Some("700".to_string())), ("stride", None)];
        let s = Settings::resolve(Command::Walk, &file, &flags);
        assert_eq!(s.get::<u64>("n_max").unwrap(), 700);
        assert_eq!(s.get::<u64>("stride").unwrap(), 50);
        assert_eq!(s.get::<String>("format").unwrap(), "both");
        assert!(!s.provenance().contains("phi"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("n_max=1\nbogus=2\n", Path::new("cfg")).unwrap_err();
        assert!(err.0.contains("cfg:2"), "{}", err.0);
        assert!(parse_config("no equals sign", Path::new("cfg")).is_err());
    }

    #[test]
    fn aliases_and_hyphens() {
        let file = parse_config("checkpoint_stride=9\nn-max=99\n", Path::new("c")).unwrap();
        assert_eq!(file, vec![("stride", "9".to_string()), ("n_max", "99".to_string())]);
    }

    #[test]
    fn provenance_is_sorted_and_omits_workers() {
        let flags = vec![("workers", Some("3".to_string()))];
        let s = Settings::resolve(Command::Perron, &[], &flags);
        assert_eq!(s.workers().unwrap(), Some(3));
        let p = s.provenance();
        assert!(p.starts_with(&format!("summa {} command=perron T=1000 block_len=", crate::VERSION)));
        assert!(!p.contains("workers"));
    }

    #[test]
    fn bad_values_are_usage_errors() {
        let flags = vec![("n_max", Some("ten".to_string())), ("workers", Some("0".to_string()))];
        let s = Settings::resolve(Command::Walk, &[], &flags);
        assert!(s.get::<u64>("n_max").is_err());
        assert!(s.workers().is_err());
    }
}
