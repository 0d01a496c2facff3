//! Flat key=value config files and flag/file/default resolution.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::Failure;

/// Defaults read from a `key=value` config file. Flags override file
/// entries, file entries override built-in defaults. Blank lines and
/// lines starting with `#` are skipped. Keys match long flag names.
pub struct FileDefaults {
    entries: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl FileDefaults {
    pub fn empty() -> Self {
        FileDefaults {
            entries: BTreeMap::new(),
            used: BTreeSet::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::Usage(format!(
                    "config line {} is not key=value: {line}",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if entries
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(Failure::Usage(format!("config key {key} appears twice")));
            }
        }
        Ok(FileDefaults {
            entries,
            used: BTreeSet::new(),
        })
    }

    fn lookup(&mut self, key: &str) -> Option<String> {
        let value = self.entries.get(key).cloned();
        if value.is_some() {
            self.used.insert(key.to_string());
        }
        value
    }

    /// Scalar with a built-in default.
    pub fn scalar<T>(&mut self, flag: Option<T>, key: &str, default: T) -> Result<T, Failure>
    where
        T: FromStr,
        T::Err: Display,
    {
        match (flag, self.lookup(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(text)) => parse_scalar(&text, key),
            (None, None) => Ok(default),
        }
    }

    /// Scalar that must come from a flag or the config file.
    pub fn required<T>(&mut self, flag: Option<T>, key: &str) -> Result<T, Failure>
    where
        T: FromStr,
        T::Err: Display,
    {
        match (flag, self.lookup(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(text)) => parse_scalar(&text, key),
            (None, None) => Err(Failure::Usage(format!(
                "missing required flag --{key} (or config key {key})"
            ))),
        }
    }

    /// Scalar that stays absent when neither flag nor file sets it.
    pub fn optional<T>(&mut self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure>
    where
        T: FromStr,
        T::Err: Display,
    {
        match (flag, self.lookup(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(text)) => parse_scalar(&text, key).map(Some),
            (None, None) => Ok(None),
        }
    }

    /// Comma-separated list with a built-in default.
    pub fn list<T>(
        &mut self,
        flag: Option<String>,
        key: &str,
        default: &str,
    ) -> Result<Vec<T>, Failure>
    where
        T: FromStr,
        T::Err: Display,
    {
        let text = match (flag, self.lookup(key)) {
            (Some(v), _) => v,
            (None, Some(v)) => v,
            (None, None) => default.to_string(),
        };
        parse_list(&text, key)
    }

    /// Comma-separated list that must come from a flag or the file.
    pub fn required_list<T>(&mut self, flag: Option<String>, key: &str) -> Result<Vec<T>, Failure>
    where
        T: FromStr,
        T::Err: Display,
    {
        let text = match (flag, self.lookup(key)) {
            (Some(v), _) => v,
            (None, Some(v)) => v,
            (None, None) => {
                return Err(Failure::Usage(format!(
                    "missing required flag --{key} (or config key {key})"
                )))
            }
        };
        parse_list(&text, key)
    }

    /// Free-form text with a built-in default.
    pub fn text(
        &mut self,
        flag: Option<String>,
        key: &str,
        default: &str,
    ) -> Result<String, Failure> {
        match (flag, self.lookup(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(v)) => Ok(v),
            (None, None) => Ok(default.to_string()),
        }
    }

    /// Reject config keys that the invoked subcommand never consulted.
    pub fn finish(self) -> Result<(), Failure> {
        let unused: Vec<&String> = self
            .entries
            .keys()
            .filter(|k| !self.used.contains(*k))
            .collect();
        if let Some(first) = unused.first() {
            return Err(Failure::Usage(format!(
                "config key {first} is not a flag of this subcommand"
            )));
        }
        Ok(())
    }
}

fn parse_scalar<T>(text: &str, key: &str) -> Result<T, Failure>
where
    T: FromStr,
    T::Err: Display,
{
    text.trim()
        .parse()
        .map_err(|e| Failure::Usage(format!("invalid value for {key}: {e}")))
}

pub fn parse_list<T>(text: &str, key: &str) -> Result<Vec<T>, Failure>
where
    T: FromStr,
    T::Err: Display,
{
    let items: Result<Vec<T>, Failure> = text
        .split(',')
        .map(|piece| parse_scalar(piece, key))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(Failure::Usage(format!(
            "{key} must list at least one value"
        )));
    }
    Ok(items)
}
