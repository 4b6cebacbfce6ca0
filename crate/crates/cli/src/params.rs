use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use qadd_core::Error;
use serde_json::Value;

/// `k=v` parameters with typed, defaulted accessors; every value read is recorded for the config echo.
pub struct Params {
    raw: BTreeMap<String, String>,
    resolved: BTreeMap<String, Value>,
}

fn invalid(msg: String) -> anyhow::Error {
    anyhow!(Error::InvalidParameter(msg))
}

impl Params {
    pub fn parse(items: &[String]) -> Result<Self> {
        let mut raw = BTreeMap::new();
        for item in items {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| invalid(format!("parameter '{item}' is not of the form key=value")))?;
            if raw.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(invalid(format!("parameter '{k}' given twice")));
            }
        }
        Ok(Self { raw, resolved: BTreeMap::new() })
    }

    fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw.remove(key) {
            None => Ok(None),
            Some(s) => s.parse::<T>().map(Some).map_err(|e| invalid(format!("{key}={s}: {e}"))),
        }
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        let v = self.take(key)?.unwrap_or(default);
        if !v.is_finite() {
            return Err(invalid(format!("{key} must be finite")));
        }
        self.resolved.insert(key.into(), Value::from(v));
        Ok(v)
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        let v = self.take(key)?.unwrap_or(default);
        self.resolved.insert(key.into(), Value::from(v));
        Ok(v)
    }

    pub fn string(&mut self, key: &str, default: &str) -> Result<String> {
        let v: String = self.take(key)?.unwrap_or_else(|| default.to_string());
        self.resolved.insert(key.into(), Value::from(v.clone()));
        Ok(v)
    }

    pub fn optional_string(&mut self, key: &str) -> Result<Option<String>> {
        let v: Option<String> = self.take(key)?;
        if let Some(s) = &v {
            self.resolved.insert(key.into(), Value::from(s.clone()));
        }
        Ok(v)
    }

    /// Reject keys the experiment never read.
    pub fn finish(&self) -> Result<()> {
        if let Some(k) = self.raw.keys().next() {
            let known: Vec<&String> = self.resolved.keys().collect();
            bail!(Error::InvalidParameter(format!("unknown parameter '{k}' (accepted: {known:?})")));
        }
        Ok(())
    }

    pub fn resolved(&self) -> &BTreeMap<String, Value> {
        &self.resolved
    }
}
