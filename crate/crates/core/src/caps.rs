//! Resource caps shared by window construction and the search procedures.
//!
//! Caps come from defaults, then an optional `key=value` config file, then
//! environment variables (`COARSE_GEOM_MAX_BALL_SIZE`,
//! `COARSE_GEOM_MAX_SEARCH_NODES`, `COARSE_GEOM_MAX_LOOP_LENGTH`), later
//! sources overriding earlier ones.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCaps {
    /// Largest group ball a window may enumerate.
    pub max_ball_size: usize,
    /// Node budget of a single contraction search.
    pub max_search_nodes: usize,
    /// Largest loop length a probe enumerates.
    pub max_loop_length: usize,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            max_ball_size: 2_000_000,
            max_search_nodes: 20_000,
            max_loop_length: 16,
        }
    }
}

const KEYS: [(&str, &str); 3] = [
    ("max_ball_size", "COARSE_GEOM_MAX_BALL_SIZE"),
    ("max_search_nodes", "COARSE_GEOM_MAX_SEARCH_NODES"),
    ("max_loop_length", "COARSE_GEOM_MAX_LOOP_LENGTH"),
];

impl ResourceCaps {
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let parsed: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("cap `{key}` expects an integer, got {value:?}")))?;
        match key {
            "max_ball_size" => self.max_ball_size = parsed,
            "max_search_nodes" => self.max_search_nodes = parsed,
            "max_loop_length" => self.max_loop_length = parsed,
            other => return Err(Error::Parse(format!("unknown cap `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines; `#` starts a comment.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", lineno + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn apply_env(&mut self) -> Result<()> {
        for (key, var) in KEYS {
            if let Ok(value) = std::env::var(var) {
                self.set(key, &value)?;
            }
        }
        Ok(())
    }

    /// Defaults, then the config file (if any), then the environment.
    pub fn load(config: Option<&Path>) -> Result<Self> {
        let mut caps = ResourceCaps::default();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
            caps.apply_config_text(&text)?;
        }
        caps.apply_env()?;
        Ok(caps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_overrides_defaults() {
        let mut caps = ResourceCaps::default();
        caps.apply_config_text("# caps\nmax_ball_size = 10\n\nmax_search_nodes=5 # tight\n")
            .unwrap();
        assert_eq!(caps.max_ball_size, 10);
        assert_eq!(caps.max_search_nodes, 5);
        assert_eq!(caps.max_loop_length, ResourceCaps::default().max_loop_length);
    }

    #[test]
    fn rejects_unknown_keys() {
        let mut caps = ResourceCaps::default();
        assert!(caps.apply_config_text("max_coffee=3").is_err());
        assert!(caps.apply_config_text("max_ball_size").is_err());
    }
}
