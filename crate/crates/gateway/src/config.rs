//! Service configuration: an optional TOML file, then environment
//! overrides (`PORT`, `BUNDLE_PATH`, `SELECTION_THETA`, `DECAY_LAMBDA`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use exhibit_scribe::authoring::Role;
use serde::Deserialize;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", default, deny_unknown_fields)]
pub struct GatewayConfig {
    pub port: u16,
    /// Knowledge base bundle; `None` serves the built-in demo collection.
    pub bundle_path: Option<PathBuf>,
    /// Directory with the web client build, served for every path outside
    /// `/api`.
    pub static_dir: Option<PathBuf>,
    /// Authoring tokens and the role each one grants.
    pub tokens: BTreeMap<String, Role>,
    pub generation: exhibit_scribe::Config,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        let mut tokens = BTreeMap::new();
        tokens.insert("domain-author".to_string(), Role::DomainAuthor);
        tokens.insert("exhibit-author".to_string(), Role::ExhibitAuthor);
        GatewayConfig {
            port: 8080,
            bundle_path: None,
            static_dir: None,
            tokens,
            generation: exhibit_scribe::Config::default(),
        }
    }
}

impl GatewayConfig {
    /// Reads `file` if given, applies the process environment and checks
    /// the result.
    pub fn load(file: Option<&Path>) -> Result<Self> {
        let mut config = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => GatewayConfig::default(),
        };
        config.apply_env(|key| std::env::var(key).ok())?;
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: GatewayConfig = toml::from_str(text)?;
        config.generation.check()?;
        Ok(config)
    }

    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<()> {
        if let Some(v) = var("PORT") {
            self.port = v.parse().with_context(|| format!("PORT={v}"))?;
        }
        if let Some(v) = var("BUNDLE_PATH") {
            self.bundle_path = Some(PathBuf::from(v));
        }
        if let Some(v) = var("SELECTION_THETA") {
            self.generation.selection.theta = v.parse().with_context(|| format!("SELECTION_THETA={v}"))?;
        }
        if let Some(v) = var("DECAY_LAMBDA") {
            self.generation.selection.decay_lambda = v.parse().with_context(|| format!("DECAY_LAMBDA={v}"))?;
        }
        self.generation.check()?;
        Ok(())
    }
}
