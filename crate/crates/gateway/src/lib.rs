//! HTTP service and command-line front end for `exhibit-scribe`.

pub mod cli;
pub mod config;
pub mod server;
pub mod session;

use std::path::Path;

use anyhow::{Context, Result};
use exhibit_scribe::kb::{bundle, KnowledgeBase};

/// Loads a bundle file; the name `demo` stands for the built-in collection
/// unless a file of that name exists.
pub fn load_bundle(path: &Path) -> Result<KnowledgeBase> {
    if path == Path::new("demo") && !path.exists() {
        return Ok(exhibit_scribe::demo::demo_kb());
    }
    bundle::load(path).with_context(|| format!("loading {}", path.display()))
}
