//! KB bundle persistence: one JSON document per knowledge base.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CannedParagraph, Entity, EntityTypeDef, Fact, KnowledgeBase};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::microplanner::ClauseTemplate;
use crate::planner::Schema;
use crate::usermodel::UserTypeDef;

pub const BUNDLE_VERSION: &str = "exhibit-scribe/1";

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct BundleFile {
    version: String,
    languages: Vec<String>,
    types: Vec<EntityTypeDef>,
    #[serde(default)]
    entities: Vec<Entity>,
    #[serde(default)]
    facts: Vec<Fact>,
    #[serde(default)]
    canned: Vec<CannedParagraph>,
    #[serde(default)]
    schemas: Vec<Schema>,
    #[serde(default)]
    user_types: Vec<UserTypeDef>,
    #[serde(default)]
    lexicon: Lexicon,
    #[serde(default)]
    microplans: Vec<ClauseTemplate>,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: Option<serde_json::Value>,
}

pub fn to_json(kb: &KnowledgeBase) -> String {
    let file = BundleFile {
        version: BUNDLE_VERSION.to_string(),
        languages: kb.languages.clone(),
        types: kb.types.clone(),
        entities: kb.entities.clone(),
        facts: kb.facts.clone(),
        canned: kb.canned.clone(),
        schemas: kb.schemas.clone(),
        user_types: kb.user_types.clone(),
        lexicon: kb.lexicon.clone(),
        microplans: kb.microplans.clone(),
    };
    serde_json::to_string_pretty(&file).expect("bundle serializes")
}

/// Parses a bundle. The version tag is checked before the body so that a
/// bundle from another format revision reports a version mismatch rather
/// than whatever shape error it would cause.
pub fn from_json(text: &str) -> Result<KnowledgeBase> {
    let probe: VersionProbe = serde_json::from_str(text)?;
    match probe.version {
        Some(serde_json::Value::String(v)) if v == BUNDLE_VERSION => {}
        Some(other) => {
            return Err(Error::SchemaVersionMismatch {
                found: match other {
                    serde_json::Value::String(s) => s,
                    v => v.to_string(),
                },
            })
        }
        None => {
            return Err(Error::SchemaVersionMismatch {
                found: "(missing)".to_string(),
            })
        }
    }
    let file: BundleFile = serde_json::from_str(text)?;
    let mut kb = KnowledgeBase {
        languages: file.languages,
        types: file.types,
        entities: file.entities,
        facts: file.facts,
        canned: file.canned,
        schemas: file.schemas,
        user_types: file.user_types,
        lexicon: file.lexicon,
        microplans: file.microplans,
        index: Default::default(),
    };
    kb.reindex();
    Ok(kb)
}

pub fn save(kb: &KnowledgeBase, path: &Path) -> Result<()> {
    fs::write(path, to_json(kb))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<KnowledgeBase> {
    from_json(&fs::read_to_string(path)?)
}
