use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::pack::{lookup, Category, LanguagePack};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Voice {
    Active,
    Passive,
}

impl Voice {
    pub fn as_str(self) -> &'static str {
        match self {
            Voice::Active => "active",
            Voice::Passive => "passive",
        }
    }
}

/// Finite verb features. Tense and voice come from the clause template,
/// the rest from the subject through agreement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerbFeatures {
    pub tense: String,
    pub voice: Voice,
    pub person: String,
    pub number: String,
    pub gender: String,
}

/// Full form table for `lemma` under paradigm `class`: every cell of the
/// class's category grid. Pack-level irregular forms for the lemma take
/// precedence over suffix rules. Verb tables hold the active finite cells
/// and the participle cells; passive forms are built from those.
pub fn generate_forms(lemma: &str, class: &str, pack: &LanguagePack) -> Result<BTreeMap<String, String>> {
    let (category, paradigm) = pack.paradigm(class)?;
    let stem = lemma
        .strip_suffix(paradigm.strip.as_str())
        .ok_or_else(|| Error::LemmaDoesNotMatchClassPattern {
            lemma: lemma.to_string(),
            class: class.to_string(),
            ending: paradigm.strip.clone(),
        })?;
    let irregular = pack.irregulars(category).get(lemma);
    let mut forms = BTreeMap::new();
    for cell in pack.grid(category) {
        let form = match irregular.and_then(|t| lookup(t, &cell)) {
            Some(form) => form.to_string(),
            None => {
                let suffix = lookup(&paradigm.cells, &cell).ok_or_else(|| Error::IncompleteParadigm {
                    class: class.to_string(),
                    cell: cell.clone(),
                })?;
                format!("{stem}{suffix}")
            }
        };
        forms.insert(cell, form);
    }
    Ok(forms)
}

/// One cell of a form table: the entry's explicit table when it has one,
/// never falling back to rules, else the generated paradigm.
pub(crate) fn cell(
    lemma: &str,
    class: &str,
    explicit: Option<&BTreeMap<String, String>>,
    key: &str,
    pack: &LanguagePack,
) -> Result<String> {
    if let Some(forms) = explicit {
        return lookup(forms, key)
            .map(str::to_string)
            .ok_or_else(|| Error::IncompleteParadigm {
                class: format!("{lemma} (explicit forms)"),
                cell: key.to_string(),
            });
    }
    let (category, paradigm) = pack.paradigm(class)?;
    if let Some(form) = pack.irregulars(category).get(lemma).and_then(|t| lookup(t, key)) {
        return Ok(form.to_string());
    }
    let stem = lemma
        .strip_suffix(paradigm.strip.as_str())
        .ok_or_else(|| Error::LemmaDoesNotMatchClassPattern {
            lemma: lemma.to_string(),
            class: class.to_string(),
            ending: paradigm.strip.clone(),
        })?;
    let suffix = lookup(&paradigm.cells, key).ok_or_else(|| Error::IncompleteParadigm {
        class: class.to_string(),
        cell: key.to_string(),
    })?;
    Ok(format!("{stem}{suffix}"))
}

pub(crate) fn check_category(class: &str, expected: Category, pack: &LanguagePack) -> Result<()> {
    let (found, _) = pack.paradigm(class)?;
    if found != expected {
        return Err(Error::UnknownParadigmClass {
            class: format!("{class} ({} class used for a {})", found.name(), expected.name()),
            language: pack.code.clone(),
        });
    }
    Ok(())
}
