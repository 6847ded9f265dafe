use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cell table keyed by dot-separated feature patterns. A `*` segment
/// matches any value; the most specific matching pattern wins.
pub type CellTable = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Paradigm {
    /// Ending removed from the lemma to obtain the stem. The lemma must
    /// end with it.
    #[serde(default)]
    pub strip: String,
    pub cells: CellTable,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Irregulars {
    #[serde(default)]
    pub nouns: BTreeMap<String, CellTable>,
    #[serde(default)]
    pub adjectives: BTreeMap<String, CellTable>,
    #[serde(default)]
    pub verbs: BTreeMap<String, CellTable>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FunctionWords {
    pub definite_article: CellTable,
    pub indefinite_article: CellTable,
    pub demonstrative: CellTable,
    pub pronoun: CellTable,
    pub passive_auxiliary: CellTable,
    pub conjunction: String,
    pub list_separator: String,
    pub agent_marker: String,
    #[serde(default)]
    pub prepositions: BTreeMap<String, String>,
    pub comparison_template: String,
    pub contrastive_connective: String,
    pub exhausted_message: String,
}

/// Clause constituents a linearization pattern can order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constituent {
    Subject,
    Verb,
    Object,
    Complement,
    Agent,
    Oblique,
    Adjuncts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjectivePosition {
    Before,
    After,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Linearization {
    /// Keyed `active.declarative` / `passive.declarative`.
    pub patterns: BTreeMap<String, Vec<Constituent>>,
    pub adjective_position: AdjectivePosition,
    #[serde(default)]
    pub pro_drop: bool,
    pub subject_case: String,
    pub object_case: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Orthography {
    pub capitalize_sentences: bool,
    pub terminal: String,
    /// Tokens written without a preceding space.
    #[serde(default)]
    pub attach_left: Vec<String>,
    /// Adjacent token pairs ("in il") fused into one form ("nel").
    #[serde(default)]
    pub contractions: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LanguagePack {
    pub code: String,
    #[serde(default)]
    pub name: String,
    pub genders: Vec<String>,
    pub numbers: Vec<String>,
    pub cases: Vec<String>,
    pub tenses: Vec<String>,
    pub persons: Vec<String>,
    #[serde(default)]
    pub noun_paradigms: BTreeMap<String, Paradigm>,
    #[serde(default)]
    pub adjective_paradigms: BTreeMap<String, Paradigm>,
    #[serde(default)]
    pub verb_paradigms: BTreeMap<String, Paradigm>,
    #[serde(default)]
    pub irregular_forms: Irregulars,
    pub function_words: FunctionWords,
    pub linearization: Linearization,
    pub orthography: Orthography,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    Noun,
    Adjective,
    Verb,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Noun => "noun",
            Category::Adjective => "adjective",
            Category::Verb => "verb",
        }
    }
}

impl LanguagePack {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Finds a paradigm class by id. Class ids are unique across the
    /// three categories of a pack.
    pub fn paradigm(&self, class: &str) -> Result<(Category, &Paradigm)> {
        if let Some(p) = self.noun_paradigms.get(class) {
            return Ok((Category::Noun, p));
        }
        if let Some(p) = self.adjective_paradigms.get(class) {
            return Ok((Category::Adjective, p));
        }
        if let Some(p) = self.verb_paradigms.get(class) {
            return Ok((Category::Verb, p));
        }
        Err(Error::UnknownParadigmClass {
            class: class.to_string(),
            language: self.code.clone(),
        })
    }

    pub fn irregulars(&self, category: Category) -> &BTreeMap<String, CellTable> {
        match category {
            Category::Noun => &self.irregular_forms.nouns,
            Category::Adjective => &self.irregular_forms.adjectives,
            Category::Verb => &self.irregular_forms.verbs,
        }
    }

    /// Every cell key of the category's grid, in grid order.
    pub fn grid(&self, category: Category) -> Vec<String> {
        let mut cells = Vec::new();
        match category {
            Category::Noun => {
                for n in &self.numbers {
                    for c in &self.cases {
                        cells.push(format!("{n}.{c}"));
                    }
                }
            }
            Category::Adjective => {
                for g in &self.genders {
                    for n in &self.numbers {
                        for c in &self.cases {
                            cells.push(format!("{g}.{n}.{c}"));
                        }
                    }
                }
            }
            Category::Verb => {
                for t in &self.tenses {
                    for p in &self.persons {
                        for n in &self.numbers {
                            cells.push(format!("{t}.{p}.{n}"));
                        }
                    }
                }
                for g in &self.genders {
                    for n in &self.numbers {
                        cells.push(format!("participle.{g}.{n}"));
                    }
                }
            }
        }
        cells
    }

    pub(crate) fn check_feature(&self, axis: &[String], value: &str) -> Result<()> {
        if axis.iter().any(|v| v == value) {
            Ok(())
        } else {
            Err(Error::FeatureOutOfGrid {
                feature: value.to_string(),
                language: self.code.clone(),
            })
        }
    }

    pub fn preposition<'a>(&'a self, sense: &'a str) -> &'a str {
        self.function_words
            .prepositions
            .get(sense)
            .map(String::as_str)
            .unwrap_or(sense)
    }
}

/// Looks `key` up in a wildcard table. Among the patterns with the same
/// number of segments that match, the one with the most literal segments
/// wins; ties go to the lexicographically first pattern.
pub fn lookup<'a>(table: &'a CellTable, key: &str) -> Option<&'a str> {
    let wanted: Vec<&str> = key.split('.').collect();
    let mut best: Option<(usize, &'a str)> = None;
    for (pattern, value) in table {
        let segs: Vec<&str> = pattern.split('.').collect();
        if segs.len() != wanted.len() {
            continue;
        }
        if !segs.iter().zip(&wanted).all(|(p, w)| *p == "*" || p == w) {
            continue;
        }
        let score = segs.iter().filter(|s| **s != "*").count();
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, value));
        }
    }
    best.map(|(_, v)| v)
}

/// Like [`lookup`], but first tries the key extended with a class tag
/// (such as a noun's article class) before falling back to the plain key.
pub fn lookup_with_class<'a>(table: &'a CellTable, key: &str, class: Option<&str>) -> Option<&'a str> {
    class
        .and_then(|c| lookup(table, &format!("{key}.{c}")))
        .or_else(|| lookup(table, key))
}

/// The language packs available to a generator, keyed by code.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PackSet {
    packs: BTreeMap<String, LanguagePack>,
}

const EN_PACK: &str = include_str!("../../data/packs/en.json");
const DEMO_PACK: &str = include_str!("../../data/packs/demo.json");

impl PackSet {
    /// English plus the demonstration inflected pack.
    pub fn builtin() -> Self {
        let mut set = PackSet::default();
        for text in [EN_PACK, DEMO_PACK] {
            set.insert(LanguagePack::from_json(text).expect("shipped pack parses"));
        }
        set
    }

    pub fn insert(&mut self, pack: LanguagePack) {
        self.packs.insert(pack.code.clone(), pack);
    }

    pub fn get(&self, code: &str) -> Result<&LanguagePack> {
        self.packs
            .get(code)
            .ok_or_else(|| Error::UnknownLanguage(code.to_string()))
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.packs.keys().map(String::as_str)
    }
}
