//! Sense-aligned multilingual lexicon and paradigm morphology.
//!
//! Lexical entries name a sense (shared across languages), a lemma and a
//! paradigm class of the language's pack. Word forms come from the
//! entry's explicit table if it has one, otherwise from the pack.

mod morph;
mod pack;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::diag::Diagnostic;
use crate::error::{Error, Result};
use crate::kb::{Entity, KnowledgeBase};

pub use morph::{generate_forms, VerbFeatures, Voice};
pub use pack::{
    lookup, lookup_with_class, AdjectivePosition, Category, CellTable, Constituent, FunctionWords,
    Irregulars, LanguagePack, Linearization, Orthography, PackSet, Paradigm,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Register {
    Child,
    Adult,
    Expert,
}

impl Register {
    pub const ALL: [Register; 3] = [Register::Child, Register::Adult, Register::Expert];
}

/// An empty tag list matches every register.
pub fn register_matches(tags: &[Register], register: Register) -> bool {
    tags.is_empty() || tags.contains(&register)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NounEntry {
    pub sense: String,
    pub language: String,
    pub lemma: String,
    pub gender: String,
    pub paradigm_class: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub registers: Vec<Register>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<BTreeMap<String, String>>,
    /// Selects article variants, e.g. `vowel` for English "an".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub article_class: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerbEntry {
    pub sense: String,
    pub language: String,
    pub lemma: String,
    pub paradigm_class: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub registers: Vec<Register>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AdjectiveEntry {
    pub sense: String,
    pub language: String,
    pub lemma: String,
    pub paradigm_class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Lexicon {
    #[serde(default)]
    pub nouns: Vec<NounEntry>,
    #[serde(default)]
    pub verbs: Vec<VerbEntry>,
    #[serde(default)]
    pub adjectives: Vec<AdjectiveEntry>,
}

impl Lexicon {
    pub fn noun(&self, sense: &str, language: &str) -> Option<&NounEntry> {
        self.nouns
            .iter()
            .find(|n| n.sense == sense && n.language == language)
    }

    pub fn verb(&self, sense: &str, language: &str) -> Option<&VerbEntry> {
        self.verbs
            .iter()
            .find(|v| v.sense == sense && v.language == language)
    }

    pub fn adjective(&self, sense: &str, language: &str) -> Option<&AdjectiveEntry> {
        self.adjectives
            .iter()
            .find(|a| a.sense == sense && a.language == language)
    }

    pub fn require_verb(&self, sense: &str, language: &str) -> Result<&VerbEntry> {
        self.verb(sense, language).ok_or_else(|| Error::MissingLexicalEntry {
            category: "verb",
            sense: sense.to_string(),
            language: language.to_string(),
        })
    }

    pub fn require_adjective(&self, sense: &str, language: &str) -> Result<&AdjectiveEntry> {
        self.adjective(sense, language)
            .ok_or_else(|| Error::MissingLexicalEntry {
                category: "adjective",
                sense: sense.to_string(),
                language: language.to_string(),
            })
    }

    /// Adds or replaces the entry for (sense, language).
    pub fn upsert_noun(&mut self, entry: NounEntry) {
        self.nouns
            .retain(|n| !(n.sense == entry.sense && n.language == entry.language));
        self.nouns.push(entry);
    }

    pub fn upsert_verb(&mut self, entry: VerbEntry) {
        self.verbs
            .retain(|v| !(v.sense == entry.sense && v.language == entry.language));
        self.verbs.push(entry);
    }

    pub fn upsert_adjective(&mut self, entry: AdjectiveEntry) {
        self.adjectives
            .retain(|a| !(a.sense == entry.sense && a.language == entry.language));
        self.adjectives.push(entry);
    }
}

pub fn inflect_noun(entry: &NounEntry, number: &str, case: &str, pack: &LanguagePack) -> Result<String> {
    pack.check_feature(&pack.numbers, number)?;
    pack.check_feature(&pack.cases, case)?;
    morph::cell(
        &entry.lemma,
        &entry.paradigm_class,
        entry.forms.as_ref(),
        &format!("{number}.{case}"),
        pack,
    )
}

pub fn inflect_adjective(
    entry: &AdjectiveEntry,
    gender: &str,
    number: &str,
    case: &str,
    pack: &LanguagePack,
) -> Result<String> {
    pack.check_feature(&pack.genders, gender)?;
    pack.check_feature(&pack.numbers, number)?;
    pack.check_feature(&pack.cases, case)?;
    morph::cell(
        &entry.lemma,
        &entry.paradigm_class,
        entry.forms.as_ref(),
        &format!("{gender}.{number}.{case}"),
        pack,
    )
}

/// The finite verb group as tokens: one word in the active voice, the
/// passive auxiliary followed by the agreeing participle otherwise.
pub fn inflect_verb(entry: &VerbEntry, f: &VerbFeatures, pack: &LanguagePack) -> Result<Vec<String>> {
    pack.check_feature(&pack.tenses, &f.tense)?;
    pack.check_feature(&pack.persons, &f.person)?;
    pack.check_feature(&pack.numbers, &f.number)?;
    pack.check_feature(&pack.genders, &f.gender)?;
    let finite = format!("{}.{}.{}", f.tense, f.person, f.number);
    let form = |key: &str| morph::cell(&entry.lemma, &entry.paradigm_class, entry.forms.as_ref(), key, pack);
    match f.voice {
        Voice::Active => Ok(vec![form(&finite)?]),
        Voice::Passive => {
            let aux = lookup(&pack.function_words.passive_auxiliary, &finite).ok_or_else(|| {
                Error::FeatureOutOfGrid {
                    feature: format!("passive auxiliary {finite}"),
                    language: pack.code.clone(),
                }
            })?;
            let participle = form(&format!("participle.{}.{}", f.gender, f.number))?;
            Ok(vec![aux.to_string(), participle])
        }
    }
}

/// The nearest noun attached on the type's ancestor chain that has an
/// entry in `language` matching `register`. Among nouns attached to the
/// same type, the first attached wins.
pub fn noun_for_type<'a>(
    type_name: &str,
    language: &str,
    register: Register,
    kb: &'a KnowledgeBase,
) -> Result<&'a NounEntry> {
    for t in kb.ancestors(type_name)? {
        for sense in &t.nouns {
            if let Some(entry) = kb.lexicon.noun(sense, language) {
                if register_matches(&entry.registers, register) {
                    return Ok(entry);
                }
            }
        }
    }
    Err(Error::NoAlignedNoun {
        type_name: type_name.to_string(),
        language: language.to_string(),
    })
}

/// The noun used to refer to an entity: its own noun sense when that has
/// an entry in the language, else the noun of its type.
pub fn noun_for_entity<'a>(
    entity: &Entity,
    language: &str,
    register: Register,
    kb: &'a KnowledgeBase,
) -> Result<&'a NounEntry> {
    if let Some(sense) = &entity.noun {
        if let Some(entry) = kb.lexicon.noun(sense, language) {
            return Ok(entry);
        }
    }
    noun_for_type(&entity.type_name, language, register, kb)
}

/// One warning per (sense, enabled language) pair lacking an entry.
pub fn check_alignment(lexicon: &Lexicon, enabled: &[String]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut check = |category: &str, entries: Vec<(&str, &str)>| {
        let senses: BTreeSet<&str> = entries.iter().map(|(s, _)| *s).collect();
        for sense in senses {
            for lang in enabled {
                if !entries.iter().any(|(s, l)| *s == sense && l == lang) {
                    out.push(Diagnostic::warning(
                        format!("lexicon/{category}s/{sense}"),
                        format!("sense `{sense}` has no {category} entry in `{lang}`"),
                    ));
                }
            }
        }
    };
    check(
        "noun",
        lexicon.nouns.iter().map(|e| (e.sense.as_str(), e.language.as_str())).collect(),
    );
    check(
        "verb",
        lexicon.verbs.iter().map(|e| (e.sense.as_str(), e.language.as_str())).collect(),
    );
    check(
        "adjective",
        lexicon
            .adjectives
            .iter()
            .map(|e| (e.sense.as_str(), e.language.as_str()))
            .collect(),
    );
    out
}

/// Checks every entry of an enabled language against its pack: the pack
/// exists, the class exists in the right category and accepts the lemma,
/// explicit tables cover the grid, and pronouns cover noun genders.
pub fn check_entries(lexicon: &Lexicon, packs: &PackSet, enabled: &[String]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for lang in enabled {
        if let Err(e) = packs.get(lang) {
            out.push(Diagnostic::from_error(format!("languages/{lang}"), &e));
        }
    }
    let mut seen = BTreeSet::new();
    let mut check = |category: Category,
                     sense: &str,
                     language: &str,
                     lemma: &str,
                     class: &str,
                     forms: Option<&BTreeMap<String, String>>,
                     out: &mut Vec<Diagnostic>| {
        let loc = format!("lexicon/{}s/{sense}/{language}", category.name());
        if !seen.insert((category.name(), sense.to_string(), language.to_string())) {
            out.push(Diagnostic::error(&loc, "duplicate entry for this sense and language"));
        }
        if !enabled.iter().any(|l| l == language) {
            return;
        }
        let Ok(pack) = packs.get(language) else {
            return;
        };
        let result = morph::check_category(class, category, pack).and_then(|_| match forms {
            Some(forms) => {
                for cell in pack.grid(category) {
                    if lookup(forms, &cell).is_none() {
                        return Err(Error::IncompleteParadigm {
                            class: format!("{lemma} (explicit forms)"),
                            cell,
                        });
                    }
                }
                Ok(())
            }
            None => generate_forms(lemma, class, pack).map(|_| ()),
        });
        if let Err(e) = result {
            out.push(Diagnostic::from_error(&loc, &e));
        }
    };
    for n in &lexicon.nouns {
        check(Category::Noun, &n.sense, &n.language, &n.lemma, &n.paradigm_class, n.forms.as_ref(), &mut out);
        if let Ok(pack) = packs.get(&n.language) {
            if !enabled.contains(&n.language) {
                continue;
            }
            let loc = format!("lexicon/nouns/{}/{}", n.sense, n.language);
            if let Err(e) = pack.check_feature(&pack.genders, &n.gender) {
                out.push(Diagnostic::from_error(&loc, &e));
                continue;
            }
            for number in &pack.numbers {
                for case in &pack.cases {
                    let key = format!("{}.{number}.{case}", n.gender);
                    if lookup(&pack.function_words.pronoun, &key).is_none() {
                        out.push(Diagnostic::error(
                            &loc,
                            format!("pack `{}` has no pronoun for {key}", pack.code),
                        ));
                    }
                }
            }
        }
    }
    for v in &lexicon.verbs {
        check(Category::Verb, &v.sense, &v.language, &v.lemma, &v.paradigm_class, v.forms.as_ref(), &mut out);
    }
    for a in &lexicon.adjectives {
        check(
            Category::Adjective,
            &a.sense,
            &a.language,
            &a.lemma,
            &a.paradigm_class,
            a.forms.as_ref(),
            &mut out,
        );
    }
    out
}
