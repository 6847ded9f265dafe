//! Language-independent knowledge base.
//!
//! Entity types form a single-inheritance tree rooted at [`ROOT_TYPE`].
//! Fields introduced at a type are available on every subtype, entities
//! belong to exactly one type, and facts fill an entity's fields. Facts
//! carry per-user-type interest, importance and base assimilation scores.
//!
//! Every mutation keeps the lookup index in step, so a `KnowledgeBase`
//! is always ready for queries. Snapshots are plain values: clone, edit,
//! validate, then publish.

pub mod bundle;
pub(crate) mod validate;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::microplanner::ClauseTemplate;
use crate::planner::Schema;
use crate::usermodel::UserTypeDef;

pub use validate::is_identifier;

/// The built-in root of the type tree.
pub const ROOT_TYPE: &str = "entity";
/// Field marker for the implicit "entity is-a type" fact.
pub const TYPE_INTRO: &str = "type-intro";
/// Field marker for paragraph-long canned stories.
pub const STORIES: &str = "stories";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Datatype {
    /// A string given separately for every language.
    String,
    Date,
    Number,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldKind {
    Relation { filler: String },
    Attribute { datatype: Datatype },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldDef {
    pub name: String,
    #[serde(flatten)]
    pub kind: FieldKind,
    #[serde(default)]
    pub set_valued: bool,
    #[serde(default)]
    pub canned_text: bool,
}

impl FieldDef {
    pub fn relation(name: &str, filler: &str) -> Self {
        FieldDef {
            name: name.to_string(),
            kind: FieldKind::Relation {
                filler: filler.to_string(),
            },
            set_valued: false,
            canned_text: false,
        }
    }

    pub fn attribute(name: &str, datatype: Datatype) -> Self {
        FieldDef {
            name: name.to_string(),
            kind: FieldKind::Attribute { datatype },
            set_valued: false,
            canned_text: false,
        }
    }

    pub fn set_valued(mut self) -> Self {
        self.set_valued = true;
        self
    }

    pub fn canned(mut self) -> Self {
        self.canned_text = true;
        self
    }

    pub fn is_relation(&self) -> bool {
        matches!(self.kind, FieldKind::Relation { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EntityTypeDef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default)]
    pub fields: Vec<FieldDef>,
    /// Noun senses usable for entities of this type and its subtypes,
    /// in attachment order.
    #[serde(default)]
    pub nouns: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Entity {
    pub id: String,
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(default)]
    pub generic: bool,
    /// Proper name per language.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub name: BTreeMap<String, String>,
    /// Entity-specific noun sense, used instead of the type noun when
    /// referring to this entity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noun: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjective: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thumbnail: Option<String>,
}

impl Entity {
    pub fn new(id: &str, type_name: &str) -> Self {
        Entity {
            id: id.to_string(),
            type_name: type_name.to_string(),
            generic: false,
            name: BTreeMap::new(),
            noun: None,
            adjective: None,
            thumbnail: None,
        }
    }

    pub fn generic(mut self) -> Self {
        self.generic = true;
        self
    }

    pub fn named(mut self, language: &str, name: &str) -> Self {
        self.name.insert(language.to_string(), name.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    Entity(String),
    Date(String),
    Number(f64),
    Text(BTreeMap<String, String>),
}

impl Value {
    pub fn text(pairs: &[(&str, &str)]) -> Self {
        Value::Text(
            pairs
                .iter()
                .map(|(l, s)| (l.to_string(), s.to_string()))
                .collect(),
        )
    }

    pub fn entity(id: &str) -> Self {
        Value::Entity(id.to_string())
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Value::Entity(_) => "an entity",
            Value::Date(_) => "a date",
            Value::Number(_) => "a number",
            Value::Text(_) => "a per-language string",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FactScores {
    pub interest: f64,
    pub importance: f64,
    pub base_assimilation: f64,
}

impl FactScores {
    pub const NEUTRAL: FactScores = FactScores {
        interest: 0.5,
        importance: 0.5,
        base_assimilation: 0.0,
    };
    pub const TYPE_INTRO: FactScores = FactScores {
        interest: 1.0,
        importance: 1.0,
        base_assimilation: 0.0,
    };

    pub fn new(interest: f64, importance: f64, base_assimilation: f64) -> Self {
        FactScores {
            interest,
            importance,
            base_assimilation,
        }
    }

    pub fn check(&self) -> Result<()> {
        for (name, value) in [
            ("interest", self.interest),
            ("importance", self.importance),
            ("baseAssimilation", self.base_assimilation),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ScoreOutOfRange {
                    name: name.to_string(),
                    value,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Fact {
    pub id: String,
    pub owner: String,
    pub field: String,
    pub value: Value,
    #[serde(default)]
    pub scores: BTreeMap<String, FactScores>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attachment {
    Entity(String),
    Type(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CannedParagraph {
    pub id: String,
    pub attached_to: Attachment,
    pub text: BTreeMap<String, String>,
    #[serde(default)]
    pub scores: BTreeMap<String, FactScores>,
}

/// Anything content selection can pick: a stored fact, the implicit
/// type-introduction fact of an entity, or a story paragraph.
#[derive(Clone, Copy, Debug)]
pub enum FactRef<'a> {
    Stored(&'a Fact),
    TypeIntro(&'a Entity),
    Story(&'a CannedParagraph),
}

impl<'a> FactRef<'a> {
    pub fn id(&self) -> String {
        match self {
            FactRef::Stored(f) => f.id.clone(),
            FactRef::TypeIntro(e) => type_intro_id(&e.id),
            FactRef::Story(c) => c.id.clone(),
        }
    }

    /// Field name, or the schema marker for pseudo-facts.
    pub fn field(&self) -> &'a str {
        match self {
            FactRef::Stored(f) => &f.field,
            FactRef::TypeIntro(_) => TYPE_INTRO,
            FactRef::Story(_) => STORIES,
        }
    }

    pub fn is_type_intro(&self) -> bool {
        matches!(self, FactRef::TypeIntro(_))
    }

    /// Scores for a user type, falling back to the user type's defaults.
    pub fn scores_for(&self, kb: &KnowledgeBase, user_type: &str) -> FactScores {
        let own = match self {
            FactRef::Stored(f) => &f.scores,
            FactRef::Story(c) => &c.scores,
            FactRef::TypeIntro(_) => return FactScores::TYPE_INTRO,
        };
        own.get(user_type).copied().unwrap_or_else(|| {
            kb.user_type(user_type)
                .map(|u| u.default_scores)
                .unwrap_or(FactScores::NEUTRAL)
        })
    }
}

pub fn type_intro_id(entity: &str) -> String {
    format!("{entity}.{TYPE_INTRO}")
}

#[derive(Clone, Debug, Default)]
struct Index {
    types: HashMap<String, usize>,
    entities: HashMap<String, usize>,
    facts: HashMap<String, usize>,
    facts_by_owner: HashMap<String, Vec<usize>>,
    generics: HashMap<String, usize>,
    canned: HashMap<String, usize>,
}

// The index is derived data; structural equality ignores it.
impl PartialEq for Index {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct KnowledgeBase {
    pub languages: Vec<String>,
    pub types: Vec<EntityTypeDef>,
    pub entities: Vec<Entity>,
    pub facts: Vec<Fact>,
    pub canned: Vec<CannedParagraph>,
    pub schemas: Vec<Schema>,
    pub user_types: Vec<UserTypeDef>,
    pub lexicon: Lexicon,
    pub microplans: Vec<ClauseTemplate>,
    index: Index,
}

impl KnowledgeBase {
    /// An empty knowledge base holding only the root type.
    pub fn new(languages: &[&str]) -> Self {
        let mut kb = KnowledgeBase {
            languages: languages.iter().map(|l| l.to_string()).collect(),
            types: vec![EntityTypeDef {
                name: ROOT_TYPE.to_string(),
                parent: None,
                fields: Vec::new(),
                nouns: Vec::new(),
            }],
            ..Default::default()
        };
        kb.reindex();
        kb
    }

    /// Rebuilds lookup tables after direct edits to the public vectors.
    pub fn reindex(&mut self) {
        let mut index = Index::default();
        for (i, t) in self.types.iter().enumerate() {
            index.types.entry(t.name.clone()).or_insert(i);
        }
        for (i, e) in self.entities.iter().enumerate() {
            index.entities.entry(e.id.clone()).or_insert(i);
            if e.generic {
                index.generics.entry(e.type_name.clone()).or_insert(i);
            }
        }
        for (i, f) in self.facts.iter().enumerate() {
            index.facts.entry(f.id.clone()).or_insert(i);
            index
                .facts_by_owner
                .entry(f.owner.clone())
                .or_default()
                .push(i);
        }
        for (i, c) in self.canned.iter().enumerate() {
            index.canned.entry(c.id.clone()).or_insert(i);
        }
        self.index = index;
    }

    // ---- lookups -------------------------------------------------------

    pub fn type_def(&self, name: &str) -> Result<&EntityTypeDef> {
        self.index
            .types
            .get(name)
            .map(|&i| &self.types[i])
            .ok_or_else(|| Error::UnknownType(name.to_string()))
    }

    pub fn has_type(&self, name: &str) -> bool {
        self.index.types.contains_key(name)
    }

    pub fn entity(&self, id: &str) -> Result<&Entity> {
        self.index
            .entities
            .get(id)
            .map(|&i| &self.entities[i])
            .ok_or_else(|| Error::UnknownEntity(id.to_string()))
    }

    pub fn fact(&self, id: &str) -> Result<&Fact> {
        self.index
            .facts
            .get(id)
            .map(|&i| &self.facts[i])
            .ok_or_else(|| Error::UnknownFact(id.to_string()))
    }

    pub fn canned_paragraph(&self, id: &str) -> Option<&CannedParagraph> {
        self.index.canned.get(id).map(|&i| &self.canned[i])
    }

    pub fn user_type(&self, name: &str) -> Result<&UserTypeDef> {
        self.user_types
            .iter()
            .find(|u| u.name == name)
            .ok_or_else(|| Error::UnknownUserType(name.to_string()))
    }

    pub fn generic_of(&self, type_name: &str) -> Option<&Entity> {
        self.index.generics.get(type_name).map(|&i| &self.entities[i])
    }

    pub fn facts_of(&self, owner: &str) -> impl Iterator<Item = &Fact> {
        self.index
            .facts_by_owner
            .get(owner)
            .into_iter()
            .flatten()
            .map(|&i| &self.facts[i])
    }

    pub fn language_enabled(&self, code: &str) -> bool {
        self.languages.iter().any(|l| l == code)
    }

    /// Resolves any selectable id: stored fact, type-intro pseudo-fact or story.
    pub fn resolve_fact(&self, id: &str) -> Result<FactRef<'_>> {
        if let Ok(f) = self.fact(id) {
            return Ok(FactRef::Stored(f));
        }
        if let Some(c) = self.canned_paragraph(id) {
            return Ok(FactRef::Story(c));
        }
        if let Some(owner) = id.strip_suffix(&format!(".{TYPE_INTRO}")) {
            if let Ok(e) = self.entity(owner) {
                return Ok(FactRef::TypeIntro(e));
            }
        }
        Err(Error::UnknownFact(id.to_string()))
    }

    // ---- type hierarchy ------------------------------------------------

    /// The chain from `name` up to the root, nearest first.
    pub fn ancestors(&self, name: &str) -> Result<Vec<&EntityTypeDef>> {
        let mut chain = Vec::new();
        let mut current = self.type_def(name)?;
        loop {
            chain.push(current);
            match &current.parent {
                None => break,
                Some(p) => {
                    if chain.len() > self.types.len() {
                        // cycle; validate() reports it
                        break;
                    }
                    current = self.type_def(p)?;
                }
            }
        }
        Ok(chain)
    }

    pub fn define_type(&mut self, name: &str, parent: &str) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::InvalidIdentifier(name.to_string()));
        }
        if self.has_type(name) {
            return Err(Error::DuplicateType(name.to_string()));
        }
        if !self.has_type(parent) {
            return Err(Error::UnknownParent(parent.to_string()));
        }
        self.types.push(EntityTypeDef {
            name: name.to_string(),
            parent: Some(parent.to_string()),
            fields: Vec::new(),
            nouns: Vec::new(),
        });
        self.index
            .types
            .insert(name.to_string(), self.types.len() - 1);
        Ok(())
    }

    /// `true` iff `b` is on the ancestor chain of `a` (reflexive).
    pub fn is_subtype(&self, a: &str, b: &str) -> Result<bool> {
        self.type_def(b)?;
        Ok(self.ancestors(a)?.iter().any(|t| t.name == b))
    }

    /// Types whose ancestor chain contains `name`, excluding `name` itself.
    pub fn descendants(&self, name: &str) -> Vec<&EntityTypeDef> {
        self.types
            .iter()
            .filter(|t| t.name != name)
            .filter(|t| {
                self.ancestors(&t.name)
                    .map(|chain| chain.iter().any(|a| a.name == name))
                    .unwrap_or(false)
            })
            .collect()
    }

    pub fn define_field(&mut self, type_name: &str, field: FieldDef) -> Result<()> {
        self.type_def(type_name)?;
        if !is_identifier(&field.name) {
            return Err(Error::InvalidIdentifier(field.name.clone()));
        }
        if field.name == TYPE_INTRO || field.name == STORIES {
            return Err(Error::ReservedFieldName(field.name));
        }
        for t in self.ancestors(type_name)?.into_iter().chain(self.descendants(type_name)) {
            if t.fields.iter().any(|f| f.name == field.name) {
                return Err(Error::FieldNameCollision {
                    field: field.name.clone(),
                    existing_on: t.name.clone(),
                });
            }
        }
        check_field_def(self, &field)?;
        let i = self.index.types[type_name];
        self.types[i].fields.push(field);
        Ok(())
    }

    /// Ancestor-introduced fields first (root down), then the type's own,
    /// each group in introduction order.
    pub fn fields_of(&self, type_name: &str) -> Result<Vec<&FieldDef>> {
        let chain = self.ancestors(type_name)?;
        Ok(chain.iter().rev().flat_map(|t| t.fields.iter()).collect())
    }

    /// The field definition as seen from `type_name`.
    pub fn field_on(&self, type_name: &str, field: &str) -> Option<&FieldDef> {
        self.ancestors(type_name)
            .ok()?
            .into_iter()
            .find_map(|t| t.fields.iter().find(|f| f.name == field))
    }

    /// The type that introduces `field`, searching the whole tree.
    pub fn field_owner_type(&self, field: &str) -> Option<(&EntityTypeDef, &FieldDef)> {
        self.types
            .iter()
            .find_map(|t| t.fields.iter().find(|f| f.name == field).map(|f| (t, f)))
    }

    // ---- entities and facts ---------------------------------------------

    pub fn add_entity(&mut self, entity: Entity) -> Result<()> {
        if !is_identifier(&entity.id) {
            return Err(Error::InvalidIdentifier(entity.id));
        }
        if self.index.entities.contains_key(&entity.id) {
            return Err(Error::DuplicateEntity(entity.id));
        }
        self.type_def(&entity.type_name)?;
        if entity.generic {
            if let Some(existing) = self.generic_of(&entity.type_name) {
                return Err(Error::DuplicateGeneric {
                    type_name: entity.type_name.clone(),
                    existing: existing.id.clone(),
                });
            }
            self.index
                .generics
                .insert(entity.type_name.clone(), self.entities.len());
        }
        self.index
            .entities
            .insert(entity.id.clone(), self.entities.len());
        self.entities.push(entity);
        Ok(())
    }

    /// Type-checks and stores a fact, returning its id. Omitted user types
    /// fall back to the user type's default scores at selection time.
    pub fn assert_fact(
        &mut self,
        owner: &str,
        field: &str,
        value: Value,
        scores: BTreeMap<String, FactScores>,
    ) -> Result<String> {
        let def = self.check_fact(owner, field, &value, &scores)?;
        let mut id = format!("{owner}.{field}");
        if def.set_valued || self.index.facts.contains_key(&id) {
            let mut n = 1;
            while self.index.facts.contains_key(&format!("{owner}.{field}.{n}")) {
                n += 1;
            }
            id = format!("{owner}.{field}.{n}");
        }
        let fact = Fact {
            id: id.clone(),
            owner: owner.to_string(),
            field: field.to_string(),
            value,
            scores,
        };
        self.push_fact(fact);
        Ok(id)
    }

    /// Stores a fact with a caller-chosen id after the same checks as
    /// [`assert_fact`](Self::assert_fact).
    pub fn insert_fact(&mut self, fact: Fact) -> Result<()> {
        if self.index.facts.contains_key(&fact.id) {
            return Err(Error::BadEdit(format!("fact id `{}` already in use", fact.id)));
        }
        self.check_fact(&fact.owner, &fact.field, &fact.value, &fact.scores)?;
        self.push_fact(fact);
        Ok(())
    }

    fn push_fact(&mut self, fact: Fact) {
        let i = self.facts.len();
        self.index.facts.insert(fact.id.clone(), i);
        self.index
            .facts_by_owner
            .entry(fact.owner.clone())
            .or_default()
            .push(i);
        self.facts.push(fact);
    }

    fn check_fact(
        &self,
        owner: &str,
        field: &str,
        value: &Value,
        scores: &BTreeMap<String, FactScores>,
    ) -> Result<FieldDef> {
        let entity = self.entity(owner)?;
        let def = self
            .field_on(&entity.type_name, field)
            .ok_or_else(|| Error::UnknownField {
                entity: owner.to_string(),
                field: field.to_string(),
            })?
            .clone();
        check_value(self, &def, value)?;
        if entity.generic && def.set_valued {
            return Err(Error::GenericSetValued {
                entity: owner.to_string(),
                field: field.to_string(),
            });
        }
        let existing: Vec<&Fact> = self.facts_of(owner).filter(|f| f.field == field).collect();
        if !def.set_valued && !existing.is_empty() {
            return Err(Error::CardinalityViolation {
                entity: owner.to_string(),
                field: field.to_string(),
            });
        }
        if existing.iter().any(|f| &f.value == value) {
            return Err(Error::CardinalityViolation {
                entity: owner.to_string(),
                field: field.to_string(),
            });
        }
        for (user_type, s) in scores {
            self.user_type(user_type)?;
            s.check()?;
        }
        Ok(def)
    }

    /// Own facts, then defaults from the generic entity of the entity's
    /// type and of each ancestor type, nearest first. A default is dropped
    /// once the field has been filled closer to the entity.
    pub fn effective_facts(&self, entity_id: &str) -> Result<Vec<&Fact>> {
        let entity = self.entity(entity_id)?;
        if entity.generic {
            return Err(Error::GenericEntityQueried(entity_id.to_string()));
        }
        let mut out: Vec<&Fact> = self.facts_of(entity_id).collect();
        let mut filled: HashSet<&str> = out.iter().map(|f| f.field.as_str()).collect();
        for t in self.ancestors(&entity.type_name)? {
            let Some(generic) = self.generic_of(&t.name) else {
                continue;
            };
            let defaults: Vec<&Fact> = self
                .facts_of(&generic.id)
                .filter(|f| !filled.contains(f.field.as_str()))
                .collect();
            for f in &defaults {
                filled.insert(&f.field);
            }
            out.extend(defaults);
        }
        Ok(out)
    }

    /// Story paragraphs attached to the entity or to any type on its chain.
    pub fn stories_for(&self, entity_id: &str) -> Result<Vec<&CannedParagraph>> {
        let entity = self.entity(entity_id)?;
        let chain: Vec<&str> = self
            .ancestors(&entity.type_name)?
            .iter()
            .map(|t| t.name.as_str())
            .collect();
        Ok(self
            .canned
            .iter()
            .filter(|c| match &c.attached_to {
                Attachment::Entity(e) => e == entity_id,
                Attachment::Type(t) => chain.contains(&t.as_str()),
            })
            .collect())
    }

    pub fn validate(&self) -> Vec<crate::diag::Diagnostic> {
        validate::validate(self)
    }
}

pub(crate) fn check_field_def(kb: &KnowledgeBase, field: &FieldDef) -> Result<()> {
    match &field.kind {
        FieldKind::Relation { filler } => {
            if !kb.has_type(filler) {
                return Err(Error::BadFillerType {
                    field: field.name.clone(),
                    reason: format!("unknown entity type `{filler}`"),
                });
            }
            if field.canned_text {
                return Err(Error::BadFillerType {
                    field: field.name.clone(),
                    reason: "canned text is only valid on string attributes".into(),
                });
            }
        }
        FieldKind::Attribute { datatype } => {
            if field.canned_text && *datatype != Datatype::String {
                return Err(Error::BadFillerType {
                    field: field.name.clone(),
                    reason: "canned text is only valid on string attributes".into(),
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn check_value(kb: &KnowledgeBase, def: &FieldDef, value: &Value) -> Result<()> {
    let mismatch = |expected: &str| Error::TypeMismatch {
        field: def.name.clone(),
        expected: expected.to_string(),
        found: value.kind_name().to_string(),
    };
    match (&def.kind, value) {
        (FieldKind::Relation { filler }, Value::Entity(id)) => {
            let target = kb.entity(id)?;
            if !kb.is_subtype(&target.type_name, filler)? {
                return Err(Error::TypeMismatch {
                    field: def.name.clone(),
                    expected: format!("a `{filler}`"),
                    found: format!("`{id}` of type `{}`", target.type_name),
                });
            }
            Ok(())
        }
        (FieldKind::Relation { filler }, _) => Err(mismatch(&format!("a `{filler}` entity"))),
        (FieldKind::Attribute { datatype: Datatype::String }, Value::Text(_)) => Ok(()),
        (FieldKind::Attribute { datatype: Datatype::Date }, Value::Date(_)) => Ok(()),
        (FieldKind::Attribute { datatype: Datatype::Number }, Value::Number(n)) => {
            if n.is_finite() {
                Ok(())
            } else {
                Err(mismatch("a finite number"))
            }
        }
        (FieldKind::Attribute { datatype }, _) => Err(mismatch(match datatype {
            Datatype::String => "a per-language string",
            Datatype::Date => "a date",
            Datatype::Number => "a number",
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo::demo_kb;

    #[test]
    fn define_type_under_statue() {
        let mut kb = demo_kb();
        kb.define_type("herm", "statue").unwrap();
        assert!(kb.is_subtype("herm", "exhibit").unwrap());
        assert_eq!(
            kb.define_type("vessel2", "entity-that-does-not-exist"),
            Err(Error::UnknownParent("entity-that-does-not-exist".into()))
        );
        assert_eq!(
            kb.define_type("statue", "exhibit"),
            Err(Error::DuplicateType("statue".into()))
        );
    }

    #[test]
    fn kouros_chain() {
        let kb = demo_kb();
        let chain: Vec<_> = kb
            .ancestors("kouros")
            .unwrap()
            .iter()
            .map(|t| t.name.clone())
            .collect();
        assert_eq!(chain, ["kouros", "statue", "exhibit", "entity"]);
        assert!(kb.is_subtype("kouros", "exhibit").unwrap());
        assert!(kb.is_subtype("vessel", "vessel").unwrap());
        assert!(!kb.is_subtype("exhibit", "kouros").unwrap());
        assert!(kb.is_subtype("nope", "exhibit").is_err());
    }

    #[test]
    fn fields_inherited_root_down() {
        let kb = demo_kb();
        let kouros: Vec<_> = kb
            .fields_of("kouros")
            .unwrap()
            .iter()
            .map(|f| f.name.as_str())
            .collect();
        assert_eq!(kouros.last(), Some(&"sculpted-by"));
        assert_eq!(kouros[0], "creation-period");
        let vessel: Vec<_> = kb
            .fields_of("vessel")
            .unwrap()
            .iter()
            .map(|f| f.name.clone())
            .collect();
        assert!(vessel.contains(&"creation-period".to_string()));
        assert!(!vessel.contains(&"sculpted-by".to_string()));
        assert!(kb.fields_of("entity").unwrap().is_empty());
    }

    #[test]
    fn field_collisions_checked_up_and_down() {
        let mut kb = demo_kb();
        let err = kb
            .define_field("kouros", FieldDef::relation("creation-period", "historical-period"))
            .unwrap_err();
        assert!(matches!(err, Error::FieldNameCollision { .. }));
        // introducing on exhibit a name already used further down
        let err = kb
            .define_field("exhibit", FieldDef::relation("sculpted-by", "sculptor"))
            .unwrap_err();
        assert!(matches!(err, Error::FieldNameCollision { ref existing_on, .. } if existing_on == "statue"));
        assert!(matches!(
            kb.define_field("statue", FieldDef::relation("carved-from", "no-such-type")),
            Err(Error::BadFillerType { .. })
        ));
        assert!(matches!(
            kb.define_field("statue", FieldDef::attribute("height", Datatype::Number).canned()),
            Err(Error::BadFillerType { .. })
        ));
    }

    #[test]
    fn set_valued_field_takes_many_fillers() {
        let mut kb = demo_kb();
        let a = kb
            .assert_fact("vase1", "previous-locations", Value::entity("athens"), BTreeMap::new())
            .unwrap();
        let b = kb
            .assert_fact("vase1", "previous-locations", Value::entity("attica"), BTreeMap::new())
            .unwrap();
        assert_ne!(a, b);
        assert!(matches!(
            kb.assert_fact("vase1", "previous-locations", Value::entity("attica"), BTreeMap::new()),
            Err(Error::CardinalityViolation { .. })
        ));
    }

    #[test]
    fn assert_fact_checks() {
        let mut kb = demo_kb();
        assert!(matches!(
            kb.assert_fact("vase1", "sculpted-by", Value::entity("polyklitus"), BTreeMap::new()),
            Err(Error::UnknownField { .. })
        ));
        assert!(matches!(
            kb.assert_fact("kouros1", "creation-period", Value::entity("attica"), BTreeMap::new()),
            Err(Error::TypeMismatch { .. })
        ));
        assert!(matches!(
            kb.assert_fact("vase1", "current-location", Value::entity("attica"), BTreeMap::new()),
            Err(Error::CardinalityViolation { .. })
        ));
        assert!(matches!(
            kb.assert_fact("ghost", "current-location", Value::entity("attica"), BTreeMap::new()),
            Err(Error::UnknownEntity(_))
        ));
        let mut bad = BTreeMap::new();
        bad.insert("adult".to_string(), FactScores::new(1.5, 0.0, 0.0));
        assert!(matches!(
            kb.assert_fact("kouros1", "current-location", Value::entity("athens"), bad),
            Err(Error::ScoreOutOfRange { .. })
        ));
        let id = kb
            .assert_fact("kouros1", "sculpted-by", Value::entity("polyklitus"), BTreeMap::new())
            .unwrap();
        assert_eq!(id, "kouros1.sculpted-by");
    }

    #[test]
    fn generic_defaults_and_override() {
        let mut kb = demo_kb();
        let facts = kb.effective_facts("kouros1").unwrap();
        let period = facts.iter().find(|f| f.field == "creation-period").unwrap();
        assert_eq!(period.value, Value::entity("archaic-period"));
        assert_eq!(period.owner, "generic-kouros");

        kb.add_entity(Entity::new("kouros2", "kouros")).unwrap();
        kb.assert_fact(
            "kouros2",
            "creation-period",
            Value::entity("classical-period"),
            BTreeMap::new(),
        )
        .unwrap();
        let facts = kb.effective_facts("kouros2").unwrap();
        let periods: Vec<_> = facts.iter().filter(|f| f.field == "creation-period").collect();
        assert_eq!(periods.len(), 1);
        assert_eq!(periods[0].value, Value::entity("classical-period"));

        // no generic anywhere on the chain: own facts only
        let own: Vec<_> = kb.facts_of("vase1").map(|f| f.id.clone()).collect();
        let eff: Vec<_> = kb
            .effective_facts("vase1")
            .unwrap()
            .iter()
            .map(|f| f.id.clone())
            .collect();
        assert_eq!(own, eff);

        assert!(matches!(
            kb.effective_facts("generic-kouros"),
            Err(Error::GenericEntityQueried(_))
        ));
    }

    #[test]
    fn ancestor_generic_contributes_nearest_first() {
        let mut kb = demo_kb();
        kb.add_entity(Entity::new("generic-statue", "statue").generic())
            .unwrap();
        kb.assert_fact(
            "generic-statue",
            "creation-period",
            Value::entity("classical-period"),
            BTreeMap::new(),
        )
        .unwrap();
        kb.assert_fact(
            "generic-statue",
            "current-location",
            Value::entity("athens"),
            BTreeMap::new(),
        )
        .unwrap();
        let facts = kb.effective_facts("kouros1").unwrap();
        let period = facts.iter().find(|f| f.field == "creation-period").unwrap();
        assert_eq!(period.owner, "generic-kouros");
        assert!(facts.iter().any(|f| f.field == "current-location"));
        assert!(matches!(
            kb.add_entity(Entity::new("generic-statue-2", "statue").generic()),
            Err(Error::DuplicateGeneric { .. })
        ));
        assert!(matches!(
            kb.assert_fact(
                "generic-statue",
                "previous-locations",
                Value::entity("athens"),
                BTreeMap::new()
            ),
            Err(Error::GenericSetValued { .. })
        ));
    }

    #[test]
    fn resolve_pseudo_facts() {
        let kb = demo_kb();
        assert!(kb.resolve_fact("vase1.type-intro").unwrap().is_type_intro());
        assert!(matches!(kb.resolve_fact("kouros-story"), Ok(FactRef::Story(_))));
        assert!(kb.resolve_fact("nope.type-intro").is_err());
    }
}
