//! Editing a knowledge base: typed edit records, role checks, full
//! validation before every commit, undo, and previews.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diag::{has_errors, Diagnostic};
use crate::error::{Error, Result};
use crate::kb::{Attachment, Entity, EntityTypeDef, FactScores, FieldDef, FieldKind, KnowledgeBase, Value};
use crate::lexicon::{check_alignment, check_entries, generate_forms, AdjectiveEntry, NounEntry, PackSet, VerbEntry};
use crate::microplanner::ClauseTemplate;
use crate::pipeline::{Description, Generator};
use crate::planner::Schema;
use crate::usermodel::UserTypeDef;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    DomainAuthor,
    ExhibitAuthor,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::DomainAuthor => "domain-author",
            Role::ExhibitAuthor => "exhibit-author",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    // domain edits
    AddType,
    RenameType,
    RemoveType,
    AddField,
    ModifyField,
    RenameField,
    AttachNoun,
    UpsertVerb,
    UpsertAdjective,
    AddTemplate,
    RemoveTemplates,
    SetSchema,
    SetUserType,
    // exhibit edits
    AddEntity,
    UpdateEntity,
    RemoveEntity,
    AssertFact,
    RetractFact,
    SetFactValue,
    SetScores,
}

impl Op {
    pub fn is_exhibit_edit(self) -> bool {
        matches!(
            self,
            Op::AddEntity
                | Op::UpdateEntity
                | Op::RemoveEntity
                | Op::AssertFact
                | Op::RetractFact
                | Op::SetFactValue
                | Op::SetScores
        )
    }

    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }
}

/// One authoring operation as it travels over the wire.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edit {
    pub op: Op,
    pub target: String,
    #[serde(default)]
    pub payload: serde_json::Value,
}

impl Edit {
    pub fn new(op: Op, target: &str, payload: serde_json::Value) -> Self {
        Edit {
            op,
            target: target.to_string(),
            payload,
        }
    }
}

/// Exhibit authors may only touch entities and facts.
pub fn role_check(role: Role, op: Op) -> Result<()> {
    if role == Role::DomainAuthor || op.is_exhibit_edit() {
        Ok(())
    } else {
        Err(Error::PermissionDenied {
            role: role.as_str().to_string(),
            op: op.name(),
        })
    }
}

#[derive(Deserialize)]
struct ParentPayload {
    parent: String,
}

#[derive(Deserialize)]
struct RenamePayload {
    to: String,
}

/// Noun entry without the sense, which comes from the edit.
#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct NounSpec {
    language: String,
    lemma: String,
    gender: String,
    paradigm_class: String,
    #[serde(default)]
    registers: Vec<crate::lexicon::Register>,
    #[serde(default)]
    forms: Option<BTreeMap<String, String>>,
    #[serde(default)]
    article_class: Option<String>,
}

#[derive(Deserialize)]
struct AttachNounPayload {
    sense: String,
    entries: Vec<NounSpec>,
}

#[derive(Deserialize)]
struct LanguagePayload {
    language: String,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct SchemaPayload {
    ordered_fields: Vec<String>,
}

#[derive(Deserialize)]
struct FactPayload {
    field: String,
    value: Value,
    #[serde(default)]
    scores: BTreeMap<String, FactScores>,
}

#[derive(Deserialize)]
struct ValuePayload {
    value: Value,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct ScoresPayload {
    user_type: String,
    #[serde(flatten)]
    scores: FactScores,
}

fn payload<T: serde::de::DeserializeOwned>(edit: &Edit) -> Result<T> {
    serde_json::from_value(edit.payload.clone())
        .map_err(|e| Error::BadEdit(format!("{} payload: {e}", edit.op.name())))
}

/// Like [`payload`], with `key` taken from the edit target.
fn payload_keyed<T: serde::de::DeserializeOwned>(edit: &Edit, key: &str) -> Result<T> {
    let mut value = edit.payload.clone();
    match &mut value {
        serde_json::Value::Object(map) => {
            map.insert(key.to_string(), serde_json::Value::String(edit.target.clone()));
        }
        _ => return Err(Error::BadEdit(format!("{} payload must be an object", edit.op.name()))),
    }
    serde_json::from_value(value).map_err(|e| Error::BadEdit(format!("{} payload: {e}", edit.op.name())))
}

/// What a committed edit produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Outcome {
    /// Warnings left after the commit.
    pub diagnostics: Vec<Diagnostic>,
    /// For noun attachments: every generated form, per language.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub forms: BTreeMap<String, BTreeMap<String, String>>,
    /// Id of an asserted fact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fact_id: Option<String>,
}

/// Structural validation, lexicon checks against the packs, and noun
/// alignment across enabled languages.
pub fn diagnostics(kb: &KnowledgeBase, packs: &PackSet) -> Vec<Diagnostic> {
    let mut out = kb.validate();
    out.extend(check_entries(&kb.lexicon, packs, &kb.languages));
    out.extend(check_alignment(&kb.lexicon, &kb.languages));
    out
}

/// Applies an edit to a copy of `kb`. The copy is returned only if it
/// has no error diagnostics; otherwise the edit is rejected.
pub fn apply_edit(kb: &KnowledgeBase, packs: &PackSet, edit: &Edit) -> Result<(KnowledgeBase, Outcome)> {
    let mut next = kb.clone();
    let mut outcome = Outcome {
        diagnostics: Vec::new(),
        forms: BTreeMap::new(),
        fact_id: None,
    };
    apply_in_place(&mut next, packs, edit, &mut outcome)
        .map_err(|e| Error::Rejected(vec![Diagnostic::from_error(edit_location(edit), &e)]))?;
    next.reindex();
    let diags = diagnostics(&next, packs);
    if has_errors(&diags) {
        return Err(Error::Rejected(diags.into_iter().filter(Diagnostic::is_error).collect()));
    }
    outcome.diagnostics = diags;
    Ok((next, outcome))
}

fn edit_location(edit: &Edit) -> String {
    format!("edit/{}/{}", edit.op.name(), edit.target)
}

fn apply_in_place(kb: &mut KnowledgeBase, packs: &PackSet, edit: &Edit, outcome: &mut Outcome) -> Result<()> {
    let target = edit.target.as_str();
    match edit.op {
        Op::AddType => {
            let p: ParentPayload = payload(edit)?;
            kb.define_type(target, &p.parent)
        }
        Op::RenameType => {
            let p: RenamePayload = payload(edit)?;
            rename_type(kb, target, &p.to)
        }
        Op::RemoveType => remove_type(kb, target),
        Op::AddField => {
            let field: FieldDef = payload(edit)?;
            kb.define_field(target, field)
        }
        Op::ModifyField => {
            let field: FieldDef = payload(edit)?;
            modify_field(kb, target, field)
        }
        Op::RenameField => {
            let p: RenamePayload = payload(edit)?;
            rename_field(kb, target, &p.to)
        }
        Op::AttachNoun => {
            let p: AttachNounPayload = payload(edit)?;
            attach_noun(kb, packs, target, p, outcome)
        }
        Op::UpsertVerb => {
            let v: VerbEntry = payload_keyed(edit, "sense")?;
            let pack = packs.get(&v.language)?;
            outcome.forms.insert(v.language.clone(), generate_forms(&v.lemma, &v.paradigm_class, pack)?);
            kb.lexicon.upsert_verb(v);
            Ok(())
        }
        Op::UpsertAdjective => {
            let a: AdjectiveEntry = payload_keyed(edit, "sense")?;
            let pack = packs.get(&a.language)?;
            outcome.forms.insert(a.language.clone(), generate_forms(&a.lemma, &a.paradigm_class, pack)?);
            kb.lexicon.upsert_adjective(a);
            Ok(())
        }
        Op::AddTemplate => {
            let t: ClauseTemplate = payload_keyed(edit, "field")?;
            kb.field_owner_type(target).ok_or_else(|| Error::BadEdit(format!("unknown field `{target}`")))?;
            kb.microplans.push(t);
            Ok(())
        }
        Op::RemoveTemplates => {
            let p: LanguagePayload = payload(edit)?;
            kb.microplans.retain(|t| !(t.field == target && t.language == p.language));
            Ok(())
        }
        Op::SetSchema => {
            let p: SchemaPayload = payload(edit)?;
            kb.type_def(target)?;
            kb.schemas.retain(|s| s.entity_type != target);
            if !p.ordered_fields.is_empty() {
                kb.schemas.push(Schema {
                    entity_type: target.to_string(),
                    fields: p.ordered_fields,
                });
            }
            Ok(())
        }
        Op::SetUserType => {
            let u: UserTypeDef = payload_keyed(edit, "name")?;
            match kb.user_types.iter_mut().find(|x| x.name == target) {
                Some(x) => *x = u,
                None => kb.user_types.push(u),
            }
            Ok(())
        }
        Op::AddEntity => {
            let e: Entity = payload_keyed(edit, "id")?;
            kb.add_entity(e)
        }
        Op::UpdateEntity => {
            let e: Entity = payload_keyed(edit, "id")?;
            let old = kb.entity(target)?.clone();
            if old.type_name != e.type_name || old.generic != e.generic {
                return Err(Error::BadEdit("type and genericity of an entity cannot change".into()));
            }
            let i = kb.entities.iter().position(|x| x.id == target).expect("entity exists");
            kb.entities[i] = e;
            Ok(())
        }
        Op::RemoveEntity => remove_entity(kb, target),
        Op::AssertFact => {
            let p: FactPayload = payload(edit)?;
            outcome.fact_id = Some(kb.assert_fact(target, &p.field, p.value, p.scores)?);
            Ok(())
        }
        Op::RetractFact => {
            kb.fact(target)?;
            kb.facts.retain(|f| f.id != target);
            kb.reindex();
            Ok(())
        }
        Op::SetFactValue => {
            let p: ValuePayload = payload(edit)?;
            let mut fact = kb.fact(target)?.clone();
            kb.facts.retain(|f| f.id != target);
            kb.reindex();
            fact.value = p.value;
            kb.insert_fact(fact)
        }
        Op::SetScores => {
            let p: ScoresPayload = payload(edit)?;
            kb.user_type(&p.user_type)?;
            p.scores.check()?;
            if let Some(f) = kb.facts.iter_mut().find(|f| f.id == target) {
                f.scores.insert(p.user_type, p.scores);
            } else if let Some(c) = kb.canned.iter_mut().find(|c| c.id == target) {
                c.scores.insert(p.user_type, p.scores);
            } else {
                return Err(Error::UnknownFact(target.to_string()));
            }
            Ok(())
        }
    }
}

fn rename_type(kb: &mut KnowledgeBase, from: &str, to: &str) -> Result<()> {
    kb.type_def(from)?;
    if from == crate::kb::ROOT_TYPE {
        return Err(Error::BadEdit("the root type cannot be renamed".into()));
    }
    if !crate::kb::validate::is_identifier(to) {
        return Err(Error::InvalidIdentifier(to.to_string()));
    }
    if kb.has_type(to) {
        return Err(Error::DuplicateType(to.to_string()));
    }
    let swap = |s: &mut String| {
        if s == from {
            *s = to.to_string();
        }
    };
    for t in &mut kb.types {
        swap(&mut t.name);
        if let Some(p) = &mut t.parent {
            swap(p);
        }
        for f in &mut t.fields {
            if let FieldKind::Relation { filler } = &mut f.kind {
                swap(filler);
            }
        }
    }
    for e in &mut kb.entities {
        swap(&mut e.type_name);
    }
    for s in &mut kb.schemas {
        swap(&mut s.entity_type);
    }
    for c in &mut kb.canned {
        if let Attachment::Type(t) = &mut c.attached_to {
            swap(t);
        }
    }
    kb.reindex();
    Ok(())
}

/// Refused while anything still depends on the type.
fn remove_type(kb: &mut KnowledgeBase, name: &str) -> Result<()> {
    kb.type_def(name)?;
    if name == crate::kb::ROOT_TYPE {
        return Err(Error::BadEdit("the root type cannot be removed".into()));
    }
    if kb.types.iter().any(|t| t.parent.as_deref() == Some(name)) {
        return Err(Error::BadEdit(format!("`{name}` still has subtypes")));
    }
    if kb.entities.iter().any(|e| e.type_name == name) {
        return Err(Error::BadEdit(format!("`{name}` still has entities")));
    }
    let filled = kb.types.iter().flat_map(|t| &t.fields).any(|f| {
        matches!(&f.kind, FieldKind::Relation { filler } if filler == name)
    });
    if filled {
        return Err(Error::BadEdit(format!("`{name}` is the filler type of a field")));
    }
    let fields: Vec<String> = kb.type_def(name)?.fields.iter().map(|f| f.name.clone()).collect();
    kb.types.retain(|t| t.name != name);
    kb.schemas.retain(|s| s.entity_type != name);
    kb.canned.retain(|c| c.attached_to != Attachment::Type(name.to_string()));
    kb.microplans.retain(|t| !fields.contains(&t.field));
    kb.reindex();
    Ok(())
}

fn locate_field(kb: &KnowledgeBase, field: &str) -> Result<(usize, usize)> {
    kb.types
        .iter()
        .enumerate()
        .find_map(|(ti, t)| t.fields.iter().position(|f| f.name == field).map(|fi| (ti, fi)))
        .ok_or_else(|| Error::BadEdit(format!("unknown field `{field}`")))
}

/// Replaces a field definition. Existing facts are re-checked by the
/// validation that follows every edit.
fn modify_field(kb: &mut KnowledgeBase, name: &str, def: FieldDef) -> Result<()> {
    let (ti, fi) = locate_field(kb, name)?;
    crate::kb::check_field_def(kb, &def)?;
    if def.name != name {
        rename_field(kb, name, &def.name)?;
    }
    kb.types[ti].fields[fi] = def;
    kb.reindex();
    Ok(())
}

/// Renames a field everywhere: its definition, facts and their ids,
/// templates and schemas.
fn rename_field(kb: &mut KnowledgeBase, from: &str, to: &str) -> Result<()> {
    let (ti, fi) = locate_field(kb, from)?;
    if from == to {
        return Ok(());
    }
    if !crate::kb::validate::is_identifier(to) {
        return Err(Error::InvalidIdentifier(to.to_string()));
    }
    if to == crate::kb::TYPE_INTRO || to == crate::kb::STORIES {
        return Err(Error::ReservedFieldName(to.to_string()));
    }
    if let Some((t, _)) = kb.field_owner_type(to) {
        return Err(Error::FieldNameCollision {
            field: to.to_string(),
            existing_on: t.name.clone(),
        });
    }
    kb.types[ti].fields[fi].name = to.to_string();
    for f in &mut kb.facts {
        if f.field == from {
            f.field = to.to_string();
            let old_prefix = format!("{}.{from}", f.owner);
            if let Some(rest) = f.id.strip_prefix(&old_prefix) {
                f.id = format!("{}.{to}{rest}", f.owner);
            }
        }
    }
    for t in &mut kb.microplans {
        if t.field == from {
            t.field = to.to_string();
        }
    }
    for s in &mut kb.schemas {
        for f in &mut s.fields {
            if f == from {
                *f = to.to_string();
            }
        }
    }
    kb.reindex();
    Ok(())
}

fn attach_noun(
    kb: &mut KnowledgeBase,
    packs: &PackSet,
    type_name: &str,
    p: AttachNounPayload,
    outcome: &mut Outcome,
) -> Result<()> {
    if !crate::kb::validate::is_identifier(&p.sense) {
        return Err(Error::InvalidIdentifier(p.sense));
    }
    kb.type_def(type_name)?;
    for spec in p.entries {
        let pack = packs.get(&spec.language)?;
        let forms = match &spec.forms {
            Some(explicit) => explicit.clone(),
            None => generate_forms(&spec.lemma, &spec.paradigm_class, pack)?,
        };
        outcome.forms.insert(spec.language.clone(), forms);
        kb.lexicon.upsert_noun(NounEntry {
            sense: p.sense.clone(),
            language: spec.language,
            lemma: spec.lemma,
            gender: spec.gender,
            paradigm_class: spec.paradigm_class,
            registers: spec.registers,
            forms: spec.forms,
            article_class: spec.article_class,
        });
    }
    let def: &mut EntityTypeDef = kb
        .types
        .iter_mut()
        .find(|t| t.name == type_name)
        .expect("type exists");
    if !def.nouns.contains(&p.sense) {
        def.nouns.push(p.sense);
    }
    Ok(())
}

/// Removes an entity with its own facts and stories. Refused while other
/// facts point at it.
fn remove_entity(kb: &mut KnowledgeBase, id: &str) -> Result<()> {
    kb.entity(id)?;
    if let Some(f) = kb
        .facts
        .iter()
        .find(|f| f.owner != id && f.value == Value::entity(id))
    {
        return Err(Error::BadEdit(format!("`{id}` is still the value of `{}`", f.id)));
    }
    kb.entities.retain(|e| e.id != id);
    kb.facts.retain(|f| f.owner != id);
    kb.canned.retain(|c| c.attached_to != Attachment::Entity(id.to_string()));
    kb.reindex();
    Ok(())
}

/// Result of a preview: the text, or nothing when generation failed, plus
/// every diagnostic relevant to the language.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Preview {
    pub description: Option<Description>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PreviewRequest {
    pub entity_id: String,
    pub language: String,
    pub user_type: String,
    #[serde(default)]
    pub max_facts: Option<usize>,
    #[serde(default)]
    pub simulated_history: Vec<String>,
}

/// Runs the pipeline on a throwaway session. Never commits anything.
pub fn preview_description(generator: &Generator, request: &PreviewRequest) -> Preview {
    let mut diagnostics: Vec<Diagnostic> = check_alignment(&generator.kb.lexicon, &generator.kb.languages)
        .into_iter()
        .filter(|d| d.location.ends_with(&format!("/{}", request.language)) || d.message.contains(&format!("`{}`", request.language)))
        .collect();
    let description = match generator.preview(
        &request.entity_id,
        &request.language,
        &request.user_type,
        request.max_facts,
        &request.simulated_history,
    ) {
        Ok(d) => Some(d),
        Err(e) => {
            diagnostics.push(Diagnostic::from_error(format!("preview/{}", request.entity_id), &e));
            None
        }
    };
    Preview {
        description,
        diagnostics,
    }
}

/// A knowledge base under edit, with snapshot history for undo.
/// Snapshots are shared, so readers holding an older one are unaffected
/// by later commits.
#[derive(Clone, Debug)]
pub struct Workspace {
    current: Arc<KnowledgeBase>,
    undo: Vec<Arc<KnowledgeBase>>,
    packs: PackSet,
}

impl Workspace {
    pub fn new(kb: KnowledgeBase, packs: PackSet) -> Self {
        Workspace {
            current: Arc::new(kb),
            undo: Vec::new(),
            packs,
        }
    }

    pub fn snapshot(&self) -> Arc<KnowledgeBase> {
        Arc::clone(&self.current)
    }

    pub fn packs(&self) -> &PackSet {
        &self.packs
    }

    pub fn apply(&mut self, role: Role, edit: &Edit) -> Result<Outcome> {
        role_check(role, edit.op)?;
        let (next, outcome) = apply_edit(&self.current, &self.packs, edit)?;
        let previous = std::mem::replace(&mut self.current, Arc::new(next));
        self.undo.push(previous);
        Ok(outcome)
    }

    /// Rolls back the last committed edit. False when there is none.
    pub fn undo(&mut self) -> bool {
        match self.undo.pop() {
            Some(previous) => {
                self.current = previous;
                true
            }
            None => false,
        }
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        diagnostics(&self.current, &self.packs)
    }
}
