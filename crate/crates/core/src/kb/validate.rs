use std::collections::{BTreeMap, HashMap, HashSet};

use super::{
    check_field_def, check_value, Attachment, FieldDef, KnowledgeBase, Value, ROOT_TYPE, STORIES,
    TYPE_INTRO,
};
use crate::diag::Diagnostic;

/// Lowercase ASCII letters and digits in hyphen-separated runs.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.split('-').all(|part| {
            !part.is_empty()
                && part
                    .bytes()
                    .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
        })
}

pub(super) fn validate(kb: &KnowledgeBase) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    types(kb, &mut out);
    entities(kb, &mut out);
    facts(kb, &mut out);
    canned(kb, &mut out);
    schemas(kb, &mut out);
    user_types(kb, &mut out);
    microplans(kb, &mut out);
    nouns(kb, &mut out);
    out
}

fn types(kb: &KnowledgeBase, out: &mut Vec<Diagnostic>) {
    let mut names = HashSet::new();
    let mut has_root = false;
    for t in &kb.types {
        let loc = format!("types/{}", t.name);
        if !is_identifier(&t.name) {
            out.push(Diagnostic::error(&loc, "name is not a valid identifier"));
        }
        if !names.insert(t.name.as_str()) {
            out.push(Diagnostic::error(&loc, "type declared more than once"));
        }
        match &t.parent {
            None if t.name == ROOT_TYPE => has_root = true,
            None => out.push(Diagnostic::error(&loc, "only the root type may lack a parent")),
            Some(_) if t.name == ROOT_TYPE => {
                out.push(Diagnostic::error(&loc, "the root type cannot have a parent"))
            }
            Some(p) if !kb.has_type(p) => {
                out.push(Diagnostic::error(&loc, format!("unknown parent `{p}`")))
            }
            Some(_) => {}
        }
    }
    if !has_root {
        out.push(Diagnostic::error("types", format!("root type `{ROOT_TYPE}` is missing")));
    }

    // every type must reach the root without revisiting a type
    for t in &kb.types {
        let mut seen = HashSet::new();
        let mut current = Some(t);
        while let Some(c) = current {
            if !seen.insert(c.name.as_str()) {
                out.push(Diagnostic::error(
                    format!("types/{}", t.name),
                    "type hierarchy contains a cycle",
                ));
                break;
            }
            current = c.parent.as_ref().and_then(|p| kb.type_def(p).ok());
        }
    }

    let mut introduced: HashMap<&str, &str> = HashMap::new();
    for t in &kb.types {
        for f in &t.fields {
            let loc = format!("types/{}/fields/{}", t.name, f.name);
            if !is_identifier(&f.name) {
                out.push(Diagnostic::error(&loc, "name is not a valid identifier"));
            }
            if f.name == TYPE_INTRO || f.name == STORIES {
                out.push(Diagnostic::error(&loc, "reserved field name"));
            }
            if let Err(e) = check_field_def(kb, f) {
                out.push(Diagnostic::from_error(&loc, &e));
            }
            if let Some(other) = introduced.insert(&f.name, &t.name) {
                // same name on two types is only a problem along one chain
                let related = kb.is_subtype(&t.name, other).unwrap_or(false)
                    || kb.is_subtype(other, &t.name).unwrap_or(false);
                if related || other == t.name {
                    out.push(Diagnostic::error(
                        &loc,
                        format!("field name collides with the field on `{other}`"),
                    ));
                }
            }
        }
    }
}

fn entities(kb: &KnowledgeBase, out: &mut Vec<Diagnostic>) {
    let mut ids = HashSet::new();
    let mut generics: HashMap<&str, &str> = HashMap::new();
    for e in &kb.entities {
        let loc = format!("entities/{}", e.id);
        if !is_identifier(&e.id) {
            out.push(Diagnostic::error(&loc, "id is not a valid identifier"));
        }
        if !ids.insert(e.id.as_str()) {
            out.push(Diagnostic::error(&loc, "entity declared more than once"));
        }
        if !kb.has_type(&e.type_name) {
            out.push(Diagnostic::error(&loc, format!("unknown type `{}`", e.type_name)));
        }
        if e.generic {
            if let Some(other) = generics.insert(&e.type_name, &e.id) {
                out.push(Diagnostic::error(
                    &loc,
                    format!("type `{}` already has generic entity `{other}`", e.type_name),
                ));
            }
        }
        for lang in e.name.keys() {
            if !kb.language_enabled(lang) {
                out.push(Diagnostic::warning(
                    &loc,
                    format!("proper name given for disabled language `{lang}`"),
                ));
            }
        }
    }
}

fn facts(kb: &KnowledgeBase, out: &mut Vec<Diagnostic>) {
    let mut ids = HashSet::new();
    let mut filled: BTreeMap<(&str, &str), Vec<&Value>> = BTreeMap::new();
    for f in &kb.facts {
        let loc = format!("facts/{}", f.id);
        if !ids.insert(f.id.as_str()) {
            out.push(Diagnostic::error(&loc, "fact id used more than once"));
        }
        let owner = match kb.entity(&f.owner) {
            Ok(o) => o,
            Err(e) => {
                out.push(Diagnostic::from_error(&loc, &e));
                continue;
            }
        };
        let Some(def) = kb.field_on(&owner.type_name, &f.field) else {
            out.push(Diagnostic::error(
                &loc,
                format!("`{}` has no field `{}`", f.owner, f.field),
            ));
            continue;
        };
        if let Err(e) = check_value(kb, def, &f.value) {
            out.push(Diagnostic::from_error(&loc, &e));
        }
        let values = filled.entry((&f.owner, &f.field)).or_default();
        if !def.set_valued && !values.is_empty() {
            out.push(Diagnostic::error(&loc, "second value for a single-valued field"));
        }
        if values.contains(&&f.value) {
            out.push(Diagnostic::error(&loc, "duplicate value for a set-valued field"));
        }
        values.push(&f.value);
        if owner.generic && def.set_valued {
            out.push(Diagnostic::error(&loc, "generic entities may not fill set-valued fields"));
        }
        for (user_type, scores) in &f.scores {
            if kb.user_type(user_type).is_err() {
                out.push(Diagnostic::error(&loc, format!("scores for unknown user type `{user_type}`")));
            }
            if let Err(e) = scores.check() {
                out.push(Diagnostic::from_error(&loc, &e));
            }
        }
        if let Value::Text(text) = &f.value {
            text_coverage(kb, &loc, def, text, out);
        }
    }
}

fn text_coverage(
    kb: &KnowledgeBase,
    loc: &str,
    def: &FieldDef,
    text: &BTreeMap<String, String>,
    out: &mut Vec<Diagnostic>,
) {
    let what = if def.canned_text { "canned text" } else { "text" };
    for lang in &kb.languages {
        match text.get(lang) {
            None => out.push(Diagnostic::warning(loc, format!("{what} missing for language `{lang}`"))),
            Some(s) if s.trim().is_empty() => {
                out.push(Diagnostic::warning(loc, format!("{what} is empty for language `{lang}`")))
            }
            Some(_) => {}
        }
    }
}

fn canned(kb: &KnowledgeBase, out: &mut Vec<Diagnostic>) {
    let mut ids = HashSet::new();
    for c in &kb.canned {
        let loc = format!("canned/{}", c.id);
        if !ids.insert(c.id.as_str()) || kb.fact(&c.id).is_ok() {
            out.push(Diagnostic::error(&loc, "id already in use"));
        }
        if c.text.is_empty() {
            out.push(Diagnostic::error(&loc, "story has no text in any language"));
        }
        match &c.attached_to {
            Attachment::Entity(e) if kb.entity(e).is_err() => {
                out.push(Diagnostic::error(&loc, format!("attached to unknown entity `{e}`")))
            }
            Attachment::Type(t) if !kb.has_type(t) => {
                out.push(Diagnostic::error(&loc, format!("attached to unknown type `{t}`")))
            }
            _ => {}
        }
        for lang in &kb.languages {
            if !c.text.get(lang).is_some_and(|s| !s.trim().is_empty()) {
                out.push(Diagnostic::warning(&loc, format!("story text missing for language `{lang}`")));
            }
        }
        for (user_type, scores) in &c.scores {
            if kb.user_type(user_type).is_err() {
                out.push(Diagnostic::error(&loc, format!("scores for unknown user type `{user_type}`")));
            }
            if let Err(e) = scores.check() {
                out.push(Diagnostic::from_error(&loc, &e));
            }
        }
    }
}

fn schemas(kb: &KnowledgeBase, out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for s in &kb.schemas {
        let loc = format!("schemas/{}", s.entity_type);
        if !seen.insert(s.entity_type.as_str()) {
            out.push(Diagnostic::error(&loc, "more than one schema for this type"));
        }
        if !kb.has_type(&s.entity_type) {
            out.push(Diagnostic::error(&loc, "schema for unknown type"));
            continue;
        }
        if s.fields.iter().filter(|f| *f == TYPE_INTRO).count() > 1 {
            out.push(Diagnostic::error(&loc, "`type-intro` listed more than once"));
        }
        for f in &s.fields {
            if f == TYPE_INTRO || f == STORIES {
                continue;
            }
            if kb.field_on(&s.entity_type, f).is_none() {
                out.push(Diagnostic::error(
                    &loc,
                    format!("field `{f}` is not available on `{}`", s.entity_type),
                ));
            }
        }
    }
}

fn user_types(kb: &KnowledgeBase, out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for u in &kb.user_types {
        let loc = format!("userTypes/{}", u.name);
        if !seen.insert(u.name.as_str()) {
            out.push(Diagnostic::error(&loc, "user type declared more than once"));
        }
        if u.default_max_facts == 0 {
            out.push(Diagnostic::error(&loc, "defaultMaxFacts must be at least 1"));
        }
        if let Err(e) = u.default_scores.check() {
            out.push(Diagnostic::from_error(&loc, &e));
        }
    }
}

fn microplans(kb: &KnowledgeBase, out: &mut Vec<Diagnostic>) {
    for (i, t) in kb.microplans.iter().enumerate() {
        let loc = format!("microplans/{i}:{}/{}", t.field, t.language);
        if kb.field_owner_type(&t.field).is_none() {
            out.push(Diagnostic::error(&loc, format!("unknown field `{}`", t.field)));
        }
        if !kb.language_enabled(&t.language) {
            out.push(Diagnostic::warning(&loc, format!("language `{}` is not enabled", t.language)));
        } else if kb.lexicon.verb(&t.verb, &t.language).is_none() {
            out.push(Diagnostic::error(
                &loc,
                format!("verb sense `{}` has no entry in `{}`", t.verb, t.language),
            ));
        }
    }
}

fn nouns(kb: &KnowledgeBase, out: &mut Vec<Diagnostic>) {
    for t in &kb.types {
        for sense in &t.nouns {
            if !kb.lexicon.nouns.iter().any(|n| &n.sense == sense) {
                out.push(Diagnostic::error(
                    format!("types/{}/nouns/{sense}", t.name),
                    format!("noun sense `{sense}` has no lexicon entry"),
                ));
            }
        }
    }
    for e in &kb.entities {
        if let Some(sense) = &e.noun {
            if !kb.lexicon.nouns.iter().any(|n| &n.sense == sense) {
                out.push(Diagnostic::error(
                    format!("entities/{}", e.id),
                    format!("noun sense `{sense}` has no lexicon entry"),
                ));
            }
        }
        if let Some(sense) = &e.adjective {
            if !kb.lexicon.adjectives.iter().any(|a| &a.sense == sense) {
                out.push(Diagnostic::error(
                    format!("entities/{}", e.id),
                    format!("adjective sense `{sense}` has no lexicon entry"),
                ));
            }
        }
    }
}
