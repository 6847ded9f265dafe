//! The bundled demo collection: a vase, a kouros and a named statue, in
//! English and the inflected demo language.

use crate::kb::{bundle, Entity, Fact, KnowledgeBase};

/// Source of the demo bundle, as shipped.
pub const DEMO_BUNDLE: &str = include_str!("../data/demo.kb.json");

pub fn demo_kb() -> KnowledgeBase {
    bundle::from_json(DEMO_BUNDLE).expect("demo bundle parses")
}

/// The demo collection plus `copies` clones of each non-generic exhibit,
/// named `{id}-c{n}`, with their own facts duplicated. For benchmarks and
/// batch tests.
pub fn scaled_demo(copies: usize) -> KnowledgeBase {
    let mut kb = demo_kb();
    let exhibits: Vec<Entity> = kb
        .entities
        .iter()
        .filter(|e| !e.generic && kb.is_subtype(&e.type_name, "exhibit").unwrap_or(false))
        .cloned()
        .collect();
    for n in 0..copies {
        for e in &exhibits {
            let id = format!("{}-c{n}", e.id);
            let mut copy = e.clone();
            copy.id = id.clone();
            let own: Vec<Fact> = kb.facts_of(&e.id).cloned().collect();
            kb.add_entity(copy).expect("fresh id");
            for f in own {
                let suffix = &f.id[e.id.len()..];
                kb.facts.push(Fact {
                    id: format!("{id}{suffix}"),
                    owner: id.clone(),
                    ..f
                });
            }
        }
    }
    kb.reindex();
    kb
}

/// Ids of the exhibits a visitor can pick, in gallery order.
pub fn exhibit_ids(kb: &KnowledgeBase) -> Vec<String> {
    kb.entities
        .iter()
        .filter(|e| !e.generic && kb.is_subtype(&e.type_name, "exhibit").unwrap_or(false))
        .map(|e| e.id.clone())
        .collect()
}
