//! Content selection and comparison discovery.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::config::SelectionConfig;
use crate::error::{Error, Result};
use crate::kb::{FactRef, FactScores, KnowledgeBase, Value};
use crate::planner::{schema_for, Schema};
use crate::usermodel::SessionState;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonCandidate {
    pub current_entity: String,
    pub previous_entity: String,
    pub shared_field: String,
    pub shared_value: Value,
    /// The chosen fact of the current entity the comparison accompanies.
    pub current_fact: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionResult {
    pub entity_id: String,
    /// Highest relevance first.
    pub chosen_facts: Vec<String>,
    pub comparison: Option<ComparisonCandidate>,
    pub exhausted: bool,
}

/// `((I + M) / 2) * (1 - A)`.
pub fn relevance(scores: FactScores, assimilation: f64) -> f64 {
    (scores.interest + scores.importance) / 2.0 * (1.0 - assimilation)
}

pub fn relevance_of(kb: &KnowledgeBase, session: &SessionState, fact_id: &str) -> Result<f64> {
    let fact = kb.resolve_fact(fact_id)?;
    let scores = fact.scores_for(kb, &session.user_type);
    Ok(relevance(scores, session.assimilation_of(fact_id, kb)?))
}

/// Everything that could be said about an entity: its type introduction,
/// its effective facts and the stories attached to it or its types.
pub fn candidates<'a>(kb: &'a KnowledgeBase, entity_id: &str) -> Result<Vec<FactRef<'a>>> {
    let entity = kb.entity(entity_id)?;
    let mut out = vec![FactRef::TypeIntro(entity)];
    out.extend(kb.effective_facts(entity_id)?.into_iter().map(FactRef::Stored));
    out.extend(kb.stories_for(entity_id)?.into_iter().map(FactRef::Story));
    Ok(out)
}

/// Position of a candidate's field in the schema. A missing type-intro
/// marker sorts first; other unlisted fields sort last.
pub(crate) fn schema_priority(schema: &Schema, field: &str, type_intro: bool) -> usize {
    match schema.fields.iter().position(|f| f == field) {
        Some(i) => i + 1,
        None if type_intro => 0,
        None => schema.fields.len() + 1,
    }
}

#[derive(Clone, Debug)]
pub struct Ranked {
    pub id: String,
    pub relevance: f64,
    pub priority: usize,
    pub type_intro: bool,
}

/// Candidates that survive the assimilation threshold, best first.
pub fn rank(
    kb: &KnowledgeBase,
    session: &SessionState,
    entity_id: &str,
    config: &SelectionConfig,
) -> Result<Vec<Ranked>> {
    let entity = kb.entity(entity_id)?;
    if entity.generic {
        return Err(Error::GenericEntityQueried(entity_id.to_string()));
    }
    let schema = schema_for(kb, &entity.type_name)?;
    let mut ranked = Vec::new();
    for c in candidates(kb, entity_id)? {
        let id = c.id();
        let a = session.assimilation_of(&id, kb)?;
        if a >= config.theta {
            continue;
        }
        ranked.push(Ranked {
            relevance: relevance(c.scores_for(kb, &session.user_type), a),
            priority: schema_priority(&schema, c.field(), c.is_type_intro()),
            type_intro: c.is_type_intro(),
            id,
        });
    }
    ranked.sort_by(compare);
    Ok(ranked)
}

fn compare(a: &Ranked, b: &Ranked) -> Ordering {
    b.type_intro
        .cmp(&a.type_intro)
        .then_with(|| b.relevance.total_cmp(&a.relevance))
        .then_with(|| a.priority.cmp(&b.priority))
        .then_with(|| a.id.cmp(&b.id))
}

pub fn select_facts(
    kb: &KnowledgeBase,
    session: &SessionState,
    entity_id: &str,
    config: &SelectionConfig,
) -> Result<SelectionResult> {
    let ranked = rank(kb, session, entity_id, config)?;
    let exhausted = ranked.is_empty();
    let chosen_facts: Vec<String> = ranked
        .into_iter()
        .take(session.max_facts)
        .map(|r| r.id)
        .collect();
    let comparison = find_comparison(kb, session, entity_id, &chosen_facts, config);
    Ok(SelectionResult {
        entity_id: entity_id.to_string(),
        chosen_facts,
        comparison,
        exhausted,
    })
}

/// The next batch for an entity already described in this session.
pub fn say_more(
    kb: &KnowledgeBase,
    session: &SessionState,
    entity_id: &str,
    config: &SelectionConfig,
) -> Result<SelectionResult> {
    kb.entity(entity_id)?;
    if !session.has_described(entity_id) {
        return Err(Error::EntityNotYetDescribed(entity_id.to_string()));
    }
    select_facts(kb, session, entity_id, config)
}

fn comparable(kb: &KnowledgeBase, field: &str, config: &SelectionConfig) -> bool {
    let is_relation = kb
        .field_owner_type(field)
        .is_some_and(|(_, def)| def.is_relation());
    is_relation
        && config
            .comparison_fields
            .as_ref()
            .is_none_or(|list| list.iter().any(|f| f == field))
}

/// Scans the session history from the most recent description back and
/// returns the first earlier entity that shares a (field, value) pair with
/// one of the chosen facts, trying chosen facts in rank order.
pub fn find_comparison(
    kb: &KnowledgeBase,
    session: &SessionState,
    entity_id: &str,
    chosen: &[String],
    config: &SelectionConfig,
) -> Option<ComparisonCandidate> {
    let chosen: Vec<_> = chosen
        .iter()
        .filter_map(|id| kb.fact(id).ok())
        .filter(|f| comparable(kb, &f.field, config))
        .collect();
    if chosen.is_empty() {
        return None;
    }
    let mut visited = HashSet::new();
    for (previous, _) in session.previously_seen() {
        if previous == entity_id || !visited.insert(previous) {
            continue;
        }
        let Ok(theirs) = kb.effective_facts(previous) else {
            continue;
        };
        for fact in &chosen {
            if theirs
                .iter()
                .any(|t| t.field == fact.field && t.value == fact.value)
            {
                return Some(ComparisonCandidate {
                    current_entity: entity_id.to_string(),
                    previous_entity: previous.to_string(),
                    shared_field: fact.field.clone(),
                    shared_value: fact.value.clone(),
                    current_fact: fact.id.clone(),
                });
            }
        }
    }
    None
}
