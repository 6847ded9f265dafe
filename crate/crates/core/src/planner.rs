//! Document planning: order chosen facts by schema and attach rhetorical
//! relations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::{FactRef, KnowledgeBase, Value, STORIES, TYPE_INTRO};
use crate::selection::{ComparisonCandidate, SelectionResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Schema {
    pub entity_type: String,
    #[serde(rename = "orderedFields")]
    pub fields: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    First,
    Elaboration,
    Contrast,
    ComparisonRestate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum PlanPayload {
    Fact { id: String },
    Comparison(ComparisonCandidate),
    Canned { id: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlanNode {
    pub payload: PlanPayload,
    pub relation: Relation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DocumentPlan {
    pub entity_id: String,
    pub nodes: Vec<PlanNode>,
}

impl DocumentPlan {
    /// Ids of fact and story nodes, in plan order.
    pub fn fact_ids(&self) -> Vec<String> {
        self.nodes
            .iter()
            .filter_map(|n| match &n.payload {
                PlanPayload::Fact { id } | PlanPayload::Canned { id } => Some(id.clone()),
                PlanPayload::Comparison(_) => None,
            })
            .collect()
    }
}

/// The schema attached to the type, else to its nearest ancestor, else
/// `[type-intro, every field in fieldsOf order, stories]`.
pub fn schema_for(kb: &KnowledgeBase, type_name: &str) -> Result<Schema> {
    for t in kb.ancestors(type_name)? {
        if let Some(s) = kb.schemas.iter().find(|s| s.entity_type == t.name) {
            return Ok(s.clone());
        }
    }
    let mut fields = vec![TYPE_INTRO.to_string()];
    fields.extend(kb.fields_of(type_name)?.iter().map(|f| f.name.clone()));
    fields.push(STORIES.to_string());
    Ok(Schema {
        entity_type: type_name.to_string(),
        fields,
    })
}

pub fn plan_document(kb: &KnowledgeBase, selection: &SelectionResult) -> Result<DocumentPlan> {
    if selection.exhausted || selection.chosen_facts.is_empty() {
        return Err(Error::EmptySelection(selection.entity_id.clone()));
    }
    let entity = kb.entity(&selection.entity_id)?;
    let schema = schema_for(kb, &entity.type_name)?;

    // unlisted fields keep the order in which relevance first reached them
    let mut unlisted: HashMap<&str, usize> = HashMap::new();
    let mut keyed = Vec::new();
    for (rank, id) in selection.chosen_facts.iter().enumerate() {
        let fact = kb.resolve_fact(id)?;
        let field = fact.field();
        let key = match schema.fields.iter().position(|f| f == field) {
            Some(i) => (0, i + 1),
            None if fact.is_type_intro() => (0, 0),
            None => {
                let next = unlisted.len();
                (1, *unlisted.entry(field).or_insert(next))
            }
        };
        keyed.push((key, rank, fact));
    }
    keyed.sort_by_key(|(key, rank, _)| (*key, *rank));

    let mut nodes: Vec<PlanNode> = Vec::new();
    let mut previous: Option<FactRef> = None;
    for (_, _, fact) in keyed {
        let relation = match previous {
            None => Relation::First,
            Some(p) if contrasts(&p, &fact) => Relation::Contrast,
            Some(_) => Relation::Elaboration,
        };
        let payload = match fact {
            FactRef::Story(c) => PlanPayload::Canned { id: c.id.clone() },
            other => PlanPayload::Fact { id: other.id() },
        };
        nodes.push(PlanNode { payload, relation });
        if let Some(c) = &selection.comparison {
            if fact.id() == c.current_fact {
                nodes.push(PlanNode {
                    payload: PlanPayload::Comparison(c.clone()),
                    relation: Relation::ComparisonRestate,
                });
            }
        }
        previous = Some(fact);
    }
    Ok(DocumentPlan {
        entity_id: selection.entity_id.clone(),
        nodes,
    })
}

fn value_of<'a>(f: &FactRef<'a>) -> Option<&'a Value> {
    match f {
        FactRef::Stored(f) => Some(&f.value),
        _ => None,
    }
}

fn contrasts(a: &FactRef, b: &FactRef) -> bool {
    match (a, b) {
        (FactRef::Stored(x), FactRef::Stored(y)) => {
            x.owner == y.owner && x.field == y.field && value_of(a) != value_of(b)
        }
        _ => false,
    }
}
