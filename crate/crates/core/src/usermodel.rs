//! User types and per-visitor session state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::{FactScores, KnowledgeBase};

pub use crate::lexicon::Register;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UserTypeDef {
    pub name: String,
    pub register: Register,
    pub default_max_facts: usize,
    /// Used for facts that carry no scores for this user type.
    pub default_scores: FactScores,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HistoryRecord {
    pub entity_id: String,
    pub turn: u64,
    pub facts: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionOverrides {
    pub max_facts: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionState {
    pub session_id: String,
    pub user_type: String,
    pub language: String,
    pub max_facts: usize,
    pub turn: u64,
    /// Only facts touched so far; the rest sit at their base value.
    pub assimilation: BTreeMap<String, f64>,
    pub history: Vec<HistoryRecord>,
    /// Entity last mentioned for each `gender.number` at the end of the
    /// previous description.
    pub discourse: BTreeMap<String, String>,
    /// Round-robin counters for template choice, per field.
    pub variation: BTreeMap<String, u64>,
}

impl SessionState {
    pub fn new(
        kb: &KnowledgeBase,
        session_id: &str,
        user_type: &str,
        language: &str,
        overrides: &SessionOverrides,
    ) -> Result<Self> {
        let def = kb.user_type(user_type)?;
        if !kb.language_enabled(language) {
            return Err(Error::LanguageNotEnabled(language.to_string()));
        }
        let max_facts = overrides.max_facts.unwrap_or(def.default_max_facts);
        if max_facts == 0 {
            return Err(Error::InvalidMaxFacts);
        }
        Ok(SessionState {
            session_id: session_id.to_string(),
            user_type: user_type.to_string(),
            language: language.to_string(),
            max_facts,
            turn: 0,
            assimilation: BTreeMap::new(),
            history: Vec::new(),
            discourse: BTreeMap::new(),
            variation: BTreeMap::new(),
        })
    }

    pub fn register(&self, kb: &KnowledgeBase) -> Result<Register> {
        Ok(kb.user_type(&self.user_type)?.register)
    }

    pub fn base_assimilation(&self, fact_id: &str, kb: &KnowledgeBase) -> Result<f64> {
        Ok(kb
            .resolve_fact(fact_id)?
            .scores_for(kb, &self.user_type)
            .base_assimilation)
    }

    pub fn assimilation_of(&self, fact_id: &str, kb: &KnowledgeBase) -> Result<f64> {
        let base = self.base_assimilation(fact_id, kb)?;
        Ok(self.assimilation.get(fact_id).copied().unwrap_or(base))
    }

    /// Records one description: every listed fact becomes fully
    /// assimilated, the turn advances and a history record is appended.
    pub fn mark_expressed(&mut self, entity_id: &str, fact_ids: &[String], kb: &KnowledgeBase) -> Result<()> {
        for id in fact_ids {
            kb.resolve_fact(id)?;
        }
        for id in fact_ids {
            self.assimilation.insert(id.clone(), 1.0);
        }
        self.turn += 1;
        self.history.push(HistoryRecord {
            entity_id: entity_id.to_string(),
            turn: self.turn,
            facts: fact_ids.to_vec(),
        });
        Ok(())
    }

    /// One turn of decay: `a <- base + (a - base)(1 - lambda)` for every
    /// touched fact. Facts no longer in the knowledge base are dropped.
    pub fn decay(&mut self, kb: &KnowledgeBase, lambda: f64) {
        if lambda == 0.0 {
            return;
        }
        let mut next = BTreeMap::new();
        for (id, a) in &self.assimilation {
            if let Ok(base) = self.base_assimilation(id, kb) {
                next.insert(id.clone(), base + (a - base) * (1.0 - lambda));
            }
        }
        self.assimilation = next;
    }

    /// Described entities with their turns, most recent first.
    pub fn previously_seen(&self) -> Vec<(&str, u64)> {
        self.history
            .iter()
            .rev()
            .map(|r| (r.entity_id.as_str(), r.turn))
            .collect()
    }

    pub fn has_described(&self, entity_id: &str) -> bool {
        self.history.iter().any(|r| r.entity_id == entity_id)
    }
}
