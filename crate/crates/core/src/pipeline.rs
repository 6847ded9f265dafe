//! The whole generation chain run against a visitor session.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::Result;
use crate::kb::KnowledgeBase;
use crate::lexicon::PackSet;
use crate::microplanner::{microplan, SentenceSpec};
use crate::planner::{plan_document, DocumentPlan};
use crate::realizer::{plain, realize_document, AgreementRecord, AnnotatedText};
use crate::selection::{self, SelectionResult};
use crate::usermodel::{SessionOverrides, SessionState};

/// What a describe or say-more call returns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Description {
    pub entity_id: String,
    #[serde(flatten)]
    pub text: AnnotatedText,
    /// Nothing new was left to say; `text` holds the pack's message.
    pub exhausted: bool,
}

/// Every intermediate form of one description.
#[derive(Clone, Debug)]
pub struct Trace {
    pub selection: SelectionResult,
    pub plan: Option<DocumentPlan>,
    pub sentences: Vec<SentenceSpec>,
    pub agreement: Vec<AgreementRecord>,
    pub description: Description,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub kb: KnowledgeBase,
    pub packs: PackSet,
    pub config: Config,
}

impl Generator {
    pub fn new(kb: KnowledgeBase, packs: PackSet, config: Config) -> Self {
        Generator { kb, packs, config }
    }

    /// The demo knowledge base with the built-in packs and default config.
    pub fn demo() -> Self {
        Generator::new(crate::demo::demo_kb(), PackSet::builtin(), Config::default())
    }

    pub fn session(&self, id: &str, user_type: &str, language: &str, overrides: &SessionOverrides) -> Result<SessionState> {
        self.packs.get(language)?;
        SessionState::new(&self.kb, id, user_type, language, overrides)
    }

    pub fn describe(&self, session: &mut SessionState, entity_id: &str) -> Result<Description> {
        Ok(self.describe_traced(session, entity_id)?.description)
    }

    pub fn say_more(&self, session: &mut SessionState, entity_id: &str) -> Result<Description> {
        Ok(self.say_more_traced(session, entity_id)?.description)
    }

    pub fn describe_traced(&self, session: &mut SessionState, entity_id: &str) -> Result<Trace> {
        self.run(session, entity_id, false)
    }

    pub fn say_more_traced(&self, session: &mut SessionState, entity_id: &str) -> Result<Trace> {
        self.run(session, entity_id, true)
    }

    /// Works on a copy of the session and commits it only when every stage
    /// succeeded, so a failed request leaves the session untouched.
    fn run(&self, session: &mut SessionState, entity_id: &str, more: bool) -> Result<Trace> {
        let kb = &self.kb;
        let pack = self.packs.get(&session.language)?;
        let mut next = session.clone();
        let lambda = self.config.selection.decay_lambda;
        if next.turn > 0 && lambda > 0.0 {
            next.decay(kb, lambda);
        }
        let sel = if more {
            selection::say_more(kb, &next, entity_id, &self.config.selection)?
        } else {
            selection::select_facts(kb, &next, entity_id, &self.config.selection)?
        };
        if sel.exhausted {
            let description = Description {
                entity_id: entity_id.to_string(),
                text: plain(&pack.function_words.exhausted_message),
                exhausted: true,
            };
            return Ok(Trace {
                selection: sel,
                plan: None,
                sentences: Vec::new(),
                agreement: Vec::new(),
                description,
            });
        }
        let plan = plan_document(kb, &sel)?;
        let language = next.language.clone();
        let register = next.register(kb)?;
        let sentences = microplan(&plan, &language, &mut next, kb, self.config.max_clauses_per_sentence)?;
        let facts = plan.fact_ids();
        let (text, agreement) = realize_document(&sentences, facts.clone(), pack, kb, register)?;
        next.mark_expressed(entity_id, &facts, kb)?;
        next.discourse.clear();
        for m in &text.mentions {
            if let Ok(key) = crate::microplanner::agreement_key(&m.entity_id, kb, &language, register) {
                next.discourse.insert(key, m.entity_id.clone());
            }
        }
        *session = next;
        Ok(Trace {
            selection: sel,
            plan: Some(plan),
            sentences,
            agreement,
            description: Description {
                entity_id: entity_id.to_string(),
                text,
                exhausted: false,
            },
        })
    }

    /// The description a fresh session would give after describing
    /// `history` in order. Nothing outside the throwaway session changes.
    pub fn preview(
        &self,
        entity_id: &str,
        language: &str,
        user_type: &str,
        max_facts: Option<usize>,
        history: &[String],
    ) -> Result<Description> {
        let mut session = self.session("preview", user_type, language, &SessionOverrides { max_facts })?;
        for seen in history {
            self.describe(&mut session, seen)?;
        }
        self.describe(&mut session, entity_id)
    }

    pub fn preview_phrase(&self, field: &str, language: &str) -> Result<String> {
        crate::realizer::preview_phrase(field, language, &self.kb, &self.packs)
    }
}
