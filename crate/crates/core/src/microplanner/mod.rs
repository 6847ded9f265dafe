//! From plan nodes to language-specific sentence specifications.

mod aggregate;
mod refer;

pub(crate) use refer::agreement_key;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::{FactRef, KnowledgeBase, Value};
use crate::lexicon::{register_matches, Register, Voice};
use crate::planner::{DocumentPlan, PlanPayload, Relation};
use crate::usermodel::SessionState;

pub use aggregate::aggregate;
pub use refer::choose_referring_expressions;

/// Verb sense used for the implicit type-introduction clause.
pub const COPULA: &str = "be";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "role")]
pub enum FillerRole {
    Object,
    Agent,
    Complement,
    Oblique { preposition: String },
    /// The filler replaces `{value}` in the template's adjunct tokens.
    Adjunct,
}

/// How one field is put into words in one language. The owner of the
/// fact is always the clause subject.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClauseTemplate {
    pub field: String,
    pub language: String,
    pub verb: String,
    pub voice: Voice,
    pub tense: String,
    pub filler: FillerRole,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub registers: Vec<Register>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adjuncts: Vec<String>,
}

pub const VALUE_SLOT: &str = "{value}";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferTarget {
    Entity(String),
    /// A literal attribute value, already in the target language.
    Literal(String),
    /// "a statue": the kind named by an entity type.
    Kind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NpMode {
    Name,
    Demonstrative,
    Pronoun,
    Definite,
    Indefinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Np {
    pub target: ReferTarget,
    /// Filled in by referring-expression choice.
    pub mode: Option<NpMode>,
}

impl Np {
    pub fn entity(id: &str) -> Self {
        Np {
            target: ReferTarget::Entity(id.to_string()),
            mode: None,
        }
    }

    pub fn entity_id(&self) -> Option<&str> {
        match &self.target {
            ReferTarget::Entity(id) => Some(id),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum AdjunctPart {
    Word { text: String },
    Filler { np: Np },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Predication {
    pub subject: Np,
    pub verb: String,
    pub voice: Voice,
    pub tense: String,
    pub object: Option<Np>,
    pub complement: Option<Np>,
    pub agent: Option<Np>,
    /// Preposition sense and its NP.
    pub oblique: Option<(String, Np)>,
    pub adjuncts: Vec<AdjunctPart>,
}

impl Predication {
    /// Every NP of the clause in linear reading order, subject first.
    pub fn nps_mut(&mut self) -> Vec<&mut Np> {
        let mut out = vec![&mut self.subject];
        out.extend(self.object.as_mut());
        out.extend(self.complement.as_mut());
        out.extend(self.agent.as_mut());
        out.extend(self.oblique.as_mut().map(|(_, np)| np));
        for a in &mut self.adjuncts {
            if let AdjunctPart::Filler { np } = a {
                out.push(np);
            }
        }
        out
    }

    pub fn nps(&self) -> Vec<&Np> {
        let mut out = vec![&self.subject];
        out.extend(self.object.as_ref());
        out.extend(self.complement.as_ref());
        out.extend(self.agent.as_ref());
        out.extend(self.oblique.as_ref().map(|(_, np)| np));
        for a in &self.adjuncts {
            if let AdjunctPart::Filler { np } = a {
                out.push(np);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
#[allow(clippy::large_enum_variant)]
pub enum ClauseBody {
    Generated(Predication),
    /// Author-written text, passed through untouched.
    Canned { text: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClauseSpec {
    /// The fact or story this clause expresses.
    pub source: String,
    pub relation: Relation,
    pub body: ClauseBody,
    /// Set when the clause restates a fact shared with an entity seen
    /// earlier; holds that entity's id.
    pub compared_with: Option<String>,
}

impl ClauseSpec {
    pub fn predication(&self) -> Option<&Predication> {
        match &self.body {
            ClauseBody::Generated(p) => Some(p),
            ClauseBody::Canned { .. } => None,
        }
    }

    pub fn subject_entity(&self) -> Option<&str> {
        self.predication().and_then(|p| p.subject.entity_id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubjectRealization {
    Full,
    Elided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SentenceSpec {
    pub clauses: Vec<ClauseSpec>,
    pub subjects: Vec<SubjectRealization>,
}

impl SentenceSpec {
    pub fn single(clause: ClauseSpec) -> Self {
        SentenceSpec {
            clauses: vec![clause],
            subjects: vec![SubjectRealization::Full],
        }
    }

    pub fn is_canned(&self) -> bool {
        self.clauses
            .iter()
            .all(|c| matches!(c.body, ClauseBody::Canned { .. }))
    }
}

fn literal(value: &Value, fact_id: &str, language: &str) -> Result<ReferTarget> {
    Ok(match value {
        Value::Entity(id) => ReferTarget::Entity(id.clone()),
        Value::Date(d) => ReferTarget::Literal(d.clone()),
        Value::Number(n) => ReferTarget::Literal(n.to_string()),
        Value::Text(t) => ReferTarget::Literal(
            t.get(language)
                .cloned()
                .ok_or_else(|| Error::CannedTextMissingLanguage {
                    fact: fact_id.to_string(),
                    language: language.to_string(),
                })?,
        ),
    })
}

/// Templates for a field in a language that suit the register, in
/// declaration order.
pub fn eligible_templates<'a>(
    kb: &'a KnowledgeBase,
    field: &str,
    language: &str,
    register: Register,
) -> Vec<&'a ClauseTemplate> {
    kb.microplans
        .iter()
        .filter(|t| t.field == field && t.language == language && register_matches(&t.registers, register))
        .collect()
}

/// Builds the predication for a stored fact from a given template, with
/// `subject` (the described entity) as subject.
pub fn apply_template(
    template: &ClauseTemplate,
    subject: &str,
    fact_id: &str,
    value: &Value,
    language: &str,
) -> Result<Predication> {
    let filler = Np {
        target: literal(value, fact_id, language)?,
        mode: None,
    };
    let mut p = Predication {
        subject: Np::entity(subject),
        verb: template.verb.clone(),
        voice: template.voice,
        tense: template.tense.clone(),
        object: None,
        complement: None,
        agent: None,
        oblique: None,
        adjuncts: Vec::new(),
    };
    let mut filler = Some(filler);
    match &template.filler {
        FillerRole::Object => p.object = filler.take(),
        FillerRole::Agent => p.agent = filler.take(),
        FillerRole::Complement => p.complement = filler.take(),
        FillerRole::Oblique { preposition } => p.oblique = filler.take().map(|np| (preposition.clone(), np)),
        FillerRole::Adjunct => {}
    }
    for word in &template.adjuncts {
        if word == VALUE_SLOT {
            if let Some(np) = filler.take() {
                p.adjuncts.push(AdjunctPart::Filler { np });
            }
        } else {
            p.adjuncts.push(AdjunctPart::Word { text: word.clone() });
        }
    }
    Ok(p)
}

/// Lexicalizes one fact or story node. Returns `None` for canned values
/// that are empty in the language, which are skipped.
pub fn lexicalize(
    node_payload: &PlanPayload,
    relation: Relation,
    focal: &str,
    language: &str,
    session: &mut SessionState,
    kb: &KnowledgeBase,
) -> Result<Option<ClauseSpec>> {
    let id = match node_payload {
        PlanPayload::Fact { id } | PlanPayload::Canned { id } => id,
        PlanPayload::Comparison(_) => return Ok(None),
    };
    let canned = |text: Option<&String>| -> Result<Option<ClauseSpec>> {
        let text = text.ok_or_else(|| Error::CannedTextMissingLanguage {
            fact: id.clone(),
            language: language.to_string(),
        })?;
        if text.trim().is_empty() {
            return Ok(None);
        }
        Ok(Some(ClauseSpec {
            source: id.clone(),
            relation,
            body: ClauseBody::Canned { text: text.clone() },
            compared_with: None,
        }))
    };
    match kb.resolve_fact(id)? {
        FactRef::TypeIntro(entity) => Ok(Some(ClauseSpec {
            source: id.clone(),
            relation,
            body: ClauseBody::Generated(Predication {
                subject: Np::entity(focal),
                verb: COPULA.to_string(),
                voice: Voice::Active,
                tense: "present".to_string(),
                object: None,
                complement: Some(Np {
                    target: ReferTarget::Kind(entity.type_name.clone()),
                    mode: None,
                }),
                agent: None,
                oblique: None,
                adjuncts: Vec::new(),
            }),
            compared_with: None,
        })),
        FactRef::Story(story) => canned(story.text.get(language)),
        FactRef::Stored(fact) => {
            let owner = kb.entity(&fact.owner)?;
            let def = kb
                .field_on(&owner.type_name, &fact.field)
                .ok_or_else(|| Error::UnknownField {
                    entity: fact.owner.clone(),
                    field: fact.field.clone(),
                })?;
            if def.canned_text {
                return match &fact.value {
                    Value::Text(t) => canned(t.get(language)),
                    _ => Err(Error::TypeMismatch {
                        field: fact.field.clone(),
                        expected: "canned text".into(),
                        found: "another kind of value".into(),
                    }),
                };
            }
            let register = session.register(kb)?;
            let templates = eligible_templates(kb, &fact.field, language, register);
            if templates.is_empty() {
                return Err(Error::NoTemplateForField {
                    field: fact.field.clone(),
                    language: language.to_string(),
                });
            }
            let counter = session.variation.entry(fact.field.clone()).or_insert(0);
            let template = templates[(*counter % templates.len() as u64) as usize];
            *counter += 1;
            let p = apply_template(template, focal, &fact.id, &fact.value, language)?;
            Ok(Some(ClauseSpec {
                source: id.clone(),
                relation,
                body: ClauseBody::Generated(p),
                compared_with: None,
            }))
        }
    }
}

/// Lexicalizes a whole plan in order. A comparison node is folded into
/// the clause of the fact it restates, so the shared fact is said once,
/// inside the comparison sentence.
pub fn lexicalize_plan(
    plan: &DocumentPlan,
    language: &str,
    session: &mut SessionState,
    kb: &KnowledgeBase,
) -> Result<Vec<ClauseSpec>> {
    let mut clauses: Vec<ClauseSpec> = Vec::new();
    for node in &plan.nodes {
        if let PlanPayload::Comparison(c) = &node.payload {
            match clauses.last_mut() {
                Some(last) if last.source == c.current_fact && last.predication().is_some() => {
                    last.compared_with = Some(c.previous_entity.clone());
                }
                _ => {
                    // the restated fact was not lexicalized as a clause
                    // (should not happen for relation fields); say it here
                    let fact = kb.fact(&c.current_fact)?;
                    let register = session.register(kb)?;
                    let template = eligible_templates(kb, &fact.field, language, register)
                        .first()
                        .copied()
                        .ok_or_else(|| Error::NoTemplateForField {
                            field: fact.field.clone(),
                            language: language.to_string(),
                        })?;
                    let p = apply_template(template, &plan.entity_id, &fact.id, &fact.value, language)?;
                    clauses.push(ClauseSpec {
                        source: fact.id.clone(),
                        relation: Relation::ComparisonRestate,
                        body: ClauseBody::Generated(p),
                        compared_with: Some(c.previous_entity.clone()),
                    });
                }
            }
            continue;
        }
        if let Some(clause) = lexicalize(&node.payload, node.relation, &plan.entity_id, language, session, kb)? {
            clauses.push(clause);
        }
    }
    absorb_type_intro(&mut clauses, &plan.entity_id, language, kb)?;
    Ok(clauses)
}

/// An unnamed exhibit is introduced by its demonstrative ("this vase"),
/// which already tells the visitor what it is. When another clause will
/// carry that demonstrative, the explicit "is a vessel" clause is dropped.
fn absorb_type_intro(clauses: &mut Vec<ClauseSpec>, focal: &str, language: &str, kb: &KnowledgeBase) -> Result<()> {
    let entity = kb.entity(focal)?;
    if entity.name.contains_key(language) {
        return Ok(());
    }
    let Some(at) = clauses.iter().position(|c| {
        c.predication()
            .is_some_and(|p| matches!(p.complement, Some(Np { target: ReferTarget::Kind(_), .. })))
            && c.source.ends_with(crate::kb::TYPE_INTRO)
    }) else {
        return Ok(());
    };
    let later_subject = clauses[at + 1..]
        .iter()
        .any(|c| c.subject_entity() == Some(focal));
    if later_subject {
        let removed = clauses.remove(at);
        if let Some(next) = clauses.get_mut(at) {
            if removed.relation == Relation::First {
                next.relation = Relation::First;
            }
        }
    }
    Ok(())
}

/// The full micro-planning step: lexicalize, aggregate, choose referring
/// expressions.
pub fn microplan(
    plan: &DocumentPlan,
    language: &str,
    session: &mut SessionState,
    kb: &KnowledgeBase,
    max_clauses_per_sentence: usize,
) -> Result<Vec<SentenceSpec>> {
    let clauses = lexicalize_plan(plan, language, session, kb)?;
    let mut sentences = aggregate(clauses, max_clauses_per_sentence);
    let register = session.register(kb)?;
    choose_referring_expressions(&mut sentences, &plan.entity_id, kb, language, register)?;
    Ok(sentences)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SelectionConfig;
    use crate::demo::demo_kb;
    use crate::planner::plan_document;
    use crate::selection::select_facts;
    use crate::usermodel::SessionOverrides;

    fn session(kb: &KnowledgeBase, user_type: &str) -> SessionState {
        SessionState::new(kb, "s", user_type, "en", &SessionOverrides { max_facts: Some(10) }).unwrap()
    }

    fn fact_node(id: &str) -> PlanPayload {
        PlanPayload::Fact { id: id.into() }
    }

    #[test]
    fn sculpted_by_per_register() {
        let kb = demo_kb();
        let mut expert = session(&kb, "expert");
        let c = lexicalize(&fact_node("statue1.sculpted-by"), Relation::First, "statue1", "en", &mut expert, &kb)
            .unwrap()
            .unwrap();
        let p = c.predication().unwrap();
        assert_eq!(p.verb, "sculpt");
        assert_eq!(p.voice, Voice::Passive);
        assert_eq!(p.tense, "past");
        assert_eq!(p.subject.entity_id(), Some("statue1"));
        assert_eq!(p.agent.as_ref().unwrap().entity_id(), Some("polyklitus"));

        let mut child = session(&kb, "child");
        let c = lexicalize(&fact_node("statue1.sculpted-by"), Relation::First, "statue1", "en", &mut child, &kb)
            .unwrap()
            .unwrap();
        assert_eq!(c.predication().unwrap().verb, "create");
    }

    #[test]
    fn round_robin_over_eligible_templates() {
        let mut kb = demo_kb();
        let mut second = kb
            .microplans
            .iter()
            .find(|t| t.field == "excavated-at" && t.language == "en")
            .unwrap()
            .clone();
        second.verb = "discover".into();
        kb.microplans.push(second);
        kb.lexicon.upsert_verb(crate::lexicon::VerbEntry {
            sense: "discover".into(),
            language: "en".into(),
            lemma: "discover".into(),
            paradigm_class: "regular-verb".into(),
            registers: vec![],
            forms: None,
        });
        let mut s = session(&kb, "adult");
        let verbs: Vec<String> = (0..4)
            .map(|_| {
                lexicalize(&fact_node("vase1.excavated-at"), Relation::First, "vase1", "en", &mut s, &kb)
                    .unwrap()
                    .unwrap()
                    .predication()
                    .unwrap()
                    .verb
                    .clone()
            })
            .collect();
        assert_eq!(verbs, ["find", "discover", "find", "discover"]);
    }

    #[test]
    fn missing_template_and_canned_language() {
        let mut kb = demo_kb();
        kb.microplans.retain(|t| !(t.field == "excavated-at" && t.language == "en"));
        let mut s = session(&kb, "adult");
        assert!(matches!(
            lexicalize(&fact_node("vase1.excavated-at"), Relation::First, "vase1", "en", &mut s, &kb),
            Err(Error::NoTemplateForField { .. })
        ));
        let c = lexicalize(&fact_node("vase1.exhibit-depicts"), Relation::First, "vase1", "en", &mut s, &kb)
            .unwrap()
            .unwrap();
        assert!(matches!(&c.body, ClauseBody::Canned { text } if text.starts_with("It is decorated with a wedding scene:")));
        assert!(matches!(
            lexicalize(&fact_node("vase1.exhibit-depicts"), Relation::First, "vase1", "fr", &mut s, &kb),
            Err(Error::CannedTextMissingLanguage { .. })
        ));
    }

    #[test]
    fn empty_canned_value_is_skipped() {
        let mut kb = demo_kb();
        let f = kb.facts.iter_mut().find(|f| f.id == "vase1.exhibit-purpose").unwrap();
        f.value = Value::text(&[("en", ""), ("demo", "")]);
        kb.reindex();
        let mut s = session(&kb, "adult");
        assert_eq!(
            lexicalize(&fact_node("vase1.exhibit-purpose"), Relation::First, "vase1", "en", &mut s, &kb).unwrap(),
            None
        );
    }

    #[test]
    fn unnamed_focal_absorbs_type_intro() {
        let kb = demo_kb();
        let mut s = session(&kb, "adult");
        let sel = select_facts(&kb, &s, "vase1", &SelectionConfig::default()).unwrap();
        let plan = plan_document(&kb, &sel).unwrap();
        let clauses = lexicalize_plan(&plan, "en", &mut s, &kb).unwrap();
        assert_eq!(clauses[0].source, "vase1.creation-time");
        assert_eq!(clauses[0].relation, Relation::First);
        assert_eq!(clauses.len(), plan.nodes.len() - 1);

        // a named focal keeps it
        let sel = select_facts(&kb, &s, "statue1", &SelectionConfig::default()).unwrap();
        let plan = plan_document(&kb, &sel).unwrap();
        let clauses = lexicalize_plan(&plan, "en", &mut s, &kb).unwrap();
        assert_eq!(clauses[0].source, "statue1.type-intro");
    }

    #[test]
    fn comparison_folds_into_its_fact() {
        let kb = demo_kb();
        let mut s = session(&kb, "adult");
        s.mark_expressed("vase1", &[], &kb).unwrap();
        let sel = select_facts(&kb, &s, "kouros1", &SelectionConfig::default()).unwrap();
        let plan = plan_document(&kb, &sel).unwrap();
        let clauses = lexicalize_plan(&plan, "en", &mut s, &kb).unwrap();
        let compared: Vec<_> = clauses.iter().filter(|c| c.compared_with.is_some()).collect();
        assert_eq!(compared.len(), 1);
        assert_eq!(compared[0].source, "generic-kouros.creation-period");
        assert_eq!(compared[0].compared_with.as_deref(), Some("vase1"));
    }
}
