//! Surface realization: linearize, inflect, agree, and assemble annotated
//! text with entity mention spans.

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::lexicon::{
    inflect_adjective, inflect_noun, inflect_verb, lookup_with_class, noun_for_entity, noun_for_type,
    AdjectivePosition, Constituent, LanguagePack, NounEntry, Register, VerbFeatures,
};
use crate::microplanner::{
    AdjunctPart, ClauseBody, ClauseSpec, Np, NpMode, Predication, ReferTarget, SentenceSpec,
    SubjectRealization,
};
use crate::planner::Relation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Mention {
    pub start: usize,
    pub end: usize,
    pub entity_id: String,
}

/// Generated text with sentence and mention offsets in code points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotatedText {
    pub text: String,
    pub sentences: Vec<(usize, usize)>,
    pub mentions: Vec<Mention>,
    pub facts_expressed: Vec<String>,
}

impl AnnotatedText {
    /// The text covered by a code-point span.
    pub fn slice(&self, start: usize, end: usize) -> String {
        self.text.chars().skip(start).take(end - start).collect()
    }

    pub fn sentence_texts(&self) -> Vec<String> {
        self.sentences.iter().map(|&(s, e)| self.slice(s, e)).collect()
    }
}

/// Subject and verb features of one realized finite verb, kept so that
/// agreement can be re-checked from outside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AgreementRecord {
    pub language: String,
    pub verb_sense: String,
    pub subject: Option<String>,
    pub subject_person: String,
    pub subject_number: String,
    pub subject_gender: String,
    pub features: VerbFeatures,
    pub forms: Vec<String>,
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    mention: Option<usize>,
}

struct Builder<'a> {
    kb: &'a KnowledgeBase,
    pack: &'a LanguagePack,
    register: Register,
    tokens: Vec<Token>,
    /// (entity id) per mention group, indexed by `Token::mention`.
    groups: Vec<String>,
    agreement: Vec<AgreementRecord>,
}

struct Agreement {
    person: String,
    number: String,
    gender: String,
}

impl<'a> Builder<'a> {
    fn new(kb: &'a KnowledgeBase, pack: &'a LanguagePack, register: Register) -> Self {
        Builder {
            kb,
            pack,
            register,
            tokens: Vec::new(),
            groups: Vec::new(),
            agreement: Vec::new(),
        }
    }

    fn words(&mut self, text: &str, mention: Option<usize>) {
        for w in text.split_whitespace() {
            self.tokens.push(Token {
                text: w.to_string(),
                mention,
            });
        }
    }

    fn group(&mut self, entity: &str) -> usize {
        self.groups.push(entity.to_string());
        self.groups.len() - 1
    }

    fn language(&self) -> &str {
        &self.pack.code
    }

    fn entity_noun(&self, id: &str) -> Result<&'a NounEntry> {
        let e = self.kb.entity(id)?;
        noun_for_entity(e, &self.pack.code, self.register, self.kb)
    }

    fn agreement_of(&self, np: &Np) -> Result<Agreement> {
        let gender = match &np.target {
            ReferTarget::Entity(id) => self.entity_noun(id)?.gender.clone(),
            ReferTarget::Kind(t) => noun_for_type(t, &self.pack.code, self.register, self.kb)?.gender.clone(),
            ReferTarget::Literal(_) => self
                .pack
                .genders
                .last()
                .cloned()
                .unwrap_or_default(),
        };
        Ok(Agreement {
            person: "3".into(),
            number: "sg".into(),
            gender,
        })
    }

    /// Determiner, adjective and noun agreeing in gender, number and case.
    fn noun_phrase(&mut self, determiner: &crate::lexicon::CellTable, noun: &NounEntry, adjective: Option<&str>, case: &str, mention: usize) -> Result<()> {
        let key = format!("{}.sg.{case}", noun.gender);
        let det = lookup_with_class(determiner, &key, noun.article_class.as_deref()).ok_or_else(|| {
            Error::FeatureOutOfGrid {
                feature: format!("determiner {key}"),
                language: self.pack.code.clone(),
            }
        })?;
        let det = det.to_string();
        self.words(&det, Some(mention));
        let adj = match adjective {
            Some(sense) => {
                let entry = self.kb.lexicon.require_adjective(sense, &self.pack.code)?;
                Some(inflect_adjective(entry, &noun.gender, "sg", case, self.pack)?)
            }
            None => None,
        };
        let form = inflect_noun(noun, "sg", case, self.pack)?;
        let before = self.pack.linearization.adjective_position == AdjectivePosition::Before;
        if before {
            if let Some(a) = &adj {
                self.words(a, Some(mention));
            }
        }
        self.words(&form, Some(mention));
        if !before {
            if let Some(a) = &adj {
                self.words(a, Some(mention));
            }
        }
        Ok(())
    }

    fn np(&mut self, np: &Np, case: &str) -> Result<()> {
        let fw = &self.pack.function_words;
        match &np.target {
            ReferTarget::Literal(text) => {
                self.words(text, None);
                Ok(())
            }
            ReferTarget::Kind(type_name) => {
                let noun = noun_for_type(type_name, &self.pack.code, self.register, self.kb)?;
                let key = format!("{}.sg.{case}", noun.gender);
                let article = lookup_with_class(&fw.indefinite_article, &key, noun.article_class.as_deref())
                    .unwrap_or("")
                    .to_string();
                self.words(&article, None);
                let form = inflect_noun(noun, "sg", case, self.pack)?;
                self.words(&form, None);
                Ok(())
            }
            ReferTarget::Entity(id) => {
                let entity = self.kb.entity(id)?;
                let g = self.group(id);
                let mode = np.mode.unwrap_or(NpMode::Definite);
                match mode {
                    NpMode::Name => match entity.name.get(self.language()) {
                        Some(name) => {
                            let name = name.clone();
                            self.words(&name, Some(g));
                            Ok(())
                        }
                        None => {
                            let noun = self.entity_noun(id)?;
                            let table = fw.definite_article.clone();
                            self.noun_phrase(&table, noun, entity.adjective.as_deref(), case, g)
                        }
                    },
                    NpMode::Pronoun => {
                        let noun = self.entity_noun(id)?;
                        let key = format!("{}.sg.{case}", noun.gender);
                        let pronoun = crate::lexicon::lookup(&fw.pronoun, &key)
                            .ok_or_else(|| Error::FeatureOutOfGrid {
                                feature: format!("pronoun {key}"),
                                language: self.pack.code.clone(),
                            })?
                            .to_string();
                        self.words(&pronoun, Some(g));
                        Ok(())
                    }
                    NpMode::Demonstrative | NpMode::Definite | NpMode::Indefinite => {
                        let noun = self.entity_noun(id)?;
                        let table = match mode {
                            NpMode::Demonstrative => fw.demonstrative.clone(),
                            NpMode::Indefinite => fw.indefinite_article.clone(),
                            _ => fw.definite_article.clone(),
                        };
                        self.noun_phrase(&table, noun, entity.adjective.as_deref(), case, g)
                    }
                }
            }
        }
    }

    fn predication(&mut self, p: &Predication, subject: SubjectRealization) -> Result<()> {
        let verb = self.kb.lexicon.require_verb(&p.verb, &self.pack.code)?;
        let agr = self.agreement_of(&p.subject)?;
        let features = VerbFeatures {
            tense: p.tense.clone(),
            voice: p.voice,
            person: agr.person.clone(),
            number: agr.number.clone(),
            gender: agr.gender.clone(),
        };
        let forms = inflect_verb(verb, &features, self.pack)?;
        self.agreement.push(AgreementRecord {
            language: self.pack.code.clone(),
            verb_sense: p.verb.clone(),
            subject: p.subject.entity_id().map(str::to_string),
            subject_person: agr.person,
            subject_number: agr.number,
            subject_gender: agr.gender,
            features,
            forms: forms.clone(),
        });

        let key = format!("{}.declarative", p.voice.as_str());
        let pattern = self
            .pack
            .linearization
            .patterns
            .get(&key)
            .cloned()
            .ok_or_else(|| Error::FeatureOutOfGrid {
                feature: key.clone(),
                language: self.pack.code.clone(),
            })?;
        let subject_case = self.pack.linearization.subject_case.clone();
        let object_case = self.pack.linearization.object_case.clone();
        let dropped = subject == SubjectRealization::Elided
            || (self.pack.linearization.pro_drop && p.subject.mode == Some(NpMode::Pronoun));
        for constituent in pattern {
            match constituent {
                Constituent::Subject if !dropped => self.np(&p.subject, &subject_case)?,
                Constituent::Subject => {}
                Constituent::Verb => {
                    for f in &forms {
                        self.words(f, None);
                    }
                }
                Constituent::Object => {
                    if let Some(np) = &p.object {
                        self.np(np, &object_case)?;
                    }
                }
                Constituent::Complement => {
                    if let Some(np) = &p.complement {
                        self.np(np, &subject_case)?;
                    }
                }
                Constituent::Agent => {
                    if let Some(np) = &p.agent {
                        let marker = self.pack.function_words.agent_marker.clone();
                        self.words(&marker, None);
                        self.np(np, &object_case)?;
                    }
                }
                Constituent::Oblique => {
                    if let Some((prep, np)) = &p.oblique {
                        let word = self.pack.preposition(prep).to_string();
                        self.words(&word, None);
                        self.np(np, &object_case)?;
                    }
                }
                Constituent::Adjuncts => {
                    for part in &p.adjuncts {
                        match part {
                            AdjunctPart::Word { text } => self.words(text, None),
                            AdjunctPart::Filler { np } => self.np(np, &object_case)?,
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// "Like the vessel you saw earlier," from the pack's comparison template.
    fn comparison_preface(&mut self, previous: &str) -> Result<()> {
        let template = self.pack.function_words.comparison_template.clone();
        let prefix = template
            .split("{current-subject}")
            .next()
            .unwrap_or_default()
            .to_string();
        let e = self.kb.entity(previous)?;
        let noun = noun_for_type(&e.type_name, &self.pack.code, self.register, self.kb)?;
        let g = self.group(previous);
        let case = self.pack.linearization.subject_case.clone();
        for word in prefix.split_whitespace() {
            match word {
                "{prev-noun}" => {
                    let form = inflect_noun(noun, "sg", &case, self.pack)?;
                    self.words(&form, Some(g));
                }
                "{prev-article}" => {
                    let key = format!("{}.sg.{case}", noun.gender);
                    let art = lookup_with_class(
                        &self.pack.function_words.definite_article,
                        &key,
                        noun.article_class.as_deref(),
                    )
                    .unwrap_or("")
                    .to_string();
                    self.words(&art, Some(g));
                }
                w => self.words(w, None),
            }
        }
        Ok(())
    }
}

/// Text and mention spans of one realized sentence, offsets relative to
/// the sentence start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceText {
    pub text: String,
    pub mentions: Vec<Mention>,
}

/// Applies contractions, spacing, capitalization, terminal punctuation
/// and NFC, and computes mention spans.
fn finish(tokens: Vec<Token>, groups: &[String], pack: &LanguagePack) -> SentenceText {
    let ortho = &pack.orthography;
    let mut fused: Vec<Token> = Vec::new();
    for tok in tokens.into_iter().filter(|t| !t.text.is_empty()) {
        if let Some(prev) = fused.last_mut() {
            let pair = format!("{} {}", prev.text, tok.text);
            if let Some(c) = ortho.contractions.get(&pair) {
                prev.text = c.clone();
                prev.mention = tok.mention;
                continue;
            }
        }
        fused.push(tok);
    }
    let ends_terminal = fused
        .last()
        .is_some_and(|t| t.text.ends_with(['.', '!', '?']));
    if !ends_terminal && !ortho.terminal.is_empty() {
        fused.push(Token {
            text: ortho.terminal.clone(),
            mention: None,
        });
    }
    if ortho.capitalize_sentences {
        if let Some(first) = fused.first_mut() {
            first.text = capitalize(&first.text);
        }
    }

    let mut text = String::new();
    let mut len = 0usize;
    let mut spans: Vec<Option<(usize, usize)>> = vec![None; groups.len()];
    for (i, tok) in fused.iter().enumerate() {
        let word: String = tok.text.nfc().collect();
        if i > 0 && !ortho.attach_left.contains(&word) {
            text.push(' ');
            len += 1;
        }
        let start = len;
        len += word.chars().count();
        text.push_str(&word);
        if let Some(g) = tok.mention {
            let span = spans[g].get_or_insert((start, len));
            span.1 = len;
        }
    }
    let mentions = spans
        .into_iter()
        .enumerate()
        .filter_map(|(g, s)| {
            s.map(|(start, end)| Mention {
                start,
                end,
                entity_id: groups[g].clone(),
            })
        })
        .collect();
    SentenceText { text, mentions }
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Realizes one sentence specification.
pub fn realize_sentence(
    spec: &SentenceSpec,
    pack: &LanguagePack,
    kb: &KnowledgeBase,
    register: Register,
) -> Result<(SentenceText, Vec<AgreementRecord>)> {
    if spec.is_canned() {
        let text = spec
            .clauses
            .iter()
            .map(|c| match &c.body {
                ClauseBody::Canned { text } => text.nfc().collect::<String>(),
                ClauseBody::Generated(_) => String::new(),
            })
            .collect::<Vec<_>>()
            .join(" ");
        return Ok((
            SentenceText {
                text,
                mentions: Vec::new(),
            },
            Vec::new(),
        ));
    }
    let mut b = Builder::new(kb, pack, register);
    let first: &ClauseSpec = &spec.clauses[0];
    if first.relation == Relation::Contrast {
        let connective = pack.function_words.contrastive_connective.clone();
        b.words(&connective, None);
    }
    if let Some(previous) = &first.compared_with {
        b.comparison_preface(previous)?;
    }
    let n = spec.clauses.len();
    for (i, (clause, subject)) in spec.clauses.iter().zip(&spec.subjects).enumerate() {
        if i > 0 {
            if i == n - 1 {
                let conj = pack.function_words.conjunction.clone();
                b.words(&conj, None);
            } else {
                let sep = pack.function_words.list_separator.clone();
                b.words(&sep, None);
            }
        }
        match &clause.body {
            ClauseBody::Generated(p) => b.predication(p, *subject)?,
            ClauseBody::Canned { text } => b.words(text, None),
        }
    }
    let Builder {
        tokens,
        groups,
        agreement,
        ..
    } = b;
    Ok((finish(tokens, &groups, pack), agreement))
}

/// Realizes a document's sentences, joined by single spaces.
pub fn realize_document(
    sentences: &[SentenceSpec],
    facts_expressed: Vec<String>,
    pack: &LanguagePack,
    kb: &KnowledgeBase,
    register: Register,
) -> Result<(AnnotatedText, Vec<AgreementRecord>)> {
    let mut out = AnnotatedText {
        facts_expressed,
        ..Default::default()
    };
    let mut agreement = Vec::new();
    let mut offset = 0usize;
    for spec in sentences {
        let (sentence, records) = realize_sentence(spec, pack, kb, register)?;
        if sentence.text.is_empty() {
            continue;
        }
        if !out.text.is_empty() {
            out.text.push(' ');
            offset += 1;
        }
        let len = sentence.text.chars().count();
        out.sentences.push((offset, offset + len));
        out.mentions.extend(sentence.mentions.into_iter().map(|m| Mention {
            start: m.start + offset,
            end: m.end + offset,
            entity_id: m.entity_id,
        }));
        out.text.push_str(&sentence.text);
        offset += len;
        agreement.extend(records);
    }
    Ok((out, agreement))
}

/// A single text standing in for a whole description, such as the
/// "nothing more to say" message.
pub fn plain(text: &str) -> AnnotatedText {
    let text: String = text.nfc().collect();
    let len = text.chars().count();
    AnnotatedText {
        sentences: if len > 0 { vec![(0, len)] } else { vec![] },
        text,
        mentions: Vec::new(),
        facts_expressed: Vec::new(),
    }
}

/// One clause expressing the first fact of `field` (non-generic owners
/// first, then by owner id), with the owner as a demonstrative subject and
/// the first template for the field regardless of register.
pub fn preview_phrase(field: &str, language: &str, kb: &KnowledgeBase, packs: &crate::lexicon::PackSet) -> Result<String> {
    let pack = packs.get(language)?;
    let mut facts: Vec<_> = kb.facts.iter().filter(|f| f.field == field).collect();
    facts.sort_by(|a, b| {
        let ga = kb.entity(&a.owner).map(|e| e.generic).unwrap_or(true);
        let gb = kb.entity(&b.owner).map(|e| e.generic).unwrap_or(true);
        (ga, &a.owner, &a.id).cmp(&(gb, &b.owner, &b.id))
    });
    let fact = facts
        .first()
        .ok_or_else(|| Error::NoFactForField(field.to_string()))?;
    let template = kb
        .microplans
        .iter()
        .find(|t| t.field == field && t.language == language)
        .ok_or_else(|| Error::NoTemplateForField {
            field: field.to_string(),
            language: language.to_string(),
        })?;
    let mut p = crate::microplanner::apply_template(template, &fact.owner, &fact.id, &fact.value, language)?;
    let register = Register::Adult;
    for np in p.nps_mut() {
        if let ReferTarget::Entity(id) = &np.target {
            np.mode = Some(if *id == fact.owner {
                NpMode::Demonstrative
            } else if kb.entity(id)?.name.contains_key(language) {
                NpMode::Name
            } else {
                NpMode::Definite
            });
        }
    }
    let spec = SentenceSpec::single(ClauseSpec {
        source: fact.id.clone(),
        relation: Relation::First,
        body: ClauseBody::Generated(p),
        compared_with: None,
    });
    Ok(realize_sentence(&spec, pack, kb, register)?.0.text)
}
