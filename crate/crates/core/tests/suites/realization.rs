//! Determinism, agreement and mention spans over a corpus of sessions:
//! every exhibit, language and user type, after every short history.

use exhibit_scribe::lexicon::{inflect_noun, inflect_verb, noun_for_entity, noun_for_type, Register, VerbFeatures};
use exhibit_scribe::pipeline::Trace;
use exhibit_scribe::usermodel::SessionOverrides;
use exhibit_scribe::{AnnotatedText, Generator, KnowledgeBase, PackSet};

fn histories(exhibits: &[String]) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    for a in exhibits {
        out.push(vec![a.clone()]);
        for b in exhibits {
            if a != b {
                out.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    out
}

/// Every trace produced by visiting `history` then `entity`, with say-more
/// on the target until it runs out.
fn visit(g: &Generator, language: &str, user_type: &str, max_facts: Option<usize>, history: &[String], entity: &str) -> Vec<Trace> {
    let mut s = g
        .session("s", user_type, language, &SessionOverrides { max_facts })
        .unwrap();
    let mut traces = Vec::new();
    for h in history {
        traces.push(g.describe_traced(&mut s, h).unwrap());
    }
    traces.push(g.describe_traced(&mut s, entity).unwrap());
    while let Ok(t) = g.say_more_traced(&mut s, entity) {
        let done = t.description.exhausted;
        traces.push(t);
        if done {
            break;
        }
    }
    traces
}

pub type Corpus = Vec<(String, Vec<Trace>)>;

pub fn corpus(g: &Generator) -> Corpus {
    let exhibits = exhibit_scribe::demo::exhibit_ids(&g.kb);
    let mut out = Vec::new();
    for language in &g.kb.languages {
        for user in &g.kb.user_types {
            for max_facts in [Some(2), None] {
                for history in histories(&exhibits) {
                    for target in &exhibits {
                        let label = format!("{language}/{}/{max_facts:?}/{history:?}/{target}", user.name);
                        out.push((label, visit(g, language, &user.name, max_facts, &history, target)));
                    }
                }
            }
        }
    }
    out
}

/// Two independent runs give byte-identical texts.
pub fn realization_is_deterministic(g: &Generator, a: &Corpus) {
    let b = corpus(g);
    assert_eq!(a.len(), b.len());
    for ((label, x), (_, y)) in a.iter().zip(&b) {
        let tx: Vec<&AnnotatedText> = x.iter().map(|t| &t.description.text).collect();
        let ty: Vec<&AnnotatedText> = y.iter().map(|t| &t.description.text).collect();
        assert_eq!(tx, ty, "{label}");
    }
}

/// Re-derives every finite verb from the subject's lexicon features and
/// compares it with what was realized.
/// Returns how many verbs were checked.
pub fn every_verb_agrees_with_its_subject(g: &Generator, corpus: &Corpus) -> usize {
    let mut checked = 0;
    for (label, traces) in corpus {
        for t in traces {
            for rec in &t.agreement {
                let pack = g.packs.get(&rec.language).unwrap();
                let subject = rec.subject.as_deref().expect("subjects are entities");
                let entity = g.kb.entity(subject).unwrap();
                let register = register_of(g, label);
                let noun = noun_for_entity(entity, &rec.language, register, &g.kb).unwrap();
                assert_eq!(rec.subject_gender, noun.gender, "{label}");
                assert_eq!((rec.subject_person.as_str(), rec.subject_number.as_str()), ("3", "sg"), "{label}");
                let features = VerbFeatures {
                    tense: rec.features.tense.clone(),
                    voice: rec.features.voice,
                    person: "3".into(),
                    number: "sg".into(),
                    gender: noun.gender.clone(),
                };
                let verb = g.kb.lexicon.verb(&rec.verb_sense, &rec.language).unwrap();
                let expected = inflect_verb(verb, &features, pack).unwrap();
                assert_eq!(rec.forms, expected, "{label}");
                let text = t.description.text.text.to_lowercase();
                assert!(text.contains(&expected.join(" ").to_lowercase()), "{label}: {text}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000, "only {checked} verbs checked");
    checked
}

fn register_of(g: &Generator, label: &str) -> Register {
    let user = label.split('/').nth(1).unwrap();
    g.kb.user_type(user).unwrap().register
}

/// A mention covers a name, a pronoun, or a phrase containing a form of
/// the entity's noun, with no surrounding space.
fn plausible_mention(kb: &KnowledgeBase, packs: &PackSet, language: &str, register: Register, entity: &str, span: &str) -> bool {
    if span.is_empty() || span.trim() != span {
        return false;
    }
    let e = kb.entity(entity).unwrap();
    if e.name.get(language).is_some_and(|n| n == span) {
        return true;
    }
    let pack = packs.get(language).unwrap();
    let lower = span.to_lowercase();
    let pronoun = pack.function_words.pronoun.values().any(|p| *p == lower);
    let mut nouns = vec![noun_for_entity(e, language, register, kb).unwrap()];
    nouns.extend(noun_for_type(&e.type_name, language, register, kb));
    let has_noun = nouns.iter().any(|n| {
        pack.cases.iter().any(|case| {
            let form = inflect_noun(n, "sg", case, pack).unwrap();
            lower.split(' ').any(|w| w == form.to_lowercase())
        })
    });
    pronoun || has_noun
}

pub fn mention_spans_cover_their_noun_phrases(g: &Generator, corpus: &Corpus) {
    for (label, traces) in corpus {
        let language = label.split('/').next().unwrap().to_string();
        let register = register_of(g, label);
        for t in traces {
            let a = &t.description.text;
            let len = a.text.chars().count();
            for m in &a.mentions {
                assert!(m.start < m.end && m.end <= len, "{label}");
                let span = a.slice(m.start, m.end);
                assert!(
                    plausible_mention(&g.kb, &g.packs, &language, register, &m.entity_id, &span),
                    "{label}: `{span}` for {}",
                    m.entity_id
                );
                assert!(a.sentences.iter().any(|&(s, e)| s <= m.start && m.end <= e), "{label}");
            }
            // sentences tile the text with single spaces
            let mut at = 0;
            for (i, &(s, e)) in a.sentences.iter().enumerate() {
                assert_eq!(s, if i == 0 { 0 } else { at + 1 }, "{label}");
                at = e;
            }
            assert_eq!(at, len, "{label}");
        }
    }
}
