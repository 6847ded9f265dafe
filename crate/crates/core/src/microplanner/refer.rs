use super::{NpMode, ReferTarget, SentenceSpec, SubjectRealization};
use crate::error::Result;
use crate::kb::KnowledgeBase;
use crate::lexicon::{noun_for_entity, noun_for_type, Register};

/// `gender.number` of the noun an entity is referred to with. Entities
/// are always singular.
pub(crate) fn agreement_key(entity: &str, kb: &KnowledgeBase, language: &str, register: Register) -> Result<String> {
    let e = kb.entity(entity)?;
    let noun = noun_for_entity(e, language, register, kb)?;
    Ok(format!("{}.sg", noun.gender))
}

/// Fills in the mode of every NP.
///
/// The focal entity is named on first mention, or introduced with a
/// demonstrative when it has no name in the language. Later it becomes a
/// pronoun only when the previous sentence mentioned it and nothing else
/// of the same gender and number; otherwise it is named again or gets a
/// definite NP. Other entities are named when possible, else definite.
pub fn choose_referring_expressions(
    sentences: &mut [SentenceSpec],
    focal: &str,
    kb: &KnowledgeBase,
    language: &str,
    register: Register,
) -> Result<()> {
    let focal_named = kb.entity(focal)?.name.contains_key(language);
    let focal_key = agreement_key(focal, kb, language, register)?;
    let mut focal_mentioned = false;
    let mut previous: Vec<(String, String)> = Vec::new();

    for sentence in sentences.iter_mut() {
        let mut mentioned: Vec<(String, String)> = Vec::new();
        for (clause, realization) in sentence.clauses.iter_mut().zip(&sentence.subjects) {
            if let Some(prev) = &clause.compared_with {
                let e = kb.entity(prev)?;
                let noun = noun_for_type(&e.type_name, language, register, kb)?;
                mentioned.push((prev.clone(), format!("{}.sg", noun.gender)));
            }
            let Some(p) = (match &mut clause.body {
                super::ClauseBody::Generated(p) => Some(p),
                super::ClauseBody::Canned { .. } => None,
            }) else {
                continue;
            };
            for (i, np) in p.nps_mut().into_iter().enumerate() {
                let id = match &np.target {
                    ReferTarget::Entity(id) => id.clone(),
                    ReferTarget::Kind(_) => {
                        np.mode = Some(NpMode::Indefinite);
                        continue;
                    }
                    ReferTarget::Literal(_) => continue,
                };
                let elided = i == 0 && *realization == SubjectRealization::Elided;
                let mode = if id == focal {
                    if elided {
                        // shares the realized subject of its sentence
                        NpMode::Pronoun
                    } else if !focal_mentioned {
                        if focal_named {
                            NpMode::Name
                        } else {
                            NpMode::Demonstrative
                        }
                    } else {
                        let sole = previous.iter().any(|(e, _)| e == focal)
                            && previous.iter().filter(|(_, k)| *k == focal_key).count() == 1;
                        if sole {
                            NpMode::Pronoun
                        } else if focal_named {
                            NpMode::Name
                        } else {
                            NpMode::Definite
                        }
                    }
                } else if kb.entity(&id)?.name.contains_key(language) {
                    NpMode::Name
                } else {
                    NpMode::Definite
                };
                np.mode = Some(mode);
                if id == focal && !elided {
                    focal_mentioned = true;
                }
                if !mentioned.iter().any(|(e, _)| *e == id) {
                    let key = agreement_key(&id, kb, language, register)?;
                    mentioned.push((id, key));
                }
            }
        }
        // canned sentences reset the context; nothing they say is tracked
        previous = mentioned;
    }
    Ok(())
}
