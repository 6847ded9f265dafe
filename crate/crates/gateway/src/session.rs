//! A visitor session with the preference changes the API allows.

use exhibit_scribe::usermodel::SessionOverrides;
use exhibit_scribe::{Error, Generator, Result, SessionState};
use serde::Deserialize;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Prefs {
    pub language: Option<String>,
    pub user_type: Option<String>,
    pub max_facts: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Visit {
    pub state: SessionState,
    /// maxFacts was chosen by the visitor rather than taken from the user
    /// type, so it survives a change of user type.
    explicit_max_facts: bool,
}

impl Visit {
    pub fn new(g: &Generator, id: &str, user_type: &str, language: &str, max_facts: Option<usize>) -> Result<Self> {
        let state = g.session(id, user_type, language, &SessionOverrides { max_facts })?;
        Ok(Visit {
            state,
            explicit_max_facts: max_facts.is_some(),
        })
    }

    /// Applies every change or none. History is kept; a language change
    /// forgets the pronoun context, which is language specific.
    pub fn update(&mut self, g: &Generator, prefs: &Prefs) -> Result<()> {
        let kb = &g.kb;
        let mut next = self.state.clone();
        let mut explicit = self.explicit_max_facts;
        if let Some(language) = &prefs.language {
            if !kb.language_enabled(language) {
                return Err(Error::LanguageNotEnabled(language.clone()));
            }
            g.packs.get(language)?;
            if *language != next.language {
                next.discourse.clear();
            }
            next.language = language.clone();
        }
        if let Some(user_type) = &prefs.user_type {
            let def = kb.user_type(user_type)?;
            if !explicit {
                next.max_facts = def.default_max_facts;
            }
            next.user_type = user_type.clone();
        }
        if let Some(max_facts) = prefs.max_facts {
            if max_facts == 0 {
                return Err(Error::InvalidMaxFacts);
            }
            next.max_facts = max_facts;
            explicit = true;
        }
        self.state = next;
        self.explicit_max_facts = explicit;
        Ok(())
    }
}
