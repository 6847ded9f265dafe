use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SelectionConfig {
    /// Facts with assimilation at or above this are never selected.
    pub theta: f64,
    /// Fields eligible for comparisons; `None` means every relation field.
    pub comparison_fields: Option<Vec<String>>,
    /// Per-turn decay of assimilation back towards its base value.
    pub decay_lambda: f64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            theta: 0.95,
            comparison_fields: None,
            decay_lambda: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct Config {
    pub selection: SelectionConfig,
    pub max_clauses_per_sentence: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            selection: SelectionConfig::default(),
            max_clauses_per_sentence: 2,
        }
    }
}

impl Config {
    pub fn check(&self) -> Result<()> {
        let s = &self.selection;
        if !(0.0..=1.0).contains(&s.theta) {
            return Err(Error::ScoreOutOfRange {
                name: "selection.theta".into(),
                value: s.theta,
            });
        }
        if !(0.0..=1.0).contains(&s.decay_lambda) {
            return Err(Error::ScoreOutOfRange {
                name: "selection.decayLambda".into(),
                value: s.decay_lambda,
            });
        }
        if self.max_clauses_per_sentence == 0 {
            return Err(Error::BadEdit("maxClausesPerSentence must be at least 1".into()));
        }
        Ok(())
    }
}
