use thiserror::Error;

use crate::diag::Diagnostic;

/// Everything that can go wrong while building, querying or rendering a
/// knowledge base.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("`{0}` is not a valid identifier (lowercase ASCII letters, digits and hyphens)")]
    InvalidIdentifier(String),
    #[error("entity type `{0}` already exists")]
    DuplicateType(String),
    #[error("unknown parent type `{0}`")]
    UnknownParent(String),
    #[error("unknown entity type `{0}`")]
    UnknownType(String),
    #[error("field `{field}` collides with the field of the same name on `{existing_on}`")]
    FieldNameCollision { field: String, existing_on: String },
    #[error("bad filler type for field `{field}`: {reason}")]
    BadFillerType { field: String, reason: String },
    #[error("`{0}` is a reserved field name")]
    ReservedFieldName(String),
    #[error("entity `{0}` already exists")]
    DuplicateEntity(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("type `{type_name}` already has a generic entity (`{existing}`)")]
    DuplicateGeneric { type_name: String, existing: String },
    #[error("`{0}` is a generic entity and cannot be described directly")]
    GenericEntityQueried(String),
    #[error("entity `{entity}` has no field `{field}`")]
    UnknownField { entity: String, field: String },
    #[error("unknown fact `{0}`")]
    UnknownFact(String),
    #[error("value for `{field}` must be {expected}, found {found}")]
    TypeMismatch {
        field: String,
        expected: String,
        found: String,
    },
    #[error("`{entity}` already has a value for single-valued field `{field}`")]
    CardinalityViolation { entity: String, field: String },
    #[error("generic entity `{entity}` may not fill set-valued field `{field}`")]
    GenericSetValued { entity: String, field: String },
    #[error("score `{name}` = {value} is outside [0, 1]")]
    ScoreOutOfRange { name: String, value: f64 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported bundle version `{found}`")]
    SchemaVersionMismatch { found: String },
    #[error("i/o error: {0}")]
    Io(String),

    #[error("language `{0}` has no language pack")]
    UnknownLanguage(String),
    #[error("paradigm class `{class}` does not exist in pack `{language}`")]
    UnknownParadigmClass { class: String, language: String },
    #[error("lemma `{lemma}` does not end in `{ending}` required by class `{class}`")]
    LemmaDoesNotMatchClassPattern {
        lemma: String,
        class: String,
        ending: String,
    },
    #[error("paradigm class `{class}` leaves cell `{cell}` undefined")]
    IncompleteParadigm { class: String, cell: String },
    #[error("feature `{feature}` is outside the grid of pack `{language}`")]
    FeatureOutOfGrid { feature: String, language: String },
    #[error("no noun for type `{type_name}` in `{language}`")]
    NoAlignedNoun { type_name: String, language: String },
    #[error("no {category} entry for sense `{sense}` in `{language}`")]
    MissingLexicalEntry {
        category: &'static str,
        sense: String,
        language: String,
    },

    #[error("unknown user type `{0}`")]
    UnknownUserType(String),
    #[error("language `{0}` is not enabled for this knowledge base")]
    LanguageNotEnabled(String),
    #[error("maxFacts must be at least 1")]
    InvalidMaxFacts,
    #[error("entity `{0}` has not been described in this session yet")]
    EntityNotYetDescribed(String),

    #[error("nothing left to say about `{0}`")]
    EmptySelection(String),
    #[error("no clause template for field `{field}` in `{language}`")]
    NoTemplateForField { field: String, language: String },
    #[error("canned text `{fact}` has no `{language}` version")]
    CannedTextMissingLanguage { fact: String, language: String },
    #[error("no fact fills field `{0}`")]
    NoFactForField(String),

    #[error("role `{role}` may not perform `{op}`")]
    PermissionDenied { role: String, op: String },
    #[error("malformed edit: {0}")]
    BadEdit(String),
    #[error("edit rejected with {} diagnostic(s)", .0.len())]
    Rejected(Vec<Diagnostic>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
