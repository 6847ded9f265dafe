//! Personalized, multilingual descriptions of museum exhibits.
//!
//! Text is produced in stages over typed intermediate forms:
//!
//! 1. [`selection`] picks facts about an exhibit from the [`kb`] for the
//!    visitor's user type and session history,
//! 2. [`planner`] orders them into a [`planner::DocumentPlan`],
//! 3. [`microplanner`] turns plan nodes into language-specific sentence
//!    specifications (verbs, aggregation, referring expressions),
//! 4. [`realizer`] linearizes and inflects them with a language pack and
//!    returns [`realizer::AnnotatedText`] with entity mention spans.
//!
//! [`pipeline::Generator`] runs the whole chain against a session;
//! [`authoring`] edits knowledge bases and previews results.

pub mod authoring;
pub mod batch;
pub mod config;
pub mod demo;
pub mod diag;
pub mod error;
pub mod kb;
pub mod lexicon;
pub mod microplanner;
pub mod pipeline;
pub mod planner;
pub mod realizer;
pub mod selection;
pub mod usermodel;

pub use config::Config;
pub use diag::{Diagnostic, Severity};
pub use error::{Error, Result};
pub use kb::KnowledgeBase;
pub use lexicon::PackSet;
pub use pipeline::{Description, Generator};
pub use realizer::AnnotatedText;
pub use usermodel::SessionState;
