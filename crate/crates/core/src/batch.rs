//! Many independent descriptions at once, e.g. pre-rendering a gallery
//! for every language and user type.
//!
//! Each request runs on its own throwaway session, so requests share
//! nothing but the read-only generator. With the `parallel` feature they
//! are spread over the rayon pool; otherwise they run in order.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pipeline::{Description, Generator};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Request {
    pub entity_id: String,
    pub language: String,
    pub user_type: String,
    #[serde(default)]
    pub max_facts: Option<usize>,
    /// Entities described earlier in the simulated visit.
    #[serde(default)]
    pub history: Vec<String>,
}

fn one(generator: &Generator, r: &Request) -> Result<Description> {
    generator.preview(&r.entity_id, &r.language, &r.user_type, r.max_facts, &r.history)
}

pub fn run_sequential(generator: &Generator, requests: &[Request]) -> Vec<Result<Description>> {
    requests.iter().map(|r| one(generator, r)).collect()
}

#[cfg(feature = "parallel")]
pub fn run_parallel(generator: &Generator, requests: &[Request]) -> Vec<Result<Description>> {
    use rayon::prelude::*;
    requests.par_iter().map(|r| one(generator, r)).collect()
}

/// Results in request order, parallel when the feature is on.
pub fn run(generator: &Generator, requests: &[Request]) -> Vec<Result<Description>> {
    #[cfg(feature = "parallel")]
    {
        run_parallel(generator, requests)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_sequential(generator, requests)
    }
}

/// Every (exhibit, language, user type) combination with no history.
pub fn gallery_requests(generator: &Generator) -> Vec<Request> {
    let kb = &generator.kb;
    let mut out = Vec::new();
    for entity in crate::demo::exhibit_ids(kb) {
        for language in &kb.languages {
            for user_type in &kb.user_types {
                out.push(Request {
                    entity_id: entity.clone(),
                    language: language.clone(),
                    user_type: user_type.name.clone(),
                    max_facts: None,
                    history: Vec::new(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo::scaled_demo;
    use crate::{Config, PackSet};

    #[test]
    fn parallel_equals_sequential() {
        let g = Generator::new(scaled_demo(2), PackSet::builtin(), Config::default());
        let requests = gallery_requests(&g);
        assert_eq!(requests.len(), 9 * 2 * 3);
        let a = run_sequential(&g, &requests);
        let b = run(&g, &requests);
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.is_ok()));
    }
}
