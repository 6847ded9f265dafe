//! Content selection against brute force: enumerate every subset of the
//! eligible candidates up to the budget and compare total relevance.

use std::collections::{BTreeMap, HashSet};

use exhibit_scribe::config::SelectionConfig;
use exhibit_scribe::kb::{type_intro_id, Datatype, Entity, FactScores, FieldDef, KnowledgeBase, Value};
use exhibit_scribe::selection::{relevance_of, say_more, select_facts};
use exhibit_scribe::usermodel::{Register, SessionOverrides, SessionState, UserTypeDef};
use proptest::prelude::*;

/// Scores on a coarse grid so that ties are common.
fn score() -> impl Strategy<Value = f64> {
    (0u8..=10).prop_map(|n| f64::from(n) / 10.0)
}

#[derive(Debug, Clone)]
pub struct Case {
    scores: Vec<(f64, f64, f64)>,
    seen: Vec<bool>,
    max_facts: usize,
}

/// Up to seven fields plus the type introduction, budgets 1 to 3.
pub fn case() -> impl Strategy<Value = Case> {
    (0usize..=7).prop_flat_map(|n| {
        (
            proptest::collection::vec((score(), score(), score()), n),
            proptest::collection::vec(any::<bool>(), n + 1),
            1usize..=3,
        )
            .prop_map(|(scores, seen, max_facts)| Case {
                scores,
                seen,
                max_facts,
            })
    })
}

fn world(case: &Case) -> (KnowledgeBase, SessionState) {
    let mut kb = KnowledgeBase::new(&["en"]);
    kb.define_type("exhibit", "entity").unwrap();
    kb.user_types.push(UserTypeDef {
        name: "u".into(),
        register: Register::Adult,
        default_max_facts: 3,
        default_scores: FactScores::NEUTRAL,
    });
    kb.add_entity(Entity::new("x", "exhibit")).unwrap();
    for (i, &(a, b, c)) in case.scores.iter().enumerate() {
        let field = format!("f{i}");
        kb.define_field("exhibit", FieldDef::attribute(&field, Datatype::Number))
            .unwrap();
        let mut s = BTreeMap::new();
        s.insert("u".to_string(), FactScores::new(a, b, c));
        kb.assert_fact("x", &field, Value::Number(i as f64), s).unwrap();
    }
    let overrides = SessionOverrides {
        max_facts: Some(case.max_facts),
    };
    let mut session = SessionState::new(&kb, "s", "u", "en", &overrides).unwrap();
    let seen: Vec<String> = candidate_ids(case)
        .into_iter()
        .zip(&case.seen)
        .filter(|(_, s)| **s)
        .map(|(id, _)| id)
        .collect();
    session.mark_expressed("other", &seen, &kb).unwrap();
    (kb, session)
}

fn candidate_ids(case: &Case) -> Vec<String> {
    let mut ids = vec![type_intro_id("x")];
    ids.extend((0..case.scores.len()).map(|i| format!("x.f{i}")));
    ids
}

fn subsets(items: &[String], size: usize) -> Vec<Vec<String>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], size - 1) {
            rest.insert(0, first.clone());
            out.push(rest);
        }
    }
    out
}

pub fn selection_maximizes_total_relevance(case: Case) -> Result<(), TestCaseError> {
    let (kb, session) = world(&case);
    let cfg = SelectionConfig::default();
    let r = |id: &str| relevance_of(&kb, &session, id).unwrap();
    let eligible: Vec<String> = candidate_ids(&case)
        .into_iter()
        .filter(|id| session.assimilation_of(id, &kb).unwrap() < cfg.theta)
        .collect();

    let result = select_facts(&kb, &session, "x", &cfg).unwrap();
    let size = case.max_facts.min(eligible.len());
    prop_assert_eq!(result.chosen_facts.len(), size);
    prop_assert_eq!(result.exhausted, eligible.is_empty());
    let unique: HashSet<_> = result.chosen_facts.iter().collect();
    prop_assert_eq!(unique.len(), size);
    for id in &result.chosen_facts {
        prop_assert!(eligible.contains(id));
    }

    // the type introduction is always first when it is eligible
    let intro = type_intro_id("x");
    if eligible.contains(&intro) {
        prop_assert_eq!(&result.chosen_facts[0], &intro);
    }

    // brute force over every subset of that size, all candidates at most 8
    let best = subsets(&eligible, size)
        .iter()
        .map(|s| s.iter().map(|id| r(id)).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let got: f64 = result.chosen_facts.iter().map(|id| r(id)).sum();
    if size > 0 {
        prop_assert!((got - best).abs() < 1e-9, "got {got}, best {best}");
    }

    // chosen order is non-increasing in relevance after the intro
    let rest: Vec<f64> = result.chosen_facts.iter().filter(|id| **id != intro).map(|id| r(id)).collect();
    prop_assert!(rest.windows(2).all(|w| w[0] >= w[1]));
    Ok(())
}

pub fn say_more_batches_partition_the_eligible_set(case: Case) -> Result<(), TestCaseError> {
    let (kb, mut session) = world(&case);
    let cfg = SelectionConfig::default();
    let eligible: HashSet<String> = candidate_ids(&case)
        .into_iter()
        .filter(|id| session.assimilation_of(id, &kb).unwrap() < cfg.theta)
        .collect();
    let mut union = Vec::new();
    let mut sizes = Vec::new();
    let mut r = select_facts(&kb, &session, "x", &cfg).unwrap();
    while !r.exhausted {
        sizes.push(r.chosen_facts.len());
        union.extend(r.chosen_facts.clone());
        session.mark_expressed("x", &r.chosen_facts, &kb).unwrap();
        r = say_more(&kb, &session, "x", &cfg).unwrap();
    }
    let set: HashSet<String> = union.iter().cloned().collect();
    prop_assert_eq!(set.len(), union.len());
    prop_assert_eq!(&set, &eligible);
    let n = eligible.len();
    let k = case.max_facts;
    let mut expected = vec![k; n / k];
    if !n.is_multiple_of(k) {
        expected.push(n % k);
    }
    prop_assert_eq!(sizes, expected);
    Ok(())
}
