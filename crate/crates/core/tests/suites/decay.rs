use std::collections::BTreeMap;

use exhibit_scribe::demo::demo_kb;
use exhibit_scribe::kb::{FactScores, Value};
use exhibit_scribe::usermodel::{SessionOverrides, SessionState};
use exhibit_scribe::{Config, Generator, PackSet};
use proptest::prelude::*;

pub fn decay_input() -> impl Strategy<Value = (f64, f64, usize)> {
    (0.0f64..=1.0, 0.0f64..=1.0, 0usize..20)
}

/// After expression (a = 1) and n turns of decay,
/// a_n = base + (1 - base)(1 - lambda)^n.
pub fn decay_matches_closed_form((base, lambda, turns): (f64, f64, usize)) -> Result<(), TestCaseError> {
    let mut kb = demo_kb();
    let mut scores = BTreeMap::new();
    scores.insert("adult".to_string(), FactScores::new(0.5, 0.5, base));
    let id = kb
        .assert_fact("kouros1", "current-location", Value::entity("athens"), scores)
        .unwrap();
    let mut s = SessionState::new(&kb, "s", "adult", "en", &SessionOverrides::default()).unwrap();
    prop_assert_eq!(s.assimilation_of(&id, &kb).unwrap(), base);
    s.mark_expressed("kouros1", std::slice::from_ref(&id), &kb).unwrap();
    for _ in 0..turns {
        s.decay(&kb, lambda);
    }
    let expected = base + (1.0 - base) * (1.0 - lambda).powi(turns as i32);
    prop_assert!((s.assimilation_of(&id, &kb).unwrap() - expected).abs() < 1e-9);
    Ok(())
}

pub fn without_decay_nothing_is_repeated() {
    let g = Generator::demo();
    let mut s = g.session("s", "adult", "en", &SessionOverrides { max_facts: Some(3) }).unwrap();
    let first = g.describe(&mut s, "vase1").unwrap();
    g.describe(&mut s, "kouros1").unwrap();
    let again = g.describe(&mut s, "vase1").unwrap();
    for f in &again.text.facts_expressed {
        assert!(!first.text.facts_expressed.contains(f));
    }
}

/// lambda = 1 resets every expressed fact to its base after one turn.
pub fn with_decay_facts_come_back() {
    let mut config = Config::default();
    config.selection.decay_lambda = 1.0;
    let g = Generator::new(demo_kb(), PackSet::builtin(), config);
    let mut s = g.session("s", "adult", "en", &SessionOverrides::default()).unwrap();
    let first = g.describe(&mut s, "vase1").unwrap();
    let again = g.describe(&mut s, "vase1").unwrap();
    assert!(!again.exhausted);
    assert_eq!(again.text.facts_expressed, first.text.facts_expressed);
}
