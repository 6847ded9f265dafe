use std::collections::BTreeMap;

use exhibit_scribe::kb::{bundle, Datatype, Entity, FactScores, FieldDef, KnowledgeBase, Value, ROOT_TYPE};
use exhibit_scribe::usermodel::{Register, UserTypeDef};
use exhibit_scribe::Error;
use proptest::prelude::*;
use proptest::sample::Index;

/// Parent index for every type after the root; type i+1 hangs below one of
/// 0..=i, where 0 is the root.
pub fn tree() -> impl Strategy<Value = Vec<usize>> {
    (1usize..12).prop_flat_map(|n| (0..n).map(|i| 0..=i).collect::<Vec<_>>())
}

pub fn counts() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..3, 12)
}

fn name(i: usize) -> String {
    if i == 0 {
        ROOT_TYPE.to_string()
    } else {
        format!("t{i}")
    }
}

fn build(parents: &[usize], fields_per_type: &[usize]) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new(&["en"]);
    for (i, &p) in parents.iter().enumerate() {
        kb.define_type(&name(i + 1), &name(p)).unwrap();
    }
    for (i, &n) in fields_per_type.iter().enumerate().take(parents.len() + 1) {
        for j in 0..n {
            kb.define_field(&name(i), FieldDef::attribute(&format!("f{i}-{j}"), Datatype::Number))
                .unwrap();
        }
    }
    kb
}

fn chain(parents: &[usize], mut i: usize) -> Vec<String> {
    let mut out = vec![name(i)];
    while i != 0 {
        i = parents[i - 1];
        out.push(name(i));
    }
    out
}

fn index_of(type_name: &str) -> usize {
    if type_name == ROOT_TYPE {
        0
    } else {
        type_name[1..].parse().unwrap()
    }
}

pub fn ancestors_walk_to_the_root(parents: Vec<usize>) -> Result<(), TestCaseError> {
    let kb = build(&parents, &[]);
    for i in 0..=parents.len() {
        let got: Vec<String> = kb.ancestors(&name(i)).unwrap().iter().map(|t| t.name.clone()).collect();
        prop_assert_eq!(&got, &chain(&parents, i));
        for j in 0..=parents.len() {
            let expected = chain(&parents, i).contains(&name(j));
            prop_assert_eq!(kb.is_subtype(&name(i), &name(j)).unwrap(), expected);
        }
    }
    prop_assert!(kb.validate().is_empty());
    Ok(())
}

pub fn fields_are_inherited_root_down((parents, counts): (Vec<usize>, Vec<usize>)) -> Result<(), TestCaseError> {
    let kb = build(&parents, &counts);
    for i in 0..=parents.len() {
        let mut expected = Vec::new();
        for t in chain(&parents, i).iter().rev() {
            let idx = index_of(t);
            for j in 0..counts[idx] {
                expected.push(format!("f{idx}-{j}"));
            }
        }
        let got: Vec<String> = kb.fields_of(&name(i)).unwrap().iter().map(|f| f.name.clone()).collect();
        prop_assert_eq!(got, expected);
    }
    Ok(())
}

pub type CollisionInput = (Vec<usize>, Vec<usize>, Index, Index);

pub fn collision_input() -> impl Strategy<Value = CollisionInput> {
    (tree(), counts(), any::<Index>(), any::<Index>())
}

pub fn field_names_unique_along_every_path((parents, counts, pick, on): CollisionInput) -> Result<(), TestCaseError> {
    let mut kb = build(&parents, &counts);
    let all: Vec<(usize, String)> = (0..=parents.len())
        .flat_map(|i| (0..counts[i]).map(move |j| (i, format!("f{i}-{j}"))))
        .collect();
    if all.is_empty() {
        return Ok(());
    }
    let (owner, field) = pick.get(&all).clone();
    let target = on.index(parents.len() + 1);
    let related = chain(&parents, target).contains(&name(owner)) || chain(&parents, owner).contains(&name(target));
    let result = kb.define_field(&name(target), FieldDef::attribute(&field, Datatype::Number));
    if related {
        let is_collision = matches!(result, Err(Error::FieldNameCollision { .. }));
        prop_assert!(is_collision);
    } else {
        prop_assert!(result.is_ok());
        prop_assert!(kb.validate().is_empty());
    }
    Ok(())
}

pub fn generic_input() -> impl Strategy<Value = (Vec<usize>, Vec<bool>, Index)> {
    (tree(), proptest::collection::vec(any::<bool>(), 12), any::<Index>())
}

pub fn nearest_generic_wins((parents, generic_on, leaf): (Vec<usize>, Vec<bool>, Index)) -> Result<(), TestCaseError> {
    let mut kb = build(&parents, &[1]);
    let field = "f0-0";
    for (i, &on) in generic_on.iter().enumerate().take(parents.len() + 1) {
        if on {
            let id = format!("generic-{}", name(i));
            kb.add_entity(Entity::new(&id, &name(i)).generic()).unwrap();
            kb.assert_fact(&id, field, Value::Number(i as f64), BTreeMap::new()).unwrap();
        }
    }
    let t = leaf.index(parents.len() + 1);
    kb.add_entity(Entity::new("x", &name(t))).unwrap();
    let facts = kb.effective_facts("x").unwrap();
    prop_assert!(facts.len() <= 1);
    let nearest = chain(&parents, t).into_iter().find(|n| generic_on[index_of(n)]);
    match nearest {
        Some(n) => prop_assert_eq!(&facts[0].owner, &format!("generic-{n}")),
        None => prop_assert!(facts.is_empty()),
    }
    // an own value hides every default
    kb.assert_fact("x", field, Value::Number(-1.0), BTreeMap::new()).unwrap();
    let facts = kb.effective_facts("x").unwrap();
    prop_assert_eq!(facts.len(), 1);
    prop_assert_eq!(&facts[0].owner, "x");
    Ok(())
}

pub type RoundTripInput = (Vec<usize>, Vec<usize>, Vec<(f64, f64, f64)>, f64);

pub fn round_trip_input() -> impl Strategy<Value = RoundTripInput> {
    (
        tree(),
        counts(),
        proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0), 0..10),
        -1.0e9f64..1.0e9,
    )
}

pub fn bundle_round_trips((parents, counts, scores, number): RoundTripInput) -> Result<(), TestCaseError> {
    let mut kb = build(&parents, &counts);
    kb.user_types.push(UserTypeDef {
        name: "visitor".into(),
        register: Register::Adult,
        default_max_facts: 4,
        default_scores: FactScores::NEUTRAL,
    });
    let fields: Vec<(usize, String)> = (0..=parents.len())
        .flat_map(|i| (0..counts[i]).map(move |j| (i, format!("f{i}-{j}"))))
        .collect();
    for (k, (i, f)) in fields.iter().enumerate() {
        let id = format!("e{k}");
        kb.add_entity(Entity::new(&id, &name(*i)).named("en", &format!("Thing {k}"))).unwrap();
        let mut s = BTreeMap::new();
        if let Some(&(a, b, c)) = scores.get(k) {
            s.insert("visitor".to_string(), FactScores::new(a, b, c));
        }
        kb.assert_fact(&id, f, Value::Number(number + k as f64), s).unwrap();
    }
    let text = bundle::to_json(&kb);
    let back = bundle::from_json(&text).unwrap();
    prop_assert_eq!(&back, &kb);
    prop_assert_eq!(bundle::to_json(&back), text);
    Ok(())
}
