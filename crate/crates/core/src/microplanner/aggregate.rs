use super::{ClauseSpec, SentenceSpec, SubjectRealization};
use crate::planner::Relation;

fn mergeable(clause: &ClauseSpec) -> bool {
    clause.predication().is_some() && clause.compared_with.is_none() && clause.relation != Relation::Contrast
}

/// Greedy left-to-right merge of adjacent clauses sharing a subject, up
/// to `cap` clauses per sentence. Merged clauses after the first have
/// their subject elided. Canned, comparison and contrast clauses always
/// stand alone.
pub fn aggregate(clauses: Vec<ClauseSpec>, cap: usize) -> Vec<SentenceSpec> {
    let cap = cap.max(1);
    let mut out: Vec<SentenceSpec> = Vec::new();
    for clause in clauses {
        if let Some(current) = out.last_mut() {
            let head = &current.clauses[0];
            if current.clauses.len() < cap
                && mergeable(head)
                && mergeable(&clause)
                && head.subject_entity().is_some()
                && head.subject_entity() == clause.subject_entity()
            {
                current.clauses.push(clause);
                current.subjects.push(SubjectRealization::Elided);
                continue;
            }
        }
        out.push(SentenceSpec::single(clause));
    }
    out
}
