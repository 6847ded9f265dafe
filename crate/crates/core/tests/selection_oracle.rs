mod suites;

use proptest::prelude::*;
use suites::selection;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn selection_maximizes_total_relevance(case in selection::case()) {
        selection::selection_maximizes_total_relevance(case)?;
    }

    #[test]
    fn say_more_batches_partition_the_eligible_set(case in selection::case()) {
        selection::say_more_batches_partition_the_eligible_set(case)?;
    }
}
