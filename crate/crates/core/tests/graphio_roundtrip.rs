use argulab::graphio::{
    parse_answer, parse_framework, serialize_answer, serialize_framework, AnswerShape, GraphFormat,
};
use argulab::semantics::solve;
use argulab::{Framework, SemanticsKind};
use proptest::prelude::*;

/// Arguments are arbitrary non-negative ids, not just 0..n.
fn framework_strategy() -> impl Strategy<Value = Framework> {
    proptest::collection::btree_set(0u32..10_000, 0..=25).prop_flat_map(|ids| {
        let ids: Vec<u32> = ids.into_iter().collect();
        let pairs: Vec<(u32, u32)> = ids.iter().flat_map(|&a| ids.iter().map(move |&b| (a, b))).collect();
        let n = pairs.len();
        (Just(ids), proptest::sample::subsequence(pairs, 0..=n.min(60)))
            .prop_map(|(ids, attacks)| Framework::new(ids, attacks).unwrap())
    })
}

fn format_strategy() -> impl Strategy<Value = GraphFormat> {
    prop_oneof![
        Just(GraphFormat::Dot),
        Just(GraphFormat::Graphml),
        Just(GraphFormat::Json)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn every_format_round_trips(f in framework_strategy(), format in format_strategy()) {
        let text = serialize_framework(&f, format);
        prop_assert_eq!(parse_framework(&text, format).unwrap(), f);
    }

    #[test]
    fn serialization_is_canonical(f in framework_strategy(), format in format_strategy()) {
        let text = serialize_framework(&f, format);
        let again = serialize_framework(&parse_framework(&text, format).unwrap(), format);
        prop_assert_eq!(again, text);
    }

    #[test]
    fn formats_agree(f in framework_strategy(), from in format_strategy(), to in format_strategy()) {
        let parsed = parse_framework(&serialize_framework(&f, from), from).unwrap();
        let converted = parse_framework(&serialize_framework(&parsed, to), to).unwrap();
        prop_assert_eq!(converted, f);
    }

    #[test]
    fn answers_round_trip(f in framework_strategy()) {
        let sol = solve(&f);
        for kind in SemanticsKind::ALL {
            let labellings = sol.filter(kind);
            let text = serialize_answer(&labellings, AnswerShape::List).unwrap();
            let back = parse_answer(&text).unwrap().to_labellings(&f).unwrap();
            prop_assert_eq!(back, labellings);
        }
    }
}

#[test]
fn answer_found_after_free_text() {
    let text = "Step 1: ... IN = {1}.\nTherefore the grounded labelling is {\"IN\":[1],\"OUT\":[2],\"UNDEC\":[]}";
    let answer = parse_answer(text).unwrap();
    assert_eq!(answer.labellings.len(), 1);
    assert_eq!(answer.labellings[0].outs, vec![2]);
}
