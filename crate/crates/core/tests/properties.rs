//! Randomized invariants: index-vs-scan matching, tuning safety and order
//! independence, lattice cost bookkeeping, template canonicalization, trace
//! replay, and end-to-end determinism.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::OnceLock;

use chunklate_core::{
    actions_to_trace, analyze_word, build_lattice, dedupe_repeated, enumerate_paths,
    enumerate_spans, insert_dummies, matrix_from_trace, matrix_to_trace, prune_unreachable_deadend,
    replay_trace, select_optimal, tune, tune_traced, AffixRuleSet, ArabicTemplate, ChunkInstance,
    Corpus, CorrespondenceMatrix, Engine, Lexicon, Span, Tag, TranslateOptions, Vocabulary,
};
use proptest::prelude::*;

const CATS: [&str; 7] = ["art", "n", "v", "be", "adj", "prep", "poss"];
const ATTRS: [&str; 12] = [
    "def", "s", "p", "pl", "m", "f", "1", "2", "3", "ing", "source", "pmean",
];

type TagSpec = (&'static str, Vec<&'static str>);
type RowKey = (usize, usize, Option<u32>);

fn arb_attr_names() -> impl Strategy<Value = Vec<&'static str>> {
    proptest::sample::subsequence(ATTRS.to_vec(), 0..=3)
}

fn arb_tag_spec() -> impl Strategy<Value = TagSpec> {
    (proptest::sample::select(CATS.to_vec()), arb_attr_names())
}

fn arb_template_spec() -> impl Strategy<Value = Vec<TagSpec>> {
    proptest::collection::vec(arb_tag_spec(), 1..=4)
}

fn build_tags(spec: &[TagSpec]) -> Vec<Tag> {
    let vocab = Vocabulary::builtin();
    spec.iter()
        .map(|(cat, attrs)| Tag::new(*cat, vocab.attr_set(attrs.iter().copied()).unwrap()))
        .collect()
}

fn build_corpus(specs: &[Vec<TagSpec>]) -> Corpus {
    let mut text = String::new();
    for (i, spec) in specs.iter().enumerate() {
        let tags: Vec<String> = spec
            .iter()
            .map(|(cat, attrs)| {
                let attrs: Vec<String> = attrs.iter().map(|a| format!("\"{a}\"")).collect();
                format!("{{\"cat\": \"{cat}\", \"attrs\": [{}]}}", attrs.join(", "))
            })
            .collect();
        text.push_str(&format!(
            "{{\"id\": {}, \"en_template\": [{}], \"ar_template\": \"({}1)\"}}\n",
            i + 1,
            tags.join(", "),
            spec[0].0
        ));
    }
    Corpus::from_reader(text.as_bytes(), &Vocabulary::builtin()).unwrap()
}

proptest! {
    #[test]
    fn match_exact_agrees_with_a_linear_scan(
        corpus_spec in proptest::collection::vec(arb_template_spec(), 1..=12),
        query_spec in arb_template_spec(),
    ) {
        let corpus = build_corpus(&corpus_spec);
        let query = build_tags(&query_spec);
        let via_index: Vec<u32> = corpus.match_exact(&query).iter().map(|p| p.id).collect();
        let linear: Vec<u32> = corpus
            .pairs()
            .iter()
            .filter(|p| {
                p.en_template.len() == query.len()
                    && p.en_template.iter().zip(&query).all(|(t, q)| t.accepts(q))
            })
            .map(|p| p.id)
            .collect();
        prop_assert_eq!(via_index, linear);
        for pair in corpus.match_exact(&query) {
            prop_assert_eq!(pair.en_template.len(), query.len());
        }
    }

    #[test]
    fn widening_a_query_never_loses_matches(
        corpus_spec in proptest::collection::vec(arb_template_spec(), 1..=12),
        query_spec in arb_template_spec(),
        extra in proptest::collection::vec(arb_attr_names(), 4),
    ) {
        let corpus = build_corpus(&corpus_spec);
        let query = build_tags(&query_spec);
        let widened_spec: Vec<TagSpec> = query_spec
            .iter()
            .zip(&extra)
            .map(|((cat, attrs), more)| {
                let mut attrs = attrs.clone();
                attrs.extend(more.iter().copied());
                (*cat, attrs)
            })
            .collect();
        let widened = build_tags(&widened_spec);

        let narrow: BTreeSet<u32> = corpus.match_exact(&query).iter().map(|p| p.id).collect();
        let wide: BTreeSet<u32> = corpus.match_exact(&widened).iter().map(|p| p.id).collect();
        prop_assert!(narrow.is_subset(&wide), "narrow {narrow:?} wide {wide:?}");
    }
}

#[test]
fn span_count_follows_the_triangular_formula() {
    for n in 0..20 {
        assert_eq!(enumerate_spans(n).len(), n * (n + 1) / 2);
    }
}

/// Two template pairs per chunk length (ids `len` and `len + 100`),
/// distinguished by their Arabic side, so parallel edges survive dedupe.
fn parallel_corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut text = String::new();
        for len in 1..=8usize {
            let cats = vec![r#"{"cat": "n"}"#; len].join(", ");
            for (offset, ar) in [(0, "(n1)"), (100, "(n1 [pmean])")] {
                text.push_str(&format!(
                    "{{\"id\": {}, \"en_template\": [{cats}], \"ar_template\": \"{ar}\"}}\n",
                    len + offset
                ));
            }
        }
        Corpus::from_reader(text.as_bytes(), &Vocabulary::builtin()).unwrap()
    })
}

/// Row spec: (start seed, length seed, variant). Variant 2 is a dummy row.
type RowSpec = (usize, usize, u8);

fn arb_matrix_spec() -> impl Strategy<Value = (usize, Vec<RowSpec>)> {
    (1..=8usize).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec((0..n, 1..=n, 0..3u8), 0..=20),
        )
    })
}

fn build_rows(n: usize, specs: &[RowSpec]) -> Vec<ChunkInstance> {
    let corpus = parallel_corpus();
    specs
        .iter()
        .map(|&(start, len, variant)| {
            if variant == 2 {
                return ChunkInstance::dummy(Span::new(start, start + 1), format!("w{start}"));
            }
            let end = (start + len).min(n);
            let id = (end - start) as u32 + if variant == 0 { 0 } else { 100 };
            let pair = corpus.get(id).unwrap().clone();
            ChunkInstance::normal(Span::new(start, end), pair, format!("w{start}"))
        })
        .collect()
}

fn spec_matrix(n: usize, specs: &[RowSpec]) -> CorrespondenceMatrix {
    CorrespondenceMatrix::new(n, build_rows(n, specs)).unwrap()
}

fn row_keys(matrix: &CorrespondenceMatrix) -> Vec<RowKey> {
    matrix
        .rows
        .iter()
        .map(|r| (r.span.start, r.span.end, r.pair_id()))
        .collect()
}

/// Remove unreachable/dead-end rows picking victims by `priority` instead of
/// first-row-first, to show the fixpoint ignores removal order.
fn prune_by_priority(matrix: &CorrespondenceMatrix, priority: &[u64]) -> BTreeSet<RowKey> {
    let n = matrix.n;
    let mut rows: Vec<(RowKey, u64)> = row_keys(matrix)
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, priority.get(i).copied().unwrap_or(0)))
        .collect();
    loop {
        let removable = |i: usize| {
            let (s, e, _) = rows[i].0;
            let fed = s == 0 || rows.iter().any(|r| r.0 .1 == s);
            let feeds = e == n || rows.iter().any(|r| r.0 .0 == e);
            !(fed && feeds)
        };
        match (0..rows.len())
            .filter(|&i| removable(i))
            .max_by_key(|&i| rows[i].1)
        {
            Some(i) => {
                rows.remove(i);
            }
            None => return rows.into_iter().map(|(k, _)| k).collect(),
        }
    }
}

/// The greatest edge set whose members all start at a node reachable from 0
/// and end at a node that can still reach n.
fn coreachable_closure(matrix: &CorrespondenceMatrix) -> BTreeSet<RowKey> {
    let n = matrix.n;
    let mut rows: BTreeSet<RowKey> = row_keys(matrix).into_iter().collect();
    loop {
        let mut reach = BTreeSet::from([0usize]);
        let mut coreach = BTreeSet::from([n]);
        loop {
            let before = (reach.len(), coreach.len());
            for &(s, e, _) in &rows {
                if reach.contains(&s) {
                    reach.insert(e);
                }
                if coreach.contains(&e) {
                    coreach.insert(s);
                }
            }
            if (reach.len(), coreach.len()) == before {
                break;
            }
        }
        let keep: BTreeSet<RowKey> = rows
            .iter()
            .filter(|(s, e, _)| reach.contains(s) && coreach.contains(e))
            .copied()
            .collect();
        if keep == rows {
            return rows;
        }
        rows = keep;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn prune_fixpoint_ignores_removal_order(
        (n, specs) in arb_matrix_spec(),
        priority in proptest::collection::vec(any::<u64>(), 20),
    ) {
        let matrix = spec_matrix(n, &specs);
        let reference: BTreeSet<RowKey> =
            row_keys(&prune_unreachable_deadend(&matrix)).into_iter().collect();
        prop_assert_eq!(&reference, &prune_by_priority(&matrix, &priority));
        prop_assert_eq!(&reference, &coreachable_closure(&matrix));
    }

    #[test]
    fn tuned_matrices_put_every_row_on_a_complete_path((n, specs) in arb_matrix_spec()) {
        let tuned = tune(&spec_matrix(n, &specs));
        let lattice = build_lattice(&tuned);
        let enumeration = enumerate_paths(&lattice, 100_000);
        prop_assert!(!enumeration.truncated);
        prop_assert!(!enumeration.paths.is_empty(), "tune must leave a complete path");

        let on_paths: BTreeSet<RowKey> = enumeration
            .paths
            .iter()
            .flat_map(|p| p.key())
            .collect();
        let rows: BTreeSet<RowKey> = row_keys(&tuned).into_iter().collect();
        prop_assert_eq!(on_paths, rows);

        let optimal = select_optimal(&lattice).unwrap();
        prop_assert!(!optimal.is_empty());
    }

    #[test]
    fn path_costs_partition_the_edges((n, specs) in arb_matrix_spec()) {
        let lattice = build_lattice(&tune(&spec_matrix(n, &specs)));
        for path in enumerate_paths(&lattice, 100_000).paths {
            let cost = path.cost();
            prop_assert_eq!(cost.dummies + cost.chunks, path.edges().len());
            let dummies = path.edges().iter().filter(|e| e.is_dummy()).count();
            prop_assert_eq!(cost.dummies, dummies);
            // contiguity: consecutive edges share a boundary
            for pair in path.edges().windows(2) {
                prop_assert_eq!(pair[0].span.end, pair[1].span.start);
            }
        }
    }

    #[test]
    fn adding_an_edge_never_worsens_the_optimum(
        (n, specs) in arb_matrix_spec(),
        extra in (0..8usize, 1..=8usize, 0..2u8),
    ) {
        let tuned = tune(&spec_matrix(n, &specs));
        let before = select_optimal(&build_lattice(&tuned)).unwrap()[0].cost();

        let (start, len, variant) = extra;
        if start >= n {
            return Ok(());
        }
        let mut rows = tuned.rows.clone();
        rows.extend(build_rows(n, &[(start, len, variant)]));
        let grown = CorrespondenceMatrix::new(n, rows).unwrap();
        let after = select_optimal(&build_lattice(&grown)).unwrap()[0].cost();
        prop_assert!(after <= before, "after {after:?} vs before {before:?}");
    }

    #[test]
    fn traced_actions_replay_into_the_tuned_matrix((n, specs) in arb_matrix_spec()) {
        let raw = spec_matrix(n, &specs);
        let (tuned, actions) = tune_traced(&raw);
        let replayed = replay_trace(&matrix_to_trace(&raw), &actions_to_trace(&actions));
        prop_assert_eq!(replayed, matrix_to_trace(&tuned));
    }

    #[test]
    fn matrix_traces_round_trip((n, specs) in arb_matrix_spec()) {
        let matrix = spec_matrix(n, &specs);
        let trace = matrix_to_trace(&matrix);
        let rebuilt = matrix_from_trace(&trace, parallel_corpus(), &matrix.words).unwrap();
        prop_assert_eq!(row_keys(&rebuilt), row_keys(&matrix));
        prop_assert_eq!(matrix_to_trace(&rebuilt), trace);
    }

    #[test]
    fn tune_composes_its_three_stages((n, specs) in arb_matrix_spec()) {
        let raw = spec_matrix(n, &specs);
        let staged = prune_unreachable_deadend(&insert_dummies(&dedupe_repeated(&raw)));
        prop_assert_eq!(row_keys(&tune(&raw)), row_keys(&staged));
    }
}

fn arb_template_text() -> impl Strategy<Value = String> {
    let literal = "[a-z]{1,4}".prop_map(|s| format!("add [{s}]"));
    let catref = (
        proptest::sample::select(CATS.to_vec()),
        1..=3usize,
        arb_attr_names(),
    )
        .prop_map(|(cat, ordinal, attrs)| {
            if attrs.is_empty() {
                format!("{cat}{ordinal}")
            } else {
                format!("{cat}{ordinal} [{}]", attrs.join(" ,"))
            }
        });
    let group = (
        proptest::collection::vec(literal.clone(), 0..=2),
        proptest::option::of(catref),
        proptest::collection::vec(literal, 0..=2),
    )
        .prop_filter_map("group needs at least one item", |(pre, catref, post)| {
            let mut items = pre;
            items.extend(catref);
            items.extend(post);
            if items.is_empty() {
                None
            } else {
                Some(format!("({})", items.join(" ")))
            }
        });
    proptest::collection::vec(group, 1..=3).prop_map(|groups| groups.join(" "))
}

proptest! {
    #[test]
    fn template_display_is_a_parse_fixpoint(text in arb_template_text()) {
        let vocab = Vocabulary::builtin();
        let parsed = ArabicTemplate::parse(&text, &vocab).unwrap();
        let canonical = parsed.to_string();
        let reparsed = ArabicTemplate::parse(&canonical, &vocab).unwrap();
        prop_assert_eq!(&reparsed, &parsed);
        prop_assert_eq!(reparsed.to_string(), canonical);
    }

    #[test]
    fn analysis_never_panics_and_always_tags(word in "[!-~]{1,8}") {
        let engine = fixture_engine();
        let tagged = analyze_word(engine.lexicon(), engine.rules(), &word);
        prop_assert!(!tagged.tag.category.is_empty());
        prop_assert_eq!(tagged.surface, word);
    }
}

fn fixture_engine() -> &'static Engine {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    ENGINE.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
        let lexicon = Lexicon::from_path(dir.join("lexicon.jsonl"), Vocabulary::builtin()).unwrap();
        let rules = AffixRuleSet::from_path(dir.join("affixes.jsonl"), lexicon.vocab()).unwrap();
        let corpus = Corpus::from_path(dir.join("corpus.jsonl"), lexicon.vocab()).unwrap();
        Engine::new(lexicon, rules, corpus)
    })
}

const SENTENCE_WORDS: [&str; 12] = [
    "the",
    "proteins",
    "are",
    "necessary",
    "for",
    "building",
    "our",
    "bodies",
    "protein",
    "body",
    "girls",
    "xyzzy",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_is_deterministic(
        words in proptest::collection::vec(proptest::sample::select(SENTENCE_WORDS.to_vec()), 1..=8),
    ) {
        let engine = fixture_engine();
        let sentence = words.join(" ");
        let opts = TranslateOptions::default();
        let a = engine.translate(&sentence, &opts).unwrap();
        let b = engine.translate(&sentence, &opts).unwrap();
        prop_assert_eq!(&a.outputs, &b.outputs);
        prop_assert_eq!(&a.warnings, &b.warnings);
        prop_assert_eq!(
            serde_json::to_string(&a.trace).unwrap(),
            serde_json::to_string(&b.trace).unwrap()
        );
    }

    #[test]
    fn every_enumerated_path_is_complete_and_contiguous(
        words in proptest::collection::vec(proptest::sample::select(SENTENCE_WORDS.to_vec()), 1..=6),
    ) {
        let engine = fixture_engine();
        let sentence = words.join(" ");
        let t = engine.translate(&sentence, &TranslateOptions::default()).unwrap();
        let lattice = &t.trace.lattice;
        for path in &lattice.paths {
            let spans: Vec<[usize; 2]> = path.edges.iter().map(|&e| lattice.edges[e].span).collect();
            prop_assert_eq!(spans.first().map(|s| s[0]), Some(0));
            prop_assert_eq!(spans.last().map(|s| s[1]), Some(lattice.nodes - 1));
            for pair in spans.windows(2) {
                prop_assert_eq!(pair[0][1], pair[1][0]);
            }
        }
    }
}
