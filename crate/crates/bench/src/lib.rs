//! Shared setup for the benchmarks: the fixture engine and synthetic dense
//! matrices that stress the lattice search.

use std::path::PathBuf;

use chunklate_core::{
    AffixRuleSet, ChunkInstance, Corpus, CorrespondenceMatrix, Engine, Lexicon, Span, Vocabulary,
};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_engine() -> Engine {
    let dir = fixture_dir();
    let lexicon = Lexicon::from_path(dir.join("lexicon.jsonl"), Vocabulary::builtin()).unwrap();
    let rules = AffixRuleSet::from_path(dir.join("affixes.jsonl"), lexicon.vocab()).unwrap();
    let corpus = Corpus::from_path(dir.join("corpus.jsonl"), lexicon.vocab()).unwrap();
    Engine::new(lexicon, rules, corpus)
}

/// A matrix holding every span of length ≤ `max_len` over `n` words, so the
/// lattice is as dense as the matcher could ever make it.
pub fn dense_matrix(n: usize, max_len: usize) -> CorrespondenceMatrix {
    let mut text = String::new();
    for len in 1..=max_len {
        let cats = vec![r#"{"cat": "n"}"#; len].join(", ");
        text.push_str(&format!(
            "{{\"id\": {len}, \"en_template\": [{cats}], \"ar_template\": \"(n1)\"}}\n"
        ));
    }
    let corpus = Corpus::from_reader(text.as_bytes(), &Vocabulary::builtin()).unwrap();

    let mut rows = Vec::new();
    for start in 0..n {
        for end in start + 1..=(start + max_len).min(n) {
            let pair = corpus.get((end - start) as u32).unwrap().clone();
            rows.push(ChunkInstance::normal(
                Span::new(start, end),
                pair,
                format!("w{start}"),
            ));
        }
    }
    CorrespondenceMatrix::new(n, rows).unwrap()
}
