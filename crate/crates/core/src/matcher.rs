//! Chunk matching and correspondence-matrix tuning.
//!
//! Matching slides every contiguous span of the analyzed sentence over the
//! corpus and records each hit as a matrix row. Tuning then cleans the
//! matrix up for path search: collapse repeated rows, insert single-word
//! dummy rows wherever a reachable word has no cover, and prune rows that
//! can never sit on a complete path.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::corpus::{Corpus, TemplatePair};
use crate::error::DataError;
use crate::lexicon::{Tag, TaggedWord};

/// Half-open word-boundary interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    /// Panics if `start >= end`; spans are never empty.
    pub fn new(start: usize, end: usize) -> Span {
        assert!(start < end, "empty span [{start}, {end})");
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.start, self.end)
    }
}

/// Every contiguous span of an `n`-word sentence, ordered by start then end.
/// There are n(n+1)/2 of them.
pub fn enumerate_spans(n: usize) -> Vec<Span> {
    let mut spans = Vec::with_capacity(n * (n + 1) / 2);
    for start in 0..n {
        for end in start + 1..=n {
            spans.push(Span { start, end });
        }
    }
    spans
}

/// What a matrix row stands for: a corpus match or an inserted dummy.
#[derive(Debug, Clone)]
pub enum ChunkKind {
    Normal(Arc<TemplatePair>),
    Dummy,
}

/// One row of the correspondence matrix: a span of the input covered either
/// by a matched corpus pair or by a dummy chunk.
#[derive(Debug, Clone)]
pub struct ChunkInstance {
    pub span: Span,
    pub kind: ChunkKind,
    /// The covered input words, space-joined. For dummies this is what the
    /// copy policy emits.
    pub surface: String,
}

impl ChunkInstance {
    pub fn normal(span: Span, pair: Arc<TemplatePair>, surface: impl Into<String>) -> Self {
        debug_assert_eq!(pair.en_template.len(), span.len());
        ChunkInstance {
            span,
            kind: ChunkKind::Normal(pair),
            surface: surface.into(),
        }
    }

    pub fn dummy(span: Span, surface: impl Into<String>) -> Self {
        assert_eq!(span.len(), 1, "dummy chunks cover exactly one word");
        ChunkInstance {
            span,
            kind: ChunkKind::Dummy,
            surface: surface.into(),
        }
    }

    pub fn is_dummy(&self) -> bool {
        matches!(self.kind, ChunkKind::Dummy)
    }

    pub fn pair(&self) -> Option<&Arc<TemplatePair>> {
        match &self.kind {
            ChunkKind::Normal(pair) => Some(pair),
            ChunkKind::Dummy => None,
        }
    }

    pub fn pair_id(&self) -> Option<u32> {
        self.pair().map(|p| p.id)
    }

    /// Identity under row deduplication: the span plus both template sides.
    /// Distinct pairs with identical templates collapse; examples and ids do
    /// not separate them.
    fn dedupe_key(&self) -> (Span, Option<(String, String)>) {
        let sides = self.pair().map(|p| (p.en_key(), p.ar_template.to_string()));
        (self.span, sides)
    }
}

impl fmt::Display for ChunkInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ChunkKind::Normal(pair) => write!(f, "{} pair {}", self.span, pair.id),
            ChunkKind::Dummy => write!(f, "{} dummy `{}`", self.span, self.surface),
        }
    }
}

/// The correspondence matrix: one row per chunk instance over an `n`-word
/// sentence. Row order is significant — matching order for matched rows,
/// insertion order for dummies — and all downstream tiebreaks follow it.
#[derive(Debug, Clone)]
pub struct CorrespondenceMatrix {
    pub n: usize,
    /// Input surfaces, used to label dummy rows. May be empty when the
    /// matrix was reconstructed from a trace without the sentence.
    pub words: Vec<String>,
    pub rows: Vec<ChunkInstance>,
}

impl CorrespondenceMatrix {
    pub fn new(n: usize, rows: Vec<ChunkInstance>) -> Result<Self, DataError> {
        CorrespondenceMatrix::with_words(n, Vec::new(), rows)
    }

    pub fn with_words(
        n: usize,
        words: Vec<String>,
        rows: Vec<ChunkInstance>,
    ) -> Result<Self, DataError> {
        for row in &rows {
            if row.span.end > n {
                return Err(DataError::SpanOutOfRange {
                    start: row.span.start,
                    end: row.span.end,
                    n,
                });
            }
        }
        Ok(CorrespondenceMatrix { n, words, rows })
    }

    /// Whether the cell (row, word position) is covered.
    pub fn cell(&self, row: usize, col: usize) -> bool {
        let span = self.rows[row].span;
        span.start <= col && col < span.end
    }

    fn word_surface(&self, i: usize) -> String {
        self.words
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("w{i}"))
    }
}

/// Match every span of the analyzed sentence against the corpus. Rows come
/// out grouped by span (starts ascending, then ends), corpus order within a
/// span.
pub fn find_chunks(tagged: &[TaggedWord], corpus: &Corpus) -> Vec<ChunkInstance> {
    let tags: Vec<Tag> = tagged.iter().map(|w| w.tag.clone()).collect();
    let mut rows = Vec::new();
    for span in enumerate_spans(tagged.len()) {
        let query = &tags[span.start..span.end];
        for pair in corpus.match_exact(query) {
            let surface: Vec<&str> = tagged[span.start..span.end]
                .iter()
                .map(|w| w.surface.as_str())
                .collect();
            rows.push(ChunkInstance::normal(span, pair, surface.join(" ")));
        }
    }
    rows
}

/// Assemble matched chunks into a matrix for an `n`-word sentence.
pub fn build_matrix(
    tagged: &[TaggedWord],
    chunks: Vec<ChunkInstance>,
) -> Result<CorrespondenceMatrix, DataError> {
    let words = tagged.iter().map(|w| w.surface.clone()).collect();
    CorrespondenceMatrix::with_words(tagged.len(), words, chunks)
}

/// Which tuning rule produced an action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TuneRule {
    /// Row removed because an earlier row has the same span and templates.
    Repeated,
    /// Dummy row inserted to cover an otherwise uncovered word.
    Dummy,
    /// Row removed because no surviving row ends where it starts.
    Unreachable,
    /// Row removed because no surviving row starts where it ends.
    DeadEnd,
}

impl TuneRule {
    pub fn as_str(self) -> &'static str {
        match self {
            TuneRule::Repeated => "repeated",
            TuneRule::Dummy => "dummy",
            TuneRule::Unreachable => "unreachable",
            TuneRule::DeadEnd => "dead-end",
        }
    }
}

/// One replayable tuning step: remove the row at `index`, or (for
/// [`TuneRule::Dummy`]) insert `row` at `index`. `row` always snapshots the
/// affected row. Applying the full action list to the raw matrix reproduces
/// the tuned matrix.
#[derive(Debug, Clone)]
pub struct TuneAction {
    pub rule: TuneRule,
    pub index: usize,
    pub row: ChunkInstance,
}

/// Replay a tuning action list against a matrix.
pub fn replay(matrix: &CorrespondenceMatrix, actions: &[TuneAction]) -> CorrespondenceMatrix {
    let mut out = matrix.clone();
    for action in actions {
        match action.rule {
            TuneRule::Dummy => out.rows.insert(action.index, action.row.clone()),
            _ => {
                out.rows.remove(action.index);
            }
        }
    }
    out
}

/// Drop rows identical to an earlier row (same span, same template pair
/// content). The first occurrence, in row order, survives.
pub fn dedupe_repeated(matrix: &CorrespondenceMatrix) -> CorrespondenceMatrix {
    let mut out = matrix.clone();
    dedupe_step(&mut out.rows, &mut Vec::new());
    out
}

fn dedupe_step(rows: &mut Vec<ChunkInstance>, actions: &mut Vec<TuneAction>) {
    let mut seen = HashSet::new();
    let mut i = 0;
    while i < rows.len() {
        if seen.insert(rows[i].dedupe_key()) {
            i += 1;
        } else {
            actions.push(TuneAction {
                rule: TuneRule::Repeated,
                index: i,
                row: rows[i].clone(),
            });
            rows.remove(i);
        }
    }
}

/// Insert a dummy chunk at every word that is reachable from the sentence
/// start but has no chunk covering it. The sweep runs left to right, so a
/// gap of several words gets a chain of single-word dummies; words that
/// remain unreachable (only possible when nothing starts at 0... which a
/// dummy fixes first) never spawn dummies. New rows are appended after all
/// matched rows in insertion order. Afterwards the end of the sentence is
/// reachable from the start.
pub fn insert_dummies(matrix: &CorrespondenceMatrix) -> CorrespondenceMatrix {
    let mut out = matrix.clone();
    dummy_step(&mut out.rows, out.n, &mut Vec::new(), |i| {
        matrix.word_surface(i)
    });
    out
}

fn dummy_step(
    rows: &mut Vec<ChunkInstance>,
    n: usize,
    actions: &mut Vec<TuneAction>,
    surface: impl Fn(usize) -> String,
) {
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for node in 0..n {
        if !reachable[node] {
            continue;
        }
        let mut covered = false;
        for row in rows.iter() {
            if row.span.start == node {
                covered = true;
                reachable[row.span.end] = true;
            }
        }
        if !covered {
            let dummy = ChunkInstance::dummy(Span::new(node, node + 1), surface(node));
            actions.push(TuneAction {
                rule: TuneRule::Dummy,
                index: rows.len(),
                row: dummy.clone(),
            });
            rows.push(dummy);
            reachable[node + 1] = true;
        }
    }
    debug_assert!(reachable[n], "dummy insertion must connect 0 to n");
}

/// Remove rows that cannot lie on any complete 0→n path: rows whose start
/// no surviving row reaches, and rows whose end no surviving row continues
/// from. Removals cascade until a fixpoint.
pub fn prune_unreachable_deadend(matrix: &CorrespondenceMatrix) -> CorrespondenceMatrix {
    let mut out = matrix.clone();
    prune_step(&mut out.rows, out.n, &mut Vec::new());
    out
}

fn prune_step(rows: &mut Vec<ChunkInstance>, n: usize, actions: &mut Vec<TuneAction>) {
    loop {
        let starts: HashSet<usize> = rows.iter().map(|r| r.span.start).collect();
        let ends: HashSet<usize> = rows.iter().map(|r| r.span.end).collect();
        let victim = rows.iter().position(|r| {
            (r.span.start != 0 && !ends.contains(&r.span.start))
                || (r.span.end != n && !starts.contains(&r.span.end))
        });
        match victim {
            Some(i) => {
                let row = rows.remove(i);
                let rule = if row.span.start != 0 && !ends.contains(&row.span.start) {
                    TuneRule::Unreachable
                } else {
                    TuneRule::DeadEnd
                };
                actions.push(TuneAction {
                    rule,
                    index: i,
                    row,
                });
            }
            None => return,
        }
    }
}

/// Full tuning pass — dedupe, dummy insertion, prune — with the action list
/// that transforms the input into the result.
pub fn tune_traced(matrix: &CorrespondenceMatrix) -> (CorrespondenceMatrix, Vec<TuneAction>) {
    let mut out = matrix.clone();
    let mut actions = Vec::new();
    dedupe_step(&mut out.rows, &mut actions);
    dummy_step(&mut out.rows, out.n, &mut actions, |i| {
        matrix.word_surface(i)
    });
    prune_step(&mut out.rows, out.n, &mut actions);
    (out, actions)
}

/// Full tuning pass without the trace.
pub fn tune(matrix: &CorrespondenceMatrix) -> CorrespondenceMatrix {
    tune_traced(matrix).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::Vocabulary;
    use crate::Corpus;

    fn dummy_row(s: usize, e: usize) -> ChunkInstance {
        ChunkInstance::dummy(Span::new(s, e), format!("w{s}"))
    }

    fn pair_row(corpus: &Corpus, id: u32, s: usize, e: usize) -> ChunkInstance {
        ChunkInstance::normal(
            Span::new(s, e),
            corpus.get(id).unwrap().clone(),
            format!("w{s}..{e}"),
        )
    }

    /// Corpus of attr-free noun templates of every length up to 4, ids 1-4.
    fn span_corpus() -> Corpus {
        let mut lines = String::new();
        for len in 1..=4usize {
            let tags: Vec<&str> = std::iter::repeat_n(r#"{"cat": "n"}"#, len).collect();
            lines.push_str(&format!(
                "{{\"id\": {len}, \"en_template\": [{}], \"ar_template\": \"(n1)\"}}\n",
                tags.join(", ")
            ));
        }
        Corpus::from_reader(lines.as_bytes(), &Vocabulary::builtin()).unwrap()
    }

    #[test]
    fn span_count_is_triangular() {
        assert_eq!(enumerate_spans(0).len(), 0);
        assert_eq!(enumerate_spans(1), vec![Span::new(0, 1)]);
        assert_eq!(enumerate_spans(4).len(), 10);
        assert_eq!(enumerate_spans(8).len(), 36);
        // Ordered by start, then end.
        let spans = enumerate_spans(3);
        assert_eq!(
            spans,
            vec![
                Span::new(0, 1),
                Span::new(0, 2),
                Span::new(0, 3),
                Span::new(1, 2),
                Span::new(1, 3),
                Span::new(2, 3),
            ]
        );
    }

    #[test]
    fn dedupe_keeps_first_of_each_identity() {
        let corpus = span_corpus();
        let rows = vec![
            pair_row(&corpus, 2, 0, 2),
            pair_row(&corpus, 2, 0, 2), // repeated
            pair_row(&corpus, 2, 1, 3), // same pair, other span: kept
            pair_row(&corpus, 1, 0, 1),
        ];
        let m = CorrespondenceMatrix::new(3, rows).unwrap();
        let out = dedupe_repeated(&m);
        assert_eq!(out.rows.len(), 3);
        assert_eq!(out.rows[0].span, Span::new(0, 2));
        assert_eq!(out.rows[1].span, Span::new(1, 3));
        assert_eq!(out.rows[2].span, Span::new(0, 1));
    }

    #[test]
    fn dummies_fill_reachable_gaps_only() {
        let corpus = span_corpus();
        // Words 0-1 covered; word 2 uncovered; row at (3,4) exists but node
        // 3 only becomes reachable through the dummy chain.
        let rows = vec![pair_row(&corpus, 2, 0, 2), pair_row(&corpus, 1, 3, 4)];
        let m = CorrespondenceMatrix::new(4, rows).unwrap();
        let out = insert_dummies(&m);
        let dummies: Vec<Span> = out
            .rows
            .iter()
            .filter(|r| r.is_dummy())
            .map(|r| r.span)
            .collect();
        assert_eq!(dummies, vec![Span::new(2, 3)]);
    }

    #[test]
    fn unreachable_words_get_no_dummy() {
        let corpus = span_corpus();
        // (0,2) then (3,4): node 2 gets a dummy; but a row at (1,2) sits at
        // unreachable node 1 — no dummy spawns *inside* spans.
        let rows = vec![pair_row(&corpus, 2, 0, 2), pair_row(&corpus, 1, 1, 2)];
        let m = CorrespondenceMatrix::new(2, rows).unwrap();
        let out = insert_dummies(&m);
        assert_eq!(out.rows.len(), 2, "no dummy under a covered span");
    }

    #[test]
    fn dummy_chains_bridge_wide_gaps() {
        let m = CorrespondenceMatrix::new(3, vec![]).unwrap();
        let out = insert_dummies(&m);
        let spans: Vec<Span> = out.rows.iter().map(|r| r.span).collect();
        assert_eq!(
            spans,
            vec![Span::new(0, 1), Span::new(1, 2), Span::new(2, 3)]
        );
        assert!(out.rows.iter().all(|r| r.is_dummy()));
    }

    #[test]
    fn dummy_surfaces_come_from_the_sentence() {
        let m = CorrespondenceMatrix::with_words(1, vec!["are".to_string()], vec![]).unwrap();
        let out = insert_dummies(&m);
        assert_eq!(out.rows[0].surface, "are");
    }

    #[test]
    fn prune_cascades_to_fixpoint() {
        let corpus = span_corpus();
        // 0→2→4 is complete. (1,3) dead-ends at node 3, and its removal
        // turns (0,1) into a dead end too; both must go.
        let rows = vec![
            pair_row(&corpus, 2, 0, 2),
            pair_row(&corpus, 2, 2, 4),
            pair_row(&corpus, 1, 0, 1),
            pair_row(&corpus, 2, 1, 3), // reachable only via (0,1), dead-ends at 3
        ];
        let m = CorrespondenceMatrix::new(4, rows).unwrap();
        let out = prune_unreachable_deadend(&m);
        let spans: Vec<Span> = out.rows.iter().map(|r| r.span).collect();
        assert_eq!(spans, vec![Span::new(0, 2), Span::new(2, 4)]);
    }

    #[test]
    fn prune_keeps_complete_single_row() {
        let m = CorrespondenceMatrix::new(1, vec![dummy_row(0, 1)]).unwrap();
        let out = prune_unreachable_deadend(&m);
        assert_eq!(out.rows.len(), 1);
    }

    #[test]
    fn tune_actions_replay_to_the_tuned_matrix() {
        let corpus = span_corpus();
        let rows = vec![
            pair_row(&corpus, 2, 0, 2),
            pair_row(&corpus, 2, 0, 2),
            pair_row(&corpus, 1, 3, 4),
        ];
        let m = CorrespondenceMatrix::new(4, rows).unwrap();
        let (tuned, actions) = tune_traced(&m);
        let replayed = replay(&m, &actions);
        assert_eq!(replayed.rows.len(), tuned.rows.len());
        for (a, b) in replayed.rows.iter().zip(&tuned.rows) {
            assert_eq!(a.span, b.span);
            assert_eq!(a.pair_id(), b.pair_id());
            assert_eq!(a.is_dummy(), b.is_dummy());
        }
    }

    #[test]
    fn tune_is_idempotent() {
        let corpus = span_corpus();
        let rows = vec![
            pair_row(&corpus, 2, 0, 2),
            pair_row(&corpus, 2, 0, 2),
            pair_row(&corpus, 1, 3, 4),
        ];
        let m = CorrespondenceMatrix::new(4, rows).unwrap();
        let once = tune(&m);
        let twice = tune(&once);
        assert_eq!(once.rows.len(), twice.rows.len());
        for (a, b) in once.rows.iter().zip(&twice.rows) {
            assert_eq!(a.span, b.span);
            assert_eq!(a.pair_id(), b.pair_id());
        }
    }

    #[test]
    fn matrix_rejects_out_of_range_spans() {
        let err = CorrespondenceMatrix::new(1, vec![dummy_row(1, 2)]).unwrap_err();
        assert!(err.to_string().contains("out of range"));
    }

    #[test]
    fn cell_reflects_span_cover() {
        let m = CorrespondenceMatrix::new(3, vec![dummy_row(1, 2)]).unwrap();
        assert!(!m.cell(0, 0));
        assert!(m.cell(0, 1));
        assert!(!m.cell(0, 2));
    }
}
