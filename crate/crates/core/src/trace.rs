//! JSON trace formats: serialized matrices, lattices, and the full
//! per-translation report. Matrix traces round-trip (given the corpus), so
//! fixtures and debugging dumps use the same schema.

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::DataError;
use crate::lattice::{Enumeration, Lattice, Path};
use crate::lexicon::TaggedWord;
use crate::matcher::{ChunkInstance, CorrespondenceMatrix, Span, TuneAction, TuneRule};

/// Row identity in a trace: the pair id for matched rows, `d1`, `d2`, …
/// for dummies (numbered by row order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RowId {
    Pair(u32),
    Dummy(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowTrace {
    pub id: RowId,
    pub span: [usize; 2],
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_id: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixTrace {
    pub n: usize,
    pub rows: Vec<RowTrace>,
}

fn row_trace(row: &ChunkInstance, dummy_counter: &mut usize) -> RowTrace {
    match row.pair_id() {
        Some(id) => RowTrace {
            id: RowId::Pair(id),
            span: [row.span.start, row.span.end],
            kind: "normal".to_string(),
            pair_id: Some(id),
        },
        None => {
            *dummy_counter += 1;
            RowTrace {
                id: RowId::Dummy(format!("d{dummy_counter}")),
                span: [row.span.start, row.span.end],
                kind: "dummy".to_string(),
                pair_id: None,
            }
        }
    }
}

/// Serialize a matrix. Dummy rows are labelled `d1`, `d2`, … in row order.
pub fn matrix_to_trace(matrix: &CorrespondenceMatrix) -> MatrixTrace {
    let mut dummies = 0;
    MatrixTrace {
        n: matrix.n,
        rows: matrix
            .rows
            .iter()
            .map(|r| row_trace(r, &mut dummies))
            .collect(),
    }
}

/// Rebuild a matrix from its trace. Matched rows are resolved against the
/// corpus; `words` (if given) labels dummy rows and row surfaces.
pub fn matrix_from_trace(
    trace: &MatrixTrace,
    corpus: &Corpus,
    words: &[String],
) -> Result<CorrespondenceMatrix, DataError> {
    let mut rows = Vec::with_capacity(trace.rows.len());
    for row in &trace.rows {
        let [start, end] = row.span;
        if start >= end || end > trace.n {
            return Err(DataError::SpanOutOfRange {
                start,
                end,
                n: trace.n,
            });
        }
        let span = Span::new(start, end);
        let surface = words
            .get(start..end)
            .map(|w| w.join(" "))
            .unwrap_or_else(|| format!("w{start}"));
        match (&row.id, row.kind.as_str()) {
            (RowId::Pair(id), "normal") => {
                let pair = corpus.get(*id).ok_or(DataError::UnknownPair(*id))?;
                if pair.en_template.len() != span.len() {
                    return Err(DataError::Malformed(format!(
                        "pair {id} covers {} words but the row spans {}",
                        pair.en_template.len(),
                        span.len()
                    )));
                }
                rows.push(ChunkInstance::normal(span, pair.clone(), surface));
            }
            (RowId::Dummy(_), "dummy") => rows.push(ChunkInstance::dummy(span, surface)),
            (_, kind) => {
                return Err(DataError::Malformed(format!(
                    "row kind `{kind}` does not match its id"
                )))
            }
        }
    }
    CorrespondenceMatrix::with_words(trace.n, words.to_vec(), rows)
}

/// One tuning step in trace form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTrace {
    pub rule: String,
    pub index: usize,
    pub row: RowTrace,
}

/// Serialize a tuning action list. Inserted dummies are numbered in
/// insertion order; [`replay_trace`] renumbers by final row position, so
/// the labels here only identify the action, not the tuned row.
pub fn actions_to_trace(actions: &[TuneAction]) -> Vec<ActionTrace> {
    let mut dummies = 0;
    actions
        .iter()
        .map(|a| {
            let row = match a.rule {
                TuneRule::Dummy => row_trace(&a.row, &mut dummies),
                _ => row_trace(&a.row, &mut 0),
            };
            ActionTrace {
                rule: a.rule.as_str().to_string(),
                index: a.index,
                row,
            }
        })
        .collect()
}

/// Replay traced actions against a traced matrix — insert for dummy
/// actions, remove otherwise. Dummy labels are positional, so they are
/// renumbered once the edits are applied; the result matches
/// [`matrix_to_trace`] of the tuned matrix.
pub fn replay_trace(raw: &MatrixTrace, actions: &[ActionTrace]) -> MatrixTrace {
    let mut rows = raw.rows.clone();
    for action in actions {
        if action.rule == TuneRule::Dummy.as_str() {
            rows.insert(action.index, action.row.clone());
        } else {
            rows.remove(action.index);
        }
    }
    let mut dummies = 0;
    for row in &mut rows {
        if row.kind == "dummy" {
            dummies += 1;
            row.id = RowId::Dummy(format!("d{dummies}"));
        }
    }
    MatrixTrace { n: raw.n, rows }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathTrace {
    /// Indices into the lattice's edge list.
    pub edges: Vec<usize>,
    /// `[dummy count, chunk count]`.
    pub cost: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeTrace {
    /// Node count, i.e. sentence length + 1.
    pub nodes: usize,
    pub edges: Vec<RowTrace>,
    /// Complete paths in enumeration order (possibly capped).
    pub paths: Vec<PathTrace>,
    /// Indices into `paths` of the cost-minimal ones.
    pub optimal: Vec<usize>,
    pub truncated: bool,
}

/// Serialize a lattice together with its enumerated and optimal paths.
/// Optimal paths that fell past the enumeration cap are not indexable and
/// are silently dropped from `optimal`.
pub fn lattice_to_trace(
    lattice: &Lattice,
    enumeration: &Enumeration,
    optimal: &[Path],
) -> LatticeTrace {
    let mut dummies = 0;
    let edges: Vec<RowTrace> = lattice
        .edges()
        .iter()
        .map(|r| row_trace(r, &mut dummies))
        .collect();

    let path_trace = |p: &Path| -> PathTrace {
        let cost = p.cost();
        PathTrace {
            edges: p.edges().iter().map(|e| edge_index(lattice, e)).collect(),
            cost: [cost.dummies, cost.chunks],
        }
    };

    let paths: Vec<PathTrace> = enumeration.paths.iter().map(path_trace).collect();
    let optimal = optimal
        .iter()
        .filter_map(|p| {
            let key = p.key();
            enumeration.paths.iter().position(|q| q.key() == key)
        })
        .collect();

    LatticeTrace {
        nodes: lattice.node_count(),
        edges,
        paths,
        optimal,
        truncated: enumeration.truncated,
    }
}

/// Position of a path edge in the lattice's edge list. After deduplication
/// the (span, pair id) combination is unique, which makes this total for
/// paths that came out of this lattice.
fn edge_index(lattice: &Lattice, edge: &ChunkInstance) -> usize {
    lattice
        .edges()
        .iter()
        .position(|e| e.span == edge.span && e.pair_id() == edge.pair_id())
        .expect("path edge not present in lattice")
}

#[derive(Debug, Clone, Serialize)]
pub struct TaggedTrace {
    pub surface: String,
    pub lemma: String,
    pub cat: String,
    pub attrs: Vec<String>,
}

impl From<&TaggedWord> for TaggedTrace {
    fn from(w: &TaggedWord) -> Self {
        TaggedTrace {
            surface: w.surface.clone(),
            lemma: w.lemma.clone(),
            cat: w.tag.category.clone(),
            attrs: w.tag.attrs.iter().map(|a| a.name().to_string()).collect(),
        }
    }
}

/// Everything the pipeline did for one sentence, in pipeline order.
#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub tagged: Vec<TaggedTrace>,
    /// Number of candidate spans examined: n(n+1)/2.
    pub span_count: usize,
    pub raw_matrix: MatrixTrace,
    pub tuning_actions: Vec<ActionTrace>,
    pub tuned_matrix: MatrixTrace,
    pub lattice: LatticeTrace,
    /// Per optimal path: each chunk's Arabic template text, null for
    /// dummies.
    pub templates: Vec<Vec<Option<String>>>,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}
