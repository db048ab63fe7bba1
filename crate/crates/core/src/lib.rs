//! Example-based English→Arabic translation over tagged chunk templates.
//!
//! The pipeline: analyze the sentence into tagged words, match every
//! contiguous span against a corpus of template pairs, tune the resulting
//! correspondence matrix (collapse repeats, insert dummy chunks over
//! uncovered words, prune rows that can't reach a complete cover), search
//! the chunk lattice for the cheapest segmentations — fewest dummies, then
//! fewest chunks — and execute each chunk's Arabic generation template.
//!
//! [`Engine::translate`] runs the whole pipeline and returns the
//! translations together with a serializable trace of every stage.

pub mod corpus;
pub mod error;
pub mod generate;
pub mod lattice;
pub mod lexicon;
pub mod matcher;
pub mod pipeline;
pub mod template;
pub mod trace;
pub mod vocab;

pub use corpus::{Corpus, Finding, TemplatePair, ValidationReport};
pub use error::{DataError, EngineError, GenError, LatticeError, TemplateError};
pub use generate::{
    execute, generate, generate_path, render, DummyPolicy, GenToken, GeneratedChunk, Rendered,
};
pub use lattice::{
    build_lattice, enumerate_paths, select_optimal, Enumeration, Lattice, Path, PathCost,
};
pub use lexicon::{
    analyze_sentence, analyze_word, AffixKind, AffixRule, AffixRuleSet, LexEntry, Lexicon,
    Realization, Tag, TaggedWord,
};
pub use matcher::{
    build_matrix, dedupe_repeated, enumerate_spans, find_chunks, insert_dummies,
    prune_unreachable_deadend, replay, tune, tune_traced, ChunkInstance, ChunkKind,
    CorrespondenceMatrix, Span, TuneAction, TuneRule,
};
pub use pipeline::{Engine, TranslateOptions, Translation};
pub use template::{ArabicTemplate, GenCommand};
pub use trace::{
    actions_to_trace, lattice_to_trace, matrix_from_trace, matrix_to_trace, replay_trace,
    ActionTrace, LatticeTrace, MatrixTrace, PathTrace, RowId, RowTrace, TraceReport,
};
pub use vocab::{attrs_key, Attr, AttrSet, Vocabulary};
