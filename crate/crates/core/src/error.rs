//! Error types shared across the engine.

use thiserror::Error;

/// Errors raised while loading or validating data files (lexicon, affix
/// rules, corpus, trace fixtures).
#[derive(Debug, Error)]
pub enum DataError {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Wraps any other data error with the 1-based line it came from.
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<DataError>,
    },

    #[error("malformed record: {0}")]
    Malformed(String),

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("duplicate lexicon entry for ({lemma}, {category})")]
    DuplicateEntry { lemma: String, category: String },

    #[error("duplicate corpus id {0}")]
    DuplicateId(u32),

    #[error(transparent)]
    Template(#[from] TemplateError),

    #[error("span [{start}, {end}) out of range for sentence length {n}")]
    SpanOutOfRange { start: usize, end: usize, n: usize },

    #[error("row references corpus pair {0}, which is not in the corpus")]
    UnknownPair(u32),
}

impl DataError {
    /// Attach a line number to an error produced while reading a record.
    pub fn at_line(self, line: usize) -> DataError {
        DataError::AtLine {
            line,
            source: Box::new(self),
        }
    }
}

/// Errors from parsing the Arabic generation-command mini-language.
/// Positions are 0-based character offsets into the template text.
#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("template syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown category `{name}` in template at {pos}")]
    UnknownCategory { name: String, pos: usize },

    #[error("unknown attribute `{name}` in template at {pos}")]
    UnknownAttribute { name: String, pos: usize },

    #[error("category ordinal must be at least 1 (at {pos})")]
    ZeroOrdinal { pos: usize },
}

/// Errors from executing generation commands against an English chunk.
#[derive(Debug, Error)]
pub enum GenError {
    #[error("template{} references {category}{ordinal}, but the chunk has no such word",
            pair_id.map(|id| format!(" of pair {id}")).unwrap_or_default())]
    DanglingRef {
        pair_id: Option<u32>,
        category: String,
        ordinal: usize,
    },

    #[error("no lexicon entry for `{lemma}` ({category})")]
    MissingEntry { lemma: String, category: String },
}

/// Errors from path search over the chunk lattice.
#[derive(Debug, Error)]
pub enum LatticeError {
    /// A tuned matrix always admits a complete path, so hitting this
    /// indicates the lattice was built from an untuned matrix.
    #[error("no complete path through the lattice")]
    NoPath,

    #[error("path is not a contiguous cover of [0, {n})")]
    BrokenPath { n: usize },
}

/// Top-level pipeline error.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),

    #[error(transparent)]
    Gen(#[from] GenError),
}
