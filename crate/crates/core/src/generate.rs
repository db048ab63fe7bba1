//! Arabic generation: transfer a path's chunks to their templates, execute
//! the generation commands, and render the token stream.

use unicode_normalization::UnicodeNormalization;

use crate::error::GenError;
use crate::lattice::Path;
use crate::lexicon::{LexEntry, Lexicon, TaggedWord};
use crate::template::{ArabicTemplate, GenCommand};

/// How to render dummy chunks, which have no Arabic template.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DummyPolicy {
    /// Copy the English surface through.
    Copy,
    /// Drop copulas ("be" words) silently — Arabic nominal sentences have
    /// none — and copy everything else.
    #[default]
    SuppressCopula,
}

/// One output token plus its clitic flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenToken {
    pub text: String,
    pub clitic: bool,
}

/// The tokens generated for one chunk of a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedChunk {
    pub tokens: Vec<GenToken>,
    pub from_dummy: bool,
}

/// Execute a template's command groups against the words of one chunk.
/// Each group yields one token; a group that is a single bare category
/// reference inherits the clitic flag of the realization it picked.
pub fn execute(
    template: &ArabicTemplate,
    chunk_words: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<GeneratedChunk, GenError> {
    let mut tokens = Vec::with_capacity(template.groups().len());
    for group in template.groups() {
        let bare = ArabicTemplate::is_bare_ref(group);
        let mut text = String::new();
        let mut clitic = false;
        for cmd in group {
            match cmd {
                GenCommand::Literal(lit) => text.push_str(lit),
                GenCommand::CategoryRef {
                    category,
                    ordinal,
                    attrs,
                } => {
                    let word =
                        nth_of_category(chunk_words, category, *ordinal).ok_or_else(|| {
                            GenError::DanglingRef {
                                pair_id: None,
                                category: category.clone(),
                                ordinal: *ordinal,
                            }
                        })?;
                    let entry = find_entry(lexicon, word)?;
                    let r = entry.realize(attrs);
                    text.push_str(&r.text);
                    if bare {
                        clitic = r.clitic;
                    }
                }
            }
        }
        tokens.push(GenToken { text, clitic });
    }
    Ok(GeneratedChunk {
        tokens,
        from_dummy: false,
    })
}

/// The `ordinal`-th word (1-based) of the given category, counting left to
/// right within the chunk.
fn nth_of_category<'a>(
    words: &'a [TaggedWord],
    category: &str,
    ordinal: usize,
) -> Option<&'a TaggedWord> {
    words
        .iter()
        .filter(|w| w.tag.category == category)
        .nth(ordinal - 1)
}

fn find_entry<'a>(lexicon: &'a Lexicon, word: &TaggedWord) -> Result<&'a LexEntry, GenError> {
    lexicon
        .lookup(&word.lemma, Some(&word.tag.category))
        .next()
        .ok_or_else(|| GenError::MissingEntry {
            lemma: word.lemma.clone(),
            category: word.tag.category.clone(),
        })
}

/// A rendered translation plus any rendering warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    pub warnings: Vec<String>,
}

/// Join generated chunks into the final string: tokens separated by single
/// spaces, except that a clitic token glues itself to the next one. The
/// result is NFC-normalized. A clitic with nothing after it renders anyway
/// but earns a warning.
pub fn render(chunks: &[GeneratedChunk]) -> Rendered {
    let tokens: Vec<&GenToken> = chunks
        .iter()
        .flat_map(|c| &c.tokens)
        .filter(|t| !t.text.is_empty())
        .collect();
    let mut text = String::new();
    let mut warnings = Vec::new();
    for (i, token) in tokens.iter().enumerate() {
        text.push_str(&token.text);
        if i + 1 < tokens.len() && !token.clitic {
            text.push(' ');
        }
    }
    if tokens.last().is_some_and(|t| t.clitic) {
        warnings.push(format!(
            "clitic `{}` has no following token to attach to",
            tokens.last().unwrap().text
        ));
    }
    Rendered {
        text: text.nfc().collect(),
        warnings,
    }
}

/// Generate the translation of one complete path. `tagged` must be the
/// analysis the path's spans index into.
pub fn generate_path(
    path: &Path,
    tagged: &[TaggedWord],
    lexicon: &Lexicon,
    policy: DummyPolicy,
) -> Result<Rendered, GenError> {
    let mut chunks = Vec::with_capacity(path.edges().len());
    for edge in path.edges() {
        match edge.pair() {
            Some(pair) => {
                let words = &tagged[edge.span.start..edge.span.end];
                let chunk = execute(&pair.ar_template, words, lexicon).map_err(|e| match e {
                    GenError::DanglingRef {
                        category, ordinal, ..
                    } => GenError::DanglingRef {
                        pair_id: Some(pair.id),
                        category,
                        ordinal,
                    },
                    other => other,
                })?;
                chunks.push(chunk);
            }
            None => {
                let copula = tagged
                    .get(edge.span.start)
                    .is_some_and(|w| w.tag.category == "be");
                let tokens = if policy == DummyPolicy::SuppressCopula && copula {
                    Vec::new()
                } else {
                    vec![GenToken {
                        text: edge.surface.clone(),
                        clitic: false,
                    }]
                };
                chunks.push(GeneratedChunk {
                    tokens,
                    from_dummy: true,
                });
            }
        }
    }
    Ok(render(&chunks))
}

/// Generate every path's translation, in path order.
pub fn generate(
    paths: &[Path],
    tagged: &[TaggedWord],
    lexicon: &Lexicon,
    policy: DummyPolicy,
) -> Result<Vec<Rendered>, GenError> {
    paths
        .iter()
        .map(|p| generate_path(p, tagged, lexicon, policy))
        .collect()
}
