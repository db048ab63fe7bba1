//! The template corpus: tagged English patterns paired with Arabic
//! generation templates.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::DataError;
use crate::lexicon::Tag;
use crate::template::{ArabicTemplate, GenCommand};
use crate::vocab::Vocabulary;

/// One corpus entry: an English tag sequence and the commands that produce
/// its Arabic rendering, optionally with the example pair it was taken from.
#[derive(Debug, Clone)]
pub struct TemplatePair {
    pub id: u32,
    pub en_template: Vec<Tag>,
    pub ar_template: ArabicTemplate,
    pub en_example: Option<String>,
    pub ar_example: Option<String>,
}

impl TemplatePair {
    /// Canonical key of the English side, attributes included:
    /// `art [def] + n [pl,f]`.
    pub fn en_key(&self) -> String {
        en_key(&self.en_template)
    }

    /// Key on categories alone: `art n`. Coarser than [`en_key`], used to
    /// shortlist candidates before the attribute-subsumption test.
    pub fn cat_key(&self) -> String {
        cat_key(&self.en_template)
    }
}

impl fmt::Display for TemplatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}: {} → {}", self.id, self.en_key(), self.ar_template)
    }
}

pub fn en_key(tags: &[Tag]) -> String {
    let parts: Vec<String> = tags.iter().map(Tag::to_string).collect();
    parts.join(" + ")
}

fn cat_key(tags: &[Tag]) -> String {
    let parts: Vec<&str> = tags.iter().map(|t| t.category.as_str()).collect();
    parts.join(" ")
}

#[derive(Deserialize)]
struct TagRecord {
    cat: String,
    #[serde(default)]
    attrs: Vec<String>,
}

#[derive(Deserialize)]
struct CorpusRecord {
    id: u32,
    en_template: Vec<TagRecord>,
    ar_template: String,
    #[serde(default)]
    en_example: Option<String>,
    #[serde(default)]
    ar_example: Option<String>,
}

/// The loaded corpus. Pair order is file order, and every tiebreak
/// downstream (matching, deduplication, path enumeration) inherits it.
#[derive(Debug, Default)]
pub struct Corpus {
    pairs: Vec<Arc<TemplatePair>>,
    by_id: HashMap<u32, usize>,
    /// Exact template key (attributes included) → pair positions.
    by_en_key: HashMap<String, Vec<usize>>,
    /// Category sequence → pair positions.
    by_cat_key: HashMap<String, Vec<usize>>,
}

impl Corpus {
    pub fn from_reader(reader: impl BufRead, vocab: &Vocabulary) -> Result<Self, DataError> {
        let mut corpus = Corpus::default();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            corpus
                .push_record(&line, vocab)
                .map_err(|e| e.at_line(lineno))?;
        }
        Ok(corpus)
    }

    pub fn from_path(path: impl AsRef<Path>, vocab: &Vocabulary) -> Result<Self, DataError> {
        Corpus::from_reader(BufReader::new(File::open(path)?), vocab)
    }

    fn push_record(&mut self, line: &str, vocab: &Vocabulary) -> Result<(), DataError> {
        let rec: CorpusRecord =
            serde_json::from_str(line).map_err(|e| DataError::Malformed(e.to_string()))?;
        if rec.en_template.is_empty() {
            return Err(DataError::Malformed(format!(
                "pair {} has an empty English template",
                rec.id
            )));
        }
        if self.by_id.contains_key(&rec.id) {
            return Err(DataError::DuplicateId(rec.id));
        }
        let mut en_template = Vec::with_capacity(rec.en_template.len());
        for tag in &rec.en_template {
            en_template.push(Tag::new(
                vocab.category(&tag.cat)?,
                vocab.attr_set(&tag.attrs)?,
            ));
        }
        let ar_template = ArabicTemplate::parse(&rec.ar_template, vocab)?;
        let pair = Arc::new(TemplatePair {
            id: rec.id,
            en_template,
            ar_template,
            en_example: rec.en_example,
            ar_example: rec.ar_example,
        });

        let pos = self.pairs.len();
        self.by_id.insert(pair.id, pos);
        self.by_en_key.entry(pair.en_key()).or_default().push(pos);
        self.by_cat_key.entry(pair.cat_key()).or_default().push(pos);
        self.pairs.push(pair);
        Ok(())
    }

    pub fn pairs(&self) -> &[Arc<TemplatePair>] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&Arc<TemplatePair>> {
        self.by_id.get(&id).map(|&pos| &self.pairs[pos])
    }

    /// Pairs whose template key (attributes included) equals the query's,
    /// in corpus order. This is the exact-identity index; matching against
    /// analyzed sentences goes through [`Corpus::match_exact`] instead.
    pub fn lookup_key(&self, tags: &[Tag]) -> Vec<&Arc<TemplatePair>> {
        self.by_en_key
            .get(&en_key(tags))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&pos| &self.pairs[pos])
            .collect()
    }

    /// All pairs matching a query tag sequence: same length, same category
    /// at each position, and each template tag's attributes a subset of the
    /// query tag's. Results keep corpus order.
    pub fn match_exact(&self, query: &[Tag]) -> Vec<Arc<TemplatePair>> {
        if query.is_empty() {
            return Vec::new();
        }
        self.by_cat_key
            .get(&cat_key(query))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&pos| &self.pairs[pos])
            .filter(|p| p.en_template.iter().zip(query).all(|(t, q)| t.accepts(q)))
            .cloned()
            .collect()
    }

    /// Structural consistency checks; see [`Finding`] for what is reported.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.pairs.is_empty() {
            report.warnings.push("corpus is empty".to_string());
        }

        for pair in &self.pairs {
            let mut counts: HashMap<&str, usize> = HashMap::new();
            for tag in &pair.en_template {
                *counts.entry(tag.category.as_str()).or_default() += 1;
            }
            for group in pair.ar_template.groups() {
                for cmd in group {
                    if let GenCommand::CategoryRef {
                        category, ordinal, ..
                    } = cmd
                    {
                        if counts.get(category.as_str()).copied().unwrap_or(0) < *ordinal {
                            report.findings.push(Finding::DanglingRef {
                                pair_id: pair.id,
                                category: category.clone(),
                                ordinal: *ordinal,
                            });
                        }
                    }
                }
            }
        }

        // Two records are duplicates when everything but the id coincides —
        // template sides and stored examples alike. Same-template pairs with
        // different examples are legitimate independent observations.
        type RecordKey<'a> = (String, String, Option<&'a str>, Option<&'a str>);
        let mut seen: HashMap<RecordKey, u32> = HashMap::new();
        for pair in &self.pairs {
            let key = (
                pair.en_key(),
                pair.ar_template.to_string(),
                pair.en_example.as_deref(),
                pair.ar_example.as_deref(),
            );
            match seen.get(&key) {
                Some(&first) => report.findings.push(Finding::DuplicateRecords {
                    first_id: first,
                    second_id: pair.id,
                }),
                None => {
                    seen.insert(key, pair.id);
                }
            }
        }

        report
    }
}

/// A problem found by corpus validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    /// The Arabic template asks for a word the English template cannot bind.
    DanglingRef {
        pair_id: u32,
        category: String,
        ordinal: usize,
    },
    /// Two records identical in every field but the id.
    DuplicateRecords { first_id: u32, second_id: u32 },
    /// Generating from the stored English example did not reproduce the
    /// stored Arabic example.
    ExampleMismatch {
        pair_id: u32,
        expected: String,
        got: String,
    },
    /// Generating from the stored English example failed outright.
    ExampleError { pair_id: u32, error: String },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::DanglingRef {
                pair_id,
                category,
                ordinal,
            } => write!(
                f,
                "pair {pair_id}: template references {category}{ordinal}, which the English side cannot bind"
            ),
            Finding::DuplicateRecords {
                first_id,
                second_id,
            } => write!(f, "pair {second_id} duplicates pair {first_id}"),
            Finding::ExampleMismatch {
                pair_id,
                expected,
                got,
            } => write!(
                f,
                "pair {pair_id}: stored example `{expected}` but generation yields `{got}`"
            ),
            Finding::ExampleError { pair_id, error } => {
                write!(f, "pair {pair_id}: example generation failed: {error}")
            }
        }
    }
}

#[derive(Debug, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::builtin()
    }

    fn load(lines: &str) -> Corpus {
        Corpus::from_reader(lines.trim().as_bytes(), &vocab()).unwrap()
    }

    const SMALL: &str = r#"
{"id": 1, "en_template": [{"cat": "art", "attrs": ["def"]}, {"cat": "n", "attrs": ["pl", "f"]}], "ar_template": "(n1 [pmean])"}
{"id": 2, "en_template": [{"cat": "n", "attrs": ["pl", "f"]}], "ar_template": "(n1 [pmean])"}
{"id": 3, "en_template": [{"cat": "art"}, {"cat": "n"}], "ar_template": "(n1)"}
"#;

    fn tag(cat: &str, attrs: &[&str]) -> Tag {
        Tag::new(cat, vocab().attr_set(attrs.iter().copied()).unwrap())
    }

    #[test]
    fn match_requires_subsumption_per_position() {
        let corpus = load(SMALL);
        let query = [tag("art", &["def"]), tag("n", &["pl", "f"])];
        let ids: Vec<u32> = corpus.match_exact(&query).iter().map(|p| p.id).collect();
        // Pair 1 matches exactly; pair 3 matches because its attr-free tags
        // subsume anything of the right category. Pair 2 has the wrong
        // length/category shape.
        assert_eq!(ids, vec![1, 3]);
    }

    #[test]
    fn template_attrs_must_be_subset_of_query() {
        let corpus = load(SMALL);
        // Query noun lacks `f`, so pair 1 (which requires pl+f) is out.
        let query = [tag("art", &["def"]), tag("n", &["pl"])];
        let ids: Vec<u32> = corpus.match_exact(&query).iter().map(|p| p.id).collect();
        assert_eq!(ids, vec![3]);
    }

    #[test]
    fn query_order_and_length_matter() {
        let corpus = load(SMALL);
        assert!(corpus
            .match_exact(&[tag("n", &["pl", "f"]), tag("art", &["def"])])
            .is_empty());
        assert!(corpus.match_exact(&[tag("art", &["def"])]).is_empty());
        assert!(corpus.match_exact(&[]).is_empty());
    }

    #[test]
    fn lookup_key_is_exact_identity() {
        let corpus = load(SMALL);
        let hit = corpus.lookup_key(&[tag("art", &["def"]), tag("n", &["pl", "f"])]);
        assert_eq!(hit.len(), 1);
        assert_eq!(hit[0].id, 1);
        // Unlike match_exact, extra attributes on the query do not match.
        assert!(corpus
            .lookup_key(&[tag("art", &["def"]), tag("n", &["def", "pl", "f"])])
            .is_empty());
    }

    #[test]
    fn duplicate_id_is_a_load_error() {
        let lines = r#"
{"id": 1, "en_template": [{"cat": "n"}], "ar_template": "(n1)"}
{"id": 1, "en_template": [{"cat": "v"}], "ar_template": "(v1)"}
"#;
        let err = Corpus::from_reader(lines.trim().as_bytes(), &vocab()).unwrap_err();
        assert!(err.to_string().contains("duplicate corpus id 1"));
    }

    #[test]
    fn validate_flags_dangling_refs() {
        let corpus = load(r#"{"id": 7, "en_template": [{"cat": "n"}], "ar_template": "(n2)"}"#);
        let report = corpus.validate();
        assert_eq!(report.findings.len(), 1);
        assert!(matches!(
            report.findings[0],
            Finding::DanglingRef {
                pair_id: 7,
                ordinal: 2,
                ..
            }
        ));
    }

    #[test]
    fn validate_flags_full_record_duplicates_only() {
        let lines = r#"
{"id": 1, "en_template": [{"cat": "adj"}], "ar_template": "(adj1)", "en_example": "necessary"}
{"id": 2, "en_template": [{"cat": "adj"}], "ar_template": "(adj1)", "en_example": "necessary"}
{"id": 3, "en_template": [{"cat": "adj"}], "ar_template": "(adj1)", "en_example": "useful"}
"#;
        let report = load(lines).validate();
        assert_eq!(
            report.findings,
            vec![Finding::DuplicateRecords {
                first_id: 1,
                second_id: 2
            }]
        );
    }

    #[test]
    fn validate_warns_on_empty_corpus() {
        let corpus = Corpus::from_reader("".as_bytes(), &vocab()).unwrap();
        let report = corpus.validate();
        assert!(report.is_clean());
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn attrs_canonicalize_in_keys() {
        let corpus = load(
            r#"{"id": 1, "en_template": [{"cat": "n", "attrs": ["f", "pl"]}], "ar_template": "(n1)"}"#,
        );
        assert_eq!(corpus.pairs()[0].en_key(), "n [pl,f]");
    }
}
