//! Bilingual lexicon and affix-rule morphology.
//!
//! The lexicon maps an English lemma + category to a set of Arabic
//! realizations keyed by attribute combination. Affix rules let the analyzer
//! reduce inflected surface forms (`bodies`, `building`) to lemmas while
//! accumulating the attributes the affix expresses.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::DataError;
use crate::vocab::{attrs_key, AttrSet, Vocabulary, UNKNOWN_CATEGORY};

/// A category plus attribute set, e.g. `n [pl,f]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tag {
    pub category: String,
    pub attrs: AttrSet,
}

impl Tag {
    pub fn new(category: impl Into<String>, attrs: AttrSet) -> Self {
        Tag {
            category: category.into(),
            attrs,
        }
    }

    /// Subsumption test used by template matching: a template tag accepts a
    /// query tag when categories agree and every template attribute is
    /// present on the query. The query may carry extra attributes.
    pub fn accepts(&self, query: &Tag) -> bool {
        self.category == query.category && self.attrs.is_subset(&query.attrs)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.attrs.is_empty() {
            f.write_str(&self.category)
        } else {
            write!(f, "{} [{}]", self.category, attrs_key(&self.attrs))
        }
    }
}

impl Serialize for Tag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Tag", 2)?;
        s.serialize_field("cat", &self.category)?;
        let attrs: Vec<&str> = self.attrs.iter().map(|a| a.name()).collect();
        s.serialize_field("attrs", &attrs)?;
        s.end()
    }
}

/// One analyzed word of the input sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedWord {
    /// Surface form as it appeared (punctuation stripped, case kept).
    pub surface: String,
    pub lemma: String,
    pub tag: Tag,
}

/// An Arabic realization: surface text plus the clitic flag of the entry it
/// came from. Clitic tokens attach to the following word when rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub text: String,
    pub clitic: bool,
}

/// One lexicon entry. `realizations` is keyed by canonical attribute key
/// (`"pl,f"`), with `"default"` as the fallback form.
#[derive(Debug, Clone)]
pub struct LexEntry {
    pub lemma: String,
    pub category: String,
    pub base_attrs: AttrSet,
    pub realizations: BTreeMap<String, String>,
    pub clitic: bool,
}

pub const DEFAULT_KEY: &str = "default";

impl LexEntry {
    /// Pick the realization for a target attribute set: the exact key if
    /// present, the default otherwise. An empty target always means default.
    pub fn realize(&self, attrs: &AttrSet) -> Realization {
        let text = if attrs.is_empty() {
            None
        } else {
            self.realizations.get(&attrs_key(attrs))
        };
        let text = text
            .or_else(|| self.realizations.get(DEFAULT_KEY))
            .cloned()
            .unwrap_or_default();
        Realization {
            text,
            clitic: self.clitic,
        }
    }
}

#[derive(Deserialize)]
struct LexRecord {
    lemma: String,
    category: String,
    #[serde(default)]
    attrs: Vec<String>,
    arabic: BTreeMap<String, String>,
    #[serde(default)]
    clitic: bool,
}

/// The loaded lexicon. Owns the vocabulary so downstream loaders can borrow
/// it for validation.
#[derive(Debug)]
pub struct Lexicon {
    vocab: Vocabulary,
    entries: Vec<LexEntry>,
    by_lemma: HashMap<String, Vec<usize>>,
}

impl Lexicon {
    pub fn from_reader(reader: impl BufRead, vocab: Vocabulary) -> Result<Self, DataError> {
        let mut lex = Lexicon {
            vocab,
            entries: Vec::new(),
            by_lemma: HashMap::new(),
        };
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            lex.push_record(&line).map_err(|e| e.at_line(lineno))?;
        }
        Ok(lex)
    }

    pub fn from_path(path: impl AsRef<Path>, vocab: Vocabulary) -> Result<Self, DataError> {
        Lexicon::from_reader(BufReader::new(File::open(path)?), vocab)
    }

    fn push_record(&mut self, line: &str) -> Result<(), DataError> {
        let rec: LexRecord =
            serde_json::from_str(line).map_err(|e| DataError::Malformed(e.to_string()))?;
        if rec.lemma.trim().is_empty() {
            return Err(DataError::Malformed("empty lemma".into()));
        }
        let lemma = rec.lemma.to_lowercase();
        let category = self.vocab.category(&rec.category)?;
        let base_attrs = self.vocab.attr_set(&rec.attrs)?;

        // Realization keys are re-canonicalized so `s,f` and `f, s` collide
        // rather than shadowing each other.
        let mut realizations = BTreeMap::new();
        for (key, text) in &rec.arabic {
            if text.is_empty() {
                return Err(DataError::Malformed(format!(
                    "empty realization for key `{key}` of `{lemma}`"
                )));
            }
            let canon = if key == DEFAULT_KEY {
                DEFAULT_KEY.to_string()
            } else {
                attrs_key(&self.vocab.parse_attrs_key(key)?)
            };
            if realizations.insert(canon.clone(), text.clone()).is_some() {
                return Err(DataError::Malformed(format!(
                    "realization key `{canon}` of `{lemma}` appears twice"
                )));
            }
        }
        if !realizations.contains_key(DEFAULT_KEY) {
            return Err(DataError::Malformed(format!(
                "entry `{lemma}` is missing a default realization"
            )));
        }

        if self.lookup(&lemma, Some(&category)).next().is_some() {
            return Err(DataError::DuplicateEntry { lemma, category });
        }

        self.by_lemma
            .entry(lemma.clone())
            .or_default()
            .push(self.entries.len());
        self.entries.push(LexEntry {
            lemma,
            category,
            base_attrs,
            realizations,
            clitic: rec.clitic,
        });
        Ok(())
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries for a lemma (lowercased before lookup), optionally
    /// restricted to one category, in load order.
    pub fn lookup<'a>(
        &'a self,
        lemma: &str,
        category: Option<&str>,
    ) -> impl Iterator<Item = &'a LexEntry> + 'a {
        let key = lemma.to_lowercase();
        let category = category.map(str::to_string);
        self.by_lemma
            .get(&key)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&i| &self.entries[i])
            .filter(move |e| category.as_deref().is_none_or(|c| e.category == c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffixKind {
    Prefix,
    Suffix,
}

/// One affix rule: strip `affix`, optionally splice `replace_with` back in,
/// and add `add_attrs` to the base entry's attributes. The rule only applies
/// to entries of its category.
#[derive(Debug, Clone)]
pub struct AffixRule {
    pub kind: AffixKind,
    pub affix: String,
    pub category: String,
    pub add_attrs: AttrSet,
    pub replace_with: Option<String>,
}

impl AffixRule {
    /// Candidate lemma after stripping this affix, or None when the token
    /// does not carry the affix (or nothing would remain of it).
    fn strip(&self, token: &str) -> Option<String> {
        let stem = match self.kind {
            AffixKind::Prefix => {
                let rest = token.strip_prefix(&self.affix)?;
                format!("{}{rest}", self.replace_with.as_deref().unwrap_or(""))
            }
            AffixKind::Suffix => {
                let rest = token.strip_suffix(&self.affix)?;
                format!("{rest}{}", self.replace_with.as_deref().unwrap_or(""))
            }
        };
        (!stem.is_empty()).then_some(stem)
    }
}

#[derive(Deserialize)]
struct AffixRecord {
    kind: String,
    affix: String,
    category: String,
    #[serde(default)]
    add_attrs: Vec<String>,
    #[serde(default)]
    replace_with: Option<String>,
}

/// Affix rules grouped by side, longest affix first so `-ies` is tried
/// before `-s`. Ties keep file order.
#[derive(Debug, Default)]
pub struct AffixRuleSet {
    prefixes: Vec<AffixRule>,
    suffixes: Vec<AffixRule>,
}

impl AffixRuleSet {
    pub fn empty() -> Self {
        AffixRuleSet::default()
    }

    pub fn from_reader(reader: impl BufRead, vocab: &Vocabulary) -> Result<Self, DataError> {
        let mut rules = AffixRuleSet::default();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            rules
                .push_record(&line, vocab)
                .map_err(|e| e.at_line(lineno))?;
        }
        rules
            .prefixes
            .sort_by_key(|r| std::cmp::Reverse(r.affix.chars().count()));
        rules
            .suffixes
            .sort_by_key(|r| std::cmp::Reverse(r.affix.chars().count()));
        Ok(rules)
    }

    pub fn from_path(path: impl AsRef<Path>, vocab: &Vocabulary) -> Result<Self, DataError> {
        AffixRuleSet::from_reader(BufReader::new(File::open(path)?), vocab)
    }

    fn push_record(&mut self, line: &str, vocab: &Vocabulary) -> Result<(), DataError> {
        let rec: AffixRecord =
            serde_json::from_str(line).map_err(|e| DataError::Malformed(e.to_string()))?;
        let kind = match rec.kind.as_str() {
            "prefix" => AffixKind::Prefix,
            "suffix" => AffixKind::Suffix,
            other => {
                return Err(DataError::Malformed(format!(
                    "affix kind must be `prefix` or `suffix`, got `{other}`"
                )))
            }
        };
        if rec.affix.is_empty() {
            return Err(DataError::Malformed("empty affix".into()));
        }
        let rule = AffixRule {
            kind,
            affix: rec.affix,
            category: vocab.category(&rec.category)?,
            add_attrs: vocab.attr_set(&rec.add_attrs)?,
            replace_with: rec.replace_with,
        };
        match kind {
            AffixKind::Prefix => self.prefixes.push(rule),
            AffixKind::Suffix => self.suffixes.push(rule),
        }
        Ok(())
    }

    pub fn prefixes(&self) -> &[AffixRule] {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &[AffixRule] {
        &self.suffixes
    }
}

/// Analyze one token. Candidates are tried in a fixed order — the token as
/// is, prefix stripped, suffix stripped, then both — and the first that
/// finds a lexicon entry wins. Stripped lookups only accept entries of the
/// rule's category; attributes are the entry's base set plus whatever the
/// applied affixes add. A token nothing matches comes back `unk` with
/// itself (lowercased) as the lemma.
pub fn analyze_word(lexicon: &Lexicon, rules: &AffixRuleSet, surface: &str) -> TaggedWord {
    let token = surface.to_lowercase();

    let direct =
        |lemma: &str, category: Option<&str>, extra: &[&AffixRule]| -> Option<TaggedWord> {
            let entry = lexicon.lookup(lemma, category).next()?;
            let mut attrs = entry.base_attrs.clone();
            for rule in extra {
                attrs.extend(rule.add_attrs.iter().cloned());
            }
            Some(TaggedWord {
                surface: surface.to_string(),
                lemma: entry.lemma.clone(),
                tag: Tag::new(entry.category.clone(), attrs),
            })
        };

    if let Some(w) = direct(&token, None, &[]) {
        return w;
    }
    for p in &rules.prefixes {
        if let Some(stem) = p.strip(&token) {
            if let Some(w) = direct(&stem, Some(&p.category), &[p]) {
                return w;
            }
        }
    }
    for s in &rules.suffixes {
        if let Some(stem) = s.strip(&token) {
            if let Some(w) = direct(&stem, Some(&s.category), &[s]) {
                return w;
            }
        }
    }
    for p in &rules.prefixes {
        let Some(outer) = p.strip(&token) else {
            continue;
        };
        for s in &rules.suffixes {
            if s.category != p.category {
                continue;
            }
            if let Some(stem) = s.strip(&outer) {
                if let Some(w) = direct(&stem, Some(&p.category), &[p, s]) {
                    return w;
                }
            }
        }
    }

    TaggedWord {
        surface: surface.to_string(),
        lemma: token,
        tag: Tag::new(UNKNOWN_CATEGORY, AttrSet::new()),
    }
}

/// Whitespace-tokenize a sentence, strip terminal punctuation from each
/// token, and analyze the survivors in order.
pub fn analyze_sentence(lexicon: &Lexicon, rules: &AffixRuleSet, text: &str) -> Vec<TaggedWord> {
    text.split_whitespace()
        .filter_map(|raw| {
            let token = raw.trim_end_matches(['.', ',', ';', ':', '!', '?']);
            (!token.is_empty()).then(|| analyze_word(lexicon, rules, token))
        })
        .collect()
}
