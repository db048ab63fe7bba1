//! Closed vocabularies for lexical categories and attribute tokens.
//!
//! Every category or attribute mentioned anywhere — lexicon entries, affix
//! rules, corpus templates, generation commands — must come from the
//! configured vocabulary, so typos surface at load time instead of as
//! silently failed matches. Attributes also carry their vocabulary position:
//! attribute sets are ordered and printed in that position order, which is
//! why a feminine-plural noun reads `pl,f` and not `f,pl`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;

use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::DataError;

const CATEGORIES: &[&str] = &["art", "n", "v", "be", "adj", "prep", "poss", "unk"];

const ATTRIBUTES: &[&str] = &[
    "def", "s", "p", "pl", "m", "f", "1", "2", "3", "ing", "source", "pmean",
];

/// Category used for words the analyzer cannot resolve.
pub const UNKNOWN_CATEGORY: &str = "unk";

/// One attribute token. Ordering follows the vocabulary list, not the
/// alphabet, so sets print the way the data files spell them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attr {
    order: u16,
    name: String,
}

impl Attr {
    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for Attr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for Attr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name)
    }
}

/// An ordered attribute set; iteration yields vocabulary order.
pub type AttrSet = BTreeSet<Attr>;

/// Canonical comma-joined form of an attribute set, e.g. `pl,f`.
pub fn attrs_key<'a>(attrs: impl IntoIterator<Item = &'a Attr>) -> String {
    let names: Vec<&str> = attrs.into_iter().map(Attr::name).collect();
    names.join(",")
}

#[derive(Debug, Default, Deserialize)]
struct VocabExtension {
    #[serde(default)]
    categories: Vec<String>,
    #[serde(default)]
    attributes: Vec<String>,
}

/// The configured category and attribute lists.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    categories: Vec<String>,
    category_index: HashMap<String, u16>,
    attributes: Vec<String>,
    attribute_index: HashMap<String, u16>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary::builtin()
    }
}

impl Vocabulary {
    /// The built-in vocabulary: categories `art n v be adj prep poss unk`,
    /// attributes `def s p pl m f 1 2 3 ing source pmean`.
    pub fn builtin() -> Self {
        let mut v = Vocabulary {
            categories: Vec::new(),
            category_index: HashMap::new(),
            attributes: Vec::new(),
            attribute_index: HashMap::new(),
        };
        for c in CATEGORIES {
            v.push_category(c);
        }
        for a in ATTRIBUTES {
            v.push_attribute(a);
        }
        v
    }

    /// Extend the built-in lists from a JSON object
    /// `{"categories": [...], "attributes": [...]}`. Extensions are
    /// appended, so they sort after every built-in attribute.
    pub fn builtin_extended(reader: impl BufRead) -> Result<Self, DataError> {
        let mut v = Vocabulary::builtin();
        let ext: VocabExtension =
            serde_json::from_reader(reader).map_err(|e| DataError::Malformed(e.to_string()))?;
        for c in &ext.categories {
            if !v.category_index.contains_key(c) {
                v.push_category(c);
            }
        }
        for a in &ext.attributes {
            if !v.attribute_index.contains_key(a) {
                v.push_attribute(a);
            }
        }
        Ok(v)
    }

    fn push_category(&mut self, name: &str) {
        self.category_index
            .insert(name.to_string(), self.categories.len() as u16);
        self.categories.push(name.to_string());
    }

    fn push_attribute(&mut self, name: &str) {
        self.attribute_index
            .insert(name.to_string(), self.attributes.len() as u16);
        self.attributes.push(name.to_string());
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn has_category(&self, name: &str) -> bool {
        self.category_index.contains_key(name)
    }

    /// Validate a category name, returning it in canonical (owned) form.
    pub fn category(&self, name: &str) -> Result<String, DataError> {
        if self.has_category(name) {
            Ok(name.to_string())
        } else {
            Err(DataError::UnknownCategory(name.to_string()))
        }
    }

    pub fn attr(&self, name: &str) -> Result<Attr, DataError> {
        match self.attribute_index.get(name) {
            Some(&order) => Ok(Attr {
                order,
                name: name.to_string(),
            }),
            None => Err(DataError::UnknownAttribute(name.to_string())),
        }
    }

    /// Build an attribute set from individual names.
    pub fn attr_set<I, S>(&self, names: I) -> Result<AttrSet, DataError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().map(|n| self.attr(n.as_ref())).collect()
    }

    /// Parse a comma-separated attribute key (as used in realization maps)
    /// into canonical form. Whitespace around commas is tolerated.
    pub fn parse_attrs_key(&self, key: &str) -> Result<AttrSet, DataError> {
        if key.trim().is_empty() {
            return Ok(AttrSet::new());
        }
        self.attr_set(key.split(',').map(str::trim))
    }
}
