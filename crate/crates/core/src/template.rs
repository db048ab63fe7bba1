//! Parser for Arabic generation templates.
//!
//! A template is a sequence of parenthesized groups; each group produces one
//! output token. Inside a group, `add [text]` appends literal text and
//! `cat<k> [attrs]` appends the realization of the k-th word of the matched
//! chunk that has category `cat`, realized under the bracketed attributes
//! (or the default form when no brackets are given). Examples:
//!
//! ```text
//! (prep1) (v1 [source])
//! (add [X] n1 [pmean])
//! ```
//!
//! At most one category reference may appear per group, so the clitic flag
//! of a bare reference can be attributed to the whole token.

use std::fmt;

use crate::error::TemplateError;
use crate::vocab::{attrs_key, AttrSet, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenCommand {
    /// `add [text]` — splice the literal in.
    Literal(String),
    /// `n2 [pl,f]` — realize the 2nd `n` word of the chunk under `pl,f`.
    CategoryRef {
        category: String,
        ordinal: usize,
        attrs: AttrSet,
    },
}

impl fmt::Display for GenCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenCommand::Literal(text) => write!(f, "add [{text}]"),
            GenCommand::CategoryRef {
                category,
                ordinal,
                attrs,
            } => {
                write!(f, "{category}{ordinal}")?;
                if !attrs.is_empty() {
                    write!(f, " [{}]", attrs_key(attrs))?;
                }
                Ok(())
            }
        }
    }
}

/// A parsed template: one command group per output token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArabicTemplate {
    groups: Vec<Vec<GenCommand>>,
}

impl ArabicTemplate {
    pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Self, TemplateError> {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            vocab,
        }
        .parse()
    }

    pub fn groups(&self) -> &[Vec<GenCommand>] {
        &self.groups
    }

    /// A group consisting of a single bare category reference passes the
    /// realization's clitic flag through to its token.
    pub fn is_bare_ref(group: &[GenCommand]) -> bool {
        matches!(group, [GenCommand::CategoryRef { .. }])
    }
}

/// Canonical text form; parsing the display of a template yields an equal
/// template, and the display is used as the identity of the Arabic side
/// when collapsing repeated matrix rows.
impl fmt::Display for ArabicTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, group) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("(")?;
            for (j, cmd) in group.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{cmd}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

struct Parser<'v> {
    chars: Vec<char>,
    pos: usize,
    vocab: &'v Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, message: impl Into<String>) -> TemplateError {
        TemplateError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), TemplateError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.syntax(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.syntax(format!("expected `{want}`, found end of template"))),
        }
    }

    fn parse(mut self) -> Result<ArabicTemplate, TemplateError> {
        let mut groups = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.syntax("empty template"));
        }
        while self.peek().is_some() {
            groups.push(self.parse_group()?);
            self.skip_ws();
        }
        Ok(ArabicTemplate { groups })
    }

    fn parse_group(&mut self) -> Result<Vec<GenCommand>, TemplateError> {
        let group_pos = self.pos;
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some(_) => items.push(self.parse_item()?),
                None => return Err(self.syntax("unclosed group")),
            }
        }
        if items.is_empty() {
            return Err(TemplateError::Syntax {
                pos: group_pos,
                message: "empty group".into(),
            });
        }
        let refs = items
            .iter()
            .filter(|i| matches!(i, GenCommand::CategoryRef { .. }))
            .count();
        if refs > 1 {
            return Err(TemplateError::Syntax {
                pos: group_pos,
                message: "a group may hold at most one category reference".into(),
            });
        }
        Ok(items)
    }

    fn parse_item(&mut self) -> Result<GenCommand, TemplateError> {
        let word_pos = self.pos;
        let mut ident = String::new();
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            ident.push(self.bump().unwrap());
        }
        if ident.is_empty() {
            return Err(self.syntax("expected `add` or a category reference"));
        }
        let ident = ident.to_lowercase();

        if ident == "add" {
            self.skip_ws();
            self.expect('[')?;
            let text = self.bracket_body()?;
            if text.is_empty() {
                return Err(self.syntax("empty literal"));
            }
            return Ok(GenCommand::Literal(text));
        }

        let mut digits = String::new();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(self.syntax(format!("expected an ordinal after `{ident}`")));
        }
        let ordinal: usize = digits
            .parse()
            .map_err(|_| self.syntax("ordinal out of range"))?;
        if ordinal == 0 {
            return Err(TemplateError::ZeroOrdinal { pos: word_pos });
        }
        if !self.vocab.has_category(&ident) {
            return Err(TemplateError::UnknownCategory {
                name: ident,
                pos: word_pos,
            });
        }

        // An optional bracketed attribute list binds to this reference.
        let mark = self.pos;
        self.skip_ws();
        let attrs = if self.peek() == Some('[') {
            self.pos += 1;
            let body_pos = self.pos;
            let body = self.bracket_body()?;
            let mut attrs = AttrSet::new();
            for name in body.split(',') {
                let name = name.trim();
                if name.is_empty() {
                    return Err(TemplateError::Syntax {
                        pos: body_pos,
                        message: "empty attribute name".into(),
                    });
                }
                let attr = self
                    .vocab
                    .attr(name)
                    .map_err(|_| TemplateError::UnknownAttribute {
                        name: name.to_string(),
                        pos: body_pos,
                    })?;
                attrs.insert(attr);
            }
            attrs
        } else {
            self.pos = mark;
            AttrSet::new()
        };

        Ok(GenCommand::CategoryRef {
            category: ident,
            ordinal,
            attrs,
        })
    }

    /// Consume up to the closing `]`, returning the trimmed body.
    fn bracket_body(&mut self) -> Result<String, TemplateError> {
        let mut body = String::new();
        loop {
            match self.bump() {
                Some(']') => return Ok(body.trim().to_string()),
                Some(c) => body.push(c),
                None => return Err(self.syntax("unclosed `[`")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ArabicTemplate {
        ArabicTemplate::parse(text, &Vocabulary::builtin()).unwrap()
    }

    fn parse_err(text: &str) -> TemplateError {
        ArabicTemplate::parse(text, &Vocabulary::builtin()).unwrap_err()
    }

    #[test]
    fn two_groups_one_ref_each() {
        let t = parse("(prep1) (v1 [source])");
        assert_eq!(t.groups().len(), 2);
        assert_eq!(
            t.groups()[0],
            vec![GenCommand::CategoryRef {
                category: "prep".into(),
                ordinal: 1,
                attrs: AttrSet::new(),
            }]
        );
        let GenCommand::CategoryRef { attrs, .. } = &t.groups()[1][0] else {
            panic!("expected a category reference");
        };
        assert_eq!(attrs_key(attrs), "source");
    }

    #[test]
    fn literal_and_ref_share_a_group() {
        let t = parse("(add [X] n1 [pmean])");
        assert_eq!(t.groups().len(), 1);
        assert_eq!(t.groups()[0].len(), 2);
        assert_eq!(t.groups()[0][0], GenCommand::Literal("X".into()));
    }

    #[test]
    fn attrs_tolerate_spaces_and_canonicalize() {
        let t = parse("(adj1 [s ,f])");
        assert_eq!(t.to_string(), "(adj1 [s,f])");
        // Out-of-order attrs come back in vocabulary order.
        let t = parse("(n1 [f,pl])");
        assert_eq!(t.to_string(), "(n1 [pl,f])");
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "(prep1) (v1 [source])",
            "(add [X] n1 [pmean])",
            "(n1 [pmean] add [Y])",
        ] {
            let t = parse(text);
            let again = parse(&t.to_string());
            assert_eq!(t, again);
        }
    }

    #[test]
    fn ordinal_zero_is_rejected() {
        assert!(matches!(
            parse_err("(n0)"),
            TemplateError::ZeroOrdinal { .. }
        ));
    }

    #[test]
    fn missing_ordinal_is_rejected() {
        assert!(matches!(parse_err("(n)"), TemplateError::Syntax { .. }));
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(
            parse_err("(noun1)"),
            TemplateError::UnknownCategory { .. }
        ));
        assert!(matches!(
            parse_err("(n1 [plural])"),
            TemplateError::UnknownAttribute { .. }
        ));
    }

    #[test]
    fn two_refs_in_one_group_are_rejected() {
        let err = parse_err("(n1 v1)");
        assert!(err.to_string().contains("at most one"));
    }

    #[test]
    fn unclosed_and_empty_forms_are_rejected() {
        assert!(matches!(parse_err(""), TemplateError::Syntax { .. }));
        assert!(matches!(parse_err("()"), TemplateError::Syntax { .. }));
        assert!(matches!(parse_err("(n1"), TemplateError::Syntax { .. }));
        assert!(matches!(
            parse_err("(add [x)"),
            TemplateError::Syntax { .. }
        ));
        assert!(matches!(parse_err("n1"), TemplateError::Syntax { .. }));
    }
}
