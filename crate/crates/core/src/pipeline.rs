//! The end-to-end engine: analyze, match, tune, search, generate.

use crate::corpus::{Corpus, Finding, ValidationReport};
use crate::error::EngineError;
use crate::generate::{execute, generate_path, render, DummyPolicy};
use crate::lattice::{build_lattice, enumerate_paths, select_optimal};
use crate::lexicon::{analyze_sentence, AffixRuleSet, Lexicon};
use crate::matcher::{build_matrix, find_chunks, tune_traced};
use crate::trace::{actions_to_trace, lattice_to_trace, matrix_to_trace, TraceReport};
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone)]
pub struct TranslateOptions {
    pub dummy_policy: DummyPolicy,
    /// Cap on exhaustive path enumeration (the trace's path list); optimal
    /// path selection is not affected by it.
    pub max_paths: usize,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            dummy_policy: DummyPolicy::default(),
            max_paths: 10_000,
        }
    }
}

/// A finished translation: one output per optimal path, plus the full
/// pipeline trace.
#[derive(Debug)]
pub struct Translation {
    /// Co-optimal translations in path enumeration order. The first is the
    /// engine's answer.
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    pub trace: TraceReport,
}

/// Lexicon, affix rules, and corpus bundled behind the translate call.
#[derive(Debug)]
pub struct Engine {
    lexicon: Lexicon,
    rules: AffixRuleSet,
    corpus: Corpus,
}

impl Engine {
    pub fn new(lexicon: Lexicon, rules: AffixRuleSet, corpus: Corpus) -> Engine {
        Engine {
            lexicon,
            rules,
            corpus,
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn rules(&self) -> &AffixRuleSet {
        &self.rules
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn translate(
        &self,
        sentence: &str,
        opts: &TranslateOptions,
    ) -> Result<Translation, EngineError> {
        let tagged = analyze_sentence(&self.lexicon, &self.rules, sentence);
        let n = tagged.len();

        let chunks = find_chunks(&tagged, &self.corpus);
        let raw = build_matrix(&tagged, chunks).expect("matched spans lie inside the sentence");
        let (tuned, actions) = tune_traced(&raw);

        let lattice = build_lattice(&tuned);
        let enumeration = enumerate_paths(&lattice, opts.max_paths);
        let optimal = select_optimal(&lattice)?;

        let mut outputs = Vec::with_capacity(optimal.len());
        let mut warnings = Vec::new();
        let mut templates = Vec::with_capacity(optimal.len());
        for path in &optimal {
            let rendered = generate_path(path, &tagged, &self.lexicon, opts.dummy_policy)?;
            outputs.push(rendered.text);
            warnings.extend(rendered.warnings);
            templates.push(
                path.edges()
                    .iter()
                    .map(|e| e.pair().map(|p| p.ar_template.to_string()))
                    .collect(),
            );
        }

        let trace = TraceReport {
            tagged: tagged.iter().map(Into::into).collect(),
            span_count: n * (n + 1) / 2,
            raw_matrix: matrix_to_trace(&raw),
            tuning_actions: actions_to_trace(&actions),
            tuned_matrix: matrix_to_trace(&tuned),
            lattice: lattice_to_trace(&lattice, &enumeration, &optimal),
            templates,
            outputs: outputs.clone(),
            warnings: warnings.clone(),
        };

        Ok(Translation {
            outputs,
            warnings,
            trace,
        })
    }

    /// Corpus consistency checks plus example round-trips: for every pair
    /// that stores both example sides, analyzing the English example and
    /// executing the pair's own template must reproduce the Arabic example
    /// exactly (after NFC on both sides).
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.corpus.validate();
        for pair in self.corpus.pairs() {
            let (Some(en), Some(ar)) = (&pair.en_example, &pair.ar_example) else {
                continue;
            };
            let tagged = analyze_sentence(&self.lexicon, &self.rules, en);
            match execute(&pair.ar_template, &tagged, &self.lexicon) {
                Ok(chunk) => {
                    let got = render(&[chunk]).text;
                    let expected: String = ar.nfc().collect();
                    if got != expected {
                        report.findings.push(Finding::ExampleMismatch {
                            pair_id: pair.id,
                            expected,
                            got,
                        });
                    }
                }
                Err(e) => report.findings.push(Finding::ExampleError {
                    pair_id: pair.id,
                    error: e.to_string(),
                }),
            }
        }
        report
    }
}
