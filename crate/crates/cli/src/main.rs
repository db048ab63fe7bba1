//! `chunklate`: translate English sentences into Arabic by chunk-template
//! matching against an example corpus.
//!
//! Exit codes: 0 on success (including unknown-word lookups and clean
//! validation), 1 when validation finds problems or no lattice path exists,
//! 2 on unreadable or malformed data files.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chunklate_core::{
    analyze_word, attrs_key, AffixRuleSet, Corpus, DummyPolicy, Engine, EngineError, LatticeError,
    Lexicon, TranslateOptions, Vocabulary,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "chunklate",
    version,
    about = "Example-based English→Arabic chunk translator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a sentence and print the optimal rendering(s)
    Translate(TranslateArgs),
    /// Check the corpus for dangling references, duplicates, and example
    /// round-trips
    Validate(DataArgs),
    /// Analyze one word and print its lemma, tag, and Arabic realizations
    Lookup(LookupArgs),
    /// Translate with the full pipeline trace (translate --trace --format json)
    Trace(TranslateArgs),
}

/// Data file locations. Individual flags win; otherwise files are looked up
/// inside the CHUNKLATE_DATA directory.
#[derive(Args)]
struct DataArgs {
    /// Directory holding corpus.jsonl, lexicon.jsonl, and affixes.jsonl
    #[arg(long, env = "CHUNKLATE_DATA", value_name = "DIR")]
    data: Option<PathBuf>,
    /// Corpus file (JSON Lines)
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,
    /// Lexicon file (JSON Lines)
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Affix rules file (JSON Lines)
    #[arg(long, value_name = "FILE")]
    affixes: Option<PathBuf>,
}

impl DataArgs {
    fn path(&self, explicit: &Option<PathBuf>, name: &str, flag: &str) -> Result<PathBuf> {
        if let Some(p) = explicit {
            return Ok(p.clone());
        }
        if let Some(dir) = &self.data {
            return Ok(dir.join(name));
        }
        bail!("no {name}: pass --{flag} or set CHUNKLATE_DATA");
    }

    fn load_lexicon(&self) -> Result<Lexicon> {
        let path = self.path(&self.lexicon, "lexicon.jsonl", "lexicon")?;
        Lexicon::from_path(&path, Vocabulary::builtin())
            .with_context(|| format!("loading lexicon {}", path.display()))
    }

    fn load_rules(&self, lexicon: &Lexicon) -> Result<AffixRuleSet> {
        let path = self.path(&self.affixes, "affixes.jsonl", "affixes")?;
        AffixRuleSet::from_path(&path, lexicon.vocab())
            .with_context(|| format!("loading affix rules {}", path.display()))
    }

    fn load_engine(&self) -> Result<Engine> {
        let lexicon = self.load_lexicon()?;
        let rules = self.load_rules(&lexicon)?;
        let path = self.path(&self.corpus, "corpus.jsonl", "corpus")?;
        let corpus = Corpus::from_path(&path, lexicon.vocab())
            .with_context(|| format!("loading corpus {}", path.display()))?;
        Ok(Engine::new(lexicon, rules, corpus))
    }
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    data: DataArgs,
    /// The sentence to translate
    #[arg(required = true, value_name = "WORD")]
    sentence: Vec<String>,
    /// Print every co-optimal translation instead of the first
    #[arg(long)]
    all: bool,
    /// What to do with dummy chunks (words with no matching template)
    #[arg(long, value_enum, default_value_t = PolicyArg::SuppressCopula)]
    dummy_policy: PolicyArg,
    /// Cap on enumerated paths in the trace
    #[arg(long, default_value_t = 10_000, value_name = "N")]
    max_paths: usize,
    /// Output format on stdout
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Dump the full pipeline trace as JSON on stderr
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct LookupArgs {
    #[command(flatten)]
    data: DataArgs,
    /// The word to analyze
    word: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    /// Copy the English word through
    Copy,
    /// Drop copulas, copy everything else
    SuppressCopula,
}

impl From<PolicyArg> for DummyPolicy {
    fn from(p: PolicyArg) -> DummyPolicy {
        match p {
            PolicyArg::Copy => DummyPolicy::Copy,
            PolicyArg::SuppressCopula => DummyPolicy::SuppressCopula,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Translate(args) => cmd_translate(args, false),
        Command::Trace(args) => cmd_translate(args, true),
        Command::Validate(args) => cmd_validate(args),
        Command::Lookup(args) => cmd_lookup(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn cmd_translate(args: TranslateArgs, force_trace_json: bool) -> Result<ExitCode> {
    let engine = args.data.load_engine()?;
    let sentence = args.sentence.join(" ");
    let opts = TranslateOptions {
        dummy_policy: args.dummy_policy.into(),
        max_paths: args.max_paths,
    };

    let translation = match engine.translate(&sentence, &opts) {
        Ok(t) => t,
        Err(EngineError::Lattice(LatticeError::NoPath)) => {
            eprintln!("no complete path covers the sentence");
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e.into()),
    };

    let selected: &[String] = if args.all {
        &translation.outputs
    } else {
        &translation.outputs[..1.min(translation.outputs.len())]
    };
    let format = if force_trace_json {
        FormatArg::Json
    } else {
        args.format
    };
    match format {
        FormatArg::Text => {
            for line in selected {
                println!("{line}");
            }
        }
        FormatArg::Json => {
            let doc = serde_json::json!({
                "outputs": selected,
                "warnings": translation.warnings,
            });
            println!("{doc}");
        }
    }
    if format == FormatArg::Text {
        for w in &translation.warnings {
            eprintln!("warning: {w}");
        }
    }
    if args.trace || force_trace_json {
        eprintln!("{}", serde_json::to_string(&translation.trace)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(data: DataArgs) -> Result<ExitCode> {
    let engine = data.load_engine()?;
    let report = engine.validate();
    for w in &report.warnings {
        println!("warning: {w}");
    }
    for finding in &report.findings {
        println!("{finding}");
    }
    if report.is_clean() {
        println!("ok: {} pairs", engine.corpus().len());
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_lookup(args: LookupArgs) -> Result<ExitCode> {
    let lexicon = args.data.load_lexicon()?;
    let rules = args.data.load_rules(&lexicon)?;
    let word = analyze_word(&lexicon, &rules, &args.word);
    println!(
        "{} {} [{}]",
        word.lemma,
        word.tag.category,
        attrs_key(&word.tag.attrs)
    );
    for entry in lexicon.lookup(&word.lemma, Some(&word.tag.category)) {
        for (key, text) in &entry.realizations {
            let clitic = if entry.clitic { " (clitic)" } else { "" };
            println!("  {key}: {text}{clitic}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
