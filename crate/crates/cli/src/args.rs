use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use phishtext::corpus::CorpusFormat;
use phishtext::eval::OutputFormat;
use phishtext::scoring::{Aggregation, FilterMode};
use phishtext::text::PennTag;
use phishtext::Rational;

#[derive(Debug, Parser)]
#[command(
    name = "phishtext",
    version,
    about = "Classify emails as phishing or legitimate from their body text"
)]
pub struct Cli {
    /// More log output (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    /// Only print errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a lexicon artifact from a word-list config and WordNet.
    LexiconBuild(LexiconBuildArgs),
    /// Score one email and print the decision with its word scores.
    Classify(ClassifyArgs),
    /// Evaluate labeled corpora and write report files.
    Evaluate(EvaluateArgs),
    /// Tokenize and tag a text file; prints token<TAB>tag lines.
    Tag(TagArgs),
}

/// Where the keyword lexicon comes from.
#[derive(Debug, Args)]
pub struct LexiconSource {
    /// Prebuilt lexicon artifact (from lexicon-build); WordNet is not read.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["config", "no_expansion"])]
    pub lexicon: Option<PathBuf>,

    /// Lexicon config (JSON word lists); defaults to the built-in lists.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// WordNet dict directory used to expand keywords.
    #[arg(long, value_name = "DIR", env = "WNSEARCHDIR")]
    pub wordnet: Option<PathBuf>,

    /// Use configured words only, without WordNet expansion.
    #[arg(long)]
    pub no_expansion: bool,
}

#[derive(Debug, Args)]
pub struct LexiconBuildArgs {
    /// Lexicon config (JSON word lists); defaults to the built-in lists.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// WordNet dict directory (index.verb, data.verb).
    #[arg(long, value_name = "DIR", env = "WNSEARCHDIR")]
    pub wordnet: Option<PathBuf>,

    /// Build level-0 entries only, without WordNet (ignores WNSEARCHDIR).
    #[arg(long)]
    pub no_expansion: bool,

    /// Where to write the artifact.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifierArgs {
    /// Classifier settings file (JSON); the flags below override it.
    #[arg(long, value_name = "FILE")]
    pub classifier_config: Option<PathBuf>,

    /// Tags allowed to match: original = VB, expanded = all word tags,
    /// custom = --tags.
    #[arg(long, value_name = "MODE", value_parser = parse_mode)]
    pub mode: Option<FilterMode>,

    /// Comma-separated tags for --mode custom, e.g. VB,VBD,NN.
    #[arg(long, value_name = "TAGS", value_delimiter = ',', value_parser = parse_tag)]
    pub tags: Option<Vec<PennTag>>,

    /// Score at or above which an email is phishing.
    #[arg(long, value_name = "R")]
    pub threshold: Option<Rational>,

    /// Score at or above which an email gets a warning (needs --warning-band).
    #[arg(long, value_name = "R", requires = "warning_band")]
    pub warn_threshold: Option<Rational>,

    /// Three-way decisions: warning from 1.0, phishing from 1.5 unless the
    /// thresholds are given.
    #[arg(long)]
    pub warning_band: bool,

    /// How word scores combine into the email score.
    #[arg(long, value_name = "AGG", value_parser = parse_aggregation)]
    pub aggregation: Option<Aggregation>,

    /// x contributed by a direction word (default 0.5).
    #[arg(long, value_name = "R")]
    pub x_weight: Option<Rational>,

    /// a contributed by an urgency word (default 1).
    #[arg(long, value_name = "R")]
    pub a_weight: Option<Rational>,

    /// Analyze the body only, without the subject line.
    #[arg(long)]
    pub no_subject: bool,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["email", "pretagged"]))]
pub struct ClassifyArgs {
    /// Message file (RFC 822 / .eml).
    pub email: Option<PathBuf>,

    /// Pre-tagged token<TAB>tag file used instead of an email.
    #[arg(long, value_name = "FILE")]
    pub pretagged: Option<PathBuf>,

    /// Print the result as JSON.
    #[arg(long)]
    pub json: bool,

    #[command(flatten)]
    pub lexicon: LexiconSource,

    #[command(flatten)]
    pub classifier: ClassifierArgs,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("corpora").required(true).multiple(true).args(["phish", "legit"]))]
pub struct EvaluateArgs {
    /// Phishing corpus path.
    #[arg(long, value_name = "PATH")]
    pub phish: Option<PathBuf>,

    /// Legitimate corpus path.
    #[arg(long, value_name = "PATH")]
    pub legit: Option<PathBuf>,

    /// Layout of the phishing corpus.
    #[arg(long, value_name = "FORMAT", default_value = "mbox", value_parser = parse_format)]
    pub phish_format: CorpusFormat,

    /// Layout of the legitimate corpus.
    #[arg(long, value_name = "FORMAT", default_value = "eml_dir", value_parser = parse_format)]
    pub legit_format: CorpusFormat,

    /// File of "path label" lines overriding per-message labels.
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    /// Comma-separated modes to compare; the first is the baseline.
    #[arg(
        long,
        value_name = "MODES",
        value_delimiter = ',',
        value_parser = parse_mode,
        conflicts_with = "mode"
    )]
    pub modes: Option<Vec<FilterMode>>,

    /// Report formats, comma-separated.
    #[arg(long, value_name = "FORMATS", value_delimiter = ',', default_value = "csv,json", value_parser = parse_output_format)]
    pub format: Vec<OutputFormat>,

    /// Directory for the report files.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    /// Run on one thread.
    #[arg(long)]
    pub sequential: bool,

    #[command(flatten)]
    pub lexicon: LexiconSource,

    #[command(flatten)]
    pub classifier: ClassifierArgs,
}

#[derive(Debug, Args)]
pub struct TagArgs {
    /// Text file to tag; "-" reads standard input.
    pub input: PathBuf,
}

fn parse_mode(s: &str) -> Result<FilterMode, String> {
    s.parse()
        .map_err(|e: phishtext::scoring::ConfigError| e.to_string())
}

fn parse_tag(s: &str) -> Result<PennTag, String> {
    s.trim()
        .parse()
        .map_err(|e: phishtext::text::UnknownTagError| e.to_string())
}

fn parse_aggregation(s: &str) -> Result<Aggregation, String> {
    s.parse()
        .map_err(|e: phishtext::scoring::ConfigError| e.to_string())
}

fn parse_format(s: &str) -> Result<CorpusFormat, String> {
    s.parse()
        .map_err(|e: phishtext::corpus::ParseFormatError| e.to_string())
}

fn parse_output_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}
