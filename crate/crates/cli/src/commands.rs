use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use phishtext::corpus::{load_corpus_with, parse_message, Label, LoadOptions, Manifest};
use phishtext::eval::{
    analyze_corpus, compare_modes, emit_reports, evaluate_analyzed, AnalysisOptions, EvalReport,
};
use phishtext::lexicon::{build_lexicon, Lexicon, LexiconConfig};
use phishtext::scoring::{score_tokens, ClassifierConfig, EmailScore, FilterMode, PosFilter};
use phishtext::text::{render_pretagged, TextPipeline};
use phishtext::wordnet::WordNetDb;

use crate::args::{
    ClassifierArgs, ClassifyArgs, EvaluateArgs, LexiconBuildArgs, LexiconSource, TagArgs,
};
use crate::error::CliError;

pub fn lexicon_build(args: LexiconBuildArgs) -> Result<(), CliError> {
    let config = load_lexicon_config(args.config.as_deref())?;
    let db = match (&args.wordnet, args.no_expansion) {
        (_, true) => None,
        (Some(dir), false) => Some(load_wordnet(dir)?),
        (None, false) => {
            return Err(CliError::usage(
                "lexicon-build needs a WordNet dict directory (--wordnet or WNSEARCHDIR), \
                 or --no-expansion",
            ))
        }
    };
    let lexicon = build_lexicon(&config, db.as_ref()).map_err(CliError::input)?;
    lexicon
        .save(&args.out)
        .map_err(|e| CliError::input(format!("{}: {e}", args.out.display())))?;

    let [level0, level1] = lexicon.level_counts();
    let mut out = String::new();
    writeln!(out, "wrote {}", args.out.display()).unwrap();
    if let Some(version) = lexicon.wordnet_version() {
        writeln!(out, "wordnet: {version}").unwrap();
    }
    writeln!(out, "L0 entries: {level0}").unwrap();
    writeln!(out, "L1 entries: {level1}").unwrap();
    writeln!(out, "dropped expansions: {}", lexicon.dropped().len()).unwrap();
    for dropped in lexicon.dropped() {
        writeln!(
            out,
            "  {} (from {}): stem {:?} is a {} word",
            dropped.lemma, dropped.origin, dropped.stem, dropped.conflicts_with
        )
        .unwrap();
    }
    print_stdout(&out)
}

pub fn classify(args: ClassifyArgs) -> Result<(), CliError> {
    let config = classifier_config(&args.classifier, None)?;
    let lexicon = obtain_lexicon(&args.lexicon)?;
    let pipeline = TextPipeline::default();

    let (id, tokens) = if let Some(path) = &args.pretagged {
        let tsv = read_text(path)?;
        let tokens = pipeline
            .load_pretagged(&tsv)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        (path.display().to_string(), tokens)
    } else {
        let path = args.email.as_ref().expect("clap requires an input");
        let raw = read_bytes(path)?;
        let message =
            parse_message(&raw).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        if message.body.missing_text_part {
            log::warn!(
                "{}: no text/plain or text/html part; body is empty",
                path.display()
            );
        }
        let text = if args.classifier.no_subject {
            message.body.text
        } else {
            format!("{}\n\n{}", message.subject, message.body.text)
        };
        (path.display().to_string(), pipeline.analyze(&text))
    };

    let score = score_tokens(&id, &tokens, &lexicon, &config);
    if args.json {
        let json = serde_json::to_string_pretty(&score).map_err(CliError::internal)?;
        print_stdout(&format!("{json}\n"))
    } else {
        print_stdout(&render_score(&score, &config))
    }
}

fn render_score(score: &EmailScore, config: &ClassifierConfig) -> String {
    let mut out = String::new();
    writeln!(out, "decision: {}", score.decision).unwrap();
    writeln!(out, "score: {}", score.email_score).unwrap();
    writeln!(out, "config: {}", config.label()).unwrap();
    writeln!(out, "matches: {}", score.word_scores.len()).unwrap();
    if !score.word_scores.is_empty() {
        writeln!(out, "word\ttag\tL\tx\ta\tscore\torigin").unwrap();
        for ws in &score.word_scores {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                ws.surface, ws.pos, ws.entry.level, ws.x, ws.a, ws.score, ws.entry.origin
            )
            .unwrap();
        }
    }
    out
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let configs = evaluation_configs(&args)?;
    let lexicon = obtain_lexicon(&args.lexicon)?;
    let pipeline = TextPipeline::default();
    let manifest = args
        .manifest
        .as_deref()
        .map(Manifest::load)
        .transpose()
        .map_err(CliError::input)?;
    let load_options = LoadOptions { manifest };
    let analysis = AnalysisOptions {
        include_subject: !args.classifier.no_subject,
        parallel: !args.sequential,
    };

    let corpora = [
        (args.phish.as_deref(), args.phish_format, Label::Phishing),
        (args.legit.as_deref(), args.legit_format, Label::Legitimate),
    ];
    let mut reports: Vec<EvalReport> = Vec::new();
    let mut console = String::new();
    for (path, format, label) in corpora {
        let Some(path) = path else { continue };
        let corpus =
            load_corpus_with(path, format, label, &load_options).map_err(CliError::input)?;
        if !corpus.skipped.is_empty() {
            log::warn!(
                "{}: skipped {} of {} messages",
                path.display(),
                corpus.skipped.len(),
                corpus.encountered()
            );
            for skipped in &corpus.skipped {
                log::info!(
                    "skipped {} ({}): {}",
                    skipped.id,
                    skipped.source,
                    skipped.reason
                );
            }
        }
        let name = path.display().to_string();
        let analyzed = analyze_corpus(&name, &corpus.documents, &pipeline, analysis)
            .map_err(CliError::input)?;
        if configs.len() == 1 {
            let report =
                evaluate_analyzed(&analyzed, &lexicon, &configs[0]).map_err(CliError::input)?;
            writeln!(console, "{}", report.summary_line()).unwrap();
            reports.push(report);
        } else {
            let comparison =
                compare_modes(&analyzed, &lexicon, &configs).map_err(CliError::input)?;
            for report in &comparison.reports {
                writeln!(console, "{}", report.summary_line()).unwrap();
            }
            for delta in &comparison.deltas {
                writeln!(
                    console,
                    "  {} vs {}: {:+} phishing decisions ({:+.1} points)",
                    delta.config_label,
                    delta.baseline,
                    delta.decided_phishing,
                    delta.rate.to_f64() * 100.0
                )
                .unwrap();
            }
            reports.extend(comparison.reports);
        }
    }

    let written = emit_reports(&reports, &args.out, &args.format).map_err(CliError::input)?;
    for path in &written {
        log::info!("wrote {}", path.display());
    }
    writeln!(
        console,
        "reports: {} files in {}",
        written.len(),
        args.out.display()
    )
    .unwrap();
    print_stdout(&console)
}

fn evaluation_configs(args: &EvaluateArgs) -> Result<Vec<ClassifierConfig>, CliError> {
    let modes = match (&args.modes, args.classifier.mode) {
        (Some(modes), _) if modes.is_empty() => return Err(CliError::usage("--modes is empty")),
        (Some(modes), _) => modes.clone(),
        (None, Some(mode)) => vec![mode],
        (None, None) if args.classifier.tags.is_some() => {
            vec![
                FilterMode::Original,
                FilterMode::Expanded,
                FilterMode::Custom,
            ]
        }
        (None, None) if args.classifier.classifier_config.is_some() => {
            return Ok(vec![classifier_config(&args.classifier, None)?])
        }
        (None, None) => vec![FilterMode::Original, FilterMode::Expanded],
    };
    if args.classifier.tags.is_some() && !modes.contains(&FilterMode::Custom) {
        return Err(CliError::usage("--tags requires custom among the modes"));
    }
    modes
        .into_iter()
        .map(|mode| classifier_config(&args.classifier, Some(mode)))
        .collect()
}

pub fn tag(args: TagArgs) -> Result<(), CliError> {
    let text = if args.input.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::input(format!("standard input: {e}")))?;
        text
    } else {
        let bytes = read_bytes(&args.input)?;
        String::from_utf8_lossy(&bytes).into_owned()
    };
    let tokens = TextPipeline::default().analyze(&text);
    print_stdout(&render_pretagged(&tokens))
}

/// Builds the classifier settings: the settings file (or defaults), then
/// each flag on top. `mode` overrides `--mode` when comparing modes.
fn classifier_config(
    args: &ClassifierArgs,
    mode: Option<FilterMode>,
) -> Result<ClassifierConfig, CliError> {
    let mut config = match &args.classifier_config {
        Some(path) => {
            let text = read_text(path)?;
            serde_json::from_str::<ClassifierConfig>(&text)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
        }
        None => ClassifierConfig::default(),
    };

    if let Some(mode) = mode.or(args.mode) {
        let tags = if mode == FilterMode::Custom {
            args.tags.clone()
        } else {
            None
        };
        config.pos_filter = PosFilter::from_mode(mode, tags).map_err(CliError::usage)?;
    }
    if mode.is_none() && args.tags.is_some() && config.pos_filter.mode() != FilterMode::Custom {
        return Err(CliError::usage("--tags requires --mode custom"));
    }

    if args.warning_band {
        config = config.with_warning_band();
    }
    if let Some(threshold) = args.threshold {
        config.theta_phish = threshold;
        // In binary mode the warn threshold is unused; keep it valid.
        if !config.warning_band_enabled && config.theta_warn > threshold {
            config.theta_warn = threshold;
        }
    }
    if let Some(warn) = args.warn_threshold {
        config.theta_warn = warn;
    }
    if let Some(aggregation) = args.aggregation {
        config.aggregation = aggregation;
    }
    if let Some(x) = args.x_weight {
        config.x_weight_default = x;
    }
    if let Some(a) = args.a_weight {
        config.a_weight_default = a;
    }
    config.validate().map_err(CliError::usage)?;
    Ok(config)
}

fn obtain_lexicon(source: &LexiconSource) -> Result<Lexicon, CliError> {
    if let Some(path) = &source.lexicon {
        return Lexicon::load(path).map_err(CliError::input);
    }
    let config = load_lexicon_config(source.config.as_deref())?;
    let db = match (&source.wordnet, source.no_expansion) {
        (_, true) => None,
        (Some(dir), false) => Some(load_wordnet(dir)?),
        (None, false) => {
            log::warn!(
                "no WordNet dict given (--wordnet or WNSEARCHDIR); using configured words \
                 without expansion"
            );
            None
        }
    };
    build_lexicon(&config, db.as_ref()).map_err(CliError::input)
}

fn load_lexicon_config(path: Option<&Path>) -> Result<LexiconConfig, CliError> {
    match path {
        Some(path) => LexiconConfig::load(path).map_err(CliError::input),
        None => Ok(LexiconConfig::builtin()),
    }
}

fn load_wordnet(dir: &Path) -> Result<WordNetDb, CliError> {
    let db = WordNetDb::load_parts(dir, &[]).map_err(CliError::input)?;
    log::info!(
        "loaded WordNet {} from {}",
        db.version().unwrap_or("(unknown version)"),
        dir.display()
    );
    Ok(db)
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe is not an error.
fn print_stdout(text: &str) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::internal(e)),
        _ => Ok(()),
    }
}
