//! `langsniff`: train language profiles, identify source files and evaluate
//! a model against a labeled corpus.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use langsniff::eval::evaluate;
use langsniff::features::render_observation;
use langsniff::{
    detect_all, extract_all, identify, train, walk_corpus, Execution, ExtensionMap, FeatureDepths,
    Model, SourceSample, TokenDatabase, TrainOptions,
};
use log::info;

#[derive(Debug, Parser)]
#[command(
    name = "langsniff",
    version,
    about = "Statistical programming-language identification"
)]
struct Cli {
    /// Run on a single thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a model from a directory of labeled source files.
    Train {
        corpus_dir: PathBuf,
        /// Where to write the model.
        #[arg(short, long)]
        output: PathBuf,
        /// Items compared per ranked feature, e.g. `keywords=40`. Repeatable.
        #[arg(long = "depth", value_name = "FEATURE=N", value_parser = parse_depth)]
        depths: Vec<(String, usize)>,
        /// File of `ext=Language` lines overriding the built-in extension map.
        #[arg(long, value_name = "FILE")]
        ext_map: Option<PathBuf>,
    },
    /// Rank the model's languages for one file (stdin when no file is given).
    Identify {
        file: Option<PathBuf>,
        #[arg(short, long)]
        model: PathBuf,
        /// Number of languages to print.
        #[arg(long, default_value_t = 5)]
        top: usize,
        /// Print the full per-feature breakdown as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Identify every file of a labeled corpus and report rank statistics.
    Eval {
        corpus_dir: PathBuf,
        #[arg(short, long)]
        model: PathBuf,
        /// Largest k for top-k accuracy.
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "FILE")]
        ext_map: Option<PathBuf>,
    },
    /// Print the comment and string delimiters detected in a file.
    DetectTokens { file: PathBuf },
    /// Print the feature values extracted from a file.
    Features { file: PathBuf },
}

fn parse_depth(arg: &str) -> Result<(String, usize), String> {
    let (name, n) = arg
        .split_once('=')
        .ok_or_else(|| format!("expected FEATURE=N, got `{arg}`"))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("depth `{n}` is not a number"))?;
    let mut probe = FeatureDepths::default();
    probe.set(name.trim(), n).map_err(|e| e.to_string())?;
    Ok((name.trim().to_owned(), n))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let execution = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let db = TokenDatabase::default();
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Train {
            corpus_dir,
            output,
            depths,
            ext_map,
        } => {
            let mut opts = TrainOptions {
                execution,
                ..TrainOptions::default()
            };
            for (name, n) in depths {
                opts.depths.set(&name, n)?;
            }
            let map = extension_map(ext_map.as_deref())?;
            let corpus = walk_corpus(&corpus_dir, &map)?;
            info!(
                "{} files seen, {} samples",
                corpus.files_seen,
                corpus.samples.len()
            );
            let model = train(&corpus.samples, &db, &opts)?;
            model.save(&output)?;
            let mut text = String::new();
            for (lang, n) in corpus.label_counts() {
                writeln!(text, "{lang}\t{n}")?;
            }
            let s = corpus.skipped;
            writeln!(
                text,
                "warnings: {} (invalid UTF-8 {}, empty {}, unreadable {}); ignored: {} (unknown extension {}, wrong directory {})",
                s.warnings(),
                s.invalid_utf8,
                s.empty,
                s.unreadable,
                s.unmapped + s.label_mismatch,
                s.unmapped,
                s.label_mismatch
            )?;
            writeln!(
                text,
                "wrote {} languages to {}",
                model.languages.len(),
                output.display()
            )?;
            out.write_all(text.as_bytes())?;
        }
        Command::Identify {
            file,
            model,
            top,
            json,
        } => {
            let model = Model::load(&model)?;
            let sample = read_sample(file.as_deref())?;
            let report = identify(&sample, &model, &db)?;
            let text = if json {
                report.to_canonical_json()?
            } else {
                report.render_table(top)
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Eval {
            corpus_dir,
            model,
            top,
            json,
            ext_map,
        } => {
            let model = Model::load(&model)?;
            let map = extension_map(ext_map.as_deref())?;
            let corpus = walk_corpus(&corpus_dir, &map)?;
            if corpus.samples.is_empty() {
                bail!("no samples found under {}", corpus_dir.display());
            }
            let result = evaluate(&corpus.samples, &model, &db, top, execution)?;
            let text = if json {
                result.to_canonical_json()?
            } else {
                result.render_text()
            };
            out.write_all(text.as_bytes())?;
        }
        Command::DetectTokens { file } => {
            let sample = read_sample(Some(&file))?;
            let found = detect_all(&sample, &db);
            let mut text = String::new();
            for (t, n) in &found.string_tokens {
                writeln!(text, "string\t{t}\t{n}")?;
            }
            for ((o, c), n) in &found.block_pairs {
                writeln!(text, "block\t{o}\t{c}\t{n}")?;
            }
            for (t, n) in &found.line_tokens {
                writeln!(text, "line\t{t}\t{n}")?;
            }
            out.write_all(text.as_bytes())?;
        }
        Command::Features { file } => {
            let sample = read_sample(Some(&file))?;
            out.write_all(render_observation(&extract_all(&sample, &db)).as_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn extension_map(overrides: Option<&Path>) -> Result<ExtensionMap> {
    let mut map = ExtensionMap::default();
    if let Some(path) = overrides {
        map.load_overrides(path)?;
    }
    Ok(map)
}

/// Reads a file (or stdin) as an unlabeled sample. The file name is kept only
/// as the sample's origin; identification never looks at it.
fn read_sample(file: Option<&Path>) -> Result<SourceSample> {
    let (origin, bytes) = match file {
        Some(path) => {
            let bytes =
                std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
            (path.display().to_string(), bytes)
        }
        None => {
            let mut bytes = Vec::new();
            io::stdin()
                .read_to_end(&mut bytes)
                .context("cannot read stdin")?;
            ("stdin".to_owned(), bytes)
        }
    };
    let text = String::from_utf8(bytes).with_context(|| format!("{origin} is not valid UTF-8"))?;
    Ok(SourceSample::unlabeled(origin, text))
}
