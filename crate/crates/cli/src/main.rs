//! `nvkit` command-line entry point.
//!
//! Exit status: 0 on success, 1 when input data is bad (parse failures,
//! validation errors, failed round trips), 2 on usage errors.

mod commands;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use nvkit::Lexicon;

#[derive(Parser, Debug)]
#[command(name = "nvkit", version, about = "Fine-grained non-verbal vocalization corpus toolkit")]
pub struct Cli {
    /// Unit lexicon file (style, base, kind, duration_s); defaults to the built-in table
    #[arg(long, global = true, env = "NVKIT_LEXICON")]
    pub lexicon: Option<PathBuf>,

    /// More log output on stderr (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Worker threads for file-level parallelism (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse transcripts and print the canonical form or an AST dump
    Parse {
        #[command(flatten)]
        input: TextInput,
        #[arg(long, value_enum, default_value = "canonical")]
        format: ParseFormat,
        #[command(flatten)]
        out: Output,
    },
    /// Encode transcripts as NV token streams
    Tokenize {
        #[command(flatten)]
        input: TextInput,
        #[command(flatten)]
        out: Output,
    },
    /// Convert fine-grained tags to style-only tags
    Coarse {
        #[command(flatten)]
        input: TextInput,
        #[command(flatten)]
        out: Output,
    },
    /// Split WAV files on silence and list the segments
    Segment {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Silence threshold in dBFS
        #[arg(long, default_value_t = -40.0, allow_negative_numbers = true)]
        threshold: f64,
        /// Minimum silence length in ms
        #[arg(long, default_value_t = 200)]
        min_silence: u32,
        /// Silence kept around each segment in ms
        #[arg(long, default_value_t = 100)]
        buffer: u32,
        /// Analysis window in ms
        #[arg(long, default_value_t = 10)]
        window: u32,
        /// Also write each segment as `<stem>_<index>.wav` here
        #[arg(long)]
        split_dir: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Build a manifest from paired audio and transcript directories
    Manifest {
        #[arg(long)]
        audio: PathBuf,
        #[arg(long)]
        transcripts: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Per-style utterance counts of a manifest
    Stats {
        manifest: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check a manifest and print a violation report
    Validate {
        manifest: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Attach arousal/valence labels to a manifest
    Labels {
        manifest: PathBuf,
        labels: PathBuf,
        /// Range of the label file's values, rescaled to [0, 1] (e.g. `-1,1`)
        #[arg(long, allow_hyphen_values = true)]
        label_range: Option<nvkit::corpus::LabelRange>,
        #[command(flatten)]
        out: Output,
    },
    /// Render a transcript to a tone-burst WAV
    Render {
        #[command(flatten)]
        input: TextInput,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 22050)]
        sample_rate: u32,
        /// Silence between bursts in ms
        #[arg(long, default_value_t = 250)]
        gap_ms: u32,
    },
    /// Render random tags, segment them and check the recovered bursts
    Roundtrip {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_units: usize,
        #[arg(long, default_value_t = 10)]
        max_elongation: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Listening-test reports from rating and preference CSVs
    Eval {
        #[arg(long)]
        ratings: Option<PathBuf>,
        #[arg(long)]
        preferences: Option<PathBuf>,
        /// Append plain-text confusion matrices
        #[arg(long)]
        confusion: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum ParseFormat {
    Canonical,
    Ast,
}

#[derive(Args, Debug)]
pub struct TextInput {
    /// Transcript text
    pub text: Option<String>,
    /// Read transcripts from a file, one per line
    #[arg(long, conflicts_with = "text")]
    pub input: Option<PathBuf>,
}

impl TextInput {
    pub fn lines(&self) -> anyhow::Result<Vec<String>> {
        match (&self.text, &self.input) {
            (Some(t), None) => Ok(vec![t.clone()]),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(text.lines().filter(|l| !l.trim().is_empty()).map(String::from).collect())
            }
            _ => Err(UsageError("give either a transcript argument or --input FILE".into()).into()),
        }
    }
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write output here instead of stdout
    #[arg(long = "out", short = 'o')]
    pub path: Option<PathBuf>,
}

impl Output {
    pub fn write(&self, data: &str) -> anyhow::Result<()> {
        match &self.path {
            Some(p) => fs::write(p, data).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(data.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

/// Bad invocation detected after argument parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Data problems already reported on stderr; only the exit status remains.
#[derive(Debug)]
pub struct DataFailure;

impl std::fmt::Display for DataFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("input data errors")
    }
}

impl std::error::Error for DataFailure {}

pub fn load_lexicon(path: Option<&PathBuf>) -> anyhow::Result<Lexicon> {
    match path {
        Some(p) => Ok(Lexicon::load(p)?),
        None => Ok(Lexicon::default()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) if e.is::<DataFailure>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
