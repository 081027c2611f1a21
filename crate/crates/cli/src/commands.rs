use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use nvkit::audio::{read_wav, split_on_silence, write_segment_listing, write_wav, SegmentationParams};
use nvkit::corpus::{
    attach_emotion_labels, build_manifest, compute_stats, validate, write_stats, write_violation_report,
    CorpusManifest, Severity,
};
use nvkit::eval::{
    confusion, parse_preferences, parse_ratings, preference, write_accuracy_report, write_mos_report,
    write_preference_report, Condition, Emotion, GroupBy, MosField,
};
use nvkit::grammar::{coarsen_text, Element};
use nvkit::oracle::{random_tag, render_transcript, round_trip, RenderParams};
use nvkit::{encode_tokens, parse_transcript, serialize, Lexicon};

use crate::{load_lexicon, Cli, Command, DataFailure, Output, ParseFormat, TextInput, UsageError};

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .context("building worker pool")?;
    let lexicon = load_lexicon(cli.lexicon.as_ref())?;
    pool.install(|| dispatch(cli.command, &lexicon))
}

fn dispatch(command: Command, lex: &Lexicon) -> anyhow::Result<()> {
    match command {
        Command::Parse { input, format, out } => per_line(&input, &out, |line| {
            let t = parse_transcript(line, lex)?;
            Ok(match format {
                ParseFormat::Canonical => format!("{}\n", serialize(&t)),
                ParseFormat::Ast => ast_dump(&t),
            })
        }),
        Command::Tokenize { input, out } => per_line(&input, &out, |line| {
            let t = parse_transcript(line, lex)?;
            Ok(format!("{}\n", encode_tokens(lex, &t)?))
        }),
        Command::Coarse { input, out } => per_line(&input, &out, |line| Ok(format!("{}\n", coarsen_text(line, lex)?))),
        Command::Segment {
            files,
            threshold,
            min_silence,
            buffer,
            window,
            split_dir,
            out,
        } => {
            let params = SegmentationParams {
                silence_threshold_dbfs: threshold,
                min_silence_ms: min_silence,
                keep_buffer_ms: buffer,
                window_ms: window,
            };
            params.validate().map_err(|e| UsageError(e.to_string()))?;
            segment(files, &params, split_dir.as_deref(), &out)
        }
        Command::Manifest { audio, transcripts, out } => {
            let outcome = build_manifest(&audio, &transcripts, lex)?;
            for issue in &outcome.issues {
                eprintln!("{issue}");
            }
            info!(
                "{} records, {} issues",
                outcome.manifest.records.len(),
                outcome.issues.len()
            );
            out.write(&outcome.manifest.to_tsv())?;
            if outcome.issues.is_empty() {
                Ok(())
            } else {
                Err(DataFailure.into())
            }
        }
        Command::Stats { manifest, out } => {
            let m = CorpusManifest::load(&manifest)?;
            out.write(&write_stats(&compute_stats(&m)))
        }
        Command::Validate { manifest, out } => {
            let m = CorpusManifest::load(&manifest)?;
            let violations = validate(&m, lex);
            out.write(&write_violation_report(&violations))?;
            if violations.iter().any(|v| v.severity == Severity::Error) {
                Err(DataFailure.into())
            } else {
                Ok(())
            }
        }
        Command::Labels {
            manifest,
            labels,
            label_range,
            out,
        } => {
            let m = CorpusManifest::load(&manifest)?;
            let text = fs::read_to_string(&labels).with_context(|| format!("reading {}", labels.display()))?;
            let (m, report) = attach_emotion_labels(&m, &text, label_range)?;
            info!("{} labeled, {} unlabeled", report.labeled, report.unlabeled);
            for id in &report.unmatched {
                warn!("label for unknown id {id}");
            }
            out.write(&m.to_tsv())
        }
        Command::Render {
            input,
            out,
            sample_rate,
            gap_ms,
        } => {
            let lines = input.lines()?;
            let [line] = lines.as_slice() else {
                return Err(UsageError("render takes exactly one transcript".into()).into());
            };
            if sample_rate == 0 {
                return Err(UsageError("sample rate must be positive".into()).into());
            }
            let params = RenderParams {
                sample_rate,
                gap_ms,
                ..RenderParams::default()
            };
            let t = parse_transcript(line, lex)?;
            let audio = render_transcript(lex, &t, &params)?;
            write_wav(&out, &audio)?;
            info!("wrote {:.3} s to {}", audio.duration_s(), out.display());
            Ok(())
        }
        Command::Roundtrip {
            n,
            seed,
            max_units,
            max_elongation,
            out,
        } => roundtrip(lex, n, seed, max_units, max_elongation, &out),
        Command::Eval {
            ratings,
            preferences,
            confusion: with_confusion,
            out,
        } => eval(ratings.as_deref(), preferences.as_deref(), with_confusion, &out),
    }
}

/// Runs `f` on every input line, reporting failures by line number and
/// carrying on with the rest.
fn per_line(
    input: &TextInput,
    out: &Output,
    f: impl Fn(&str) -> anyhow::Result<String>,
) -> anyhow::Result<()> {
    let lines = input.lines()?;
    let multi = input.input.is_some();
    let mut text = String::new();
    let mut failed = false;
    for (i, line) in lines.iter().enumerate() {
        match f(line) {
            Ok(s) => text.push_str(&s),
            Err(e) if multi => {
                eprintln!("line {}: {e}", i + 1);
                failed = true;
            }
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    out.write(&text)?;
    if failed {
        Err(DataFailure.into())
    } else {
        Ok(())
    }
}

fn ast_dump(t: &nvkit::AnnotatedTranscript) -> String {
    let mut out = String::new();
    for el in t.elements() {
        match el {
            Element::Tag(tag) => {
                let units: Vec<String> = tag
                    .units
                    .iter()
                    .map(|u| format!("{}+{}", u.base, u.elongation))
                    .collect();
                writeln!(
                    out,
                    "tag\t{}..{}\t{}\t{}",
                    tag.span.start,
                    tag.span.end,
                    tag.style,
                    units.join(",")
                )
                .unwrap();
            }
            Element::Verbal(v) => {
                writeln!(out, "verbal\t{}..{}\t{}", v.span.start, v.span.end, v.text).unwrap();
            }
        }
    }
    out.push('\n');
    out
}

fn segment(files: Vec<PathBuf>, params: &SegmentationParams, split_dir: Option<&Path>, out: &Output) -> anyhow::Result<()> {
    let mut files = files;
    files.sort();
    if let Some(dir) = split_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let results: Vec<anyhow::Result<String>> = files
        .par_iter()
        .map(|path| {
            let audio = read_wav(path).with_context(|| path.display().to_string())?;
            let segs = split_on_silence(&audio, params)?;
            if let Some(dir) = split_dir {
                let stem = path.file_stem().map_or_else(|| "segment".into(), |s| s.to_string_lossy());
                for (i, s) in segs.iter().enumerate() {
                    let dest = dir.join(format!("{stem}_{i:03}.wav"));
                    write_wav(&dest, &audio.slice(s)).with_context(|| dest.display().to_string())?;
                }
            }
            info!("{}: {} segments", path.display(), segs.len());
            Ok(write_segment_listing(&path.display().to_string(), &segs, audio.sample_rate))
        })
        .collect();

    let mut text = String::new();
    let mut failed = false;
    for r in results {
        match r {
            Ok(s) => text.push_str(&s),
            Err(e) => {
                eprintln!("error: {e:#}");
                failed = true;
            }
        }
    }
    out.write(&text)?;
    if failed {
        Err(DataFailure.into())
    } else {
        Ok(())
    }
}

fn roundtrip(
    lex: &Lexicon,
    n: usize,
    seed: u64,
    max_units: usize,
    max_elongation: usize,
    out: &Output,
) -> anyhow::Result<()> {
    if max_units == 0 {
        return Err(UsageError("--max-units must be at least 1".into()).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tags: Vec<_> = (0..n)
        .map(|_| random_tag(&mut rng, lex, max_units, max_elongation))
        .collect();
    let render = RenderParams::default();
    let seg = SegmentationParams::default();
    let results: Vec<_> = tags.par_iter().map(|t| round_trip(lex, t, &render, &seg)).collect();

    let mut text = String::new();
    let mut passed = 0;
    for (i, (t, r)) in tags.iter().zip(results).enumerate() {
        let r = r?;
        if r.passed() {
            passed += 1;
            continue;
        }
        writeln!(
            text,
            "FAIL\t{i}\t{}\texpected {:?}\trecovered {:?}",
            serialize(t),
            r.expected,
            r.recovered
        )
        .unwrap();
    }
    writeln!(text, "{passed}/{n} passed").unwrap();
    out.write(&text)?;
    if passed == n {
        Ok(())
    } else {
        Err(DataFailure.into())
    }
}

fn eval(ratings: Option<&Path>, preferences: Option<&Path>, with_confusion: bool, out: &Output) -> anyhow::Result<()> {
    if ratings.is_none() && preferences.is_none() {
        return Err(UsageError("give --ratings and/or --preferences".into()).into());
    }
    let mut text = String::new();
    if let Some(path) = ratings {
        let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let records = parse_ratings(file).with_context(|| path.display().to_string())?;
        for field in [MosField::Nmos, MosField::Emos] {
            writeln!(text, "# {}", field.name()).unwrap();
            text.push_str(&write_mos_report(field, &nvkit::eval::mos(&records, field, GroupBy::ConditionEmotion)?));
            text.push_str(&write_mos_report(field, &nvkit::eval::mos(&records, field, GroupBy::Condition)?));
        }
        text.push_str("# accuracy\n");
        text.push_str(&write_accuracy_report(&records)?);
        if with_confusion {
            for c in Condition::ALL {
                let m = confusion(&records, c);
                if Emotion::ALL.iter().all(|&e| m.row_total(e) == 0) {
                    continue;
                }
                writeln!(text, "# confusion {c}").unwrap();
                text.push_str(&m.render_text());
            }
        }
    }
    if let Some(path) = preferences {
        let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let records = parse_preferences(file).with_context(|| path.display().to_string())?;
        text.push_str("# preference\n");
        for e in [Emotion::Happy, Emotion::Sad] {
            if records.iter().any(|r| r.emotion == e) {
                text.push_str(&write_preference_report(&preference(&records, e)?));
            }
        }
    }
    out.write(&text)
}
