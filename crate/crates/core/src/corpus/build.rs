use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{CorpusError, CorpusManifest, UtteranceRecord};
use crate::audio::read_wav;
use crate::grammar::{parse_transcript, serialize, GrammarError};
use crate::lexicon::Lexicon;

#[derive(Clone, Debug, PartialEq)]
pub enum BuildIssue {
    MissingTranscript { id: String },
    UnparseableTranscript { id: String, error: GrammarError },
    UnreadableAudio { id: String, error: String },
}

impl BuildIssue {
    pub fn id(&self) -> &str {
        match self {
            BuildIssue::MissingTranscript { id }
            | BuildIssue::UnparseableTranscript { id, .. }
            | BuildIssue::UnreadableAudio { id, .. } => id,
        }
    }
}

impl fmt::Display for BuildIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildIssue::MissingTranscript { id } => write!(f, "{id}: missing transcript"),
            BuildIssue::UnparseableTranscript { id, error } => {
                write!(f, "{id}: unparseable transcript: {error}")
            }
            BuildIssue::UnreadableAudio { id, error } => write!(f, "{id}: unreadable audio: {error}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BuildOutcome {
    pub manifest: CorpusManifest,
    /// Every problem found, ordered by id. Affected pairs are left out of
    /// the manifest.
    pub issues: Vec<BuildIssue>,
}

/// Speaker id is the file stem up to its first `_` (`spk07_crying_0001` → `spk07`).
pub fn speaker_from_id(id: &str) -> &str {
    id.split('_').next().unwrap_or(id)
}

/// Pairs every `*.wav` in `audio_dir` with `<stem>.txt` in `transcript_dir`.
///
/// Files are processed in parallel on the current rayon pool; the result
/// does not depend on scheduling.
pub fn build_manifest(
    audio_dir: impl AsRef<Path>,
    transcript_dir: impl AsRef<Path>,
    lexicon: &Lexicon,
) -> Result<BuildOutcome, CorpusError> {
    let audio_dir = audio_dir.as_ref();
    let transcript_dir = transcript_dir.as_ref();
    let mut wavs: Vec<PathBuf> = std::fs::read_dir(audio_dir)
        .map_err(|e| CorpusError::io(audio_dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|ext| ext.eq_ignore_ascii_case("wav"))
        })
        .collect();
    wavs.sort();

    let results: Vec<Result<UtteranceRecord, Vec<BuildIssue>>> = wavs
        .par_iter()
        .map(|wav| build_record(wav, transcript_dir, lexicon))
        .collect();

    let mut records = Vec::new();
    let mut issues = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(mut errs) => issues.append(&mut errs),
        }
    }
    issues.sort_by(|a, b| a.id().cmp(b.id()));
    Ok(BuildOutcome {
        manifest: CorpusManifest::new(records),
        issues,
    })
}

fn build_record(
    wav: &Path,
    transcript_dir: &Path,
    lexicon: &Lexicon,
) -> Result<UtteranceRecord, Vec<BuildIssue>> {
    let id = wav
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut issues = Vec::new();

    let audio = read_wav(wav)
        .map_err(|e| {
            issues.push(BuildIssue::UnreadableAudio {
                id: id.clone(),
                error: e.to_string(),
            })
        })
        .ok();

    let transcript = match std::fs::read_to_string(transcript_dir.join(format!("{id}.txt"))) {
        Ok(text) => match parse_transcript(&text, lexicon) {
            Ok(t) => Some(t),
            Err(error) => {
                issues.push(BuildIssue::UnparseableTranscript {
                    id: id.clone(),
                    error,
                });
                None
            }
        },
        Err(_) => {
            issues.push(BuildIssue::MissingTranscript { id: id.clone() });
            None
        }
    };

    match (audio, transcript) {
        (Some(audio), Some(t)) => Ok(UtteranceRecord {
            speaker_id: speaker_from_id(&id).to_string(),
            audio_path: wav.display().to_string(),
            transcript: serialize(&t),
            style: t.tags.first().map(|tag| tag.style),
            arousal: None,
            valence: None,
            duration_s: audio.duration_s(),
            id,
        }),
        _ => Err(issues),
    }
}
