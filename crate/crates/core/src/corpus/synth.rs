//! Synthetic corpora with prescribed per-style cardinalities, rendered with
//! the tone-burst oracle. Used to exercise the manifest pipeline end to end.

use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::CorpusError;
use crate::audio::write_wav;
use crate::grammar::{serialize, TranscriptBuilder};
use crate::lexicon::Lexicon;
use crate::oracle::{random_units, render_transcript, RenderParams};
use crate::style::NvStyle;

/// Utterance counts per category of the annotated NV corpus.
pub const CATEGORY_COUNTS: [(NvStyle, usize); 6] = [
    (NvStyle::Cheering, 262),
    (NvStyle::Yelling, 328),
    (NvStyle::LaughterOpen, 266),
    (NvStyle::LaughterClosed, 220),
    (NvStyle::Crying, 230),
    (NvStyle::Screaming, 154),
];

const SPEAKERS: usize = 60;

const SENTENCES: [&str; 6] = [
    "what did you do",
    "why you do this to me",
    "I can not believe it",
    "look at that",
    "are you serious",
    "it is happening again",
];

/// Writes `<speaker>_<style>_<nnnn>.wav` / `.txt` pairs. Each utterance has
/// its own RNG derived from `seed` and its index, so output is independent of
/// thread count. Returns the number of utterances written.
pub fn write_synthetic_corpus(
    audio_dir: &Path,
    transcript_dir: &Path,
    counts: &[(NvStyle, usize)],
    seed: u64,
    lexicon: &Lexicon,
    render: &RenderParams,
) -> Result<usize, CorpusError> {
    for dir in [audio_dir, transcript_dir] {
        std::fs::create_dir_all(dir).map_err(|e| CorpusError::io(dir, e))?;
    }
    let jobs: Vec<(NvStyle, usize)> = counts
        .iter()
        .flat_map(|&(style, n)| (0..n).map(move |i| (style, i)))
        .collect();

    jobs.par_iter()
        .enumerate()
        .try_for_each(|(k, &(style, i))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ k as u64);
            let speaker = rng.random_range(1..=SPEAKERS);
            let units = random_units(&mut rng, lexicon, style, 4, 8);
            let sentence = SENTENCES.choose(&mut rng).unwrap();
            let t = TranscriptBuilder::new().tag(style, units).verbal(sentence).build();
            let id = format!("spk{speaker:02}_{}_{i:04}", style.canonical_name().to_lowercase());

            let audio = render_transcript(lexicon, &t, render)
                .map_err(|e| CorpusError::io(audio_dir, std::io::Error::other(e)))?;
            let wav = audio_dir.join(format!("{id}.wav"));
            write_wav(&wav, &audio).map_err(|e| CorpusError::io(&wav, std::io::Error::other(e)))?;
            let txt = transcript_dir.join(format!("{id}.txt"));
            std::fs::write(&txt, serialize(&t) + "\n").map_err(|e| CorpusError::io(&txt, e))
        })?;
    Ok(jobs.len())
}
