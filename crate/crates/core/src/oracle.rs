//! Deterministic tone-burst renderer used as a stand-in for a trained TTS
//! model. Every NV unit (and every verbal word) becomes one sine burst;
//! bursts are separated by digital silence long enough for the segmenter to
//! split them, so counts and durations can be recovered mechanically.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Duration;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::audio::{split_on_silence, AudioBuffer, AudioError, SegmentationParams, FULL_SCALE};
use crate::grammar::{AnnotatedTranscript, TranscriptBuilder, UnitLexeme};
use crate::lexicon::{Lexicon, UnitKind};
use crate::semantics::{encode_tokens, NvToken, StreamElement, TokenStream, UnknownUnit};
use crate::style::NvStyle;

/// Length of one rendered verbal word.
pub const VERBAL_WORD: Duration = Duration::from_millis(200);

/// Allowed error between an intended and a recovered burst duration.
pub const DURATION_TOLERANCE_S: f64 = 0.030;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderParams {
    pub sample_rate: u32,
    pub burst_amplitude_dbfs: f64,
    /// Digital silence between consecutive bursts.
    pub gap_ms: u32,
    pub fade_ms: u32,
    pub tone_hz: BTreeMap<NvStyle, f64>,
    pub verbal_hz: f64,
}

impl Default for RenderParams {
    fn default() -> Self {
        let tone_hz = BTreeMap::from([
            (NvStyle::Cheering, 880.0),
            (NvStyle::Yelling, 660.0),
            (NvStyle::LaughterOpen, 523.0),
            (NvStyle::LaughterClosed, 523.0),
            (NvStyle::Crying, 392.0),
            (NvStyle::Screaming, 1046.0),
        ]);
        RenderParams {
            sample_rate: 22050,
            burst_amplitude_dbfs: -6.0,
            gap_ms: 250,
            fade_ms: 5,
            tone_hz,
            verbal_hz: 220.0,
        }
    }
}

/// One planned burst.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Burst {
    pub duration: Duration,
    pub hz: f64,
}

impl RenderParams {
    fn samples_for(&self, d: Duration) -> usize {
        ((d.as_nanos() * self.sample_rate as u128 + 500_000_000) / 1_000_000_000) as usize
    }

    fn peak(&self) -> f64 {
        (FULL_SCALE * 10f64.powf(self.burst_amplitude_dbfs / 20.0)).min(i16::MAX as f64)
    }

    fn style_hz(&self, style: NvStyle) -> f64 {
        self.tone_hz.get(&style).copied().unwrap_or(self.verbal_hz)
    }
}

pub fn token_bursts(tok: &NvToken, p: &RenderParams) -> Vec<Burst> {
    let burst = Burst {
        duration: tok.duration,
        hz: p.style_hz(tok.style),
    };
    match tok.kind {
        UnitKind::Discrete => vec![burst; tok.count],
        UnitKind::Continuous => vec![burst],
    }
}

/// Bursts for a whole stream, in order.
pub fn stream_bursts(stream: &TokenStream, p: &RenderParams) -> Vec<Burst> {
    let mut out = Vec::new();
    for e in &stream.elements {
        match e {
            StreamElement::Nv(tok) => out.extend(token_bursts(tok, p)),
            StreamElement::Verbal(text) => out.extend(text.split_whitespace().map(|_| Burst {
                duration: VERBAL_WORD,
                hz: p.verbal_hz,
            })),
        }
    }
    out
}

/// Renders bursts joined by `gap_ms` of silence; no leading or trailing
/// silence.
pub fn render_bursts(bursts: &[Burst], p: &RenderParams) -> AudioBuffer {
    let gap = (p.gap_ms as u64 * p.sample_rate as u64 / 1000) as usize;
    let fade = (p.fade_ms as u64 * p.sample_rate as u64 / 1000) as usize;
    let peak = p.peak();
    let mut samples = Vec::new();
    for (i, b) in bursts.iter().enumerate() {
        if i > 0 {
            samples.resize(samples.len() + gap, 0);
        }
        let n = p.samples_for(b.duration);
        samples.extend((0..n).map(|k| {
            let env = if fade == 0 {
                1.0
            } else {
                (k as f64 / fade as f64)
                    .min((n - 1 - k) as f64 / fade as f64)
                    .min(1.0)
            };
            let phase = 2.0 * PI * b.hz * k as f64 / p.sample_rate as f64;
            (peak * env * phase.sin()).round() as i16
        }));
    }
    AudioBuffer::new(samples, p.sample_rate)
}

pub fn render_token(tok: &NvToken, p: &RenderParams) -> AudioBuffer {
    render_bursts(&token_bursts(tok, p), p)
}

pub fn render_transcript(
    lexicon: &Lexicon,
    t: &AnnotatedTranscript,
    p: &RenderParams,
) -> Result<AudioBuffer, UnknownUnit> {
    let stream = encode_tokens(lexicon, t)?;
    Ok(render_bursts(&stream_bursts(&stream, p), p))
}

/// Per-burst durations in seconds: each detected segment with its kept
/// silence removed.
pub fn recover(audio: &AudioBuffer, params: &SegmentationParams) -> Result<Vec<f64>, AudioError> {
    if audio.is_empty() {
        return Ok(Vec::new());
    }
    let segs = split_on_silence(audio, params)?;
    Ok(segs
        .iter()
        .map(|s| {
            let (a, b) = s.core();
            (b - a) as f64 / audio.sample_rate as f64
        })
        .collect())
}

/// A single tag drawn uniformly over styles, with 1..=`max_units` units and
/// continuous elongations in 0..=`max_elongation`.
pub fn random_tag<R: Rng + ?Sized>(
    rng: &mut R,
    lexicon: &Lexicon,
    max_units: usize,
    max_elongation: usize,
) -> AnnotatedTranscript {
    let styles: Vec<NvStyle> = NvStyle::ALL
        .into_iter()
        .filter(|&s| !lexicon.entries(s).is_empty())
        .collect();
    let style = *styles.choose(rng).expect("lexicon has at least one style");
    let units = random_units(rng, lexicon, style, max_units, max_elongation);
    TranscriptBuilder::new().tag(style, units).build()
}

/// 1..=`max_units` random units of `style`. Panics if the lexicon has no
/// entries for it.
pub fn random_units<R: Rng + ?Sized>(
    rng: &mut R,
    lexicon: &Lexicon,
    style: NvStyle,
    max_units: usize,
    max_elongation: usize,
) -> Vec<UnitLexeme> {
    let n = rng.random_range(1..=max_units.max(1));
    (0..n)
        .map(|_| {
            let entry = lexicon
                .entries(style)
                .choose(rng)
                .expect("style has lexicon entries");
            let elongation = match entry.kind {
                UnitKind::Continuous => rng.random_range(0..=max_elongation),
                UnitKind::Discrete => 0,
            };
            UnitLexeme::new(entry.base.clone(), elongation)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub expected: Vec<f64>,
    pub recovered: Vec<f64>,
}

impl RoundTrip {
    pub fn count_ok(&self) -> bool {
        self.expected.len() == self.recovered.len()
    }

    pub fn max_error(&self) -> Option<f64> {
        if !self.count_ok() {
            return None;
        }
        Some(
            self.expected
                .iter()
                .zip(&self.recovered)
                .map(|(e, r)| (e - r).abs())
                .fold(0.0, f64::max),
        )
    }

    pub fn passed(&self) -> bool {
        self.max_error().is_some_and(|e| e <= DURATION_TOLERANCE_S)
    }
}

/// Render → segment → recover for one transcript.
pub fn round_trip(
    lexicon: &Lexicon,
    t: &AnnotatedTranscript,
    render: &RenderParams,
    seg: &SegmentationParams,
) -> Result<RoundTrip, RoundTripError> {
    let stream = encode_tokens(lexicon, t)?;
    let bursts = stream_bursts(&stream, render);
    let audio = render_bursts(&bursts, render);
    Ok(RoundTrip {
        expected: bursts.iter().map(|b| b.duration.as_secs_f64()).collect(),
        recovered: recover(&audio, seg)?,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum RoundTripError {
    #[error(transparent)]
    Unit(#[from] UnknownUnit),
    #[error(transparent)]
    Audio(#[from] AudioError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_transcript;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tok(style: NvStyle, base: &str, kind: UnitKind, count: usize, ms: u64) -> NvToken {
        NvToken {
            style,
            base: base.into(),
            kind,
            count,
            duration: Duration::from_millis(ms),
        }
    }

    fn render_text(text: &str) -> AudioBuffer {
        let lex = Lexicon::default();
        render_transcript(&lex, &parse_transcript(text, &lex).unwrap(), &RenderParams::default()).unwrap()
    }

    #[test]
    fn three_ha_layout() {
        let p = RenderParams::default();
        let audio = render_token(&tok(NvStyle::LaughterOpen, "ha", UnitKind::Discrete, 3, 250), &p);
        // 3 * 0.25 + 2 * 0.25
        assert_eq!(audio.len(), (1.25 * 22050.0_f64).round() as usize);
        let recovered = recover(&audio, &SegmentationParams::default()).unwrap();
        assert_eq!(recovered.len(), 3);
        for d in recovered {
            assert!((d - 0.25).abs() <= 0.03, "{d}");
        }
    }

    #[test]
    fn continuous_single_burst() {
        let p = RenderParams::default();
        let audio = render_token(&tok(NvStyle::Crying, "wuu", UnitKind::Continuous, 1, 1600), &p);
        assert_eq!(audio.len(), 35280);
        let single = render_token(&tok(NvStyle::Crying, "whep", UnitKind::Discrete, 1, 300), &p);
        assert_eq!(single.len(), 6615);
    }

    #[test]
    fn transcripts() {
        assert_eq!(render_text("<(screaming) ah>").len(), 17640);
        assert!(render_text("").is_empty());
        let r = recover(&render_text("<(crying) wuuuuu whep>"), &SegmentationParams::default()).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.6).abs() <= 0.03 && (r[1] - 0.30).abs() <= 0.03, "{r:?}");
        let r = recover(&render_text("<(crying) wuuuuu>"), &SegmentationParams::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.6).abs() <= 0.03);
    }

    #[test]
    fn verbal_words_are_bursts() {
        let r = recover(&render_text("<(yelling) hey> go away"), &SegmentationParams::default()).unwrap();
        assert_eq!(r.len(), 3);
        assert!((r[1] - 0.2).abs() <= 0.03);
    }

    #[test]
    fn peak_and_fade() {
        let p = RenderParams::default();
        let audio = render_token(&tok(NvStyle::Screaming, "ah", UnitKind::Continuous, 1, 800), &p);
        let peak = audio.samples.iter().map(|s| s.unsigned_abs()).max().unwrap();
        let expected = FULL_SCALE * 10f64.powf(-6.0 / 20.0);
        assert!((peak as f64 - expected).abs() / expected < 0.01);
        assert_eq!(audio.samples[0], 0);
        assert_eq!(*audio.samples.last().unwrap(), 0);
    }

    #[test]
    fn recover_empty() {
        assert!(recover(&AudioBuffer::new(vec![], 22050), &SegmentationParams::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn deterministic_render() {
        assert_eq!(render_text("<(cheering) wo hooo yo>"), render_text("<(cheering) wo hooo yo>"));
    }

    #[test]
    fn random_tags_parse_back() {
        let lex = Lexicon::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let t = random_tag(&mut rng, &lex, 5, 10);
            assert_eq!(parse_transcript(&t.source, &lex).unwrap(), t);
        }
    }
}
