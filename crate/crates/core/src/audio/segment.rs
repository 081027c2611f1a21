//! Energy-based silence detection and splitting.
//!
//! Audio is scanned in fixed, non-overlapping windows of `window_ms`. A
//! window is silent when its RMS level in dBFS is below the threshold, and a
//! run of silent windows counts as silence only if it lasts at least
//! `min_silence_ms`. Everything else is split into segments, each padded with
//! up to `keep_buffer_ms` of the neighbouring silence.

use std::fmt::Write as _;

use super::{AudioBuffer, AudioError};

/// Full-scale reference amplitude for 16-bit PCM.
pub const FULL_SCALE: f64 = 32768.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentationParams {
    pub silence_threshold_dbfs: f64,
    pub min_silence_ms: u32,
    pub keep_buffer_ms: u32,
    pub window_ms: u32,
}

impl Default for SegmentationParams {
    fn default() -> Self {
        SegmentationParams {
            silence_threshold_dbfs: -40.0,
            min_silence_ms: 200,
            keep_buffer_ms: 100,
            window_ms: 10,
        }
    }
}

impl SegmentationParams {
    pub fn validate(&self) -> Result<(), AudioError> {
        if !self.silence_threshold_dbfs.is_finite() {
            return Err(AudioError::InvalidParams("threshold must be finite".into()));
        }
        if self.min_silence_ms == 0 {
            return Err(AudioError::InvalidParams("min_silence_ms must be > 0".into()));
        }
        if self.window_ms == 0 {
            return Err(AudioError::InvalidParams("window_ms must be > 0".into()));
        }
        Ok(())
    }

    /// Window length in samples (at least one).
    pub fn window_samples(&self, sample_rate: u32) -> usize {
        ((self.window_ms as u64 * sample_rate as u64 / 1000) as usize).max(1)
    }
}

/// Silence run in samples, `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SilenceInterval {
    pub start: usize,
    pub end: usize,
}

impl SilenceInterval {
    pub fn start_ms(&self, sample_rate: u32) -> f64 {
        self.start as f64 * 1000.0 / sample_rate as f64
    }

    pub fn end_ms(&self, sample_rate: u32) -> f64 {
        self.end as f64 * 1000.0 / sample_rate as f64
    }
}

/// A segment `[start, end)` in samples, including the kept silence.
/// `lead` and `trail` are how many of those samples are kept silence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentSpec {
    pub start: usize,
    pub end: usize,
    pub lead: usize,
    pub trail: usize,
}

impl SegmentSpec {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// The non-silent part, without kept buffers.
    pub fn core(&self) -> (usize, usize) {
        (self.start + self.lead, self.end - self.trail)
    }
}

/// `20·log10(RMS / 32768)`; an all-zero window gives negative infinity.
pub fn rms_dbfs(window: &[i16]) -> Result<f64, AudioError> {
    if window.is_empty() {
        return Err(AudioError::EmptyWindow);
    }
    let sum_sq: i64 = window.iter().map(|&s| s as i64 * s as i64).sum();
    if sum_sq == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let rms = (sum_sq as f64 / window.len() as f64).sqrt();
    Ok(20.0 * (rms / FULL_SCALE).log10())
}

pub fn detect_silence(
    audio: &AudioBuffer,
    params: &SegmentationParams,
) -> Result<Vec<SilenceInterval>, AudioError> {
    params.validate()?;
    let win = params.window_samples(audio.sample_rate);
    let min_len = params.min_silence_ms as u64 * audio.sample_rate as u64;
    let long_enough = |start: usize, end: usize| (end - start) as u64 * 1000 >= min_len;

    let mut out = Vec::new();
    let mut run_start: Option<usize> = None;
    for (i, window) in audio.samples.chunks(win).enumerate() {
        let start = i * win;
        let silent = rms_dbfs(window)? < params.silence_threshold_dbfs;
        match (silent, run_start) {
            (true, None) => run_start = Some(start),
            (false, Some(s)) => {
                if long_enough(s, start) {
                    out.push(SilenceInterval { start: s, end: start });
                }
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        if long_enough(s, audio.len()) {
            out.push(SilenceInterval {
                start: s,
                end: audio.len(),
            });
        }
    }
    Ok(out)
}

pub fn split_on_silence(
    audio: &AudioBuffer,
    params: &SegmentationParams,
) -> Result<Vec<SegmentSpec>, AudioError> {
    let silences = detect_silence(audio, params)?;
    let total = audio.len();

    let mut cores = Vec::new();
    let mut cursor = 0;
    for s in &silences {
        if s.start > cursor {
            cores.push((cursor, s.start));
        }
        cursor = s.end;
    }
    if cursor < total {
        cores.push((cursor, total));
    }

    let buffer = audio.ms_to_samples(params.keep_buffer_ms);
    let mut segments: Vec<SegmentSpec> = cores
        .iter()
        .map(|&(start, end)| SegmentSpec {
            start,
            end,
            lead: 0,
            trail: 0,
        })
        .collect();

    for i in 0..segments.len() {
        let prev_end = if i == 0 { 0 } else { cores[i - 1].1 };
        let next_start = cores.get(i + 1).map_or(total, |c| c.0);
        let (core_start, core_end) = cores[i];

        let gap_before = core_start - prev_end;
        segments[i].lead = if i == 0 || gap_before >= 2 * buffer {
            gap_before.min(buffer)
        } else {
            gap_before / 2
        };
        let gap_after = next_start - core_end;
        segments[i].trail = if i + 1 == cores.len() || gap_after >= 2 * buffer {
            gap_after.min(buffer)
        } else {
            gap_after - gap_after / 2
        };
        segments[i].start = core_start - segments[i].lead;
        segments[i].end = core_end + segments[i].trail;
    }
    Ok(segments)
}

/// Tab-separated `source<TAB>index<TAB>start<TAB>end<TAB>duration_s` lines.
pub fn write_segment_listing(source: &str, segments: &[SegmentSpec], sample_rate: u32) -> String {
    let mut out = String::new();
    for (i, seg) in segments.iter().enumerate() {
        let dur = seg.len() as f64 / sample_rate as f64;
        writeln!(out, "{source}\t{i}\t{}\t{}\t{dur:.6}", seg.start, seg.end).unwrap();
    }
    out
}
