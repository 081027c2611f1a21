//! Mono 16-bit PCM audio: WAV I/O and silence-based segmentation.

mod segment;
mod wav;

pub use segment::{
    detect_silence, rms_dbfs, split_on_silence, write_segment_listing, SegmentSpec,
    SegmentationParams, SilenceInterval, FULL_SCALE,
};
pub use wav::{read_wav, write_wav};

#[derive(Debug, thiserror::Error)]
pub enum AudioError {
    #[error("empty analysis window")]
    EmptyWindow,
    #[error("not a RIFF/WAVE file: {0}")]
    NotWav(String),
    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("invalid segmentation parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AudioBuffer {
    pub samples: Vec<i16>,
    pub sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<i16>, sample_rate: u32) -> Self {
        assert!(sample_rate > 0, "sample rate must be positive");
        AudioBuffer {
            samples,
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Number of samples in `ms` milliseconds, rounded down.
    pub fn ms_to_samples(&self, ms: u32) -> usize {
        (ms as u64 * self.sample_rate as u64 / 1000) as usize
    }

    pub fn slice(&self, seg: &SegmentSpec) -> AudioBuffer {
        AudioBuffer::new(self.samples[seg.start..seg.end].to_vec(), self.sample_rate)
    }
}
