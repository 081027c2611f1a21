use std::path::Path;

use super::{AudioBuffer, AudioError};

fn map_err(err: hound::Error) -> AudioError {
    match err {
        hound::Error::IoError(e) => AudioError::Io(e),
        hound::Error::FormatError(msg) => AudioError::NotWav(msg.to_string()),
        hound::Error::Unsupported => AudioError::UnsupportedEncoding("unsupported WAV format".into()),
        hound::Error::TooWide => AudioError::UnsupportedEncoding("sample too wide".into()),
        other => AudioError::NotWav(other.to_string()),
    }
}

/// Reads a 16-bit integer PCM WAV file. Multi-channel audio is downmixed to
/// mono by per-frame mean, rounded half away from zero.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer, AudioError> {
    let reader = hound::WavReader::open(path).map_err(map_err)?;
    let spec = reader.spec();
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(AudioError::UnsupportedEncoding(format!(
            "{:?} {}-bit (need 16-bit integer PCM)",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    if spec.sample_rate == 0 || spec.channels == 0 {
        return Err(AudioError::NotWav("zero sample rate or channel count".into()));
    }
    let interleaved = reader
        .into_samples::<i16>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(map_err)?;
    let channels = spec.channels as usize;
    let samples = if channels == 1 {
        interleaved
    } else {
        interleaved
            .chunks_exact(channels)
            .map(|frame| {
                let sum: i64 = frame.iter().map(|&s| s as i64).sum();
                (sum as f64 / channels as f64).round() as i16
            })
            .collect()
    };
    Ok(AudioBuffer::new(samples, spec.sample_rate))
}

/// Writes mono 16-bit PCM.
pub fn write_wav(path: impl AsRef<Path>, audio: &AudioBuffer) -> Result<(), AudioError> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: audio.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(map_err)?;
    for &s in &audio.samples {
        writer.write_sample(s).map_err(map_err)?;
    }
    writer.finalize().map_err(map_err)
}
