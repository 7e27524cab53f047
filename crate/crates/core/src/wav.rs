//! Mono 16-bit PCM WAV reading and writing.
//!
//! Writing always produces the canonical 44-byte header (`RIFF`, `WAVE`,
//! `fmt `, `data`, little-endian, format tag 1). Reading walks the chunk
//! list, skips chunks it does not need, and keeps channel 0 of
//! multi-channel files.

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use crate::error::{ModemError, Result};
use crate::signal::Signal;

const PCM_FORMAT: u16 = 1;
const BITS_PER_SAMPLE: u16 = 16;
const FULL_SCALE: f64 = 32768.0;
const RANGE_TOLERANCE: f64 = 1e-9;

/// Header fields of a PCM WAV file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavMetadata {
    pub sample_rate_hz: u32,
    pub channel_count: u16,
    pub bits_per_sample: u16,
}

fn le_u16(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn le_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

/// Parses a WAV image held in memory.
pub fn decode_wav(bytes: &[u8]) -> Result<(WavMetadata, Signal)> {
    let malformed = |msg: &str| ModemError::MalformedWav(msg.to_string());
    if bytes.len() < 12 {
        return Err(malformed("file shorter than the RIFF header"));
    }
    if &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(malformed("missing RIFF/WAVE signature"));
    }

    let mut meta: Option<WavMetadata> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = le_u32(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let body_end = body_start
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| {
                ModemError::MalformedWav(format!(
                    "chunk {:?} claims {size} bytes past end of file",
                    String::from_utf8_lossy(id)
                ))
            })?;
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(malformed("fmt chunk shorter than 16 bytes"));
                }
                let format = le_u16(body, 0);
                let channel_count = le_u16(body, 2);
                let sample_rate_hz = le_u32(body, 4);
                let bits_per_sample = le_u16(body, 14);
                if format != PCM_FORMAT {
                    return Err(ModemError::UnsupportedFormat(format!(
                        "audio format tag {format}, only PCM (1) is supported"
                    )));
                }
                if bits_per_sample != BITS_PER_SAMPLE {
                    return Err(ModemError::UnsupportedFormat(format!(
                        "{bits_per_sample}-bit samples, only 16-bit is supported"
                    )));
                }
                if channel_count == 0 || sample_rate_hz == 0 {
                    return Err(malformed("zero channels or zero sample rate"));
                }
                meta = Some(WavMetadata {
                    sample_rate_hz,
                    channel_count,
                    bits_per_sample,
                });
            }
            b"data" => data = Some(body),
            _ => {}
        }
        // Chunks are word aligned.
        pos = body_end + (size & 1);
    }

    let meta = meta.ok_or_else(|| malformed("missing fmt chunk"))?;
    let data = data.ok_or_else(|| malformed("missing data chunk"))?;
    let frame_bytes = 2 * meta.channel_count as usize;
    if data.len() % frame_bytes != 0 {
        return Err(malformed("data chunk is not a whole number of frames"));
    }
    let samples = data
        .chunks_exact(frame_bytes)
        .map(|frame| i16::from_le_bytes([frame[0], frame[1]]) as f64 / FULL_SCALE)
        .collect();
    Ok((meta, Signal::new(samples, meta.sample_rate_hz as f64)?))
}

/// Reads channel 0 of a 16-bit PCM WAV file.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal> {
    read_wav_with_metadata(path).map(|(_, s)| s)
}

pub fn read_wav_with_metadata(path: impl AsRef<Path>) -> Result<(WavMetadata, Signal)> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => ModemError::FileNotFound(path.to_path_buf()),
        _ => ModemError::Io(e),
    })?;
    decode_wav(&bytes)
}

/// Quantizes a sample in `[-1, 1]` to 16 bits, rounding half away from zero
/// and clamping to the representable range.
pub fn quantize(sample: f64) -> i16 {
    (sample * FULL_SCALE).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16
}

/// Encodes a signal as a canonical mono 16-bit PCM WAV image.
pub fn encode_wav(signal: &Signal) -> Result<Vec<u8>> {
    let rate = signal.sample_rate_hz();
    if rate.fract() != 0.0 || rate > u32::MAX as f64 {
        return Err(ModemError::InvalidSampleRate(format!(
            "WAV needs a whole-number sample rate, got {rate}"
        )));
    }
    if let Some((index, &value)) = signal
        .samples()
        .iter()
        .enumerate()
        .find(|(_, s)| s.abs() > 1.0 + RANGE_TOLERANCE)
    {
        return Err(ModemError::SampleOutOfRange { index, value });
    }
    let rate = rate as u32;
    let data_len = signal.len() * 2;
    let riff_len = u32::try_from(36 + data_len).map_err(|_| {
        ModemError::InvalidParameter(format!("{} samples do not fit in a WAV file", signal.len()))
    })?;

    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&riff_len.to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&BITS_PER_SAMPLE.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in signal.samples() {
        out.extend_from_slice(&quantize(s).to_le_bytes());
    }
    Ok(out)
}

/// Writes `signal` to `path`, replacing any existing file.
pub fn write_wav(path: impl AsRef<Path>, signal: &Signal) -> Result<()> {
    let bytes = encode_wav(signal)?;
    fs::write(path, bytes)?;
    Ok(())
}
