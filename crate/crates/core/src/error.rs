use std::path::PathBuf;

use thiserror::Error;

/// Every failure the modem library can report.
#[derive(Debug, Error)]
pub enum ModemError {
    #[error("NyquistViolation: {freq_hz} Hz is not below half the sample rate ({sample_rate_hz} Hz)")]
    NyquistViolation { freq_hz: f64, sample_rate_hz: f64 },
    #[error("InvalidDuration: duration must be positive, got {0} s")]
    InvalidDuration(f64),
    #[error("EmptySignal: {0}")]
    EmptySignal(&'static str),
    #[error("InvalidSampleRate: {0}")]
    InvalidSampleRate(String),
    #[error("NonFiniteSample: sample {index} is {value}")]
    NonFiniteSample { index: usize, value: f64 },
    #[error("InvalidSegmentLength: segment length must be even and at least 16, got {0}")]
    InvalidSegmentLength(usize),
    #[error("SegmentTooLong: segment of {segment_len} samples exceeds signal of {signal_len}")]
    SegmentTooLong { segment_len: usize, signal_len: usize },
    #[error("SignalTooShort: need at least {needed} samples, got {got}")]
    SignalTooShort { needed: usize, got: usize },
    #[error("RateMismatch: expected {expected} Hz, got {got} Hz")]
    RateMismatch { expected: f64, got: f64 },

    #[error("InvalidCutoff: {0}")]
    InvalidCutoff(String),
    #[error("InvalidOrder: order must be in 1..=12, got {0}")]
    InvalidOrder(usize),
    #[error("FrequencyOutOfRange: {freq_hz} Hz outside 0..={nyquist_hz} Hz")]
    FrequencyOutOfRange { freq_hz: f64, nyquist_hz: f64 },

    #[error("FileNotFound: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("MalformedWav: {0}")]
    MalformedWav(String),
    #[error("UnsupportedFormat: {0}")]
    UnsupportedFormat(String),
    #[error("SampleOutOfRange: sample {index} = {value} exceeds full scale")]
    SampleOutOfRange { index: usize, value: f64 },
    #[error("IoFailure: {0}")]
    Io(#[from] std::io::Error),

    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("OvermodulationError: max |ka*m(t)| = {0} must stay below 1")]
    Overmodulation(f64),
    #[error("DeviationExceedsNyquist: peak instantaneous frequency {peak_hz} Hz >= {nyquist_hz} Hz")]
    DeviationExceedsNyquist { peak_hz: f64, nyquist_hz: f64 },

    #[error("NonAsciiInput: character {0:?} is not ASCII")]
    NonAsciiInput(char),
    #[error("InvalidBit: bit values must be 0 or 1, got {0}")]
    InvalidBit(u8),
    #[error("FrameLengthNotByteAligned: {0} bits")]
    FrameLengthNotByteAligned(usize),
    #[error("EmptyFrame: nothing to transmit")]
    EmptyFrame,
    #[error("NonIntegralSymbolLength: {sample_rate_hz} Hz / {bit_rate} bit/s is not a whole number of samples")]
    NonIntegralSymbolLength { sample_rate_hz: f64, bit_rate: f64 },
    #[error("FrameLengthMismatch: I arm has {i_len} bits, Q arm has {q_len}")]
    FrameLengthMismatch { i_len: usize, q_len: usize },
    #[error("NoSampleAboveThreshold: no sample exceeds {0}")]
    NoSampleAboveThreshold(f64),
    #[error("TruncationOutOfRange: need {needed} samples from index {start}, only {available} available")]
    TruncationOutOfRange {
        start: usize,
        needed: usize,
        available: usize,
    },
}

pub type Result<T> = std::result::Result<T, ModemError>;
