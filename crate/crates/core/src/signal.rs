//! Sampled real-valued waveforms and the scalar DSP primitives the modem
//! chains are built from.
//!
//! A [`Signal`] is an immutable value: every operation here returns a new
//! signal and leaves its input untouched. Time is `t = n / fs` with `n`
//! starting at zero.

use std::f64::consts::PI;

use crate::error::{ModemError, Result};

/// Uniformly sampled waveform together with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Signal {
    /// Builds a signal, rejecting a non-positive rate or non-finite samples.
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        check_rate(sample_rate_hz)?;
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, s)| !s.is_finite()) {
            return Err(ModemError::NonFiniteSample { index, value });
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    /// A signal of `len` zeros.
    pub fn zeros(len: usize, sample_rate_hz: f64) -> Result<Self> {
        Self::new(vec![0.0; len], sample_rate_hz)
    }

    /// Internal constructor for outputs derived from an already valid signal.
    pub(crate) fn derived(samples: Vec<f64>, sample_rate_hz: f64) -> Self {
        debug_assert!(samples.iter().all(|s| s.is_finite()));
        Self {
            samples,
            sample_rate_hz,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Largest absolute sample value, zero for an empty signal.
    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    pub fn mean(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn mean_square(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64
    }

    pub fn rms(&self) -> f64 {
        self.mean_square().sqrt()
    }

    /// Applies `f` sample-wise and keeps the rate.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.samples.iter().map(|&s| f(s)).collect(), self.sample_rate_hz)
    }

    /// Subtracts the mean value.
    pub fn remove_mean(&self) -> Self {
        let mean = self.mean();
        Self::derived(
            self.samples.iter().map(|s| s - mean).collect(),
            self.sample_rate_hz,
        )
    }

    /// Samples `[start, start + len)` as a new signal.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        let end = start.checked_add(len).filter(|&e| e <= self.samples.len());
        match end {
            Some(end) => Ok(Self::derived(
                self.samples[start..end].to_vec(),
                self.sample_rate_hz,
            )),
            None => Err(ModemError::TruncationOutOfRange {
                start,
                needed: len,
                available: self.samples.len().saturating_sub(start),
            }),
        }
    }

    /// Element-wise product with another signal of the same rate and length.
    pub fn multiply(&self, other: &Signal) -> Result<Self> {
        require_same_rate(self.sample_rate_hz, other.sample_rate_hz)?;
        if self.len() != other.len() {
            return Err(ModemError::InvalidParameter(format!(
                "cannot multiply signals of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self::derived(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a * b)
                .collect(),
            self.sample_rate_hz,
        ))
    }

    /// Appends `other` after `self`.
    pub fn concat(&self, other: &Signal) -> Result<Self> {
        require_same_rate(self.sample_rate_hz, other.sample_rate_hz)?;
        let mut samples = Vec::with_capacity(self.len() + other.len());
        samples.extend_from_slice(&self.samples);
        samples.extend_from_slice(&other.samples);
        Ok(Self::derived(samples, self.sample_rate_hz))
    }

    /// Scales so the peak magnitude equals `target`; an all-zero signal is
    /// returned unchanged.
    pub fn normalize_peak(&self, target: f64) -> Self {
        let peak = self.peak();
        if peak == 0.0 {
            return self.clone();
        }
        scale(self, target / peak)
    }
}

fn check_rate(sample_rate_hz: f64) -> Result<()> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(ModemError::InvalidSampleRate(format!(
            "sample rate must be positive and finite, got {sample_rate_hz}"
        )));
    }
    Ok(())
}

pub(crate) fn require_same_rate(expected: f64, got: f64) -> Result<()> {
    if expected != got {
        return Err(ModemError::RateMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn check_below_nyquist(freq_hz: f64, sample_rate_hz: f64) -> Result<()> {
    if !(freq_hz.abs() < sample_rate_hz / 2.0) {
        return Err(ModemError::NyquistViolation {
            freq_hz,
            sample_rate_hz,
        });
    }
    Ok(())
}

/// `amplitude * cos(2*pi*freq*t + phase)` for `round(duration * fs)` samples.
pub fn generate_tone(
    freq_hz: f64,
    amplitude: f64,
    phase_deg: f64,
    duration_s: f64,
    sample_rate_hz: f64,
) -> Result<Signal> {
    check_rate(sample_rate_hz)?;
    check_below_nyquist(freq_hz, sample_rate_hz)?;
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(ModemError::InvalidDuration(duration_s));
    }
    let len = (duration_s * sample_rate_hz).round() as usize;
    Ok(tone_samples(freq_hz, amplitude, phase_deg, len, sample_rate_hz))
}

/// Same as [`generate_tone`] but sized in samples; used by the symbol
/// generators where the length is already integral.
pub(crate) fn tone_samples(
    freq_hz: f64,
    amplitude: f64,
    phase_deg: f64,
    len: usize,
    sample_rate_hz: f64,
) -> Signal {
    let phase = phase_deg.to_radians();
    let omega = 2.0 * PI * freq_hz / sample_rate_hz;
    Signal::derived(
        (0..len)
            .map(|n| amplitude * (omega * n as f64 + phase).cos())
            .collect(),
        sample_rate_hz,
    )
}

/// Running integral by the trapezoidal rule, starting from zero.
pub fn trapezoidal_integrate(input: &Signal) -> Result<Signal> {
    if input.is_empty() {
        return Err(ModemError::EmptySignal("integration needs at least one sample"));
    }
    let half_dt = 0.5 / input.sample_rate_hz;
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(input.len());
    out.push(0.0);
    for pair in input.samples.windows(2) {
        acc += (pair[0] + pair[1]) * half_dt;
        out.push(acc);
    }
    Ok(Signal::derived(out, input.sample_rate_hz))
}

/// Time derivative by finite differences.
///
/// Interior points use the five-point central stencil
/// `(-x[n+2] + 8x[n+1] - 8x[n-1] + x[n-2]) * fs / 12`; the points next to
/// each end fall back to the three-point central difference and the two
/// endpoints use one-sided first differences.
pub fn differentiate(input: &Signal) -> Result<Signal> {
    let x = &input.samples;
    let len = x.len();
    if len < 2 {
        return Err(ModemError::EmptySignal("differentiation needs at least two samples"));
    }
    let fs = input.sample_rate_hz;
    let mut out = vec![0.0; len];
    out[0] = (x[1] - x[0]) * fs;
    out[len - 1] = (x[len - 1] - x[len - 2]) * fs;
    for n in 1..len - 1 {
        out[n] = if n >= 2 && n + 2 < len {
            (8.0 * (x[n + 1] - x[n - 1]) - (x[n + 2] - x[n - 2])) * fs / 12.0
        } else {
            (x[n + 1] - x[n - 1]) * fs / 2.0
        };
    }
    Ok(Signal::derived(out, fs))
}

/// `|x[n]|`.
pub fn rectify_fullwave(input: &Signal) -> Signal {
    Signal::derived(
        input.samples.iter().map(|s| s.abs()).collect(),
        input.sample_rate_hz,
    )
}

/// `gain * x[n]`. A non-finite gain yields zeros rather than poisoning the
/// signal with NaN; callers validating parameters reject it earlier.
pub fn scale(input: &Signal, gain: f64) -> Signal {
    let gain = if gain.is_finite() { gain } else { 0.0 };
    Signal::derived(
        input.samples.iter().map(|s| s * gain).collect(),
        input.sample_rate_hz,
    )
}
