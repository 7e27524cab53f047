//! One-sided power spectral density by averaged, Hann-windowed periodograms
//! with 50% segment overlap.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{ModemError, Result};
use crate::signal::Signal;

/// One-sided PSD estimate: bin `k` sits at `k * bin_hz`, values in V²/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bin_hz: f64,
    power: Vec<f64>,
}

impl Spectrum {
    /// Validates a spectrum built elsewhere, e.g. parsed back from CSV.
    pub fn new(bin_hz: f64, power: Vec<f64>) -> Result<Self> {
        if !(bin_hz.is_finite() && bin_hz > 0.0) {
            return Err(ModemError::InvalidParameter(format!(
                "bin width must be positive, got {bin_hz}"
            )));
        }
        if let Some(p) = power.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(ModemError::InvalidParameter(format!(
                "power values must be finite and non-negative, got {p}"
            )));
        }
        Ok(Self { bin_hz, power })
    }

    pub fn bin_hz(&self) -> f64 {
        self.bin_hz
    }

    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    pub fn frequency_of(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_hz
    }

    /// Frequencies of every bin, ascending.
    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.power.len()).map(|k| self.frequency_of(k))
    }

    /// Total power, i.e. the rectangle-rule integral of the density.
    pub fn total_power(&self) -> f64 {
        self.power.iter().sum::<f64>() * self.bin_hz
    }

    /// Index of the strongest bin; `None` for an empty spectrum.
    pub fn peak_bin(&self) -> Option<usize> {
        self.power
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| k)
    }

    /// Power integrated over bins within `half_width` bins of `freq_hz`.
    pub fn band_power(&self, freq_hz: f64, half_width: usize) -> f64 {
        let centre = (freq_hz / self.bin_hz).round() as isize;
        let lo = (centre - half_width as isize).max(0) as usize;
        let hi = ((centre + half_width as isize).max(0) as usize).min(self.power.len().saturating_sub(1));
        if lo > hi || self.power.is_empty() {
            return 0.0;
        }
        self.power[lo..=hi].iter().sum::<f64>() * self.bin_hz
    }

    /// Width of the band holding the central `fraction` of total power,
    /// trimming `(1 - fraction) / 2` from each tail.
    pub fn occupied_bandwidth(&self, fraction: f64) -> f64 {
        let total: f64 = self.power.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        let tail = (1.0 - fraction) / 2.0 * total;
        let mut acc = 0.0;
        let mut lo = 0;
        for (k, p) in self.power.iter().enumerate() {
            acc += p;
            if acc > tail {
                lo = k;
                break;
            }
        }
        acc = 0.0;
        let mut hi = self.power.len() - 1;
        for (k, p) in self.power.iter().enumerate().rev() {
            acc += p;
            if acc > tail {
                hi = k;
                break;
            }
        }
        (hi.saturating_sub(lo) + 1) as f64 * self.bin_hz
    }
}

/// Averaged-periodogram PSD.
///
/// Segments of `segment_len` samples start every `segment_len / 2` samples;
/// each is Hann windowed and transformed, and the one-sided density is
/// normalized by `fs * sum(w^2)` so that `total_power()` matches the
/// signal's mean-square value.
pub fn power_spectral_density(input: &Signal, segment_len: usize) -> Result<Spectrum> {
    if segment_len < 16 || !segment_len.is_multiple_of(2) {
        return Err(ModemError::InvalidSegmentLength(segment_len));
    }
    if input.len() < 16 {
        return Err(ModemError::SignalTooShort {
            needed: 16,
            got: input.len(),
        });
    }
    if segment_len > input.len() {
        return Err(ModemError::SegmentTooLong {
            segment_len,
            signal_len: input.len(),
        });
    }

    let fs = input.sample_rate_hz();
    let window: Vec<f64> = (0..segment_len)
        .map(|n| 0.5 - 0.5 * (2.0 * PI * n as f64 / segment_len as f64).cos())
        .collect();
    let window_power: f64 = window.iter().map(|w| w * w).sum();

    let fft = FftPlanner::new().plan_fft_forward(segment_len);
    let bins = segment_len / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex::new(0.0, 0.0); segment_len];
    let step = segment_len / 2;
    let mut segments = 0usize;
    let mut start = 0;
    while start + segment_len <= input.len() {
        let seg = &input.samples()[start..start + segment_len];
        for ((b, x), w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex::new(x * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, c) in acc.iter_mut().zip(&buf) {
            *a += c.norm_sqr();
        }
        segments += 1;
        start += step;
    }

    let norm = 1.0 / (fs * window_power * segments as f64);
    let power = acc
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let one_sided = if k == 0 || k == bins - 1 { 1.0 } else { 2.0 };
            a * norm * one_sided
        })
        .collect();
    Ok(Spectrum {
        bin_hz: fs / segment_len as f64,
        power,
    })
}
