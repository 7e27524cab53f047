use std::f64::consts::PI;

use crate::error::{ModemError, Result};
use crate::filters::{filter_signal, FilterSpec, DEFAULT_ORDER};
use crate::signal::{check_below_nyquist, require_same_rate, Signal};

use super::bfsk::check_frame_rate;
use super::{samples_per_symbol, symbol_means, BitFrame};

/// Two on-off keyed streams on the cosine (I) and sine (Q) carriers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QamParams {
    pub carrier_freq_hz: f64,
    pub carrier_amplitude: f64,
    /// Bits per second on each arm.
    pub bit_rate: f64,
    pub lpf_cutoff_hz: f64,
    /// Transmit scale in `(0, 1]`.
    pub output_scale: f64,
    pub sample_rate_hz: f64,
    pub filter_order: usize,
    /// Optional receiver band-pass around the carrier; `None` skips it.
    pub prefilter_bandwidth_hz: Option<f64>,
}

impl Default for QamParams {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 4000.0,
            carrier_amplitude: 1.0,
            bit_rate: 1.0,
            lpf_cutoff_hz: 2000.0,
            output_scale: 0.5,
            sample_rate_hz: 44_100.0,
            filter_order: DEFAULT_ORDER,
            prefilter_bandwidth_hz: None,
        }
    }
}

impl QamParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(ModemError::InvalidParameter(format!(
                "sample_rate_hz must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        check_below_nyquist(self.carrier_freq_hz, self.sample_rate_hz)?;
        if !(self.carrier_freq_hz > 0.0) {
            return Err(ModemError::InvalidParameter("carrier_freq_hz must be positive".into()));
        }
        if !(self.output_scale > 0.0 && self.output_scale <= 1.0) {
            return Err(ModemError::InvalidParameter(format!(
                "output_scale must lie in (0, 1], got {}",
                self.output_scale
            )));
        }
        if !(self.carrier_amplitude.is_finite() && self.carrier_amplitude > 0.0) {
            return Err(ModemError::InvalidParameter(format!(
                "carrier_amplitude must be positive, got {}",
                self.carrier_amplitude
            )));
        }
        if let Some(bw) = self.prefilter_bandwidth_hz {
            if !(bw > 0.0) {
                return Err(ModemError::InvalidParameter(format!(
                    "prefilter_bandwidth_hz must be positive, got {bw}"
                )));
            }
        }
        samples_per_symbol(self.sample_rate_hz, self.bit_rate)?;
        Ok(())
    }

    /// Per-symbol mean a transmitted 1 produces at the receiver.
    pub fn recovered_level(&self) -> f64 {
        self.output_scale * self.carrier_amplitude
    }

    /// Midpoint between the ideal 0 and 1 levels.
    pub fn decision_level(&self) -> f64 {
        0.5 * self.recovered_level()
    }
}

/// `scale * Ac * (m1 cos(w n) + m2 sin(w n))` with symbol-held bits and a
/// carrier phase continuous across symbols.
pub fn qam_modulate(frame_i: &BitFrame, frame_q: &BitFrame, params: &QamParams) -> Result<Signal> {
    params.validate()?;
    if frame_i.len() != frame_q.len() {
        return Err(ModemError::FrameLengthMismatch {
            i_len: frame_i.len(),
            q_len: frame_q.len(),
        });
    }
    if frame_i.is_empty() {
        return Err(ModemError::EmptyFrame);
    }
    check_frame_rate(frame_i.bit_rate(), params.bit_rate)?;
    check_frame_rate(frame_q.bit_rate(), params.bit_rate)?;
    let sps = samples_per_symbol(params.sample_rate_hz, params.bit_rate)?;
    let omega = 2.0 * PI * params.carrier_freq_hz / params.sample_rate_hz;
    let amp = params.output_scale * params.carrier_amplitude;
    let samples = (0..frame_i.len() * sps)
        .map(|n| {
            let k = n / sps;
            let phase = omega * n as f64;
            let i = f64::from(frame_i.bits()[k]);
            let q = f64::from(frame_q.bits()[k]);
            amp * (i * phase.cos() + q * phase.sin())
        })
        .collect();
    Ok(Signal::derived(samples, params.sample_rate_hz))
}

/// Product detector outputs before slicing: low-passed
/// `received * 2cos` and `received * 2sin`.
pub fn qam_arms(received: &Signal, params: &QamParams) -> Result<(Signal, Signal)> {
    params.validate()?;
    require_same_rate(params.sample_rate_hz, received.sample_rate_hz())?;
    let fs = params.sample_rate_hz;
    let input = match params.prefilter_bandwidth_hz {
        Some(bw) => filter_signal(
            &FilterSpec::bandpass_around(params.filter_order, params.carrier_freq_hz, bw, fs),
            received,
        )?,
        None => received.clone(),
    };
    let omega = 2.0 * PI * params.carrier_freq_hz / fs;
    let mix = |f: fn(f64) -> f64| {
        Signal::derived(
            input
                .samples()
                .iter()
                .enumerate()
                .map(|(n, x)| 2.0 * x * f(omega * n as f64))
                .collect(),
            fs,
        )
    };
    let lpf = FilterSpec::lowpass(params.filter_order, params.lpf_cutoff_hz, fs);
    let arm_i = filter_signal(&lpf, &mix(f64::cos))?;
    let arm_q = filter_signal(&lpf, &mix(f64::sin))?;
    Ok((arm_i, arm_q))
}

/// Coherent receiver, assuming the first symbol starts at sample 0.
/// Returns `(frame_i, frame_q)`.
pub fn qam_demodulate(received: &Signal, bit_count: usize, params: &QamParams) -> Result<(BitFrame, BitFrame)> {
    params.validate()?;
    if bit_count == 0 {
        return Err(ModemError::InvalidParameter("bit_count must be at least 1".into()));
    }
    let sps = samples_per_symbol(params.sample_rate_hz, params.bit_rate)?;
    let needed = bit_count * sps;
    if needed > received.len() {
        return Err(ModemError::TruncationOutOfRange {
            start: 0,
            needed,
            available: received.len(),
        });
    }
    let (arm_i, arm_q) = qam_arms(received, params)?;
    let level = params.decision_level();
    let slice = |arm: &Signal| {
        let bits = symbol_means(&arm.samples()[..needed], sps)
            .map(|m| u8::from(m > level))
            .collect();
        BitFrame::new(bits, params.bit_rate)
    };
    Ok((slice(&arm_i)?, slice(&arm_q)?))
}
