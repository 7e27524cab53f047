use crate::error::{ModemError, Result};
use crate::filters::{filter_signal, FilterSpec, DEFAULT_ORDER};
use crate::signal::{check_below_nyquist, rectify_fullwave, require_same_rate, tone_samples, Signal};

use super::{samples_per_symbol, symbol_means, BitFrame};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfskParams {
    /// Tone keyed for a 0 bit.
    pub freq_zero_hz: f64,
    /// Tone keyed for a 1 bit.
    pub freq_one_hz: f64,
    pub carrier_amplitude: f64,
    pub bit_rate: f64,
    pub bpf_bandwidth_hz: f64,
    /// Start detection level on the summed branch envelopes, volts.
    pub start_threshold: f64,
    pub sample_rate_hz: f64,
    pub filter_order: usize,
}

impl Default for BfskParams {
    fn default() -> Self {
        Self {
            freq_zero_hz: 4000.0,
            freq_one_hz: 6000.0,
            carrier_amplitude: 1.0,
            bit_rate: 1.0,
            bpf_bandwidth_hz: 400.0,
            start_threshold: 0.2,
            sample_rate_hz: 44_100.0,
            filter_order: DEFAULT_ORDER,
        }
    }
}

impl BfskParams {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(ModemError::InvalidParameter(msg));
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return invalid(format!("sample_rate_hz must be positive, got {}", self.sample_rate_hz));
        }
        check_below_nyquist(self.freq_zero_hz, self.sample_rate_hz)?;
        check_below_nyquist(self.freq_one_hz, self.sample_rate_hz)?;
        if self.freq_zero_hz == self.freq_one_hz {
            return invalid("the two BFSK tones must differ".into());
        }
        if !(self.bpf_bandwidth_hz > 0.0) {
            return invalid(format!("bpf_bandwidth_hz must be positive, got {}", self.bpf_bandwidth_hz));
        }
        if (self.freq_one_hz - self.freq_zero_hz).abs() <= self.bpf_bandwidth_hz {
            return invalid(format!(
                "tone spacing {} Hz must exceed the branch bandwidth {} Hz",
                (self.freq_one_hz - self.freq_zero_hz).abs(),
                self.bpf_bandwidth_hz
            ));
        }
        if !(self.start_threshold.is_finite() && self.start_threshold > 0.0) {
            return invalid(format!("start_threshold must be positive, got {}", self.start_threshold));
        }
        if !(self.carrier_amplitude.is_finite() && self.carrier_amplitude > 0.0) {
            return invalid(format!("carrier_amplitude must be positive, got {}", self.carrier_amplitude));
        }
        samples_per_symbol(self.sample_rate_hz, self.bit_rate)?;
        Ok(())
    }

    fn branch(&self, tone_hz: f64) -> FilterSpec {
        FilterSpec::bandpass_around(self.filter_order, tone_hz, self.bpf_bandwidth_hz, self.sample_rate_hz)
    }
}

/// One tone burst per bit, each starting at phase zero.
pub fn bfsk_modulate(frame: &BitFrame, params: &BfskParams) -> Result<Signal> {
    params.validate()?;
    if frame.is_empty() {
        return Err(ModemError::EmptyFrame);
    }
    check_frame_rate(frame.bit_rate(), params.bit_rate)?;
    let sps = samples_per_symbol(params.sample_rate_hz, frame.bit_rate())?;
    let fs = params.sample_rate_hz;
    let zero = tone_samples(params.freq_zero_hz, params.carrier_amplitude, 0.0, sps, fs);
    let one = tone_samples(params.freq_one_hz, params.carrier_amplitude, 0.0, sps, fs);
    let mut samples = Vec::with_capacity(sps * frame.len());
    for &bit in frame.bits() {
        let burst = if bit == 0 { &zero } else { &one };
        samples.extend_from_slice(burst.samples());
    }
    Ok(Signal::derived(samples, fs))
}

pub(super) fn check_frame_rate(frame_rate: f64, params_rate: f64) -> Result<()> {
    if frame_rate != params_rate {
        return Err(ModemError::InvalidParameter(format!(
            "frame bit rate {frame_rate} differs from configured bit rate {params_rate}"
        )));
    }
    Ok(())
}

/// Index of the first sample whose magnitude exceeds `threshold`.
pub fn find_signal_start(input: &Signal, threshold: f64) -> Result<usize> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(ModemError::InvalidParameter(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    input
        .samples()
        .iter()
        .position(|s| s.abs() > threshold)
        .ok_or(ModemError::NoSampleAboveThreshold(threshold))
}

/// Non-coherent two-branch receiver.
///
/// Each tone gets its own band-pass and rectifier. The signal start is the
/// first point where the summed branch envelopes cross `start_threshold`;
/// from there `bit_count` symbols are cut out and each bit is 1 exactly
/// when the one-tone branch has the larger mean over the symbol.
pub fn bfsk_demodulate(received: &Signal, bit_count: usize, params: &BfskParams) -> Result<BitFrame> {
    params.validate()?;
    require_same_rate(params.sample_rate_hz, received.sample_rate_hz())?;
    if bit_count == 0 {
        return Err(ModemError::InvalidParameter("bit_count must be at least 1".into()));
    }
    let sps = samples_per_symbol(params.sample_rate_hz, params.bit_rate)?;

    // Zero tail leaves room for the branch filters' delay so the last
    // symbol is not cut short when the input ends right after it.
    let tail = (4.0 * params.sample_rate_hz / params.bpf_bandwidth_hz).ceil() as usize;
    let mut padded = received.samples().to_vec();
    padded.resize(received.len() + tail, 0.0);
    let padded = Signal::derived(padded, params.sample_rate_hz);

    let env_zero = rectify_fullwave(&filter_signal(&params.branch(params.freq_zero_hz), &padded)?);
    let env_one = rectify_fullwave(&filter_signal(&params.branch(params.freq_one_hz), &padded)?);
    let combined = Signal::derived(
        env_zero
            .samples()
            .iter()
            .zip(env_one.samples())
            .map(|(a, b)| a + b)
            .collect(),
        params.sample_rate_hz,
    );
    let start = find_signal_start(&combined, params.start_threshold)?;
    let needed = bit_count * sps;
    let zero = env_zero.slice(start, needed)?;
    let one = env_one.slice(start, needed)?;

    let bits = symbol_means(zero.samples(), sps)
        .zip(symbol_means(one.samples(), sps))
        .map(|(m0, m1)| u8::from(m1 > m0))
        .collect();
    BitFrame::new(bits, params.bit_rate)
}
