//! AM and FM transmitter/receiver chains.
//!
//! AM: `s(t) = Ac [1 + ka m(t)] cos(2 pi fc t)`, recovered with a
//! band-pass noise filter and a full-wave envelope detector.
//!
//! FM: `s(t) = Ac cos(2 pi fc t + 2 pi kf * integral(m))`, recovered with a
//! discriminator (differentiate, then detect the envelope of the resulting
//! AM-on-FM wave, whose amplitude tracks `fc + kf m(t)`).

use std::f64::consts::PI;

use crate::error::{ModemError, Result};
use crate::filters::{filter_signal, FilterSpec, DEFAULT_ORDER};
use crate::signal::{
    check_below_nyquist, differentiate, rectify_fullwave, require_same_rate, scale,
    trapezoidal_integrate, Signal,
};

/// Peak level the FM receiver normalizes its output to.
pub const FM_OUTPUT_PEAK: f64 = 0.9;

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ModemError::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ModemError::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmParams {
    pub carrier_freq_hz: f64,
    pub carrier_amplitude: f64,
    /// `ka`, in `(0, 1]`.
    pub modulation_index: f64,
    /// `W`; the carrier must sit at least `2W` above DC.
    pub message_bandwidth_hz: f64,
    pub message_gain: f64,
    pub output_gain: f64,
    pub noise_bpf_bandwidth_hz: f64,
    pub envelope_lpf_cutoff_hz: f64,
    pub sample_rate_hz: f64,
    pub filter_order: usize,
}

impl Default for AmParams {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 4000.0,
            carrier_amplitude: 1.0,
            modulation_index: 0.3,
            message_bandwidth_hz: 1500.0,
            message_gain: 1.0,
            output_gain: 10.0,
            noise_bpf_bandwidth_hz: 3000.0,
            envelope_lpf_cutoff_hz: 1000.0,
            sample_rate_hz: 44_100.0,
            filter_order: DEFAULT_ORDER,
        }
    }
}

impl AmParams {
    pub fn validate(&self) -> Result<()> {
        positive("sample_rate_hz", self.sample_rate_hz)?;
        positive("carrier_freq_hz", self.carrier_freq_hz)?;
        check_below_nyquist(self.carrier_freq_hz, self.sample_rate_hz)?;
        positive("carrier_amplitude", self.carrier_amplitude)?;
        if !(self.modulation_index > 0.0 && self.modulation_index <= 1.0) {
            return Err(ModemError::InvalidParameter(format!(
                "modulation_index must lie in (0, 1], got {}",
                self.modulation_index
            )));
        }
        positive("message_bandwidth_hz", self.message_bandwidth_hz)?;
        if self.carrier_freq_hz < 2.0 * self.message_bandwidth_hz {
            return Err(ModemError::InvalidParameter(format!(
                "carrier {} Hz must be at least twice the message bandwidth {} Hz",
                self.carrier_freq_hz, self.message_bandwidth_hz
            )));
        }
        finite("message_gain", self.message_gain)?;
        finite("output_gain", self.output_gain)?;
        positive("noise_bpf_bandwidth_hz", self.noise_bpf_bandwidth_hz)?;
        positive("envelope_lpf_cutoff_hz", self.envelope_lpf_cutoff_hz)?;
        Ok(())
    }

    fn noise_bpf(&self) -> FilterSpec {
        FilterSpec::bandpass_around(
            self.filter_order,
            self.carrier_freq_hz,
            self.noise_bpf_bandwidth_hz,
            self.sample_rate_hz,
        )
    }

    fn envelope_lpf(&self) -> FilterSpec {
        FilterSpec::lowpass(self.filter_order, self.envelope_lpf_cutoff_hz, self.sample_rate_hz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmParams {
    pub carrier_freq_hz: f64,
    pub carrier_amplitude: f64,
    /// `kf`, hertz of deviation per volt.
    pub freq_sensitivity_hz_per_volt: f64,
    pub preemphasis_cutoff_hz: f64,
    pub noise_bpf_bandwidth_hz: f64,
    pub envelope_lpf_cutoff_hz: f64,
    pub deemphasis_lpf_cutoff_hz: f64,
    pub dc_removal_hpf_cutoff_hz: f64,
    /// The receiver's final high-pass stage; off unless asked for.
    pub dc_removal_hpf_enabled: bool,
    pub output_gain: f64,
    pub sample_rate_hz: f64,
    pub filter_order: usize,
}

impl Default for FmParams {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 4000.0,
            carrier_amplitude: 1.0,
            freq_sensitivity_hz_per_volt: 2.5,
            preemphasis_cutoff_hz: 750.0,
            noise_bpf_bandwidth_hz: 2000.0,
            envelope_lpf_cutoff_hz: 500.0,
            deemphasis_lpf_cutoff_hz: 750.0,
            dc_removal_hpf_cutoff_hz: 1000.0,
            dc_removal_hpf_enabled: false,
            output_gain: 10.0,
            sample_rate_hz: 44_100.0,
            filter_order: DEFAULT_ORDER,
        }
    }
}

impl FmParams {
    pub fn validate(&self) -> Result<()> {
        positive("sample_rate_hz", self.sample_rate_hz)?;
        positive("carrier_freq_hz", self.carrier_freq_hz)?;
        check_below_nyquist(self.carrier_freq_hz, self.sample_rate_hz)?;
        positive("carrier_amplitude", self.carrier_amplitude)?;
        positive("freq_sensitivity_hz_per_volt", self.freq_sensitivity_hz_per_volt)?;
        for (name, v) in [
            ("preemphasis_cutoff_hz", self.preemphasis_cutoff_hz),
            ("noise_bpf_bandwidth_hz", self.noise_bpf_bandwidth_hz),
            ("envelope_lpf_cutoff_hz", self.envelope_lpf_cutoff_hz),
            ("deemphasis_lpf_cutoff_hz", self.deemphasis_lpf_cutoff_hz),
            ("dc_removal_hpf_cutoff_hz", self.dc_removal_hpf_cutoff_hz),
        ] {
            positive(name, v)?;
            check_below_nyquist(v, self.sample_rate_hz)?;
        }
        finite("output_gain", self.output_gain)
    }
}

/// AM transmitter: message gain, `ka`, `Ac (1 + ka m) cos(2 pi fc t)`,
/// output gain.
pub fn am_modulate(message: &Signal, params: &AmParams) -> Result<Signal> {
    params.validate()?;
    require_same_rate(params.sample_rate_hz, message.sample_rate_hz())?;
    let index = scale(&scale(message, params.message_gain), params.modulation_index);
    let peak = index.peak();
    if peak >= 1.0 {
        return Err(ModemError::Overmodulation(peak));
    }
    let omega = 2.0 * PI * params.carrier_freq_hz / params.sample_rate_hz;
    let ac = params.carrier_amplitude;
    let modulated: Vec<f64> = index
        .samples()
        .iter()
        .enumerate()
        .map(|(n, km)| ac * (1.0 + km) * (omega * n as f64).cos())
        .collect();
    Ok(scale(
        &Signal::derived(modulated, params.sample_rate_hz),
        params.output_gain,
    ))
}

/// AM receiver: noise band-pass, full-wave rectifier, two envelope
/// low-passes, mean removal, output gain.
pub fn am_demodulate(received: &Signal, params: &AmParams) -> Result<Signal> {
    params.validate()?;
    require_same_rate(params.sample_rate_hz, received.sample_rate_hz())?;
    let filtered = filter_signal(&params.noise_bpf(), received)?;
    let rectified = rectify_fullwave(&filtered);
    let envelope = filter_signal(&params.envelope_lpf(), &rectified)?;
    let smoothed = filter_signal(&params.envelope_lpf(), &envelope)?;
    Ok(scale(&smoothed.remove_mean(), params.output_gain))
}

/// FM transmitter: optional pre-emphasis high-pass, trapezoidal
/// integration, phase accumulation, cosine, output gain.
pub fn fm_modulate(message: &Signal, params: &FmParams, preemphasis_enabled: bool) -> Result<Signal> {
    params.validate()?;
    require_same_rate(params.sample_rate_hz, message.sample_rate_hz())?;
    let fs = params.sample_rate_hz;
    let shaped = if preemphasis_enabled {
        filter_signal(
            &FilterSpec::highpass(params.filter_order, params.preemphasis_cutoff_hz, fs),
            message,
        )?
    } else {
        message.clone()
    };
    let kf = params.freq_sensitivity_hz_per_volt;
    let peak_hz = params.carrier_freq_hz + kf * shaped.peak();
    if peak_hz >= fs / 2.0 {
        return Err(ModemError::DeviationExceedsNyquist {
            peak_hz,
            nyquist_hz: fs / 2.0,
        });
    }
    if shaped.is_empty() {
        return Ok(shaped);
    }
    let integral = trapezoidal_integrate(&shaped)?;
    let omega = 2.0 * PI * params.carrier_freq_hz / fs;
    let ac = params.carrier_amplitude;
    let modulated: Vec<f64> = integral
        .samples()
        .iter()
        .enumerate()
        .map(|(n, area)| ac * (omega * n as f64 + 2.0 * PI * kf * area).cos())
        .collect();
    Ok(scale(&Signal::derived(modulated, fs), params.output_gain))
}

/// FM receiver (discriminator): noise band-pass, differentiator, envelope
/// detector, optional de-emphasis, mean removal, optional DC-removal
/// high-pass, and peak normalization to [`FM_OUTPUT_PEAK`].
pub fn fm_demodulate(received: &Signal, params: &FmParams, deemphasis_enabled: bool) -> Result<Signal> {
    params.validate()?;
    require_same_rate(params.sample_rate_hz, received.sample_rate_hz())?;
    let fs = params.sample_rate_hz;
    let order = params.filter_order;
    if received.len() < 2 {
        return Ok(received.clone());
    }
    let filtered = filter_signal(
        &FilterSpec::bandpass_around(order, params.carrier_freq_hz, params.noise_bpf_bandwidth_hz, fs),
        received,
    )?;
    let slope = differentiate(&filtered)?;
    let mut envelope = filter_signal(
        &FilterSpec::lowpass(order, params.envelope_lpf_cutoff_hz, fs),
        &rectify_fullwave(&slope),
    )?;
    if deemphasis_enabled {
        envelope = filter_signal(
            &FilterSpec::lowpass(order, params.deemphasis_lpf_cutoff_hz, fs),
            &envelope,
        )?;
    }
    let mut out = envelope.remove_mean();
    if params.dc_removal_hpf_enabled {
        out = filter_signal(
            &FilterSpec::highpass(order, params.dc_removal_hpf_cutoff_hz, fs),
            &out,
        )?;
    }
    Ok(out.normalize_peak(FM_OUTPUT_PEAK))
}
