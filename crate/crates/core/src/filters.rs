//! Butterworth IIR design and causal application.
//!
//! Designs start from the analog Butterworth prototype with poles at
//! `exp(j*pi*(2k + N + 1) / (2N))`, apply the low/high/band-pass frequency
//! transformation at pre-warped cutoffs, and map each pole through the
//! bilinear transform `z = (2fs + s) / (2fs - s)`. The resulting poles are
//! grouped into second-order sections; each section is normalized to unit
//! gain at the reference frequency (DC, Nyquist or band centre), so the
//! cascade has the Butterworth magnitude of exactly `1/sqrt(2)` at every
//! design edge.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ModemError, Result};
use crate::signal::{require_same_rate, Signal};

/// Order used for every receiver/transmitter stage unless overridden.
pub const DEFAULT_ORDER: usize = 4;
pub const MAX_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Lowpass,
    Highpass,
    Bandpass,
}

/// What to design. For band-pass, `order` is the order of the low-pass
/// prototype, so the realized filter has `2 * order` poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub order: usize,
    /// Lower band edge; ignored unless `kind` is band-pass.
    pub cutoff_low_hz: f64,
    /// Low/high-pass cutoff, or upper band edge.
    pub cutoff_high_hz: f64,
    pub sample_rate_hz: f64,
}

impl FilterSpec {
    pub fn lowpass(order: usize, cutoff_hz: f64, sample_rate_hz: f64) -> Self {
        Self {
            kind: FilterKind::Lowpass,
            order,
            cutoff_low_hz: 0.0,
            cutoff_high_hz: cutoff_hz,
            sample_rate_hz,
        }
    }

    pub fn highpass(order: usize, cutoff_hz: f64, sample_rate_hz: f64) -> Self {
        Self {
            kind: FilterKind::Highpass,
            ..Self::lowpass(order, cutoff_hz, sample_rate_hz)
        }
    }

    pub fn bandpass(order: usize, low_hz: f64, high_hz: f64, sample_rate_hz: f64) -> Self {
        Self {
            kind: FilterKind::Bandpass,
            order,
            cutoff_low_hz: low_hz,
            cutoff_high_hz: high_hz,
            sample_rate_hz,
        }
    }

    /// Band-pass with edges `centre -/+ bandwidth / 2`.
    pub fn bandpass_around(order: usize, centre_hz: f64, bandwidth_hz: f64, sample_rate_hz: f64) -> Self {
        Self::bandpass(
            order,
            centre_hz - bandwidth_hz / 2.0,
            centre_hz + bandwidth_hz / 2.0,
            sample_rate_hz,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(ModemError::InvalidSampleRate(format!(
                "filter sample rate must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        if !(1..=MAX_ORDER).contains(&self.order) {
            return Err(ModemError::InvalidOrder(self.order));
        }
        let nyquist = self.sample_rate_hz / 2.0;
        let in_range = |f: f64| f.is_finite() && f > 0.0 && f < nyquist;
        if !in_range(self.cutoff_high_hz) {
            return Err(ModemError::InvalidCutoff(format!(
                "cutoff {} Hz must lie strictly between 0 and {nyquist} Hz",
                self.cutoff_high_hz
            )));
        }
        if self.kind == FilterKind::Bandpass {
            if !in_range(self.cutoff_low_hz) {
                return Err(ModemError::InvalidCutoff(format!(
                    "lower edge {} Hz must lie strictly between 0 and {nyquist} Hz",
                    self.cutoff_low_hz
                )));
            }
            if self.cutoff_low_hz >= self.cutoff_high_hz {
                return Err(ModemError::InvalidCutoff(format!(
                    "lower edge {} Hz must be below upper edge {} Hz",
                    self.cutoff_low_hz, self.cutoff_high_hz
                )));
            }
        }
        Ok(())
    }

    /// Frequency at which the designed cascade has unit gain.
    pub fn reference_hz(&self) -> f64 {
        match self.kind {
            FilterKind::Lowpass => 0.0,
            FilterKind::Highpass => self.sample_rate_hz / 2.0,
            FilterKind::Bandpass => {
                let fs = self.sample_rate_hz;
                let centre = (prewarp(self.cutoff_low_hz, fs) * prewarp(self.cutoff_high_hz, fs)).sqrt();
                (centre / (2.0 * fs)).atan() * fs / PI
            }
        }
    }

    /// The -3 dB design edges.
    pub fn edges_hz(&self) -> Vec<f64> {
        match self.kind {
            FilterKind::Bandpass => vec![self.cutoff_low_hz, self.cutoff_high_hz],
            _ => vec![self.cutoff_high_hz],
        }
    }
}

/// Normalized biquad `(b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)`.
/// First-order sections carry `b2 = a2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Section {
    fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        let num = self.b[0] + z_inv * self.b[1] + z2 * self.b[2];
        let den = 1.0 + z_inv * self.a[0] + z2 * self.a[1];
        num / den
    }

    /// Poles of the section (one or two).
    pub fn poles(&self) -> Vec<Complex64> {
        let [a1, a2] = self.a;
        if a2 == 0.0 {
            return vec![Complex64::new(-a1, 0.0)];
        }
        let disc = Complex64::new(a1 * a1 - 4.0 * a2, 0.0).sqrt();
        vec![(-a1 + disc) / 2.0, (-a1 - disc) / 2.0]
    }
}

/// A realized cascade of second-order sections.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignedFilter {
    sections: Vec<Section>,
    spec: FilterSpec,
}

impl DesignedFilter {
    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    /// True when every pole lies strictly inside the unit circle.
    pub fn is_stable(&self) -> bool {
        self.sections
            .iter()
            .flat_map(|s| s.poles())
            .all(|p| p.norm() < 1.0)
    }

    /// Largest pole radius across the cascade.
    pub fn max_pole_radius(&self) -> f64 {
        self.sections
            .iter()
            .flat_map(|s| s.poles())
            .map(|p| p.norm())
            .fold(0.0, f64::max)
    }
}

fn prewarp(freq_hz: f64, fs: f64) -> f64 {
    2.0 * fs * (PI * freq_hz / fs).tan()
}

fn bilinear(s: Complex64, fs: f64) -> Complex64 {
    let k = 2.0 * fs;
    (k + s) / (k - s)
}

/// Designs a Butterworth cascade for `spec`.
pub fn design_butterworth(spec: &FilterSpec) -> Result<DesignedFilter> {
    spec.validate()?;
    let fs = spec.sample_rate_hz;
    let n = spec.order;
    let prototype: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, PI * (2 * k + n + 1) as f64 / (2 * n) as f64))
        .collect();

    let analog: Vec<Complex64> = match spec.kind {
        FilterKind::Lowpass => {
            let wc = prewarp(spec.cutoff_high_hz, fs);
            prototype.iter().map(|p| p * wc).collect()
        }
        FilterKind::Highpass => {
            let wc = prewarp(spec.cutoff_high_hz, fs);
            prototype.iter().map(|p| wc / p).collect()
        }
        FilterKind::Bandpass => {
            let wl = prewarp(spec.cutoff_low_hz, fs);
            let wh = prewarp(spec.cutoff_high_hz, fs);
            let bw = wh - wl;
            let w0_sq = wl * wh;
            prototype
                .iter()
                .flat_map(|p| {
                    // Roots of s^2 - p*bw*s + w0^2.
                    let half = p * bw / 2.0;
                    let root = (half * half - w0_sq).sqrt();
                    [half + root, half - root]
                })
                .collect()
        }
    };
    let digital: Vec<Complex64> = analog.iter().map(|&s| bilinear(s, fs)).collect();

    let numerator = |first_order: bool| -> [f64; 3] {
        match (spec.kind, first_order) {
            (FilterKind::Lowpass, false) => [1.0, 2.0, 1.0],
            (FilterKind::Lowpass, true) => [1.0, 1.0, 0.0],
            (FilterKind::Highpass, false) => [1.0, -2.0, 1.0],
            (FilterKind::Highpass, true) => [1.0, -1.0, 0.0],
            (FilterKind::Bandpass, _) => [1.0, 0.0, -1.0],
        }
    };

    let mut sections = Vec::new();
    let mut real_poles = Vec::new();
    for p in &digital {
        if p.im.abs() <= 1e-12 * p.norm().max(1.0) {
            real_poles.push(p.re);
        } else if p.im > 0.0 {
            sections.push(Section {
                b: numerator(false),
                a: [-2.0 * p.re, p.norm_sqr()],
            });
        }
    }
    real_poles.sort_by(|a, b| a.total_cmp(b));
    for pair in real_poles.chunks(2) {
        match *pair {
            [p1, p2] => sections.push(Section {
                b: numerator(false),
                a: [-(p1 + p2), p1 * p2],
            }),
            [p] => sections.push(Section {
                b: numerator(true),
                a: [-p, 0.0],
            }),
            _ => unreachable!(),
        }
    }

    let w_ref = 2.0 * PI * spec.reference_hz() / fs;
    let z_inv = Complex64::from_polar(1.0, -w_ref);
    for s in &mut sections {
        let g = s.response(z_inv).norm();
        for b in &mut s.b {
            *b /= g;
        }
    }

    Ok(DesignedFilter {
        sections,
        spec: *spec,
    })
}

/// Causal, forward-only filtering from zero initial state (transposed
/// direct form II per section).
pub fn apply_filter(filter: &DesignedFilter, input: &Signal) -> Result<Signal> {
    require_same_rate(filter.spec.sample_rate_hz, input.sample_rate_hz())?;
    let mut data = input.samples().to_vec();
    for s in &filter.sections {
        let [b0, b1, b2] = s.b;
        let [a1, a2] = s.a;
        let (mut z1, mut z2) = (0.0, 0.0);
        for x in &mut data {
            let y = b0 * *x + z1;
            z1 = b1 * *x - a1 * y + z2;
            z2 = b2 * *x - a2 * y;
            *x = y;
        }
    }
    Ok(Signal::derived(data, input.sample_rate_hz()))
}

/// Designs and applies in one step.
pub fn filter_signal(spec: &FilterSpec, input: &Signal) -> Result<Signal> {
    apply_filter(&design_butterworth(spec)?, input)
}

/// Cascade magnitude at `freq_hz`, evaluated on the unit circle.
pub fn frequency_response(filter: &DesignedFilter, freq_hz: f64) -> Result<f64> {
    let fs = filter.spec.sample_rate_hz;
    let nyquist = fs / 2.0;
    if !(0.0..=nyquist).contains(&freq_hz) {
        return Err(ModemError::FrequencyOutOfRange { freq_hz, nyquist_hz: nyquist });
    }
    let z_inv = Complex64::from_polar(1.0, -2.0 * PI * freq_hz / fs);
    Ok(filter
        .sections
        .iter()
        .map(|s| s.response(z_inv))
        .product::<Complex64>()
        .norm())
}
