//! Deterministic stand-in for the acoustic path between transmitter and
//! receiver: a noisy lead-in pad, then the gained payload plus white
//! Gaussian noise.
//!
//! Noise comes from ChaCha8 seeded with `rng_seed` (via
//! `SeedableRng::seed_from_u64`) and is shaped by the ziggurat normal
//! sampler of `rand_distr`. Pad samples are drawn first, then payload
//! noise, one draw per sample; a zero sigma skips its draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{ModemError, Result};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    /// Standard deviation of noise added to the payload, volts.
    pub noise_sigma: f64,
    pub gain: f64,
    /// Leading silence/noise inserted before the payload, seconds.
    pub lead_pad_s: f64,
    pub pad_noise_sigma: f64,
    pub rng_seed: u64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self {
            noise_sigma: 0.0,
            gain: 1.0,
            lead_pad_s: 0.0,
            pad_noise_sigma: 0.0,
            rng_seed: 0,
        }
    }
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64, ok: bool| {
            if v.is_finite() && ok {
                Ok(())
            } else {
                Err(ModemError::InvalidParameter(format!("channel {name} = {v} is out of range")))
            }
        };
        check("noise_sigma", self.noise_sigma, self.noise_sigma >= 0.0)?;
        check("pad_noise_sigma", self.pad_noise_sigma, self.pad_noise_sigma >= 0.0)?;
        check("gain", self.gain, self.gain > 0.0)?;
        check("lead_pad_s", self.lead_pad_s, self.lead_pad_s >= 0.0)
    }
}

/// `concat(pad, gain * input + noise)`.
pub fn apply_channel(input: &Signal, spec: &ChannelSpec) -> Result<Signal> {
    spec.validate()?;
    if input.is_empty() {
        return Err(ModemError::EmptySignal("channel input is empty"));
    }
    let fs = input.sample_rate_hz();
    let pad_len = (spec.lead_pad_s * fs).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut out = Vec::with_capacity(pad_len + input.len());

    if spec.pad_noise_sigma > 0.0 {
        let pad_noise = Normal::new(0.0, spec.pad_noise_sigma).expect("sigma validated");
        out.extend((0..pad_len).map(|_| pad_noise.sample(&mut rng)));
    } else {
        out.resize(pad_len, 0.0);
    }

    if spec.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, spec.noise_sigma).expect("sigma validated");
        out.extend(
            input
                .samples()
                .iter()
                .map(|x| spec.gain * x + noise.sample(&mut rng)),
        );
    } else {
        out.extend(input.samples().iter().map(|x| spec.gain * x));
    }
    Signal::new(out, fs)
}
