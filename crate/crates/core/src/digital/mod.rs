//! Text framing plus the BFSK and on-off QAM transmit/receive chains.

mod bfsk;
mod framing;
mod qam;

pub use bfsk::{bfsk_demodulate, bfsk_modulate, find_signal_start, BfskParams};
pub use framing::{bits_to_text, text_to_bits, BitFrame, BitOrder};
pub use qam::{qam_arms, qam_demodulate, qam_modulate, QamParams};

use crate::error::{ModemError, Result};

/// Whole samples per symbol, or an error if `fs / bit_rate` is fractional.
pub fn samples_per_symbol(sample_rate_hz: f64, bit_rate: f64) -> Result<usize> {
    let sps = sample_rate_hz / bit_rate;
    let rounded = sps.round();
    if !(sps.is_finite() && rounded >= 1.0 && (sps - rounded).abs() <= 1e-9 * rounded) {
        return Err(ModemError::NonIntegralSymbolLength {
            sample_rate_hz,
            bit_rate,
        });
    }
    Ok(rounded as usize)
}

/// Mean of each consecutive `sps`-sample block of `samples`.
pub(crate) fn symbol_means(samples: &[f64], sps: usize) -> impl Iterator<Item = f64> + '_ {
    samples
        .chunks_exact(sps)
        .map(move |block| block.iter().sum::<f64>() / sps as f64)
}
