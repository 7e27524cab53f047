//! Audio-band software modem: AM, FM, BFSK and on-off QAM transmitters and
//! receivers working on sampled audio, with the filters, spectral
//! estimation, WAV I/O and channel simulation they need.
//!
//! ```
//! use audiomodem::digital::{bfsk_demodulate, bfsk_modulate, bits_to_text, text_to_bits, BfskParams};
//!
//! let params = BfskParams { sample_rate_hz: 22_050.0, bit_rate: 10.0, ..Default::default() };
//! let wave = bfsk_modulate(&text_to_bits("h", params.bit_rate)?, &params)?;
//! let bits = bfsk_demodulate(&wave, 8, &params)?;
//! assert_eq!(bits_to_text(&bits)?, "h");
//! # Ok::<(), audiomodem::ModemError>(())
//! ```

pub mod align;
pub mod analog;
pub mod channel;
pub mod cli;
pub mod digital;
pub mod error;
pub mod filters;
pub mod signal;
pub mod spectrum;
pub mod wav;

pub use align::{align_by_crosscorrelation, Alignment};
pub use analog::{am_demodulate, am_modulate, fm_demodulate, fm_modulate, AmParams, FmParams};
pub use channel::{apply_channel, ChannelSpec};
pub use digital::{
    bfsk_demodulate, bfsk_modulate, bits_to_text, find_signal_start, qam_demodulate, qam_modulate,
    text_to_bits, BfskParams, BitFrame, QamParams,
};
pub use error::{ModemError, Result};
pub use filters::{apply_filter, design_butterworth, frequency_response, DesignedFilter, FilterKind, FilterSpec};
pub use signal::{differentiate, generate_tone, rectify_fullwave, scale, trapezoidal_integrate, Signal};
pub use spectrum::{power_spectral_density, Spectrum};
pub use wav::{read_wav, write_wav, WavMetadata};
