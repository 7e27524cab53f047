use std::fmt;
use std::path::Path;

use crate::align::align_by_crosscorrelation;
use crate::analog::{am_demodulate, am_modulate, fm_demodulate, fm_modulate, AmParams, FmParams};
use crate::channel::apply_channel;
use crate::digital::{
    bfsk_demodulate, bfsk_modulate, bits_to_text, qam_demodulate, qam_modulate, text_to_bits, BfskParams, QamParams,
};
use crate::error::ModemError;
use crate::signal::{generate_tone, Signal};
use crate::wav::read_wav;

use super::{params, write_demodulated, write_fitted, CliError, LoopbackArgs, Scheme};

#[derive(Debug, Clone, PartialEq)]
pub enum LoopbackReport {
    /// Tone message against the demodulated output, after alignment.
    Analog { scheme: Scheme, lag: isize, correlation: f64 },
    /// One entry per transmitted frame (two for QAM).
    Digital {
        scheme: Scheme,
        bits: usize,
        bit_errors: Vec<usize>,
        decoded: Vec<String>,
    },
}

impl LoopbackReport {
    pub fn total_bit_errors(&self) -> Option<usize> {
        match self {
            LoopbackReport::Digital { bit_errors, .. } => Some(bit_errors.iter().sum()),
            LoopbackReport::Analog { .. } => None,
        }
    }
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::Am => "am",
        Scheme::Fm => "fm",
        Scheme::Bfsk => "bfsk",
        Scheme::Qam => "qam",
    }
}

impl fmt::Display for LoopbackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopbackReport::Analog {
                scheme,
                lag,
                correlation,
            } => {
                writeln!(f, "scheme={}", scheme_name(*scheme))?;
                writeln!(f, "lag={lag}")?;
                writeln!(f, "correlation={correlation:.6}")
            }
            LoopbackReport::Digital {
                scheme,
                bits,
                bit_errors,
                decoded,
            } => {
                writeln!(f, "scheme={}", scheme_name(*scheme))?;
                writeln!(f, "bits={bits}")?;
                writeln!(f, "bit_errors={}", bit_errors.iter().sum::<usize>())?;
                match decoded.as_slice() {
                    [one] => writeln!(f, "decoded={}", one.escape_debug()),
                    [i, q] => {
                        writeln!(f, "bit_errors_i={}", bit_errors[0])?;
                        writeln!(f, "bit_errors_q={}", bit_errors[1])?;
                        writeln!(f, "decoded_i={}", i.escape_debug())?;
                        writeln!(f, "decoded_q={}", q.escape_debug())
                    }
                    _ => Ok(()),
                }
            }
        }
    }
}

/// Writes with `write`, then reads the file back so every stage sees what a
/// separate command would.
fn through_file(
    dir: &Path,
    name: &str,
    signal: &Signal,
    write: fn(&Path, &Signal) -> Result<(), CliError>,
) -> Result<Signal, CliError> {
    let path = dir.join(name);
    write(&path, signal)?;
    Ok(read_wav(&path)?)
}

/// Runs transmitter, channel and receiver for one scheme, passing every
/// intermediate signal through a WAV file.
pub fn run_loopback(args: &LoopbackArgs) -> Result<LoopbackReport, CliError> {
    let temp;
    let dir = match &args.work_dir {
        Some(d) => {
            std::fs::create_dir_all(d).map_err(ModemError::Io)?;
            d.as_path()
        }
        None => {
            temp = tempfile::tempdir().map_err(ModemError::Io)?;
            temp.path()
        }
    };
    let channel = args.channel.spec();

    let analog = |fs: f64,
                  modulate: &dyn Fn(&Signal) -> crate::error::Result<Signal>,
                  demodulate: &dyn Fn(&Signal) -> crate::error::Result<Signal>|
     -> Result<LoopbackReport, CliError> {
        params::check_rate(fs, "sample_rate_hz")?;
        let tone = generate_tone(args.tone_hz, args.tone_amplitude, 0.0, args.duration, fs)?;
        let message = through_file(dir, "message.wav", &tone, write_fitted)?;
        let tx = through_file(dir, "tx.wav", &modulate(&message)?, write_fitted)?;
        let rx = through_file(dir, "rx.wav", &apply_channel(&tx, &channel)?, write_fitted)?;
        let out = through_file(dir, "out.wav", &demodulate(&rx)?, write_demodulated)?;
        let a = align_by_crosscorrelation(&message, &out)?;
        Ok(LoopbackReport::Analog {
            scheme: args.scheme,
            lag: a.lag,
            correlation: a.correlation,
        })
    };

    match args.scheme {
        Scheme::Am => {
            let p: AmParams = params::build(None, &args.params)?;
            analog(p.sample_rate_hz, &|m| am_modulate(m, &p), &|r| am_demodulate(r, &p))
        }
        Scheme::Fm => {
            let p: FmParams = params::build(None, &args.params)?;
            analog(
                p.sample_rate_hz,
                &|m| fm_modulate(m, &p, args.preemphasis),
                &|r| fm_demodulate(r, &p, args.deemphasis),
            )
        }
        Scheme::Bfsk => {
            let p: BfskParams = params::build(None, &args.params)?;
            let frame = text_to_bits(&args.text, p.bit_rate)?;
            let tx = through_file(dir, "tx.wav", &bfsk_modulate(&frame, &p)?, write_fitted)?;
            let rx = through_file(dir, "rx.wav", &apply_channel(&tx, &channel)?, write_fitted)?;
            let got = bfsk_demodulate(&rx, frame.len(), &p)?;
            Ok(LoopbackReport::Digital {
                scheme: Scheme::Bfsk,
                bits: frame.len(),
                bit_errors: vec![frame.bit_errors(&got)],
                decoded: vec![bits_to_text(&got)?],
            })
        }
        Scheme::Qam => {
            let p: QamParams = params::build(None, &args.params)?;
            let text_q = args.text_q.as_deref().unwrap_or(&args.text);
            let fi = text_to_bits(&args.text, p.bit_rate)?;
            let fq = text_to_bits(text_q, p.bit_rate)?;
            let tx = through_file(dir, "tx.wav", &qam_modulate(&fi, &fq, &p)?, write_fitted)?;
            let rx = through_file(dir, "rx.wav", &apply_channel(&tx, &channel)?, write_fitted)?;
            let (gi, gq) = qam_demodulate(&rx, fi.len(), &p)?;
            Ok(LoopbackReport::Digital {
                scheme: Scheme::Qam,
                bits: fi.len(),
                bit_errors: vec![fi.bit_errors(&gi), fq.bit_errors(&gq)],
                decoded: vec![bits_to_text(&gi)?, bits_to_text(&gq)?],
            })
        }
    }
}
