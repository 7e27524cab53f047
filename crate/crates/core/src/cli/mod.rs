//! The `audiomodem` command-line tool: each transmitter, receiver and the
//! channel as a file-in/file-out subcommand, a PSD exporter and a loopback
//! runner that chains them through WAV files.

mod csv;
mod loopback;
pub mod params;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analog::{am_demodulate, am_modulate, fm_demodulate, fm_modulate, AmParams, FmParams};
use crate::channel::{apply_channel, ChannelSpec};
use crate::digital::{
    bfsk_demodulate, bfsk_modulate, bits_to_text, qam_demodulate, qam_modulate, text_to_bits, BfskParams, QamParams,
};
use crate::error::ModemError;
use crate::signal::Signal;
use crate::spectrum::power_spectral_density;
use crate::wav::{read_wav, write_wav};

pub use csv::{export_spectrum_csv, read_spectrum_csv};
pub use loopback::{run_loopback, LoopbackReport};

/// Peak level demodulator outputs are normalized to before writing.
pub const OUTPUT_PEAK: f64 = 0.9;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("UsageError: {0}")]
    Usage(String),
    #[error(transparent)]
    Modem(#[from] ModemError),
}

impl CliError {
    /// 2 for usage errors, 1 for everything the pipelines report.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Modem(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "audiomodem", version, about = "Audio-band AM/FM/BFSK/QAM modem working on WAV files")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// AM-modulate a message WAV.
    #[command(after_help = params::help::<AmParams>("AM"))]
    AmMod(FileArgs),
    /// Envelope-detect an AM passband WAV.
    #[command(after_help = params::help::<AmParams>("AM"))]
    AmDemod(FileArgs),
    /// FM-modulate a message WAV.
    #[command(after_help = params::help::<FmParams>("FM"))]
    FmMod {
        #[command(flatten)]
        files: FileArgs,
        /// High-pass the message before the modulator.
        #[arg(long)]
        preemphasis: bool,
    },
    /// Discriminate an FM passband WAV.
    #[command(after_help = params::help::<FmParams>("FM"))]
    FmDemod {
        #[command(flatten)]
        files: FileArgs,
        /// Low-pass the recovered message.
        #[arg(long)]
        deemphasis: bool,
        /// Enable the 1000 Hz DC-removal high-pass stage.
        #[arg(long)]
        dc_removal_hpf: bool,
    },
    /// Encode ASCII text as a BFSK WAV.
    #[command(after_help = params::help::<BfskParams>("BFSK"))]
    BfskMod(TextArgs),
    /// Decode a BFSK WAV; prints the text.
    #[command(after_help = params::help::<BfskParams>("BFSK"))]
    BfskDemod(BitsArgs),
    /// Encode two equal-length ASCII texts on the I and Q arms.
    #[command(after_help = params::help::<QamParams>("QAM"))]
    QamMod(QamTextArgs),
    /// Decode a QAM WAV; prints the I text then the Q text.
    #[command(after_help = params::help::<QamParams>("QAM"))]
    QamDemod(BitsArgs),
    /// Pass a WAV through the simulated channel.
    Channel {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        #[command(flatten)]
        channel: ChannelArgs,
    },
    /// Write the PSD of a WAV as frequency_hz,power CSV.
    Psd {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// Segment length in samples (even, at least 16).
        #[arg(long, default_value_t = 4096)]
        segment: usize,
    },
    /// Modulate, pass through the channel and demodulate via WAV files,
    /// then report bit errors or correlation.
    #[command(after_help = loopback_help())]
    Loopback(LoopbackArgs),
}

#[derive(Debug, Args)]
pub struct FileArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "out")]
    pub output: PathBuf,
    /// Parameter override, repeatable.
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct TextArgs {
    #[arg(long)]
    pub text: String,
    #[arg(long = "out")]
    pub output: PathBuf,
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct QamTextArgs {
    /// Text on the cosine arm.
    #[arg(long)]
    pub text_i: String,
    /// Text on the sine arm.
    #[arg(long)]
    pub text_q: String,
    #[arg(long = "out")]
    pub output: PathBuf,
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct BitsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Number of bits to decode (per arm for QAM).
    #[arg(long)]
    pub bits: usize,
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gain: f64,
    /// Leading pad, seconds.
    #[arg(long, default_value_t = 0.0)]
    pub lead_pad: f64,
    #[arg(long, default_value_t = 0.0)]
    pub pad_noise_sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ChannelArgs {
    pub fn spec(&self) -> ChannelSpec {
        ChannelSpec {
            noise_sigma: self.noise_sigma,
            gain: self.gain,
            lead_pad_s: self.lead_pad,
            pad_noise_sigma: self.pad_noise_sigma,
            rng_seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Am,
    Fm,
    Bfsk,
    Qam,
}

#[derive(Debug, Clone, Args)]
pub struct LoopbackArgs {
    #[arg(long, value_enum)]
    pub scheme: Scheme,
    /// Payload for BFSK, and the I arm for QAM.
    #[arg(long, default_value = "h")]
    pub text: String,
    /// Q-arm payload for QAM; defaults to --text.
    #[arg(long)]
    pub text_q: Option<String>,
    /// Tone message frequency for AM/FM.
    #[arg(long, default_value_t = 500.0)]
    pub tone_hz: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tone_amplitude: f64,
    /// Tone message length, seconds.
    #[arg(long, default_value_t = 1.0)]
    pub duration: f64,
    #[arg(long)]
    pub preemphasis: bool,
    #[arg(long)]
    pub deemphasis: bool,
    /// Keep the intermediate WAV files here instead of a temporary directory.
    #[arg(long)]
    pub work_dir: Option<PathBuf>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

fn loopback_help() -> String {
    [
        params::help::<AmParams>("AM"),
        params::help::<FmParams>("FM"),
        params::help::<BfskParams>("BFSK"),
        params::help::<QamParams>("QAM"),
    ]
    .join("\n")
}

/// Reads a WAV and checks its rate is one the tool supports.
fn read_input(path: &Path) -> Result<Signal, CliError> {
    let signal = read_wav(path)?;
    params::check_rate(signal.sample_rate_hz(), "input sample rate")?;
    Ok(signal)
}

/// Writes a transmitter or channel output, scaling it down to
/// [`OUTPUT_PEAK`] only when it would not fit the 16-bit range.
pub fn write_fitted(path: &Path, signal: &Signal) -> Result<(), CliError> {
    if signal.peak() > 1.0 {
        eprintln!(
            "note: peak {:.4} exceeds full scale; {} written normalized to {OUTPUT_PEAK}",
            signal.peak(),
            path.display()
        );
        write_wav(path, &signal.normalize_peak(OUTPUT_PEAK))?;
    } else {
        write_wav(path, signal)?;
    }
    Ok(())
}

/// Writes a demodulator output normalized to [`OUTPUT_PEAK`] and clipped.
pub fn write_demodulated(path: &Path, signal: &Signal) -> Result<(), CliError> {
    let out = signal.normalize_peak(OUTPUT_PEAK).map(|v| v.clamp(-1.0, 1.0))?;
    write_wav(path, &out)?;
    Ok(())
}

/// Executes one subcommand; text results go to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Modem(ModemError::Io(e));
    match &config.command {
        Command::AmMod(a) => {
            let msg = read_input(&a.input)?;
            let p: AmParams = params::build(Some(msg.sample_rate_hz()), &a.params)?;
            write_fitted(&a.output, &am_modulate(&msg, &p)?)
        }
        Command::AmDemod(a) => {
            let rx = read_input(&a.input)?;
            let p: AmParams = params::build(Some(rx.sample_rate_hz()), &a.params)?;
            write_demodulated(&a.output, &am_demodulate(&rx, &p)?)
        }
        Command::FmMod { files, preemphasis } => {
            let msg = read_input(&files.input)?;
            let p: FmParams = params::build(Some(msg.sample_rate_hz()), &files.params)?;
            write_fitted(&files.output, &fm_modulate(&msg, &p, *preemphasis)?)
        }
        Command::FmDemod {
            files,
            deemphasis,
            dc_removal_hpf,
        } => {
            let rx = read_input(&files.input)?;
            let mut p: FmParams = params::build(Some(rx.sample_rate_hz()), &files.params)?;
            p.dc_removal_hpf_enabled |= *dc_removal_hpf;
            write_demodulated(&files.output, &fm_demodulate(&rx, &p, *deemphasis)?)
        }
        Command::BfskMod(a) => {
            let p: BfskParams = params::build(None, &a.params)?;
            let frame = text_to_bits(&a.text, p.bit_rate)?;
            write_fitted(&a.output, &bfsk_modulate(&frame, &p)?)
        }
        Command::BfskDemod(a) => {
            let rx = read_input(&a.input)?;
            let p: BfskParams = params::build(Some(rx.sample_rate_hz()), &a.params)?;
            let bits = bfsk_demodulate(&rx, a.bits, &p)?;
            writeln!(out, "{}", bits_to_text(&bits)?).map_err(io)
        }
        Command::QamMod(a) => {
            let p: QamParams = params::build(None, &a.params)?;
            let fi = text_to_bits(&a.text_i, p.bit_rate)?;
            let fq = text_to_bits(&a.text_q, p.bit_rate)?;
            write_fitted(&a.output, &qam_modulate(&fi, &fq, &p)?)
        }
        Command::QamDemod(a) => {
            let rx = read_input(&a.input)?;
            let p: QamParams = params::build(Some(rx.sample_rate_hz()), &a.params)?;
            let (fi, fq) = qam_demodulate(&rx, a.bits, &p)?;
            writeln!(out, "{}\n{}", bits_to_text(&fi)?, bits_to_text(&fq)?).map_err(io)
        }
        Command::Channel {
            input,
            output,
            channel,
        } => {
            let signal = read_input(input)?;
            write_fitted(output, &apply_channel(&signal, &channel.spec())?)
        }
        Command::Psd {
            input,
            output,
            segment,
        } => {
            let signal = read_input(input)?;
            export_spectrum_csv(&power_spectral_density(&signal, *segment)?, output)?;
            Ok(())
        }
        Command::Loopback(a) => {
            let report = run_loopback(a)?;
            write!(out, "{report}").map_err(io)
        }
    }
}

/// Parses `args` (program name first), runs, prints diagnostics and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("UsageError: {}", first.trim_start_matches("error: "));
            return 2;
        }
    };
    let stdout = std::io::stdout();
    match run(&config, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
