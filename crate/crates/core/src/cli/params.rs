//! `key=value` overrides onto the scheme parameter records.

use crate::analog::{AmParams, FmParams};
use crate::digital::{BfskParams, QamParams};

use super::CliError;

/// Sample rates the tool accepts, for files and overrides alike.
pub const SUPPORTED_RATES: [u32; 2] = [44_100, 22_050];

trait ParamValue: Sized {
    fn parse(text: &str) -> Result<Self, String>;
    fn show(&self) -> String;
}

impl ParamValue for f64 {
    fn parse(text: &str) -> Result<Self, String> {
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("expected a finite number, got `{text}`"))
    }

    fn show(&self) -> String {
        format!("{self}")
    }
}

impl ParamValue for usize {
    fn parse(text: &str) -> Result<Self, String> {
        text.parse().map_err(|_| format!("expected a non-negative integer, got `{text}`"))
    }

    fn show(&self) -> String {
        self.to_string()
    }
}

impl ParamValue for bool {
    fn parse(text: &str) -> Result<Self, String> {
        match text.to_ascii_lowercase().as_str() {
            "true" | "on" | "yes" | "1" => Ok(true),
            "false" | "off" | "no" | "0" => Ok(false),
            _ => Err(format!("expected true or false, got `{text}`")),
        }
    }

    fn show(&self) -> String {
        self.to_string()
    }
}

impl ParamValue for Option<f64> {
    fn parse(text: &str) -> Result<Self, String> {
        match text.to_ascii_lowercase().as_str() {
            "none" | "off" => Ok(None),
            _ => f64::parse(text).map(Some),
        }
    }

    fn show(&self) -> String {
        match self {
            Some(v) => v.show(),
            None => "none".into(),
        }
    }
}

/// A parameter record whose fields can be listed and set by name.
pub trait ParamRecord: Default {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String>;
    fn entries(&self) -> Vec<(&'static str, String)>;
}

macro_rules! param_record {
    ($ty:ty { $($field:ident),* $(,)? }) => {
        impl ParamRecord for $ty {
            fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
                match key {
                    $(stringify!($field) => {
                        self.$field = ParamValue::parse(value).map_err(|e| format!("{key}: {e}"))?;
                    })*
                    _ => return Err(format!("unknown parameter `{key}`")),
                }
                Ok(())
            }

            fn entries(&self) -> Vec<(&'static str, String)> {
                vec![$((stringify!($field), ParamValue::show(&self.$field))),*]
            }
        }
    };
}

param_record!(AmParams {
    carrier_freq_hz,
    carrier_amplitude,
    modulation_index,
    message_bandwidth_hz,
    message_gain,
    output_gain,
    noise_bpf_bandwidth_hz,
    envelope_lpf_cutoff_hz,
    sample_rate_hz,
    filter_order,
});

param_record!(FmParams {
    carrier_freq_hz,
    carrier_amplitude,
    freq_sensitivity_hz_per_volt,
    preemphasis_cutoff_hz,
    noise_bpf_bandwidth_hz,
    envelope_lpf_cutoff_hz,
    deemphasis_lpf_cutoff_hz,
    dc_removal_hpf_cutoff_hz,
    dc_removal_hpf_enabled,
    output_gain,
    sample_rate_hz,
    filter_order,
});

param_record!(BfskParams {
    freq_zero_hz,
    freq_one_hz,
    carrier_amplitude,
    bit_rate,
    bpf_bandwidth_hz,
    start_threshold,
    sample_rate_hz,
    filter_order,
});

param_record!(QamParams {
    carrier_freq_hz,
    carrier_amplitude,
    bit_rate,
    lpf_cutoff_hz,
    output_scale,
    sample_rate_hz,
    filter_order,
    prefilter_bandwidth_hz,
});

pub(crate) fn check_rate(rate_hz: f64, what: &str) -> Result<(), CliError> {
    if SUPPORTED_RATES.iter().any(|&r| f64::from(r) == rate_hz) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} {rate_hz} Hz is not one of 44100, 22050")))
    }
}

/// Builds a record from its defaults, an optional file sample rate and the
/// user's `key=value` overrides, in that order.
pub fn build<P: ParamRecord>(file_rate_hz: Option<f64>, overrides: &[String]) -> Result<P, CliError> {
    let mut record = P::default();
    if let Some(rate) = file_rate_hz {
        check_rate(rate, "input sample rate")?;
        record
            .set("sample_rate_hz", &rate.to_string())
            .map_err(CliError::Usage)?;
    }
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter `{item}` is not key=value")))?;
        let (key, value) = (key.trim(), value.trim());
        record.set(key, value).map_err(CliError::Usage)?;
        if key == "sample_rate_hz" {
            check_rate(value.parse().unwrap_or(f64::NAN), "sample_rate_hz")?;
        }
    }
    Ok(record)
}

/// Help text listing every key with its default.
pub fn help<P: ParamRecord>(title: &str) -> String {
    let entries = P::default().entries();
    let width = entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut text = format!("{title} parameters (-p key=value), defaults:\n");
    for (key, value) in entries {
        text.push_str(&format!("  {key:<width$}  {value}\n"));
    }
    text
}
