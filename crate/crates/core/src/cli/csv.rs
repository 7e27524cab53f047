use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{ModemError, Result};
use crate::spectrum::Spectrum;

const HEADER: &str = "frequency_hz,power";

/// Writes `frequency_hz,power` rows, lowest frequency first. Values use the
/// shortest text that parses back to the same `f64`.
pub fn export_spectrum_csv(spectrum: &Spectrum, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{HEADER}")?;
    for (freq, power) in spectrum.frequencies().zip(spectrum.power()) {
        writeln!(out, "{freq},{power}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a file written by [`export_spectrum_csv`].
pub fn read_spectrum_csv(path: impl AsRef<Path>) -> Result<Spectrum> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => ModemError::FileNotFound(path.to_path_buf()),
        _ => ModemError::Io(e),
    })?;
    let bad = |line: usize, why: &str| ModemError::InvalidParameter(format!("spectrum CSV line {line}: {why}"));
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(bad(1, "missing header"));
    }
    let mut freqs = Vec::new();
    let mut power = Vec::new();
    for (i, line) in lines.enumerate() {
        let (f, p) = line.split_once(',').ok_or_else(|| bad(i + 2, "expected two columns"))?;
        freqs.push(f.parse::<f64>().map_err(|_| bad(i + 2, "bad frequency"))?);
        power.push(p.parse::<f64>().map_err(|_| bad(i + 2, "bad power"))?);
    }
    let bin_hz = match freqs.as_slice() {
        [_, second, ..] => *second,
        _ => return Err(bad(2, "need at least two rows to recover the bin width")),
    };
    let spectrum = Spectrum::new(bin_hz, power)?;
    if spectrum.frequencies().zip(&freqs).any(|(a, b)| a != *b) {
        return Err(bad(2, "frequencies are not evenly spaced from zero"));
    }
    Ok(spectrum)
}
