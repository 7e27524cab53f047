use crate::error::{ModemError, Result};

/// Bit ordering within each byte. Only most-significant-bit first is used;
/// it is carried on the frame so both ends agree by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BitOrder {
    #[default]
    MsbFirst,
}

/// Ordered bits (each 0 or 1) sent at `bit_rate` bits per second.
#[derive(Debug, Clone, PartialEq)]
pub struct BitFrame {
    bits: Vec<u8>,
    bit_rate: f64,
    bit_order: BitOrder,
}

impl BitFrame {
    pub fn new(bits: Vec<u8>, bit_rate: f64) -> Result<Self> {
        if !(bit_rate.is_finite() && bit_rate > 0.0) {
            return Err(ModemError::InvalidParameter(format!(
                "bit rate must be positive, got {bit_rate}"
            )));
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(ModemError::InvalidBit(b));
        }
        Ok(Self {
            bits,
            bit_rate,
            bit_order: BitOrder::MsbFirst,
        })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bit_rate(&self) -> f64 {
        self.bit_rate
    }

    pub fn bit_order(&self) -> BitOrder {
        self.bit_order
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of positions where two frames disagree, plus any length
    /// difference.
    pub fn bit_errors(&self, other: &BitFrame) -> usize {
        let common = self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count();
        common + self.bits.len().abs_diff(other.bits.len())
    }
}

/// Expands ASCII text to 8 bits per character, MSB first.
pub fn text_to_bits(text: &str, bit_rate: f64) -> Result<BitFrame> {
    if let Some(c) = text.chars().find(|c| !c.is_ascii()) {
        return Err(ModemError::NonAsciiInput(c));
    }
    let bits = text
        .bytes()
        .flat_map(|byte| (0..8).rev().map(move |i| (byte >> i) & 1))
        .collect();
    BitFrame::new(bits, bit_rate)
}

/// Packs bits back into characters, one per byte. Bytes above 127 map to
/// the Unicode code point of the same value so every byte survives.
pub fn bits_to_text(frame: &BitFrame) -> Result<String> {
    if !frame.len().is_multiple_of(8) {
        return Err(ModemError::FrameLengthNotByteAligned(frame.len()));
    }
    Ok(frame
        .bits
        .chunks_exact(8)
        .map(|byte| char::from(byte.iter().fold(0u8, |acc, b| (acc << 1) | b)))
        .collect())
}
