//! Python bindings: `import pyaudiomodem`.
//!
//! Signals, spectra and frames are wrapped as opaque classes; parameter
//! records are plain classes with one attribute per field, built from
//! keyword arguments over the library defaults.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyTypeError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use audiomodem as am;

create_exception!(pyaudiomodem, ModemError, PyException, "Raised for every library error.");

fn err(e: am::ModemError) -> PyErr {
    ModemError::new_err(e.to_string())
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for am::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(err)
    }
}

#[pyclass(name = "Signal", module = "pyaudiomodem", frozen)]
pub struct PySignal {
    inner: am::Signal,
}

impl From<am::Signal> for PySignal {
    fn from(inner: am::Signal) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PySignal {
    #[new]
    fn new(samples: Vec<f64>, sample_rate_hz: f64) -> PyResult<Self> {
        Ok(am::Signal::new(samples, sample_rate_hz).or_raise()?.into())
    }

    #[staticmethod]
    fn zeros(len: usize, sample_rate_hz: f64) -> PyResult<Self> {
        Ok(am::Signal::zeros(len, sample_rate_hz).or_raise()?.into())
    }

    #[getter]
    fn samples(&self) -> Vec<f64> {
        self.inner.samples().to_vec()
    }

    #[getter]
    fn sample_rate_hz(&self) -> f64 {
        self.inner.sample_rate_hz()
    }

    #[getter]
    fn duration_seconds(&self) -> f64 {
        self.inner.duration_seconds()
    }

    fn peak(&self) -> f64 {
        self.inner.peak()
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn rms(&self) -> f64 {
        self.inner.rms()
    }

    fn remove_mean(&self) -> Self {
        self.inner.remove_mean().into()
    }

    fn normalize_peak(&self, target: f64) -> Self {
        self.inner.normalize_peak(target).into()
    }

    fn slice(&self, start: usize, len: usize) -> PyResult<Self> {
        Ok(self.inner.slice(start, len).or_raise()?.into())
    }

    fn concat(&self, other: &PySignal) -> PyResult<Self> {
        Ok(self.inner.concat(&other.inner).or_raise()?.into())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Signal(len={}, sample_rate_hz={}, peak={:.6})",
            self.inner.len(),
            self.inner.sample_rate_hz(),
            self.inner.peak()
        )
    }
}

#[pyclass(name = "Spectrum", module = "pyaudiomodem", frozen)]
pub struct PySpectrum {
    inner: am::Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[new]
    fn new(bin_hz: f64, power: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: am::Spectrum::new(bin_hz, power).or_raise()?,
        })
    }

    #[getter]
    fn bin_hz(&self) -> f64 {
        self.inner.bin_hz()
    }

    #[getter]
    fn power(&self) -> Vec<f64> {
        self.inner.power().to_vec()
    }

    #[getter]
    fn frequencies(&self) -> Vec<f64> {
        self.inner.frequencies().collect()
    }

    fn peak_bin(&self) -> Option<usize> {
        self.inner.peak_bin()
    }

    fn peak_frequency(&self) -> Option<f64> {
        self.inner.peak_bin().map(|k| self.inner.frequency_of(k))
    }

    fn total_power(&self) -> f64 {
        self.inner.total_power()
    }

    fn band_power(&self, freq_hz: f64, half_width: usize) -> f64 {
        self.inner.band_power(freq_hz, half_width)
    }

    fn occupied_bandwidth(&self, fraction: f64) -> f64 {
        self.inner.occupied_bandwidth(fraction)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Spectrum(bins={}, bin_hz={})", self.inner.len(), self.inner.bin_hz())
    }
}

#[pyclass(name = "FilterSpec", module = "pyaudiomodem", frozen)]
pub struct PyFilterSpec {
    inner: am::FilterSpec,
}

#[pymethods]
impl PyFilterSpec {
    #[staticmethod]
    #[pyo3(signature = (cutoff_hz, sample_rate_hz, order = am::filters::DEFAULT_ORDER))]
    fn lowpass(cutoff_hz: f64, sample_rate_hz: f64, order: usize) -> Self {
        Self {
            inner: am::FilterSpec::lowpass(order, cutoff_hz, sample_rate_hz),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (cutoff_hz, sample_rate_hz, order = am::filters::DEFAULT_ORDER))]
    fn highpass(cutoff_hz: f64, sample_rate_hz: f64, order: usize) -> Self {
        Self {
            inner: am::FilterSpec::highpass(order, cutoff_hz, sample_rate_hz),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (low_hz, high_hz, sample_rate_hz, order = am::filters::DEFAULT_ORDER))]
    fn bandpass(low_hz: f64, high_hz: f64, sample_rate_hz: f64, order: usize) -> Self {
        Self {
            inner: am::FilterSpec::bandpass(order, low_hz, high_hz, sample_rate_hz),
        }
    }

    /// Band of `bandwidth_hz` centred arithmetically on `centre_hz`.
    #[staticmethod]
    #[pyo3(signature = (centre_hz, bandwidth_hz, sample_rate_hz, order = am::filters::DEFAULT_ORDER))]
    fn bandpass_around(centre_hz: f64, bandwidth_hz: f64, sample_rate_hz: f64, order: usize) -> Self {
        Self {
            inner: am::FilterSpec::bandpass_around(order, centre_hz, bandwidth_hz, sample_rate_hz),
        }
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            am::FilterKind::Lowpass => "lowpass",
            am::FilterKind::Highpass => "highpass",
            am::FilterKind::Bandpass => "bandpass",
        }
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order
    }

    #[getter]
    fn sample_rate_hz(&self) -> f64 {
        self.inner.sample_rate_hz
    }

    #[getter]
    fn edges_hz(&self) -> Vec<f64> {
        self.inner.edges_hz()
    }

    #[getter]
    fn reference_hz(&self) -> f64 {
        self.inner.reference_hz()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyclass(name = "DesignedFilter", module = "pyaudiomodem", frozen)]
pub struct PyDesignedFilter {
    inner: am::DesignedFilter,
}

#[pymethods]
impl PyDesignedFilter {
    /// `[(b0, b1, b2), (a1, a2)]` per second-order section.
    #[getter]
    fn sections(&self) -> Vec<([f64; 3], [f64; 2])> {
        self.inner.sections().iter().map(|s| (s.b, s.a)).collect()
    }

    fn is_stable(&self) -> bool {
        self.inner.is_stable()
    }

    fn max_pole_radius(&self) -> f64 {
        self.inner.max_pole_radius()
    }

    fn response(&self, freq_hz: f64) -> PyResult<f64> {
        am::frequency_response(&self.inner, freq_hz).or_raise()
    }

    fn apply(&self, input: &PySignal) -> PyResult<PySignal> {
        Ok(am::apply_filter(&self.inner, &input.inner).or_raise()?.into())
    }

    fn __repr__(&self) -> String {
        format!("DesignedFilter({:?}, sections={})", self.inner.spec(), self.inner.sections().len())
    }
}

/// Mirror class for a library parameter record: one read/write attribute
/// per field, keyword construction over the library defaults.
macro_rules! py_record {
    ($py:ident, $name:literal, $inner:ty { $($field:ident : $ty:ty),* $(,)? }) => {
        #[pyclass(name = $name, module = "pyaudiomodem", skip_from_py_object)]
        #[derive(Clone, Debug)]
        pub struct $py {
            $(#[pyo3(get, set)] pub $field: $ty,)*
        }

        impl From<&$inner> for $py {
            fn from(p: &$inner) -> Self {
                Self { $($field: p.$field,)* }
            }
        }

        impl From<&$py> for $inner {
            fn from(p: &$py) -> Self {
                Self { $($field: p.$field,)* }
            }
        }

        #[pymethods]
        impl $py {
            #[new]
            #[pyo3(signature = (**kwargs))]
            fn new(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
                let mut record = Self::from(&<$inner>::default());
                if let Some(kwargs) = kwargs {
                    for (key, value) in kwargs.iter() {
                        let key: String = key.extract()?;
                        match key.as_str() {
                            $(stringify!($field) => record.$field = value.extract()?,)*
                            _ => return Err(PyTypeError::new_err(format!("{} has no parameter `{key}`", $name))),
                        }
                    }
                }
                Ok(record)
            }

            fn validate(&self) -> PyResult<()> {
                <$inner>::from(self).validate().or_raise()
            }

            fn as_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
                let d = PyDict::new(py);
                $(d.set_item(stringify!($field), self.$field)?;)*
                Ok(d)
            }

            fn __repr__(&self) -> String {
                format!("{:?}", <$inner>::from(self))
            }
        }
    };
}

py_record!(PyAmParams, "AmParams", am::AmParams {
    carrier_freq_hz: f64,
    carrier_amplitude: f64,
    modulation_index: f64,
    message_bandwidth_hz: f64,
    message_gain: f64,
    output_gain: f64,
    noise_bpf_bandwidth_hz: f64,
    envelope_lpf_cutoff_hz: f64,
    sample_rate_hz: f64,
    filter_order: usize,
});

py_record!(PyFmParams, "FmParams", am::FmParams {
    carrier_freq_hz: f64,
    carrier_amplitude: f64,
    freq_sensitivity_hz_per_volt: f64,
    preemphasis_cutoff_hz: f64,
    noise_bpf_bandwidth_hz: f64,
    envelope_lpf_cutoff_hz: f64,
    deemphasis_lpf_cutoff_hz: f64,
    dc_removal_hpf_cutoff_hz: f64,
    dc_removal_hpf_enabled: bool,
    output_gain: f64,
    sample_rate_hz: f64,
    filter_order: usize,
});

py_record!(PyBfskParams, "BfskParams", am::BfskParams {
    freq_zero_hz: f64,
    freq_one_hz: f64,
    carrier_amplitude: f64,
    bit_rate: f64,
    bpf_bandwidth_hz: f64,
    start_threshold: f64,
    sample_rate_hz: f64,
    filter_order: usize,
});

py_record!(PyQamParams, "QamParams", am::QamParams {
    carrier_freq_hz: f64,
    carrier_amplitude: f64,
    bit_rate: f64,
    lpf_cutoff_hz: f64,
    output_scale: f64,
    sample_rate_hz: f64,
    filter_order: usize,
    prefilter_bandwidth_hz: Option<f64>,
});

py_record!(PyChannelSpec, "ChannelSpec", am::ChannelSpec {
    noise_sigma: f64,
    gain: f64,
    lead_pad_s: f64,
    pad_noise_sigma: f64,
    rng_seed: u64,
});

#[pyclass(name = "BitFrame", module = "pyaudiomodem", frozen)]
pub struct PyBitFrame {
    inner: am::BitFrame,
}

impl From<am::BitFrame> for PyBitFrame {
    fn from(inner: am::BitFrame) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyBitFrame {
    #[new]
    fn new(bits: Vec<u8>, bit_rate: f64) -> PyResult<Self> {
        Ok(am::BitFrame::new(bits, bit_rate).or_raise()?.into())
    }

    #[getter]
    fn bits(&self) -> Vec<u8> {
        self.inner.bits().to_vec()
    }

    #[getter]
    fn bit_rate(&self) -> f64 {
        self.inner.bit_rate()
    }

    fn bit_errors(&self, other: &PyBitFrame) -> usize {
        self.inner.bit_errors(&other.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PyBitFrame) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let bits: String = self.inner.bits().iter().map(|b| char::from(b'0' + b)).collect();
        format!("BitFrame('{bits}', bit_rate={})", self.inner.bit_rate())
    }
}

#[pyfunction]
#[pyo3(signature = (freq_hz, amplitude, phase_deg, duration_s, sample_rate_hz))]
fn generate_tone(freq_hz: f64, amplitude: f64, phase_deg: f64, duration_s: f64, sample_rate_hz: f64) -> PyResult<PySignal> {
    Ok(am::generate_tone(freq_hz, amplitude, phase_deg, duration_s, sample_rate_hz)
        .or_raise()?
        .into())
}

#[pyfunction]
fn trapezoidal_integrate(input: &PySignal) -> PyResult<PySignal> {
    Ok(am::trapezoidal_integrate(&input.inner).or_raise()?.into())
}

#[pyfunction]
fn differentiate(input: &PySignal) -> PyResult<PySignal> {
    Ok(am::differentiate(&input.inner).or_raise()?.into())
}

#[pyfunction]
fn rectify_fullwave(input: &PySignal) -> PySignal {
    am::rectify_fullwave(&input.inner).into()
}

#[pyfunction]
fn scale(input: &PySignal, gain: f64) -> PySignal {
    am::scale(&input.inner, gain).into()
}

#[pyfunction]
#[pyo3(signature = (input, segment_len = 4096))]
fn power_spectral_density(input: &PySignal, segment_len: usize) -> PyResult<PySpectrum> {
    Ok(PySpectrum {
        inner: am::power_spectral_density(&input.inner, segment_len).or_raise()?,
    })
}

/// Returns `(lag, correlation)`.
#[pyfunction]
fn align_by_crosscorrelation(reference: &PySignal, test: &PySignal) -> PyResult<(isize, f64)> {
    let a = am::align_by_crosscorrelation(&reference.inner, &test.inner).or_raise()?;
    Ok((a.lag, a.correlation))
}

#[pyfunction]
fn design_butterworth(spec: &PyFilterSpec) -> PyResult<PyDesignedFilter> {
    Ok(PyDesignedFilter {
        inner: am::design_butterworth(&spec.inner).or_raise()?,
    })
}

#[pyfunction]
fn apply_filter(filter: &PyDesignedFilter, input: &PySignal) -> PyResult<PySignal> {
    filter.apply(input)
}

#[pyfunction]
fn frequency_response(filter: &PyDesignedFilter, freq_hz: f64) -> PyResult<f64> {
    filter.response(freq_hz)
}

#[pyfunction]
fn read_wav(path: std::path::PathBuf) -> PyResult<PySignal> {
    Ok(am::read_wav(path).or_raise()?.into())
}

#[pyfunction]
fn write_wav(path: std::path::PathBuf, signal: &PySignal) -> PyResult<()> {
    am::write_wav(path, &signal.inner).or_raise()
}

#[pyfunction]
fn apply_channel(input: &PySignal, spec: &PyChannelSpec) -> PyResult<PySignal> {
    Ok(am::apply_channel(&input.inner, &spec.into()).or_raise()?.into())
}

#[pyfunction]
fn am_modulate(message: &PySignal, params: &PyAmParams) -> PyResult<PySignal> {
    Ok(am::am_modulate(&message.inner, &params.into()).or_raise()?.into())
}

#[pyfunction]
fn am_demodulate(received: &PySignal, params: &PyAmParams) -> PyResult<PySignal> {
    Ok(am::am_demodulate(&received.inner, &params.into()).or_raise()?.into())
}

#[pyfunction]
#[pyo3(signature = (message, params, preemphasis = false))]
fn fm_modulate(message: &PySignal, params: &PyFmParams, preemphasis: bool) -> PyResult<PySignal> {
    Ok(am::fm_modulate(&message.inner, &params.into(), preemphasis)
        .or_raise()?
        .into())
}

#[pyfunction]
#[pyo3(signature = (received, params, deemphasis = false))]
fn fm_demodulate(received: &PySignal, params: &PyFmParams, deemphasis: bool) -> PyResult<PySignal> {
    Ok(am::fm_demodulate(&received.inner, &params.into(), deemphasis)
        .or_raise()?
        .into())
}

#[pyfunction]
#[pyo3(signature = (text, bit_rate = 1.0))]
fn text_to_bits(text: &str, bit_rate: f64) -> PyResult<PyBitFrame> {
    Ok(am::text_to_bits(text, bit_rate).or_raise()?.into())
}

#[pyfunction]
fn bits_to_text(frame: &PyBitFrame) -> PyResult<String> {
    am::bits_to_text(&frame.inner).or_raise()
}

#[pyfunction]
fn bfsk_modulate(frame: &PyBitFrame, params: &PyBfskParams) -> PyResult<PySignal> {
    Ok(am::bfsk_modulate(&frame.inner, &params.into()).or_raise()?.into())
}

#[pyfunction]
fn bfsk_demodulate(received: &PySignal, bit_count: usize, params: &PyBfskParams) -> PyResult<PyBitFrame> {
    Ok(am::bfsk_demodulate(&received.inner, bit_count, &params.into())
        .or_raise()?
        .into())
}

#[pyfunction]
fn find_signal_start(input: &PySignal, threshold: f64) -> PyResult<usize> {
    am::find_signal_start(&input.inner, threshold).or_raise()
}

#[pyfunction]
fn qam_modulate(frame_i: &PyBitFrame, frame_q: &PyBitFrame, params: &PyQamParams) -> PyResult<PySignal> {
    Ok(am::qam_modulate(&frame_i.inner, &frame_q.inner, &params.into())
        .or_raise()?
        .into())
}

/// Returns `(frame_i, frame_q)`.
#[pyfunction]
fn qam_demodulate(received: &PySignal, bit_count: usize, params: &PyQamParams) -> PyResult<(PyBitFrame, PyBitFrame)> {
    let (i, q) = am::qam_demodulate(&received.inner, bit_count, &params.into()).or_raise()?;
    Ok((i.into(), q.into()))
}

#[pyfunction]
fn export_spectrum_csv(spectrum: &PySpectrum, path: std::path::PathBuf) -> PyResult<()> {
    am::cli::export_spectrum_csv(&spectrum.inner, path).or_raise()
}

#[pyfunction]
fn read_spectrum_csv(path: std::path::PathBuf) -> PyResult<PySpectrum> {
    Ok(PySpectrum {
        inner: am::cli::read_spectrum_csv(path).or_raise()?,
    })
}

#[pymodule]
fn pyaudiomodem(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ModemError", m.py().get_type::<ModemError>())?;
    m.add_class::<PySignal>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyFilterSpec>()?;
    m.add_class::<PyDesignedFilter>()?;
    m.add_class::<PyAmParams>()?;
    m.add_class::<PyFmParams>()?;
    m.add_class::<PyBfskParams>()?;
    m.add_class::<PyQamParams>()?;
    m.add_class::<PyChannelSpec>()?;
    m.add_class::<PyBitFrame>()?;
    m.add_function(wrap_pyfunction!(generate_tone, m)?)?;
    m.add_function(wrap_pyfunction!(trapezoidal_integrate, m)?)?;
    m.add_function(wrap_pyfunction!(differentiate, m)?)?;
    m.add_function(wrap_pyfunction!(rectify_fullwave, m)?)?;
    m.add_function(wrap_pyfunction!(scale, m)?)?;
    m.add_function(wrap_pyfunction!(power_spectral_density, m)?)?;
    m.add_function(wrap_pyfunction!(align_by_crosscorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(design_butterworth, m)?)?;
    m.add_function(wrap_pyfunction!(apply_filter, m)?)?;
    m.add_function(wrap_pyfunction!(frequency_response, m)?)?;
    m.add_function(wrap_pyfunction!(read_wav, m)?)?;
    m.add_function(wrap_pyfunction!(write_wav, m)?)?;
    m.add_function(wrap_pyfunction!(apply_channel, m)?)?;
    m.add_function(wrap_pyfunction!(am_modulate, m)?)?;
    m.add_function(wrap_pyfunction!(am_demodulate, m)?)?;
    m.add_function(wrap_pyfunction!(fm_modulate, m)?)?;
    m.add_function(wrap_pyfunction!(fm_demodulate, m)?)?;
    m.add_function(wrap_pyfunction!(text_to_bits, m)?)?;
    m.add_function(wrap_pyfunction!(bits_to_text, m)?)?;
    m.add_function(wrap_pyfunction!(bfsk_modulate, m)?)?;
    m.add_function(wrap_pyfunction!(bfsk_demodulate, m)?)?;
    m.add_function(wrap_pyfunction!(find_signal_start, m)?)?;
    m.add_function(wrap_pyfunction!(qam_modulate, m)?)?;
    m.add_function(wrap_pyfunction!(qam_demodulate, m)?)?;
    m.add_function(wrap_pyfunction!(export_spectrum_csv, m)?)?;
    m.add_function(wrap_pyfunction!(read_spectrum_csv, m)?)?;
    Ok(())
}
