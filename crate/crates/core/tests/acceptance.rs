//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use audiomodem::cli::{export_spectrum_csv, read_spectrum_csv};
use audiomodem::digital::qam_arms;
use audiomodem::filters::{filter_signal, DEFAULT_ORDER};
use audiomodem::wav::encode_wav;
use audiomodem::*;
use std::result::Result;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: ModemError) -> String {
    err.to_string()
}

fn rms_diff(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}

fn sig(samples: Vec<f64>, fs: f64) -> Signal {
    Signal::new(samples, fs).unwrap()
}

fn white_noise(len: usize, sigma: f64, fs: f64, seed: u64) -> Signal {
    let spec = ChannelSpec {
        noise_sigma: sigma,
        rng_seed: seed,
        ..Default::default()
    };
    apply_channel(&Signal::zeros(len, fs).unwrap(), &spec).unwrap()
}

// ---------------------------------------------------------------- 1

fn dsp_oracles() -> Outcome {
    let start = Instant::now();
    let fs = 44_100.0;
    let mut worst_int: f64 = 0.0;
    let mut worst_diff: f64 = 0.0;
    for f in [50.0, 200.0, 500.0, 1000.0] {
        let w = 2.0 * PI * f;
        let x = generate_tone(f, 1.0, 0.0, 1.0, fs).map_err(e)?;
        let exact: Vec<f64> = (0..x.len()).map(|n| (w * n as f64 / fs).sin() / w).collect();
        let got = trapezoidal_integrate(&x).map_err(e)?;
        worst_int = worst_int.max(rms_diff(got.samples(), &exact));

        let y = generate_tone(f, 1.0, -90.0, 1.0, fs).map_err(e)?;
        let exact: Vec<f64> = (0..y.len()).map(|n| w * (w * n as f64 / fs).cos()).collect();
        let got = differentiate(&y).map_err(e)?;
        let rel = rms_diff(got.samples(), &exact) / (w / 2f64.sqrt());
        worst_diff = worst_diff.max(rel);
    }
    ensure(worst_int < 1e-6, || format!("integration RMS error {worst_int:.3e}"))?;
    ensure(worst_diff < 1e-3, || format!("differentiation RMS error {:.4}%", worst_diff * 100.0))?;

    let sine = generate_tone(1000.0, 1.0, -90.0, 1.0, fs).map_err(e)?;
    let mean = rectify_fullwave(&sine).mean();
    ensure((mean - 2.0 / PI).abs() <= 1e-3, || format!("rectified mean {mean}"))?;

    let mut worst_parseval: f64 = 0.0;
    for x in [
        generate_tone(1000.0, 0.7, 0.0, 1.0, fs).map_err(e)?,
        generate_tone(3217.0, 1.3, 33.0, 0.5, fs).map_err(e)?,
        white_noise(44_100, 0.3, fs, 1),
        white_noise(30_000, 1.0, fs, 2),
    ] {
        let psd = power_spectral_density(&x, 4096).map_err(e)?;
        let rel = (psd.total_power() - x.mean_square()).abs() / x.mean_square();
        worst_parseval = worst_parseval.max(rel);
    }
    ensure(worst_parseval < 0.01, || format!("Parseval mismatch {:.3}%", worst_parseval * 100.0))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "integration rms {worst_int:.1e}, differentiation {:.4}%, rectified mean {mean:.5}, Parseval {:.3}%, {secs:.2} s",
        worst_diff * 100.0,
        worst_parseval * 100.0
    ))
}

// ---------------------------------------------------------------- 2

fn paper_stages(fs: f64) -> Vec<(&'static str, FilterSpec)> {
    let o = DEFAULT_ORDER;
    vec![
        ("BPF 3000 @ 4k", FilterSpec::bandpass_around(o, 4000.0, 3000.0, fs)),
        ("BPF 2000 @ 4k", FilterSpec::bandpass_around(o, 4000.0, 2000.0, fs)),
        ("LPF 1000", FilterSpec::lowpass(o, 1000.0, fs)),
        ("LPF 750", FilterSpec::lowpass(o, 750.0, fs)),
        ("LPF 500", FilterSpec::lowpass(o, 500.0, fs)),
        ("HPF 750", FilterSpec::highpass(o, 750.0, fs)),
        ("HPF 1000", FilterSpec::highpass(o, 1000.0, fs)),
        ("BPF 400 @ 4k", FilterSpec::bandpass_around(o, 4000.0, 400.0, fs)),
        ("BPF 400 @ 6k", FilterSpec::bandpass_around(o, 6000.0, 400.0, fs)),
    ]
}

/// Steady-state gain measured by running a long input through the filter
/// and fitting the second half.
fn measured_gain(spec: &FilterSpec, freq: f64) -> f64 {
    let fs = spec.sample_rate_hz;
    let n = (fs * 2.0) as usize;
    let input: Vec<f64> = (0..n).map(|k| (2.0 * PI * freq * k as f64 / fs).cos()).collect();
    let out = filter_signal(spec, &sig(input, fs)).unwrap();
    let tail = &out.samples()[n / 2..];
    if freq == 0.0 {
        return tail.iter().sum::<f64>() / tail.len() as f64;
    }
    if freq == fs / 2.0 {
        return tail.iter().map(|v| v.abs()).sum::<f64>() / tail.len() as f64;
    }
    // Least-squares fit of a cos + b sin.
    let (mut cc, mut ss, mut cs, mut yc, mut ys) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, y) in tail.iter().enumerate() {
        let ph = 2.0 * PI * freq * (n / 2 + i) as f64 / fs;
        let (c, s) = (ph.cos(), ph.sin());
        cc += c * c;
        ss += s * s;
        cs += c * s;
        yc += y * c;
        ys += y * s;
    }
    let det = cc * ss - cs * cs;
    let a = (yc * ss - ys * cs) / det;
    let b = (ys * cc - yc * cs) / det;
    (a * a + b * b).sqrt()
}

fn filter_suite() -> Outcome {
    let fs = 44_100.0;
    let db = |x: f64| 20.0 * x.log10();
    let mut worst_edge: f64 = 0.0;
    let mut worst_pass: f64 = 0.0;
    let mut worst_lin: f64 = 0.0;
    let mut worst_decay: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, spec) in paper_stages(fs) {
        let f = design_butterworth(&spec).map_err(e)?;
        for edge in spec.edges_hz() {
            let dev = (db(measured_gain(&spec, edge)) + 3.0103).abs();
            let analytic = (db(frequency_response(&f, edge).map_err(e)?) + 3.0103).abs();
            worst_edge = worst_edge.max(dev).max(analytic);
            ensure(dev <= 0.1 && analytic <= 0.1, || format!("{name}: edge {edge} Hz off by {dev:.3} dB"))?;
        }
        let pass = db(measured_gain(&spec, spec.reference_hz())).abs();
        worst_pass = worst_pass.max(pass);
        ensure(pass <= 0.1, || format!("{name}: passband gain {pass:.3} dB"))?;

        ensure(f.is_stable(), || format!("{name}: pole radius {}", f.max_pole_radius()))?;
        let scale = match spec.kind {
            FilterKind::Bandpass => spec.cutoff_high_hz - spec.cutoff_low_hz,
            _ => spec.cutoff_high_hz,
        };
        let window = (20.0 * fs / scale) as usize;
        let mut impulse = vec![0.0; window * 4];
        impulse[0] = 1.0;
        let h = apply_filter(&f, &sig(impulse, fs)).map_err(e)?;
        let last = h.samples().iter().rposition(|v| v.abs() >= 1e-6).unwrap_or(0);
        worst_decay = worst_decay.max(last as f64 * scale / fs);
        ensure(last < window, || format!("{name}: impulse above 1e-6 until sample {last}"))?;

        let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let x: Vec<f64> = (0..8192).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..8192).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mix: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let fx = apply_filter(&f, &sig(x, fs)).map_err(e)?;
        let fy = apply_filter(&f, &sig(y, fs)).map_err(e)?;
        let fm = apply_filter(&f, &sig(mix, fs)).map_err(e)?;
        let combo: Vec<f64> = fx.samples().iter().zip(fy.samples()).map(|(p, q)| a * p + b * q).collect();
        let lin = rms_diff(fm.samples(), &combo);
        worst_lin = worst_lin.max(lin);
        ensure(lin < 1e-9, || format!("{name}: linearity error {lin:.2e}"))?;
    }
    Ok(format!(
        "9 stages: edge dev <= {worst_edge:.1e} dB, passband <= {worst_pass:.1e} dB, decay <= {worst_decay:.1} fs/scale samples, linearity {worst_lin:.1e}"
    ))
}

// ---------------------------------------------------------------- 3

fn am_suite() -> Outcome {
    let fs = 44_100.0;
    let mut worst: f64 = 1.0;
    for fm in [200.0, 500.0, 800.0] {
        for ka in [0.1, 0.3, 0.9] {
            let p = AmParams {
                modulation_index: ka,
                ..Default::default()
            };
            let msg = generate_tone(fm, 1.0, 0.0, 1.0, fs).map_err(e)?;
            let out = am_demodulate(&am_modulate(&msg, &p).map_err(e)?, &p).map_err(e)?;
            let a = align_by_crosscorrelation(&msg, &out).map_err(e)?;
            worst = worst.min(a.correlation);
            ensure(a.correlation >= 0.95, || format!("fm {fm} ka {ka}: correlation {:.4}", a.correlation))?;
        }
    }

    let p = AmParams {
        modulation_index: 0.9,
        ..Default::default()
    };
    let loud = generate_tone(500.0, 1.0 / 0.9, 0.0, 0.1, fs).map_err(e)?;
    ensure(matches!(am_modulate(&loud, &p), Err(ModemError::Overmodulation(_))), || {
        "ka*m = 1 was accepted".into()
    })?;
    let gained = AmParams {
        message_gain: 4.0,
        modulation_index: 0.3,
        ..Default::default()
    };
    let msg = generate_tone(500.0, 1.0, 0.0, 0.1, fs).map_err(e)?;
    ensure(matches!(am_modulate(&msg, &gained), Err(ModemError::Overmodulation(_))), || {
        "ka*gain*m = 1.2 was accepted".into()
    })?;

    let mut worst_ratio: f64 = 0.0;
    for ka in [0.1, 0.3, 0.9] {
        let p = AmParams {
            modulation_index: ka,
            output_gain: 1.0,
            ..Default::default()
        };
        let msg = generate_tone(500.0, 1.0, 0.0, 2.0, fs).map_err(e)?;
        let psd = power_spectral_density(&am_modulate(&msg, &p).map_err(e)?, 4096).map_err(e)?;
        let carrier = psd.band_power(4000.0, 3);
        for sb in [3500.0, 4500.0] {
            let ratio = (psd.band_power(sb, 3) / carrier).sqrt();
            let rel = (ratio / (ka / 2.0) - 1.0).abs();
            worst_ratio = worst_ratio.max(rel);
            ensure(rel <= 0.05, || format!("ka {ka}: sideband {sb} ratio {ratio:.4}"))?;
        }
    }
    Ok(format!(
        "min correlation {worst:.4} over 9 cases, overmodulation rejected, sideband ratio within {:.1e} of ka/2 (relative)",
        worst_ratio
    ))
}

// ---------------------------------------------------------------- 4

/// `|analytic signal|` via the FFT Hilbert construction.
fn analytic_envelope(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let w = if k == 0 || (n % 2 == 0 && k == n / 2) {
            1.0
        } else if k < n.div_ceil(2) {
            2.0
        } else {
            0.0
        };
        *c *= w;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|c| c.norm() / n as f64).collect()
}

fn fm_suite() -> Outcome {
    let fs = 44_100.0;
    for (m, kf) in [(0.5, 500.0), (1.0, 1000.0), (-1.0, 800.0), (400.0, 2.5), (0.0, 2.5)] {
        let p = FmParams {
            freq_sensitivity_hz_per_volt: kf,
            ..Default::default()
        };
        let s = fm_modulate(&sig(vec![m; 44_100], fs), &p, false).map_err(e)?;
        let psd = power_spectral_density(&s, 4096).map_err(e)?;
        let peak = psd.frequency_of(psd.peak_bin().unwrap());
        let want = 4000.0 + kf * m;
        ensure((peak - want).abs() <= psd.bin_hz(), || format!("m {m} kf {kf}: peak {peak} vs {want}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst_env: f64 = 0.0;
    for case in 0..20 {
        let kf = [2.5, 50.0, 500.0, 1500.0][case % 4];
        let tones = 1 + case % 3;
        let comps: Vec<(f64, f64, f64)> = (0..tones)
            .map(|_| (rng.random_range(20.0..1000.0), rng.random_range(0.1..1.0), rng.random_range(0.0..360.0)))
            .collect();
        let raw: Vec<f64> = (0..22_050)
            .map(|n| {
                comps
                    .iter()
                    .map(|(f, a, ph)| a * (2.0 * PI * f * n as f64 / fs + ph.to_radians()).cos())
                    .sum()
            })
            .collect();
        // Peak deviation kept below 60% of the carrier so the instantaneous
        // frequency stays positive and the analytic envelope is meaningful.
        let peak = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let target = rng.random_range(0.1..1.0) * 0.6 * 4000.0 / kf;
        let msg: Vec<f64> = raw.iter().map(|v| v * target / peak).collect();
        let p = FmParams {
            freq_sensitivity_hz_per_volt: kf,
            ..Default::default()
        };
        let preemphasis = case % 2 == 1;
        let s = fm_modulate(&sig(msg, fs), &p, preemphasis).map_err(e)?;
        let env = analytic_envelope(s.samples());
        let core = &env[env.len() / 10..env.len() * 9 / 10];
        let (lo, hi) = core.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
        let spread = (hi - lo) / (p.carrier_amplitude * p.output_gain);
        worst_env = worst_env.max(spread);
        ensure(spread < 0.01, || format!("case {case}: envelope spread {:.3}%", spread * 100.0))?;
        ensure(s.peak() <= p.carrier_amplitude * p.output_gain + 1e-9, || format!("case {case}: peak {}", s.peak()))?;
    }

    let msg = generate_tone(200.0, 1.0, 0.0, 1.0, fs).map_err(e)?;
    let mut widths = Vec::new();
    for kf in [1.0, 2.5, 10.0, 50.0] {
        let p = FmParams {
            freq_sensitivity_hz_per_volt: kf,
            ..Default::default()
        };
        let psd = power_spectral_density(&fm_modulate(&msg, &p, false).map_err(e)?, 4096).map_err(e)?;
        widths.push(psd.occupied_bandwidth(0.99));
    }
    ensure(widths.windows(2).all(|w| w[1] >= w[0]), || format!("99% bandwidths {widths:?}"))?;

    let mut worst_corr: f64 = 1.0;
    for (tone, emphasis) in [(200.0, false), (500.0, false), (500.0, true)] {
        let p = FmParams {
            freq_sensitivity_hz_per_volt: 500.0,
            ..Default::default()
        };
        let msg = generate_tone(tone, 1.0, 0.0, 1.0, fs).map_err(e)?;
        let out = fm_demodulate(&fm_modulate(&msg, &p, emphasis).map_err(e)?, &p, emphasis).map_err(e)?;
        let a = align_by_crosscorrelation(&msg, &out).map_err(e)?;
        worst_corr = worst_corr.min(a.correlation);
        ensure(a.correlation >= 0.9, || format!("tone {tone} Hz: correlation {:.4}", a.correlation))?;
    }
    Ok(format!(
        "peaks within one bin, envelope spread <= {:.4}%, 99% bandwidths {:?} Hz, min correlation {worst_corr:.4}",
        worst_env * 100.0,
        widths.iter().map(|w| w.round()).collect::<Vec<_>>()
    ))
}

// ---------------------------------------------------------------- 5


fn byte_frame(byte: u8, bit_rate: f64) -> BitFrame {
    BitFrame::new((0..8).rev().map(|k| (byte >> k) & 1).collect(), bit_rate).unwrap()
}

fn bfsk_suite() -> Outcome {
    let start = Instant::now();
    let p = BfskParams::default();
    let padded = ChannelSpec {
        lead_pad_s: 0.25,
        ..Default::default()
    };
    for byte in 0..=255u8 {
        let frame = byte_frame(byte, p.bit_rate);
        let rx = apply_channel(&bfsk_modulate(&frame, &p).map_err(e)?, &padded).map_err(e)?;
        let got = bfsk_demodulate(&rx, 8, &p).map_err(e)?;
        ensure(got == frame, || format!("byte {byte:#04x}: {} bit errors", frame.bit_errors(&got)))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..50u64 {
        let c = char::from(rng.random_range(0u8..128));
        let frame = text_to_bits(&c.to_string(), p.bit_rate).map_err(e)?;
        let tx = bfsk_modulate(&frame, &p).map_err(e)?;
        let noisy = ChannelSpec {
            noise_sigma: 0.1,
            lead_pad_s: 0.25,
            rng_seed: 1000 + trial,
            ..Default::default()
        };
        let rx = apply_channel(&tx, &noisy).map_err(e)?;
        let mut decoded = Vec::new();
        for g in [0.5, 1.0, 2.0] {
            decoded.push(bfsk_demodulate(&scale(&rx, g), 8, &p).map_err(e)?);
        }
        ensure(decoded[1] == frame, || {
            format!("trial {trial} ({c:?}): {} bit errors", frame.bit_errors(&decoded[1]))
        })?;
        ensure(decoded.iter().all(|d| *d == decoded[1]), || format!("trial {trial}: gain changed decisions"))?;

        // Same payload noise with a noisy rather than silent pad.
        let noisy_pad = ChannelSpec {
            pad_noise_sigma: 0.1,
            ..noisy
        };
        let got = bfsk_demodulate(&apply_channel(&tx, &noisy_pad).map_err(e)?, 8, &p).map_err(e)?;
        ensure(got == frame, || format!("trial {trial} ({c:?}), noisy pad: {} bit errors", frame.bit_errors(&got)))?;
    }

    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "256/256 bytes clean with 0.25 s pad, 50/50 noisy chars at sigma 0.1, gain-invariant, {secs:.1} s"
    ))
}

// ---------------------------------------------------------------- 6

fn random_ascii(rng: &mut ChaCha8Rng, len: usize) -> String {
    (0..len).map(|_| char::from(rng.random_range(0u8..128))).collect()
}

fn qam_suite() -> Outcome {
    let p = QamParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let bound = p.output_scale * p.carrier_amplitude * 2f64.sqrt() + 1e-3;
    let mut max_peak: f64 = 0.0;
    for pair in 0..100 {
        let len = rng.random_range(1..=4);
        let (ti, tq) = (random_ascii(&mut rng, len), random_ascii(&mut rng, len));
        let fi = text_to_bits(&ti, p.bit_rate).map_err(e)?;
        let fq = text_to_bits(&tq, p.bit_rate).map_err(e)?;
        let s = qam_modulate(&fi, &fq, &p).map_err(e)?;
        max_peak = max_peak.max(s.peak());
        ensure(s.peak() <= bound, || format!("pair {pair}: peak {}", s.peak()))?;
        let (gi, gq) = qam_demodulate(&s, fi.len(), &p).map_err(e)?;
        ensure(gi == fi && gq == fq, || format!("pair {pair} ({ti:?}, {tq:?}) decoded wrong"))?;
    }

    let sps = (p.sample_rate_hz / p.bit_rate) as usize;
    let mut worst_sep = f64::INFINITY;
    for arm in 0..2 {
        let bits: Vec<u8> = (0..40).map(|_| rng.random_range(0..2)).collect();
        let on = BitFrame::new(bits.clone(), p.bit_rate).map_err(e)?;
        let off = BitFrame::new(vec![0; bits.len()], p.bit_rate).map_err(e)?;
        let s = if arm == 0 {
            qam_modulate(&on, &off, &p)
        } else {
            qam_modulate(&off, &on, &p)
        }
        .map_err(e)?;
        let (ai, aq) = qam_arms(&s, &p).map_err(e)?;
        let (active, idle) = if arm == 0 { (ai, aq) } else { (aq, ai) };
        let means = |x: &Signal| -> Vec<f64> {
            x.samples().chunks_exact(sps).map(|c| c.iter().sum::<f64>() / sps as f64).collect()
        };
        for (k, (m_on, m_off)) in means(&active).iter().zip(means(&idle)).enumerate() {
            if bits[k] == 1 {
                let sep = m_on / m_off.abs().max(1e-300);
                worst_sep = worst_sep.min(sep);
                ensure(sep >= 4.0, || format!("arm {arm} symbol {k}: {m_on:.4} vs {m_off:.4}"))?;
            }
        }
    }

    Ok(format!(
        "100/100 random pairs exact, worst arm separation {worst_sep:.1}x, max peak {max_peak:.4} <= {bound:.4}"
    ))
}

// ---------------------------------------------------------------- 7

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_audiomodem"))
        .args(args)
        .output()
        .map_err(|err| err.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim()));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn report_value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

fn io_and_cli_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dir = tempfile::tempdir().map_err(|err| err.to_string())?;
    let path = dir.path().join("rt.wav");
    let mut worst: f64 = 0.0;
    for fs in [44_100.0, 22_050.0, 8000.0] {
        let v: Vec<f64> = (0..5000).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let s = sig(v, fs);
        write_wav(&path, &s).map_err(e)?;
        let back = read_wav(&path).map_err(e)?;
        ensure(back.len() == s.len() && back.sample_rate_hz() == fs, || "length or rate changed".into())?;
        for (a, b) in s.samples().iter().zip(back.samples()) {
            worst = worst.max((a - b).abs());
        }
        ensure(encode_wav(&s).map_err(e)? == encode_wav(&s.clone()).map_err(e)?, || "WAV bytes differ".into())?;
    }
    ensure(worst <= 1.0 / 32767.0, || format!("WAV roundtrip error {worst}"))?;

    let psd = power_spectral_density(&white_noise(20_000, 0.5, 44_100.0, 9), 1024).map_err(e)?;
    let (c1, c2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    export_spectrum_csv(&psd, &c1).map_err(e)?;
    export_spectrum_csv(&psd, &c2).map_err(e)?;
    let same = std::fs::read(&c1).map_err(|x| x.to_string())? == std::fs::read(&c2).map_err(|x| x.to_string())?;
    ensure(same, || "CSV bytes differ".into())?;
    ensure(read_spectrum_csv(&c1).map_err(e)? == psd, || "CSV parse-back differs".into())?;

    // Loopbacks through the command-line tool, each stage via WAV files.
    let mut am_worst: f64 = 1.0;
    for fm in ["200", "500", "800"] {
        for ka in ["0.1", "0.3", "0.9"] {
            let ka_param = format!("modulation_index={ka}");
            let r = cli(&["loopback", "--scheme", "am", "--tone-hz", fm, "-p", &ka_param])?;
            let corr: f64 = report_value(&r, "correlation").and_then(|v| v.parse().ok()).ok_or(r.clone())?;
            am_worst = am_worst.min(corr);
            ensure(corr >= 0.95, || format!("CLI AM fm {fm} ka {ka}: {corr}"))?;
        }
    }
    let mut fm_worst: f64 = 1.0;
    for (tone, extra) in [("200", None), ("500", None), ("500", Some(["--preemphasis", "--deemphasis"]))] {
        let mut args = vec!["loopback", "--scheme", "fm", "--tone-hz", tone, "-p", "freq_sensitivity_hz_per_volt=500"];
        if let Some(flags) = extra {
            args.extend(flags);
        }
        let r = cli(&args)?;
        let corr: f64 = report_value(&r, "correlation").and_then(|v| v.parse().ok()).ok_or(r.clone())?;
        fm_worst = fm_worst.min(corr);
        ensure(corr >= 0.9, || format!("CLI FM tone {tone}: {corr}"))?;
    }
    let fast = ["-p", "sample_rate_hz=22050", "-p", "bit_rate=10"];
    for (text, seed) in [("h", "7"), ("Hi!", "8"), ("~0z", "9")] {
        let mut args = vec![
            "loopback", "--scheme", "bfsk", "--text", text, "--noise-sigma", "0.1", "--pad-noise-sigma", "0.1",
            "--lead-pad", "0.25", "--seed", seed,
        ];
        args.extend(fast);
        let r = cli(&args)?;
        ensure(report_value(&r, "bit_errors") == Some("0"), || format!("CLI BFSK {text:?}: {r}"))?;
    }
    let default_run = cli(&["loopback", "--scheme", "bfsk", "--text", "h", "--noise-sigma", "0.1", "--seed", "7"])?;
    ensure(report_value(&default_run, "bit_errors") == Some("0"), || {
        format!("CLI BFSK default rate: {default_run}")
    })?;
    for (ti, tq) in [("hi", "yo"), ("QAM", "ok!"), ("\u{7f}a", " \t")] {
        let mut args = vec!["loopback", "--scheme", "qam", "--text", ti, "--text-q", tq];
        args.extend(fast);
        let r = cli(&args)?;
        ensure(report_value(&r, "bit_errors") == Some("0"), || format!("CLI QAM {ti:?}/{tq:?}: {r}"))?;
    }
    let again = cli(&["loopback", "--scheme", "bfsk", "--text", "h", "--noise-sigma", "0.1", "--seed", "7"])?;
    ensure(again == default_run, || "loopback report not reproducible".into())?;

    // File-level determinism through the tool.
    let msg = dir.path().join("msg.wav");
    write_wav(&msg, &generate_tone(440.0, 0.8, 0.0, 0.5, 44_100.0).unwrap()).map_err(e)?;
    let mut runs = Vec::new();
    for k in 0..2 {
        let tx = dir.path().join(format!("tx{k}.wav"));
        let rx = dir.path().join(format!("rx{k}.wav"));
        let out = dir.path().join(format!("out{k}.wav"));
        let csv = dir.path().join(format!("psd{k}.csv"));
        let (m, t, r, o, c) = (s(&msg), s(&tx), s(&rx), s(&out), s(&csv));
        cli(&["am-mod", "--in", m, "--out", t])?;
        cli(&["channel", "--in", t, "--out", r, "--noise-sigma", "0.05", "--seed", "4"])?;
        cli(&["am-demod", "--in", r, "--out", o])?;
        cli(&["psd", "--in", o, "--out", c])?;
        runs.push([tx, rx, out, csv].map(|f| std::fs::read(f).unwrap_or_default()));
    }
    ensure(runs[0] == runs[1], || "CLI outputs differ between runs".into())?;

    Ok(format!(
        "WAV error {worst:.2e} <= 1/32767, byte-identical WAV/CSV, CLI loopbacks: AM min corr {am_worst:.4}, FM min corr {fm_worst:.4}, BFSK/QAM 0 bit errors"
    ))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("DSP oracles", dsp_oracles),
        ("filter suite", filter_suite),
        ("AM", am_suite),
        ("FM", fm_suite),
        ("BFSK", bfsk_suite),
        ("QAM", qam_suite),
        ("I/O determinism and CLI loopbacks", io_and_cli_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1} s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1} s] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
