//! Lag search by normalized cross-correlation, used to score recovered
//! messages against their originals despite filter group delay.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{ModemError, Result};
use crate::signal::{require_same_rate, Signal};

/// Best alignment of `test` against `reference`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    /// Positive when `test` lags `reference`: `test[n + lag]` pairs with
    /// `reference[n]`.
    pub lag: isize,
    /// Pearson correlation over the overlapping samples, in `[-1, 1]`.
    pub correlation: f64,
}

// Lags whose correlation differs by less than this are treated as ties and
// the smaller |lag| wins.
const TIE_EPS: f64 = 1e-12;

/// Searches `|lag| <= min(len) / 2` for the lag with the largest Pearson
/// correlation over the overlap region.
pub fn align_by_crosscorrelation(reference: &Signal, test: &Signal) -> Result<Alignment> {
    require_same_rate(reference.sample_rate_hz(), test.sample_rate_hz())?;
    if reference.is_empty() || test.is_empty() {
        return Err(ModemError::EmptySignal("alignment needs two non-empty signals"));
    }
    let r = reference.samples();
    let t = test.samples();
    let (lr, lt) = (r.len(), t.len());
    let max_lag = (lr.min(lt) / 2) as isize;

    let cross = cross_correlation(r, t);
    let m = cross.len();
    let (pr, prr) = prefix_sums(r);
    let (pt, ptt) = prefix_sums(t);

    let pearson = |lag: isize| -> f64 {
        let a = 0isize.max(-lag) as usize;
        let b = (lr as isize).min(lt as isize - lag);
        if b <= a as isize {
            return 0.0;
        }
        let b = b as usize;
        let n = (b - a) as f64;
        let (ta, tb) = ((a as isize + lag) as usize, (b as isize + lag) as usize);
        let sr = pr[b] - pr[a];
        let srr = prr[b] - prr[a];
        let st = pt[tb] - pt[ta];
        let stt = ptt[tb] - ptt[ta];
        let sxy = cross[lag.rem_euclid(m as isize) as usize];
        let var_r = srr - sr * sr / n;
        let var_t = stt - st * st / n;
        let denom = (var_r * var_t).sqrt();
        let scale = (srr * stt).sqrt();
        if !(denom > 1e-12 * scale) || denom == 0.0 {
            return 0.0;
        }
        ((sxy - sr * st / n) / denom).clamp(-1.0, 1.0)
    };

    let mut best = Alignment {
        lag: 0,
        correlation: pearson(0),
    };
    for k in 1..=max_lag {
        for lag in [k, -k] {
            let c = pearson(lag);
            if c > best.correlation + TIE_EPS {
                best = Alignment {
                    lag,
                    correlation: c,
                };
            }
        }
    }
    Ok(best)
}

/// `c[lag mod M] = sum_n r[n] * t[n + lag]` for every lag, by FFT.
fn cross_correlation(r: &[f64], t: &[f64]) -> Vec<f64> {
    let m = (r.len() + t.len()).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    let pad = |x: &[f64]| {
        let mut v: Vec<Complex<f64>> = x.iter().map(|&s| Complex::new(s, 0.0)).collect();
        v.resize(m, Complex::new(0.0, 0.0));
        v
    };
    let mut rf = pad(r);
    let mut tf = pad(t);
    fwd.process(&mut rf);
    fwd.process(&mut tf);
    let mut prod: Vec<Complex<f64>> = rf.iter().zip(&tf).map(|(a, b)| a.conj() * b).collect();
    inv.process(&mut prod);
    prod.iter().map(|c| c.re / m as f64).collect()
}

fn prefix_sums(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut s = Vec::with_capacity(x.len() + 1);
    let mut ss = Vec::with_capacity(x.len() + 1);
    s.push(0.0);
    ss.push(0.0);
    for v in x {
        s.push(s.last().unwrap() + v);
        ss.push(ss.last().unwrap() + v * v);
    }
    (s, ss)
}
