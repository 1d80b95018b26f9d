//! N-term approximation by thresholding, error curves with rate fits,
//! weak-l^p diagnostics and the l^p transfer certificate between frames.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::frame::{CoefficientSet, Frame, FrameSpec};
use crate::gramian::linear_fit;
use crate::grid::{spectrum_norm2, Fft2, Image};
use crate::windows::lowpass_profile;

/// Smooth radial low-pass `W0~(2 |xi| / radius)`: identity on
/// `|xi| <= 3 radius / 4`, zero beyond `radius`.
pub fn smooth_bandlimit(f: &Image, radius: f64) -> Result<Image> {
    if !(radius > 0.0) {
        return Err(invalid("band-limit radius must be positive"));
    }
    let n = f.n();
    let mut fft = Fft2::new();
    let mut spec = fft.spectrum(f);
    let half = (n / 2) as i64;
    let freq = |i: usize| if (i as i64) < half { i as f64 } else { i as f64 - n as f64 };
    for row in 0..n {
        for col in 0..n {
            let r = freq(col).hypot(freq(row));
            spec[row * n + col] *= lowpass_profile(2.0 * r / radius);
        }
    }
    Ok(fft.image_from_spectrum(n, &spec))
}

#[derive(Clone, Debug, PartialEq)]
pub struct NtermResult {
    pub image: Image,
    pub error2: f64,
    pub kept: usize,
    /// Set when `N` exceeded the coefficient count and was clamped.
    pub warning: Option<String>,
}

fn keep_largest(coeffs: &CoefficientSet, order: &[usize], n: usize) -> CoefficientSet {
    coeffs.restricted(&order[..n])
}

fn clamp(n: usize, len: usize) -> (usize, Option<String>) {
    if n > len {
        (len, Some(format!("N = {n} exceeds the {len} coefficients; clamped")))
    } else {
        (n, None)
    }
}

/// Keep the `n` largest coefficients (ties in enumeration order), apply the
/// canonical dual and report `|f - f_N|^2`.
pub fn nterm(frame: &Frame, coeffs: &CoefficientSet, f: &Image, n: usize) -> Result<NtermResult> {
    let (n, warning) = clamp(n, coeffs.len());
    let order = coeffs.magnitude_order();
    let approx = frame.reconstruct(&keep_largest(coeffs, &order, n))?;
    if approx.n() != f.n() {
        return Err(Error::GridMismatch { expected: approx.n(), found: f.n() });
    }
    let error2 = f.sub(&approx).norm2();
    Ok(NtermResult { image: approx, error2, kept: n, warning })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NtermCurve {
    pub frame: FrameSpec,
    pub ladder: Vec<usize>,
    pub errors: Vec<f64>,
    /// Slope of `log error` against `log N` over the interior rungs.
    pub exponent: f64,
    pub intercept: f64,
    pub exponent_stderr: f64,
    pub norm2: f64,
}

/// `|f - f_N|^2` along `ladder` after a single analysis, and the rate fit
/// over all rungs except the first and the last.
pub fn error_curve(frame: &Frame, f: &Image, ladder: &[usize]) -> Result<NtermCurve> {
    if ladder.len() < 4 {
        return Err(invalid("rate fits need at least 4 rungs"));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) || ladder[0] == 0 {
        return Err(invalid("ladder must be positive and strictly increasing"));
    }
    let coeffs = frame.analyze(f)?;
    let order = coeffs.magnitude_order();
    let mut fft = Fft2::new();
    let target = fft.spectrum(f);
    let mut errors = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let n = n.min(coeffs.len());
        let approx = frame.reconstruct_spectrum(&keep_largest(&coeffs, &order, n))?;
        let diff: Vec<Complex64> = target.iter().zip(&approx).map(|(a, b)| a - b).collect();
        errors.push(spectrum_norm2(&diff));
    }
    let inner = &ladder[1..ladder.len() - 1];
    let xs: Vec<f64> = inner.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors[1..errors.len() - 1].iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
    let (exponent, intercept, exponent_stderr) = linear_fit(&xs, &ys);
    Ok(NtermCurve {
        frame: *frame.spec(),
        ladder: ladder.to_vec(),
        errors,
        exponent,
        intercept,
        exponent_stderr,
        norm2: f.norm2(),
    })
}

/// `2^lo, 2^(lo+1), ..., 2^hi`.
pub fn dyadic_ladder(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| 1usize << e).collect()
}

/// CSV with columns `N,error2,exponent,intercept`.
pub fn write_curve_csv<W: Write>(curve: &NtermCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["N", "error2", "exponent", "intercept"])?;
    for (n, e) in curve.ladder.iter().zip(&curve.errors) {
        w.write_record([
            n.to_string(),
            crate::fmt_f64(*e),
            crate::fmt_f64(curve.exponent),
            crate::fmt_f64(curve.intercept),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakLpDiagnostic {
    pub p: f64,
    /// `(n, n^{1/p} c*_n)` for dyadic `n`.
    pub points: Vec<(usize, f64)>,
    pub max: f64,
    pub argmax: usize,
}

/// Rearrangement form of the weak-l^p quasi-norm on dyadic `n`.
pub fn weak_lp(coeffs: &CoefficientSet, p: f64) -> Result<WeakLpDiagnostic> {
    weak_lp_magnitudes(&coeffs.sorted_magnitudes(), p)
}

/// As [`weak_lp`] for magnitudes already sorted in nonincreasing order.
pub fn weak_lp_magnitudes(sorted: &[f64], p: f64) -> Result<WeakLpDiagnostic> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(invalid(format!("p must lie in (0, 2], got {p}")));
    }
    if sorted.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("coefficient"));
    }
    let mut points = Vec::new();
    let mut n = 1;
    while n <= sorted.len() {
        points.push((n, (n as f64).powf(1.0 / p) * sorted[n - 1]));
        n *= 2;
    }
    let (argmax, max) = points.iter().fold((0, 0.0), |(an, m), &(k, v)| if v > m { (k, v) } else { (an, m) });
    Ok(WeakLpDiagnostic { p, points, max, argmax })
}

/// CSV with columns `n,value`.
pub fn write_weak_lp_csv<W: Write>(d: &WeakLpDiagnostic, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "value"])?;
    for (n, v) in &d.points {
        w.write_record([n.to_string(), crate::fmt_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferCertificate {
    pub p: f64,
    pub gramian_bound: f64,
    /// `|theta|_p` of the anchor expansion.
    pub anchor_norm: f64,
    /// `|c|_p` of the directly computed target coefficients.
    pub target_norm: f64,
    /// `gramian_bound * anchor_norm / target_norm`; 1 when both sides vanish.
    pub slack: f64,
    pub holds: bool,
}

/// Check `|c|_p <= bound |theta|_p`, where `theta` are the coefficients of
/// `f` in a tight anchor frame and `c` those of `f` in the target system.
pub fn transfer_certificate(
    theta: &CoefficientSet,
    target: &CoefficientSet,
    gramian_bound: f64,
    p: f64,
) -> Result<TransferCertificate> {
    if !(p > 0.0) {
        return Err(invalid(format!("p must be positive, got {p}")));
    }
    if !(gramian_bound >= 0.0) {
        return Err(invalid("gramian bound must be nonnegative"));
    }
    let anchor_norm = theta.lp_norm(p);
    let target_norm = target.lp_norm(p);
    let rhs = gramian_bound * anchor_norm;
    let slack = if target_norm == 0.0 {
        if rhs == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        rhs / target_norm
    };
    Ok(TransferCertificate {
        p,
        gramian_bound,
        anchor_norm,
        target_norm,
        slack,
        holds: target_norm <= rhs * (1.0 + 1e-12),
    })
}
