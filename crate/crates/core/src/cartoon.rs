//! Cartoon-like test images `f0 + f1 * chi_B` with a star-shaped domain
//! whose boundary regularity is set by the decay of its radial Fourier
//! coefficients.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gramian::linear_fit;
use crate::grid::{FrequencyGrid, Image};

/// Largest value returned by [`boundary_regularity_estimate`]; boundaries
/// whose coefficients vanish or decay faster than any tested power
/// saturate here.
pub const MAX_HOLDER_ESTIMATE: f64 = 10.0;

/// `c + sum a cos(2 pi (k . x) + phase)` on the unit torus.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub constant: f64,
    pub terms: Vec<TrigTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub k: [i32; 2],
    pub amplitude: f64,
    pub phase: f64,
}

impl TrigPoly {
    pub fn constant(c: f64) -> Self {
        Self { constant: c, terms: Vec::new() }
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        self.terms.iter().fold(self.constant, |acc, t| {
            acc + t.amplitude * (TAU * (t.k[0] as f64 * x[0] + t.k[1] as f64 * x[1]) + t.phase).cos()
        })
    }

    fn random(rng: &mut ChaCha8Rng, constant: f64, amplitude: f64, max_order: i32) -> Self {
        let mut terms = Vec::new();
        for k1 in 0..=max_order {
            for k2 in -max_order..=max_order {
                if (k1 == 0 && k2 <= 0) || k1.abs().max(k2.abs()) > max_order {
                    continue;
                }
                terms.push(TrigTerm {
                    k: [k1, k2],
                    amplitude: amplitude * rng.gen_range(-1.0..1.0) / (k1 * k1 + k2 * k2) as f64,
                    phase: rng.gen_range(0.0..TAU),
                });
            }
        }
        Self { constant, terms }
    }
}

/// Radial harmonic `a cos(m phi + phase)` of the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub m: u32,
    pub amplitude: f64,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartoonSpec {
    pub beta: f64,
    pub center: [f64; 2],
    pub r0: f64,
    pub harmonics: Vec<Harmonic>,
    /// `A` in the envelope `|a_m| <= A m^{-(beta + 1 + epsilon)}`.
    pub envelope_constant: f64,
    pub epsilon: f64,
    pub f0: TrigPoly,
    pub f1: TrigPoly,
    pub seed: u64,
}

impl CartoonSpec {
    /// Indicator of a disc, `f0 = 0`, `f1 = 1`.
    pub fn disc(center: [f64; 2], radius: f64) -> Self {
        Self {
            beta: 2.0,
            center,
            r0: radius,
            harmonics: Vec::new(),
            envelope_constant: 0.0,
            epsilon: 0.2,
            f0: TrigPoly::constant(0.0),
            f1: TrigPoly::constant(1.0),
            seed: 0,
        }
    }

    /// Seeded member of the class: 32 boundary harmonics on the
    /// `m^{-(beta + 1.2)}` envelope and degree-2 smooth fields.
    pub fn random(beta: f64, seed: u64) -> Result<Self> {
        check_beta(beta)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let epsilon = 0.2;
        let envelope_constant = 0.06;
        let harmonics = (1..=32u32)
            .map(|m| Harmonic {
                m,
                amplitude: envelope_constant * (m as f64).powf(-(beta + 1.0 + epsilon)) * rng.gen_range(0.5..1.0),
                phase: rng.gen_range(0.0..TAU),
            })
            .collect();
        let center = [0.5 + rng.gen_range(-0.03..0.03), 0.5 + rng.gen_range(-0.03..0.03)];
        let f0 = TrigPoly::random(&mut rng, 0.0, 0.3, 2);
        let f1 = TrigPoly::random(&mut rng, 1.0, 0.3, 2);
        let spec = Self {
            beta,
            center,
            r0: 0.28,
            harmonics,
            envelope_constant,
            epsilon,
            f0,
            f1,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn radius(&self, phi: f64) -> f64 {
        self.harmonics
            .iter()
            .fold(self.r0, |acc, h| acc + h.amplitude * (h.m as f64 * phi + h.phase).cos())
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        let d = [x[0] - self.center[0], x[1] - self.center[1]];
        let r = d[0].hypot(d[1]);
        r < self.radius(d[1].atan2(d[0]))
    }

    pub fn validate(&self) -> Result<()> {
        check_beta(self.beta)?;
        let (lo, hi) = (0..4096).fold((f64::INFINITY, 0.0f64), |(lo, hi), i| {
            let r = self.radius(TAU * i as f64 / 4096.0);
            (lo.min(r), hi.max(r))
        });
        let slack: f64 = self.harmonics.iter().map(|h| h.amplitude.abs() * (h.m as f64).powi(2)).sum::<f64>()
            * (PI / 4096.0).powi(2);
        if !(lo - slack > 0.0) {
            return Err(invalid(format!("boundary radius must stay positive (min {lo})")));
        }
        let reach = hi + slack;
        let inside = (0..2).all(|i| self.center[i] - reach >= 0.0 && self.center[i] + reach <= 1.0);
        if !inside {
            return Err(invalid("domain leaves the unit square"));
        }
        for h in &self.harmonics {
            let bound = self.envelope_constant * (h.m as f64).powf(-(self.beta + 1.0 + self.epsilon));
            if h.m == 0 || h.amplitude.abs() > bound * (1.0 + 1e-12) {
                return Err(invalid(format!("harmonic {} violates the C^beta envelope", h.m)));
            }
        }
        Ok(())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 1.0 && beta <= 2.0 {
        Ok(())
    } else {
        Err(invalid(format!("beta must lie in (1, 2], got {beta}")))
    }
}

/// Rasterize `f0 + f1 chi_B` with `chi_B` averaged over 4x4 subpixels
/// around each sample point `(col/n, row/n)`.
pub fn generate_cartoon(spec: &CartoonSpec, grid: FrequencyGrid) -> Result<Image> {
    spec.validate()?;
    let n = grid.n();
    let h = 1.0 / n as f64;
    let offsets: Vec<f64> = (0..4).map(|i| ((i as f64 + 0.5) / 4.0 - 0.5) * h).collect();
    Ok(Image::from_fn(n, |x1, x2| {
        let x = [x1, x2];
        let mut hits = 0;
        for &o1 in &offsets {
            for &o2 in &offsets {
                hits += spec.contains([x1 + o1, x2 + o2]) as u32;
            }
        }
        let f0 = spec.f0.eval(x);
        if hits == 0 {
            f0
        } else {
            f0 + spec.f1.eval(x) * hits as f64 / 16.0
        }
    }))
}

/// Hoelder exponent of the boundary estimated from the decay `m^{-p}` of
/// the Fourier coefficients of `rho`, as `p - 1 - epsilon`.
pub fn boundary_regularity_estimate(spec: &CartoonSpec) -> f64 {
    const SAMPLES: usize = 4096;
    let mut buf: Vec<Complex64> = (0..SAMPLES)
        .map(|i| Complex64::new(spec.radius(TAU * i as f64 / SAMPLES as f64), 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(SAMPLES).process(&mut buf);
    let mags: Vec<f64> = buf[1..SAMPLES / 2].iter().map(|c| 2.0 * c.norm() / SAMPLES as f64).collect();
    let floor = 1e-13 * spec.r0.abs().max(mags.iter().copied().fold(0.0, f64::max));
    let (xs, ys): (Vec<f64>, Vec<f64>) = mags
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > floor)
        .map(|(i, &v)| (((i + 1) as f64).ln(), v.ln()))
        .unzip();
    if xs.len() < 3 {
        return MAX_HOLDER_ESTIMATE;
    }
    let (slope, _, _) = linear_fit(&xs, &ys);
    (-slope - 1.0 - spec.epsilon).min(MAX_HOLDER_ESTIMATE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::new(n).unwrap()
    }

    fn ladder(p: f64) -> CartoonSpec {
        let mut s = CartoonSpec::disc([0.5, 0.5], 0.3);
        s.envelope_constant = 0.05;
        s.epsilon = 0.2;
        s.beta = 2.0;
        s.harmonics = (1..=32).map(|m| Harmonic { m, amplitude: 0.05 * (m as f64).powf(-p), phase: 0.3 * m as f64 }).collect();
        s
    }

    #[test]
    fn zero_fields_give_zero_image() {
        let mut s = CartoonSpec::disc([0.5, 0.5], 0.3);
        s.f1 = TrigPoly::constant(0.0);
        let img = generate_cartoon(&s, grid(64)).unwrap();
        assert!(img.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn disc_area() {
        let r = 0.3;
        let img = generate_cartoon(&CartoonSpec::disc([0.5, 0.5], r), grid(512)).unwrap();
        let area = img.data().iter().sum::<f64>() / (512.0 * 512.0);
        assert!((area / (PI * r * r) - 1.0).abs() < 1e-2, "{area}");
    }

    #[test]
    fn seeded_cartoons_repeat() {
        let a = generate_cartoon(&CartoonSpec::random(2.0, 4).unwrap(), grid(64)).unwrap();
        let b = generate_cartoon(&CartoonSpec::random(2.0, 4).unwrap(), grid(64)).unwrap();
        assert_eq!(a, b);
        let c = generate_cartoon(&CartoonSpec::random(2.0, 5).unwrap(), grid(64)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_invalid_specs() {
        let mut s = CartoonSpec::disc([0.5, 0.5], 0.3);
        s.r0 = -0.1;
        assert!(generate_cartoon(&s, grid(32)).is_err());
        let mut s = CartoonSpec::disc([0.5, 0.5], 0.6);
        assert!(s.validate().is_err());
        s.r0 = 0.3;
        s.beta = 2.5;
        assert!(s.validate().is_err());
        let loose = ladder(2.2);
        assert!(loose.validate().is_err());
    }

    #[test]
    fn regularity_estimates() {
        let circle = CartoonSpec::disc([0.5, 0.5], 0.3);
        assert_eq!(boundary_regularity_estimate(&circle), MAX_HOLDER_ESTIMATE);
        let b2 = boundary_regularity_estimate(&ladder(3.2));
        assert!((1.8..=2.4).contains(&b2), "{b2}");
        let b1 = boundary_regularity_estimate(&ladder(2.2));
        assert!(b1 < 1.5, "{b1}");
    }

    #[test]
    fn shrinking_harmonics_approach_disc() {
        let g = grid(64);
        let disc = generate_cartoon(&CartoonSpec::disc([0.5, 0.5], 0.3), g).unwrap();
        let mut s = ladder(3.2);
        let mut prev = f64::INFINITY;
        for t in [1.0, 0.1, 0.01, 0.0] {
            for (h, m) in s.harmonics.iter_mut().zip(1..) {
                h.amplitude = t * 0.05 * (m as f64).powf(-3.2);
            }
            let img = generate_cartoon(&s, g).unwrap();
            let diff = img.sub(&disc).norm2();
            assert!(diff <= prev);
            prev = diff;
        }
        assert_eq!(prev, 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn random_specs_are_compliant(seed in 0u64..10_000, beta in 1.05f64..=2.0) {
            let s = CartoonSpec::random(beta, seed).unwrap();
            prop_assert!(s.validate().is_ok());
            let est = boundary_regularity_estimate(&s);
            prop_assert!(est >= beta - 0.2, "{} {}", beta, est);
        }
    }
}
