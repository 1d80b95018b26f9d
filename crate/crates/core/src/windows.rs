//! Smooth radial and angular windows of the curvelet construction and the
//! normalizer `Phi`.
//!
//! Radii are measured in cycles per unit length, i.e. in the same units as
//! integer DFT frequencies on the unit torus. The band windows carry the
//! `8 pi` rescaling, so scale `j` lives at radii of order `2^j / (8 pi)`.

use std::f64::consts::{PI, TAU};

use crate::error::{invalid, Result};
use crate::param::angular_level;

/// `s(t) = a(t) / (a(t) + a(1 - t))` with `a(t) = exp(-1/t)` for `t > 0`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// The low-pass profile `W0~`: 1 on `[0, 3/2]`, 0 on `[2, inf)`.
pub fn lowpass_profile(r: f64) -> f64 {
    let r = r.abs();
    if r <= 1.5 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        smooth_step((2.0 - r) / 0.5)
    }
}

/// The band-pass profile `W~`: 1 on `[3/4, 3/2]`, supported in `(1/2, 2)`.
pub fn bandpass_profile(r: f64) -> f64 {
    let r = r.abs();
    if r <= 0.5 || r >= 2.0 {
        0.0
    } else if r < 0.75 {
        smooth_step((r - 0.5) / 0.25)
    } else if r <= 1.5 {
        1.0
    } else {
        smooth_step((2.0 - r) / 0.5)
    }
}

/// The angular profile `V`: 1 on `[-pi/2, pi/2]`, supported in `[-3pi/4, 3pi/4]`.
pub fn angular_profile(t: f64) -> f64 {
    let t = t.abs();
    if t <= PI / 2.0 {
        1.0
    } else if t >= 0.75 * PI {
        0.0
    } else {
        smooth_step((0.75 * PI - t) / (0.25 * PI))
    }
}

/// `W0~(r)` without rescaling.
pub fn radial_lowpass(r: f64) -> f64 {
    lowpass_profile(r)
}

/// `W^(j)(r)`: `W~(2^-j 8 pi r)` for `j >= 1` and `W0~(8 pi r)` for `j = 0`.
pub fn radial_band(j: u32, r: f64) -> f64 {
    let u = 8.0 * PI * r;
    if j == 0 {
        lowpass_profile(u)
    } else {
        bandpass_profile(u / (1u64 << j) as f64)
    }
}

/// Wrap an angle into `[-pi, pi)`.
pub(crate) fn wrap_pi(t: f64) -> f64 {
    let r = (t + PI).rem_euclid(TAU) - PI;
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// Symmetrized scaled profile `V~(2^m phi) + V~(2^m (phi + pi))`.
#[inline]
fn symmetrized(m: u32, phi: f64) -> f64 {
    let scale = (1u64 << m) as f64;
    angular_profile(scale * wrap_pi(phi)) + angular_profile(scale * wrap_pi(phi + PI))
}

/// `V^(j,l)` at polar angle `phi`. The rotation `R_{j,l}` is counterclockwise,
/// so wedge `l` is centred at the frequency direction `-l omega_j`.
pub fn angular(alpha: f64, j: u32, l: i64, phi: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if j == 0 {
        return Err(invalid("angular windows start at j = 1"));
    }
    let m = angular_level(j as i32, alpha);
    let count = 1i64 << m;
    if l < 0 || l >= count {
        return Err(invalid(format!("angle index {l} outside 0..{count}")));
    }
    Ok(angular_unchecked(m, l, phi))
}

#[inline]
pub(crate) fn angular_unchecked(m: u32, l: i64, phi: f64) -> f64 {
    let omega = PI / (1u64 << m) as f64;
    symmetrized(m, phi + l as f64 * omega)
}

/// Wedges `l` at angular level `m` whose window can be nonzero at `phi`,
/// together with the window value.
pub(crate) fn active_wedges(m: u32, phi: f64, out: &mut Vec<(i64, f64)>) {
    out.clear();
    let count = 1i64 << m;
    if count <= 4 {
        for l in 0..count {
            let v = angular_unchecked(m, l, phi);
            if v > 0.0 {
                out.push((l, v));
            }
        }
        return;
    }
    let omega = PI / count as f64;
    // The window of wedge l is nonzero only where phi + l omega is within
    // 3 omega / 4 of a multiple of pi.
    let t = (-phi / omega).rem_euclid(count as f64);
    let base = t.floor() as i64;
    for d in -1..=2 {
        let l = (base + d).rem_euclid(count);
        if out.iter().any(|&(q, _)| q == l) {
            continue;
        }
        let v = angular_unchecked(m, l, phi);
        if v > 0.0 {
            out.push((l, v));
        }
    }
    out.sort_by_key(|&(l, _)| l);
}

/// Scales whose radial window can be nonzero at radius `r`.
pub(crate) fn active_scales(r: f64) -> std::ops::RangeInclusive<u32> {
    if r <= 0.0 {
        return 0..=0;
    }
    let u = (8.0 * PI * r).log2();
    let lo = (u - 1.0).floor().max(0.0) as u32;
    let hi = (u + 1.0).ceil().max(0.0) as u32;
    lo..=hi
}

/// The normalizer `Phi(xi) = W0(|xi|)^2 + sum_{j,l} W_j(|xi|)^2 V_{j,l}(xi)^2`,
/// summing only over the bands that meet `|xi|`.
pub fn phi_normalizer(alpha: f64, xi: [f64; 2]) -> f64 {
    let r = xi[0].hypot(xi[1]);
    let phi = xi[1].atan2(xi[0]);
    let mut total = 0.0;
    let mut wedges = Vec::with_capacity(4);
    for j in active_scales(r) {
        let w = radial_band(j, r);
        if w == 0.0 {
            continue;
        }
        if j == 0 {
            total += w * w;
            continue;
        }
        active_wedges(angular_level(j as i32, alpha), phi, &mut wedges);
        let ang: f64 = wedges.iter().map(|&(_, v)| v * v).sum();
        total += w * w * ang;
    }
    total
}

/// `Phi` summed over every scale up to `max_j` and every wedge; a
/// brute-force reference for [`phi_normalizer`].
pub fn phi_normalizer_all_bands(alpha: f64, xi: [f64; 2], max_j: u32) -> f64 {
    let r = xi[0].hypot(xi[1]);
    let phi = xi[1].atan2(xi[0]);
    let mut total = radial_band(0, r).powi(2);
    for j in 1..=max_j {
        let m = angular_level(j as i32, alpha);
        let w = radial_band(j, r);
        for l in 0..(1i64 << m) {
            total += (w * angular_unchecked(m, l, phi)).powi(2);
        }
    }
    total
}

/// Curvelet window `psi_hat_{j,l}(xi)` (or `psi_hat_0` for `j = 0`).
pub fn curvelet_window(alpha: f64, j: u32, l: i64, xi: [f64; 2]) -> f64 {
    let r = xi[0].hypot(xi[1]);
    let w = radial_band(j, r);
    if w == 0.0 {
        return 0.0;
    }
    let v = if j == 0 {
        1.0
    } else {
        angular_unchecked(angular_level(j as i32, alpha), l, xi[1].atan2(xi[0]))
    };
    if v == 0.0 {
        return 0.0;
    }
    w * v / phi_normalizer(alpha, xi).sqrt()
}

/// Low-pass profile of the separable systems, aligned so that its
/// band-pass differences match the outer edge of curvelet band `j`:
/// `low_j(t) = W0~(8 pi sigma^-j |t|)`.
pub fn separable_lowpass(sigma: f64, j: i32, t: f64) -> f64 {
    lowpass_profile(8.0 * PI * t.abs() * sigma.powi(-j))
}

/// `band_j(t) = sqrt(low_j(t)^2 - low_{j-1}(t)^2)`.
pub fn separable_band(sigma: f64, j: i32, t: f64) -> f64 {
    let hi = separable_lowpass(sigma, j, t);
    if hi == 0.0 {
        return 0.0;
    }
    let lo = separable_lowpass(sigma, j - 1, t);
    (hi * hi - lo * lo).max(0.0).sqrt()
}

/// Shear profile `v(u) = sqrt(s(1 - |u|))`; its integer shifts form a
/// partition of unity in the squares.
pub fn shear_profile(u: f64) -> f64 {
    let a = u.abs();
    if a >= 1.0 {
        0.0
    } else {
        smooth_step(1.0 - a).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn step_examples() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert_abs_diff_eq!(smooth_step(0.5), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn lowpass_examples() {
        assert_eq!(radial_lowpass(1.0), 1.0);
        assert_eq!(radial_lowpass(2.5), 0.0);
        let v = radial_lowpass(1.75);
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn band_examples() {
        assert_eq!(radial_band(1, 2.0 / (8.0 * PI)), 1.0);
        assert_eq!(radial_band(1, 4.0 / (8.0 * PI) * 1.001), 0.0);
        for j in 1..12 {
            assert_eq!(radial_band(j, 0.0), 0.0);
        }
        assert_eq!(radial_band(0, 0.0), 1.0);
    }

    #[test]
    fn angular_examples() {
        for j in 1..10 {
            assert_eq!(angular(0.5, j, 0, 0.0).unwrap(), 1.0);
            assert_eq!(angular(0.5, j, 0, PI).unwrap(), 1.0);
        }
        // j = 2, alpha = 1/2: 2^1 * phi = 0.9 pi lies outside the support.
        assert_eq!(angular_profile(2.0 * (0.45 * PI)), 0.0);
        assert!(angular(0.5, 2, 2, 0.0).is_err());
        assert!(angular(0.5, 0, 0, 0.0).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_normalizer(0.5, [0.0, 0.0]), 1.0);
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
            for i in 0..400 {
                let r = 0.002 * (i as f64).powf(1.7);
                let phi = 0.37 * i as f64;
                let xi = [r * phi.cos(), r * phi.sin()];
                let fast = phi_normalizer(alpha, xi);
                let slow = phi_normalizer_all_bands(alpha, xi, 13);
                assert_abs_diff_eq!(fast, slow, epsilon = 1e-13);
                assert!((1.0 - 1e-12..=8.0).contains(&fast), "{alpha} {xi:?} {fast}");
            }
        }
    }

    #[test]
    fn active_wedges_match_bruteforce() {
        let mut out = Vec::new();
        for m in 0..7u32 {
            for i in 0..500 {
                let phi = -PI + TAU * i as f64 / 500.0 + 1e-3;
                active_wedges(m, phi, &mut out);
                for l in 0..(1i64 << m) {
                    let v = angular_unchecked(m, l, phi);
                    let found = out.iter().find(|&&(q, _)| q == l).map(|&(_, v)| v);
                    assert_eq!(found.unwrap_or(0.0), v, "m={m} l={l} phi={phi}");
                }
            }
        }
    }

    #[test]
    fn radial_sum_between_one_and_two() {
        for i in 0..20000 {
            let r = i as f64 * 0.01;
            let s: f64 = (0..20).map(|j| radial_band(j, r)).sum();
            assert!((1.0..=2.0).contains(&s), "r={r} sum={s}");
        }
    }

    #[test]
    fn shear_partition_of_unity() {
        for i in 0..1000 {
            let u = -3.0 + 6.0 * i as f64 / 1000.0;
            let s: f64 = (-5..=5).map(|l| shear_profile(u - l as f64).powi(2)).sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn separable_bands_telescope() {
        let sigma = 2.0;
        for i in 0..2000 {
            let t = i as f64 * 0.05;
            let s: f64 = (0..=8).map(|j| separable_band(sigma, j, t).powi(2)).sum();
            let expect = separable_lowpass(sigma, 8, t).powi(2) - separable_lowpass(sigma, -1, t).powi(2);
            assert_abs_diff_eq!(s, expect, epsilon = 1e-13);
        }
    }

    proptest! {
        #[test]
        fn step_symmetry(t in -2.0f64..3.0) {
            prop_assert!((smooth_step(t) + smooth_step(1.0 - t) - 1.0).abs() < 1e-15);
        }

        #[test]
        fn step_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(smooth_step(lo) <= smooth_step(hi));
        }

        #[test]
        fn window_ranges(r in 0.0f64..10.0, t in -4.0f64..4.0) {
            for v in [lowpass_profile(r), bandpass_profile(r), angular_profile(t)] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            if r >= 2.0 { prop_assert_eq!(lowpass_profile(r), 0.0); }
            if r <= 0.5 || r >= 2.0 { prop_assert_eq!(bandpass_profile(r), 0.0); }
            if t.abs() >= 0.75 * PI { prop_assert_eq!(angular_profile(t), 0.0); }
        }

        #[test]
        fn angular_in_range(m in 0u32..8, l in 0i64..256, phi in -4.0f64..4.0) {
            let l = l % (1i64 << m);
            let v = angular_unchecked(m, l, phi);
            prop_assert!((0.0..=2.0).contains(&v));
            if m >= 1 { prop_assert!(v <= 1.0); }
        }
    }
}
