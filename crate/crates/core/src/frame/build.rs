use std::f64::consts::PI;

use super::{Band, Frame, FrameSpec};
use crate::error::{invalid, Error, Result};
use crate::grid::FrequencyGrid;
use crate::param::{angular_level, ShearletParametrization};
use crate::windows::{
    active_wedges, curvelet_window, phi_normalizer, radial_band, separable_band, separable_lowpass,
    shear_profile,
};

/// Continuous window of class `(eps, j, l)` for the given family.
pub(crate) fn window(spec: &FrameSpec, eps: i32, j: i32, l: i64, xi: [f64; 2]) -> f64 {
    match *spec {
        FrameSpec::Curvelet { alpha, .. } => curvelet_window(alpha, j.max(0) as u32, l, xi),
        FrameSpec::Shearlet { beta, .. } => {
            let sigma = 2f64.powf(beta / 2.0);
            if j < 0 {
                return separable_lowpass(sigma, -1, xi[0]) * separable_lowpass(sigma, -1, xi[1]);
            }
            let eta = shear_step(beta, j);
            let (along, across) = if eps == 0 { (xi[0], xi[1]) } else { (xi[1], -xi[0]) };
            let b = separable_band(sigma, j, along);
            if b == 0.0 {
                return 0.0;
            }
            b * shear_profile(across / (along * eta) - l as f64)
        }
        FrameSpec::Wavelet { sigma, .. } => {
            if eps == 0 {
                return separable_lowpass(sigma, -1, xi[0]) * separable_lowpass(sigma, -1, xi[1]);
            }
            let factor = |bit: bool, t: f64| {
                if bit {
                    separable_band(sigma, j, t)
                } else {
                    separable_lowpass(sigma, j - 1, t)
                }
            };
            factor(eps & 2 != 0, xi[0]) * factor(eps & 1 != 0, xi[1])
        }
    }
}

fn shear_param(beta: f64) -> ShearletParametrization {
    ShearletParametrization::for_beta(beta, 1.0).expect("beta validated by caller")
}

fn shear_step(beta: f64, j: i32) -> f64 {
    shear_param(beta).shear_step(j)
}

pub(crate) fn covered_radius(spec: &FrameSpec) -> f64 {
    match *spec {
        FrameSpec::Curvelet { scales, .. } => 2f64.powi(scales as i32) / (8.0 * PI),
        FrameSpec::Shearlet { beta, scales, .. } => {
            1.5 * 2f64.powf(beta / 2.0).powi(scales as i32) / (8.0 * PI)
        }
        FrameSpec::Wavelet { sigma, scales, .. } => 1.5 * sigma.powi(scales as i32) / (8.0 * PI),
    }
}

/// Largest `|xi_1|`, `|xi_2|` reached by the finest bands.
fn support_extent(spec: &FrameSpec) -> f64 {
    match *spec {
        FrameSpec::Curvelet { scales, .. } => 2f64.powi(scales as i32 + 1) / (8.0 * PI),
        FrameSpec::Shearlet { beta, scales, .. } => {
            let p = shear_param(beta);
            let j = scales as i32;
            let t = 2.0 * p.sigma.powi(j) / (8.0 * PI);
            t * ((p.shear_range(j) + 1) as f64 * p.shear_step(j)).max(1.0)
        }
        FrameSpec::Wavelet { sigma, scales, .. } => 2.0 * sigma.powi(scales as i32) / (8.0 * PI),
    }
}

/// Largest `J` whose finest band stays strictly inside the Nyquist square.
pub fn max_admissible_scales(spec: &FrameSpec, grid: FrequencyGrid) -> u32 {
    let half = grid.half() as f64;
    let mut j = 0;
    while j < 64 && support_extent(&spec.with_scales(j + 1)) < half {
        j += 1;
    }
    j
}

fn validate(spec: &FrameSpec, grid: FrequencyGrid) -> Result<()> {
    match *spec {
        FrameSpec::Curvelet { alpha, .. } => {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(invalid(format!("alpha must lie in [0, 1], got {alpha}")));
            }
        }
        FrameSpec::Shearlet { beta, c, .. } => {
            if !(beta.is_finite() && beta > 1.0) {
                return Err(invalid(format!("beta must exceed 1, got {beta}")));
            }
            if !(c.is_finite() && c > 0.0) {
                return Err(invalid(format!("c must be positive, got {c}")));
            }
        }
        FrameSpec::Wavelet { sigma, tau, .. } => {
            if !(sigma.is_finite() && sigma > 1.0) {
                return Err(invalid(format!("sigma must exceed 1, got {sigma}")));
            }
            if !(tau.is_finite() && tau > 0.0) {
                return Err(invalid(format!("tau must be positive, got {tau}")));
            }
        }
    }
    if support_extent(spec) >= grid.half() as f64 {
        return Err(Error::ScaleTooLarge {
            requested: spec.scales(),
            max: max_admissible_scales(spec, grid),
        });
    }
    Ok(())
}

/// Support samples of one class while it is being assembled.
#[derive(Default)]
struct Samples {
    freqs: Vec<[i64; 2]>,
    values: Vec<f64>,
}

impl Samples {
    fn push(&mut self, xi: [i64; 2], w: f64) {
        self.freqs.push(xi);
        self.values.push(w);
    }
}

/// Smallest power-of-two box `(M1, M2)` on which the support wraps
/// injectively; ties in area prefer the squarer box.
fn choose_lattice(freqs: &[[i64; 2]], n: usize) -> [usize; 2] {
    let mut cands = Vec::new();
    let mut m1 = 1;
    while m1 <= n {
        let mut m2 = 1;
        while m2 <= n {
            if m1 * m2 >= freqs.len() {
                cands.push([m1, m2]);
            }
            m2 *= 2;
        }
        m1 *= 2;
    }
    cands.sort_by_key(|&[a, b]| (a * b, (a.trailing_zeros() as i64 - b.trailing_zeros() as i64).abs(), a));
    let mut seen = Vec::new();
    for [m1, m2] in cands {
        seen.clear();
        seen.resize(m1 * m2, false);
        let ok = freqs.iter().all(|xi| {
            let s = xi[0].rem_euclid(m1 as i64) as usize * m2 + xi[1].rem_euclid(m2 as i64) as usize;
            !std::mem::replace(&mut seen[s], true)
        });
        if ok {
            return [m1, m2];
        }
    }
    [n, n]
}

fn finish_band(
    grid: FrequencyGrid,
    (eps, j, l): (i32, i32, i64),
    (scale, angle): (f64, f64),
    samples: Samples,
) -> Option<Band> {
    if samples.freqs.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..samples.freqs.len()).collect();
    order.sort_by_key(|&i| grid.offset(samples.freqs[i]));
    let freqs: Vec<[i64; 2]> = order.iter().map(|&i| samples.freqs[i]).collect();
    let values: Vec<f64> = order.iter().map(|&i| samples.values[i]).collect();
    let offsets = freqs.iter().map(|&xi| grid.offset(xi)).collect();
    let lattice = choose_lattice(&freqs, grid.n());
    Some(Band {
        eps,
        j,
        l,
        scale,
        angle,
        freqs,
        offsets,
        values,
        lattice,
        norm: 1.0 / ((lattice[0] * lattice[1]) as f64).sqrt(),
        start: 0,
    })
}

/// Integer frequencies in the centred box of half-width `extent`.
fn box_range(extent: f64, grid: FrequencyGrid) -> std::ops::RangeInclusive<i64> {
    let h = (extent.ceil() as i64).min(grid.half() - 1);
    -h..=h
}

pub fn build_curvelet_frame(alpha: f64, scales: u32, grid: FrequencyGrid) -> Result<Frame> {
    let spec = FrameSpec::Curvelet { alpha, scales };
    validate(&spec, grid)?;
    let par = match spec.parametrization()? {
        crate::param::Parametrization::Curvelet(c) => c,
        _ => unreachable!(),
    };
    let mut bands = Vec::new();
    let mut wedges = Vec::new();
    for j in 0..=scales {
        let m = if j == 0 { 0 } else { angular_level(j as i32, alpha) };
        let count = if j == 0 { 1 } else { 1usize << m };
        let mut per_l: Vec<Samples> = (0..count).map(|_| Samples::default()).collect();
        let extent = if j == 0 { 2.0 } else { 2f64.powi(j as i32 + 1) } / (8.0 * PI);
        let range = box_range(extent, grid);
        for x2 in range.clone() {
            for x1 in range.clone() {
                let xi = [x1 as f64, x2 as f64];
                let r = xi[0].hypot(xi[1]);
                let w = radial_band(j, r);
                if w == 0.0 {
                    continue;
                }
                let norm = phi_normalizer(alpha, xi).sqrt();
                if j == 0 {
                    per_l[0].push([x1, x2], w / norm);
                    continue;
                }
                active_wedges(m, xi[1].atan2(xi[0]), &mut wedges);
                for &(l, v) in &wedges {
                    per_l[l as usize].push([x1, x2], w * v / norm);
                }
            }
        }
        for (l, samples) in per_l.into_iter().enumerate() {
            let class = par.class(j as i32, l as i64);
            bands.extend(finish_band(grid, (0, j as i32, l as i64), (class.scale, class.angle), samples));
        }
    }
    Ok(Frame::from_bands(spec, grid, bands))
}

pub fn build_shearlet_frame(beta: f64, c: f64, scales: u32, grid: FrequencyGrid) -> Result<Frame> {
    let spec = FrameSpec::Shearlet { beta, c, scales };
    validate(&spec, grid)?;
    let par = ShearletParametrization::for_beta(beta, c)?;
    let sigma = par.sigma;
    let mut bands = Vec::new();

    let coarse = par.class(0, -1, 0);
    let mut samples = Samples::default();
    let range = box_range(2.0 / (sigma * 8.0 * PI), grid);
    for x2 in range.clone() {
        for x1 in range.clone() {
            let w = window(&spec, 0, -1, 0, [x1 as f64, x2 as f64]);
            if w > 0.0 {
                samples.push([x1, x2], w);
            }
        }
    }
    bands.extend(finish_band(grid, (0, -1, 0), (coarse.scale, coarse.angle), samples));

    for j in 0..=scales as i32 {
        let lmax = par.shear_range(j);
        let eta = par.shear_step(j);
        let t_ext = 2.0 * sigma.powi(j) / (8.0 * PI);
        let s_ext = t_ext * (lmax + 1) as f64 * eta;
        for eps in 0..2 {
            let mut per_l: Vec<Samples> = (0..(2 * lmax + 1)).map(|_| Samples::default()).collect();
            for along in box_range(t_ext, grid) {
                let b = separable_band(sigma, j, along as f64);
                if b == 0.0 {
                    continue;
                }
                for across in box_range(s_ext, grid) {
                    let u = across as f64 / (along as f64 * eta);
                    let base = u.floor() as i64;
                    for l in base..=base + 1 {
                        if l.abs() > lmax {
                            continue;
                        }
                        let v = shear_profile(u - l as f64);
                        if v > 0.0 {
                            // vertical cone: (xi1, xi2) = (-across, along)
                            let xi = if eps == 0 { [along, across] } else { [-across, along] };
                            per_l[(l + lmax) as usize].push(xi, b * v);
                        }
                    }
                }
            }
            for (i, samples) in per_l.into_iter().enumerate() {
                let l = i as i64 - lmax;
                let class = par.class(eps, j, l);
                bands.extend(finish_band(grid, (eps, j, l), (class.scale, class.angle), samples));
            }
        }
    }
    Ok(Frame::from_bands(spec, grid, bands))
}

pub fn build_wavelet_frame(sigma: f64, tau: f64, scales: u32, grid: FrequencyGrid) -> Result<Frame> {
    let spec = FrameSpec::Wavelet { sigma, tau, scales };
    validate(&spec, grid)?;
    let par = crate::param::WaveletParametrization::new(sigma, tau)?;
    let mut bands = Vec::new();
    for j in 0..=scales as i32 {
        let types: &[i32] = if j == 0 { &[0, 1, 2, 3] } else { &[1, 2, 3] };
        let range = box_range(2.0 * sigma.powi(j) / (8.0 * PI), grid);
        for &e in types {
            let mut samples = Samples::default();
            for x2 in range.clone() {
                for x1 in range.clone() {
                    let w = window(&spec, e, j, 0, [x1 as f64, x2 as f64]);
                    if w > 0.0 {
                        samples.push([x1, x2], w);
                    }
                }
            }
            let class = par.class(e, j);
            bands.extend(finish_band(grid, (e, j, 0), (class.scale, class.angle), samples));
        }
    }
    Ok(Frame::from_bands(spec, grid, bands))
}
