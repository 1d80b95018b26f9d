//! Numerical check of the alpha-molecule order condition for the
//! generators of the shipped frames.
//!
//! The generator of an element with scale `s` and orientation `theta` is
//! the window pulled back to the reference frame,
//! `g_hat(eta) = w(R_{-theta} A_{alpha,s} eta)` with `A_{alpha,s} = diag(s, s^alpha)`.
//! Its derivatives are taken spectrally on a periodic sample box and
//! compared against the molecule envelope.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::frame::FrameSpec;
use crate::grid::Fft2;
use crate::param::MoleculeOrder;

/// Proxy levels used for infinite order entries.
pub const PROXY_ORDER: MoleculeOrder = MoleculeOrder { l: Some(2), m: Some(8), n1: Some(6), n2: Some(4) };

/// Largest derivative order the spectral differentiator accepts.
pub const MAX_DERIVATIVE_LEVEL: u32 = 6;

/// `min{1, s^-1 + |xi1| + s^-(1-alpha) |xi2|}^M <|xi|>^-N1 <xi2>^-N2`, with
/// infinite entries replaced by [`PROXY_ORDER`].
pub fn molecule_bound(alpha: f64, s: f64, order: MoleculeOrder, xi: [f64; 2]) -> f64 {
    let o = order.with_proxy(PROXY_ORDER);
    let (m, n1, n2) = (o.m.unwrap_or(0), o.n1.unwrap_or(0), o.n2.unwrap_or(0));
    let t = (1.0 / s + xi[0].abs() + s.powf(-(1.0 - alpha)) * xi[1].abs()).min(1.0);
    let r2 = xi[0] * xi[0] + xi[1] * xi[1];
    t.powi(m as i32) * (1.0 + r2).powf(-(n1 as f64) / 2.0) * (1.0 + xi[1] * xi[1]).powf(-(n2 as f64) / 2.0)
}

/// A generator to be tested: its frequency profile on the reference frame
/// and a box `[-h1, h1] x [-h2, h2]` containing its support.
pub struct GeneratorProbe<'a> {
    pub eps: i32,
    pub j: i32,
    pub l: i64,
    pub scale: f64,
    pub half_width: [f64; 2],
    pub eval: Box<dyn Fn([f64; 2]) -> f64 + 'a>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassConstant {
    pub eps: i32,
    pub j: i32,
    pub l: i64,
    pub scale: f64,
    /// `(rho1, rho2)` attaining the largest constant.
    pub worst_rho: [u32; 2],
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleConstant {
    pub j: i32,
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderCertificate {
    pub order: MoleculeOrder,
    pub tested_order: MoleculeOrder,
    pub derivative_levels: u32,
    pub classes: Vec<ClassConstant>,
    pub per_scale: Vec<ScaleConstant>,
    pub ratio: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Samples per axis of the derivative box.
    pub samples: usize,
    /// The box is the support box enlarged by this factor.
    pub padding: f64,
    /// Pass threshold for the cross-scale max/min ratio.
    pub ratio_threshold: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { samples: 256, padding: 1.25, ratio_threshold: 4.0 }
    }
}

/// All `(rho1, rho2)` with `rho1 + rho2 <= levels`.
fn multi_indices(levels: u32) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for total in 0..=levels {
        for r1 in 0..=total {
            out.push([r1, total - r1]);
        }
    }
    out
}

fn signed(i: usize, q: usize) -> f64 {
    if i < q / 2 {
        i as f64
    } else {
        i as f64 - q as f64
    }
}

/// `max_eta |d^rho g_hat(eta)| / bound(eta)` for every `|rho| <= levels`,
/// sampling on `[-p1, p1) x [-p2, p2)` with `p = padding * half_width`.
pub fn generator_constants(
    alpha: f64,
    probe: &GeneratorProbe<'_>,
    order: MoleculeOrder,
    levels: u32,
    cfg: &CheckConfig,
) -> Result<Vec<([u32; 2], f64)>> {
    if levels > MAX_DERIVATIVE_LEVEL {
        return Err(invalid(format!(
            "derivative level {levels} exceeds the supported maximum {MAX_DERIVATIVE_LEVEL}"
        )));
    }
    let q = cfg.samples;
    if q < 16 || !q.is_power_of_two() {
        return Err(invalid(format!("sample count must be a power of two >= 16, got {q}")));
    }
    let p = [probe.half_width[0] * cfg.padding, probe.half_width[1] * cfg.padding];
    if !(p[0] > 0.0 && p[1] > 0.0) {
        return Err(invalid("generator box must have positive size"));
    }
    let h = [2.0 * p[0] / q as f64, 2.0 * p[1] / q as f64];
    let eta = |row: usize, col: usize| [-p[0] + col as f64 * h[0], -p[1] + row as f64 * h[1]];

    let mut values = vec![Complex64::default(); q * q];
    for row in 0..q {
        for col in 0..q {
            values[row * q + col] = Complex64::new((probe.eval)(eta(row, col)), 0.0);
        }
    }
    // Derivatives of a compactly supported profile vanish off its support;
    // discard spectral ringing there.
    let reach = 2isize;
    let mut near = vec![false; q * q];
    for row in 0..q {
        for col in 0..q {
            if values[row * q + col].re == 0.0 {
                continue;
            }
            for dr in -reach..=reach {
                for dc in -reach..=reach {
                    let (r, c) = (row as isize + dr, col as isize + dc);
                    if r >= 0 && c >= 0 && (r as usize) < q && (c as usize) < q {
                        near[r as usize * q + c as usize] = true;
                    }
                }
            }
        }
    }
    let bound: Vec<f64> = (0..q * q)
        .map(|i| molecule_bound(alpha, probe.scale, order, eta(i / q, i % q)))
        .collect();

    let mut fft = Fft2::new();
    let mut spectrum = values.clone();
    fft.transform(&mut spectrum, q, q, false);
    let norm = 1.0 / (q * q) as f64;
    let tau = std::f64::consts::TAU;
    let mut out = Vec::new();
    let mut buf = vec![Complex64::default(); q * q];
    for rho in multi_indices(levels) {
        for row in 0..q {
            let k2 = signed(row, q);
            let f2 = Complex64::new(0.0, tau * k2 / (2.0 * p[1])).powu(rho[1]);
            for col in 0..q {
                let k1 = signed(col, q);
                let nyq = (rho[0] > 0 && col == q / 2) || (rho[1] > 0 && row == q / 2);
                buf[row * q + col] = if nyq {
                    Complex64::default()
                } else {
                    let f1 = Complex64::new(0.0, tau * k1 / (2.0 * p[0])).powu(rho[0]);
                    spectrum[row * q + col] * f1 * f2 * norm
                };
            }
        }
        fft.transform(&mut buf, q, q, true);
        let mut c: f64 = 0.0;
        for i in 0..q * q {
            if near[i] {
                c = c.max(buf[i].norm() / bound[i]);
            }
        }
        out.push((rho, c));
    }
    Ok(out)
}

/// Run every probe and aggregate per-scale constants and their spread.
pub fn check_generators(
    alpha: f64,
    probes: &[GeneratorProbe<'_>],
    order: MoleculeOrder,
    levels: u32,
    cfg: &CheckConfig,
) -> Result<OrderCertificate> {
    let mut classes = Vec::new();
    for probe in probes {
        let consts = generator_constants(alpha, probe, order, levels, cfg)?;
        let (worst_rho, constant) = consts
            .iter()
            .copied()
            .fold(([0, 0], 0.0f64), |best, (r, c)| if c > best.1 { (r, c) } else { best });
        classes.push(ClassConstant {
            eps: probe.eps,
            j: probe.j,
            l: probe.l,
            scale: probe.scale,
            worst_rho,
            constant,
        });
    }
    let mut per_scale: Vec<ScaleConstant> = Vec::new();
    for c in &classes {
        match per_scale.iter_mut().find(|s| s.j == c.j) {
            Some(s) => s.constant = s.constant.max(c.constant),
            None => per_scale.push(ScaleConstant { j: c.j, constant: c.constant }),
        }
    }
    per_scale.sort_by_key(|s| s.j);
    let hi = per_scale.iter().map(|s| s.constant).fold(0.0, f64::max);
    let lo = per_scale.iter().map(|s| s.constant).fold(f64::INFINITY, f64::min);
    let ratio = if hi == 0.0 { 1.0 } else if lo == 0.0 { f64::INFINITY } else { hi / lo };
    Ok(OrderCertificate {
        order,
        tested_order: order.with_proxy(PROXY_ORDER),
        derivative_levels: levels,
        classes,
        per_scale,
        ratio,
        threshold: cfg.ratio_threshold,
        pass: ratio.is_finite() && ratio <= cfg.ratio_threshold,
    })
}

/// Scale, orientation and support radius of a frame class.
fn class_geometry(spec: &FrameSpec, eps: i32, j: i32, l: i64) -> Result<(f64, f64, f64)> {
    let par = spec.parametrization()?;
    let class = par
        .classes(j.max(0))
        .into_iter()
        .find(|c| c.eps == eps && c.j == j && c.l == l)
        .ok_or_else(|| invalid(format!("class (eps {eps}, j {j}, l {l}) not in the {} frame", spec.family())))?;
    let pi8 = 8.0 * std::f64::consts::PI;
    let radius = match *spec {
        FrameSpec::Curvelet { .. } => {
            if j == 0 {
                2.0 / pi8
            } else {
                2f64.powi(j + 1) / pi8
            }
        }
        FrameSpec::Shearlet { .. } => {
            let t = 2.0 * par.sigma().powi(j) / pi8;
            // the cone window reaches slopes up to (L_j + 1) eta_j <= 3
            t * 10f64.sqrt()
        }
        FrameSpec::Wavelet { sigma, .. } => 2.0 * sigma.powi(j) / pi8 * 2f64.sqrt(),
    };
    Ok((class.scale, class.angle, radius))
}

/// Certificate for the generators of the given `(eps, j, l)` classes.
pub fn check_generator(
    spec: &FrameSpec,
    classes: &[(i32, i32, i64)],
    order: MoleculeOrder,
    levels: u32,
    cfg: &CheckConfig,
) -> Result<OrderCertificate> {
    let alpha = spec.alpha();
    let mut probes = Vec::new();
    for &(eps, j, l) in classes {
        let (s, theta, radius) = class_geometry(spec, eps, j, l)?;
        let sa = s.powf(alpha);
        let (c, sn) = (theta.cos(), theta.sin());
        let eval = move |eta: [f64; 2]| {
            let y = [s * eta[0], sa * eta[1]];
            // R_{-theta} y
            let xi = [c * y[0] + sn * y[1], -sn * y[0] + c * y[1]];
            spec.window(eps, j, l, xi)
        };
        let half_width = support_box(&eval, [radius / s, radius / sa]);
        probes.push(GeneratorProbe { eps, j, l, scale: s, half_width, eval: Box::new(eval) });
    }
    check_generators(alpha, &probes, order, levels, cfg)
}

/// Tighten a symmetric box around the support of `f` by scanning it.
fn support_box(f: &dyn Fn([f64; 2]) -> f64, outer: [f64; 2]) -> [f64; 2] {
    let q = 512;
    let mut ext = [0.0f64; 2];
    for row in 0..=q {
        let y = -outer[1] + 2.0 * outer[1] * row as f64 / q as f64;
        for col in 0..=q {
            let x = -outer[0] + 2.0 * outer[0] * col as f64 / q as f64;
            if f([x, y]) != 0.0 {
                ext[0] = ext[0].max(x.abs());
                ext[1] = ext[1].max(y.abs());
            }
        }
    }
    let cell = [2.0 * outer[0] / q as f64, 2.0 * outer[1] / q as f64];
    [
        (ext[0] + 2.0 * cell[0]).min(outer[0]).max(cell[0]),
        (ext[1] + 2.0 * cell[1]).min(outer[1]).max(cell[1]),
    ]
}
