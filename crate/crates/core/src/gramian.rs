//! Cross-Gramians between two frames on the same grid: exact inner
//! products, stratified sampling against the index distance, envelope
//! regression, and the l^p operator bound of the Gramian.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::frame::{Band, Frame};
use crate::grid::Fft2;
use crate::param::{angle_diff, d_alpha_parts, ParamIndex};

/// Wrap a displacement on the unit torus to `[-1/2, 1/2)^2`.
pub fn torus_delta(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let w = |t: f64| t - (t + 0.5).floor();
    [w(a[0] - b[0]), w(a[1] - b[1])]
}

/// `d_alpha` between periodized elements: the smallest value over the
/// periodic images of the displacement `dx`.
pub fn periodic_d_alpha(alpha: f64, s_min: f64, dtheta: f64, theta_lambda: f64, dx: [f64; 2]) -> f64 {
    let mut best = f64::INFINITY;
    for m1 in -2..=2 {
        for m2 in -2..=2 {
            let d = [dx[0] + m1 as f64, dx[1] + m2 as f64];
            best = best.min(d_alpha_parts(alpha, s_min, dtheta, theta_lambda, d));
        }
    }
    best
}

/// Common support of two bands: `(xi1, xi2, w_a * w_b)`.
type Overlap = Vec<(i64, i64, f64)>;

fn band_overlap(a: &Band, b: &Band) -> Overlap {
    let mut out = Vec::new();
    let (mut i, mut k) = (0, 0);
    while i < a.offsets.len() && k < b.offsets.len() {
        match a.offsets[i].cmp(&b.offsets[k]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => k += 1,
            std::cmp::Ordering::Equal => {
                out.push((a.freqs[i][0], a.freqs[i][1], a.values[i] * b.values[k]));
                i += 1;
                k += 1;
            }
        }
    }
    out
}

/// `sum w e^{-2 pi i xi . d}` over an overlap list.
fn modulated_sum(overlap: &[(i64, i64, f64)], d: [f64; 2]) -> Complex64 {
    if overlap.is_empty() {
        return Complex64::default();
    }
    let (mut lo, mut hi) = ([i64::MAX; 2], [i64::MIN; 2]);
    for &(x1, x2, _) in overlap {
        lo = [lo[0].min(x1), lo[1].min(x2)];
        hi = [hi[0].max(x1), hi[1].max(x2)];
    }
    let table = |axis: usize| -> Vec<Complex64> {
        (lo[axis]..=hi[axis]).map(|x| Complex64::from_polar(1.0, -TAU * x as f64 * d[axis])).collect()
    };
    let (p1, p2) = (table(0), table(1));
    overlap
        .iter()
        .map(|&(x1, x2, w)| p1[(x1 - lo[0]) as usize] * p2[(x2 - lo[1]) as usize] * w)
        .sum()
}

fn check_same_grid(a: &Frame, b: &Frame) -> Result<()> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch { expected: a.grid().n(), found: b.grid().n() });
    }
    Ok(())
}

/// `<m_lambda, p_mu>` for flat positions `pa` of `a` and `pb` of `b`.
pub fn cross_inner_product(a: &Frame, pa: usize, b: &Frame, pb: usize) -> Result<Complex64> {
    check_same_grid(a, b)?;
    let (ba, ia) = a.locate(pa);
    let (bb, ib) = b.locate(pb);
    let (band_a, band_b) = (&a.bands()[ba], &b.bands()[bb]);
    let overlap = band_overlap(band_a, band_b);
    let d = torus_delta(band_a.location(band_a.k_of(ia)), band_b.location(band_b.k_of(ib)));
    Ok(modulated_sum(&overlap, d) * (band_a.norm * band_b.norm))
}

/// Inner products between two frames with cached band overlaps.
pub struct GramianEngine<'f> {
    a: &'f Frame,
    b: &'f Frame,
    cache: HashMap<(usize, usize), Overlap>,
}

impl<'f> GramianEngine<'f> {
    pub fn new(a: &'f Frame, b: &'f Frame) -> Result<Self> {
        check_same_grid(a, b)?;
        Ok(Self { a, b, cache: HashMap::new() })
    }

    pub fn inner(&mut self, pa: usize, pb: usize) -> Complex64 {
        let (ba, ia) = self.a.locate(pa);
        let (bb, ib) = self.b.locate(pb);
        let (band_a, band_b) = (&self.a.bands()[ba], &self.b.bands()[bb]);
        let overlap = self.cache.entry((ba, bb)).or_insert_with(|| band_overlap(band_a, band_b));
        let d = torus_delta(band_a.location(band_a.k_of(ia)), band_b.location(band_b.k_of(ib)));
        modulated_sum(overlap, d) * (band_a.norm * band_b.norm)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramianSample {
    pub id: usize,
    pub a: ParamIndex,
    pub b: ParamIndex,
    /// `omega_alpha` with the first frame as the asymmetric argument.
    pub omega: f64,
    /// `|<m, p>| / (|m| |p|)`.
    pub magnitude: f64,
    pub raw: f64,
    pub scale_a: f64,
    pub scale_b: f64,
    pub angle_gap: f64,
    /// Torus distance between the two locations.
    pub offset: f64,
}

/// How `sample_gramian` picks pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerPolicy {
    pub count: usize,
    pub seed: u64,
    /// Scale gaps `|j - j'|` are cycled through `0..=max_scale_gap`.
    pub max_scale_gap: u32,
    /// Smallest scale index drawn for the first frame.
    pub min_scale: i32,
    /// Spatial offsets are drawn log-uniformly over this many decades above
    /// `0.3 / s_min`.
    pub offset_decades: f64,
    /// Probability of drawing a second band without frequency overlap.
    pub disjoint_fraction: f64,
}

impl Default for SamplerPolicy {
    fn default() -> Self {
        Self { count: 1000, seed: 0, max_scale_gap: 3, min_scale: 0, offset_decades: 3.0, disjoint_fraction: 0.1 }
    }
}

/// Deterministic stratified sample of Gramian entries.
pub fn sample_gramian(a: &Frame, b: &Frame, policy: &SamplerPolicy) -> Result<Vec<GramianSample>> {
    let alpha = a.spec().alpha();
    if (alpha - b.spec().alpha()).abs() > 1e-12 {
        return Err(invalid(format!(
            "frames have different alpha ({} vs {})",
            alpha,
            b.spec().alpha()
        )));
    }
    if policy.count == 0 {
        return Ok(Vec::new());
    }
    let mut engine = GramianEngine::new(a, b)?;
    let n = a.grid().n();
    // bands of b touching each spectrum offset
    let mut touching: Vec<Vec<u32>> = vec![Vec::new(); n * n];
    for (i, band) in b.bands().iter().enumerate() {
        for &o in &band.offsets {
            touching[o].push(i as u32);
        }
    }
    let first: Vec<usize> = (0..a.bands().len()).filter(|&i| a.bands()[i].j >= policy.min_scale).collect();
    if first.is_empty() {
        return Err(Error::Empty("no bands at or above the minimum scale"));
    }
    let mut overlapping: Vec<Vec<usize>> = Vec::with_capacity(a.bands().len());
    for band in a.bands() {
        let mut v: Vec<usize> = band.offsets.iter().flat_map(|&o| touching[o].iter().map(|&i| i as usize)).collect();
        v.sort_unstable();
        v.dedup();
        overlapping.push(v);
    }
    let norm_a: Vec<f64> = a.bands().iter().map(|band| band.element_norm2().sqrt()).collect();
    let norm_b: Vec<f64> = b.bands().iter().map(|band| band.element_norm2().sqrt()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut out = Vec::with_capacity(policy.count);
    for id in 0..policy.count {
        let gap = (id as u32 % (policy.max_scale_gap + 1)) as i32;
        let ia = first[rng.gen_range(0..first.len())];
        let band_a = &a.bands()[ia];
        let at_gap = |i: &usize| (b.bands()[*i].j - band_a.j).abs() == gap;
        let mut cands: Vec<usize> = if rng.gen::<f64>() < policy.disjoint_fraction {
            (0..b.bands().len()).filter(at_gap).collect()
        } else {
            overlapping[ia].iter().copied().filter(at_gap).collect()
        };
        if cands.is_empty() {
            cands = overlapping[ia].clone();
        }
        if cands.is_empty() {
            cands = (0..b.bands().len()).collect();
        }
        let ib = cands[rng.gen_range(0..cands.len())];
        let band_b = &b.bands()[ib];

        let ka = rng.gen_range(0..band_a.len());
        let xa = band_a.location(band_a.k_of(ka));
        let s0 = band_a.scale.min(band_b.scale);
        let r = (0.3 / s0 * 10f64.powf(rng.gen_range(0.0..policy.offset_decades))).min(0.75);
        let dir = rng.gen_range(0.0..TAU);
        let target = [xa[0] + r * dir.cos(), xa[1] + r * dir.sin()];
        let [m1, m2] = band_b.lattice;
        let k1 = ((target[0] * m1 as f64).round() as i64).rem_euclid(m1 as i64) as usize;
        let k2 = ((target[1] * m2 as f64).round() as i64).rem_euclid(m2 as i64) as usize;
        let kb = k1 * m2 + k2;
        let xb = band_b.location(band_b.k_of(kb));

        let pa = band_a.start + ka;
        let pb = band_b.start + kb;
        let value = engine.inner(pa, pb);
        let d = torus_delta(xa, xb);
        let dtheta = angle_diff(band_a.angle, band_b.angle);
        let ratio = (band_a.scale / band_b.scale).max(band_b.scale / band_a.scale);
        let omega = ratio * (1.0 + periodic_d_alpha(alpha, s0, dtheta, band_a.angle, d));
        out.push(GramianSample {
            id,
            a: a.index(pa),
            b: b.index(pb),
            omega,
            magnitude: value.norm() / (norm_a[ia] * norm_b[ib]),
            raw: value.norm(),
            scale_a: band_a.scale,
            scale_b: band_b.scale,
            angle_gap: dtheta,
            offset: d[0].hypot(d[1]),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayConfig {
    pub slack: f64,
    pub bins_per_decade: u32,
    /// Allowed growth of `C` from the lower to the upper half of the range.
    pub stability_factor: f64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self { slack: 0.3, bins_per_decade: 4, stability_factor: 2.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub log10_omega: f64,
    pub log10_magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub target_exponent: f64,
    pub samples: usize,
    pub nonzero_samples: usize,
    pub omega_decades: f64,
    /// `max |<.,.>| omega^N` over all samples.
    pub constant: f64,
    pub constant_lower_half: f64,
    pub constant_upper_half: f64,
    pub envelope: Vec<EnvelopePoint>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    /// Envelope slope over the upper half of the `log omega` range only.
    /// Informational; not part of the verdict.
    pub tail_slope: f64,
    /// Bins whose maximum exceeds the previous bin's.
    pub inversions: usize,
    pub config: DecayConfig,
    pub pass: bool,
}

/// Least squares `y = a + b x`; returns `(b, a, stderr(b))`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return (0.0, my, f64::INFINITY);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let se = if x.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::INFINITY };
    (slope, intercept, se)
}

/// Fit the upper envelope of `log |<.,.>|` against `log omega`.
pub fn verify_decay(samples: &[GramianSample], n: f64, cfg: &DecayConfig) -> Result<DecayReport> {
    if samples.is_empty() {
        return Err(Error::Empty("gramian samples"));
    }
    if !(n > 0.0) {
        return Err(invalid("target exponent must be positive"));
    }
    let constant = samples.iter().map(|s| s.magnitude * s.omega.powf(n)).fold(0.0, f64::max);
    let logs: Vec<f64> = samples.iter().map(|s| s.omega.log10()).collect();
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let (mut c_lo, mut c_hi) = (0.0f64, 0.0f64);
    for (s, &lw) in samples.iter().zip(&logs) {
        let c = s.magnitude * s.omega.powf(n);
        if lw <= mid {
            c_lo = c_lo.max(c);
        } else {
            c_hi = c_hi.max(c);
        }
    }

    let width = 1.0 / cfg.bins_per_decade.max(1) as f64;
    let mut bins: Vec<Option<(f64, f64)>> = Vec::new();
    for (s, &lw) in samples.iter().zip(&logs) {
        if s.magnitude <= 0.0 {
            continue;
        }
        let i = ((lw - lo) / width).floor() as usize;
        if bins.len() <= i {
            bins.resize(i + 1, None);
        }
        let lm = s.magnitude.log10();
        match bins[i] {
            Some((_, m)) if m >= lm => {}
            _ => bins[i] = Some((lw, lm)),
        }
    }
    let envelope: Vec<EnvelopePoint> = bins
        .iter()
        .flatten()
        .map(|&(x, y)| EnvelopePoint { log10_omega: x, log10_magnitude: y })
        .collect();
    let inversions = envelope.windows(2).filter(|w| w[1].log10_magnitude > w[0].log10_magnitude).count();
    let nonzero = samples.iter().filter(|s| s.magnitude > 0.0).count();
    let tail: Vec<&EnvelopePoint> = envelope.iter().filter(|p| p.log10_omega > mid).collect();
    let tail_slope = if tail.len() >= 2 {
        let xs: Vec<f64> = tail.iter().map(|p| p.log10_omega).collect();
        let ys: Vec<f64> = tail.iter().map(|p| p.log10_magnitude).collect();
        linear_fit(&xs, &ys).0
    } else {
        f64::NAN
    };

    let (slope, intercept, se, pass) = if nonzero == 0 {
        (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0, true)
    } else if envelope.len() < 3 {
        let (s, i, e) = if envelope.len() == 2 {
            let xs: Vec<f64> = envelope.iter().map(|p| p.log10_omega).collect();
            let ys: Vec<f64> = envelope.iter().map(|p| p.log10_magnitude).collect();
            linear_fit(&xs, &ys)
        } else {
            (0.0, envelope[0].log10_magnitude, f64::INFINITY)
        };
        (s, i, e, false)
    } else {
        let xs: Vec<f64> = envelope.iter().map(|p| p.log10_omega).collect();
        let ys: Vec<f64> = envelope.iter().map(|p| p.log10_magnitude).collect();
        let (s, i, e) = linear_fit(&xs, &ys);
        let stable = c_hi <= cfg.stability_factor * c_lo;
        (s, i, e, s <= -n + cfg.slack && stable)
    };
    Ok(DecayReport {
        target_exponent: n,
        samples: samples.len(),
        nonzero_samples: nonzero,
        omega_decades: hi - lo,
        constant,
        constant_lower_half: c_lo,
        constant_upper_half: c_hi,
        envelope,
        slope,
        slope_stderr: se,
        intercept,
        tail_slope,
        inversions,
        config: *cfg,
        pass,
    })
}

/// `max{sup_rows sum |a|^q, sup_cols sum |a|^q}^(1/q)` with `q = min(1, p)`,
/// for a matrix given as `(row, col, |entry|)` triplets.
pub fn lp_crossnorm_bound(entries: &[(usize, usize, f64)], p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(invalid(format!("p must be positive, got {p}")));
    }
    let q = p.min(1.0);
    let mut rows: HashMap<usize, f64> = HashMap::new();
    let mut cols: HashMap<usize, f64> = HashMap::new();
    for &(r, c, v) in entries {
        let t = v.abs().powf(q);
        *rows.entry(r).or_default() += t;
        *cols.entry(c).or_default() += t;
    }
    let best = rows.values().chain(cols.values()).copied().fold(0.0, f64::max);
    Ok(best.powf(1.0 / q))
}

/// The bound of [`lp_crossnorm_bound`] for the full Gramian
/// `(<psi_lambda, p_mu>)` of two frames, restricted to bands with
/// `j <= max_scale`.
///
/// Each band pair contributes a kernel `K(x - y)` on the finer of the two
/// lattices; row and column sums of `|K|^q` over the partner lattice are
/// accumulated per element.
pub fn frame_lp_crossnorm_bound(a: &Frame, b: &Frame, p: f64, max_scale: Option<i32>) -> Result<f64> {
    if !(p > 0.0) {
        return Err(invalid(format!("p must be positive, got {p}")));
    }
    check_same_grid(a, b)?;
    let q = p.min(1.0);
    let keep = |band: &Band| max_scale.is_none_or(|m| band.j <= m);
    let mut row_sums: Vec<Vec<f64>> = a.bands().iter().map(|band| vec![0.0; band.len()]).collect();
    let mut col_sums: Vec<Vec<f64>> = b.bands().iter().map(|band| vec![0.0; band.len()]).collect();
    let mut fft = Fft2::new();
    for (ia, band_a) in a.bands().iter().enumerate().filter(|(_, band)| keep(band)) {
        for (ib, band_b) in b.bands().iter().enumerate().filter(|(_, band)| keep(band)) {
            let overlap = band_overlap(band_a, band_b);
            if overlap.is_empty() {
                continue;
            }
            let l1 = band_a.lattice[0].max(band_b.lattice[0]);
            let l2 = band_a.lattice[1].max(band_b.lattice[1]);
            // K(d) = n_a n_b sum w_a w_b e^{-2 pi i xi . d}, d on the (1/l1, 1/l2) grid
            let mut kernel = vec![Complex64::default(); l1 * l2];
            for &(x1, x2, w) in &overlap {
                let s = x1.rem_euclid(l1 as i64) as usize * l2 + x2.rem_euclid(l2 as i64) as usize;
                kernel[s] += w;
            }
            fft.transform(&mut kernel, l1, l2, false);
            let scale = band_a.norm * band_b.norm;
            let kq: Vec<f64> = kernel.iter().map(|v| (v.norm() * scale).powf(q)).collect();
            accumulate(&kq, [l1, l2], band_a.lattice, band_b.lattice, &mut row_sums[ia]);
            accumulate(&kq, [l1, l2], band_b.lattice, band_a.lattice, &mut col_sums[ib]);
        }
    }
    let best = row_sums
        .iter()
        .chain(col_sums.iter())
        .flatten()
        .copied()
        .fold(0.0, f64::max);
    Ok(best.powf(1.0 / q))
}

/// For every `x` on lattice `own`, add `sum_{y on other} kq(x - y)`, where
/// `kq` lives on the `grid` lattice (symmetric in the sign of the
/// argument since the windows are even).
fn accumulate(kq: &[f64], grid: [usize; 2], own: [usize; 2], other: [usize; 2], out: &mut [f64]) {
    let [l1, l2] = grid;
    // sums over the partner lattice depend only on x modulo that lattice
    let (c1, c2) = (l1 / other[0], l2 / other[1]);
    let mut coset = vec![0.0; c1 * c2];
    for r1 in 0..c1 {
        for r2 in 0..c2 {
            let mut s = 0.0;
            for a in 0..other[0] {
                for b in 0..other[1] {
                    let d1 = (r1 + a * c1) % l1;
                    let d2 = (r2 + b * c2) % l2;
                    s += kq[d1 * l2 + d2];
                }
            }
            coset[r1 * c2 + r2] = s;
        }
    }
    let (s1, s2) = (l1 / own[0], l2 / own[1]);
    for a in 0..own[0] {
        for b in 0..own[1] {
            let g1 = (a * s1) % c1;
            let g2 = (b * s2) % c2;
            out[a * own[1] + b] += coset[g1 * c2 + g2];
        }
    }
}

/// CSV with columns `omega,magnitude,jA,jB,angle_gap,offset`.
pub fn write_samples_csv<W: Write>(samples: &[GramianSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["omega", "magnitude", "jA", "jB", "angle_gap", "offset"])?;
    for s in samples {
        w.write_record([
            crate::fmt_f64(s.omega),
            crate::fmt_f64(s.magnitude),
            s.a.j.to_string(),
            s.b.j.to_string(),
            crate::fmt_f64(s.angle_gap),
            crate::fmt_f64(s.offset),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{build_curvelet_frame, build_shearlet_frame};
    use crate::grid::FrequencyGrid;
    use approx::assert_abs_diff_eq;

    fn frames() -> (Frame, Frame) {
        let g = FrequencyGrid::new(64).unwrap();
        (build_curvelet_frame(0.5, 8, g).unwrap(), build_shearlet_frame(2.0, 1.0, 8, g).unwrap())
    }

    fn full_grid(a: &Frame, pa: usize, b: &Frame, pb: usize) -> Complex64 {
        let sa = a.element_spectrum(pa);
        let sb = b.element_spectrum(pb);
        sa.iter().zip(&sb).map(|(x, y)| x * y.conj()).sum()
    }

    #[test]
    fn matches_full_grid_oracle() {
        let (c, s) = frames();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let pa = rng.gen_range(0..c.len());
            let pb = rng.gen_range(0..s.len());
            let fast = cross_inner_product(&c, pa, &s, pb).unwrap();
            let slow = full_grid(&c, pa, &s, pb);
            assert!((fast - slow).norm() < 1e-12, "{fast} {slow}");
            let back = cross_inner_product(&s, pb, &c, pa).unwrap();
            assert!((back - fast.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn self_product_is_norm() {
        let (c, _) = frames();
        for pos in [0, 17, c.len() / 2, c.len() - 1] {
            let v = cross_inner_product(&c, pos, &c, pos).unwrap();
            let band = &c.bands()[c.locate(pos).0];
            assert_abs_diff_eq!(v.re, band.element_norm2(), epsilon = 1e-12);
            assert!(v.im.abs() < 1e-13);
        }
    }

    #[test]
    fn disjoint_bands_give_zero() {
        let (c, _) = frames();
        let a = c.bands().iter().find(|b| b.j == 5).unwrap().start;
        let b = c.bands().iter().find(|b| b.j == 8).unwrap().start;
        assert_eq!(cross_inner_product(&c, a, &c, b).unwrap(), Complex64::default());
    }

    #[test]
    fn tight_frame_rows() {
        // sum_mu |<psi_lambda, psi_mu>|^2 = <S psi_lambda, psi_lambda>, which is
        // |psi_lambda|^2 when the symbol is one on its support
        let (c, _) = frames();
        let r = c.spec().covered_radius();
        let band = c
            .bands()
            .iter()
            .find(|b| b.j == 6 && b.freqs.iter().all(|x| ((x[0] * x[0] + x[1] * x[1]) as f64).sqrt() <= r))
            .unwrap();
        let pos = band.start + 3;
        let mut engine = GramianEngine::new(&c, &c).unwrap();
        let sum: f64 = (0..c.len()).map(|q| engine.inner(pos, q).norm_sqr()).sum();
        let n2 = band.element_norm2();
        assert!((sum - n2).abs() <= 1e-10 * n2, "{sum} {n2}");
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let (c, s) = frames();
        let policy = SamplerPolicy { count: 300, seed: 5, ..Default::default() };
        let x = sample_gramian(&c, &s, &policy).unwrap();
        let y = sample_gramian(&c, &s, &policy).unwrap();
        assert_eq!(x, y);
        assert!(x.iter().all(|s| s.omega >= 1.0 && s.magnitude <= 1.0 + 1e-12));
        let none = sample_gramian(&c, &s, &SamplerPolicy { count: 0, ..policy }).unwrap();
        assert!(none.is_empty());
    }

    fn sample(omega: f64, magnitude: f64) -> GramianSample {
        let idx = ParamIndex { eps: 0, j: 0, l: 0, k: [0, 0] };
        GramianSample {
            id: 0,
            a: idx,
            b: idx,
            omega,
            magnitude,
            raw: magnitude,
            scale_a: 1.0,
            scale_b: 1.0,
            angle_gap: 0.0,
            offset: 0.0,
        }
    }

    #[test]
    fn decay_examples() {
        let cfg = DecayConfig::default();
        let zeros: Vec<_> = (0..10).map(|i| sample(1.0 + i as f64, 0.0)).collect();
        let r = verify_decay(&zeros, 2.0, &cfg).unwrap();
        assert_eq!(r.constant, 0.0);
        assert!(r.pass);
        let r = verify_decay(&[sample(1.0, 1.0)], 2.0, &cfg).unwrap();
        assert_eq!(r.constant, 1.0);
        assert!(verify_decay(&[], 2.0, &cfg).is_err());
        let power: Vec<_> = (0..200)
            .map(|i| {
                let w = 10f64.powf(i as f64 * 0.02);
                sample(w, w.powf(-2.5))
            })
            .collect();
        let r = verify_decay(&power, 2.0, &cfg).unwrap();
        assert_abs_diff_eq!(r.slope, -2.5, epsilon = 1e-9);
        assert!(r.pass);
        let slow: Vec<_> = power.iter().map(|s| sample(s.omega, s.omega.powf(-1.0))).collect();
        assert!(!verify_decay(&slow, 2.0, &cfg).unwrap().pass);
    }

    #[test]
    fn crossnorm_examples() {
        assert_abs_diff_eq!(lp_crossnorm_bound(&[(0, 0, 1.0), (1, 1, 1.0)], 0.5).unwrap(), 1.0);
        let (a, b) = (0.3f64, 0.6f64);
        let q = 0.7;
        assert_abs_diff_eq!(
            lp_crossnorm_bound(&[(0, 0, a), (0, 1, b)], q).unwrap(),
            (a.powf(q) + b.powf(q)).powf(1.0 / q),
            epsilon = 1e-14
        );
        assert!(lp_crossnorm_bound(&[], 0.0).is_err());
    }

    #[test]
    fn structured_bound_matches_dense_bound() {
        let g = FrequencyGrid::new(32).unwrap();
        let c = build_curvelet_frame(0.5, 6, g).unwrap();
        let s = build_shearlet_frame(2.0, 1.0, 6, g).unwrap();
        let mut engine = GramianEngine::new(&c, &s).unwrap();
        let mut entries = Vec::new();
        for pa in 0..c.len() {
            for pb in 0..s.len() {
                let v = engine.inner(pa, pb).norm();
                if v > 0.0 {
                    entries.push((pa, pb, v));
                }
            }
        }
        for p in [0.75, 1.0] {
            let dense = lp_crossnorm_bound(&entries, p).unwrap();
            let fast = frame_lp_crossnorm_bound(&c, &s, p, None).unwrap();
            assert_abs_diff_eq!(dense, fast, epsilon = 1e-9 * dense);
        }
        let small = frame_lp_crossnorm_bound(&c, &s, 0.75, Some(5)).unwrap();
        assert!(small <= frame_lp_crossnorm_bound(&c, &s, 0.75, None).unwrap() + 1e-12);
    }
}
