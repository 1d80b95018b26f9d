//! Band-limited frames on a periodic grid: construction, analysis and
//! synthesis.
//!
//! Every frame is a list of bands. A band is one `(eps, j, l)` class: a real,
//! even Fourier window `w` sampled on its support plus a translation lattice
//! `x = (a / M1, b / M2)`. The lattice is the smallest power-of-two box for
//! which reduction of the support modulo `(M1, M2)` is injective, which makes
//!
//! ```text
//! c_{a,b} = n sum_xi f_hat(xi) w(xi) exp(2 pi i xi . x_{a,b}),   n = (M1 M2)^(-1/2)
//! ```
//!
//! a single inverse FFT of size `M1 x M2` and gives
//! `sum_{a,b} |c_{a,b}|^2 = sum_xi |f_hat(xi) w(xi)|^2` exactly. The frame
//! operator is therefore the Fourier multiplier `sum_bands w^2`.

mod bounds;
mod build;
mod coeffs;

pub use bounds::{estimate_frame_bounds, random_bandlimited_image, solve_frame_operator_cg};
pub use build::{build_curvelet_frame, build_shearlet_frame, build_wavelet_frame, max_admissible_scales};
pub use coeffs::CoefficientSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{Fft2, FrequencyGrid, Image};
use crate::param::{
    CurveletParametrization, ParamIndex, ParamPoint, Parametrization, ShearletParametrization,
    WaveletParametrization,
};

/// Frame family and its construction parameters; `scales` is the finest
/// scale index `J`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FrameSpec {
    Curvelet { alpha: f64, scales: u32 },
    Shearlet { beta: f64, c: f64, scales: u32 },
    Wavelet { sigma: f64, tau: f64, scales: u32 },
}

impl FrameSpec {
    pub fn family(&self) -> &'static str {
        match self {
            FrameSpec::Curvelet { .. } => "curvelet",
            FrameSpec::Shearlet { .. } => "shearlet",
            FrameSpec::Wavelet { .. } => "wavelet",
        }
    }

    pub fn scales(&self) -> u32 {
        match *self {
            FrameSpec::Curvelet { scales, .. }
            | FrameSpec::Shearlet { scales, .. }
            | FrameSpec::Wavelet { scales, .. } => scales,
        }
    }

    pub fn with_scales(self, j: u32) -> Self {
        match self {
            FrameSpec::Curvelet { alpha, .. } => FrameSpec::Curvelet { alpha, scales: j },
            FrameSpec::Shearlet { beta, c, .. } => FrameSpec::Shearlet { beta, c, scales: j },
            FrameSpec::Wavelet { sigma, tau, .. } => FrameSpec::Wavelet { sigma, tau, scales: j },
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            FrameSpec::Curvelet { alpha, .. } => alpha,
            FrameSpec::Shearlet { beta, .. } => 1.0 / beta,
            FrameSpec::Wavelet { .. } => 1.0,
        }
    }

    pub fn parametrization(&self) -> Result<Parametrization> {
        Ok(match *self {
            FrameSpec::Curvelet { alpha, .. } => {
                Parametrization::Curvelet(CurveletParametrization::new(alpha, 2.0, 1.0)?)
            }
            FrameSpec::Shearlet { beta, c, .. } => {
                Parametrization::Shearlet(ShearletParametrization::for_beta(beta, c)?)
            }
            FrameSpec::Wavelet { sigma, tau, .. } => {
                Parametrization::Wavelet(WaveletParametrization::new(sigma, tau)?)
            }
        })
    }

    pub fn build(&self, grid: FrequencyGrid) -> Result<Frame> {
        match *self {
            FrameSpec::Curvelet { alpha, scales } => build_curvelet_frame(alpha, scales, grid),
            FrameSpec::Shearlet { beta, c, scales } => build_shearlet_frame(beta, c, scales, grid),
            FrameSpec::Wavelet { sigma, tau, scales } => build_wavelet_frame(sigma, tau, scales, grid),
        }
    }

    /// Continuous Fourier window of class `(eps, j, l)`, without lattice
    /// normalization.
    pub fn window(&self, eps: i32, j: i32, l: i64, xi: [f64; 2]) -> f64 {
        build::window(self, eps, j, l, xi)
    }

    /// Radius of the centred disc on which the frame operator equals the
    /// untruncated one (identity for the tight families).
    pub fn covered_radius(&self) -> f64 {
        build::covered_radius(self)
    }
}

/// One `(eps, j, l)` class sampled on the grid.
#[derive(Clone, Debug)]
pub struct Band {
    pub eps: i32,
    pub j: i32,
    pub l: i64,
    pub scale: f64,
    pub angle: f64,
    /// Support frequencies, sorted by flat spectrum offset.
    pub freqs: Vec<[i64; 2]>,
    pub offsets: Vec<usize>,
    pub values: Vec<f64>,
    /// Translation lattice `(M1, M2)`.
    pub lattice: [usize; 2],
    pub norm: f64,
    /// Position of this band's first coefficient in the flat layout.
    pub start: usize,
}

impl Band {
    pub fn len(&self) -> usize {
        self.lattice[0] * self.lattice[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lattice coordinates of the `i`-th coefficient of the band.
    pub fn k_of(&self, i: usize) -> [i64; 2] {
        [(i / self.lattice[1]) as i64, (i % self.lattice[1]) as i64]
    }

    pub fn location(&self, k: [i64; 2]) -> [f64; 2] {
        [k[0] as f64 / self.lattice[0] as f64, k[1] as f64 / self.lattice[1] as f64]
    }

    /// Squared norm of every element of the band.
    pub fn element_norm2(&self) -> f64 {
        self.norm * self.norm * self.values.iter().map(|w| w * w).sum::<f64>()
    }

    fn slot(&self, xi: [i64; 2]) -> usize {
        let a = xi[0].rem_euclid(self.lattice[0] as i64) as usize;
        let b = xi[1].rem_euclid(self.lattice[1] as i64) as usize;
        a * self.lattice[1] + b
    }
}

#[derive(Clone, Debug)]
pub struct Frame {
    spec: FrameSpec,
    grid: FrequencyGrid,
    bands: Vec<Band>,
    total: usize,
    symbol: Vec<f64>,
    dual_floor: f64,
}

impl Frame {
    pub(crate) fn from_bands(spec: FrameSpec, grid: FrequencyGrid, mut bands: Vec<Band>) -> Self {
        let n = grid.n();
        let mut symbol = vec![0.0; n * n];
        let mut start = 0;
        for b in &mut bands {
            b.start = start;
            start += b.len();
            for (&o, &w) in b.offsets.iter().zip(&b.values) {
                symbol[o] += w * w;
            }
        }
        // smallest symbol value where the system is a frame
        let r = spec.covered_radius();
        let mut dual_floor = f64::INFINITY;
        for row in 0..n {
            for col in 0..n {
                if (grid.freq(col) as f64).hypot(grid.freq(row) as f64) <= r {
                    dual_floor = dual_floor.min(symbol[row * n + col]);
                }
            }
        }
        if !(dual_floor > 0.0 && dual_floor.is_finite()) {
            dual_floor = 1e-10 * symbol.iter().copied().fold(0.0, f64::max);
        }
        Self { spec, grid, bands, total: start, symbol, dual_floor }
    }

    pub fn spec(&self) -> &FrameSpec {
        &self.spec
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Symbol of the frame operator, `sum_bands w(xi)^2`, in FFT order.
    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    /// Band holding flat coefficient position `pos` and the offset inside it.
    pub fn locate(&self, pos: usize) -> (usize, usize) {
        let b = self.bands.partition_point(|b| b.start + b.len() <= pos);
        (b, pos - self.bands[b].start)
    }

    pub fn index(&self, pos: usize) -> ParamIndex {
        let (b, i) = self.locate(pos);
        let band = &self.bands[b];
        ParamIndex { eps: band.eps, j: band.j, l: band.l, k: band.k_of(i) }
    }

    pub fn point(&self, pos: usize) -> ParamPoint {
        let (b, i) = self.locate(pos);
        let band = &self.bands[b];
        ParamPoint { scale: band.scale, angle: band.angle, location: band.location(band.k_of(i)) }
    }

    fn check_image(&self, f: &Image) -> Result<()> {
        if f.n() != self.grid.n() {
            return Err(Error::GridMismatch { expected: self.grid.n(), found: f.n() });
        }
        Ok(())
    }

    pub fn analyze(&self, f: &Image) -> Result<CoefficientSet> {
        self.check_image(f)?;
        let mut fft = Fft2::new();
        let spec = fft.spectrum(f);
        Ok(self.analyze_spectrum_with(&mut fft, &spec))
    }

    /// Analysis of a function given by its normalized spectrum.
    pub fn analyze_spectrum(&self, spec: &[Complex64]) -> Result<CoefficientSet> {
        let n = self.grid.n();
        if spec.len() != n * n {
            return Err(invalid(format!("spectrum length {} does not match grid {n}", spec.len())));
        }
        Ok(self.analyze_spectrum_with(&mut Fft2::new(), spec))
    }

    fn analyze_spectrum_with(&self, fft: &mut Fft2, spec: &[Complex64]) -> CoefficientSet {
        let mut values = vec![Complex64::default(); self.total];
        for band in &self.bands {
            let out = &mut values[band.start..band.start + band.len()];
            for ((&xi, &o), &w) in band.freqs.iter().zip(&band.offsets).zip(&band.values) {
                out[band.slot(xi)] = spec[o] * w;
            }
            fft.transform(out, band.lattice[0], band.lattice[1], true);
            for v in out.iter_mut() {
                *v *= band.norm;
            }
        }
        CoefficientSet::new(self.spec, self.grid.n(), values)
    }

    /// `sum_lambda c_lambda psi_lambda` as a normalized spectrum.
    pub fn synthesize_spectrum(&self, coeffs: &CoefficientSet) -> Result<Vec<Complex64>> {
        self.check_coeffs(coeffs)?;
        let n = self.grid.n();
        let mut spec = vec![Complex64::default(); n * n];
        let mut fft = Fft2::new();
        let mut buf = Vec::new();
        for band in &self.bands {
            buf.clear();
            buf.extend_from_slice(&coeffs.values()[band.start..band.start + band.len()]);
            fft.transform(&mut buf, band.lattice[0], band.lattice[1], false);
            for ((&xi, &o), &w) in band.freqs.iter().zip(&band.offsets).zip(&band.values) {
                spec[o] += buf[band.slot(xi)] * (band.norm * w);
            }
        }
        Ok(spec)
    }

    /// Synthesis `sum_lambda c_lambda psi_lambda` (real part).
    pub fn synthesize(&self, coeffs: &CoefficientSet) -> Result<Image> {
        let spec = self.synthesize_spectrum(coeffs)?;
        Ok(Fft2::new().image_from_spectrum(self.grid.n(), &spec))
    }

    /// Reconstruction with the canonical dual: synthesis followed by
    /// division by the frame-operator symbol. Past the covered disc the
    /// truncated system stops being a frame and the symbol tends to zero,
    /// so the divisor is floored at the smallest symbol value on that disc.
    /// For tight frames this is plain synthesis.
    pub fn reconstruct_spectrum(&self, coeffs: &CoefficientSet) -> Result<Vec<Complex64>> {
        let mut spec = self.synthesize_spectrum(coeffs)?;
        for (v, &s) in spec.iter_mut().zip(&self.symbol) {
            *v /= s.max(self.dual_floor);
        }
        Ok(spec)
    }

    pub fn reconstruct(&self, coeffs: &CoefficientSet) -> Result<Image> {
        let spec = self.reconstruct_spectrum(coeffs)?;
        Ok(Fft2::new().image_from_spectrum(self.grid.n(), &spec))
    }

    fn check_coeffs(&self, c: &CoefficientSet) -> Result<()> {
        if c.frame() != &self.spec || c.grid_n() != self.grid.n() || c.len() != self.total {
            return Err(Error::KeyMismatch(format!(
                "coefficients of {} frame on {}^2 grid ({} values) vs {} frame on {}^2 grid ({} values)",
                c.frame().family(),
                c.grid_n(),
                c.len(),
                self.spec.family(),
                self.grid.n(),
                self.total
            )));
        }
        Ok(())
    }

    /// Spectral energy the frame does not see at full strength: the part
    /// of `f_hat` outside the covered disc.
    pub fn uncovered_energy(&self, spec: &[Complex64]) -> f64 {
        let r = self.spec.covered_radius();
        let n = self.grid.n();
        let mut e = 0.0;
        for row in 0..n {
            for col in 0..n {
                let xi = [self.grid.freq(col) as f64, self.grid.freq(row) as f64];
                if xi[0].hypot(xi[1]) > r {
                    e += spec[row * n + col].norm_sqr();
                }
            }
        }
        e
    }

    /// Full-grid spectrum of the element at flat position `pos`.
    pub fn element_spectrum(&self, pos: usize) -> Vec<Complex64> {
        let (b, i) = self.locate(pos);
        let band = &self.bands[b];
        let x = band.location(band.k_of(i));
        let n = self.grid.n();
        let mut spec = vec![Complex64::default(); n * n];
        for ((&xi, &o), &w) in band.freqs.iter().zip(&band.offsets).zip(&band.values) {
            let phase = -2.0 * std::f64::consts::PI * (xi[0] as f64 * x[0] + xi[1] as f64 * x[1]);
            spec[o] = Complex64::from_polar(band.norm * w, phase);
        }
        spec
    }

    /// Real part of the element at flat position `pos`, sampled on the grid.
    pub fn element_image(&self, pos: usize) -> Image {
        Fft2::new().image_from_spectrum(self.grid.n(), &self.element_spectrum(pos))
    }

    /// Flat position of the coefficient with the given index.
    pub fn position(&self, idx: &ParamIndex) -> Option<usize> {
        let band = self.bands.iter().find(|b| b.eps == idx.eps && b.j == idx.j && b.l == idx.l)?;
        let [a, b] = idx.k;
        if a < 0 || b < 0 || a as usize >= band.lattice[0] || b as usize >= band.lattice[1] {
            return None;
        }
        Some(band.start + a as usize * band.lattice[1] + b as usize)
    }
}

#[cfg(test)]
mod tests;
