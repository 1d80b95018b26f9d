//! Periodic pixel grids on the unit torus, their DFTs, and the raw image
//! container.
//!
//! An image of side `n` stores `f(col / n, row / n)` at `data[row * n + col]`,
//! so the first coordinate `x1` runs along columns. Fourier coefficients are
//! normalized as `f_hat = DFT(f) / n^2`, which makes
//! `<f, g> = sum_xi f_hat(xi) conj(g_hat(xi))` equal to the pixel mean of
//! `f conj(g)`, the quadrature of the integral over the torus.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    n: usize,
}

impl FrequencyGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(invalid(format!("grid side must be a power of two >= 4, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half(&self) -> i64 {
        (self.n / 2) as i64
    }

    /// Signed frequency stored at FFT position `i`.
    #[inline]
    pub fn freq(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// FFT position of signed frequency `k`.
    #[inline]
    pub fn pos(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Flat spectrum offset of `xi = (xi1, xi2)`; `xi1` pairs with columns.
    #[inline]
    pub fn offset(&self, xi: [i64; 2]) -> usize {
        self.pos(xi[1]) * self.n + self.pos(xi[0])
    }

    /// Frequencies that are representable without aliasing ambiguity.
    #[inline]
    pub fn in_band(&self, xi: [i64; 2]) -> bool {
        let h = self.half();
        xi[0].abs() < h && xi[1].abs() < h
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    n: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(invalid(format!("image of side {n} needs {} values, got {}", n * n, data.len())));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("image values"));
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let h = 1.0 / n as f64;
        let mut data = Vec::with_capacity(n * n);
        for row in 0..n {
            for col in 0..n {
                data.push(f(col as f64 * h, row as f64 * h));
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    /// Squared L2 norm on the unit torus (pixel mean of `f^2`).
    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>() / self.data.len() as f64
    }

    pub fn inner(&self, other: &Image) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum::<f64>() / self.data.len() as f64
    }

    pub fn sub(&self, other: &Image) -> Image {
        Image {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// 2-D FFTs with plan reuse.
pub struct Fft2 {
    planner: FftPlanner<f64>,
}

impl Default for Fft2 {
    fn default() -> Self {
        Self::new()
    }
}

impl Fft2 {
    pub fn new() -> Self {
        Self { planner: FftPlanner::new() }
    }

    fn plan(&mut self, len: usize, inverse: bool) -> std::sync::Arc<dyn Fft<f64>> {
        if inverse {
            self.planner.plan_fft_inverse(len)
        } else {
            self.planner.plan_fft_forward(len)
        }
    }

    /// Unnormalized in-place transform of a row-major `rows x cols` array.
    /// Forward uses `exp(-2 pi i ...)`, inverse `exp(+2 pi i ...)`.
    pub fn transform(&mut self, data: &mut [Complex64], rows: usize, cols: usize, inverse: bool) {
        debug_assert_eq!(data.len(), rows * cols);
        if cols > 1 {
            let p = self.plan(cols, inverse);
            p.process(data);
        }
        if rows > 1 {
            let p = self.plan(rows, inverse);
            let mut column = vec![Complex64::default(); rows];
            for c in 0..cols {
                for r in 0..rows {
                    column[r] = data[r * cols + c];
                }
                p.process(&mut column);
                for r in 0..rows {
                    data[r * cols + c] = column[r];
                }
            }
        }
    }

    /// Normalized spectrum `DFT(f) / n^2` in FFT order.
    pub fn spectrum(&mut self, img: &Image) -> Vec<Complex64> {
        let n = img.n;
        let mut buf: Vec<Complex64> = img.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut buf, n, n, false);
        let scale = 1.0 / (n * n) as f64;
        for v in &mut buf {
            *v *= scale;
        }
        buf
    }

    /// Inverse of [`Fft2::spectrum`], keeping the real part.
    pub fn image_from_spectrum(&mut self, n: usize, spec: &[Complex64]) -> Image {
        let mut buf = spec.to_vec();
        self.transform(&mut buf, n, n, true);
        Image { n, data: buf.iter().map(|v| v.re).collect() }
    }

    /// Inverse of [`Fft2::spectrum`] keeping the complex values.
    pub fn complex_from_spectrum(&mut self, n: usize, spec: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spec.to_vec();
        self.transform(&mut buf, n, n, true);
        buf
    }
}

/// `sum_xi |f_hat(xi)|^2`.
pub fn spectrum_norm2(spec: &[Complex64]) -> f64 {
    spec.iter().map(|v| v.norm_sqr()).sum()
}

#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    n: usize,
    domain: String,
    dtype: String,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Write `path` (raw little-endian f64, row-major) and `path.json`.
pub fn write_image(path: &Path, img: &Image) -> Result<Vec<PathBuf>> {
    let mut bytes = Vec::with_capacity(img.data.len() * 8);
    for v in &img.data {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    write_atomic(path, &bytes)?;
    let side = sidecar_path(path);
    let meta = Sidecar { n: img.n, domain: "unit-torus".into(), dtype: "f64le".into() };
    write_atomic(&side, serde_json::to_string_pretty(&meta)?.as_bytes())?;
    Ok(vec![path.to_path_buf(), side])
}

pub fn read_image(path: &Path) -> Result<Image> {
    let side = sidecar_path(path);
    let meta: Sidecar = serde_json::from_slice(&fs::read(&side)?)
        .map_err(|e| Error::BadContainer(format!("{}: {e}", side.display())))?;
    if meta.domain != "unit-torus" || meta.dtype != "f64le" {
        return Err(Error::BadContainer(format!(
            "unsupported domain/dtype {}/{}",
            meta.domain, meta.dtype
        )));
    }
    let bytes = fs::read(path)?;
    if bytes.len() != meta.n * meta.n * 8 {
        return Err(Error::BadContainer(format!(
            "expected {} bytes for n = {}, found {}",
            meta.n * meta.n * 8,
            meta.n,
            bytes.len()
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Image::from_vec(meta.n, data)
}

/// Write through a temporary sibling and rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
