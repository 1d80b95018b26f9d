use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Frame;
use crate::error::{invalid, Result};
use crate::grid::{spectrum_norm2, Fft2, FrequencyGrid, Image};

/// Random real image of unit norm whose spectrum lives on `|xi| <= radius`.
pub fn random_bandlimited_image(grid: FrequencyGrid, radius: f64, seed: u64) -> Image {
    let n = grid.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = vec![Complex64::default(); n * n];
    let h = (radius.floor() as i64).min(grid.half() - 1);
    for x2 in -h..=h {
        for x1 in -h..=h {
            let xi = [x1, x2];
            // visit each pair {xi, -xi} once
            if (x2, x1) < (0, 0) || (x1 as f64).hypot(x2 as f64) > radius {
                continue;
            }
            let v = if x1 == 0 && x2 == 0 {
                Complex64::new(rng.gen_range(-1.0..1.0), 0.0)
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            spec[grid.offset(xi)] = v;
            spec[grid.offset([-x1, -x2])] = v.conj();
        }
    }
    let e = spectrum_norm2(&spec);
    if e > 0.0 {
        let s = 1.0 / e.sqrt();
        for v in &mut spec {
            *v *= s;
        }
    }
    Fft2::new().image_from_spectrum(n, &spec)
}

/// Smallest and largest `sum |c|^2` over `trials` random unit-norm images
/// band-limited to the covered disc.
pub fn estimate_frame_bounds(frame: &Frame, trials: usize, seed: u64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let radius = frame.spec().covered_radius();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for t in 0..trials {
        let f = random_bandlimited_image(frame.grid(), radius, seed.wrapping_add(t as u64));
        let norm = f.norm2();
        if norm == 0.0 {
            continue;
        }
        let e = frame.analyze(&f)?.energy() / norm;
        lo = lo.min(e);
        hi = hi.max(e);
    }
    Ok((lo, hi))
}

/// Solve `S g = rhs` by conjugate gradients, applying the frame operator
/// `S` as synthesis after analysis. Returns the solution spectrum and the
/// iteration count.
pub fn solve_frame_operator_cg(
    frame: &Frame,
    rhs: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<Complex64>, usize)> {
    let apply = |x: &[Complex64]| -> Result<Vec<Complex64>> {
        frame.synthesize_spectrum(&frame.analyze_spectrum(x)?)
    };
    let dot = |a: &[Complex64], b: &[Complex64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum()
    };
    let mut x = vec![Complex64::default(); rhs.len()];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let target = tol * tol * dot(rhs, rhs);
    let mut it = 0;
    while it < max_iter && rr > target {
        let ap = apply(&p)?;
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let a = rr / pap;
        for i in 0..x.len() {
            x[i] += p[i] * a;
            r[i] -= ap[i] * a;
        }
        let rr_new = dot(&r, &r);
        let b = rr_new / rr;
        for i in 0..p.len() {
            p[i] = r[i] + p[i] * b;
        }
        rr = rr_new;
        it += 1;
    }
    Ok((x, it))
}
