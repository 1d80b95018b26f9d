use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::grid::spectrum_norm2;

fn grid(n: usize) -> FrequencyGrid {
    FrequencyGrid::new(n).unwrap()
}

fn rel_err(a: &Image, b: &Image) -> f64 {
    (a.sub(b).norm2() / b.norm2()).sqrt()
}

#[test]
fn curvelet_parseval_and_roundtrip() {
    let g = grid(64);
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let frame = build_curvelet_frame(alpha, 8, g).unwrap();
        for seed in 0..3 {
            let f = random_bandlimited_image(g, frame.spec().covered_radius(), seed);
            let c = frame.analyze(&f).unwrap();
            assert_abs_diff_eq!(c.energy() / f.norm2(), 1.0, epsilon = 1e-10);
            let back = frame.synthesize(&c).unwrap();
            assert!(rel_err(&back, &f) < 1e-10);
            let dual = frame.reconstruct(&c).unwrap();
            assert!(rel_err(&dual, &f) < 1e-10);
        }
    }
}

#[test]
fn angle_counts_follow_alpha() {
    let g = grid(128);
    let count = |alpha: f64, j: i32| {
        build_curvelet_frame(alpha, 9, g).unwrap().bands().iter().filter(|b| b.j == j).count()
    };
    for j in 6..=9 {
        assert_eq!(count(1.0, j), 1);
        assert_eq!(count(0.5, j), 1 << (j / 2));
        // thin ridgelet wedges can miss every lattice point at this size
        assert!(count(0.0, j) <= 1 << j);
    }
}

#[test]
fn band_supports_avoid_small_squares() {
    let frame = build_curvelet_frame(0.5, 9, grid(128)).unwrap();
    for b in frame.bands().iter().filter(|b| b.j >= 1) {
        let edge = 2f64.powi(b.j - 7);
        assert!(b.freqs.iter().all(|xi| xi[0].abs().max(xi[1].abs()) as f64 > edge));
    }
}

#[test]
fn too_many_scales_reports_maximum() {
    let err = build_curvelet_frame(0.5, 11, grid(256)).unwrap_err();
    match err {
        Error::ScaleTooLarge { requested, max } => {
            assert_eq!(requested, 11);
            assert_eq!(max, 10);
        }
        e => panic!("unexpected {e}"),
    }
    assert!(build_curvelet_frame(0.5, 10, grid(256)).is_ok());
    assert!(build_curvelet_frame(1.5, 4, grid(64)).is_err());
}

#[test]
fn element_coefficient_two_ways() {
    let g = grid(64);
    let frame = build_curvelet_frame(0.5, 7, g).unwrap();
    let band = frame.bands().iter().find(|b| b.j == 6 && b.l == 1).unwrap();
    let pos = band.start + 5;
    let e = frame.element_image(pos);
    let quad = e.norm2();
    let freq = band.element_norm2();
    assert_abs_diff_eq!(quad, freq, epsilon = 1e-12 * freq.max(1.0));
    let c = frame.analyze(&e).unwrap();
    assert_abs_diff_eq!(c.values()[pos].re, freq, epsilon = 1e-10 * freq);
    assert!(c.values()[pos].im.abs() < 1e-12);
}

#[test]
fn linearity_adjointness_and_real_coefficients() {
    let g = grid(64);
    let specs = [
        FrameSpec::Curvelet { alpha: 0.5, scales: 8 },
        FrameSpec::Shearlet { beta: 2.0, c: 1.0, scales: 8 },
        FrameSpec::Wavelet { sigma: 2.0, tau: 1.0, scales: 8 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in specs {
        let frame = spec.build(g).unwrap();
        let f = Image::from_fn(64, |x, y| (x * 7.0).sin() + (y * 3.0 + x).cos() * x);
        let h = random_bandlimited_image(g, 20.0, 3);
        let (a, b) = (0.7, -1.3);
        let mut combo = f.clone();
        for (v, w) in combo.data_mut().iter_mut().zip(h.data()) {
            *v = a * *v + b * w;
        }
        let cf = frame.analyze(&f).unwrap();
        let ch = frame.analyze(&h).unwrap();
        let cc = frame.analyze(&combo).unwrap();
        for i in 0..cc.len() {
            let lin = cf.values()[i] * a + ch.values()[i] * b;
            assert!((cc.values()[i] - lin).norm() < 1e-12);
            assert!(cf.values()[i].im.abs() < 1e-10, "{} imag", spec.family());
        }
        let mut c = CoefficientSet::zeros(&frame);
        for v in c.values_mut() {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let mut fft = Fft2::new();
        let fs = fft.spectrum(&f);
        let lhs = cf.inner(&c);
        let syn = frame.synthesize_spectrum(&c).unwrap();
        let rhs: Complex64 = fs.iter().zip(&syn).map(|(x, y)| x * y.conj()).sum();
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()), "{lhs} {rhs}");
    }
}

#[test]
fn zero_image_and_zero_coefficients() {
    let g = grid(32);
    let frame = build_curvelet_frame(0.5, 6, g).unwrap();
    let c = frame.analyze(&Image::zeros(32)).unwrap();
    assert!(c.values().iter().all(|v| *v == Complex64::default()));
    let img = frame.synthesize(&CoefficientSet::zeros(&frame)).unwrap();
    assert!(img.data().iter().all(|&v| v == 0.0));
    assert!(matches!(frame.analyze(&Image::zeros(64)), Err(Error::GridMismatch { .. })));
    let other = build_curvelet_frame(0.25, 6, g).unwrap();
    assert!(matches!(other.synthesize(&c), Err(Error::KeyMismatch(_))));
}

#[test]
fn frame_bound_estimates() {
    let g = grid(64);
    let cur = build_curvelet_frame(0.5, 8, g).unwrap();
    let (a, b) = estimate_frame_bounds(&cur, 4, 1).unwrap();
    assert!(a >= 0.98 && b <= 1.02 && a <= b);
    let wav = build_wavelet_frame(2.0, 1.0, 8, g).unwrap();
    let (a, b) = estimate_frame_bounds(&wav, 4, 1).unwrap();
    assert!(a / b >= 0.9, "{a} {b}");
    let sh = build_shearlet_frame(2.0, 1.0, 8, g).unwrap();
    let (a, b) = estimate_frame_bounds(&sh, 4, 1).unwrap();
    assert!(a > 0.5 && b < 3.0 && a <= b, "{a} {b}");
}

#[test]
fn separable_symbols_on_covered_square() {
    let g = grid(64);
    let wav = build_wavelet_frame(2.0, 1.0, 8, g).unwrap();
    let sh = build_shearlet_frame(2.0, 1.0, 8, g).unwrap();
    let r = wav.spec().covered_radius();
    for row in 0..64 {
        for col in 0..64 {
            let xi = [g.freq(col) as f64, g.freq(row) as f64];
            if xi[0].abs().max(xi[1].abs()) <= r {
                assert_abs_diff_eq!(wav.symbol()[row * 64 + col], 1.0, epsilon = 1e-12);
                let s = sh.symbol()[row * 64 + col];
                assert!((0.5..=3.0).contains(&s), "{xi:?} {s}");
            }
        }
    }
}

#[test]
fn shearlet_cones_are_transposes() {
    let frame = build_shearlet_frame(2.0, 1.0, 8, grid(64)).unwrap();
    for h in frame.bands().iter().filter(|b| b.eps == 0 && b.j >= 0) {
        let v = frame
            .bands()
            .iter()
            .find(|b| b.eps == 1 && b.j == h.j && b.l == -h.l)
            .unwrap();
        let mut hv: Vec<([i64; 2], u64)> = h.freqs.iter().zip(&h.values).map(|(x, w)| ([x[1], x[0]], w.to_bits())).collect();
        let mut vv: Vec<([i64; 2], u64)> = v.freqs.iter().zip(&v.values).map(|(x, w)| (*x, w.to_bits())).collect();
        hv.sort();
        vv.sort();
        assert_eq!(hv, vv);
        let theta = crate::param::reduce_angle(std::f64::consts::FRAC_PI_2 - h.angle).unwrap();
        assert_abs_diff_eq!(crate::param::angle_diff(theta, v.angle), 0.0, epsilon = 1e-12);
    }
}

#[test]
fn shearlet_roundtrip_by_cg() {
    let g = grid(64);
    let frame = build_shearlet_frame(2.0, 1.0, 8, g).unwrap();
    let f = random_bandlimited_image(g, frame.spec().covered_radius(), 11);
    let c = frame.analyze(&f).unwrap();
    let rhs = frame.synthesize_spectrum(&c).unwrap();
    let (sol, _) = solve_frame_operator_cg(&frame, &rhs, 1e-8, 200).unwrap();
    let back = Fft2::new().image_from_spectrum(64, &sol);
    assert!(rel_err(&back, &f) < 5e-2);
    let direct = frame.reconstruct(&c).unwrap();
    assert!(rel_err(&direct, &f) < 1e-10);
    assert!(rel_err(&direct, &back) < 5e-2);
}

#[test]
fn wavelet_structure() {
    let frame = build_wavelet_frame(2.0, 1.0, 8, grid(64)).unwrap();
    assert!(frame.bands().iter().filter(|b| b.eps == 0).all(|b| b.j == 0));
    for j in 4..=8 {
        let types: Vec<i32> = frame.bands().iter().filter(|b| b.j == j).map(|b| b.eps).collect();
        assert_eq!(types, vec![1, 2, 3]);
    }
    assert!(frame.bands().iter().all(|b| b.angle == 0.0));
}

#[test]
fn lattice_wraps_injectively() {
    let frame = build_curvelet_frame(0.5, 8, grid(64)).unwrap();
    for b in frame.bands() {
        let mut slots: Vec<usize> = b.freqs.iter().map(|&xi| b.slot(xi)).collect();
        slots.sort();
        slots.dedup();
        assert_eq!(slots.len(), b.freqs.len());
        assert!(b.len() >= b.freqs.len());
    }
}

#[test]
fn index_positions_roundtrip() {
    let frame = build_curvelet_frame(0.5, 7, grid(64)).unwrap();
    for pos in (0..frame.len()).step_by(37) {
        assert_eq!(frame.position(&frame.index(pos)), Some(pos));
    }
    let spec = frame.element_spectrum(100);
    assert_abs_diff_eq!(
        spectrum_norm2(&spec),
        frame.bands()[frame.locate(100).0].element_norm2(),
        epsilon = 1e-14
    );
}

#[test]
fn coefficient_csv_roundtrip() {
    let frame = build_wavelet_frame(2.0, 1.0, 7, grid(64)).unwrap();
    assert!(frame.len() > 100);
    let f = random_bandlimited_image(grid(64), frame.spec().covered_radius(), 4);
    let c = frame.analyze(&f).unwrap();
    let mut buf = Vec::new();
    c.write_csv(&frame, &mut buf).unwrap();
    let back = CoefficientSet::read_csv(&frame, buf.as_slice()).unwrap();
    assert_eq!(back, c);

    let text = String::from_utf8(buf).unwrap();
    let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
    let err = CoefficientSet::read_csv(&frame, truncated.as_bytes());
    assert!(matches!(err, Err(Error::KeyMismatch(_))), "{err:?}");
    let other = build_curvelet_frame(0.5, 7, grid(64)).unwrap();
    assert!(CoefficientSet::read_csv(&other, text.as_bytes()).is_err());
}
