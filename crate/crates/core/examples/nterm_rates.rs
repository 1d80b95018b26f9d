//! N-term approximation rates of curvelets, shearlets and wavelets on
//! seeded cartoon images, with the l^p transfer certificate from curvelet
//! to shearlet coefficients.
//!
//! cargo run --release --example nterm_rates -- [n] [seeds]

use std::time::Instant;

use alpha_molecules::approx::{dyadic_ladder, error_curve, smooth_bandlimit, transfer_certificate};
use alpha_molecules::cartoon::{generate_cartoon, CartoonSpec};
use alpha_molecules::frame::max_admissible_scales;
use alpha_molecules::gramian::frame_lp_crossnorm_bound;
use alpha_molecules::{FrameSpec, FrequencyGrid};

fn main() -> alpha_molecules::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(512);
    let seeds = args.get(1).copied().unwrap_or(3) as u64;
    let grid = FrequencyGrid::new(n)?;
    let start = Instant::now();

    let mut frames = Vec::new();
    for spec in [
        FrameSpec::Curvelet { alpha: 0.5, scales: 1 },
        FrameSpec::Shearlet { beta: 2.0, c: 1.0, scales: 1 },
        FrameSpec::Wavelet { sigma: 2.0, tau: 1.0, scales: 1 },
    ] {
        let spec = spec.with_scales(max_admissible_scales(&spec, grid));
        frames.push(spec.build(grid)?);
    }
    let radius = frames.iter().map(|f| f.spec().covered_radius()).fold(f64::INFINITY, f64::min);
    println!("frames built in {:.1?}; common radius {radius:.1}", start.elapsed());
    let bound = frame_lp_crossnorm_bound(&frames[0], &frames[1], 0.75, None)?;
    println!("curvelet/shearlet l^0.75 Gramian bound {bound:.4} ({:.1?})", start.elapsed());

    let ladder = dyadic_ladder(6, 14);
    for seed in 0..seeds {
        let cartoon = generate_cartoon(&CartoonSpec::random(2.0, seed)?, grid)?;
        let f = smooth_bandlimit(&cartoon, radius)?;
        print!("seed {seed}:");
        for frame in &frames {
            let curve = error_curve(frame, &f, &ladder)?;
            print!("  {} {:.3}", frame.spec().family(), curve.exponent);
        }
        let theta = frames[0].analyze(&f)?;
        let target = frames[1].analyze(&f)?;
        let cert = transfer_certificate(&theta, &target, bound, 0.75)?;
        println!("  transfer slack {:.3} ({:.1?})", cert.slack, start.elapsed());
    }
    Ok(())
}
