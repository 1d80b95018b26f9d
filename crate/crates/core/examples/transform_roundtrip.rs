//! Analyze a band-limited random image with each family, check the energy
//! ratio and reconstruct through the canonical dual.
//!
//! cargo run --release --example transform_roundtrip -- [n] [seed]

use alpha_molecules::frame::{estimate_frame_bounds, max_admissible_scales, random_bandlimited_image};
use alpha_molecules::{FrameSpec, FrequencyGrid};

fn main() -> alpha_molecules::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(256) as usize;
    let seed = args.get(1).copied().unwrap_or(0);
    let grid = FrequencyGrid::new(n)?;
    for spec in [
        FrameSpec::Curvelet { alpha: 0.0, scales: 0 },
        FrameSpec::Curvelet { alpha: 0.5, scales: 0 },
        FrameSpec::Curvelet { alpha: 1.0, scales: 0 },
        FrameSpec::Shearlet { beta: 2.0, c: 1.0, scales: 0 },
        FrameSpec::Wavelet { sigma: 2.0, tau: 1.0, scales: 0 },
    ] {
        let spec = spec.with_scales(max_admissible_scales(&spec, grid));
        let frame = spec.build(grid)?;
        let f = random_bandlimited_image(grid, spec.covered_radius(), seed);
        let c = frame.analyze(&f)?;
        let back = frame.reconstruct(&c)?;
        let rel = (f.sub(&back).norm2() / f.norm2()).sqrt();
        let (lo, hi) = estimate_frame_bounds(&frame, 8, seed)?;
        println!(
            "{:9} alpha {:.2}: energy ratio {:.6}, round trip {rel:.2e}, bounds [{lo:.3}, {hi:.3}]",
            spec.family(),
            spec.alpha(),
            c.energy() / f.norm2()
        );
    }
    Ok(())
}
