//! Build the three frame families on one grid and print how coefficients
//! and angular resolution are spread over the scales.
//!
//! cargo run --release --example build_frame -- [n]

use alpha_molecules::frame::max_admissible_scales;
use alpha_molecules::param::angular_level;
use alpha_molecules::{FrameSpec, FrequencyGrid};

fn main() -> alpha_molecules::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(256);
    let grid = FrequencyGrid::new(n)?;
    for spec in [
        FrameSpec::Curvelet { alpha: 0.5, scales: 0 },
        FrameSpec::Shearlet { beta: 2.0, c: 1.0, scales: 0 },
        FrameSpec::Wavelet { sigma: 2.0, tau: 1.0, scales: 0 },
    ] {
        let spec = spec.with_scales(max_admissible_scales(&spec, grid));
        let frame = spec.build(grid)?;
        println!(
            "{} J = {}: {} coefficients, covered radius {:.1}",
            spec.family(),
            spec.scales(),
            frame.len(),
            spec.covered_radius()
        );
        let mut j = i32::MIN;
        for band in frame.bands() {
            if band.j == j {
                continue;
            }
            j = band.j;
            let at_j: Vec<_> = frame.bands().iter().filter(|b| b.j == j).collect();
            let coeffs: usize = at_j.iter().map(|b| b.len()).sum();
            print!("  j {j:3}: {:4} classes, {coeffs:7} coefficients", at_j.len());
            if let FrameSpec::Curvelet { alpha, .. } = spec {
                print!(", L_j = {}", 1u64 << angular_level(j, alpha));
            }
            println!();
        }
    }
    Ok(())
}
