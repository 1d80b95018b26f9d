//! Sample the cross-Gramian between parabolic curvelets and band-limited
//! shearlets and fit the decay of its upper envelope against the index
//! distance.
//!
//! cargo run --release --example gramian_decay -- [n] [scales] [pairs] [min_scale]

use alpha_molecules::frame::{build_curvelet_frame, build_shearlet_frame};
use alpha_molecules::gramian::{sample_gramian, verify_decay, DecayConfig, SamplerPolicy};
use alpha_molecules::FrequencyGrid;

fn main() -> alpha_molecules::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(256);
    let scales = args.get(1).copied().unwrap_or(6) as u32;
    let count = args.get(2).copied().unwrap_or(10_000);

    let grid = FrequencyGrid::new(n)?;
    let curvelets = build_curvelet_frame(0.5, scales, grid)?;
    let shearlets = build_shearlet_frame(2.0, 1.0, scales, grid)?;
    let min_scale = args.get(3).copied().unwrap_or(0) as i32;
    let policy = SamplerPolicy { count, seed: 1, min_scale, ..Default::default() };
    let samples = sample_gramian(&curvelets, &shearlets, &policy)?;
    let report = verify_decay(&samples, 2.0, &DecayConfig::default())?;

    println!("pairs {} (nonzero {})", report.samples, report.nonzero_samples);
    println!("omega spans {:.2} decades", report.omega_decades);
    for p in &report.envelope {
        println!("  log10 omega {:6.2}  log10 max {:8.3}", p.log10_omega, p.log10_magnitude);
    }
    println!("slope {:.3} +- {:.3}", report.slope, 2.0 * report.slope_stderr);
    println!("upper-half slope {:.3}", report.tail_slope);
    println!(
        "C = {:.3e} (lower half {:.3e}, upper half {:.3e})",
        report.constant, report.constant_lower_half, report.constant_upper_half
    );
    println!("pass: {}", report.pass);
    Ok(())
}
