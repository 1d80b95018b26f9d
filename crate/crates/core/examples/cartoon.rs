//! Generate seeded cartoon images and write them in the f64le container
//! next to an estimate of their boundary regularity.
//!
//! cargo run --release --example cartoon -- [n] [beta] [out_dir]

use std::path::PathBuf;

use alpha_molecules::cartoon::{boundary_regularity_estimate, generate_cartoon, CartoonSpec};
use alpha_molecules::grid::write_image;
use alpha_molecules::FrequencyGrid;

fn main() -> alpha_molecules::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|a| a.parse().ok()).unwrap_or(256);
    let beta = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(2.0);
    let out = args.get(2).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let grid = FrequencyGrid::new(n)?;

    let disc = generate_cartoon(&CartoonSpec::disc([0.5, 0.5], 0.2), grid)?;
    let area = disc.data().iter().sum::<f64>() / (n * n) as f64;
    println!("disc r = 0.2: area {area:.5} (exact {:.5})", std::f64::consts::PI * 0.04);

    for seed in 0..3 {
        let spec = CartoonSpec::random(beta, seed)?;
        let img = generate_cartoon(&spec, grid)?;
        let path = out.join(format!("cartoon_{seed}.f64"));
        write_image(&path, &img)?;
        println!(
            "seed {seed}: |f|^2 {:.4}, boundary regularity ~ {:.2}, written to {}",
            img.norm2(),
            boundary_regularity_estimate(&spec),
            path.display()
        );
    }
    Ok(())
}
