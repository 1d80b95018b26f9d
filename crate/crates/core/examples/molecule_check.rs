//! Molecule-order certificates for curvelet and shearlet generators: the
//! worst normalized derivative constant per scale and their spread.
//!
//! cargo run --release --example molecule_check -- [max_scale] [levels]

use alpha_molecules::cli::representative_classes;
use alpha_molecules::molecule::{check_generator, CheckConfig, PROXY_ORDER};
use alpha_molecules::FrameSpec;

fn main() -> alpha_molecules::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let max_j = args.first().copied().unwrap_or(6);
    let levels = args.get(1).copied().unwrap_or(2);
    for spec in [
        FrameSpec::Curvelet { alpha: 0.5, scales: max_j },
        FrameSpec::Shearlet { beta: 2.0, c: 1.0, scales: max_j },
    ] {
        let classes = representative_classes(&spec, max_j as i32)?;
        let cert = check_generator(&spec, &classes, PROXY_ORDER, levels, &CheckConfig::default())?;
        println!("{} (derivative levels {levels})", spec.family());
        for c in &cert.classes {
            println!("  j {:2} l {:2}: constant {:10.3e}, worst rho {:?}", c.j, c.l, c.constant, c.worst_rho);
        }
        println!("  max/min ratio {:.3e} (threshold {}), pass {}", cert.ratio, cert.threshold, cert.pass);
    }
    Ok(())
}
