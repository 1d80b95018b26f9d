//! Saturation ladders of the consistency sums between curvelet and
//! shearlet parametrizations at alpha = 1/2.
//!
//! cargo run --release --example consistency_ladder -- [start] [rungs]

use alpha_molecules::consistency::{saturation_ladder, LadderConfig};
use alpha_molecules::param::{CurveletParametrization, ShearletParametrization};
use alpha_molecules::Parametrization;

fn main() -> alpha_molecules::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cfg = LadderConfig {
        start_scale: args.first().copied().unwrap_or(2) as i32,
        rungs: args.get(1).copied().unwrap_or(8),
        ..Default::default()
    };
    let curvelet = Parametrization::Curvelet(CurveletParametrization::new(0.5, 2.0, 1.0)?);
    let shearlet = Parametrization::Shearlet(ShearletParametrization::for_beta(2.0, 1.0)?);
    let pairs = [
        ("curvelet/curvelet", curvelet, curvelet),
        ("curvelet/shearlet", curvelet, shearlet),
        ("shearlet/shearlet", shearlet, shearlet),
    ];
    for (name, a, b) in pairs {
        for report in saturation_ladder(&a, &b, 0.5, &[2.5, 1.0], &cfg)? {
            println!("{name}  k = {}", report.k);
            for r in &report.rungs {
                println!("  J {:2}  {:12.5e}  {:12.5e}  {:+.4}", r.max_scale, r.sup_ab, r.sup_ba, r.increment);
            }
            println!("  verdict {:?}, per-scale slope {:.3}", report.verdict, report.per_scale_slope);
        }
    }
    Ok(())
}
