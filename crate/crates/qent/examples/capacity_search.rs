//! Channel capacities by the outer search over input states.
//!
//! Run with: cargo run --example capacity_search

use qent::capacity::{capacity, InfoKind, OptimizerConfig};
use qent::channels::{channel_zoo, ZooParams};

fn main() -> qent::Result<()> {
    let cfg = OptimizerConfig { restarts: 2, max_iters: 60, ..Default::default() };

    // Noiseless qubit: C_q = ln 4 (dense coding ceiling), C = C_o = ln 2.
    let id = channel_zoo("identity", &ZooParams::Dim(2))?;
    for (kind, label, target) in [
        (InfoKind::Q, "C_q", 4f64.ln()),
        (InfoKind::D, "C  ", 2f64.ln()),
        (InfoKind::O, "C_o", 2f64.ln()),
    ] {
        let rep = capacity(&id, kind, &cfg)?;
        println!(
            "identity qubit {label} = {:.9}  (target {:.9}, gap {:.1e})",
            rep.report.value,
            target,
            (rep.report.value - target).abs()
        );
    }

    // Depolarizing noise: capacity decays with p and vanishes at p = 1.
    println!();
    for p in [0.25, 0.75, 1.0] {
        let ch = channel_zoo("depolarizing", &ZooParams::Noise(p))?;
        let rep = capacity(&ch, InfoKind::D, &cfg)?;
        let spectrum = qent::linalg::hermitian_eig(rep.input.matrix())?;
        println!(
            "depolarizing p={p:.2}: C = {:.9}, maximizing input spectrum {:?}",
            rep.report.value,
            spectrum.eigenvalues.iter().map(|l| (l * 100.0).round() / 100.0).collect::<Vec<_>>()
        );
    }
    Ok(())
}
