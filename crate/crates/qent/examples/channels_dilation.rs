//! Kraus channels, the built-in zoo, and the Stinespring dilation.
//!
//! Run with: cargo run --example channels_dilation

use qent::channels::{apply_state, channel_zoo, dilate, ZooParams};
use qent::entropy::von_neumann;
use qent::states::DensityOperator;

fn main() -> qent::Result<()> {
    let pure = DensityOperator::basis_state(2, 0);

    // Depolarizing noise interpolates between the identity (p = 0) and the
    // completely mixing channel (p = 1).
    for p in [0.0, 0.5, 1.0] {
        let ch = channel_zoo("depolarizing", &ZooParams::Noise(p))?;
        let out = apply_state(&ch, &pure)?;
        println!("depolarizing p={p:.1}: S(output) = {}", von_neumann(&out));
    }

    // Amplitude damping relaxes |1> toward |0>.
    let ad = channel_zoo("amplitude_damping", &ZooParams::Noise(0.3))?;
    let excited = DensityOperator::basis_state(2, 1);
    let out = apply_state(&ad, &excited)?;
    println!("amplitude damping gamma=0.3 on |1><1|: p(ground) = {:.3}", out.matrix()[(0, 0)].re);

    // Every Kraus family dilates to an isometry into system (x) environment;
    // tracing the environment back out recovers the channel exactly.
    let y = dilate(&ad);
    println!(
        "dilation: {} Kraus operators -> isometry into dim {} x {}, residual {:.2e}",
        ad.kraus().len(),
        ad.dim_out(),
        y.dim_env(),
        y.normalization_residual()
    );
    let via_dilation = y.apply(&excited)?;
    let diff = via_dilation.matrix().sub(out.matrix()).frobenius_norm();
    println!("|Kraus route - dilation route| = {diff:.2e}");
    Ok(())
}
