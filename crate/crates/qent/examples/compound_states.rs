//! Building compound states: from an amplitude operator, via the
//! amplitude <-> entangling-operator reshuffle, and through the standard /
//! d / o constructions.
//!
//! Run with: cargo run --example compound_states

use qent::entangle::{
    compound_from_amplitude, d_compound, entangling_from_amplitude, marginals, o_compound,
    standard_compound, AmplitudeOperator,
};
use qent::linalg::ComplexMatrix;
use qent::states::{schatten_decompose, validate_density, DensityOperator, Ensemble};
use num_complex::Complex64 as C64;

fn main() -> qent::Result<()> {
    // A Bell state as an amplitude operator: F = C (one column), G = H = C^2.
    let inv = 1.0 / 2f64.sqrt();
    let bell = AmplitudeOperator::new_joint(
        ComplexMatrix::new(
            4,
            1,
            vec![C64::new(inv, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(inv, 0.0)],
        )?,
        1,
        2,
        2,
    )?;
    let w = compound_from_amplitude(&bell)?;
    let (sigma, rho) = marginals(&w)?;
    println!("Bell compound: marginal traces = {:.3}, {:.3}", sigma.matrix().trace().re, rho.matrix().trace().re);

    // The entangling operator is the same data reshuffled; its square
    // reproduces the output marginal.
    let kappa = entangling_from_amplitude(&bell)?;
    let kk = kappa.matrix().dagger().mul(kappa.matrix());
    println!("kappa'kappa (transposed probe marginal):");
    for i in 0..2 {
        println!("  [{:+.3} {:+.3}]", kk[(i, 0)].re, kk[(i, 1)].re);
    }

    // The standard compound of a mixed state is its purification over a
    // probe copy: both marginals are the state itself (up to transpose).
    let biased = validate_density(&ComplexMatrix::diag(&[0.25, 0.75]))?;
    let std = standard_compound(&biased)?;
    let (s, r) = marginals(&std)?;
    println!(
        "standard compound marginal spectra: probe {:?}, output {:?}",
        spectrum(&s)?,
        spectrum(&r)?
    );

    // d- and o-compounds encode a classical index in the probe basis.
    let e = Ensemble::new(vec![
        (0.5, DensityOperator::basis_state(2, 0)),
        (0.5, DensityOperator::basis_state(2, 1)),
    ])?;
    let wd = d_compound(&e)?;
    println!("d-compound of orthogonal encoding is diagonal: {} nonzeros", nonzeros(&wd));

    // The Schatten decomposition always yields a valid o-compound.
    let wo = o_compound(&schatten_decompose(&biased)?)?;
    println!("o-compound built from the Schatten decomposition: dims {}x{}", wo.dim_g(), wo.dim_h());
    Ok(())
}

fn spectrum(rho: &DensityOperator) -> qent::Result<Vec<f64>> {
    Ok(qent::linalg::hermitian_eig(rho.matrix())?
        .eigenvalues
        .iter()
        .map(|l| (l * 1000.0).round() / 1000.0)
        .collect())
}

fn nonzeros(w: &qent::entangle::CompoundState) -> usize {
    let m = w.omega();
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| m[(i, j)].norm() > 1e-12)
        .count()
}
