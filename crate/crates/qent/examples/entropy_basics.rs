//! Von Neumann entropy, q-entropy and relative entropy on small states.
//!
//! Run with: cargo run --example entropy_basics

use qent::entropy::{q_entropy, relative_entropy, von_neumann};
use qent::linalg::ComplexMatrix;
use qent::states::{validate_density, DensityOperator};

fn main() -> qent::Result<()> {
    // The maximally mixed qubit: S = ln 2, and the q-entropy (the largest
    // mutual entropy any compound state with this marginal can carry)
    // doubles it.
    let mixed = DensityOperator::maximally_mixed(2);
    println!("I/2:            S = {}  S_q = {}", von_neumann(&mixed), q_entropy(&mixed));

    // A pure state carries no entropy at all.
    let pure = DensityOperator::basis_state(2, 0);
    println!("|0><0|:         S = {}  S_q = {}", von_neumann(&pure), q_entropy(&pure));

    // A biased qubit.
    let biased = validate_density(&ComplexMatrix::diag(&[0.25, 0.75]))?;
    println!("diag(1/4,3/4):  S = {}  S_q = {}", von_neumann(&biased), q_entropy(&biased));

    // Relative entropy S(w || phi): zero iff equal, finite when the
    // support of w sits inside the support of phi, +infinity otherwise.
    println!();
    println!("S(biased || biased) = {}", relative_entropy(&biased, &biased)?);
    println!("S(biased || I/2)    = {}", relative_entropy(&biased, &mixed)?);
    println!("S(I/2 || |0><0|)    = {}", relative_entropy(&mixed, &pure)?);
    Ok(())
}
