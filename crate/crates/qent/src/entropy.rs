//! Entropy functionals: von Neumann, relative, entangled mutual entropy,
//! q-entropy, conditional entropies and the degree of disentanglement.
//! All values are in nats.
//!
//! Relative entropy is evaluated spectrally, combining the two
//! eigendecompositions through the cross term
//! sum_ij |<u_i|v_j>|^2 lambda_i ln gamma_j, which keeps the 0 ln 0
//! convention explicit and avoids forming non-commuting matrix sums.

use crate::entangle::{marginals, standard_compound, CompoundState};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, SUPPORT_CUTOFF};
use crate::states::DensityOperator;

/// Threshold on the kernel mass tr(omega P_ker(phi)) separating genuine
/// infinities from round-off.
const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// Internal cross-check tolerance for the mutual-entropy decomposition
/// I = S(sigma) + S(rho) - S(omega).
const DECOMPOSITION_TOL: f64 = 1e-8;

/// Entropy in nats; infinities are reported through the explicit flag,
/// never as a float overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue {
    pub nats: f64,
    pub finite: bool,
}

impl EntropyValue {
    pub fn finite(nats: f64) -> Self {
        Self { nats, finite: true }
    }

    pub fn infinite() -> Self {
        Self { nats: f64::INFINITY, finite: false }
    }

    pub fn is_infinite(&self) -> bool {
        !self.finite
    }
}

impl std::fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.finite {
            // Avoid printing "-0.000000000000" for round-off below the
            // displayed precision.
            let v = if self.nats.abs() < 5e-13 { 0.0 } else { self.nats };
            write!(f, "{v:.12}")
        } else {
            write!(f, "inf")
        }
    }
}

fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    let lam_max = eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = SUPPORT_CUTOFF * lam_max;
    -eigenvalues.iter().filter(|&&l| l > cutoff).map(|&l| l * l.ln()).sum::<f64>()
}

/// Von Neumann entropy -sum lambda ln lambda over the support.
pub fn von_neumann(rho: &DensityOperator) -> EntropyValue {
    let eig = hermitian_eig(rho.matrix()).expect("validated density is Hermitian");
    EntropyValue::finite(spectrum_entropy(&eig.eigenvalues))
}

/// Relative entropy tr omega(ln omega - ln phi) on the supports, infinite
/// when the support of omega leaks outside the support of phi.
pub fn relative_entropy(w: &DensityOperator, phi: &DensityOperator) -> Result<EntropyValue> {
    if w.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            context: format!("relative entropy between dims {} and {}", w.dim(), phi.dim()),
        });
    }
    let ew = hermitian_eig(w.matrix())?;
    let ep = hermitian_eig(phi.matrix())?;
    Ok(relative_entropy_from_eigs(&ew, &ep))
}

/// Spectral route shared with the capacity searches, which precompute the
/// reference eigendecomposition once per objective.
pub(crate) fn relative_entropy_from_eigs(
    ew: &crate::linalg::EigenSystem,
    ep: &crate::linalg::EigenSystem,
) -> EntropyValue {
    let cut_w = SUPPORT_CUTOFF * ew.eigenvalues[0].max(0.0);
    let cut_p = SUPPORT_CUTOFF * ep.eigenvalues[0].max(0.0);

    let n = ew.eigenvalues.len();
    // overlaps[i][j] = <u_i | v_j>
    let overlaps = ew.eigenvectors.dagger().mul(&ep.eigenvectors);

    let mut kernel_mass = 0.0;
    let mut cross = 0.0;
    for i in 0..n {
        let lam = ew.eigenvalues[i];
        if lam <= cut_w {
            continue;
        }
        for j in 0..n {
            let p = overlaps[(i, j)].norm_sqr();
            let gam = ep.eigenvalues[j];
            if gam <= cut_p {
                kernel_mass += lam * p;
            } else {
                cross += lam * p * gam.ln();
            }
        }
    }
    if kernel_mass > SUPPORT_LEAK_TOL {
        return EntropyValue::infinite();
    }
    let own: f64 = ew.eigenvalues.iter().filter(|&&l| l > cut_w).map(|&l| l * l.ln()).sum();
    EntropyValue::finite(own - cross)
}

/// Entangled mutual entropy I(omega) = S(omega || sigma (x) rho) with the
/// marginals sigma, rho. Always finite; cross-checked internally against
/// S(sigma) + S(rho) - S(omega).
pub fn mutual_entropy(w: &CompoundState) -> EntropyValue {
    let (sigma, rho) = marginals(w).expect("compound state has valid marginals");
    let product = crate::linalg::kron(sigma.matrix(), rho.matrix());
    let phi = crate::states::validate_density(&product).expect("product of densities is a density");
    let omega_state =
        crate::states::validate_density(w.omega()).expect("compound carries a valid density");
    let s = relative_entropy(&omega_state, &phi).expect("dimensions match by construction");
    assert!(s.finite, "marginals dominate the compound state; mutual entropy must be finite");
    let decomposed = von_neumann(&sigma).nats + von_neumann(&rho).nats
        - von_neumann(&omega_state).nats;
    let diff = (s.nats - decomposed).abs();
    assert!(
        diff <= DECOMPOSITION_TOL,
        "mutual-entropy decomposition mismatch: {} vs {} (diff {diff:.3e})",
        s.nats,
        decomposed
    );
    EntropyValue::finite(s.nats.max(0.0))
}

/// q-entropy 2 S(rho), the supremum of mutual entropy over entanglements
/// with fixed marginal rho.
pub fn q_entropy(rho: &DensityOperator) -> EntropyValue {
    EntropyValue::finite(2.0 * von_neumann(rho).nats)
}

/// Closed-form q-entropy cross-checked against the mutual entropy of the
/// standard compound.
pub fn q_entropy_verified(rho: &DensityOperator) -> Result<EntropyValue> {
    let closed = q_entropy(rho);
    let via_compound = mutual_entropy(&standard_compound(rho)?);
    let diff = (closed.nats - via_compound.nats).abs();
    if diff > DECOMPOSITION_TOL {
        return Err(Error::OrderingViolated {
            i_q: closed.nats,
            i_d: via_compound.nats,
            i_o: f64::NAN,
        });
    }
    Ok(closed)
}

/// The pair (q-conditional entropy, degree of disentanglement):
/// S~(sigma) - I(omega) and S(sigma) - I(omega). The first is
/// nonnegative; the second may be negative for entangled states.
pub fn conditional_and_disentanglement(w: &CompoundState) -> (EntropyValue, EntropyValue) {
    let (sigma, _) = marginals(w).expect("compound state has valid marginals");
    let i = mutual_entropy(w).nats;
    let s_sigma = von_neumann(&sigma).nats;
    let q_cond = 2.0 * s_sigma - i;
    debug_assert!(q_cond >= -1e-8, "q-conditional entropy must be nonnegative, got {q_cond}");
    (EntropyValue::finite(q_cond), EntropyValue::finite(s_sigma - i))
}

/// Scalar helper used by tests and fixtures: -sum p ln p over a spectrum.
pub fn scalar_entropy(spectrum: &[f64]) -> f64 {
    -spectrum.iter().filter(|&&p| p > 1e-15).map(|&p| p * p.ln()).sum::<f64>()
}
