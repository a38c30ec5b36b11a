//! Density operators, ensembles, Schatten decomposition and seeded random
//! state generation.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, SUPPORT_CUTOFF};

const DENSITY_TOL: f64 = 1e-9;
const PURE_TOL: f64 = 1e-8;
const ORTHO_TOL: f64 = 1e-9;

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DensityJson", into = "DensityJson")]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

// State file JSON: {"kind": "density", "dim": d, "matrix": <Matrix JSON>}.
#[derive(Serialize, Deserialize)]
struct DensityJson {
    kind: String,
    dim: usize,
    matrix: ComplexMatrix,
}

impl From<DensityOperator> for DensityJson {
    fn from(d: DensityOperator) -> Self {
        DensityJson { kind: "density".into(), dim: d.dim(), matrix: d.matrix }
    }
}

impl TryFrom<DensityJson> for DensityOperator {
    type Error = String;
    fn try_from(j: DensityJson) -> std::result::Result<Self, String> {
        if j.kind != "density" {
            return Err(format!("expected kind \"density\", got \"{}\"", j.kind));
        }
        if j.matrix.rows() != j.dim {
            return Err(format!("dim {} does not match matrix side {}", j.dim, j.matrix.rows()));
        }
        validate_density(&j.matrix).map_err(|e| e.to_string())
    }
}

impl DensityOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64) }
    }

    /// Pure state from a (normalized) ket.
    pub fn pure_from_ket(ket: &[C64]) -> Result<Self> {
        let v = ComplexMatrix::col_vector(ket);
        let n = v.frobenius_norm();
        validate_density(&v.mul(&v.dagger()).scale_re(1.0 / (n * n)))
    }

    /// Computational basis state |k><k|.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self { matrix: m }
    }

    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }
}

/// Check the density-operator invariants and return the validated state.
/// The matrix is symmetrized to (m + m')/2 before the checks.
pub fn validate_density(m: &ComplexMatrix) -> Result<DensityOperator> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let fro = m.frobenius_norm();
    let tol = DENSITY_TOL * fro.max(1.0);
    let residual = m.hermiticity_residual();
    if residual > tol {
        return Err(Error::NonHermitian { residual, tol });
    }
    let sym = m.hermitian_part();
    let trace = sym.trace().re;
    if (trace - 1.0).abs() > DENSITY_TOL {
        return Err(Error::TraceNotOne { trace });
    }
    let eig = hermitian_eig(&sym)?;
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l < -DENSITY_TOL) {
        return Err(Error::NotPSD { eigenvalue: bad, floor: -DENSITY_TOL });
    }
    Ok(DensityOperator { matrix: sym })
}

/// Weighted list of states with purity/orthogonality flags computed at
/// construction.
#[derive(Clone, Debug)]
pub struct Ensemble {
    items: Vec<(f64, DensityOperator)>,
    all_pure: bool,
    pairwise_orthogonal: bool,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityOperator)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::BadWeights { context: "empty ensemble".into() });
        }
        if let Some((w, _)) = items.iter().find(|(w, _)| *w < 0.0) {
            return Err(Error::BadWeights { context: format!("negative weight {w}") });
        }
        let total: f64 = items.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > DENSITY_TOL {
            return Err(Error::BadWeights { context: format!("weights sum to {total}") });
        }
        let dim = items[0].1.dim();
        if items.iter().any(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch { context: "mixed state dimensions in ensemble".into() });
        }
        let all_pure = items.iter().all(|(_, s)| {
            hermitian_eig(s.matrix()).map(|e| e.eigenvalues[0] >= 1.0 - PURE_TOL).unwrap_or(false)
        });
        let mut pairwise_orthogonal = true;
        'outer: for i in 0..items.len() {
            for j in (i + 1)..items.len() {
                let prod = items[i].1.matrix().mul(items[j].1.matrix());
                if prod.frobenius_norm() > ORTHO_TOL {
                    pairwise_orthogonal = false;
                    break 'outer;
                }
            }
        }
        Ok(Self { items, all_pure, pairwise_orthogonal })
    }

    pub fn items(&self) -> &[(f64, DensityOperator)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.items[0].1.dim()
    }

    pub fn all_pure(&self) -> bool {
        self.all_pure
    }

    pub fn pairwise_orthogonal(&self) -> bool {
        self.pairwise_orthogonal
    }

    /// Largest pairwise product norm, for orthogonality diagnostics.
    pub fn max_overlap(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.items.len() {
            for j in (i + 1)..self.items.len() {
                let prod = self.items[i].1.matrix().mul(self.items[j].1.matrix());
                worst = worst.max(prod.frobenius_norm());
            }
        }
        worst
    }
}

/// Spectral decomposition into weighted rank-one orthogonal projectors,
/// weights sorted descending, kernel eigenvalues dropped.
pub fn schatten_decompose(rho: &DensityOperator) -> Result<Ensemble> {
    let eig = hermitian_eig(rho.matrix())?;
    let lam_max = eig.eigenvalues[0].max(0.0);
    let cutoff = SUPPORT_CUTOFF * lam_max;
    let mut items = Vec::new();
    for (n, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam <= cutoff {
            continue;
        }
        let v = ComplexMatrix::col_vector(&eig.eigenvectors.column(n));
        items.push((lam, DensityOperator::trusted(v.mul(&v.dagger()))));
    }
    // Round-off can leave the retained weights summing slightly off 1.
    let total: f64 = items.iter().map(|(w, _)| w).sum();
    for (w, _) in items.iter_mut() {
        *w /= total;
    }
    Ensemble::new(items)
}

/// Mix an ensemble back into a single validated density.
pub fn ensemble_mix(e: &Ensemble) -> Result<DensityOperator> {
    let dim = e.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for (w, s) in e.items() {
        acc = acc.add(&s.matrix().scale_re(*w));
    }
    validate_density(&acc)
}

/// Seeded random density of prescribed rank: normalized G G' with G a
/// dim x rank matrix of standard complex Gaussians.
pub fn random_density(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> Result<DensityOperator> {
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = g.mul(&g.dagger());
    let trace = gg.trace().re;
    validate_density(&gg.scale_re(1.0 / trace))
}

/// Convenience wrapper constructing its own ChaCha8 stream from `seed`.
pub fn random_density_seeded(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density(dim, rank, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn validate_accepts_mixed_qubit() {
        let d = validate_density(&ComplexMatrix::diag(&[0.5, 0.5])).unwrap();
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn validate_rejects_bad_trace() {
        assert!(matches!(
            validate_density(&ComplexMatrix::diag(&[0.7, 0.4])),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn validate_rejects_indefinite() {
        // Eigenvalues 1.1 and -0.1 by the 2x2 closed form.
        let m = ComplexMatrix::new(
            2,
            2,
            vec![C64::new(0.5, 0.0), C64::new(0.6, 0.0), C64::new(0.6, 0.0), C64::new(0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(validate_density(&m), Err(Error::NotPSD { .. })));
    }

    #[test]
    fn schatten_pure_state() {
        let rho = DensityOperator::basis_state(2, 0);
        let e = schatten_decompose(&rho).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e.items()[0].0 - 1.0).abs() < 1e-12);
        assert!(e.all_pure() && e.pairwise_orthogonal());
    }

    #[test]
    fn schatten_maximally_mixed() {
        let e = schatten_decompose(&DensityOperator::maximally_mixed(2)).unwrap();
        assert_eq!(e.len(), 2);
        assert!((e.items()[0].0 - 0.5).abs() < 1e-12);
        assert!((e.items()[1].0 - 0.5).abs() < 1e-12);
        assert!(e.pairwise_orthogonal());
    }

    #[test]
    fn schatten_diagonal_sorted_descending() {
        let rho = validate_density(&ComplexMatrix::diag(&[0.25, 0.75])).unwrap();
        let e = schatten_decompose(&rho).unwrap();
        assert!((e.items()[0].0 - 0.75).abs() < 1e-12);
        assert!((e.items()[1].0 - 0.25).abs() < 1e-12);
        // Dominant projector is |1><1|.
        assert!((e.items()[0].1.matrix()[(1, 1)].re - 1.0).abs() < 1e-10);
        assert!((e.items()[1].1.matrix()[(0, 0)].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mix_round_trips_schatten() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for dim in 2..=4 {
            for _ in 0..25 {
                let rho = random_density(dim, dim, &mut rng).unwrap();
                let back = ensemble_mix(&schatten_decompose(&rho).unwrap()).unwrap();
                let resid = back.matrix().sub(rho.matrix()).frobenius_norm();
                assert!(resid < 1e-10, "round trip residual {resid}");
            }
        }
    }

    #[test]
    fn uniform_mix_of_basis_states() {
        let e = Ensemble::new(vec![
            (0.5, DensityOperator::basis_state(2, 0)),
            (0.5, DensityOperator::basis_state(2, 1)),
        ])
        .unwrap();
        let rho = ensemble_mix(&e).unwrap();
        assert!(rho.matrix().sub(&ComplexMatrix::diag(&[0.5, 0.5])).frobenius_norm() < 1e-12);
    }

    #[test]
    fn random_density_rank_one_is_pure() {
        let rho = random_density_seeded(2, 1, 42).unwrap();
        let eig = hermitian_eig(rho.matrix()).unwrap();
        assert!(eig.eigenvalues[0] >= 1.0 - 1e-10);
    }

    #[test]
    fn random_density_full_rank() {
        let rho = random_density_seeded(3, 3, 42).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        let eig = hermitian_eig(rho.matrix()).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l > SUPPORT_CUTOFF));
    }

    #[test]
    fn random_density_deterministic() {
        let a = random_density_seeded(3, 2, 5).unwrap();
        let b = random_density_seeded(3, 2, 5).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn random_density_bad_rank() {
        assert!(matches!(random_density_seeded(2, 3, 0), Err(Error::BadRank { .. })));
        assert!(matches!(random_density_seeded(2, 0, 0), Err(Error::BadRank { .. })));
    }

    #[test]
    fn ensemble_rejects_bad_weights() {
        let items = vec![(0.6, DensityOperator::basis_state(2, 0))];
        assert!(matches!(Ensemble::new(items), Err(Error::BadWeights { .. })));
    }

    #[test]
    fn density_json_round_trip() {
        let rho = random_density_seeded(3, 2, 9).unwrap();
        let s = serde_json::to_string(&rho).unwrap();
        assert!(s.contains("\"kind\":\"density\""));
        let back: DensityOperator = serde_json::from_str(&s).unwrap();
        assert!(back.matrix().sub(rho.matrix()).frobenius_norm() < 1e-12);
    }
}
