//! Compound-state constructions: from amplitude operators, the standard /
//! c / d / o families, the entangling-operator reshuffle and the dual
//! evaluations with their marginals.
//!
//! Conventions pinned here: Kronecker order is G-then-H, the conjugation J
//! is entrywise complex conjugation in the computational basis of G for
//! generic amplitudes (eigenbasis conjugation for the standard compound),
//! and the transpose in the dual evaluations acts on the G factor in the
//! computational basis.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, kron, partial_trace, partial_transpose_g, ComplexMatrix, Factor,
};
use crate::states::{validate_density, DensityOperator, Ensemble};

const AMPLITUDE_NORM_TOL: f64 = 1e-9;

/// Identifies which reshuffle layout an amplitude operator uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmplitudeKind {
    /// Joint amplitude F -> G (x) H, matrix of shape (dG*dH) x dF.
    Joint,
    /// Entangling operator G -> F (x) H, matrix of shape (dF*dH) x dG.
    Entangling,
}

/// Complex matrix of unit Hilbert-Schmidt norm carrying its factor
/// dimensions.
#[derive(Clone, Debug)]
pub struct AmplitudeOperator {
    matrix: ComplexMatrix,
    dim_f: usize,
    dim_g: usize,
    dim_h: usize,
    kind: AmplitudeKind,
}

impl AmplitudeOperator {
    pub fn new_joint(matrix: ComplexMatrix, dim_f: usize, dim_g: usize, dim_h: usize) -> Result<Self> {
        Self::new(matrix, dim_f, dim_g, dim_h, AmplitudeKind::Joint)
    }

    pub fn new_entangling(
        matrix: ComplexMatrix,
        dim_f: usize,
        dim_g: usize,
        dim_h: usize,
    ) -> Result<Self> {
        Self::new(matrix, dim_f, dim_g, dim_h, AmplitudeKind::Entangling)
    }

    fn new(
        matrix: ComplexMatrix,
        dim_f: usize,
        dim_g: usize,
        dim_h: usize,
        kind: AmplitudeKind,
    ) -> Result<Self> {
        let (rows, cols) = match kind {
            AmplitudeKind::Joint => (dim_g * dim_h, dim_f),
            AmplitudeKind::Entangling => (dim_f * dim_h, dim_g),
        };
        if matrix.rows() != rows || matrix.cols() != cols {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "amplitude shape {}x{}, expected {}x{} for dims (F={}, G={}, H={})",
                    matrix.rows(),
                    matrix.cols(),
                    rows,
                    cols,
                    dim_f,
                    dim_g,
                    dim_h
                ),
            });
        }
        let norm = matrix.dagger().mul(&matrix).trace().re;
        if (norm - 1.0).abs() > AMPLITUDE_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { matrix, dim_f, dim_g, dim_h, kind })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim_f(&self) -> usize {
        self.dim_f
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn kind(&self) -> AmplitudeKind {
        self.kind
    }
}

/// Which constructor produced a compound state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompoundClass {
    Generic,
    Standard,
    C,
    D,
    O,
}

/// Density operator on G (x) H with declared factor dimensions.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CompoundJson", into = "CompoundJson")]
pub struct CompoundState {
    dim_g: usize,
    dim_h: usize,
    omega: ComplexMatrix,
    class: CompoundClass,
}

// Compound file JSON: {"kind": "compound", "dim_g": dG, "dim_h": dH,
// "matrix": <Matrix JSON>}.
#[derive(Serialize, Deserialize)]
struct CompoundJson {
    kind: String,
    dim_g: usize,
    dim_h: usize,
    matrix: ComplexMatrix,
}

impl From<CompoundState> for CompoundJson {
    fn from(c: CompoundState) -> Self {
        CompoundJson { kind: "compound".into(), dim_g: c.dim_g, dim_h: c.dim_h, matrix: c.omega }
    }
}

impl TryFrom<CompoundJson> for CompoundState {
    type Error = String;
    fn try_from(j: CompoundJson) -> std::result::Result<Self, String> {
        if j.kind != "compound" {
            return Err(format!("expected kind \"compound\", got \"{}\"", j.kind));
        }
        CompoundState::new(j.dim_g, j.dim_h, j.matrix).map_err(|e| e.to_string())
    }
}

impl CompoundState {
    pub fn new(dim_g: usize, dim_h: usize, omega: ComplexMatrix) -> Result<Self> {
        Self::with_class(dim_g, dim_h, omega, CompoundClass::Generic)
    }

    fn with_class(
        dim_g: usize,
        dim_h: usize,
        omega: ComplexMatrix,
        class: CompoundClass,
    ) -> Result<Self> {
        if omega.rows() != dim_g * dim_h {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "compound side {} does not equal dG*dH = {}",
                    omega.rows(),
                    dim_g * dim_h
                ),
            });
        }
        let validated = validate_density(&omega)?;
        Ok(Self { dim_g, dim_h, omega: validated.matrix().clone(), class })
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn omega(&self) -> &ComplexMatrix {
        &self.omega
    }

    pub fn class(&self) -> CompoundClass {
        self.class
    }
}

/// Build the compound density omega = v v' from a joint amplitude.
pub fn compound_from_amplitude(v: &AmplitudeOperator) -> Result<CompoundState> {
    if v.kind() != AmplitudeKind::Joint {
        return Err(Error::DimensionMismatch { context: "expected a joint amplitude F -> G(x)H".into() });
    }
    let omega = v.matrix().mul(&v.matrix().dagger());
    CompoundState::new(v.dim_g(), v.dim_h(), omega)
}

/// The entangling operator kappa: G -> F (x) H obtained from a joint
/// amplitude by the index reshuffle realizing G-transposition, with the
/// unitary freedom resolved as the identity.
///
/// Contracts: the compound rebuilt via [`compound_from_entangling`] equals
/// `compound_from_amplitude(v)`, `tr_F kappa kappa'` is the H-marginal, and
/// `kappa' kappa` is the G-transposed G-marginal.
pub fn entangling_from_amplitude(v: &AmplitudeOperator) -> Result<AmplitudeOperator> {
    if v.kind() != AmplitudeKind::Joint {
        return Err(Error::DimensionMismatch { context: "expected a joint amplitude F -> G(x)H".into() });
    }
    let (df, dg, dh) = (v.dim_f(), v.dim_g(), v.dim_h());
    let m = v.matrix();
    let kappa = ComplexMatrix::from_fn(df * dh, dg, |row, g| {
        let (f, h) = (row / dh, row % dh);
        m[(g * dh + h, f)]
    });
    AmplitudeOperator::new_entangling(kappa, df, dg, dh)
}

/// Inverse reshuffle of [`entangling_from_amplitude`], returning the
/// joint amplitude whose compound realizes the entanglement.
pub fn amplitude_from_entangling(k: &AmplitudeOperator) -> Result<AmplitudeOperator> {
    if k.kind() != AmplitudeKind::Entangling {
        return Err(Error::DimensionMismatch { context: "expected an entangling operator G -> F(x)H".into() });
    }
    let (df, dg, dh) = (k.dim_f(), k.dim_g(), k.dim_h());
    let m = k.matrix();
    let v = ComplexMatrix::from_fn(dg * dh, df, |row, f| {
        let (g, h) = (row / dh, row % dh);
        m[(f * dh + h, g)]
    });
    AmplitudeOperator::new_joint(v, df, dg, dh)
}

/// Compound state realized by an entangling operator.
pub fn compound_from_entangling(k: &AmplitudeOperator) -> Result<CompoundState> {
    compound_from_amplitude(&amplitude_from_entangling(k)?)
}

/// Evaluate the entanglement pi_* at a probe observable:
/// tr_G[(B~ (x) I) omega] with B~ the transpose of B.
pub fn pi_star_eval(w: &CompoundState, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if b.rows() != w.dim_g() || b.cols() != w.dim_g() {
        return Err(Error::DimensionMismatch {
            context: format!("probe observable {}x{} on G of dim {}", b.rows(), b.cols(), w.dim_g()),
        });
    }
    let lifted = kron(&b.transpose(), &ComplexMatrix::identity(w.dim_h()));
    partial_trace(&lifted.mul(w.omega()), (w.dim_g(), w.dim_h()), Factor::H)
}

/// Evaluate the dual map pi at a system observable:
/// tr_H[(I (x) A) omega^{T_G}] with the partial transpose on the G factor.
pub fn pi_eval(w: &CompoundState, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != w.dim_h() || a.cols() != w.dim_h() {
        return Err(Error::DimensionMismatch {
            context: format!("system observable {}x{} on H of dim {}", a.rows(), a.cols(), w.dim_h()),
        });
    }
    let wt = partial_transpose_g(w.omega(), w.dim_g(), w.dim_h())?;
    let lifted = kron(&ComplexMatrix::identity(w.dim_g()), a);
    partial_trace(&lifted.mul(&wt), (w.dim_g(), w.dim_h()), Factor::G)
}

/// The pure standard compound of `rho`: omega = theta theta' with
/// theta = sum_n lambda(n)^{1/2} e_n (x) e_n in the eigenbasis of rho.
/// Both marginals equal `rho`.
pub fn standard_compound(rho: &DensityOperator) -> Result<CompoundState> {
    let d = rho.dim();
    let eig = hermitian_eig(rho.matrix())?;
    let mut theta = vec![C64::new(0.0, 0.0); d * d];
    for n in 0..d {
        let lam = eig.eigenvalues[n].max(0.0);
        if lam == 0.0 {
            continue;
        }
        let root = lam.sqrt();
        let e = eig.eigenvectors.column(n);
        for g in 0..d {
            for h in 0..d {
                theta[g * d + h] += e[g] * e[h] * root;
            }
        }
    }
    let t = ComplexMatrix::col_vector(&theta);
    CompoundState::with_class(d, d, t.mul(&t.dagger()), CompoundClass::Standard)
}

/// Separable compound from a convex combination of product states:
/// omega = sum mu(n) sigma_n (x) rho_n.
pub fn c_compound(items: &[(f64, DensityOperator, DensityOperator)]) -> Result<CompoundState> {
    if items.is_empty() {
        return Err(Error::BadWeights { context: "empty combination".into() });
    }
    if let Some((w, _, _)) = items.iter().find(|(w, _, _)| *w < 0.0) {
        return Err(Error::BadWeights { context: format!("negative weight {w}") });
    }
    let total: f64 = items.iter().map(|(w, _, _)| w).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::BadWeights { context: format!("weights sum to {total}") });
    }
    let dg = items[0].1.dim();
    let dh = items[0].2.dim();
    if items.iter().any(|(_, s, r)| s.dim() != dg || r.dim() != dh) {
        return Err(Error::DimensionMismatch { context: "mixed factor dimensions in combination".into() });
    }
    let mut omega = ComplexMatrix::zeros(dg * dh, dg * dh);
    for (w, sigma, rho) in items {
        omega = omega.add(&kron(sigma.matrix(), rho.matrix()).scale_re(*w));
    }
    CompoundState::with_class(dg, dh, omega, CompoundClass::C)
}

/// Diagonal (encoding) compound: omega = sum mu(n) |n><n| (x) rho_n with
/// the probe basis taken as the computational basis of G, dG = ensemble
/// size. Block diagonal across G by construction.
pub fn d_compound(e: &Ensemble) -> Result<CompoundState> {
    build_diagonal(e, CompoundClass::D)
}

/// Same construction as [`d_compound`], admissible only for pairwise
/// orthogonal ensembles.
pub fn o_compound(e: &Ensemble) -> Result<CompoundState> {
    if !e.pairwise_orthogonal() {
        return Err(Error::NotOrthogonal { residual: e.max_overlap() });
    }
    build_diagonal(e, CompoundClass::O)
}

fn build_diagonal(e: &Ensemble, class: CompoundClass) -> Result<CompoundState> {
    let dg = e.len();
    let dh = e.dim();
    let mut omega = ComplexMatrix::zeros(dg * dh, dg * dh);
    for (n, (w, rho)) in e.items().iter().enumerate() {
        for h in 0..dh {
            for hp in 0..dh {
                omega[(n * dh + h, n * dh + hp)] = rho.matrix()[(h, hp)] * *w;
            }
        }
    }
    CompoundState::with_class(dg, dh, omega, class)
}

/// The marginal pair (tr_H omega, tr_G omega), both validated densities.
pub fn marginals(w: &CompoundState) -> Result<(DensityOperator, DensityOperator)> {
    let g = partial_trace(w.omega(), (w.dim_g(), w.dim_h()), Factor::G)?;
    let h = partial_trace(w.omega(), (w.dim_g(), w.dim_h()), Factor::H)?;
    Ok((validate_density(&g)?, validate_density(&h)?))
}

/// Seeded random joint amplitude of unit Hilbert-Schmidt norm, for tests
/// and the verification suite.
pub fn random_joint_amplitude(
    dim_f: usize,
    dim_g: usize,
    dim_h: usize,
    rng: &mut ChaCha8Rng,
) -> Result<AmplitudeOperator> {
    let raw = ComplexMatrix::from_fn(dim_g * dim_h, dim_f, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = raw.dagger().mul(&raw).trace().re.sqrt();
    AmplitudeOperator::new_joint(raw.scale_re(1.0 / norm), dim_f, dim_g, dim_h)
}
