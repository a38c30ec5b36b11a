//! Quantum channels in Kraus form: validation, application to states and
//! to the output factor of compound states, Stinespring-style dilation,
//! and a small parametrized channel zoo.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::entangle::{CompoundState};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};
use crate::states::{validate_density, DensityOperator};

const COMPLETENESS_TOL: f64 = 1e-9;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

// Channel file JSON: {"kind": "kraus", "dim_in": d0, "dim_out": d,
// "kraus": [<Matrix JSON>, ...]}.
#[derive(Serialize, Deserialize)]
struct ChannelJson {
    kind: String,
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl From<KrausChannel> for ChannelJson {
    fn from(c: KrausChannel) -> Self {
        ChannelJson { kind: "kraus".into(), dim_in: c.dim_in, dim_out: c.dim_out, kraus: c.kraus }
    }
}

impl TryFrom<ChannelJson> for KrausChannel {
    type Error = String;
    fn try_from(j: ChannelJson) -> std::result::Result<Self, String> {
        if j.kind != "kraus" {
            return Err(format!("expected kind \"kraus\", got \"{}\"", j.kind));
        }
        let ch = make_channel(j.kraus).map_err(|e| e.to_string())?;
        if ch.dim_in != j.dim_in || ch.dim_out != j.dim_out {
            return Err(format!(
                "declared dims ({}, {}) do not match Kraus shapes ({}, {})",
                j.dim_in, j.dim_out, ch.dim_in, ch.dim_out
            ));
        }
        Ok(ch)
    }
}

impl KrausChannel {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }
}

/// Validate a Kraus list: consistent shapes and completeness
/// sum K'K = I within tolerance.
pub fn make_channel(kraus: Vec<ComplexMatrix>) -> Result<KrausChannel> {
    let first = kraus.first().ok_or(Error::EmptyKraus)?;
    let (dim_out, dim_in) = (first.rows(), first.cols());
    for (i, k) in kraus.iter().enumerate() {
        if k.rows() != dim_out || k.cols() != dim_in {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "Kraus operator {} is {}x{}, expected {}x{}",
                    i,
                    k.rows(),
                    k.cols(),
                    dim_out,
                    dim_in
                ),
            });
        }
    }
    let mut acc = ComplexMatrix::zeros(dim_in, dim_in);
    for k in &kraus {
        acc = acc.add(&k.dagger().mul(k));
    }
    let residual = acc.sub(&ComplexMatrix::identity(dim_in)).frobenius_norm();
    if residual > COMPLETENESS_TOL {
        return Err(Error::IncompleteKraus { residual });
    }
    Ok(KrausChannel { dim_in, dim_out, kraus })
}

/// Schroedinger-picture application: sum K rho K'.
pub fn apply_state(ch: &KrausChannel, rho0: &DensityOperator) -> Result<DensityOperator> {
    if rho0.dim() != ch.dim_in {
        return Err(Error::DimensionMismatch {
            context: format!("state dim {} vs channel input dim {}", rho0.dim(), ch.dim_in),
        });
    }
    let mut out = ComplexMatrix::zeros(ch.dim_out, ch.dim_out);
    for k in &ch.kraus {
        out = out.add(&k.mul(rho0.matrix()).mul(&k.dagger()));
    }
    validate_density(&out)
}

/// Heisenberg-picture dual: sum K' A K. Used in tests only.
pub fn apply_dual(ch: &KrausChannel, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != ch.dim_out || a.cols() != ch.dim_out {
        return Err(Error::DimensionMismatch {
            context: format!("observable {}x{} vs channel output dim {}", a.rows(), a.cols(), ch.dim_out),
        });
    }
    let mut out = ComplexMatrix::zeros(ch.dim_in, ch.dim_in);
    for k in &ch.kraus {
        out = out.add(&k.dagger().mul(a).mul(k));
    }
    Ok(out)
}

/// Apply the channel to the H factor of a compound state:
/// sum (I (x) K) omega (I (x) K)'. The G-marginal is unchanged.
pub fn apply_to_output_factor(ch: &KrausChannel, w0: &CompoundState) -> Result<CompoundState> {
    if w0.dim_h() != ch.dim_in {
        return Err(Error::DimensionMismatch {
            context: format!("compound H dim {} vs channel input dim {}", w0.dim_h(), ch.dim_in),
        });
    }
    let id_g = ComplexMatrix::identity(w0.dim_g());
    let mut out = ComplexMatrix::zeros(w0.dim_g() * ch.dim_out, w0.dim_g() * ch.dim_out);
    for k in &ch.kraus {
        let lifted = kron(&id_g, k);
        out = out.add(&lifted.mul(w0.omega()).mul(&lifted.dagger()));
    }
    CompoundState::new(w0.dim_g(), ch.dim_out, out)
}

/// Apply the channel to the G factor of a compound state:
/// sum (K (x) I) omega (K (x) I)'. The H-marginal is unchanged.
pub fn apply_to_probe_factor(ch: &KrausChannel, w0: &CompoundState) -> Result<CompoundState> {
    if w0.dim_g() != ch.dim_in {
        return Err(Error::DimensionMismatch {
            context: format!("compound G dim {} vs channel input dim {}", w0.dim_g(), ch.dim_in),
        });
    }
    let id_h = ComplexMatrix::identity(w0.dim_h());
    let mut out = ComplexMatrix::zeros(ch.dim_out * w0.dim_h(), ch.dim_out * w0.dim_h());
    for k in &ch.kraus {
        let lifted = kron(k, &id_h);
        out = out.add(&lifted.mul(w0.omega()).mul(&lifted.dagger()));
    }
    CompoundState::new(ch.dim_out, w0.dim_h(), out)
}

/// Stinespring-style dilation: Y from H0 (x) F+ to H with
/// K_i = Y(. (x) |i>), dF+ = number of Kraus operators.
#[derive(Clone, Debug)]
pub struct Isometry {
    matrix: ComplexMatrix,
    dim_in: usize,
    dim_env: usize,
}

impl Isometry {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_env(&self) -> usize {
        self.dim_env
    }

    /// Partial-trace normalization residual ||tr_F+ Y'Y - I||_F.
    pub fn normalization_residual(&self) -> f64 {
        let yy = self.matrix.dagger().mul(&self.matrix);
        let traced = crate::linalg::partial_trace(
            &yy,
            (self.dim_in, self.dim_env),
            crate::linalg::Factor::G,
        )
        .expect("dilation shapes are consistent");
        traced.sub(&ComplexMatrix::identity(self.dim_in)).frobenius_norm()
    }

    /// Apply the channel through the dilation: Y (rho0 (x) I+/..) Y'
    /// realized as sum over environment basis states.
    pub fn apply(&self, rho0: &DensityOperator) -> Result<DensityOperator> {
        if rho0.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                context: format!("state dim {} vs dilation input dim {}", rho0.dim(), self.dim_in),
            });
        }
        let d_out = self.matrix.rows();
        let mut out = ComplexMatrix::zeros(d_out, d_out);
        for e in 0..self.dim_env {
            // K_e[o, i] = Y[o, i*dF + e]
            let k = ComplexMatrix::from_fn(d_out, self.dim_in, |o, i| {
                self.matrix[(o, i * self.dim_env + e)]
            });
            out = out.add(&k.mul(rho0.matrix()).mul(&k.dagger()));
        }
        validate_density(&out)
    }
}

/// Assemble the dilation isometry from the Kraus list.
pub fn dilate(ch: &KrausChannel) -> Isometry {
    let dim_env = ch.kraus.len();
    let matrix = ComplexMatrix::from_fn(ch.dim_out, ch.dim_in * dim_env, |o, col| {
        let (i, e) = (col / dim_env, col % dim_env);
        ch.kraus[e][(o, i)]
    });
    Isometry { matrix, dim_in: ch.dim_in, dim_env }
}

/// Parameters for [`channel_zoo`].
#[derive(Clone, Debug)]
pub enum ZooParams {
    None,
    Dim(usize),
    Unitary(ComplexMatrix),
    Noise(f64),
    Random { dim_in: usize, dim_out: usize, n_kraus: usize, seed: u64 },
}

fn pauli() -> [ComplexMatrix; 3] {
    let x = ComplexMatrix::new(
        2,
        2,
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    )
    .unwrap();
    let y = ComplexMatrix::new(
        2,
        2,
        vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    )
    .unwrap();
    let z = ComplexMatrix::diag(&[1.0, -1.0]);
    [x, y, z]
}

/// Named channel families.
///
/// `identity(d)`, `unitary(U)`, `depolarizing(p)` (qubit, fully mixing at
/// p = 1), `amplitude_damping(gamma)` (qubit), `phase_damping(lambda)`
/// (qubit), `random(d_in, d_out, n_kraus, seed)` (seed-deterministic,
/// complete by construction).
pub fn channel_zoo(name: &str, params: &ZooParams) -> Result<KrausChannel> {
    match (name, params) {
        ("identity", ZooParams::Dim(d)) => {
            if *d == 0 {
                return Err(Error::BadParam { context: "identity dimension must be positive".into() });
            }
            make_channel(vec![ComplexMatrix::identity(*d)])
        }
        ("unitary", ZooParams::Unitary(u)) => {
            if !u.is_square() {
                return Err(Error::BadParam { context: "unitary must be square".into() });
            }
            let resid =
                u.dagger().mul(u).sub(&ComplexMatrix::identity(u.rows())).frobenius_norm();
            if resid > COMPLETENESS_TOL {
                return Err(Error::BadParam { context: format!("matrix is not unitary, residual {resid:.3e}") });
            }
            make_channel(vec![u.clone()])
        }
        ("depolarizing", ZooParams::Noise(p)) => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::BadParam { context: format!("depolarizing p = {p} outside [0, 1]") });
            }
            let mut kraus = vec![ComplexMatrix::identity(2).scale_re((1.0 - 3.0 * p / 4.0).sqrt())];
            for s in pauli() {
                kraus.push(s.scale_re((p / 4.0).sqrt()));
            }
            make_channel(kraus)
        }
        ("amplitude_damping", ZooParams::Noise(g)) => {
            if !(0.0..=1.0).contains(g) {
                return Err(Error::BadParam { context: format!("damping gamma = {g} outside [0, 1]") });
            }
            let k0 = ComplexMatrix::diag(&[1.0, (1.0 - g).sqrt()]);
            let mut k1 = ComplexMatrix::zeros(2, 2);
            k1[(0, 1)] = C64::new(g.sqrt(), 0.0);
            make_channel(vec![k0, k1])
        }
        ("phase_damping", ZooParams::Noise(l)) => {
            if !(0.0..=1.0).contains(l) {
                return Err(Error::BadParam { context: format!("damping lambda = {l} outside [0, 1]") });
            }
            let mut kraus = vec![ComplexMatrix::identity(2).scale_re((1.0 - l).sqrt())];
            for k in 0..2 {
                let mut m = ComplexMatrix::zeros(2, 2);
                m[(k, k)] = C64::new(l.sqrt(), 0.0);
                kraus.push(m);
            }
            make_channel(kraus)
        }
        ("random", ZooParams::Random { dim_in, dim_out, n_kraus, seed }) => {
            random_channel(*dim_in, *dim_out, *n_kraus, *seed)
        }
        (_, _) if matches!(
            name,
            "identity" | "unitary" | "depolarizing" | "amplitude_damping" | "phase_damping" | "random"
        ) =>
        {
            Err(Error::BadParam { context: format!("wrong parameter kind for family `{name}`") })
        }
        _ => Err(Error::UnknownChannel { name: name.into() }),
    }
}

/// Seed-deterministic random channel: a random isometry H0 -> H (x) F+
/// from seeded Gaussians, orthonormalized, then split into Kraus blocks.
/// Completeness holds by construction.
pub fn random_channel(dim_in: usize, dim_out: usize, n_kraus: usize, seed: u64) -> Result<KrausChannel> {
    if dim_in == 0 || dim_out == 0 || n_kraus == 0 {
        return Err(Error::BadParam { context: "random channel dims and Kraus count must be positive".into() });
    }
    if dim_out * n_kraus < dim_in {
        return Err(Error::BadParam {
            context: format!("cannot embed dim {} into {}x{} dilation", dim_in, dim_out, n_kraus),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = dim_out * n_kraus;
    // Columns of V are the orthonormalized images of the input basis.
    let raw = ComplexMatrix::from_fn(rows, dim_in, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let v = crate::linalg::orthonormalize_columns(&raw);
    let kraus = (0..n_kraus)
        .map(|e| ComplexMatrix::from_fn(dim_out, dim_in, |o, i| v[(e * dim_out + o, i)]))
        .collect();
    make_channel(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::standard_compound;
    use crate::entangle::marginals;
    use crate::linalg::hermitian_eig;
    use crate::states::random_density;
    use rand::SeedableRng;

    #[test]
    fn identity_channel_round_trip() {
        let ch = channel_zoo("identity", &ZooParams::Dim(3)).unwrap();
        let rho = crate::states::random_density_seeded(3, 3, 1).unwrap();
        let out = apply_state(&ch, &rho).unwrap();
        assert!(out.matrix().sub(rho.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn alternate_depolarizing_kraus_set_is_complete() {
        // {sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z} is complete
        // for any p in [0, 1] by the Pauli algebra.
        for p in [0.0, 0.3, 1.0] {
            let mut kraus = vec![ComplexMatrix::identity(2).scale_re((1.0f64 - p).sqrt())];
            for s in pauli() {
                kraus.push(s.scale_re((p / 3.0f64).sqrt()));
            }
            assert!(make_channel(kraus).is_ok());
        }
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let k = ComplexMatrix::diag(&[1.0, 0.5]);
        assert!(matches!(make_channel(vec![k]), Err(Error::IncompleteKraus { .. })));
    }

    #[test]
    fn empty_kraus_rejected() {
        assert!(matches!(make_channel(vec![]), Err(Error::EmptyKraus)));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::zeros(3, 2);
        assert!(matches!(make_channel(vec![a, b]), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn fully_depolarizing_mixes() {
        let ch = channel_zoo("depolarizing", &ZooParams::Noise(1.0)).unwrap();
        let rho = crate::states::random_density_seeded(2, 1, 5).unwrap();
        let out = apply_state(&ch, &rho).unwrap();
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(out.matrix().sub(&half).frobenius_norm() < 1e-12);
    }

    #[test]
    fn depolarizing_zero_is_identity() {
        let ch = channel_zoo("depolarizing", &ZooParams::Noise(0.0)).unwrap();
        let rho = crate::states::random_density_seeded(2, 2, 6).unwrap();
        let out = apply_state(&ch, &rho).unwrap();
        assert!(out.matrix().sub(rho.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn amplitude_damping_on_excited_state() {
        let g = 0.3;
        let ch = channel_zoo("amplitude_damping", &ZooParams::Noise(g)).unwrap();
        let out = apply_state(&ch, &DensityOperator::basis_state(2, 1)).unwrap();
        let expect = ComplexMatrix::diag(&[g, 1.0 - g]);
        assert!(out.matrix().sub(&expect).frobenius_norm() < 1e-12);
    }

    #[test]
    fn zoo_rejects_bad_params() {
        assert!(matches!(
            channel_zoo("depolarizing", &ZooParams::Noise(1.5)),
            Err(Error::BadParam { .. })
        ));
        assert!(matches!(
            channel_zoo("nonsense", &ZooParams::None),
            Err(Error::UnknownChannel { .. })
        ));
    }

    #[test]
    fn random_channel_is_complete_and_deterministic() {
        let a = random_channel(2, 2, 3, 77).unwrap();
        let b = random_channel(2, 2, 3, 77).unwrap();
        for (x, y) in a.kraus().iter().zip(b.kraus()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn trace_preservation_and_positivity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(111);
        for trial in 0..100 {
            let ch = random_channel(2, 2, 2, trial).unwrap();
            let rho = random_density(2, 2, &mut rng).unwrap();
            let out = apply_state(&ch, &rho).unwrap();
            assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn output_factor_application_preserves_g_marginal() {
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for trial in 0..20 {
            let rho = random_density(2, 2, &mut rng).unwrap();
            let w = standard_compound(&rho).unwrap();
            let ch = random_channel(2, 2, 2, 300 + trial).unwrap();
            let wk = apply_to_output_factor(&ch, &w).unwrap();
            let (g_before, h_before) = marginals(&w).unwrap();
            let (g_after, h_after) = marginals(&wk).unwrap();
            assert!(g_after.matrix().sub(g_before.matrix()).frobenius_norm() < 1e-10);
            // Marginal-taking commutes with the channel on H.
            let direct = apply_state(&ch, &h_before).unwrap();
            assert!(h_after.matrix().sub(direct.matrix()).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn depolarizing_on_bell_spectrum() {
        let p = 0.3;
        let ch = channel_zoo("depolarizing", &ZooParams::Noise(p)).unwrap();
        let w = standard_compound(&DensityOperator::maximally_mixed(2)).unwrap();
        let wk = apply_to_output_factor(&ch, &w).unwrap();
        let eig = hermitian_eig(wk.omega()).unwrap();
        assert!((eig.eigenvalues[0] - (1.0 - 3.0 * p / 4.0)).abs() < 1e-10);
        for k in 1..4 {
            assert!((eig.eigenvalues[k] - p / 4.0).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_on_output_factor_is_identity() {
        let w = standard_compound(&crate::states::random_density_seeded(2, 2, 9).unwrap()).unwrap();
        let ch = channel_zoo("identity", &ZooParams::Dim(2)).unwrap();
        let wk = apply_to_output_factor(&ch, &w).unwrap();
        assert!(wk.omega().sub(w.omega()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn dilation_identity() {
        let ch = channel_zoo("identity", &ZooParams::Dim(2)).unwrap();
        let y = dilate(&ch);
        assert!(y.matrix().sub(&ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);
        assert_eq!(y.dim_env(), 1);
    }

    #[test]
    fn dilation_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(117);
        for trial in 0..20 {
            let ch = random_channel(2, 2, 2, 500 + trial).unwrap();
            let y = dilate(&ch);
            assert!(y.normalization_residual() < 1e-10);
            let rho = random_density(2, 2, &mut rng).unwrap();
            let via_kraus = apply_state(&ch, &rho).unwrap();
            let via_dilation = y.apply(&rho).unwrap();
            assert!(via_kraus.matrix().sub(via_dilation.matrix()).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn two_kraus_dilation_shape() {
        let ch = channel_zoo("amplitude_damping", &ZooParams::Noise(0.4)).unwrap();
        let y = dilate(&ch);
        assert_eq!((y.matrix().rows(), y.matrix().cols()), (2, 4));
        assert!(y.normalization_residual() < 1e-10);
    }

    #[test]
    fn deterministic_channel_preserves_spectrum() {
        // Single-Kraus isometries are deterministic channels.
        let theta = 0.7f64;
        let u = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(theta.cos(), 0.0),
                C64::new(-theta.sin(), 0.0),
                C64::new(theta.sin(), 0.0),
                C64::new(theta.cos(), 0.0),
            ],
        )
        .unwrap();
        let ch = channel_zoo("unitary", &ZooParams::Unitary(u)).unwrap();
        let rho = crate::states::random_density_seeded(2, 2, 15).unwrap();
        let out = apply_state(&ch, &rho).unwrap();
        let before = hermitian_eig(rho.matrix()).unwrap().eigenvalues;
        let after = hermitian_eig(out.matrix()).unwrap().eigenvalues;
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn heisenberg_dual_is_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(119);
        let ch = random_channel(2, 2, 3, 7).unwrap();
        let rho = random_density(2, 2, &mut rng).unwrap();
        let a = random_density(2, 2, &mut rng).unwrap();
        // tr[A Lambda_*(rho)] = tr[Lambda(A) rho]
        let lhs = a.matrix().mul(apply_state(&ch, &rho).unwrap().matrix()).trace();
        let rhs = apply_dual(&ch, a.matrix()).unwrap().mul(rho.matrix()).trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn channel_json_round_trip() {
        let ch = channel_zoo("depolarizing", &ZooParams::Noise(0.25)).unwrap();
        let s = serde_json::to_string(&ch).unwrap();
        assert!(s.contains("\"kind\":\"kraus\""));
        let back: KrausChannel = serde_json::from_str(&s).unwrap();
        assert_eq!(back.kraus().len(), 4);
    }
}
