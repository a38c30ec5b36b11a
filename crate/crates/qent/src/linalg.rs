//! Dense complex-matrix kernel: Hermitian eigendecomposition, functional
//! calculus on the support, partial traces, tensor products, adjoints and
//! transposition. Everything upstream is built on these primitives.
//!
//! Storage is row-major with the fixed Kronecker convention G-then-H: the
//! row index of an operator on G (x) H is `g * dim_h + h`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative support cutoff: eigenvalues below `SUPPORT_CUTOFF * lambda_max`
/// are treated as exactly zero.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Which tensor factor to keep in a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    G,
    H,
}

/// Scalar functions admitted by [`matrix_func_on_support`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralFn {
    Ln,
    Sqrt,
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: format!("{}x{} matrix with {} entries", rows, cols, data.len()),
            });
        }
        if let Some(i) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// Column vector from complex entries.
    pub fn col_vector(entries: &[C64]) -> Self {
        Self { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian part (a + a')/2.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.dagger()).scale_re(0.5)
    }

    /// Residual ||a - (a + a')/2||_F.
    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.hermitian_part()).frobenius_norm()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

// Repo-wide matrix JSON object: {"rows": R, "cols": C, "re_im": [[re, im], ...]},
// entries row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    re_im: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            re_im: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let data = raw.re_im.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(raw.rows, raw.cols, data).map_err(serde::de::Error::custom)
    }
}

/// Kronecker product with the fixed G-then-H index convention.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Orthonormalize the columns of `m` by modified Gram-Schmidt. Columns
/// that become numerically dependent are replaced by the first canonical
/// basis vector with a nonvanishing residual, so the result always has
/// orthonormal columns (requires cols <= rows).
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    assert!(cols <= rows, "cannot orthonormalize {cols} columns in dimension {rows}");
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let project_out = |basis: &[Vec<C64>], v: &mut Vec<C64>| {
        for b in basis {
            let dot: C64 = b.iter().zip(v.iter()).map(|(bi, vi)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
    };
    for j in 0..cols {
        let mut v = m.column(j);
        project_out(&basis, &mut v);
        let mut norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-10 {
            // Degenerate draw: fall back to a canonical direction.
            for k in 0..rows {
                v = vec![C64::new(0.0, 0.0); rows];
                v[k] = C64::new(1.0, 0.0);
                project_out(&basis, &mut v);
                norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm > 1e-6 {
                    break;
                }
            }
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i])
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues sorted
/// descending with matching unitary column eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    /// Rebuild V diag(lambda) V'.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let lam = ComplexMatrix::diag(&self.eigenvalues);
        v.mul(&lam).mul(&v.dagger())
    }
}

const HERMITICITY_TOL: f64 = 1e-9;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Deterministic: fixed pivot order, fixed rotation convention, ties in the
/// final descending sort broken by solver order.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenSystem> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let fro = a.frobenius_norm();
    let tol = HERMITICITY_TOL * fro.max(1e-300);
    let residual = a.hermiticity_residual();
    if residual > tol {
        return Err(Error::NonHermitian { residual, tol });
    }
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let off = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += 2.0 * m[(p, q)].norm_sqr();
            }
        }
        s.sqrt()
    };

    let stop = 1e-15 * fro.max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&m) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = m[(p, q)];
                let abs_a = alpha.norm();
                if abs_a <= stop / (n * n) as f64 {
                    continue;
                }
                let phase = alpha / abs_a;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (app - aqq) / (2.0 * abs_a);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary G restricted to (p,q): [[c, -s],[s e^{-i phi}, c e^{-i phi}]].
                let e_m = phase.conj();
                // Columns: A <- A G, V <- V G.
                for i in 0..n {
                    let aip = m[(i, p)];
                    let aiq = m[(i, q)];
                    m[(i, p)] = aip * c + aiq * (e_m * s);
                    m[(i, q)] = aip * (-s) + aiq * (e_m * c);
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * (e_m * s);
                    v[(i, q)] = vip * (-s) + viq * (e_m * c);
                }
                // Rows: A <- G' A.
                let e_p = phase;
                for j in 0..n {
                    let apj = m[(p, j)];
                    let aqj = m[(q, j)];
                    m[(p, j)] = apj * c + aqj * (e_p * s);
                    m[(q, j)] = apj * (-s) + aqj * (e_p * c);
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap().then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { eigenvalues, eigenvectors })
}

const PSD_FLOOR: f64 = -1e-9;

/// Apply `ln` or `sqrt` to a Hermitian PSD matrix on its support.
/// Eigenvalues at or below the support cutoff map to 0.
pub fn matrix_func_on_support(a: &ComplexMatrix, f: SpectralFn) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let lam_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let floor = PSD_FLOOR * lam_max.max(1e-300);
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l < floor) {
        return Err(Error::NotPSD { eigenvalue: bad, floor });
    }
    let cutoff = SUPPORT_CUTOFF * lam_max;
    let mapped: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            if l <= cutoff {
                0.0
            } else {
                match f {
                    SpectralFn::Ln => l.ln(),
                    SpectralFn::Sqrt => l.sqrt(),
                }
            }
        })
        .collect();
    let v = &eig.eigenvectors;
    Ok(v.mul(&ComplexMatrix::diag(&mapped)).mul(&v.dagger()))
}

/// Partial trace of an operator on G (x) H over the factor not kept.
pub fn partial_trace(
    w: &ComplexMatrix,
    dims: (usize, usize),
    keep: Factor,
) -> Result<ComplexMatrix> {
    let (dg, dh) = dims;
    let n = dg * dh;
    if dg == 0 || dh == 0 || !w.is_square() || w.rows() != n {
        return Err(Error::DimensionMismatch {
            context: format!("partial trace of {}x{} with dims ({}, {})", w.rows(), w.cols(), dg, dh),
        });
    }
    match keep {
        Factor::G => Ok(ComplexMatrix::from_fn(dg, dg, |g, gp| {
            (0..dh).map(|h| w[(g * dh + h, gp * dh + h)]).sum()
        })),
        Factor::H => Ok(ComplexMatrix::from_fn(dh, dh, |h, hp| {
            (0..dg).map(|g| w[(g * dh + h, g * dh + hp)]).sum()
        })),
    }
}

/// Partial transpose on the G factor in the computational basis.
pub fn partial_transpose_g(w: &ComplexMatrix, dg: usize, dh: usize) -> Result<ComplexMatrix> {
    let n = dg * dh;
    if !w.is_square() || w.rows() != n {
        return Err(Error::DimensionMismatch {
            context: format!("partial transpose of {}x{} with dims ({}, {})", w.rows(), w.cols(), dg, dh),
        });
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let (g, h) = (i / dh, i % dh);
        let (gp, hp) = (j / dh, j % dh);
        w[(gp * dh + h, g * dh + hp)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        random_matrix(rng, n, n).hermitian_part()
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = ComplexMatrix::new(
            2,
            2,
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        let eig = hermitian_eig(&x).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 4);
            let eig = hermitian_eig(&a).unwrap();
            let resid = a.sub(&eig.reconstruct()).frobenius_norm();
            assert!(resid <= 1e-10 * a.frobenius_norm().max(1.0), "residual {resid}");
            let v = &eig.eigenvectors;
            let unit = v.dagger().mul(v).sub(&ComplexMatrix::identity(4)).frobenius_norm();
            assert!(unit <= 1e-10, "unitarity {unit}");
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn eig_rejects_non_square() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&a), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn ln_identity_is_zero() {
        let z = matrix_func_on_support(&ComplexMatrix::identity(3), SpectralFn::Ln).unwrap();
        assert!(z.frobenius_norm() < 1e-12);
    }

    #[test]
    fn sqrt_diagonal() {
        let s = matrix_func_on_support(&ComplexMatrix::diag(&[4.0, 9.0]), SpectralFn::Sqrt).unwrap();
        assert!((s[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!((s[(1, 1)].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_matrix(&mut rng, 3, 3);
            let psd = g.mul(&g.dagger());
            let s = matrix_func_on_support(&psd, SpectralFn::Sqrt).unwrap();
            let resid = s.mul(&s).sub(&psd).frobenius_norm();
            assert!(resid < 1e-10 * psd.frobenius_norm().max(1.0), "residual {resid}");
        }
    }

    #[test]
    fn func_rejects_negative() {
        let a = ComplexMatrix::diag(&[1.0, -0.5]);
        assert!(matches!(matrix_func_on_support(&a, SpectralFn::Sqrt), Err(Error::NotPSD { .. })));
    }

    #[test]
    fn partial_trace_of_product_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = random_matrix(&mut rng, 2, 2);
            let y = random_matrix(&mut rng, 3, 3);
            let w = kron(&x, &y);
            let g = partial_trace(&w, (2, 3), Factor::G).unwrap();
            let h = partial_trace(&w, (2, 3), Factor::H).unwrap();
            assert!(g.sub(&x.scale(y.trace())).frobenius_norm() < 1e-12);
            assert!(h.sub(&y.scale(x.trace())).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_bell() {
        let inv = 1.0 / 2f64.sqrt();
        let bell = ComplexMatrix::col_vector(&[
            C64::new(inv, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(inv, 0.0),
        ]);
        let w = bell.mul(&bell.dagger());
        for keep in [Factor::G, Factor::H] {
            let m = partial_trace(&w, (2, 2), keep).unwrap();
            assert!(m.sub(&ComplexMatrix::identity(2).scale_re(0.5)).frobenius_norm() < 1e-14);
        }
    }

    #[test]
    fn partial_trace_diagonal_oracle() {
        // Explicit index-summation oracle on diag(0.1, 0.2, 0.3, 0.4): keeping H
        // sums the G-blocks, giving diag(0.1 + 0.3, 0.2 + 0.4).
        let w = ComplexMatrix::diag(&[0.1, 0.2, 0.3, 0.4]);
        let h = partial_trace(&w, (2, 2), Factor::H).unwrap();
        assert!((h[(0, 0)].re - 0.4).abs() < 1e-14);
        assert!((h[(1, 1)].re - 0.6).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_is_linear_and_trace_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 6, 6);
            let b = random_matrix(&mut rng, 6, 6);
            let sum = partial_trace(&a.add(&b), (2, 3), Factor::H).unwrap();
            let parts = partial_trace(&a, (2, 3), Factor::H)
                .unwrap()
                .add(&partial_trace(&b, (2, 3), Factor::H).unwrap());
            assert!(sum.sub(&parts).frobenius_norm() < 1e-12);
            let t = partial_trace(&a, (2, 3), Factor::G).unwrap().trace();
            assert!((t - a.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let w = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&w, (2, 3), Factor::G),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kron_mixed_product_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 2, 3);
            let b = random_matrix(&mut rng, 2, 2);
            let c = random_matrix(&mut rng, 3, 2);
            let d = random_matrix(&mut rng, 2, 3);
            let lhs = kron(&a, &b).mul(&kron(&c, &d));
            let rhs = kron(&a.mul(&c), &b.mul(&d));
            assert!(lhs.sub(&rhs).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 3, 2);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"rows\":3") && s.contains("\"re_im\""));
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn rejects_non_finite_entries() {
        let bad = vec![C64::new(f64::NAN, 0.0)];
        assert!(matches!(ComplexMatrix::new(1, 1, bad), Err(Error::NonFinite { .. })));
    }
}
