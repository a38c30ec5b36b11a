//! Channel information functionals I_q, I_d, I_o at a fixed input state,
//! the q-/d-/o-capacities via an outer search over inputs, and the
//! ordering verifier I_q >= I_d >= I_o.
//!
//! I_q is a closed form (mutual entropy of the channel applied to the
//! standard compound). I_d maximizes the average output relative entropy
//! over pure decompositions of the input, parametrized through the
//! purification trick: columns of rho0^{1/2} V for a co-isometry V mix
//! back to rho0 automatically, so the constrained ensemble search becomes
//! an unconstrained search over V. I_o restricts to orthogonal
//! decompositions; for nondegenerate spectra that is the unique Schatten
//! decomposition, otherwise basis rotations inside degenerate eigenspaces
//! are searched.
//!
//! Searches are derivative-free compass sweeps with seeded restarts.
//! Restarts run in parallel; each derives its own ChaCha8 stream from
//! (seed, restart index) and the argmax reduction breaks ties by lowest
//! restart index, so results do not depend on scheduling.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channels::{apply_to_output_factor, KrausChannel};
use crate::entangle::standard_compound;
use crate::entropy::{mutual_entropy, relative_entropy_from_eigs};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, matrix_func_on_support, orthonormalize_columns, ComplexMatrix, EigenSystem,
    SpectralFn,
};
use crate::states::{DensityOperator, Ensemble};

/// Knobs for the derivative-free searches.
#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    /// Number of seeded restarts (the first uses the deterministic seed
    /// point, not the RNG).
    pub restarts: usize,
    /// Cap on compass sweeps per restart.
    pub max_iters: usize,
    /// Convergence threshold on per-sweep objective improvement.
    pub tol: f64,
    pub seed: u64,
    /// Pure-state count for the d-search; defaults to dim_in^2.
    pub ensemble_size_cap: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 4, max_iters: 120, tol: 1e-9, seed: 0, ensemble_size_cap: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfoKind {
    Q,
    D,
    O,
}

impl std::str::FromStr for InfoKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(InfoKind::Q),
            "d" => Ok(InfoKind::D),
            "o" => Ok(InfoKind::O),
            _ => Err(Error::BadParam { context: format!("unknown info kind `{s}`") }),
        }
    }
}

/// The maximizer found by a search.
#[derive(Clone, Debug)]
pub enum Argmax {
    /// The standard compound (q-functional, no search).
    Standard(crate::entangle::CompoundState),
    /// Pure-state decomposition of the input (d-/o-functionals).
    Decomposition(Ensemble),
}

#[derive(Clone, Debug)]
pub struct InfoReport {
    pub kind: InfoKind,
    pub value: f64,
    pub argmax: Argmax,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct CapacityReport {
    pub report: InfoReport,
    /// The maximizing input state found by the outer search.
    pub input: DensityOperator,
}

#[derive(Clone, Debug)]
pub struct OrderingReport {
    pub i_q: f64,
    pub i_d: f64,
    pub i_o: f64,
    pub pass: bool,
}

// ---------------------------------------------------------------------------
// Compass search

const STEP_INIT: f64 = 0.25;
const STEP_FLOOR: f64 = 1e-4;

struct SearchOutcome {
    x: Vec<f64>,
    value: f64,
    sweeps: usize,
    converged: bool,
}

/// Maximize `f` by coordinate compass sweeps with step halving.
fn compass_search(
    x0: Vec<f64>,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    max_sweeps: usize,
    tol: f64,
) -> SearchOutcome {
    let mut x = x0;
    let mut best = f(&x);
    let mut step = STEP_INIT;
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_sweeps {
        sweeps += 1;
        let before = best;
        for i in 0..x.len() {
            let orig = x[i];
            for dir in [step, -step] {
                x[i] = orig + dir;
                let v = f(&x);
                if v > best {
                    best = v;
                    break;
                }
                x[i] = orig;
            }
        }
        if best - before < tol {
            step *= 0.5;
            if step < STEP_FLOOR {
                converged = true;
                break;
            }
        }
    }
    SearchOutcome { x, value: best, sweeps, converged }
}

fn params_to_matrix(params: &[f64], rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        C64::new(params[k], params[k + 1])
    })
}

fn matrix_to_params(m: &ComplexMatrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out
}

fn random_params(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Deterministic argmax over restart outcomes: strictly greater value
/// wins, ties keep the lowest restart index.
fn best_outcome(outcomes: Vec<SearchOutcome>) -> SearchOutcome {
    outcomes
        .into_iter()
        .reduce(|best, cand| if cand.value > best.value { cand } else { best })
        .expect("at least one restart")
}

// ---------------------------------------------------------------------------
// Shared objective machinery

fn raw_apply(ch: &KrausChannel, m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(ch.dim_out(), ch.dim_out());
    for k in ch.kraus() {
        out = out.add(&k.mul(m).mul(&k.dagger()));
    }
    out
}

/// Pure decomposition of rho0 read off a co-isometry V (orthonormal rows):
/// sub-normalized amplitudes a_n = rho0^{1/2} v_n.
fn ensemble_from_coisometry(sqrt_rho: &ComplexMatrix, v: &ComplexMatrix) -> Vec<(f64, ComplexMatrix)> {
    let mut items = Vec::with_capacity(v.cols());
    for n in 0..v.cols() {
        let a = sqrt_rho.mul(&ComplexMatrix::col_vector(&v.column(n)));
        let mu = a.frobenius_norm().powi(2);
        if mu < 1e-12 {
            continue;
        }
        let eta = a.scale_re(1.0 / mu.sqrt());
        items.push((mu, eta.mul(&eta.dagger())));
    }
    items
}

/// sum_n mu(n) S(Lambda(rho_n) || Lambda(rho0)) for pure components given
/// as raw projectors.
fn holevo_objective(
    ch: &KrausChannel,
    out0_eig: &EigenSystem,
    items: &[(f64, ComplexMatrix)],
) -> f64 {
    let mut total = 0.0;
    for (mu, proj) in items {
        let out_n = raw_apply(ch, proj);
        let Ok(eig_n) = hermitian_eig(&out_n) else { return f64::NEG_INFINITY };
        let s = relative_entropy_from_eigs(&eig_n, out0_eig);
        if !s.finite {
            // mu Lambda(rho_n) <= Lambda(rho0), so a reported infinity is
            // pure round-off near the support boundary; treat as no gain.
            continue;
        }
        total += mu * s.nats;
    }
    total
}

fn coisometry_from_params(params: &[f64], dim: usize, cap: usize) -> ComplexMatrix {
    let m = params_to_matrix(params, dim, cap);
    // Orthonormal rows: orthonormalize the columns of the transpose.
    orthonormalize_columns(&m.transpose()).transpose()
}

// ---------------------------------------------------------------------------
// Information functionals

/// I_q(rho0, Lambda): mutual entropy of the channel applied to the output
/// factor of the standard compound of rho0. Closed form, no search.
pub fn info_q(rho0: &DensityOperator, ch: &KrausChannel) -> Result<InfoReport> {
    if rho0.dim() != ch.dim_in() {
        return Err(Error::DimensionMismatch {
            context: format!("input dim {} vs channel input dim {}", rho0.dim(), ch.dim_in()),
        });
    }
    let standard = standard_compound(rho0)?;
    let out = apply_to_output_factor(ch, &standard)?;
    let value = mutual_entropy(&out).nats;
    Ok(InfoReport { kind: InfoKind::Q, value, argmax: Argmax::Standard(standard), iterations: 0, converged: true })
}

/// I_d(rho0, Lambda): supremum of sum mu(n) S(Lambda(rho_n)||Lambda(rho0))
/// over pure-state decompositions of rho0.
pub fn info_d(rho0: &DensityOperator, ch: &KrausChannel, cfg: &OptimizerConfig) -> Result<InfoReport> {
    if rho0.dim() != ch.dim_in() {
        return Err(Error::DimensionMismatch {
            context: format!("input dim {} vs channel input dim {}", rho0.dim(), ch.dim_in()),
        });
    }
    let dim = rho0.dim();
    let cap = cfg.ensemble_size_cap.unwrap_or(dim * dim).max(dim);
    let sqrt_rho = matrix_func_on_support(rho0.matrix(), SpectralFn::Sqrt)?;
    let out0_eig = hermitian_eig(&raw_apply(ch, rho0.matrix()))?;

    let objective = |params: &[f64]| -> f64 {
        let v = coisometry_from_params(params, dim, cap);
        holevo_objective(ch, &out0_eig, &ensemble_from_coisometry(&sqrt_rho, &v))
    };

    // Seed points: the Schatten decomposition, the orthogonal optimum
    // (guarantees I_d >= I_o up to round-off), then random restarts.
    let rho_eig = hermitian_eig(rho0.matrix())?;
    let schatten_v = ComplexMatrix::from_fn(dim, cap, |i, j| {
        if j < dim { rho_eig.eigenvectors[(i, j)] } else { C64::new(0.0, 0.0) }
    });
    let ortho = orthogonal_best(rho0, ch, cfg)?;
    let ortho_v = ComplexMatrix::from_fn(dim, cap, |i, j| {
        if j < dim { ortho.basis[(i, j)] } else { C64::new(0.0, 0.0) }
    });

    let n_params = 2 * dim * cap;
    let mut starts = vec![matrix_to_params(&schatten_v), matrix_to_params(&ortho_v)];
    for r in starts.len()..cfg.restarts.max(starts.len()) {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(r as u64 + 1);
        starts.push(random_params(n_params, &mut rng));
    }

    let outcomes: Vec<SearchOutcome> = starts
        .into_par_iter()
        .map(|x0| compass_search(x0, &objective, cfg.max_iters, cfg.tol))
        .collect();
    let best = best_outcome(outcomes);

    let v = coisometry_from_params(&best.x, dim, cap);
    let ensemble = decomposition_to_ensemble(&ensemble_from_coisometry(&sqrt_rho, &v))?;
    Ok(InfoReport {
        kind: InfoKind::D,
        value: best.value,
        argmax: Argmax::Decomposition(ensemble),
        iterations: best.sweeps,
        converged: best.converged,
    })
}

fn decomposition_to_ensemble(items: &[(f64, ComplexMatrix)]) -> Result<Ensemble> {
    let total: f64 = items.iter().map(|(mu, _)| mu).sum();
    let mut list = Vec::with_capacity(items.len());
    for (mu, proj) in items {
        list.push((mu / total, crate::states::validate_density(proj)?));
    }
    Ensemble::new(list)
}

struct OrthoOutcome {
    value: f64,
    /// Orthonormal eigenbasis realizing the value, columns ordered by
    /// descending eigenvalue.
    basis: ComplexMatrix,
    weights: Vec<f64>,
    sweeps: usize,
    converged: bool,
}

const DEGENERACY_GAP: f64 = 1e-9;

/// Best orthogonal decomposition: the Schatten decomposition directly for
/// nondegenerate spectra, otherwise a search over basis rotations inside
/// each degenerate eigenspace.
fn orthogonal_best(
    rho0: &DensityOperator,
    ch: &KrausChannel,
    cfg: &OptimizerConfig,
) -> Result<OrthoOutcome> {
    let dim = rho0.dim();
    let eig = hermitian_eig(rho0.matrix())?;
    let out0_eig = hermitian_eig(&raw_apply(ch, rho0.matrix()))?;

    // Cluster the (descending) eigenvalues at the degeneracy gap.
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..dim {
        if eig.eigenvalues[i - 1] - eig.eigenvalues[i] <= DEGENERACY_GAP {
            clusters.last_mut().unwrap().push(i);
        } else {
            clusters.push(vec![i]);
        }
    }

    let evaluate_basis = |basis: &ComplexMatrix| -> f64 {
        let items: Vec<(f64, ComplexMatrix)> = (0..dim)
            .filter(|&n| eig.eigenvalues[n] > 1e-12)
            .map(|n| {
                let e = ComplexMatrix::col_vector(&basis.column(n));
                (eig.eigenvalues[n], e.mul(&e.dagger()))
            })
            .collect();
        holevo_objective(ch, &out0_eig, &items)
    };

    if clusters.iter().all(|c| c.len() == 1) {
        let value = evaluate_basis(&eig.eigenvectors);
        return Ok(OrthoOutcome {
            value,
            basis: eig.eigenvectors.clone(),
            weights: eig.eigenvalues.clone(),
            sweeps: 0,
            converged: true,
        });
    }

    // Rotations inside the degenerate blocks only.
    let free: Vec<&Vec<usize>> = clusters.iter().filter(|c| c.len() > 1).collect();
    let n_params: usize = free.iter().map(|c| 2 * c.len() * c.len()).sum();
    let basis_from_params = |params: &[f64]| -> ComplexMatrix {
        let mut basis = eig.eigenvectors.clone();
        let mut offset = 0;
        for cluster in &free {
            let k = cluster.len();
            let q = orthonormalize_columns(&params_to_matrix(&params[offset..offset + 2 * k * k], k, k));
            offset += 2 * k * k;
            for col in 0..k {
                for row in 0..dim {
                    let mut acc = C64::new(0.0, 0.0);
                    for (i, &idx) in cluster.iter().enumerate() {
                        acc += eig.eigenvectors[(row, idx)] * q[(i, col)];
                    }
                    basis[(row, cluster[col])] = acc;
                }
            }
        }
        basis
    };
    let objective = |params: &[f64]| evaluate_basis(&basis_from_params(params));

    // Identity rotation first, then random restarts.
    let mut starts = vec![{
        let mut p = vec![0.0; n_params];
        let mut offset = 0;
        for cluster in &free {
            let k = cluster.len();
            for i in 0..k {
                p[offset + 2 * (i * k + i)] = 1.0;
            }
            offset += 2 * k * k;
        }
        p
    }];
    for r in 1..cfg.restarts.max(1) {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(0x6f00 + r as u64);
        starts.push(random_params(n_params, &mut rng));
    }
    let outcomes: Vec<SearchOutcome> = starts
        .into_par_iter()
        .map(|x0| compass_search(x0, &objective, cfg.max_iters, cfg.tol))
        .collect();
    let best = best_outcome(outcomes);
    Ok(OrthoOutcome {
        value: best.value,
        basis: basis_from_params(&best.x),
        weights: eig.eigenvalues.clone(),
        sweeps: best.sweeps,
        converged: best.converged,
    })
}

/// I_o(rho0, Lambda): the d-objective restricted to orthogonal
/// decompositions of rho0.
pub fn info_o(rho0: &DensityOperator, ch: &KrausChannel, cfg: &OptimizerConfig) -> Result<InfoReport> {
    if rho0.dim() != ch.dim_in() {
        return Err(Error::DimensionMismatch {
            context: format!("input dim {} vs channel input dim {}", rho0.dim(), ch.dim_in()),
        });
    }
    let best = orthogonal_best(rho0, ch, cfg)?;
    let mut items = Vec::new();
    let total: f64 = best.weights.iter().filter(|&&w| w > 1e-12).sum();
    for (n, &w) in best.weights.iter().enumerate() {
        if w <= 1e-12 {
            continue;
        }
        let e = ComplexMatrix::col_vector(&best.basis.column(n));
        items.push((w / total, crate::states::validate_density(&e.mul(&e.dagger()))?));
    }
    Ok(InfoReport {
        kind: InfoKind::O,
        value: best.value,
        argmax: Argmax::Decomposition(Ensemble::new(items)?),
        iterations: best.sweeps,
        converged: best.converged,
    })
}

// ---------------------------------------------------------------------------
// Capacities

/// Supremum over input states of the chosen information functional, by a
/// seeded compass search over (eigenvalue simplex) x (unitary factor).
pub fn capacity(ch: &KrausChannel, kind: InfoKind, cfg: &OptimizerConfig) -> Result<CapacityReport> {
    let dim = ch.dim_in();
    let n_params = dim + 2 * dim * dim;
    // Cheaper inner search while scanning inputs.
    let inner = OptimizerConfig {
        restarts: 2,
        max_iters: cfg.max_iters.min(60),
        tol: cfg.tol.max(1e-8),
        seed: cfg.seed,
        ensemble_size_cap: cfg.ensemble_size_cap,
    };

    let state_from_params = |params: &[f64]| -> DensityOperator {
        let logits = &params[..dim];
        let max_l = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|&l| (l - max_l).exp()).collect();
        let z: f64 = exps.iter().sum();
        let lambdas: Vec<f64> = exps.iter().map(|e| e / z).collect();
        let q = orthonormalize_columns(&params_to_matrix(&params[dim..], dim, dim));
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (n, &lam) in lambdas.iter().enumerate() {
            let col = ComplexMatrix::col_vector(&q.column(n));
            m = m.add(&col.mul(&col.dagger()).scale_re(lam));
        }
        crate::states::validate_density(&m).expect("simplex-unitary parametrization yields a density")
    };

    let objective = |params: &[f64]| -> f64 {
        let rho0 = state_from_params(params);
        match kind {
            InfoKind::Q => info_q(&rho0, ch).map(|r| r.value),
            InfoKind::D => info_d(&rho0, ch, &inner).map(|r| r.value),
            InfoKind::O => info_o(&rho0, ch, &inner).map(|r| r.value),
        }
        .unwrap_or(f64::NEG_INFINITY)
    };

    // Tracial input first, then random restarts.
    let mut tracial = vec![0.0; n_params];
    for i in 0..dim {
        tracial[dim + 2 * (i * dim + i)] = 1.0;
    }
    let mut starts = vec![tracial];
    for r in 1..cfg.restarts.max(1) {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(0xca90 + r as u64);
        starts.push(random_params(n_params, &mut rng));
    }
    let outcomes: Vec<SearchOutcome> = starts
        .into_par_iter()
        .map(|x0| compass_search(x0, &objective, cfg.max_iters, cfg.tol))
        .collect();
    let best = best_outcome(outcomes);

    let input = state_from_params(&best.x);
    // Final report at full inner effort.
    let mut report = match kind {
        InfoKind::Q => info_q(&input, ch)?,
        InfoKind::D => info_d(&input, ch, cfg)?,
        InfoKind::O => info_o(&input, ch, cfg)?,
    };
    report.value = report.value.max(best.value);
    report.iterations = report.iterations.max(best.sweeps);
    report.converged = report.converged && best.converged;
    Ok(CapacityReport { report, input })
}

/// Compute (I_q, I_d, I_o) at the given input and check the ordering
/// I_q >= I_d >= I_o within the documented slack.
pub fn verify_ordering(
    ch: &KrausChannel,
    rho0: &DensityOperator,
    cfg: &OptimizerConfig,
) -> Result<OrderingReport> {
    const SLACK: f64 = 1e-6;
    let i_q = info_q(rho0, ch)?.value;
    let i_d = info_d(rho0, ch, cfg)?.value;
    let i_o = info_o(rho0, ch, cfg)?.value;
    let pass = i_q >= i_d - SLACK && i_d >= i_o - SLACK;
    if !pass {
        return Err(Error::OrderingViolated { i_q, i_d, i_o });
    }
    Ok(OrderingReport { i_q, i_d, i_o, pass })
}
