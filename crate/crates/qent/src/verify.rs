//! Seeded self-check suite: runs the library's structural invariants on
//! random instances and reports per-check pass counts. Shared by the
//! `verify` CLI command and by the integration tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::capacity::{verify_ordering, OptimizerConfig};
use crate::channels::{apply_state, apply_to_output_factor, dilate, random_channel};
use crate::entangle::{
    compound_from_amplitude, entangling_from_amplitude, random_joint_amplitude, standard_compound,
};
use crate::entropy::{conditional_and_disentanglement, mutual_entropy, relative_entropy, von_neumann};
use crate::error::Result;
use crate::linalg::{hermitian_eig, partial_trace, Factor};
use crate::states::random_density;

/// Outcome of one named invariant across all trials.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug)]
pub struct VerifySummary {
    pub checks: Vec<CheckResult>,
    pub trials_per_dim: usize,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Run the invariant suite on `trials` seeded random instances per
/// dimension. `dims` must be drawn from {2, 3, 4}; `trials = 0` yields a
/// vacuous pass (every check reports zero trials).
pub fn run_suite(dims: &[usize], trials: usize, seed: u64) -> Result<VerifySummary> {
    for &d in dims {
        if !(2..=4).contains(&d) {
            return Err(crate::error::Error::BadParam {
                context: format!("verify supports dims 2..=4, got {d}"),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut q_entropy = CheckResult { name: "q_entropy_doubling", trials: 0, failures: 0 };
    let mut disent = CheckResult { name: "disentanglement_at_standard", trials: 0, failures: 0 };
    let mut rel_axioms = CheckResult { name: "relative_entropy_axioms", trials: 0, failures: 0 };
    let mut monotone = CheckResult { name: "mutual_entropy_monotone", trials: 0, failures: 0 };
    let mut reshuffle = CheckResult { name: "entangling_marginals", trials: 0, failures: 0 };
    let mut channel_tp = CheckResult { name: "channel_trace_preserving", trials: 0, failures: 0 };
    let mut dilation = CheckResult { name: "dilation_round_trip", trials: 0, failures: 0 };
    let mut ordering = CheckResult { name: "info_ordering", trials: 0, failures: 0 };

    for &dim in dims {
        for trial in 0..trials {
            let rho = random_density(dim, dim, &mut rng)?;

            // Mutual entropy of the standard compound doubles the von
            // Neumann entropy of the marginal.
            q_entropy.trials += 1;
            let w = standard_compound(&rho)?;
            let i = mutual_entropy(&w);
            if !i.finite || (i.nats - 2.0 * von_neumann(&rho).nats).abs() > 1e-8 {
                q_entropy.failures += 1;
            }

            // Disentanglement degree at the standard compound equals
            // tr rho ln rho (the negative entropy).
            disent.trials += 1;
            let (_, deg) = conditional_and_disentanglement(&w);
            if !deg.finite || (deg.nats + von_neumann(&rho).nats).abs() > 1e-8 {
                disent.failures += 1;
            }

            // Relative entropy: nonnegative, zero on equal arguments.
            rel_axioms.trials += 1;
            let phi = random_density(dim, dim, &mut rng)?;
            let s = relative_entropy(&rho, &phi)?;
            let s_self = relative_entropy(&rho, &rho)?;
            if !s.finite || s.nats < -1e-10 || !s_self.finite || s_self.nats.abs() > 1e-10 {
                rel_axioms.failures += 1;
            }

            // A channel on either factor never increases mutual entropy.
            monotone.trials += 1;
            let ch = random_channel(dim, dim, dim, seed ^ (trial as u64) << 8 ^ dim as u64)?;
            let after = apply_to_output_factor(&ch, &w)?;
            if mutual_entropy(&after).nats > i.nats + 1e-8 {
                monotone.failures += 1;
            }

            // Amplitude <-> entangling reshuffle preserves the compound
            // state and its marginals.
            reshuffle.trials += 1;
            let ups = random_joint_amplitude(dim, dim, dim, &mut rng)?;
            let wj = compound_from_amplitude(&ups)?;
            let kap = entangling_from_amplitude(&ups)?;
            let rho_h = partial_trace(wj.omega(), (dim, dim), Factor::H)?;
            let via_kappa = {
                let m = kap.matrix().mul(&kap.matrix().dagger());
                partial_trace(&m, (dim, dim), Factor::H)?
            };
            if rho_h.sub(&via_kappa).frobenius_norm() > 1e-9 {
                reshuffle.failures += 1;
            }

            // Channels preserve trace and positivity.
            channel_tp.trials += 1;
            match apply_state(&ch, &rho) {
                Ok(out) => {
                    let tr = out.matrix().trace().re;
                    let min_ev = hermitian_eig(out.matrix())?
                        .eigenvalues
                        .iter()
                        .cloned()
                        .fold(f64::INFINITY, f64::min);
                    if (tr - 1.0).abs() > 1e-9 || min_ev < -1e-9 {
                        channel_tp.failures += 1;
                    }
                }
                Err(_) => channel_tp.failures += 1,
            }

            // The Stinespring dilation reproduces the Kraus action.
            dilation.trials += 1;
            let y = dilate(&ch);
            if y.normalization_residual() > 1e-9 {
                dilation.failures += 1;
            } else {
                let direct = apply_state(&ch, &rho)?;
                let via = y.apply(&rho)?;
                if direct.matrix().sub(via.matrix()).frobenius_norm() > 1e-8 {
                    dilation.failures += 1;
                }
            }

            // I_q >= I_d >= I_o (qubit only: the nested searches dominate
            // the runtime at higher dimension).
            if dim == 2 {
                ordering.trials += 1;
                let cfg = OptimizerConfig {
                    restarts: 2,
                    max_iters: 60,
                    seed: seed.wrapping_add(trial as u64),
                    ..Default::default()
                };
                if verify_ordering(&ch, &rho, &cfg).is_err() {
                    ordering.failures += 1;
                }
            }
        }
    }

    Ok(VerifySummary {
        checks: vec![
            q_entropy, disent, rel_axioms, monotone, reshuffle, channel_tp, dilation, ordering,
        ],
        trials_per_dim: trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_run() {
        let summary = run_suite(&[2, 3], 2, 42).unwrap();
        assert!(summary.all_passed(), "{:?}", summary.checks);
    }

    #[test]
    fn zero_trials_is_vacuous_pass() {
        let summary = run_suite(&[2, 3, 4], 0, 7).unwrap();
        assert!(summary.all_passed());
        assert!(summary.checks.iter().all(|c| c.trials == 0));
    }

    #[test]
    fn rejects_unsupported_dim() {
        assert!(run_suite(&[5], 1, 0).is_err());
    }
}
