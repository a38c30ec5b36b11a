//! End-to-end acceptance gate. Each test covers one release criterion and
//! prints a single pass/fail line; the assertions carry the same
//! tolerances as the printed checks.

use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qent::capacity::{capacity, info_d, info_o, info_q, verify_ordering, InfoKind, OptimizerConfig};
use qent::channels::{channel_zoo, random_channel, ZooParams};
use qent::entangle::standard_compound;
use qent::entropy::{
    conditional_and_disentanglement, mutual_entropy, relative_entropy, scalar_entropy, von_neumann,
};
use qent::linalg::ComplexMatrix;
use qent::states::{random_density, validate_density, DensityOperator};

fn report(name: &str, pass: bool) {
    println!("criterion {}: {}", name, if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {name} failed");
}

/// 1. Mutual entropy of the standard compound doubles the von Neumann
///    entropy: 100 random densities at dims 2, 3, 4, tolerance 1e-8.
#[test]
fn criterion_1_q_entropy_doubling() {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst: f64 = 0.0;
    for dim in [2usize, 3, 4] {
        for _ in 0..100 {
            let rho = random_density(dim, dim, &mut rng).unwrap();
            let i = mutual_entropy(&standard_compound(&rho).unwrap());
            assert!(i.finite);
            let gap = (i.nats - 2.0 * von_neumann(&rho).nats).abs();
            worst = worst.max(gap);
        }
    }
    report(&format!("1 (q-entropy doubling, worst gap {worst:.2e})"), worst <= 1e-8);
}

/// 2. Noiseless qubit channel: I_d = I_o = S(rho0) within 1e-6 for 20
///    random inputs; C_d = ln 2 and C_q = ln 4 within 2e-3.
#[test]
fn criterion_2_deterministic_channel_values() {
    let ch = channel_zoo("identity", &ZooParams::Dim(2)).unwrap();
    let cfg = OptimizerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let rho = random_density(2, 2, &mut rng).unwrap();
        let s = von_neumann(&rho).nats;
        worst = worst.max((info_d(&rho, &ch, &cfg).unwrap().value - s).abs());
        worst = worst.max((info_o(&rho, &ch, &cfg).unwrap().value - s).abs());
    }
    let pass_info = worst <= 1e-6;

    let cap_cfg = OptimizerConfig { restarts: 2, max_iters: 60, ..Default::default() };
    let c_d = capacity(&ch, InfoKind::D, &cap_cfg).unwrap().report.value;
    let c_q = capacity(&ch, InfoKind::Q, &cap_cfg).unwrap().report.value;
    let gap_d = (c_d - 2f64.ln()).abs();
    let gap_q = (c_q - 4f64.ln()).abs();
    report(
        &format!(
            "2 (deterministic channel: info gap {worst:.2e}, C_d gap {gap_d:.2e}, C_q gap {gap_q:.2e})"
        ),
        pass_info && gap_d <= 2e-3 && gap_q <= 2e-3,
    );
}

/// 3. Ordering I_q >= I_d >= I_o on 100 random qubit channels with random
///    inputs, slack 1e-6.
#[test]
fn criterion_3_information_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let cfg = OptimizerConfig { restarts: 2, max_iters: 60, ..Default::default() };
    let mut failures = 0;
    for trial in 0..100u64 {
        let rho = random_density(2, 2, &mut rng).unwrap();
        let ch = random_channel(2, 2, 2, 30_000 + trial).unwrap();
        if verify_ordering(&ch, &rho, &cfg).is_err() {
            failures += 1;
        }
    }
    report(&format!("3 (ordering, {failures}/100 violations)"), failures == 0);
}

/// 4. Disentanglement degree at the standard compound equals tr rho ln rho
///    for 50 random densities, tolerance 1e-8.
#[test]
fn criterion_4_disentanglement_at_standard() {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut worst: f64 = 0.0;
    for dim in [2usize, 3] {
        for _ in 0..25 {
            let rho = random_density(dim, dim, &mut rng).unwrap();
            let (_, degree) = conditional_and_disentanglement(&standard_compound(&rho).unwrap());
            assert!(degree.finite);
            // tr rho ln rho = -S(rho).
            worst = worst.max((degree.nats + von_neumann(&rho).nats).abs());
        }
    }
    report(&format!("4 (disentanglement infimum, worst gap {worst:.2e})"), worst <= 1e-8);
}

/// 5. A channel on the probe factor never increases mutual entropy:
///    100 trials at 2x2, slack 1e-8.
#[test]
fn criterion_5_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut worst: f64 = f64::NEG_INFINITY;
    for trial in 0..100u64 {
        let ups = qent::entangle::random_joint_amplitude(2, 2, 2, &mut rng).unwrap();
        let w = qent::entangle::compound_from_amplitude(&ups).unwrap();
        let ch = random_channel(2, 2, 2, 50_000 + trial).unwrap();
        let before = mutual_entropy(&w).nats;
        let after = mutual_entropy(
            &qent::channels::apply_to_probe_factor(&ch, &w).unwrap(),
        )
        .nats;
        worst = worst.max(after - before);
    }
    report(&format!("5 (monotonicity, worst increase {worst:.2e})"), worst <= 1e-8);
}

/// 6. Relative-entropy axioms: nonnegativity and zero-iff-equal on 200
///    random pairs (slack 1e-10), and +infinity exactly on three targeted
///    support-violation fixtures.
#[test]
fn criterion_6_relative_entropy_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let mut pass = true;
    for trial in 0..200 {
        let dim = [2, 3, 4][trial % 3];
        let rho = random_density(dim, dim, &mut rng).unwrap();
        let phi = random_density(dim, dim, &mut rng).unwrap();
        let s = relative_entropy(&rho, &phi).unwrap();
        pass &= s.finite && s.nats >= -1e-10;
        let s_self = relative_entropy(&rho, &rho).unwrap();
        pass &= s_self.finite && s_self.nats.abs() <= 1e-10;
        // Distinct states separate strictly.
        if rho.matrix().sub(phi.matrix()).frobenius_norm() > 1e-6 {
            pass &= s.nats > 0.0;
        }
    }

    // Support violations: the first argument leaks outside the support of
    // the second in three configurations.
    let pure0 = DensityOperator::basis_state(2, 0);
    let pure1 = DensityOperator::basis_state(2, 1);
    let mixed = DensityOperator::maximally_mixed(2);
    let partial = validate_density(&ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
    let fixtures = [
        relative_entropy(&mixed, &pure0).unwrap(),
        relative_entropy(&pure0, &pure1).unwrap(),
        relative_entropy(&mixed, &partial).unwrap(),
    ];
    pass &= fixtures.iter().all(|s| s.is_infinite());
    // And the reversed inclusions stay finite.
    pass &= relative_entropy(&pure0, &mixed).unwrap().finite;
    pass &= relative_entropy(&partial, &mixed).unwrap().finite;
    report("6 (relative-entropy axioms)", pass);
}

/// 7. Depolarizing sweep regression: I_q matches the Bell-spectrum closed
///    form within 1e-8, I_d matches ln 2 - h(p/2) within 1e-4, and both agree
///    with the committed fixture CSV.
#[test]
fn criterion_7_depolarizing_sweep_regression() {
    let rho = DensityOperator::maximally_mixed(2);
    let cfg = OptimizerConfig::default();
    let ln2 = 2f64.ln();
    let fixture = include_str!("fixtures/depolarizing_sweep.csv");
    let rows: Vec<&str> = fixture.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);

    let mut worst_q: f64 = 0.0;
    let mut worst_d: f64 = 0.0;
    let mut fixture_ok = true;
    for (k, row) in rows.iter().enumerate() {
        let p = 0.25 * k as f64;
        let ch = channel_zoo("depolarizing", &ZooParams::Noise(p)).unwrap();
        let i_q = info_q(&rho, &ch).unwrap().value;
        let i_d = info_d(&rho, &ch, &cfg).unwrap().value;

        let closed_q = 2.0 * ln2 - scalar_entropy(&[1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p]);
        let closed_d = ln2 - scalar_entropy(&[p / 2.0, 1.0 - p / 2.0]);
        worst_q = worst_q.max((i_q - closed_q).abs());
        worst_d = worst_d.max((i_d - closed_d).abs());

        let cols: Vec<f64> = row.split(',').skip(1).map(|c| c.parse().unwrap()).collect();
        fixture_ok &= (i_q - cols[0]).abs() <= 1e-8 && (i_d - cols[1]).abs() <= 1e-4;
    }
    report(
        &format!("7 (sweep regression, I_q gap {worst_q:.2e}, I_d gap {worst_d:.2e})"),
        worst_q <= 1e-8 && worst_d <= 1e-4 && fixture_ok,
    );
}

/// 8. Determinism: the sweep subcommand run twice with the same seed
///    writes byte-identical CSV.
#[test]
fn criterion_8_sweep_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    serde_json::to_writer(
        std::fs::File::create(&state).unwrap(),
        &DensityOperator::maximally_mixed(2),
    )
    .unwrap();

    let run = |out: &std::path::Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_qent"))
            .args([
                "sweep",
                "--family",
                "depolarizing",
                "--from",
                "0",
                "--to",
                "1",
                "--step",
                "0.25",
                "--seed",
                "7",
            ])
            .arg("--state")
            .arg(&state)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let a = run(&dir.path().join("a.csv"));
    let b = run(&dir.path().join("b.csv"));
    report("8 (sweep determinism)", !a.is_empty() && a == b);
}
