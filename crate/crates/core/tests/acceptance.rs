//! Acceptance gate for the study pipeline. Eight numbered criteria cover
//! closed-form/exact-backend equivalence, trajectory/exact agreement, the
//! three headline decoherence trends, bytewise determinism of the full
//! run, randomized property suites, and the end-to-end time budget. Each
//! test prints one `criterion N PASS` line on success.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcollapse::config::parse_config;
use qcollapse::density::{completeness_deviation, MixedState};
use qcollapse::gates::GateOp;
use qcollapse::noise::{
    noise_probability, phase_damping_kraus, phase_damping_lambda, phase_flip_kraus, NoiseLaw,
    NoisePlacement, NoiseScope, NoiseSpec,
};
use qcollapse::oracle::{
    grover_noiseless_success, predict_branch_visibility, predict_ghz_visibility,
};
use qcollapse::protocols::{
    grover_success, run_branch, run_ghz_parity, Backend, ExperimentConfig, ExperimentKind,
};
use qcollapse::statevector::zero_state;
use qcollapse::sweep::{run_sweep, ResultRow};

const EXACT_TOL: f64 = 1e-9;

fn exact_config(kind: ExperimentKind, noise: NoiseSpec) -> ExperimentConfig {
    ExperimentConfig {
        kind,
        noise,
        phase_points: 64,
        shots: 1,
        seed: 0,
        backend: Backend::Exact,
    }
}

fn trajectory_config(
    kind: ExperimentKind,
    noise: NoiseSpec,
    shots: usize,
    seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        kind,
        noise,
        phase_points: 64,
        shots,
        seed,
        backend: Backend::Trajectory,
    }
}

fn assert_close(label: &str, got: f64, want: f64, tol: f64) {
    assert!(
        (got - want).abs() <= tol,
        "{label}: got {got}, want {want} within {tol}"
    );
}

/// `got` must sit within `sigmas` standard errors of `want`.
fn assert_within_sigma(label: &str, got: f64, want: f64, stderr: f64, sigmas: f64) {
    assert!(
        stderr > 0.0,
        "{label}: stderr must be positive for a sigma bound"
    );
    let diff = (got - want).abs();
    assert!(
        diff <= sigmas * stderr,
        "{label}: |{got} - {want}| = {diff} exceeds {sigmas} x stderr {stderr}"
    );
}

fn rows_for<'a>(rows: &'a [ResultRow], law: &str, size: usize) -> &'a ResultRow {
    rows.iter()
        .find(|r| r.law == law && r.size == size)
        .unwrap_or_else(|| panic!("missing sweep row law={law} size={size}"))
}

#[test]
fn criterion_1_closed_forms_match_exact_backend() {
    let start = Instant::now();
    let mass_laws = [NoiseLaw::default_power(), NoiseLaw::default_exp()];
    let constant = NoiseLaw::default_constant();

    for law in mass_laws.iter().chain([&constant]) {
        let spec = NoiseSpec::new(*law, NoisePlacement::AfterPrep, NoiseScope::AllQubits);
        for n in 2..=8 {
            let config = exact_config(ExperimentKind::GhzParity { n }, spec);
            let (_, vis) = run_ghz_parity(&config).unwrap();
            let predicted = predict_ghz_visibility(&spec, n).unwrap().metric;
            assert_close(
                &format!("ghz n={n} law={}", law.label()),
                vis.value,
                predicted,
                EXACT_TOL,
            );
        }
    }

    let branch_specs = [
        NoiseSpec::new(
            NoiseLaw::default_power(),
            NoisePlacement::AfterPrep,
            NoiseScope::BranchAncillasOnly,
        ),
        NoiseSpec::new(
            NoiseLaw::default_exp(),
            NoisePlacement::AfterPrep,
            NoiseScope::BranchAncillasOnly,
        ),
        NoiseSpec::new(constant, NoisePlacement::AfterPrep, NoiseScope::AllQubits),
    ];
    for spec in &branch_specs {
        for m in 0..=9 {
            let config = exact_config(ExperimentKind::BranchMass { m }, *spec);
            let (_, vis) = run_branch(&config).unwrap();
            let predicted = predict_branch_visibility(spec, m).unwrap().metric;
            assert_close(
                &format!("branch m={m} law={}", spec.law.label()),
                vis.value,
                predicted,
                EXACT_TOL,
            );
        }
    }

    for n in 3..=5 {
        for t in 0..=7 {
            let run = grover_success(n, t, 0.0, Backend::Exact, 1, 0).unwrap();
            let predicted = grover_noiseless_success(n, t).unwrap().metric;
            assert_close(
                &format!("grover n={n} t={t}"),
                run.value,
                predicted,
                EXACT_TOL,
            );
        }
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "oracle equivalence took {elapsed:?}, budget 30 s"
    );
    println!(
        "criterion 1 PASS: closed forms match the exact backend within 1e-9 \
         (ghz n=2..8, branch m=0..9, grover n=3..5 t=0..7) in {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_trajectory_agrees_with_exact_backend() {
    let start = Instant::now();
    let shots = 20_000;

    let ghz_specs = [
        NoiseSpec::new(
            NoiseLaw::default_power(),
            NoisePlacement::AfterPrep,
            NoiseScope::AllQubits,
        ),
        NoiseSpec::new(
            NoiseLaw::default_constant(),
            NoisePlacement::AfterPrep,
            NoiseScope::AllQubits,
        ),
    ];
    for (i, spec) in ghz_specs.iter().enumerate() {
        let kind = ExperimentKind::GhzParity { n: 4 };
        let (_, exact) = run_ghz_parity(&exact_config(kind, *spec)).unwrap();
        let (_, traj) =
            run_ghz_parity(&trajectory_config(kind, *spec, shots, 1000 + i as u64)).unwrap();
        assert_within_sigma(
            &format!("ghz n=4 law={}", spec.law.label()),
            traj.value,
            exact.value,
            traj.stderr,
            4.0,
        );
    }

    let branch_specs = [
        NoiseSpec::new(
            NoiseLaw::default_power(),
            NoisePlacement::AfterPrep,
            NoiseScope::BranchAncillasOnly,
        ),
        NoiseSpec::new(
            NoiseLaw::default_constant(),
            NoisePlacement::AfterPrep,
            NoiseScope::AllQubits,
        ),
    ];
    for (i, spec) in branch_specs.iter().enumerate() {
        let kind = ExperimentKind::BranchMass { m: 3 };
        let (_, exact) = run_branch(&exact_config(kind, *spec)).unwrap();
        let (_, traj) =
            run_branch(&trajectory_config(kind, *spec, shots, 2000 + i as u64)).unwrap();
        assert_within_sigma(
            &format!("branch m=3 law={}", spec.law.label()),
            traj.value,
            exact.value,
            traj.stderr,
            4.0,
        );
    }

    let exact = grover_success(3, 2, 0.08, Backend::Exact, 1, 0).unwrap();
    let traj = grover_success(3, 2, 0.08, Backend::Trajectory, shots, 3000).unwrap();
    assert_within_sigma(
        "grover n=3 t=2 constant p0=0.08",
        traj.value,
        exact.value,
        traj.stderr,
        4.0,
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "backend agreement took {elapsed:?}, budget 60 s"
    );
    println!(
        "criterion 2 PASS: trajectory (20000 shots) within 4 sigma of exact \
         for ghz n=4, branch m=3, grover n=3 t=2 in {elapsed:.2?}"
    );
}

#[test]
fn criterion_3_ghz_visibility_collapse_trend() {
    let plan = parse_config("experiment=ghz").unwrap();
    let rows = run_sweep(&plan).unwrap();

    for n in 5..=8 {
        let row = rows_for(&rows, "power", n);
        assert!(
            row.metric <= 0.02,
            "ghz power n={n}: visibility {} above 0.02",
            row.metric
        );
    }
    let baseline = rows_for(&rows, "constant", 8);
    assert!(
        baseline.metric >= 0.20,
        "ghz constant n=8: visibility {} below 0.20",
        baseline.metric
    );
    let closed_form = 0.84f64.powi(8);
    assert_within_sigma(
        "ghz constant n=8",
        baseline.metric,
        closed_form,
        baseline.stderr,
        4.0,
    );
    println!(
        "criterion 3 PASS: size-scaled law drives ghz visibility to <= 0.02 for n=5..8 \
         while the constant baseline keeps n=8 at {:.3} (>= 0.20)",
        baseline.metric
    );
}

#[test]
fn criterion_4_branch_mass_fringe_collapse_trend() {
    let plan = parse_config("experiment=branch").unwrap();
    let rows = run_sweep(&plan).unwrap();

    let m4 = rows_for(&rows, "power", 4);
    assert_within_sigma("branch power m=4", m4.metric, 0.01679616, m4.stderr, 4.0);
    for m in 5..=12 {
        let row = rows_for(&rows, "power", m);
        assert!(
            row.metric <= 0.02,
            "branch power m={m}: visibility {} above 0.02",
            row.metric
        );
    }
    let baseline = rows_for(&rows, "constant", 4);
    assert_within_sigma(
        "branch constant m=4",
        baseline.metric,
        0.4182119424,
        baseline.stderr,
        4.0,
    );
    println!(
        "criterion 4 PASS: branch fringe visibility at m=4 is {:.4} (4 sigma of 0.0168), \
         <= 0.02 for m=5..12, constant baseline {:.3} near 0.4182",
        m4.metric, baseline.metric
    );
}

#[test]
fn criterion_5_grover_success_suppression_trend() {
    let noiseless = grover_success(3, 2, 0.0, Backend::Trajectory, 2000, 5000).unwrap();
    assert_within_sigma(
        "grover n=3 t=2 noiseless",
        noiseless.value,
        0.9453125,
        noiseless.stderr,
        4.0,
    );

    // default power law saturates at p=0.5 for n=5
    let p = noise_probability(&NoiseLaw::default_power(), 5).unwrap();
    assert_close("saturated dephasing probability", p, 0.5, 0.0);
    for t in 1..=7 {
        let exact = grover_success(5, t, p, Backend::Exact, 1, 0).unwrap();
        let traj = grover_success(5, t, p, Backend::Trajectory, 2000, 5100 + t as u64).unwrap();
        assert!(
            traj.value < 0.2,
            "grover n=5 t={t}: success {} not below 0.2",
            traj.value
        );
        assert_within_sigma(
            &format!("grover n=5 t={t} saturated"),
            traj.value,
            exact.value,
            traj.stderr,
            4.0,
        );
    }
    println!(
        "criterion 5 PASS: noiseless grover n=3 t=2 success {:.3} near 0.9453; \
         saturated-dephasing n=5 success stays below 0.2 and tracks exact for t=1..7",
        noiseless.value
    );
}

#[test]
fn criterion_6_reproduce_is_bytewise_deterministic() {
    let bin = env!("CARGO_BIN_EXE_qcollapse");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let status = Command::new(bin)
            .args(["reproduce", "--seed", "42", "--out-dir"])
            .arg(dir.path())
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success(), "reproduce run failed");
    }
    for name in ["fig2.csv", "fig3.csv", "fig4.csv"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        assert!(!a.is_empty(), "{name} is empty");
        assert_eq!(a, b, "{name} differs between identically seeded runs");
    }
    println!("criterion 6 PASS: two `reproduce --seed 42` runs emit byte-identical CSVs");
}

#[test]
fn criterion_7_randomized_property_suites() {
    const CASES: usize = 128;
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);

    // Kraus completeness for both dephasing parameterizations.
    for _ in 0..CASES {
        let p = rng.random_range(0.0..=0.5);
        let flip = phase_flip_kraus(p).unwrap();
        assert!(completeness_deviation(&flip) <= 1e-12);
        let damping = phase_damping_kraus(phase_damping_lambda(p)).unwrap();
        assert!(completeness_deviation(&damping) <= 1e-12);
    }

    // Trace preservation and diagonal invariance under the channel.
    for _ in 0..CASES {
        let n = rng.random_range(1..=4usize);
        let mut pure = zero_state(n).unwrap();
        for _ in 0..6 {
            let gate = match rng.random_range(0..5u8) {
                0 => GateOp::H(rng.random_range(0..n)),
                1 => GateOp::X(rng.random_range(0..n)),
                2 => GateOp::Rz(rng.random_range(0..n), rng.random_range(-3.2..3.2)),
                3 => GateOp::EquatorialPulse(rng.random_range(0..n), rng.random_range(-3.2..3.2)),
                _ if n >= 2 => {
                    let control = rng.random_range(0..n);
                    let step = rng.random_range(1..n);
                    GateOp::Cnot {
                        control,
                        target: (control + step) % n,
                    }
                }
                _ => GateOp::H(0),
            };
            pure.apply_gate(&gate).unwrap();
        }
        let mut rho = MixedState::from_pure(&pure).unwrap();
        let before = rho.diagonal_probabilities();
        let kraus = phase_flip_kraus(rng.random_range(0.0..=0.5)).unwrap();
        rho.apply_channel(&kraus, rng.random_range(0..n)).unwrap();
        assert!((rho.trace() - 1.0).abs() <= 1e-12, "trace drifted");
        assert!(rho.max_hermiticity_deviation() <= 1e-12);
        let after = rho.diagonal_probabilities();
        for (b, a) in before.iter().zip(&after) {
            assert!((b - a).abs() <= 1e-12, "dephasing moved a population");
        }
    }

    // Predicted visibility is monotone nonincreasing in p.
    for _ in 0..CASES {
        let n = rng.random_range(2..=8usize);
        let mut p1 = rng.random_range(0.0..=0.5);
        let mut p2 = rng.random_range(0.0..=0.5);
        if p1 > p2 {
            std::mem::swap(&mut p1, &mut p2);
        }
        let vis = |p: f64| {
            let spec = NoiseSpec::new(
                NoiseLaw::Constant { p0: p },
                NoisePlacement::AfterPrep,
                NoiseScope::AllQubits,
            );
            predict_ghz_visibility(&spec, n).unwrap().metric
        };
        assert!(vis(p1) + 1e-15 >= vis(p2), "visibility rose with p");
    }

    // Every law lands in [0, 0.5] for any size.
    for _ in 0..CASES {
        let k = rng.random_range(0.0..1.0);
        let alpha = rng.random_range(0.0..4.0);
        let law = match rng.random_range(0..3u8) {
            0 => NoiseLaw::Constant {
                p0: rng.random_range(0.0..=0.5),
            },
            1 => NoiseLaw::PowerLaw { k, alpha },
            _ => NoiseLaw::ExpSaturating { k, alpha },
        };
        let p = noise_probability(&law, rng.random_range(0..=16usize)).unwrap();
        assert!((0.0..=0.5).contains(&p), "law left [0, 0.5]: {p}");
    }

    // The two size-scaled laws agree to second order for small k * size^alpha.
    for _ in 0..CASES {
        let alpha = rng.random_range(0.5..3.0);
        let size = rng.random_range(1..=8usize);
        let x_target = rng.random_range(1e-6..0.05);
        let k = x_target / (size as f64).powf(alpha);
        let power = noise_probability(&NoiseLaw::PowerLaw { k, alpha }, size).unwrap();
        let exp = noise_probability(&NoiseLaw::ExpSaturating { k, alpha }, size).unwrap();
        assert!(
            (power - exp).abs() <= x_target * x_target / 2.0 + 1e-15,
            "laws diverged beyond the quadratic bound"
        );
    }

    const { assert!(CASES >= 100) }
    println!(
        "criterion 7 PASS: completeness, trace preservation, diagonal invariance, \
         visibility monotonicity, clamping, and small-x law agreement over {CASES} cases each"
    );
}

#[test]
fn criterion_8_full_reproduce_within_time_budget() {
    let bin = env!("CARGO_BIN_EXE_qcollapse");
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let status = Command::new(bin)
        .args(["reproduce", "--seed", "42", "--out-dir"])
        .arg(dir.path())
        .stdout(std::process::Stdio::null())
        .status()
        .unwrap();
    let elapsed = start.elapsed();
    assert!(status.success(), "reproduce run failed");
    assert!(
        elapsed < Duration::from_secs(300),
        "full reproduce took {elapsed:?}, budget 300 s"
    );
    for (name, expected_rows) in [("fig2.csv", 14), ("fig3.csv", 26), ("fig4.csv", 42)] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let data_rows = text.lines().count() - 1;
        assert_eq!(data_rows, expected_rows, "{name} row count");
        assert!(dir.path().join(name.replace(".csv", ".svg")).exists());
    }
    println!(
        "criterion 8 PASS: full reproduce (three sweeps, 2000 shots) finished in {elapsed:.2?} \
         with all six artifacts present"
    );
}
