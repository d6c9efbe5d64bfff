//! End-to-end flows through the public API: circuit JSON in; estimates,
//! cost reports and validation artifacts out.

use std::io::Write;

use flonl::nonlinearity::hoeffding_samples;
use flonl::sampler::{dense_reference, required_samples, run};
use flonl::uccsd::{build_circuit, cost_report, extrapolate, load_amplitudes, SIMULATABLE_BUDGET};
use flonl::{validate, CircuitIR, DecompositionCache, N4Formula, SampleBudget};

#[test]
fn circuit_json_to_budgeted_estimate() {
    let text = r#"{
        "n_modes": 2,
        "init": [0, 0],
        "gates": [
            {"type": "g2", "idx": [1, 4], "angle": 0.3},
            {"type": "g4", "idx": [1, 2, 3, 4], "angle": 0.7853981633974483, "noise_p": 0.02}
        ],
        "observable": {"pauli": "ZZ"}
    }"#;
    let circuit: CircuitIR = serde_json::from_str(text).unwrap();
    circuit.validate().unwrap();

    let cache = DecompositionCache::standard();
    let (epsilon, delta) = (0.15, 0.05);
    let budget = required_samples(&circuit, &cache, epsilon, delta).unwrap();

    let estimate = run(
        &circuit,
        &cache,
        SampleBudget::Accuracy { epsilon, delta },
        41,
    )
    .unwrap();
    assert_eq!(estimate.n_samples, budget);
    assert_eq!(estimate.seed, 41);
    assert_eq!(
        budget,
        hoeffding_samples(estimate.l1_total, epsilon, delta).unwrap()
    );

    // the Hoeffding budget guards ε at confidence 1 - δ; 4σ is a far
    // looser but deterministic-enough margin for a fixed seed
    let exact = dense_reference(&circuit).unwrap();
    assert!(
        (estimate.mean - exact).abs() <= epsilon.max(4.0 * estimate.std_error),
        "estimate {} vs oracle {exact}",
        estimate.mean
    );

    // everything needed to reproduce the number rides along in the output
    let text = serde_json::to_string(&estimate).unwrap();
    for field in ["mean", "std_error", "n_samples", "l1_total", "seed"] {
        assert!(text.contains(field), "missing {field} in {text}");
    }
}

#[test]
fn amplitude_file_to_cost_and_extrapolation() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{
            "n_spin_orbitals": 8,
            "occ": [1, 2, 3, 4],
            "virt": [5, 6, 7, 8],
            "t1": [{{"a": 5, "i": 4, "t": 0.04}}],
            "t2": [
                {{"a": 5, "b": 6, "i": 1, "j": 2, "t": 0.24}},
                {{"a": 7, "b": 8, "i": 3, "j": 4, "t": -0.16}}
            ]
        }}"#
    )
    .unwrap();

    let amps = load_amplitudes(file.path()).unwrap();
    let circuit = build_circuit(&amps, 2, 0.02).unwrap();
    circuit.validate().unwrap();

    let cache = DecompositionCache::standard();
    let report = cost_report(&circuit, &cache).unwrap();
    // two doubles × eight rotations × two Trotter steps
    assert_eq!(report.cost.per_gate.len(), 32);
    let product: f64 = report.cost.per_gate.iter().map(|g| g.w).product();
    assert!((report.cost.total_w - product).abs() <= 1e-9 * product);
    assert!(
        (10f64.powf(report.cost.log10_total) - report.cost.total_w).abs()
            <= 1e-9 * report.cost.total_w
    );
    assert_eq!(report.budget, SIMULATABLE_BUDGET);
    assert_eq!(report.simulatable, report.cost.total_w <= SIMULATABLE_BUDGET);

    let ws: Vec<f64> = report.cost.per_gate.iter().map(|g| g.w).collect();
    let extrap = extrapolate(&ws, N4Formula::HydrogenChain).unwrap();
    assert!(extrap.geo_mean_w >= 1.0);
    // the prediction at the fitted size must itself respect the budget
    if let Some(m) = extrap.largest_within(SIMULATABLE_BUDGET) {
        if m > 0 {
            assert!(extrap.predicted_w(m) <= SIMULATABLE_BUDGET);
            assert!(extrap.predicted_w(m + 1) > SIMULATABLE_BUDGET);
        }
    }

    let text = serde_json::to_string(&report).unwrap();
    for field in ["per_gate", "total_w", "log10_total", "budget", "simulatable"] {
        assert!(text.contains(field), "missing {field} in {text}");
    }
}

#[test]
fn validation_suite_reports_every_check() {
    let report = validate::run_suite(30, 9).unwrap();
    assert!(report.passed());
    let text = serde_json::to_string_pretty(&report).unwrap();
    for name in [
        "basis-ptm-dense-extraction",
        "transfer-matrix-identities",
        "covariance-vs-dense-circuits",
        "reference-decomposition-residual",
        "lp-certificates",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}
