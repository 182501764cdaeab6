//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Each criterion is the conjunction of a set of suite checks, selected by
//! check-id prefix. The run fails if any criterion outside
//! `KNOWN_UNATTAINABLE` fails, or if a known-unattainable one starts passing.

use std::io::Write;
use std::process::Command;

use hyperkahler_cli::suites::{run, Config, Suite};
use hyperkahler_cli::{CheckReport, RunManifest};
use serde_json::Value;

struct Criterion {
    id: u32,
    title: &'static str,
    prefixes: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "heavenly condition: coset C = 1, C = det h for n = 2, diag(1,1,2,1) rejected",
        prefixes: &["heavenly.coset.c_unity.", "heavenly.det_consistency.n2", "heavenly.negative_control.diag_1_1_2_1"],
    },
    Criterion {
        id: 2,
        title: "quaternionic triple on heavenly-passing metrics",
        prefixes: &["heavenly.quaternion.", "heavenly.negative_control.quaternion"],
    },
    Criterion {
        id: 3,
        title: "covariant constancy of J ± iK, negative control detected",
        prefixes: &["heavenly.covariant_constancy.", "heavenly.negative_control.covariant_constancy"],
    },
    Criterion {
        id: 4,
        title: "sp(n) proof step X_p Ω + Ω X_pᵀ = 0",
        prefixes: &["heavenly.sp_algebra."],
    },
    Criterion {
        id: 5,
        title: "toy reduction: level-set pullback and quotient metric",
        prefixes: &["toy.level_metric[", "toy.quotient_metric["],
    },
    Criterion {
        id: 6,
        title: "Hamiltonian reduction equals the geometric quotient on the toy model",
        prefixes: &["mechanics.hamiltonian_reduction.toy[", "mechanics.cyclic_momentum.toy["],
    },
    Criterion {
        id: 7,
        title: "curvature 8a⁴/(r²+a²)³ and Euler characteristic 2 of the toy quotient",
        prefixes: &["toy.curvature.stated_target[", "toy.euler_characteristic["],
    },
    Criterion {
        id: 8,
        title: "coordinate change: flat metric and triple",
        prefixes: &["taubnut.coordinate_change."],
    },
    Criterion {
        id: 9,
        title: "Taub-NUT pipeline: moment maps, 5D pullback, quotient metric and forms",
        prefixes: &[
            "taubnut.moment_maps[",
            "taubnut.level_metric[",
            "taubnut.quotient_metric[",
            "taubnut.quotient_forms[",
            "taubnut.quotient_closed[",
        ],
    },
    Criterion {
        id: 10,
        title: "Taub-NUT triple is quaternionic and covariantly constant",
        prefixes: &["taubnut.quaternion[", "taubnut.covariant_constancy["],
    },
    Criterion {
        id: 11,
        title: "jets agree with finite differences on every registered field; reports deterministic",
        prefixes: &["oracle."],
    },
];

/// Criteria whose stated targets disagree with the exact geometry: the
/// stated curvature is the scalar curvature (twice the Gaussian curvature)
/// and the quotient integrates to 1.
const KNOWN_UNATTAINABLE: &[u32] = &[7];

fn line(text: &str) {
    // bypasses the test harness capture so the gate is always visible
    let _ = writeln!(std::io::stderr().lock(), "{text}");
}

fn selected<'a>(m: &'a RunManifest, c: &Criterion) -> Vec<&'a CheckReport> {
    m.checks
        .iter()
        .filter(|r| c.prefixes.iter().any(|p| r.check_id.starts_with(p)))
        .collect()
}

fn cli_report(seed: &str) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_hkverify"))
        .args(["verify", "all", "--samples", "5", "--seed", seed, "--a", "0.5", "--a", "1", "--a", "2"])
        .output()
        .expect("binary runs");
    let mut v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("elapsed_ms");
    }
    v
}

#[test]
fn acceptance() {
    let cfg = Config {
        seed: 0,
        samples: 100,
        a: vec![0.5, 1.0, 2.0],
    };
    let manifest = run(Suite::All, &cfg).expect("suite runs");
    let deterministic = cli_report("11") == cli_report("11");

    let mut failed = Vec::new();
    line("");
    for c in CRITERIA {
        let checks = selected(&manifest, c);
        assert!(!checks.is_empty(), "criterion {} selects no checks", c.id);
        let bad: Vec<&CheckReport> = checks.iter().copied().filter(|r| !r.passed).collect();
        let ok = bad.is_empty() && (c.id != 11 || deterministic);
        line(&format!(
            "criterion {:>2}: {} - {} ({} checks)",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            checks.len()
        ));
        for r in &bad {
            line(&format!(
                "    {} err={:.3e} tol={:.1e}",
                r.check_id, r.max_abs_error, r.tolerance
            ));
        }
        if c.id == 11 && !deterministic {
            line("    CLI reports differ between identical runs");
        }
        if !ok {
            failed.push(c.id);
        }
    }
    line(&format!(
        "{} of {} criteria pass; known unattainable: {:?}",
        CRITERIA.len() - failed.len(),
        CRITERIA.len(),
        KNOWN_UNATTAINABLE
    ));
    assert_eq!(failed, KNOWN_UNATTAINABLE, "unexpected acceptance outcome");
}
