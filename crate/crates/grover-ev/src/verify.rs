//! Self-verification suites: exhaustive small-instance identity checks
//! wired to the `verify` CLI subcommand.

use crate::analytic;
use crate::error::Result;
use crate::filter::{filtered_ev, filtered_ev_expected, locate_marked_item, ConditionList, MeasureMode};
use crate::measure::{chebyshev_bound, exact_ev_sigma_z, sampled_ev_from_exact, EnsembleModel};
use crate::state::{bit_of, run_grover, SearchInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    EvIdentity,
    Filtering,
    Cascade,
    Planner,
    Chebyshev,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::EvIdentity,
        Suite::Filtering,
        Suite::Cascade,
        Suite::Planner,
        Suite::Chebyshev,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::EvIdentity => "ev-identity",
            Suite::Filtering => "filtering",
            Suite::Cascade => "cascade",
            Suite::Planner => "planner",
            Suite::Chebyshev => "chebyshev",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
}

/// Exact EV equals (A_m/M) * signed marked sum, for every qubit.
fn check_ev_identity(max_qubits: usize) -> Result<SuiteReport> {
    let mut cases = 0u64;
    let mut worst: f64 = 0.0;
    for l in 2..=max_qubits.min(10) {
        let size = 1u64 << l;
        for (i, &num_marked) in [1u64, 2, 3].iter().enumerate() {
            if num_marked >= size {
                continue;
            }
            let inst = SearchInstance::random(l, num_marked, (l as u64) * 31 + i as u64)?;
            let m_stand = analytic::m_standard(num_marked, size);
            for m in 0..=(2 * m_stand).min(12) {
                let state = run_grover(&inst, m)?;
                let a = analytic::attenuation_after(m, num_marked, size)?;
                for k in 1..=l {
                    let signed_sum: f64 = inst
                        .marked()
                        .iter()
                        .map(|&x| if bit_of(x, k) == 0 { 1.0 } else { -1.0 })
                        .sum();
                    let expect = a / num_marked as f64 * signed_sum;
                    let got = exact_ev_sigma_z(&state, k)?;
                    worst = worst.max((got - expect).abs());
                    cases += 1;
                }
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::EvIdentity,
        passed: worst <= 1e-9,
        cases,
        detail: format!("max |EV - (A_m/M) sum| = {worst:.3e}"),
    })
}

/// Two-run filtered EV equals (A_m/M) * signed sum over the matching
/// marked subset.
fn check_filtering_identity(max_qubits: usize) -> Result<SuiteReport> {
    let mut cases = 0u64;
    let mut worst: f64 = 0.0;
    for l in 2..=max_qubits.min(6) {
        let size = 1u64 << l;
        for seed in 0..4u64 {
            let num_marked = 1 + seed % (size - 1).min(4);
            let inst = SearchInstance::random(l, num_marked, seed * 101 + l as u64)?;
            for m in 0..=6u64 {
                for target in 1..=l {
                    for cond_qubit in 1..=l {
                        if cond_qubit == target {
                            continue;
                        }
                        for value in 0..2u8 {
                            let conditions = ConditionList::new(vec![(cond_qubit, value)])?;
                            let got =
                                filtered_ev(&inst, m, &conditions, target, &MeasureMode::Exact)?;
                            let expect = filtered_ev_expected(&inst, m, &conditions, target)?;
                            worst = worst.max((got - expect).abs());
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::Filtering,
        passed: worst <= 1e-9,
        cases,
        detail: format!("max filtered-EV residual = {worst:.3e}"),
    })
}

/// The cascade lands on a marked item whenever the attenuation is
/// positive, using at most L runs.
fn check_cascade_soundness(max_qubits: usize) -> Result<SuiteReport> {
    let mut cases = 0u64;
    let mut failures = 0u64;
    for l in 2..=max_qubits.min(8) {
        let size = 1u64 << l;
        for seed in 0..40u64 {
            let num_marked = 1 + seed % (size - 1);
            let inst = SearchInstance::random(l, num_marked, seed * 7 + l as u64)?;
            let m_cap = 4 * analytic::m_standard(num_marked, size) + 16;
            let m = (1..=m_cap)
                .find(|&m| analytic::attenuation_after(m, num_marked, size).unwrap() > analytic::ATTENUATION_FLOOR);
            let Some(m) = m else { continue };
            cases += 1;
            match locate_marked_item(&inst, m, &MeasureMode::Exact, 0.0) {
                Ok(out) if inst.is_marked(out.location) && out.runs_used <= l as u64 => {}
                _ => failures += 1,
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::Cascade,
        passed: failures == 0,
        cases,
        detail: format!("{failures} failures"),
    })
}

/// Planner output equals the exhaustive scan of A_m/M > epsilon.
fn check_planner_agreement(max_qubits: usize) -> Result<SuiteReport> {
    let mut cases = 0u64;
    let mut failures = 0u64;
    for l in 2..=max_qubits.min(14) {
        let size = 1u64 << l;
        for num_marked in 1..=4u64.min(size - 1) {
            let eps_stand = analytic::epsilon_standard(num_marked);
            for r in [0.0, 0.1, 0.5, 0.9] {
                let epsilon = r * eps_stand;
                let planned = analytic::min_truncated_iterations(epsilon, num_marked, size)?;
                let m_stand = analytic::m_standard(num_marked, size);
                let mut scanned = m_stand;
                for m in 1..=m_stand {
                    if analytic::attenuation_after(m, num_marked, size)? / num_marked as f64
                        > epsilon
                    {
                        scanned = m;
                        break;
                    }
                }
                cases += 1;
                if planned != scanned {
                    failures += 1;
                }
                // the closed form may only be off by one from the scan
                let cf = analytic::closed_form_min_iterations(epsilon, num_marked, size)?;
                cases += 1;
                if cf.abs_diff(scanned) > 1 {
                    failures += 1;
                }
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::Planner,
        passed: failures == 0,
        cases,
        detail: format!("{failures} disagreements"),
    })
}

/// Empirical coverage of the sample average meets the Chebyshev bound.
fn check_chebyshev_coverage(_max_qubits: usize) -> Result<SuiteReport> {
    let mut cases = 0u64;
    let mut failures = 0u64;
    for (n, epsilon) in [(100u64, 0.2), (10_000, 0.05)] {
        let bound = chebyshev_bound(n as f64, epsilon);
        // exact EV 0 maximizes the estimator variance
        let trials = 1000u64;
        let mut hits = 0u64;
        for seed in 0..trials {
            let model = EnsembleModel::new(n, seed.wrapping_mul(31), epsilon)?;
            if sampled_ev_from_exact(0.0, 1, &model).abs() < epsilon {
                hits += 1;
            }
        }
        cases += 1;
        if (hits as f64 / trials as f64) < bound {
            failures += 1;
        }
    }
    Ok(SuiteReport {
        suite: Suite::Chebyshev,
        passed: failures == 0,
        cases,
        detail: format!("{failures} coverage shortfalls"),
    })
}

pub fn run_suite(suite: Suite, max_qubits: usize) -> Result<SuiteReport> {
    match suite {
        Suite::EvIdentity => check_ev_identity(max_qubits),
        Suite::Filtering => check_filtering_identity(max_qubits),
        Suite::Cascade => check_cascade_soundness(max_qubits),
        Suite::Planner => check_planner_agreement(max_qubits),
        Suite::Chebyshev => check_chebyshev_coverage(max_qubits),
    }
}

pub fn run_suites(suites: &[Suite], max_qubits: usize) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s, max_qubits)).collect()
}
