//! End-to-end search executions for each algorithm version, with uniform
//! result records, oracle-query accounting, and version-comparison sweeps.

use serde::{Deserialize, Serialize};

use crate::analytic::{self, TruncationPlan};
use crate::error::Result;
use crate::filter::{locate_marked_item, MeasureMode};
use crate::measure::{all_exact_evs, projective_sample, EvMode, EvReport};
use crate::state::{run_grover, SearchInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Version {
    Pm,
    EvStandard,
    EvTruncated,
}

/// Uniform record of one search execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub version: Version,
    pub num_qubits: usize,
    pub num_marked: u64,
    pub seed: u64,
    pub iterations_used: u64,
    pub runs_used: u64,
    pub oracle_queries: u64,
    pub found: Option<u64>,
    pub success: bool,
    pub attenuation: f64,
    pub ev_reports: Vec<EvReport>,
    pub confident: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_plan: Option<TruncationPlan>,
}

fn ensemble_params(mode: &MeasureMode) -> (EvMode, u64, u64, f64) {
    match mode {
        MeasureMode::Exact => (EvMode::Exact, 0, 0, 0.0),
        MeasureMode::Sampled(model) => (
            EvMode::Sampled,
            model.size,
            model.seed,
            model.resolution_epsilon,
        ),
    }
}

/// Standard PM version: m_stand iterates, one projective measurement.
pub fn run_standard_pm(inst: &SearchInstance, seed: u64) -> Result<SearchResult> {
    // Unclamped count: when most of the database is marked the best
    // strategy is to not rotate at all.
    let m = analytic::m_standard_floor(inst.num_marked(), inst.dimension());
    run_pm_at(inst, m, seed)
}

/// PM version at an explicit iteration count.
pub fn run_pm_at(inst: &SearchInstance, m: u64, seed: u64) -> Result<SearchResult> {
    let (num_marked, size) = (inst.num_marked(), inst.dimension());
    let state = run_grover(inst, m)?;
    let found = projective_sample(&state, seed);
    let success = inst.is_marked(found);
    Ok(SearchResult {
        version: Version::Pm,
        num_qubits: inst.num_qubits(),
        num_marked,
        seed,
        iterations_used: m,
        runs_used: 1,
        oracle_queries: m,
        found: Some(found),
        success,
        attenuation: analytic::attenuation_after(m, num_marked, size)?,
        ev_reports: Vec::new(),
        confident: true,
        truncation_plan: None,
    })
}

/// Picks the EV iteration count: the preferred one if its attenuation is
/// positive, otherwise the smallest count up to `cap` that makes it so.
fn usable_ev_iterations(inst: &SearchInstance, preferred: u64, cap: u64) -> Result<u64> {
    let (num_marked, size) = (inst.num_marked(), inst.dimension());
    if analytic::attenuation_after(preferred, num_marked, size)? > analytic::ATTENUATION_FLOOR {
        return Ok(preferred);
    }
    for m in 1..=cap {
        if analytic::attenuation_after(m, num_marked, size)? > analytic::ATTENUATION_FLOOR {
            return Ok(m);
        }
    }
    Ok(preferred)
}

/// EV search at an explicit iteration count.
pub fn run_ev_at(
    inst: &SearchInstance,
    version: Version,
    m: u64,
    mode: &MeasureMode,
    plan: Option<TruncationPlan>,
) -> Result<SearchResult> {
    let (num_marked, size) = (inst.num_marked(), inst.dimension());
    let (ev_mode, ensemble_size, seed, threshold) = ensemble_params(mode);
    let out = locate_marked_item(inst, m, mode, threshold)?;
    let report = EvReport {
        values: out.decision_evs.clone(),
        mode: ev_mode,
        ensemble_size,
        seed,
        runs_consumed: out.runs_used,
    };
    Ok(SearchResult {
        version,
        num_qubits: inst.num_qubits(),
        num_marked,
        seed,
        iterations_used: m,
        runs_used: out.runs_used,
        oracle_queries: out.oracle_queries,
        found: Some(out.location),
        success: inst.is_marked(out.location),
        attenuation: analytic::attenuation_after(m, num_marked, size)?,
        ev_reports: vec![report],
        confident: out.confident,
        truncation_plan: plan,
    })
}

/// Standard EV version: m_stand iterates, sign readout (plain for one
/// marked item, filtered cascade otherwise).
pub fn run_standard_ev(inst: &SearchInstance, mode: &MeasureMode) -> Result<SearchResult> {
    let (num_marked, size) = (inst.num_marked(), inst.dimension());
    let m_stand = analytic::m_standard(num_marked, size);
    let m = usable_ev_iterations(inst, m_stand, 4 * m_stand + 64)?;
    run_ev_at(inst, Version::EvStandard, m, mode, None)
}

/// Truncated EV version: stop at the planner's minimum iteration count.
pub fn run_truncated_ev(
    inst: &SearchInstance,
    epsilon: f64,
    mode: &MeasureMode,
) -> Result<SearchResult> {
    let (num_marked, size) = (inst.num_marked(), inst.dimension());
    let plan = TruncationPlan::new(epsilon, num_marked, size)?;
    // The truncated version never runs longer than the standard one.
    let m = usable_ev_iterations(inst, plan.m_trunc, plan.m_stand)?.min(plan.m_stand);
    run_ev_at(inst, Version::EvTruncated, m, mode, Some(plan))
}

/// Per-qubit EVs of a plain run, packaged for readout.
pub fn plain_ev_report(inst: &SearchInstance, m: u64) -> Result<EvReport> {
    let state = run_grover(inst, m)?;
    Ok(EvReport {
        values: all_exact_evs(&state),
        mode: EvMode::Exact,
        ensemble_size: 0,
        seed: 0,
        runs_consumed: 1,
    })
}

/// Smallest m whose exact-EV search succeeds at decision threshold
/// `epsilon`: the attenuation clears epsilon*M and the cascade lands on
/// a marked item. Monotonicity of the attenuation on [1, m_stand]
/// justifies bisection.
pub fn measured_min_iterations(inst: &SearchInstance, epsilon: f64) -> Result<u64> {
    let (num_marked, size) = (inst.num_marked(), inst.dimension());
    let m_stand = analytic::m_standard(num_marked, size);
    let succeeds = |m: u64| -> bool {
        let a = match analytic::attenuation_after(m, num_marked, size) {
            Ok(a) => a,
            Err(_) => return false,
        };
        if a / num_marked as f64 <= epsilon {
            return false;
        }
        locate_marked_item(inst, m, &MeasureMode::Exact, epsilon)
            .map(|out| inst.is_marked(out.location))
            .unwrap_or(false)
    };
    if !succeeds(m_stand) {
        return Ok(m_stand);
    }
    let (mut lo, mut hi) = (1u64, m_stand);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if succeeds(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// One cell of a comparison sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub num_qubits: usize,
    pub num_marked: u64,
    /// epsilon / epsilon_stand.
    pub r: f64,
}

/// One output row of a comparison sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub l: usize,
    pub m: u64,
    pub n: u64,
    pub r: f64,
    pub epsilon: f64,
    pub m_stand: u64,
    pub m_trunc_planned: u64,
    pub m_min_measured: u64,
    pub ratio_predicted: f64,
    pub ratio_measured: f64,
    pub classical_queries: f64,
    pub success_rate: f64,
}

/// Splitmix-style seed derivation so each cell gets an independent,
/// reproducible stream from the master seed.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut z = master
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs the planner, the exact-EV bisection, and per-seed truncated
/// searches for every grid cell.
pub fn compare_versions(
    grid: &[SweepCell],
    seeds: &[u64],
    mode: &MeasureMode,
    master_seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(grid.len());
    for (idx, cell) in grid.iter().enumerate() {
        let size = 1u64 << cell.num_qubits;
        let instance_seed = derive_seed(master_seed, idx as u64, 0);
        let inst = SearchInstance::random(cell.num_qubits, cell.num_marked, instance_seed)?;
        let epsilon = cell.r * analytic::epsilon_standard(cell.num_marked);
        let plan = TruncationPlan::new(epsilon, cell.num_marked, size)?;
        let m_min_measured = measured_min_iterations(&inst, epsilon)?;
        let success_rate = match mode {
            MeasureMode::Exact => {
                let result = run_truncated_ev(&inst, epsilon, mode)?;
                if result.success {
                    1.0
                } else {
                    0.0
                }
            }
            MeasureMode::Sampled(model) => {
                let mut successes = 0usize;
                for (s_idx, &seed) in seeds.iter().enumerate() {
                    let cell_model = crate::measure::EnsembleModel {
                        seed: derive_seed(master_seed ^ seed, idx as u64, s_idx as u64 + 1),
                        ..*model
                    };
                    let result =
                        run_truncated_ev(&inst, epsilon, &MeasureMode::Sampled(cell_model))?;
                    if result.success {
                        successes += 1;
                    }
                }
                successes as f64 / seeds.len().max(1) as f64
            }
        };
        rows.push(SweepRow {
            l: cell.num_qubits,
            m: cell.num_marked,
            n: size,
            r: cell.r,
            epsilon,
            m_stand: plan.m_stand,
            m_trunc_planned: plan.m_trunc,
            m_min_measured,
            ratio_predicted: plan.predicted_ratio,
            ratio_measured: m_min_measured as f64 / plan.m_stand as f64,
            classical_queries: analytic::classical_expected_queries(cell.num_marked, size),
            success_rate,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::EnsembleModel;

    #[test]
    fn pm_exact_small_instance() {
        let inst = SearchInstance::new(2, &[2]).unwrap();
        let result = run_standard_pm(&inst, 1).unwrap();
        assert_eq!(result.found, Some(2));
        assert!(result.success);
        assert_eq!(result.oracle_queries, 1);
        assert_eq!(result.runs_used, 1);
    }

    #[test]
    fn pm_success_rate_single_marked() {
        let inst = SearchInstance::random(10, 1, 3).unwrap();
        let mut hits = 0;
        for seed in 0..10_000u64 {
            if run_standard_pm(&inst, seed).unwrap().success {
                hits += 1;
            }
        }
        assert!(hits as f64 / 10_000.0 >= 1.0 - 1.0 / 1024.0 - 0.01);
    }

    #[test]
    fn pm_success_rate_several_marked() {
        let inst = SearchInstance::random(8, 4, 5).unwrap();
        let mut hits = 0;
        for seed in 0..10_000u64 {
            if run_standard_pm(&inst, seed).unwrap().success {
                hits += 1;
            }
        }
        assert!(hits as f64 / 10_000.0 >= 1.0 - 4.0 / 256.0 - 0.02);
    }

    #[test]
    fn standard_ev_single_marked_exact() {
        let inst = SearchInstance::new(3, &[5]).unwrap();
        let result = run_standard_ev(&inst, &MeasureMode::Exact).unwrap();
        assert_eq!(result.found, Some(5));
        assert!(result.success);
        assert_eq!(result.runs_used, 1);
        assert_eq!(result.iterations_used, 2); // floor(pi sqrt(8) / 4)
    }

    #[test]
    fn standard_ev_complementary_pair_exact() {
        let inst = SearchInstance::new(4, &[3, 12]).unwrap();
        let result = run_standard_ev(&inst, &MeasureMode::Exact).unwrap();
        assert!(matches!(result.found, Some(3) | Some(12)));
        assert!(result.success);
        assert!(result.runs_used <= 4);
    }

    #[test]
    fn standard_ev_sampled_large_ensemble() {
        let inst = SearchInstance::new(3, &[5]).unwrap();
        let mut hits = 0;
        for seed in 0..200u64 {
            let model = EnsembleModel::new(10_000, seed, 0.05).unwrap();
            let result = run_standard_ev(&inst, &MeasureMode::Sampled(model)).unwrap();
            if result.found == Some(5) {
                hits += 1;
            }
        }
        assert!(hits >= 198, "only {hits} of 200 sampled runs succeeded");
    }

    #[test]
    fn truncated_ev_epsilon_zero_single_iteration() {
        for (l, marked) in [(4usize, vec![9u64]), (5, vec![2, 20, 27])] {
            let inst = SearchInstance::new(l, &marked).unwrap();
            let result = run_truncated_ev(&inst, 0.0, &MeasureMode::Exact).unwrap();
            assert_eq!(result.iterations_used, 1);
            assert!(result.success);
        }
    }

    #[test]
    fn truncated_ev_much_shorter_than_standard() {
        let inst = SearchInstance::random(16, 1, 17).unwrap();
        let result = run_truncated_ev(&inst, 0.01, &MeasureMode::Exact).unwrap();
        assert!(result.success);
        let m_stand = analytic::m_standard(1, 1 << 16);
        assert_eq!(m_stand, 201);
        assert!(result.iterations_used < m_stand / 2);
        let planned = analytic::min_truncated_iterations(0.01, 1, 1 << 16).unwrap();
        assert_eq!(result.iterations_used, planned);
    }

    #[test]
    fn truncated_ev_rejects_infeasible_epsilon() {
        let inst = SearchInstance::new(4, &[1, 2]).unwrap();
        assert!(run_truncated_ev(&inst, 0.6, &MeasureMode::Exact).is_err());
    }

    #[test]
    fn truncated_never_exceeds_standard_queries() {
        for seed in 0..20u64 {
            let inst = SearchInstance::random(8, 1 + seed % 4, seed).unwrap();
            let truncated = run_truncated_ev(&inst, 0.05, &MeasureMode::Exact).unwrap();
            let standard = run_standard_ev(&inst, &MeasureMode::Exact).unwrap();
            assert!(truncated.iterations_used <= standard.iterations_used);
        }
    }

    #[test]
    fn exact_mode_is_deterministic() {
        let inst = SearchInstance::random(6, 3, 9).unwrap();
        let a = run_standard_ev(&inst, &MeasureMode::Exact).unwrap();
        let b = run_standard_ev(&inst, &MeasureMode::Exact).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn exact_ev_versions_succeed_below_half_marked() {
        for l in 2..=6usize {
            let size = 1u64 << l;
            for seed in 0..5u64 {
                let m_marked = 1 + seed % (size / 2 - 1).max(1);
                let inst = SearchInstance::random(l, m_marked, seed).unwrap();
                let result = run_truncated_ev(&inst, 0.0, &MeasureMode::Exact).unwrap();
                assert!(result.success, "L={l} M={m_marked} seed={seed}");
            }
        }
    }

    #[test]
    fn measured_min_matches_planner_single_marked() {
        let inst = SearchInstance::random(16, 1, 23).unwrap();
        for r in [0.001, 0.01, 0.1, 0.5] {
            let measured = measured_min_iterations(&inst, r).unwrap();
            let planned = analytic::min_truncated_iterations(r, 1, 1 << 16).unwrap();
            assert!(measured.abs_diff(planned) <= 1, "r={r}: {measured} vs {planned}");
        }
    }

    #[test]
    fn sweep_r_one_gives_unit_ratio() {
        let grid = [SweepCell {
            num_qubits: 10,
            num_marked: 1,
            r: 1.0,
        }];
        let rows = compare_versions(&grid, &[], &MeasureMode::Exact, 99).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].ratio_measured, 1.0);
        assert_eq!(rows[0].m_trunc_planned, rows[0].m_stand);
    }

    #[test]
    fn sweep_planned_counts_monotone_in_r() {
        let grid: Vec<SweepCell> = [0.001, 0.01, 0.05, 0.2, 0.5, 0.9]
            .iter()
            .map(|&r| SweepCell {
                num_qubits: 12,
                num_marked: 1,
                r,
            })
            .collect();
        let rows = compare_versions(&grid, &[], &MeasureMode::Exact, 1).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[0].m_trunc_planned <= pair[1].m_trunc_planned);
        }
    }

    #[test]
    fn derive_seed_is_stable_and_spreads() {
        assert_eq!(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
    }
}
