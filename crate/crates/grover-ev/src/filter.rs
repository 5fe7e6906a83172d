//! Filtered expectation values: correlation operators, two-run
//! averaging, and the bit-by-bit cascade that extracts one marked
//! item's full address when more than one item is marked.

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Error, Result};
use crate::measure::{
    all_exact_evs, exact_ev_sigma_z, sampled_ev, sampled_ev_from_exact, EnsembleModel,
};
use crate::state::{bit_of, run_grover, SearchInstance, StateVector};

/// Whether EVs are read exactly from amplitudes or sampled from a
/// finite ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureMode {
    Exact,
    Sampled(EnsembleModel),
}

/// Accumulated filtering conditions: (qubit, required bit) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConditionList {
    entries: Vec<(usize, u8)>,
}

impl ConditionList {
    pub fn new(entries: Vec<(usize, u8)>) -> Result<Self> {
        for (i, &(qubit, value)) in entries.iter().enumerate() {
            if qubit == 0 {
                return Err(Error::InvalidCorrelationSpec(
                    "qubit indices are 1-based".into(),
                ));
            }
            if value > 1 {
                return Err(Error::InvalidCorrelationSpec(format!(
                    "condition value {value} is not a bit"
                )));
            }
            if entries[..i].iter().any(|&(q, _)| q == qubit) {
                return Err(Error::InvalidCorrelationSpec(format!(
                    "qubit {qubit} conditioned twice"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, u8)] {
        &self.entries
    }

    /// True iff every conditioned bit of `x` has its required value.
    pub fn matches(&self, x: u64) -> bool {
        self.entries.iter().all(|&(q, v)| bit_of(x, q) == v)
    }

    fn max_qubit(&self) -> usize {
        self.entries.iter().map(|&(q, _)| q).max().unwrap_or(0)
    }
}

/// A correlation operation: flip `target` on every basis state that
/// violates the conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationSpec {
    target: usize,
    conditions: ConditionList,
}

impl CorrelationSpec {
    pub fn new(target: usize, conditions: ConditionList) -> Result<Self> {
        if target == 0 {
            return Err(Error::InvalidCorrelationSpec(
                "qubit indices are 1-based".into(),
            ));
        }
        if conditions.is_empty() {
            return Err(Error::InvalidCorrelationSpec(
                "a correlation with no conditions is the identity filter".into(),
            ));
        }
        if conditions.entries().iter().any(|&(q, _)| q == target) {
            return Err(Error::InvalidCorrelationSpec(format!(
                "target qubit {target} appears in the conditions"
            )));
        }
        Ok(Self { target, conditions })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn conditions(&self) -> &ConditionList {
        &self.conditions
    }
}

/// Conditional bit flip of the target qubit on all basis states whose
/// condition bits mismatch. Unitary and involutive: amplitudes of a
/// mismatching pair (x, x with target flipped) are swapped.
pub fn apply_correlation(state: &mut StateVector, spec: &CorrelationSpec) -> Result<()> {
    let l = state.num_qubits();
    if spec.target > l || spec.conditions.max_qubit() > l {
        return Err(Error::QubitIndexOutOfRange {
            index: spec.target.max(spec.conditions.max_qubit()),
            num_qubits: l,
        });
    }
    let target_mask = 1u64 << (spec.target - 1);
    let dim = state.dimension();
    // Walk indices with target bit 0; the partner has it set. Condition
    // bits never include the target, so both partners agree on the match.
    let amps = state.amplitudes_mut();
    for x in 0..dim {
        if x & target_mask != 0 {
            continue;
        }
        if !spec.conditions.matches(x) {
            amps.swap(x as usize, (x | target_mask) as usize);
        }
    }
    Ok(())
}

/// EV of `target` filtered to marked items satisfying `conditions`,
/// realized as the average of a plain run and a correlation-operator
/// run. With no conditions this is a single plain run.
pub fn filtered_ev(
    inst: &SearchInstance,
    m: u64,
    conditions: &ConditionList,
    target: usize,
    mode: &MeasureMode,
) -> Result<f64> {
    let plain = run_grover(inst, m)?;
    let plain_ev = match mode {
        MeasureMode::Exact => exact_ev_sigma_z(&plain, target)?,
        MeasureMode::Sampled(model) => sampled_ev(&plain, target, &model.for_run(0))?,
    };
    if conditions.is_empty() {
        return Ok(plain_ev);
    }
    let spec = CorrelationSpec::new(target, conditions.clone())?;
    let mut correlated = run_grover(inst, m)?;
    apply_correlation(&mut correlated, &spec)?;
    let corr_ev = match mode {
        MeasureMode::Exact => exact_ev_sigma_z(&correlated, target)?,
        MeasureMode::Sampled(model) => sampled_ev(&correlated, target, &model.for_run(1))?,
    };
    Ok(0.5 * (plain_ev + corr_ev))
}

/// Independent evaluation of the filtered-EV identity:
/// (A_m / M) * sum over marked x matching the conditions of (-1)^(x_target).
pub fn filtered_ev_expected(
    inst: &SearchInstance,
    m: u64,
    conditions: &ConditionList,
    target: usize,
) -> Result<f64> {
    let a = analytic::attenuation_after(m, inst.num_marked(), inst.dimension())?;
    let signed_sum: f64 = inst
        .marked()
        .iter()
        .filter(|&&x| conditions.matches(x))
        .map(|&x| if bit_of(x, target) == 0 { 1.0 } else { -1.0 })
        .sum();
    Ok(a / inst.num_marked() as f64 * signed_sum)
}

/// Result of a cascade: the assembled address, its cost, and the
/// per-level decision EVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocateOutcome {
    pub location: u64,
    pub runs_used: u64,
    pub oracle_queries: u64,
    /// EV that decided each bit, in qubit order.
    pub decision_evs: Vec<f64>,
    /// True when every decision cleared the threshold.
    pub confident: bool,
    /// True when some decision hit an exact zero and fell back to the
    /// bit-1 convention.
    pub any_tie: bool,
}

fn sign_bit(ev: f64) -> (u8, bool) {
    if ev > 0.0 {
        (0, false)
    } else {
        (1, ev == 0.0)
    }
}

/// Bit-by-bit address extraction for a marked item.
///
/// Run 1 caches all per-qubit EVs of the plain algorithm; each later
/// level adds exactly one run with the correlation operator appended and
/// averages its target EV with the cached plain EV, so at most L runs
/// are used. With a single marked item the plain run alone determines
/// every bit.
pub fn locate_marked_item(
    inst: &SearchInstance,
    m: u64,
    mode: &MeasureMode,
    epsilon: f64,
) -> Result<LocateOutcome> {
    let l = inst.num_qubits();
    let exact = matches!(mode, MeasureMode::Exact);
    let plain = run_grover(inst, m)?;
    let plain_exact_evs = all_exact_evs(&plain);
    let plain_evs: Vec<f64> = match mode {
        MeasureMode::Exact => plain_exact_evs.clone(),
        MeasureMode::Sampled(model) => {
            let run_model = model.for_run(0);
            plain_exact_evs
                .iter()
                .enumerate()
                .map(|(i, &ev)| sampled_ev_from_exact(ev, i + 1, &run_model))
                .collect()
        }
    };

    let mut decision_evs = Vec::with_capacity(l);
    let mut bits: Vec<u8> = Vec::with_capacity(l);
    let mut any_tie = false;
    let mut confident = true;
    let mut runs_used = 1u64;

    let decide = |ev: f64, bits: &mut Vec<u8>, any_tie: &mut bool, confident: &mut bool| {
        let (bit, tie) = sign_bit(ev);
        bits.push(bit);
        *any_tie |= tie;
        *confident &= ev.abs() > epsilon;
        ev
    };

    if inst.num_marked() == 1 {
        // Plain sign readout suffices; no filtering runs needed.
        for &ev in &plain_evs {
            decision_evs.push(decide(ev, &mut bits, &mut any_tie, &mut confident));
        }
    } else {
        decision_evs.push(decide(plain_evs[0], &mut bits, &mut any_tie, &mut confident));
        for k in 1..l {
            let conditions = ConditionList::new(
                bits.iter()
                    .enumerate()
                    .map(|(i, &b)| (i + 1, b))
                    .collect(),
            )?;
            if exact {
                // The sign rule keeps at least one marked item on the branch
                // whenever the attenuation is nonzero.
                let branch_alive = inst.marked().iter().any(|&x| conditions.matches(x));
                if !branch_alive
                    && analytic::attenuation_after(m, inst.num_marked(), inst.dimension())?
                        > analytic::ATTENUATION_FLOOR
                {
                    return Err(Error::InternalConsistency(format!(
                        "no marked item satisfies the level-{k} conditions"
                    )));
                }
            }
            let target = k + 1;
            let spec = CorrelationSpec::new(target, conditions)?;
            let mut correlated = run_grover(inst, m)?;
            apply_correlation(&mut correlated, &spec)?;
            runs_used += 1;
            let corr_ev = match mode {
                MeasureMode::Exact => exact_ev_sigma_z(&correlated, target)?,
                MeasureMode::Sampled(model) => {
                    sampled_ev(&correlated, target, &model.for_run(runs_used - 1))?
                }
            };
            let avg = 0.5 * (plain_evs[k] + corr_ev);
            decision_evs.push(decide(avg, &mut bits, &mut any_tie, &mut confident));
        }
    }

    let location = bits
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));

    if exact
        && !inst.is_marked(location)
        && analytic::attenuation_after(m, inst.num_marked(), inst.dimension())?
                        > analytic::ATTENUATION_FLOOR
    {
        return Err(Error::InternalConsistency(format!(
            "assembled address {location} is not marked"
        )));
    }

    Ok(LocateOutcome {
        location,
        runs_used,
        oracle_queries: runs_used * m,
        decision_evs,
        confident,
        any_tie,
    })
}
