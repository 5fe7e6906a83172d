//! Readout layer: exact sigma_z expectation values from amplitudes,
//! finite-ensemble sample averages, projective sampling, and sign-based
//! bit readout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

/// How per-qubit EVs were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvMode {
    Exact,
    Sampled,
}

/// Per-qubit sigma_z expectation values with measurement provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvReport {
    pub values: Vec<f64>,
    pub mode: EvMode,
    /// Ensemble members per run; 0 for exact readout.
    pub ensemble_size: u64,
    pub seed: u64,
    pub runs_consumed: u64,
}

/// Finite-ensemble device model: members measured per run, the seed for
/// its projective outcomes, and the resolution it claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleModel {
    pub size: u64,
    pub seed: u64,
    pub resolution_epsilon: f64,
}

impl EnsembleModel {
    pub fn new(size: u64, seed: u64, resolution_epsilon: f64) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyEnsemble);
        }
        if !(0.0..1.0).contains(&resolution_epsilon) {
            return Err(Error::InvalidConfig(format!(
                "resolution epsilon {resolution_epsilon} must lie in [0, 1)"
            )));
        }
        Ok(Self {
            size,
            seed,
            resolution_epsilon,
        })
    }

    /// Same device with the seed re-derived for run `run_index`, so
    /// successive runs of one cascade draw independent outcomes.
    pub fn for_run(&self, run_index: u64) -> Self {
        Self {
            seed: self
                .seed
                .wrapping_add(run_index.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            ..*self
        }
    }
}

fn check_qubit_index(k: usize, num_qubits: usize) -> Result<()> {
    if k == 0 || k > num_qubits {
        return Err(Error::QubitIndexOutOfRange {
            index: k,
            num_qubits,
        });
    }
    Ok(())
}

/// Exact <sigma_z^(k)> = sum_x |c_x|^2 (-1)^(x_k), one pass.
pub fn exact_ev_sigma_z(state: &StateVector, k: usize) -> Result<f64> {
    check_qubit_index(k, state.num_qubits())?;
    let mask = 1u64 << (k - 1);
    let mut ev = 0.0;
    for (x, c) in state.amplitudes().iter().enumerate() {
        let sign = if (x as u64) & mask == 0 { 1.0 } else { -1.0 };
        ev += sign * c.norm_sqr();
    }
    Ok(ev)
}

/// Exact EVs for every qubit of the register.
pub fn all_exact_evs(state: &StateVector) -> Vec<f64> {
    (1..=state.num_qubits())
        .map(|k| exact_ev_sigma_z(state, k).expect("index in range"))
        .collect()
}

/// Sample average over the marginal of qubit `k`: n independent +-1
/// outcomes with P(+1) = (1 + EV)/2, returned as (n_0 - n_1)/n.
///
/// Deterministic given (exact EV, k, model seed); the qubit index selects
/// the RNG stream so per-qubit draws are independent.
pub fn sampled_ev_from_exact(exact_ev: f64, k: usize, model: &EnsembleModel) -> f64 {
    let p_plus = ((1.0 + exact_ev) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    rng.set_stream(k as u64);
    let n_plus = Binomial::new(model.size, p_plus)
        .expect("probability in range")
        .sample(&mut rng);
    let n = model.size as f64;
    (2.0 * n_plus as f64 - n) / n
}

/// Sampled <sigma_z^(k)> for a state under the given ensemble model.
pub fn sampled_ev(state: &StateVector, k: usize, model: &EnsembleModel) -> Result<f64> {
    let exact = exact_ev_sigma_z(state, k)?;
    Ok(sampled_ev_from_exact(exact, k, model))
}

/// Lower bound 1 - 1/(4 n eps^2) on Prob{|sample avg - EV| < eps},
/// clamped below at 0 when vacuous. `n` is f64 so NMR-scale ensembles
/// (~1e20 members) are representable.
pub fn chebyshev_bound(n: f64, epsilon: f64) -> f64 {
    (1.0 - 1.0 / (4.0 * n * epsilon * epsilon)).max(0.0)
}

/// Draw a basis index with probability |c_x|^2.
pub fn projective_sample(state: &StateVector, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (x, c) in state.amplitudes().iter().enumerate() {
        cumulative += c.norm_sqr();
        if u < cumulative {
            return x as u64;
        }
    }
    state.dimension() - 1
}

/// One decoded bit: its value, whether |EV| cleared the threshold, and
/// whether the EV was exactly zero (tie resolved to 1 by convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitReadout {
    pub bit: u8,
    pub confident: bool,
    pub tie: bool,
}

/// Decode bit k from the sign of value k: positive EV means bit 0,
/// negative means bit 1, exact zero resolves to 1 with the tie flag set.
pub fn readout_bits(report: &EvReport, threshold: f64) -> Vec<BitReadout> {
    report
        .values
        .iter()
        .map(|&v| BitReadout {
            bit: if v > 0.0 { 0 } else { 1 },
            confident: v.abs() > threshold,
            tie: v == 0.0,
        })
        .collect()
}

/// Assemble a basis index from decoded bits, bit k at position k-1.
pub fn assemble_location(bits: &[BitReadout]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0u64, |acc, (i, b)| acc | ((b.bit as u64) << i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::state::{bit_of, run_grover, SearchInstance};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn all_zero_basis_state_gives_plus_one() {
        let s = StateVector::basis(4, 0).unwrap();
        for k in 1..=4 {
            assert_eq!(exact_ev_sigma_z(&s, k).unwrap(), 1.0);
        }
    }

    #[test]
    fn uniform_state_gives_zero() {
        let s = StateVector::uniform(5).unwrap();
        for k in 1..=5 {
            assert_close(exact_ev_sigma_z(&s, k).unwrap(), 0.0, 1e-12);
        }
    }

    #[test]
    fn ev_matches_attenuation_identity() {
        let inst = SearchInstance::random(6, 3, 11).unwrap();
        let s = run_grover(&inst, 2).unwrap();
        let a = analytic::attenuation_after(2, 3, 64).unwrap();
        for k in 1..=6 {
            let signed_sum: f64 = inst
                .marked()
                .iter()
                .map(|&x| if bit_of(x, k) == 0 { 1.0 } else { -1.0 })
                .sum();
            let expect = a / 3.0 * signed_sum;
            assert_close(exact_ev_sigma_z(&s, k).unwrap(), expect, 1e-10);
        }
    }

    #[test]
    fn ev_rejects_bad_index() {
        let s = StateVector::uniform(3).unwrap();
        assert!(exact_ev_sigma_z(&s, 0).is_err());
        assert!(exact_ev_sigma_z(&s, 4).is_err());
    }

    #[test]
    fn sampled_ev_degenerate_distributions() {
        let model = EnsembleModel::new(57, 3, 0.1).unwrap();
        for seed in 0..5 {
            let m = EnsembleModel { seed, ..model };
            assert_eq!(sampled_ev_from_exact(1.0, 1, &m), 1.0);
            assert_eq!(sampled_ev_from_exact(-1.0, 2, &m), -1.0);
        }
    }

    #[test]
    fn sampled_ev_is_deterministic_and_lattice_valued() {
        let model = EnsembleModel::new(100, 9, 0.1).unwrap();
        let a = sampled_ev_from_exact(0.3, 1, &model);
        let b = sampled_ev_from_exact(0.3, 1, &model);
        assert_eq!(a, b);
        // sample averages are multiples of 2/n
        let lattice = a * model.size as f64 / 2.0;
        assert_close(lattice, lattice.round(), 1e-9);
    }

    #[test]
    fn sampled_ev_concentrates_near_zero() {
        // exact EV 0, n = 1e4: |sample| < 0.05 should hold nearly always
        let mut hits = 0;
        for seed in 0..1000u64 {
            let model = EnsembleModel::new(10_000, seed, 0.1).unwrap();
            if sampled_ev_from_exact(0.0, 1, &model).abs() < 0.05 {
                hits += 1;
            }
        }
        assert!(hits >= 990, "only {hits} of 1000 trials within 0.05");
    }

    #[test]
    fn ensemble_model_rejects_empty() {
        assert!(matches!(
            EnsembleModel::new(0, 1, 0.1),
            Err(Error::EmptyEnsemble)
        ));
    }

    #[test]
    fn chebyshev_values() {
        assert_close(chebyshev_bound(1e20, 1e-6), 1.0 - 2.5e-9, 1e-12);
        assert_eq!(chebyshev_bound(1.0, 0.5), 0.0);
        assert_close(chebyshev_bound(1e4, 0.05), 0.99, 1e-12);
    }

    #[test]
    fn projective_sample_point_mass() {
        let s = StateVector::basis(3, 5).unwrap();
        for seed in 0..20 {
            assert_eq!(projective_sample(&s, seed), 5);
        }
    }

    #[test]
    fn projective_sample_uniform_frequencies() {
        let s = StateVector::uniform(2).unwrap();
        let mut counts = [0u32; 4];
        for seed in 0..100_000u64 {
            counts[projective_sample(&s, seed) as usize] += 1;
        }
        for c in counts {
            let freq = c as f64 / 100_000.0;
            assert_close(freq, 0.25, 0.01);
        }
    }

    #[test]
    fn projective_sample_after_standard_iterations() {
        let inst = SearchInstance::new(6, &[41]).unwrap();
        let m = analytic::m_standard(1, 64);
        let s = run_grover(&inst, m).unwrap();
        let mut hits = 0;
        for seed in 0..10_000u64 {
            if projective_sample(&s, seed) == 41 {
                hits += 1;
            }
        }
        let bound = 1.0 - 1.0 / 64.0 - 0.01;
        assert!(hits as f64 / 10_000.0 >= bound);
    }

    #[test]
    fn readout_all_plus_one() {
        let report = EvReport {
            values: vec![1.0; 4],
            mode: EvMode::Exact,
            ensemble_size: 0,
            seed: 0,
            runs_consumed: 1,
        };
        for b in readout_bits(&report, 0.1) {
            assert_eq!(b.bit, 0);
            assert!(b.confident);
            assert!(!b.tie);
        }
    }

    #[test]
    fn readout_negative_value_confident() {
        let report = EvReport {
            values: vec![-0.4],
            mode: EvMode::Exact,
            ensemble_size: 0,
            seed: 0,
            runs_consumed: 1,
        };
        let bits = readout_bits(&report, 0.1);
        assert_eq!(bits[0].bit, 1);
        assert!(bits[0].confident);
    }

    #[test]
    fn readout_exact_zero_is_tie() {
        let report = EvReport {
            values: vec![0.0, 0.05],
            mode: EvMode::Exact,
            ensemble_size: 0,
            seed: 0,
            runs_consumed: 1,
        };
        let bits = readout_bits(&report, 0.1);
        assert_eq!(bits[0].bit, 1);
        assert!(bits[0].tie);
        assert!(!bits[0].confident);
        assert!(!bits[1].tie);
        assert!(!bits[1].confident);
    }

    #[test]
    fn assemble_location_bit_order() {
        let bits = vec![
            BitReadout { bit: 1, confident: true, tie: false },
            BitReadout { bit: 0, confident: true, tie: false },
            BitReadout { bit: 1, confident: true, tie: false },
        ];
        assert_eq!(assemble_location(&bits), 0b101);
    }
}
