//! Dense state vector for the L-qubit data register and the unitary
//! building blocks of Grover's algorithm: oracle, diffusion, iterate.
//!
//! Qubit `k` (1-based) corresponds to bit position `k - 1` of a basis
//! index, so an index reads `x = x_L ... x_2 x_1` in qubit order.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default cap on the register width; 2^24 complex doubles is 256 MiB.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Value of bit `k` (1-based qubit label) of basis index `x`.
#[inline]
pub fn bit_of(x: u64, k: usize) -> u8 {
    ((x >> (k - 1)) & 1) as u8
}

/// A search problem: which of the 2^L locations are marked.
///
/// Marked locations are kept sorted and deduplicated; membership is the
/// oracle function f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchInstance {
    num_qubits: usize,
    marked: Vec<u64>,
}

impl SearchInstance {
    pub fn new(num_qubits: usize, marked: &[u64]) -> Result<Self> {
        if num_qubits == 0 || num_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                requested: num_qubits,
                cap: DEFAULT_MAX_QUBITS,
            });
        }
        let size = 1u64 << num_qubits;
        let mut sorted: Vec<u64> = marked.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &x in &sorted {
            if x >= size {
                return Err(Error::MarkedOutOfRange { location: x, size });
            }
        }
        let m = sorted.len() as u64;
        // M = 0 and M = N make the rotation angle degenerate.
        if m == 0 || m >= size {
            return Err(Error::DegenerateInstance { marked: m, size });
        }
        Ok(Self {
            num_qubits,
            marked: sorted,
        })
    }

    /// Builds an instance over a database of `database_size` locations,
    /// padding up to the next power of two with unmarked locations.
    pub fn with_database_size(database_size: u64, marked: &[u64]) -> Result<Self> {
        if database_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "database size {database_size} must be at least 2"
            )));
        }
        for &x in marked {
            if x >= database_size {
                return Err(Error::MarkedOutOfRange {
                    location: x,
                    size: database_size,
                });
            }
        }
        let num_qubits = (64 - (database_size - 1).leading_zeros()) as usize;
        Self::new(num_qubits, marked)
    }

    /// Random instance with `num_marked` distinct marked locations,
    /// sampled without replacement.
    pub fn random(num_qubits: usize, num_marked: u64, seed: u64) -> Result<Self> {
        if num_qubits == 0 || num_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                requested: num_qubits,
                cap: DEFAULT_MAX_QUBITS,
            });
        }
        let size = 1u64 << num_qubits;
        if num_marked == 0 || num_marked >= size {
            return Err(Error::DegenerateInstance {
                marked: num_marked,
                size,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let marked: Vec<u64> = sample(&mut rng, size as usize, num_marked as usize)
            .into_iter()
            .map(|i| i as u64)
            .collect();
        Self::new(num_qubits, &marked)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// N = 2^L.
    pub fn dimension(&self) -> u64 {
        1u64 << self.num_qubits
    }

    /// M = |S|.
    pub fn num_marked(&self) -> u64 {
        self.marked.len() as u64
    }

    pub fn marked(&self) -> &[u64] {
        &self.marked
    }

    /// The oracle function f: true iff `x` is marked.
    pub fn is_marked(&self, x: u64) -> bool {
        self.marked.binary_search(&x).is_ok()
    }
}

/// Dense complex amplitude array over the 2^L computational basis states.
///
/// Tracks the number of oracle invocations applied to it so callers can
/// account query costs.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
    oracle_queries: u64,
}

impl StateVector {
    /// Unbiased superposition of all 2^L locations, every amplitude 1/sqrt(2^L).
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        Self::uniform_with_cap(num_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn uniform_with_cap(num_qubits: usize, cap: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > cap {
            return Err(Error::QubitCountOutOfRange {
                requested: num_qubits,
                cap,
            });
        }
        let dim = 1usize << num_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![amp; dim],
            oracle_queries: 0,
        })
    }

    /// Computational basis state |x>.
    pub fn basis(num_qubits: usize, x: u64) -> Result<Self> {
        if num_qubits == 0 || num_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                requested: num_qubits,
                cap: DEFAULT_MAX_QUBITS,
            });
        }
        let dim = 1u64 << num_qubits;
        if x >= dim {
            return Err(Error::MarkedOutOfRange {
                location: x,
                size: dim,
            });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim as usize];
        amplitudes[x as usize] = Complex64::ONE;
        Ok(Self {
            num_qubits,
            amplitudes,
            oracle_queries: 0,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> u64 {
        1u64 << self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, x: u64) -> Complex64 {
        self.amplitudes[x as usize]
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Oracle invocations applied to this state so far.
    pub fn oracle_queries(&self) -> u64 {
        self.oracle_queries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Oracle unitary: flip the sign of every marked amplitude.
    ///
    /// O(M) sign flips; counts as exactly one oracle query regardless of M.
    pub fn apply_oracle(&mut self, inst: &SearchInstance) -> Result<()> {
        if inst.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                state: self.num_qubits,
                instance: inst.num_qubits(),
            });
        }
        for &x in inst.marked() {
            self.amplitudes[x as usize] = -self.amplitudes[x as usize];
        }
        self.oracle_queries += 1;
        Ok(())
    }

    /// Inversion about the average: c_x -> -c_x + 2<c>.
    ///
    /// Two passes, no matrix: the operator is rank-one plus identity.
    pub fn apply_diffusion(&mut self) {
        let dim = self.amplitudes.len() as f64;
        let mean = self.amplitudes.iter().sum::<Complex64>() / dim;
        let twice_mean = 2.0 * mean;
        for c in &mut self.amplitudes {
            *c = twice_mean - *c;
        }
    }

    /// One Grover iterate: oracle followed by diffusion.
    pub fn grover_iterate(&mut self, inst: &SearchInstance) -> Result<()> {
        self.apply_oracle(inst)?;
        self.apply_diffusion();
        Ok(())
    }
}

/// Uniform superposition followed by `m` Grover iterates.
pub fn run_grover(inst: &SearchInstance, m: u64) -> Result<StateVector> {
    let mut state = StateVector::uniform(inst.num_qubits())?;
    for _ in 0..m {
        state.grover_iterate(inst)?;
    }
    Ok(state)
}
