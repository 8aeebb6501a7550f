// Copyright 2026 The qcapacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The Grover block `H, U_B, H, f_0` and the iteration driver.
//!
//! `U_B|i⟩_M|j⟩_C = (−1)^{δ_ij}|i⟩_M|j⟩_C` acts on branch `i` of the
//! ensemble as a sign flip of basis state `|i⟩_C`. `H` is a Hadamard on
//! every computational qubit and `f_0` flips the sign of `|00…0⟩_C`.

use serde::Serialize;

use crate::bounds::{self, BOUND_TOLERANCE};
use crate::ensemble::{self, CqEnsemble, Mode};
use crate::linalg::{ComplexMatrix, C64};
use crate::qstate::{DensityMatrix, StateVector, MAX_MIXED_QUBITS, MAX_PURE_QUBITS};
use crate::{Error, Result};

/// Upper limit on `n_blocks`.
pub const MAX_BLOCKS: usize = 10_000;

/// Sampling convention for trace records.
pub const SAMPLING: &str = "after-each-block";

/// In-place normalized Walsh–Hadamard transform (`H^{⊗n}` on a length-`2^n`
/// buffer), one `1/√2`-scaled butterfly stage per qubit.
pub fn fwht_normalized(buf: &mut [C64]) -> Result<()> {
    let n = buf.len();
    if !n.is_power_of_two() {
        return Err(Error::invalid(format!(
            "Hadamard layer needs a power-of-two dimension, got {n}"
        )));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut half = 1;
    while half < n {
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * scale;
                *b = (x - y) * scale;
            }
        }
        half *= 2;
    }
    Ok(())
}

/// Register states the block's gates act on.
pub trait GroverTarget: Sized {
    fn dim(&self) -> usize;
    /// `U_B` restricted to memory branch `marked`.
    fn oracle(&self, marked: usize) -> Result<Self>;
    fn hadamard_layer(&self) -> Result<Self>;
    fn zero_phase_flip(&self) -> Self;
}

impl GroverTarget for StateVector {
    fn dim(&self) -> usize {
        StateVector::dim(self)
    }

    fn oracle(&self, marked: usize) -> Result<Self> {
        check_index(marked, self.dim())?;
        let mut amps = self.amplitudes().to_vec();
        amps[marked] = -amps[marked];
        Ok(StateVector::from_amplitudes_unchecked(amps))
    }

    fn hadamard_layer(&self) -> Result<Self> {
        let mut amps = self.amplitudes().to_vec();
        fwht_normalized(&mut amps)?;
        Ok(StateVector::from_amplitudes_unchecked(amps))
    }

    fn zero_phase_flip(&self) -> Self {
        let mut amps = self.amplitudes().to_vec();
        amps[0] = -amps[0];
        StateVector::from_amplitudes_unchecked(amps)
    }
}

impl GroverTarget for DensityMatrix {
    fn dim(&self) -> usize {
        DensityMatrix::dim(self)
    }

    /// `D ρ D` with `D = diag(1, …, −1 at marked, …, 1)`: row and column
    /// `marked` change sign, the diagonal entry does not.
    fn oracle(&self, marked: usize) -> Result<Self> {
        check_index(marked, self.dim())?;
        let pure = match self.pure_state() {
            Some(psi) => Some(psi.oracle(marked)?),
            None => None,
        };
        Ok(DensityMatrix::mapped(
            flip_row_and_column(self.matrix(), marked),
            pure,
        ))
    }

    /// `H ρ H`: transform rows, transpose, transform rows again, transpose
    /// back (`H` is real symmetric).
    fn hadamard_layer(&self) -> Result<Self> {
        let n = self.dim();
        let mut m = self.matrix().clone();
        for _ in 0..2 {
            for row in m.as_mut_slice().chunks_exact_mut(n) {
                fwht_normalized(row)?;
            }
            m = m.transpose();
        }
        let pure = match self.pure_state() {
            Some(psi) => Some(psi.hadamard_layer()?),
            None => None,
        };
        Ok(DensityMatrix::mapped(m, pure))
    }

    fn zero_phase_flip(&self) -> Self {
        DensityMatrix::mapped(
            flip_row_and_column(self.matrix(), 0),
            self.pure_state().map(|psi| psi.zero_phase_flip()),
        )
    }
}

fn check_index(i: usize, dim: usize) -> Result<()> {
    if i >= dim {
        return Err(Error::invalid(format!(
            "oracle index {i} out of range for dimension {dim}"
        )));
    }
    Ok(())
}

fn flip_row_and_column(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let n = m.dim();
    let mut out = m.clone();
    for j in 0..n {
        if j != k {
            out[(k, j)] = -out[(k, j)];
            out[(j, k)] = -out[(j, k)];
        }
    }
    out
}

pub fn oracle_apply<T: GroverTarget>(marked: usize, state: &T) -> Result<T> {
    state.oracle(marked)
}

pub fn hadamard_layer<T: GroverTarget>(state: &T) -> Result<T> {
    state.hadamard_layer()
}

pub fn zero_phase_flip<T: GroverTarget>(state: &T) -> T {
    state.zero_phase_flip()
}

/// `H^{⊗n}` on every branch.
pub fn apply_hadamard_layers(e: &CqEnsemble) -> Result<CqEnsemble> {
    e.map_branches_unitary(|_, s| s.hadamard_layer(), |_, r| r.hadamard_layer())
}

/// `U_B`: branch `i` gets basis state `i` sign-flipped.
pub fn apply_oracle(e: &CqEnsemble) -> Result<CqEnsemble> {
    check_square(e)?;
    e.map_branches_unitary(|i, s| s.oracle(i), |i, r| r.oracle(i))
}

/// `f_0` on every branch.
pub fn apply_zero_phase_flip(e: &CqEnsemble) -> Result<CqEnsemble> {
    e.map_branches_unitary(
        |_, s| Ok(s.zero_phase_flip()),
        |_, r| Ok(r.zero_phase_flip()),
    )
}

fn check_square(e: &CqEnsemble) -> Result<()> {
    if e.len() != e.branch_dim() {
        return Err(Error::invalid(format!(
            "oracle needs one branch per basis state: {} branches, dimension {}",
            e.len(),
            e.branch_dim()
        )));
    }
    Ok(())
}

/// One block: `H`, `U_B`, `H`, `f_0`, in that time order.
pub fn grover_block(e: &CqEnsemble) -> Result<CqEnsemble> {
    check_square(e)?;
    let e = apply_hadamard_layers(e)?;
    let e = apply_oracle(&e)?;
    let e = apply_hadamard_layers(&e)?;
    apply_zero_phase_flip(&e)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Priors {
    #[default]
    Uniform,
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverConfig {
    pub n_qubits: usize,
    pub purity: f64,
    pub n_blocks: usize,
    pub priors: Priors,
    /// Recompute branch entropies after every block and fail if they drift
    /// from the carried-forward values.
    pub audit: bool,
}

impl GroverConfig {
    pub fn new(n_qubits: usize, purity: f64, n_blocks: usize) -> Self {
        Self {
            n_qubits,
            purity,
            n_blocks,
            priors: Priors::Uniform,
            audit: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.purity) {
            return Err(Error::invalid(format!(
                "purity {} outside [0, 1]",
                self.purity
            )));
        }
        let max = if self.purity == 1.0 {
            MAX_PURE_QUBITS
        } else {
            MAX_MIXED_QUBITS
        };
        if self.n_qubits == 0 || self.n_qubits > max {
            return Err(Error::invalid(format!(
                "qubit count {} outside 1..={max} for purity {}",
                self.n_qubits, self.purity
            )));
        }
        if self.n_blocks > MAX_BLOCKS {
            return Err(Error::invalid(format!(
                "block count {} exceeds {MAX_BLOCKS}",
                self.n_blocks
            )));
        }
        if let Priors::Explicit(p) = &self.priors {
            if p.len() != 1 << self.n_qubits {
                return Err(Error::invalid(format!(
                    "{} priors given for {} memory states",
                    p.len(),
                    1usize << self.n_qubits
                )));
            }
        }
        Ok(())
    }

    pub fn initial_ensemble(&self) -> Result<CqEnsemble> {
        self.validate()?;
        let priors = match &self.priors {
            Priors::Uniform => None,
            Priors::Explicit(p) => Some(p.clone()),
        };
        ensemble::with_priors(self.n_qubits, self.purity, priors)
    }
}

/// State of the registers after block `k`, plus diagnostics of that
/// block's oracle sub-step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub k: usize,
    pub mutual_information: f64,
    pub s_average: f64,
    pub s_branch: f64,
    pub delta_s_oracle: f64,
    pub fidelity_oracle: f64,
    pub bures_oracle: f64,
    pub fannes_bound: f64,
    pub step_bound: f64,
    pub fannes_ok: bool,
    pub step_ok: bool,
    pub fidelity_bound_ok: bool,
}

/// `(N − 2) / N`, the smallest fidelity one query can produce between
/// consecutive computational-register states.
pub fn oracle_fidelity_floor(n: usize) -> f64 {
    (n as f64 - 2.0) / n as f64
}

/// Iterates the block `cfg.n_blocks` times and records the register mutual
/// information after each complete block.
///
/// Record 0 is the initial state. The oracle diagnostics compare the
/// average computational state immediately before and after `U_B` inside
/// each block.
pub fn run_trace(cfg: &GroverConfig) -> Result<Vec<TraceRecord>> {
    let mut e = cfg.initial_ensemble()?;
    let n = e.len();
    let step_limit = bounds::step_bound(n);
    let fidelity_floor = oracle_fidelity_floor(n);

    let (s_average, s_branch) = e.holevo_terms()?;
    let mut records = Vec::with_capacity(cfg.n_blocks + 1);
    records.push(TraceRecord {
        k: 0,
        mutual_information: clamp_information(s_average - s_branch, n),
        s_average,
        s_branch,
        delta_s_oracle: 0.0,
        fidelity_oracle: 1.0,
        bures_oracle: 0.0,
        fannes_bound: 0.0,
        step_bound: step_limit,
        fannes_ok: true,
        step_ok: true,
        fidelity_bound_ok: true,
    });

    for k in 1..=cfg.n_blocks {
        let before_oracle = apply_hadamard_layers(&e)?;
        let after_oracle = apply_oracle(&before_oracle)?;
        let step = bounds::verify_step(
            &before_oracle.average_state()?,
            &after_oracle.average_state()?,
        )?;
        e = apply_zero_phase_flip(&apply_hadamard_layers(&after_oracle)?)?;

        if cfg.audit {
            let drift = e.audit_branch_entropies()?;
            if drift > BOUND_TOLERANCE {
                return Err(Error::invalid(format!(
                    "branch entropy drifted by {drift:e} at block {k}"
                )));
            }
        }

        let (s_average, s_branch) = e.holevo_terms()?;
        records.push(TraceRecord {
            k,
            mutual_information: clamp_information(s_average - s_branch, n),
            s_average,
            s_branch,
            delta_s_oracle: step.delta_s,
            fidelity_oracle: step.fidelity,
            bures_oracle: step.bures,
            fannes_bound: step.fannes,
            step_bound: step_limit,
            fannes_ok: step.ok,
            step_ok: step.delta_s <= step_limit + BOUND_TOLERANCE,
            fidelity_bound_ok: step.fidelity >= fidelity_floor - BOUND_TOLERANCE,
        });
    }
    Ok(records)
}

fn clamp_information(i: f64, n: usize) -> f64 {
    i.clamp(0.0, (n as f64).log2())
}

/// Whether the run uses state vectors or density matrices.
pub fn mode_for(purity: f64) -> Mode {
    if purity == 1.0 {
        Mode::Pure
    } else {
        Mode::Mixed
    }
}
