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

//! Analytic bounds on how fast a search can build up register correlations.

use serde::Serialize;

use crate::qstate::{self, fidelity, von_neumann_entropy, DensityMatrix};
use crate::{Error, Result};

/// Slack allowed when comparing a measured quantity against a bound.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Continuity bound `d·log₂ dim − d·log₂ d` on the entropy change between
/// two states at Bures distance `d`, with `0·log 0 = 0`.
pub fn fannes_bound(d_b: f64, dim: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&d_b) {
        return Err(Error::invalid(format!(
            "Bures distance {d_b} outside [0, 1]"
        )));
    }
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if d_b == 0.0 {
        return Ok(0.0);
    }
    Ok(d_b * (dim as f64).log2() - d_b * d_b.log2())
}

/// Largest entropy change of the computational register in one query,
/// `(3/√N)·log₂ N`.
pub fn step_bound(n: usize) -> f64 {
    let n = n as f64;
    3.0 / n.sqrt() * n.log2()
}

/// Queries needed before the mutual information can reach `log₂ N`:
/// `log₂ N / step_bound(N) = √N/3`. Not rounded.
pub fn min_queries(n: usize) -> f64 {
    (n as f64).log2() / step_bound(n)
}

/// `½ log₂ N`.
pub fn threshold_entropy(n: usize) -> f64 {
    0.5 * (n as f64).log2()
}

/// True when `S(ρ_C⁰) ≥ ½ log₂ N`, which suffices (but is not necessary)
/// for the search to gain nothing over classical lookup.
pub fn no_speedup_threshold(initial_entropy: f64, n: usize) -> bool {
    initial_entropy >= threshold_entropy(n) - 1e-12
}

/// One oracle step checked against the continuity bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepCheck {
    /// `|S(after) − S(before)|`.
    pub delta_s: f64,
    pub fidelity: f64,
    pub bures: f64,
    pub fannes: f64,
    pub ok: bool,
}

pub fn verify_step(before: &DensityMatrix, after: &DensityMatrix) -> Result<StepCheck> {
    if before.dim() != after.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            before.dim(),
            after.dim()
        )));
    }
    let delta_s = (von_neumann_entropy(after)? - von_neumann_entropy(before)?).abs();
    let f = fidelity(before, after)?;
    let bures = (1.0 - f * f).max(0.0).sqrt();
    let fannes = fannes_bound(bures, before.dim())?;
    Ok(StepCheck {
        delta_s,
        fidelity: f,
        bures,
        fannes,
        ok: delta_s <= fannes + BOUND_TOLERANCE,
    })
}

/// Bounds and threshold verdict for one register configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n_qubits: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub purity: f64,
    pub step_bound: f64,
    pub min_queries: f64,
    pub threshold_entropy: f64,
    pub initial_entropy: f64,
    pub no_speedup_sufficient: bool,
}

/// Evaluates every bound for an `n_qubits` register whose qubits each start
/// in `p|0⟩⟨0| + (1−p)|1⟩⟨1|`.
pub fn bound_report(n_qubits: usize, purity: f64) -> Result<BoundReport> {
    if n_qubits == 0 || n_qubits > qstate::MAX_PURE_QUBITS {
        return Err(Error::invalid(format!(
            "register size {n_qubits} outside supported range 1..={}",
            qstate::MAX_PURE_QUBITS
        )));
    }
    // Product state: entropy is additive over qubits.
    let initial_entropy =
        n_qubits as f64 * von_neumann_entropy(&qstate::single_qubit_mixed(purity)?)?;
    let n = 1usize << n_qubits;
    Ok(BoundReport {
        n_qubits,
        n,
        purity,
        step_bound: step_bound(n),
        min_queries: min_queries(n),
        threshold_entropy: threshold_entropy(n),
        initial_entropy,
        no_speedup_sufficient: no_speedup_threshold(initial_entropy, n),
    })
}
