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

//! The property suite behind `qcapacity verify`.
//!
//! Randomized properties draw from a ChaCha stream per property, seeded by
//! the user seed, so a failing case is reproducible from `(seed, property,
//! case)`. Trace properties step through every sub-step of every block.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bounds::{self, fannes_bound, min_queries, step_bound};
use crate::ensemble::{CqEnsemble, Mode};
use crate::grover::{
    apply_hadamard_layers, apply_oracle, apply_zero_phase_flip, oracle_fidelity_floor, GroverConfig,
};
use crate::qstate::{self, fidelity, fidelity_spectral, von_neumann_entropy, DensityMatrix};
use crate::sampling;
use crate::{Error, Result};

pub const PURITIES: [f64; 3] = [1.0, 0.95, 0.7];

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub qubits_min: usize,
    pub qubits_max: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub blocks: usize,
    pub random_cases: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            qubits_min: 2,
            qubits_max: 6,
            tolerance: 1e-9,
            seed: 42,
            blocks: 25,
            random_cases: 100,
        }
    }
}

impl VerifyOptions {
    pub fn validate(&self) -> Result<()> {
        if self.qubits_min < 2 {
            return Err(Error::invalid(
                "--qubits-min must be at least 2 (the oracle needs N >= 2)",
            ));
        }
        if self.qubits_max < self.qubits_min {
            return Err(Error::invalid(format!(
                "--qubits-max {} below --qubits-min {}",
                self.qubits_max, self.qubits_min
            )));
        }
        if self.qubits_max > qstate::MAX_MIXED_QUBITS {
            return Err(Error::invalid(format!(
                "--qubits-max {} above {}",
                self.qubits_max,
                qstate::MAX_MIXED_QUBITS
            )));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::invalid(
                "--tolerance must be a finite non-negative number",
            ));
        }
        if self.blocks > crate::grover::MAX_BLOCKS {
            return Err(Error::invalid("--blocks too large"));
        }
        Ok(())
    }
}

/// Outcome of one property over all its cases.
#[derive(Clone, Debug)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// Largest violation margin seen: `|a − b|` for identities,
    /// `lhs − rhs` for inequalities. A case passes when it is `≤ tolerance`.
    pub worst: f64,
    /// First failing instance, serialized for replay.
    pub failure: Option<Value>,
}

impl PropertyOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            worst: f64::NEG_INFINITY,
            failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn record(&mut self, margin: f64, tol: f64, instance: impl FnOnce() -> Value) {
        self.cases += 1;
        if margin > self.worst || margin.is_nan() {
            self.worst = margin;
        }
        if !(margin <= tol) && self.failure.is_none() {
            let mut v = instance();
            if let Value::Object(map) = &mut v {
                map.insert("property".into(), json!(self.name));
                map.insert("margin".into(), json!(margin));
            }
            self.failure = Some(v);
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs every property and returns outcomes in a fixed order.
pub fn run_verification(opts: &VerifyOptions) -> Result<Vec<PropertyOutcome>> {
    opts.validate()?;
    let mut out = random_properties(opts)?;
    out.extend(trace_properties(opts)?);
    Ok(out)
}

fn random_properties(opts: &VerifyOptions) -> Result<Vec<PropertyOutcome>> {
    let tol = opts.tolerance;
    let seed = opts.seed;
    let cases = opts.random_cases;

    let mut two_form = PropertyOutcome::new("two_form_identity");
    let mut ceiling = PropertyOutcome::new("holevo_range_random");
    let mut rng = rng_for(seed, 1);
    for case in 0..cases {
        let dim = rng.gen_range(2..=16);
        let branches = rng.gen_range(1..=8);
        let e = sampling::ensemble(&mut rng, branches, dim)?;
        let t = e.marginal_and_joint_entropies()?;
        let (s_avg, s_branch) = e.holevo_terms()?;
        let holevo = s_avg - s_branch;
        let instance =
            || json!({"seed": seed, "stream": 1, "case": case, "dim": dim, "branches": branches});
        two_form.record((t.mutual_information() - holevo).abs(), tol, instance);
        let min_s = e
            .branch_entropies()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let upper = (dim as f64).log2() - min_s;
        ceiling.record((-holevo).max(holevo - upper), tol, instance);
    }

    let mut entropy_inv = PropertyOutcome::new("entropy_unitary_invariance");
    let mut fid_inv = PropertyOutcome::new("fidelity_unitary_invariance");
    let mut rng = rng_for(seed, 2);
    for case in 0..cases {
        let n_qubits = rng.gen_range(1..=4);
        let dim = 1 << n_qubits;
        let u = if rng.gen_bool(0.5) {
            sampling::circuit_unitary(&mut rng, n_qubits)
        } else {
            sampling::unitary(&mut rng, dim)?
        };
        let rho = sampling::density(&mut rng, dim);
        let sigma = sampling::density(&mut rng, dim);
        let instance = || json!({"seed": seed, "stream": 2, "case": case, "n_qubits": n_qubits});
        let ds = von_neumann_entropy(&rho.conjugate(&u))? - von_neumann_entropy(&rho)?;
        entropy_inv.record(ds.abs(), tol, instance);
        let df = fidelity(&sigma.conjugate(&u), &rho.conjugate(&u))? - fidelity(&sigma, &rho)?;
        fid_inv.record(df.abs(), tol, instance);
    }

    let mut symmetry = PropertyOutcome::new("fidelity_symmetry");
    let mut rng = rng_for(seed, 3);
    for case in 0..cases {
        let dim = rng.gen_range(2..=8);
        let sigma = sampling::density(&mut rng, dim);
        let rho = sampling::density(&mut rng, dim);
        let psi = sampling::state(&mut rng, dim);
        let phi = sampling::state(&mut rng, dim);
        let instance = || json!({"seed": seed, "stream": 3, "case": case, "dim": dim});
        let swap = (fidelity(&sigma, &rho)? - fidelity(&rho, &sigma)?).abs();
        // Pure-pure case through the spectral route on untagged matrices.
        let a = untagged(&qstate::pure_density(&psi)?);
        let b = untagged(&qstate::pure_density(&phi)?);
        let overlap = (fidelity_spectral(&a, &b)? - psi.inner(&phi).norm()).abs();
        // Rank-one shortcut against the spectral route.
        let shortcut =
            (fidelity(&qstate::pure_density(&psi)?, &rho)? - fidelity_spectral(&a, &rho)?).abs();
        symmetry.record(swap.max(overlap).max(shortcut), tol, instance);
    }

    let mut additivity = PropertyOutcome::new("tensor_additivity");
    let mut rng = rng_for(seed, 4);
    for case in 0..cases {
        let (da, db) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = sampling::density(&mut rng, da);
        let b = sampling::density(&mut rng, db);
        let s_ab = von_neumann_entropy(&qstate::tensor(&a, &b))?;
        let d = s_ab - von_neumann_entropy(&a)? - von_neumann_entropy(&b)?;
        additivity.record(
            d.abs(),
            tol,
            || json!({"seed": seed, "stream": 4, "case": case}),
        );
    }

    let mut common = PropertyOutcome::new("common_unitary_invariance");
    let mut rng = rng_for(seed, 5);
    for case in 0..cases {
        let n_qubits = rng.gen_range(1..=4);
        let dim = 1 << n_qubits;
        let branches = rng.gen_range(1..=8);
        let e = sampling::ensemble(&mut rng, branches, dim)?;
        let u = if rng.gen_bool(0.5) {
            sampling::circuit_unitary(&mut rng, n_qubits)
        } else {
            sampling::unitary(&mut rng, dim)?
        };
        let d = e.apply_common_unitary(&u)?.holevo_mutual_information()?
            - e.holevo_mutual_information()?;
        common.record(d.abs(), tol, || {
            json!({"seed": seed, "stream": 5, "case": case, "n_qubits": n_qubits, "branches": branches})
        });
    }

    Ok(vec![
        two_form,
        ceiling,
        entropy_inv,
        symmetry,
        fid_inv,
        additivity,
        common,
    ])
}

fn untagged(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(rho.matrix().clone())
}

fn trace_properties(opts: &VerifyOptions) -> Result<Vec<PropertyOutcome>> {
    let tol = opts.tolerance;
    let mut substep = PropertyOutcome::new("substep_invariance");
    let mut oracle_delta = PropertyOutcome::new("oracle_delta_equals_entropy_change");
    let mut fannes = PropertyOutcome::new("fannes_per_step");
    let mut per_query = PropertyOutcome::new("per_query_step_bound");
    let mut fid_floor = PropertyOutcome::new("fidelity_lower_bound");
    let mut ceiling = PropertyOutcome::new("capacity_ceiling");
    let mut norm = PropertyOutcome::new("trace_norm_preservation");
    let mut queries = PropertyOutcome::new("min_queries_consistency");

    for n_qubits in opts.qubits_min..=opts.qubits_max {
        for &purity in &PURITIES {
            let cfg = GroverConfig::new(n_qubits, purity, opts.blocks);
            let mut e = cfg.initial_ensemble()?;
            let n = e.len();
            let log_n = (n as f64).log2();
            let s0 = von_neumann_entropy(&e.average_state()?)?;
            let limit = step_bound(n);
            let floor = oracle_fidelity_floor(n);
            let mq = min_queries(n);
            let mut reached = false;

            let mut info = e.holevo_mutual_information()?;
            for k in 1..=opts.blocks {
                let at = |substep: &str| {
                    let substep = substep.to_string();
                    move || {
                        json!({
                            "n_qubits": n_qubits, "purity": purity, "block": k, "substep": substep,
                            "replay": format!("qcapacity trace --qubits {n_qubits} --purity {purity} --blocks {k}"),
                        })
                    }
                };

                let e1 = apply_hadamard_layers(&e)?;
                let i1 = e1.holevo_mutual_information()?;
                substep.record((i1 - info).abs(), tol, at("H1"));

                let e2 = apply_oracle(&e1)?;
                let i2 = e2.holevo_mutual_information()?;
                let before = e1.average_state()?;
                let after = e2.average_state()?;
                let step = bounds::verify_step(&before, &after)?;
                let ds = von_neumann_entropy(&after)? - von_neumann_entropy(&before)?;
                oracle_delta.record(((i2 - i1) - ds).abs(), tol, at("U_B"));
                let bound = fannes_bound(step.bures, n)?;
                fannes.record(step.delta_s - bound, tol, {
                    let base = at("U_B");
                    move || {
                        with(
                            base(),
                            json!({"delta_s": step.delta_s, "bures": step.bures, "fannes": bound}),
                        )
                    }
                });
                per_query.record(step.delta_s - limit, tol, {
                    let base = at("U_B");
                    move || {
                        with(
                            base(),
                            json!({"delta_s": step.delta_s, "step_bound": limit}),
                        )
                    }
                });
                if e.mode() == Mode::Pure {
                    fid_floor.record(floor - step.fidelity, tol, {
                        let base = at("U_B");
                        move || with(base(), json!({"fidelity": step.fidelity, "floor": floor}))
                    });
                }

                let e3 = apply_hadamard_layers(&e2)?;
                let i3 = e3.holevo_mutual_information()?;
                substep.record((i3 - i2).abs(), tol, at("H2"));
                let e4 = apply_zero_phase_flip(&e3)?;
                let i4 = e4.holevo_mutual_information()?;
                substep.record((i4 - i3).abs(), tol, at("f0"));

                norm.record(e4.normalization_deviation(), tol, at("block"));
                ceiling.record(i4 - (log_n - s0), tol, at("block"));
                if e.mode() == Mode::Pure && !reached && i4 >= log_n - 0.01 {
                    reached = true;
                    queries.record(mq - k as f64, tol, at("block"));
                }

                e = e4;
                info = i4;
            }
            audit_or_fail(&e)?;
        }
    }
    Ok(vec![
        substep,
        oracle_delta,
        fannes,
        per_query,
        fid_floor,
        ceiling,
        norm,
        queries,
    ])
}

fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn audit_or_fail(e: &CqEnsemble) -> Result<()> {
    let drift = e.audit_branch_entropies()?;
    if drift > bounds::BOUND_TOLERANCE {
        return Err(Error::invalid(format!(
            "cached branch entropies drifted by {drift:e}"
        )));
    }
    Ok(())
}
