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

//! The classical-quantum state of the memory and computational registers.
//!
//! The joint state `Σ_i p_i |i⟩⟨i|_M ⊗ ρ_C(i)` is block diagonal in the
//! memory basis, so it is stored as priors plus one computational-register
//! state per branch and never materialized as an `N·N_C` square matrix.

use rayon::prelude::*;

use crate::linalg::{hermitian_eigen, ComplexMatrix, C64};
use crate::qstate::{
    entropy_of_spectrum, initial_register_state, initial_register_vector, pure_density,
    von_neumann_entropy, DensityMatrix, StateVector,
};
use crate::{Error, Result};

/// Allowed deviation of `Σ p_i` from one.
pub const PRIOR_TOLERANCE: f64 = 1e-10;

/// Unitarity tolerance for [`CqEnsemble::apply_common_unitary`].
pub const UNITARY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Pure,
    Mixed,
}

/// Branch states, all of one kind.
#[derive(Clone, Debug)]
pub enum Branches {
    Pure(Vec<StateVector>),
    Mixed(Vec<DensityMatrix>),
}

impl Branches {
    fn len(&self) -> usize {
        match self {
            Branches::Pure(v) => v.len(),
            Branches::Mixed(v) => v.len(),
        }
    }

    fn dims(&self) -> Vec<usize> {
        match self {
            Branches::Pure(v) => v.iter().map(StateVector::dim).collect(),
            Branches::Mixed(v) => v.iter().map(DensityMatrix::dim).collect(),
        }
    }
}

/// Entropies of the memory register, the computational register and the
/// joint system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CqEntropies {
    pub memory: f64,
    pub computational: f64,
    pub joint: f64,
}

impl CqEntropies {
    /// `S_M + S_C − S_MC`.
    pub fn mutual_information(&self) -> f64 {
        self.memory + self.computational - self.joint
    }
}

/// Priors `p_i` with per-branch computational-register states `ρ_C(i)`.
///
/// Branch entropies are computed once at construction and carried through
/// unitary maps unchanged; [`CqEnsemble::audit_branch_entropies`] recomputes
/// them for verification.
#[derive(Clone, Debug)]
pub struct CqEnsemble {
    priors: Vec<f64>,
    branches: Branches,
    branch_entropies: Vec<f64>,
}

impl CqEnsemble {
    pub fn new(priors: Vec<f64>, branches: Branches) -> Result<Self> {
        if priors.is_empty() {
            return Err(Error::invalid("ensemble needs at least one branch"));
        }
        if priors.len() != branches.len() {
            return Err(Error::invalid(format!(
                "{} priors for {} branches",
                priors.len(),
                branches.len()
            )));
        }
        validate_priors(&priors)?;
        let dims = branches.dims();
        if dims.iter().any(|&d| d != dims[0]) {
            return Err(Error::invalid("all branches must share one dimension"));
        }
        let branch_entropies = compute_branch_entropies(&branches)?;
        Ok(Self {
            priors,
            branches,
            branch_entropies,
        })
    }

    pub fn pure(priors: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        Self::new(priors, Branches::Pure(states))
    }

    pub fn mixed(priors: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        Self::new(priors, Branches::Mixed(states))
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn branches(&self) -> &Branches {
        &self.branches
    }

    pub fn mode(&self) -> Mode {
        match self.branches {
            Branches::Pure(_) => Mode::Pure,
            Branches::Mixed(_) => Mode::Mixed,
        }
    }

    /// Number of branches `N` (memory-register dimension).
    pub fn len(&self) -> usize {
        self.priors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priors.is_empty()
    }

    /// Computational-register dimension `N_C`.
    pub fn branch_dim(&self) -> usize {
        match &self.branches {
            Branches::Pure(v) => v[0].dim(),
            Branches::Mixed(v) => v[0].dim(),
        }
    }

    /// Cached `S(ρ_C(i))`.
    pub fn branch_entropies(&self) -> &[f64] {
        &self.branch_entropies
    }

    /// `Σ p_i S(ρ_C(i))`.
    pub fn mean_branch_entropy(&self) -> f64 {
        self.priors
            .iter()
            .zip(&self.branch_entropies)
            .map(|(p, s)| p * s)
            .sum()
    }

    pub fn branch_density(&self, i: usize) -> Result<DensityMatrix> {
        match &self.branches {
            Branches::Pure(v) => pure_density(&v[i]),
            Branches::Mixed(v) => Ok(v[i].clone()),
        }
    }

    /// `ρ_C = Σ p_i ρ_C(i)`.
    ///
    /// Each entry is summed in ascending branch order regardless of how the
    /// rows are scheduled, so the result is bit-reproducible.
    pub fn average_state(&self) -> Result<DensityMatrix> {
        let n = self.branch_dim();
        let mut avg = ComplexMatrix::zeros(n);
        let priors = &self.priors;
        match &self.branches {
            Branches::Pure(states) => {
                avg.as_mut_slice()
                    .par_chunks_mut(n)
                    .enumerate()
                    .for_each(|(r, row)| {
                        for (p, psi) in priors.iter().zip(states) {
                            if *p == 0.0 {
                                continue;
                            }
                            let a = psi.amplitudes();
                            let ar = a[r] * *p;
                            for (out, ac) in row.iter_mut().zip(a) {
                                *out += ar * ac.conj();
                            }
                        }
                    });
            }
            Branches::Mixed(states) => {
                avg.as_mut_slice()
                    .par_chunks_mut(n)
                    .enumerate()
                    .for_each(|(r, row)| {
                        for (p, rho) in priors.iter().zip(states) {
                            if *p == 0.0 {
                                continue;
                            }
                            for (out, x) in row.iter_mut().zip(rho.matrix().row(r)) {
                                *out += x * *p;
                            }
                        }
                    });
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(avg.hermitian_part()))
    }

    /// `(S(ρ_C), Σ p_i S(ρ_C(i)))`.
    pub fn holevo_terms(&self) -> Result<(f64, f64)> {
        let s_avg = von_neumann_entropy(&self.average_state()?)?;
        Ok((s_avg, self.mean_branch_entropy()))
    }

    /// Holevo quantity `S(ρ_C) − Σ p_i S(ρ_C(i))` in bits, which for a
    /// classical-quantum state equals the register mutual information.
    pub fn holevo_mutual_information(&self) -> Result<f64> {
        let (s_avg, s_branch) = self.holevo_terms()?;
        Ok((s_avg - s_branch).clamp(0.0, (self.branch_dim() as f64).log2()))
    }

    /// `S(ρ_M)`, `S(ρ_C)` and `S(ρ_MC)`.
    ///
    /// The joint entropy comes from the exact block-diagonal spectrum
    /// `{p_i μ_ik}`, with the branch spectra `μ_ik` recomputed here rather
    /// than taken from the entropy cache.
    pub fn marginal_and_joint_entropies(&self) -> Result<CqEntropies> {
        let memory = entropy_of_spectrum(&self.priors)?;
        let computational = von_neumann_entropy(&self.average_state()?)?;
        let spectra: Vec<Vec<f64>> = match &self.branches {
            Branches::Pure(states) => states
                .iter()
                .map(|s| {
                    let mut mu = vec![0.0; s.dim()];
                    mu[0] = 1.0;
                    mu
                })
                .collect(),
            Branches::Mixed(states) => states
                .par_iter()
                .map(|rho| hermitian_eigen(rho.matrix()).map(|e| e.eigenvalues))
                .collect::<Result<_>>()?,
        };
        let joint_spectrum: Vec<f64> = self
            .priors
            .iter()
            .zip(&spectra)
            .flat_map(|(p, mu)| mu.iter().map(move |m| p * m))
            .collect();
        let joint = entropy_of_spectrum(&joint_spectrum)?;
        Ok(CqEntropies {
            memory,
            computational,
            joint,
        })
    }

    /// Applies the same unitary to every branch: `ρ → uρu†`, `ψ → uψ`.
    pub fn apply_common_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.branch_dim() {
            return Err(Error::invalid(format!(
                "unitary of dimension {} on branches of dimension {}",
                u.dim(),
                self.branch_dim()
            )));
        }
        let deviation = u.unitarity_deviation();
        if !(deviation <= UNITARY_TOLERANCE) {
            return Err(Error::invalid(format!(
                "matrix is not unitary (max |u†u − I| = {deviation:e})"
            )));
        }
        self.map_branches_unitary(|_, psi| Ok(psi.apply(u)), |_, rho| Ok(rho.conjugate(u)))
    }

    /// Maps every branch through a caller-supplied, possibly
    /// branch-dependent, unitary. Branch entropies are carried forward, so
    /// the maps must be unitary.
    pub fn map_branches_unitary<P, M>(&self, pure_map: P, mixed_map: M) -> Result<Self>
    where
        P: Fn(usize, &StateVector) -> Result<StateVector> + Sync,
        M: Fn(usize, &DensityMatrix) -> Result<DensityMatrix> + Sync,
    {
        let branches = match &self.branches {
            Branches::Pure(states) => Branches::Pure(
                states
                    .par_iter()
                    .enumerate()
                    .map(|(i, s)| pure_map(i, s))
                    .collect::<Result<_>>()?,
            ),
            Branches::Mixed(states) => Branches::Mixed(
                states
                    .par_iter()
                    .enumerate()
                    .map(|(i, r)| mixed_map(i, r))
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(Self {
            priors: self.priors.clone(),
            branches,
            branch_entropies: self.branch_entropies.clone(),
        })
    }

    /// Recomputes branch entropies and returns the largest deviation from
    /// the cached values.
    pub fn audit_branch_entropies(&self) -> Result<f64> {
        let fresh = compute_branch_entropies(&self.branches)?;
        Ok(fresh
            .iter()
            .zip(&self.branch_entropies)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Largest deviation of any branch norm (pure) or trace (mixed) from 1.
    pub fn normalization_deviation(&self) -> f64 {
        match &self.branches {
            Branches::Pure(states) => states
                .iter()
                .map(|s| (s.norm_sqr() - 1.0).abs())
                .fold(0.0, f64::max),
            Branches::Mixed(states) => states
                .iter()
                .map(|r| (r.matrix().trace() - C64::new(1.0, 0.0)).norm())
                .fold(0.0, f64::max),
        }
    }
}

fn validate_priors(priors: &[f64]) -> Result<()> {
    if let Some(p) = priors.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::invalid(format!("prior {p} is not a probability")));
    }
    let total: f64 = priors.iter().sum();
    if !((total - 1.0).abs() <= PRIOR_TOLERANCE) {
        return Err(Error::invalid(format!("priors sum to {total}, not 1")));
    }
    Ok(())
}

fn compute_branch_entropies(branches: &Branches) -> Result<Vec<f64>> {
    match branches {
        Branches::Pure(states) => Ok(vec![0.0; states.len()]),
        Branches::Mixed(states) => states.par_iter().map(von_neumann_entropy).collect(),
    }
}

/// `2^n` branches with uniform priors, each in
/// [`initial_register_state`]`(n, p)`. Pure mode is used when `p = 1`.
pub fn uniform_ensemble(n_qubits: usize, p: f64) -> Result<CqEnsemble> {
    with_priors(n_qubits, p, None)
}

/// As [`uniform_ensemble`] with explicit priors when given.
pub fn with_priors(n_qubits: usize, p: f64, priors: Option<Vec<f64>>) -> Result<CqEnsemble> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("purity {p} outside [0, 1]")));
    }
    let (branches, n) = if p == 1.0 {
        let psi = initial_register_vector(n_qubits)?;
        let n = psi.dim();
        (Branches::Pure(vec![psi; n]), n)
    } else {
        let rho = initial_register_state(n_qubits, p)?;
        let n = rho.dim();
        (Branches::Mixed(vec![rho; n]), n)
    };
    let priors = priors.unwrap_or_else(|| vec![1.0 / n as f64; n]);
    CqEnsemble::new(priors, branches)
}

/// Convenience for tests and the verifier: mixed-mode ensemble from pure
/// vectors, bypassing the pure fast path.
pub fn mixed_from_vectors(priors: Vec<f64>, states: &[StateVector]) -> Result<CqEnsemble> {
    let densities = states
        .iter()
        .map(|s| pure_density(s).map(|d| DensityMatrix::from_matrix_unchecked(d.matrix().clone())))
        .collect::<Result<Vec<_>>>()?;
    CqEnsemble::mixed(priors, densities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn h(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    fn basis(dim: usize, i: usize) -> StateVector {
        StateVector::basis(dim, i).unwrap()
    }

    #[test]
    fn uniform_pure_ensemble() {
        let e = uniform_ensemble(2, 1.0).unwrap();
        assert_eq!(e.mode(), Mode::Pure);
        assert_eq!(e.len(), 4);
        assert_eq!(e.priors(), &[0.25; 4]);
        match e.branches() {
            Branches::Pure(v) => assert!(v.iter().all(|s| *s == basis(4, 0))),
            _ => unreachable!(),
        }
        assert_eq!(e.holevo_mutual_information().unwrap(), 0.0);
    }

    #[test]
    fn uniform_mixed_ensemble_entropies() {
        let e = uniform_ensemble(4, 0.95).unwrap();
        assert_eq!(e.mode(), Mode::Mixed);
        assert_eq!(e.len(), 16);
        for s in e.branch_entropies() {
            assert!((s - 4.0 * h(0.95)).abs() < 1e-9);
            assert!((s - 1.145588).abs() < 1e-6);
        }
        let ent = e.marginal_and_joint_entropies().unwrap();
        assert!((ent.joint - (4.0 + 4.0 * h(0.95))).abs() < 1e-9);
        assert!(e.holevo_mutual_information().unwrap().abs() < 1e-12);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let s = basis(2, 0);
        assert!(CqEnsemble::pure(vec![0.5, 0.6], vec![s.clone(), s.clone()]).is_err());
        assert!(CqEnsemble::pure(vec![1.5, -0.5], vec![s.clone(), s.clone()]).is_err());
        assert!(CqEnsemble::pure(vec![1.0], vec![s.clone(), s.clone()]).is_err());
        assert!(CqEnsemble::pure(vec![0.5, 0.5], vec![s, basis(4, 0)]).is_err());
        assert!(CqEnsemble::pure(vec![], vec![]).is_err());
        assert!(uniform_ensemble(11, 0.9).is_err());
        assert!(uniform_ensemble(2, 1.2).is_err());
    }

    #[test]
    fn average_state_examples() {
        let rho = qstate::initial_register_state(2, 0.8).unwrap();
        let e = CqEnsemble::mixed(vec![0.3, 0.7], vec![rho.clone(), rho.clone()]).unwrap();
        assert!(
            e.average_state()
                .unwrap()
                .matrix()
                .max_abs_diff(rho.matrix())
                < 1e-15
        );

        let states: Vec<_> = (0..4).map(|i| basis(4, i)).collect();
        let e = CqEnsemble::pure(vec![0.25; 4], states).unwrap();
        let avg = e.average_state().unwrap();
        assert!((von_neumann_entropy(&avg).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_marked_uniform_states_are_orthogonal() {
        // O_i|s⟩ for N = 4: the uniform state with the sign of entry i flipped.
        let states: Vec<StateVector> = (0..4)
            .map(|i| {
                let amps: Vec<f64> = (0..4).map(|j| if i == j { -0.5 } else { 0.5 }).collect();
                StateVector::from_real(&amps).unwrap()
            })
            .collect();
        for i in 0..4 {
            for j in 0..4 {
                let g = states[i].inner(&states[j]).norm();
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
        let e = CqEnsemble::pure(vec![0.25; 4], states).unwrap();
        let s = von_neumann_entropy(&e.average_state().unwrap()).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn holevo_examples() {
        let rho = qstate::initial_register_state(1, 0.6).unwrap();
        let e = CqEnsemble::mixed(vec![0.5, 0.5], vec![rho.clone(), rho]).unwrap();
        assert!(e.holevo_mutual_information().unwrap().abs() < 1e-12);

        let e = CqEnsemble::pure(vec![0.5, 0.5], vec![basis(2, 0), basis(2, 1)]).unwrap();
        assert!((e.holevo_mutual_information().unwrap() - 1.0).abs() < 1e-12);

        let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let e = CqEnsemble::pure(vec![0.5, 0.5], vec![basis(2, 0), plus]).unwrap();
        let lam = [(1.0 + FRAC_1_SQRT_2) / 2.0, (1.0 - FRAC_1_SQRT_2) / 2.0];
        let expected = -lam.iter().map(|l| l * l.log2()).sum::<f64>();
        let got = e.holevo_mutual_information().unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 0.600876036693).abs() < 1e-9);
    }

    #[test]
    fn entropy_triples() {
        let states = vec![basis(16, 0); 16];
        let e = CqEnsemble::pure(vec![1.0 / 16.0; 16], states).unwrap();
        let t = e.marginal_and_joint_entropies().unwrap();
        assert!((t.memory - 4.0).abs() < 1e-12);
        assert!(t.computational.abs() < 1e-12);
        assert!((t.joint - 4.0).abs() < 1e-12);

        let states: Vec<_> = (0..4).map(|i| basis(4, i)).collect();
        let e = CqEnsemble::pure(vec![0.25; 4], states).unwrap();
        let t = e.marginal_and_joint_entropies().unwrap();
        assert!((t.memory - 2.0).abs() < 1e-12);
        assert!((t.computational - 2.0).abs() < 1e-12);
        assert!((t.joint - 2.0).abs() < 1e-12);
        assert!((t.mutual_information() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn common_unitary_examples() {
        let e = uniform_ensemble(2, 1.0).unwrap();
        let same = e.apply_common_unitary(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(
            same.average_state().unwrap().matrix(),
            e.average_state().unwrap().matrix()
        );

        let h1 = ComplexMatrix::from_real_rows(&[
            vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ])
        .unwrap();
        let h2 = h1.kron(&h1);
        let out = e.apply_common_unitary(&h2).unwrap();
        match out.branches() {
            Branches::Pure(v) => {
                for s in v {
                    for a in s.amplitudes() {
                        assert!((a - C64::new(0.5, 0.0)).norm() < 1e-15);
                    }
                }
            }
            _ => unreachable!(),
        }

        let not_unitary = ComplexMatrix::from_diagonal(&[1.0, 2.0, 1.0, 1.0]);
        assert!(e.apply_common_unitary(&not_unitary).is_err());
        assert!(e.apply_common_unitary(&h1).is_err());
    }

    #[test]
    fn mixed_copy_of_pure_ensemble_agrees() {
        let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let states = vec![basis(2, 0), plus];
        let pure = CqEnsemble::pure(vec![0.3, 0.7], states.clone()).unwrap();
        let mixed = mixed_from_vectors(vec![0.3, 0.7], &states).unwrap();
        let a = pure.holevo_mutual_information().unwrap();
        let b = mixed.holevo_mutual_information().unwrap();
        assert!((a - b).abs() < 1e-10);
        assert!(mixed.audit_branch_entropies().unwrap() < 1e-10);
    }
}
