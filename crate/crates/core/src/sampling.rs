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

//! Seeded random states, ensembles and unitaries.
//!
//! Used by the `verify` command and the property tests. Everything draws
//! from a caller-supplied RNG so a seed reproduces every case.

use rand::Rng;

use crate::ensemble::CqEnsemble;
use crate::linalg::{hermitian_eigen, ComplexMatrix, C64};
use crate::qstate::{DensityMatrix, StateVector};
use crate::Result;

fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..dim {
            let z = complex(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    let raw: Vec<C64> = (0..dim).map(|_| complex(rng)).collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::new(raw.iter().map(|a| a / norm).collect()).expect("normalized by construction")
}

/// `A A† / Tr(A A†)` with `A` of random rank between 1 and `dim`.
pub fn density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let rank = rng.gen_range(1..=dim);
    let mut m = ComplexMatrix::zeros(dim);
    for _ in 0..rank {
        let v: Vec<C64> = (0..dim).map(|_| complex(rng)).collect();
        m = &m + &ComplexMatrix::outer(&v, &v);
    }
    let tr = m.trace().re;
    DensityMatrix::from_matrix_unchecked(m.scale(1.0 / tr).hermitian_part())
}

/// Eigenvector matrix of a random Hermitian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<ComplexMatrix> {
    Ok(hermitian_eigen(&hermitian(rng, dim))?.eigenvectors)
}

/// Random product of Hadamards (full layer or a single qubit), the zero
/// phase flip, single basis-state phase flips and diagonal phases on an
/// `n_qubits` register.
pub fn circuit_unitary<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = ComplexMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]).expect("2x2");
    let mut u = ComplexMatrix::identity(dim);
    for _ in 0..rng.gen_range(1..=8) {
        let gate = match rng.gen_range(0..5) {
            0 => (0..n_qubits).fold(ComplexMatrix::identity(1), |m, _| m.kron(&h)),
            1 => {
                let target = rng.gen_range(0..n_qubits);
                (0..n_qubits).fold(ComplexMatrix::identity(1), |m, q| {
                    if q == target {
                        m.kron(&h)
                    } else {
                        m.kron(&ComplexMatrix::identity(2))
                    }
                })
            }
            2 => phase_flip(dim, 0),
            3 => phase_flip(dim, rng.gen_range(0..dim)),
            _ => {
                let mut d = ComplexMatrix::identity(dim);
                for i in 0..dim {
                    d[(i, i)] = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                }
                d
            }
        };
        u = &gate * &u;
    }
    u
}

fn phase_flip(dim: usize, k: usize) -> ComplexMatrix {
    let mut d = ComplexMatrix::identity(dim);
    d[(k, k)] = C64::new(-1.0, 0.0);
    d
}

/// Random probability vector; roughly one draw in five has a zero entry.
pub fn priors<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    if n > 1 && rng.gen_bool(0.2) {
        let k = rng.gen_range(0..n);
        p[k] = 0.0;
    }
    let total: f64 = p.iter().sum();
    if total == 0.0 {
        return vec![1.0 / n as f64; n];
    }
    p.iter().map(|x| x / total).collect()
}

/// Ensemble with `n_branches` random branches of dimension `dim`, pure or
/// mixed at random.
pub fn ensemble<R: Rng + ?Sized>(rng: &mut R, n_branches: usize, dim: usize) -> Result<CqEnsemble> {
    let p = priors(rng, n_branches);
    if rng.gen_bool(0.5) {
        let states = (0..n_branches).map(|_| state(rng, dim)).collect();
        CqEnsemble::pure(p, states)
    } else {
        let states = (0..n_branches).map(|_| density(rng, dim)).collect();
        CqEnsemble::mixed(p, states)
    }
}
