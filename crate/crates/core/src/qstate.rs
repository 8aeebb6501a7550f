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

//! States of the computational register and the information metrics on them.
//!
//! All logarithms are base 2, so entropies and capacities are in bits.

use crate::linalg::{self, hermitian_eigen, ComplexMatrix, C64};
use crate::{Error, Result};

/// Allowed deviation of `Σ|ψ_j|²` from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Hermiticity, trace and positivity tolerance for density matrices.
pub const DENSITY_TOLERANCE: f64 = 1e-9;

/// Largest register in mixed (density-matrix) mode.
pub const MAX_MIXED_QUBITS: usize = 10;

/// Largest register in pure (state-vector) mode.
pub const MAX_PURE_QUBITS: usize = 12;

/// Unit-norm pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid(
                "state vector must have at least one amplitude",
            ));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if !((norm - 1.0).abs() <= NORM_TOLERANCE) {
            return Err(Error::invalid(format!(
                "state vector is not normalized (norm² = {norm})"
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Uniform superposition `Σ_j |j⟩ / √dim`.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: vec![a; dim],
        })
    }

    pub(crate) fn from_amplitudes_unchecked(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `u|ψ⟩`. `u` must be unitary; this is not rechecked.
    pub fn apply(&self, u: &ComplexMatrix) -> Self {
        Self::from_amplitudes_unchecked(u.mul_vec(&self.amplitudes))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { amplitudes }
    }
}

/// Hermitian, positive-semidefinite, unit-trace operator.
///
/// When the state was built from a pure vector the vector is kept alongside
/// and carried through unitary maps, which lets [`fidelity`] and
/// [`von_neumann_entropy`] take their rank-one shortcuts.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    pure: Option<StateVector>,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity within
    /// [`DENSITY_TOLERANCE`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermitian_deviation();
        if !(herm <= DENSITY_TOLERANCE) {
            return Err(Error::invalid(format!(
                "density matrix is not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if !((tr.re - 1.0).abs() <= DENSITY_TOLERANCE && tr.im.abs() <= DENSITY_TOLERANCE) {
            return Err(Error::invalid(format!(
                "density matrix trace is {tr}, not 1"
            )));
        }
        let eig = hermitian_eigen(&matrix)?;
        let lowest = eig.eigenvalues[0];
        if lowest < -DENSITY_TOLERANCE {
            return Err(Error::invalid(format!(
                "density matrix has negative eigenvalue {lowest:e}"
            )));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            pure: None,
        })
    }

    /// Wraps a matrix produced by a validity-preserving operation.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix, pure: None }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        Ok(Self::from_matrix_unchecked(ComplexMatrix::from_diagonal(
            &vec![1.0 / dim as f64; dim],
        )))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// The generating vector, if this state is known to be `|ψ⟩⟨ψ|`.
    pub fn pure_state(&self) -> Option<&StateVector> {
        self.pure.as_ref()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `u ρ u†`. `u` must be unitary; this is not rechecked.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Self {
        Self {
            matrix: self.matrix.conjugate_by(u),
            pure: self.pure.as_ref().map(|psi| psi.apply(u)),
        }
    }

    /// Replaces the matrix (and pure vector) after an in-crate unitary map.
    pub(crate) fn mapped(matrix: ComplexMatrix, pure: Option<StateVector>) -> Self {
        Self { matrix, pure }
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn pure_density(psi: &StateVector) -> Result<DensityMatrix> {
    let norm = psi.norm_sqr();
    if !((norm - 1.0).abs() <= NORM_TOLERANCE) {
        return Err(Error::invalid(format!(
            "state vector is not normalized (norm² = {norm})"
        )));
    }
    let a = psi.amplitudes();
    Ok(DensityMatrix {
        matrix: ComplexMatrix::outer(a, a),
        pure: Some(psi.clone()),
    })
}

/// `p|0⟩⟨0| + (1−p)|1⟩⟨1|`.
pub fn single_qubit_mixed(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
    }
    let rho = DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_diagonal(&[p, 1.0 - p]));
    Ok(if p == 1.0 {
        DensityMatrix {
            pure: Some(StateVector::basis(2, 0)?),
            ..rho
        }
    } else if p == 0.0 {
        DensityMatrix {
            pure: Some(StateVector::basis(2, 1)?),
            ..rho
        }
    } else {
        rho
    })
}

/// `a ⊗ b`, with `a`'s index as the most significant part.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix {
        matrix: a.matrix.kron(&b.matrix),
        pure: match (&a.pure, &b.pure) {
            (Some(x), Some(y)) => Some(x.kron(y)),
            _ => None,
        },
    }
}

fn check_qubits(n_qubits: usize, max: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > max {
        return Err(Error::invalid(format!(
            "register size {n_qubits} outside supported range 1..={max}"
        )));
    }
    Ok(())
}

/// `n`-fold tensor power of [`single_qubit_mixed`]`(p)`. Qubit 0 is the
/// most significant bit of the basis index.
pub fn initial_register_state(n_qubits: usize, p: f64) -> Result<DensityMatrix> {
    check_qubits(n_qubits, MAX_MIXED_QUBITS)?;
    let single = single_qubit_mixed(p)?;
    let mut rho = single.clone();
    for _ in 1..n_qubits {
        rho = tensor(&rho, &single);
    }
    Ok(rho)
}

/// `|00…0⟩`, the pure-mode form of [`initial_register_state`] at `p = 1`.
pub fn initial_register_vector(n_qubits: usize) -> Result<StateVector> {
    check_qubits(n_qubits, MAX_PURE_QUBITS)?;
    StateVector::basis(1 << n_qubits, 0)
}

/// `−Σ λ log₂ λ` over a spectrum, with `0·log 0 = 0`.
///
/// Eigenvalues in `[−DENSITY_TOLERANCE, CLIP_TOLERANCE)` count as zero;
/// anything more negative is not a physical state.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in eigenvalues {
        if lambda < -DENSITY_TOLERANCE {
            return Err(Error::invalid(format!(
                "negative eigenvalue {lambda:e} in density matrix"
            )));
        }
        if lambda >= linalg::CLIP_TOLERANCE {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    if rho.pure.is_some() {
        return Ok(0.0);
    }
    let eig = hermitian_eigen(&rho.matrix)?;
    let s = entropy_of_spectrum(&eig.eigenvalues)?;
    Ok(s.min((rho.dim() as f64).log2()))
}

fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// `F(σ, ρ) = Tr √(√ρ σ √ρ)`, clamped to `[0, 1]`.
///
/// If either argument carries its pure vector the closed form
/// `√⟨ψ|ρ|ψ⟩` is used instead of two eigendecompositions.
pub fn fidelity(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    check_same_dim(sigma, rho)?;
    if let Some(psi) = &sigma.pure {
        return Ok(fidelity_with_pure(psi, rho));
    }
    if let Some(psi) = &rho.pure {
        return Ok(fidelity_with_pure(psi, sigma));
    }
    fidelity_spectral(sigma, rho)
}

/// `√⟨ψ|ρ|ψ⟩`, the fidelity between `|ψ⟩⟨ψ|` and `ρ`.
pub fn fidelity_with_pure(psi: &StateVector, rho: &DensityMatrix) -> f64 {
    let rho_psi = rho.matrix.mul_vec(psi.amplitudes());
    let overlap: C64 = psi
        .amplitudes()
        .iter()
        .zip(&rho_psi)
        .map(|(a, b)| a.conj() * b)
        .sum();
    overlap.re.max(0.0).sqrt().min(1.0)
}

/// Square root on a density-matrix spectrum. Eigenvalues below
/// `CLIP_TOLERANCE` are rank deficiency, not signal: their round-off would
/// otherwise surface at `√ε ≈ 1e-8` in the fidelity.
fn spectral_sqrt(lambda: f64) -> f64 {
    if lambda < -DENSITY_TOLERANCE {
        f64::NAN
    } else if lambda < linalg::CLIP_TOLERANCE {
        0.0
    } else {
        lambda.sqrt()
    }
}

/// Fidelity through the spectral route only, ignoring pure-state shortcuts.
pub fn fidelity_spectral(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    check_same_dim(sigma, rho)?;
    let sqrt_rho = linalg::apply_spectral_function(&rho.matrix, spectral_sqrt)?;
    let inner = (&(&sqrt_rho * &sigma.matrix) * &sqrt_rho).hermitian_part();
    let eig = hermitian_eigen(&inner)?;
    let f: f64 = eig
        .eigenvalues
        .iter()
        .map(|&l| spectral_sqrt(l.max(0.0)))
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `d_B = √(1 − F²)`.
pub fn bures_distance(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    let f = fidelity(sigma, rho)?;
    Ok((1.0 - f * f).max(0.0).sqrt())
}
