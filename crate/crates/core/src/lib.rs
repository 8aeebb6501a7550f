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

//! Quantum computation viewed as a communication channel.
//!
//! A memory register `M` holds the problem instance `|i⟩` (the marked item
//! of a database search) and a computational register `C` is evolved by
//! Grover blocks. The classical-quantum joint state
//! `Σ_i p_i |i⟩⟨i| ⊗ ρ_C(i)` is kept as an explicit ensemble, and the
//! mutual information between the registers (the Holevo quantity) is
//! tracked block by block for arbitrary initial mixedness of `C`.
//!
//! Modules
//! =======
//! * [`linalg`]: dense complex matrices, Hermitian eigendecomposition and
//!   spectral matrix functions.
//! * [`qstate`]: state vectors, density matrices, von Neumann entropy,
//!   fidelity and Bures distance.
//! * [`ensemble`]: the classical-quantum ensemble and its entropies.
//! * [`grover`]: Hadamard layers, the black-box oracle, the zero phase flip
//!   and the trace driver.
//! * [`bounds`]: continuity, per-query, minimum-query and no-speedup bounds.
//! * [`sampling`]: seeded random states, ensembles and unitaries for
//!   property checks.
//! * [`cli`]: the `qcapacity` command-line front end.

// Validation uses `!(x <= tol)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod ensemble;
mod error;
pub mod grover;
pub mod linalg;
pub mod qstate;
pub mod sampling;

pub use error::{Error, Result};
