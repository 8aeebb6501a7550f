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

use proptest::prelude::*;
use qcapacity::linalg::{apply_spectral_function, hermitian_eigen, ComplexMatrix, C64};

fn hermitian(dim: usize, real: bool) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |raw| {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let (re, im) = raw[i * dim + j];
                let z = if i == j || real {
                    C64::new(re, 0.0)
                } else {
                    C64::new(re, im)
                };
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    })
}

fn any_hermitian(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (2..=max_dim, any::<bool>()).prop_flat_map(|(d, real)| hermitian(d, real))
}

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut det = C64::new(0.0, 0.0);
    for col in 0..n {
        let minor: Vec<Vec<C64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, z)| *z)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += m[0][col] * cofactor_det(&minor) * sign;
    }
    det
}

fn rows(m: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigenvectors_orthonormal_and_reconstruct(m in any_hermitian(32)) {
        let eig = hermitian_eigen(&m).unwrap();
        let v = &eig.eigenvectors;
        let gram = &v.adjoint() * v;
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(m.dim())) < 1e-10);
        prop_assert!(eig.reconstruct().max_abs_diff(&m) < 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigenvalues_sum_to_trace(m in any_hermitian(32)) {
        let eig = hermitian_eigen(&m).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - m.trace().re).abs() < 1e-9);
    }

    #[test]
    fn eigenvalues_multiply_to_determinant(m in any_hermitian(4)) {
        let eig = hermitian_eigen(&m).unwrap();
        let product: f64 = eig.eigenvalues.iter().product();
        let det = cofactor_det(&rows(&m));
        prop_assert!(det.im.abs() < 1e-9);
        prop_assert!((product - det.re).abs() < 1e-9, "{product} vs {det}");
    }

    #[test]
    fn decomposition_is_deterministic(m in any_hermitian(16)) {
        let a = hermitian_eigen(&m).unwrap();
        let b = hermitian_eigen(&m.clone()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn psd_square_root_multiplies_back(m in any_hermitian(8)) {
        let psd = &m * &m.adjoint();
        let root = apply_spectral_function(&psd, f64::sqrt).unwrap();
        prop_assert!((&root * &root).max_abs_diff(&psd) < 1e-9);
    }

    #[test]
    fn real_and_complex_paths_agree(m in (2usize..=16).prop_flat_map(|d| hermitian(d, true))) {
        // A diagonal phase change makes the matrix complex without moving
        // its spectrum, forcing the general rotation path.
        let phases: Vec<C64> = (0..m.dim()).map(|k| C64::from_polar(1.0, 0.7 * k as f64 + 0.3)).collect();
        let mut u = ComplexMatrix::zeros(m.dim());
        for (k, z) in phases.iter().enumerate() {
            u[(k, k)] = *z;
        }
        let real = hermitian_eigen(&m).unwrap();
        let complex = hermitian_eigen(&m.conjugate_by(&u)).unwrap();
        for (a, b) in real.eigenvalues.iter().zip(&complex.eigenvalues) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_function_returns_input(m in any_hermitian(12)) {
        let out = apply_spectral_function(&m, |x| x).unwrap();
        prop_assert!(out.max_abs_diff(&m) < 1e-10);
    }
}

#[test]
fn degenerate_and_large_spectra() {
    // Repeated eigenvalues under a non-trivial basis change.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = ComplexMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]).unwrap();
    let h3 = h.kron(&h).kron(&h);
    let d = ComplexMatrix::from_diagonal(&[0.5, 0.5, 0.5, 0.1, 0.1, 0.2, 0.2, 0.2]);
    let m = d.conjugate_by(&h3);
    let eig = hermitian_eigen(&m).unwrap();
    let expected = [0.1, 0.1, 0.2, 0.2, 0.2, 0.5, 0.5, 0.5];
    for (a, b) in eig.eigenvalues.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }

    let big = ComplexMatrix::from_diagonal(&(0..64).map(|i| i as f64).collect::<Vec<_>>());
    let u = hermitian_eigen(&{
        let mut m = ComplexMatrix::zeros(64);
        for i in 0..64 {
            for j in 0..64 {
                m[(i, j)] = C64::new(((i * 7 + j * 3) % 11) as f64 + ((i + j) % 5) as f64, 0.0);
            }
        }
        m.hermitian_part()
    })
    .unwrap()
    .eigenvectors;
    let m = big.conjugate_by(&u);
    let eig = hermitian_eigen(&m).unwrap();
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        assert!((lambda - k as f64).abs() < 1e-9);
    }
}
