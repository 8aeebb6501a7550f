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

use qcapacity::bounds;
use qcapacity::ensemble::{self, CqEnsemble};
use qcapacity::grover::{self, oracle_fidelity_floor, run_trace, GroverConfig, Priors};
use qcapacity::linalg::ComplexMatrix;
use qcapacity::qstate::{self, DensityMatrix};

const FROZEN_TOL: f64 = 1e-9;

/// Values from an independent dense-matrix model (explicit Kronecker
/// Hadamards, full oracle matrices, `eigvalsh` entropies).
const N4_PURE: [f64; 13] = [
    0.0,
    1.7012377756,
    3.66272924056,
    3.9245924889,
    3.86659495303,
    2.21740180662,
    0.139911701457,
    1.1877841296,
    3.36377682063,
    3.98014193569,
    3.97525696558,
    2.7042511566,
    0.45828746064,
];
const N4_P095: [f64; 13] = [
    0.0,
    1.19394113005,
    2.56347580435,
    2.77606793579,
    2.72359672035,
    1.51370659633,
    0.198763361517,
    0.781172978459,
    2.36610670931,
    2.8005208036,
    2.79089172479,
    1.89633557653,
    0.282247846332,
];
const N4_P07: [f64; 13] = [
    0.0,
    0.206551399781,
    0.282446975924,
    0.335420841983,
    0.341780111722,
    0.156201868131,
    0.118619108615,
    0.0747345157865,
    0.314365509905,
    0.326195222754,
    0.315136781839,
    0.272081816959,
    0.0245207220812,
];
const N3_PURE: [f64; 7] = [
    0.0,
    2.21691718669,
    2.87960507671,
    2.8195207678,
    0.50618107065,
    1.31582117334,
    2.99937690261,
];
const N3_P09: [f64; 5] = [
    0.0,
    1.16565088367,
    1.51779517406,
    1.45237359775,
    0.341378631216,
];

fn information(n: usize, p: f64, blocks: usize) -> Vec<f64> {
    run_trace(&GroverConfig::new(n, p, blocks))
        .unwrap()
        .iter()
        .map(|r| r.mutual_information)
        .collect()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (k, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() < tol, "k={k}: {g} vs {w}");
    }
}

#[test]
fn frozen_traces_match() {
    assert_close(&information(4, 1.0, 12), &N4_PURE, FROZEN_TOL);
    assert_close(&information(4, 0.95, 12), &N4_P095, FROZEN_TOL);
    assert_close(&information(4, 0.7, 12), &N4_P07, FROZEN_TOL);
    assert_close(&information(3, 1.0, 6), &N3_PURE, FROZEN_TOL);
    assert_close(&information(3, 0.9, 4), &N3_P09, FROZEN_TOL);
    assert_close(&information(2, 1.0, 3), &[0.0, 2.0, 2.0, 0.0], FROZEN_TOL);
}

fn dense_hadamard(n: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = ComplexMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]).unwrap();
    (1..n).fold(h.clone(), |acc, _| acc.kron(&h))
}

fn sign_flip(dim: usize, index: usize) -> ComplexMatrix {
    let mut d = vec![1.0; dim];
    d[index] = -1.0;
    ComplexMatrix::from_diagonal(&d)
}

/// Straightforward dense evolution of every branch density matrix.
fn dense_trace(n: usize, p: f64, blocks: usize) -> Vec<(DensityMatrix, f64)> {
    let dim = 1 << n;
    let h = dense_hadamard(n);
    let f0 = sign_flip(dim, 0);
    let rho0 = qstate::initial_register_state(n, p).unwrap();
    let mut branches = vec![rho0; dim];
    let mut out = Vec::new();
    for k in 0..=blocks {
        if k > 0 {
            branches = branches
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let u = &(&(&f0 * &h) * &sign_flip(dim, i)) * &h;
                    DensityMatrix::new(b.matrix().conjugate_by(&u)).unwrap()
                })
                .collect();
        }
        let mut avg = ComplexMatrix::zeros(dim);
        for b in &branches {
            avg = &avg + &b.matrix().scale(1.0 / dim as f64);
        }
        let avg = DensityMatrix::new(avg).unwrap();
        let mean: f64 = branches
            .iter()
            .map(|b| qstate::von_neumann_entropy(b).unwrap())
            .sum::<f64>()
            / dim as f64;
        let i = qstate::von_neumann_entropy(&avg).unwrap() - mean;
        out.push((avg, i));
    }
    out
}

#[test]
fn matches_dense_model() {
    for n in [2, 3] {
        for p in [1.0, 0.95, 0.7] {
            let dense = dense_trace(n, p, 6);
            let mut e = ensemble::uniform_ensemble(n, p).unwrap();
            for (k, (avg, i)) in dense.iter().enumerate() {
                if k > 0 {
                    e = grover::grover_block(&e).unwrap();
                }
                let ours = e.average_state().unwrap();
                assert!(
                    ours.matrix().max_abs_diff(avg.matrix()) < 1e-12,
                    "n={n} p={p} k={k}"
                );
                let got = e.holevo_mutual_information().unwrap();
                assert!(
                    (got - i.max(0.0)).abs() < 1e-9,
                    "n={n} p={p} k={k}: {got} vs {i}"
                );
            }
        }
    }
}

fn traces(ns: std::ops::RangeInclusive<usize>) -> Vec<(usize, f64, Vec<grover::TraceRecord>)> {
    let mut out = Vec::new();
    for n in ns {
        for p in [1.0, 0.95, 0.7] {
            out.push((n, p, run_trace(&GroverConfig::new(n, p, 25)).unwrap()));
        }
    }
    out
}

#[test]
fn per_query_invariants_hold() {
    for (n, p, recs) in traces(2..=6) {
        let big_n = 1usize << n;
        let ceiling = (big_n as f64).log2();
        for r in &recs {
            let tag = format!("n={n} p={p} k={}", r.k);
            assert!(r.step_ok, "{tag}");
            assert!(
                r.delta_s_oracle <= bounds::step_bound(big_n) + 1e-9,
                "{tag}"
            );
            assert!(
                (0.0..=ceiling + 1e-9).contains(&r.mutual_information),
                "{tag}"
            );
            assert!(r.mutual_information <= r.s_average + 1e-9, "{tag}");
            if p == 1.0 {
                assert!(
                    r.fidelity_oracle >= oracle_fidelity_floor(big_n) - 1e-9,
                    "{tag}"
                );
                assert!(r.s_branch.abs() < 1e-9, "{tag}");
            }
        }
        for w in recs.windows(2) {
            let di = w[1].mutual_information - w[0].mutual_information;
            let ds = w[1].s_average - w[0].s_average;
            assert!((di - ds).abs() < 1e-9, "n={n} p={p} k={}", w[1].k);
            assert!((w[1].s_branch - w[0].s_branch).abs() < 1e-9);
        }
    }
}

#[test]
fn initial_capacity_vanishes_and_growth_is_per_query_limited() {
    for (n, p, recs) in traces(2..=5) {
        let big_n = 1usize << n;
        assert!(recs[0].mutual_information.abs() < 1e-12, "n={n} p={p}");
        for r in &recs[1..] {
            assert!(
                r.mutual_information <= r.k as f64 * bounds::step_bound(big_n) + 1e-9,
                "n={n} p={p} k={}",
                r.k
            );
        }
    }
}

#[test]
fn oracle_change_matches_entropy_change() {
    // Inside a block only the oracle distinguishes branches, so the
    // information gained equals the change of the average entropy there.
    for n in 2..=5 {
        for p in [1.0, 0.8] {
            let mut e = ensemble::uniform_ensemble(n, p).unwrap();
            for _ in 0..4 {
                let before = grover::apply_hadamard_layers(&e).unwrap();
                let after = grover::apply_oracle(&before).unwrap();
                let gain = after.holevo_mutual_information().unwrap()
                    - before.holevo_mutual_information().unwrap();
                let (s_after, _) = after.holevo_terms().unwrap();
                let (s_before, _) = before.holevo_terms().unwrap();
                assert!((gain - (s_after - s_before)).abs() < 1e-9);
                let post =
                    grover::apply_zero_phase_flip(&grover::apply_hadamard_layers(&after).unwrap())
                        .unwrap();
                let i_after = after.holevo_mutual_information().unwrap();
                assert!((post.holevo_mutual_information().unwrap() - i_after).abs() < 1e-9);
                e = post;
            }
        }
    }
}

#[test]
fn maximally_mixed_register_stays_uncorrelated() {
    let recs = run_trace(&GroverConfig::new(4, 0.5, 10)).unwrap();
    assert!(recs.iter().all(|r| r.mutual_information.abs() < 1e-9));
}

#[test]
fn skewed_priors_cap_information_at_prior_entropy() {
    let n = 3;
    let priors = vec![0.5, 0.2, 0.1, 0.1, 0.05, 0.05, 0.0, 0.0];
    let h: f64 = priors
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q: &f64| -q * q.log2())
        .sum();
    let mut cfg = GroverConfig::new(n, 1.0, 12);
    cfg.priors = Priors::Explicit(priors);
    cfg.audit = true;
    for r in run_trace(&cfg).unwrap() {
        assert!(r.mutual_information <= h + 1e-9);
    }
}

#[test]
fn two_entropy_forms_agree_along_trace() {
    for p in [1.0, 0.9] {
        let mut e: CqEnsemble = ensemble::uniform_ensemble(3, p).unwrap();
        for _ in 0..5 {
            e = grover::grover_block(&e).unwrap();
            let parts = e.marginal_and_joint_entropies().unwrap();
            let holevo = e.holevo_mutual_information().unwrap();
            assert!((parts.mutual_information() - holevo).abs() < 1e-9);
        }
    }
}
