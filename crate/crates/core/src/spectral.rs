//! Symmetric eigendecomposition and spectral propagation.
//!
//! Every walk in this crate is evaluated as `V diag(exp(i s λ t)) Vᵀ ψ₀`
//! from one eigendecomposition of the generator, so sampling a walk at an
//! arbitrary instant costs one complex matrix-vector product and never
//! accumulates step error.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::walk::PopulationVector;

/// Symmetry tolerance accepted by [`eigh`], relative to `max(1, max|m|)`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the input's Frobenius norm.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;
/// Eigenvalues closer than this (times `max(1, |λ|max)`) are one level in
/// [`exact_time_average`].
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)]).sum();
            }
        }
        out
    }

    /// Largest entry of `|VᵀV - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.eigenvectors;
        v.transpose().matmul(v).max_abs_diff(&Matrix::identity(self.dim()))
    }

    /// Number of eigenvalues with `|λ| <= tol`.
    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|l| l.abs() <= tol).count()
    }

    /// Index ranges of eigenvalues that count as one degenerate level.
    pub fn degenerate_groups(&self) -> Vec<std::ops::Range<usize>> {
        let scale = self.eigenvalues.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
        let tol = DEGENERACY_TOLERANCE * scale;
        let mut groups = Vec::new();
        let mut start = 0;
        for k in 1..=self.dim() {
            if k == self.dim() || self.eigenvalues[k] - self.eigenvalues[k - 1] > tol {
                groups.push(start..k);
                start = k;
            }
        }
        groups
    }
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come back ascending; each eigenvector column is signed so
/// that its largest-magnitude entry (first one, on ties) is positive.
pub fn eigh(m: &Matrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    let (gap, row, col) = m.asymmetry();
    if gap > SYMMETRY_TOLERANCE * scale {
        return Err(Error::Asymmetric { row, col, gap });
    }

    let mut a = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    let mut v = Matrix::identity(n);
    let threshold = OFF_DIAGONAL_THRESHOLD * a.frobenius_norm();

    let mut converged = false;
    let mut residual = off_diagonal_norm(&a);
    for _ in 0..MAX_SWEEPS {
        if residual <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        residual = off_diagonal_norm(&a);
    }
    if !converged && residual > threshold {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]).then(i.cmp(&j)));

    let eigenvalues = order.iter().map(|&k| a[(k, k)]).collect();
    let mut eigenvectors = Matrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut pivot = 0;
        for i in 1..n {
            if v[(i, src)].abs() > v[(pivot, src)].abs() {
                pivot = i;
            }
        }
        let sign = if v[(pivot, src)] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[(i, dst)] = sign * v[(i, src)];
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Applies the rotation that annihilates `a[p][q]`: `A <- Jᵀ A J`, `V <- V J`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.dim();
    let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        let t = 1.0 / (tau.abs() + (1.0 + tau * tau).sqrt());
        if tau < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Complex amplitudes `c_j = <j|Ψ>` over the nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeVector(pub Vec<Complex64>);

impl AmplitudeVector {
    pub fn from_real(values: &[f64]) -> Self {
        AmplitudeVector(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &AmplitudeVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// Sign `s` in `exp(i s H t)`. The adjacency walk uses `Negative`
/// (`exp(-iAt)`) and the Laplacian walk `Positive` (`exp(+iLt)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseSign {
    Negative,
    Positive,
}

impl PhaseSign {
    pub fn value(self) -> f64 {
        match self {
            PhaseSign::Negative => -1.0,
            PhaseSign::Positive => 1.0,
        }
    }
}

/// A fixed initial state expanded in an eigenbasis, ready to be sampled at
/// any time.
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    decomposition: &'a SpectralDecomposition,
    /// `Vᵀ ψ₀`.
    coefficients: Vec<Complex64>,
    sign: f64,
}

impl<'a> Propagator<'a> {
    pub fn new(
        decomposition: &'a SpectralDecomposition,
        psi0: &AmplitudeVector,
        sign: PhaseSign,
    ) -> Result<Self> {
        let n = decomposition.dim();
        if psi0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: psi0.len(),
            });
        }
        let v = &decomposition.eigenvectors;
        let coefficients = (0..n)
            .map(|k| (0..n).map(|j| psi0.0[j] * v[(j, k)]).sum())
            .collect();
        Ok(Propagator {
            decomposition,
            coefficients,
            sign: sign.value(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Writes the state at time `t` into `out`.
    pub fn state_into(&self, t: f64, phased: &mut Vec<Complex64>, out: &mut Vec<Complex64>) {
        let n = self.dim();
        let d = self.decomposition;
        phased.clear();
        phased.extend(
            d.eigenvalues
                .iter()
                .zip(&self.coefficients)
                .map(|(&l, &c)| Complex64::from_polar(1.0, self.sign * l * t) * c),
        );
        out.clear();
        out.extend((0..n).map(|j| {
            let row = d.eigenvectors.row(j);
            row.iter()
                .zip(phased.iter())
                .fold(Complex64::new(0.0, 0.0), |acc, (&vjk, &p)| acc + p * vjk)
        }));
    }

    pub fn state_at(&self, t: f64) -> AmplitudeVector {
        let mut phased = Vec::with_capacity(self.dim());
        let mut out = Vec::with_capacity(self.dim());
        self.state_into(t, &mut phased, &mut out);
        AmplitudeVector(out)
    }
}

/// `V diag(exp(i s λ t)) Vᵀ ψ₀`.
pub fn propagate(
    d: &SpectralDecomposition,
    psi0: &AmplitudeVector,
    t: f64,
    sign: PhaseSign,
) -> Result<AmplitudeVector> {
    Ok(Propagator::new(d, psi0, sign)?.state_at(t))
}

/// Infinite-time average of `|<j|Ψ(t)>|²`: the sum over distinct energy
/// levels of the squared projection of `ψ₀` onto each eigenspace.
pub fn exact_time_average(
    d: &SpectralDecomposition,
    psi0: &AmplitudeVector,
) -> Result<PopulationVector> {
    let prop = Propagator::new(d, psi0, PhaseSign::Negative)?;
    let n = d.dim();
    let v = &d.eigenvectors;
    let mut p = vec![0.0; n];
    for group in d.degenerate_groups() {
        for (j, pj) in p.iter_mut().enumerate() {
            let amp: Complex64 = group
                .clone()
                .map(|k| prop.coefficients[k] * v[(j, k)])
                .sum();
            *pj += amp.norm_sqr();
        }
    }
    Ok(PopulationVector(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::karate_club;
    use crate::graph::{complete, cycle, Graph};
    use crate::walk::{localized_state, uniform_state};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn assert_decomposition(m: &Matrix, d: &SpectralDecomposition) {
        assert!(d.orthonormality_error() <= 1e-10, "{}", d.orthonormality_error());
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        assert!(d.reconstruct().max_abs_diff(m) <= 1e-9 * scale);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn two_by_two() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let d = eigh(&m).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert_decomposition(&m, &d);
    }

    #[test]
    fn four_cycle_laplacian_spectrum() {
        // Circulant: 2 - 2cos(2πk/4).
        let d = eigh(&cycle(4).laplacian_matrix()).unwrap();
        for (got, want) in d.eigenvalues.iter().zip([0.0, 2.0, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn cycle_spectra_match_circulant_formula() {
        for n in 3..=16 {
            let d = eigh(&cycle(n).laplacian_matrix()).unwrap();
            let mut want: Vec<f64> = (0..n)
                .map(|k| 2.0 - 2.0 * (2.0 * PI * k as f64 / n as f64).cos())
                .collect();
            want.sort_by(f64::total_cmp);
            for (got, w) in d.eigenvalues.iter().zip(&want) {
                assert!((got - w).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn laplacian_ground_state_is_constant() {
        let g = karate_club().graph;
        let d = eigh(&g.laplacian_matrix()).unwrap();
        assert!(d.eigenvalues[0].abs() < 1e-10);
        let c = 1.0 / (34.0_f64).sqrt();
        for j in 0..34 {
            assert!((d.eigenvectors[(j, 0)] - c).abs() < 1e-10);
        }
        assert_eq!(d.zero_multiplicity(1e-9), 1);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]);
        assert!(matches!(eigh(&m), Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn degenerate_and_empty_inputs() {
        let d = eigh(&Matrix::zeros(3)).unwrap();
        assert_eq!(d.eigenvalues, vec![0.0; 3]);
        assert_eq!(d.eigenvectors, Matrix::identity(3));
        assert_eq!(eigh(&Matrix::zeros(0)).unwrap().dim(), 0);

        let k5 = complete(5).adjacency_matrix();
        let d = eigh(&k5).unwrap();
        assert_decomposition(&k5, &d);
        assert_eq!(d.degenerate_groups(), vec![0..4, 4..5]);
    }

    #[test]
    fn sign_convention_and_determinism() {
        let m = karate_club().graph.adjacency_matrix();
        let d1 = eigh(&m).unwrap();
        let d2 = eigh(&m).unwrap();
        assert_eq!(d1, d2);
        let n = d1.dim();
        for k in 0..n {
            let col: Vec<f64> = (0..n).map(|i| d1.eigenvectors[(i, k)]).collect();
            let pivot = col.iter().fold(0.0_f64, |m, x| if x.abs() > m.abs() { *x } else { m });
            assert!(pivot > 0.0);
        }
    }

    #[test]
    fn k2_two_level_solution() {
        let g = Graph::from_edge_list(&[(1, 2)], None).unwrap();
        let d = eigh(&g.adjacency_matrix()).unwrap();
        let psi0 = localized_state(2, 1).unwrap();
        for t in [0.0, 0.3, 1.0, PI / 4.0, 7.5] {
            let psi = propagate(&d, &psi0, t, PhaseSign::Negative).unwrap();
            assert!((psi.0[0] - Complex64::new(t.cos(), 0.0)).norm() < 1e-14);
            assert!((psi.0[1] - Complex64::new(0.0, -t.sin())).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let g = karate_club().graph;
        let d = eigh(&g.adjacency_matrix()).unwrap();
        let psi0 = localized_state(34, 5).unwrap();
        let psi = propagate(&d, &psi0, 0.0, PhaseSign::Negative).unwrap();
        assert!(psi.max_abs_diff(&psi0) < 1e-13);
    }

    #[test]
    fn uniform_state_is_laplacian_stationary() {
        let g = karate_club().graph;
        let d = eigh(&g.laplacian_matrix()).unwrap();
        let psi0 = uniform_state(34).unwrap();
        for t in [0.5, 3.0, 100.0 * PI] {
            let psi = propagate(&d, &psi0, t, PhaseSign::Positive).unwrap();
            assert!(psi.max_abs_diff(&psi0) < 1e-10);
        }
        let avg = exact_time_average(&d, &psi0).unwrap();
        for p in avg.as_slice() {
            assert!((p - 1.0 / 34.0).abs() < 1e-12);
        }
    }

    #[test]
    fn k2_exact_average() {
        let g = Graph::from_edge_list(&[(1, 2)], None).unwrap();
        let d = eigh(&g.adjacency_matrix()).unwrap();
        let avg = exact_time_average(&d, &localized_state(2, 1).unwrap()).unwrap();
        assert!((avg.as_slice()[0] - 0.5).abs() < 1e-14);
        assert!((avg.as_slice()[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let d = eigh(&cycle(4).adjacency_matrix()).unwrap();
        assert!(matches!(
            propagate(&d, &uniform_state(3).unwrap(), 1.0, PhaseSign::Negative),
            Err(Error::DimensionMismatch { expected: 4, actual: 3 })
        ));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2usize..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
                let mut edges = Vec::new();
                let mut it = mask.into_iter();
                for u in 1..=n {
                    for v in (u + 1)..=n {
                        if it.next().unwrap() {
                            edges.push((u, v));
                        }
                    }
                }
                Graph::from_edge_list(&edges, Some(n)).unwrap()
            })
        })
    }

    fn arb_state(n: usize) -> impl Strategy<Value = AmplitudeVector> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_filter_map(
            "nonzero",
            |raw| {
                let norm: f64 = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
                (norm > 1e-3).then(|| {
                    AmplitudeVector(raw.iter().map(|&(a, b)| Complex64::new(a, b) / norm).collect())
                })
            },
        )
    }

    fn graph_and_state() -> impl Strategy<Value = (Graph, AmplitudeVector)> {
        arb_graph(12).prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), arb_state(n))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_symmetric_matrices_decompose(
            n in 1usize..10,
            raw in proptest::collection::vec(-5.0f64..5.0, 100),
        ) {
            let mut m = Matrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    m[(i, j)] = raw[i * 10 + j];
                    m[(j, i)] = raw[i * 10 + j];
                }
            }
            let d = eigh(&m).unwrap();
            prop_assert!(d.orthonormality_error() <= 1e-10);
            prop_assert!(d.reconstruct().max_abs_diff(&m) <= 1e-9 * m.max_abs().max(1e-300));
            prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn propagation_is_unitary((g, psi0) in graph_and_state()) {
            for m in [g.adjacency_matrix(), g.laplacian_matrix()] {
                let d = eigh(&m).unwrap();
                for t in [0.1, 1.0, 10.0, 100.0] {
                    let psi = propagate(&d, &psi0, t, PhaseSign::Negative).unwrap();
                    prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
                }
            }
        }

        #[test]
        fn propagation_composes((g, psi0) in graph_and_state(), t1 in 0.0f64..20.0, t2 in 0.0f64..20.0) {
            let d = eigh(&g.adjacency_matrix()).unwrap();
            let once = propagate(&d, &psi0, t1 + t2, PhaseSign::Negative).unwrap();
            let mid = propagate(&d, &psi0, t1, PhaseSign::Negative).unwrap();
            let twice = propagate(&d, &mid, t2, PhaseSign::Negative).unwrap();
            prop_assert!(once.max_abs_diff(&twice) < 1e-9);
        }

        #[test]
        fn opposite_signs_conjugate_for_real_states(g in arb_graph(12), start in any::<prop::sample::Index>(), t in 0.0f64..50.0) {
            let n = g.node_count();
            let d = eigh(&g.adjacency_matrix()).unwrap();
            let psi0 = localized_state(n, start.index(n) + 1).unwrap();
            let minus = propagate(&d, &psi0, t, PhaseSign::Negative).unwrap();
            let plus = propagate(&d, &psi0, t, PhaseSign::Positive).unwrap();
            for (a, b) in minus.0.iter().zip(&plus.0) {
                prop_assert!((a - b.conj()).norm() < 1e-12);
                prop_assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-12);
            }
        }

        #[test]
        fn connectivity_matches_laplacian_kernel(g in arb_graph(12)) {
            let d = eigh(&g.laplacian_matrix()).unwrap();
            let zeros = d.zero_multiplicity(1e-9);
            prop_assert!(zeros >= 1);
            prop_assert_eq!(zeros == 1, g.is_connected());
        }

        #[test]
        fn exact_average_is_normalized((g, psi0) in graph_and_state()) {
            let d = eigh(&g.adjacency_matrix()).unwrap();
            let p = exact_time_average(&d, &psi0).unwrap();
            prop_assert!((p.sum() - 1.0).abs() < 1e-9);
            prop_assert!(p.as_slice().iter().all(|&x| x >= 0.0));
        }
    }
}
