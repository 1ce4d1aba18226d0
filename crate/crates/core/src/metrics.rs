//! Quantum state distances, pull-back (semi-)metrics on finite samples and
//! Mahalanobis morphism checks.
//!
//! The trace distance here is the plain trace norm `‖ρ − σ‖₁` with no ½
//! factor, so orthogonal pure states sit at distance 2.

use nalgebra::{DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigh, frobenius, nullspace_real, ComplexMatrix, DensityMatrix, HermitianMatrix, RealMatrix,
};

/// Slack allowed on triangle inequalities.
pub const TRIANGLE_SLACK: f64 = 1e-10;
/// Default threshold separating a genuine zero distance from round-off.
pub const ZERO_TOL: f64 = 1e-9;
/// A state whose largest eigenvalue is this close to 1 is treated as pure.
pub const PURE_TOL: f64 = 1e-12;
const SUPPORT_EPS: f64 = 4.0 * f64::EPSILON;
/// Above this many points [`classify`] samples triples instead of
/// enumerating them.
pub const EXHAUSTIVE_LIMIT: usize = 512;
pub const SAMPLED_TRIPLES: usize = 1_000_000;

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::shape(format!(
            "density matrices of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// Top eigenvector of `ρ` when its eigenvalue is within [`PURE_TOL`] of 1.
fn dominant_pure_vector(rho: &DensityMatrix) -> Option<ComplexMatrix> {
    let e = eigh(rho.hermitian());
    let n = rho.dim();
    (e.values[n - 1] >= 1.0 - PURE_TOL).then(|| e.vectors.matrix().columns(n - 1, 1).into_owned())
}

/// `F(ρ,σ) = (Tr √(√ρ σ √ρ))²`, clipped to `[0, 1]`, evaluated as the squared
/// nuclear norm of `√ρ √σ`. When either state is pure this reduces to
/// `⟨ψ|σ|ψ⟩`, which is used directly.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    if rho.matrix() == sigma.matrix() {
        return Ok(1.0);
    }
    for (a, b) in [(rho, sigma), (sigma, rho)] {
        if let Some(v) = dominant_pure_vector(a) {
            let f = (v.adjoint() * b.matrix() * &v)[(0, 0)].re;
            return Ok(f.clamp(0.0, 1.0));
        }
    }
    let product = support_sqrt(rho) * support_sqrt(sigma);
    let nuclear: f64 = product.singular_values().iter().sum();
    Ok((nuclear * nuclear).clamp(0.0, 1.0))
}

/// `√ρ` with eigenvalues at roundoff level set to zero.
fn support_sqrt(rho: &DensityMatrix) -> ComplexMatrix {
    let e = eigh(rho.hermitian());
    let top = e.values.last().copied().unwrap_or(0.0);
    let cutoff = SUPPORT_EPS * rho.dim() as f64 * top;
    e.reconstruct(|lam| Complex64::new(if lam > cutoff { lam.sqrt() } else { 0.0 }, 0.0))
}

/// Sum of singular values of `ρ − σ`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = HermitianMatrix::hermitize(&(rho.matrix() - sigma.matrix()));
    Ok(eigh(&diff).values.iter().map(|v| v.abs()).sum())
}

/// Frobenius norm of `ρ − σ`.
pub fn hs_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    Ok(frobenius(&(rho.matrix() - sigma.matrix())))
}

/// `√(2(1 − √F))`.
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    Ok((2.0 * (1.0 - f.sqrt())).max(0.0).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateMetric {
    Trace,
    Hs,
    Bures,
}

impl StateMetric {
    pub fn distance(self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
        match self {
            StateMetric::Trace => trace_distance(rho, sigma),
            StateMetric::Hs => hs_distance(rho, sigma),
            StateMetric::Bures => bures_distance(rho, sigma),
        }
    }
}

impl std::str::FromStr for StateMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" => Ok(StateMetric::Trace),
            "hs" => Ok(StateMetric::Hs),
            "bures" => Ok(StateMetric::Bures),
            other => Err(Error::input(format!("unknown state metric '{other}'"))),
        }
    }
}

/// A finite set of labelled points with a symmetric distance matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetricSpace {
    pub labels: Vec<String>,
    #[serde(with = "real_matrix_rows")]
    pub dist: RealMatrix,
}

mod real_matrix_rows {
    use crate::linalg::RealMatrix;
    use crate::serde_matrix::{real_from_rows, real_to_rows, RealRows};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &RealMatrix, s: S) -> Result<S::Ok, S::Error> {
        real_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RealMatrix, D::Error> {
        let rows = RealRows::deserialize(d)?;
        real_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

impl FiniteMetricSpace {
    /// Builds the space from a pairwise function evaluated on `i < j` only;
    /// the diagonal is exactly zero and the matrix exactly symmetric.
    pub fn from_pairwise<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<f64> + Sync,
    {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let values: Vec<f64> = pairs
            .par_iter()
            .map(|&(i, j)| f(i, j))
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<_>>()?;
        let mut dist = RealMatrix::zeros(n, n);
        for (&(i, j), &v) in pairs.iter().zip(&values) {
            dist[(i, j)] = v;
            dist[(j, i)] = v;
        }
        Ok(FiniteMetricSpace {
            labels: default_labels(n),
            dist,
        })
    }

    /// Accepts an arbitrary square matrix; use [`classify`] to find out
    /// which axioms it satisfies.
    pub fn from_matrix(labels: Vec<String>, dist: RealMatrix) -> Result<Self> {
        if !dist.is_square() || labels.len() != dist.nrows() {
            return Err(Error::shape("distance matrix must be square with one label per row"));
        }
        if dist.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("distance matrix has non-finite entries"));
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// Euclidean distances between points of `ℝ^d`.
    pub fn euclidean(points: &[Vec<f64>]) -> Result<Self> {
        let d = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::shape("points of different dimensions"));
        }
        Self::from_pairwise(points.len(), |i, j| {
            Ok(points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt())
        })
    }

    pub fn len(&self) -> usize {
        self.dist.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_distance(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Uniformly rescales so the largest distance is 1 (no-op if all zero).
    pub fn rescaled_to_unit_max(&self) -> Self {
        let max = self.max_distance();
        let mut out = self.clone();
        if max > 0.0 {
            out.dist.iter_mut().for_each(|v| *v /= max);
        }
        out
    }

    /// Square matrix with a header row of labels.
    pub fn to_csv(&self) -> String {
        let mut out = self.labels.join(",");
        out.push('\n');
        for row in self.dist.row_iter() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// `d_X(x_i, x_j) = d(ρ(x_i), ρ(x_j))` over a finite sample.
pub fn pullback<P, F>(points: &[P], encode: F, metric: StateMetric) -> Result<FiniteMetricSpace>
where
    P: Sync,
    F: Fn(&P) -> Result<DensityMatrix> + Sync,
{
    let states: Vec<DensityMatrix> = points
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            encode(p).map_err(|e| Error::Encoding {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;
    FiniteMetricSpace::from_pairwise(states.len(), |i, j| metric.distance(&states[i], &states[j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Metric,
    SemiMetric,
    NotASemimetric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `d(i, j) > d(i, via) + d(via, j)` by `excess`.
    Triangle { i: usize, via: usize, j: usize, excess: f64 },
    /// Distinct points at (numerically) zero distance.
    ZeroDistance { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    Negative { i: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricClass {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

const MAX_WITNESSES: usize = 64;

fn triangle_violation(d: &RealMatrix, i: usize, via: usize, j: usize) -> Option<Witness> {
    let excess = d[(i, j)] - d[(i, via)] - d[(via, j)];
    (excess > TRIANGLE_SLACK).then_some(Witness::Triangle { i, via, j, excess })
}

/// Decides whether a finite distance matrix is a metric, a semi-metric, or
/// neither, with witnesses for each failed axiom.
pub fn classify(space: &FiniteMetricSpace, zero_tol: f64) -> MetricClass {
    let d = &space.dist;
    let n = space.len();
    let mut broken = Vec::new();
    for i in 0..n {
        if d[(i, i)] != 0.0 {
            broken.push(Witness::NonzeroDiagonal { i });
        }
        for j in 0..n {
            if d[(i, j)] < 0.0 {
                broken.push(Witness::Negative { i, j });
            }
            if j > i && d[(i, j)] != d[(j, i)] {
                broken.push(Witness::Asymmetric { i, j });
            }
        }
    }

    if n <= EXHAUSTIVE_LIMIT {
        'outer: for i in 0..n {
            for j in 0..n {
                for via in 0..n {
                    if let Some(w) = triangle_violation(d, i, via, j) {
                        broken.push(w);
                        if broken.len() >= MAX_WITNESSES {
                            break 'outer;
                        }
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..SAMPLED_TRIPLES {
            let (i, via, j) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if let Some(w) = triangle_violation(d, i, via, j) {
                broken.push(w);
                if broken.len() >= MAX_WITNESSES {
                    break;
                }
            }
        }
    }

    if !broken.is_empty() {
        broken.truncate(MAX_WITNESSES);
        return MetricClass {
            verdict: Verdict::NotASemimetric,
            witnesses: broken,
        };
    }

    let zeros: Vec<Witness> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| d[(i, j)] <= zero_tol)
        .take(MAX_WITNESSES)
        .map(|(i, j)| Witness::ZeroDistance { i, j })
        .collect();
    MetricClass {
        verdict: if zeros.is_empty() { Verdict::Metric } else { Verdict::SemiMetric },
        witnesses: zeros,
    }
}

fn symmetric_psd(a: &RealMatrix, name: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::shape(format!("{name} must be square")));
    }
    let scale = a.iter().map(|v| v.abs()).fold(1.0, f64::max);
    if (a - a.transpose()).iter().any(|v| v.abs() > 1e-12 * scale) {
        return Err(Error::input(format!("{name} is not symmetric")));
    }
    let min = SymmetricEigen::new(a.clone()).eigenvalues.min();
    if min < -1e-10 * scale {
        return Err(Error::NotPsd { eigenvalue: min });
    }
    Ok(())
}

/// `√((x₁−x₂)ᵀ A (x₁−x₂))` for symmetric positive semidefinite `A`.
pub fn mahalanobis(a: &RealMatrix, x1: &[f64], x2: &[f64]) -> Result<f64> {
    symmetric_psd(a, "A")?;
    mahalanobis_unchecked(a, x1, x2)
}

fn mahalanobis_unchecked(a: &RealMatrix, x1: &[f64], x2: &[f64]) -> Result<f64> {
    if x1.len() != a.nrows() || x2.len() != a.nrows() {
        return Err(Error::shape("vector length does not match A"));
    }
    let diff = DVector::from_iterator(x1.len(), x1.iter().zip(x2).map(|(a, b)| a - b));
    Ok((diff.transpose() * a * &diff)[(0, 0)].max(0.0).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorphismReport {
    /// `‖VᵀBV − A‖_F`.
    pub gram_residual: f64,
    pub min_singular_value: f64,
    /// A nonzero vector with `V v ≈ 0`, when the kernel is nontrivial.
    pub kernel_witness: Option<Vec<f64>>,
    /// Largest `|d_A(x₁,x₂) − d_B(Vx₁,Vx₂)|` over random pairs, checked
    /// only when the algebraic conditions pass.
    pub preservation_error: Option<f64>,
    pub pass: bool,
}

/// Checks that `V: (ℝ^m, d_A) → (ℝ^n, d_B)` is a Mahalanobis morphism:
/// `VᵀBV = A` and `V` injective.
pub fn check_mahalanobis_morphism(
    v: &RealMatrix,
    a: &RealMatrix,
    b: &RealMatrix,
    tol: f64,
    seed: u64,
) -> Result<MorphismReport> {
    let (n, m) = v.shape();
    if a.shape() != (m, m) || b.shape() != (n, n) {
        return Err(Error::shape(format!(
            "V is {n}x{m}, expected A {m}x{m} and B {n}x{n}"
        )));
    }
    symmetric_psd(a, "A")?;
    symmetric_psd(b, "B")?;
    let gram_residual = (v.transpose() * b * v - a).norm();

    let min_singular_value = if n < m {
        0.0
    } else {
        SVD::new(v.clone(), false, false).singular_values.min()
    };
    let injective = min_singular_value > tol;
    let kernel_witness = if injective {
        None
    } else {
        let cut = if v.iter().all(|x| *x == 0.0) { 1.0 } else { tol.max(1e-10) };
        nullspace_real(v, cut).first().map(|k| k.iter().copied().collect())
    };

    let mut pass = gram_residual <= tol && injective;
    let mut preservation_error = None;
    if pass {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x1: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            let x2: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            let y1: Vec<f64> = (v * DVector::from_column_slice(&x1)).iter().copied().collect();
            let y2: Vec<f64> = (v * DVector::from_column_slice(&x2)).iter().copied().collect();
            let da = mahalanobis_unchecked(a, &x1, &x2)?;
            let db = mahalanobis_unchecked(b, &y1, &y2)?;
            worst = worst.max((da - db).abs());
        }
        preservation_error = Some(worst);
        pass = worst <= 1e-10_f64.max(tol);
    }
    Ok(MorphismReport {
        gram_residual,
        min_singular_value,
        kernel_witness,
        preservation_error,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, StateVector};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn ket0() -> DensityMatrix {
        StateVector::basis(2, 0).projector()
    }

    fn ket1() -> DensityMatrix {
        StateVector::basis(2, 1).projector()
    }

    fn diag(p: f64) -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(p, 0.0);
        m[(1, 1)] = Complex64::new(1.0 - p, 0.0);
        DensityMatrix::new(m).unwrap()
    }

    fn overlap_pair(angle: f64) -> (DensityMatrix, DensityMatrix) {
        let psi = StateVector::basis(2, 0);
        let phi = StateVector::from_real(&[angle.cos(), angle.sin()]).unwrap();
        (psi.projector(), phi.projector())
    }

    #[test]
    fn fidelity_cases() {
        let rho = diag(0.3);
        assert_abs_diff_eq!(fidelity(&rho, &rho).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity(&ket0(), &ket1()).unwrap(), 0.0, epsilon = 1e-12);
        let (a, b) = overlap_pair(0.3);
        assert_abs_diff_eq!(fidelity(&a, &b).unwrap(), 0.3f64.cos().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn trace_distance_cases() {
        assert_eq!(trace_distance(&diag(0.2), &diag(0.2)).unwrap(), 0.0);
        assert_abs_diff_eq!(trace_distance(&ket0(), &ket1()).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(trace_distance(&diag(0.7), &diag(0.3)).unwrap(), 0.8, epsilon = 1e-14);
    }

    #[test]
    fn hs_and_bures_cases() {
        let s2 = 2f64.sqrt();
        assert_eq!(hs_distance(&ket0(), &ket0()).unwrap(), 0.0);
        assert_abs_diff_eq!(hs_distance(&ket0(), &ket1()).unwrap(), s2, epsilon = 1e-14);
        assert_abs_diff_eq!(bures_distance(&diag(0.4), &diag(0.4)).unwrap(), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(bures_distance(&ket0(), &ket1()).unwrap(), s2, epsilon = 1e-12);
        let (a, b) = overlap_pair(0.3);
        let c = 0.3f64.cos();
        assert_abs_diff_eq!(
            bures_distance(&a, &b).unwrap(),
            (2.0 * (1.0 - c)).sqrt(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn dimension_mismatch() {
        let big = DensityMatrix::maximally_mixed(4);
        for m in [StateMetric::Trace, StateMetric::Hs, StateMetric::Bures] {
            assert!(matches!(m.distance(&ket0(), &big), Err(Error::InvalidShape(_))));
        }
    }

    #[test]
    fn classify_examples() {
        let pts = vec![vec![0.0], vec![1.0], vec![3.5]];
        assert_eq!(classify(&FiniteMetricSpace::euclidean(&pts).unwrap(), ZERO_TOL).verdict, Verdict::Metric);

        let constant = pullback(&pts, |_| Ok(ket0()), StateMetric::Hs).unwrap();
        assert!(constant.dist.iter().all(|v| *v == 0.0));
        assert_eq!(classify(&constant, ZERO_TOL).verdict, Verdict::SemiMetric);

        let labels = vec!["a".into(), "b".into(), "c".into()];
        let d = RealMatrix::from_row_slice(3, 3, &[0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0]);
        let class = classify(&FiniteMetricSpace::from_matrix(labels, d).unwrap(), ZERO_TOL);
        assert_eq!(class.verdict, Verdict::NotASemimetric);
        assert!(class.witnesses.iter().any(|w| matches!(
            w,
            Witness::Triangle { i: 0, via: 1, j: 2, .. }
        )));
    }

    #[test]
    fn pullback_reports_failing_index() {
        let pts = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
        let err = pullback(
            &pts,
            |x| crate::encodings::encode_state(&crate::encodings::EncodingSpec::AmplitudeStandard {}, x, None),
            StateMetric::Trace,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Encoding { index: 1, .. }));
    }

    #[test]
    fn mahalanobis_cases() {
        let eye = RealMatrix::identity(2, 2);
        assert_abs_diff_eq!(mahalanobis(&eye, &[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0, epsilon = 1e-14);
        let a = RealMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0]));
        assert_abs_diff_eq!(mahalanobis(&a, &[1.0, 0.0], &[0.0, 0.0]).unwrap(), 2.0, epsilon = 1e-14);
        assert_eq!(mahalanobis(&a, &[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        let bad = RealMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(mahalanobis(&bad, &[1.0, 0.0], &[0.0, 0.0]), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn morphism_examples() {
        let eye = RealMatrix::identity(3, 3);
        assert!(check_mahalanobis_morphism(&eye, &eye, &eye, 1e-10, 1).unwrap().pass);

        let v = RealMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let a = RealMatrix::from_row_slice(1, 1, &[2.0]);
        let report = check_mahalanobis_morphism(&v, &a, &RealMatrix::identity(2, 2), 1e-10, 1).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.preservation_error.unwrap() <= 1e-10);

        let v = RealMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let a = v.transpose() * &v;
        let report = check_mahalanobis_morphism(&v, &a, &RealMatrix::identity(1, 1), 1e-10, 1).unwrap();
        assert!(!report.pass);
        let k = report.kernel_witness.unwrap();
        assert_abs_diff_eq!(k[0] - k[1], 0.0, epsilon = 1e-12);
        assert!(k[0].abs() > 0.5);

        assert!(matches!(
            check_mahalanobis_morphism(&v, &RealMatrix::identity(3, 3), &RealMatrix::identity(1, 1), 1e-10, 1),
            Err(Error::InvalidShape(_))
        ));
    }
}
