//! Dense complex matrix kernel.
//!
//! Every matrix function (exponential, logarithm, square root) goes through a
//! Hermitian or Schur eigendecomposition. The dimensions handled here are at
//! most a few qubits, where a full decomposition is exact to rounding.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
pub const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Hermiticity tolerance, scaled by the largest entry magnitude.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Frobenius tolerance on `U†U - I`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Trace and eigenvalue tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_CLIP` are clipped to zero before square roots.
pub const PSD_CLIP: f64 = 1e-10;
/// Margin from ±π inside which a unitary logarithm is refused.
pub const BRANCH_MARGIN: f64 = 1e-6;
/// Default relative singular-value cut for [`nullspace_real`].
pub const NULLSPACE_TOL: f64 = 1e-10;

fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius norm of a complex matrix.
pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `Tr[a b]`.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = C0;
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[C0, C1, C1, C0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[C0, -CI, CI, C0])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[C1, C0, C0, -C1])
}

/// Two-qubit SWAP.
pub fn swap() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = C1;
    m[(1, 2)] = C1;
    m[(2, 1)] = C1;
    m[(3, 3)] = C1;
    m
}

/// Kronecker product, `(a⊗b)[i·p+k, j·q+l] = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Left-to-right Kronecker product of a list of factors.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// A square matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::input(format!(
                "expected a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !all_finite(&m) {
            return Err(Error::input("matrix has non-finite entries"));
        }
        let tol = HERMITIAN_TOL * max_abs(&m).max(1.0);
        let n = m.nrows();
        for i in 0..n {
            for j in i..n {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                    return Err(Error::input(format!(
                        "matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(HermitianMatrix(m))
    }

    /// Validates Hermiticity and `|Tr H| < 1e-12`.
    pub fn new_traceless(m: ComplexMatrix) -> Result<Self> {
        let h = Self::new(m)?;
        if !h.is_traceless() {
            return Err(Error::input("generator is not traceless"));
        }
        Ok(h)
    }

    /// Symmetrizes `(m + m†)/2`; for results of computations that are
    /// Hermitian up to rounding.
    pub fn hermitize(m: &ComplexMatrix) -> Self {
        HermitianMatrix((m + m.adjoint()).scale(0.5))
    }

    pub fn is_traceless(&self) -> bool {
        self.0.trace().norm() < 1e-12 * max_abs(&self.0).max(1.0)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix(self.0.scale(s))
    }
}

/// A square matrix with `U†U = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::input("unitary must be square"));
        }
        if !all_finite(&m) {
            return Err(Error::input("matrix has non-finite entries"));
        }
        let n = m.nrows();
        let defect = frobenius(&(m.adjoint() * &m - identity(n)));
        if defect > UNITARY_TOL {
            return Err(Error::input(format!("matrix is not unitary (defect {defect:e})")));
        }
        Ok(UnitaryMatrix(m))
    }

    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        UnitaryMatrix(m)
    }

    pub fn identity(n: usize) -> Self {
        UnitaryMatrix(identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> Self {
        UnitaryMatrix(&self.0 * &other.0)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &self.0 * m * self.0.adjoint()
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        StateVector(&self.0 * &psi.0)
    }
}

/// Unit-norm complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    pub fn new(v: DVector<Complex64>) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::input(format!("state vector has norm {norm}")));
        }
        Ok(StateVector(v))
    }

    /// Normalizes `v`; fails on the zero vector.
    pub fn normalized(v: DVector<Complex64>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(StateVector(v.unscale(norm)))
    }

    pub fn from_real(v: &[f64]) -> Result<Self> {
        Self::normalized(DVector::from_iterator(
            v.len(),
            v.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    /// Computational basis vector `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::from_element(dim, C0);
        v[index] = C1;
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.0
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn kron(&self, other: &StateVector) -> StateVector {
        StateVector(self.0.kronecker(&other.0))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(HermitianMatrix(&self.0 * self.0.adjoint()))
    }
}

/// Positive semidefinite unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let tr = h.0.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::input(format!("density matrix trace is {tr}")));
        }
        let min = eigh(&h).values[0];
        if min < -DENSITY_TOL {
            return Err(Error::NotPsd { eigenvalue: min });
        }
        Ok(DensityMatrix(h))
    }

    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        DensityMatrix(HermitianMatrix::hermitize(&m))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix(HermitianMatrix(identity(n).unscale(n as f64)))
    }

    /// Uniform average of a non-empty list of states.
    pub fn mixture(states: &[DensityMatrix]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::input("cannot average an empty list of states"))?;
        let n = first.dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for s in states {
            if s.dim() != n {
                return Err(Error::shape("states of different dimensions"));
            }
            acc += s.matrix();
        }
        Ok(DensityMatrix::from_trusted(acc.unscale(states.len() as f64)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0 .0
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        trace_product(self.matrix(), self.matrix()).re
    }

    /// `Tr[ρ O]`, real part.
    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        trace_product(self.matrix(), observable).re
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: UnitaryMatrix,
}

impl Eigh {
    /// `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn reconstruct(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = self.vectors.matrix();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            for i in 0..n {
                scaled[(i, k)] *= w;
            }
        }
        scaled * v.adjoint()
    }
}

/// Makes the largest-magnitude component of each column real and positive.
fn fix_phases(v: &mut ComplexMatrix) {
    for mut col in v.column_iter_mut() {
        let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        let pivot = col
            .iter()
            .copied()
            .find(|z| z.norm() >= max * (1.0 - 1e-12))
            .unwrap_or(C1);
        let phase = pivot.conj() / pivot.norm();
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn eigh(h: &HermitianMatrix) -> Eigh {
    let n = h.dim();
    let decomposition = SymmetricEigen::new(h.0.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| decomposition.eigenvalues[a].total_cmp(&decomposition.eigenvalues[b]));
    let values = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &decomposition.eigenvectors.column(src));
    }
    fix_phases(&mut vectors);
    Eigh {
        values,
        vectors: UnitaryMatrix(vectors),
    }
}

/// `exp(-i t h)`.
pub fn expm_i(h: &HermitianMatrix, t: f64) -> UnitaryMatrix {
    if t == 0.0 {
        return UnitaryMatrix::identity(h.dim());
    }
    let e = eigh(h);
    UnitaryMatrix(e.reconstruct(|lam| Complex64::from_polar(1.0, -t * lam)))
}

/// Principal Hermitian logarithm: returns `h` with `exp(-i h) = u`.
///
/// Fails when any eigenvalue phase of `u` is within [`BRANCH_MARGIN`] of ±π.
pub fn logm_unitary(u: &UnitaryMatrix) -> Result<HermitianMatrix> {
    let n = u.dim();
    let (q, t) = Schur::new(u.0.clone()).unpack();
    let mut phases = Vec::with_capacity(n);
    for k in 0..n {
        let phase = t[(k, k)].arg();
        if phase.abs() > std::f64::consts::PI - BRANCH_MARGIN {
            return Err(Error::BranchCut { phase });
        }
        phases.push(phase);
    }
    // u is normal, so its Schur form is diagonal up to rounding.
    let mut scaled = q.clone();
    for (k, phase) in phases.iter().enumerate() {
        for i in 0..n {
            scaled[(i, k)] *= Complex64::new(-phase, 0.0);
        }
    }
    Ok(HermitianMatrix::hermitize(&(scaled * q.adjoint())))
}

/// Square root of a positive semidefinite matrix. Eigenvalues in
/// `[-1e-10, 0)` are clipped to zero.
pub fn sqrtm_psd(p: &HermitianMatrix) -> Result<HermitianMatrix> {
    let e = eigh(p);
    if let Some(&min) = e.values.first() {
        if min < -PSD_CLIP {
            return Err(Error::NotPsd { eigenvalue: min });
        }
    }
    Ok(HermitianMatrix::hermitize(
        &e.reconstruct(|lam| Complex64::new(lam.max(0.0).sqrt(), 0.0)),
    ))
}

/// Orthonormal basis of the numerical nullspace of `m`: right singular
/// vectors whose singular value is at most `tol · σ_max`.
pub fn nullspace_real(m: &RealMatrix, tol: f64) -> Vec<DVector<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the SVD returns a full right basis.
    let rows = m.nrows().max(cols);
    let mut padded = RealMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = tol * sigma_max;
    let mut basis: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s <= cut)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect();
    for v in &mut basis {
        let pivot = v
            .iter()
            .copied()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() + 1e-12 { x } else { acc });
        if pivot < 0.0 {
            v.neg_mut();
        }
    }
    basis
}

/// Generalized Gell-Mann basis of `n×n` Hermitian matrices, each normalized
/// to `Tr[A²] = 2` and pairwise trace-orthogonal.
///
/// Ordering: for each pair `j < k` the symmetric then antisymmetric
/// off-diagonal element, then the `n-1` diagonal elements. With
/// `traceless = false` the scaled identity `√(2/n)·I` is prepended. At
/// `n = 2` the traceless basis is exactly `(X, Y, Z)`.
pub fn hermitian_basis(n: usize, traceless: bool) -> Vec<HermitianMatrix> {
    let mut out = Vec::with_capacity(n * n);
    if !traceless {
        out.push(HermitianMatrix(identity(n).scale((2.0 / n as f64).sqrt())));
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut sym = ComplexMatrix::zeros(n, n);
            sym[(j, k)] = C1;
            sym[(k, j)] = C1;
            out.push(HermitianMatrix(sym));
            let mut anti = ComplexMatrix::zeros(n, n);
            anti[(j, k)] = -CI;
            anti[(k, j)] = CI;
            out.push(HermitianMatrix(anti));
        }
    }
    for l in 1..n {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut d = ComplexMatrix::zeros(n, n);
        for j in 0..l {
            d[(j, j)] = Complex64::new(norm, 0.0);
        }
        d[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        out.push(HermitianMatrix(d));
    }
    out
}

/// Real coefficients `½Tr[B_a h]` of `h` in a Gell-Mann basis.
pub fn basis_coefficients(h: &ComplexMatrix, basis: &[HermitianMatrix]) -> Vec<f64> {
    basis
        .iter()
        .map(|b| 0.5 * trace_product(b.matrix(), h).re)
        .collect()
}

/// `Σ c_a B_a`.
pub fn from_coefficients(coeffs: &[f64], basis: &[HermitianMatrix]) -> HermitianMatrix {
    let n = basis.first().map_or(0, |b| b.dim());
    let mut acc = ComplexMatrix::zeros(n, n);
    for (c, b) in coeffs.iter().zip(basis) {
        acc += b.matrix().scale(*c);
    }
    HermitianMatrix(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        frobenius(&(a - b)) <= tol
    }

    fn herm(m: ComplexMatrix) -> HermitianMatrix {
        HermitianMatrix::new(m).unwrap()
    }

    #[test]
    fn kron_identities_and_x() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
        let xx = kron(&pauli_x(), &pauli_x());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { C1 } else { C0 };
                assert_eq!(xx[(i, j)], expected);
            }
        }
    }

    #[test]
    fn swap_conjugation_moves_factor() {
        let zi = kron(&pauli_z(), &identity(2));
        let iz = kron(&identity(2), &pauli_z());
        let s = swap();
        assert!(close(&(&s * zi * &s), &iz, 1e-15));
    }

    #[test]
    fn eigh_pauli_z() {
        let e = eigh(&herm(pauli_z()));
        assert_eq!(e.values, vec![-1.0, 1.0]);
        let v = e.vectors.matrix();
        assert_abs_diff_eq!(v[(1, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[(0, 1)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigh_xx_spectrum() {
        let e = eigh(&herm(kron(&pauli_x(), &pauli_x())));
        for (got, want) in e.values.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        let h = kron(&pauli_x(), &pauli_x());
        let v = e.vectors.matrix();
        for k in 0..4 {
            let col = v.column(k).clone_owned();
            let residual = &h * &col - col.scale(e.values[k]);
            assert!(residual.norm() < 1e-10);
        }
    }

    #[test]
    fn eigh_identity_is_orthonormal() {
        let e = eigh(&herm(identity(2)));
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert!(UnitaryMatrix::new(e.vectors.into_inner()).is_ok());
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[C0, C1, C0, C0]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn expm_rz_and_rx() {
        let theta = 0.83;
        let rz = expm_i(&herm(pauli_z()).scale(0.5), theta);
        let expected = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::from_polar(1.0, -theta / 2.0),
                C0,
                C0,
                Complex64::from_polar(1.0, theta / 2.0),
            ],
        );
        assert!(close(rz.matrix(), &expected, 1e-14));

        let rx = expm_i(&herm(pauli_x()).scale(0.5), PI);
        assert!(close(rx.matrix(), &pauli_x().scale(-1.0).map(|z| z * CI), 1e-14));
        assert_eq!(expm_i(&herm(pauli_y()), 0.0), UnitaryMatrix::identity(2));
    }

    #[test]
    fn logm_inverts_rz() {
        assert!(frobenius(logm_unitary(&UnitaryMatrix::identity(3)).unwrap().matrix()) < 1e-14);
        let theta = 0.7;
        let u = expm_i(&herm(pauli_z()).scale(0.5), theta);
        let h = logm_unitary(&u).unwrap();
        assert!(close(h.matrix(), &pauli_z().scale(theta / 2.0), 1e-12));
    }

    #[test]
    fn logm_refuses_minus_identity() {
        let u = UnitaryMatrix::new(identity(2).scale(-1.0)).unwrap();
        assert!(matches!(logm_unitary(&u), Err(Error::BranchCut { .. })));
    }

    #[test]
    fn sqrtm_cases() {
        let s = sqrtm_psd(&herm(identity(3))).unwrap();
        assert!(close(s.matrix(), &identity(3), 1e-14));

        let d = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(4.0, 0.0),
            Complex64::new(9.0, 0.0),
        ]));
        let s = sqrtm_psd(&herm(d)).unwrap();
        assert_abs_diff_eq!(s.matrix()[(0, 0)].re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.matrix()[(1, 1)].re, 3.0, epsilon = 1e-14);

        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap().projector();
        let s = sqrtm_psd(plus.hermitian()).unwrap();
        assert!(close(s.matrix(), plus.matrix(), 1e-12));

        let neg = herm(pauli_z());
        assert!(matches!(sqrtm_psd(&neg), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace_real(&RealMatrix::zeros(3, 3), NULLSPACE_TOL).len(), 3);
        assert!(nullspace_real(&RealMatrix::identity(4, 4), NULLSPACE_TOL).is_empty());

        let m = RealMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let ns = nullspace_real(&m, NULLSPACE_TOL);
        assert_eq!(ns.len(), 1);
        let s = 0.5f64.sqrt();
        assert_abs_diff_eq!(ns[0][0], s, epsilon = 1e-14);
        assert_abs_diff_eq!(ns[0][1], s, epsilon = 1e-14);
    }

    #[test]
    fn gell_mann_qubit_is_pauli() {
        let b = hermitian_basis(2, true);
        assert_eq!(b.len(), 3);
        assert_eq!(b[0].matrix(), &pauli_x());
        assert_eq!(b[1].matrix(), &pauli_y());
        assert_eq!(b[2].matrix(), &pauli_z());
        assert_eq!(trace_product(&pauli_x(), &pauli_y()), C0);
    }

    #[test]
    fn gell_mann_counts_and_normalization() {
        assert_eq!(hermitian_basis(4, true).len(), 15);
        assert_eq!(hermitian_basis(4, false).len(), 16);
        let b = hermitian_basis(5, false);
        for (i, a) in b.iter().enumerate() {
            for (j, c) in b.iter().enumerate() {
                let t = trace_product(a.matrix(), c.matrix());
                let want = if i == j { 2.0 } else { 0.0 };
                assert_abs_diff_eq!(t.re, want, epsilon = 1e-12);
                assert_abs_diff_eq!(t.im, 0.0, epsilon = 1e-12);
            }
        }
    }
}
