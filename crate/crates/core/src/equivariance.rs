//! Finite symmetry groups, their actions on data and unitary
//! representations, the equivariance check, and the linear solver for
//! equivariant Lie generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encodings::LieEncoding;
use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, hermitian_basis, identity, kron, pauli_x, pauli_z, swap, trace_product, ComplexMatrix,
    DensityMatrix, HermitianMatrix, RealMatrix, StateVector, UnitaryMatrix, NULLSPACE_TOL,
};
use crate::metric_learning::decide;
use crate::serde_matrix::{complex_list, real_list};

/// Residual at which action and representation checks pass.
pub const HOMOMORPHISM_TOL: f64 = 1e-10;
/// Constraint residual every solver output must meet on all group elements.
pub const SOLUTION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table: Latin square, two-sided identity, associativity,
    /// and that `generators` generate every element.
    pub fn new(mul: Vec<Vec<usize>>, identity: usize, generators: Vec<usize>) -> Result<Self> {
        let order = mul.len();
        if order == 0 {
            return Err(Error::input("group must have at least one element"));
        }
        for (g, row) in mul.iter().enumerate() {
            if row.len() != order {
                return Err(Error::input(format!("row {g} of the multiplication table has length {}", row.len())));
            }
            if row.iter().any(|h| *h >= order) {
                return Err(Error::input(format!("row {g} has an out-of-range entry")));
            }
        }
        for g in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for h in 0..order {
                seen_row[mul[g][h]] = true;
                seen_col[mul[h][g]] = true;
            }
            if seen_row.contains(&false) || seen_col.contains(&false) {
                return Err(Error::input("multiplication table is not a Latin square"));
            }
        }
        if identity >= order || (0..order).any(|g| mul[identity][g] != g || mul[g][identity] != g) {
            return Err(Error::input("identity does not act trivially"));
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::input(format!("multiplication is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        if generators.iter().any(|g| *g >= order) {
            return Err(Error::input("generator index out of range"));
        }
        let mut reached = vec![false; order];
        reached[identity] = true;
        let mut frontier = vec![identity];
        while let Some(g) = frontier.pop() {
            for s in &generators {
                let h = mul[g][*s];
                if !reached[h] {
                    reached[h] = true;
                    frontier.push(h);
                }
            }
        }
        if reached.contains(&false) {
            return Err(Error::input("generators do not generate the group"));
        }
        Ok(FiniteGroup {
            order,
            mul,
            identity,
            generators,
        })
    }

    pub fn trivial() -> Self {
        FiniteGroup::new(vec![vec![0]], 0, vec![]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let generators = if n > 1 { vec![1] } else { vec![] };
        FiniteGroup::new(mul, 0, generators)
    }

    /// ℤ₂ × ℤ₂ with element `(a, b)` stored at index `a + 2b`.
    pub fn klein_four() -> Self {
        let mul = (0..4).map(|a: usize| (0..4).map(|b| a ^ b).collect()).collect();
        FiniteGroup::new(mul, 0, vec![1, 2]).expect("Klein four group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g][h]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order)
            .find(|h| self.mul[g][*h] == self.identity)
            .expect("Latin square has inverses")
    }

    /// Same group with a different generating list.
    pub fn with_generators(&self, generators: Vec<usize>) -> Result<Self> {
        FiniteGroup::new(self.mul.clone(), self.identity, generators)
    }
}

/// Linear action `x ↦ α_g x` on `ℝ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Action {
    pub group: FiniteGroup,
    pub maps: Vec<RealMatrix>,
}

impl Action {
    pub fn new(group: FiniteGroup, maps: Vec<RealMatrix>) -> Result<Self> {
        if maps.len() != group.order() {
            return Err(Error::input(format!(
                "{} action matrices for a group of order {}",
                maps.len(),
                group.order()
            )));
        }
        let d = maps[0].nrows();
        if maps.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::input("action matrices must all be square of equal size"));
        }
        if maps.iter().any(|m| m.iter().any(|v| !v.is_finite())) {
            return Err(Error::input("action matrices must be finite"));
        }
        Ok(Action { group, maps })
    }

    pub fn dim(&self) -> usize {
        self.maps[0].nrows()
    }

    pub fn apply(&self, g: usize, x: &[f64]) -> Vec<f64> {
        let m = &self.maps[g];
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|k| m[(i, k)] * x[k]).sum())
            .collect()
    }

    pub fn trivial(d: usize) -> Self {
        Action::new(FiniteGroup::trivial(), vec![RealMatrix::identity(d, d)]).expect("trivial action")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub group: FiniteGroup,
    pub maps: Vec<UnitaryMatrix>,
}

impl Representation {
    pub fn new(group: FiniteGroup, maps: Vec<UnitaryMatrix>) -> Result<Self> {
        if maps.len() != group.order() {
            return Err(Error::input(format!(
                "{} representation matrices for a group of order {}",
                maps.len(),
                group.order()
            )));
        }
        let n = maps[0].dim();
        if maps.iter().any(|m| m.dim() != n) {
            return Err(Error::input("representation matrices must share one dimension"));
        }
        Ok(Representation { group, maps })
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn trivial(n: usize) -> Self {
        Representation::new(FiniteGroup::trivial(), vec![UnitaryMatrix::identity(n)]).expect("trivial representation")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomomorphismReport {
    pub max_residual: f64,
    pub worst: (usize, usize),
    pub identity_residual: f64,
    pub pass: bool,
}

fn homomorphism_report<F>(group: &FiniteGroup, residual: F, identity_residual: f64) -> HomomorphismReport
where
    F: Fn(usize, usize) -> f64,
{
    let mut max_residual = 0.0;
    let mut worst = (group.identity(), group.identity());
    for g in 0..group.order() {
        for h in 0..group.order() {
            let r = residual(g, h);
            if r > max_residual {
                max_residual = r;
                worst = (g, h);
            }
        }
    }
    HomomorphismReport {
        max_residual,
        worst,
        identity_residual,
        pass: max_residual <= HOMOMORPHISM_TOL && identity_residual <= HOMOMORPHISM_TOL,
    }
}

/// `max_{g,h} ‖α_{gh} − α_g α_h‖_F`.
pub fn check_action(a: &Action) -> HomomorphismReport {
    let d = a.dim();
    let e = a.group.identity();
    let id_res = (&a.maps[e] - RealMatrix::identity(d, d)).norm();
    homomorphism_report(
        &a.group,
        |g, h| (&a.maps[a.group.mul(g, h)] - &a.maps[g] * &a.maps[h]).norm(),
        id_res,
    )
}

/// `max_{g,h} ‖V_{gh} − V_g V_h‖_F`.
pub fn check_representation(r: &Representation) -> HomomorphismReport {
    let e = r.group.identity();
    let id_res = frobenius(&(r.maps[e].matrix() - identity(r.dim())));
    homomorphism_report(
        &r.group,
        |g, h| frobenius(&(r.maps[r.group.mul(g, h)].matrix() - r.maps[g].matrix() * r.maps[h].matrix())),
        id_res,
    )
}

fn check_compatible(a: &Action, r: &Representation) -> Result<()> {
    if a.group != r.group {
        return Err(Error::input("action and representation use different groups"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub max_residual: f64,
    pub worst_x: Vec<f64>,
    pub worst_g: usize,
    pub samples: usize,
    pub pass: bool,
}

/// Samples `x` uniformly in `[−π, π]^d` and records
/// `max ‖ρ(α_g x) − V_g ρ(x) V_g†‖_F` over all group elements.
pub fn check_equivariance<F>(
    encode: F,
    a: &Action,
    r: &Representation,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<EquivarianceReport>
where
    F: Fn(&[f64]) -> Result<DensityMatrix>,
{
    check_compatible(a, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = a.dim();
    let mut report = EquivarianceReport {
        max_residual: 0.0,
        worst_x: vec![0.0; d],
        worst_g: a.group.identity(),
        samples,
        pass: true,
    };
    for _ in 0..samples {
        let x: Vec<f64> = (0..d)
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        let rho = encode(&x)?;
        if rho.dim() != r.dim() {
            return Err(Error::shape(format!(
                "encoder produced dimension {} but the representation acts on {}",
                rho.dim(),
                r.dim()
            )));
        }
        for g in 0..a.group.order() {
            let moved = encode(&a.apply(g, &x))?;
            let res = frobenius(&(moved.matrix() - r.maps[g].conjugate(rho.matrix())));
            if res > report.max_residual {
                report.max_residual = res;
                report.worst_x = x.clone();
                report.worst_g = g;
            }
        }
    }
    report.pass = report.max_residual <= tol;
    Ok(report)
}

/// Orthonormal basis (under `⟨A, B⟩ = ½ Σ_j Tr[A_j B_j]`) of the real space
/// of tuples `(L₁, …, L_d)` of traceless Hermitian matrices with
/// `V_g L_j V_g† = Σ_k (α_g)_{kj} L_k` for all `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorBasis {
    pub d: usize,
    pub n: usize,
    pub dim: usize,
    /// `basis[m][j]` is the `j`-th operator of the `m`-th tuple.
    #[serde(with = "tuple_list")]
    pub basis: Vec<Vec<HermitianMatrix>>,
    /// Worst constraint residual of any basis tuple over all group elements.
    pub max_constraint_residual: f64,
}

mod tuple_list {
    use super::*;
    use crate::serde_matrix::hermitian_list;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Tuple(#[serde(with = "hermitian_list")] Vec<HermitianMatrix>);

    pub fn serialize<S: Serializer>(v: &[Vec<HermitianMatrix>], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(|t| Tuple(t.clone())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<HermitianMatrix>>, D::Error> {
        Ok(Vec::<Tuple>::deserialize(d)?.into_iter().map(|t| t.0).collect())
    }
}

fn stacked_inner(a: &[HermitianMatrix], b: &[HermitianMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| 0.5 * trace_product(x.matrix(), y.matrix()).re)
        .sum()
}

impl GeneratorBasis {
    /// Relative distance of `tuple` from the solution span:
    /// `‖T − P T‖ / ‖T‖` in the stacked Frobenius norm.
    pub fn projection_residual(&self, tuple: &[HermitianMatrix]) -> Result<f64> {
        if tuple.len() != self.d || tuple.iter().any(|l| l.dim() != self.n) {
            return Err(Error::shape(format!("expected {} operators of dimension {}", self.d, self.n)));
        }
        let norm = stacked_inner(tuple, tuple).sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let mut rest: Vec<ComplexMatrix> = tuple.iter().map(|l| l.matrix().clone()).collect();
        for b in &self.basis {
            let c = stacked_inner(tuple, b);
            for (r, bj) in rest.iter_mut().zip(b) {
                *r -= bj.matrix().scale(c);
            }
        }
        let rest_norm = rest.iter().map(|r| frobenius(r).powi(2)).sum::<f64>().sqrt();
        Ok(rest_norm / (2.0f64.sqrt() * norm))
    }
}

/// `max_g max_j ‖V_g L_j V_g† − Σ_k (α_g)_{kj} L_k‖_F`.
pub fn constraint_residual(a: &Action, r: &Representation, tuple: &[HermitianMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for g in 0..a.group.order() {
        for j in 0..tuple.len() {
            let mut diff = r.maps[g].conjugate(tuple[j].matrix());
            for (k, lk) in tuple.iter().enumerate() {
                diff -= lk.matrix().scale(a.maps[g][(k, j)]);
            }
            worst = worst.max(frobenius(&diff));
        }
    }
    worst
}

/// Builds the real constraint system from the group generators only, takes
/// its SVD nullspace, and re-checks every solution against all elements.
pub fn solve_equivariant_generators(a: &Action, r: &Representation, tol: f64) -> Result<GeneratorBasis> {
    check_compatible(a, r)?;
    for (name, report) in [("action", check_action(a)), ("representation", check_representation(r))] {
        if !report.pass {
            return Err(Error::input(format!(
                "{name} is not a homomorphism (residual {:.3e})",
                report.max_residual
            )));
        }
    }
    let d = a.dim();
    let n = r.dim();
    if n < 2 {
        return Err(Error::input("Hilbert dimension must be at least 2"));
    }
    let basis = hermitian_basis(n, true);
    let m = basis.len();
    let unknowns = d * m;
    let gens = a.group.generators();
    let block = 2 * n * n;
    let mut system = RealMatrix::zeros(gens.len() * d * block, unknowns);
    for (gi, &g) in gens.iter().enumerate() {
        let conj: Vec<ComplexMatrix> = basis.iter().map(|b| r.maps[g].conjugate(b.matrix())).collect();
        for j in 0..d {
            let row0 = (gi * d + j) * block;
            for k in 0..d {
                let coef = a.maps[g][(k, j)];
                for (ai, b) in basis.iter().enumerate() {
                    let mut img = if k == j { conj[ai].clone() } else { ComplexMatrix::zeros(n, n) };
                    if coef != 0.0 {
                        img -= b.matrix().scale(coef);
                    }
                    let col = k * m + ai;
                    for (e, z) in img.iter().enumerate() {
                        system[(row0 + 2 * e, col)] = z.re;
                        system[(row0 + 2 * e + 1, col)] = z.im;
                    }
                }
            }
        }
    }

    let null = if system.nrows() == 0 {
        (0..unknowns)
            .map(|i| nalgebra::DVector::from_fn(unknowns, |r, _| f64::from(u8::from(r == i))))
            .collect()
    } else {
        crate::linalg::nullspace_real(&system, tol)
    };

    // Gell-Mann elements have ½Tr[B_a B_b] = δ_ab, so orthonormal
    // coefficient vectors give orthonormal tuples.
    let tuples: Vec<Vec<HermitianMatrix>> = null
        .iter()
        .map(|v| {
            (0..d)
                .map(|j| crate::linalg::from_coefficients(&v.as_slice()[j * m..(j + 1) * m], &basis))
                .collect()
        })
        .collect();
    let max_constraint_residual = tuples
        .iter()
        .map(|t| constraint_residual(a, r, t))
        .fold(0.0, f64::max);
    if max_constraint_residual > SOLUTION_TOL {
        return Err(Error::input(format!(
            "solutions violate the constraint on non-generator elements (residual {max_constraint_residual:.3e}); the generator list is incomplete"
        )));
    }
    Ok(GeneratorBasis {
        d,
        n,
        dim: tuples.len(),
        basis: tuples,
        max_constraint_residual,
    })
}

pub fn solve_default(a: &Action, r: &Representation) -> Result<GeneratorBasis> {
    solve_equivariant_generators(a, r, NULLSPACE_TOL)
}

/// On-disk form of a group with its action and representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryFixture {
    pub group: FiniteGroup,
    #[serde(with = "real_list")]
    pub action: Vec<RealMatrix>,
    #[serde(with = "complex_list")]
    pub representation: Vec<ComplexMatrix>,
}

impl SymmetryFixture {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        let fixture: SymmetryFixture = serde_json::from_value(raw)?;
        // Re-run validation that serde bypasses.
        let g = &fixture.group;
        FiniteGroup::new(g.mul.clone(), g.identity, g.generators.clone())?;
        Ok(fixture)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn parts(&self) -> Result<(Action, Representation)> {
        let a = Action::new(self.group.clone(), self.action.clone())?;
        let maps = self
            .representation
            .iter()
            .map(|m| UnitaryMatrix::new(m.clone()))
            .collect::<Result<Vec<_>>>()?;
        let r = Representation::new(self.group.clone(), maps)?;
        Ok((a, r))
    }

    fn from_parts(a: &Action, r: &Representation) -> Self {
        SymmetryFixture {
            group: a.group.clone(),
            action: a.maps.clone(),
            representation: r.maps.iter().map(|u| u.matrix().clone()).collect(),
        }
    }

    /// Klein four acting on `ℝ²` by swap and inversion, represented on two
    /// qubits by SWAP and `X⊗X`.
    pub fn klein_four() -> Self {
        let (a, r) = klein_four_symmetry();
        Self::from_parts(&a, &r)
    }

    /// Trivial group with `d = 2`, `n = 4`.
    pub fn trivial() -> Self {
        Self::from_parts(&Action::trivial(2), &Representation::trivial(4))
    }

    /// ℤ₂ acting on `ℝ` by `x ↦ −x`, represented by `X` on one qubit.
    pub fn z2_reflection() -> Self {
        let group = FiniteGroup::cyclic(2).expect("cyclic group");
        let a = Action::new(
            group.clone(),
            vec![RealMatrix::identity(1, 1), RealMatrix::from_element(1, 1, -1.0)],
        )
        .expect("reflection action");
        let r = Representation::new(
            group,
            vec![UnitaryMatrix::identity(2), UnitaryMatrix::new(pauli_x()).expect("X is unitary")],
        )
        .expect("reflection representation");
        Self::from_parts(&a, &r)
    }
}

pub fn klein_four_symmetry() -> (Action, Representation) {
    let group = FiniteGroup::klein_four();
    let alpha = |rows: [f64; 4]| RealMatrix::from_row_slice(2, 2, &rows);
    let a = Action::new(
        group.clone(),
        vec![
            alpha([1.0, 0.0, 0.0, 1.0]),
            alpha([0.0, 1.0, 1.0, 0.0]),
            alpha([-1.0, 0.0, 0.0, -1.0]),
            alpha([0.0, -1.0, -1.0, 0.0]),
        ],
    )
    .expect("Klein four action");
    let xx = kron(&pauli_x(), &pauli_x());
    let maps = [identity(4), swap(), xx.clone(), swap() * xx]
        .into_iter()
        .map(|m| UnitaryMatrix::new(m).expect("permutation unitaries"))
        .collect();
    let r = Representation::new(group, maps).expect("Klein four representation");
    (a, r)
}

/// The symmetric two-qubit classifier: `ρ(x) = U(x)|ψ₀⟩⟨ψ₀|U(x)†` with
/// `U(x) = exp(−i(x₁ Z⊗I + x₂ I⊗Z)/2)`, fiducial
/// `ψ₀ = √p|++⟩ − √(1−p)|−−⟩` and observable `X⊗X`.
#[derive(Clone, Debug)]
pub struct GqmlModel {
    pub p: f64,
    encoding: LieEncoding,
    fiducial: StateVector,
    observable: ComplexMatrix,
}

impl GqmlModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::input(format!("p must lie in (0, 1), got {p}")));
        }
        let half_z = pauli_z().scale(0.5);
        let generators = vec![
            HermitianMatrix::new(kron(&half_z, &identity(2)))?,
            HermitianMatrix::new(kron(&identity(2), &half_z))?,
        ];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_real(&[h, h])?;
        let minus = StateVector::from_real(&[h, -h])?;
        let pp = plus.kron(&plus);
        let mm = minus.kron(&minus);
        let amps = pp.amplitudes().scale(p.sqrt()) - mm.amplitudes().scale((1.0 - p).sqrt());
        Ok(GqmlModel {
            p,
            encoding: LieEncoding::new(generators)?,
            fiducial: StateVector::normalized(amps)?,
            observable: kron(&pauli_x(), &pauli_x()),
        })
    }

    pub fn encoding(&self) -> &LieEncoding {
        &self.encoding
    }

    pub fn fiducial(&self) -> &StateVector {
        &self.fiducial
    }

    pub fn state(&self, x: &[f64]) -> Result<DensityMatrix> {
        Ok(self.encoding.unitary(x)?.apply(&self.fiducial).projector())
    }

    /// `y = Tr[ρ(x) X⊗X]` evaluated through the circuit.
    pub fn y(&self, x1: f64, x2: f64) -> Result<f64> {
        let psi = self.encoding.unitary(&[x1, x2])?.apply(&self.fiducial);
        let a = psi.amplitudes();
        let o_psi = &self.observable * a;
        Ok(a.iter().zip(o_psi.iter()).map(|(u, v)| (u.conj() * v).re).sum())
    }
}

pub fn gqml_classifier_y(x1: f64, x2: f64, p: f64) -> Result<f64> {
    GqmlModel::new(p)?.y(x1, x2)
}

/// `cos x₁ cos x₂ + 2√(p(1−p)) sin x₁ sin x₂`.
pub fn gqml_closed_form(x1: f64, x2: f64, p: f64) -> f64 {
    x1.cos() * x2.cos() + 2.0 * (p * (1.0 - p)).sqrt() * x1.sin() * x2.sin()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub x1: f64,
    pub x2: f64,
    pub y: f64,
    pub class: i8,
}

/// Evenly spaced nodes on `[lo, hi]`; mirrored nodes are exact negatives
/// when `lo = −hi`.
pub fn grid_nodes(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    let last = (resolution - 1) as f64;
    (0..resolution)
        .map(|k| (lo * (last - k as f64) + hi * k as f64) / last)
        .collect()
}

/// Classifier values on a `resolution × resolution` grid over `[lo, hi]²`,
/// row-major with `x1` as the slow index.
pub fn decision_grid(lo: f64, hi: f64, resolution: usize, p: f64) -> Result<Vec<GridRow>> {
    if resolution < 2 {
        return Err(Error::input("grid resolution must be at least 2"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::input("grid range must be finite with lo < hi"));
    }
    let model = GqmlModel::new(p)?;
    let nodes = grid_nodes(lo, hi, resolution);
    let rows: Vec<Vec<GridRow>> = nodes
        .par_iter()
        .map(|&x1| {
            nodes
                .iter()
                .map(|&x2| {
                    let y = model.y(x1, x2)?;
                    Ok(GridRow {
                        x1,
                        x2,
                        y,
                        class: decide(y),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn grid_to_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("x1,x2,y,class\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.x1, r.x2, r.y, r.class));
    }
    out
}

/// Pauli string on two qubits, e.g. `pauli_pair('X', 'Z')`.
pub fn pauli_pair(a: char, b: char) -> HermitianMatrix {
    let single = |c: char| match c {
        'I' => identity(2),
        'X' => pauli_x(),
        'Y' => crate::linalg::pauli_y(),
        'Z' => pauli_z(),
        _ => panic!("unknown Pauli label {c}"),
    };
    HermitianMatrix::hermitize(&kron(&single(a), &single(b)))
}

/// Pairs `(L, SWAP·L·SWAP)` for the eight two-qubit Pauli strings known to
/// solve the Klein four constraint.
pub fn klein_four_known_solutions() -> Vec<[HermitianMatrix; 2]> {
    let s = UnitaryMatrix::new(swap()).expect("SWAP is unitary");
    ["ZI", "IZ", "YI", "IY", "XZ", "ZX", "XY", "YX"]
        .iter()
        .map(|label| {
            let mut c = label.chars();
            let l1 = pauli_pair(c.next().unwrap(), c.next().unwrap());
            let l2 = HermitianMatrix::hermitize(&s.conjugate(l1.matrix()));
            [l1, l2]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn klein_four_checks_pass() {
        let (a, r) = klein_four_symmetry();
        assert!(check_action(&a).pass);
        assert_eq!(check_action(&a).max_residual, 0.0);
        assert!(check_representation(&r).pass);
    }

    #[test]
    fn perturbed_action_fails() {
        let (mut a, _) = klein_four_symmetry();
        a.maps[1][(0, 1)] += 1e-3;
        let report = check_action(&a);
        assert!(!report.pass);
        assert!(report.max_residual >= 1e-3);
    }

    #[test]
    fn group_validation() {
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 1]], 0, vec![1]).is_err());
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 0]], 0, vec![]).is_err());
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 0]], 1, vec![1]).is_err());
        let k = FiniteGroup::klein_four();
        assert!((0..4).all(|g| k.inverse(g) == g));
        assert_eq!(FiniteGroup::cyclic(5).unwrap().inverse(2), 3);
        assert!(Action::new(k.clone(), vec![RealMatrix::identity(2, 2)]).is_err());
    }

    #[test]
    fn klein_dimension_and_known_solutions() {
        let (a, r) = klein_four_symmetry();
        let basis = solve_default(&a, &r).unwrap();
        assert_eq!(basis.dim, 8);
        assert!(basis.max_constraint_residual <= SOLUTION_TOL);
        for pair in klein_four_known_solutions() {
            assert!(basis.projection_residual(&pair).unwrap() <= 1e-9);
        }
        let bad = [pauli_pair('X', 'I'), pauli_pair('I', 'X')];
        assert!(basis.projection_residual(&bad).unwrap() > 0.5);
    }

    #[test]
    fn trivial_dimension() {
        let basis = solve_default(&Action::trivial(2), &Representation::trivial(4)).unwrap();
        assert_eq!(basis.dim, 30);
    }

    #[test]
    fn reflection_dimension() {
        let (a, r) = SymmetryFixture::z2_reflection().parts().unwrap();
        let basis = solve_default(&a, &r).unwrap();
        assert_eq!(basis.dim, 2);
        let y = [HermitianMatrix::new(crate::linalg::pauli_y()).unwrap()];
        let z = [HermitianMatrix::new(pauli_z()).unwrap()];
        let x = [HermitianMatrix::new(pauli_x()).unwrap()];
        assert!(basis.projection_residual(&y).unwrap() < 1e-12);
        assert!(basis.projection_residual(&z).unwrap() < 1e-12);
        assert_abs_diff_eq!(basis.projection_residual(&x).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn incomplete_generator_list_is_caught() {
        let (a, r) = klein_four_symmetry();
        let group = FiniteGroup {
            generators: vec![1],
            ..a.group.clone()
        };
        let a = Action { group: group.clone(), ..a };
        let r = Representation { group, ..r };
        assert!(solve_default(&a, &r).is_err());
    }

    #[test]
    fn fig2_encoding_is_equivariant() {
        let model = GqmlModel::new(0.99).unwrap();
        let (a, r) = klein_four_symmetry();
        let report = check_equivariance(|x| model.state(x), &a, &r, 200, 5, 1e-10).unwrap();
        assert!(report.pass, "{}", report.max_residual);
    }

    #[test]
    fn trivial_group_has_zero_residual() {
        let a = Action::trivial(2);
        let r = Representation::trivial(4);
        let model = GqmlModel::new(0.3).unwrap();
        let report = check_equivariance(|x| model.state(x), &a, &r, 20, 1, 0.0).unwrap();
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn mismatched_angle_axes_break_symmetry() {
        let (a, r) = klein_four_symmetry();
        let axes = [crate::encodings::AXIS_X, crate::encodings::AXIS_Y];
        let report = check_equivariance(
            |x| Ok(crate::encodings::angle_encode(x, &axes)?.projector()),
            &a,
            &r,
            100,
            3,
            1e-10,
        )
        .unwrap();
        assert!(report.max_residual >= 0.1);
    }

    #[test]
    fn classifier_values() {
        assert_abs_diff_eq!(gqml_classifier_y(0.0, 0.0, 0.99).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gqml_classifier_y(0.0, FRAC_PI_2, 0.99).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            gqml_classifier_y(FRAC_PI_2, FRAC_PI_2, 0.99).unwrap(),
            2.0 * 0.0099f64.sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(gqml_classifier_y(0.4, -1.1, 0.5).unwrap(), (0.4f64 + 1.1).cos(), epsilon = 1e-13);
        assert!(gqml_classifier_y(0.0, 0.0, 1.0).is_err());
        assert!(gqml_classifier_y(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn grid_symmetry_and_order() {
        let rows = decision_grid(-PI, PI, 9, 0.99).unwrap();
        assert_eq!(rows.len(), 81);
        assert_eq!((rows[1].x1, rows[1].x2), (-PI, rows[1].x2));
        let at = |i: usize, j: usize| rows[i * 9 + j].class;
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(at(i, j), at(j, i));
                assert_eq!(at(i, j), at(8 - i, 8 - j));
            }
        }
        assert!(decision_grid(-PI, PI, 1, 0.99).is_err());
    }

    #[test]
    fn fixture_json_round_trip() {
        let f = SymmetryFixture::klein_four();
        let back = SymmetryFixture::from_json(&f.to_json().unwrap()).unwrap();
        let (a, r) = back.parts().unwrap();
        assert_eq!(solve_default(&a, &r).unwrap().dim, 8);
    }
}
