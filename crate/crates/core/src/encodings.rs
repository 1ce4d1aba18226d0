//! Classical-to-quantum encoding maps.
//!
//! Bit order convention: the leftmost bit of a bit string is the most
//! significant bit of the basis index, so `0101100` is basis index 44.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    expm_i, frobenius, kron_all, logm_unitary, ComplexMatrix, DensityMatrix, HermitianMatrix,
    StateVector, UnitaryMatrix, C1,
};

pub const AXIS_X: [f64; 3] = [1.0, 0.0, 0.0];
pub const AXIS_Y: [f64; 3] = [0.0, 1.0, 0.0];
pub const AXIS_Z: [f64; 3] = [0.0, 0.0, 1.0];

/// Descriptor of an encoding map. Serializes as
/// `{"variant": "<name>", "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum EncodingSpec {
    /// Per-qubit rotation `exp(-i x_k n_k·σ/2)`; an empty axis list means X
    /// on every qubit.
    Angle {
        #[serde(default)]
        axes: Vec<[f64; 3]>,
    },
    AmplitudeStandard {},
    AmplitudePlusOne {
        #[serde(default)]
        qubit_register: bool,
    },
    AmplitudeSoftmax {
        #[serde(default)]
        qubit_register: bool,
    },
    Bit {},
    LieLinear {
        #[serde(with = "crate::serde_matrix::hermitian_list")]
        generators: Vec<HermitianMatrix>,
    },
    /// Single-qubit data re-uploading circuit, see
    /// [`crate::metric_learning::reupload_unitary`].
    Reupload { theta: [f64; 4] },
}

impl EncodingSpec {
    pub fn angle_default() -> Self {
        EncodingSpec::Angle { axes: Vec::new() }
    }

    pub fn lie_linear(generators: Vec<HermitianMatrix>) -> Result<Self> {
        LieEncoding::new(generators.clone())?;
        Ok(EncodingSpec::LieLinear { generators })
    }

    pub fn name(&self) -> &'static str {
        match self {
            EncodingSpec::Angle { .. } => "angle",
            EncodingSpec::AmplitudeStandard {} => "amplitude_standard",
            EncodingSpec::AmplitudePlusOne { .. } => "amplitude_plus_one",
            EncodingSpec::AmplitudeSoftmax { .. } => "amplitude_softmax",
            EncodingSpec::Bit {} => "bit",
            EncodingSpec::LieLinear { .. } => "lie_linear",
            EncodingSpec::Reupload { .. } => "reupload",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EncodingSpec::Angle { axes } => axes.iter().try_for_each(check_axis),
            EncodingSpec::LieLinear { generators } => LieEncoding::new(generators.clone()).map(|_| ()),
            EncodingSpec::Reupload { theta } if theta.iter().any(|t| !t.is_finite()) => {
                Err(Error::input("re-uploading angles must be finite"))
            }
            _ => Ok(()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: EncodingSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_axis(axis: &[f64; 3]) -> Result<()> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::input(format!("rotation axis {axis:?} is not unit norm")));
    }
    Ok(())
}

fn check_finite(x: &[f64]) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("input has non-finite coordinates"));
    }
    Ok(())
}

fn axes_for(axes: &[[f64; 3]], d: usize) -> Result<Vec<[f64; 3]>> {
    if axes.is_empty() {
        return Ok(vec![AXIS_X; d]);
    }
    if axes.len() != d {
        return Err(Error::shape(format!(
            "{} rotation axes for {d} input coordinates",
            axes.len()
        )));
    }
    axes.iter().try_for_each(check_axis)?;
    Ok(axes.to_vec())
}

/// Single-qubit rotation `exp(-i angle n·σ/2)`.
pub fn rotation(axis: &[f64; 3], angle: f64) -> ComplexMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    let [nx, ny, nz] = *axis;
    let ms = Complex64::new(0.0, -s);
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0) + ms * nz,
            ms * Complex64::new(nx, -ny),
            ms * Complex64::new(nx, ny),
            Complex64::new(c, 0.0) - ms * nz,
        ],
    )
}

/// Product of per-qubit rotations; `axes` empty means X everywhere.
pub fn angle_unitary(x: &[f64], axes: &[[f64; 3]]) -> Result<UnitaryMatrix> {
    check_finite(x)?;
    let axes = axes_for(axes, x.len())?;
    let factors: Vec<ComplexMatrix> = x.iter().zip(&axes).map(|(xk, n)| rotation(n, *xk)).collect();
    Ok(UnitaryMatrix::from_trusted(kron_all(&factors)))
}

/// `⊗_k exp(-i x_k n_k·σ/2)|0⟩`.
pub fn angle_encode(x: &[f64], axes: &[[f64; 3]]) -> Result<StateVector> {
    if x.is_empty() {
        return Err(Error::shape("angle encoding needs at least one coordinate"));
    }
    check_finite(x)?;
    let axes = axes_for(axes, x.len())?;
    let mut amps = DVector::from_element(1, C1);
    for (xk, n) in x.iter().zip(&axes) {
        let (s, c) = (xk / 2.0).sin_cos();
        let ms = Complex64::new(0.0, -s);
        let qubit = DVector::from_vec(vec![
            Complex64::new(c, 0.0) + ms * n[2],
            ms * Complex64::new(n[0], n[1]),
        ]);
        amps = amps.kronecker(&qubit);
    }
    StateVector::normalized(amps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeVariant {
    Standard,
    PlusOne,
    Softmax,
}

/// Output of an amplitude encoding. `state` may be longer than
/// `logical_dim` when zero-padding to a qubit register was requested.
#[derive(Clone, Debug)]
pub struct AmplitudeEncoding {
    pub state: StateVector,
    pub logical_dim: usize,
    /// Probability vector on the simplex (softmax variant only).
    pub probabilities: Option<Vec<f64>>,
}

impl AmplitudeEncoding {
    pub fn padding(&self) -> usize {
        self.state.dim() - self.logical_dim
    }
}

/// Softmax-with-reference map `(e^{x_0},…,e^{x_{N-1}},1)/(1+Σe^{x_j})`.
pub fn softmax_probabilities(x: &[f64]) -> Vec<f64> {
    let shift = x.iter().copied().fold(0.0, f64::max);
    let mut p: Vec<f64> = x.iter().map(|v| (v - shift).exp()).collect();
    p.push((-shift).exp());
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p
}

pub fn amplitude_encode(
    x: &[f64],
    variant: AmplitudeVariant,
    qubit_register: bool,
) -> Result<AmplitudeEncoding> {
    check_finite(x)?;
    let (mut amps, probabilities): (Vec<f64>, Option<Vec<f64>>) = match variant {
        AmplitudeVariant::Standard => {
            if x.is_empty() || !x.len().is_power_of_two() {
                return Err(Error::shape(format!(
                    "standard amplitude encoding needs a power-of-two length, got {}",
                    x.len()
                )));
            }
            if x.iter().all(|v| *v == 0.0) {
                return Err(Error::ZeroVector);
            }
            (x.to_vec(), None)
        }
        AmplitudeVariant::PlusOne => {
            let mut v = x.to_vec();
            v.push(1.0);
            (v, None)
        }
        AmplitudeVariant::Softmax => {
            let p = softmax_probabilities(x);
            (p.iter().map(|v| v.sqrt()).collect(), Some(p))
        }
    };
    let logical_dim = amps.len();
    if qubit_register {
        amps.resize(logical_dim.next_power_of_two(), 0.0);
    }
    Ok(AmplitudeEncoding {
        state: StateVector::from_real(&amps)?,
        logical_dim,
        probabilities,
    })
}

/// Polar angle of a plus-one encoded state measured from the appended axis.
/// Satisfies `tan θ = ‖x‖`.
pub fn plus_one_polar_angle(encoded: &AmplitudeEncoding) -> f64 {
    let amps = encoded.state.amplitudes();
    let last = amps[encoded.logical_dim - 1].re;
    let rest = (0..encoded.logical_dim - 1)
        .map(|i| amps[i].norm_sqr())
        .sum::<f64>()
        .sqrt();
    rest.atan2(last)
}

/// Basis index of a bit string, leftmost bit most significant.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::input(format!("'{other}' is not a bit"))),
        })
        .collect()
}

/// Computational basis state `|b_0 b_1 … b_{n-1}⟩`.
pub fn bit_encode(bits: &[bool]) -> StateVector {
    StateVector::basis(1 << bits.len(), bits_to_index(bits))
}

/// Linear lift of a finite function `f: {0..|X|} → {0..codomain}`: the
/// `codomain × |X|` matrix sending `|x⟩` to `|f(x)⟩`.
pub fn lift_function(table: &[usize], codomain: usize) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(codomain, table.len());
    for (x, &y) in table.iter().enumerate() {
        if y >= codomain {
            return Err(Error::input(format!(
                "f({x}) = {y} is outside a codomain of size {codomain}"
            )));
        }
        m[(y, x)] = C1;
    }
    Ok(m)
}

/// Generator encoding `U(x) = exp(-i Σ_j x_j L_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieEncoding {
    generators: Vec<HermitianMatrix>,
}

impl LieEncoding {
    pub fn new(generators: Vec<HermitianMatrix>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::input("at least one generator is required"))?;
        let n = first.dim();
        for (j, g) in generators.iter().enumerate() {
            if g.dim() != n {
                return Err(Error::shape(format!(
                    "generator {j} has dimension {} but generator 0 has {n}",
                    g.dim()
                )));
            }
            if !g.is_traceless() {
                return Err(Error::input(format!("generator {j} is not traceless")));
            }
        }
        Ok(LieEncoding { generators })
    }

    pub fn generators(&self) -> &[HermitianMatrix] {
        &self.generators
    }

    pub fn input_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// `L(x) = Σ_j x_j L_j`.
    pub fn generator_at(&self, x: &[f64]) -> Result<HermitianMatrix> {
        if x.len() != self.generators.len() {
            return Err(Error::shape(format!(
                "input has {} coordinates but the encoding has {} generators",
                x.len(),
                self.generators.len()
            )));
        }
        check_finite(x)?;
        let n = self.hilbert_dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (xj, g) in x.iter().zip(&self.generators) {
            acc += g.matrix().scale(*xj);
        }
        Ok(HermitianMatrix::hermitize(&acc))
    }

    pub fn unitary(&self, x: &[f64]) -> Result<UnitaryMatrix> {
        Ok(expm_i(&self.generator_at(x)?, 1.0))
    }

    /// `‖U(x)U(y) − U(x+y)‖_F`; zero whenever `x` and `y` are parallel.
    pub fn homomorphism_gap(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let sum: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        let lhs = self.unitary(x)?.compose(&self.unitary(y)?);
        Ok(frobenius(&(lhs.matrix() - self.unitary(&sum)?.matrix())))
    }
}

pub fn lie_encode(generators: &[HermitianMatrix], x: &[f64]) -> Result<UnitaryMatrix> {
    LieEncoding::new(generators.to_vec())?.unitary(x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpsReport {
    pub max_violation: f64,
    pub samples: usize,
    pub tol: f64,
    pub pass: bool,
}

/// Checks that `r ↦ U(rα)` is a one-parameter subgroup: samples `r, u`
/// uniformly in `[-π, π]` and records `‖U(rα)U(uα) − U((r+u)α)‖_F`.
pub fn ops_check(
    encoding: &LieEncoding,
    direction: &[f64],
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<OpsReport> {
    if direction.len() != encoding.input_dim() {
        return Err(Error::shape("direction length does not match the encoding"));
    }
    if direction.iter().all(|a| *a == 0.0) {
        return Err(Error::input("direction must be nonzero"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = std::f64::consts::PI;
    let mut max_violation = 0.0f64;
    for _ in 0..samples {
        let r: f64 = rng.random_range(-pi..pi);
        let u: f64 = rng.random_range(-pi..pi);
        let x: Vec<f64> = direction.iter().map(|a| r * a).collect();
        let y: Vec<f64> = direction.iter().map(|a| u * a).collect();
        max_violation = max_violation.max(encoding.homomorphism_gap(&x, &y)?);
    }
    Ok(OpsReport {
        max_violation,
        samples,
        tol,
        pass: max_violation <= tol,
    })
}

/// Recovers `L_j = i·log U(e_j)` for each standard basis vector. Exact for
/// generator encodings whose generators have spectral norm below π.
pub fn recover_generators<F>(encode: F, d: usize) -> Result<Vec<HermitianMatrix>>
where
    F: Fn(&[f64]) -> Result<UnitaryMatrix>,
{
    (0..d)
        .map(|j| {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            logm_unitary(&encode(&e)?)
        })
        .collect()
}

fn basis_state(dim: usize) -> StateVector {
    StateVector::basis(dim, 0)
}

fn apply_to_fiducial(u: &UnitaryMatrix, fiducial: Option<&StateVector>) -> Result<StateVector> {
    match fiducial {
        None => Ok(u.apply(&basis_state(u.dim()))),
        Some(psi) if psi.dim() == u.dim() => Ok(u.apply(psi)),
        Some(psi) => Err(Error::shape(format!(
            "fiducial state has dimension {} but the unitary acts on {}",
            psi.dim(),
            u.dim()
        ))),
    }
}

/// Pure state produced by `spec` at `x`. Unitary encodings (angle, Lie,
/// re-uploading) act on `fiducial`, defaulting to `|0…0⟩`; state encodings
/// (amplitude, bit) reject a fiducial.
pub fn encode_pure(spec: &EncodingSpec, x: &[f64], fiducial: Option<&StateVector>) -> Result<StateVector> {
    let no_fiducial = || -> Result<()> {
        if fiducial.is_some() {
            return Err(Error::input(format!(
                "{} encoding does not take a fiducial state",
                spec.name()
            )));
        }
        Ok(())
    };
    match spec {
        EncodingSpec::Angle { axes } => match fiducial {
            None => angle_encode(x, axes),
            Some(_) => apply_to_fiducial(&angle_unitary(x, axes)?, fiducial),
        },
        EncodingSpec::AmplitudeStandard {} => {
            no_fiducial()?;
            Ok(amplitude_encode(x, AmplitudeVariant::Standard, false)?.state)
        }
        EncodingSpec::AmplitudePlusOne { qubit_register } => {
            no_fiducial()?;
            Ok(amplitude_encode(x, AmplitudeVariant::PlusOne, *qubit_register)?.state)
        }
        EncodingSpec::AmplitudeSoftmax { qubit_register } => {
            no_fiducial()?;
            Ok(amplitude_encode(x, AmplitudeVariant::Softmax, *qubit_register)?.state)
        }
        EncodingSpec::Bit {} => {
            no_fiducial()?;
            let bits = x
                .iter()
                .map(|&v| match v {
                    0.0 => Ok(false),
                    1.0 => Ok(true),
                    v => Err(Error::input(format!("bit encoding got non-binary value {v}"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            Ok(bit_encode(&bits))
        }
        EncodingSpec::LieLinear { generators } => {
            let u = LieEncoding::new(generators.clone())?.unitary(x)?;
            apply_to_fiducial(&u, fiducial)
        }
        EncodingSpec::Reupload { theta } => {
            if x.len() != 1 {
                return Err(Error::shape("re-uploading encoding takes one coordinate"));
            }
            let u = crate::metric_learning::reupload_unitary(x[0], theta);
            apply_to_fiducial(&u, fiducial)
        }
    }
}

/// Density matrix `|Φ(x)⟩⟨Φ(x)|` of the encoded state.
pub fn encode_state(spec: &EncodingSpec, x: &[f64], fiducial: Option<&StateVector>) -> Result<DensityMatrix> {
    Ok(encode_pure(spec, x, fiducial)?.projector())
}
