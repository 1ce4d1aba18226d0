#![allow(dead_code)]

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use structenc::linalg::{ComplexMatrix, DensityMatrix, HermitianMatrix, StateVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let a = random_complex(rng, n, n);
    HermitianMatrix::hermitize(&(&a + a.adjoint()))
}

pub fn random_pure(rng: &mut impl Rng, n: usize) -> StateVector {
    let v = random_complex(rng, n, 1);
    StateVector::normalized(DVector::from_column_slice(v.as_slice())).unwrap()
}

/// `A A† / Tr[A A†]` with `A` of the given rank.
pub fn random_density(rng: &mut impl Rng, n: usize, rank: usize) -> DensityMatrix {
    let a = random_complex(rng, n, rank);
    let m = &a * a.adjoint();
    let t = m.trace();
    DensityMatrix::new(m.unscale(t.re)).unwrap()
}

/// Qubit state from a Bloch vector of norm ≤ 1.
pub fn from_bloch(b: [f64; 3]) -> DensityMatrix {
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + b[2]), 0.0),
            Complex64::new(0.5 * b[0], -0.5 * b[1]),
            Complex64::new(0.5 * b[0], 0.5 * b[1]),
            Complex64::new(0.5 * (1.0 - b[2]), 0.0),
        ],
    );
    DensityMatrix::new(m).unwrap()
}

pub fn random_bloch(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let b = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        if b.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return b;
        }
    }
}

pub fn random_cloud(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}
