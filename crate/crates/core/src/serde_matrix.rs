//! JSON layouts for matrices: complex matrices as rows of `[re, im]` pairs,
//! real matrices as rows of numbers.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, RealMatrix};

pub type ComplexRows = Vec<Vec<[f64; 2]>>;
pub type RealRows = Vec<Vec<f64>>;

pub fn complex_to_rows(m: &ComplexMatrix) -> ComplexRows {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn complex_from_rows(rows: &ComplexRows) -> Result<ComplexMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::shape("ragged complex matrix rows"));
    }
    Ok(ComplexMatrix::from_fn(nrows, ncols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn real_to_rows(m: &RealMatrix) -> RealRows {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

pub fn real_from_rows(rows: &RealRows) -> Result<RealMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::shape("ragged real matrix rows"));
    }
    Ok(RealMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// `#[serde(with = "hermitian_list")]` for `Vec<HermitianMatrix>`.
pub mod hermitian_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[HermitianMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter()
            .map(|h| complex_to_rows(h.matrix()))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<HermitianMatrix>, D::Error> {
        let raw: Vec<ComplexRows> = Vec::deserialize(d)?;
        raw.iter()
            .map(|rows| {
                complex_from_rows(rows)
                    .and_then(HermitianMatrix::new)
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// `#[serde(with = "complex_list")]` for `Vec<ComplexMatrix>`.
pub mod complex_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[ComplexMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(complex_to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<ComplexMatrix>, D::Error> {
        let raw: Vec<ComplexRows> = Vec::deserialize(d)?;
        raw.iter()
            .map(|rows| complex_from_rows(rows).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `#[serde(with = "real_list")]` for `Vec<RealMatrix>`.
pub mod real_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[RealMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(real_to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<RealMatrix>, D::Error> {
        let raw: Vec<RealRows> = Vec::deserialize(d)?;
        raw.iter()
            .map(|rows| real_from_rows(rows).map_err(serde::de::Error::custom))
            .collect()
    }
}
