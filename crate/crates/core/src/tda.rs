//! Vietoris–Rips filtrations, persistent homology with ℤ₂ coefficients,
//! bottleneck distance and encoding-stability experiments.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::metrics::{pullback, FiniteMetricSpace, StateMetric};

/// Bottleneck slack allowed on top of the distortion bound.
pub const BOUND_SLACK: f64 = 1e-9;
/// Below this distortion the encoding counts as distance-preserving.
pub const ISOMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub value: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

fn filtration_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
}

impl FilteredComplex {
    /// Sorts by (value, dim, vertices) and checks that every face is present
    /// with a value no larger than its coface.
    pub fn new(mut simplices: Vec<Simplex>) -> Result<Self> {
        for s in &mut simplices {
            if s.vertices.is_empty() {
                return Err(Error::InvalidComplex("empty simplex".into()));
            }
            if !s.value.is_finite() {
                return Err(Error::InvalidComplex(format!("non-finite value on {:?}", s.vertices)));
            }
            s.vertices.sort_unstable();
            if s.vertices.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("repeated vertex in {:?}", s.vertices)));
            }
        }
        simplices.sort_by(filtration_order);
        let mut index: HashMap<&[usize], f64> = HashMap::with_capacity(simplices.len());
        for s in &simplices {
            if index.insert(&s.vertices, s.value).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate simplex {:?}", s.vertices)));
            }
        }
        for s in &simplices {
            if s.vertices.len() < 2 {
                continue;
            }
            for skip in 0..s.vertices.len() {
                let face: Vec<usize> = face_without(&s.vertices, skip);
                match index.get(face.as_slice()) {
                    None => {
                        return Err(Error::InvalidComplex(format!(
                            "face {face:?} of {:?} is missing",
                            s.vertices
                        )))
                    }
                    Some(v) if *v > s.value => {
                        return Err(Error::InvalidComplex(format!(
                            "face {face:?} enters at {v} after its coface {:?} at {}",
                            s.vertices, s.value
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(FilteredComplex { simplices })
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertices,value,dim\n");
        for s in &self.simplices {
            let verts: Vec<String> = s.vertices.iter().map(usize::to_string).collect();
            out.push_str(&format!("{},{},{}\n", verts.join(" "), s.value, s.dim()));
        }
        out
    }
}

fn face_without(vertices: &[usize], skip: usize) -> Vec<usize> {
    vertices
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, v)| *v)
        .collect()
}

/// All simplices of dimension ≤ `max_dim` whose diameter is ≤ `max_radius`,
/// each entering at its diameter.
pub fn vietoris_rips(space: &FiniteMetricSpace, max_dim: usize, max_radius: f64) -> FilteredComplex {
    let n = space.len();
    let d = &space.dist;
    let mut simplices = Vec::new();
    let mut stack: Vec<(Vec<usize>, f64)> = (0..n).rev().map(|v| (vec![v], 0.0)).collect();
    while let Some((verts, value)) = stack.pop() {
        let last = *verts.last().expect("non-empty");
        if verts.len() <= max_dim {
            for w in (last + 1..n).rev() {
                let diam = verts.iter().map(|u| d[(*u, w)]).fold(value, f64::max);
                if diam <= max_radius {
                    let mut next = verts.clone();
                    next.push(w);
                    stack.push((next, diam));
                }
            }
        }
        simplices.push(Simplex { vertices: verts, value });
    }
    FilteredComplex::new(simplices).expect("Rips complexes are closed under faces")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    /// `f64::INFINITY` for classes that never die.
    pub death: f64,
}

impl PersistencePair {
    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PersistenceDiagram {
    pub pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &PersistencePair> + '_ {
        self.pairs.iter().filter(move |p| p.dim == dim)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.pairs.iter().map(|p| p.dim).max()
    }

    /// Bars alive at `r`: `birth ≤ r < death`, counted per dimension.
    pub fn alive_at(&self, dim: usize, r: f64) -> usize {
        self.in_dim(dim).filter(|p| p.birth <= r && r < p.death).count()
    }

    /// `[{"dim": k, "pairs": [[birth, death | "inf"], …]}, …]` for
    /// `k = 0..=max_dim`.
    pub fn to_json_value(&self, max_dim: usize) -> Value {
        let dims: Vec<Value> = (0..=max_dim)
            .map(|k| {
                let pairs: Vec<Value> = self
                    .in_dim(k)
                    .map(|p| {
                        let death = if p.is_infinite() { json!("inf") } else { json!(p.death) };
                        json!([p.birth, death])
                    })
                    .collect();
                json!({"dim": k, "pairs": pairs})
            })
            .collect();
        Value::Array(dims)
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::input(format!("persistence diagram JSON: {msg}"));
        let mut pairs = Vec::new();
        for entry in value.as_array().ok_or_else(|| bad("expected an array"))? {
            let dim = entry["dim"].as_u64().ok_or_else(|| bad("missing dim"))? as usize;
            for p in entry["pairs"].as_array().ok_or_else(|| bad("missing pairs"))? {
                let birth = p[0].as_f64().ok_or_else(|| bad("birth must be a number"))?;
                let death = match &p[1] {
                    Value::String(s) if s == "inf" => f64::INFINITY,
                    v => v.as_f64().ok_or_else(|| bad("death must be a number or \"inf\""))?,
                };
                if death < birth {
                    return Err(bad("death precedes birth"));
                }
                pairs.push(PersistencePair { dim, birth, death });
            }
        }
        Ok(PersistenceDiagram { pairs })
    }
}

fn add_columns(target: &mut Vec<usize>, other: &[usize]) {
    let mut out = Vec::with_capacity(target.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&other[j..]);
    *target = out;
}

/// Standard column reduction of the ℤ₂ boundary matrix in filtration order.
/// Zero-length bars are dropped; unpaired creators die at `+∞`.
pub fn persistence(complex: &FilteredComplex) -> PersistenceDiagram {
    let simplices = complex.simplices();
    let position: HashMap<&[usize], usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices.as_slice(), i))
        .collect();
    let mut pivot_owner: HashMap<usize, usize> = HashMap::new();
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(simplices.len());
    let mut paired = vec![false; simplices.len()];
    let mut pairs = Vec::new();

    for (j, s) in simplices.iter().enumerate() {
        let mut col: Vec<usize> = if s.vertices.len() < 2 {
            Vec::new()
        } else {
            let mut c: Vec<usize> = (0..s.vertices.len())
                .map(|skip| position[face_without(&s.vertices, skip).as_slice()])
                .collect();
            c.sort_unstable();
            c
        };
        while let Some(&low) = col.last() {
            match pivot_owner.get(&low) {
                Some(&k) => {
                    let other = columns[k].clone();
                    add_columns(&mut col, &other);
                }
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_owner.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            let birth = simplices[low].value;
            if s.value > birth {
                pairs.push(PersistencePair {
                    dim: simplices[low].dim(),
                    birth,
                    death: s.value,
                });
            }
        }
        columns.push(col);
    }
    for (i, s) in simplices.iter().enumerate() {
        if !paired[i] {
            pairs.push(PersistencePair {
                dim: s.dim(),
                birth: s.value,
                death: f64::INFINITY,
            });
        }
    }
    pairs.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
    PersistenceDiagram { pairs }
}

fn has_perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(u, adj, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (n, m) = (a.len(), b.len());
    if n == 0 && m == 0 {
        return 0.0;
    }
    // Left: a_0..a_{n-1}, then diagonal copies of b. Right: b_0..b_{m-1},
    // then diagonal copies of a.
    let size = n + m;
    let half = |p: &(f64, f64)| (p.1 - p.0) / 2.0;
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n * m + 2 * (n + m) + m * n);
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            let c = (p.0 - q.0).abs().max((p.1 - q.1).abs());
            edges.push((i, j, c));
        }
        edges.push((i, m + i, half(p)));
    }
    for (j, q) in b.iter().enumerate() {
        edges.push((n + j, j, half(q)));
        for i in 0..n {
            edges.push((n + j, m + i, 0.0));
        }
    }
    let mut candidates: Vec<f64> = edges.iter().map(|e| e.2).collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |t: f64| {
        let mut adj = vec![Vec::new(); size];
        for &(u, v, c) in &edges {
            if c <= t {
                adj[u].push(v);
            }
        }
        has_perfect_matching(&adj, size)
    };
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Bottleneck distance between the degree-`dim` parts of two diagrams.
/// Infinite bars are matched among themselves; a count mismatch gives `+∞`.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram, dim: usize) -> f64 {
    let split = |d: &PersistenceDiagram| {
        let mut inf: Vec<f64> = Vec::new();
        let mut fin = Vec::new();
        for p in d.in_dim(dim) {
            if p.is_infinite() {
                inf.push(p.birth);
            } else {
                fin.push((p.birth, p.death));
            }
        }
        inf.sort_by(f64::total_cmp);
        (inf, fin)
    };
    let (inf1, fin1) = split(d1);
    let (inf2, fin2) = split(d2);
    if inf1.len() != inf2.len() {
        return f64::INFINITY;
    }
    let inf_cost = inf1
        .iter()
        .zip(&inf2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    inf_cost.max(finite_bottleneck(&fin1, &fin2))
}

/// `max_{i,j} |d_X(i,j) − d_Y(i,j)|` for the index correspondence.
pub fn distortion(space: &FiniteMetricSpace, encoded: &FiniteMetricSpace) -> Result<f64> {
    if space.len() != encoded.len() {
        return Err(Error::input(format!(
            "spaces have {} and {} points",
            space.len(),
            encoded.len()
        )));
    }
    Ok(space
        .dist
        .iter()
        .zip(encoded.dist.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub dgm_raw: PersistenceDiagram,
    pub dgm_encoded: PersistenceDiagram,
    /// Indexed by homology dimension `0..=max_dim`.
    pub bottleneck: Vec<f64>,
    pub distortion: f64,
    /// Distance preservation implies identical diagrams.
    pub isometry_pass: bool,
    /// `bottleneck ≤ distortion + 1e-9` in every dimension.
    pub bound_pass: bool,
}

impl StabilityReport {
    pub fn to_json_value(&self, max_dim: usize) -> Value {
        let num = |v: f64| if v.is_infinite() { json!("inf") } else { json!(v) };
        json!({
            "distortion": num(self.distortion),
            "bottleneck": self.bottleneck.iter().map(|b| num(*b)).collect::<Vec<_>>(),
            "isometry_pass": self.isometry_pass,
            "bound_pass": self.bound_pass,
            "dgm_raw": self.dgm_raw.to_json_value(max_dim),
            "dgm_encoded": self.dgm_encoded.to_json_value(max_dim),
        })
    }
}

/// Compares the full Rips filtrations of two metrics on the same points.
pub fn compare_spaces(raw: &FiniteMetricSpace, encoded: &FiniteMetricSpace, max_dim: usize) -> Result<StabilityReport> {
    let distortion = distortion(raw, encoded)?;
    let dgm_raw = persistence(&vietoris_rips(raw, max_dim, f64::INFINITY));
    let dgm_encoded = persistence(&vietoris_rips(encoded, max_dim, f64::INFINITY));
    let bottleneck: Vec<f64> = (0..=max_dim)
        .map(|k| self::bottleneck(&dgm_raw, &dgm_encoded, k))
        .collect();
    let bound_pass = bottleneck.iter().all(|b| *b <= distortion + BOUND_SLACK);
    let isometry_pass = distortion > ISOMETRY_TOL || bottleneck.iter().all(|b| *b <= ISOMETRY_TOL);
    Ok(StabilityReport {
        dgm_raw,
        dgm_encoded,
        bottleneck,
        distortion,
        isometry_pass,
        bound_pass,
    })
}

/// Euclidean diagrams of `points` against diagrams of their encoded states.
pub fn stability_experiment<F>(
    points: &[Vec<f64>],
    encode: F,
    metric: StateMetric,
    max_dim: usize,
) -> Result<StabilityReport>
where
    F: Fn(&Vec<f64>) -> Result<DensityMatrix> + Sync,
{
    let raw = FiniteMetricSpace::euclidean(points)?;
    let encoded = pullback(points, encode, metric)?;
    compare_spaces(&raw, &encoded, max_dim)
}

/// Indicator bits of a simplex on `n` vertices: bit `k` is set iff vertex
/// `k` belongs to the simplex.
pub fn simplex_bits(vertices: &[usize], n: usize) -> Result<Vec<bool>> {
    let set: BTreeSet<usize> = vertices.iter().copied().collect();
    if set.len() != vertices.len() {
        return Err(Error::InvalidComplex("repeated vertex".into()));
    }
    if let Some(v) = set.iter().find(|v| **v >= n) {
        return Err(Error::input(format!("vertex {v} out of range for {n} vertices")));
    }
    Ok((0..n).map(|k| set.contains(&k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;
    use approx::assert_abs_diff_eq;

    fn square() -> FiniteMetricSpace {
        FiniteMetricSpace::euclidean(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
    }

    fn pair_space(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::from_matrix(
            vec!["a".into(), "b".into()],
            RealMatrix::from_row_slice(2, 2, &[0.0, d, d, 0.0]),
        )
        .unwrap()
    }

    fn diagram(pairs: &[(usize, f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram {
            pairs: pairs
                .iter()
                .map(|&(dim, birth, death)| PersistencePair { dim, birth, death })
                .collect(),
        }
    }

    #[test]
    fn rips_small_cases() {
        let one = FiniteMetricSpace::euclidean(&[vec![0.0]]).unwrap();
        let k = vietoris_rips(&one, 2, f64::INFINITY);
        assert_eq!(k.simplices(), &[Simplex { vertices: vec![0], value: 0.0 }]);

        let k = vietoris_rips(&pair_space(1.0), 1, f64::INFINITY);
        let values: Vec<(usize, f64)> = k.simplices().iter().map(|s| (s.dim(), s.value)).collect();
        assert_eq!(values, vec![(0, 0.0), (0, 0.0), (1, 1.0)]);
    }

    #[test]
    fn rips_square() {
        let k = vietoris_rips(&square(), 2, f64::INFINITY);
        assert_eq!(k.len(), 14);
        let edges: Vec<f64> = k.simplices().iter().filter(|s| s.dim() == 1).map(|s| s.value).collect();
        assert_eq!(edges.iter().filter(|v| **v == 1.0).count(), 4);
        assert_eq!(edges.iter().filter(|v| **v == 2f64.sqrt()).count(), 2);
        assert!(k.simplices().iter().filter(|s| s.dim() == 2).all(|s| s.value == 2f64.sqrt()));
    }

    #[test]
    fn invalid_complex() {
        let bad = vec![
            Simplex { vertices: vec![0], value: 0.0 },
            Simplex { vertices: vec![0, 1], value: 1.0 },
        ];
        assert!(matches!(FilteredComplex::new(bad), Err(Error::InvalidComplex(_))));
        let late_face = vec![
            Simplex { vertices: vec![0], value: 0.0 },
            Simplex { vertices: vec![1], value: 2.0 },
            Simplex { vertices: vec![0, 1], value: 1.0 },
        ];
        assert!(FilteredComplex::new(late_face).is_err());
    }

    #[test]
    fn persistence_cases() {
        let dgm = persistence(&vietoris_rips(&pair_space(1.0), 1, f64::INFINITY));
        assert_eq!(dgm.pairs, diagram(&[(0, 0.0, 1.0), (0, 0.0, f64::INFINITY)]).pairs);

        let isolated = FiniteMetricSpace::euclidean(&[vec![0.0], vec![3.0], vec![7.0]]).unwrap();
        let dgm = persistence(&vietoris_rips(&isolated, 1, 1.0));
        assert_eq!(dgm.pairs.len(), 3);
        assert!(dgm.pairs.iter().all(|p| p.dim == 0 && p.is_infinite()));

        let dgm = persistence(&vietoris_rips(&square(), 2, f64::INFINITY));
        let h1: Vec<_> = dgm.in_dim(1).collect();
        assert_eq!(h1.len(), 1);
        assert_eq!((h1[0].birth, h1[0].death), (1.0, 2f64.sqrt()));
        assert_eq!(dgm.in_dim(0).filter(|p| p.is_infinite()).count(), 1);
    }

    #[test]
    fn bottleneck_cases() {
        let a = diagram(&[(0, 0.0, 2.0)]);
        assert_eq!(bottleneck(&a, &a, 0), 0.0);
        assert_eq!(bottleneck(&a, &PersistenceDiagram::default(), 0), 1.0);
        assert_eq!(bottleneck(&a, &diagram(&[(0, 0.5, 2.5)]), 0), 0.5);
        let inf = diagram(&[(0, 0.0, f64::INFINITY)]);
        assert_eq!(bottleneck(&inf, &PersistenceDiagram::default(), 0), f64::INFINITY);
        assert_eq!(bottleneck(&inf, &diagram(&[(0, 0.25, f64::INFINITY)]), 0), 0.25);
        assert_eq!(bottleneck(&a, &PersistenceDiagram::default(), 1), 0.0);
    }

    #[test]
    fn distortion_cases() {
        let s = square();
        assert_eq!(distortion(&s, &s).unwrap(), 0.0);
        let mut doubled = s.clone();
        doubled.dist *= 2.0;
        assert_abs_diff_eq!(distortion(&s, &doubled).unwrap(), s.max_distance(), epsilon = 1e-15);
        assert!(distortion(&s, &pair_space(1.0)).is_err());
    }

    #[test]
    fn identical_spaces_pass() {
        let s = square();
        let r = compare_spaces(&s, &s, 2).unwrap();
        assert!(r.isometry_pass && r.bound_pass);
        assert!(r.bottleneck.iter().all(|b| *b == 0.0));
    }

    #[test]
    fn diagram_json_round_trip() {
        let dgm = persistence(&vietoris_rips(&square(), 2, f64::INFINITY));
        let v = dgm.to_json_value(2);
        assert_eq!(v[0]["pairs"][3][1], json!("inf"));
        let back = PersistenceDiagram::from_json_value(&v).unwrap();
        assert_eq!(back, dgm);
    }

    #[test]
    fn bits_of_a_simplex() {
        let bits = simplex_bits(&[1, 3, 4], 7).unwrap();
        assert_eq!(crate::encodings::bits_to_index(&bits), 44);
        assert!(simplex_bits(&[7], 7).is_err());
        assert!(simplex_bits(&[1, 1], 7).is_err());
    }
}
