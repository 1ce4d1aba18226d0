//! Brute-force reference computations used only by tests.
//!
//! Everything here is deliberately naive: linear algebra over GF(2) with
//! bitsets, persistence recovered from ranks of cycle and boundary spaces,
//! bottleneck distance by enumerating matchings, and closed-form qubit
//! formulas in terms of Bloch vectors.

use std::collections::HashMap;

/// Dense GF(2) vector stored as 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    fn highest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }
}

/// Rank of a set of GF(2) vectors by Gaussian elimination.
pub fn gf2_rank(vectors: &[BitVec]) -> usize {
    let mut pivots: HashMap<usize, BitVec> = HashMap::new();
    for v in vectors {
        let mut v = v.clone();
        while let Some(h) = v.highest() {
            match pivots.get(&h) {
                Some(p) => v.xor(p),
                None => {
                    pivots.insert(h, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Basis of the kernel of the linear map sending the `i`-th unit vector to
/// `images[i]`; each kernel vector is expressed over the domain.
pub fn gf2_kernel(images: &[BitVec]) -> Vec<BitVec> {
    let n = images.len();
    let mut pivots: HashMap<usize, (BitVec, BitVec)> = HashMap::new();
    let mut kernel = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut v = img.clone();
        let mut combo = BitVec::zeros(n);
        combo.set(i);
        loop {
            match v.highest() {
                None => {
                    kernel.push(combo);
                    break;
                }
                Some(h) => match pivots.get(&h) {
                    Some((pv, pc)) => {
                        v.xor(pv);
                        combo.xor(pc);
                    }
                    None => {
                        pivots.insert(h, (v, combo));
                        break;
                    }
                },
            }
        }
    }
    kernel
}

/// A filtered simplex: sorted vertex list and entry value.
pub type FSimplex = (Vec<usize>, f64);

fn faces(s: &[usize]) -> Vec<Vec<usize>> {
    (0..s.len())
        .map(|skip| {
            s.iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, v)| *v)
                .collect()
        })
        .collect()
}

/// Chain-level view of a whole complex with a global simplex index.
struct Chains {
    index: HashMap<Vec<usize>, usize>,
    simplices: Vec<FSimplex>,
}

impl Chains {
    fn new(complex: &[FSimplex]) -> Self {
        let mut simplices: Vec<FSimplex> = complex
            .iter()
            .map(|(v, f)| {
                let mut v = v.clone();
                v.sort_unstable();
                (v, *f)
            })
            .collect();
        simplices.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, (v, _))| (v.clone(), i))
            .collect();
        Chains { index, simplices }
    }

    fn len(&self) -> usize {
        self.simplices.len()
    }

    fn boundary(&self, s: &[usize]) -> BitVec {
        let mut b = BitVec::zeros(self.len());
        if s.len() > 1 {
            for f in faces(s) {
                b.set(self.index[&f]);
            }
        }
        b
    }

    fn of_dim_upto(&self, dim: usize, r: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|i| self.simplices[*i].0.len() == dim + 1 && self.simplices[*i].1 <= r)
            .collect()
    }

    /// Cycle space `Z_k(K_r)` as global chain vectors.
    fn cycles(&self, k: usize, r: f64) -> Vec<BitVec> {
        let cells = self.of_dim_upto(k, r);
        let images: Vec<BitVec> = cells.iter().map(|i| self.boundary(&self.simplices[*i].0)).collect();
        gf2_kernel(&images)
            .into_iter()
            .map(|combo| {
                let mut chain = BitVec::zeros(self.len());
                for (local, global) in cells.iter().enumerate() {
                    if combo.get(local) {
                        chain.set(*global);
                    }
                }
                chain
            })
            .collect()
    }

    /// Spanning set of the boundary space `B_k(K_r)`.
    fn boundaries(&self, k: usize, r: f64) -> Vec<BitVec> {
        self.of_dim_upto(k + 1, r)
            .iter()
            .map(|i| self.boundary(&self.simplices[*i].0))
            .collect()
    }

    /// `dim im(H_k(K_a) → H_k(K_b))` for `a ≤ b`.
    fn persistent_betti(&self, k: usize, a: f64, b: f64) -> usize {
        let z = self.cycles(k, a);
        let bd = self.boundaries(k, b);
        let both: Vec<BitVec> = z.iter().chain(&bd).cloned().collect();
        gf2_rank(&both) - gf2_rank(&bd)
    }
}

/// Betti numbers of the subcomplex with values ≤ `r`, for `k = 0..=max_dim`.
pub fn betti_numbers(complex: &[FSimplex], r: f64, max_dim: usize) -> Vec<usize> {
    let chains = Chains::new(complex);
    (0..=max_dim).map(|k| chains.persistent_betti(k, r, r)).collect()
}

/// `dim im(H_k(K_a) → H_k(K_b))`.
pub fn persistent_betti(complex: &[FSimplex], k: usize, a: f64, b: f64) -> usize {
    Chains::new(complex).persistent_betti(k, a, b)
}

/// Persistence bars `(dim, birth, death)` recovered by inclusion–exclusion
/// over persistent Betti numbers at the distinct filtration values. Bars are
/// sorted by dimension, birth, death; `death` is `f64::INFINITY` when the
/// class never dies.
pub fn persistence_bars(complex: &[FSimplex], max_dim: usize) -> Vec<(usize, f64, f64)> {
    let chains = Chains::new(complex);
    let mut values: Vec<f64> = complex.iter().map(|s| s.1).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let m = values.len();
    // beta(i, j) with 1-based indices into `values`; index 0 is the empty complex.
    let beta = |k: usize, i: usize, j: usize| -> i64 {
        if i == 0 {
            0
        } else {
            chains.persistent_betti(k, values[i - 1], values[j - 1]) as i64
        }
    };
    let mut bars = Vec::new();
    for k in 0..=max_dim {
        for i in 1..=m {
            for j in i + 1..=m {
                let mu = beta(k, i, j - 1) - beta(k, i, j) - beta(k, i - 1, j - 1) + beta(k, i - 1, j);
                assert!(mu >= 0, "negative multiplicity");
                for _ in 0..mu {
                    bars.push((k, values[i - 1], values[j - 1]));
                }
            }
            let mu_inf = beta(k, i, m) - beta(k, i - 1, m);
            assert!(mu_inf >= 0, "negative multiplicity");
            for _ in 0..mu_inf {
                bars.push((k, values[i - 1], f64::INFINITY));
            }
        }
    }
    bars.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    bars
}

/// Every simplex of dimension ≤ `max_dim` on the points of a distance
/// matrix, valued at its diameter. Enumerates vertex subsets by bitmask.
pub fn rips_by_subsets(dist: &[Vec<f64>], max_dim: usize) -> Vec<FSimplex> {
    let n = dist.len();
    assert!(n < 20, "subset enumeration is for tiny inputs");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let verts: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        if verts.len() > max_dim + 1 {
            continue;
        }
        let mut diam: f64 = 0.0;
        for a in &verts {
            for b in &verts {
                diam = diam.max(dist[*a][*b]);
            }
        }
        out.push((verts, diam));
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Bottleneck distance between finite diagrams by enumerating every
/// bijection of the diagonal-augmented point sets. Tiny inputs only.
pub fn brute_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (n, m) = (a.len(), b.len());
    assert!(n + m <= 8, "brute force is for tiny diagrams");
    // Left: a then diagonal slots; right: b then diagonal slots.
    let cost = |i: usize, j: usize| -> f64 {
        match (i < n, j < m) {
            (true, true) => (a[i].0 - b[j].0).abs().max((a[i].1 - b[j].1).abs()),
            (true, false) => (a[i].1 - a[i].0) / 2.0,
            (false, true) => (b[j].1 - b[j].0) / 2.0,
            (false, false) => 0.0,
        }
    };
    permutations(n + m)
        .iter()
        .map(|p| (0..n + m).map(|i| cost(i, p[i])).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Fidelity `(Tr√(√ρ σ √ρ))²` of two qubit states given by Bloch vectors.
pub fn qubit_fidelity(r: [f64; 3], s: [f64; 3]) -> f64 {
    let dot: f64 = r.iter().zip(&s).map(|(a, b)| a * b).sum();
    let nr: f64 = r.iter().map(|a| a * a).sum();
    let ns: f64 = s.iter().map(|a| a * a).sum();
    0.5 * (1.0 + dot + ((1.0 - nr).max(0.0) * (1.0 - ns).max(0.0)).sqrt())
}

/// Trace norm `‖ρ − σ‖₁ = |r − s|` for qubit states.
pub fn qubit_trace_norm(r: [f64; 3], s: [f64; 3]) -> f64 {
    r.iter().zip(&s).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// Hilbert–Schmidt norm `‖ρ − σ‖_F = |r − s|/√2` for qubit states.
pub fn qubit_hs_norm(r: [f64; 3], s: [f64; 3]) -> f64 {
    qubit_trace_norm(r, s) / 2f64.sqrt()
}

/// Bloch vector of `R_X(θ)|0⟩`.
pub fn rx_bloch(theta: f64) -> [f64; 3] {
    [0.0, -theta.sin(), theta.cos()]
}

/// Bloch vector after `R_Y(θ)` acts on a state with Bloch vector `b`.
pub fn ry_rotate(b: [f64; 3], theta: f64) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    [c * b[0] + s * b[2], b[1], -s * b[0] + c * b[2]]
}

/// Bloch vector after `R_X(θ)` acts on a state with Bloch vector `b`.
pub fn rx_rotate(b: [f64; 3], theta: f64) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    [b[0], c * b[1] - s * b[2], s * b[1] + c * b[2]]
}

/// Bloch vector of the re-uploading state, tracked as SO(3) rotations.
pub fn reupload_bloch(x: f64, theta: &[f64; 4]) -> [f64; 3] {
    let mut b = rx_bloch(x);
    for t in theta {
        b = rx_rotate(ry_rotate(b, *t), x);
    }
    b
}
