//! Derivative-free Nelder–Mead simplex minimization.

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    pub max_iters: usize,
    /// Stop once `max_i f(v_i) − min_i f(v_i) ≤ ftol` over the simplex.
    pub ftol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iters: 2000,
            ftol: 1e-9,
            initial_step: 0.5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best simplex value after each iteration; non-increasing.
    pub history: Vec<f64>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Minimizes `f` from `x0`. With `max_iters == 0` the start point is
/// returned untouched.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 1;
    let f0 = f(x0);
    if opts.max_iters == 0 || n == 0 {
        return NelderMeadResult {
            x: x0.to_vec(),
            f: f0,
            iterations: 0,
            evaluations,
            converged: false,
            history: Vec::new(),
        };
    }

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        let fv = f(&v);
        evaluations += 1;
        simplex.push((v, fv));
    }

    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        // Stable sort keeps earlier vertices first on ties.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if worst - best <= opts.ftol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }

        let reflected = affine(&centroid, &simplex[n].0, -REFLECT);
        let fr = f(&reflected);
        evaluations += 1;
        if fr < best {
            let expanded = affine(&centroid, &simplex[n].0, -EXPAND);
            let fe = f(&expanded);
            evaluations += 1;
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (target, ft) = if fr < worst {
                (reflected.clone(), fr)
            } else {
                (simplex[n].0.clone(), worst)
            };
            let contracted = affine(&centroid, &target, CONTRACT);
            let fc = f(&contracted);
            evaluations += 1;
            if fc < ft {
                simplex[n] = (contracted, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v = affine(&anchor, &vertex.0, SHRINK);
                    let fv = f(&v);
                    evaluations += 1;
                    *vertex = (v, fv);
                }
            }
        }
        let current_best = simplex.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        history.push(current_best);
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        f: fx,
        iterations,
        evaluations,
        converged,
        history,
    }
}
