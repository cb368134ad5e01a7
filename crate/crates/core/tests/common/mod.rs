//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own eigen-solver, closure or cone code.
#![allow(dead_code)]

use isocone_lab::hermitian::HermitianMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Number of eigenvalues below `sigma`, by Sylvester inertia of the
/// LDL† pivots of `H − σ1` (no pivoting; exact zero pivots are nudged).
pub fn count_below(h: &HermitianMatrix, sigma: f64) -> usize {
    let n = h.dim();
    let mut a: Vec<Complex64> = h.entries().to_vec();
    for i in 0..n {
        a[i * n + i] -= sigma;
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut d = a[k * n + k].re;
        if d == 0.0 {
            d = -f64::EPSILON * (1.0 + sigma.abs());
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let factor = a[i * n + k] / d;
            for j in k + 1..n {
                let sub = factor * a[k * n + j];
                a[i * n + j] -= sub;
            }
        }
    }
    negatives
}

/// The `k`-th smallest eigenvalue (0-based) by bisection on [`count_below`].
pub fn eigenvalue(h: &HermitianMatrix, k: usize) -> f64 {
    let bound = h.frobenius_norm() + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(h, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn max_eig(h: &HermitianMatrix) -> f64 {
    eigenvalue(h, h.dim() - 1)
}

pub fn min_eig(h: &HermitianMatrix) -> f64 {
    eigenvalue(h, 0)
}

/// Boolean Floyd–Warshall on an adjacency matrix.
pub fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut r = adj.to_vec();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Random DAG on `n` vertices: edges follow a random permutation.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((perm[i], perm[j]));
            }
        }
    }
    edges
}

/// `y − x` lies in the future cone cut at proper time `lam > 0`.
pub fn in_lambda_cone(x: &[f64], y: &[f64], lam: f64) -> bool {
    let dt = y[0] - x[0];
    let space: f64 = x[1..].iter().zip(&y[1..]).map(|(a, b)| (b - a) * (b - a)).sum();
    dt > 0.0 && dt * dt - space >= lam * lam
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}

/// Latitude-longitude points of the sphere at `step_deg`.
pub fn lat_long_grid(step_deg: f64) -> Vec<[f64; 3]> {
    let rows = (180.0 / step_deg).round() as usize;
    let cols = (360.0 / step_deg).round() as usize;
    let mut out = vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
    for i in 1..rows {
        let theta = (i as f64 * step_deg).to_radians();
        for j in 0..cols {
            let phi = (j as f64 * step_deg).to_radians();
            out.push([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
        }
    }
    out
}

pub fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
