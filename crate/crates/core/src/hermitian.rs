//! Small dense Hermitian matrices.
//!
//! Everything here is sized for the block algebras that show up in
//! practice (`n <= 16`): spectra come from cyclic complex Jacobi rotations,
//! and functional calculus is applied through the resulting eigenbasis.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance on `|a_ij - conj(a_ji)|` accepted at construction.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Tolerance on the squared norm of a pure state vector.
pub const NORM_TOL: f64 = 1e-12;
/// Largest dimension the Jacobi solver accepts.
pub const MAX_DIM: usize = 16;

const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HermitianError {
    #[error("matrix dimension must be at least 1")]
    EmptyDimension,
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    TooLarge(usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("entries ({i},{j}) and ({j},{i}) are not conjugate (deviation {deviation:e})")]
    NotHermitian { i: usize, j: usize, deviation: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state vector is not normalized (|xi|^2 = {0})")]
    NotNormalized(f64),
    #[error("state vector is zero")]
    ZeroVector,
    #[error("isotone function: {0}")]
    NotIsotone(String),
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

/// A dense complex Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds a matrix from row-major entries after checking conjugate
    /// symmetry; the stored value is the symmetrized `(H + H†)/2`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, HermitianError> {
        if dim == 0 {
            return Err(HermitianError::EmptyDimension);
        }
        if dim > MAX_DIM {
            return Err(HermitianError::TooLarge(dim));
        }
        if entries.len() != dim * dim {
            return Err(HermitianError::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for i in 0..dim {
            for j in i..dim {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i].conj();
                let deviation = (a - b).norm();
                if deviation > SYMMETRY_TOL {
                    return Err(HermitianError::NotHermitian { i, j, deviation });
                }
            }
        }
        let mut data = entries;
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(data[i * dim + i].re, 0.0);
            for j in i + 1..dim {
                let avg = (data[i * dim + j] + data[j * dim + i].conj()) * 0.5;
                data[i * dim + j] = avg;
                data[j * dim + i] = avg.conj();
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, HermitianError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(HermitianError::EntryCount {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(dim, entries)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self, HermitianError> {
        let dim = values.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &v) in values.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(v, 0.0);
        }
        Self::new(dim, entries)
    }

    /// `c` times the identity.
    pub fn scalar(dim: usize, c: f64) -> Result<Self, HermitianError> {
        Self::diagonal(&vec![c; dim])
    }

    pub fn identity(dim: usize) -> Result<Self, HermitianError> {
        Self::scalar(dim, 1.0)
    }

    /// Rank-one projector `ξ ξ†`.
    pub fn projector(state: &PureStateVector) -> Self {
        let n = state.dim();
        let a = state.amplitudes();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(a[i] * a[j].conj());
            }
        }
        Self { dim: n, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self, HermitianError> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HermitianError> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `self + c·1`.
    pub fn shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += c;
        }
        out
    }

    /// `U H U†` for a square complex matrix `U` given row-major.
    pub fn conjugate_by(&self, unitary: &[Complex64]) -> Result<Self, HermitianError> {
        let n = self.dim;
        if unitary.len() != n * n {
            return Err(HermitianError::EntryCount {
                expected: n * n,
                got: unitary.len(),
            });
        }
        let mut tmp = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += unitary[i * n + k] * self.data[k * n + j];
                }
                tmp[i * n + j] = acc;
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += tmp[i * n + k] * unitary[j * n + k].conj();
                }
                out[i * n + j] = acc;
            }
        }
        // Rounding can leave asymmetries slightly above the strict tolerance
        // for large entries, so symmetrize directly.
        let mut h = Self { dim: n, data: out };
        h.symmetrize();
        Ok(h)
    }

    fn symmetrize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i].im = 0.0;
            for j in i + 1..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), HermitianError> {
        if self.dim != other.dim {
            return Err(HermitianError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Whether this is numerically a multiple of the identity.
    pub fn is_scalar(&self, tol: f64) -> bool {
        let c = self.get(0, 0).re;
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let target = if i == j { c } else { 0.0 };
                (self.get(i, j) - target).norm() <= tol
            })
        })
    }

    pub fn eigen(&self) -> Eigen {
        jacobi_eigen(self)
    }

    pub fn to_json(&self) -> MatrixJson {
        let n = self.dim;
        MatrixJson {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| self.get(i, j).re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| self.get(i, j).im).collect()).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self, HermitianError> {
        let n = json.dim;
        if json.re.len() != n || json.im.len() != n {
            return Err(HermitianError::Json(format!("expected {n} rows in re and im")));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (re_row, im_row) in json.re.iter().zip(&json.im) {
            if re_row.len() != n || im_row.len() != n {
                return Err(HermitianError::Json(format!("expected {n} columns")));
            }
            entries.extend(re_row.iter().zip(im_row).map(|(&r, &i)| Complex64::new(r, i)));
        }
        Self::new(n, entries)
    }
}

/// Wire format `{"dim": n, "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl Serialize for HermitianMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = MatrixJson::deserialize(deserializer)?;
        Self::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Eigendecomposition `H = Q diag(values) Q†` with ascending values.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns of a row-major `n × n` matrix.
    pub vectors: Vec<Complex64>,
    pub sweeps: usize,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Column `k` of `Q`.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).map(|i| self.vectors[i * n + k]).collect()
    }

    /// `Q diag(f(λ)) Q†`.
    pub fn recompose_with(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let q = &self.vectors;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += q[i * n + k] * mapped[k] * q[j * n + k].conj();
                }
                data[i * n + j] = acc;
            }
        }
        let mut h = HermitianMatrix { dim: n, data };
        h.symmetrize();
        h
    }
}

fn jacobi_eigen(h: &HermitianMatrix) -> Eigen {
    let n = h.dim;
    let mut a = h.data.clone();
    let mut q = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        q[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let scale = h.frobenius_norm().max(1.0);
    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_OFF_TOL * scale {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for r in p + 1..n {
                rotate(&mut a, &mut q, n, p, r);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].re.total_cmp(&a[y * n + y].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + col] = q[i * n + k];
        }
    }
    Eigen {
        values,
        vectors,
        sweeps,
    }
}

/// One complex Jacobi rotation annihilating `a[p][r]`.
///
/// The block is first made real by the phase `diag(1, e^{-iφ})`, then
/// rotated with the classical real Jacobi angle.
fn rotate(a: &mut [Complex64], q: &mut [Complex64], n: usize, p: usize, r: usize) {
    let g = a[p * n + r];
    let mag = g.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = g / mag;
    let app = a[p * n + p].re;
    let arr = a[r * n + r].re;
    let theta = (arr - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // W = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on the (p, r) block.
    let w_pp = Complex64::new(c, 0.0);
    let w_pr = Complex64::new(s, 0.0);
    let w_rp = -phase.conj() * s;
    let w_rr = phase.conj() * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akr = a[k * n + r];
        a[k * n + p] = akp * w_pp + akr * w_rp;
        a[k * n + r] = akp * w_pr + akr * w_rr;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let ark = a[r * n + k];
        a[p * n + k] = w_pp.conj() * apk + w_rp.conj() * ark;
        a[r * n + k] = w_pr.conj() * apk + w_rr.conj() * ark;
    }
    a[p * n + r] = Complex64::new(0.0, 0.0);
    a[r * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[r * n + r].im = 0.0;

    for k in 0..n {
        let qkp = q[k * n + p];
        let qkr = q[k * n + r];
        q[k * n + p] = qkp * w_pp + qkr * w_rp;
        q[k * n + r] = qkp * w_pr + qkr * w_rr;
    }
}

/// Eigenvalues in ascending order.
pub fn spectrum(h: &HermitianMatrix) -> Vec<f64> {
    h.eigen().values
}

/// `(min σ(H), max σ(H))`.
pub fn spec_bounds(h: &HermitianMatrix) -> (f64, f64) {
    let values = spectrum(h);
    (values[0], values[values.len() - 1])
}

/// A continuous, piecewise-linear, non-decreasing function on ℝ.
///
/// Between breakpoints the function interpolates linearly; outside it is
/// extended with the given (non-negative) end slopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotoneFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    left_slope: f64,
    right_slope: f64,
}

impl IsotoneFunction {
    pub fn new(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        left_slope: f64,
        right_slope: f64,
    ) -> Result<Self, HermitianError> {
        if breakpoints.is_empty() {
            return Err(HermitianError::NotIsotone("no breakpoints".into()));
        }
        if breakpoints.len() != values.len() {
            return Err(HermitianError::NotIsotone(
                "breakpoints and values differ in length".into(),
            ));
        }
        if breakpoints.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(HermitianError::NotIsotone("non-finite knot".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HermitianError::NotIsotone(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(HermitianError::NotIsotone("values decrease".into()));
        }
        if !(left_slope >= 0.0 && right_slope >= 0.0) {
            return Err(HermitianError::NotIsotone("negative end slope".into()));
        }
        Ok(Self {
            breakpoints,
            values,
            left_slope,
            right_slope,
        })
    }

    pub fn identity() -> Self {
        Self::affine(1.0, 0.0).expect("unit slope is isotone")
    }

    /// `t ↦ slope·t + intercept`, rejected when `slope < 0`.
    pub fn affine(slope: f64, intercept: f64) -> Result<Self, HermitianError> {
        Self::new(vec![0.0], vec![intercept], slope, slope)
    }

    /// `t ↦ max(t, floor)`.
    pub fn clip_below(floor: f64) -> Self {
        Self::new(vec![floor], vec![floor], 0.0, 1.0).expect("clip is isotone")
    }

    pub fn eval(&self, t: f64) -> f64 {
        let b = &self.breakpoints;
        let v = &self.values;
        let last = b.len() - 1;
        if t <= b[0] {
            return v[0] + self.left_slope * (t - b[0]);
        }
        if t >= b[last] {
            return v[last] + self.right_slope * (t - b[last]);
        }
        let k = b.partition_point(|&x| x <= t) - 1;
        let w = (t - b[k]) / (b[k + 1] - b[k]);
        v[k] + w * (v[k + 1] - v[k])
    }

    /// A random isotone function with `knots` breakpoints spread over `span`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, knots: usize, span: (f64, f64)) -> Self {
        let knots = knots.max(1);
        let mut breakpoints: Vec<f64> = (0..knots).map(|_| rng.gen_range(span.0..span.1)).collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        let mut values = Vec::with_capacity(breakpoints.len());
        let mut acc: f64 = rng.gen_range(-2.0..2.0);
        for _ in 0..breakpoints.len() {
            values.push(acc);
            // Occasional flat pieces.
            if rng.gen_bool(0.7) {
                acc += rng.gen_range(0.0..2.0);
            }
        }
        let left = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..2.0) };
        let right = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..2.0) };
        Self::new(breakpoints, values, left, right).expect("constructed isotone")
    }
}

/// `f(H)` through the spectral decomposition of `H`.
pub fn apply_isotone(h: &HermitianMatrix, f: &IsotoneFunction) -> HermitianMatrix {
    h.eigen().recompose_with(|l| f.eval(l))
}

/// A unit vector in `ℂⁿ` representing a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: Vec<Complex64>,
}

impl PureStateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, HermitianError> {
        if amplitudes.is_empty() {
            return Err(HermitianError::EmptyDimension);
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(HermitianError::NotNormalized(norm2));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self, HermitianError> {
        if amplitudes.is_empty() {
            return Err(HermitianError::EmptyDimension);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(HermitianError::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Haar-random pure state.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        loop {
            let amplitudes: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(s) = Self::normalized(amplitudes) {
                return s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|⟨self, other⟩|²`; equals 1 exactly when the two rays coincide.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// `ξ† F ξ`.
pub fn pure_state_eval(f: &HermitianMatrix, xi: &PureStateVector) -> Result<f64, HermitianError> {
    if f.dim() != xi.dim() {
        return Err(HermitianError::DimensionMismatch {
            left: f.dim(),
            right: xi.dim(),
        });
    }
    let n = f.dim();
    let a = xi.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += f.get(i, j) * a[j];
        }
        acc += a[i].conj() * row;
    }
    Ok(acc.re)
}

/// Random Hermitian matrix with i.i.d. Gaussian entries of the given scale.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> HermitianMatrix {
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        let d: f64 = rng.sample(StandardNormal);
        data[i * dim + i] = Complex64::new(d * scale, 0.0);
        for j in i + 1..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(re, im) * (scale / std::f64::consts::SQRT_2);
            data[i * dim + j] = z;
            data[j * dim + i] = z.conj();
        }
    }
    HermitianMatrix { dim, data }
}

/// Random unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    random_hermitian(rng, dim, 1.0).eigen().vectors
}
