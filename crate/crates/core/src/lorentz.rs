//! Minkowski patches and the Λ-cone order `x ⪯_Λ y ⇔ y − x ∈ C°(Λ)`,
//! where `C(Λ) = {v : v⁰ ≥ 0, v² ≥ Λ²}` and `C°(Λ) = C(Λ) ∪ {0}`.

use std::io::{Read, Write};

use fixedbitset::FixedBitSet;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order_core::{validate_order, FiniteOrder, OrderError, Relation};

#[derive(Debug, Error)]
pub enum LorentzError {
    #[error("spacetime dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    Mismatch(usize, usize),
    #[error("boost axis {axis} is not a spatial index below {dim}")]
    Axis { axis: usize, dim: usize },
    #[error("Λ must be {0}")]
    Lambda(&'static str),
    #[error("at least {needed} samples required, got {got}")]
    Samples { needed: usize, got: usize },
    #[error("bad bounding box: {0}")]
    BoundingBox(String),
    #[error("bad distance table: {0}")]
    Table(String),
    #[error("relation is not an order: {0}")]
    NotAnOrder(crate::order_core::OrderReport),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// A spacetime point, coordinate 0 is time (`c = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MinkowskiPoint {
    pub coords: Vec<f64>,
}

impl MinkowskiPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, LorentzError> {
        if coords.len() < 2 {
            return Err(LorentzError::Dimension(coords.len()));
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `(Δt, Σ Δxᵢ²)` for `y − x`, summed in the same order as
/// [`crate::order_core::euclidean_distance`] so both share rounding.
fn split_interval(x: &[f64], y: &[f64]) -> (f64, f64) {
    let dt = y[0] - x[0];
    let tail: f64 = x[1..].iter().zip(&y[1..]).map(|(a, b)| (a - b) * (a - b)).sum();
    (dt, tail)
}

/// `v₀² − Σ_{i≥1} vᵢ²`.
pub fn minkowski_sq(v: &[f64]) -> f64 {
    let tail: f64 = v.iter().skip(1).map(|c| c * c).sum();
    v[0] * v[0] - tail
}

/// Proper time `√max(0, (y − x)²)`; zero for spacelike separations.
pub fn lorentz_distance(x: &MinkowskiPoint, y: &MinkowskiPoint) -> Result<f64, LorentzError> {
    if x.dim() != y.dim() {
        return Err(LorentzError::Mismatch(x.dim(), y.dim()));
    }
    let (dt, tail) = split_interval(&x.coords, &y.coords);
    Ok((dt * dt - tail).max(0.0).sqrt())
}

/// `v ∈ C(Λ)`, or `v ∈ C°(Λ)` when `include_zero`.
pub fn cone_membership(v: &[f64], lam: f64, include_zero: bool) -> bool {
    if v.iter().all(|&c| c == 0.0) {
        return include_zero || lam == 0.0;
    }
    v[0] >= 0.0 && minkowski_sq(v) >= lam * lam
}

fn strictly_in_cone(x: &[f64], y: &[f64], lam_sq: f64) -> bool {
    let (dt, tail) = split_interval(x, y);
    dt >= 0.0 && dt * dt - tail >= lam_sq
}

/// A finite set of events inside a coordinate box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorentzPatch {
    points: Vec<MinkowskiPoint>,
    bounding_box: Vec<(f64, f64)>,
}

impl LorentzPatch {
    /// Checks that every point is inside `bounding_box`.
    pub fn new(points: Vec<MinkowskiPoint>, bounding_box: Vec<(f64, f64)>) -> Result<Self, LorentzError> {
        if bounding_box.len() < 2 {
            return Err(LorentzError::Dimension(bounding_box.len()));
        }
        if bounding_box.iter().any(|(lo, hi)| !(lo <= hi)) {
            return Err(LorentzError::BoundingBox("lower bound above upper bound".into()));
        }
        for p in &points {
            if p.dim() != bounding_box.len() {
                return Err(LorentzError::Mismatch(p.dim(), bounding_box.len()));
            }
            if p.coords.iter().zip(&bounding_box).any(|(c, (lo, hi))| c < lo || c > hi) {
                return Err(LorentzError::BoundingBox(format!("point {:?} outside the box", p.coords)));
            }
        }
        Ok(Self { points, bounding_box })
    }

    /// Uses the tight bounding box of the points.
    pub fn from_points(points: Vec<MinkowskiPoint>) -> Result<Self, LorentzError> {
        let dim = points.first().map(MinkowskiPoint::dim).unwrap_or(2);
        let mut bbox = vec![(f64::INFINITY, f64::NEG_INFINITY); dim];
        for p in &points {
            if p.dim() != dim {
                return Err(LorentzError::Mismatch(p.dim(), dim));
            }
            for (b, &c) in bbox.iter_mut().zip(&p.coords) {
                b.0 = b.0.min(c);
                b.1 = b.1.max(c);
            }
        }
        if points.is_empty() {
            bbox = vec![(0.0, 0.0); dim];
        }
        Self::new(points, bbox)
    }

    /// `count` i.i.d. uniform points in the box.
    pub fn sprinkle<R: Rng + ?Sized>(
        count: usize,
        bounding_box: &[(f64, f64)],
        rng: &mut R,
    ) -> Result<Self, LorentzError> {
        let points = (0..count)
            .map(|_| MinkowskiPoint {
                coords: bounding_box
                    .iter()
                    .map(|&(lo, hi)| if hi > lo { rng.gen_range(lo..hi) } else { lo })
                    .collect(),
            })
            .collect();
        Self::new(points, bounding_box.to_vec())
    }

    pub fn points(&self) -> &[MinkowskiPoint] {
        &self.points
    }

    pub fn bounding_box(&self) -> &[(f64, f64)] {
        &self.bounding_box
    }

    pub fn dim(&self) -> usize {
        self.bounding_box.len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn volume(&self) -> f64 {
        self.bounding_box.iter().map(|(lo, hi)| hi - lo).product()
    }

    /// Points per unit coordinate volume.
    pub fn density(&self) -> f64 {
        self.len() as f64 / self.volume()
    }

    pub fn coordinates(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.coords.clone()).collect()
    }

    /// Reads one point per row, column 0 being time. Lines starting with
    /// `#` are skipped; a header row is detected by a non-numeric first cell.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, LorentzError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut points = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(coords) => points.push(MinkowskiPoint::new(coords)?),
                Err(_) if i == 0 => continue,
                Err(e) => return Err(LorentzError::BoundingBox(format!("row {i}: {e}"))),
            }
        }
        Self::from_points(points)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), LorentzError> {
        let mut wtr = csv::Writer::from_writer(writer);
        let header: Vec<String> = (0..self.dim())
            .map(|i| if i == 0 { "t".to_string() } else { format!("x{i}") })
            .collect();
        wtr.write_record(&header)?;
        for p in &self.points {
            wtr.write_record(p.coords.iter().map(|c| format!("{c:.17e}")))?;
        }
        wtr.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let points: Vec<MinkowskiPoint> = self
            .points
            .iter()
            .map(|p| MinkowskiPoint { coords: f(&p.coords) })
            .collect();
        Self::from_points(points).expect("same dimension")
    }

    /// Shifts every point by `offset`.
    pub fn translate(&self, offset: &[f64]) -> Result<Self, LorentzError> {
        if offset.len() != self.dim() {
            return Err(LorentzError::Mismatch(offset.len(), self.dim()));
        }
        Ok(self.map_points(|c| c.iter().zip(offset).map(|(a, b)| a + b).collect()))
    }
}

/// Orthochronous boost along spatial `axis`:
/// `t′ = cosh η t − sinh η x_a`, `x_a′ = −sinh η t + cosh η x_a`.
pub fn boost_transform(patch: &LorentzPatch, rapidity: f64, axis: usize) -> Result<LorentzPatch, LorentzError> {
    if axis == 0 || axis >= patch.dim() {
        return Err(LorentzError::Axis { axis, dim: patch.dim() });
    }
    let (sh, ch) = (rapidity.sinh(), rapidity.cosh());
    Ok(patch.map_points(|c| {
        let mut out = c.to_vec();
        out[0] = ch * c[0] - sh * c[axis];
        out[axis] = -sh * c[0] + ch * c[axis];
        out
    }))
}

/// Same boost applied to a single vector.
pub fn boost_vector(v: &[f64], rapidity: f64, axis: usize) -> Vec<f64> {
    let (sh, ch) = (rapidity.sinh(), rapidity.cosh());
    let mut out = v.to_vec();
    out[0] = ch * v[0] - sh * v[axis];
    out[axis] = -sh * v[0] + ch * v[axis];
    out
}

fn relation_from_rows(n: usize, row: impl Fn(usize) -> FixedBitSet + Sync + Send) -> Relation {
    let rows: Vec<FixedBitSet> = (0..n).into_par_iter().map(row).collect();
    Relation::from_rows(n, rows).expect("rows sized to n")
}

/// Strict relation `y − x ∈ C(Λ)` without validation.
pub fn lambda_relation(patch: &LorentzPatch, lam: f64) -> Result<Relation, LorentzError> {
    if !(lam > 0.0) {
        return Err(LorentzError::Lambda("positive"));
    }
    let lam_sq = lam * lam;
    let pts = &patch.points;
    Ok(relation_from_rows(pts.len(), |i| {
        let mut row = FixedBitSet::with_capacity(pts.len());
        for (j, q) in pts.iter().enumerate() {
            if i != j && strictly_in_cone(&pts[i].coords, &q.coords, lam_sq) {
                row.insert(j);
            }
        }
        row
    }))
}

/// `⪯_Λ` on the patch, validated as a strict order.
pub fn lambda_order(patch: &LorentzPatch, lam: f64) -> Result<FiniteOrder, LorentzError> {
    let rel = lambda_relation(patch, lam)?;
    let report = validate_order(&rel);
    if !report.is_valid() {
        return Err(LorentzError::NotAnOrder(report));
    }
    Ok(FiniteOrder::new(rel)?)
}

/// Pairs whose defining inequality `Δt² − |Δx|² ≥ Λ²` holds or fails by
/// less than `tol`; these may legitimately flip under rounding.
pub fn near_boundary(patch: &LorentzPatch, lam: f64, i: usize, j: usize, tol: f64) -> bool {
    let (dt, tail) = split_interval(&patch.points[i].coords, &patch.points[j].coords);
    let s = dt * dt - tail - lam * lam;
    s.abs() <= tol * (dt * dt + tail).max(1.0) || dt.abs() <= tol
}

/// A curved or otherwise user-specified spacetime: a global time function
/// and a table of Lorentzian distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpacetime {
    pub time: Vec<f64>,
    pub distance: Vec<Vec<f64>>,
}

impl TableSpacetime {
    pub fn new(time: Vec<f64>, distance: Vec<Vec<f64>>) -> Result<Self, LorentzError> {
        let n = time.len();
        if distance.len() != n || distance.iter().any(|r| r.len() != n) {
            return Err(LorentzError::Table(format!("expected a {n}×{n} table")));
        }
        for i in 0..n {
            if distance[i][i] != 0.0 {
                return Err(LorentzError::Table(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let d = distance[i][j];
                if !(d >= 0.0) || d != distance[j][i] {
                    return Err(LorentzError::Table(format!("entry ({i},{j}) negative or asymmetric")));
                }
            }
        }
        Ok(Self { time, distance })
    }

    /// From flat points, using the Minkowski distance.
    pub fn from_patch(patch: &LorentzPatch) -> Self {
        let pts = patch.points();
        let distance = pts
            .iter()
            .map(|x| pts.iter().map(|y| lorentz_distance(x, y).expect("same dim")).collect())
            .collect();
        Self {
            time: pts.iter().map(|p| p.coords[0]).collect(),
            distance,
        }
    }

    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// `x ≺ y ⇔ t(x) ≤ t(y) and d(x, y) ≥ Λ`; fails with the validation
    /// report when the table violates the reverse triangle inequality.
    pub fn lambda_order(&self, lam: f64) -> Result<FiniteOrder, LorentzError> {
        if !(lam > 0.0) {
            return Err(LorentzError::Lambda("positive"));
        }
        let n = self.len();
        let rel = relation_from_rows(n, |i| {
            let mut row = FixedBitSet::with_capacity(n);
            for j in 0..n {
                if i != j && self.time[i] <= self.time[j] && self.distance[i][j] >= lam {
                    row.insert(j);
                }
            }
            row
        });
        let report = validate_order(&rel);
        if !report.is_valid() {
            return Err(LorentzError::NotAnOrder(report));
        }
        Ok(FiniteOrder::new(rel)?)
    }
}

/// Outcome of a randomized `C(Λ₁) + C(Λ₂) ⊆ C(Λ)` search.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeSumVerdict {
    Holds { samples: usize },
    CounterexampleFound { v1: Vec<f64>, v2: Vec<f64> },
}

impl ConeSumVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ConeSumVerdict::Holds { .. })
    }
}

/// Minimum sample count for [`cone_sum_check`].
pub const CONE_SUM_MIN_SAMPLES: usize = 1000;

fn random_cone_vector<R: Rng + ?Sized>(rng: &mut R, lam: f64, dim: usize) -> Vec<f64> {
    // Proper time on or above Λ, boosted by a random rapidity in a random direction.
    let tau = if rng.gen_bool(0.25) {
        lam
    } else {
        lam + <Exp1 as Distribution<f64>>::sample(&Exp1, rng) * lam.max(0.5)
    };
    let eta: f64 = rng.gen_range(0.0..3.0);
    let mut dir: Vec<f64> = (1..dim).map(|_| StandardNormal.sample(rng)).collect();
    let n = dir.iter().map(|c: &f64| c * c).sum::<f64>().sqrt();
    if n > 0.0 {
        dir.iter_mut().for_each(|c| *c /= n);
    }
    let mut v = vec![tau * eta.cosh()];
    v.extend(dir.iter().map(|c| tau * eta.sinh() * c));
    v
}

/// Searches for `v₁ ∈ C(Λ₁)`, `v₂ ∈ C(Λ₂)` with `v₁ + v₂ ∉ C(Λ)`.
///
/// When `Λ₁ + Λ₂ < Λ` the time-axis vectors `(Λᵢ, 0, …)` are tried first.
/// Sums within a relative `1e-9` of the boundary are not reported.
pub fn cone_sum_check<R: Rng + ?Sized>(
    l1: f64,
    l2: f64,
    lam: f64,
    dim: usize,
    samples: usize,
    rng: &mut R,
) -> Result<ConeSumVerdict, LorentzError> {
    if [l1, l2, lam].iter().any(|l| !(*l >= 0.0)) {
        return Err(LorentzError::Lambda("non-negative"));
    }
    if dim < 2 {
        return Err(LorentzError::Dimension(dim));
    }
    if samples < CONE_SUM_MIN_SAMPLES {
        return Err(LorentzError::Samples {
            needed: CONE_SUM_MIN_SAMPLES,
            got: samples,
        });
    }
    let axis = |l: f64| {
        let mut v = vec![0.0; dim];
        v[0] = l;
        v
    };
    let outside = |v: &[f64]| v[0] < 0.0 || minkowski_sq(v) < lam * lam * (1.0 - 1e-9) - 1e-12;
    if l1 + l2 < lam {
        let (v1, v2) = (axis(l1), axis(l2));
        let sum: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| a + b).collect();
        if outside(&sum) {
            return Ok(ConeSumVerdict::CounterexampleFound { v1, v2 });
        }
    }
    for _ in 0..samples {
        let v1 = random_cone_vector(rng, l1, dim);
        let v2 = random_cone_vector(rng, l2, dim);
        let sum: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| a + b).collect();
        if outside(&sum) {
            return Ok(ConeSumVerdict::CounterexampleFound { v1, v2 });
        }
    }
    Ok(ConeSumVerdict::Holds { samples })
}
