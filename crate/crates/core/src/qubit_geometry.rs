//! Bloch-sphere geometry for the `M₂(ℂ)` blocks.
//!
//! Pure states of a qubit are points of the unit sphere `S²` (the Bloch
//! sphere, rescaled from the Frobenius radius √2/2 by a constant factor).
//! A local isocone is described by a closed convex region `K ⊂ S²`, and
//! two states compare as `p ≤ q ⇔ d(x, p) ≥ d(x, q) for all x ∈ K`.
//!
//! Regions are intersections of closed hemispheres `⟨v, n⟩ ≥ c` (caps,
//! hemispheres and convex polygons), or the whole sphere.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermitian::{HermitianError, HermitianMatrix, PureStateVector};
use crate::order_core::Comparison;

pub type Vec3 = [f64; 3];

/// Slack accepted on `‖v‖ = 1`.
pub const UNIT_TOL: f64 = 1e-12;
/// Distance inequalities within this band count as satisfied.
pub const TIE_TOL: f64 = 1e-9;
/// Coarsest mesh accepted by [`qubit_order`], in degrees.
pub const MAX_MESH_DEG: f64 = 2.0;
/// Default Monte-Carlo sample count for [`cap_measure`].
pub const AREA_SAMPLES: usize = 1_000_000;

const FEASIBILITY_TOL: f64 = 1e-12;
const INTERIOR_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("expected a qubit (dimension 2), got dimension {0}")]
    NotQubit(usize),
    #[error("hemisphere offset {0} outside [-1, 1]")]
    BadOffset(f64),
    #[error("region has empty interior")]
    EmptyInterior,
    #[error("region is not geodesically convex (samples {0} and {1})")]
    NotConvex(usize, usize),
    #[error("samples {0} and {1} are antipodal; midpoint undefined")]
    AntipodalPair(usize, usize),
    #[error("mesh of {0}° is coarser than the {MAX_MESH_DEG}° limit")]
    MeshTooCoarse(f64),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("malformed cap JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &Vec3, y: &Vec3) -> Vec3 {
    [alpha * x[0] + y[0], alpha * x[1] + y[1], alpha * x[2] + y[2]]
}

fn scaled(alpha: f64, x: &Vec3) -> Vec3 {
    [alpha * x[0], alpha * x[1], alpha * x[2]]
}

/// Some unit vector orthogonal to `n`.
fn orthogonal_unit(n: &Vec3) -> Vec3 {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let c = cross(n, &helper);
    scaled(1.0 / norm(&c), &c)
}

/// A unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec3", into = "Vec3")]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    pub fn new(v: Vec3) -> Result<Self, GeometryError> {
        let n = norm(&v);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(GeometryError::NotUnit(n));
        }
        Ok(Self(v))
    }

    /// Normalizes any nonzero vector.
    pub fn from_vector(v: Vec3) -> Result<Self, GeometryError> {
        let n = norm(&v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(GeometryError::ZeroVector);
        }
        Ok(Self(scaled(1.0 / n, &v)))
    }

    /// From polar angle from +z and azimuth, in radians.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let (st, ct) = polar.sin_cos();
        let (sp, cp) = azimuth.sin_cos();
        Self([st * cp, st * sp, ct])
    }

    pub fn north() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn south() -> Self {
        Self([0.0, 0.0, -1.0])
    }

    pub fn coords(&self) -> &Vec3 {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.0, &other.0)
    }

    /// Uniform on the sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let r = (1.0 - z * z).max(0.0).sqrt();
        Self([r * phi.cos(), r * phi.sin(), z])
    }
}

impl TryFrom<Vec3> for SpherePoint {
    type Error = GeometryError;
    fn try_from(v: Vec3) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<SpherePoint> for Vec3 {
    fn from(p: SpherePoint) -> Self {
        p.0
    }
}

/// Great-circle distance on the unit sphere, in `[0, π]`.
pub fn geodesic_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    let c = cross(&p.0, &q.0);
    norm(&c).atan2(p.dot(q))
}

/// Bloch vector of a qubit pure state: `ξξ† = ½(1 + v·σ)`.
pub fn bloch_map(xi: &PureStateVector) -> Result<SpherePoint, GeometryError> {
    if xi.dim() != 2 {
        return Err(GeometryError::NotQubit(xi.dim()));
    }
    let a = xi.amplitudes()[0];
    let b = xi.amplitudes()[1];
    let off = a.conj() * b;
    let v = [2.0 * off.re, 2.0 * off.im, a.norm_sqr() - b.norm_sqr()];
    // Renormalize away the O(1e-16) drift from the amplitudes.
    SpherePoint::from_vector(v)
}

/// A unit vector whose Bloch vector is `p`.
pub fn state_from_bloch(p: &SpherePoint) -> PureStateVector {
    let [x, y, z] = p.0;
    let polar = z.clamp(-1.0, 1.0).acos();
    let azimuth = y.atan2(x);
    let amplitudes = vec![
        Complex64::new((polar / 2.0).cos(), 0.0),
        Complex64::from_polar((polar / 2.0).sin(), azimuth),
    ];
    PureStateVector::normalized(amplitudes).expect("unit amplitudes")
}

/// `½(1 + v·σ)`, the rank-one projector with Bloch vector `v`.
pub fn density_matrix(p: &SpherePoint) -> HermitianMatrix {
    traceless_plus_scalar(&scaled(0.5, &p.0), 0.5)
}

/// `s·1 + w·σ`.
pub fn traceless_plus_scalar(w: &Vec3, s: f64) -> HermitianMatrix {
    let entries = vec![
        Complex64::new(s + w[2], 0.0),
        Complex64::new(w[0], -w[1]),
        Complex64::new(w[0], w[1]),
        Complex64::new(s - w[2], 0.0),
    ];
    HermitianMatrix::new(2, entries).expect("hermitian by construction")
}

/// Splits a 2×2 Hermitian matrix as `s·1 + w·σ`, returning `(w, s)`.
pub fn pauli_decomposition(h: &HermitianMatrix) -> Result<(Vec3, f64), GeometryError> {
    if h.dim() != 2 {
        return Err(GeometryError::NotQubit(h.dim()));
    }
    let h00 = h.get(0, 0).re;
    let h11 = h.get(1, 1).re;
    let h01 = h.get(0, 1);
    Ok(([h01.re, -h01.im, (h00 - h11) / 2.0], (h00 + h11) / 2.0))
}

/// One closed hemisphere-like constraint `⟨v, normal⟩ ≥ offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hemisphere {
    pub normal: SpherePoint,
    pub offset: f64,
}

impl Hemisphere {
    pub fn new(normal: SpherePoint, offset: f64) -> Result<Self, GeometryError> {
        if !(-1.0..=1.0).contains(&offset) {
            return Err(GeometryError::BadOffset(offset));
        }
        Ok(Self { normal, offset })
    }

    fn slack(&self, v: &Vec3) -> f64 {
        dot(v, &self.normal.0) - self.offset
    }

    /// Nearest point of the boundary circle to `v`.
    fn circle_projection(&self, v: &Vec3) -> Vec3 {
        let n = &self.normal.0;
        let along = dot(v, n);
        let w = axpy(-along, n, v);
        let wn = norm(&w);
        let dir = if wn > 1e-15 { scaled(1.0 / wn, &w) } else { orthogonal_unit(n) };
        let r = (1.0 - self.offset * self.offset).max(0.0).sqrt();
        axpy(self.offset, n, &scaled(r, &dir))
    }
}

/// The sphere region of a qubit local isocone.
#[derive(Debug, Clone, PartialEq)]
pub enum CapRegion {
    WholeSphere,
    Hemispheres(Vec<Hemisphere>),
}

impl CapRegion {
    /// Validated intersection of closed hemispheres.
    pub fn intersection(hemispheres: Vec<Hemisphere>) -> Result<Self, GeometryError> {
        if hemispheres.is_empty() {
            return Ok(CapRegion::WholeSphere);
        }
        let region = CapRegion::Hemispheres(hemispheres);
        region.validate()?;
        Ok(region)
    }

    /// Polar cap of angular radius `radius` (radians) around `center`.
    pub fn cap(center: SpherePoint, radius: f64) -> Result<Self, GeometryError> {
        Self::intersection(vec![Hemisphere::new(center, radius.cos())?])
    }

    /// The closed hemisphere `⟨v, normal⟩ ≥ 0`.
    pub fn hemisphere(normal: SpherePoint) -> Self {
        CapRegion::Hemispheres(vec![Hemisphere { normal, offset: 0.0 }])
    }

    pub fn hemispheres(&self) -> &[Hemisphere] {
        match self {
            CapRegion::WholeSphere => &[],
            CapRegion::Hemispheres(h) => h,
        }
    }

    pub fn is_whole(&self) -> bool {
        matches!(self, CapRegion::WholeSphere)
    }

    fn validate(&self) -> Result<(), GeometryError> {
        let hs = self.hemispheres();
        if hs.is_empty() {
            return Ok(());
        }
        if self.interior_point().is_none() {
            return Err(GeometryError::EmptyInterior);
        }
        // All offsets ≥ 0 puts every piece inside a closed hemisphere and the
        // intersection is convex by construction; otherwise sample.
        if hs.iter().any(|h| h.offset < 0.0) {
            let mesh = CapMesh::build(self, 5.0);
            match is_geodesically_convex(mesh.points(), 6.0_f64.to_radians()) {
                Ok(Convexity::Convex) => {}
                Ok(Convexity::NotConvex { a, b }) => return Err(GeometryError::NotConvex(a, b)),
                Err(GeometryError::AntipodalPair(a, b)) => return Err(GeometryError::NotConvex(a, b)),
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    /// Minimum constraint slack at `v` (positive inside, `+∞` for the whole sphere).
    pub fn slack(&self, v: &SpherePoint) -> f64 {
        self.hemispheres()
            .iter()
            .map(|h| h.slack(&v.0))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, v: &SpherePoint, tol: f64) -> bool {
        self.slack(v) >= -tol
    }

    /// A point with strictly positive slack, if one is found.
    pub fn interior_point(&self) -> Option<SpherePoint> {
        let hs = self.hemispheres();
        if hs.is_empty() {
            return Some(SpherePoint::north());
        }
        let mut candidates: Vec<SpherePoint> = hs.iter().map(|h| h.normal).collect();
        let sum = hs.iter().fold([0.0; 3], |acc, h| axpy(1.0, &h.normal.0, &acc));
        candidates.extend(SpherePoint::from_vector(sum).ok());
        for (i, a) in hs.iter().enumerate() {
            for b in &hs[i + 1..] {
                candidates.extend(SpherePoint::from_vector(axpy(1.0, &a.normal.0, &b.normal.0)).ok());
            }
        }
        candidates.extend(fibonacci_sphere(20_000));
        candidates
            .into_iter()
            .map(|p| (self.slack(&p), p))
            .filter(|(s, _)| *s > INTERIOR_TOL)
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, p)| p)
    }

    /// Pairwise boundary-circle intersections lying in the region.
    pub fn vertices(&self) -> Vec<SpherePoint> {
        let hs = self.hemispheres();
        let mut out = Vec::new();
        for (i, a) in hs.iter().enumerate() {
            for b in &hs[i + 1..] {
                for v in circle_intersections(a, b) {
                    if let Ok(p) = SpherePoint::from_vector(v) {
                        if self.contains(&p, FEASIBILITY_TOL) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    /// Nearest point of the region to `v`.
    pub fn project(&self, v: &SpherePoint) -> SpherePoint {
        if self.contains(v, 0.0) {
            return *v;
        }
        let hs = self.hemispheres();
        let mut candidates: Vec<SpherePoint> = hs
            .iter()
            .filter_map(|h| SpherePoint::from_vector(h.circle_projection(&v.0)).ok())
            .filter(|p| self.contains(p, FEASIBILITY_TOL))
            .collect();
        candidates.extend(self.vertices());
        candidates
            .into_iter()
            .min_by(|a, b| geodesic_distance(v, a).total_cmp(&geodesic_distance(v, b)))
            .unwrap_or(*v)
    }

    /// Geodesic distance from `v` to the region.
    pub fn distance_to(&self, v: &SpherePoint) -> f64 {
        if self.contains(v, 0.0) {
            0.0
        } else {
            geodesic_distance(v, &self.project(v))
        }
    }

    /// Uniform random point of the region (rejection from the tightest cap).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SpherePoint {
        let tightest = self
            .hemispheres()
            .iter()
            .max_by(|a, b| a.offset.total_cmp(&b.offset))
            .copied();
        loop {
            let p = match tightest {
                None => SpherePoint::random(rng),
                Some(h) => {
                    let z: f64 = rng.gen_range(h.offset..=1.0);
                    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let e1 = orthogonal_unit(&h.normal.0);
                    let e2 = cross(&h.normal.0, &e1);
                    let v = axpy(
                        z,
                        &h.normal.0,
                        &axpy(r * phi.cos(), &e1, &scaled(r * phi.sin(), &e2)),
                    );
                    match SpherePoint::from_vector(v) {
                        Ok(p) => p,
                        Err(_) => continue,
                    }
                }
            };
            if self.contains(&p, 0.0) {
                return p;
            }
        }
    }

    pub fn to_json(&self) -> CapJson {
        match self {
            CapRegion::WholeSphere => CapJson::Whole { whole: true },
            CapRegion::Hemispheres(hs) => CapJson::Hemispheres {
                hemispheres: hs
                    .iter()
                    .map(|h| HemisphereJson {
                        n: h.normal.0,
                        c: h.offset,
                    })
                    .collect(),
            },
        }
    }

    pub fn from_json(json: &CapJson) -> Result<Self, GeometryError> {
        match json {
            CapJson::Whole { whole: true } => Ok(CapRegion::WholeSphere),
            CapJson::Whole { whole: false } => {
                Err(GeometryError::Json("\"whole\": false is not a region".into()))
            }
            CapJson::Hemispheres { hemispheres } => {
                let hs = hemispheres
                    .iter()
                    .map(|h| Hemisphere::new(SpherePoint::from_vector(h.n)?, h.c))
                    .collect::<Result<Vec<_>, _>>()?;
                if hs.is_empty() {
                    return Err(GeometryError::Json("empty hemisphere list".into()));
                }
                Self::intersection(hs)
            }
        }
    }
}

/// `{"hemispheres": [{"n": [x, y, z], "c": r}]}` or `{"whole": true}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapJson {
    Whole { whole: bool },
    Hemispheres { hemispheres: Vec<HemisphereJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HemisphereJson {
    pub n: Vec3,
    pub c: f64,
}

impl Serialize for CapRegion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CapRegion {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = CapJson::deserialize(deserializer)?;
        Self::from_json(&json).map_err(serde::de::Error::custom)
    }
}

fn circle_intersections(a: &Hemisphere, b: &Hemisphere) -> Vec<Vec3> {
    let n1 = &a.normal.0;
    let n2 = &b.normal.0;
    let d = dot(n1, n2);
    let denom = 1.0 - d * d;
    if denom < 1e-14 {
        return Vec::new();
    }
    let alpha = (a.offset - b.offset * d) / denom;
    let beta = (b.offset - a.offset * d) / denom;
    let base = axpy(alpha, n1, &scaled(beta, n2));
    let rest = 1.0 - dot(&base, &base);
    if rest < 0.0 {
        return Vec::new();
    }
    let axis = cross(n1, n2);
    let gamma = (rest / dot(&axis, &axis)).sqrt();
    vec![axpy(gamma, &axis, &base), axpy(-gamma, &axis, &base)]
}

fn fibonacci_sphere(n: usize) -> impl Iterator<Item = SpherePoint> {
    let golden = PI * (3.0 - 5.0_f64.sqrt());
    (0..n).map(move |i| {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        SpherePoint([r * phi.cos(), r * phi.sin(), z])
    })
}

/// Latitude/longitude grid with spacing at most `step` radians along both
/// directions; every point of the sphere lies within `step` of a node.
pub fn sphere_grid(step: f64) -> Vec<SpherePoint> {
    let n_lat = (PI / step).ceil() as usize;
    let mut out = Vec::new();
    for i in 0..=n_lat {
        let lat = -PI / 2.0 + PI * i as f64 / n_lat as f64;
        let m = ((2.0 * PI * lat.cos() / step).ceil() as usize).max(1);
        for j in 0..m {
            let lon = 2.0 * PI * j as f64 / m as f64;
            let (sl, cl) = lat.sin_cos();
            out.push(SpherePoint([cl * lon.cos(), cl * lon.sin(), sl]));
        }
    }
    out
}

/// Test points of a region: grid nodes inside it, boundary circles sampled
/// at the mesh step, and polygon vertices.
#[derive(Debug, Clone)]
pub struct CapMesh {
    points: Vec<SpherePoint>,
    mesh_deg: f64,
}

impl CapMesh {
    pub fn build(region: &CapRegion, mesh_deg: f64) -> Self {
        let step = mesh_deg.to_radians();
        let mut points: Vec<SpherePoint> = sphere_grid(step)
            .into_iter()
            .filter(|p| region.contains(p, FEASIBILITY_TOL))
            .collect();
        for h in region.hemispheres() {
            let r = (1.0 - h.offset * h.offset).max(0.0).sqrt();
            let count = ((2.0 * PI * r / step).ceil() as usize).max(8);
            let e1 = orthogonal_unit(&h.normal.0);
            let e2 = cross(&h.normal.0, &e1);
            for j in 0..count {
                let phi = 2.0 * PI * j as f64 / count as f64;
                let v = axpy(
                    h.offset,
                    &h.normal.0,
                    &axpy(r * phi.cos(), &e1, &scaled(r * phi.sin(), &e2)),
                );
                if let Ok(p) = SpherePoint::from_vector(v) {
                    if region.contains(&p, FEASIBILITY_TOL) {
                        points.push(p);
                    }
                }
            }
        }
        points.extend(region.vertices());
        Self { points, mesh_deg }
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn mesh_deg(&self) -> f64 {
        self.mesh_deg
    }

    /// Upper bound on the distance from any region point to the mesh.
    pub fn covering_radius(&self) -> f64 {
        2.0 * self.mesh_deg.to_radians()
    }

    /// Restriction to the points inside `other`.
    pub fn restricted_to(&self, other: &CapRegion) -> Self {
        Self {
            points: self
                .points
                .iter()
                .filter(|p| other.contains(p, FEASIBILITY_TOL))
                .copied()
                .collect(),
            mesh_deg: self.mesh_deg,
        }
    }

    /// Evaluates the defining inequality on the mesh (plus `p`, `q` when
    /// they lie in `region`).
    pub fn decide(&self, region: &CapRegion, p: &SpherePoint, q: &SpherePoint) -> QubitDecision {
        self.decide_with_tol(region, p, q, TIE_TOL)
    }

    /// [`CapMesh::decide`] with a custom tie band.
    pub fn decide_with_tol(&self, region: &CapRegion, p: &SpherePoint, q: &SpherePoint, tie: f64) -> QubitDecision {
        let extra = [*p, *q];
        let extra = extra.iter().filter(|x| region.contains(x, FEASIBILITY_TOL));
        let mut margin_le = f64::INFINITY;
        let mut margin_ge = f64::INFINITY;
        for x in self.points.iter().chain(extra) {
            let diff = geodesic_distance(x, p) - geodesic_distance(x, q);
            margin_le = margin_le.min(diff);
            margin_ge = margin_ge.min(-diff);
        }
        let le = margin_le >= -tie;
        let ge = margin_ge >= -tie;
        let distinct = geodesic_distance(p, q) > tie;
        let tie = distinct && (margin_le.abs() <= tie || margin_ge.abs() <= tie);
        QubitDecision {
            comparison: Comparison::from_flags(le, ge),
            margin_le,
            margin_ge,
            tie,
            resolution: 2.0 * self.covering_radius(),
        }
    }
}

/// Verdict of the mesh-based qubit order together with its margins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDecision {
    pub comparison: Comparison,
    /// `min_x d(x, p) − d(x, q)` over the mesh.
    pub margin_le: f64,
    /// `min_x d(x, q) − d(x, p)` over the mesh.
    pub margin_ge: f64,
    /// Some margin fell inside the `TIE_TOL` band for distinct states.
    pub tie: bool,
    /// The true margins may be lower than the mesh margins by at most this.
    pub resolution: f64,
}

/// `p ≤ q ⇔ ∀x ∈ K: d(x, p) ≥ d(x, q)`, decided on a mesh of `K`.
pub fn qubit_order(
    region: &CapRegion,
    p: &SpherePoint,
    q: &SpherePoint,
    mesh_deg: f64,
) -> Result<QubitDecision, GeometryError> {
    qubit_order_with_tol(region, p, q, mesh_deg, TIE_TOL)
}

/// [`qubit_order`] with a custom tie band.
pub fn qubit_order_with_tol(
    region: &CapRegion,
    p: &SpherePoint,
    q: &SpherePoint,
    mesh_deg: f64,
    tie: f64,
) -> Result<QubitDecision, GeometryError> {
    if !(mesh_deg > 0.0 && mesh_deg <= MAX_MESH_DEG) {
        return Err(GeometryError::MeshTooCoarse(mesh_deg));
    }
    if region.interior_point().is_none() {
        return Err(GeometryError::EmptyInterior);
    }
    Ok(CapMesh::build(region, mesh_deg).decide_with_tol(region, p, q, tie))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    /// The midpoint of samples `a` and `b` is far from every sample.
    NotConvex { a: usize, b: usize },
}

/// Sampled midpoint test: every pairwise geodesic midpoint must lie within
/// `tol` (radians) of some sample.
pub fn is_geodesically_convex(samples: &[SpherePoint], tol: f64) -> Result<Convexity, GeometryError> {
    if samples.len() < 3 {
        return Err(GeometryError::TooFewSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    let cos_tol = tol.cos();
    for (i, a) in samples.iter().enumerate() {
        for (j, b) in samples.iter().enumerate().skip(i + 1) {
            if a.dot(b) <= -1.0 + 1e-12 {
                return Err(GeometryError::AntipodalPair(i, j));
            }
            let mid = SpherePoint::from_vector(axpy(1.0, &a.0, &b.0))?;
            if !samples.iter().any(|s| s.dot(&mid) >= cos_tol) {
                return Ok(Convexity::NotConvex { a: i, b: j });
            }
        }
    }
    Ok(Convexity::Convex)
}

/// Monte-Carlo area estimate in steradians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEstimate {
    pub steradians: f64,
    pub std_error: f64,
    pub samples: usize,
}

pub fn cap_measure<R: Rng + ?Sized>(region: &CapRegion, rng: &mut R) -> AreaEstimate {
    cap_measure_with(region, AREA_SAMPLES, rng)
}

pub fn cap_measure_with<R: Rng + ?Sized>(region: &CapRegion, samples: usize, rng: &mut R) -> AreaEstimate {
    let hits = (0..samples)
        .filter(|_| region.contains(&SpherePoint::random(rng), 0.0))
        .count();
    let frac = hits as f64 / samples as f64;
    AreaEstimate {
        steradians: 4.0 * PI * frac,
        std_error: 4.0 * PI * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
    }
}

/// `ℝ₊·K + ℝ·1₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitCone {
    pub cap: CapRegion,
}

impl QubitCone {
    pub fn new(cap: CapRegion) -> Self {
        Self { cap }
    }

    /// Membership of a 2×2 block: its traceless direction must lie within
    /// `tol` of the cap (scalars are always members).
    pub fn contains(&self, h: &HermitianMatrix, tol: f64) -> Result<bool, GeometryError> {
        let (w, _) = pauli_decomposition(h)?;
        let wn = norm(&w);
        if wn <= tol * h.frobenius_norm().max(1.0) {
            return Ok(true);
        }
        if self.cap.is_whole() {
            return Ok(true);
        }
        let dir = SpherePoint::from_vector(w)?;
        Ok(self.cap.distance_to(&dir) <= tol)
    }

    /// The extreme ray through the cap point `x`: the projector `½(1 + x·σ)`.
    pub fn generator(&self, x: &SpherePoint) -> HermitianMatrix {
        density_matrix(x)
    }

    /// Uniform cap direction, exponential radial scale, uniform trace shift.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> HermitianMatrix {
        let x = self.cap.sample(rng);
        let radial: f64 = rng.sample(rand_distr::Exp1);
        let shift: f64 = rng.gen_range(-1.0..1.0);
        density_matrix(&x).scale(radial).shift(shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{pure_state_eval, random_hermitian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(v: Vec3) -> SpherePoint {
        SpherePoint::from_vector(v).unwrap()
    }

    #[test]
    fn bloch_examples() {
        let up = PureStateVector::basis(2, 0);
        assert_eq!(bloch_map(&up).unwrap(), SpherePoint::north());
        let plus = PureStateVector::normalized(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let v = bloch_map(&plus).unwrap();
        assert!((v.coords()[0] - 1.0).abs() < 1e-15 && v.coords()[2].abs() < 1e-15);
        assert!(matches!(
            bloch_map(&PureStateVector::basis(3, 0)),
            Err(GeometryError::NotQubit(3))
        ));
    }

    #[test]
    fn bloch_frobenius_radius_and_trace_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let half = HermitianMatrix::scalar(2, 0.5).unwrap();
        for _ in 0..100 {
            let xi = PureStateVector::random(&mut rng, 2);
            let v = bloch_map(&xi).unwrap();
            let p = density_matrix(&v);
            let r = p.sub(&half).unwrap().frobenius_norm();
            assert!((r - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-9);
            let direct = HermitianMatrix::projector(&xi);
            assert!(p.sub(&direct).unwrap().frobenius_norm() < 1e-9);
            // tr(H p_ξ) = ξ†Hξ
            let h = random_hermitian(&mut rng, 2, 1.0);
            let (w, s) = pauli_decomposition(&h).unwrap();
            let tr = s + dot(&w, v.coords());
            assert!((tr - pure_state_eval(&h, &xi).unwrap()).abs() < 1e-9);
            // Round trip through the state form.
            let back = bloch_map(&state_from_bloch(&v)).unwrap();
            assert!(geodesic_distance(&back, &v) < 1e-9);
        }
    }

    #[test]
    fn geodesic_examples() {
        let n = SpherePoint::north();
        assert_eq!(geodesic_distance(&n, &n), 0.0);
        assert!((geodesic_distance(&n, &SpherePoint::south()) - PI).abs() < 1e-15);
        assert!((geodesic_distance(&n, &sp([1.0, 0.0, 0.0])) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn whole_sphere_order_is_trivial() {
        let k = CapRegion::WholeSphere;
        let p = sp([0.3, 0.1, 0.9]);
        let q = sp([0.31, 0.1, 0.9]);
        assert_eq!(qubit_order(&k, &p, &q, 1.0).unwrap().comparison, Comparison::Incomparable);
        assert_eq!(qubit_order(&k, &p, &p, 1.0).unwrap().comparison, Comparison::Equal);
    }

    #[test]
    fn hemisphere_poles() {
        let k = CapRegion::hemisphere(SpherePoint::north());
        let d = qubit_order(&k, &SpherePoint::south(), &SpherePoint::north(), 1.0).unwrap();
        assert_eq!(d.comparison, Comparison::LessOrEqual);
        assert!(qubit_order(&k, &SpherePoint::south(), &SpherePoint::north(), 5.0).is_err());
    }

    #[test]
    fn cap_validation() {
        // Two disjoint caps have empty intersection.
        let a = Hemisphere::new(SpherePoint::north(), 0.9).unwrap();
        let b = Hemisphere::new(SpherePoint::south(), 0.9).unwrap();
        assert_eq!(CapRegion::intersection(vec![a, b]), Err(GeometryError::EmptyInterior));
        // A cap larger than a hemisphere contains antipodal pairs.
        let big = Hemisphere::new(SpherePoint::north(), -0.5).unwrap();
        assert!(matches!(CapRegion::intersection(vec![big]), Err(GeometryError::NotConvex(..))));
        assert!(Hemisphere::new(SpherePoint::north(), 1.5).is_err());
    }

    #[test]
    fn projection_onto_polygon() {
        let region = CapRegion::intersection(vec![
            Hemisphere::new(sp([1.0, 0.0, 0.0]), 0.0).unwrap(),
            Hemisphere::new(sp([0.0, 1.0, 0.0]), 0.0).unwrap(),
            Hemisphere::new(sp([0.0, 0.0, 1.0]), 0.0).unwrap(),
        ])
        .unwrap();
        // Octant: the nearest point to (-1, 1, 1) is on the x = 0 face.
        let v = sp([-1.0, 1.0, 1.0]);
        let p = region.project(&v);
        assert!(p.coords()[0].abs() < 1e-12);
        assert!((p.coords()[1] - p.coords()[2]).abs() < 1e-12);
        // Nearest point to (-1,-1,-1) direction is a vertex or face point; brute-force check.
        let w = sp([-1.0, -0.2, 0.3]);
        let proj = region.project(&w);
        let brute = sphere_grid(0.2_f64.to_radians())
            .into_iter()
            .filter(|x| region.contains(x, 0.0))
            .map(|x| geodesic_distance(&x, &w))
            .fold(f64::INFINITY, f64::min);
        assert!(geodesic_distance(&proj, &w) <= brute + 1e-12);
        assert!(brute - geodesic_distance(&proj, &w) < 0.4_f64.to_radians());
    }

    #[test]
    fn convexity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cap = CapRegion::cap(SpherePoint::north(), 0.5).unwrap();
        let samples = CapMesh::build(&cap, 2.0).points().to_vec();
        assert_eq!(is_geodesically_convex(&samples, 0.05).unwrap(), Convexity::Convex);

        let hemi = CapRegion::hemisphere(SpherePoint::north());
        let hs: Vec<SpherePoint> = CapMesh::build(&hemi, 4.0)
            .points()
            .iter()
            .filter(|p| p.coords()[2] > 1e-3)
            .copied()
            .collect();
        assert_eq!(is_geodesically_convex(&hs, 0.1).unwrap(), Convexity::Convex);

        let left = CapRegion::cap(sp([1.0, 0.0, 0.2]), 0.2).unwrap();
        let right = CapRegion::cap(sp([-1.0, 0.0, 0.2]), 0.2).unwrap();
        let two: Vec<SpherePoint> = (0..60)
            .map(|i| if i % 2 == 0 { left.sample(&mut rng) } else { right.sample(&mut rng) })
            .collect();
        assert!(matches!(
            is_geodesically_convex(&two, 0.1).unwrap(),
            Convexity::NotConvex { .. }
        ));
        let anti = [SpherePoint::north(), SpherePoint::south(), sp([1.0, 0.0, 0.0])];
        assert!(matches!(
            is_geodesically_convex(&anti, 0.1),
            Err(GeometryError::AntipodalPair(0, 1))
        ));
    }

    #[test]
    fn areas() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let whole = cap_measure_with(&CapRegion::WholeSphere, 200_000, &mut rng);
        assert_eq!(whole.steradians, 4.0 * PI);
        let hemi = cap_measure_with(&CapRegion::hemisphere(SpherePoint::north()), 200_000, &mut rng);
        assert!((hemi.steradians - 2.0 * PI).abs() <= 3.0 * hemi.std_error);
        let cap = CapRegion::cap(SpherePoint::north(), PI / 3.0).unwrap();
        let est = cap_measure_with(&cap, 200_000, &mut rng);
        assert!((est.steradians - PI).abs() <= 3.0 * est.std_error);
    }

    #[test]
    fn cone_membership() {
        let cone = QubitCone::new(CapRegion::cap(SpherePoint::north(), 0.3).unwrap());
        assert!(cone.contains(&HermitianMatrix::scalar(2, 3.0).unwrap(), 1e-9).unwrap());
        assert!(cone.contains(&density_matrix(&SpherePoint::north()).scale(2.0).shift(-1.0), 1e-9).unwrap());
        assert!(!cone.contains(&density_matrix(&SpherePoint::south()), 1e-9).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            assert!(cone.contains(&cone.random_element(&mut rng), 1e-9).unwrap());
        }
    }

    #[test]
    fn cap_json_round_trip() {
        let json = r#"{"hemispheres":[{"n":[0.0,0.0,1.0],"c":0.5}]}"#;
        let cap: CapRegion = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&cap).unwrap(), json);
        let whole: CapRegion = serde_json::from_str(r#"{"whole": true}"#).unwrap();
        assert!(whole.is_whole());
        assert!(serde_json::from_str::<CapRegion>(r#"{"whole": false}"#).is_err());
    }
}
