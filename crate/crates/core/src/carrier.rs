//! Maps from a sampled base space to local isocones, their lower
//! hemi-continuity, and discrete continuous selections through them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermitian::{HermitianMatrix, MatrixJson};
use crate::isocone_fd::{ConeJson, IsoconeError, LocalIsocone, LEX_TOL};
use crate::order_core::{CloudJson, MetricPointCloud, OrderError};
use crate::qubit_geometry::{
    density_matrix, geodesic_distance, pauli_decomposition, CapMesh, CapRegion, GeometryError, SpherePoint,
};

/// Relative slack on "within radius" so grid neighbours at exactly the
/// spacing are not lost to rounding.
const RADIUS_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CarrierError {
    #[error("{points} base points but {cones} cones")]
    Count { points: usize, cones: usize },
    #[error("cones of sizes {0} and {1} in one map")]
    MixedSizes(usize, usize),
    #[error("radius {radius} is below the cloud mesh size {mesh}")]
    RadiusTooSmall { radius: f64, mesh: f64 },
    #[error("direction mesh must be positive, got {0}°")]
    DirectionMesh(f64),
    #[error("map is not lower hemi-continuous at point {x} (neighbour {neighbor})")]
    NotLhc { x: usize, neighbor: usize, direction: SpherePoint },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Isocone(#[from] IsoconeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// One local isocone per base point, all of the same block size.
#[derive(Debug, Clone)]
pub struct LocalIsoconeMap {
    cloud: MetricPointCloud,
    cones: Vec<LocalIsocone>,
}

/// `{"cloud": {...}, "cones": [{"qubit": cap} | {"trivial": n}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub cloud: CloudJson,
    pub cones: Vec<ConeJson>,
}

impl LocalIsoconeMap {
    pub fn new(cloud: MetricPointCloud, cones: Vec<LocalIsocone>) -> Result<Self, CarrierError> {
        if cloud.len() != cones.len() {
            return Err(CarrierError::Count {
                points: cloud.len(),
                cones: cones.len(),
            });
        }
        if let Some(first) = cones.first() {
            if let Some(other) = cones.iter().find(|c| c.dim() != first.dim()) {
                return Err(CarrierError::MixedSizes(first.dim(), other.dim()));
            }
        }
        if cones.iter().any(|c| matches!(c, LocalIsocone::Trivial(2) | LocalIsocone::Trivial(0))) {
            return Err(CarrierError::Input("size-2 blocks take a qubit cone".into()));
        }
        Ok(Self { cloud, cones })
    }

    /// `count` evenly spaced points of `[0, 1]` with caps from `cap_at`.
    pub fn on_unit_interval(count: usize, cap_at: impl Fn(f64) -> CapRegion) -> Result<Self, CarrierError> {
        if count == 0 {
            return Err(CarrierError::Input("empty base".into()));
        }
        let coords: Vec<f64> = if count == 1 {
            vec![0.0]
        } else {
            (0..count).map(|i| i as f64 / (count - 1) as f64).collect()
        };
        let cones = coords.iter().map(|&t| LocalIsocone::qubit(cap_at(t))).collect();
        Self::new(MetricPointCloud::line(&coords), cones)
    }

    pub fn from_json(json: MapJson) -> Result<Self, CarrierError> {
        let cloud = json.cloud.into_cloud()?;
        let cones = json
            .cones
            .iter()
            .map(|c| match c {
                ConeJson::Trivial { trivial } => Ok(LocalIsocone::Trivial(*trivial)),
                ConeJson::Qubit { qubit } => Ok(LocalIsocone::qubit(CapRegion::from_json(qubit)?)),
            })
            .collect::<Result<Vec<_>, GeometryError>>()?;
        Self::new(cloud, cones)
    }

    pub fn cloud(&self) -> &MetricPointCloud {
        &self.cloud
    }

    pub fn cones(&self) -> &[LocalIsocone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    fn neighbors(&self, x: usize, radius: f64) -> impl Iterator<Item = usize> + '_ {
        let limit = radius * (1.0 + RADIUS_SLACK);
        (0..self.len()).filter(move |&y| y != x && self.cloud.distance(x, y) <= limit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LhcVerdict {
    Pass,
    /// `direction ∈ cap(x)` has no cap point of the neighbour `neighbor`
    /// within the direction mesh.
    Fail {
        x: usize,
        direction: SpherePoint,
        neighbor: usize,
    },
}

impl LhcVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, LhcVerdict::Pass)
    }
}

fn point_failure(
    map: &LocalIsoconeMap,
    x: usize,
    radius: f64,
    half_angle: f64,
    meshes: &[Option<CapMesh>],
) -> Option<(SpherePoint, usize)> {
    let mesh = meshes[x].as_ref()?;
    for y in map.neighbors(x, radius) {
        let cap = match &map.cones[y] {
            LocalIsocone::Qubit(q) if !q.cap.is_whole() => &q.cap,
            _ => continue,
        };
        if let Some(d) = mesh.points().iter().find(|d| cap.distance_to(d) >= half_angle) {
            return Some((*d, y));
        }
    }
    None
}

fn direction_meshes(map: &LocalIsoconeMap, mesh_deg: f64) -> Vec<Option<CapMesh>> {
    map.cones
        .par_iter()
        .map(|c| match c {
            LocalIsocone::Qubit(q) => Some(CapMesh::build(&q.cap, mesh_deg)),
            LocalIsocone::Trivial(_) => None,
        })
        .collect()
}

/// Finite-sample lower hemi-continuity: for every point `x`, every mesh
/// direction of its cap and every neighbour within `radius`, the
/// neighbour's cap meets the open angular ball of half-angle
/// `direction_mesh_deg` around the direction. The first failing point in
/// index order is returned.
pub fn check_lhc(map: &LocalIsoconeMap, radius: f64, direction_mesh_deg: f64) -> Result<LhcVerdict, CarrierError> {
    let failures = lhc_failures(map, radius, direction_mesh_deg, true)?;
    Ok(match failures.into_iter().next() {
        None => LhcVerdict::Pass,
        Some((x, direction, neighbor)) => LhcVerdict::Fail { x, direction, neighbor },
    })
}

fn lhc_failures(
    map: &LocalIsoconeMap,
    radius: f64,
    direction_mesh_deg: f64,
    first_only: bool,
) -> Result<Vec<(usize, SpherePoint, usize)>, CarrierError> {
    if !(direction_mesh_deg > 0.0) {
        return Err(CarrierError::DirectionMesh(direction_mesh_deg));
    }
    let mesh = map.cloud.mesh_size();
    if map.len() > 1 && radius < mesh * (1.0 - RADIUS_SLACK) {
        return Err(CarrierError::RadiusTooSmall { radius, mesh });
    }
    let meshes = direction_meshes(map, direction_mesh_deg);
    let half = direction_mesh_deg.to_radians();
    let failing = |x: usize| point_failure(map, x, radius, half, &meshes).map(|(d, y)| (x, d, y));
    Ok(if first_only {
        (0..map.len()).into_par_iter().find_map_first(failing).into_iter().collect()
    } else {
        (0..map.len()).into_par_iter().filter_map(failing).collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum RefinedLhcVerdict {
    Pass,
    /// A base point failing at every refinement level.
    Fail { coords: Vec<f64>, neighbors: Vec<Vec<f64>> },
}

impl RefinedLhcVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, RefinedLhcVerdict::Pass)
    }
}

/// Lower hemi-continuity across refinements of one map: `levels` sample
/// the same map at decreasing mesh sizes and each level is checked at
/// `radius_factor ×` its own mesh. A genuine discontinuity fails at a fixed
/// base point on every level, while a sampling artefact next to a jump
/// moves with the mesh. Points are matched across levels by coordinates.
pub fn check_lhc_refined(
    levels: &[LocalIsoconeMap],
    radius_factor: f64,
    direction_mesh_deg: f64,
) -> Result<RefinedLhcVerdict, CarrierError> {
    if levels.is_empty() {
        return Err(CarrierError::Input("no refinement levels".into()));
    }
    if !(radius_factor >= 1.0) {
        return Err(CarrierError::Input(format!("radius factor {radius_factor} below 1")));
    }
    let mut per_level = Vec::with_capacity(levels.len());
    for map in levels {
        let r = radius_factor * map.cloud.mesh_size();
        let fails = lhc_failures(map, r, direction_mesh_deg, false)?;
        per_level.push(
            fails
                .into_iter()
                .map(|(x, _, y)| (map.cloud.points()[x].clone(), map.cloud.points()[y].clone()))
                .collect::<Vec<_>>(),
        );
    }
    let same = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(u, v)| (u - v).abs() <= 1e-9);
    for (coords, first_neighbor) in &per_level[0] {
        let mut neighbors = vec![first_neighbor.clone()];
        let persistent = per_level[1..].iter().all(|fails| {
            match fails.iter().find(|(c, _)| same(c, coords)) {
                Some((_, n)) => {
                    neighbors.push(n.clone());
                    true
                }
                None => false,
            }
        });
        if persistent {
            return Ok(RefinedLhcVerdict::Fail {
                coords: coords.clone(),
                neighbors,
            });
        }
    }
    Ok(RefinedLhcVerdict::Pass)
}

/// A value in each local cone.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionField {
    pub values: Vec<HermitianMatrix>,
    /// `max ‖f(x) − f(x′)‖_F / d(x, x′)` over neighbours within `radius`.
    pub lipschitz: f64,
    pub radius: f64,
}

impl SelectionField {
    /// Projects `seed` onto every cap and lifts it to `½(1 + p·σ)`; full
    /// cones of other sizes receive the identity.
    pub fn project(map: &LocalIsoconeMap, seed: &SpherePoint, radius: f64) -> Self {
        let values: Vec<HermitianMatrix> = map
            .cones
            .par_iter()
            .map(|c| match c {
                LocalIsocone::Qubit(q) => density_matrix(&q.cap.project(seed)),
                LocalIsocone::Trivial(n) => HermitianMatrix::identity(*n).expect("positive size"),
            })
            .collect();
        Self::from_values(map, values, radius)
    }

    fn from_values(map: &LocalIsoconeMap, values: Vec<HermitianMatrix>, radius: f64) -> Self {
        let lipschitz = lipschitz_constant(map, &values, radius);
        Self {
            values,
            lipschitz,
            radius,
        }
    }

    /// Membership of every value at tolerance [`LEX_TOL`]; first failing index.
    pub fn first_violation(&self, map: &LocalIsoconeMap) -> Result<Option<usize>, CarrierError> {
        for (i, (v, c)) in self.values.iter().zip(map.cones()).enumerate() {
            if !c.contains(v, LEX_TOL)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// `f + s(x)·1`.
    pub fn add_scalar(&self, map: &LocalIsoconeMap, s: impl Fn(usize) -> f64) -> Self {
        let values = self.values.iter().enumerate().map(|(i, v)| v.shift(s(i))).collect();
        Self::from_values(map, values, self.radius)
    }

    /// `s(x)·f` with `s ≥ 0`.
    pub fn scale_by(&self, map: &LocalIsoconeMap, s: impl Fn(usize) -> f64) -> Result<Self, CarrierError> {
        let mut values = Vec::with_capacity(self.values.len());
        for (i, v) in self.values.iter().enumerate() {
            let f = s(i);
            if !(f >= 0.0) {
                return Err(CarrierError::Input(format!("negative factor {f} at {i}")));
            }
            values.push(v.scale(f));
        }
        Ok(Self::from_values(map, values, self.radius))
    }

    pub fn to_json(&self) -> Vec<MatrixJson> {
        self.values.iter().map(HermitianMatrix::to_json).collect()
    }

    /// Normalized traceless direction at `x`, if the value is not scalar.
    pub fn direction(&self, x: usize) -> Option<SpherePoint> {
        let (w, _) = pauli_decomposition(&self.values[x]).ok()?;
        SpherePoint::from_vector(w).ok()
    }
}

fn lipschitz_constant(map: &LocalIsoconeMap, values: &[HermitianMatrix], radius: f64) -> f64 {
    (0..map.len())
        .into_par_iter()
        .map(|x| {
            map.neighbors(x, radius)
                .map(|y| {
                    let d = map.cloud.distance(x, y);
                    let diff = values[x].sub(&values[y]).map(|m| m.frobenius_norm()).unwrap_or(f64::INFINITY);
                    if d > 0.0 {
                        diff / d
                    } else if diff == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Checks lower hemi-continuity at the cloud mesh size, then projects
/// `seed` onto every cap.
pub fn build_selection(
    map: &LocalIsoconeMap,
    seed: &SpherePoint,
    direction_mesh_deg: f64,
) -> Result<SelectionField, CarrierError> {
    let radius = map.cloud.mesh_size();
    let radius = if radius.is_finite() { radius } else { 0.0 };
    if let LhcVerdict::Fail { x, direction, neighbor } = check_lhc(map, radius, direction_mesh_deg)? {
        return Err(CarrierError::NotLhc { x, neighbor, direction });
    }
    Ok(SelectionField::project(map, seed, radius))
}

/// One-sided Hausdorff distance (radians) from the cap mesh at `x` to the
/// directions `{f(x)}` of the given selections.
pub fn selection_density_check(
    map: &LocalIsoconeMap,
    fields: &[SelectionField],
    x: usize,
    coverage_mesh_deg: f64,
) -> Result<f64, CarrierError> {
    let cap = match map.cones.get(x) {
        Some(LocalIsocone::Qubit(q)) => &q.cap,
        Some(_) => return Err(CarrierError::Input(format!("point {x} has no qubit cone"))),
        None => return Err(CarrierError::Input(format!("point {x} out of range"))),
    };
    let dirs: Vec<SpherePoint> = fields.iter().filter_map(|f| f.direction(x)).collect();
    if dirs.is_empty() {
        return Err(CarrierError::Input("no field has a direction at this point".into()));
    }
    let mesh = CapMesh::build(cap, coverage_mesh_deg);
    Ok(mesh
        .points()
        .par_iter()
        .map(|m| dirs.iter().map(|d| geodesic_distance(m, d)).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max))
}
