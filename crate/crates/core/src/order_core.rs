//! Finite strict partial orders over point clouds.
//!
//! A [`Relation`] is any set of index pairs; a [`FiniteOrder`] is a relation
//! that has been checked to be irreflexive, antisymmetric and transitive.
//! Rows are stored as bitsets so transitivity checks on a few thousand
//! points stay cheap.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrderError {
    #[error("index {index} out of range for a relation of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("relation is not a strict partial order: {0}")]
    Invalid(OrderReport),
    #[error("relation contains a cycle: {path:?}")]
    Cycle { path: Vec<usize> },
    #[error("size mismatch: cloud has {cloud} points, order has {order}")]
    SizeMismatch { cloud: usize, order: usize },
    #[error("invalid metric: {0}")]
    Metric(String),
    #[error("invalid input: {0}")]
    Input(String),
}

/// Outcome of comparing two elements under some (pre)order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparison {
    LessOrEqual,
    GreaterOrEqual,
    Equal,
    Incomparable,
}

impl Comparison {
    pub fn from_flags(le: bool, ge: bool) -> Self {
        match (le, ge) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::LessOrEqual,
            (false, true) => Comparison::GreaterOrEqual,
            (false, false) => Comparison::Incomparable,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Comparison::LessOrEqual => Comparison::GreaterOrEqual,
            Comparison::GreaterOrEqual => Comparison::LessOrEqual,
            other => other,
        }
    }

    pub fn is_le(self) -> bool {
        matches!(self, Comparison::LessOrEqual | Comparison::Equal)
    }
}

/// A binary relation on `0..size`, one bitset row per source index.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    size: usize,
    rows: Vec<FixedBitSet>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("size", &self.size)
            .field("pairs", &self.pairs().collect::<Vec<_>>())
            .finish()
    }
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Self {
            size,
            rows: vec![FixedBitSet::with_capacity(size); size],
        }
    }

    pub fn from_pairs<I>(size: usize, pairs: I) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rel = Self::empty(size);
        for (x, y) in pairs {
            for index in [x, y] {
                if index >= size {
                    return Err(OrderError::IndexOutOfRange { index, size });
                }
            }
            rel.rows[x].insert(y);
        }
        Ok(rel)
    }

    /// Builds row `x` from `related(x, y)` for all `y`.
    pub fn from_fn(size: usize, related: impl Fn(usize, usize) -> bool) -> Self {
        let rows = (0..size)
            .map(|x| {
                let mut row = FixedBitSet::with_capacity(size);
                for y in 0..size {
                    if related(x, y) {
                        row.insert(y);
                    }
                }
                row
            })
            .collect();
        Self { size, rows }
    }

    /// Assembles a relation from prebuilt rows (e.g. computed in parallel).
    pub fn from_rows(size: usize, rows: Vec<FixedBitSet>) -> Result<Self, OrderError> {
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(OrderError::Input(format!("expected {size} rows of length {size}")));
        }
        Ok(Self { size, rows })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    pub fn row(&self, x: usize) -> &FixedBitSet {
        &self.rows[x]
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_clear())
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.contains(x, y) || self.contains(y, x)
    }

    /// Column sets: `transpose().row(y)` holds every `x` with `x R y`.
    pub fn transpose(&self) -> Self {
        let mut out = Self::empty(self.size);
        for (x, y) in self.pairs() {
            out.rows[y].insert(x);
        }
        out
    }

    /// Pairs `(x, y)` with no `z` strictly between them. Assumes transitivity.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let preds = self.transpose();
        self.pairs()
            .filter(|&(x, y)| self.rows[x].is_disjoint(&preds.rows[y]))
            .collect()
    }
}

/// Axiom violations found in a relation, one witness per axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub size: usize,
    pub pair_count: usize,
    /// `x` with `(x, x)` in the relation.
    pub reflexive_pair: Option<usize>,
    /// `(x, y)` with both `(x, y)` and `(y, x)` present, `x < y`.
    pub antisymmetry: Option<(usize, usize)>,
    /// `(x, y, z)` with `(x, y)`, `(y, z)` present but `(x, z)` missing.
    pub transitivity: Option<(usize, usize, usize)>,
}

impl OrderReport {
    pub fn is_valid(&self) -> bool {
        self.reflexive_pair.is_none() && self.antisymmetry.is_none() && self.transitivity.is_none()
    }
}

impl fmt::Display for OrderReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid strict order ({} points, {} pairs)", self.size, self.pair_count);
        }
        let mut parts = Vec::new();
        if let Some(x) = self.reflexive_pair {
            parts.push(format!("irreflexivity violated at ({x},{x})"));
        }
        if let Some((x, y)) = self.antisymmetry {
            parts.push(format!("antisymmetry violated by ({x},{y}) and ({y},{x})"));
        }
        if let Some((x, y, z)) = self.transitivity {
            parts.push(format!("transitivity violated: ({x},{y}), ({y},{z}) but not ({x},{z})"));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks the strict-order axioms and reports the first witness of each
/// violated axiom (in lexicographic scan order).
pub fn validate_order(rel: &Relation) -> OrderReport {
    let mut report = OrderReport {
        size: rel.size,
        pair_count: rel.len(),
        ..OrderReport::default()
    };
    report.reflexive_pair = (0..rel.size).find(|&x| rel.contains(x, x));
    report.antisymmetry = rel.pairs().find(|&(x, y)| x < y && rel.contains(y, x));
    for (x, y) in rel.pairs() {
        // Every successor of y must be a successor of x.
        if !rel.rows[y].is_subset(&rel.rows[x]) {
            let z = rel.rows[y].difference(&rel.rows[x]).next().expect("nonempty difference");
            report.transitivity = Some((x, y, z));
            break;
        }
    }
    report
}

/// [`validate_order`] on a raw pair list, rejecting out-of-range indices.
pub fn validate_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<OrderReport, OrderError> {
    Ok(validate_order(&Relation::from_pairs(size, pairs.iter().copied())?))
}

/// A relation known to be a strict partial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrder {
    rel: Relation,
}

impl FiniteOrder {
    pub fn new(rel: Relation) -> Result<Self, OrderError> {
        let report = validate_order(&rel);
        if report.is_valid() {
            Ok(Self { rel })
        } else {
            Err(OrderError::Invalid(report))
        }
    }

    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        Self::new(Relation::from_pairs(size, pairs.iter().copied())?)
    }

    pub fn antichain(size: usize) -> Self {
        Self {
            rel: Relation::empty(size),
        }
    }

    pub fn size(&self) -> usize {
        self.rel.size
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }

    pub fn into_relation(self) -> Relation {
        self.rel
    }

    /// `x ≺ y`.
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.rel.contains(x, y)
    }

    /// `x ⪯ y`.
    pub fn less_eq(&self, x: usize, y: usize) -> bool {
        x == y || self.rel.contains(x, y)
    }

    pub fn compare(&self, x: usize, y: usize) -> Comparison {
        Comparison::from_flags(self.less_eq(x, y), self.less_eq(y, x))
    }

    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rel.pairs()
    }

    pub fn to_json(&self) -> OrderJson {
        OrderJson {
            size: self.size(),
            pairs: self.strict_pairs().map(|(x, y)| [x, y]).collect(),
        }
    }
}

/// Pair-list wire format `{"size": n, "pairs": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderJson {
    pub size: usize,
    pub pairs: Vec<[usize; 2]>,
}

impl OrderJson {
    pub fn relation(&self) -> Result<Relation, OrderError> {
        Relation::from_pairs(self.size, self.pairs.iter().map(|p| (p[0], p[1])))
    }
}

/// Smallest transitive superset of `rel`, or the cycle that prevents it
/// from being a strict order.
pub fn transitive_closure(rel: &Relation) -> Result<FiniteOrder, OrderError> {
    let n = rel.size;
    let mut rows = rel.rows.clone();
    // Warshall over bitset rows.
    for k in 0..n {
        let row_k = rows[k].clone();
        for row in rows.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| rows[x].contains(x)) {
        return Err(OrderError::Cycle {
            path: find_cycle(rel, x),
        });
    }
    Ok(FiniteOrder {
        rel: Relation { size: n, rows },
    })
}

/// Shortest path `x → … → x` in `rel` (BFS); the start is repeated at the end.
fn find_cycle(rel: &Relation, start: usize) -> Vec<usize> {
    let n = rel.size;
    let mut parent = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for y in rel.rows[start].ones() {
        if y == start {
            return vec![start, start];
        }
        if parent[y] == usize::MAX {
            parent[y] = start;
            queue.push_back(y);
        }
    }
    while let Some(u) = queue.pop_front() {
        for v in rel.rows[u].ones() {
            if v == start {
                let mut back = vec![u];
                let mut cur = u;
                while parent[cur] != start {
                    cur = parent[cur];
                    back.push(cur);
                }
                let mut path = vec![start];
                path.extend(back.into_iter().rev());
                path.push(start);
                return path;
            }
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    vec![start, start]
}

/// Per-point real values; for a Levin utility `x ≺ y ⇒ g(y) − g(x) ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityFunction {
    pub values: Vec<f64>,
}

impl UtilityFunction {
    /// First strict pair whose gap is below one, if any.
    pub fn gap_violation(&self, order: &FiniteOrder) -> Option<(usize, usize)> {
        order
            .strict_pairs()
            .find(|&(x, y)| self.values[y] - self.values[x] < 1.0)
    }
}

/// Longest-chain level of every point: minimal elements get 0 and
/// `g(y) = 1 + max_{x ≺ y} g(x)`.
pub fn levin_utility(order: &FiniteOrder) -> UtilityFunction {
    let n = order.size();
    let preds = order.rel.transpose();
    let mut indegree: Vec<usize> = (0..n).map(|y| preds.rows[y].count_ones(..)).collect();
    let mut level = vec![0usize; n];
    // Kahn's algorithm; a BTreeSet frontier keeps ties in index order.
    let mut frontier: std::collections::BTreeSet<usize> =
        (0..n).filter(|&x| indegree[x] == 0).collect();
    while let Some(x) = frontier.pop_first() {
        for y in order.rel.rows[x].ones() {
            level[y] = level[y].max(level[x] + 1);
            indegree[y] -= 1;
            if indegree[y] == 0 {
                frontier.insert(y);
            }
        }
    }
    UtilityFunction {
        values: level.into_iter().map(|l| l as f64).collect(),
    }
}

/// A distance scale that may be unbounded (the infimum over an empty set).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum Scale {
    Finite(f64),
    Unbounded,
}

impl Scale {
    pub fn finite(self) -> Option<f64> {
        match self {
            Scale::Finite(v) => Some(v),
            Scale::Unbounded => None,
        }
    }

    pub fn min(self, other: Self) -> Self {
        match (self, other) {
            (Scale::Unbounded, s) | (s, Scale::Unbounded) => s,
            (Scale::Finite(a), Scale::Finite(b)) => Scale::Finite(a.min(b)),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Finite(v) => write!(f, "{v}"),
            Scale::Unbounded => write!(f, "inf"),
        }
    }
}

/// How pairwise distances are obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Euclidean,
    Table(Vec<Vec<f64>>),
}

/// Points with a symmetric distance.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPointCloud {
    points: Vec<Vec<f64>>,
    metric: Metric,
}

const TRIANGLE_TOL: f64 = 1e-9;
const MAX_EXHAUSTIVE_TRIANGLE: usize = 64;

impl MetricPointCloud {
    pub fn euclidean(points: Vec<Vec<f64>>) -> Result<Self, OrderError> {
        if let Some(first) = points.first() {
            if points.iter().any(|p| p.len() != first.len()) {
                return Err(OrderError::Metric("points have mixed dimensions".into()));
            }
        }
        Ok(Self {
            points,
            metric: Metric::Euclidean,
        })
    }

    /// Points on a line.
    pub fn line(coords: &[f64]) -> Self {
        Self {
            points: coords.iter().map(|&x| vec![x]).collect(),
            metric: Metric::Euclidean,
        }
    }

    /// Explicit distance table; checks zero diagonal, symmetry, non-negativity
    /// and the triangle inequality (all triples up to 64 points, a fixed
    /// stride sample beyond).
    pub fn with_table(points: Vec<Vec<f64>>, table: Vec<Vec<f64>>) -> Result<Self, OrderError> {
        let n = table.len();
        if !points.is_empty() && points.len() != n {
            return Err(OrderError::Metric(format!(
                "{} points but a {n}x{n} table",
                points.len()
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(OrderError::Metric(format!("row {i} has length {}", row.len())));
            }
            if row[i] != 0.0 {
                return Err(OrderError::Metric(format!("d({i},{i}) = {} != 0", row[i])));
            }
            for (j, &d) in row.iter().enumerate() {
                if !(d >= 0.0) || d != table[j][i] {
                    return Err(OrderError::Metric(format!("d({i},{j}) not symmetric/non-negative")));
                }
            }
        }
        let step = if n <= MAX_EXHAUSTIVE_TRIANGLE { 1 } else { n / MAX_EXHAUSTIVE_TRIANGLE + 1 };
        for i in (0..n).step_by(step) {
            for j in (0..n).step_by(step) {
                for k in (0..n).step_by(step) {
                    if table[i][k] > table[i][j] + table[j][k] + TRIANGLE_TOL {
                        return Err(OrderError::Metric(format!("triangle inequality fails at ({i},{j},{k})")));
                    }
                }
            }
        }
        let points = if points.is_empty() { vec![Vec::new(); n] } else { points };
        Ok(Self {
            points,
            metric: Metric::Table(table),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Euclidean => euclidean_distance(&self.points[i], &self.points[j]),
            Metric::Table(t) => t[i][j],
        }
    }

    /// Largest nearest-neighbour distance.
    pub fn mesh_size(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| self.distance(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> CloudJson {
        CloudJson {
            points: self.points.clone(),
            metric: match &self.metric {
                Metric::Euclidean => MetricJson::Named("euclidean".into()),
                Metric::Table(t) => MetricJson::Table(t.clone()),
            },
        }
    }
}

/// `‖a − b‖₂`, summing the first coordinate's square first and then the rest.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    let head = a[0] - b[0];
    let tail: f64 = a[1..].iter().zip(&b[1..]).map(|(x, y)| (x - y) * (x - y)).sum();
    (head * head + tail).sqrt()
}

/// `{"points": [[...]], "metric": "euclidean" | [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudJson {
    pub points: Vec<Vec<f64>>,
    pub metric: MetricJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricJson {
    Named(String),
    Table(Vec<Vec<f64>>),
}

impl CloudJson {
    pub fn into_cloud(self) -> Result<MetricPointCloud, OrderError> {
        match self.metric {
            MetricJson::Named(name) if name == "euclidean" => MetricPointCloud::euclidean(self.points),
            MetricJson::Named(name) => Err(OrderError::Metric(format!("unknown metric {name:?}"))),
            MetricJson::Table(t) => MetricPointCloud::with_table(self.points, t),
        }
    }
}

fn check_sizes(cloud: &MetricPointCloud, order: &FiniteOrder) -> Result<(), OrderError> {
    if cloud.len() != order.size() {
        return Err(OrderError::SizeMismatch {
            cloud: cloud.len(),
            order: order.size(),
        });
    }
    Ok(())
}

/// `ε₀ = min_{x ≺ y} d(x, y)`, unbounded for an empty strict relation.
pub fn epsilon_cutoff(cloud: &MetricPointCloud, order: &FiniteOrder) -> Result<Scale, OrderError> {
    check_sizes(cloud, order)?;
    Ok(order
        .strict_pairs()
        .map(|(x, y)| Scale::Finite(cloud.distance(x, y)))
        .fold(Scale::Unbounded, Scale::min))
}

/// Distance from `x` to the nearest point comparable with it; every point
/// strictly closer is incomparable to `x`.
pub fn incomparability_ball(
    cloud: &MetricPointCloud,
    order: &FiniteOrder,
    x: usize,
) -> Result<Scale, OrderError> {
    check_sizes(cloud, order)?;
    if x >= order.size() {
        return Err(OrderError::IndexOutOfRange {
            index: x,
            size: order.size(),
        });
    }
    Ok((0..order.size())
        .filter(|&y| y != x && order.relation().comparable(x, y))
        .map(|y| Scale::Finite(cloud.distance(x, y)))
        .fold(Scale::Unbounded, Scale::min))
}

/// The `[0, 1]` example `x ≺ y ⇔ y − x ≥ λ(x)` on a sorted sample.
#[derive(Debug, Clone)]
pub struct SampledLambdaOrder {
    pub relation: Relation,
    pub report: OrderReport,
}

impl SampledLambdaOrder {
    pub fn into_order(self) -> Option<FiniteOrder> {
        self.report.is_valid().then_some(FiniteOrder { rel: self.relation })
    }
}

/// Evaluates the λ-order on the sample. Transitivity failures are reported
/// in `report`, not repaired.
pub fn lambda_order_1d(samples: &[f64], lam: &[f64]) -> Result<SampledLambdaOrder, OrderError> {
    if samples.len() != lam.len() {
        return Err(OrderError::Input(format!(
            "{} samples but {} λ values",
            samples.len(),
            lam.len()
        )));
    }
    if samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(OrderError::Input("samples must be sorted".into()));
    }
    if let Some(i) = lam.iter().position(|&l| !(l > 0.0)) {
        return Err(OrderError::Input(format!("λ[{i}] = {} must be positive", lam[i])));
    }
    let relation = Relation::from_fn(samples.len(), |i, j| samples[j] - samples[i] >= lam[i]);
    let report = validate_order(&relation);
    Ok(SampledLambdaOrder { relation, report })
}

/// Result of the two-scale closedness proxy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessReport {
    /// `(x, y)` not related, yet approached by related pairs at every scale.
    pub witness: Option<(f64, f64)>,
    pub candidates_checked: usize,
}

impl ClosednessReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Finite proxy for closedness of `{(x, y) : y − x ≥ λ(x)}` in `[0, 1]²`.
///
/// Every coarse pair that is not related (at tolerance `delta`) is probed
/// with the 3×3 stencil `{x−h, x, x+h} × {y−h, y, y+h}` for each spacing
/// `h` in `spacings`. A pair approached by related pairs at every spacing
/// is a limit point outside the relation and is returned as the witness.
pub fn closedness_proxy(
    coarse: &[f64],
    lam: impl Fn(f64) -> f64,
    spacings: &[f64],
    delta: f64,
) -> ClosednessReport {
    let related = |x: f64, y: f64| y - x >= lam(x) - delta;
    let related_strictly = |x: f64, y: f64| y - x >= lam(x);
    let inside = |t: f64| (0.0..=1.0).contains(&t);
    let mut checked = 0;
    for &x in coarse {
        for &y in coarse {
            if related(x, y) {
                continue;
            }
            checked += 1;
            let approached = !spacings.is_empty()
                && spacings.iter().all(|&h| {
                    [x - h, x, x + h].iter().any(|&xp| {
                        inside(xp)
                            && [y - h, y, y + h]
                                .iter()
                                .any(|&yp| inside(yp) && related_strictly(xp, yp))
                    })
                });
            if approached {
                return ClosednessReport {
                    witness: Some((x, y)),
                    candidates_checked: checked,
                };
            }
        }
    }
    ClosednessReport {
        witness: None,
        candidates_checked: checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(validate_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap().is_valid());
        let r = validate_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(r.antisymmetry, Some((0, 1)));
        let r = validate_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(r.transitivity, Some((0, 1, 2)));
        assert_eq!(r.antisymmetry, None);
        let r = validate_pairs(2, &[(1, 1)]).unwrap();
        assert_eq!(r.reflexive_pair, Some(1));
        assert!(matches!(
            validate_pairs(2, &[(0, 2)]),
            Err(OrderError::IndexOutOfRange { index: 2, size: 2 })
        ));
    }

    #[test]
    fn closure_examples() {
        let rel = Relation::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        let closed = transitive_closure(&rel).unwrap();
        assert_eq!(closed.strict_pairs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        let empty = transitive_closure(&Relation::empty(4)).unwrap();
        assert!(empty.relation().is_empty());
    }

    #[test]
    fn closure_reports_cycle_path() {
        let rel = Relation::from_pairs(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        match transitive_closure(&rel) {
            Err(OrderError::Cycle { path }) => {
                assert_eq!(path.first(), path.last());
                for w in path.windows(2) {
                    assert!(rel.contains(w[0], w[1]), "{path:?}");
                }
            }
            other => panic!("expected cycle, got {other:?}"),
        }
        let selfloop = Relation::from_pairs(2, [(1, 1)]).unwrap();
        assert!(matches!(transitive_closure(&selfloop), Err(OrderError::Cycle { path }) if path == vec![1, 1]));
    }

    #[test]
    fn levin_examples() {
        let chain = FiniteOrder::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(levin_utility(&chain).values, vec![0.0, 1.0, 2.0]);
        let anti = FiniteOrder::antichain(5);
        assert_eq!(levin_utility(&anti).values, vec![0.0; 5]);
        let diamond = FiniteOrder::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]).unwrap();
        let g = levin_utility(&diamond);
        assert_eq!(g.values, vec![0.0, 1.0, 1.0, 2.0]);
        assert_eq!(g.gap_violation(&diamond), None);
    }

    #[test]
    fn cutoff_examples() {
        let cloud = MetricPointCloud::line(&[0.0, 0.3, 1.0]);
        let order = FiniteOrder::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(epsilon_cutoff(&cloud, &order).unwrap(), Scale::Finite(0.7));
        assert_eq!(
            epsilon_cutoff(&cloud, &FiniteOrder::antichain(3)).unwrap(),
            Scale::Unbounded
        );
        assert!(matches!(
            epsilon_cutoff(&cloud, &FiniteOrder::antichain(2)),
            Err(OrderError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn ball_examples() {
        let cloud = MetricPointCloud::line(&[0.0, 1.0, 5.0]);
        let order = FiniteOrder::from_pairs(3, &[(0, 1)]).unwrap();
        assert_eq!(incomparability_ball(&cloud, &order, 0).unwrap(), Scale::Finite(1.0));
        assert_eq!(incomparability_ball(&cloud, &order, 1).unwrap(), Scale::Finite(1.0));
        assert_eq!(incomparability_ball(&cloud, &order, 2).unwrap(), Scale::Unbounded);
    }

    #[test]
    fn scale_ordering() {
        assert!(Scale::Finite(1e300) < Scale::Unbounded);
        assert_eq!(Scale::Unbounded.min(Scale::Finite(2.0)), Scale::Finite(2.0));
    }

    #[test]
    fn lambda_1d_examples() {
        let out = lambda_order_1d(&[0.0, 0.2, 0.5], &[0.3; 3]).unwrap();
        assert_eq!(out.relation.pairs().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
        assert!(out.report.is_valid());
        let out = lambda_order_1d(&[0.0, 0.2, 0.5], &[2.0; 3]).unwrap();
        assert!(out.relation.is_empty());
        assert!(lambda_order_1d(&[0.0, 0.5], &[0.1, 0.0]).is_err());
    }

    #[test]
    fn lambda_1d_is_transitive_for_positive_lambda() {
        // y − x ≥ λ(x) and z − y ≥ λ(y) > 0 give z − x > λ(x).
        let samples: Vec<f64> = (0..40).map(|i| i as f64 / 39.0).collect();
        let lam: Vec<f64> = samples.iter().map(|x| 0.05 + 0.3 * (7.0 * x).sin().abs()).collect();
        let out = lambda_order_1d(&samples, &lam).unwrap();
        assert!(out.report.is_valid());
        assert!(out.into_order().is_some());
    }

    #[test]
    fn closedness_proxy_separates_lsc() {
        let coarse: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let spacings = [1e-2, 1e-3, 1e-4, 1e-5];
        let constant = closedness_proxy(&coarse, |_| 0.3, &spacings, 1e-6);
        assert!(constant.passed());
        // Lower semi-continuous: the jump takes the lower value at 0.5.
        let lsc = closedness_proxy(&coarse, |x| if x == 0.5 { 0.2 } else { 0.5 }, &spacings, 1e-6);
        assert!(lsc.passed());
        // Not l.s.c.: the value at 0.5 exceeds the limit from either side.
        let not_lsc = closedness_proxy(&coarse, |x| if x == 0.5 { 0.5 } else { 0.2 }, &spacings, 1e-6);
        assert_eq!(not_lsc.witness.map(|w| w.0), Some(0.5));
    }

    #[test]
    fn euclidean_table_checks() {
        assert!(MetricPointCloud::with_table(vec![], vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(MetricPointCloud::with_table(
            vec![],
            vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]]
        )
        .is_err());
        let ok = MetricPointCloud::with_table(
            vec![],
            vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
        )
        .unwrap();
        assert_eq!(ok.distance(0, 2), 2.0);
        assert_eq!(ok.mesh_size(), 1.0);
    }

    #[test]
    fn cloud_json_round_trip() {
        let json = r#"{"points": [[0.0], [0.5]], "metric": "euclidean"}"#;
        let cloud = serde_json::from_str::<CloudJson>(json).unwrap().into_cloud().unwrap();
        assert_eq!(cloud.distance(0, 1), 0.5);
        let bad = r#"{"points": [[0.0]], "metric": "taxicab"}"#;
        assert!(serde_json::from_str::<CloudJson>(bad).unwrap().into_cloud().is_err());
    }
}
