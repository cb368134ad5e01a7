//! Finite-dimensional isocones: local cones per matrix block, their
//! lexicographic sum over a finite poset of sites, the order induced on
//! pure states, and the order reconstructed from sampled elements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermitian::{
    apply_isotone, pure_state_eval, random_hermitian, spec_bounds, HermitianError, HermitianMatrix,
    IsotoneFunction, PureStateVector,
};
use crate::order_core::{levin_utility, Comparison, FiniteOrder, OrderError, UtilityFunction};
use crate::qubit_geometry::{
    bloch_map, density_matrix, qubit_order, CapJson, CapMesh, CapRegion, GeometryError, Hemisphere,
    QubitCone, SpherePoint,
};

/// Membership and tie tolerance.
pub const LEX_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum IsoconeError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid local cone: {0}")]
    LocalCone(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
}

/// The isocone of one matrix block.
///
/// Every block size except 2 only admits the full cone `Re M_n(ℂ)`, which
/// orders pure states trivially. Size-2 blocks carry a Bloch-sphere region;
/// the full cone of `M₂(ℂ)` is `Qubit` over the whole sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalIsocone {
    Trivial(usize),
    Qubit(QubitCone),
}

impl LocalIsocone {
    /// The full cone `Re M_n(ℂ)` for any `n ≥ 1`.
    pub fn full(n: usize) -> Self {
        if n == 2 {
            LocalIsocone::Qubit(QubitCone::new(CapRegion::WholeSphere))
        } else {
            LocalIsocone::Trivial(n)
        }
    }

    pub fn qubit(cap: CapRegion) -> Self {
        LocalIsocone::Qubit(QubitCone::new(cap))
    }

    pub fn dim(&self) -> usize {
        match self {
            LocalIsocone::Trivial(n) => *n,
            LocalIsocone::Qubit(_) => 2,
        }
    }

    fn check(&self) -> Result<(), IsoconeError> {
        match self {
            LocalIsocone::Trivial(0) => Err(IsoconeError::LocalCone("block size 0".into())),
            LocalIsocone::Trivial(2) => Err(IsoconeError::LocalCone(
                "size-2 blocks take a qubit cone (whole sphere for the full cone)".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, block: &HermitianMatrix, tol: f64) -> Result<bool, IsoconeError> {
        if block.dim() != self.dim() {
            return Err(IsoconeError::Shape(format!(
                "block of size {} for a cone of size {}",
                block.dim(),
                self.dim()
            )));
        }
        match self {
            LocalIsocone::Trivial(_) => Ok(true),
            LocalIsocone::Qubit(cone) => Ok(cone.contains(block, tol)?),
        }
    }

    /// A random element: Gaussian Hermitian blocks for the full cone,
    /// cone generators with random radial scale and shift for qubits.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> HermitianMatrix {
        match self {
            LocalIsocone::Trivial(n) => random_hermitian(rng, *n, 1.0),
            LocalIsocone::Qubit(cone) => cone.random_element(rng),
        }
    }

    /// Order of two pure states of this block.
    pub fn compare(
        &self,
        s: &PureStateVector,
        t: &PureStateVector,
        mesh_deg: f64,
    ) -> Result<Comparison, IsoconeError> {
        match self {
            LocalIsocone::Trivial(_) => {
                let diff = HermitianMatrix::projector(s)
                    .sub(&HermitianMatrix::projector(t))?
                    .frobenius_norm();
                Ok(if diff <= LEX_TOL {
                    Comparison::Equal
                } else {
                    Comparison::Incomparable
                })
            }
            LocalIsocone::Qubit(cone) => {
                let p = bloch_map(s)?;
                let q = bloch_map(t)?;
                Ok(qubit_order(&cone.cap, &p, &q, mesh_deg)?.comparison)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConeJson {
    Trivial { trivial: usize },
    Qubit { qubit: CapJson },
}

/// `{"profile": [...], "strict": [[i, j], ...], "cones": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexJson {
    pub profile: Vec<usize>,
    pub strict: Vec<[usize; 2]>,
    pub cones: Vec<ConeJson>,
}

/// Lexicographic sum of local isocones over a finite poset of sites.
#[derive(Debug, Clone)]
pub struct LexIsocone {
    poset: FiniteOrder,
    cones: Vec<LocalIsocone>,
    utility: UtilityFunction,
}

impl LexIsocone {
    pub fn new(poset: FiniteOrder, cones: Vec<LocalIsocone>) -> Result<Self, IsoconeError> {
        if poset.size() != cones.len() {
            return Err(IsoconeError::Shape(format!(
                "{} sites but {} local cones",
                poset.size(),
                cones.len()
            )));
        }
        if cones.is_empty() {
            return Err(IsoconeError::Shape("no sites".into()));
        }
        for cone in &cones {
            cone.check()?;
        }
        let utility = levin_utility(&poset);
        Ok(Self {
            poset,
            cones,
            utility,
        })
    }

    pub fn from_json(json: &LexJson) -> Result<Self, IsoconeError> {
        if json.profile.len() != json.cones.len() {
            return Err(IsoconeError::Shape(format!(
                "profile has {} sites but {} cones are given",
                json.profile.len(),
                json.cones.len()
            )));
        }
        let pairs: Vec<(usize, usize)> = json.strict.iter().map(|p| (p[0], p[1])).collect();
        let poset = FiniteOrder::from_pairs(json.profile.len(), &pairs)?;
        let cones = json
            .cones
            .iter()
            .zip(&json.profile)
            .map(|(c, &n)| {
                let cone = match c {
                    ConeJson::Trivial { trivial } => LocalIsocone::Trivial(*trivial),
                    ConeJson::Qubit { qubit } => LocalIsocone::qubit(CapRegion::from_json(qubit)?),
                };
                if cone.dim() != n {
                    return Err(IsoconeError::Shape(format!(
                        "cone of size {} at a site of size {n}",
                        cone.dim()
                    )));
                }
                Ok(cone)
            })
            .collect::<Result<Vec<_>, IsoconeError>>()?;
        Self::new(poset, cones)
    }

    pub fn to_json(&self) -> LexJson {
        LexJson {
            profile: self.profile(),
            strict: self.poset.strict_pairs().map(|(x, y)| [x, y]).collect(),
            cones: self
                .cones
                .iter()
                .map(|c| match c {
                    LocalIsocone::Trivial(n) => ConeJson::Trivial { trivial: *n },
                    LocalIsocone::Qubit(q) => ConeJson::Qubit { qubit: q.cap.to_json() },
                })
                .collect(),
        }
    }

    pub fn poset(&self) -> &FiniteOrder {
        &self.poset
    }

    pub fn cones(&self) -> &[LocalIsocone] {
        &self.cones
    }

    pub fn sites(&self) -> usize {
        self.cones.len()
    }

    pub fn profile(&self) -> Vec<usize> {
        self.cones.iter().map(LocalIsocone::dim).collect()
    }

    /// Longest-chain utility of the site poset.
    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }

    /// Element `g(x)·1` for a site function `g`.
    pub fn scalar_element(&self, values: &[f64]) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .cones
                .iter()
                .zip(values)
                .map(|(c, &v)| HermitianMatrix::scalar(c.dim(), v).expect("positive size"))
                .collect(),
        }
    }

    pub fn constant(&self, c: f64) -> AlgebraElement {
        self.scalar_element(&vec![c; self.sites()])
    }

    fn check_shape(&self, a: &AlgebraElement) -> Result<(), IsoconeError> {
        if a.blocks.len() != self.sites() {
            return Err(IsoconeError::Shape(format!(
                "{} blocks for {} sites",
                a.blocks.len(),
                self.sites()
            )));
        }
        for (x, (b, c)) in a.blocks.iter().zip(&self.cones).enumerate() {
            if b.dim() != c.dim() {
                return Err(IsoconeError::Shape(format!(
                    "block {x} has size {} but the site has size {}",
                    b.dim(),
                    c.dim()
                )));
            }
        }
        Ok(())
    }

    fn check_state(&self, s: &SitedPureState) -> Result<(), IsoconeError> {
        match self.cones.get(s.site) {
            None => Err(IsoconeError::Shape(format!("site {} out of range", s.site))),
            Some(c) if c.dim() != s.state.dim() => Err(IsoconeError::Shape(format!(
                "state of dimension {} at site {} of size {}",
                s.state.dim(),
                s.site,
                c.dim()
            ))),
            Some(_) => Ok(()),
        }
    }

    /// Uniform site, Haar-random state.
    pub fn random_state<R: Rng + ?Sized>(&self, rng: &mut R) -> SitedPureState {
        let site = rng.gen_range(0..self.sites());
        SitedPureState {
            site,
            state: PureStateVector::random(rng, self.cones[site].dim()),
        }
    }
}

/// `ℂ ⊕ M₂ ⊕ M₃ ⊕ M₂` over the diamond `0 ≺ 1, 2 ≺ 3` with `1 ∥ 2`: a 30°
/// polar cap at site 1, the full cone at site 2 and a spherical triangle
/// at site 3.
pub fn diamond_algebra() -> LexIsocone {
    let poset = FiniteOrder::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)])
        .expect("diamond is an order");
    let cap = CapRegion::cap(SpherePoint::north(), 30f64.to_radians()).expect("valid cap");
    let tri = CapRegion::intersection(vec![
        Hemisphere::new(SpherePoint::new([1.0, 0.0, 0.0]).unwrap(), 0.2).unwrap(),
        Hemisphere::new(SpherePoint::new([0.0, 1.0, 0.0]).unwrap(), 0.1).unwrap(),
        Hemisphere::new(SpherePoint::new([0.0, 0.0, 1.0]).unwrap(), 0.0).unwrap(),
    ])
    .expect("valid triangle");
    LexIsocone::new(
        poset,
        vec![
            LocalIsocone::Trivial(1),
            LocalIsocone::qubit(cap),
            LocalIsocone::Trivial(3),
            LocalIsocone::qubit(tri),
        ],
    )
    .expect("consistent shapes")
}

/// `(a_x)_{x ∈ P}`, one Hermitian block per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub blocks: Vec<HermitianMatrix>,
}

impl AlgebraElement {
    pub fn add(&self, other: &Self) -> Result<Self, IsoconeError> {
        if self.blocks.len() != other.blocks.len() {
            return Err(IsoconeError::Shape("block counts differ".into()));
        }
        Ok(Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b.scale(factor)).collect(),
        }
    }

    pub fn shift(&self, c: f64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b.shift(c)).collect(),
        }
    }

    /// Blockwise functional calculus.
    pub fn apply(&self, f: &IsotoneFunction) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| apply_isotone(b, f)).collect(),
        }
    }

    /// `ξ† a_x ξ` for a state at site `x`.
    pub fn eval(&self, s: &SitedPureState) -> Result<f64, IsoconeError> {
        let block = self
            .blocks
            .get(s.site)
            .ok_or_else(|| IsoconeError::Shape(format!("site {} out of range", s.site)))?;
        Ok(pure_state_eval(block, &s.state)?)
    }

    /// All blocks equal to the same multiple of the identity.
    pub fn is_constant(&self, tol: f64) -> bool {
        let first = match self.blocks.first() {
            Some(b) => b.get(0, 0).re,
            None => return true,
        };
        self.blocks
            .iter()
            .all(|b| b.is_scalar(tol) && (b.get(0, 0).re - first).abs() <= tol)
    }
}

/// A pure state of one block, `(x, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SitedPureState {
    pub site: usize,
    pub state: PureStateVector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Membership {
    Member,
    BlockOutsideCone { site: usize },
    GapViolation { x: usize, y: usize, max_x: f64, min_y: f64 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

fn gap_tol(a: f64, b: f64) -> f64 {
    LEX_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Local cone membership of every block plus `max σ(a_x) ≤ min σ(a_y)` on
/// every strict pair `x ≺ y`.
pub fn lex_membership(a: &AlgebraElement, lex: &LexIsocone) -> Result<Membership, IsoconeError> {
    lex.check_shape(a)?;
    for (site, (b, c)) in a.blocks.iter().zip(&lex.cones).enumerate() {
        if !c.contains(b, LEX_TOL)? {
            return Ok(Membership::BlockOutsideCone { site });
        }
    }
    let bounds: Vec<(f64, f64)> = a.blocks.iter().map(spec_bounds).collect();
    for (x, y) in lex.poset.strict_pairs() {
        let max_x = bounds[x].1;
        let min_y = bounds[y].0;
        if max_x > min_y + gap_tol(max_x, min_y) {
            return Ok(Membership::GapViolation { x, y, max_x, min_y });
        }
    }
    Ok(Membership::Member)
}

/// `(x, φ) ≤ (y, ψ) ⇔ x ≺ y or (x = y and φ ≤ ψ locally)`.
pub fn induced_order(
    lex: &LexIsocone,
    s: &SitedPureState,
    t: &SitedPureState,
    mesh_deg: f64,
) -> Result<Comparison, IsoconeError> {
    lex.check_state(s)?;
    lex.check_state(t)?;
    if s.site == t.site {
        lex.cones[s.site].compare(&s.state, &t.state, mesh_deg)
    } else {
        Ok(lex.poset.compare(s.site, t.site))
    }
}

fn witness_elements(lex: &LexIsocone) -> Vec<AlgebraElement> {
    let mut out = vec![lex.constant(1.0), lex.constant(-1.0)];
    out.push(lex.scalar_element(&lex.utility.values));
    // Indicators of principal up-sets separate incomparable sites.
    for x in 0..lex.sites() {
        let up: Vec<f64> = (0..lex.sites())
            .map(|y| if lex.poset.less_eq(x, y) { 1.0 } else { 0.0 })
            .collect();
        out.push(lex.scalar_element(&up));
    }
    out
}

/// One random element built from independent local-cone blocks `F`.
///
/// Even draws return `F′ + Λg` with `F′ = F − min σ(F)` and
/// `Λ = max σ(F′)`; odd draws return `e^{Ωg}(F′ + 1)` with `Ω = ln max σ(F′ + 1)`.
fn random_member<R: Rng + ?Sized>(lex: &LexIsocone, rng: &mut R, exponential: bool) -> AlgebraElement {
    let f = AlgebraElement {
        blocks: lex.cones.iter().map(|c| c.random_element(rng)).collect(),
    };
    let bounds: Vec<(f64, f64)> = f.blocks.iter().map(spec_bounds).collect();
    let m = bounds.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
    let g = &lex.utility.values;
    if !exponential {
        let f_pos = f.shift(-m);
        let lam = bounds.iter().map(|b| b.1 - m).fold(0.0, f64::max);
        AlgebraElement {
            blocks: f_pos
                .blocks
                .iter()
                .zip(g)
                .map(|(b, &gx)| b.shift(lam * gx))
                .collect(),
        }
    } else {
        let f_pos = f.shift(1.0 - m);
        let top = bounds.iter().map(|b| b.1 - m + 1.0).fold(1.0, f64::max);
        let omega = top.ln();
        AlgebraElement {
            blocks: f_pos
                .blocks
                .iter()
                .zip(g)
                .map(|(b, &gx)| b.scale((omega * gx).exp()))
                .collect(),
        }
    }
}

/// Witness elements (constants `±1`, the utility `g`, up-set indicators)
/// followed by `count` random members, deterministic in `seed`.
pub fn sample_elements(lex: &LexIsocone, count: usize, seed: u64) -> Vec<AlgebraElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = witness_elements(lex);
    out.extend((0..count).map(|i| random_member(lex, &mut rng, i % 2 == 1)));
    out
}

/// [`sample_elements`] plus, for each qubit site, the generator
/// `½(1 + x·σ) + g` at every point `x` of a cap mesh.
pub fn sample_elements_with_generators(
    lex: &LexIsocone,
    count: usize,
    seed: u64,
    mesh_deg: f64,
) -> Vec<AlgebraElement> {
    let mut out = sample_elements(lex, count, seed);
    let base = lex.scalar_element(&lex.utility.values);
    for (site, cone) in lex.cones.iter().enumerate() {
        if let LocalIsocone::Qubit(q) = cone {
            for x in CapMesh::build(&q.cap, mesh_deg).points() {
                let mut e = base.clone();
                e.blocks[site] = density_matrix(x).shift(lex.utility.values[site]);
                out.push(e);
            }
        }
    }
    out
}

/// Random state pairs: every tenth pair repeats its first state, half of
/// the rest share a site, the others are independent.
pub fn random_state_pairs<R: Rng + ?Sized>(
    lex: &LexIsocone,
    count: usize,
    rng: &mut R,
) -> Vec<(SitedPureState, SitedPureState)> {
    (0..count)
        .map(|i| {
            let s = lex.random_state(rng);
            let t = if i % 10 == 0 {
                s.clone()
            } else if rng.gen_bool(0.5) {
                SitedPureState {
                    site: s.site,
                    state: PureStateVector::random(rng, s.state.dim()),
                }
            } else {
                lex.random_state(rng)
            };
            (s, t)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalDecision {
    pub comparison: Comparison,
    /// Every element is a global constant, so nothing can be separated.
    pub degenerate: bool,
}

/// `φ ≤ ψ ⇔ φ(a) ≤ ψ(a)` for every sampled `a`, at tolerance [`LEX_TOL`].
pub fn empirical_order(
    elems: &[AlgebraElement],
    s: &SitedPureState,
    t: &SitedPureState,
) -> Result<EmpiricalDecision, IsoconeError> {
    if elems.is_empty() {
        return Err(IsoconeError::Shape("no elements".into()));
    }
    let mut le = true;
    let mut ge = true;
    let mut degenerate = true;
    for a in elems {
        let u = a.eval(s)?;
        let v = a.eval(t)?;
        let tol = gap_tol(u, v);
        le &= u <= v + tol;
        ge &= v <= u + tol;
        degenerate &= a.is_constant(LEX_TOL);
    }
    Ok(EmpiricalDecision {
        comparison: Comparison::from_flags(le, ge),
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub constants_ok: bool,
    pub sums_checked: usize,
    /// Index pairs whose sum left the cone.
    pub sum_failures: Vec<(usize, usize)>,
    pub calculus_checked: usize,
    /// Indices whose image under `f` left the cone.
    pub calculus_failures: Vec<usize>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.constants_ok && self.sum_failures.is_empty() && self.calculus_failures.is_empty()
    }
}

/// Closure under constants, sums (on `pairs` seeded random pairs) and the
/// isotone calculus `f`. Norm closure cannot be checked on finite samples.
pub fn isocone_axiom_suite(
    lex: &LexIsocone,
    elems: &[AlgebraElement],
    f: &IsotoneFunction,
    pairs: usize,
    seed: u64,
) -> Result<AxiomReport, IsoconeError> {
    let mut constants_ok = true;
    for c in [-2.5, 0.0, 1.0, 7.0] {
        constants_ok &= lex_membership(&lex.constant(c), lex)?.is_member();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum_failures = Vec::new();
    let mut sums_checked = 0;
    let indices: Vec<usize> = (0..elems.len()).collect();
    if elems.len() >= 2 {
        for _ in 0..pairs {
            let pick: Vec<usize> = indices.choose_multiple(&mut rng, 2).copied().collect();
            let (i, j) = (pick[0], pick[1]);
            sums_checked += 1;
            if !lex_membership(&elems[i].add(&elems[j])?, lex)?.is_member() {
                sum_failures.push((i, j));
            }
        }
    }
    let mut calculus_failures = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        if !lex_membership(&a.apply(f), lex)?.is_member() {
            calculus_failures.push(i);
        }
    }
    Ok(AxiomReport {
        constants_ok,
        sums_checked,
        sum_failures,
        calculus_checked: elems.len(),
        calculus_failures,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    /// `(element, x, y)` with `x ≺ y` but `max σ(a_x) > min σ(a_y)`.
    pub strict_violations: Vec<(usize, usize, usize)>,
    /// For every ordered pair of incomparable sites, the first element
    /// violating `max σ(a_x) ≤ min σ(a_y)`, if any.
    pub incomparable_witnesses: Vec<((usize, usize), Option<usize>)>,
}

impl SpectralReport {
    pub fn passed(&self) -> bool {
        self.strict_violations.is_empty() && self.incomparable_witnesses.iter().all(|(_, w)| w.is_some())
    }
}

/// Checks the spectral gap on strict site pairs and looks for elements
/// that break it on incomparable ones.
pub fn spectral_criterion(lex: &LexIsocone, elems: &[AlgebraElement]) -> Result<SpectralReport, IsoconeError> {
    let mut bounds = Vec::with_capacity(elems.len());
    for a in elems {
        lex.check_shape(a)?;
        bounds.push(a.blocks.iter().map(spec_bounds).collect::<Vec<_>>());
    }
    let breaks = |b: &[(f64, f64)], x: usize, y: usize| b[x].1 > b[y].0 + gap_tol(b[x].1, b[y].0);
    let mut strict_violations = Vec::new();
    for (x, y) in lex.poset.strict_pairs() {
        for (i, b) in bounds.iter().enumerate() {
            if breaks(b, x, y) {
                strict_violations.push((i, x, y));
            }
        }
    }
    let mut incomparable_witnesses = Vec::new();
    for x in 0..lex.sites() {
        for y in 0..lex.sites() {
            if x != y && !lex.poset.relation().comparable(x, y) {
                let w = bounds.iter().position(|b| breaks(b, x, y));
                incomparable_witnesses.push(((x, y), w));
            }
        }
    }
    Ok(SpectralReport {
        strict_violations,
        incomparable_witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn chain(n: usize, cones: Vec<LocalIsocone>) -> LexIsocone {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        LexIsocone::new(FiniteOrder::from_pairs(n, &pairs).unwrap(), cones).unwrap()
    }

    fn scalar_state(site: usize) -> SitedPureState {
        SitedPureState {
            site,
            state: PureStateVector::basis(1, 0),
        }
    }

    #[test]
    fn membership_on_scalar_chain() {
        let lex = chain(2, vec![LocalIsocone::Trivial(1), LocalIsocone::Trivial(1)]);
        assert!(lex_membership(&lex.scalar_element(&[0.0, 1.0]), &lex).unwrap().is_member());
        let bad = lex_membership(&lex.scalar_element(&[1.0, 0.0]), &lex).unwrap();
        assert!(matches!(bad, Membership::GapViolation { x: 0, y: 1, .. }));
        assert!(lex_membership(&lex.constant(-3.0), &lex).unwrap().is_member());
    }

    #[test]
    fn membership_with_qubit_block() {
        let lex = chain(2, vec![LocalIsocone::Trivial(1), LocalIsocone::full(2)]);
        let a = AlgebraElement {
            blocks: vec![
                HermitianMatrix::scalar(1, 1.0).unwrap(),
                HermitianMatrix::diagonal(&[0.0, 2.0]).unwrap(),
            ],
        };
        assert!(!lex_membership(&a, &lex).unwrap().is_member());
        let b = AlgebraElement {
            blocks: vec![
                HermitianMatrix::scalar(1, 0.0).unwrap(),
                HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap(),
            ],
        };
        assert!(lex_membership(&b, &lex).unwrap().is_member());
        let short = AlgebraElement { blocks: vec![] };
        assert!(lex_membership(&short, &lex).is_err());
    }

    #[test]
    fn trivial_two_is_rejected() {
        let r = LexIsocone::new(FiniteOrder::antichain(1), vec![LocalIsocone::Trivial(2)]);
        assert!(matches!(r, Err(IsoconeError::LocalCone(_))));
    }

    #[test]
    fn induced_order_examples() {
        let lex = diamond_algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s1 = scalar_state(0);
        let s4 = SitedPureState {
            site: 3,
            state: PureStateVector::random(&mut rng, 2),
        };
        assert_eq!(induced_order(&lex, &s1, &s4, 1.0).unwrap(), Comparison::LessOrEqual);
        let s2 = SitedPureState {
            site: 1,
            state: PureStateVector::random(&mut rng, 2),
        };
        let s3 = SitedPureState {
            site: 2,
            state: PureStateVector::random(&mut rng, 3),
        };
        assert_eq!(induced_order(&lex, &s2, &s3, 1.0).unwrap(), Comparison::Incomparable);
        let s3b = SitedPureState {
            site: 2,
            state: PureStateVector::random(&mut rng, 3),
        };
        assert_eq!(induced_order(&lex, &s3, &s3b, 1.0).unwrap(), Comparison::Incomparable);
        assert_eq!(induced_order(&lex, &s3, &s3, 1.0).unwrap(), Comparison::Equal);

        let hemi = LexIsocone::new(
            FiniteOrder::antichain(1),
            vec![LocalIsocone::qubit(CapRegion::hemisphere(SpherePoint::north()))],
        )
        .unwrap();
        let south = SitedPureState {
            site: 0,
            state: PureStateVector::basis(2, 1),
        };
        let north = SitedPureState {
            site: 0,
            state: PureStateVector::basis(2, 0),
        };
        assert_eq!(induced_order(&hemi, &south, &north, 1.0).unwrap(), Comparison::LessOrEqual);
    }

    #[test]
    fn samples_are_members() {
        let lex = diamond_algebra();
        for a in sample_elements(&lex, 200, 11) {
            assert!(lex_membership(&a, &lex).unwrap().is_member());
        }
        let chain3 = chain(3, vec![LocalIsocone::Trivial(1); 3]);
        for a in sample_elements(&chain3, 50, 1) {
            let v: Vec<f64> = a.blocks.iter().map(|b| b.get(0, 0).re).collect();
            assert!(v[0] <= v[1] + 1e-9 && v[1] <= v[2] + 1e-9);
        }
        let free = LexIsocone::new(FiniteOrder::antichain(2), vec![LocalIsocone::Trivial(3), LocalIsocone::full(2)]).unwrap();
        assert!(sample_elements(&free, 1, 0)
            .iter()
            .all(|a| lex_membership(a, &free).unwrap().is_member()));
    }

    #[test]
    fn empirical_examples() {
        let lex = chain(2, vec![LocalIsocone::Trivial(1), LocalIsocone::Trivial(1)]);
        let consts = vec![lex.constant(1.0), lex.constant(-2.0)];
        let d = empirical_order(&consts, &scalar_state(0), &scalar_state(1)).unwrap();
        assert_eq!(d.comparison, Comparison::Equal);
        assert!(d.degenerate);
        let elems = sample_elements(&lex, 20, 3);
        let d = empirical_order(&elems, &scalar_state(0), &scalar_state(1)).unwrap();
        assert_eq!(d.comparison, Comparison::LessOrEqual);
        assert!(!d.degenerate);
    }

    #[test]
    fn axiom_suite_passes_on_samples() {
        let lex = diamond_algebra();
        let elems = sample_elements(&lex, 60, 5);
        let report = isocone_axiom_suite(&lex, &elems, &IsotoneFunction::clip_below(0.0), 200, 9).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.sums_checked, 200);
    }

    #[test]
    fn spectral_criterion_on_diamond() {
        let lex = diamond_algebra();
        let elems = sample_elements(&lex, 50, 8);
        let report = spectral_criterion(&lex, &elems).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.incomparable_witnesses.len(), 2);
    }

    #[test]
    fn lex_json_round_trip() {
        let lex = diamond_algebra();
        let json = serde_json::to_string(&lex.to_json()).unwrap();
        let back = LexIsocone::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.profile(), vec![1, 2, 3, 2]);
        assert_eq!(back.cones(), lex.cones());
        let bad = LexJson {
            profile: vec![3],
            strict: vec![],
            cones: vec![ConeJson::Trivial { trivial: 2 }],
        };
        assert!(LexIsocone::from_json(&bad).is_err());
    }

    #[test]
    fn eval_matches_projector_trace() {
        let lex = diamond_algebra();
        let a = &sample_elements(&lex, 3, 2)[5];
        let xi = PureStateVector::normalized(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]).unwrap();
        let s = SitedPureState { site: 1, state: xi.clone() };
        let direct = pure_state_eval(&a.blocks[1], &xi).unwrap();
        assert_eq!(a.eval(&s).unwrap(), direct);
    }
}
