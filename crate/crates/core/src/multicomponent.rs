//! Orders on `K` copies of a spacetime patch, one per matrix block of
//! `⊕ₖ M_{n_k}(ℂ)`: a partition of `{0, …, K−1}²` into `P` and `P°` cells plus a
//! table of cone parameters `Λ_{k,l}` define
//!
//! ```text
//! (k,x) ⪯ (l,y) ⇔ y − x ∈ C(Λ_{k,l})   for (k,l) ∈ P
//! (k,x) ⪯ (l,y) ⇔ y − x ∈ C°(Λ_{k,l})  for (k,l) ∈ P°
//! ```
//!
//! Rules R, A, T1, T2, T3 are necessary and sufficient for this to be an
//! order; rule O asks `Λ_{k,k} > 0` on every block of size at least 2.
//! Indices are 0-based; the printed tables label rows and columns from 1.

use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lorentz::LorentzPatch;
use crate::order_core::{euclidean_distance, validate_order, FiniteOrder, OrderError, OrderReport, Relation, Scale};

/// Largest `K` accepted by [`enumerate_valid_tables`].
pub const MAX_ENUMERATION_BLOCKS: usize = 4;

#[derive(Debug, Error)]
pub enum MultiError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Λ[{k}][{l}] = {value} must be a finite non-negative number")]
    NegativeLambda { k: usize, l: usize, value: f64 },
    #[error("cell ({k},{l}) is in P and needs Λ > 0")]
    ZeroLambdaInP { k: usize, l: usize },
    #[error("enumeration supports at most {max} blocks, got {k}")]
    TooLarge { k: usize, max: usize },
    #[error("rules fail: {0}")]
    RulesFailed(RuleReport),
    #[error("component {0} has a block of size 1; its order may be arbitrarily fine")]
    Commutative(usize),
    #[error("relation is not an order: {0}")]
    NotAnOrder(OrderReport),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cell {
    /// Zero vector excluded, `C(Λ)`.
    P,
    /// Zero vector admitted, `C°(Λ)`.
    Po,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cell::P => "P",
            Cell::Po => "Po",
        })
    }
}

/// `{"profile": [...], "partition": [["Po", "P", ...], ...], "lambda": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSystem {
    pub profile: Vec<usize>,
    pub partition: Vec<Vec<Cell>>,
    pub lambda: Vec<Vec<f64>>,
}

impl LambdaSystem {
    pub fn blocks(&self) -> usize {
        self.profile.len()
    }

    /// Shapes, `Λ ≥ 0`, and `Λ > 0` on `P` cells.
    pub fn check(&self) -> Result<(), MultiError> {
        let k = self.profile.len();
        if k == 0 {
            return Err(MultiError::Dimension("empty profile".into()));
        }
        if let Some(i) = self.profile.iter().position(|&n| n == 0) {
            return Err(MultiError::Dimension(format!("block {i} has size 0")));
        }
        if self.partition.len() != k || self.partition.iter().any(|r| r.len() != k) {
            return Err(MultiError::Dimension(format!("partition is not {k}×{k}")));
        }
        if self.lambda.len() != k || self.lambda.iter().any(|r| r.len() != k) {
            return Err(MultiError::Dimension(format!("Λ table is not {k}×{k}")));
        }
        for a in 0..k {
            for b in 0..k {
                let value = self.lambda[a][b];
                if !(value >= 0.0) || !value.is_finite() {
                    return Err(MultiError::NegativeLambda { k: a, l: b, value });
                }
                if self.partition[a][b] == Cell::P && value == 0.0 {
                    return Err(MultiError::ZeroLambdaInP { k: a, l: b });
                }
            }
        }
        Ok(())
    }

    /// Every `Λ` multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            lambda: self
                .lambda
                .iter()
                .map(|r| r.iter().map(|v| v * factor).collect())
                .collect(),
            ..self.clone()
        }
    }

    /// Side-by-side partition and Λ tables, rows and columns labelled from 1.
    pub fn render(&self) -> String {
        let k = self.blocks();
        let fmt_l = |v: f64| {
            if v == v.trunc() {
                format!("{}", v as i64)
            } else {
                format!("{v}")
            }
        };
        let lam: Vec<Vec<String>> = self.lambda.iter().map(|r| r.iter().map(|&v| fmt_l(v)).collect()).collect();
        let wl = lam.iter().flatten().map(String::len).max().unwrap_or(1).max(k.to_string().len());
        let wp = 2.max(k.to_string().len());
        let mut out = String::new();
        let header = |w: usize| {
            let mut h = "k\\l".to_string();
            for l in 1..=k {
                h.push_str(&format!(" | {:>w$}", l));
            }
            h
        };
        out.push_str(&format!("{}    {}\n", header(wp), header(wl)));
        for a in 0..k {
            let mut left = format!("{:>3}", a + 1);
            let mut right = format!("{:>3}", a + 1);
            for b in 0..k {
                left.push_str(&format!(" | {:>wp$}", self.partition[a][b].to_string()));
                right.push_str(&format!(" | {:>wl$}", lam[a][b]));
            }
            out.push_str(&format!("{left}    {right}\n"));
        }
        out
    }
}

/// `ℂ ⊕ M₂ ⊕ M₃` with the hand-built solution using as few nonzero `Λ`
/// as possible, all equal to `lam`.
pub fn reference_system(lam: f64) -> LambdaSystem {
    use Cell::{Po, P};
    LambdaSystem {
        profile: vec![1, 2, 3],
        partition: vec![vec![Po, P, P], vec![Po, Po, Po], vec![Po, P, Po]],
        lambda: vec![vec![0.0, lam, lam], vec![0.0, lam, 0.0], vec![0.0, lam, lam]],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    R,
    A,
    T1,
    T2,
    T3,
    O,
}

pub const RULES: [Rule; 6] = [Rule::R, Rule::A, Rule::T1, Rule::T2, Rule::T3, Rule::O];

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// First violating index tuple per rule (empty status = pass).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleReport {
    pub statuses: Vec<(Rule, Option<Vec<usize>>)>,
    /// First `(k,l) ∈ P°` breaking `Λ_{k,l} ≤ min(Λ_{k,k}, Λ_{l,l})` or
    /// `Λ_{l,k} ≥ max(Λ_{k,k}, Λ_{l,l})`.
    pub t2_consequence: Option<(usize, usize)>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.statuses.iter().all(|(_, w)| w.is_none())
    }

    /// Passes the order rules R, A, T1–T3 (rule O may still fail).
    pub fn is_order(&self) -> bool {
        self.statuses.iter().all(|(r, w)| *r == Rule::O || w.is_none())
    }

    pub fn witness(&self, rule: Rule) -> Option<&[usize]> {
        self.statuses
            .iter()
            .find(|(r, _)| *r == rule)
            .and_then(|(_, w)| w.as_deref())
    }

    pub fn failed_rules(&self) -> Vec<Rule> {
        self.statuses.iter().filter(|(_, w)| w.is_some()).map(|(r, _)| *r).collect()
    }
}

impl fmt::Display for RuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .statuses
            .iter()
            .map(|(r, w)| match w {
                None => format!("{r} ok"),
                Some(w) => format!("{r} fails at {w:?}"),
            })
            .collect();
        write!(f, "{}", parts.join(", "))?;
        if let Some((k, l)) = self.t2_consequence {
            write!(f, "; T2 bounds fail at ({k},{l})")?;
        }
        Ok(())
    }
}

const RULE_TOL: f64 = 1e-12;

fn geq(a: f64, b: f64) -> bool {
    a >= b - RULE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Checks all six rules exhaustively over index triples.
pub fn validate_rules(system: &LambdaSystem) -> Result<RuleReport, MultiError> {
    system.check()?;
    Ok(rule_report(system))
}

fn rule_report(system: &LambdaSystem) -> RuleReport {
    let k = system.blocks();
    let part = &system.partition;
    let lam = &system.lambda;
    let po = |a: usize, b: usize| part[a][b] == Cell::Po;
    let first = |f: &dyn Fn(usize, usize, usize) -> bool| -> Option<Vec<usize>> {
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if !f(a, b, c) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
        }
        None
    };
    let r = (0..k).find(|&a| !po(a, a)).map(|a| vec![a]);
    let a_rule = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .find(|&(a, b)| a != b && !(part[a][b] == Cell::P || part[b][a] == Cell::P))
        .map(|(a, b)| vec![a, b]);
    let t1 = first(&|a, b, c| geq(lam[a][b] + lam[b][c], lam[a][c]));
    let t2 = first(&|a, b, c| !po(a, b) || (geq(lam[b][c], lam[a][c]) && geq(lam[c][a], lam[c][b])));
    let t3 = first(&|a, b, c| !(po(a, b) && po(b, c)) || po(a, c));
    let o = (0..k)
        .find(|&a| system.profile[a] >= 2 && !(lam[a][a] > 0.0))
        .map(|a| vec![a]);
    let t2_consequence = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).find(|&(a, b)| {
        po(a, b)
            && !(geq(lam[a][a].min(lam[b][b]), lam[a][b]) && geq(lam[b][a], lam[a][a].max(lam[b][b])))
    });
    RuleReport {
        statuses: vec![
            (Rule::R, r),
            (Rule::A, a_rule),
            (Rule::T1, t1),
            (Rule::T2, t2),
            (Rule::T3, t3),
            (Rule::O, o),
        ],
        t2_consequence,
    }
}

fn canonical_key(system: &LambdaSystem) -> (Vec<Cell>, Vec<bool>) {
    (
        system.partition.iter().flatten().copied().collect(),
        system.lambda.iter().flatten().map(|&v| v > 0.0).collect(),
    )
}

/// Every partition and two-level `{0, lam}` table passing all six rules,
/// sorted canonically (partition cells row-major with `P < Po`, then the
/// zero/nonzero pattern of `Λ`).
///
/// Partitions are generated with `P°` on the diagonal (R) and at least one
/// `P` in each off-diagonal pair (A), then filtered by T3 before any `Λ`
/// is assigned. `P` cells take `lam`; `P°` cells take `0` or `lam`.
pub fn enumerate_valid_tables(profile: &[usize], lam: f64) -> Result<Vec<LambdaSystem>, MultiError> {
    let k = profile.len();
    if k == 0 || k > MAX_ENUMERATION_BLOCKS {
        return Err(MultiError::TooLarge {
            k,
            max: MAX_ENUMERATION_BLOCKS,
        });
    }
    if !(lam > 0.0) || !lam.is_finite() {
        return Err(MultiError::NegativeLambda { k: 0, l: 0, value: lam });
    }
    let off: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let patterns = 3usize.pow(off.len() as u32);
    let partitions: Vec<Vec<Vec<Cell>>> = (0..patterns)
        .filter_map(|mut code| {
            let mut part = vec![vec![Cell::P; k]; k];
            for a in 0..k {
                part[a][a] = Cell::Po;
            }
            for &(a, b) in &off {
                let (x, y) = match code % 3 {
                    0 => (Cell::P, Cell::P),
                    1 => (Cell::P, Cell::Po),
                    _ => (Cell::Po, Cell::P),
                };
                part[a][b] = x;
                part[b][a] = y;
                code /= 3;
            }
            let t3 = (0..k).all(|a| {
                (0..k).all(|b| (0..k).all(|c| !(part[a][b] == Cell::Po && part[b][c] == Cell::Po) || part[a][c] == Cell::Po))
            });
            t3.then_some(part)
        })
        .collect();
    let mut out: Vec<LambdaSystem> = partitions
        .par_iter()
        .flat_map_iter(|part| {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|a| (0..k).map(move |b| (a, b)))
                .filter(|&(a, b)| part[a][b] == Cell::Po)
                .collect();
            (0..1usize << free.len()).filter_map(move |bits| {
                let mut lambda = vec![vec![lam; k]; k];
                for (i, &(a, b)) in free.iter().enumerate() {
                    if bits >> i & 1 == 0 {
                        lambda[a][b] = 0.0;
                    }
                }
                let system = LambdaSystem {
                    profile: profile.to_vec(),
                    partition: part.clone(),
                    lambda,
                };
                rule_report(&system).passed().then_some(system)
            })
        })
        .collect();
    out.sort_by_cached_key(canonical_key);
    Ok(out)
}

/// Index of `(k, i)` among `K·N` composite points.
pub fn composite(k: usize, i: usize, n: usize) -> usize {
    k * n + i
}

/// Inverse of [`composite`].
pub fn split_composite(a: usize, n: usize) -> (usize, usize) {
    (a / n, a % n)
}

fn related(system: &LambdaSystem, x: &[f64], y: &[f64], k: usize, l: usize) -> bool {
    let lam = system.lambda[k][l];
    let dt = y[0] - x[0];
    let tail: f64 = x[1..].iter().zip(&y[1..]).map(|(a, b)| (a - b) * (a - b)).sum();
    if dt == 0.0 && tail == 0.0 {
        return system.partition[k][l] == Cell::Po || lam == 0.0;
    }
    dt >= 0.0 && dt * dt - tail >= lam * lam
}

/// The full relation `⪯` (diagonal included when it holds), no rule check.
pub fn mixed_preorder_unchecked(patch: &LorentzPatch, system: &LambdaSystem) -> Result<Relation, MultiError> {
    if patch.dim() < 2 {
        return Err(MultiError::Dimension("patch dimension below 2".into()));
    }
    let n = patch.len();
    let k = system.blocks();
    let pts = patch.points();
    let rows: Vec<FixedBitSet> = (0..k * n)
        .into_par_iter()
        .map(|a| {
            let (ka, i) = split_composite(a, n);
            let mut row = FixedBitSet::with_capacity(k * n);
            for lb in 0..k {
                for (j, q) in pts.iter().enumerate() {
                    if related(system, &pts[i].coords, &q.coords, ka, lb) {
                        row.insert(composite(lb, j, n));
                    }
                }
            }
            row
        })
        .collect();
    Ok(Relation::from_rows(k * n, rows)?)
}

/// Axiom failures of a relation read as `⪯` (reflexive form).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreorderReport {
    pub reflexivity: Option<usize>,
    pub antisymmetry: Option<(usize, usize)>,
    pub transitivity: Option<(usize, usize, usize)>,
}

impl PreorderReport {
    pub fn is_order(&self) -> bool {
        self.reflexivity.is_none() && self.antisymmetry.is_none() && self.transitivity.is_none()
    }
}

pub fn check_preorder(rel: &Relation) -> PreorderReport {
    let n = rel.size();
    let reflexivity = (0..n).find(|&a| !rel.contains(a, a));
    let antisymmetry = rel.pairs().find(|&(a, b)| a != b && rel.contains(b, a));
    let transitivity = rel.pairs().find_map(|(a, b)| {
        rel.row(b)
            .ones()
            .find(|&c| !rel.contains(a, c))
            .map(|c| (a, b, c))
    });
    PreorderReport {
        reflexivity,
        antisymmetry,
        transitivity,
    }
}

/// Strict part of `⪯` over the `K·N` composite points; all six rules must pass.
pub fn mk_mixed_order(patch: &LorentzPatch, system: &LambdaSystem) -> Result<FiniteOrder, MultiError> {
    let report = validate_rules(system)?;
    if !report.passed() {
        return Err(MultiError::RulesFailed(report));
    }
    let mut rel = mixed_preorder_unchecked(patch, system)?;
    let rows: Vec<FixedBitSet> = (0..rel.size())
        .map(|a| {
            let mut r = rel.row(a).clone();
            r.set(a, false);
            r
        })
        .collect();
    rel = Relation::from_rows(rel.size(), rows)?;
    let check = validate_order(&rel);
    if !check.is_valid() {
        return Err(MultiError::NotAnOrder(check));
    }
    Ok(FiniteOrder::new(rel)?)
}

/// `ε_k = min` Euclidean distance between strictly related points of
/// component `k`; only defined when `n_k ≥ 2`.
pub fn component_incomparability(
    patch: &LorentzPatch,
    order: &FiniteOrder,
    system: &LambdaSystem,
    k: usize,
) -> Result<Scale, MultiError> {
    let n = patch.len();
    if k >= system.blocks() {
        return Err(MultiError::Dimension(format!("component {k} out of range")));
    }
    if order.size() != n * system.blocks() {
        return Err(MultiError::Dimension(format!(
            "order on {} points for {} components of {n}",
            order.size(),
            system.blocks()
        )));
    }
    if system.profile[k] < 2 {
        return Err(MultiError::Commutative(k));
    }
    let pts = patch.points();
    let mut eps = Scale::Unbounded;
    for i in 0..n {
        for j in order.relation().row(composite(k, i, n)).ones() {
            let (l, jj) = split_composite(j, n);
            if l == k {
                eps = eps.min(Scale::Finite(euclidean_distance(&pts[i].coords, &pts[jj].coords)));
            }
        }
    }
    Ok(eps)
}
