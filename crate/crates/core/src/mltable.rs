//! ML tables, the closed-form hypersurface entries, and the duality pairing
//! between critical points of matrix models of complementary rank.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::models::{grassmannian_2n, subsets, ModelSpec, ZeroPattern};
use crate::poly::C64;
use crate::random::generic_data;
use crate::solver::{solve, CriticalPoint, SolutionSet, SolveConfig, SolveStats};

type IndexSet = BTreeSet<usize>;

/// Regular on-model count of a seeded generic solve, with the count for a
/// second independent data vector as a stability check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlDegree {
    pub degree: usize,
    pub check: usize,
    pub seeds: [u64; 2],
    pub stats: SolveStats,
}

impl MlDegree {
    pub fn stable(&self) -> bool {
        self.degree == self.check
    }
}

pub fn ml_degree(model: &ModelSpec, seed: u64, config: &SolveConfig) -> Result<MlDegree> {
    let seeds = [seed, seed.wrapping_add(0x9e37_79b9)];
    let mut counts = [0; 2];
    let mut stats = SolveStats::default();
    for (k, &s) in seeds.iter().enumerate() {
        let u = generic_data(model.ncoords(), &BTreeSet::new(), s);
        let set = solve(model, &u, &ZeroPattern::empty(), &config.clone().with_seed(s))?;
        counts[k] = set.count_for(&BTreeSet::new());
        if k == 0 {
            stats = set.stats;
        }
    }
    Ok(MlDegree {
        degree: counts[0],
        check: counts[1],
        seeds,
        stats,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MLTable {
    pub model_name: String,
    pub model_hash: String,
    pub labels: Vec<String>,
    pub columns: Vec<IndexSet>,
    pub entries: BTreeMap<(IndexSet, IndexSet), usize>,
    pub proper: BTreeMap<(IndexSet, IndexSet), bool>,
}

/// Column sum with the comparison against the ML degree when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnBound {
    pub column: Vec<usize>,
    pub sum: usize,
    pub ml_degree: Option<usize>,
    /// `sum ≤ ml_degree`, when the degree is known.
    pub holds: Option<bool>,
}

fn label_set(labels: &[String], set: &IndexSet) -> String {
    let inner: Vec<&str> = set.iter().map(|&i| labels[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

impl MLTable {
    pub fn entry(&self, r: &IndexSet, s: &IndexSet) -> Option<usize> {
        self.entries.get(&(r.clone(), s.clone())).copied()
    }

    pub fn ml_degree(&self) -> Option<usize> {
        self.entry(&BTreeSet::new(), &BTreeSet::new())
    }

    /// Row patterns, ordered by size then lexicographically.
    pub fn rows(&self) -> Vec<IndexSet> {
        let mut rows: Vec<IndexSet> = self
            .entries
            .keys()
            .map(|(r, _)| r.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        rows.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        rows
    }

    pub fn column_bounds(&self) -> Vec<ColumnBound> {
        self.columns
            .iter()
            .filter_map(|s| column_bound(self, s).ok())
            .collect()
    }

    /// Rows `R`, columns `S`; blank where `R ⊄ S`.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| R \\ S |");
        for s in &self.columns {
            let _ = write!(out, " {} |", label_set(&self.labels, s));
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(self.columns.len()));
        out.push('\n');
        for r in self.rows() {
            let _ = write!(out, "| {} |", label_set(&self.labels, &r));
            for s in &self.columns {
                match self.entry(&r, s) {
                    Some(v) => {
                        let _ = write!(out, " {v} |");
                    }
                    None => out.push_str("  |"),
                }
            }
            out.push('\n');
        }
        let _ = write!(out, "| sum |");
        for s in &self.columns {
            match column_bound(self, s) {
                Ok(b) => {
                    let _ = write!(out, " {} |", b.sum);
                }
                Err(_) => out.push_str("  |"),
            }
        }
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("R");
        for s in &self.columns {
            let _ = write!(out, ",\"{}\"", label_set(&self.labels, s));
        }
        out.push('\n');
        for r in self.rows() {
            let _ = write!(out, "\"{}\"", label_set(&self.labels, &r));
            for s in &self.columns {
                out.push(',');
                if let Some(v) = self.entry(&r, s) {
                    let _ = write!(out, "{v}");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((r, s), v)| {
                serde_json::json!({
                    "R": label_set(&self.labels, r),
                    "S": label_set(&self.labels, s),
                    "count": v,
                    "proper": self.proper.get(&(r.clone(), s.clone())).copied().unwrap_or(true),
                })
            })
            .collect();
        serde_json::json!({
            "model": self.model_name,
            "model_hash": self.model_hash,
            "columns": self.columns.iter().map(|s| label_set(&self.labels, s)).collect::<Vec<_>>(),
            "cells": cells,
            "column_bounds": self.column_bounds(),
        })
    }
}

/// Solves `ML_{R,S}` for every column `S` and every `R ⊆ S`. All cells of a
/// column share one generic data vector in `U_S`.
pub fn ml_table(model: &ModelSpec, columns: &[IndexSet], seed: u64, config: &SolveConfig) -> Result<MLTable> {
    ml_table_with_sets(model, columns, seed, config).map(|(table, _)| table)
}

/// [`ml_table`] that also returns the solution set of every cell, in column
/// order and then in the order of [`subsets`].
pub fn ml_table_with_sets(
    model: &ModelSpec,
    columns: &[IndexSet],
    seed: u64,
    config: &SolveConfig,
) -> Result<(MLTable, Vec<SolutionSet>)> {
    let mut sets = Vec::new();
    let mut table = MLTable {
        model_name: model.name.clone(),
        model_hash: model.hash(),
        labels: model.index_labels.clone(),
        columns: Vec::new(),
        entries: BTreeMap::new(),
        proper: BTreeMap::new(),
    };
    for s in columns {
        if table.columns.contains(s) {
            continue;
        }
        let u = generic_data(model.ncoords(), s, seed);
        for r in subsets(s) {
            let pattern = ZeroPattern::new(r.clone(), s.clone())?;
            let set = solve(model, &u, &pattern, config).map_err(|e| match e {
                Error::Budget { bound, budget, .. } => Error::Budget {
                    bound,
                    budget,
                    context: Some(format!(
                        "R={} S={}",
                        model.format_index_set(&r),
                        model.format_index_set(s)
                    )),
                },
                other => other,
            })?;
            let count = if set.proper { set.count_for(&r) } else { 0 };
            table.entries.insert((r.clone(), s.clone()), count);
            table.proper.insert((r, s.clone()), set.proper);
            sets.push(set);
        }
        table.columns.push(s.clone());
    }
    Ok((table, sets))
}

pub fn column_bound(table: &MLTable, s: &IndexSet) -> Result<ColumnBound> {
    let mut sum = 0;
    for r in subsets(s) {
        match table.entry(&r, s) {
            Some(v) => sum += v,
            None => return arg(format!("column {s:?} is missing the entry for R = {r:?}")),
        }
    }
    let ml_degree = table.ml_degree();
    Ok(ColumnBound {
        column: s.iter().copied().collect(),
        sum,
        ml_degree,
        holds: ml_degree.map(|d| sum <= d),
    })
}

fn checked_pow(base: u128, exp: usize) -> Result<u128> {
    let e = u32::try_from(exp).map_err(|_| Error::Overflow("exponent"))?;
    base.checked_pow(e).ok_or(Error::Overflow("power"))
}

/// Closed-form `ML_{R,S}` count for a generic degree-`d` hypersurface in
/// `P^n` with `|R| = r`, `|S| = s`:
/// `d (d^{n-s} - 1) / (d - 1)` when `s = r`, `d^{n-s+1} (d-1)^{s-r-1}` when
/// `s > r`, and 0 when `s < r`.
pub fn hypersurface_table_entry(d: u32, n: usize, r: usize, s: usize) -> Result<u128> {
    if d < 2 {
        return Err(Error::DegenerateData(format!("degree {d}: the formula needs d >= 2")));
    }
    if s > n {
        return arg(format!("|S| = {s} exceeds n = {n}"));
    }
    if s < r {
        return Ok(0);
    }
    let d = u128::from(d);
    if s == r {
        let num = d
            .checked_mul(checked_pow(d, n - s)? - 1)
            .ok_or(Error::Overflow("entry"))?;
        Ok(num / (d - 1))
    } else {
        checked_pow(d, n - s + 1)?
            .checked_mul(checked_pow(d - 1, s - r - 1)?)
            .ok_or(Error::Overflow("entry"))
    }
}

/// ML degree `d (d^n - 1) / (d - 1)` of a generic degree-`d` hypersurface in `P^n`.
pub fn hks_mldegree(d: u32, n: usize) -> Result<u128> {
    if n == 0 {
        return arg("n must be positive");
    }
    hypersurface_table_entry(d, n, 0, 0)
}

/// Conjectured ML degree `2^{n+1} - 6` of 3×n matrices of rank at most 2.
/// This is a conjecture value, not a computed degree.
pub fn rank2_3xn_series(n: usize) -> Result<u128> {
    if n < 3 {
        return arg("the series starts at n = 3");
    }
    Ok(checked_pow(2, n + 1)? - 6)
}

/// `Ω_ij = u_ij u_{i+} u_{+j} / u_{++}^3` for a row-major `m × n` matrix.
pub fn omega_matrix(u: &[C64], m: usize, n: usize) -> Result<Vec<C64>> {
    if u.len() != m * n {
        return Err(Error::Dimension {
            expected: m * n,
            got: u.len(),
        });
    }
    let total: C64 = u.iter().sum();
    let size: f64 = u.iter().map(|z| z.norm()).sum();
    if total.norm() <= 1e-14 * size || size == 0.0 {
        return Err(Error::DegenerateData("u_++ = 0".into()));
    }
    let rows: Vec<C64> = (0..m).map(|i| u[i * n..(i + 1) * n].iter().sum()).collect();
    let cols: Vec<C64> = (0..n).map(|j| (0..m).map(|i| u[i * n + j]).sum()).collect();
    let cube = total * total * total;
    Ok((0..m * n)
        .map(|k| u[k] * rows[k / n] * cols[k % n] / cube)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPair {
    pub x_index: usize,
    pub y_index: Option<usize>,
    /// `max |P ⋆ Q - Ω_U|` for the matched `Q`.
    pub hadamard_residual: f64,
    /// Matched through `Ω_U ⊘ P` (false: direct residual search, used when
    /// `P` has vanishing entries).
    pub via_quotient: bool,
    pub r: Vec<usize>,
    pub r_dual: Vec<usize>,
    /// `(S \ R) ⊆ R'`.
    pub containment: bool,
    /// `(S \ R) = R'`.
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub data_zeros: Vec<usize>,
    pub x_count: usize,
    pub y_count: usize,
    pub pairs: Vec<DualPair>,
    pub max_residual: f64,
    pub bijective: bool,
    pub containment_holds: bool,
    pub equality_holds: bool,
}

fn hadamard_residual(p: &CriticalPoint, q: &CriticalPoint, omega: &[C64]) -> f64 {
    p.p.iter()
        .zip(&q.p)
        .zip(omega)
        .map(|((a, b), w)| (a * b - w).norm())
        .fold(0.0, f64::max)
}

/// Matches each regular critical point `P` of `x` to a point `Q` of `y` with
/// `P ⋆ Q = Ω_U`: candidates are ranked by distance to `Ω_U ⊘ P` (or by
/// Hadamard residual when `P` has entries below `tol`), assigned greedily
/// with unique targets, then verified against `tol`.
pub fn dual_pairing(
    x: &SolutionSet,
    y: &SolutionSet,
    m: usize,
    n: usize,
    tol: f64,
) -> Result<DualityReport> {
    if x.u != y.u {
        return arg("the two solution sets were computed for different data");
    }
    let omega = omega_matrix(&x.u, m, n)?;
    let xs: Vec<&CriticalPoint> = x.regular_points().collect();
    let ys: Vec<&CriticalPoint> = y.regular_points().collect();
    let s = &x.pattern.data_zeros;

    let mut candidates: Vec<(f64, usize, usize, bool)> = Vec::new();
    for (a, p) in xs.iter().enumerate() {
        let quotient = p.p.iter().all(|v| v.norm() > tol);
        for (b, q) in ys.iter().enumerate() {
            let cost = if quotient {
                p.p.iter()
                    .zip(&q.p)
                    .zip(&omega)
                    .map(|((pv, qv), w)| (w / pv - qv).norm())
                    .fold(0.0, f64::max)
            } else {
                hadamard_residual(p, q, &omega)
            };
            candidates.push((cost, a, b, quotient));
        }
    }
    candidates.sort_by(|l, r| l.0.total_cmp(&r.0).then((l.1, l.2).cmp(&(r.1, r.2))));
    let mut x_match: Vec<Option<(usize, bool)>> = vec![None; xs.len()];
    let mut y_used = vec![false; ys.len()];
    for (_, a, b, quotient) in candidates {
        if x_match[a].is_none() && !y_used[b] {
            x_match[a] = Some((b, quotient));
            y_used[b] = true;
        }
    }

    let mut pairs = Vec::with_capacity(xs.len());
    for (a, p) in xs.iter().enumerate() {
        let (y_index, residual, via_quotient, r_dual) = match x_match[a] {
            Some((b, quotient)) => (
                Some(b),
                hadamard_residual(p, ys[b], &omega),
                quotient,
                ys[b].zero_pattern.clone(),
            ),
            None => (None, f64::INFINITY, false, BTreeSet::new()),
        };
        let sampling: IndexSet = s.difference(&p.zero_pattern).copied().collect();
        pairs.push(DualPair {
            x_index: a,
            y_index,
            hadamard_residual: residual,
            via_quotient,
            r: p.zero_pattern.iter().copied().collect(),
            containment: y_index.is_some() && sampling.is_subset(&r_dual),
            equality: y_index.is_some() && sampling == r_dual,
            r_dual: r_dual.into_iter().collect(),
        });
    }
    let max_residual = pairs.iter().map(|p| p.hadamard_residual).fold(0.0, f64::max);
    Ok(DualityReport {
        data_zeros: s.iter().copied().collect(),
        x_count: xs.len(),
        y_count: ys.len(),
        bijective: xs.len() == ys.len() && pairs.iter().all(|p| p.y_index.is_some()) && max_residual < tol,
        containment_holds: pairs.iter().all(|p| p.containment),
        equality_holds: pairs.iter().all(|p| p.equality),
        max_residual,
        pairs,
    })
}

/// Both sides of the Grassmannian slice comparison: the ML degree of
/// `Gr(2, n)` and of `Gr(2, n+1) ∩ {p_12 = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannianSlice {
    pub n: usize,
    pub ml_degree: usize,
    pub slice_ml_degree: usize,
}

pub fn grassmannian_slice(n: usize, seed: u64, config: &SolveConfig) -> Result<GrassmannianSlice> {
    let small = grassmannian_2n(n, seed, false)?;
    let big = grassmannian_2n(n + 1, seed, false)?;
    let r: IndexSet = [big.parse_index("12")?].into_iter().collect();
    let u = generic_data(big.ncoords(), &r, seed);
    let slice = solve(&big, &u, &ZeroPattern::new(r.clone(), r.clone())?, config)?;
    Ok(GrassmannianSlice {
        n,
        ml_degree: ml_degree(&small, seed, config)?.degree,
        slice_ml_degree: slice.count_for(&r),
    })
}
