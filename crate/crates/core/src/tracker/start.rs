//! Root counts and start systems: total degree (`x_i^{d_i} - β_i`) and
//! linear products respecting a partition of the variables.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::linalg;
use crate::poly::{SparsePoly, VarGroup, VariableSpace, C64, ONE, ZERO};
use crate::random::{rng, stream_id, unit_circle};

/// A partition of the variables into groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableGroups {
    groups: Vec<Vec<usize>>,
}

impl VariableGroups {
    pub fn new(nvars: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; nvars];
        for &v in groups.iter().flatten() {
            if v >= nvars || seen[v] {
                return arg(format!("variable {v} missing from or repeated in the partition"));
            }
            seen[v] = true;
        }
        if seen.iter().any(|s| !s) {
            return arg("partition does not cover every variable");
        }
        Ok(Self {
            groups: groups.into_iter().filter(|g| !g.is_empty()).collect(),
        })
    }

    pub fn single(nvars: usize) -> Self {
        Self {
            groups: vec![(0..nvars).collect()],
        }
    }

    /// `{P, LAMBDA}` split of a variable space (empty groups dropped).
    pub fn by_tag(space: &VariableSpace) -> Self {
        Self {
            groups: [VarGroup::P, VarGroup::Lambda]
                .iter()
                .map(|&g| space.indices_in(g))
                .filter(|g| !g.is_empty())
                .collect(),
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    fn degree_table(&self, equations: &[SparsePoly]) -> Vec<Vec<u32>> {
        equations
            .iter()
            .map(|f| self.groups.iter().map(|g| f.degree_in(g)).collect())
            .collect()
    }
}

/// Product of the total degrees (saturating).
pub fn bezout_total(equations: &[SparsePoly]) -> u128 {
    equations
        .iter()
        .map(|f| u128::from(f.total_degree()))
        .fold(1u128, |acc, d| acc.saturating_mul(d))
}

/// Multihomogeneous Bézout number: the sum over assignments of equations to
/// groups, each group receiving as many equations as it has variables, of the
/// product of the assigned group degrees.
pub fn bezout_multihomog(equations: &[SparsePoly], groups: &VariableGroups) -> Result<u128> {
    let sizes: Vec<usize> = groups.groups.iter().map(Vec::len).collect();
    if sizes.iter().sum::<usize>() != equations.len() {
        return Err(Error::Precondition(format!(
            "system with {} equations and {} variables is not square",
            equations.len(),
            sizes.iter().sum::<usize>()
        )));
    }
    let degrees = groups.degree_table(equations);
    let mut memo = HashMap::new();
    Ok(count_assignments(&degrees, 0, &mut sizes.clone(), &mut memo))
}

fn count_assignments(
    degrees: &[Vec<u32>],
    eq: usize,
    capacity: &mut Vec<usize>,
    memo: &mut HashMap<(usize, Vec<usize>), u128>,
) -> u128 {
    if eq == degrees.len() {
        return 1;
    }
    let key = (eq, capacity.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total: u128 = 0;
    for g in 0..capacity.len() {
        let d = degrees[eq][g];
        if capacity[g] == 0 || d == 0 {
            continue;
        }
        capacity[g] -= 1;
        let rest = count_assignments(degrees, eq + 1, capacity, memo);
        capacity[g] += 1;
        total = total.saturating_add(rest.saturating_mul(u128::from(d)));
    }
    memo.insert(key, total);
    total
}

/// Affine linear form `Σ a_k x_{vars[k]} + b`.
#[derive(Clone, Debug)]
pub struct LinearFactor {
    pub vars: Vec<usize>,
    pub coeffs: Vec<C64>,
    pub constant: C64,
}

impl LinearFactor {
    fn eval(&self, x: &[C64]) -> C64 {
        self.vars
            .iter()
            .zip(&self.coeffs)
            .fold(self.constant, |acc, (&v, a)| acc + a * x[v])
    }
}

#[derive(Clone, Debug)]
pub enum StartSystem {
    /// `x_i^{d_i} - β_i`.
    TotalDegree { degrees: Vec<u32>, betas: Vec<C64> },
    /// Equation `i` is the product of `factors[i]`; start points enumerated.
    LinearProduct {
        nvars: usize,
        factors: Vec<Vec<LinearFactor>>,
        points: Vec<Vec<C64>>,
    },
}

impl StartSystem {
    pub fn nvars(&self) -> usize {
        match self {
            StartSystem::TotalDegree { degrees, .. } => degrees.len(),
            StartSystem::LinearProduct { nvars, .. } => *nvars,
        }
    }

    pub fn num_points(&self) -> u128 {
        match self {
            StartSystem::TotalDegree { degrees, .. } => degrees
                .iter()
                .fold(1u128, |acc, &d| acc.saturating_mul(u128::from(d))),
            StartSystem::LinearProduct { points, .. } => points.len() as u128,
        }
    }

    /// The `idx`-th start point (mixed-radix root choice for total degree).
    pub fn point(&self, idx: usize) -> Vec<C64> {
        match self {
            StartSystem::TotalDegree { degrees, betas } => {
                let mut rem = idx;
                degrees
                    .iter()
                    .zip(betas)
                    .map(|(&d, &beta)| {
                        let k = rem % d as usize;
                        rem /= d as usize;
                        let (r, theta) = beta.to_polar();
                        C64::from_polar(
                            r.powf(1.0 / f64::from(d)),
                            (theta + std::f64::consts::TAU * k as f64) / f64::from(d),
                        )
                    })
                    .collect()
            }
            StartSystem::LinearProduct { points, .. } => points[idx].clone(),
        }
    }

    pub fn eval(&self, x: &[C64], value: &mut [C64], jac: &mut [C64]) {
        let n = self.nvars();
        jac.iter_mut().for_each(|v| *v = ZERO);
        match self {
            StartSystem::TotalDegree { degrees, betas } => {
                for i in 0..n {
                    let d = degrees[i];
                    let pm1 = x[i].powu(d - 1);
                    value[i] = pm1 * x[i] - betas[i];
                    jac[i * n + i] = pm1 * f64::from(d);
                }
            }
            StartSystem::LinearProduct { factors, .. } => {
                let mut vals: Vec<C64> = Vec::new();
                for (i, fs) in factors.iter().enumerate() {
                    vals.clear();
                    vals.extend(fs.iter().map(|f| f.eval(x)));
                    value[i] = vals.iter().product();
                    let row = &mut jac[i * n..(i + 1) * n];
                    let mut prefix = ONE;
                    for (k, f) in fs.iter().enumerate() {
                        let others: C64 = prefix * vals[k + 1..].iter().product::<C64>();
                        for (&v, a) in f.vars.iter().zip(&f.coeffs) {
                            row[v] += a * others;
                        }
                        prefix *= vals[k];
                    }
                }
            }
        }
    }

    pub fn residual(&self, x: &[C64]) -> f64 {
        let n = self.nvars();
        let mut v = vec![ZERO; n];
        let mut j = vec![ZERO; n * n];
        self.eval(x, &mut v, &mut j);
        v.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Total-degree start system with `β_i = 1`.
pub fn total_degree_start(equations: &[SparsePoly]) -> Result<StartSystem> {
    let degrees: Vec<u32> = equations.iter().map(SparsePoly::total_degree).collect();
    if degrees.contains(&0) {
        return Err(Error::Structural("constant equation in the target system".into()));
    }
    if let Some(f) = equations.first() {
        if f.nvars() != equations.len() {
            return Err(Error::Precondition("total-degree start needs a square system".into()));
        }
    }
    Ok(StartSystem::TotalDegree {
        betas: vec![ONE; degrees.len()],
        degrees,
    })
}

/// Linear-product start system: equation `i` becomes a product of
/// `deg_g(f_i)` random affine forms in the variables of each group `g`.
/// Solving it enumerates every admissible assignment of equations to groups,
/// so the number of start points equals [`bezout_multihomog`].
pub fn multihomog_start(
    equations: &[SparsePoly],
    groups: &VariableGroups,
    seed: u64,
    budget: u128,
) -> Result<StartSystem> {
    let bound = bezout_multihomog(equations, groups)?;
    if bound == 0 {
        return Err(Error::Structural(
            "multihomogeneous root bound is zero for this variable partition".into(),
        ));
    }
    if bound > budget {
        return Err(Error::Budget {
            bound,
            budget,
            context: None,
        });
    }
    let nvars = equations[0].nvars();
    let degrees = groups.degree_table(equations);
    let mut r = rng(seed, stream_id("linear-product"));
    // factors[i] lists (group, factor) in group order
    let mut factors: Vec<Vec<LinearFactor>> = Vec::with_capacity(equations.len());
    let mut factor_index: Vec<Vec<Vec<usize>>> = Vec::with_capacity(equations.len());
    for degs in &degrees {
        let mut fs = Vec::new();
        let mut idx = Vec::new();
        for (g, &d) in degs.iter().enumerate() {
            let mut per_group = Vec::new();
            for _ in 0..d {
                per_group.push(fs.len());
                fs.push(LinearFactor {
                    vars: groups.groups[g].clone(),
                    coeffs: groups.groups[g].iter().map(|_| unit_circle(&mut r)).collect(),
                    constant: unit_circle(&mut r),
                });
            }
            idx.push(per_group);
        }
        factors.push(fs);
        factor_index.push(idx);
    }

    let mut points = Vec::with_capacity(bound as usize);
    let mut capacity: Vec<usize> = groups.groups.iter().map(Vec::len).collect();
    let mut choice: Vec<(usize, usize)> = Vec::with_capacity(equations.len());
    enumerate(
        &factors,
        &factor_index,
        groups,
        nvars,
        &mut capacity,
        &mut choice,
        &mut points,
    )?;
    debug_assert_eq!(points.len() as u128, bound);
    Ok(StartSystem::LinearProduct {
        nvars,
        factors,
        points,
    })
}

fn enumerate(
    factors: &[Vec<LinearFactor>],
    factor_index: &[Vec<Vec<usize>>],
    groups: &VariableGroups,
    nvars: usize,
    capacity: &mut Vec<usize>,
    choice: &mut Vec<(usize, usize)>,
    points: &mut Vec<Vec<C64>>,
) -> Result<()> {
    let eq = choice.len();
    if eq == factors.len() {
        points.push(solve_choice(factors, groups, nvars, choice)?);
        return Ok(());
    }
    for g in 0..capacity.len() {
        if capacity[g] == 0 {
            continue;
        }
        capacity[g] -= 1;
        for &f in &factor_index[eq][g] {
            choice.push((g, f));
            enumerate(factors, factor_index, groups, nvars, capacity, choice, points)?;
            choice.pop();
        }
        capacity[g] += 1;
    }
    Ok(())
}

fn solve_choice(
    factors: &[Vec<LinearFactor>],
    groups: &VariableGroups,
    nvars: usize,
    choice: &[(usize, usize)],
) -> Result<Vec<C64>> {
    let mut x = vec![ZERO; nvars];
    for (g, vars) in groups.groups.iter().enumerate() {
        let k = vars.len();
        let mut a = vec![ZERO; k * k];
        let mut b = vec![ZERO; k];
        let mut row = 0;
        for (eq, &(cg, f)) in choice.iter().enumerate() {
            if cg != g {
                continue;
            }
            let lf = &factors[eq][f];
            a[row * k..(row + 1) * k].copy_from_slice(&lf.coeffs);
            b[row] = -lf.constant;
            row += 1;
        }
        let sol = linalg::solve(&a, k, &b)
            .ok_or_else(|| Error::Structural("degenerate linear-product start system".into()))?;
        for (&v, s) in vars.iter().zip(sol) {
            x[v] = s;
        }
    }
    Ok(x)
}
