//! Lagrange likelihood equations and their restricted and parametric forms.
//!
//! For a model with regular sequence `h_1..h_c` and data `u`, the unknowns are
//! the coordinates `p_i` (minus any model zeros) and multipliers
//! `λ_1..λ_c`. The equations are the `h_j` followed by one equation per kept
//! coordinate, in index order:
//!
//! * `i ∉ S`: `u_+ p_i - u_i - p_i Σ_j λ_j ∂_i h_j` (affine chart form), or
//!   `u_+ p_i - p_+ u_i - p_i Σ_j λ_j ∂_i h_j` (homogeneous form);
//! * `i ∈ S \ R`: `u_+ - Σ_j λ_j ∂_i h_j`.
//!
//! The derivatives are taken before the model zeros are substituted.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::models::{generator_rank, ModelSpec, ZeroPattern};
use crate::poly::{AffineForm, ParametricPoly, SparsePoly, VariableSpace, C64, ONE, ZERO};

/// Which left-hand side the generic coordinate equations use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// `u_+ p_i - u_i`: solutions satisfy `Σ p_i = 1`, so they are isolated.
    #[default]
    AffineChart,
    /// `u_+ p_i - p_+ u_i`: invariant under `(p, λ) → (t p, t^{1-d} λ)` for
    /// hypersurfaces of degree `d`; solution sets are orbits, not points.
    Homogeneous,
}

#[derive(Clone, Debug)]
pub struct LagrangeSystem {
    pub model_name: String,
    pub space: VariableSpace,
    pub equations: Vec<SparsePoly>,
    pub u: Vec<C64>,
    pub pattern: ZeroPattern,
    pub normalization: Normalization,
    /// Original coordinate index of each `p` variable.
    pub coordinates: Vec<usize>,
    /// Ambient coordinate count `n+1` of the unrestricted model.
    pub ncoords: usize,
    pub c: usize,
    /// False when the restricted regular sequence lost rank.
    pub proper: bool,
}

impl LagrangeSystem {
    pub fn num_vars(&self) -> usize {
        self.space.len()
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn is_square(&self) -> bool {
        self.num_vars() == self.num_equations()
    }

    pub fn num_p(&self) -> usize {
        self.coordinates.len()
    }

    /// Full-length coordinate vector (zeros at removed coordinates) and multipliers.
    pub fn embed(&self, x: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let mut p = vec![ZERO; self.ncoords];
        for (k, &i) in self.coordinates.iter().enumerate() {
            p[i] = x[k];
        }
        (p, x[self.num_p()..].to_vec())
    }

    /// Inverse of [`Self::embed`]; entries at removed coordinates are dropped.
    pub fn project(&self, p: &[C64], lambda: &[C64]) -> Vec<C64> {
        self.coordinates
            .iter()
            .map(|&i| p[i])
            .chain(lambda.iter().copied())
            .collect()
    }

    pub fn residual(&self, x: &[C64]) -> Result<f64> {
        self.equations
            .iter()
            .map(|f| f.evaluate(x).map(|v| v.norm()))
            .try_fold(0.0_f64, |acc, v| v.map(|v| acc.max(v)))
    }

    /// Per-equation factors that bring the largest coefficient magnitude to 1.
    pub fn scale_factors(&self) -> Vec<f64> {
        self.equations
            .iter()
            .map(|f| {
                let m = f.max_coeff_abs();
                if m > 0.0 {
                    1.0 / m
                } else {
                    1.0
                }
            })
            .collect()
    }

    pub fn scaled_equations(&self) -> Vec<SparsePoly> {
        self.equations
            .iter()
            .zip(self.scale_factors())
            .map(|(f, s)| f.scale(C64::new(s, 0.0)))
            .collect()
    }

    pub fn header(&self) -> SystemHeader {
        SystemHeader {
            model: self.model_name.clone(),
            model_zeros: self.pattern.model_zeros.iter().copied().collect(),
            data_zeros: self.pattern.data_zeros.iter().copied().collect(),
            u: self.u.iter().map(|z| [z.re, z.im]).collect(),
            normalization: self.normalization,
            variables: self.space.names().to_vec(),
        }
    }

    /// JSON header line followed by each equation in canonical text form,
    /// separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string(&self.header()).expect("headers serialize");
        s.push('\n');
        for f in &self.equations {
            s.push('\n');
            s.push_str(&f.to_canonical_text());
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemHeader {
    pub model: String,
    pub model_zeros: Vec<usize>,
    pub data_zeros: Vec<usize>,
    pub u: Vec<[f64; 2]>,
    pub normalization: Normalization,
    pub variables: Vec<String>,
}

/// Shared layout of the restricted system: kept coordinates, variable map and
/// the restricted regular sequence with its pre-substitution derivatives.
struct Layout {
    kept: Vec<usize>,
    map: Vec<Option<usize>>,
    nvars: usize,
    space: VariableSpace,
    h: Vec<SparsePoly>,
    /// `dh[j][i]`: `∂_i h_j` for original coordinate `i`, restricted and remapped.
    dh: Vec<Vec<SparsePoly>>,
    proper: bool,
}

fn layout(model: &ModelSpec, r: &std::collections::BTreeSet<usize>) -> Result<Layout> {
    if model.regular_sequence.len() != model.c {
        return Err(Error::Structural(format!(
            "{} has {} regular-sequence members for codimension {}",
            model.name,
            model.regular_sequence.len(),
            model.c
        )));
    }
    let ncoords = model.ncoords();
    let kept: Vec<usize> = (0..ncoords).filter(|i| !r.contains(i)).collect();
    let nvars = kept.len() + model.c;
    let mut map = vec![None; ncoords];
    for (k, &i) in kept.iter().enumerate() {
        map[i] = Some(k);
    }
    let labels: Vec<String> = kept.iter().map(|&i| model.index_labels[i].clone()).collect();
    let space = VariableSpace::lagrange(&labels, model.c);
    let zeros: Vec<usize> = r.iter().copied().collect();
    let restrict = |f: &SparsePoly| f.substitute_zero(&zeros).remap(nvars, &map);
    let h = model
        .regular_sequence
        .iter()
        .map(restrict)
        .collect::<Result<Vec<_>>>()?;
    let dh = model
        .regular_sequence
        .iter()
        .map(|hj| {
            (0..ncoords)
                .map(|i| restrict(&hj.partial_derivative(i)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let proper = model.proper && h.iter().all(|f| !f.is_zero()) && generator_rank(&h) == model.c;
    Ok(Layout {
        kept,
        map,
        nvars,
        space,
        h,
        dh,
        proper,
    })
}

impl Layout {
    fn lambda(&self, j: usize) -> SparsePoly {
        SparsePoly::var(self.nvars, self.kept.len() + j)
    }

    fn p(&self, i: usize) -> SparsePoly {
        SparsePoly::var(self.nvars, self.map[i].expect("kept coordinate"))
    }

    /// `Σ_j λ_j ∂_i h_j`.
    fn multiplier_sum(&self, i: usize) -> SparsePoly {
        (0..self.h.len()).fold(SparsePoly::zero(self.nvars), |acc, j| {
            &acc + &(&self.lambda(j) * &self.dh[j][i])
        })
    }
}

fn check_data(model: &ModelSpec, pattern: &ZeroPattern, u: &[C64]) -> Result<C64> {
    if u.len() != model.ncoords() {
        return Err(Error::Dimension {
            expected: model.ncoords(),
            got: u.len(),
        });
    }
    pattern.check_within(model.ncoords())?;
    for (i, ui) in u.iter().enumerate() {
        let zero = *ui == ZERO;
        if pattern.data_zeros.contains(&i) && !zero {
            return arg(format!("u_{i} must be zero for a data zero at {i}"));
        }
        if !pattern.data_zeros.contains(&i) && zero {
            return arg(format!("u_{i} is zero but {i} is not listed as a data zero"));
        }
    }
    let u_plus: C64 = u.iter().sum();
    let size: f64 = u.iter().map(|z| z.norm()).sum();
    if u_plus.norm() <= 1e-14 * size || size == 0.0 {
        return Err(Error::DegenerateData("u_+ = 0".into()));
    }
    Ok(u_plus)
}

/// `LL(X, u)` in the affine chart form. `u` may contain zeros; it only has
/// to satisfy `u_+ ≠ 0`.
pub fn lagrange_system(model: &ModelSpec, u: &[C64]) -> Result<LagrangeSystem> {
    let zeros = u
        .iter()
        .enumerate()
        .filter(|(_, z)| **z == ZERO)
        .map(|(i, _)| i)
        .collect();
    let fiber_pattern = ZeroPattern::sampling(zeros);
    check_data(model, &fiber_pattern, u)?;
    let mut sys = build(model, &ZeroPattern::empty(), u, Normalization::AffineChart, true)?;
    sys.pattern = fiber_pattern;
    Ok(sys)
}

/// The system for `ML_{R,S}`: model zeros removed as variables, sampling-zero
/// equations for `S \ R`.
pub fn restricted_system(
    model: &ModelSpec,
    pattern: &ZeroPattern,
    u: &[C64],
    normalization: Normalization,
) -> Result<LagrangeSystem> {
    check_data(model, pattern, u)?;
    build(model, pattern, u, normalization, false)
}

/// `full_equations`: every kept coordinate gets the generic equation, even
/// where `u_i = 0` (the unrestricted system evaluated at data with zeros).
fn build(
    model: &ModelSpec,
    pattern: &ZeroPattern,
    u: &[C64],
    normalization: Normalization,
    full_equations: bool,
) -> Result<LagrangeSystem> {
    let lay = layout(model, &pattern.model_zeros)?;
    let u_plus: C64 = lay.kept.iter().map(|&i| u[i]).sum();
    let nv = lay.nvars;
    let mut equations = lay.h.clone();
    let p_plus = lay
        .kept
        .iter()
        .fold(SparsePoly::zero(nv), |acc, &i| &acc + &lay.p(i));
    for &i in &lay.kept {
        let rhs = lay.multiplier_sum(i);
        let eq = if pattern.data_zeros.contains(&i) && !full_equations {
            &SparsePoly::constant(nv, u_plus) - &rhs
        } else {
            let pi = lay.p(i);
            let lhs = match normalization {
                Normalization::AffineChart => &pi.scale(u_plus) - &SparsePoly::constant(nv, u[i]),
                Normalization::Homogeneous => &pi.scale(u_plus) - &p_plus.scale(u[i]),
            };
            &lhs - &(&pi * &rhs)
        };
        equations.push(eq);
    }
    Ok(LagrangeSystem {
        model_name: model.name.clone(),
        space: lay.space,
        equations,
        u: u.to_vec(),
        pattern: pattern.clone(),
        normalization,
        coordinates: lay.kept,
        ncoords: model.ncoords(),
        c: model.c,
        proper: lay.proper,
    })
}

/// Affine chart form of the system with the data left as parameters `u_0..u_n`.
#[derive(Clone, Debug)]
pub struct ParametricSystem {
    pub model_name: String,
    pub space: VariableSpace,
    pub equations: Vec<ParametricPoly>,
    pub pattern: ZeroPattern,
    pub free_all_parameters: bool,
    pub coordinates: Vec<usize>,
    pub ncoords: usize,
    pub c: usize,
    pub proper: bool,
}

impl ParametricSystem {
    pub fn num_vars(&self) -> usize {
        self.space.len()
    }

    pub fn nparams(&self) -> usize {
        self.ncoords
    }

    pub fn parameter_labels(&self) -> Vec<String> {
        (0..self.ncoords).map(|i| format!("u{i}")).collect()
    }

    /// The concrete system at data `u`.
    pub fn specialize(&self, u: &[C64]) -> Result<LagrangeSystem> {
        if u.len() != self.ncoords {
            return Err(Error::Dimension {
                expected: self.ncoords,
                got: u.len(),
            });
        }
        Ok(LagrangeSystem {
            model_name: self.model_name.clone(),
            space: self.space.clone(),
            equations: self
                .equations
                .iter()
                .map(|f| f.specialize(u))
                .collect::<Result<_>>()?,
            u: u.to_vec(),
            pattern: self.pattern.clone(),
            normalization: Normalization::AffineChart,
            coordinates: self.coordinates.clone(),
            ncoords: self.ncoords,
            c: self.c,
            proper: self.proper,
        })
    }

    pub fn embed(&self, x: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let mut p = vec![ZERO; self.ncoords];
        for (k, &i) in self.coordinates.iter().enumerate() {
            p[i] = x[k];
        }
        (p, x[self.coordinates.len()..].to_vec())
    }

    pub fn project(&self, p: &[C64], lambda: &[C64]) -> Vec<C64> {
        self.coordinates
            .iter()
            .map(|&i| p[i])
            .chain(lambda.iter().copied())
            .collect()
    }
}

/// Parametric family for `pattern`. Parameters indexed by `S` are fixed at
/// zero unless `free_all_parameters`, in which case every kept coordinate
/// gets the generic equation and every `u_i` (`i ∉ R`) is free; with `R = ∅`
/// this is the family `LL(X, u)` used to leave the data-zero locus.
pub fn parametric_system(model: &ModelSpec, pattern: &ZeroPattern, free_all_parameters: bool) -> Result<ParametricSystem> {
    pattern.check_within(model.ncoords())?;
    let lay = layout(model, &pattern.model_zeros)?;
    let np = model.ncoords();
    let nv = lay.nvars;
    let is_free = |i: usize| free_all_parameters || !pattern.data_zeros.contains(&i);
    let mut u_plus = AffineForm::zero(np);
    for &i in &lay.kept {
        if is_free(i) {
            u_plus.linear[i] = ONE;
        }
    }
    let mut equations: Vec<ParametricPoly> = lay.h.iter().map(|h| ParametricPoly::from_poly(h, np)).collect();
    for &i in &lay.kept {
        let rhs = lay.multiplier_sum(i);
        let mut eq = ParametricPoly::from_poly(&(-&rhs), np);
        if is_free(i) {
            let pi = lay.p(i);
            // u_+ p_i - u_i - p_i Σ λ ∂h
            eq = ParametricPoly::from_poly(&(-&(&pi * &rhs)), np);
            eq.add_poly_times(&pi, &u_plus);
            let mut ui = AffineForm::zero(np);
            ui.linear[i] = -ONE;
            eq.add_poly_times(&SparsePoly::constant(nv, ONE), &ui);
        } else {
            // u_+ - Σ λ ∂h
            eq.add_poly_times(&SparsePoly::constant(nv, ONE), &u_plus);
        }
        equations.push(eq);
    }
    Ok(ParametricSystem {
        model_name: model.name.clone(),
        space: lay.space,
        equations,
        pattern: pattern.clone(),
        free_all_parameters,
        coordinates: lay.kept,
        ncoords: np,
        c: model.c,
        proper: lay.proper,
    })
}
