//! Sparse multivariate polynomials with complex coefficients.
//!
//! Terms are stored in a map keyed by exponent vectors ordered graded
//! lexicographically, so iteration (and therefore evaluation and the canonical
//! text form) is deterministic. Variables live in a [`VariableSpace`] that tags
//! each one as a coordinate (`P`) or a Lagrange multiplier (`Lambda`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarGroup {
    P,
    Lambda,
}

/// Ordered variable names with their group tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSpace {
    names: Vec<String>,
    groups: Vec<VarGroup>,
}

impl VariableSpace {
    pub fn new(names: Vec<String>, groups: Vec<VarGroup>) -> Result<Self> {
        if names.len() != groups.len() {
            return Err(Error::Dimension {
                expected: names.len(),
                got: groups.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return arg(format!("duplicate variable name `{name}`"));
            }
        }
        Ok(Self { names, groups })
    }

    /// Coordinates `p_<label>` followed by `c` multipliers `lambda_1..lambda_c`.
    pub fn lagrange(p_labels: &[String], c: usize) -> Self {
        let mut names: Vec<String> = p_labels.iter().map(|l| format!("p{l}")).collect();
        let mut groups = vec![VarGroup::P; p_labels.len()];
        for j in 1..=c {
            names.push(format!("lambda{j}"));
            groups.push(VarGroup::Lambda);
        }
        Self { names, groups }
    }

    /// Coordinates only, named `p<label>`.
    pub fn coordinates(p_labels: &[String]) -> Self {
        Self::lagrange(p_labels, 0)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn group(&self, var: usize) -> VarGroup {
        self.groups[var]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn indices_in(&self, group: VarGroup) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.groups[i] == group).collect()
    }

    pub fn count(&self, group: VarGroup) -> usize {
        self.groups.iter().filter(|&&g| g == group).count()
    }
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with variable 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, var: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.0[v]).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn evaluate(&self, point: &[C64]) -> C64 {
        let mut acc = ONE;
        for (x, &e) in point.iter().zip(&self.0) {
            if e > 0 {
                acc *= x.powu(e);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial. No stored coefficient is exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, C64>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, var, 1), ONE);
        p
    }

    pub fn monomial(exponents: Vec<u32>, c: C64) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(Monomial(exponents), c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C64)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Dimension {
                    expected: nvars,
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Adds `c·x^mon`, removing the term if it cancels exactly.
    pub fn add_term(&mut self, mon: Monomial, c: C64) {
        debug_assert_eq!(mon.0.len(), self.nvars);
        if c == ZERO {
            return;
        }
        match self.terms.entry(mon) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == ZERO {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C64)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> C64 {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .copied()
            .unwrap_or(ZERO)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(vars)).max().unwrap_or(0)
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        if s == ZERO {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn evaluate(&self, point: &[C64]) -> Result<C64> {
        if point.len() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(ZERO, |acc, (m, c)| acc + c * m.evaluate(point)))
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return arg(format!("variable index {var} outside a space of {} variables", self.nvars));
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[var] -= 1;
            out.add_term(dm, c * f64::from(e));
        }
        Ok(out)
    }

    /// True iff every term has the same exponent sum over `vars`.
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree_in(vars));
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn is_homogeneous(&self, space: &VariableSpace, group: VarGroup) -> bool {
        self.is_homogeneous_in(&space.indices_in(group))
    }

    /// Checks Euler's relation `Σ p_i ∂_i f = d·f` at `point` over the `P` group.
    pub fn euler_check(&self, space: &VariableSpace, point: &[C64], tol: f64) -> Result<bool> {
        let value = self.evaluate(point)?;
        self.euler_check_with_value(space, point, value, tol)
    }

    /// As [`Self::euler_check`], but compares against a caller-supplied value of `f`.
    pub fn euler_check_with_value(
        &self,
        space: &VariableSpace,
        point: &[C64],
        value: C64,
        tol: f64,
    ) -> Result<bool> {
        let vars = space.indices_in(VarGroup::P);
        if !self.is_homogeneous_in(&vars) {
            return Err(Error::Precondition("Euler relation needs a homogeneous polynomial".into()));
        }
        let d = f64::from(self.degree_in(&vars));
        let mut lhs = ZERO;
        for &v in &vars {
            lhs += point[v] * self.partial_derivative(v)?.evaluate(point)?;
        }
        Ok((lhs - value * d).norm() < tol * (1.0 + value.norm()))
    }

    /// Sets the listed variables to zero, keeping the variable space.
    pub fn substitute_zero(&self, vars: &[usize]) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.0[v] == 0))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Moves the polynomial into a space of `new_nvars` variables, sending
    /// variable `i` to `map[i]`. Variables mapped to `None` must not occur.
    pub fn remap(&self, new_nvars: usize, map: &[Option<usize>]) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                got: map.len(),
            });
        }
        let mut out = Self::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_nvars];
            for (i, &ei) in m.0.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) if j < new_nvars => e[j] += ei,
                    Some(j) => return arg(format!("target variable {j} outside {new_nvars}")),
                    None => return arg(format!("variable {i} occurs but is dropped by the remap")),
                }
            }
            out.add_term(Monomial(e), *c);
        }
        Ok(out)
    }

    /// Appends `extra` unused variables at the end.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let map: Vec<Option<usize>> = (0..self.nvars).map(Some).collect();
        self.remap(self.nvars + extra, &map)
            .expect("extension keeps every variable")
    }

    /// One line per term: `re im : e_0 e_1 ... e_k`, leading term first.
    pub fn to_canonical_text(&self) -> String {
        let mut s = String::new();
        for (m, c) in self.terms() {
            write!(s, "{} {} :", c.re, c.im).unwrap();
            for e in &m.0 {
                write!(s, " {e}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_canonical_text(nvars: usize, text: &str) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: `{line}`", lineno + 1));
            let (coef, exps) = line.split_once(':').ok_or_else(|| bad("missing `:`"))?;
            let mut cs = coef.split_whitespace();
            let re: f64 = cs.next().ok_or_else(|| bad("missing real part"))?.parse().map_err(|_| bad("real part"))?;
            let im: f64 = cs.next().ok_or_else(|| bad("missing imaginary part"))?.parse().map_err(|_| bad("imaginary part"))?;
            if cs.next().is_some() {
                return Err(bad("trailing coefficient tokens"));
            }
            let e: Vec<u32> = exps
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("exponent")))
                .collect::<Result<_>>()?;
            if e.len() != nvars {
                return Err(bad("exponent vector length"));
            }
            p.add_term(Monomial(e), C64::new(re, im));
        }
        Ok(p)
    }

    /// Human-readable rendering with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            if c.im == 0.0 {
                write!(s, "{}", c.re).unwrap();
            } else {
                write!(s, "({}{:+}i)", c.re, c.im).unwrap();
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(s, "*{}", names[i]).unwrap(),
                    _ => write!(s, "*{}^{e}", names[i]).unwrap(),
                }
            }
        }
        s
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials over different spaces");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "subtracting polynomials over different spaces");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials over different spaces");
        let mut out = SparsePoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(-ONE)
    }
}

/// `a_0 + Σ_k a_k u_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineForm {
    pub constant: C64,
    pub linear: Vec<C64>,
}

impl AffineForm {
    pub fn zero(nparams: usize) -> Self {
        Self {
            constant: ZERO,
            linear: vec![ZERO; nparams],
        }
    }

    pub fn constant(nparams: usize, c: C64) -> Self {
        Self {
            constant: c,
            linear: vec![ZERO; nparams],
        }
    }

    pub fn evaluate(&self, u: &[C64]) -> C64 {
        self.linear
            .iter()
            .zip(u)
            .fold(self.constant, |acc, (a, x)| acc + a * x)
    }

    pub fn is_zero(&self) -> bool {
        self.constant == ZERO && self.linear.iter().all(|a| *a == ZERO)
    }

    fn add_assign(&mut self, other: &AffineForm) {
        self.constant += other.constant;
        for (a, b) in self.linear.iter_mut().zip(&other.linear) {
            *a += b;
        }
    }

    fn scaled(&self, s: C64) -> AffineForm {
        AffineForm {
            constant: self.constant * s,
            linear: self.linear.iter().map(|a| a * s).collect(),
        }
    }
}

/// Polynomial whose coefficients are affine-linear in a parameter vector `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricPoly {
    nvars: usize,
    nparams: usize,
    terms: BTreeMap<Monomial, AffineForm>,
}

impl ParametricPoly {
    pub fn zero(nvars: usize, nparams: usize) -> Self {
        Self {
            nvars,
            nparams,
            terms: BTreeMap::new(),
        }
    }

    /// A polynomial with parameter-free coefficients.
    pub fn from_poly(poly: &SparsePoly, nparams: usize) -> Self {
        let mut out = Self::zero(poly.nvars, nparams);
        out.add_poly_times(poly, &AffineForm::constant(nparams, ONE));
        out
    }

    /// Adds `poly · form`.
    pub fn add_poly_times(&mut self, poly: &SparsePoly, form: &AffineForm) {
        assert_eq!(poly.nvars, self.nvars);
        assert_eq!(form.linear.len(), self.nparams);
        for (m, c) in &poly.terms {
            let add = form.scaled(*c);
            let entry = self
                .terms
                .entry(m.clone())
                .or_insert_with(|| AffineForm::zero(self.nparams));
            entry.add_assign(&add);
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &AffineForm)> {
        self.terms.iter().rev()
    }

    pub fn specialize(&self, u: &[C64]) -> Result<SparsePoly> {
        if u.len() != self.nparams {
            return Err(Error::Dimension {
                expected: self.nparams,
                got: u.len(),
            });
        }
        let mut out = SparsePoly::zero(self.nvars);
        for (m, f) in &self.terms {
            out.add_term(m.clone(), f.evaluate(u));
        }
        Ok(out)
    }

    pub fn evaluate(&self, x: &[C64], u: &[C64]) -> Result<C64> {
        self.specialize(u)?.evaluate(x)
    }

    /// True iff no coefficient depends on parameter `k`.
    pub fn independent_of(&self, k: usize) -> bool {
        self.terms.values().all(|f| f.linear[k] == ZERO)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn space(n: usize) -> VariableSpace {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        VariableSpace::coordinates(&labels)
    }

    fn cubic() -> SparsePoly {
        SparsePoly::from_terms(
            4,
            [
                (vec![3, 0, 0, 0], c(2.0)),
                (vec![0, 3, 0, 0], c(-3.0)),
                (vec![0, 0, 3, 0], c(5.0)),
                (vec![0, 0, 0, 3], c(-7.0)),
            ],
        )
        .unwrap()
    }

    /// p12 p34 - p13 p24 + p14 p23 over (p12, p13, p14, p23, p24, p34).
    fn plucker() -> SparsePoly {
        SparsePoly::from_terms(
            6,
            [
                (vec![1, 0, 0, 0, 0, 1], c(1.0)),
                (vec![0, 1, 0, 0, 1, 0], c(-1.0)),
                (vec![0, 0, 1, 1, 0, 0], c(1.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let sq = SparsePoly::monomial(vec![2], ONE);
        assert_eq!(sq.evaluate(&[c(3.0)]).unwrap(), c(9.0));

        let sum = &SparsePoly::var(2, 0) + &SparsePoly::var(2, 1);
        assert_eq!(sum.evaluate(&[c(1.0), c(-1.0)]).unwrap(), ZERO);

        assert_eq!(cubic().evaluate(&[ONE; 4]).unwrap(), c(-3.0));
    }

    #[test]
    fn evaluate_rejects_wrong_length() {
        assert!(matches!(
            cubic().evaluate(&[ONE; 3]),
            Err(Error::Dimension { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn partial_derivative_examples() {
        let sq = SparsePoly::monomial(vec![2, 0], ONE);
        assert_eq!(
            sq.partial_derivative(0).unwrap(),
            SparsePoly::monomial(vec![1, 0], c(2.0))
        );
        assert!(sq.partial_derivative(1).unwrap().is_zero());
        assert_eq!(plucker().partial_derivative(0).unwrap(), SparsePoly::var(6, 5));
        assert!(sq.partial_derivative(2).is_err());
    }

    #[test]
    fn homogeneity_examples() {
        let s = space(3);
        let a = SparsePoly::from_terms(3, [(vec![2, 0, 0], ONE), (vec![0, 1, 1], ONE)]).unwrap();
        assert!(a.is_homogeneous(&s, VarGroup::P));
        let b = SparsePoly::from_terms(3, [(vec![2, 0, 0], ONE), (vec![0, 1, 0], ONE)]).unwrap();
        assert!(!b.is_homogeneous(&s, VarGroup::P));
        // u_+ p_i - u_i with u fixed
        let eq = SparsePoly::from_terms(3, [(vec![1, 0, 0], c(6.0)), (vec![0, 0, 0], c(-1.5))]).unwrap();
        assert!(!eq.is_homogeneous(&s, VarGroup::P));
    }

    #[test]
    fn euler_examples() {
        let s = space(2);
        let f = SparsePoly::from_terms(2, [(vec![2, 0], ONE), (vec![0, 2], ONE)]).unwrap();
        let pt = [C64::new(0.3, -1.2), C64::new(2.0, 0.5)];
        assert!(f.euler_check(&s, &pt, 1e-12).unwrap());

        let s6 = space(6);
        let pt6: Vec<C64> = (0..6).map(|i| C64::new(0.1 * i as f64 + 0.2, 0.7 - 0.3 * i as f64)).collect();
        assert!(plucker().euler_check(&s6, &pt6, 1e-12).unwrap());

        let perturbed = plucker().evaluate(&pt6).unwrap() + ONE;
        assert!(!plucker().euler_check_with_value(&s6, &pt6, perturbed, 1e-12).unwrap());

        let nonhom = SparsePoly::from_terms(2, [(vec![2, 0], ONE), (vec![0, 1], ONE)]).unwrap();
        assert!(matches!(nonhom.euler_check(&s, &pt, 1e-12), Err(Error::Precondition(_))));
    }

    #[test]
    fn arithmetic_cancels_exactly() {
        let p = plucker();
        assert!((&p - &p).is_zero());
        let sq = &p * &p;
        assert_eq!(sq.total_degree(), 4);
        assert_eq!(sq.num_terms(), 6);
    }

    #[test]
    fn canonical_text_is_graded_lex_and_parses_back() {
        let f = SparsePoly::from_terms(
            2,
            [(vec![0, 1], c(-0.5)), (vec![2, 0], C64::new(1.0, 2.0)), (vec![1, 1], c(3.0))],
        )
        .unwrap();
        let text = f.to_canonical_text();
        assert_eq!(text, "1 2 : 2 0\n3 0 : 1 1\n-0.5 0 : 0 1\n");
        assert_eq!(SparsePoly::from_canonical_text(2, &text).unwrap(), f);
        assert!(SparsePoly::from_canonical_text(3, &text).is_err());
    }

    #[test]
    fn substitute_and_remap() {
        let p = plucker();
        let r = p.substitute_zero(&[0]);
        assert_eq!(r.num_terms(), 2);
        let map: Vec<Option<usize>> = (0..6).map(|i| if i == 0 { None } else { Some(i - 1) }).collect();
        let moved = r.remap(5, &map).unwrap();
        assert_eq!(moved.nvars(), 5);
        assert_eq!(moved.num_terms(), 2);
        assert!(p.remap(5, &map).is_err());
    }

    #[test]
    fn parametric_specialization_is_affine() {
        // (u0 + u1) x0 - u0 over one variable with two parameters
        let mut f = ParametricPoly::zero(1, 2);
        f.add_poly_times(
            &SparsePoly::var(1, 0),
            &AffineForm { constant: ZERO, linear: vec![ONE, ONE] },
        );
        f.add_poly_times(
            &SparsePoly::constant(1, ONE),
            &AffineForm { constant: ZERO, linear: vec![-ONE, ZERO] },
        );
        let u = [c(2.0), c(3.0)];
        let x = [c(0.5)];
        assert_eq!(f.evaluate(&x, &u).unwrap(), c(0.5));
        assert!(!f.independent_of(0));
        assert!(f.specialize(&[ONE]).is_err());
    }

    #[test]
    fn variable_space_rejects_duplicates() {
        assert!(VariableSpace::new(vec!["a".into(), "a".into()], vec![VarGroup::P; 2]).is_err());
        let s = VariableSpace::lagrange(&["0".into(), "1".into()], 2);
        assert_eq!(s.indices_in(VarGroup::Lambda), vec![2, 3]);
        assert_eq!(s.name(3), "lambda2");
    }
}
