//! Compiled polynomial systems and the homotopies built from them.

use crate::poly::{SparsePoly, C64, ONE, ZERO};

use super::start::StartSystem;

const MAX_FACTORS: usize = 32;

/// Flattened polynomial system for repeated evaluation. Term coefficients are
/// supplied at evaluation time so the same structure serves fixed systems and
/// parameter homotopies.
#[derive(Clone, Debug)]
pub struct CompiledSystem {
    nvars: usize,
    eq_terms: Vec<(usize, usize)>,
    term_factors: Vec<(usize, usize)>,
    factors: Vec<(usize, u32)>,
    coeffs: Vec<C64>,
}

impl CompiledSystem {
    pub fn new(equations: &[SparsePoly]) -> Self {
        let nvars = equations.first().map_or(0, SparsePoly::nvars);
        let mut eq_terms = Vec::with_capacity(equations.len());
        let mut term_factors = Vec::new();
        let mut factors = Vec::new();
        let mut coeffs = Vec::new();
        for f in equations {
            assert_eq!(f.nvars(), nvars, "equations over different spaces");
            let start = term_factors.len();
            for (m, c) in f.terms() {
                let fs = factors.len();
                for (v, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        factors.push((v, e));
                    }
                }
                assert!(factors.len() - fs <= MAX_FACTORS, "monomial with too many variables");
                term_factors.push((fs, factors.len()));
                coeffs.push(*c);
            }
            eq_terms.push((start, term_factors.len()));
        }
        Self {
            nvars,
            eq_terms,
            term_factors,
            factors,
            coeffs,
        }
    }

    /// Same monomial structure with new term coefficients.
    pub fn with_coefficients(&self, coeffs: Vec<C64>) -> Self {
        assert_eq!(coeffs.len(), self.coeffs.len());
        Self {
            coeffs,
            ..self.clone()
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_equations(&self) -> usize {
        self.eq_terms.len()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    /// Equation index owning each term.
    pub fn term_equations(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_terms()];
        for (i, &(a, b)) in self.eq_terms.iter().enumerate() {
            out[a..b].iter_mut().for_each(|e| *e = i);
        }
        out
    }

    /// Values and row-major Jacobian with coefficients `coeffs`; if `alt` is
    /// given, also the values under the alternative coefficients.
    pub fn eval_with(
        &self,
        x: &[C64],
        coeffs: &[C64],
        value: &mut [C64],
        jac: &mut [C64],
        mut alt: Option<(&[C64], &mut [C64])>,
    ) {
        let n = self.nvars;
        value.iter_mut().for_each(|v| *v = ZERO);
        jac.iter_mut().for_each(|v| *v = ZERO);
        if let Some((_, av)) = alt.as_mut() {
            av.iter_mut().for_each(|v| *v = ZERO);
        }
        let mut vals = [ZERO; MAX_FACTORS];
        let mut ders = [ZERO; MAX_FACTORS];
        let mut prefix = [ZERO; MAX_FACTORS + 1];
        for (eq, &(ta, tb)) in self.eq_terms.iter().enumerate() {
            let row = &mut jac[eq * n..(eq + 1) * n];
            for t in ta..tb {
                let (fa, fb) = self.term_factors[t];
                let fs = &self.factors[fa..fb];
                let k = fs.len();
                prefix[0] = ONE;
                for (j, &(v, e)) in fs.iter().enumerate() {
                    let xv = x[v];
                    let pm1 = pow(xv, e - 1);
                    ders[j] = pm1 * f64::from(e);
                    vals[j] = pm1 * xv;
                    prefix[j + 1] = prefix[j] * vals[j];
                }
                let c = coeffs[t];
                let mon = prefix[k];
                value[eq] += c * mon;
                if let Some((ac, av)) = alt.as_mut() {
                    av[eq] += ac[t] * mon;
                }
                let mut suffix = c;
                for j in (0..k).rev() {
                    row[fs[j].0] += prefix[j] * ders[j] * suffix;
                    suffix *= vals[j];
                }
            }
        }
    }

    pub fn eval(&self, x: &[C64], value: &mut [C64], jac: &mut [C64]) {
        self.eval_with(x, &self.coeffs, value, jac, None);
    }

    /// Largest over equations of `Σ |c_t · m_t(x)|`, the size of the rounding
    /// error to expect when evaluating the system at `x`.
    pub fn term_magnitude(&self, x: &[C64]) -> f64 {
        let mut worst = 0.0f64;
        for &(ta, tb) in &self.eq_terms {
            let mut sum = 0.0;
            for t in ta..tb {
                let (fa, fb) = self.term_factors[t];
                let mon: f64 = self.factors[fa..fb]
                    .iter()
                    .map(|&(v, e)| x[v].norm().powi(e as i32))
                    .product();
                sum += self.coeffs[t].norm() * mon;
            }
            worst = worst.max(sum);
        }
        worst
    }

    pub fn values(&self, x: &[C64]) -> Vec<C64> {
        let mut v = vec![ZERO; self.num_equations()];
        let mut j = vec![ZERO; self.num_equations() * self.nvars];
        self.eval(x, &mut v, &mut j);
        v
    }
}

#[inline]
fn pow(x: C64, e: u32) -> C64 {
    match e {
        0 => ONE,
        1 => x,
        2 => x * x,
        3 => x * x * x,
        _ => x.powu(e),
    }
}

/// Evaluation buffers for one path.
#[derive(Clone, Debug)]
pub struct Eval {
    pub value: Vec<C64>,
    pub jac: Vec<C64>,
    pub dt: Vec<C64>,
    scratch_value: Vec<C64>,
    scratch_jac: Vec<C64>,
    scratch_coeffs: Vec<C64>,
}

impl Eval {
    pub fn new(n: usize) -> Self {
        Self {
            value: vec![ZERO; n],
            jac: vec![ZERO; n * n],
            dt: vec![ZERO; n],
            scratch_value: vec![ZERO; n],
            scratch_jac: vec![ZERO; n * n],
            scratch_coeffs: Vec::new(),
        }
    }
}

/// `H(x, t)` with `t` running from 1 (start) to 0 (target).
pub trait Homotopy: Sync {
    fn dim(&self) -> usize;

    /// Fills `H`, `∂H/∂x` and `∂H/∂t` at `(x, t)`.
    fn evaluate(&self, x: &[C64], t: f64, out: &mut Eval);
}

/// `(1 - t) F(x) + γ t G(x)`.
pub struct StraightLine<'a> {
    pub target: &'a CompiledSystem,
    pub start: &'a StartSystem,
    pub gamma: C64,
}

impl Homotopy for StraightLine<'_> {
    fn dim(&self) -> usize {
        self.target.nvars()
    }

    fn evaluate(&self, x: &[C64], t: f64, out: &mut Eval) {
        self.target.eval(x, &mut out.value, &mut out.jac);
        self.start
            .eval(x, &mut out.scratch_value, &mut out.scratch_jac);
        let a = 1.0 - t;
        let b = self.gamma * t;
        for i in 0..out.value.len() {
            let f = out.value[i];
            let g = out.scratch_value[i];
            out.dt[i] = self.gamma * g - f;
            out.value[i] = f * a + g * b;
        }
        for (jf, jg) in out.jac.iter_mut().zip(&out.scratch_jac) {
            *jf = *jf * a + jg * b;
        }
    }
}

/// A fixed system viewed as a homotopy constant in `t`.
pub struct Fixed<'a>(pub &'a CompiledSystem);

impl Homotopy for Fixed<'_> {
    fn dim(&self) -> usize {
        self.0.nvars()
    }

    fn evaluate(&self, x: &[C64], _t: f64, out: &mut Eval) {
        self.0.eval(x, &mut out.value, &mut out.jac);
        out.dt.iter_mut().for_each(|v| *v = ZERO);
    }
}

/// Straight segment in coefficient space: coefficients `c_end + t (c_start - c_end)`.
/// Coefficients that are affine in the data make this the linear data path
/// from `u_start` (t = 1) to `u_end` (t = 0).
pub struct CoefficientSegment<'a> {
    pub system: &'a CompiledSystem,
    pub c_start: Vec<C64>,
    pub c_end: Vec<C64>,
    diff: Vec<C64>,
}

impl<'a> CoefficientSegment<'a> {
    pub fn new(system: &'a CompiledSystem, c_start: Vec<C64>, c_end: Vec<C64>) -> Self {
        assert_eq!(c_start.len(), system.num_terms());
        assert_eq!(c_end.len(), system.num_terms());
        let diff = c_start.iter().zip(&c_end).map(|(a, b)| a - b).collect();
        Self {
            system,
            c_start,
            c_end,
            diff,
        }
    }
}

impl Homotopy for CoefficientSegment<'_> {
    fn dim(&self) -> usize {
        self.system.nvars()
    }

    fn evaluate(&self, x: &[C64], t: f64, out: &mut Eval) {
        let mut coeffs = std::mem::take(&mut out.scratch_coeffs);
        coeffs.clear();
        coeffs.extend(self.c_end.iter().zip(&self.diff).map(|(e, d)| e + d * t));
        self.system
            .eval_with(x, &coeffs, &mut out.value, &mut out.jac, Some((&self.diff, &mut out.dt)));
        out.scratch_coeffs = coeffs;
    }
}
