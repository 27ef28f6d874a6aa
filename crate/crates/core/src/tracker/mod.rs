//! Predictor-corrector path tracking for square polynomial systems.
//!
//! Homotopies run from `t = 1` (start system) to `t = end_t` (target).
//! Each step takes a fourth-order Runge-Kutta prediction along the tangent
//! `dx/dt = -H_x^{-1} H_t` and then corrects with a few Newton iterations.
//! The endpoint is then refined by plain Newton on the target system. A
//! regular root shows quadratic contraction there; a multiple root only
//! halves the error at each iteration.

mod eval;
mod start;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{C64, ZERO};
use crate::random::{rng, stream_id};

pub use eval::{CoefficientSegment, CompiledSystem, Eval, Fixed, Homotopy, StraightLine};
pub use start::{
    bezout_multihomog, bezout_total, multihomog_start, total_degree_start, LinearFactor,
    StartSystem, VariableGroups,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Endpoint residual bound, relative to the magnitude of the evaluated terms.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub divergence_norm: f64,
    pub end_t: f64,
    pub final_refine_tol: f64,
    /// Relative size of a Newton update accepted as converged while tracking.
    pub corrector_tol: f64,
    pub corrector_iters: usize,
    /// Largest last-step contraction ratio still treated as quadratic.
    pub contraction_max: f64,
    pub cond_max: f64,
    pub max_steps: usize,
    /// Explicit gamma; drawn on the unit circle from `seed` when absent.
    pub gamma: Option<C64>,
    pub seed: u64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            min_step: 1e-7,
            max_step: 0.1,
            newton_tol: 1e-10,
            max_newton_iters: 10,
            divergence_norm: 1e8,
            end_t: 1e-12,
            final_refine_tol: 1e-12,
            corrector_tol: 1e-8,
            corrector_iters: 3,
            contraction_max: 0.25,
            cond_max: 1e11,
            max_steps: 50_000,
            gamma: None,
            seed: 0,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.min_step,
            self.initial_step,
            self.max_step,
            self.newton_tol,
            self.divergence_norm,
            self.end_t,
            self.final_refine_tol,
            self.corrector_tol,
            self.contraction_max,
            self.cond_max,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Argument("tracker tolerances must be positive and finite".into()));
        }
        if !(self.min_step <= self.initial_step && self.initial_step < 1.0) {
            return Err(Error::Argument("need 0 < min_step <= initial_step < 1".into()));
        }
        if self.end_t >= 1.0 || self.max_newton_iters == 0 || self.corrector_iters == 0 {
            return Err(Error::Argument("invalid tracker iteration settings".into()));
        }
        if let Some(g) = self.gamma {
            if g.norm() == 0.0 || !g.norm().is_finite() {
                return Err(Error::Argument("gamma must be a nonzero complex number".into()));
            }
        }
        Ok(())
    }

    pub fn gamma(&self) -> C64 {
        self.gamma.unwrap_or_else(|| {
            let mut r = rng(self.seed, stream_id("gamma"));
            C64::from_polar(1.0, r.gen_range(0.0..std::f64::consts::TAU))
        })
    }

    /// A more cautious copy used when re-tracking suspicious paths.
    pub fn cautious(&self, round: u32) -> Self {
        let f = 0.1f64.powi(round as i32);
        Self {
            initial_step: (self.initial_step * f).max(self.min_step),
            max_step: (self.max_step * f).max(self.min_step),
            corrector_tol: self.corrector_tol * f,
            max_steps: self.max_steps * 10usize.pow(round),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    Converged,
    Diverged,
    StepFailure,
    SingularEndpoint,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathResult {
    pub path_id: usize,
    pub endpoint: Vec<C64>,
    pub status: PathStatus,
    pub residual: f64,
    pub newton_contraction: f64,
    pub condition: f64,
    pub steps: usize,
}

/// Outcome of Newton refinement on a fixed system.
#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub point: Vec<C64>,
    pub residual: f64,
    /// Last ratio of consecutive update sizes above the noise floor.
    pub contraction: f64,
    pub iterations: usize,
    pub singular: bool,
    pub condition: f64,
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Newton's method on `system` from `point`, stopping when the update falls
/// below `tol·(1+|x|)` or after `max_iters` iterations.
pub fn newton_refine(system: &CompiledSystem, point: &[C64], tol: f64, max_iters: usize) -> NewtonOutcome {
    let n = system.nvars();
    let mut x = point.to_vec();
    let mut value = vec![ZERO; n];
    let mut jac = vec![ZERO; n * n];
    let mut piv = vec![0; n];
    let mut prev_step: Option<f64> = None;
    let mut contraction = 0.0;
    let mut singular = false;
    let mut iterations = 0;
    for _ in 0..max_iters {
        system.eval(&x, &mut value, &mut jac);
        if !linalg::lu_factor(&mut jac, n, &mut piv) {
            singular = true;
            break;
        }
        let mut dx: Vec<C64> = value.iter().map(|v| -v).collect();
        linalg::lu_solve(&jac, n, &piv, &mut dx);
        if !finite(&dx) {
            singular = true;
            break;
        }
        iterations += 1;
        let s = max_norm(&dx);
        let scale = 1.0 + max_norm(&x);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        if let Some(p) = prev_step {
            if p > 1e-13 * scale {
                contraction = s / p;
            }
        }
        prev_step = Some(s);
        if s < tol * scale {
            break;
        }
    }
    system.eval(&x, &mut value, &mut jac);
    let condition = linalg::condition_number(&jac, n);
    NewtonOutcome {
        residual: if finite(&value) { max_norm(&value) } else { f64::INFINITY },
        point: x,
        contraction,
        iterations,
        singular: singular || !condition.is_finite(),
        condition,
    }
}

struct Workspace {
    eval: Eval,
    piv: Vec<usize>,
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Self {
            eval: Eval::new(n),
            piv: vec![0; n],
            k: std::array::from_fn(|_| vec![ZERO; n]),
            tmp: vec![ZERO; n],
        }
    }

    /// Tangent `dx/dt` at `(x, t)` into `k[slot]`.
    fn tangent<H: Homotopy + ?Sized>(&mut self, h: &H, x: &[C64], t: f64, slot: usize) -> bool {
        let n = x.len();
        h.evaluate(x, t, &mut self.eval);
        if !linalg::lu_factor(&mut self.eval.jac, n, &mut self.piv) {
            return false;
        }
        let k = &mut self.k[slot];
        for (ki, d) in k.iter_mut().zip(&self.eval.dt) {
            *ki = -d;
        }
        linalg::lu_solve(&self.eval.jac, n, &self.piv, k);
        finite(k)
    }

    /// One Newton update at fixed `t`; returns the update size.
    fn newton_step<H: Homotopy + ?Sized>(&mut self, h: &H, x: &mut [C64], t: f64) -> Option<f64> {
        let n = x.len();
        h.evaluate(x, t, &mut self.eval);
        if !linalg::lu_factor(&mut self.eval.jac, n, &mut self.piv) {
            return None;
        }
        for (d, v) in self.tmp.iter_mut().zip(&self.eval.value) {
            *d = -v;
        }
        linalg::lu_solve(&self.eval.jac, n, &self.piv, &mut self.tmp);
        if !finite(&self.tmp) {
            return None;
        }
        for (xi, d) in x.iter_mut().zip(&self.tmp) {
            *xi += d;
        }
        Some(max_norm(&self.tmp))
    }

    fn residual<H: Homotopy + ?Sized>(&mut self, h: &H, x: &[C64], t: f64) -> f64 {
        h.evaluate(x, t, &mut self.eval);
        if finite(&self.eval.value) {
            max_norm(&self.eval.value)
        } else {
            f64::INFINITY
        }
    }
}

enum Step {
    Accepted { easy: bool },
    Rejected,
}

fn try_step<H: Homotopy + ?Sized>(
    h: &H,
    ws: &mut Workspace,
    x: &[C64],
    t: f64,
    dt: f64,
    config: &TrackerConfig,
    out: &mut Vec<C64>,
) -> Step {
    let n = x.len();
    let half = 0.5 * dt;
    if !ws.tangent(h, x, t, 0) {
        return Step::Rejected;
    }
    out.clear();
    out.extend((0..n).map(|i| x[i] - ws.k[0][i] * half));
    let y = out.clone();
    if !ws.tangent(h, &y, t - half, 1) {
        return Step::Rejected;
    }
    let y: Vec<C64> = (0..n).map(|i| x[i] - ws.k[1][i] * half).collect();
    if !ws.tangent(h, &y, t - half, 2) {
        return Step::Rejected;
    }
    let y: Vec<C64> = (0..n).map(|i| x[i] - ws.k[2][i] * dt).collect();
    if !ws.tangent(h, &y, t - dt, 3) {
        return Step::Rejected;
    }
    out.clear();
    out.extend((0..n).map(|i| {
        x[i] - (ws.k[0][i] + ws.k[1][i] * 2.0 + ws.k[2][i] * 2.0 + ws.k[3][i]) * (dt / 6.0)
    }));
    let displacement = (0..n).map(|i| (out[i] - x[i]).norm()).fold(0.0, f64::max);
    let t_new = t - dt;
    for it in 0..config.corrector_iters {
        let Some(s) = ws.newton_step(h, out, t_new) else {
            return Step::Rejected;
        };
        let scale = 1.0 + max_norm(out);
        if it == 0 && s > 0.1 * displacement && s > 10.0 * config.corrector_tol * scale {
            return Step::Rejected;
        }
        if s < config.corrector_tol * scale {
            return Step::Accepted { easy: it + 1 < 3 };
        }
    }
    Step::Rejected
}

/// Tracks one path of `h` from `start` at `t = 1` to `t = end_t` and refines
/// the endpoint against `target`.
pub fn track_path<H: Homotopy + ?Sized>(
    h: &H,
    target: &CompiledSystem,
    start: &[C64],
    path_id: usize,
    config: &TrackerConfig,
) -> Result<PathResult> {
    let n = h.dim();
    if start.len() != n || target.nvars() != n {
        return Err(Error::Dimension {
            expected: n,
            got: start.len(),
        });
    }
    let mut ws = Workspace::new(n);
    let start_res = ws.residual(h, start, 1.0);
    let start_tol = 10.0 * config.newton_tol * (1.0 + max_norm(start));
    if start_res.is_nan() || start_res > start_tol {
        return Err(Error::Precondition(format!(
            "start point of path {path_id} has residual {start_res:.3e} (tolerance {start_tol:.1e})"
        )));
    }

    let mut x = start.to_vec();
    let mut t = 1.0;
    let mut step = config.initial_step;
    let mut easy_run = 0;
    let mut steps = 0;
    let mut next = Vec::with_capacity(n);
    let failed = |x: Vec<C64>, status, steps| PathResult {
        path_id,
        endpoint: x,
        status,
        residual: f64::INFINITY,
        newton_contraction: f64::NAN,
        condition: f64::INFINITY,
        steps,
    };
    while t > config.end_t {
        if steps >= config.max_steps {
            return Ok(failed(x, PathStatus::StepFailure, steps));
        }
        steps += 1;
        // near t = 0 steps are capped by a fraction of t, so tracking
        // approaches the target geometrically
        let dt = step
            .min(config.max_step)
            .min(0.5 * t)
            .min(t - config.end_t);
        match try_step(h, &mut ws, &x, t, dt, config, &mut next) {
            Step::Accepted { easy } => {
                std::mem::swap(&mut x, &mut next);
                t -= dt;
                if max_norm(&x) > config.divergence_norm {
                    return Ok(failed(x, PathStatus::Diverged, steps));
                }
                if easy {
                    easy_run += 1;
                    if easy_run >= 3 {
                        step = (2.0 * dt).min(config.max_step);
                        easy_run = 0;
                    }
                } else {
                    easy_run = 0;
                    step = dt;
                }
            }
            Step::Rejected => {
                easy_run = 0;
                step = 0.5 * dt;
                if step < config.min_step * t.min(1.0) {
                    let status = if max_norm(&x) > config.divergence_norm.sqrt() {
                        PathStatus::Diverged
                    } else {
                        PathStatus::StepFailure
                    };
                    return Ok(failed(x, status, steps));
                }
            }
        }
    }

    let refined = newton_refine(target, &x, config.final_refine_tol, config.max_newton_iters);
    let norm = max_norm(&refined.point);
    let moved = (0..n)
        .map(|i| (refined.point[i] - x[i]).norm())
        .fold(0.0, f64::max);
    let status = if norm.is_nan() || norm > config.divergence_norm {
        PathStatus::Diverged
    } else if moved > 1e-3 * (1.0 + norm) {
        // the tracked endpoint was not near a root of the target
        PathStatus::StepFailure
    } else if refined.singular
        || refined.condition > config.cond_max
        || refined.contraction > config.contraction_max
    {
        PathStatus::SingularEndpoint
    } else if refined.residual < config.newton_tol * target.term_magnitude(&refined.point).max(1.0) {
        PathStatus::Converged
    } else {
        PathStatus::StepFailure
    };
    Ok(PathResult {
        path_id,
        endpoint: refined.point,
        status,
        residual: refined.residual,
        newton_contraction: refined.contraction,
        condition: refined.condition,
        steps,
    })
}

/// Tracks paths `0..count` in parallel; `start(i)` produces the i-th start
/// point. Results come back in path order whatever the schedule.
pub fn track_all<H, F>(
    h: &H,
    target: &CompiledSystem,
    count: usize,
    start: F,
    config: &TrackerConfig,
) -> Result<Vec<PathResult>>
where
    H: Homotopy + ?Sized,
    F: Fn(usize) -> Vec<C64> + Sync,
{
    config.validate()?;
    (0..count)
        .into_par_iter()
        .map(|i| track_path(h, target, &start(i), i, config))
        .collect()
}

/// Tracks every start point of `start` to `target` with the gamma trick.
pub fn solve_from_start(
    target: &CompiledSystem,
    start: &StartSystem,
    config: &TrackerConfig,
) -> Result<Vec<PathResult>> {
    let count = usize::try_from(start.num_points())
        .map_err(|_| Error::Overflow("start point count"))?;
    let h = StraightLine {
        target,
        start,
        gamma: config.gamma(),
    };
    track_all(&h, target, count, |i| start.point(i), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Monomial, SparsePoly, ONE};

    fn quadratic(c: f64) -> SparsePoly {
        let mut f = SparsePoly::zero(1);
        f.add_term(Monomial::new(vec![2]), ONE);
        f.add_term(Monomial::new(vec![0]), C64::new(-c, 0.0));
        f
    }

    #[test]
    fn branches_of_x2_minus_4() {
        let target = CompiledSystem::new(&[quadratic(4.0)]);
        let start = total_degree_start(&[quadratic(4.0)]).unwrap();
        let res = solve_from_start(&target, &start, &TrackerConfig::default()).unwrap();
        let mut ends: Vec<f64> = res
            .iter()
            .map(|r| {
                assert_eq!(r.status, PathStatus::Converged);
                assert!(r.endpoint[0].im.abs() < 1e-12);
                r.endpoint[0].re
            })
            .collect();
        ends.sort_by(f64::total_cmp);
        assert!((ends[0] + 2.0).abs() < 1e-12 && (ends[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn identity_homotopy_keeps_start_points() {
        let mut f = SparsePoly::zero(2);
        f.add_term(Monomial::new(vec![3, 0]), ONE);
        f.add_term(Monomial::new(vec![0, 0]), -ONE);
        let mut g = SparsePoly::zero(2);
        g.add_term(Monomial::new(vec![0, 2]), ONE);
        g.add_term(Monomial::new(vec![0, 0]), -ONE);
        let start = total_degree_start(&[f.clone(), g.clone()]).unwrap();
        let target = CompiledSystem::new(&[f, g]);
        let config = TrackerConfig {
            gamma: Some(C64::new(0.3, -0.8)),
            ..TrackerConfig::default()
        };
        for r in solve_from_start(&target, &start, &config).unwrap() {
            let p = start.point(r.path_id);
            assert_eq!(r.status, PathStatus::Converged);
            assert!(max_norm(&[r.endpoint[0] - p[0], r.endpoint[1] - p[1]]) < 1e-10);
        }
    }

    #[test]
    fn newton_on_simple_and_double_roots() {
        let simple = CompiledSystem::new(&[quadratic(1.0)]);
        let out = newton_refine(&simple, &[C64::new(1.1, 0.0)], 1e-14, 5);
        assert!((out.point[0] - ONE).norm() < 1e-12);
        assert!(out.residual < 1e-12);
        assert!(out.contraction < 0.25);

        let double = CompiledSystem::new(&[quadratic(0.0)]);
        let out = newton_refine(&double, &[C64::new(0.1, 0.0)], 1e-14, 10);
        assert!((out.contraction - 0.5).abs() < 1e-9);
    }

    #[test]
    fn bad_start_is_rejected() {
        let target = CompiledSystem::new(&[quadratic(4.0)]);
        let start = total_degree_start(&[quadratic(4.0)]).unwrap();
        let h = StraightLine {
            target: &target,
            start: &start,
            gamma: ONE,
        };
        let err = track_path(&h, &target, &[C64::new(1.5, 0.0)], 0, &TrackerConfig::default());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn solution_at_infinity_diverges() {
        // x*y - 1 = 0, x - 1 = 0 has one finite root; total degree is 2
        let mut f = SparsePoly::zero(2);
        f.add_term(Monomial::new(vec![1, 1]), ONE);
        f.add_term(Monomial::new(vec![0, 0]), -ONE);
        let mut g = SparsePoly::zero(2);
        g.add_term(Monomial::new(vec![1, 0]), ONE);
        g.add_term(Monomial::new(vec![0, 0]), -ONE);
        let eqs = [f, g];
        let start = total_degree_start(&eqs).unwrap();
        let target = CompiledSystem::new(&eqs);
        let res = solve_from_start(&target, &start, &TrackerConfig::default()).unwrap();
        let converged: Vec<_> = res.iter().filter(|r| r.status == PathStatus::Converged).collect();
        assert_eq!(converged.len(), 1);
        assert!((converged[0].endpoint[0] - ONE).norm() < 1e-10);
        assert!((converged[0].endpoint[1] - ONE).norm() < 1e-10);
    }

    #[test]
    fn config_roundtrips_through_json() {
        let c = TrackerConfig {
            gamma: Some(C64::new(0.6, 0.8)),
            ..TrackerConfig::default()
        };
        let back: TrackerConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, back);
        assert!(TrackerConfig { min_step: 1.0, ..TrackerConfig::default() }.validate().is_err());
    }
}
