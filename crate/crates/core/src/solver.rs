//! Full solves of the likelihood equations, classification of the solutions
//! by zero pattern, and the parameter homotopy that carries solutions found on
//! the data-zero locus out to generic data.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::likelihood::{
    lagrange_system, parametric_system, restricted_system, LagrangeSystem, Normalization,
    ParametricSystem,
};
use crate::models::{subsets, ModelSpec, ZeroPattern};
use crate::poly::{SparsePoly, C64, ONE};
use crate::random::{generic_data, rng, stream_id};
use crate::tracker::{
    bezout_multihomog, bezout_total, multihomog_start, total_degree_start, track_all,
    CoefficientSegment, CompiledSystem, Homotopy, PathResult, PathStatus, StartSystem,
    StraightLine, TrackerConfig, VariableGroups,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    TotalDegree,
    #[default]
    Multihomog,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub tracker: TrackerConfig,
    pub strategy: Strategy,
    pub path_budget: u64,
    pub membership_tol: f64,
    pub zero_tol: f64,
    pub dedup_tol: f64,
    /// Rounds of re-tracking for paths whose endpoints collide.
    pub retrack_rounds: u32,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            tracker: TrackerConfig::default(),
            strategy: Strategy::Multihomog,
            path_budget: 2_000_000,
            membership_tol: 1e-6,
            zero_tol: 1e-6,
            dedup_tol: 1e-6,
            retrack_rounds: 2,
        }
    }
}

impl SolveConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.tracker.seed = seed;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Direct,
    Subproblem { model_zeros: Vec<usize> },
    TrackedFrom { u_start: Vec<C64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    /// All `n+1` coordinates, zeros at model-zero positions.
    pub p: Vec<C64>,
    pub lambda: Vec<C64>,
    pub residual: f64,
    pub zero_pattern: BTreeSet<usize>,
    /// A coordinate outside `S` vanished to tolerance.
    pub ambiguous: bool,
    pub regular: bool,
    pub on_model: bool,
    pub source: Source,
}

impl CriticalPoint {
    /// Whether the point enters the regular-solution counts.
    pub fn counts(&self) -> bool {
        self.regular && self.on_model && !self.ambiguous
    }

    fn distance(&self, other: &Self) -> f64 {
        self.p
            .iter()
            .zip(&other.p)
            .chain(self.lambda.iter().zip(&other.lambda))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub paths: usize,
    pub converged: usize,
    pub diverged: usize,
    pub step_failure: usize,
    pub singular: usize,
    pub duplicates: usize,
    pub off_model: usize,
    pub ambiguous: usize,
    pub retracked: usize,
    pub bezout_total: u128,
    /// Partition used for the start system, as variable-group sizes.
    pub partition: Vec<usize>,
}

impl SolveStats {
    fn record(&mut self, results: &[PathResult]) {
        self.paths += results.len();
        for r in results {
            match r.status {
                PathStatus::Converged => self.converged += 1,
                PathStatus::Diverged => self.diverged += 1,
                PathStatus::StepFailure => self.step_failure += 1,
                PathStatus::SingularEndpoint => self.singular += 1,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    pub model_name: String,
    pub model_hash: String,
    pub u: Vec<C64>,
    pub pattern: ZeroPattern,
    pub points: Vec<CriticalPoint>,
    /// Regular on-model points by detected zero pattern.
    pub counts: BTreeMap<BTreeSet<usize>, usize>,
    /// False when the restricted system is not proper; no paths are tracked.
    pub proper: bool,
    pub stats: SolveStats,
    pub seed: u64,
}

impl SolutionSet {
    fn new(model: &ModelSpec, u: &[C64], pattern: &ZeroPattern, seed: u64) -> Self {
        Self {
            model_name: model.name.clone(),
            model_hash: model.hash(),
            u: u.to_vec(),
            pattern: pattern.clone(),
            points: Vec::new(),
            counts: BTreeMap::new(),
            proper: true,
            stats: SolveStats::default(),
            seed,
        }
    }

    /// Number of regular on-model solutions (all patterns).
    pub fn regular_count(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count_for(&self, r: &BTreeSet<usize>) -> usize {
        self.counts.get(r).copied().unwrap_or(0)
    }

    /// The counted points, in archive order.
    pub fn regular_points(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| p.counts())
    }

    fn finish(&mut self) {
        self.points.sort_by_cached_key(canonical_key);
        self.counts.clear();
        for pt in self.points.iter().filter(|p| p.counts()) {
            *self.counts.entry(pt.zero_pattern.clone()).or_insert(0) += 1;
        }
        self.stats.off_model = self.points.iter().filter(|p| p.regular && !p.on_model).count();
        self.stats.ambiguous = self.points.iter().filter(|p| p.ambiguous).count();
    }

    pub fn header(&self, config: Option<&SolveConfig>) -> ArchiveHeader {
        ArchiveHeader {
            kind: "header".into(),
            model: self.model_name.clone(),
            model_hash: self.model_hash.clone(),
            u: self.u.clone(),
            model_zeros: self.pattern.model_zeros.iter().copied().collect(),
            data_zeros: self.pattern.data_zeros.iter().copied().collect(),
            seed: self.seed,
            proper: self.proper,
            counts: self
                .counts
                .iter()
                .map(|(r, &count)| PatternCount {
                    pattern: r.iter().copied().collect(),
                    count,
                })
                .collect(),
            stats: self.stats.clone(),
            config: config.cloned(),
        }
    }

    /// JSON lines: a header record then one record per point.
    pub fn to_jsonl(&self, config: Option<&SolveConfig>) -> String {
        let mut out = serde_json::to_string(&self.header(config)).expect("header serializes");
        out.push('\n');
        for p in &self.points {
            out.push_str(&serde_json::to_string(&PointRecord::from(p)).expect("point serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<(ArchiveHeader, Vec<CriticalPoint>)> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty solution archive".into()))?;
        let header: ArchiveHeader = serde_json::from_str(first)?;
        if header.kind != "header" {
            return Err(Error::Parse("first archive record is not a header".into()));
        }
        let points = lines
            .map(|l| serde_json::from_str::<PointRecord>(l).map(CriticalPoint::from).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        Ok((header, points))
    }
}

fn canonical_key(p: &CriticalPoint) -> Vec<i64> {
    p.p.iter()
        .chain(&p.lambda)
        .flat_map(|z| [(z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64])
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternCount {
    pub pattern: Vec<usize>,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveHeader {
    pub kind: String,
    pub model: String,
    pub model_hash: String,
    pub u: Vec<C64>,
    pub model_zeros: Vec<usize>,
    pub data_zeros: Vec<usize>,
    pub seed: u64,
    pub proper: bool,
    pub counts: Vec<PatternCount>,
    pub stats: SolveStats,
    pub config: Option<SolveConfig>,
}

#[derive(Serialize, Deserialize)]
struct PointRecord {
    kind: String,
    #[serde(flatten)]
    point: CriticalPoint,
}

impl From<&CriticalPoint> for PointRecord {
    fn from(p: &CriticalPoint) -> Self {
        Self {
            kind: "point".into(),
            point: p.clone(),
        }
    }
}

impl From<PointRecord> for CriticalPoint {
    fn from(r: PointRecord) -> Self {
        r.point
    }
}

/// Result of [`classify_zero_pattern`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroClass {
    pub pattern: BTreeSet<usize>,
    pub ambiguous: bool,
}

/// `R = {i ∈ S : |p_i| < tol}`; a vanishing coordinate outside `S` marks the
/// point ambiguous.
pub fn classify_zero_pattern(p: &[C64], s: &BTreeSet<usize>, tol: f64) -> ZeroClass {
    let mut pattern = BTreeSet::new();
    let mut ambiguous = false;
    for (i, z) in p.iter().enumerate() {
        if z.norm() < tol {
            if s.contains(&i) {
                pattern.insert(i);
            } else {
                ambiguous = true;
            }
        }
    }
    ZeroClass { pattern, ambiguous }
}

/// Keeps one representative (lowest residual) per cluster of points within
/// `tol` in max-norm over `(p, λ)`.
pub fn deduplicate(points: Vec<CriticalPoint>, tol: f64) -> Vec<CriticalPoint> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].residual.total_cmp(&points[b].residual).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if kept.iter().all(|&k| points[k].distance(&points[i]) >= tol) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    let mut slots: Vec<Option<CriticalPoint>> = points.into_iter().map(Some).collect();
    kept.into_iter().filter_map(|i| slots[i].take()).collect()
}

/// Points whose coordinates satisfy every generator of `model` to relative
/// tolerance `tol`.
pub fn filter_membership(points: Vec<CriticalPoint>, model: &ModelSpec, tol: f64) -> Vec<CriticalPoint> {
    points.into_iter().filter(|pt| model.is_member(&pt.p, tol)).collect()
}

/// Start system for `sys` under `strategy`; for the multihomogeneous
/// strategy the cheapest of the `{P, Λ}` split and the model's coordinate
/// block hints (each with `Λ` as an extra group).
fn start_system(
    sys: &LagrangeSystem,
    model: &ModelSpec,
    equations: &[SparsePoly],
    config: &SolveConfig,
) -> Result<(StartSystem, Vec<usize>)> {
    let budget_error = |bound| Error::Budget {
        bound,
        budget: u128::from(config.path_budget),
        context: Some(sys.model_name.clone()),
    };
    match config.strategy {
        Strategy::TotalDegree => {
            let bound = bezout_total(equations);
            if bound > u128::from(config.path_budget) {
                return Err(budget_error(bound));
            }
            Ok((total_degree_start(equations)?, vec![sys.num_vars()]))
        }
        Strategy::Multihomog => {
            let nvars = sys.num_vars();
            let mut candidates = vec![VariableGroups::by_tag(&sys.space)];
            let lambda: Vec<usize> = (sys.num_p()..nvars).collect();
            for blocks in &model.block_hints {
                let mut groups: Vec<Vec<usize>> = blocks
                    .iter()
                    .map(|b| {
                        sys.coordinates
                            .iter()
                            .enumerate()
                            .filter(|(_, i)| b.contains(i))
                            .map(|(k, _)| k)
                            .collect()
                    })
                    .collect();
                groups.push(lambda.clone());
                if let Ok(g) = VariableGroups::new(nvars, groups) {
                    candidates.push(g);
                }
            }
            let mut best: Option<(u128, VariableGroups)> = None;
            for g in candidates {
                let b = bezout_multihomog(equations, &g)?;
                if b > 0 && best.as_ref().is_none_or(|(bb, _)| b < *bb) {
                    best = Some((b, g));
                }
            }
            let (bound, groups) = best.ok_or_else(|| {
                Error::Structural("multihomogeneous root bound is zero for every partition".into())
            })?;
            if bound > u128::from(config.path_budget) {
                return Err(budget_error(bound));
            }
            let sizes = groups.groups().iter().map(Vec::len).collect();
            let start = multihomog_start(equations, &groups, config.tracker.seed, u128::from(config.path_budget))?;
            Ok((start, sizes))
        }
    }
}

/// Tracks every path, then re-tracks with tighter steps the paths whose
/// converged endpoints coincide (a sign of path jumping).
fn track_robust<H, F>(
    h: &H,
    target: &CompiledSystem,
    count: usize,
    start: F,
    config: &SolveConfig,
    stats: &mut SolveStats,
) -> Result<Vec<PathResult>>
where
    H: Homotopy + ?Sized,
    F: Fn(usize) -> Vec<C64> + Sync,
{
    let mut results = track_all(h, target, count, &start, &config.tracker)?;
    for round in 1..=config.retrack_rounds {
        let suspects = colliding_paths(&results, config.dedup_tol);
        if suspects.is_empty() {
            break;
        }
        stats.retracked += suspects.len();
        let cautious = config.tracker.cautious(round);
        let redo = track_all(h, target, suspects.len(), |k| start(suspects[k]), &cautious)?;
        for (k, mut r) in redo.into_iter().enumerate() {
            r.path_id = suspects[k];
            results[suspects[k]] = r;
        }
    }
    Ok(results)
}

fn colliding_paths(results: &[PathResult], tol: f64) -> Vec<usize> {
    let conv: Vec<&PathResult> = results
        .iter()
        .filter(|r| r.status == PathStatus::Converged)
        .collect();
    let mut hit = BTreeSet::new();
    for (a, ra) in conv.iter().enumerate() {
        for rb in &conv[a + 1..] {
            let d = ra
                .endpoint
                .iter()
                .zip(&rb.endpoint)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            if d < tol * (1.0 + ra.endpoint.iter().map(|z| z.norm()).fold(0.0, f64::max)) {
                hit.insert(ra.path_id);
                hit.insert(rb.path_id);
            }
        }
    }
    hit.into_iter().collect()
}

/// Turns path endpoints into classified, deduplicated critical points.
#[allow(clippy::too_many_arguments)]
fn collect_points(
    results: &[PathResult],
    residual: impl Fn(&[C64]) -> f64,
    embed: impl Fn(&[C64]) -> (Vec<C64>, Vec<C64>),
    model: &ModelSpec,
    s: &BTreeSet<usize>,
    source: &Source,
    config: &SolveConfig,
    set: &mut SolutionSet,
) {
    let mut points = Vec::new();
    for r in results {
        let regular = r.status == PathStatus::Converged;
        if !regular && r.status != PathStatus::SingularEndpoint {
            continue;
        }
        let (p, lambda) = embed(&r.endpoint);
        let class = classify_zero_pattern(&p, s, config.zero_tol);
        points.push(CriticalPoint {
            on_model: model.is_member(&p, config.membership_tol),
            residual: residual(&r.endpoint),
            zero_pattern: class.pattern,
            ambiguous: class.ambiguous,
            regular,
            p,
            lambda,
            source: source.clone(),
        });
    }
    let before = points.len();
    // regular representatives win over singular ones at the same location
    points.sort_by_key(|p| !p.regular);
    let mut points = deduplicate(points, config.dedup_tol);
    set.stats.duplicates += before - points.len();
    set.points.append(&mut points);
}

fn solve_system(
    sys: &LagrangeSystem,
    model: &ModelSpec,
    source: Source,
    config: &SolveConfig,
) -> Result<SolutionSet> {
    config.tracker.validate()?;
    let mut set = SolutionSet::new(model, &sys.u, &sys.pattern, config.tracker.seed);
    set.proper = sys.proper;
    if !sys.proper {
        return Ok(set);
    }
    let equations = sys.scaled_equations();
    set.stats.bezout_total = bezout_total(&equations);
    let (start, partition) = start_system(sys, model, &equations, config)?;
    set.stats.partition = partition;
    let target = CompiledSystem::new(&equations);
    let count = usize::try_from(start.num_points()).map_err(|_| Error::Overflow("path count"))?;
    let h = StraightLine {
        target: &target,
        start: &start,
        gamma: config.tracker.gamma(),
    };
    let results = track_robust(&h, &target, count, |i| start.point(i), config, &mut set.stats)?;
    set.stats.record(&results);
    collect_points(
        &results,
        |x| sys.residual(x).unwrap_or(f64::INFINITY),
        |x| sys.embed(x),
        model,
        &sys.pattern.data_zeros,
        &source,
        config,
        &mut set,
    );
    set.finish();
    Ok(set)
}

/// Solves `LL(X_R, u)` for the pattern `(R, S)`; `counts[R]` is then the
/// number of solutions of `ML_{R,S}`.
pub fn solve(model: &ModelSpec, u: &[C64], pattern: &ZeroPattern, config: &SolveConfig) -> Result<SolutionSet> {
    let sys = restricted_system(model, pattern, u, Normalization::AffineChart)?;
    let source = if pattern.model_zeros.is_empty() {
        Source::Direct
    } else {
        Source::Subproblem {
            model_zeros: pattern.model_zeros.iter().copied().collect(),
        }
    };
    solve_system(&sys, model, source, config)
}

/// Solves the unrestricted system at data that may contain zeros; the
/// regular solutions split over the patterns `R ⊆ S` (S = zeros of `u`).
pub fn solve_fiber(model: &ModelSpec, u: &[C64], config: &SolveConfig) -> Result<SolutionSet> {
    let sys = lagrange_system(model, u)?;
    solve_system(&sys, model, Source::Direct, config)
}

/// Coefficients of the compiled structure of `family` at data `u`.
fn family_coefficients(family: &ParametricSystem, u: &[C64]) -> Vec<C64> {
    family
        .equations
        .iter()
        .flat_map(|f| f.terms().map(|(_, form)| form.evaluate(u)))
        .collect()
}

fn family_structure(family: &ParametricSystem) -> CompiledSystem {
    let polys: Vec<SparsePoly> = family
        .equations
        .iter()
        .map(|f| {
            let mut g = SparsePoly::zero(f.nvars());
            for (m, _) in f.terms() {
                g.add_term(m.clone(), ONE);
            }
            g
        })
        .collect();
    CompiledSystem::new(&polys)
}

/// Random complex waypoint between `a` and `b`, off the real segment.
fn waypoint(a: &[C64], b: &[C64], seed: u64) -> Vec<C64> {
    let mut r = rng(seed, stream_id("waypoint"));
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let jitter = C64::from_polar(r.gen_range(0.5..1.0), r.gen_range(0.0..std::f64::consts::TAU));
            (x + y) * 0.5 + jitter
        })
        .collect()
}

/// Carries `starts` (solutions of `family` at `u_start`, as variable vectors)
/// to `u_target` along a two-segment complex path through a random waypoint.
pub fn parameter_homotopy(
    family: &ParametricSystem,
    model: &ModelSpec,
    u_start: &[C64],
    starts: &[Vec<C64>],
    u_target: &[C64],
    config: &SolveConfig,
) -> Result<SolutionSet> {
    config.tracker.validate()?;
    for u in [u_start, u_target] {
        if u.len() != family.nparams() {
            return Err(Error::Dimension {
                expected: family.nparams(),
                got: u.len(),
            });
        }
    }
    if let Some(x) = starts.iter().find(|x| x.len() != family.num_vars()) {
        return Err(Error::Dimension {
            expected: family.num_vars(),
            got: x.len(),
        });
    }
    let target_sys = family.specialize(u_target)?;
    let mut set = SolutionSet::new(model, u_target, &target_sys.pattern, config.tracker.seed);
    let structure = family_structure(family);
    let residual = |x: &[C64]| target_sys.residual(x).unwrap_or(f64::INFINITY);
    let source = Source::TrackedFrom {
        u_start: u_start.to_vec(),
    };
    let s = target_sys.pattern.data_zeros.clone();

    let results: Vec<PathResult> = if u_start == u_target {
        let start_sys = structure.with_coefficients(family_coefficients(family, u_start));
        starts
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let h = crate::tracker::Fixed(&start_sys);
                crate::tracker::track_path(&h, &start_sys, x, i, &config.tracker)
            })
            .collect::<Result<_>>()?
    } else {
        let mid = waypoint(u_start, u_target, config.tracker.seed);
        let c0 = family_coefficients(family, u_start);
        let c1 = family_coefficients(family, &mid);
        let c2 = family_coefficients(family, u_target);
        let mid_sys = structure.with_coefficients(c1.clone());
        let end_sys = structure.with_coefficients(c2.clone());
        let first = CoefficientSegment::new(&structure, c0, c1.clone());
        let leg1 = track_robust(&first, &mid_sys, starts.len(), |i| starts[i].clone(), config, &mut set.stats)?;
        let alive: Vec<&PathResult> = leg1.iter().filter(|r| r.status == PathStatus::Converged).collect();
        let second = CoefficientSegment::new(&structure, c1, c2);
        let mut leg2 = track_robust(
            &second,
            &end_sys,
            alive.len(),
            |k| alive[k].endpoint.clone(),
            config,
            &mut set.stats,
        )?;
        for (k, r) in leg2.iter_mut().enumerate() {
            r.path_id = alive[k].path_id;
        }
        let mut lost: Vec<PathResult> = leg1.into_iter().filter(|r| r.status != PathStatus::Converged).collect();
        leg2.append(&mut lost);
        leg2.sort_by_key(|r| r.path_id);
        leg2
    };
    set.stats.record(&results);
    collect_points(
        &results,
        residual,
        |x| family.embed(x),
        model,
        &s,
        &source,
        config,
        &mut set,
    );
    set.finish();
    Ok(set)
}

/// Per-pattern start counts and the tracked result of the ML-table homotopy.
#[derive(Clone, Debug)]
pub struct TableHomotopy {
    pub u_start: Vec<C64>,
    pub start_counts: BTreeMap<BTreeSet<usize>, usize>,
    pub subproblems: Vec<SolutionSet>,
    pub result: SolutionSet,
}

impl TableHomotopy {
    pub fn start_total(&self) -> usize {
        self.start_counts.values().sum()
    }
}

/// Solves `ML_{R,S}` at seeded `u_s ∈ U_S` for every `R ⊆ S`, re-embeds the
/// solutions and tracks them to seeded generic data with all parameters free.
pub fn ml_table_homotopy(
    model: &ModelSpec,
    s: &BTreeSet<usize>,
    start_seed: u64,
    target_seed: u64,
    config: &SolveConfig,
) -> Result<TableHomotopy> {
    let u_start = generic_data(model.ncoords(), s, start_seed);
    let u_target = generic_data(model.ncoords(), &BTreeSet::new(), target_seed);
    ml_table_homotopy_at(model, s, &u_start, &u_target, config)
}

/// [`ml_table_homotopy`] with explicit data; `u_start` must vanish exactly on `s`.
pub fn ml_table_homotopy_at(
    model: &ModelSpec,
    s: &BTreeSet<usize>,
    u_start: &[C64],
    u_target: &[C64],
    config: &SolveConfig,
) -> Result<TableHomotopy> {
    let mut start_counts = BTreeMap::new();
    let mut subproblems = Vec::new();
    let family = parametric_system(model, &ZeroPattern::empty(), true)?;
    let mut starts = Vec::new();
    for r in subsets(s) {
        let pattern = ZeroPattern::new(r.clone(), s.clone())?;
        let sub = solve(model, u_start, &pattern, config).map_err(|e| match e {
            Error::Budget { bound, budget, .. } => Error::Budget {
                bound,
                budget,
                context: Some(format!("R={}", model.format_index_set(&r))),
            },
            other => other,
        })?;
        for pt in sub.regular_points().filter(|pt| pt.zero_pattern == r) {
            starts.push(family.project(&pt.p, &pt.lambda));
        }
        start_counts.insert(r.clone(), sub.count_for(&r));
        subproblems.push(sub);
    }
    let result = parameter_homotopy(&family, model, u_start, &starts, u_target, config)?;
    Ok(TableHomotopy {
        u_start: u_start.to_vec(),
        start_counts,
        subproblems,
        result,
    })
}
