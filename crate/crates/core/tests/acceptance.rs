//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 9 (hours of tracking) runs only with `MLZEROS_EXTENDED=1`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use mlzeros::mltable::{
    dual_pairing, hks_mldegree, hypersurface_table_entry, ml_degree, ml_table_with_sets, rank2_3xn_series, MLTable,
};
use mlzeros::models::{
    determinantal, generic_hypersurface, grassmannian_2n, tensor_2222_rank2, ModelSpec, ZeroPattern,
};
use mlzeros::poly::C64;
use mlzeros::random::generic_data;
use mlzeros::solver::{ml_table_homotopy, solve, solve_fiber, SolutionSet, SolveConfig};

type Set = BTreeSet<usize>;

fn set(items: &[usize]) -> Set {
    items.iter().copied().collect()
}

fn real(xs: &[f64]) -> Vec<C64> {
    xs.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// Collects check outcomes for one criterion.
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        let ok = got == want;
        self.check(ok, format!("{what}: got {got:?}, want {want:?}"));
    }
}

struct Run {
    config: SolveConfig,
    /// Every solution set produced so far, with its data-zero set.
    archive: Vec<(String, Set, SolutionSet)>,
}

impl Run {
    fn keep(&mut self, label: &str, s: &Set, set: &SolutionSet) {
        self.archive.push((label.to_string(), s.clone(), set.clone()));
    }

    fn table(&mut self, label: &str, model: &ModelSpec, columns: &[Set], seed: u64) -> MLTable {
        let (table, sets) = ml_table_with_sets(model, columns, seed, &self.config).expect("ml_table");
        for set in &sets {
            let s: Set = set.pattern.data_zeros.clone();
            self.keep(label, &s, set);
        }
        table
    }
}

/// Entries of column `s` with rows `R ⊆ S` ordered by size, then lexicographically.
fn column(table: &MLTable, s: &[usize]) -> Vec<usize> {
    let s = set(s);
    mlzeros::models::subsets(&s)
        .iter()
        .map(|r| table.entry(r, &s).unwrap_or(usize::MAX))
        .collect()
}

fn criterion1(c: &mut Checks, _: &mut Run) {
    let grid: Vec<(usize, usize, u128)> = vec![
        (0, 0, 39),
        (0, 1, 27),
        (1, 1, 12),
        (0, 2, 18),
        (1, 2, 9),
        (2, 2, 3),
    ];
    for (r, s, want) in grid {
        c.eq(&format!("M(3,3,{r},{s})"), hypersurface_table_entry(3, 3, r, s).unwrap(), want);
    }
    c.eq("hks(3,3)", hks_mldegree(3, 3).unwrap(), 39);
    c.eq("hks(2,2)", hks_mldegree(2, 2).unwrap(), 6);
    let bound: u128 = (0..=6)
        .map(|r| binomial(6, r) * hypersurface_table_entry(3, 7, r, 6).unwrap())
        .sum();
    c.eq("Σ C(6,r) M(3,7,r,6)", bound, 3279);
    c.eq("hks(3,7)", hks_mldegree(3, 7).unwrap(), 3279);
    for (n, want) in [(9, 1018), (10, 2042), (11, 4090), (12, 8186), (13, 16378), (14, 32762), (3, 10), (4, 26)] {
        c.eq(&format!("rank2_3xn({n})"), rank2_3xn_series(n).unwrap(), want);
    }
    let mut grid_ok = true;
    for d in 2..=5u32 {
        for n in 2..=8usize {
            for s in 1..=n {
                for r in 1..=s {
                    grid_ok &= hypersurface_table_entry(d, n + 1, r, s).unwrap()
                        == hypersurface_table_entry(d, n, r - 1, s - 1).unwrap();
                }
            }
        }
    }
    c.check(grid_ok, "M(r,s,n+1) = M(r-1,s-1,n) on d 2..5, n 2..8");
}

fn binomial(n: u128, k: usize) -> u128 {
    (0..k as u128).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion2(c: &mut Checks, run: &mut Run) {
    let cubic = real(&[2.0, -3.0, 5.0, -7.0]);
    let cases: Vec<(u32, usize, Option<&[C64]>, usize)> = vec![
        (2, 2, None, 6),
        (2, 3, None, 14),
        (3, 2, None, 12),
        (3, 3, Some(&cubic), 39),
    ];
    for (d, n, coeffs, want) in cases {
        let model = generic_hypersurface(d, n, coeffs, 11).unwrap();
        for seed in [3u64, 1234] {
            let u = generic_data(n + 1, &Set::new(), seed);
            let set = solve(&model, &u, &ZeroPattern::empty(), &run.config.clone().with_seed(seed)).unwrap();
            c.eq(&format!("d={d} n={n} u-seed {seed}"), set.count_for(&Set::new()), want);
            run.keep(&format!("hypersurface d={d} n={n}"), &Set::new(), &set);
        }
    }
}

fn criterion3(c: &mut Checks, run: &mut Run) {
    let model = generic_hypersurface(3, 3, Some(&real(&[2.0, -3.0, 5.0, -7.0])), 11).unwrap();
    let table = run.table("cubic table", &model, &[set(&[]), set(&[0]), set(&[1]), set(&[0, 1])], 5);
    c.eq("column {}", column(&table, &[]), vec![39]);
    c.eq("column {0}", column(&table, &[0]), vec![27, 12]);
    c.eq("column {1}", column(&table, &[1]), vec![27, 12]);
    c.eq("column {0,1}", column(&table, &[0, 1]), vec![18, 9, 9, 3]);
    let h = ml_table_homotopy(&model, &set(&[0, 1]), 5, 6, &run.config).unwrap();
    let starts: BTreeMap<Set, usize> = h.start_counts.clone();
    let want: BTreeMap<Set, usize> = [(set(&[]), 18), (set(&[0]), 9), (set(&[1]), 9), (set(&[0, 1]), 3)]
        .into_iter()
        .collect();
    c.eq("homotopy start counts", starts, want);
    c.eq("homotopy endpoints", h.result.regular_count(), 39);
    for sub in &h.subproblems {
        run.keep("cubic homotopy start", &set(&[0, 1]), sub);
    }
    run.keep("cubic homotopy target", &Set::new(), &h.result);
}

fn criterion4(c: &mut Checks, run: &mut Run) {
    let model = generic_hypersurface(3, 3, Some(&real(&[1.0, 1.0, 1.0, 1.0])), 11).unwrap();
    let deg = ml_degree(&model, 21, &run.config).unwrap();
    c.eq("mldeg (two seeds)", (deg.degree, deg.check), (30, 30));
    let table = run.table("fermat table", &model, &[set(&[0]), set(&[0, 1])], 21);
    c.eq("column {0}", column(&table, &[0]), vec![21, 9]);
    c.eq("column {0,1}", column(&table, &[0, 1]), vec![12, 7, 7, 2]);
    let sum: usize = column(&table, &[0, 1]).iter().sum();
    c.check(sum == 28 && sum < deg.degree, format!("column {{0,1}} sum {sum} = 28 < {}", deg.degree));
}

fn criterion5(c: &mut Checks, run: &mut Run) {
    let model = determinantal(3, 3, 2, 1).unwrap();
    let (a, b) = (0, 1);
    let deg = ml_degree(&model, 31, &run.config).unwrap();
    c.eq("mldeg (two seeds)", (deg.degree, deg.check), (10, 10));
    let seed = 37;
    let table = run.table("3x3 table", &model, &[set(&[]), set(&[a]), set(&[b]), set(&[a, b])], seed);
    c.eq("column {}", column(&table, &[]), vec![10]);
    c.eq("column {11}", column(&table, &[a]), vec![5, 5]);
    c.eq("column {12}", column(&table, &[b]), vec![5, 5]);
    c.eq("column {11,12}", column(&table, &[a, b]), vec![1, 4, 4, 1]);
    for s in [set(&[a]), set(&[a, b])] {
        let u = generic_data(9, &s, seed);
        let fiber = solve_fiber(&model, &u, &run.config).unwrap();
        let label = model.format_index_set(&s);
        let mut parts_ok = true;
        for r in mlzeros::models::subsets(&s) {
            parts_ok &= fiber.count_for(&r) == table.entry(&r, &s).unwrap_or(usize::MAX);
        }
        let stray = fiber.counts.keys().any(|r| !r.is_subset(&s));
        c.check(
            parts_ok && !stray && fiber.regular_count() == deg.degree,
            format!(
                "S={label}: fiber splits as {:?}, total {} = mldeg",
                fiber.counts,
                fiber.regular_count()
            ),
        );
        run.keep("3x3 fiber", &s, &fiber);
    }
}

fn criterion6(c: &mut Checks, run: &mut Run) {
    let model = grassmannian_2n(4, 1, false).unwrap();
    let deg = ml_degree(&model, 41, &run.config).unwrap();
    c.eq("mldeg (two seeds)", (deg.degree, deg.check), (4, 4));
    let s = set(&[0]);
    let u = generic_data(6, &s, 43);
    for (r, want) in [(set(&[]), 3), (s.clone(), 1)] {
        let pattern = ZeroPattern::new(r.clone(), s.clone()).unwrap();
        let sol = solve(&model, &u, &pattern, &run.config).unwrap();
        c.eq(&format!("R={} S={{12}}", model.format_index_set(&r)), sol.count_for(&r), want);
        run.keep("Gr(2,4)", &s, &sol);
    }
}

fn criterion7(c: &mut Checks, run: &mut Run) {
    let model = determinantal(3, 3, 2, 1).unwrap();
    let u = generic_data(9, &Set::new(), 51);
    let x = solve_fiber(&model, &u, &run.config.clone().with_seed(51)).unwrap();
    let y = solve_fiber(&model, &u, &run.config.clone().with_seed(52)).unwrap();
    run.keep("duality X", &Set::new(), &x);
    run.keep("duality Y", &Set::new(), &y);
    let rep = dual_pairing(&x, &y, 3, 3, 1e-6).unwrap();
    c.check(
        rep.bijective && rep.pairs.len() == 10 && rep.max_residual < 1e-6,
        format!(
            "generic u: {} pairs, bijective {}, max |P*Q - Ω| = {:.1e}",
            rep.pairs.len(),
            rep.bijective,
            rep.max_residual
        ),
    );
    let s = set(&[0]);
    let u = generic_data(9, &s, 53);
    let x = solve_fiber(&model, &u, &run.config).unwrap();
    run.keep("duality S={11}", &s, &x);
    let rep = dual_pairing(&x, &x, 3, 3, 1e-6).unwrap();
    c.check(
        rep.bijective && rep.pairs.len() == 10 && rep.containment_holds && rep.max_residual < 1e-6,
        format!(
            "S={{11}}: {} pairs, bijective {}, (S\\R) ⊆ R' for all {}",
            rep.pairs.len(),
            rep.bijective,
            rep.containment_holds
        ),
    );
}

fn criterion8(c: &mut Checks, run: &mut Run) {
    let mut worst_sum = 0.0f64;
    let mut zero_violations = Vec::new();
    let mut points = 0;
    for (label, s, set) in &run.archive {
        for pt in &set.points {
            points += 1;
            let total: C64 = pt.p.iter().sum();
            worst_sum = worst_sum.max((total - 1.0).norm());
            // coordinates are in the order of the unrestricted model
            for (i, z) in pt.p.iter().enumerate() {
                if !s.contains(&i) && z.norm() < 1e-8 {
                    zero_violations.push(format!("{label}: p_{i} = 0 with u_{i} != 0"));
                }
            }
        }
    }
    c.check(points > 0 && worst_sum < 1e-8, format!("Σp = 1 on {points} solutions (worst {worst_sum:.1e})"));
    c.check(
        zero_violations.is_empty(),
        format!("u_i != 0 implies p_i != 0 ({} violations)", zero_violations.len()),
    );

    let cases: Vec<(&str, ModelSpec, ZeroPattern)> = vec![
        ("conic", generic_hypersurface(2, 2, None, 11).unwrap(), ZeroPattern::empty()),
        (
            "cubic",
            generic_hypersurface(3, 3, Some(&real(&[2.0, -3.0, 5.0, -7.0])), 11).unwrap(),
            ZeroPattern::empty(),
        ),
        (
            "cubic R={0} S={0,1}",
            generic_hypersurface(3, 3, Some(&real(&[2.0, -3.0, 5.0, -7.0])), 11).unwrap(),
            ZeroPattern::new(set(&[0]), set(&[0, 1])).unwrap(),
        ),
        (
            "Fermat",
            generic_hypersurface(3, 3, Some(&real(&[1.0; 4])), 11).unwrap(),
            ZeroPattern::empty(),
        ),
        ("Gr(2,4)", grassmannian_2n(4, 1, false).unwrap(), ZeroPattern::empty()),
        (
            "Gr(2,4) R={12}",
            grassmannian_2n(4, 1, false).unwrap(),
            ZeroPattern::new(set(&[0]), set(&[0])).unwrap(),
        ),
    ];
    for (label, model, pattern) in &cases {
        let u = generic_data(model.ncoords(), &pattern.data_zeros, 61);
        let mut counts = Vec::new();
        for gamma_seed in [100u64, 200] {
            let set = solve(model, &u, pattern, &run.config.clone().with_seed(gamma_seed)).unwrap();
            counts.push(set.count_for(&pattern.model_zeros));
        }
        c.check(counts[0] == counts[1], format!("gamma robustness {label}: {counts:?}"));
    }

    let model = generic_hypersurface(3, 3, Some(&real(&[2.0, -3.0, 5.0, -7.0])), 11).unwrap();
    let u = generic_data(4, &Set::new(), 71);
    let archive = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| solve(&model, &u, &ZeroPattern::empty(), &run.config).unwrap().to_jsonl(None))
    };
    let one = archive(1);
    let three = archive(3);
    c.check(one == three, "archives identical with 1 and 3 threads");

    let fermat = generic_hypersurface(3, 3, Some(&real(&[1.0; 4])), 11).unwrap();
    let u = generic_data(4, &Set::new(), 72);
    let set = solve(&fermat, &u, &ZeroPattern::empty(), &run.config).unwrap();
    let once = mlzeros::solver::deduplicate(set.points.clone(), 1e-6);
    let twice = mlzeros::solver::deduplicate(once.clone(), 1e-6);
    c.check(
        once.len() == set.points.len() && twice.len() == once.len(),
        format!("dedup idempotent on a solved set ({} points)", once.len()),
    );

    let f = &fermat.regular_sequence[0];
    let x = real(&[0.3, -1.1, 0.7, 2.0]);
    let mut fd_ok = true;
    for i in 0..4 {
        let h = 1e-6;
        let (mut xp, mut xm) = (x.clone(), x.clone());
        xp[i] += h;
        xm[i] -= h;
        let fd = (f.evaluate(&xp).unwrap() - f.evaluate(&xm).unwrap()) / (2.0 * h);
        let exact = f.partial_derivative(i).unwrap().evaluate(&x).unwrap();
        fd_ok &= (fd - exact).norm() < 1e-6 * (1.0 + exact.norm());
    }
    c.check(fd_ok, "finite-difference derivatives of the Fermat cubic");
}

fn criterion9(c: &mut Checks, run: &mut Run) {
    let mut config = run.config.clone();
    config.path_budget = 1_000_000_000_000;
    let gr5 = grassmannian_2n(5, 1, false).unwrap();
    c.eq("Gr(2,5)", ml_degree(&gr5, 81, &config).unwrap().degree, 22);
    let gr6 = grassmannian_2n(6, 1, true).unwrap();
    c.eq("Gr(2,6)", ml_degree(&gr6, 82, &config).unwrap().degree, 156);
    let m34 = determinantal(3, 4, 2, 1).unwrap();
    c.eq("3x4 rank 2", ml_degree(&m34, 83, &config).unwrap().degree, 26);
    let r = set(&[0]);
    let u = generic_data(12, &r, 84);
    let sub = solve(&m34, &u, &ZeroPattern::new(r.clone(), r.clone()).unwrap(), &config).unwrap();
    c.eq("3x4 rank 2, R={11}", sub.count_for(&r), 13);
    let t = tensor_2222_rank2(1).unwrap();
    let s = set(&[0, 15]);
    let u = generic_data(16, &s, 85);
    let one = solve(&t, &u, &ZeroPattern::new(set(&[0]), s.clone()).unwrap(), &config).unwrap();
    c.check(one.count_for(&set(&[0])) >= 52, format!("tensor R={{1111}}: {} >= 52", one.count_for(&set(&[0]))));
    let two = solve(&t, &u, &ZeroPattern::new(s.clone(), s.clone()).unwrap(), &config).unwrap();
    c.eq("tensor R={1111,2222}", two.count_for(&s), 3);
}

fn main() {
    let extended = std::env::var("MLZEROS_EXTENDED").is_ok_and(|v| v == "1");
    let mut run = Run {
        config: SolveConfig::default(),
        archive: Vec::new(),
    };
    type Criterion = fn(&mut Checks, &mut Run);
    let criteria: [(&str, Criterion); 9] = [
        ("1 hypersurface formulas", criterion1),
        ("2 solver vs formula, desk scale", criterion2),
        ("3 cubic ML table and table homotopy", criterion3),
        ("4 strict inequality (Fermat cubic)", criterion4),
        ("5 3x3 rank 2 suite", criterion5),
        ("6 Gr(2,4)", criterion6),
        ("7 duality", criterion7),
        ("8 property suites", criterion8),
        ("9 extended golden values", criterion9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        if name.starts_with('9') && !extended {
            println!("SKIP criterion {name} (set MLZEROS_EXTENDED=1)");
            continue;
        }
        let start = Instant::now();
        let mut checks = Checks::new();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(&mut checks, &mut run)));
        if outcome.is_err() {
            checks.failures.push("panicked".into());
        }
        let secs = start.elapsed().as_secs_f64();
        if checks.failures.is_empty() {
            println!("PASS criterion {name} ({secs:.1}s)");
        } else {
            failed += 1;
            println!("FAIL criterion {name} ({secs:.1}s)");
        }
        for note in &checks.notes {
            println!("    ok   {note}");
        }
        for failure in &checks.failures {
            println!("    FAIL {failure}");
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
