use std::collections::BTreeSet;

use anyhow::Context;
use mlzeros::likelihood::{lagrange_system, parametric_system, restricted_system, Normalization};
use mlzeros::mltable::{self, dual_pairing, hypersurface_table_entry, ml_table};
use mlzeros::models::{self, ModelSpec, ZeroPattern};
use mlzeros::poly::C64;
use mlzeros::random::generic_data;
use mlzeros::solver::{self, ml_table_homotopy_at, parameter_homotopy, SolutionSet, SolveConfig};
use mlzeros::tracker::{bezout_multihomog, bezout_total, VariableGroups};
use mlzeros::Error;
use serde_json::json;

use crate::manifest::Recorder;
use crate::model::{index_set, parse_numbers, pattern};
use crate::{DualityArgs, Formula, FormulasArgs, HomotopyArgs, RunArgs, SolveArgs, TableArgs};

fn data_vector(model: &ModelSpec, text: &str) -> anyhow::Result<Vec<C64>> {
    let u: Vec<C64> = parse_numbers(text)?.into_iter().map(|x| C64::new(x, 0.0)).collect();
    if u.len() != model.ncoords() {
        return Err(Error::Dimension {
            expected: model.ncoords(),
            got: u.len(),
        }
        .into());
    }
    Ok(u)
}

fn describe_counts(model: &ModelSpec, set: &SolutionSet) -> String {
    set.counts
        .iter()
        .map(|(r, c)| format!("R={}: {c}", model.format_index_set(r)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn start(run: &RunArgs) -> anyhow::Result<(SolveConfig, Recorder)> {
    run.init_threads();
    let config = run.config()?;
    let mut rec = Recorder::new(&run.out, &config)?;
    rec.seed("seed", run.seed);
    Ok((config, rec))
}

pub fn solve(a: &SolveArgs) -> anyhow::Result<()> {
    let (config, mut rec) = start(&a.run)?;
    let model = a.model.build(a.run.seed)?;
    rec.model_hash(model.hash());
    let mut pat = pattern(&model, a.zeros.as_deref(), a.model_zeros.as_deref())?;
    let u = match &a.real_data {
        Some(text) => {
            let u = data_vector(&model, text)?;
            if a.zeros.is_none() {
                let zeros: BTreeSet<usize> = (0..u.len()).filter(|&i| u[i] == C64::new(0.0, 0.0)).collect();
                pat = ZeroPattern::new(pat.model_zeros.clone(), zeros)?;
            }
            u
        }
        None => generic_data(model.ncoords(), &pat.data_zeros, a.run.seed),
    };
    let set = if a.fiber {
        if !pat.model_zeros.is_empty() {
            return Err(Error::Argument("--fiber solves the unrestricted system; drop --model-zeros".into()).into());
        }
        rec.stage("solve", || solver::solve_fiber(&model, &u, &config))?
    } else {
        rec.stage("solve", || solver::solve(&model, &u, &pat, &config))?
    };
    rec.stats("solve", &set.stats);
    rec.write("solutions.jsonl", &set.to_jsonl(Some(&config)))?;
    rec.write("model.json", &model.to_json())?;
    let count = if a.fiber {
        set.regular_count()
    } else {
        set.count_for(&pat.model_zeros)
    };
    println!("{count}");
    eprintln!(
        "{}: {} paths, {} converged; regular on-model by pattern: {}",
        model.name,
        set.stats.paths,
        set.stats.converged,
        describe_counts(&model, &set)
    );
    if !set.proper {
        eprintln!("note: the restricted system is not proper; its count is 0 by definition");
    }
    rec.finish()
}

fn parse_columns(model: &ModelSpec, text: &str) -> anyhow::Result<Vec<BTreeSet<usize>>> {
    text.split(';').map(|c| index_set(model, Some(c))).collect()
}

pub fn table(a: &TableArgs) -> anyhow::Result<()> {
    let (config, mut rec) = start(&a.run)?;
    let model = a.model.build(a.run.seed)?;
    rec.model_hash(model.hash());
    let columns = parse_columns(&model, &a.columns)?;
    let table = rec.stage("table", || ml_table(&model, &columns, a.run.seed, &config))?;
    rec.write("table.md", &table.to_markdown())?;
    rec.write("table.csv", &table.to_csv())?;
    rec.write("table.json", &serde_json::to_string_pretty(&table.to_json())?)?;
    print!("{}", table.to_markdown());
    for b in table.column_bounds() {
        let column: BTreeSet<usize> = b.column.iter().copied().collect();
        let verdict = match (b.ml_degree, b.holds) {
            (Some(d), Some(true)) if b.sum == d => format!("= ML degree {d}"),
            (Some(d), Some(true)) => format!("< ML degree {d}"),
            (Some(d), _) => format!("> ML degree {d} (bound violated)"),
            _ => "ML degree not computed".into(),
        };
        println!("column {}: sum {} {verdict}", model.format_index_set(&column), b.sum);
    }
    rec.finish()
}

pub fn homotopy(a: &HomotopyArgs) -> anyhow::Result<()> {
    let (config, mut rec) = start(&a.run)?;
    let model = a.model.build(a.run.seed)?;
    rec.model_hash(model.hash());
    let target_seed = a.run.seed.wrapping_add(1);
    rec.seed("target", target_seed);
    let target = |n: usize| -> anyhow::Result<Vec<C64>> {
        match &a.target_u {
            Some(t) => data_vector(&model, t),
            None => Ok(generic_data(n, &BTreeSet::new(), target_seed)),
        }
    };
    let (start_counts, result) = if a.auto_subproblems {
        if !a.start_archive.is_empty() {
            return Err(Error::Argument("use either --start-archive or --auto-subproblems".into()).into());
        }
        let s = index_set(&model, a.zeros.as_deref())?;
        let u_start = generic_data(model.ncoords(), &s, a.run.seed);
        let u_target = target(model.ncoords())?;
        let run = rec.stage("homotopy", || ml_table_homotopy_at(&model, &s, &u_start, &u_target, &config))?;
        for (sub, r) in run.subproblems.iter().zip(models::subsets(&s)) {
            rec.stats(&format!("subproblem R={}", model.format_index_set(&r)), &sub.stats);
            rec.write(
                &format!("start-R{}.jsonl", r.iter().map(|i| format!("_{}", model.index_labels[*i])).collect::<String>()),
                &sub.to_jsonl(Some(&config)),
            )?;
        }
        let counts: Vec<(String, usize)> = run
            .start_counts
            .iter()
            .map(|(r, c)| (model.format_index_set(r), *c))
            .collect();
        (counts, run.result)
    } else {
        if a.start_archive.is_empty() {
            return Err(Error::Argument("give --start-archive files or --auto-subproblems".into()).into());
        }
        let hash = model.hash();
        let family = parametric_system(&model, &ZeroPattern::empty(), true)?;
        let mut u_start: Option<Vec<C64>> = None;
        let mut starts = Vec::new();
        let mut counts = Vec::new();
        for path in &a.start_archive {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let (header, points) = SolutionSet::from_jsonl(&text)?;
            if header.model_hash != hash {
                return Err(Error::Integrity(format!(
                    "{} was computed for model {} ({}), not {}",
                    path.display(),
                    header.model,
                    header.model_hash,
                    model.name
                ))
                .into());
            }
            match &u_start {
                Some(u) if *u != header.u => {
                    return Err(Error::Integrity(format!("{} uses different start data", path.display())).into())
                }
                None => u_start = Some(header.u.clone()),
                _ => {}
            }
            let mut n = 0;
            for p in points.iter().filter(|p| p.counts()) {
                starts.push(family.project(&p.p, &p.lambda));
                n += 1;
            }
            counts.push((path.display().to_string(), n));
        }
        let u_start = u_start.expect("at least one archive");
        let u_target = target(model.ncoords())?;
        let result = rec.stage("homotopy", || {
            parameter_homotopy(&family, &model, &u_start, &starts, &u_target, &config)
        })?;
        (counts, result)
    };
    rec.stats("homotopy", &result.stats);
    let starts: usize = start_counts.iter().map(|(_, c)| c).sum();
    let endpoints = result.regular_count();
    let mut report = json!({
        "model": model.name,
        "start_counts": start_counts,
        "starts": starts,
        "endpoints": endpoints,
        "lost_paths": starts.saturating_sub(endpoints),
    });
    println!("starts {starts}");
    for (label, c) in &start_counts {
        println!("  {label}: {c}");
    }
    println!("endpoints {endpoints}");
    if a.check {
        let degree = rec.stage("ml_degree", || mltable::ml_degree(&model, a.run.seed, &config))?;
        report["ml_degree"] = json!(degree.degree);
        report["deficit"] = json!(degree.degree.saturating_sub(endpoints));
        if endpoints < degree.degree {
            println!(
                "deficit: {} of {} critical points are not reached from these starts",
                degree.degree - endpoints,
                degree.degree
            );
        } else {
            println!("all {} critical points reached", degree.degree);
        }
    }
    rec.write("homotopy.jsonl", &result.to_jsonl(Some(&config)))?;
    rec.write("homotopy-report.json", &serde_json::to_string_pretty(&report)?)?;
    rec.finish()
}

pub fn formulas(a: &FormulasArgs) -> anyhow::Result<()> {
    match &a.which {
        Formula::Hypersurface { d, n, r, s } => {
            let (d, n) = (*d, *n);
            match (r, s) {
                (Some(r), Some(s)) => println!("{}", hypersurface_table_entry(d, n, *r, *s)?),
                (None, None) => {
                    println!("ML degree {}", mltable::hks_mldegree(d, n)?);
                    print!("| r \\ s |");
                    for s in 0..=n {
                        print!(" {s} |");
                    }
                    println!();
                    println!("|---|{}", "---|".repeat(n + 1));
                    for r in 0..=n {
                        print!("| {r} |");
                        for s in 0..=n {
                            if r <= s {
                                print!(" {} |", hypersurface_table_entry(d, n, r, s)?);
                            } else {
                                print!("  |");
                            }
                        }
                        println!();
                    }
                }
                _ => return Err(Error::Argument("give both r and s, or neither".into()).into()),
            }
            if a.check {
                check_hypersurface(d, n)?;
            }
        }
        Formula::Rank2 { n } => {
            println!("{}", mltable::rank2_3xn_series(*n)?);
            if a.check {
                let config = SolveConfig::default();
                let model = models::determinantal(3, *n, 2, 7)?;
                let got = mltable::ml_degree(&model, 7, &config)?;
                let want = mltable::rank2_3xn_series(*n)?;
                println!("solver {} (conjectured {want})", got.degree);
                if got.degree as u128 != want {
                    return Err(anyhow::anyhow!("solver count differs from the conjectured value"));
                }
            }
        }
        Formula::Bezout {
            model,
            run,
            zeros,
            model_zeros,
        } => {
            let model = model.build(run.seed)?;
            let pat = pattern(&model, zeros.as_deref(), model_zeros.as_deref())?;
            let u = generic_data(model.ncoords(), &pat.data_zeros, run.seed);
            let sys = if pat.is_empty() {
                lagrange_system(&model, &u)?
            } else {
                restricted_system(&model, &pat, &u, Normalization::AffineChart)?
            };
            println!("total degree {}", bezout_total(&sys.equations));
            println!(
                "multihomogeneous {{P, LAMBDA}} {}",
                bezout_multihomog(&sys.equations, &VariableGroups::by_tag(&sys.space))?
            );
        }
    }
    Ok(())
}

/// Solver counts on a seeded generic hypersurface against the formula, for
/// columns `S = {0..s-1}` with `s ≤ min(n, 2)`.
fn check_hypersurface(d: u32, n: usize) -> anyhow::Result<()> {
    let model = models::generic_hypersurface(d, n, None, 7)?;
    let columns: Vec<BTreeSet<usize>> = (0..=n.min(2)).map(|s| (0..s).collect()).collect();
    let table = ml_table(&model, &columns, 7, &SolveConfig::default())?;
    let mut mismatches = 0;
    for ((r, s), got) in &table.entries {
        let want = hypersurface_table_entry(d, n, r.len(), s.len())?;
        let ok = *got as u128 == want;
        if !ok {
            mismatches += 1;
        }
        println!(
            "check R={} S={}: solver {got}, formula {want}{}",
            model.format_index_set(r),
            model.format_index_set(s),
            if ok { "" } else { "  MISMATCH" }
        );
    }
    if mismatches > 0 {
        return Err(anyhow::anyhow!("{mismatches} entries differ from the formula"));
    }
    Ok(())
}

pub fn duality(a: &DualityArgs) -> anyhow::Result<()> {
    let (m, n, r) = (a.rows, a.cols, a.rank);
    if m > n || r == 0 || r >= m {
        return Err(Error::Argument(format!(
            "need rows <= cols and 1 <= rank < rows (got {m}x{n}, rank {r})"
        ))
        .into());
    }
    let (config, mut rec) = start(&a.run)?;
    let x_model = models::determinantal(m, n, r, a.run.seed)?;
    let dual_rank = m - r + 1;
    let y_model = if dual_rank == r {
        x_model.clone()
    } else {
        models::determinantal(m, n, dual_rank, a.run.seed)?
    };
    rec.model_hash(x_model.hash());
    let s = index_set(&x_model, a.zeros.as_deref())?;
    let u = generic_data(m * n, &s, a.run.seed);
    let xs = rec.stage("solve X", || solver::solve_fiber(&x_model, &u, &config))?;
    let ys = rec.stage("solve Y", || solver::solve_fiber(&y_model, &u, &config))?;
    rec.stats("X", &xs.stats);
    rec.stats("Y", &ys.stats);
    let report = dual_pairing(&xs, &ys, m, n, 1e-6)?;
    rec.write("x.jsonl", &xs.to_jsonl(Some(&config)))?;
    rec.write("y.jsonl", &ys.to_jsonl(Some(&config)))?;
    rec.write("duality.json", &serde_json::to_string_pretty(&report)?)?;
    println!(
        "pairs {} (X {}, Y {}), bijective {}, max Hadamard residual {:.2e}",
        report.pairs.iter().filter(|p| p.y_index.is_some()).count(),
        report.x_count,
        report.y_count,
        report.bijective,
        report.max_residual
    );
    if !s.is_empty() {
        println!(
            "(S \\ R) ⊆ R' for every pair: {}; equality for every pair: {}",
            report.containment_holds, report.equality_holds
        );
        for p in &report.pairs {
            let r: BTreeSet<usize> = p.r.iter().copied().collect();
            let rd: BTreeSet<usize> = p.r_dual.iter().copied().collect();
            println!(
                "  R={} -> R'={}",
                x_model.format_index_set(&r),
                x_model.format_index_set(&rd)
            );
        }
    }
    rec.finish()
}
