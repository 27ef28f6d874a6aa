use std::collections::BTreeSet;

use mlzeros::likelihood::parametric_system;
use mlzeros::mltable::hypersurface_table_entry;
use mlzeros::models::{determinantal, generic_hypersurface, grassmannian_2n, tensor_2222_rank2, ZeroPattern};
use mlzeros::poly::{SparsePoly, VariableSpace, C64};
use mlzeros::solver::{deduplicate, CriticalPoint, Source};
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn poly(nvars: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0u32..4, nvars), c64()), 1..8)
        .prop_map(move |terms| SparsePoly::from_terms(nvars, terms).unwrap())
}

fn homogeneous(nvars: usize, d: u32) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0u32..=d, nvars), c64()), 1..8).prop_map(move |terms| {
        let terms = terms.into_iter().filter_map(|(mut e, c)| {
            let total: u32 = e.iter().sum();
            if total > d {
                return None;
            }
            e[0] += d - total;
            Some((e, c))
        });
        SparsePoly::from_terms(nvars, terms).unwrap()
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(c64(), n)
}

fn matmul(a: &[C64], b: &[C64], m: usize, k: usize, n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); m * n];
    for i in 0..m {
        for j in 0..n {
            for l in 0..k {
                out[i * n + j] += a[i * k + l] * b[l * n + j];
            }
        }
    }
    out
}

fn critical(p: Vec<C64>, residual: f64) -> CriticalPoint {
    CriticalPoint {
        p,
        lambda: vec![],
        residual,
        zero_pattern: BTreeSet::new(),
        ambiguous: false,
        regular: true,
        on_model: true,
        source: Source::Direct,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivatives_match_finite_differences(f in poly(3), x in point(3), var in 0usize..3) {
        let h = 1e-6;
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[var] += h;
        xm[var] -= h;
        let fd = (f.evaluate(&xp).unwrap() - f.evaluate(&xm).unwrap()) / (2.0 * h);
        let exact = f.partial_derivative(var).unwrap().evaluate(&x).unwrap();
        prop_assert!((fd - exact).norm() <= 1e-5 * (1.0 + exact.norm()), "{fd} vs {exact}");
    }

    #[test]
    fn euler_relation_holds(f in homogeneous(4, 4), x in point(4)) {
        let deg = f.total_degree();
        let space = VariableSpace::coordinates(&(0..4).map(|i| i.to_string()).collect::<Vec<_>>());
        let mut lhs = C64::new(0.0, 0.0);
        for i in 0..4 {
            lhs += x[i] * f.partial_derivative(i).unwrap().evaluate(&x).unwrap();
        }
        let rhs = f.evaluate(&x).unwrap() * f64::from(deg);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()));
        prop_assert!(f.euler_check(&space, &x, 1e-8).unwrap());
    }

    #[test]
    fn parametric_system_is_affine_in_data(
        u in point(4), v in point(4), x in point(6), t in -2.0..2.0f64, seed in 0u64..100,
    ) {
        let model = generic_hypersurface(3, 3, None, seed).unwrap();
        let family = parametric_system(&model, &ZeroPattern::empty(), true).unwrap();
        let w: Vec<C64> = u.iter().zip(&v).map(|(a, b)| *a * t + *b * (1.0 - t)).collect();
        let x = &x[..family.num_vars()];
        for eq in &family.equations {
            let mixed = eq.evaluate(x, &u).unwrap() * t + eq.evaluate(x, &v).unwrap() * (1.0 - t);
            let direct = eq.evaluate(x, &w).unwrap();
            prop_assert!((mixed - direct).norm() <= 1e-9 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn restriction_composes(a in prop::collection::btree_set(0usize..9, 0..3), b in prop::collection::btree_set(0usize..9, 0..3)) {
        let model = determinantal(3, 3, 2, 1).unwrap();
        let first = model.restrict(&a).unwrap();
        let kept: Vec<usize> = (0..9).filter(|i| !a.contains(i)).collect();
        let b_local: BTreeSet<usize> = b.iter().filter_map(|i| kept.iter().position(|k| k == i)).collect();
        let twice = first.restrict(&b_local).unwrap();
        let union: BTreeSet<usize> = a.union(&b).copied().collect();
        let once = model.restrict(&union).unwrap();
        prop_assert_eq!(twice.n, once.n);
        prop_assert_eq!(&twice.index_labels, &once.index_labels);
        prop_assert_eq!(&twice.full_generators, &once.full_generators);
    }

    #[test]
    fn low_rank_matrices_lie_on_the_determinantal_model(a in point(6), b in point(6)) {
        let model = determinantal(3, 3, 2, 1).unwrap();
        let p = matmul(&a, &b, 3, 2, 3);
        prop_assert!(model.is_member(&p, 1e-9));
    }

    #[test]
    fn plucker_coordinates_lie_on_the_grassmannian(rows in point(10)) {
        let model = grassmannian_2n(5, 1, false).unwrap();
        let mut p = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                p.push(rows[i] * rows[5 + j] - rows[j] * rows[5 + i]);
            }
        }
        prop_assert!(model.is_member(&p, 1e-9));
    }

    #[test]
    fn rank_two_tensors_lie_on_the_tensor_model(v in point(16)) {
        let model = tensor_2222_rank2(1).unwrap();
        let mut p = vec![C64::new(0.0, 0.0); 16];
        for term in 0..2 {
            let f = &v[8 * term..8 * term + 8];
            for (idx, entry) in p.iter_mut().enumerate() {
                let bits = [(idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
                *entry += f[bits[0]] * f[2 + bits[1]] * f[4 + bits[2]] * f[6 + bits[3]];
            }
        }
        prop_assert!(model.is_member(&p, 1e-9));
    }

    #[test]
    fn deduplication_is_idempotent(pts in prop::collection::vec((point(3), 0.0..1.0f64), 1..12), dup in prop::collection::vec(0usize..12, 0..6)) {
        let mut points: Vec<CriticalPoint> = pts.iter().map(|(p, r)| critical(p.clone(), *r)).collect();
        for &d in &dup {
            let mut copy = points[d % pts.len()].clone();
            copy.p[0] += C64::new(1e-9, 0.0);
            points.push(copy);
        }
        let once = deduplicate(points, 1e-6);
        let twice = deduplicate(once.clone(), 1e-6);
        prop_assert_eq!(once.len(), twice.len());
        prop_assert!(once.len() <= pts.len());
        for (a, b) in once.iter().zip(&twice) {
            prop_assert_eq!(&a.p, &b.p);
        }
    }
}

#[test]
fn hypersurface_recursion_on_grid() {
    for d in 2..=5u32 {
        for n in 2..=8usize {
            for s in 1..=n {
                for r in 1..=s {
                    assert_eq!(
                        hypersurface_table_entry(d, n + 1, r, s).unwrap(),
                        hypersurface_table_entry(d, n, r - 1, s - 1).unwrap(),
                        "d={d} n={n} r={r} s={s}"
                    );
                }
            }
        }
    }
}
