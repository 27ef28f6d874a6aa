//! Small dense complex linear algebra: partial-pivot LU, condition
//! estimates and numerical rank. Matrices are row-major slices.

use crate::poly::{C64, ZERO};

/// In-place LU with partial pivoting. Returns `false` when a pivot is exactly
/// zero or non-finite.
pub fn lu_factor(a: &mut [C64], n: usize, piv: &mut [usize]) -> bool {
    debug_assert_eq!(a.len(), n * n);
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm_sqr();
        for i in k + 1..n {
            let v = a[i * n + k].norm_sqr();
            if v > best {
                best = v;
                p = i;
            }
        }
        piv[k] = p;
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
        }
        let inv = a[k * n + k].inv();
        for i in k + 1..n {
            let f = a[i * n + k] * inv;
            a[i * n + k] = f;
            if f != ZERO {
                for j in k + 1..n {
                    let akj = a[k * n + j];
                    a[i * n + j] -= f * akj;
                }
            }
        }
    }
    true
}

/// Solves `A x = b` in place given the output of [`lu_factor`].
pub fn lu_solve(lu: &[C64], n: usize, piv: &[usize], b: &mut [C64]) {
    for (k, &pk) in piv[..n].iter().enumerate() {
        b.swap(k, pk);
    }
    for i in 0..n {
        let mut s = b[i];
        for j in 0..i {
            s -= lu[i * n + j] * b[j];
        }
        b[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= lu[i * n + j] * b[j];
        }
        b[i] = s / lu[i * n + i];
    }
}

/// Solves `A x = b`, returning `None` for a singular matrix.
pub fn solve(a: &[C64], n: usize, b: &[C64]) -> Option<Vec<C64>> {
    let mut lu = a.to_vec();
    let mut piv = vec![0; n];
    if !lu_factor(&mut lu, n, &mut piv) {
        return None;
    }
    let mut x = b.to_vec();
    lu_solve(&lu, n, &piv, &mut x);
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

fn norm_1(a: &[C64], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition number, computed from an explicit inverse after
/// equilibrating rows to unit max-entry. Infinite for singular matrices.
pub fn condition_number(a: &[C64], n: usize) -> f64 {
    let mut m = a.to_vec();
    for i in 0..n {
        let s = (0..n).map(|j| m[i * n + j].norm()).fold(0.0, f64::max);
        if s == 0.0 {
            return f64::INFINITY;
        }
        for j in 0..n {
            m[i * n + j] /= s;
        }
    }
    let anorm = norm_1(&m, n);
    let mut lu = m;
    let mut piv = vec![0; n];
    if !lu_factor(&mut lu, n, &mut piv) {
        return f64::INFINITY;
    }
    let mut inv = vec![ZERO; n * n];
    let mut col = vec![ZERO; n];
    for j in 0..n {
        col.iter_mut().for_each(|v| *v = ZERO);
        col[j] = C64::new(1.0, 0.0);
        lu_solve(&lu, n, &piv, &mut col);
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    let c = anorm * norm_1(&inv, n);
    if c.is_finite() {
        c
    } else {
        f64::INFINITY
    }
}

/// Numerical rank of a rectangular matrix given as rows, by Gaussian
/// elimination with full pivoting. Entries below `tol·max|a|` count as zero.
pub fn rank(rows: &[Vec<C64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<C64>> = rows.to_vec();
    let ncols = m[0].len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter().map(|v| v.norm()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let thresh = tol * scale;
    let mut r = 0;
    let mut used_cols = vec![false; ncols];
    while r < m.len() {
        let mut best = (0.0, 0, 0);
        for (i, row) in m.iter().enumerate().skip(r) {
            for (j, v) in row.iter().enumerate() {
                if !used_cols[j] && v.norm() > best.0 {
                    best = (v.norm(), i, j);
                }
            }
        }
        if best.0 <= thresh {
            break;
        }
        let (_, pi, pj) = best;
        m.swap(r, pi);
        used_cols[pj] = true;
        let pivot = m[r][pj];
        let prow = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            let f = row[pj] / pivot;
            if f != ZERO {
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn solves_small_system() {
        let a = [c(0.0, 0.0), c(2.0, 0.0), c(1.0, 1.0), c(1.0, 0.0)];
        let b = [c(4.0, 0.0), c(3.0, 1.0)];
        let x = solve(&a, 2, &b).unwrap();
        // 2 x1 = 4, (1+i) x0 + x1 = 3+i
        assert!((x[1] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_is_detected() {
        let a = [c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        assert!(condition_number(&a, 2) > 1e15);
        let id = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!((condition_number(&id, 2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)],
        ];
        assert_eq!(rank(&rows, 1e-12), 2);
    }
}
