//! Model zoo: projective varieties given by homogeneous generators, with the
//! regular sequence used for the Lagrange likelihood equations.
//!
//! Non-complete-intersection models use `c` seeded random combinations of
//! their generators (coefficients on the unit circle); membership in the
//! variety is then checked against the full generating set.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{arg, Error, Result};
use crate::linalg;
use crate::poly::{Monomial, SparsePoly, VarGroup, VariableSpace, C64, ONE};
use crate::random::{rng, stream_id, unit_circle};

/// Data zeros `S` and the subset `R ⊆ S` treated as model zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZeroPattern {
    pub model_zeros: BTreeSet<usize>,
    pub data_zeros: BTreeSet<usize>,
}

impl ZeroPattern {
    pub fn new(model_zeros: BTreeSet<usize>, data_zeros: BTreeSet<usize>) -> Result<Self> {
        if !model_zeros.is_subset(&data_zeros) {
            return arg(format!(
                "model zeros {model_zeros:?} are not contained in the data zeros {data_zeros:?}"
            ));
        }
        Ok(Self {
            model_zeros,
            data_zeros,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Data zeros `S` with no model zeros.
    pub fn sampling(data_zeros: BTreeSet<usize>) -> Self {
        Self {
            model_zeros: BTreeSet::new(),
            data_zeros,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data_zeros.is_empty()
    }

    pub fn check_within(&self, ncoords: usize) -> Result<()> {
        match self.data_zeros.iter().find(|&&i| i >= ncoords) {
            Some(i) => arg(format!("index {i} outside the {ncoords} coordinates")),
            None => Ok(()),
        }
    }

    /// Sampling zeros `S \ R`.
    pub fn sampling_zeros(&self) -> BTreeSet<usize> {
        self.data_zeros
            .difference(&self.model_zeros)
            .copied()
            .collect()
    }
}

/// All subsets of `set`, ordered by size then lexicographically.
pub fn subsets(set: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let items: Vec<usize> = set.iter().copied().collect();
    (0..=items.len())
        .flat_map(|k| {
            items
                .iter()
                .copied()
                .combinations(k)
                .map(|c| c.into_iter().collect::<BTreeSet<usize>>())
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    /// Ambient projective dimension; coordinates are `p_0..p_n`.
    pub n: usize,
    pub c: usize,
    pub regular_sequence: Vec<SparsePoly>,
    pub full_generators: Vec<SparsePoly>,
    pub index_labels: Vec<String>,
    pub seed: u64,
    /// False when a restriction left fewer than `c` independent generators.
    pub proper: bool,
    /// Partitions of the coordinates in which the generators have low
    /// multidegree; used to build multihomogeneous start systems.
    pub block_hints: Vec<Vec<Vec<usize>>>,
}

impl ModelSpec {
    /// Raw constructor for a list of homogeneous generators. When more than
    /// `c` generators are given the regular sequence is `c` seeded random
    /// combinations of them.
    pub fn from_generators(
        name: impl Into<String>,
        n: usize,
        c: usize,
        generators: Vec<SparsePoly>,
        index_labels: Option<Vec<String>>,
        seed: u64,
    ) -> Result<Self> {
        if c == 0 || c > n {
            return arg(format!("codimension {c} must lie in 1..={n}"));
        }
        if generators.len() < c {
            return arg(format!("{} generators cannot cut codimension {c}", generators.len()));
        }
        let labels = index_labels.unwrap_or_else(|| (0..=n).map(|i| i.to_string()).collect());
        if labels.len() != n + 1 {
            return Err(Error::Dimension {
                expected: n + 1,
                got: labels.len(),
            });
        }
        let space = VariableSpace::coordinates(&labels);
        for g in &generators {
            if g.nvars() != n + 1 {
                return Err(Error::Dimension {
                    expected: n + 1,
                    got: g.nvars(),
                });
            }
            if g.is_zero() || !g.is_homogeneous(&space, VarGroup::P) {
                return arg("generators must be nonzero and homogeneous");
            }
        }
        let name = name.into();
        let regular_sequence = if generators.len() == c {
            generators.clone()
        } else {
            random_combinations(&generators, c, seed, &name)
        };
        let proper = generator_rank(&generators) >= c;
        Ok(Self {
            name,
            n,
            c,
            regular_sequence,
            full_generators: generators,
            index_labels: labels,
            seed,
            proper,
            block_hints: Vec::new(),
        })
    }

    pub fn ncoords(&self) -> usize {
        self.n + 1
    }

    pub fn space(&self) -> VariableSpace {
        VariableSpace::coordinates(&self.index_labels)
    }

    pub fn is_complete_intersection(&self) -> bool {
        self.full_generators.len() == self.c
    }

    /// Resolves an index label (`"12"`, `"1111"`, ...) or a flat integer index.
    pub fn parse_index(&self, token: &str) -> Result<usize> {
        let token = token.trim();
        if let Some(i) = self.index_labels.iter().position(|l| l == token) {
            return Ok(i);
        }
        match token.parse::<usize>() {
            Ok(i) if i <= self.n => Ok(i),
            _ => arg(format!("`{token}` is not a coordinate of {}", self.name)),
        }
    }

    /// Comma-separated index labels; the empty string (or `{}`) is the empty set.
    pub fn parse_index_set(&self, text: &str) -> Result<BTreeSet<usize>> {
        let text = text.trim().trim_start_matches('{').trim_end_matches('}');
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| self.parse_index(t))
            .collect()
    }

    pub fn format_index_set(&self, set: &BTreeSet<usize>) -> String {
        let inner = set.iter().map(|&i| self.index_labels[i].as_str()).join(",");
        format!("{{{inner}}}")
    }

    /// Largest relative generator value `|g(p)| / Σ|c_t m_t(p)|`.
    pub fn membership_residual(&self, p: &[C64]) -> f64 {
        self.full_generators
            .iter()
            .map(|g| relative_value(g, p))
            .fold(0.0, f64::max)
    }

    pub fn is_member(&self, p: &[C64], tol: f64) -> bool {
        self.membership_residual(p) < tol
    }

    /// The model-zero variety `X_R` in `P^{n-|R|}` (indices are this model's
    /// coordinates).
    pub fn restrict(&self, r: &BTreeSet<usize>) -> Result<Self> {
        if let Some(i) = r.iter().find(|&&i| i > self.n) {
            return arg(format!("index {i} outside coordinates 0..={}", self.n));
        }
        if r.is_empty() {
            return Ok(self.clone());
        }
        if r.len() > self.n {
            return arg("cannot restrict every coordinate to zero");
        }
        let kept: Vec<usize> = (0..=self.n).filter(|i| !r.contains(i)).collect();
        let mut map = vec![None; self.n + 1];
        for (new, &old) in kept.iter().enumerate() {
            map[old] = Some(new);
        }
        let zeros: Vec<usize> = r.iter().copied().collect();
        let new_n = kept.len() - 1;
        let mut survivors = Vec::new();
        for g in &self.full_generators {
            let s = g.substitute_zero(&zeros);
            if !s.is_zero() {
                survivors.push(s.remap(kept.len(), &map)?);
            }
        }
        let name = format!("{}|R={}", self.name, self.format_index_set(r));
        let rank = generator_rank(&survivors);
        let proper = self.proper && rank >= self.c && new_n >= self.c;
        let regular_sequence = if survivors.len() == self.c {
            survivors.clone()
        } else if survivors.is_empty() {
            Vec::new()
        } else {
            random_combinations(&survivors, self.c, self.seed, &name)
        };
        let block_hints = self
            .block_hints
            .iter()
            .map(|blocks| {
                blocks
                    .iter()
                    .map(|b| b.iter().filter_map(|&i| map[i]).collect::<Vec<_>>())
                    .filter(|b| !b.is_empty())
                    .collect()
            })
            .collect();
        Ok(Self {
            name,
            n: new_n,
            c: self.c,
            regular_sequence,
            full_generators: survivors,
            index_labels: kept.iter().map(|&i| self.index_labels[i].clone()).collect(),
            seed: self.seed,
            proper,
            block_hints,
        })
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            name: self.name.clone(),
            n: self.n,
            c: self.c,
            seed: self.seed,
            proper: self.proper,
            index_labels: self.index_labels.clone(),
            regular_sequence: self.regular_sequence.iter().map(SparsePoly::to_canonical_text).collect(),
            full_generators: self.full_generators.iter().map(SparsePoly::to_canonical_text).collect(),
            block_hints: self.block_hints.clone(),
        }
    }

    pub fn from_document(doc: &ModelDocument) -> Result<Self> {
        let parse = |texts: &[String]| -> Result<Vec<SparsePoly>> {
            texts
                .iter()
                .map(|t| SparsePoly::from_canonical_text(doc.n + 1, t))
                .collect()
        };
        Ok(Self {
            name: doc.name.clone(),
            n: doc.n,
            c: doc.c,
            regular_sequence: parse(&doc.regular_sequence)?,
            full_generators: parse(&doc.full_generators)?,
            index_labels: doc.index_labels.clone(),
            seed: doc.seed,
            proper: doc.proper,
            block_hints: doc.block_hints.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("model documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }

    /// SHA-256 of the compact JSON document.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(&self.to_document()).expect("model documents serialize");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// JSON form of a [`ModelSpec`]; polynomials in canonical text form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub name: String,
    pub n: usize,
    pub c: usize,
    pub seed: u64,
    pub proper: bool,
    pub index_labels: Vec<String>,
    pub regular_sequence: Vec<String>,
    pub full_generators: Vec<String>,
    #[serde(default)]
    pub block_hints: Vec<Vec<Vec<usize>>>,
}

fn relative_value(g: &SparsePoly, p: &[C64]) -> f64 {
    let mut value = C64::new(0.0, 0.0);
    let mut size = 0.0;
    for (m, c) in g.terms() {
        let t = c * m.evaluate(p);
        value += t;
        size += t.norm();
    }
    if size == 0.0 {
        0.0
    } else {
        value.norm() / size
    }
}

fn random_combinations(gens: &[SparsePoly], c: usize, seed: u64, label: &str) -> Vec<SparsePoly> {
    let mut r = rng(seed, stream_id(label));
    (0..c)
        .map(|_| {
            gens.iter().fold(SparsePoly::zero(gens[0].nvars()), |acc, g| {
                &acc + &g.scale(unit_circle(&mut r))
            })
        })
        .collect()
}

/// Numerical rank of the coefficient matrix of a list of polynomials.
pub fn generator_rank(polys: &[SparsePoly]) -> usize {
    let monomials: BTreeMap<&Monomial, usize> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let rows: Vec<Vec<C64>> = polys
        .iter()
        .map(|p| {
            let mut row = vec![C64::new(0.0, 0.0); monomials.len()];
            for (m, c) in p.terms() {
                row[monomials[m]] = *c;
            }
            row
        })
        .collect();
    linalg::rank(&rows, 1e-10)
}

/// `Σ a_i p_i^d` (diagonal, `n+1` coefficients) or a dense form with one
/// coefficient per degree-`d` monomial in descending graded-lex order.
/// Without coefficients, the diagonal form with seeded unit-circle coefficients.
pub fn generic_hypersurface(d: u32, n: usize, coeffs: Option<&[C64]>, seed: u64) -> Result<ModelSpec> {
    if d < 1 || n < 1 {
        return arg(format!("hypersurface needs d >= 1 and n >= 1 (got d={d}, n={n})"));
    }
    let nv = n + 1;
    let f = match coeffs {
        None => {
            let mut r = rng(seed, stream_id("hypersurface"));
            let mut f = SparsePoly::zero(nv);
            for i in 0..nv {
                f.add_term(Monomial::var(nv, i, d), unit_circle(&mut r));
            }
            f
        }
        Some(cs) if cs.iter().all(|c| c.norm() == 0.0) => {
            return arg("hypersurface coefficient vector is identically zero");
        }
        Some(cs) if cs.len() == nv => {
            let mut f = SparsePoly::zero(nv);
            for (i, &a) in cs.iter().enumerate() {
                f.add_term(Monomial::var(nv, i, d), a);
            }
            f
        }
        Some(cs) => {
            let monomials = degree_monomials(nv, d);
            if cs.len() != monomials.len() {
                return arg(format!(
                    "expected {nv} diagonal or {} dense coefficients, got {}",
                    monomials.len(),
                    cs.len()
                ));
            }
            let mut f = SparsePoly::zero(nv);
            for (m, &a) in monomials.into_iter().zip(cs) {
                f.add_term(m, a);
            }
            f
        }
    };
    let mut model = ModelSpec::from_generators(format!("hypersurface(d={d},n={n})"), n, 1, vec![f], None, seed)?;
    model.proper = true;
    Ok(model)
}

/// All degree-`d` monomials in `nv` variables, descending graded-lex.
fn degree_monomials(nv: usize, d: u32) -> Vec<Monomial> {
    fn rec(nv: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == nv - 1 {
            cur[i] = left;
            out.push(Monomial::new(cur.clone()));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(nv, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(nv, 0, d, &mut vec![0; nv], &mut out);
    out
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Determinant of the submatrix of a variable matrix; `var(i, j)` gives the
/// coordinate index of entry `(i, j)`.
fn minor(nv: usize, rows: &[usize], cols: &[usize], var: impl Fn(usize, usize) -> usize) -> SparsePoly {
    let k = rows.len();
    let mut det = SparsePoly::zero(nv);
    for perm in (0..k).permutations(k) {
        let mut e = vec![0u32; nv];
        for (a, &b) in perm.iter().enumerate() {
            e[var(rows[a], cols[b])] += 1;
        }
        det.add_term(Monomial::new(e), C64::new(permutation_sign(&perm), 0.0));
    }
    det
}

/// Projectivized `m × n_cols` matrices of rank at most `r`, cut out by the
/// `(r+1)`-minors. Coordinates are row-major `p_ij`, labelled `"ij"` (1-based).
pub fn determinantal(m: usize, n_cols: usize, r: usize, seed: u64) -> Result<ModelSpec> {
    if r < 1 || r >= m.min(n_cols) {
        return arg(format!("rank {r} must satisfy 1 <= r < min({m}, {n_cols})"));
    }
    let nv = m * n_cols;
    let var = |i: usize, j: usize| i * n_cols + j;
    let mut minors = Vec::new();
    for rows in (0..m).combinations(r + 1) {
        for cols in (0..n_cols).combinations(r + 1) {
            minors.push(minor(nv, &rows, &cols, var));
        }
    }
    let labels: Vec<String> = (0..m)
        .flat_map(|i| (0..n_cols).map(move |j| format!("{}{}", i + 1, j + 1)))
        .collect();
    let c = (m - r) * (n_cols - r);
    let mut model = ModelSpec::from_generators(
        format!("determinantal(m={m},n={n_cols},r={r})"),
        nv - 1,
        c,
        minors,
        Some(labels),
        seed,
    )?;
    model.proper = true;
    let row_blocks: Vec<Vec<usize>> = (0..m).map(|i| (0..n_cols).map(|j| var(i, j)).collect()).collect();
    let col_blocks: Vec<Vec<usize>> = (0..n_cols).map(|j| (0..m).map(|i| var(i, j)).collect()).collect();
    model.block_hints = vec![row_blocks, col_blocks];
    Ok(model)
}

/// Plücker quadric `p_ij p_kl - p_ik p_jl + p_il p_jk` for `i<j<k<l` (0-based points).
fn plucker_quadric(nv: usize, pair: &impl Fn(usize, usize) -> usize, q: [usize; 4]) -> SparsePoly {
    let [i, j, k, l] = q;
    let term = |a: usize, b: usize, c: usize, d: usize| {
        let mut e = vec![0u32; nv];
        e[pair(a, b)] += 1;
        e[pair(c, d)] += 1;
        Monomial::new(e)
    };
    let mut f = SparsePoly::zero(nv);
    f.add_term(term(i, j, k, l), ONE);
    f.add_term(term(i, k, j, l), -ONE);
    f.add_term(term(i, l, j, k), ONE);
    f
}

/// The 4-subsets (1-based) whose Plücker relations form the six-quadric
/// regular sequence for Gr(2,6).
pub const GR26_QUADRICS: [[usize; 4]; 6] = [
    [3, 4, 5, 6],
    [2, 3, 4, 5],
    [1, 3, 4, 5],
    [2, 4, 5, 6],
    [1, 4, 5, 6],
    [1, 2, 3, 4],
];

/// The Grassmannian Gr(2, n_pts) in Plücker coordinates `p_ij`, `i<j`,
/// ordered lexicographically and labelled `"ij"` (1-based).
pub fn grassmannian_2n(n_pts: usize, seed: u64, six_quadrics: bool) -> Result<ModelSpec> {
    if n_pts < 4 {
        return arg(format!("Gr(2,n) needs n >= 4, got {n_pts}"));
    }
    let pairs: Vec<(usize, usize)> = (0..n_pts).tuple_combinations().collect();
    let nv = pairs.len();
    let pair = |a: usize, b: usize| {
        pairs
            .iter()
            .position(|&p| p == (a.min(b), a.max(b)))
            .expect("pair in range")
    };
    let quadrics: Vec<SparsePoly> = (0..n_pts)
        .combinations(4)
        .map(|q| plucker_quadric(nv, &pair, [q[0], q[1], q[2], q[3]]))
        .collect();
    let labels: Vec<String> = pairs.iter().map(|(a, b)| format!("{}{}", a + 1, b + 1)).collect();
    let c = nv - 1 - 2 * (n_pts - 2);
    let name = format!("grassmannian(2,{n_pts})");
    let mut model = ModelSpec::from_generators(name, nv - 1, c, quadrics, Some(labels), seed)?;
    if six_quadrics && n_pts == 6 {
        model.regular_sequence = GR26_QUADRICS
            .iter()
            .map(|q| plucker_quadric(nv, &pair, [q[0] - 1, q[1] - 1, q[2] - 1, q[3] - 1]))
            .collect();
        model.name = "grassmannian(2,6)[listed quadrics]".into();
    }
    model.proper = true;
    let first: Vec<usize> = (1..n_pts).map(|j| pair(0, j)).collect();
    let rest: Vec<usize> = (0..nv).filter(|i| !first.contains(i)).collect();
    model.block_hints = vec![vec![first, rest]];
    Ok(model)
}

/// 2×2×2×2 tensors of border rank at most 2: the 3×3 minors of the three
/// 4×4 flattenings (the 2×8 flattenings have no 3×3 minors). Coordinates
/// `p_ijkl` with index `8i+4j+2k+l`, labelled `"ijkl"` (1-based).
pub fn tensor_2222_rank2(seed: u64) -> Result<ModelSpec> {
    let nv = 16;
    let idx = |a: [usize; 4]| 8 * a[0] + 4 * a[1] + 2 * a[2] + a[3];
    let splits: [([usize; 2], [usize; 2]); 3] = [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];
    let mut gens: Vec<SparsePoly> = Vec::new();
    for (row_axes, col_axes) in splits {
        let var = |row: usize, col: usize| {
            let mut a = [0usize; 4];
            a[row_axes[0]] = row / 2;
            a[row_axes[1]] = row % 2;
            a[col_axes[0]] = col / 2;
            a[col_axes[1]] = col % 2;
            idx(a)
        };
        for rows in (0..4).combinations(3) {
            for cols in (0..4).combinations(3) {
                let g = minor(nv, &rows, &cols, var);
                if !gens.iter().any(|h| *h == g || (&g + h).is_zero()) {
                    gens.push(g);
                }
            }
        }
    }
    let labels: Vec<String> = (0..nv)
        .map(|v| format!("{}{}{}{}", v / 8 + 1, (v / 4) % 2 + 1, (v / 2) % 2 + 1, v % 2 + 1))
        .collect();
    let mut model = ModelSpec::from_generators("tensor2222(rank<=2)", nv - 1, 6, gens, Some(labels), seed)?;
    model.proper = true;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::generic_data;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn hypersurface_examples() {
        let m = generic_hypersurface(3, 3, Some(&[c(2.0), c(-3.0), c(5.0), c(-7.0)]), 0).unwrap();
        let f = &m.regular_sequence[0];
        assert_eq!(f.coefficient(&[3, 0, 0, 0]), c(2.0));
        assert_eq!(f.coefficient(&[0, 0, 0, 3]), c(-7.0));
        assert_eq!(f.num_terms(), 4);
        assert_eq!(m.c, 1);

        let coeffs: Vec<C64> = [1.0, 2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0].map(c).to_vec();
        let oct = generic_hypersurface(3, 7, Some(&coeffs), 0).unwrap();
        assert_eq!(oct.regular_sequence[0].coefficient(&[0, 0, 0, 0, 0, 0, 0, 3]), c(17.0));

        let q = generic_hypersurface(2, 2, None, 5).unwrap();
        assert!(q.regular_sequence[0].is_homogeneous(&q.space(), VarGroup::P));
        assert_eq!(q.c, 1);
        assert_eq!(q.full_generators, q.regular_sequence);
    }

    #[test]
    fn hypersurface_errors() {
        assert!(generic_hypersurface(0, 3, None, 0).is_err());
        assert!(generic_hypersurface(3, 0, None, 0).is_err());
        assert!(generic_hypersurface(2, 2, Some(&[c(0.0); 3]), 0).is_err());
        assert!(generic_hypersurface(2, 2, Some(&[c(1.0); 4]), 0).is_err());
        // dense quadric in 3 variables has 6 coefficients
        let dense = generic_hypersurface(2, 2, Some(&[c(1.0); 6]), 0).unwrap();
        assert_eq!(dense.regular_sequence[0].num_terms(), 6);
    }

    #[test]
    fn determinantal_examples() {
        let m33 = determinantal(3, 3, 2, 1).unwrap();
        assert_eq!((m33.full_generators.len(), m33.c, m33.n), (1, 1, 8));
        assert_eq!(m33.full_generators[0].num_terms(), 6);

        let m34 = determinantal(3, 4, 2, 1).unwrap();
        assert_eq!((m34.full_generators.len(), m34.c), (4, 2));
        assert_eq!(m34.regular_sequence.len(), 2);
        assert_ne!(m34.regular_sequence[0], m34.full_generators[0]);

        let m44 = determinantal(4, 4, 2, 1).unwrap();
        assert_eq!((m44.full_generators.len(), m44.c), (16, 4));
        assert_eq!(m44.index_labels[5], "22");

        assert!(determinantal(3, 3, 3, 0).is_err());
        assert!(determinantal(3, 3, 0, 0).is_err());
    }

    #[test]
    fn grassmannian_examples() {
        let g4 = grassmannian_2n(4, 0, false).unwrap();
        assert_eq!((g4.c, g4.n), (1, 5));
        assert_eq!(g4.index_labels, ["12", "13", "14", "23", "24", "34"]);
        let expected = SparsePoly::from_terms(
            6,
            [
                (vec![1, 0, 0, 0, 0, 1], c(1.0)),
                (vec![0, 1, 0, 0, 1, 0], c(-1.0)),
                (vec![0, 0, 1, 1, 0, 0], c(1.0)),
            ],
        )
        .unwrap();
        assert_eq!(g4.regular_sequence, vec![expected]);

        let g5 = grassmannian_2n(5, 0, false).unwrap();
        assert_eq!((g5.c, g5.n, g5.full_generators.len()), (3, 9, 5));

        let g6 = grassmannian_2n(6, 0, true).unwrap();
        assert_eq!(g6.regular_sequence.len(), 6);
        // p36 p45 - p35 p46 + p34 p56
        let h1 = &g6.regular_sequence[0];
        let idx = |l: &str| g6.parse_index(l).unwrap();
        let mut e = vec![0u32; 15];
        e[idx("36")] = 1;
        e[idx("45")] = 1;
        assert_eq!(h1.coefficient(&e), c(1.0));
        let mut e = vec![0u32; 15];
        e[idx("35")] = 1;
        e[idx("46")] = 1;
        assert_eq!(h1.coefficient(&e), c(-1.0));
        assert!(grassmannian_2n(3, 0, false).is_err());
    }

    #[test]
    fn tensor_examples() {
        let t = tensor_2222_rank2(3).unwrap();
        assert_eq!((t.c, t.n), (6, 15));
        assert_eq!(t.regular_sequence.len(), 6);
        let space = t.space();
        for g in t.full_generators.iter().chain(&t.regular_sequence) {
            assert!(g.is_homogeneous(&space, VarGroup::P));
            assert_eq!(g.total_degree(), 3);
        }
        assert_eq!(t.index_labels[0], "1111");
        assert_eq!(t.index_labels[15], "2222");
    }

    #[test]
    fn restriction_examples() {
        let m34 = determinantal(3, 4, 2, 1).unwrap();
        let r = m34.restrict(&set(&[0])).unwrap();
        assert_eq!(r.n, 10);
        assert_eq!(r.full_generators.len(), 4);
        let term_counts: Vec<usize> = r.full_generators.iter().map(SparsePoly::num_terms).sorted().collect();
        assert_eq!(term_counts, vec![4, 4, 4, 6]);

        let m33 = determinantal(3, 3, 2, 1).unwrap();
        let r33 = m33.restrict(&set(&[0])).unwrap();
        assert_eq!(r33.full_generators[0].num_terms(), 4);
        assert!(r33.proper);

        assert_eq!(m33.restrict(&BTreeSet::new()).unwrap(), m33);
        assert!(m33.restrict(&set(&[9])).is_err());
    }

    #[test]
    fn restriction_example_3_3_generators() {
        // first cubic of I(X_R) has support p12p21p33, p12p23p31, p13p21p32, p13p22p31;
        // the cofactor expansion fixes the signs as (-, +, +, -)
        let m34 = determinantal(3, 4, 2, 1).unwrap();
        let r = m34.restrict(&set(&[0])).unwrap();
        let idx = |l: &str| r.parse_index(l).unwrap();
        let mono = |ls: [&str; 3]| {
            let mut e = vec![0u32; 11];
            for l in ls {
                e[idx(l)] += 1;
            }
            e
        };
        let target = [
            (mono(["12", "21", "33"]), -1.0),
            (mono(["12", "23", "31"]), 1.0),
            (mono(["13", "21", "32"]), 1.0),
            (mono(["13", "22", "31"]), -1.0),
        ];
        let found = r.full_generators.iter().any(|g| {
            g.num_terms() == 4
                && [1.0, -1.0]
                    .iter()
                    .any(|s| target.iter().all(|(e, v)| g.coefficient(e) == c(s * v)))
        });
        assert!(found);
    }

    #[test]
    fn restriction_flags_non_proper() {
        // 3x3 rank 2 with the whole first row zero: the determinant vanishes
        let m33 = determinantal(3, 3, 2, 1).unwrap();
        let r = m33.restrict(&set(&[0, 1, 2])).unwrap();
        assert!(!r.proper);
        assert!(r.full_generators.is_empty());
    }

    #[test]
    fn json_round_trip_and_hash() {
        let m = determinantal(3, 4, 2, 9).unwrap();
        let back = ModelSpec::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.hash(), m.hash());
        let other = determinantal(3, 4, 2, 10).unwrap();
        assert_ne!(other.hash(), m.hash());
    }

    #[test]
    fn index_parsing() {
        let m = determinantal(3, 3, 2, 0).unwrap();
        assert_eq!(m.parse_index_set("11,12").unwrap(), set(&[0, 1]));
        assert_eq!(m.parse_index_set("").unwrap(), BTreeSet::new());
        assert_eq!(m.parse_index_set("{33}").unwrap(), set(&[8]));
        assert!(m.parse_index_set("44").is_err());
        assert_eq!(m.format_index_set(&set(&[0, 4])), "{11,22}");
    }

    #[test]
    fn zero_pattern_requires_subset() {
        assert!(ZeroPattern::new(set(&[1]), set(&[0])).is_err());
        let z = ZeroPattern::new(set(&[0]), set(&[0, 1])).unwrap();
        assert_eq!(z.sampling_zeros(), set(&[1]));
        assert_eq!(subsets(&set(&[3, 5])), vec![set(&[]), set(&[3]), set(&[5]), set(&[3, 5])]);
    }

    #[test]
    fn membership_detects_off_model_points() {
        let m = determinantal(3, 3, 2, 0).unwrap();
        let p = generic_data(9, &BTreeSet::new(), 1);
        assert!(!m.is_member(&p, 1e-6));
    }
}
