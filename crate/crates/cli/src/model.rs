use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use mlzeros::models::{self, ModelSpec, ZeroPattern};
use mlzeros::poly::{SparsePoly, C64};
use mlzeros::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Hypersurface,
    MatrixRank,
    Grassmannian,
    Tensor2222,
    Raw,
}

#[derive(Args, Clone, Debug)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Matrix rows (matrix-rank).
    #[arg(long)]
    pub rows: Option<usize>,
    /// Matrix columns (matrix-rank).
    #[arg(long)]
    pub cols: Option<usize>,
    /// Rank bound (matrix-rank).
    #[arg(long)]
    pub rank: Option<usize>,
    /// Number of points for Gr(2, n).
    #[arg(long)]
    pub n: Option<usize>,
    /// Use the six quadrics listed for Gr(2,6) instead of all Plücker relations.
    #[arg(long)]
    pub six_quadrics: bool,
    /// Hypersurface degree.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Ambient projective dimension (hypersurface, raw).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Codimension of a raw model.
    #[arg(long)]
    pub codim: Option<usize>,
    /// Comma-separated real coefficients: n+1 (diagonal) or one per monomial.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// Generators file for raw models: a model JSON document, or polynomials in
    /// canonical text separated by blank lines.
    #[arg(long)]
    pub generators: Option<PathBuf>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, model: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| Error::Argument(format!("--{flag} is required for --model {model}")).into())
}

pub fn parse_numbers(text: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Argument(format!("`{t}` is not a number")).into())
        })
        .collect()
}

impl ModelArgs {
    pub fn build(&self, seed: u64) -> anyhow::Result<ModelSpec> {
        let model = match self.model {
            ModelKind::Hypersurface => {
                let d = need(self.degree, "degree", "hypersurface")?;
                let n = need(self.dim, "dim", "hypersurface")?;
                let coeffs: Option<Vec<C64>> = match &self.coeffs {
                    Some(text) => Some(parse_numbers(text)?.into_iter().map(|x| C64::new(x, 0.0)).collect()),
                    None => None,
                };
                models::generic_hypersurface(d, n, coeffs.as_deref(), seed)?
            }
            ModelKind::MatrixRank => {
                let m = need(self.rows, "rows", "matrix-rank")?;
                let n = need(self.cols, "cols", "matrix-rank")?;
                let r = need(self.rank, "rank", "matrix-rank")?;
                if r == 0 || r >= m.min(n) {
                    return Err(Error::Argument(format!(
                        "rank {r} must lie in 1..{} for {m}x{n} matrices",
                        m.min(n)
                    ))
                    .into());
                }
                models::determinantal(m, n, r, seed)?
            }
            ModelKind::Grassmannian => {
                models::grassmannian_2n(need(self.n, "n", "grassmannian")?, seed, self.six_quadrics)?
            }
            ModelKind::Tensor2222 => models::tensor_2222_rank2(seed)?,
            ModelKind::Raw => self.raw(seed)?,
        };
        Ok(model)
    }

    fn raw(&self, seed: u64) -> anyhow::Result<ModelSpec> {
        let path = self
            .generators
            .as_ref()
            .ok_or_else(|| Error::Argument("--generators is required for --model raw".into()))?;
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        if text.trim_start().starts_with('{') {
            return Ok(ModelSpec::from_json(&text)?);
        }
        let n = need(self.dim, "dim", "raw")?;
        let c = need(self.codim, "codim", "raw")?;
        let polys = text
            .split("\n\n")
            .filter(|b| !b.trim().is_empty())
            .map(|b| SparsePoly::from_canonical_text(n + 1, b))
            .collect::<mlzeros::Result<Vec<_>>>()?;
        if polys.is_empty() {
            bail!(Error::Argument(format!("{} holds no generators", path.display())));
        }
        Ok(ModelSpec::from_generators("raw", n, c, polys, None, seed)?)
    }
}

pub fn index_set(model: &ModelSpec, text: Option<&str>) -> anyhow::Result<BTreeSet<usize>> {
    Ok(match text {
        Some(t) => model.parse_index_set(t)?,
        None => BTreeSet::new(),
    })
}

pub fn pattern(model: &ModelSpec, zeros: Option<&str>, model_zeros: Option<&str>) -> anyhow::Result<ZeroPattern> {
    let s = index_set(model, zeros)?;
    let r = index_set(model, model_zeros)?;
    Ok(ZeroPattern::new(r, s)?)
}
