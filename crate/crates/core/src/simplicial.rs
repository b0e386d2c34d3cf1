//! Nerves of finite posets and their simplicial cohomology, and the
//! correspondence between relative Hochschild cochains of a poset algebra and
//! simplicial cochains of its nerve.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bimodule::{Bimodule, ModuleKind};
use crate::error::{Error, Result};
use crate::exact::{to_sparse, Echelon, Field, Matrix, Scalar};
use crate::hochschild::{Cochain, CochainModel, ModelKind};
use crate::poset::Poset;

/// Strictly increasing chains `i₀ ≺ … ≺ iₙ` of a poset, per degree.
#[derive(Clone, Debug)]
pub struct NerveComplex {
    poset: Poset,
    max_dim: usize,
    chains: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl NerveComplex {
    /// Chains up to dimension `max_dim + 1` (one more than requested, so that
    /// cohomology in degree `max_dim` is available).
    pub fn new(poset: &Poset, max_dim: usize) -> NerveComplex {
        let n = poset.len();
        let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|i| vec![i]).collect()];
        for _ in 0..=max_dim {
            let prev = chains.last().expect("degree 0");
            let mut next = Vec::new();
            for c in prev {
                let last = *c.last().expect("nonempty");
                for j in last + 1..n {
                    if poset.lt(last, j) {
                        let mut d = c.clone();
                        d.push(j);
                        next.push(d);
                    }
                }
            }
            chains.push(next);
        }
        let index = chains
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        NerveComplex {
            poset: poset.clone(),
            max_dim,
            chains,
            index,
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// The `n`-simplices in lexicographic order (empty beyond the built range).
    pub fn chains(&self, n: usize) -> &[Vec<usize>] {
        self.chains.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, n: usize) -> usize {
        self.chains(n).len()
    }

    pub fn position(&self, chain: &[usize]) -> Option<usize> {
        self.index.get(chain.len().checked_sub(1)?)?.get(chain).copied()
    }

    fn check_built(&self, n: usize) -> Result<()> {
        if n > self.max_dim + 1 {
            return Err(Error::Dimension(format!(
                "nerve built up to dimension {}, asked for {n}",
                self.max_dim + 1
            )));
        }
        Ok(())
    }

    /// `∂ₙ: Cₙ → Cₙ₋₁`, `∂σ = Σ (−1)^r ∂_r σ` with `∂_r` omitting vertex `r`.
    pub fn boundary(&self, n: usize, field: Field) -> Result<Matrix> {
        self.check_built(n)?;
        if n == 0 {
            return Ok(Matrix::zeros(field, 0, self.count(0)));
        }
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.count(n - 1)];
        for (j, s) in self.chains(n).iter().enumerate() {
            for r in 0..=n {
                let mut face = s.clone();
                face.remove(r);
                let i = self.position(&face).expect("faces of chains are chains");
                let v = if r % 2 == 0 { field.one() } else { -field.one() };
                rows[i].push((j, v));
            }
        }
        Ok(Matrix::from_sparse_rows(field, self.count(n), rows))
    }

    /// `δⁿ = ∂ₙ₊₁ᵀ: Cⁿ → Cⁿ⁺¹`.
    pub fn coboundary(&self, n: usize, field: Field) -> Result<Matrix> {
        Ok(self.boundary(n + 1, field)?.transpose())
    }
}

pub fn nerve(poset: &Poset, max_dim: usize) -> NerveComplex {
    NerveComplex::new(poset, max_dim)
}

/// `dim Hⁿ(Σ, k)` for `n ≤ max_degree`.
pub fn simplicial_cohomology(nerve: &NerveComplex, max_degree: usize, field: Field) -> Result<Vec<usize>> {
    if max_degree > nerve.max_dim() {
        return Err(Error::Dimension(format!(
            "nerve built up to dimension {}, asked for degree {max_degree}",
            nerve.max_dim()
        )));
    }
    let ranks: Vec<usize> = (0..=max_degree)
        .map(|n| nerve.coboundary(n, field).map(|m| m.rank()))
        .collect::<Result<_>>()?;
    Ok((0..=max_degree)
        .map(|n| nerve.count(n) - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] })
        .collect())
}

/// The relative model of a poset algebra over its diagonal idempotents.
pub fn relative_model(algebra: Arc<Algebra>, module: Arc<Bimodule>) -> Result<CochainModel> {
    let kind = ModelKind::poset_relative(&algebra)?;
    CochainModel::new(algebra, module, kind)
}

/// Basis index of each argument of a relative poset model.
fn arg_basis_indices(model: &CochainModel) -> Result<Vec<usize>> {
    model
        .args()
        .iter()
        .map(|a| match to_sparse(&a.vector).as_slice() {
            [(k, c)] if c.is_one() => Ok(*k),
            _ => Err(Error::Unsupported("model basis is not the matrix-unit basis".into())),
        })
        .collect()
}

struct PosetView {
    pairs: Vec<(usize, usize)>,
    arg_of_pair: HashMap<(usize, usize), usize>,
}

fn poset_view(model: &CochainModel) -> Result<PosetView> {
    let algebra = model.algebra();
    let layout = algebra.poset_layout().ok_or(Error::NotPosetAlgebra)?;
    if *model.kind() != ModelKind::poset_relative(algebra)? {
        return Err(Error::Unsupported(
            "expected the relative model over the diagonal idempotents".into(),
        ));
    }
    match model.module().kind() {
        ModuleKind::Regular | ModuleKind::DualOp => {}
        ModuleKind::Custom => {
            return Err(Error::Unsupported(
                "coefficients must be the regular or the dual-op bimodule".into(),
            ))
        }
    }
    let idx = arg_basis_indices(model)?;
    let arg_of_pair = idx
        .iter()
        .enumerate()
        .map(|(a, &k)| (layout.pairs[k], a))
        .collect();
    Ok(PosetView {
        pairs: layout.pairs.clone(),
        arg_of_pair,
    })
}

/// Reads off the coefficient `λ_σ` of `e_{i₀iₙ}` (of `e*_{i₀iₙ}` for dual-op
/// coefficients) on every chain `σ`.
pub fn to_simplicial(f: &Cochain, nerve: &NerveComplex) -> Result<Vec<Scalar>> {
    let model = f.model();
    let view = poset_view(model)?;
    let n = f.degree();
    let layout = model.algebra().poset_layout().expect("checked");
    if nerve.poset() != &layout.poset {
        return Err(Error::Unsupported("nerve of a different poset".into()));
    }
    nerve.check_built(n)?;
    let mut out = Vec::with_capacity(nerve.count(n));
    for chain in nerve.chains(n) {
        let args: Vec<usize> = chain
            .windows(2)
            .map(|w| view.arg_of_pair[&(w[0], w[1])])
            .collect();
        let value = f.value_on_args(&args)?;
        let k = layout
            .basis_index(chain[0], *chain.last().expect("nonempty"))
            .expect("chain endpoints are comparable");
        out.push(value[k].clone());
    }
    Ok(out)
}

/// Inverse of [`to_simplicial`]: the relative cochain with value
/// `λ_σ e_{i₀iₙ}` (or `λ_σ e*_{i₀iₙ}`) on the chain `σ`.
pub fn from_simplicial(
    model: &Arc<CochainModel>,
    nerve: &NerveComplex,
    degree: usize,
    values: &[Scalar],
) -> Result<Cochain> {
    let view = poset_view(model)?;
    let layout = model.algebra().poset_layout().expect("checked");
    if nerve.poset() != &layout.poset {
        return Err(Error::Unsupported("nerve of a different poset".into()));
    }
    nerve.check_built(degree)?;
    if values.len() != nerve.count(degree) {
        return Err(Error::Dimension(format!(
            "expected {} values, got {}",
            nerve.count(degree),
            values.len()
        )));
    }
    let d = model.algebra().dim();
    let field = model.algebra().field();
    let diag = layout.diagonal_indices();
    if degree == 0 {
        let mut v = vec![field.zero(); d];
        for (i, lam) in values.iter().enumerate() {
            v[diag[i]] = lam.clone();
        }
        return Cochain::from_fn(model.clone(), 0, |_| v.clone());
    }
    Cochain::from_fn(model.clone(), degree, |args| {
        let mut chain = vec![view.pairs[arg_pair_index(model, args[0])].0];
        for &a in args {
            chain.push(view.pairs[arg_pair_index(model, a)].1);
        }
        let mut v = vec![field.zero(); d];
        if let Some(s) = nerve.position(&chain) {
            let k = layout
                .basis_index(chain[0], *chain.last().expect("nonempty"))
                .expect("comparable");
            v[k] = values[s].clone();
        }
        v
    })
}

fn arg_pair_index(model: &CochainModel, a: usize) -> usize {
    to_sparse(&model.args()[a].vector)[0].0
}

/// Matrix of [`to_simplicial`] in degree `n`, relative coordinates to
/// simplicial coordinates.
pub fn correspondence_matrix(model: &Arc<CochainModel>, nerve: &NerveComplex, n: usize) -> Result<Matrix> {
    let field = model.algebra().field();
    let dim = model.dim(n)?;
    let mut cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut e = vec![field.zero(); dim];
        e[j] = field.one();
        cols.push(to_simplicial(&Cochain::new(model.clone(), n, e)?, nerve)?);
    }
    Ok(Matrix::from_columns(field, nerve.count(n), &cols))
}

/// Pullback `φ*: Cⁿ(Σ target) → Cⁿ(Σ source)` along an order-preserving map
/// (`map[i]` is the image of source element `i`); degenerate images give 0.
pub fn induced_cochain_map(
    source: &NerveComplex,
    target: &NerveComplex,
    map: &[usize],
    n: usize,
    field: Field,
) -> Result<Matrix> {
    if !source.poset().is_monotone(target.poset(), map) {
        return Err(Error::Unsupported("map is not order preserving".into()));
    }
    source.check_built(n)?;
    target.check_built(n)?;
    let rows = source
        .chains(n)
        .iter()
        .map(|s| {
            let image: Vec<usize> = s.iter().map(|&i| map[i]).collect();
            match target.position(&image) {
                Some(j) => vec![(j, field.one())],
                None => Vec::new(),
            }
        })
        .collect();
    Ok(Matrix::from_sparse_rows(field, target.count(n), rows))
}

/// Rank of the map `Hⁿ(Σ target) → Hⁿ(Σ source)` induced by `map`.
pub fn induced_cohomology_rank(
    source: &NerveComplex,
    target: &NerveComplex,
    map: &[usize],
    n: usize,
    field: Field,
) -> Result<usize> {
    let pull = induced_cochain_map(source, target, map, n, field)?;
    let cocycles = target.coboundary(n, field)?.kernel_basis();
    let mut ech = Echelon::new(field);
    if n > 0 {
        let b = source.coboundary(n - 1, field)?.transpose();
        for i in 0..b.nrows() {
            ech.insert(b.row(i).to_vec());
        }
    }
    let base = ech.rank();
    for z in cocycles {
        ech.insert(to_sparse(&pull.mul_vec(&z)));
    }
    Ok(ech.rank() - base)
}

/// One row of [`compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareRow {
    pub degree: usize,
    pub hochschild: usize,
    pub hochschild_dual_op: usize,
    pub simplicial: usize,
}

impl CompareRow {
    pub fn agrees(&self) -> bool {
        self.hochschild == self.simplicial && self.hochschild_dual_op == self.simplicial
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(CompareRow::agrees)
    }

    /// Whether the regular-coefficient column matches the simplicial one.
    pub fn regular_agrees(&self) -> bool {
        self.rows.iter().all(|r| r.hochschild == r.simplicial)
    }

    pub fn column(&self, pick: impl Fn(&CompareRow) -> usize) -> Vec<usize> {
        self.rows.iter().map(pick).collect()
    }
}

/// `Hⁿ(A, A)`, `Hⁿ(A, A^{∨op})` (relative model) and `Hⁿ(Σ, k)` side by side.
pub fn compare(poset: &Poset, field: Field, max_degree: usize) -> Result<CompareReport> {
    let a = Arc::new(Algebra::poset(poset, field));
    let reg = relative_model(a.clone(), Arc::new(Bimodule::regular(a.clone())))?;
    let dual = relative_model(a.clone(), Arc::new(Bimodule::dual_op(a.clone())))?;
    let h = reg.cohomology_dims(max_degree)?;
    let hd = dual.cohomology_dims(max_degree)?;
    let s = simplicial_cohomology(&nerve(poset, max_degree), max_degree, field)?;
    Ok(CompareReport {
        rows: (0..=max_degree)
            .map(|n| CompareRow {
                degree: n,
                hochschild: h[n],
                hochschild_dual_op: hd[n],
                simplicial: s[n],
            })
            .collect(),
    })
}
