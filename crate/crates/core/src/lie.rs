//! Finite-dimensional Lie algebras and their modules: invariant and skew forms,
//! Kirillov forms, semidirect products and Chevalley–Eilenberg cohomology.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{generic_nondegenerate, Field, Matrix, NondegenerateWitness, Scalar, SearchStrategy};

/// Structure constants `bracket[i][j] = [eᵢ, eⱼ]` in coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    field: Field,
    dim: usize,
    bracket: Vec<Vec<Vec<Scalar>>>,
    labels: Vec<String>,
}

fn default_labels(prefix: &str, d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("{prefix}{i}")).collect()
}

impl LieAlgebra {
    /// Validated: antisymmetry and Jacobi on all basis triples.
    pub fn new(field: Field, bracket: Vec<Vec<Vec<Scalar>>>, labels: Option<Vec<String>>) -> Result<LieAlgebra> {
        let dim = bracket.len();
        for row in &bracket {
            if row.len() != dim || row.iter().any(|v| v.len() != dim) {
                return Err(Error::Dimension(format!("bracket table must be {dim}x{dim}x{dim}")));
            }
        }
        let labels = labels.unwrap_or_else(|| default_labels("x", dim));
        if labels.len() != dim {
            return Err(Error::Dimension(format!("{} labels for dimension {dim}", labels.len())));
        }
        let g = LieAlgebra {
            field,
            dim,
            bracket,
            labels,
        };
        g.validate()?;
        Ok(g)
    }

    /// Builds the table from `[eᵢ, eⱼ] = Σ c eₖ` for `i < j` (or any order;
    /// the opposite bracket is filled in by antisymmetry).
    pub fn from_brackets(
        field: Field,
        labels: &[&str],
        brackets: &[(usize, usize, Vec<(usize, Scalar)>)],
    ) -> Result<LieAlgebra> {
        let d = labels.len();
        let mut table = vec![vec![vec![field.zero(); d]; d]; d];
        for (i, j, terms) in brackets {
            if *i >= d || *j >= d || terms.iter().any(|(k, _)| *k >= d) {
                return Err(Error::Dimension(format!("bracket index out of range for dimension {d}")));
            }
            for (k, c) in terms {
                table[*i][*j][*k] += c;
                table[*j][*i][*k] -= c;
            }
        }
        LieAlgebra::new(field, table, Some(labels.iter().map(|s| s.to_string()).collect()))
    }

    fn from_i64(field: Field, labels: &[&str], brackets: &[(usize, usize, &[(usize, i64)])]) -> LieAlgebra {
        let brackets: Vec<_> = brackets
            .iter()
            .map(|(i, j, t)| (*i, *j, t.iter().map(|(k, c)| (*k, field.from_i64(*c))).collect()))
            .collect();
        LieAlgebra::from_brackets(field, labels, &brackets).expect("valid Lie algebra")
    }

    /// Basis `(e, h, f)` with `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
    pub fn sl2(field: Field) -> LieAlgebra {
        LieAlgebra::from_i64(
            field,
            &["e", "h", "f"],
            &[(1, 0, &[(0, 2)]), (1, 2, &[(2, -2)]), (0, 2, &[(1, 1)])],
        )
    }

    /// `[x,y] = z`, `[y,z] = x`, `[z,x] = y`.
    pub fn so3(field: Field) -> LieAlgebra {
        LieAlgebra::from_i64(
            field,
            &["x", "y", "z"],
            &[(0, 1, &[(2, 1)]), (1, 2, &[(0, 1)]), (2, 0, &[(1, 1)])],
        )
    }

    pub fn abelian(field: Field, dim: usize) -> LieAlgebra {
        LieAlgebra {
            field,
            dim,
            bracket: vec![vec![vec![field.zero(); dim]; dim]; dim],
            labels: default_labels("x", dim),
        }
    }

    /// `[x,y] = y`.
    pub fn nonabelian2(field: Field) -> LieAlgebra {
        LieAlgebra::from_i64(field, &["x", "y"], &[(0, 1, &[(1, 1)])])
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let sum: Vec<Scalar> = self.bracket[i][j]
                    .iter()
                    .zip(&self.bracket[j][i])
                    .map(|(a, b)| a + b)
                    .collect();
                if sum.iter().any(|c| !c.is_zero()) {
                    return Err(Error::LieAxiom(format!(
                        "[{0},{1}] ≠ −[{1},{0}]",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (x, y, z) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
                    let a = self.bracket_of(&x, &self.bracket_of(&y, &z));
                    let b = self.bracket_of(&y, &self.bracket_of(&z, &x));
                    let c = self.bracket_of(&z, &self.bracket_of(&x, &y));
                    if a.iter().zip(&b).zip(&c).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return Err(Error::LieAxiom(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[Scalar] {
        &self.bracket[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn bracket_of(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in self.bracket[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&ab * c);
                    }
                }
            }
        }
        out
    }

    /// `ad eᵢ: y ↦ [eᵢ, y]`.
    pub fn ad(&self, i: usize) -> Matrix {
        Matrix::from_fn(self.field, self.dim, self.dim, |k, j| self.bracket[i][j][k].clone())
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().flatten().flatten().all(Scalar::is_zero)
    }
}

/// Action matrices `ρ(eᵢ)` with `ρ[eᵢ,eⱼ] = ρᵢρⱼ − ρⱼρᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieModule {
    algebra: Arc<LieAlgebra>,
    dim: usize,
    actions: Vec<Matrix>,
}

impl LieModule {
    pub fn new(algebra: Arc<LieAlgebra>, actions: Vec<Matrix>) -> Result<LieModule> {
        if actions.len() != algebra.dim() {
            return Err(Error::Dimension(format!(
                "{} action matrices for a Lie algebra of dimension {}",
                actions.len(),
                algebra.dim()
            )));
        }
        let dim = actions.first().map_or(0, Matrix::nrows);
        for a in &actions {
            if a.nrows() != dim || a.ncols() != dim {
                return Err(Error::Dimension(format!("action matrices must be {dim}x{dim}")));
            }
            if a.field() != algebra.field() {
                return Err(Error::FieldMismatch(algebra.field(), a.field()));
            }
        }
        let m = LieModule { algebra, dim, actions };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.algebra;
        for i in 0..g.dim() {
            for j in i + 1..g.dim() {
                let lhs = self.action_of(g.bracket(i, j));
                let rhs = self.actions[i]
                    .mul(&self.actions[j])?
                    .sub(&self.actions[j].mul(&self.actions[i])?)?;
                if lhs != rhs {
                    return Err(Error::ModuleAxiom(format!(
                        "ρ[{0},{1}] ≠ [ρ{0}, ρ{1}]",
                        g.labels()[i],
                        g.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn adjoint(algebra: Arc<LieAlgebra>) -> LieModule {
        let actions = (0..algebra.dim()).map(|i| algebra.ad(i)).collect();
        LieModule {
            dim: algebra.dim(),
            algebra,
            actions,
        }
    }

    /// `dim` copies of the trivial module.
    pub fn trivial(algebra: Arc<LieAlgebra>, dim: usize) -> LieModule {
        let actions = (0..algebra.dim())
            .map(|_| Matrix::zeros(algebra.field(), dim, dim))
            .collect();
        LieModule { algebra, dim, actions }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    pub fn action_of(&self, x: &[Scalar]) -> Matrix {
        let field = self.algebra.field();
        let mut acc = Matrix::zeros(field, self.dim, self.dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.combine(c, &self.actions[i]).expect("square");
            }
        }
        acc
    }
}

/// `(c·f)(v) = −f(c·v)`: action matrices `−ρᵢᵀ`.
pub fn dual_module(m: &LieModule) -> LieModule {
    let minus = -m.algebra.field().one();
    LieModule {
        algebra: m.algebra.clone(),
        dim: m.dim,
        actions: m.actions.iter().map(|a| a.transpose().scale(&minus)).collect(),
    }
}

/// `K[i][j] = tr(ad eᵢ ∘ ad eⱼ)`.
pub fn killing_form(g: &LieAlgebra) -> Matrix {
    let ads: Vec<Matrix> = (0..g.dim()).map(|i| g.ad(i)).collect();
    Matrix::from_fn(g.field(), g.dim(), g.dim(), |i, j| {
        let p = ads[i].mul(&ads[j]).expect("square");
        (0..g.dim()).fold(g.field().zero(), |acc, k| acc + p.get(k, k))
    })
}

fn check_gram(g: &LieAlgebra, gram: &Matrix) -> Result<()> {
    if gram.nrows() != g.dim() || gram.ncols() != g.dim() {
        return Err(Error::Dimension(format!(
            "Gram matrix must be {0}x{0}, got {1}x{2}",
            g.dim(),
            gram.nrows(),
            gram.ncols()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceCheck {
    /// First basis triple `(c, a, b)` with `⟨[c,a],b⟩ + ⟨a,[c,b]⟩ ≠ 0`.
    pub failure: Option<(usize, usize, usize)>,
    pub nondegenerate: bool,
    /// `a ↦ ⟨a,−⟩` intertwines the adjoint module with its dual.
    pub morphism: bool,
}

impl InvarianceCheck {
    pub fn invariant(&self) -> bool {
        self.failure.is_none()
    }

    pub fn dualizing(&self) -> bool {
        self.invariant() && self.nondegenerate && self.morphism
    }
}

pub fn check_invariant(g: &LieAlgebra, gram: &Matrix) -> Result<InvarianceCheck> {
    check_gram(g, gram)?;
    let d = g.dim();
    let mut failure = None;
    let mut morphism = true;
    let rho = gram.transpose();
    'c: for c in 0..d {
        let ad = g.ad(c);
        // ⟨[c,a],b⟩ + ⟨a,[c,b]⟩ = (ad_cᵀ G + G ad_c)[a][b]
        let s = ad.transpose().mul(gram)?.add(&gram.mul(&ad)?)?;
        for a in 0..d {
            for b in 0..d {
                if !s.get(a, b).is_zero() {
                    failure = Some((c, a, b));
                    break 'c;
                }
            }
        }
    }
    for c in 0..d {
        let ad = g.ad(c);
        let dual = ad.transpose().scale(&-g.field().one());
        if rho.mul(&ad)? != dual.mul(&rho)? {
            morphism = false;
            break;
        }
    }
    Ok(InvarianceCheck {
        failure,
        nondegenerate: gram.is_invertible(),
        morphism,
    })
}

fn invariance_rows(g: &LieAlgebra) -> Vec<Vec<(usize, Scalar)>> {
    let d = g.dim();
    let mut rows = Vec::new();
    for c in 0..d {
        let ad = g.ad(c).to_dense();
        for a in 0..d {
            for b in 0..d {
                let mut row = Vec::new();
                for k in 0..d {
                    if !ad[k][a].is_zero() {
                        row.push((k * d + b, ad[k][a].clone()));
                    }
                    if !ad[k][b].is_zero() {
                        row.push((a * d + k, ad[k][b].clone()));
                    }
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn grams_from_kernel(field: Field, d: usize, system: Matrix) -> Vec<Matrix> {
    system
        .kernel_basis()
        .into_iter()
        .map(|v| Matrix::from_fn(field, d, d, |i, j| v[i * d + j].clone()))
        .collect()
}

/// Basis of the invariant bilinear forms.
pub fn invariant_form_space(g: &LieAlgebra) -> Vec<Matrix> {
    let d = g.dim();
    grams_from_kernel(g.field(), d, Matrix::from_sparse_rows(g.field(), d * d, invariance_rows(g)))
}

/// Outcome of a nondegeneracy search over a space of forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSearch {
    pub space_dim: usize,
    pub strategy: SearchStrategy,
    pub evaluations: u64,
    pub witness: Option<NondegenerateWitness>,
}

fn search(field: Field, d: usize, space: &[Matrix]) -> Result<FormSearch> {
    let s = generic_nondegenerate(field, d, space)?;
    Ok(FormSearch {
        space_dim: space.len(),
        strategy: s.strategy,
        evaluations: s.evaluations,
        witness: s.witness,
    })
}

/// Invariant skew forms (`G = −Gᵀ`), searched for a nondegenerate one. Over a
/// field of characteristic ≠ 2 a witness forces `g` to be abelian.
pub fn skew_dualizing_search(g: &LieAlgebra) -> Result<FormSearch> {
    let d = g.dim();
    let field = g.field();
    let mut rows = invariance_rows(g);
    for i in 0..d {
        for j in i..d {
            let mut row = vec![(i * d + j, field.one())];
            if i == j {
                row[0].1 = field.from_i64(2);
                if row[0].1.is_zero() {
                    row[0].1 = field.one();
                }
            } else {
                row.push((j * d + i, field.one()));
            }
            rows.push(row);
        }
    }
    let space = grams_from_kernel(field, d, Matrix::from_sparse_rows(field, d * d, rows));
    search(field, d, &space)
}

/// `⟨a,b⟩ = f([a,b])`.
pub fn kirillov_form(g: &LieAlgebra, f: &[Scalar]) -> Result<Matrix> {
    if f.len() != g.dim() {
        return Err(Error::Dimension(format!(
            "functional has {} coordinates, expected {}",
            f.len(),
            g.dim()
        )));
    }
    Ok(Matrix::from_fn(g.field(), g.dim(), g.dim(), |i, j| {
        g.bracket(i, j)
            .iter()
            .zip(f)
            .fold(g.field().zero(), |acc, (c, x)| acc + c * x)
    }))
}

/// Searches all functionals for a nondegenerate Kirillov form; the witness
/// coefficients are the functional in the dual basis.
pub fn is_frobenius_lie(g: &LieAlgebra) -> Result<FormSearch> {
    let d = g.dim();
    let space = (0..d)
        .map(|k| kirillov_form(g, &g.basis_vector(k)))
        .collect::<Result<Vec<_>>>()?;
    search(g.field(), d, &space)
}

/// `g ⋉ V` with `[(a,v),(b,w)] = ([a,b], a·w − b·v)` and the block form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semidirect {
    pub algebra: LieAlgebra,
    pub form: Matrix,
}

pub fn semidirect(g: &LieAlgebra, v: &LieModule, form_g: &Matrix, form_v: &Matrix) -> Result<Semidirect> {
    if **v.algebra() != *g {
        return Err(Error::ModuleAxiom("module is over a different Lie algebra".into()));
    }
    check_gram(g, form_g)?;
    let (dg, dv) = (g.dim(), v.dim());
    if form_v.nrows() != dv || form_v.ncols() != dv {
        return Err(Error::Dimension(format!("module form must be {dv}x{dv}")));
    }
    for c in 0..dg {
        let rho = v.action(c);
        let s = rho.transpose().mul(form_v)?.add(&form_v.mul(rho)?)?;
        if !s.is_zero() {
            return Err(Error::NotInvariant(format!(
                "module form under the action of {}",
                g.labels()[c]
            )));
        }
    }
    let field = g.field();
    let d = dg + dv;
    let mut table = vec![vec![vec![field.zero(); d]; d]; d];
    for i in 0..dg {
        for j in 0..dg {
            table[i][j][..dg].clone_from_slice(g.bracket(i, j));
        }
        for w in 0..dv {
            for k in 0..dv {
                let c = v.action(i).get(k, w);
                table[i][dg + w][dg + k] = c.clone();
                table[dg + w][i][dg + k] = -c;
            }
        }
    }
    let mut labels = g.labels().to_vec();
    labels.extend(default_labels("v", dv));
    let algebra = LieAlgebra::new(field, table, Some(labels))?;
    let form = Matrix::from_fn(field, d, d, |i, j| match (i < dg, j < dg) {
        (true, true) => form_g.get(i, j),
        (false, false) => form_v.get(i - dg, j - dg),
        _ => field.zero(),
    });
    Ok(Semidirect { algebra, form })
}

/// Increasing `n`-subsets of `0..d` in lexicographic order.
fn subsets(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(start: usize, d: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < n - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, d, n, cur, out);
            cur.pop();
        }
    }
    go(0, d, n, &mut cur, &mut out);
    out
}

/// `dⁿ: Cⁿ(g, M) → Cⁿ⁺¹(g, M)` on alternating cochains, coordinates indexed by
/// (increasing subset, module basis index):
/// `(dF)(x₀…xₙ) = Σ (−1)ⁱ xᵢ·F(…x̂ᵢ…) + Σ_{i<j} (−1)^{i+j} F([xᵢ,xⱼ], …x̂ᵢ…x̂ⱼ…)`.
pub fn ce_differential(m: &LieModule, n: usize) -> Matrix {
    let g = m.algebra();
    let (d, md) = (g.dim(), m.dim());
    let field = g.field();
    let src = subsets(d, n);
    let tgt = subsets(d, n + 1);
    let index: HashMap<&[usize], usize> = src.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let sign = |k: usize| if k % 2 == 0 { field.one() } else { -field.one() };
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(tgt.len() * md);
    for t in &tgt {
        let mut block: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); md];
        for i in 0..=n {
            let mut rest = t.clone();
            let x = rest.remove(i);
            let col = index[rest.as_slice()];
            for (r, row) in block.iter_mut().enumerate() {
                for (s, c) in m.action(x).row(r) {
                    row.push((col * md + s, &sign(i) * c));
                }
            }
        }
        for i in 0..=n {
            for j in i + 1..=n {
                let rest: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| *p != i && *p != j)
                    .map(|(_, &x)| x)
                    .collect();
                for (k, c) in g.bracket(t[i], t[j]).iter().enumerate() {
                    if c.is_zero() || rest.contains(&k) {
                        continue;
                    }
                    let pos = rest.iter().filter(|&&y| y < k).count();
                    let mut s = rest.clone();
                    s.insert(pos, k);
                    let col = index[s.as_slice()];
                    let coeff = &(&sign(i + j) * &sign(pos)) * c;
                    for (r, row) in block.iter_mut().enumerate() {
                        row.push((col * md + r, coeff.clone()));
                    }
                }
            }
        }
        rows.extend(block);
    }
    Matrix::from_sparse_rows(field, src.len() * md, rows)
}

/// `dim Hⁿ(g, M)` for `n ≤ max_degree ≤ dim g`; also verifies `d² = 0`.
pub fn ce_cohomology_dims(m: &LieModule, max_degree: usize) -> Result<Vec<usize>> {
    let d = m.algebra().dim();
    if max_degree > d {
        return Err(Error::Dimension(format!(
            "degree {max_degree} exceeds the dimension {d}"
        )));
    }
    m.validate()?;
    let diffs: Vec<Matrix> = (0..=max_degree).into_par_iter().map(|n| ce_differential(m, n)).collect();
    for n in 1..=max_degree {
        if !diffs[n].mul(&diffs[n - 1])?.is_zero() {
            return Err(Error::ModuleAxiom(format!("d² ≠ 0 in degree {n}")));
        }
    }
    let ranks: Vec<usize> = diffs.par_iter().map(Matrix::rank).collect();
    Ok((0..=max_degree)
        .map(|n| diffs[n].ncols() - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] })
        .collect())
}

/// `{X : XᵀG + GX = 0}` with the commutator bracket.
pub fn orthogonal_of_form(gram: &Matrix) -> Result<LieAlgebra> {
    if !gram.is_square() {
        return Err(Error::NotSquare {
            rows: gram.nrows(),
            cols: gram.ncols(),
        });
    }
    let n = gram.nrows();
    let field = gram.field();
    let g = gram.to_dense();
    // (XᵀG + GX)[a][b] = Σk X[k][a] G[k][b] + G[a][k] X[k][b], unknown X[i][j] at i·n + j
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut row = Vec::new();
            for k in 0..n {
                if !g[k][b].is_zero() {
                    row.push((k * n + a, g[k][b].clone()));
                }
                if !g[a][k].is_zero() {
                    row.push((k * n + b, g[a][k].clone()));
                }
            }
            rows.push(row);
        }
    }
    let basis = Matrix::from_sparse_rows(field, n * n, rows).kernel_basis();
    let as_matrix = |v: &[Scalar]| Matrix::from_fn(field, n, n, |i, j| v[i * n + j].clone());
    let coords = Matrix::from_columns(field, n * n, &basis);
    let dim = basis.len();
    let mut table = vec![vec![vec![field.zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let (x, y) = (as_matrix(&basis[i]), as_matrix(&basis[j]));
            let c = x.mul(&y)?.sub(&y.mul(&x)?)?;
            let flat: Vec<Scalar> = c.to_dense().into_iter().flatten().collect();
            table[i][j] = coords
                .solve(&flat)
                .ok_or_else(|| Error::LieAxiom("commutator left the algebra".into()))?;
        }
    }
    LieAlgebra::new(field, table, Some(default_labels("X", dim)))
}

/// Sign of reversing `n` alternating arguments, `(−1)^⌊n/2⌋`.
pub fn reversal_sign(n: usize) -> i64 {
    if (n / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}
