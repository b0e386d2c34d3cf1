//! Coordinate models of the Hochschild cochain complex.
//!
//! All three models share one description. The algebra is written in a working
//! basis `w_0..w_{d-1}` (columns of an invertible matrix `P`), some of which are
//! dropped: none in the full model, the unit in the normalized model, the
//! idempotents spanning `S` in the relative model. The remaining basis vectors
//! are the admissible arguments, each with a left and right "type" (the Peirce
//! component it lies in; a single type outside the relative model).
//!
//! A degree-`n` index is a composable path `(a; x_1, …, x_n)` with
//! `a = left(x_1)` and `right(x_i) = left(x_{i+1})`, and a cochain's value on
//! it lies in the module component `M_{a,b}`, `b` the end type. Module
//! coordinates are taken in a basis `Q` adapted to these components.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::exact::{normalize_sparse, to_sparse, Echelon, Matrix, Scalar, SparseVec};

/// Default bound on the number of indices in a single degree.
pub const DEFAULT_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Full,
    Normalized,
    Relative,
}

impl std::fmt::Display for ModelTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelTag::Full => "full",
            ModelTag::Normalized => "normalized",
            ModelTag::Relative => "relative",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Full,
    Normalized,
    /// Relative to the span of a complete family of orthogonal idempotents,
    /// given in the algebra's basis.
    Relative(Vec<Vec<Scalar>>),
}

impl ModelKind {
    pub fn tag(&self) -> ModelTag {
        match self {
            ModelKind::Full => ModelTag::Full,
            ModelKind::Normalized => ModelTag::Normalized,
            ModelKind::Relative(_) => ModelTag::Relative,
        }
    }

    /// Relative model over the diagonal idempotents of a poset algebra.
    pub fn poset_relative(algebra: &Algebra) -> Result<ModelKind> {
        let layout = algebra.poset_layout().ok_or(Error::NotPosetAlgebra)?;
        Ok(ModelKind::Relative(
            layout
                .diagonal_indices()
                .into_iter()
                .map(|k| algebra.basis_vector(k))
                .collect(),
        ))
    }
}

/// An admissible argument: a working basis vector with its Peirce types.
#[derive(Clone, Debug)]
pub struct Arg {
    pub vector: Vec<Scalar>,
    pub left: usize,
    pub right: usize,
}

/// Index set of one degree.
#[derive(Debug)]
pub struct Paths {
    /// `[start type, x_1, …, x_n]`, lexicographically ordered.
    pub keys: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// Coordinate offset of each path; one extra entry holds the total.
    offsets: Vec<usize>,
}

impl Paths {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn position(&self, key: &[usize]) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn offset(&self, p: usize) -> usize {
        self.offsets[p]
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().expect("sentinel")
    }
}

#[derive(Debug)]
pub struct CochainModel {
    algebra: Arc<Algebra>,
    module: Arc<Bimodule>,
    kind: ModelKind,
    cap: usize,
    types: usize,
    basis: Matrix,
    basis_inv: Matrix,
    dropped: Vec<bool>,
    arg_of: Vec<Option<usize>>,
    args: Vec<Arg>,
    /// `products[i][j]` = `x_i x_j` over argument indices, dropped parts removed.
    products: Vec<Vec<SparseVec>>,
    /// `(offset, dim)` of `M_{a,b}` inside the adapted module basis.
    components: Vec<Vec<(usize, usize)>>,
    /// Adapted module basis and its inverse; `None` when it is the identity.
    q: Option<(Matrix, Matrix)>,
    lq: Vec<Matrix>,
    rq: Vec<Matrix>,
    cache: Mutex<HashMap<usize, Arc<Paths>>>,
}

impl CochainModel {
    pub fn new(algebra: Arc<Algebra>, module: Arc<Bimodule>, kind: ModelKind) -> Result<CochainModel> {
        CochainModel::with_cap(algebra, module, kind, DEFAULT_CAP)
    }

    pub fn with_cap(
        algebra: Arc<Algebra>,
        module: Arc<Bimodule>,
        kind: ModelKind,
        cap: usize,
    ) -> Result<CochainModel> {
        if !module.is_over(&algebra) {
            return Err(Error::BaseAlgebraMismatch);
        }
        let field = algebra.field();
        let d = algebra.dim();
        let m = module.dim();

        // Working basis, dropped vectors and argument types.
        let (basis, dropped, types, type_of): (Matrix, Vec<bool>, usize, Vec<(usize, usize)>) =
            match &kind {
                ModelKind::Full => (Matrix::identity(field, d), vec![false; d], 1, vec![(0, 0); d]),
                ModelKind::Normalized => {
                    let (basis, u) = match algebra.unit_index() {
                        Some(u) => (Matrix::identity(field, d), u),
                        None => (complete_basis(&algebra, algebra.unit()), 0),
                    };
                    let mut dropped = vec![false; d];
                    dropped[u] = true;
                    (basis, dropped, 1, vec![(0, 0); d])
                }
                ModelKind::Relative(idem) => {
                    validate_idempotents(&algebra, idem)?;
                    let (basis, dropped, type_of) = peirce_basis(&algebra, idem);
                    (basis, dropped, idem.len(), type_of)
                }
            };
        let basis_inv = basis.inverse()?;

        let mut args = Vec::new();
        let mut arg_of = vec![None; d];
        for w in 0..d {
            if !dropped[w] {
                arg_of[w] = Some(args.len());
                args.push(Arg {
                    vector: basis.column(w),
                    left: type_of[w].0,
                    right: type_of[w].1,
                });
            }
        }

        let mut products = vec![vec![Vec::new(); args.len()]; args.len()];
        for (i, xi) in args.iter().enumerate() {
            for (j, xj) in args.iter().enumerate() {
                if xi.right != xj.left {
                    continue;
                }
                let p = algebra.mul(&xi.vector, &xj.vector);
                let w = basis_inv.mul_vec(&p);
                products[i][j] = w
                    .into_iter()
                    .enumerate()
                    .filter(|(k, c)| !c.is_zero() && !dropped[*k])
                    .map(|(k, c)| (arg_of[k].expect("kept"), c))
                    .collect();
            }
        }

        // Module components.
        let (components, q) = match &kind {
            ModelKind::Relative(idem) => {
                let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(m);
                let mut components = vec![vec![(0, 0); types]; types];
                let lefts: Vec<Matrix> = idem.iter().map(|e| module.left_of(e)).collect();
                let rights: Vec<Matrix> = idem.iter().map(|e| module.right_of(e)).collect();
                for a in 0..types {
                    for b in 0..types {
                        let proj = lefts[a].mul(&rights[b])?;
                        let start = cols.len();
                        for c in proj.pivot_columns() {
                            cols.push(proj.column(c));
                        }
                        components[a][b] = (start, cols.len() - start);
                    }
                }
                if cols.len() != m {
                    return Err(Error::Idempotents(
                        "module does not decompose along the idempotents".into(),
                    ));
                }
                let qm = Matrix::from_columns(field, m, &cols);
                let q = if qm == Matrix::identity(field, m) {
                    None
                } else {
                    let inv = qm.inverse()?;
                    Some((qm, inv))
                };
                (components, q)
            }
            _ => (vec![vec![(0, m)]], None),
        };

        let conj = |a: Matrix| -> Result<Matrix> {
            match &q {
                None => Ok(a),
                Some((qm, inv)) => inv.mul(&a)?.mul(qm),
            }
        };
        let mut lq = Vec::with_capacity(args.len());
        let mut rq = Vec::with_capacity(args.len());
        for x in &args {
            lq.push(conj(module.left_of(&x.vector))?);
            rq.push(conj(module.right_of(&x.vector))?);
        }

        Ok(CochainModel {
            algebra,
            module,
            kind,
            cap,
            types,
            basis,
            basis_inv,
            dropped,
            arg_of,
            args,
            products,
            components,
            q,
            lq,
            rq,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn module(&self) -> &Arc<Bimodule> {
        &self.module
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn tag(&self) -> ModelTag {
        self.kind.tag()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn types(&self) -> usize {
        self.types
    }

    pub fn args(&self) -> &[Arg] {
        &self.args
    }

    /// Columns are the working basis in the algebra's original coordinates.
    pub fn working_basis(&self) -> &Matrix {
        &self.basis
    }

    pub(crate) fn working_coords(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.basis_inv.mul_vec(x)
    }

    pub(crate) fn arg_of_working(&self, w: usize) -> Option<usize> {
        if self.dropped[w] {
            None
        } else {
            self.arg_of[w]
        }
    }

    pub fn component(&self, a: usize, b: usize) -> (usize, usize) {
        self.components[a][b]
    }

    /// End type of a path key.
    pub fn end_type(&self, key: &[usize]) -> usize {
        match key.len() {
            1 => key[0],
            _ => self.args[*key.last().expect("nonempty")].right,
        }
    }

    /// The path key of an argument tuple, or `None` if it is not composable.
    pub fn key_of(&self, args: &[usize]) -> Option<Vec<usize>> {
        let first = self.args.get(*args.first()?)?;
        for w in args.windows(2) {
            if self.args[w[0]].right != self.args[w[1]].left {
                return None;
            }
        }
        let mut key = Vec::with_capacity(args.len() + 1);
        key.push(first.left);
        key.extend_from_slice(args);
        Some(key)
    }

    /// Number of degree-`n` indices, without enumerating them.
    pub fn index_count(&self, n: usize) -> u128 {
        let t = self.types;
        let mut trans = vec![vec![0u128; t]; t];
        for x in &self.args {
            trans[x.left][x.right] += 1;
        }
        let mut count = vec![1u128; t];
        for _ in 0..n {
            let mut next = vec![0u128; t];
            for a in 0..t {
                for b in 0..t {
                    next[b] = next[b].saturating_add(count[a].saturating_mul(trans[a][b]));
                }
            }
            count = next;
        }
        count.into_iter().fold(0u128, u128::saturating_add)
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        let size = self.index_count(n);
        if size > self.cap as u128 {
            return Err(Error::CochainCap {
                degree: n,
                size: usize::try_from(size).unwrap_or(usize::MAX),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// The degree-`n` index set (cached).
    pub fn paths(&self, n: usize) -> Result<Arc<Paths>> {
        if let Some(p) = self.cache.lock().expect("cache").get(&n) {
            return Ok(p.clone());
        }
        self.check_cap(n)?;
        let keys = if n == 0 {
            (0..self.types).map(|a| vec![a]).collect()
        } else {
            let prev = self.paths(n - 1)?;
            let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); self.types];
            for (i, x) in self.args.iter().enumerate() {
                by_left[x.left].push(i);
            }
            let mut keys = Vec::new();
            for k in &prev.keys {
                let end = self.end_type(k);
                for &x in &by_left[end] {
                    let mut nk = k.clone();
                    nk.push(x);
                    keys.push(nk);
                }
            }
            keys
        };
        let mut offsets = Vec::with_capacity(keys.len() + 1);
        let mut total = 0;
        for k in &keys {
            offsets.push(total);
            total += self.components[k[0]][self.end_type(k)].1;
        }
        offsets.push(total);
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let p = Arc::new(Paths {
            keys,
            index,
            offsets,
        });
        self.cache.lock().expect("cache").insert(n, p.clone());
        Ok(p)
    }

    /// Coordinate dimension of `Cⁿ`.
    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.paths(n)?.dim())
    }

    /// Matrix of `δ: Cⁿ → Cⁿ⁺¹`.
    pub fn differential_matrix(&self, n: usize) -> Result<Matrix> {
        let src = self.paths(n)?;
        let dst = self.paths(n + 1)?;
        let field = self.algebra.field();
        let blocks: Vec<Vec<SparseVec>> = dst
            .keys
            .par_iter()
            .map(|key| self.differential_rows(n, key, &src))
            .collect();
        let rows: Vec<SparseVec> = blocks.into_iter().flatten().collect();
        debug_assert_eq!(rows.len(), dst.dim());
        Ok(Matrix::from_sparse_rows(field, src.dim(), rows))
    }

    /// Rows of `δ` for one degree-`(n+1)` path.
    fn differential_rows(&self, n: usize, key: &[usize], src: &Paths) -> Vec<SparseVec> {
        let start = key[0];
        let end = self.end_type(key);
        let (r0, rdim) = self.components[start][end];
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rdim];
        let args = &key[1..];
        let one = self.algebra.field().one();
        let sign = |k: usize| if k % 2 == 0 { one.clone() } else { -one.clone() };

        // x_1 · F(x_2, …)
        let x1 = args[0];
        let mut tail = Vec::with_capacity(n + 1);
        tail.push(self.args[x1].right);
        tail.extend_from_slice(&args[1..]);
        if let Some(p) = src.position(&tail) {
            let (c0, cdim) = self.components[self.args[x1].right][end];
            let col = src.offset(p);
            for (i, row) in rows.iter_mut().enumerate() {
                for (j, v) in self.lq[x1].row(r0 + i) {
                    if *j >= c0 && *j < c0 + cdim {
                        row.push((col + j - c0, v.clone()));
                    }
                }
            }
        }

        // interior products
        for i in 0..n {
            let s = sign(i + 1);
            for (w, c) in &self.products[args[i]][args[i + 1]] {
                let mut k = Vec::with_capacity(n + 1);
                k.push(start);
                k.extend_from_slice(&args[..i]);
                k.push(*w);
                k.extend_from_slice(&args[i + 2..]);
                if let Some(p) = src.position(&k) {
                    let col = src.offset(p);
                    let v = &s * c;
                    for (t, row) in rows.iter_mut().enumerate() {
                        row.push((col + t, v.clone()));
                    }
                }
            }
        }

        // (−1)^{n+1} F(x_1, …, x_n) · x_{n+1}
        let last = args[n];
        let head: Vec<usize> = key[..=n].to_vec();
        if let Some(p) = src.position(&head) {
            let mid = self.args[last].left;
            let (c0, cdim) = self.components[start][mid];
            let col = src.offset(p);
            let s = sign(n + 1);
            for (i, row) in rows.iter_mut().enumerate() {
                for (j, v) in self.rq[last].row(r0 + i) {
                    if *j >= c0 && *j < c0 + cdim {
                        row.push((col + j - c0, &s * v));
                    }
                }
            }
        }
        rows.into_iter().map(normalize_sparse).collect()
    }

    /// `dim Hⁿ` for `0 ≤ n ≤ max_degree`. Ranks of distinct degrees are
    /// computed concurrently.
    pub fn cohomology_dims(&self, max_degree: usize) -> Result<Vec<usize>> {
        for n in 0..=max_degree + 1 {
            self.paths(n)?;
        }
        let ranks: Vec<usize> = (0..=max_degree)
            .into_par_iter()
            .map(|n| self.differential_matrix(n).map(|m| m.rank()))
            .collect::<Result<_>>()?;
        let mut dims = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let prev = if n == 0 { 0 } else { ranks[n - 1] };
            dims.push(self.dim(n)? - ranks[n] - prev);
        }
        Ok(dims)
    }

    /// Converts a module vector (original coordinates) to adapted coordinates.
    pub(crate) fn to_adapted(&self, v: &[Scalar]) -> Vec<Scalar> {
        match &self.q {
            None => v.to_vec(),
            Some((_, inv)) => inv.mul_vec(v),
        }
    }

    pub(crate) fn from_adapted(&self, v: &[Scalar]) -> Vec<Scalar> {
        match &self.q {
            None => v.to_vec(),
            Some((qm, _)) => qm.mul_vec(v),
        }
    }

    /// The same model for `A^op` with coefficients `M^op`.
    pub fn opposite(&self) -> Result<CochainModel> {
        if self.tag() == ModelTag::Relative {
            return Err(Error::RelativeUnsupported);
        }
        let op = self.module.op();
        let a = op.algebra().clone();
        CochainModel::with_cap(a, Arc::new(op), self.kind.clone(), self.cap)
    }

    pub(crate) fn is_regular(&self) -> bool {
        self.module.kind() == crate::bimodule::ModuleKind::Regular
    }
}

/// `[unit, first standard vectors completing it to a basis]` as columns.
fn complete_basis(algebra: &Algebra, unit: &[Scalar]) -> Matrix {
    let d = algebra.dim();
    let field = algebra.field();
    let mut ech = Echelon::new(field);
    let mut cols = vec![unit.to_vec()];
    ech.insert(to_sparse(unit));
    for i in 0..d {
        let e = algebra.basis_vector(i);
        if ech.insert(to_sparse(&e)) {
            cols.push(e);
        }
    }
    Matrix::from_columns(field, d, &cols)
}

fn validate_idempotents(algebra: &Algebra, idem: &[Vec<Scalar>]) -> Result<()> {
    let d = algebra.dim();
    if idem.is_empty() {
        return Err(Error::Idempotents("empty family".into()));
    }
    for (a, e) in idem.iter().enumerate() {
        if e.len() != d {
            return Err(Error::Idempotents(format!("idempotent {a} has length {}", e.len())));
        }
        if let Some(x) = e.iter().find(|x| x.field() != algebra.field()) {
            return Err(Error::FieldMismatch(algebra.field(), x.field()));
        }
        if e.iter().all(Scalar::is_zero) {
            return Err(Error::Idempotents(format!("idempotent {a} is zero")));
        }
    }
    let zero = vec![algebra.field().zero(); d];
    for (a, ea) in idem.iter().enumerate() {
        for (b, eb) in idem.iter().enumerate() {
            let p = algebra.mul(ea, eb);
            let expected = if a == b { ea } else { &zero };
            if &p != expected {
                return Err(Error::Idempotents(format!(
                    "e{a}·e{b} should be {}",
                    if a == b { "e{a}" } else { "0" }
                )));
            }
        }
    }
    let mut sum = zero;
    for e in idem {
        for (s, x) in sum.iter_mut().zip(e) {
            *s += x;
        }
    }
    if sum != algebra.unit() {
        return Err(Error::Idempotents("idempotents do not sum to the unit".into()));
    }
    Ok(())
}

/// Working basis adapted to the Peirce decomposition `A = ⊕ e_a A e_b`, with
/// every idempotent among the basis vectors. The identity basis is kept when
/// it already has this shape.
fn peirce_basis(algebra: &Algebra, idem: &[Vec<Scalar>]) -> (Matrix, Vec<bool>, Vec<(usize, usize)>) {
    let d = algebra.dim();
    let field = algebra.field();
    let t = idem.len();
    let lefts: Vec<Matrix> = idem.iter().map(|e| left_mult(algebra, e)).collect();
    let rights: Vec<Matrix> = idem.iter().map(|e| right_mult(algebra, e)).collect();
    let proj: Vec<Vec<Matrix>> = (0..t)
        .map(|a| {
            (0..t)
                .map(|b| lefts[a].mul(&rights[b]).expect("square"))
                .collect()
        })
        .collect();

    // Fast path: idempotents are basis vectors and every basis vector is
    // homogeneous.
    let idem_index: Vec<Option<usize>> = idem
        .iter()
        .map(|e| {
            let s = to_sparse(e);
            match s.as_slice() {
                [(i, c)] if c.is_one() => Some(*i),
                _ => None,
            }
        })
        .collect();
    if idem_index.iter().all(Option::is_some) {
        let mut type_of = Vec::with_capacity(d);
        for j in 0..d {
            let e = algebra.basis_vector(j);
            let hit = (0..t)
                .flat_map(|a| (0..t).map(move |b| (a, b)))
                .find(|&(a, b)| proj[a][b].mul_vec(&e) == e);
            match hit {
                Some(ab) => type_of.push(ab),
                None => break,
            }
        }
        if type_of.len() == d {
            let mut dropped = vec![false; d];
            for i in idem_index.into_iter().flatten() {
                dropped[i] = true;
            }
            return (Matrix::identity(field, d), dropped, type_of);
        }
    }

    let mut cols = Vec::with_capacity(d);
    let mut dropped = Vec::with_capacity(d);
    let mut type_of = Vec::with_capacity(d);
    for a in 0..t {
        for b in 0..t {
            let p = &proj[a][b];
            let mut ech = Echelon::new(field);
            if a == b {
                ech.insert(to_sparse(&idem[a]));
                cols.push(idem[a].clone());
                dropped.push(true);
                type_of.push((a, a));
            }
            for c in 0..d {
                let v = p.column(c);
                if ech.insert(to_sparse(&v)) {
                    cols.push(v);
                    dropped.push(false);
                    type_of.push((a, b));
                }
            }
        }
    }
    (Matrix::from_columns(field, d, &cols), dropped, type_of)
}

fn left_mult(algebra: &Algebra, x: &[Scalar]) -> Matrix {
    let d = algebra.dim();
    let cols: Vec<Vec<Scalar>> = (0..d).map(|j| algebra.mul(x, &algebra.basis_vector(j))).collect();
    Matrix::from_columns(algebra.field(), d, &cols)
}

fn right_mult(algebra: &Algebra, x: &[Scalar]) -> Matrix {
    let d = algebra.dim();
    let cols: Vec<Vec<Scalar>> = (0..d).map(|j| algebra.mul(&algebra.basis_vector(j), x)).collect();
    Matrix::from_columns(algebra.field(), d, &cols)
}

/// Convenience wrapper: builds the model and returns `dim Hⁿ(A, M)` for
/// `n ≤ max_degree`.
pub fn cohomology_dims(
    algebra: Arc<Algebra>,
    module: Arc<Bimodule>,
    max_degree: usize,
    kind: ModelKind,
) -> Result<Vec<usize>> {
    CochainModel::new(algebra, module, kind)?.cohomology_dims(max_degree)
}
