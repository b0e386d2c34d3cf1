//! Finite-dimensional unital associative algebras given by structure constants.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{normalize_sparse, sparse_axpy, to_dense, to_sparse, Field, Matrix, Scalar, SparseVec};
use crate::poset::Poset;

/// Multiplication table of a finite group, `table[g][h] = gh`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates the group axioms, reporting the first one that fails.
    pub fn new(table: Vec<Vec<usize>>) -> Result<GroupTable> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {g} has length {}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("entry {x} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({g},{h},{k})"
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {g} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(GroupTable {
            table,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// Cyclic group of order `n`, element `i` standing for `a^i`.
    pub fn cyclic(n: usize) -> GroupTable {
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        GroupTable::new(table).expect("cyclic group")
    }

    /// Symmetric group on `n` letters, permutations in lexicographic order,
    /// `(στ)(x) = σ(τ(x))`.
    pub fn symmetric(n: usize) -> GroupTable {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..n)
                        .filter(|x| !p.contains(x))
                        .map(|x| {
                            let mut q = p.clone();
                            q.push(x);
                            q
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index[&t.iter().map(|&x| s[x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        GroupTable::new(table).expect("symmetric group")
    }
}

/// Basis bookkeeping for a poset algebra: basis vector `k` is `e_{ij}` with
/// `(i, j) = pairs[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetLayout {
    pub poset: Poset,
    pub pairs: Vec<(usize, usize)>,
}

impl PosetLayout {
    pub fn basis_index(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.binary_search(&(i, j)).ok()
    }

    /// Coordinates of the diagonal idempotents `e_{ii}`.
    pub fn diagonal_indices(&self) -> Vec<usize> {
        (0..self.poset.len())
            .map(|i| self.basis_index(i, i).expect("reflexive"))
            .collect()
    }
}

/// Which constructor produced an algebra, when that matters downstream.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Origin {
    #[default]
    Generic,
    Group(GroupTable),
    Poset(PosetLayout),
}

/// A finite-dimensional unital associative algebra. `table[i][j]` is the basis
/// expansion of `e_i · e_j`. Construction always validates associativity and
/// the unit.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    dim: usize,
    table: Vec<Vec<SparseVec>>,
    unit: Vec<Scalar>,
    labels: Vec<String>,
    origin: Origin,
}

/// Structure constants and unit; labels and origin are presentation only.
impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.unit == other.unit
            && self.table == other.table
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Universal constructor from a dense table `table[i][j][k]` = coefficient
    /// of `e_k` in `e_i e_j`.
    pub fn from_structure_constants(
        field: Field,
        dim: usize,
        table: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    ) -> Result<Algebra> {
        if table.len() != dim || table.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension(format!("table is not {dim}x{dim}")));
        }
        let mut sparse = Vec::with_capacity(dim);
        for row in &table {
            let mut srow = Vec::with_capacity(dim);
            for v in row {
                if v.len() != dim {
                    return Err(Error::Dimension(format!(
                        "product vector has length {}, expected {dim}",
                        v.len()
                    )));
                }
                if let Some(x) = v.iter().find(|x| x.field() != field) {
                    return Err(Error::FieldMismatch(field, x.field()));
                }
                srow.push(to_sparse(v));
            }
            sparse.push(srow);
        }
        Algebra::from_sparse(field, dim, sparse, unit, default_labels(dim), Origin::Generic)
    }

    /// Constructor from sparse products; validates.
    pub fn from_sparse(
        field: Field,
        dim: usize,
        table: Vec<Vec<SparseVec>>,
        unit: Vec<Scalar>,
        labels: Vec<String>,
        origin: Origin,
    ) -> Result<Algebra> {
        if unit.len() != dim {
            return Err(Error::Dimension(format!(
                "unit has length {}, expected {dim}",
                unit.len()
            )));
        }
        if labels.len() != dim {
            return Err(Error::Dimension("label count".into()));
        }
        let a = Algebra {
            field,
            dim,
            table,
            unit,
            labels,
            origin,
        };
        a.validate()?;
        Ok(a)
    }

    /// Checks `(e_i e_j) e_k = e_i (e_j e_k)` and `1·e_i = e_i·1 = e_i`.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let ij = &self.table[i][j];
                for k in 0..d {
                    let mut lhs: SparseVec = Vec::new();
                    for (l, c) in ij {
                        lhs = sparse_axpy(&lhs, c, &self.table[*l][k]);
                    }
                    let mut rhs: SparseVec = Vec::new();
                    for (l, c) in &self.table[j][k] {
                        rhs = sparse_axpy(&rhs, c, &self.table[i][*l]);
                    }
                    if lhs != rhs {
                        return Err(Error::Associativity(i, j, k));
                    }
                }
            }
        }
        for i in 0..d {
            let e = self.basis_vector(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::Unit(i));
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

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Algebra> {
        if labels.len() != self.dim {
            return Err(Error::Dimension("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// `e_i · e_j` as a sparse vector.
    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut acc: SparseVec = Vec::new();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc = sparse_axpy(&acc, &(a * b), &self.table[i][j]);
            }
        }
        to_dense(self.field, self.dim, &acc)
    }

    /// Matrix of `y ↦ e_i y`.
    pub fn left_matrix(&self, i: usize) -> Matrix {
        self.matrix_from_products(|j| &self.table[i][j])
    }

    /// Matrix of `y ↦ y e_i`.
    pub fn right_matrix(&self, i: usize) -> Matrix {
        self.matrix_from_products(|j| &self.table[j][i])
    }

    fn matrix_from_products<'a>(&'a self, col: impl Fn(usize) -> &'a SparseVec) -> Matrix {
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.dim];
        for j in 0..self.dim {
            for (k, c) in col(j) {
                rows[*k].push((j, c.clone()));
            }
        }
        Matrix::from_sparse_rows(self.field, self.dim, rows)
    }

    /// Basis index whose vector is exactly the unit, if any.
    pub fn unit_index(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.dim).filter(|&i| !self.unit[i].is_zero()).collect();
        match nz.as_slice() {
            [i] if self.unit[*i].is_one() => Some(*i),
            _ => None,
        }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Field) -> Algebra {
        Algebra::from_sparse(
            field,
            1,
            vec![vec![vec![(0, field.one())]]],
            vec![field.one()],
            vec!["1".into()],
            Origin::Generic,
        )
        .expect("ground field")
    }

    /// Full matrix algebra `M_n`, basis `e_{ij}` in row-major order.
    pub fn matrix_algebra(field: Field, n: usize) -> Algebra {
        let d = n * n;
        let idx = |i: usize, j: usize| i * n + j;
        let mut table = vec![vec![Vec::new(); d]; d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[idx(i, j)][idx(j, l)] = vec![(idx(i, l), field.one())];
                }
            }
        }
        let mut unit = vec![field.zero(); d];
        for i in 0..n {
            unit[idx(i, i)] = field.one();
        }
        let labels = (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("e{}{}", i + 1, j + 1)))
            .collect();
        Algebra::from_sparse(field, d, table, unit, labels, Origin::Generic)
            .expect("matrix units")
    }

    /// Incidence algebra of a poset: matrix units `e_{ij}` for `i ⪯ j`.
    pub fn poset(poset: &Poset, field: Field) -> Algebra {
        let pairs = poset.pairs();
        let layout = PosetLayout {
            poset: poset.clone(),
            pairs: pairs.clone(),
        };
        let d = pairs.len();
        let mut table = vec![vec![Vec::new(); d]; d];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                if j == k {
                    let c = layout.basis_index(i, l).expect("transitive");
                    table[a][b] = vec![(c, field.one())];
                }
            }
        }
        let mut unit = vec![field.zero(); d];
        for k in layout.diagonal_indices() {
            unit[k] = field.one();
        }
        let labels = pairs
            .iter()
            .map(|&(i, j)| format!("e({},{})", poset.labels()[i], poset.labels()[j]))
            .collect();
        Algebra::from_sparse(field, d, table, unit, labels, Origin::Poset(layout))
            .expect("poset algebra")
    }

    /// Group algebra `kG`; basis = group elements.
    pub fn group(group: GroupTable, field: Field, labels: Option<Vec<String>>) -> Result<Algebra> {
        let n = group.order();
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(_) => return Err(Error::Dimension("label count".into())),
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        let table = (0..n)
            .map(|g| (0..n).map(|h| vec![(group.table[g][h], field.one())]).collect())
            .collect();
        let mut unit = vec![field.zero(); n];
        unit[group.identity] = field.one();
        Algebra::from_sparse(field, n, table, unit, labels, Origin::Group(group))
    }

    /// `k[t]/t^{n+1}` with basis `1, t, …, t^n`.
    pub fn truncated_poly(n: usize, field: Field) -> Algebra {
        let d = n + 1;
        let table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i + j <= n {
                            vec![(i + j, field.one())]
                        } else {
                            Vec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![field.zero(); d];
        unit[0] = field.one();
        let labels = (0..d).map(|i| monomial_label(&["t"], &[i])).collect();
        Algebra::from_sparse(field, d, table, unit, labels, Origin::Generic).expect("truncated")
    }

    /// `k[vars]/(monomials)`. Relations are exponent vectors. Standard monomials
    /// are found by closure under multiplication by the variables; the quotient is
    /// rejected if a standard monomial of total degree above `degree_cap` exists.
    pub fn monomial_quotient<S: AsRef<str>>(
        field: Field,
        vars: &[S],
        relations: &[Vec<usize>],
        degree_cap: usize,
    ) -> Result<Algebra> {
        let nv = vars.len();
        if let Some(r) = relations.iter().find(|r| r.len() != nv) {
            return Err(Error::Dimension(format!(
                "relation {r:?} has {} exponents for {nv} variables",
                r.len()
            )));
        }
        let divisible = |m: &[usize]| {
            relations
                .iter()
                .any(|r| r.iter().zip(m).all(|(a, b)| a <= b))
        };
        let mut standard: Vec<Vec<usize>> = Vec::new();
        let mut frontier = vec![vec![0usize; nv]];
        if divisible(&frontier[0]) {
            return Err(Error::Unit(0));
        }
        while let Some(m) = frontier.pop() {
            if standard.contains(&m) {
                continue;
            }
            let deg: usize = m.iter().sum();
            if deg > degree_cap {
                return Err(Error::InfiniteQuotient(degree_cap));
            }
            for v in 0..nv {
                let mut n = m.clone();
                n[v] += 1;
                if !divisible(&n) && !standard.contains(&n) {
                    frontier.push(n);
                }
            }
            standard.push(m);
        }
        // degree, then exponent vectors in descending lexicographic order
        standard.sort_by(|a, b| {
            let (da, db): (usize, usize) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let index: HashMap<Vec<usize>, usize> = standard
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let d = standard.len();
        let table = standard
            .iter()
            .map(|a| {
                standard
                    .iter()
                    .map(|b| {
                        let p: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        match index.get(&p) {
                            Some(&k) => vec![(k, field.one())],
                            None => Vec::new(),
                        }
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![field.zero(); d];
        unit[0] = field.one();
        let names: Vec<&str> = vars.iter().map(AsRef::as_ref).collect();
        let labels = standard.iter().map(|m| monomial_label(&names, m)).collect();
        Algebra::from_sparse(field, d, table, unit, labels, Origin::Generic)
    }

    /// `A ⊗ B`, basis `a_i ⊗ b_j` at index `i·dim(B) + j`.
    pub fn tensor(&self, other: &Algebra) -> Result<Algebra> {
        self.same_field(other)?;
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut table = vec![vec![Vec::new(); d]; d];
        for i in 0..da {
            for j in 0..db {
                for k in 0..da {
                    for l in 0..db {
                        let mut v = Vec::new();
                        for (x, c) in &self.table[i][k] {
                            for (y, e) in &other.table[j][l] {
                                v.push((x * db + y, c * e));
                            }
                        }
                        table[i * db + j][k * db + l] = normalize_sparse(v);
                    }
                }
            }
        }
        let unit = (0..d)
            .map(|t| &self.unit[t / db] * &other.unit[t % db])
            .collect();
        let labels = (0..d)
            .map(|t| format!("{}⊗{}", self.labels[t / db], other.labels[t % db]))
            .collect();
        Algebra::from_sparse(self.field, d, table, unit, labels, Origin::Generic)
    }

    /// `A ⊕ B` with componentwise product and unit `(1, 1)`.
    pub fn direct_sum(&self, other: &Algebra) -> Result<Algebra> {
        self.same_field(other)?;
        let (da, db) = (self.dim, other.dim);
        let d = da + db;
        let mut table = vec![vec![Vec::new(); d]; d];
        for i in 0..da {
            for j in 0..da {
                table[i][j] = self.table[i][j].clone();
            }
        }
        for i in 0..db {
            for j in 0..db {
                table[da + i][da + j] = other.table[i][j]
                    .iter()
                    .map(|(k, c)| (da + k, c.clone()))
                    .collect();
            }
        }
        let unit = self.unit.iter().chain(&other.unit).cloned().collect();
        let labels = self
            .labels
            .iter()
            .map(|l| format!("({l},0)"))
            .chain(other.labels.iter().map(|l| format!("(0,{l})")))
            .collect();
        Algebra::from_sparse(self.field, d, table, unit, labels, Origin::Generic)
    }

    /// Same space, product `a ∘ b = b a`.
    pub fn opposite(&self) -> Algebra {
        let d = self.dim;
        let table = (0..d)
            .map(|i| (0..d).map(|j| self.table[j][i].clone()).collect())
            .collect();
        Algebra {
            field: self.field,
            dim: d,
            table,
            unit: self.unit.clone(),
            labels: self.labels.clone(),
            origin: Origin::Generic,
        }
    }

    /// Re-expresses the algebra in the basis given by the columns of `change`
    /// (new basis vectors in old coordinates).
    pub fn apply_basis_change(&self, change: &Matrix) -> Result<Algebra> {
        let d = self.dim;
        if change.nrows() != d || change.ncols() != d {
            return Err(Error::Dimension(format!("basis change must be {d}x{d}")));
        }
        if change.field() != self.field {
            return Err(Error::FieldMismatch(self.field, change.field()));
        }
        let inv = change.inverse()?;
        let cols: Vec<Vec<Scalar>> = (0..d).map(|j| change.column(j)).collect();
        let mut table = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul(&cols[i], &cols[j]);
                table[i][j] = to_sparse(&inv.mul_vec(&prod));
            }
        }
        let unit = inv.mul_vec(&self.unit);
        Algebra::from_sparse(self.field, d, table, unit, default_labels(d), Origin::Generic)
    }

    fn same_field(&self, other: &Algebra) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn group_table(&self) -> Option<&GroupTable> {
        match &self.origin {
            Origin::Group(g) => Some(g),
            _ => None,
        }
    }

    pub fn poset_layout(&self) -> Option<&PosetLayout> {
        match &self.origin {
            Origin::Poset(p) => Some(p),
            _ => None,
        }
    }

    /// Renders a vector in this basis, e.g. `2*x + y`.
    pub fn format_element(&self, v: &[Scalar]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.is_one() {
                    self.labels[i].clone()
                } else {
                    format!("{c}*{}", self.labels[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra of dimension {} over {}", self.dim, self.field)
    }
}

fn default_labels(d: usize) -> Vec<String> {
    (0..d).map(|i| format!("b{i}")).collect()
}

fn monomial_label(vars: &[&str], exps: &[usize]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
