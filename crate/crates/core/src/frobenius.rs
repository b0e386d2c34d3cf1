//! Bilinear forms on algebras: the dualizing conditions
//! `⟨ac,b⟩ = ⟨a,cb⟩`, `⟨ca,b⟩ = ⟨a,bc⟩`, self-duality, and the Frobenius
//! functional `f(a) = ⟨a,1⟩`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bimodule::{check_bimodule_morphism, Bimodule};
use crate::error::{Error, Result};
use crate::exact::{generic_nondegenerate, Matrix, Scalar, SearchStrategy};
use crate::hochschild::{cohomology_dims, ModelKind};

/// Which half of the dualizing conditions fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualizingFailure {
    /// `⟨e_a e_c, e_b⟩ ≠ ⟨e_a, e_c e_b⟩`.
    Inner { a: usize, b: usize, c: usize },
    /// `⟨e_c e_a, e_b⟩ ≠ ⟨e_a, e_b e_c⟩`.
    Outer { a: usize, b: usize, c: usize },
}

/// `G[i][j] = ⟨eᵢ, eⱼ⟩` on the basis of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    algebra: Arc<Algebra>,
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(algebra: Arc<Algebra>, gram: Matrix) -> Result<BilinearForm> {
        let d = algebra.dim();
        if gram.nrows() != d || gram.ncols() != d {
            return Err(Error::Dimension(format!(
                "Gram matrix must be {d}x{d}, got {}x{}",
                gram.nrows(),
                gram.ncols()
            )));
        }
        if gram.field() != algebra.field() {
            return Err(Error::FieldMismatch(algebra.field(), gram.field()));
        }
        Ok(BilinearForm { algebra, gram })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let gy = self.gram.mul_vec(y);
        x.iter()
            .zip(&gy)
            .fold(self.algebra.field().zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn is_symmetric(&self) -> bool {
        self.gram == self.gram.transpose()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.is_invertible()
    }

    /// `f(eᵢ) = ⟨eᵢ, 1⟩`.
    pub fn functional(&self) -> Vec<Scalar> {
        self.gram.mul_vec(self.algebra.unit())
    }

    /// First basis triple violating the dualizing conditions.
    pub fn dualizing_failure(&self) -> Option<DualizingFailure> {
        let d = self.algebra.dim();
        for c in 0..d {
            let l = self.algebra.left_matrix(c);
            let r = self.algebra.right_matrix(c);
            // Rcᵀ G = G Lc and Lcᵀ G = G Rc
            let inner = (r.transpose().mul(&self.gram).ok()?, self.gram.mul(&l).ok()?);
            let outer = (l.transpose().mul(&self.gram).ok()?, self.gram.mul(&r).ok()?);
            for a in 0..d {
                for b in 0..d {
                    if inner.0.get(a, b) != inner.1.get(a, b) {
                        return Some(DualizingFailure::Inner { a, b, c });
                    }
                    if outer.0.get(a, b) != outer.1.get(a, b) {
                        return Some(DualizingFailure::Outer { a, b, c });
                    }
                }
            }
        }
        None
    }

    pub fn satisfies_dualizing_conditions(&self) -> bool {
        self.dualizing_failure().is_none()
    }

    /// Both conditions and an invertible Gram matrix.
    pub fn is_dualizing(&self) -> bool {
        self.satisfies_dualizing_conditions() && self.is_nondegenerate()
    }

    /// Matrix of `ρ(m) = ⟨m, −⟩` from `A` to its dual in the dual basis, which
    /// is `Gᵀ`.
    pub fn induced_map(&self) -> Matrix {
        self.gram.transpose()
    }

    /// Whether `ρ` is a bimodule morphism `A → A^{∨op}`.
    pub fn induced_map_is_morphism(&self) -> Result<bool> {
        let reg = Bimodule::regular(self.algebra.clone());
        let dual = Bimodule::dual_op(self.algebra.clone());
        Ok(check_bimodule_morphism(&reg, &dual, &self.induced_map())?.is_none())
    }

    /// `⟨a⊗b, a′⊗b′⟩ = ⟨a,a′⟩⟨b,b′⟩` on the tensor product algebra.
    pub fn tensor(&self, other: &BilinearForm) -> Result<BilinearForm> {
        let algebra = Arc::new(self.algebra.tensor(&other.algebra)?);
        let (d1, d2) = (self.algebra.dim(), other.algebra.dim());
        let field = algebra.field();
        let (g, h) = (self.gram.to_dense(), other.gram.to_dense());
        let gram = Matrix::from_fn(field, d1 * d2, d1 * d2, |r, c| {
            &g[r / d2][c / d2] * &h[r % d2][c % d2]
        });
        BilinearForm::new(algebra, gram)
    }
}

/// Basis of the space of Gram matrices satisfying both dualizing conditions.
pub fn dualizing_space(algebra: &Algebra) -> Vec<Matrix> {
    let d = algebra.dim();
    let field = algebra.field();
    let var = |i: usize, j: usize| i * d + j;
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for c in 0..d {
        let l = algebra.left_matrix(c).to_dense();
        let r = algebra.right_matrix(c).to_dense();
        for a in 0..d {
            for b in 0..d {
                // Σk Rc[k][a] G[k][b] − Σk G[a][k] Lc[k][b]
                let mut inner = Vec::new();
                // Σk Lc[k][a] G[k][b] − Σk G[a][k] Rc[k][b]
                let mut outer = Vec::new();
                for k in 0..d {
                    if !r[k][a].is_zero() {
                        inner.push((var(k, b), r[k][a].clone()));
                    }
                    if !l[k][b].is_zero() {
                        inner.push((var(a, k), -l[k][b].clone()));
                    }
                    if !l[k][a].is_zero() {
                        outer.push((var(k, b), l[k][a].clone()));
                    }
                    if !r[k][b].is_zero() {
                        outer.push((var(a, k), -r[k][b].clone()));
                    }
                }
                rows.push(inner);
                rows.push(outer);
            }
        }
    }
    let system = Matrix::from_sparse_rows(field, d * d, rows);
    system
        .kernel_basis()
        .into_iter()
        .map(|v| Matrix::from_fn(field, d, d, |i, j| v[var(i, j)].clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualWitness {
    pub form: BilinearForm,
    /// Coefficients of the form in the basis returned by [`dualizing_space`].
    pub coefficients: Vec<Scalar>,
    /// `ρ` passed the bimodule-morphism check.
    pub morphism_verified: bool,
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualSearch {
    pub space_dim: usize,
    pub strategy: SearchStrategy,
    pub evaluations: u64,
    pub witness: Option<SelfDualWitness>,
}

/// Solves the dualizing system and looks for an invertible solution.
pub fn self_dual_witness(algebra: &Arc<Algebra>) -> Result<SelfDualSearch> {
    let space = dualizing_space(algebra);
    let search = generic_nondegenerate(algebra.field(), algebra.dim(), &space)?;
    let witness = match search.witness {
        None => None,
        Some(w) => {
            let form = BilinearForm::new(algebra.clone(), w.matrix)?;
            let morphism_verified = form.induced_map_is_morphism()?;
            let invertible = form.induced_map().is_invertible();
            Some(SelfDualWitness {
                form,
                coefficients: w.coefficients,
                morphism_verified,
                invertible,
            })
        }
    };
    Ok(SelfDualSearch {
        space_dim: space.len(),
        strategy: search.strategy,
        evaluations: search.evaluations,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub search: SelfDualSearch,
    /// Every basis form of the dualizing space is symmetric.
    pub space_symmetric: bool,
    pub witness_symmetric: Option<bool>,
    /// `f(eᵢ) = ⟨eᵢ, 1⟩` for the witness.
    pub functional: Option<Vec<Scalar>>,
    /// `⟨a,b⟩ = f(ab)` on all basis pairs.
    pub form_from_functional: Option<bool>,
}

impl FrobeniusReport {
    /// Self-dual, equivalently symmetric Frobenius.
    pub fn is_symmetric_frobenius(&self) -> bool {
        self.search.witness.is_some()
    }

    /// All recorded checks on the witness hold (vacuous without one).
    pub fn consistent(&self) -> bool {
        match &self.search.witness {
            None => true,
            Some(w) => {
                w.morphism_verified
                    && w.invertible
                    && w.form.satisfies_dualizing_conditions()
                    && self.witness_symmetric == Some(true)
                    && self.form_from_functional == Some(true)
            }
        }
    }
}

pub fn is_symmetric_frobenius(algebra: &Arc<Algebra>) -> Result<FrobeniusReport> {
    let space = dualizing_space(algebra);
    let space_symmetric = space.iter().all(|g| *g == g.transpose());
    let search = self_dual_witness(algebra)?;
    let (witness_symmetric, functional, form_from_functional) = match &search.witness {
        None => (None, None, None),
        Some(w) => {
            let f = w.form.functional();
            let d = algebra.dim();
            let mut ok = true;
            'outer: for i in 0..d {
                for j in 0..d {
                    let fab = algebra
                        .product(i, j)
                        .iter()
                        .fold(algebra.field().zero(), |acc, (k, c)| acc + c * &f[*k]);
                    if fab != w.form.gram().get(i, j) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            (Some(w.form.is_symmetric()), Some(f), Some(ok))
        }
    };
    Ok(FrobeniusReport {
        search,
        space_symmetric,
        witness_symmetric,
        functional,
        form_from_functional,
    })
}

/// `⟨g, h⟩ = 1` if `gh = 1` and 0 otherwise.
pub fn group_ring_form(algebra: &Arc<Algebra>) -> Result<BilinearForm> {
    let table = algebra.group_table().ok_or(Error::NotGroupAlgebra)?;
    let field = algebra.field();
    let n = table.order();
    let gram = Matrix::from_fn(field, n, n, |g, h| {
        if table.table[g][h] == table.identity {
            field.one()
        } else {
            field.zero()
        }
    });
    BilinearForm::new(algebra.clone(), gram)
}

/// `⟨tⁱ, tʲ⟩ = 1` if `i + j = n`, on `k[t]/t^{n+1}`.
pub fn truncated_poly_form(algebra: &Arc<Algebra>, n: usize) -> Result<BilinearForm> {
    if algebra.dim() != n + 1 {
        return Err(Error::Dimension(format!(
            "k[t]/t^{} has dimension {}, got {}",
            n + 1,
            n + 1,
            algebra.dim()
        )));
    }
    let field = algebra.field();
    let gram = Matrix::from_fn(field, n + 1, n + 1, |i, j| {
        if i + j == n {
            field.one()
        } else {
            field.zero()
        }
    });
    BilinearForm::new(algebra.clone(), gram)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvolutionCheck {
    /// `⟨σa, σb⟩ = ⟨a, b⟩`.
    pub invariant: bool,
    pub symmetric: bool,
}

/// Checks `σ² = 1` and `σ(xy) = σ(y)σ(x)` (errors otherwise), then whether the
/// form is `σ`-invariant. An invariant dualizing form on a unital algebra is
/// symmetric, since `⟨a,b⟩ = f(ab) = f(σb σa) = ⟨σb, σa⟩ = ⟨b, a⟩`.
pub fn check_involution_invariance(form: &BilinearForm, sigma: &Matrix) -> Result<InvolutionCheck> {
    let algebra = form.algebra();
    let d = algebra.dim();
    let field = algebra.field();
    if sigma.nrows() != d || sigma.ncols() != d {
        return Err(Error::Dimension(format!(
            "involution must be {d}x{d}, got {}x{}",
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    if sigma.mul(sigma)? != Matrix::identity(field, d) {
        return Err(Error::Involution("σ² is not the identity".into()));
    }
    let images: Vec<Vec<Scalar>> = (0..d).map(|i| sigma.column(i)).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = sigma.mul_vec(&algebra.mul(&algebra.basis_vector(i), &algebra.basis_vector(j)));
            if lhs != algebra.mul(&images[j], &images[i]) {
                return Err(Error::Involution(format!(
                    "σ(e{i}e{j}) ≠ σ(e{j})σ(e{i})"
                )));
            }
        }
    }
    let moved = sigma.transpose().mul(form.gram())?.mul(sigma)?;
    Ok(InvolutionCheck {
        invariant: moved == *form.gram(),
        symmetric: form.is_symmetric(),
    })
}

/// Dimensions of `Hⁿ(A, A)` and `Hⁿ(A, A^{∨op})` for `n ≤ max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiSelfDuality {
    pub max_degree: usize,
    pub regular: Vec<usize>,
    pub dual_op: Vec<usize>,
}

impl QuasiSelfDuality {
    /// Dimensions agree in every computed degree (says nothing beyond them).
    pub fn agrees(&self) -> bool {
        self.regular == self.dual_op
    }
}

impl fmt::Display for QuasiSelfDuality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.agrees() {
            write!(f, "dimensions agree, verified up to degree {}", self.max_degree)
        } else {
            let n = (0..=self.max_degree)
                .find(|&n| self.regular[n] != self.dual_op[n])
                .expect("some degree differs");
            write!(
                f,
                "dimensions differ in degree {n} ({} vs {})",
                self.regular[n], self.dual_op[n]
            )
        }
    }
}

pub fn quasi_self_duality(algebra: &Arc<Algebra>, max_degree: usize, kind: ModelKind) -> Result<QuasiSelfDuality> {
    let reg = Arc::new(Bimodule::regular(algebra.clone()));
    let dual = Arc::new(Bimodule::dual_op(algebra.clone()));
    Ok(QuasiSelfDuality {
        max_degree,
        regular: cohomology_dims(algebra.clone(), reg, max_degree, kind.clone())?,
        dual_op: cohomology_dims(algebra.clone(), dual, max_degree, kind)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupTable;
    use crate::exact::Field;

    const Q: Field = Field::Rational;

    fn arc(a: Algebra) -> Arc<Algebra> {
        Arc::new(a)
    }

    #[test]
    fn ground_field_space() {
        let space = dualizing_space(&Algebra::ground(Q));
        assert_eq!(space.len(), 1);
    }

    #[test]
    fn truncated_poly_space_contains_antidiagonal() {
        let a = arc(Algebra::truncated_poly(2, Q));
        let space = dualizing_space(&a);
        let g = truncated_poly_form(&a, 2).unwrap();
        assert!(g.is_dualizing());
        // k[t]/t³: forms are functions of i+j, one free value per degree
        assert_eq!(space.len(), 3);
        let mut cols: Vec<Vec<Scalar>> = space.iter().map(flatten).collect();
        let before = Matrix::from_columns(Q, 9, &cols).rank();
        cols.push(flatten(g.gram()));
        assert_eq!(Matrix::from_columns(Q, 9, &cols).rank(), before);
    }

    fn flatten(m: &Matrix) -> Vec<Scalar> {
        m.to_dense().into_iter().flatten().collect()
    }

    #[test]
    fn matrix_algebra_trace_form() {
        let a = Algebra::matrix_algebra(Q, 2);
        let space = dualizing_space(&a);
        assert_eq!(space.len(), 1);
        // tr(e_ij e_kl) = [j = k][i = l], with e_ij at index 2i + j
        let trace = Matrix::from_fn(Q, 4, 4, |r, c| {
            let (i, j, k, l) = (r / 2, r % 2, c / 2, c % 2);
            if j == k && i == l {
                Q.one()
            } else {
                Q.zero()
            }
        });
        let g = &space[0];
        let s = g.get(0, 0);
        assert!(!s.is_zero());
        assert_eq!(*g, trace.scale(&s));
    }

    #[test]
    fn counterexample_has_no_witness() {
        let a = arc(Algebra::monomial_quotient(Q, &["x", "y"], &[vec![2, 0], vec![0, 2], vec![1, 1]], 4).unwrap());
        let r = is_symmetric_frobenius(&a).unwrap();
        assert!(!r.is_symmetric_frobenius());
        assert!(r.functional.is_none());
        assert!(r.space_symmetric);
    }

    #[test]
    fn group_rings() {
        let c2 = arc(Algebra::group(GroupTable::cyclic(2), Q, None).unwrap());
        let w = self_dual_witness(&c2).unwrap().witness.unwrap();
        assert!(w.morphism_verified && w.invertible);
        let g = group_ring_form(&c2).unwrap();
        assert_eq!(*g.gram(), Matrix::identity(Q, 2));
        let c3 = arc(Algebra::group(GroupTable::cyclic(3), Q, None).unwrap());
        let g = group_ring_form(&c3).unwrap();
        assert_eq!(*g.gram(), Matrix::from_i64(Q, &[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]));
        assert!(g.is_dualizing());
        let s3 = arc(Algebra::group(GroupTable::symmetric(3), Q, None).unwrap());
        let g = group_ring_form(&s3).unwrap();
        assert!(g.is_dualizing());
        let t = s3.group_table().unwrap();
        for x in 0..6 {
            assert_eq!(g.gram().get(x, t.inverse[x]), Q.one());
        }
        assert_eq!(group_ring_form(&arc(Algebra::truncated_poly(1, Q))), Err(Error::NotGroupAlgebra));
        let r = is_symmetric_frobenius(&s3).unwrap();
        assert!(r.is_symmetric_frobenius() && r.consistent());
    }

    #[test]
    fn involutions() {
        let s3 = arc(Algebra::group(GroupTable::symmetric(3), Q, None).unwrap());
        let t = s3.group_table().unwrap().clone();
        let sigma = Matrix::from_fn(Q, 6, 6, |r, c| if t.inverse[c] == r { Q.one() } else { Q.zero() });
        let g = group_ring_form(&s3).unwrap();
        let check = check_involution_invariance(&g, &sigma).unwrap();
        assert!(check.invariant && check.symmetric);

        let a = arc(Algebra::truncated_poly(3, Q));
        let g = truncated_poly_form(&a, 3).unwrap();
        let id = Matrix::identity(Q, 4);
        assert!(check_involution_invariance(&g, &id).unwrap().invariant);

        // a permutation of order 3 on the group basis
        let cyc = Matrix::from_fn(Q, 3, 3, |r, c| if r == (c + 1) % 3 { Q.one() } else { Q.zero() });
        let c3 = arc(Algebra::group(GroupTable::cyclic(3), Q, None).unwrap());
        let g = group_ring_form(&c3).unwrap();
        assert!(matches!(check_involution_invariance(&g, &cyc), Err(Error::Involution(_))));
        // t ↦ −t on k[t]/t⁴ is an automorphism of order 2, and invariance fails
        let neg = Matrix::from_fn(Q, 4, 4, |r, c| {
            if r != c {
                Q.zero()
            } else if r % 2 == 0 {
                Q.one()
            } else {
                -Q.one()
            }
        });
        let g = truncated_poly_form(&a, 3).unwrap();
        assert!(!check_involution_invariance(&g, &neg).unwrap().invariant);
    }

    #[test]
    fn tensor_closure() {
        let a = arc(Algebra::truncated_poly(1, Q));
        let b = arc(Algebra::truncated_poly(2, Q));
        let fa = self_dual_witness(&a).unwrap().witness.unwrap().form;
        let fb = self_dual_witness(&b).unwrap().witness.unwrap().form;
        let t = fa.tensor(&fb).unwrap();
        assert!(t.is_dualizing());
        assert!(t.induced_map_is_morphism().unwrap());
    }

    #[test]
    fn dualizing_failure_is_located() {
        let a = arc(Algebra::truncated_poly(2, Q));
        let g = BilinearForm::new(a, Matrix::identity(Q, 3)).unwrap();
        assert!(g.dualizing_failure().is_some());
        assert!(!g.induced_map_is_morphism().unwrap());
    }

    #[test]
    fn prime_field_uses_exhaustive_search() {
        let a = arc(Algebra::truncated_poly(3, Field::prime(3).unwrap()));
        let s = self_dual_witness(&a).unwrap();
        assert_eq!(s.strategy, SearchStrategy::Exhaustive { p: 3 });
        assert!(s.witness.is_some());
    }

    #[test]
    fn quasi_self_duality_report() {
        let a = arc(Algebra::truncated_poly(2, Q));
        let q = quasi_self_duality(&a, 2, ModelKind::Normalized).unwrap();
        assert!(q.agrees());
        assert_eq!(q.to_string(), "dimensions agree, verified up to degree 2");
    }
}
