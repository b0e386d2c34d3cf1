//! Bimodules over an [`Algebra`] given by action matrices.
//!
//! Duals are taken in the coordinate dual basis and every derived action is a
//! literal transpose, so all structure stays matrix-checkable.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exact::{Matrix, Scalar};

/// How a bimodule relates to the regular bimodule of its own base algebra.
/// `op` preserves the kind (`op(A)` is the regular bimodule of `A^op`) while
/// `dual` swaps regular and dual-op.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Regular,
    /// Functionals with `(a·f·b)(x) = f(b x a)`.
    DualOp,
    Custom,
}

impl ModuleKind {
    fn dualized(self) -> ModuleKind {
        match self {
            ModuleKind::Regular => ModuleKind::DualOp,
            ModuleKind::DualOp => ModuleKind::Regular,
            ModuleKind::Custom => ModuleKind::Custom,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Bimodule {
    algebra: Arc<Algebra>,
    dim: usize,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    kind: ModuleKind,
}

/// Which relation of a bimodule morphism failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismFailure {
    Left(usize),
    Right(usize),
}

impl Bimodule {
    /// Validated constructor from action matrices of the basis elements.
    pub fn new(algebra: Arc<Algebra>, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Bimodule> {
        let d = algebra.dim();
        if left.len() != d || right.len() != d {
            return Err(Error::BimoduleAxiom(format!(
                "expected {d} left and right action matrices"
            )));
        }
        let m = left.first().map_or(0, Matrix::nrows);
        for a in left.iter().chain(&right) {
            if a.nrows() != m || a.ncols() != m {
                return Err(Error::BimoduleAxiom("action matrices must be square of equal size".into()));
            }
            if a.field() != algebra.field() {
                return Err(Error::FieldMismatch(algebra.field(), a.field()));
            }
        }
        let b = Bimodule {
            algebra,
            dim: m,
            left,
            right,
            kind: ModuleKind::Custom,
        };
        b.validate()?;
        Ok(b)
    }

    /// Checks the module axioms: `L` multiplicative, `R` antimultiplicative,
    /// left and right actions commute, and the unit acts trivially.
    pub fn validate(&self) -> Result<()> {
        let a = &*self.algebra;
        let d = a.dim();
        let f = a.field();
        let combo = |mats: &[Matrix], coeffs: &[(usize, Scalar)]| {
            let mut acc = Matrix::zeros(f, self.dim, self.dim);
            for (k, c) in coeffs {
                acc = acc.combine(c, &mats[*k]).expect("shapes");
            }
            acc
        };
        for i in 0..d {
            for j in 0..d {
                let p = a.product(i, j);
                let ll = self.left[i].mul(&self.left[j])?;
                if ll != combo(&self.left, p) {
                    return Err(Error::BimoduleAxiom(format!(
                        "left action is not multiplicative at ({i},{j})"
                    )));
                }
                let rr = self.right[j].mul(&self.right[i])?;
                if rr != combo(&self.right, p) {
                    return Err(Error::BimoduleAxiom(format!(
                        "right action is not multiplicative at ({i},{j})"
                    )));
                }
                if self.left[i].mul(&self.right[j])? != self.right[j].mul(&self.left[i])? {
                    return Err(Error::BimoduleAxiom(format!(
                        "left and right actions do not commute at ({i},{j})"
                    )));
                }
            }
        }
        let unit = crate::exact::to_sparse(a.unit());
        let id = Matrix::identity(f, self.dim);
        if combo(&self.left, &unit) != id {
            return Err(Error::BimoduleAxiom("unit does not act as identity on the left".into()));
        }
        if combo(&self.right, &unit) != id {
            return Err(Error::BimoduleAxiom("unit does not act as identity on the right".into()));
        }
        Ok(())
    }

    /// `A` as a bimodule over itself.
    pub fn regular(algebra: Arc<Algebra>) -> Bimodule {
        let d = algebra.dim();
        let left = (0..d).map(|i| algebra.left_matrix(i)).collect();
        let right = (0..d).map(|i| algebra.right_matrix(i)).collect();
        Bimodule {
            dim: d,
            algebra,
            left,
            right,
            kind: ModuleKind::Regular,
        }
    }

    /// Coordinate dual `Hom(M, k)` as a bimodule over `A^op`: the left action of
    /// `eᵢ` is `Lᵢᵀ` and the right action `Rᵢᵀ`.
    pub fn dual(&self) -> Bimodule {
        Bimodule {
            algebra: Arc::new(self.algebra.opposite()),
            dim: self.dim,
            left: self.left.iter().map(Matrix::transpose).collect(),
            right: self.right.iter().map(Matrix::transpose).collect(),
            kind: self.kind.dualized(),
        }
    }

    /// Same space with left and right actions swapped, over `A^op`.
    pub fn op(&self) -> Bimodule {
        Bimodule {
            algebra: Arc::new(self.algebra.opposite()),
            dim: self.dim,
            left: self.right.clone(),
            right: self.left.clone(),
            kind: self.kind,
        }
    }

    /// `op(dual(A))` over `A` itself: left action `Rᵢᵀ`, right action `Lᵢᵀ`.
    pub fn dual_op(algebra: Arc<Algebra>) -> Bimodule {
        let d = algebra.dim();
        let left = (0..d).map(|i| algebra.right_matrix(i).transpose()).collect();
        let right = (0..d).map(|i| algebra.left_matrix(i).transpose()).collect();
        Bimodule {
            dim: d,
            algebra,
            left,
            right,
            kind: ModuleKind::DualOp,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn left(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    /// Left action of an arbitrary element `Σ xᵢ eᵢ`.
    pub fn left_of(&self, x: &[Scalar]) -> Matrix {
        self.action_of(&self.left, x)
    }

    pub fn right_of(&self, x: &[Scalar]) -> Matrix {
        self.action_of(&self.right, x)
    }

    fn action_of(&self, mats: &[Matrix], x: &[Scalar]) -> Matrix {
        let mut acc = Matrix::zeros(self.algebra.field(), self.dim, self.dim);
        for (c, m) in x.iter().zip(mats) {
            if !c.is_zero() {
                acc = acc.combine(c, m).expect("shapes");
            }
        }
        acc
    }

    /// Whether this bimodule is over (an algebra equal to) `a`.
    pub fn is_over(&self, a: &Algebra) -> bool {
        *self.algebra == *a
    }

    /// Same actions with equal matrices (kind and algebra labels ignored).
    pub fn same_actions(&self, other: &Bimodule) -> bool {
        self.left == other.left && self.right == other.right
    }
}

/// Checks `t Lᵢ⁽¹⁾ = Lᵢ⁽²⁾ t` and `t Rᵢ⁽¹⁾ = Rᵢ⁽²⁾ t` for every basis element,
/// returning the first failure.
pub fn check_bimodule_morphism(
    m1: &Bimodule,
    m2: &Bimodule,
    t: &Matrix,
) -> Result<Option<MorphismFailure>> {
    if *m1.algebra != *m2.algebra {
        return Err(Error::BaseAlgebraMismatch);
    }
    if t.nrows() != m2.dim || t.ncols() != m1.dim {
        return Err(Error::Dimension(format!(
            "morphism must be {}x{}, got {}x{}",
            m2.dim,
            m1.dim,
            t.nrows(),
            t.ncols()
        )));
    }
    for i in 0..m1.algebra.dim() {
        if t.mul(&m1.left[i])? != m2.left[i].mul(t)? {
            return Ok(Some(MorphismFailure::Left(i)));
        }
        if t.mul(&m1.right[i])? != m2.right[i].mul(t)? {
            return Ok(Some(MorphismFailure::Right(i)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupTable;
    use crate::exact::Field;
    use crate::poset::Poset;

    const Q: Field = Field::Rational;

    fn chain() -> Arc<Algebra> {
        Arc::new(Algebra::poset(&Poset::chain(2), Q))
    }

    #[test]
    fn regular_of_field() {
        let m = Bimodule::regular(Arc::new(Algebra::ground(Q)));
        assert_eq!(m.left(0), &Matrix::identity(Q, 1));
        assert_eq!(m.right(0), &Matrix::identity(Q, 1));
        m.validate().unwrap();
        Bimodule::dual_op(Arc::new(Algebra::ground(Q))).validate().unwrap();
    }

    #[test]
    fn chain_regular_left_action() {
        let m = Bimodule::regular(chain());
        // e00 fixes e01 and kills e11
        assert_eq!(m.left(0).column(1), vec![Q.zero(), Q.one(), Q.zero()]);
        assert!(m.left(0).column(2).iter().all(Scalar::is_zero));
    }

    #[test]
    fn all_derived_modules_validate() {
        let a = chain();
        let reg = Bimodule::regular(a.clone());
        for m in [reg.dual(), reg.op(), Bimodule::dual_op(a.clone()), reg.dual().op()] {
            m.validate().unwrap();
        }
        assert!(Bimodule::dual_op(a.clone()).same_actions(&reg.dual().op()));
        assert_eq!(reg.dual().op().kind(), ModuleKind::DualOp);
        assert_eq!(reg.op().dual().kind(), ModuleKind::DualOp);
        assert_eq!(reg.op().kind(), ModuleKind::Regular);
        let op_alg = Arc::new(a.opposite());
        assert!(reg.op().same_actions(&Bimodule::regular(op_alg.clone())));
        assert!(reg.dual().same_actions(&Bimodule::dual_op(op_alg)));
        assert!(reg.op().op().same_actions(&reg));
        assert!(reg.dual().dual().same_actions(&reg));
        assert!(!reg.op().same_actions(&reg));
    }

    #[test]
    fn transposed_actions_are_not_a_module_over_the_same_algebra() {
        // left Lᵀ, right Rᵀ over A itself fails for noncommutative A
        let a = chain();
        let d = a.dim();
        let left = (0..d).map(|i| a.left_matrix(i).transpose()).collect();
        let right = (0..d).map(|i| a.right_matrix(i).transpose()).collect();
        assert!(matches!(
            Bimodule::new(a, left, right),
            Err(Error::BimoduleAxiom(_))
        ));
    }

    #[test]
    fn dual_action_on_chain() {
        // (f·b)(x) = f(b x) in the dual-op module: e*_{01} · e_{00} = e*_{01}
        let a = chain();
        let m = Bimodule::dual_op(a.clone());
        let e01_star = vec![Q.zero(), Q.one(), Q.zero()];
        assert_eq!(m.right(0).mul_vec(&e01_star), e01_star);
        assert!(m.right(2).mul_vec(&e01_star).iter().all(Scalar::is_zero));
    }

    #[test]
    fn commutative_dual_op_is_transposed_multiplication() {
        let a = Arc::new(Algebra::truncated_poly(2, Q));
        let m = Bimodule::dual_op(a.clone());
        for i in 0..3 {
            assert_eq!(m.left(i), &a.left_matrix(i).transpose());
        }
        let reg = Bimodule::regular(a);
        assert!(reg.op().same_actions(&reg));
    }

    #[test]
    fn group_algebra_self_duality_map() {
        let a = Arc::new(Algebra::group(GroupTable::cyclic(2), Q, None).unwrap());
        let reg = Bimodule::regular(a.clone());
        let dop = Bimodule::dual_op(a.clone());
        // g ↦ (g⁻¹)*; in C₂ every element is its own inverse
        let g = a.group_table().unwrap().clone();
        let t = Matrix::from_fn(Q, 2, 2, |i, j| {
            if i == g.inverse[j] { Q.one() } else { Q.zero() }
        });
        assert_eq!(check_bimodule_morphism(&reg, &dop, &t).unwrap(), None);
        assert!(t.is_invertible());
        let id = Matrix::identity(Q, 2);
        assert_eq!(check_bimodule_morphism(&reg, &reg, &id).unwrap(), None);
        let z = Matrix::zeros(Q, 2, 2);
        assert_eq!(check_bimodule_morphism(&reg, &dop, &z).unwrap(), None);
    }

    #[test]
    fn morphism_failure_and_mismatch() {
        let a = chain();
        let reg = Bimodule::regular(a.clone());
        let swap = Matrix::from_i64(Q, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        assert!(check_bimodule_morphism(&reg, &reg, &swap).unwrap().is_some());
        let other = Bimodule::regular(Arc::new(Algebra::truncated_poly(2, Q)));
        assert_eq!(
            check_bimodule_morphism(&reg, &other, &swap),
            Err(Error::BaseAlgebraMismatch)
        );
        assert!(check_bimodule_morphism(&reg, &reg, &Matrix::identity(Q, 2)).is_err());
    }
}
