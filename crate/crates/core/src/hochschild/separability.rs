use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparabilityFailure {
    /// `μ(e) ≠ 1`.
    Multiplication,
    /// `s·e ≠ e·s` for the basis element `s`.
    NotCentral(usize),
}

/// Checks that `e = Σ e[i·d + j] bᵢ⊗bⱼ` satisfies `μ(e) = 1` and `s·e = e·s`
/// for every basis element `s`, where `s·(x⊗y) = sx⊗y` and `(x⊗y)·s = x⊗ys`.
pub fn check_separability_idempotent(
    algebra: &Algebra,
    e: &[Scalar],
) -> Result<Option<SeparabilityFailure>> {
    let d = algebra.dim();
    if e.len() != d * d {
        return Err(Error::Dimension(format!(
            "tensor square has dimension {}, got {}",
            d * d,
            e.len()
        )));
    }
    let field = algebra.field();
    let mut mu = vec![field.zero(); d];
    for i in 0..d {
        for j in 0..d {
            let c = &e[i * d + j];
            if c.is_zero() {
                continue;
            }
            for (k, v) in algebra.product(i, j) {
                mu[*k] += &(c * v);
            }
        }
    }
    if mu != algebra.unit() {
        return Ok(Some(SeparabilityFailure::Multiplication));
    }
    for s in 0..d {
        let mut left = vec![field.zero(); d * d];
        let mut right = vec![field.zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let c = &e[i * d + j];
                if c.is_zero() {
                    continue;
                }
                for (k, v) in algebra.product(s, i) {
                    left[k * d + j] += &(c * v);
                }
                for (k, v) in algebra.product(j, s) {
                    right[i * d + k] += &(c * v);
                }
            }
        }
        if left != right {
            return Ok(Some(SeparabilityFailure::NotCentral(s)));
        }
    }
    Ok(None)
}

/// Ranks and checks for the periodic resolution
/// `… → A --·tⁿ--> A --·t--> A --ε--> k` of `k` over `A = k[t]/t^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionCheck {
    /// Ranks of `∂_1, …, ∂_length` (`∂_i` is `·t` for odd `i`, `·tⁿ` for even).
    pub ranks: Vec<usize>,
    pub augmentation_vanishes: bool,
    pub compositions_vanish: bool,
    pub exact: bool,
}

impl ResolutionCheck {
    pub fn passes(&self) -> bool {
        self.augmentation_vanishes && self.compositions_vanish && self.exact
    }
}

pub fn periodic_resolution_check(n: usize, field: Field, length: usize) -> Result<ResolutionCheck> {
    if length < 2 {
        return Err(Error::Unsupported("resolution length must be at least 2".into()));
    }
    let a = Algebra::truncated_poly(n, field);
    let d = n + 1;
    let by_t = if n == 0 { Matrix::zeros(field, 1, 1) } else { a.left_matrix(1) };
    let by_tn = a.left_matrix(n);
    let boundary = |i: usize| if i % 2 == 1 { &by_t } else { &by_tn };
    let eps = Matrix::from_fn(field, 1, d, |_, j| if j == 0 { field.one() } else { field.zero() });

    let ranks: Vec<usize> = (1..=length).map(|i| boundary(i).rank()).collect();
    let augmentation_vanishes = eps.mul(boundary(1))?.is_zero();
    let mut compositions_vanish = true;
    for i in 1..length {
        compositions_vanish &= boundary(i).mul(boundary(i + 1))?.is_zero();
    }
    // exact at the first A: ker ε = im ∂_1; at later terms: ker ∂_i = im ∂_{i+1}
    let mut exact = eps.rank() + ranks[0] == d;
    for i in 1..length {
        exact &= ranks[i - 1] + ranks[i] == d;
    }
    Ok(ResolutionCheck {
        ranks,
        augmentation_vanishes,
        compositions_vanish,
        exact,
    })
}
