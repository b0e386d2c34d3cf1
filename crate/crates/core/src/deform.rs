//! The family `A_ħ = k[t]/(t^{n+1} − ħp(t))` over ℚ with constant-coefficient
//! `p`: structure constants, the deformed Frobenius form, its determinant and
//! the multiplicity partition of `t^{n+1} − ħp(t)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{Algebra, Origin};
use crate::error::{Error, Result};
use crate::exact::{poly_determinant, squarefree_decomposition, Field, Matrix, Poly, Scalar};
use crate::frobenius::BilinearForm;

/// Largest `n` accepted in symbolic mode.
pub const SYMBOLIC_MAX_N: usize = 12;

const Q: Field = Field::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hbar {
    Numeric(Scalar),
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformSpec {
    n: usize,
    p: Vec<Scalar>,
    hbar: Hbar,
}

impl DeformSpec {
    /// `p = a₀ + a₁t + …`; missing top coefficients are zero.
    pub fn new(n: usize, p: Vec<Scalar>, hbar: Hbar) -> Result<DeformSpec> {
        if p.len() > n + 1 {
            return Err(Error::Deform(format!(
                "p has {} coefficients, degree must be at most n = {n}",
                p.len()
            )));
        }
        let rational = |s: &Scalar| s.field() == Q;
        if !p.iter().all(rational) || matches!(&hbar, Hbar::Numeric(h) if !rational(h)) {
            return Err(Error::Deform("coefficients must be rational".into()));
        }
        if hbar == Hbar::Symbolic && n > SYMBOLIC_MAX_N {
            return Err(Error::Deform(format!(
                "symbolic mode supports n ≤ {SYMBOLIC_MAX_N}, got {n}"
            )));
        }
        let mut p = p;
        p.resize(n + 1, Q.zero());
        Ok(DeformSpec { n, p, hbar })
    }

    pub fn from_i64(n: usize, p: &[i64], hbar: Hbar) -> Result<DeformSpec> {
        DeformSpec::new(n, p.iter().map(|&c| Q.from_i64(c)).collect(), hbar)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &[Scalar] {
        &self.p
    }

    pub fn hbar(&self) -> &Hbar {
        &self.hbar
    }

    pub fn with_hbar(&self, hbar: Hbar) -> Result<DeformSpec> {
        DeformSpec::new(self.n, self.p.clone(), hbar)
    }

    fn numeric_hbar(&self, op: &str) -> Result<&Scalar> {
        match &self.hbar {
            Hbar::Numeric(h) => Ok(h),
            Hbar::Symbolic => Err(Error::Deform(format!("{op} needs a numeric ħ"))),
        }
    }

    /// `t^{n+1} − ħp(t)` for numeric ħ.
    pub fn relation(&self) -> Result<Poly> {
        let h = self.numeric_hbar("the defining relation")?;
        let mut c: Vec<Scalar> = self.p.iter().map(|a| -(h * a)).collect();
        c.push(Q.one());
        Ok(Poly::new(Q, c))
    }
}

/// `tⁱ·tʲ = t^{i+j}` reduced by `t^{n+1} = ħp(t)`.
pub fn deformed_algebra(s: &DeformSpec) -> Result<Algebra> {
    let h = s.numeric_hbar("deformed_algebra")?;
    let d = s.n + 1;
    let hp: Vec<Scalar> = s.p.iter().map(|a| h * a).collect();
    // powers[k] = t^k in the basis 1, t, …, tⁿ
    let mut powers: Vec<Vec<Scalar>> = Vec::with_capacity(2 * d - 1);
    for k in 0..2 * d - 1 {
        if k < d {
            let mut v = vec![Q.zero(); d];
            v[k] = Q.one();
            powers.push(v);
            continue;
        }
        let prev = &powers[k - 1];
        let mut v = vec![Q.zero(); d];
        v[1..d].clone_from_slice(&prev[..d - 1]);
        let top = &prev[d - 1];
        if !top.is_zero() {
            for (x, a) in v.iter_mut().zip(&hp) {
                *x += &(top * a);
            }
        }
        powers.push(v);
    }
    let table = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    powers[i + j]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, c.clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let labels = Algebra::truncated_poly(s.n, Q).labels().to_vec();
    Algebra::from_sparse(Q, d, table, powers[0].clone(), labels, Origin::Generic)
}

/// `γ₀…γ₂ₙ` with `γ₀…γₙ = 0,…,0,1` and `γ_{n+m} = ħ Σₖ aₖ γ_{m−1+k}`.
fn gamma<T: Clone>(s: &DeformSpec, zero: T, one: T, step: impl Fn(&[T]) -> T) -> Vec<T> {
    let n = s.n;
    let mut g = vec![zero; n + 1];
    g[n] = one;
    for m in 1..=n {
        let next = step(&g[m - 1..m + n]);
        g.push(next);
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeformedForm {
    Numeric(Matrix),
    /// Entries in ℚ[ħ].
    Symbolic(Vec<Vec<Poly>>),
}

impl DeformedForm {
    /// Substitutes `ħ = q` into a symbolic form.
    pub fn evaluate(&self, q: &Scalar) -> Matrix {
        match self {
            DeformedForm::Numeric(m) => m.clone(),
            DeformedForm::Symbolic(rows) => {
                let d = rows.len();
                Matrix::from_fn(Q, d, d, |i, j| rows[i][j].eval(q))
            }
        }
    }
}

/// `Gram[i][j] = γ_{i+j}`: the functional "coefficient of tⁿ" paired through
/// the product.
pub fn deformed_form(s: &DeformSpec) -> DeformedForm {
    let d = s.n + 1;
    match &s.hbar {
        Hbar::Numeric(h) => {
            let g = gamma(s, Q.zero(), Q.one(), |w| {
                let sum = w.iter().zip(&s.p).fold(Q.zero(), |acc, (x, a)| acc + x * a);
                h * &sum
            });
            DeformedForm::Numeric(Matrix::from_fn(Q, d, d, |i, j| g[i + j].clone()))
        }
        Hbar::Symbolic => {
            let hb = Poly::x(Q);
            let g = gamma(s, Poly::zero(Q), Poly::constant(Q.one()), |w| {
                let sum = w
                    .iter()
                    .zip(&s.p)
                    .fold(Poly::zero(Q), |acc, (x, a)| acc.add(&x.scale(a)));
                hb.mul(&sum)
            });
            DeformedForm::Symbolic(
                (0..d)
                    .map(|i| (0..d).map(|j| g[i + j].clone()).collect())
                    .collect(),
            )
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminantCertificate {
    pub determinant: Poly,
    /// `(−1)^⌊(n+1)/2⌋`.
    pub expected: i64,
    pub determinant_matches: bool,
    /// Ones on the antidiagonal.
    pub antidiagonal_ones: bool,
    /// Zeros above it.
    pub upper_zero: bool,
    /// Entries below it have zero constant term.
    pub lower_vanish_at_zero: bool,
}

impl DeterminantCertificate {
    pub fn passes(&self) -> bool {
        self.determinant_matches && self.antidiagonal_ones && self.upper_zero && self.lower_vanish_at_zero
    }
}

pub fn certify_determinant(s: &DeformSpec) -> Result<DeterminantCertificate> {
    let rows = match deformed_form(s) {
        DeformedForm::Symbolic(rows) => rows,
        DeformedForm::Numeric(_) => {
            return Err(Error::Deform("certify_determinant needs a symbolic ħ".into()))
        }
    };
    let n = s.n;
    let determinant = poly_determinant(Q, &rows)?;
    let expected = if ((n + 1) / 2) % 2 == 0 { 1 } else { -1 };
    let determinant_matches = determinant == Poly::constant(Q.from_i64(expected));
    let mut antidiagonal_ones = true;
    let mut upper_zero = true;
    let mut lower_vanish_at_zero = true;
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            match (i + j).cmp(&n) {
                Ordering::Less => upper_zero &= e.is_zero(),
                Ordering::Equal => antidiagonal_ones &= *e == Poly::constant(Q.one()),
                Ordering::Greater => lower_vanish_at_zero &= e.coeff(0).is_zero(),
            }
        }
    }
    Ok(DeterminantCertificate {
        determinant,
        expected,
        determinant_matches,
        antidiagonal_ones,
        upper_zero,
        lower_vanish_at_zero,
    })
}

/// The deformed form satisfies the dualizing conditions on `A_ħ` and is
/// nondegenerate.
pub fn deformed_form_is_dualizing(s: &DeformSpec) -> Result<bool> {
    let a = Arc::new(deformed_algebra(s)?);
    let gram = match deformed_form(s) {
        DeformedForm::Numeric(m) => m,
        DeformedForm::Symbolic(_) => unreachable!("numeric ħ checked above"),
    };
    Ok(BilinearForm::new(a, gram)?.is_dualizing())
}

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Partition> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Deform("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Root multiplicities of `t^{n+1} − ħp(t)` over an algebraic closure: a
/// squarefree factor of degree `g` at multiplicity `m` contributes `g` parts
/// equal to `m`. Over ℚ the squarefree decomposition already separates roots
/// by multiplicity, so no root finding is needed.
pub fn multiplicity_partition(s: &DeformSpec) -> Result<Partition> {
    let sq = squarefree_decomposition(&s.relation()?)?;
    let mut parts = Vec::new();
    for (factor, m) in &sq.factors {
        let g = factor.degree().unwrap_or(0);
        parts.extend(std::iter::repeat_n(*m, g));
    }
    Partition::new(parts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpScan {
    pub entries: Vec<(Scalar, Partition)>,
    pub threshold: Option<Scalar>,
    /// All samples with `|ħ| ≤ threshold` (all samples without a threshold)
    /// give the same partition.
    pub constant: bool,
}

pub fn jump_scan(s: &DeformSpec, samples: &[Scalar], threshold: Option<Scalar>) -> Result<JumpScan> {
    if samples.is_empty() {
        return Err(Error::Deform("no samples".into()));
    }
    if samples.iter().any(Scalar::is_zero) {
        return Err(Error::Deform("samples must be nonzero".into()));
    }
    let entries: Vec<(Scalar, Partition)> = samples
        .par_iter()
        .map(|q| Ok((q.clone(), multiplicity_partition(&s.with_hbar(Hbar::Numeric(q.clone()))?)?)))
        .collect::<Result<_>>()?;
    let magnitude = |x: &Scalar| x.abs().as_rational().cloned();
    let below: Vec<&Partition> = entries
        .iter()
        .filter(|(q, _)| match &threshold {
            None => true,
            Some(t) => magnitude(q) <= magnitude(t),
        })
        .map(|(_, p)| p)
        .collect();
    let constant = below.windows(2).all(|w| w[0] == w[1]);
    Ok(JumpScan {
        entries,
        threshold,
        constant,
    })
}

/// Dominance order: `a ≥ b` iff every partial sum of `a` is at least the
/// corresponding one of `b`. `None` when incomparable.
pub fn partition_dominance(a: &Partition, b: &Partition) -> Result<Option<Ordering>> {
    if a.total() != b.total() {
        return Err(Error::Deform(format!(
            "partitions of different totals {} and {}",
            a.total(),
            b.total()
        )));
    }
    let len = a.0.len().max(b.0.len());
    let (mut sa, mut sb) = (0, 0);
    let (mut ge, mut le) = (true, true);
    for i in 0..len {
        sa += a.0.get(i).copied().unwrap_or(0);
        sb += b.0.get(i).copied().unwrap_or(0);
        ge &= sa >= sb;
        le &= sa <= sb;
    }
    Ok(match (ge, le) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Greater),
        (false, true) => Some(Ordering::Less),
        (false, false) => None,
    })
}

/// Under `t = u·s` the relation becomes `s^{n+1} = ħ Σ aₖ u^{k−n−1} sᵏ`.
pub fn rescale(s: &DeformSpec, u: &Scalar) -> Result<DeformSpec> {
    if u.is_zero() {
        return Err(Error::Deform("scale factor must be nonzero".into()));
    }
    let inv = u.inv()?;
    let p = s
        .p
        .iter()
        .enumerate()
        .map(|(k, a)| a * &inv.pow((s.n + 1 - k) as u32))
        .collect();
    DeformSpec::new(s.n, p, s.hbar.clone())
}

/// Columns `sⁱ = u^{−i} tⁱ`, the basis change matching [`rescale`].
pub fn rescaling_basis_change(n: usize, u: &Scalar) -> Result<Matrix> {
    let inv = u.inv()?;
    Ok(Matrix::from_fn(Q, n + 1, n + 1, |i, j| {
        if i == j {
            inv.pow(i as u32)
        } else {
            Q.zero()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupTable;

    fn num(n: usize, p: &[i64], h: i64) -> DeformSpec {
        DeformSpec::from_i64(n, p, Hbar::Numeric(Q.from_i64(h))).unwrap()
    }

    fn sym(n: usize, p: &[i64]) -> DeformSpec {
        DeformSpec::from_i64(n, p, Hbar::Symbolic).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(DeformSpec::from_i64(1, &[1, 2, 3], Hbar::Symbolic).is_err());
        assert!(DeformSpec::from_i64(13, &[1], Hbar::Symbolic).is_err());
        assert!(DeformSpec::from_i64(13, &[1], Hbar::Numeric(Q.one())).is_ok());
        let gf = Field::prime(5).unwrap();
        assert!(DeformSpec::new(1, vec![gf.one()], Hbar::Symbolic).is_err());
        assert!(deformed_algebra(&sym(1, &[1])).is_err());
    }

    #[test]
    fn algebras() {
        assert_eq!(deformed_algebra(&num(3, &[1, 2], 0)).unwrap(), Algebra::truncated_poly(3, Q));
        let a = deformed_algebra(&num(1, &[1], 1)).unwrap();
        assert_eq!(a.product(1, 1).as_slice(), &[(0, Q.one())]);
        let c2 = Algebra::group(GroupTable::cyclic(2), Q, None).unwrap();
        assert_eq!(a.is_commutative(), c2.is_commutative());
        let a = deformed_algebra(&num(2, &[1], 1)).unwrap();
        assert_eq!(a.product(1, 2).as_slice(), &[(0, Q.one())]);
        // t³ = 1 + t, so t² · t² = t + t²
        let a = deformed_algebra(&num(2, &[1, 1], 1)).unwrap();
        a.validate().unwrap();
        assert_eq!(a.product(2, 2).as_slice(), &[(1, Q.one()), (2, Q.one())]);
    }

    #[test]
    fn forms() {
        let g = |s: DeformSpec| match deformed_form(&s) {
            DeformedForm::Numeric(m) => m,
            DeformedForm::Symbolic(_) => unreachable!(),
        };
        assert_eq!(g(num(1, &[1], 5)), Matrix::from_i64(Q, &[&[0, 1], &[1, 0]]));
        assert_eq!(g(num(1, &[0, 1], 3)), Matrix::from_i64(Q, &[&[0, 1], &[1, 3]]));
        assert_eq!(g(num(2, &[1], 1)), Matrix::from_i64(Q, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        let DeformedForm::Symbolic(rows) = deformed_form(&sym(1, &[0, 1])) else {
            unreachable!()
        };
        assert_eq!(rows[1][1], Poly::x(Q));
    }

    #[test]
    fn symbolic_matches_numeric() {
        let s = sym(4, &[2, -1, 0, 1, 1]);
        let f = deformed_form(&s);
        for q in [Q.from_i64(3), Q.ratio(-2, 7).unwrap()] {
            let n = deformed_form(&s.with_hbar(Hbar::Numeric(q.clone())).unwrap());
            assert_eq!(f.evaluate(&q), n.evaluate(&q));
        }
    }

    #[test]
    fn determinants() {
        let c = certify_determinant(&sym(1, &[3, -2])).unwrap();
        assert!(c.passes());
        assert_eq!(c.expected, -1);
        assert!(certify_determinant(&sym(2, &[1])).unwrap().passes());
        let c = certify_determinant(&sym(3, &[1, 1, 1, 1])).unwrap();
        assert_eq!(c.determinant, Poly::constant(Q.one()));
        assert!(c.passes());
        assert!(certify_determinant(&num(2, &[1], 1)).is_err());
    }

    #[test]
    fn dualizing() {
        assert!(deformed_form_is_dualizing(&num(2, &[1], 1)).unwrap());
        assert!(deformed_form_is_dualizing(&num(3, &[4, 0, 1], 0)).unwrap());
        assert!(deformed_form_is_dualizing(&num(1, &[0, 1], 3)).unwrap());
        assert!(deformed_form_is_dualizing(&num(4, &[1, -1, 2, 0, 1], 2)).unwrap());
    }

    #[test]
    fn partitions() {
        assert_eq!(multiplicity_partition(&num(3, &[1], 0)).unwrap().parts(), &[4]);
        assert_eq!(multiplicity_partition(&num(2, &[1], 1)).unwrap().parts(), &[1, 1, 1]);
        assert_eq!(multiplicity_partition(&num(1, &[0, 1], 2)).unwrap().parts(), &[1, 1]);
        // t³ − t² = t²(t − 1)
        let p = multiplicity_partition(&num(2, &[0, 0, 1], 1)).unwrap();
        assert_eq!(p.parts(), &[2, 1]);
        assert_eq!(p.to_string(), "{2,1}");
        assert!(Partition::new(vec![1, 0]).is_err());
    }

    #[test]
    fn jump() {
        let s = num(2, &[1], 1);
        let samples = [Q.one(), Q.ratio(1, 2).unwrap(), Q.ratio(1, 4).unwrap(), Q.ratio(1, 1000).unwrap()];
        let r = jump_scan(&s, &samples, None).unwrap();
        assert!(r.constant);
        assert!(r.entries.iter().all(|(_, p)| p.parts() == [1, 1, 1]));
        assert_eq!(r.entries[3].0, samples[3]);
        assert!(jump_scan(&s, &[Q.zero()], None).is_err());
        assert!(jump_scan(&s, &[], None).is_err());
        // t³ − ħt² = t²(t − ħ): type {2,1} for every nonzero ħ
        let s = num(2, &[0, 0, 1], 1);
        let r = jump_scan(&s, &[Q.one(), Q.ratio(1, 9).unwrap()], Some(Q.ratio(1, 2).unwrap())).unwrap();
        assert!(r.constant);
    }

    #[test]
    fn dominance() {
        let p = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
        assert_eq!(partition_dominance(&p(&[3]), &p(&[1, 1, 1])).unwrap(), Some(Ordering::Greater));
        assert_eq!(partition_dominance(&p(&[2, 2]), &p(&[3, 1])).unwrap(), Some(Ordering::Less));
        assert_eq!(partition_dominance(&p(&[3, 3]), &p(&[4, 1, 1])).unwrap(), None);
        assert_eq!(partition_dominance(&p(&[2, 1]), &p(&[1, 2])).unwrap(), Some(Ordering::Equal));
        assert!(partition_dominance(&p(&[2]), &p(&[1, 2])).is_err());
    }

    #[test]
    fn rescaling_is_an_isomorphism() {
        let s = num(3, &[1, -2, 0, 3], 2);
        let u = Q.ratio(3, 2).unwrap();
        let t = rescale(&s, &u).unwrap();
        let a = deformed_algebra(&s).unwrap();
        let b = a.apply_basis_change(&rescaling_basis_change(3, &u).unwrap()).unwrap();
        assert_eq!(b, deformed_algebra(&t).unwrap());
        assert_eq!(multiplicity_partition(&s).unwrap(), multiplicity_partition(&t).unwrap());
    }
}
