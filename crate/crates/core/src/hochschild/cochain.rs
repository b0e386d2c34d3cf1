use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{Echelon, Scalar};
use crate::hochschild::model::{CochainModel, ModelTag};

/// A cochain in a fixed model, as a coordinate vector.
#[derive(Clone, Debug)]
pub struct Cochain {
    model: Arc<CochainModel>,
    degree: usize,
    coords: Vec<Scalar>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.model, &other.model)
            && self.degree == other.degree
            && self.coords == other.coords
    }
}

impl Cochain {
    pub fn new(model: Arc<CochainModel>, degree: usize, coords: Vec<Scalar>) -> Result<Cochain> {
        let dim = model.dim(degree)?;
        if coords.len() != dim {
            return Err(Error::CochainShape(format!(
                "degree {degree} has dimension {dim}, got {} coordinates",
                coords.len()
            )));
        }
        Ok(Cochain {
            model,
            degree,
            coords,
        })
    }

    pub fn zero(model: Arc<CochainModel>, degree: usize) -> Result<Cochain> {
        let dim = model.dim(degree)?;
        let z = model.algebra().field().zero();
        Cochain::new(model, degree, vec![z; dim])
    }

    /// Builds a cochain from its values on argument tuples (indices into
    /// [`CochainModel::args`]); values are module vectors in original
    /// coordinates and must lie in the admissible component. In degree 0 the
    /// closure is called once with no arguments.
    pub fn from_fn(
        model: Arc<CochainModel>,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Vec<Scalar>,
    ) -> Result<Cochain> {
        let paths = model.paths(degree)?;
        let field = model.algebra().field();
        let mut coords = vec![field.zero(); paths.dim()];
        if degree == 0 {
            let v = model.to_adapted(&f(&[]));
            let mut covered = vec![false; v.len()];
            for (p, key) in paths.keys.iter().enumerate() {
                let (c0, cd) = model.component(key[0], key[0]);
                for t in 0..cd {
                    coords[paths.offset(p) + t] = v[c0 + t].clone();
                    covered[c0 + t] = true;
                }
            }
            if let Some(i) = (0..v.len()).find(|&i| !covered[i] && !v[i].is_zero()) {
                return Err(Error::Component(format!(
                    "degree-0 value has a component outside the centralizer (coordinate {i})"
                )));
            }
        } else {
            for (p, key) in paths.keys.iter().enumerate() {
                let v = model.to_adapted(&f(&key[1..]));
                let (c0, cd) = model.component(key[0], model.end_type(key));
                if let Some(i) = (0..v.len()).find(|&i| (i < c0 || i >= c0 + cd) && !v[i].is_zero()) {
                    return Err(Error::Component(format!(
                        "value on {:?} has a component outside the admissible one (coordinate {i})",
                        &key[1..]
                    )));
                }
                for t in 0..cd {
                    coords[paths.offset(p) + t] = v[c0 + t].clone();
                }
            }
        }
        Cochain::new(model, degree, coords)
    }

    /// The degree-0 cochain with value `1` (regular coefficients only).
    pub fn unit(model: Arc<CochainModel>) -> Result<Cochain> {
        if !model.is_regular() {
            return Err(Error::NotRegular);
        }
        let u = model.algebra().unit().to_vec();
        Cochain::from_fn(model, 0, |_| u.clone())
    }

    pub fn model(&self) -> &Arc<CochainModel> {
        &self.model
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    fn same_space(&self, other: &Cochain) -> Result<()> {
        if !Arc::ptr_eq(&self.model, &other.model) || self.degree != other.degree {
            return Err(Error::CochainShape("cochains live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_space(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Cochain {
            coords,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.same_space(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(Cochain {
            coords,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        Cochain {
            coords: self.coords.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    /// `δF`.
    pub fn coboundary(&self) -> Result<Cochain> {
        let d = self.model.differential_matrix(self.degree)?;
        Ok(Cochain {
            model: self.model.clone(),
            degree: self.degree + 1,
            coords: d.mul_vec(&self.coords),
        })
    }

    pub fn is_cocycle(&self) -> Result<bool> {
        Ok(self.coboundary()?.is_zero())
    }

    /// Whether `self = δX` for some cochain `X` of one degree lower.
    pub fn is_coboundary(&self) -> Result<bool> {
        if self.degree == 0 {
            return Ok(self.is_zero());
        }
        let d = self.model.differential_matrix(self.degree - 1)?;
        Ok(d.solve(&self.coords).is_some())
    }

    /// Value on a tuple of argument indices, as a module vector in original
    /// coordinates; zero on non-composable tuples.
    pub fn value_on_args(&self, args: &[usize]) -> Result<Vec<Scalar>> {
        if args.len() != self.degree {
            return Err(Error::CochainShape(format!(
                "expected {} arguments, got {}",
                self.degree,
                args.len()
            )));
        }
        let paths = self.model.paths(self.degree)?;
        let m = self.model.module().dim();
        let field = self.model.algebra().field();
        let mut adapted = vec![field.zero(); m];
        if self.degree == 0 {
            for (p, key) in paths.keys.iter().enumerate() {
                let (c0, cd) = self.model.component(key[0], key[0]);
                for t in 0..cd {
                    adapted[c0 + t] = self.coords[paths.offset(p) + t].clone();
                }
            }
        } else if let Some(key) = self.model.key_of(args) {
            let p = paths
                .position(&key)
                .ok_or_else(|| Error::CochainShape(format!("unknown index {args:?}")))?;
            let (c0, cd) = self.model.component(key[0], self.model.end_type(&key));
            for t in 0..cd {
                adapted[c0 + t] = self.coords[paths.offset(p) + t].clone();
            }
        }
        Ok(self.model.from_adapted(&adapted))
    }

    /// Multilinear evaluation on algebra elements given in original
    /// coordinates.
    pub fn evaluate(&self, elements: &[Vec<Scalar>]) -> Result<Vec<Scalar>> {
        if elements.len() != self.degree {
            return Err(Error::CochainShape(format!(
                "expected {} arguments, got {}",
                self.degree,
                elements.len()
            )));
        }
        let field = self.model.algebra().field();
        let expanded: Vec<Vec<(usize, Scalar)>> = elements
            .iter()
            .map(|x| {
                self.model
                    .working_coords(x)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .filter_map(|(w, c)| self.model.arg_of_working(w).map(|a| (a, c)))
                    .collect()
            })
            .collect();
        let m = self.model.module().dim();
        let mut acc = vec![field.zero(); m];
        let mut idx = vec![0usize; self.degree];
        if expanded.iter().any(Vec::is_empty) {
            return Ok(acc);
        }
        loop {
            let args: Vec<usize> = idx.iter().zip(&expanded).map(|(&i, e)| e[i].0).collect();
            let mut coeff = field.one();
            for (&i, e) in idx.iter().zip(&expanded) {
                coeff *= &e[i].1;
            }
            let v = self.value_on_args(&args)?;
            for (a, b) in acc.iter_mut().zip(&v) {
                *a += &(&coeff * b);
            }
            // odometer
            let mut k = self.degree;
            loop {
                if k == 0 {
                    return Ok(acc);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < expanded[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// Sign `(−1)^⌊(n+1)/2⌋` of the opposite transport in degree `n`.
pub fn transport_sign(n: usize) -> i64 {
    if (n + 1) / 2 % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `F ↦ (−1)^⌊(n+1)/2⌋ F^op` with `F^op(a_1, …, a_n) = F(a_n, …, a_1)`, as a
/// cochain of `target`, which must be the opposite model of `f`'s model.
pub fn op_transport_into(f: &Cochain, target: &Arc<CochainModel>) -> Result<Cochain> {
    let src = f.model();
    if src.tag() == ModelTag::Relative || target.tag() == ModelTag::Relative {
        return Err(Error::RelativeUnsupported);
    }
    if src.tag() != target.tag()
        || **target.algebra() != src.algebra().opposite()
        || !target.module().same_actions(&src.module().op())
        || target.args().len() != src.args().len()
    {
        return Err(Error::CochainShape("target is not the opposite model".into()));
    }
    let n = f.degree();
    let sp = src.paths(n)?;
    let tp = target.paths(n)?;
    let field = src.algebra().field();
    let sign = field.from_i64(transport_sign(n));
    let m = src.module().dim();
    let mut coords = vec![field.zero(); tp.dim()];
    for (p, key) in sp.keys.iter().enumerate() {
        let mut rev = key.clone();
        rev[1..].reverse();
        let q = tp
            .position(&rev)
            .ok_or_else(|| Error::CochainShape("reversed index missing".into()))?;
        for t in 0..m {
            coords[tp.offset(q) + t] = &sign * &f.coords()[sp.offset(p) + t];
        }
    }
    Cochain::new(target.clone(), n, coords)
}

/// Opposite transport into a freshly built opposite model.
pub fn op_transport(f: &Cochain) -> Result<Cochain> {
    let target = Arc::new(f.model().opposite()?);
    op_transport_into(f, &target)
}

/// `(F⌣G)(a_1, …, a_{m+n}) = F(a_1, …, a_m)·G(a_{m+1}, …, a_{m+n})`.
pub fn cup_product(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    if !Arc::ptr_eq(f.model(), g.model()) {
        return Err(Error::CochainShape("cochains belong to different models".into()));
    }
    let model = f.model().clone();
    if !model.is_regular() {
        return Err(Error::NotRegular);
    }
    let (m, n) = (f.degree(), g.degree());
    let algebra = model.algebra().clone();
    let fval = |args: &[usize]| f.value_on_args(args);
    if m + n == 0 {
        let v = algebra.mul(&fval(&[])?, &g.value_on_args(&[])?);
        return Cochain::from_fn(model, 0, |_| v.clone());
    }
    let mut err = None;
    let out = Cochain::from_fn(model, m + n, |args| {
        let r = fval(&args[..m])
            .and_then(|a| g.value_on_args(&args[m..]).map(|b| algebra.mul(&a, &b)));
        match r {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                vec![algebra.field().zero(); algebra.dim()]
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => out,
    }
}

/// `[D_1, D_2] = D_1 D_2 − D_2 D_1` for degree-1 cocycles with regular
/// coefficients.
pub fn derivation_commutator(d1: &Cochain, d2: &Cochain) -> Result<Cochain> {
    if !Arc::ptr_eq(d1.model(), d2.model()) {
        return Err(Error::CochainShape("cochains belong to different models".into()));
    }
    let model = d1.model().clone();
    if !model.is_regular() {
        return Err(Error::NotRegular);
    }
    if d1.degree() != 1 || d2.degree() != 1 {
        return Err(Error::CochainShape("derivations have degree 1".into()));
    }
    if !d1.is_cocycle()? || !d2.is_cocycle()? {
        return Err(Error::NotCocycle);
    }
    let args: Vec<Vec<Scalar>> = model.args().iter().map(|a| a.vector.clone()).collect();
    let mut values = Vec::with_capacity(args.len());
    for x in &args {
        let a = d1.evaluate(&[d2.evaluate(std::slice::from_ref(x))?])?;
        let b = d2.evaluate(&[d1.evaluate(std::slice::from_ref(x))?])?;
        values.push(a.iter().zip(&b).map(|(p, q)| p - q).collect::<Vec<_>>());
    }
    Cochain::from_fn(model, 1, |a| values[a[0]].clone())
}

/// Cocycles representing a basis of `Hⁿ`: a kernel basis of `δⁿ` reduced
/// against the image of `δⁿ⁻¹`.
pub fn cohomology_basis(model: &Arc<CochainModel>, n: usize) -> Result<Vec<Cochain>> {
    let field = model.algebra().field();
    let mut ech = Echelon::new(field);
    if n > 0 {
        let prev = model.differential_matrix(n - 1)?.transpose();
        for i in 0..prev.nrows() {
            ech.insert(prev.row(i).to_vec());
        }
    }
    let kernel = model.differential_matrix(n)?.kernel_basis();
    let mut reps = Vec::new();
    for v in kernel {
        if ech.insert(crate::exact::to_sparse(&v)) {
            reps.push(Cochain::new(model.clone(), n, v)?);
        }
    }
    Ok(reps)
}
