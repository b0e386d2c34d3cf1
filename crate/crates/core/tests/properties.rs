use std::sync::Arc;

use proptest::prelude::*;

use selfdual::deform::{certify_determinant, deformed_form, DeformedForm};
use selfdual::exact::{
    exhaustive_nondegenerate, generic_nondegenerate, squarefree_decomposition, Field, Matrix, Poly, Scalar,
};
use selfdual::hochschild::{op_transport_into, transport_sign};
use selfdual::simplicial::{induced_cochain_map, nerve};
use selfdual::*;

const Q: Field = Field::Rational;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn matrix(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
    Matrix::from_fn(field, rows, cols, |i, j| field.from_i64(entries[i * cols + j]))
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..4, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity((r, c, e) in small_matrix(), prime in prop::bool::ANY) {
        let field = if prime { gf(7) } else { Q };
        let m = matrix(field, r, c, &e);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), c);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn rank_of_product_is_bounded((r, c, e) in small_matrix(), f in prop::collection::vec(-3i64..4, 25)) {
        let a = matrix(Q, r, c, &e);
        let b = matrix(Q, c, 5, &f[..c * 5]);
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn squarefree_roundtrip(roots in prop::collection::vec((-3i64..4, 1usize..4), 1..4), lead in 1i64..4) {
        let mut f = Poly::constant(Q.from_i64(lead));
        for (r, m) in &roots {
            let lin = Poly::from_i64(Q, &[-r, 1]);
            f = f.mul(&lin.pow(*m as u32));
        }
        let sq = squarefree_decomposition(&f).unwrap();
        prop_assert_eq!(sq.expand(), f);
        for (g, _) in &sq.factors {
            prop_assert!(g.gcd(&g.derivative()).is_constant());
        }
        for (i, (g, _)) in sq.factors.iter().enumerate() {
            for (h, _) in &sq.factors[i + 1..] {
                prop_assert!(g.gcd(h).is_constant());
            }
        }
    }

    #[test]
    fn grid_search_matches_enumeration(
        dim in 1usize..4,
        count in 1usize..3,
        entries in prop::collection::vec(0i64..5, 18),
    ) {
        let field = gf(5);
        let space: Vec<Matrix> = (0..count)
            .map(|k| matrix(field, dim, dim, &entries[k * dim * dim..(k + 1) * dim * dim]))
            .collect();
        let grid = generic_nondegenerate(field, dim, &space).unwrap();
        prop_assert_eq!(grid.witness.is_some(), exhaustive_nondegenerate(field, dim, &space).unwrap());
        if let Some(w) = grid.witness {
            prop_assert!(!w.matrix.determinant().unwrap().is_zero());
        }
    }

    #[test]
    fn transport_intertwines_differentials(degree in 0usize..3, seed in prop::collection::vec(-4i64..5, 64), m2 in prop::bool::ANY) {
        let a = if m2 {
            Arc::new(Algebra::matrix_algebra(gf(5), 2))
        } else {
            Arc::new(Algebra::poset(&Poset::chain(2), Q))
        };
        let field = a.field();
        let model = Arc::new(CochainModel::new(a.clone(), Arc::new(Bimodule::regular(a.clone())), ModelKind::Full).unwrap());
        let op = Arc::new(model.opposite().unwrap());
        let dim = model.dim(degree).unwrap();
        let coords: Vec<Scalar> = (0..dim).map(|i| field.from_i64(seed[i % seed.len()] * (i as i64 % 3 - 1))).collect();
        let f = Cochain::new(model.clone(), degree, coords).unwrap();
        let lhs = op_transport_into(&f.coboundary().unwrap(), &op).unwrap();
        let rhs = op_transport_into(&f, &op).unwrap().coboundary().unwrap();
        prop_assert_eq!(lhs.coords(), rhs.coords());
        prop_assert!(transport_sign(degree).abs() == 1);
    }

    #[test]
    fn pullbacks_compose(f in prop::collection::vec(0usize..3, 2), g in prop::collection::vec(0usize..4, 3)) {
        let mut f = f;
        let mut g = g;
        f.sort_unstable();
        g.sort_unstable();
        let (p, q, r) = (Poset::chain(2), Poset::chain(3), Poset::chain(4));
        let (np, nq, nr) = (nerve(&p, 2), nerve(&q, 2), nerve(&r, 2));
        let gf_map: Vec<usize> = f.iter().map(|&i| g[i]).collect();
        for n in 0..=2 {
            let mf = induced_cochain_map(&np, &nq, &f, n, Q).unwrap();
            let mg = induced_cochain_map(&nq, &nr, &g, n, Q).unwrap();
            let mgf = induced_cochain_map(&np, &nr, &gf_map, n, Q).unwrap();
            prop_assert_eq!(mf.mul(&mg).unwrap(), mgf);
        }
    }

    #[test]
    fn symbolic_form_specializes(n in 1usize..6, p in prop::collection::vec(-3i64..4, 6), num in -9i64..10, den in 1i64..7) {
        let spec = DeformSpec::from_i64(n, &p[..=n], Hbar::Symbolic).unwrap();
        let q = Q.ratio(num, den).unwrap();
        let numeric = spec.with_hbar(Hbar::Numeric(q.clone())).unwrap();
        let DeformedForm::Numeric(m) = deformed_form(&numeric) else { unreachable!() };
        prop_assert_eq!(deformed_form(&spec).evaluate(&q), m);
    }

    #[test]
    fn determinant_is_a_constant_sign(n in 1usize..7, p in prop::collection::vec(-2i64..3, 7)) {
        let spec = DeformSpec::from_i64(n, &p[..=n], Hbar::Symbolic).unwrap();
        let c = certify_determinant(&spec).unwrap();
        prop_assert!(c.passes(), "n = {}, p = {:?}, det = {}", n, &p[..=n], c.determinant);
    }
}
