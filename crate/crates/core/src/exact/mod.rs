//! Exact scalars, sparse matrices, polynomials and the nondegeneracy search.

mod matrix;
mod nondegenerate;
mod poly;
mod scalar;

pub use matrix::{normalize_sparse, sparse_axpy, to_dense, to_sparse, Echelon, Matrix, SparseVec};
pub use nondegenerate::{
    exhaustive_nondegenerate, generic_nondegenerate, NondegenerateSearch, NondegenerateWitness,
    SearchStrategy,
};
pub use poly::{poly_determinant, squarefree_decomposition, Poly, SquarefreeDecomposition};
pub use scalar::{parse_rational, Field, Scalar};
