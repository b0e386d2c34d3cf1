//! Deciding whether a linear span of square matrices contains an invertible one.
//!
//! `det(Σ sᵢ Bᵢ)` is a polynomial of degree at most `d` in each `sᵢ`. A polynomial
//! with per-variable degree ≤ d that vanishes on the full grid `{0..d}^s` is
//! identically zero, so scanning that grid decides the question. Over GF(p) with
//! `p ≤ d` the grid does not fit in the field and the whole space `GF(p)^s` is
//! enumerated instead.

use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Scalar};

/// How a nondegeneracy question was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Integer grid `{0..=bound}^s`.
    Grid { bound: u64 },
    /// Every point of `GF(p)^s`.
    Exhaustive { p: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondegenerateWitness {
    /// Coefficients `sᵢ` of the combination.
    pub coefficients: Vec<Scalar>,
    pub matrix: Matrix,
    pub determinant: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondegenerateSearch {
    pub strategy: SearchStrategy,
    pub witness: Option<NondegenerateWitness>,
    /// Number of grid points whose determinant was evaluated.
    pub evaluations: u64,
}

fn check_space(field: Field, dim: usize, space: &[Matrix]) -> Result<()> {
    for m in space {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Dimension(format!(
                "expected {dim}x{dim}, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.field() != field {
            return Err(Error::FieldMismatch(field, m.field()));
        }
    }
    Ok(())
}

fn strategy_for(field: Field, dim: usize) -> SearchStrategy {
    match field {
        Field::Prime(p) if p <= dim as u64 => SearchStrategy::Exhaustive { p },
        _ => SearchStrategy::Grid { bound: dim as u64 },
    }
}

fn combination(field: Field, dim: usize, space: &[Matrix], point: &[u64]) -> Matrix {
    let mut acc = Matrix::zeros(field, dim, dim);
    for (m, &s) in space.iter().zip(point) {
        if s != 0 {
            acc = acc
                .combine(&field.from_i64(s as i64), m)
                .expect("shapes checked");
        }
    }
    acc
}

/// Mixed-radix successor; false after the last point.
fn next_point(point: &mut [u64], radix: u64) -> bool {
    for x in point.iter_mut().rev() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

/// Searches the span of `space` (all `dim × dim`) for a matrix with nonzero
/// determinant. A handful of spread-out grid points are probed before the
/// lexicographic sweep; both phases stay on the grid, so the answer is the same
/// as a plain exhaustive scan.
pub fn generic_nondegenerate(
    field: Field,
    dim: usize,
    space: &[Matrix],
) -> Result<NondegenerateSearch> {
    check_space(field, dim, space)?;
    let strategy = strategy_for(field, dim);
    let radix = match strategy {
        SearchStrategy::Grid { bound } => bound + 1,
        SearchStrategy::Exhaustive { p } => p,
    };
    let mut evaluations = 0u64;
    let mut try_point = |point: &[u64]| -> Result<Option<NondegenerateWitness>> {
        evaluations += 1;
        let m = combination(field, dim, space, point);
        let det = m.determinant()?;
        Ok((!det.is_zero()).then(|| NondegenerateWitness {
            coefficients: point.iter().map(|&s| field.from_i64(s as i64)).collect(),
            matrix: m,
            determinant: det,
        }))
    };

    if dim == 0 {
        let w = try_point(&vec![0; space.len()])?;
        return Ok(NondegenerateSearch {
            strategy,
            witness: w,
            evaluations,
        });
    }
    if space.is_empty() {
        return Ok(NondegenerateSearch {
            strategy,
            witness: None,
            evaluations,
        });
    }

    // Deterministic probes: the all-ones point, then a linear congruential walk.
    let s = space.len();
    let mut probes: Vec<Vec<u64>> = vec![vec![1 % radix; s]];
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..16 {
        let p = (0..s)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                (state >> 33) % radix
            })
            .collect();
        probes.push(p);
    }
    for p in &probes {
        if let Some(w) = try_point(p)? {
            return Ok(NondegenerateSearch {
                strategy,
                witness: Some(w),
                evaluations,
            });
        }
    }

    let mut point = vec![0u64; s];
    loop {
        if let Some(w) = try_point(&point)? {
            return Ok(NondegenerateSearch {
                strategy,
                witness: Some(w),
                evaluations,
            });
        }
        if !next_point(&mut point, radix) {
            break;
        }
    }
    Ok(NondegenerateSearch {
        strategy,
        witness: None,
        evaluations,
    })
}

/// Plain lexicographic scan of the same grid, without probes or early exit.
/// Kept as the reference the short-circuiting search is tested against.
pub fn exhaustive_nondegenerate(field: Field, dim: usize, space: &[Matrix]) -> Result<bool> {
    check_space(field, dim, space)?;
    let radix = match strategy_for(field, dim) {
        SearchStrategy::Grid { bound } => bound + 1,
        SearchStrategy::Exhaustive { p } => p,
    };
    let mut point = vec![0u64; space.len()];
    let mut found = false;
    loop {
        let m = combination(field, dim, space, &point);
        if !m.determinant()?.is_zero() {
            found = true;
        }
        if !next_point(&mut point, radix) {
            break;
        }
    }
    Ok(found)
}
