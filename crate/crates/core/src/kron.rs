//! Kronecker-product algebra.
//!
//! `vec` stacks columns (column-major) and `unvec` is its exact inverse. Under
//! that convention `(A ⊗ B) vec(X) = vec(B X Aᵀ)`, which is what
//! [`kron_matvec`] uses to apply `A ⊗ B` without ever forming it.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, DenseVector};

/// Default element budget for [`kron_materialize`] (2^26 entries, 512 MiB of f64).
pub const DEFAULT_ELEMENT_BUDGET: usize = 1 << 26;

/// Column-major stacking: `out[i + j * rows] = m[i, j]`.
pub fn vec(m: &DenseMatrix) -> DenseVector {
    DenseVector::new(m.data().to_vec()).expect("matrix entries are finite and non-empty")
}

/// Inverse of [`vec`]: reshape a length `m * n` vector into an `m × n` matrix.
pub fn unvec(v: &DenseVector, m: usize, n: usize) -> Result<DenseMatrix> {
    if m == 0 || n == 0 || v.len() != m * n {
        return Err(Error::DimensionMismatch(format!(
            "cannot reshape vector of length {} into {m}x{n}",
            v.len()
        )));
    }
    DenseMatrix::new(m, n, v.data().to_vec())
}

/// Dense `A ⊗ B` under the default element budget.
pub fn kron_materialize(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    kron_materialize_with_budget(a, b, DEFAULT_ELEMENT_BUDGET)
}

/// Dense `A ⊗ B`; block `(i, j)` of the result is `A[i, j] · B`.
pub fn kron_materialize_with_budget(
    a: &DenseMatrix,
    b: &DenseMatrix,
    budget: usize,
) -> Result<DenseMatrix> {
    let (a1, a2) = a.shape();
    let (b1, b2) = b.shape();
    let needed = (a1 * b1) as u128 * (a2 * b2) as u128;
    if needed > budget as u128 {
        return Err(Error::SizeOverflow { needed, budget });
    }
    let rows = a1 * b1;
    Ok(DenseMatrix::from_fn(rows, a2 * b2, |r, c| {
        a.get(r / b1, c / b2) * b.get(r % b1, c % b2)
    }))
}

/// Tally of scalar multiply-adds performed by an instrumented kernel.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounter {
    pub multiply_adds: u64,
}

/// `(A ⊗ B) x` via `vec(B · unvec(x, b₂, a₂) · Aᵀ)`.
pub fn kron_matvec(a: &DenseMatrix, b: &DenseMatrix, x: &DenseVector) -> Result<DenseVector> {
    let mut counter = OpCounter::default();
    kron_matvec_counted(a, b, x, &mut counter)
}

/// [`kron_matvec`] that also counts its multiply-adds into `counter`.
///
/// Computes `T = X Aᵀ` (`a₁a₂b₂` madds) and then `B T` (`a₁b₁b₂` madds).
pub fn kron_matvec_counted(
    a: &DenseMatrix,
    b: &DenseMatrix,
    x: &DenseVector,
    counter: &mut OpCounter,
) -> Result<DenseVector> {
    let (a1, a2) = a.shape();
    let (b1, b2) = b.shape();
    if x.len() != a2 * b2 {
        return Err(Error::DimensionMismatch(format!(
            "kron_matvec: x has length {}, expected a2*b2 = {}",
            x.len(),
            a2 * b2
        )));
    }
    let xs = x.data();
    // t is b₂ × a₁, column-major
    let mut t = vec![0.0; b2 * a1];
    for i in 0..a1 {
        let t_col = &mut t[i * b2..(i + 1) * b2];
        for j in 0..a2 {
            let aij = a.get(i, j);
            for (tk, &xk) in t_col.iter_mut().zip(&xs[j * b2..(j + 1) * b2]) {
                *tk += xk * aij;
            }
        }
    }
    let mut out = vec![0.0; b1 * a1];
    for i in 0..a1 {
        let out_col = &mut out[i * b1..(i + 1) * b1];
        for k in 0..b2 {
            let tki = t[k + i * b2];
            for (o, &blk) in out_col.iter_mut().zip(b.column(k)) {
                *o += blk * tki;
            }
        }
    }
    counter.multiply_adds += structured_multiply_adds(a1, a2, b1, b2);
    DenseVector::new(out)
}

/// Multiply-adds used by [`kron_matvec`] for the given factor shapes.
pub fn structured_multiply_adds(a1: usize, a2: usize, b1: usize, b2: usize) -> u64 {
    (a1 * a2 * b2 + a1 * b1 * b2) as u64
}

/// Multiply-adds of a dense matvec with the materialized `(a₁b₁) × (a₂b₂)` product.
pub fn materialized_multiply_adds(a1: usize, a2: usize, b1: usize, b2: usize) -> u64 {
    (a1 * b1) as u64 * (a2 * b2) as u64
}

/// Dense matvec that counts its multiply-adds.
pub fn dense_matvec_counted(
    m: &DenseMatrix,
    x: &DenseVector,
    counter: &mut OpCounter,
) -> Result<DenseVector> {
    let y = m.matvec(x)?;
    counter.multiply_adds += (m.rows() * m.cols()) as u64;
    Ok(y)
}

/// Singular values in descending order.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let dm = DMatrix::from_column_slice(m.rows(), m.cols(), m.data());
    let mut sv: Vec<f64> = dm.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values strictly above `tol · σ_max`; zero for the zero matrix.
pub fn numerical_rank(m: &DenseMatrix, tol: f64) -> usize {
    assert!(tol > 0.0, "rank tolerance must be positive");
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    fn v(data: &[f64]) -> DenseVector {
        DenseVector::new(data.to_vec()).unwrap()
    }

    #[test]
    fn vec_examples() {
        assert_eq!(vec(&m(&[&[1.0, 2.0], &[3.0, 4.0]])).data(), &[1.0, 3.0, 2.0, 4.0]);
        assert_eq!(vec(&m(&[&[5.0]])).data(), &[5.0]);
        assert_eq!(vec(&DenseMatrix::zeros(3, 2)).data(), &[0.0; 6]);
    }

    #[test]
    fn unvec_examples() {
        assert_eq!(
            unvec(&v(&[1.0, 3.0, 2.0, 4.0]), 2, 2).unwrap(),
            m(&[&[1.0, 2.0], &[3.0, 4.0]])
        );
        assert_eq!(unvec(&v(&[7.0]), 1, 1).unwrap(), m(&[&[7.0]]));
        assert!(matches!(
            unvec(&v(&[1.0; 5]), 2, 2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn materialize_examples() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let expected = m(&[
            &[1.0, 0.0, 2.0, 0.0],
            &[0.0, 1.0, 0.0, 2.0],
            &[3.0, 0.0, 4.0, 0.0],
            &[0.0, 3.0, 0.0, 4.0],
        ]);
        assert_eq!(kron_materialize(&a, &DenseMatrix::identity(2)).unwrap(), expected);

        let b = m(&[&[1.0, -2.0, 0.5], &[3.0, 4.0, 9.0]]);
        assert_eq!(kron_materialize(&DenseMatrix::identity(1), &b).unwrap(), b);

        assert_eq!(
            kron_materialize(&m(&[&[2.0]]), &m(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap(),
            m(&[&[2.0, 2.0], &[2.0, 2.0]])
        );
    }

    #[test]
    fn materialize_budget() {
        let a = DenseMatrix::zeros(4, 4);
        let err = kron_materialize_with_budget(&a, &a, 255).unwrap_err();
        assert_eq!(err, Error::SizeOverflow { needed: 256, budget: 255 });
        assert!(kron_materialize_with_budget(&a, &a, 256).is_ok());
    }

    #[test]
    fn matvec_examples() {
        let i2 = DenseMatrix::identity(2);
        let x = v(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(kron_matvec(&i2, &i2, &x).unwrap().data(), &[1.0, 2.0, 3.0, 4.0]);
        let swap = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(kron_matvec(&swap, &i2, &x).unwrap().data(), &[3.0, 4.0, 1.0, 2.0]);
        assert!(matches!(
            kron_matvec(&i2, &i2, &v(&[1.0; 3])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn counted_matvec_reports_structured_cost() {
        let a = DenseMatrix::from_fn(3, 4, |i, j| (i + j) as f64);
        let b = DenseMatrix::from_fn(2, 5, |i, j| (i * j) as f64 - 1.0);
        let x = DenseVector::new((0..20).map(|k| k as f64).collect()).unwrap();
        let mut c = OpCounter::default();
        kron_matvec_counted(&a, &b, &x, &mut c).unwrap();
        assert_eq!(c.multiply_adds, 3 * 4 * 5 + 3 * 2 * 5);
        assert_eq!(structured_multiply_adds(32, 32, 32, 32), 65_536);
        assert_eq!(materialized_multiply_adds(32, 32, 32, 32), 1_048_576);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&DenseMatrix::zeros(4, 4), 1e-9), 0);
        assert_eq!(numerical_rank(&DenseMatrix::identity(3), 1e-9), 3);
        let u = v(&[0.3, -1.2, 2.0]);
        let w = v(&[1.5, 0.7, -0.4, 0.9]);
        assert_eq!(numerical_rank(&DenseMatrix::outer(&u, &w), 1e-9), 1);
    }
}
