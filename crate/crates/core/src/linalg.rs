//! Small dense linear algebra that works identically over exact and
//! floating-point fields: products that skip structural zeros, Gauss–Jordan
//! elimination, inverses and ranks.

use std::fmt::Debug;
use std::ops::Neg;

use nalgebra::SMatrix;
use num_complex::Complex;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// A field usable by the elimination routines. `magnitude` drives pivoting
/// in numeric mode; exact fields pivot on the first nonzero entry.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static + Num + Neg<Output = Self> {
    const EXACT: bool;
    fn magnitude(&self) -> f64;
}

impl<S: Scalar> Field for S {
    const EXACT: bool = S::EXACT;
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl<S: Scalar> Field for Complex<S> {
    const EXACT: bool = S::EXACT;
    fn magnitude(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}

/// Relative threshold below which a numeric pivot counts as zero.
pub const PIVOT_TOL: f64 = 1e-11;

fn negligible<F: Field>(v: &F, scale: f64) -> bool {
    if F::EXACT {
        v.is_zero()
    } else {
        v.magnitude() <= PIVOT_TOL * scale
    }
}

/// 7×7 matrices: elements of g2, G2, f(x) and chart frames.
pub type Mat7<T> = SMatrix<T, 7, 7>;

/// Matrix product that skips zero entries of the left factor. With exact
/// scalars most entries of the matrices in this crate are structural zeros.
pub fn matmul<T: Field, const R: usize, const K: usize, const C: usize>(
    a: &SMatrix<T, R, K>,
    b: &SMatrix<T, K, C>,
) -> SMatrix<T, R, C> {
    let mut out = SMatrix::<T, R, C>::zeros();
    for i in 0..R {
        for k in 0..K {
            let aik = &a[(i, k)];
            if aik.is_zero() {
                continue;
            }
            for j in 0..C {
                let bkj = &b[(k, j)];
                if !bkj.is_zero() {
                    out[(i, j)] = out[(i, j)].clone() + aik.clone() * bkj.clone();
                }
            }
        }
    }
    out
}

pub fn commutator<T: Field, const N: usize>(a: &SMatrix<T, N, N>, b: &SMatrix<T, N, N>) -> SMatrix<T, N, N> {
    sub(&matmul(a, b), &matmul(b, a))
}

pub fn add<T: Field, const R: usize, const C: usize>(a: &SMatrix<T, R, C>, b: &SMatrix<T, R, C>) -> SMatrix<T, R, C> {
    a.zip_map(b, |x, y| x + y)
}

pub fn sub<T: Field, const R: usize, const C: usize>(a: &SMatrix<T, R, C>, b: &SMatrix<T, R, C>) -> SMatrix<T, R, C> {
    a.zip_map(b, |x, y| x - y)
}

pub fn scale<T: Field, const R: usize, const C: usize>(a: &SMatrix<T, R, C>, s: &T) -> SMatrix<T, R, C> {
    a.map(|x| if x.is_zero() { x } else { x * s.clone() })
}

/// Vectors of ℝ⁷ (points and tangent vectors of S⁶).
pub type Vec7<T> = nalgebra::SVector<T, 7>;

pub fn dot<T: Field, const N: usize>(a: &nalgebra::SVector<T, N>, b: &nalgebra::SVector<T, N>) -> T {
    trace_abt(a, b)
}

/// Outer product a bᵀ.
pub fn outer<T: Field, const N: usize>(a: &nalgebra::SVector<T, N>, b: &nalgebra::SVector<T, N>) -> SMatrix<T, N, N> {
    SMatrix::from_fn(|i, j| a[i].clone() * b[j].clone())
}

/// Frobenius-type trace tr(A Bᵀ) (no conjugation).
pub fn trace_abt<T: Field, const R: usize, const C: usize>(a: &SMatrix<T, R, C>, b: &SMatrix<T, R, C>) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}

/// Row-major dense matrix used by the elimination routines.
pub type Rows<F> = Vec<Vec<F>>;

fn max_magnitude<F: Field>(m: &Rows<F>) -> f64 {
    m.iter().flatten().map(Field::magnitude).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
}

/// Reduces `m` in place to reduced row echelon form using the first `ncols`
/// columns as pivot candidates; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Rows<F>, ncols: usize) -> Vec<usize> {
    let scale = max_magnitude(m);
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let pick = if F::EXACT {
            (row..nrows).find(|&r| !m[r][col].is_zero())
        } else {
            (row..nrows)
                .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()))
                .filter(|&r| !negligible(&m[r][col], scale))
        };
        let Some(p) = pick else { continue };
        m.swap(row, p);
        let inv = F::one() / m[row][col].clone();
        for v in m[row].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
            if !F::EXACT {
                other[col] = F::zero();
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(rows: &Rows<F>) -> usize {
    let mut m = rows.clone();
    let n = m.first().map_or(0, Vec::len);
    rref(&mut m, n).len()
}

/// Solves `a · c = b` for `a` with independent columns. Returns `Ok(None)`
/// when the system is inconsistent and a domain error when the columns of
/// `a` are dependent.
pub fn solve<F: Field>(a: &Rows<F>, b: &[F]) -> Result<Option<Vec<F>>> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Rows<F> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let scale_b = b.iter().map(Field::magnitude).fold(0.0, f64::max);
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return Err(Error::Domain(format!("basis is rank deficient (rank {} < {n})", pivots.len())));
    }
    let consistent = m[n..].iter().all(|r| {
        if F::EXACT {
            r[n].is_zero()
        } else {
            r[n].magnitude() <= 1e-9 * scale_b.max(1.0)
        }
    });
    if !consistent {
        return Ok(None);
    }
    Ok(Some(m[..n].iter().map(|r| r[n].clone()).collect()))
}

/// Inverse of a square matrix; fails when singular.
pub fn inverse<F: Field>(a: &Rows<F>) -> Result<Rows<F>> {
    let n = a.len();
    let mut m: Rows<F> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    if rref(&mut m, n).len() < n {
        return Err(Error::Domain("singular matrix".into()));
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn to_rows<T: Field, const R: usize, const C: usize>(m: &SMatrix<T, R, C>) -> Rows<T> {
    (0..R).map(|i| (0..C).map(|j| m[(i, j)].clone()).collect()).collect()
}

pub fn from_rows<T: Field, const R: usize, const C: usize>(rows: &Rows<T>) -> SMatrix<T, R, C> {
    SMatrix::from_fn(|i, j| rows[i][j].clone())
}

/// Largest absolute entry, as f64.
pub fn max_abs<T: Field, const R: usize, const C: usize>(m: &SMatrix<T, R, C>) -> f64 {
    m.iter().map(Field::magnitude).fold(0.0, f64::max)
}
