//! The octonions 𝕆 in the basis e0..e7 with a fixed multiplication table,
//! conjugation, norms and the inner automorphisms u ↦ v u v⁻¹.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat7;
use crate::scalars::Scalar;

/// Products of basis elements: `TABLE[i][j] = ±(k+1)` encodes e_i·e_j = ±e_k.
/// Row i is the left factor.
pub const TABLE: [[i8; 8]; 8] = [
    [1, 2, 3, 4, 5, 6, 7, 8],
    [2, -1, 4, -3, 6, -5, -8, 7],
    [3, -4, -1, 2, 7, 8, -5, -6],
    [4, 3, -2, -1, 8, -7, 6, -5],
    [5, -6, -7, -8, -1, 2, 3, 4],
    [6, 5, -8, 7, -2, -1, -4, 3],
    [7, 8, 5, -6, -3, 4, -1, -2],
    [8, -7, 6, 5, -4, -3, 2, -1],
];

/// e_i·e_j as (sign, index).
pub fn basis_product(i: usize, j: usize) -> (i8, usize) {
    let t = TABLE[i][j];
    (t.signum(), t.unsigned_abs() as usize - 1)
}

/// Tolerance for "unit length" in numeric mode.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Octonion<S> {
    pub c: [S; 8],
}

impl<S: Scalar> Octonion<S> {
    pub fn new(c: [S; 8]) -> Self {
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: std::array::from_fn(|_| S::zero()) }
    }

    pub fn basis(i: usize) -> Self {
        let mut o = Self::zero();
        o.c[i] = S::one();
        o
    }

    /// The purely imaginary octonion with coordinates x on e1..e7.
    pub fn from_imag(x: &[S; 7]) -> Self {
        Self { c: std::array::from_fn(|i| if i == 0 { S::zero() } else { x[i - 1].clone() }) }
    }

    pub fn imag_part(&self) -> [S; 7] {
        std::array::from_fn(|i| self.c[i + 1].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { c: std::array::from_fn(|i| self.c[i].clone() * s.clone()) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (s, k) = basis_product(i, j);
                let p = a.clone() * b.clone();
                out.c[k] = if s > 0 { out.c[k].clone() + p } else { out.c[k].clone() - p };
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { c: std::array::from_fn(|i| if i == 0 { self.c[0].clone() } else { -self.c[i].clone() }) }
    }

    pub fn re(&self) -> Self {
        let mut o = Self::zero();
        o.c[0] = self.c[0].clone();
        o
    }

    pub fn im(&self) -> Self {
        let mut o = self.clone();
        o.c[0] = S::zero();
        o
    }

    pub fn norm_sq(&self) -> S {
        self.c.iter().fold(S::zero(), |acc, v| acc + v.clone() * v.clone())
    }

    /// |u|; in exact mode only when the square root lies in the field.
    pub fn norm(&self) -> Result<S> {
        self.norm_sq()
            .try_sqrt()
            .ok_or_else(|| Error::Mode("norm not representable in Q(sqrt2, sqrt3)".into()))
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sq().checked_inv()?;
        Ok(self.conj().scale(&n))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.c[1..].iter().all(|v| v.near_zero(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> Add for &Octonion<S> {
    type Output = Octonion<S>;
    fn add(self, o: &Octonion<S>) -> Octonion<S> {
        Octonion { c: std::array::from_fn(|i| self.c[i].clone() + o.c[i].clone()) }
    }
}

impl<S: Scalar> Sub for &Octonion<S> {
    type Output = Octonion<S>;
    fn sub(self, o: &Octonion<S>) -> Octonion<S> {
        Octonion { c: std::array::from_fn(|i| self.c[i].clone() - o.c[i].clone()) }
    }
}

impl<S: Scalar> Neg for &Octonion<S> {
    type Output = Octonion<S>;
    fn neg(self) -> Octonion<S> {
        Octonion { c: std::array::from_fn(|i| -self.c[i].clone()) }
    }
}

impl<S: Scalar> Mul for &Octonion<S> {
    type Output = Octonion<S>;
    fn mul(self, o: &Octonion<S>) -> Octonion<S> {
        Octonion::mul(self, o)
    }
}

/// Whether conjugation by the non-real octonion v is an automorphism of 𝕆,
/// i.e. 3(re v)² = |im v|² (equivalently 4(re v)² = |v|²).
pub fn is_inner_automorphism_seed<S: Scalar>(v: &Octonion<S>, tol: f64) -> Result<bool> {
    if v.is_real(tol) {
        return Err(Error::Domain("criterion applies to non-real octonions".into()));
    }
    let re2 = v.c[0].clone() * v.c[0].clone();
    let im2 = v.im().norm_sq();
    let d = S::from_int(3) * re2 - im2.clone();
    Ok(d.near_zero(tol * im2.to_f64().max(1.0)))
}

fn check_unit_imaginary<S: Scalar>(x: &Octonion<S>) -> Result<()> {
    if !x.c[0].near_zero(UNIT_TOL) {
        return Err(Error::Domain("point must be purely imaginary".into()));
    }
    let n = x.norm_sq() - S::one();
    if !n.near_zero(UNIT_TOL) {
        return Err(Error::Domain(format!("point must have unit length (|x|²-1 = {:e})", n.to_f64())));
    }
    Ok(())
}

/// (1/4)(e0 + √3x) u (e0 − √3x) for a unit imaginary x: the rotation of
/// im 𝕆 by 2π/3 about x, extended by the identity on re 𝕆.
pub fn conj_by_point<S: Scalar>(x: &Octonion<S>, u: &Octonion<S>) -> Result<Octonion<S>> {
    check_unit_imaginary(x)?;
    let s3x = x.scale(&S::sqrt3());
    let one = Octonion::basis(0);
    let v = &one + &s3x;
    let vbar = &one - &s3x;
    // alternativity makes the bracketing irrelevant
    Ok(v.mul(u).mul(&vbar).scale(&S::from_ratio(1, 4)))
}

/// diag(1, m) applied to an octonion.
pub fn apply_extended<S: Scalar>(m: &Mat7<S>, u: &Octonion<S>) -> Octonion<S> {
    let mut out = Octonion::zero();
    out.c[0] = u.c[0].clone();
    for i in 0..7 {
        let mut acc = S::zero();
        for j in 0..7 {
            if !m[(i, j)].is_zero() && !u.c[j + 1].is_zero() {
                acc = acc + m[(i, j)].clone() * u.c[j + 1].clone();
            }
        }
        out.c[i + 1] = acc;
    }
    out
}

/// Largest |φ(e_i e_j) − φ(e_i) φ(e_j)| over basis pairs, φ = diag(1, m).
pub fn automorphism_residual<S: Scalar>(m: &Mat7<S>) -> f64 {
    let imgs: Vec<Octonion<S>> = (0..8).map(|i| apply_extended(m, &Octonion::basis(i))).collect();
    let mut worst = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let lhs = apply_extended(m, &Octonion::basis(i).mul(&Octonion::basis(j)));
            let rhs = imgs[i].mul(&imgs[j]);
            worst = worst.max((&lhs - &rhs).max_abs());
        }
    }
    worst
}

pub fn is_octonion_automorphism<S: Scalar>(m: &Mat7<S>, tol: f64) -> bool {
    let r = automorphism_residual(m);
    if S::EXACT {
        r == 0.0
    } else {
        r <= tol
    }
}

/// Largest |D(e_i e_j) − (D e_i) e_j − e_i (D e_j)| over basis pairs,
/// D = diag(0, m). Zero exactly when m is a derivation of 𝕆.
pub fn derivation_residual<S: Scalar>(m: &Mat7<S>) -> f64 {
    let d = |u: &Octonion<S>| {
        let mut o = apply_extended(m, u);
        o.c[0] = S::zero();
        o
    };
    let imgs: Vec<Octonion<S>> = (0..8).map(|i| d(&Octonion::basis(i))).collect();
    let mut worst = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let ei = Octonion::basis(i);
            let ej = Octonion::basis(j);
            let lhs = d(&ei.mul(&ej));
            let rhs = &imgs[i].mul(&ej) + &ei.mul(&imgs[j]);
            worst = worst.max((&lhs - &rhs).max_abs());
        }
    }
    worst
}

impl<S: Scalar> Default for Octonion<S> {
    fn default() -> Self {
        Self::zero()
    }
}
