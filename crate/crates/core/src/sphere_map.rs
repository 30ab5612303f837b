//! The map f: S⁶ → G2, x ↦ conjugation by (e0 + √3x)/2 restricted to im 𝕆,
//! its derivative, the inverse of the derivative in closed form, and the
//! logarithm of Λ = f(e1).

use nalgebra::Schur;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::g2_algebra::CMat7;
use crate::linalg::{self, Mat7, Vec7};
use crate::octonion::{basis_product, UNIT_TOL};
use crate::scalars::Scalar;

/// A point of S⁶ ⊂ im 𝕆 = ℝ⁷.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint<S: Scalar> {
    x: Vec7<S>,
}

impl<S: Scalar> SpherePoint<S> {
    /// Checks |x| = 1 (exactly in exact mode, to 1e-12 otherwise).
    pub fn new(x: Vec7<S>) -> Result<Self> {
        let d = linalg::dot(&x, &x) - S::one();
        if !d.near_zero(UNIT_TOL) {
            return Err(Error::Domain(format!("point is not on the unit sphere (|x|²-1 = {:e})", d.to_f64())));
        }
        Ok(Self { x })
    }

    pub fn from_array(x: [S; 7]) -> Result<Self> {
        Self::new(Vec7::from_iterator(x))
    }

    /// The basis vector e_{i}, i ∈ 1..=7.
    pub fn basis(i: usize) -> Self {
        let mut x = Vec7::<S>::zeros();
        x[i - 1] = S::one();
        Self { x }
    }

    pub fn coords(&self) -> &Vec7<S> {
        &self.x
    }

    pub fn neg(&self) -> Self {
        Self { x: -self.x.clone() }
    }

    pub fn to_f64(&self) -> SpherePoint<f64> {
        SpherePoint { x: self.x.map(|v| v.to_f64()) }
    }
}

impl SpherePoint<f64> {
    pub fn normalized(x: Vec7<f64>) -> Result<Self> {
        let n = x.norm();
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(Self { x: x / n })
    }
}

/// For j ≠ i, the unique (m, s) with e_m·e_i = s·e_j (0-based indices of
/// e1..e7). This is the linear part of column i of f.
pub fn linear_term(j: usize, i: usize) -> Option<(usize, i8)> {
    (0..7).find_map(|m| {
        let (s, k) = basis_product(m + 1, i + 1);
        (k == j + 1 && m != i).then_some((m, s))
    })
}

/// L(v)_{ji} = Σ_m s·v_m over e_m·e_i = s·e_j; f(x) − (−½ + (3/2)xxᵀ) = (√3/2)L(x).
pub fn linear_part<S: Scalar>(v: &Vec7<S>) -> Mat7<S> {
    Mat7::from_fn(|j, i| match linear_term(j, i) {
        Some((m, s)) if s > 0 => v[m].clone(),
        Some((m, _)) => -v[m].clone(),
        None => S::zero(),
    })
}

/// f(x) = −½·id + (3/2)·x xᵀ + (√3/2)·L(x): the rotation of ℝ⁷ by 2π/3
/// about x that is an automorphism of 𝕆.
pub fn f_matrix<S: Scalar>(x: &SpherePoint<S>) -> Mat7<S> {
    f_of_vector(&x.x)
}

/// The same polynomial expression evaluated at an arbitrary vector.
pub fn f_of_vector<S: Scalar>(x: &Vec7<S>) -> Mat7<S> {
    let half = S::from_ratio(1, 2);
    let quad = linalg::scale(&linalg::outer(x, x), &S::from_ratio(3, 2));
    let lin = linalg::scale(&linear_part(x), &(S::sqrt3() * half.clone()));
    let mut m = linalg::add(&quad, &lin);
    for i in 0..7 {
        m[(i, i)] = m[(i, i)].clone() - half.clone();
    }
    m
}

fn check_tangent<S: Scalar>(x: &SpherePoint<S>, xi: &Vec7<S>) -> Result<()> {
    let d = linalg::dot(&x.x, xi);
    let scale = xi.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max).max(1.0);
    if !d.near_zero(1e-9 * scale) {
        return Err(Error::Domain(format!("vector is not tangent at x (<x,xi> = {:e})", d.to_f64())));
    }
    Ok(())
}

/// The derivative f(x)_* ξ = (3/2)(x ξᵀ + ξ xᵀ) + (√3/2)·L(ξ).
pub fn f_pushforward<S: Scalar>(x: &SpherePoint<S>, xi: &Vec7<S>) -> Result<Mat7<S>> {
    check_tangent(x, xi)?;
    Ok(pushforward_unchecked(&x.x, xi))
}

pub(crate) fn pushforward_unchecked<S: Scalar>(x: &Vec7<S>, xi: &Vec7<S>) -> Mat7<S> {
    let sym = linalg::add(&linalg::outer(x, xi), &linalg::outer(xi, x));
    let quad = linalg::scale(&sym, &S::from_ratio(3, 2));
    let lin = linalg::scale(&linear_part(xi), &(S::sqrt3() / S::from_int(2)));
    linalg::add(&quad, &lin)
}

/// Inverse of the derivative: (1/3)(2·id + f(x))·A·x. Requires ⟨Ax, x⟩ = 0,
/// within 1e-9·max|A| in numeric mode.
pub fn f_pullback<S: Scalar>(x: &SpherePoint<S>, a: &Mat7<S>) -> Result<Vec7<S>> {
    let ax = linalg::matmul(a, &x.x);
    let d = linalg::dot(&ax, &x.x);
    if !d.near_zero(1e-9 * linalg::max_abs(a).max(f64::MIN_POSITIVE)) {
        return Err(Error::NonTangent { residual: d.to_f64().abs() });
    }
    let fax = linalg::matmul(&f_matrix(x), &ax);
    let two_ax = linalg::scale(&ax, &S::from_int(2));
    Ok(linalg::scale(&linalg::add(&two_ax, &fax), &S::from_ratio(1, 3)))
}

/// The limit form of the inverse, ((s − f(x))⁻¹ A) x as s → 1, evaluated at
/// s = 1 + δ and 1 + 2δ and extrapolated linearly in s − 1.
pub fn s_regularized_pullback(x: &SpherePoint<f64>, a: &Mat7<f64>, delta: f64) -> Result<Vec7<f64>> {
    let f = f_matrix(x);
    let at = |s: f64| -> Result<Vec7<f64>> {
        let m = Mat7::<f64>::identity() * s - f;
        let inv = m.try_inverse().ok_or_else(|| Error::Domain("s - f(x) is singular".into()))?;
        Ok(inv * a * x.x)
    };
    Ok(at(1.0 + delta)? * 2.0 - at(1.0 + 2.0 * delta)?)
}

/// Λ = f(e1), the generator of the centre of SU(3).
pub fn lambda<S: Scalar>() -> Mat7<S> {
    f_matrix(&SpherePoint::basis(1))
}

/// Principal logarithm of Λ through a complex Schur decomposition (Λ is
/// normal, so the triangular factor is diagonal); eigenvalue arguments are
/// taken in (−π, π]. This rotates each of the three planes by 2π/3 and is
/// not in g2.
pub fn principal_log_lambda() -> CMat7<f64> {
    let l = lambda::<f64>().map(|v| Complex::new(v, 0.0));
    let (q, t) = Schur::new(l).unpack();
    let mut d = CMat7::<f64>::zeros();
    for i in 0..7 {
        let z = t[(i, i)];
        d[(i, i)] = if z.norm() > 0.0 { z.ln() } else { Complex::zero() };
    }
    q * d * q.adjoint()
}

/// Rotation planes of Λ.
const LAMBDA_PLANES: [(usize, usize); 3] = [(1, 2), (3, 4), (5, 6)];

/// A logarithm λ of Λ lying in the Cartan subalgebra: the principal log with
/// the angle in one plane shifted by −2π, the first plane (in coordinate
/// order) for which the result is in span{H+, H−}.
pub fn lambda_log() -> CMat7<f64> {
    let p = principal_log_lambda();
    let basis = crate::g2_algebra::RealBasis::<f64>::standard();
    let cartan = [basis.get("H+"), basis.get("H-")].map(|m| m.map(|v| Complex::new(v, 0.0)));
    for (a, b) in LAMBDA_PLANES {
        let mut cand = p;
        for (i, j) in [(a, a), (a, b), (b, a), (b, b)] {
            cand[(i, j)] -= p[(i, j)] * 3.0;
        }
        if matches!(crate::g2_algebra::span_membership(&cand, &cartan), Ok(m) if m.is_inside()) {
            return cand;
        }
    }
    p
}

/// exp(λ) computed as a matrix exponential.
pub fn exp_c(m: &CMat7<f64>) -> CMat7<f64> {
    m.exp()
}

impl<S: Scalar> std::ops::Index<usize> for SpherePoint<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.x[i]
    }
}

/// Checks f(x) x = x, f(x)³ = id and id + f + f² = 3 x xᵀ; returns the worst
/// residual.
pub fn identity_residuals<S: Scalar>(x: &SpherePoint<S>) -> [f64; 3] {
    let f = f_matrix(x);
    let f2 = linalg::matmul(&f, &f);
    let f3 = linalg::matmul(&f2, &f);
    let fix = linalg::max_abs(&linalg::sub(&linalg::matmul(&f, &x.x), &x.x));
    let cube = linalg::max_abs(&linalg::sub(&f3, &Mat7::<S>::identity()));
    let sum = linalg::add(&linalg::add(&Mat7::<S>::identity(), &f), &f2);
    let proj = linalg::scale(&linalg::outer(&x.x, &x.x), &S::from_int(3));
    [fix, cube, linalg::max_abs(&linalg::sub(&sum, &proj))]
}
