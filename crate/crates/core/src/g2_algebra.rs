//! The complexified Lie algebra g2 ⊂ so(7, ℂ) as explicit 7×7 matrices:
//! the root basis {H_{a,±b}, V_{±k}, U_{±k}}, the real orthonormal basis
//! {H₊, H₋, X_{±k}, Y_{±k}}, the Hermitian product and span tests.
//!
//! Indices are 0-based: row/column 0 corresponds to e1.

use nalgebra::{DMatrix, DVector, SVector};
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Field, Mat7};
use crate::octonion::derivation_residual;
use crate::scalars::Scalar;

pub type CMat7<S> = Mat7<Complex<S>>;

/// Residual threshold of the numeric span test.
pub const SPAN_TOL: f64 = 1e-9;

fn cx<S: Scalar>(re: S, im: S) -> Complex<S> {
    Complex::new(re, im)
}

/// Builds a complex matrix from (row, col, re, im) entries; `im` is
/// multiplied by `sign`, the whole matrix by `factor`.
fn from_entries<S: Scalar>(entries: &[(usize, usize, i64, i64)], sign: i64, factor: &S) -> CMat7<S> {
    let mut m = CMat7::<S>::zeros();
    for &(i, j, re, im) in entries {
        m[(i, j)] = cx(S::from_int(re) * factor.clone(), S::from_int(im * sign) * factor.clone());
    }
    m
}

const V_ENTRIES: [&[(usize, usize, i64, i64)]; 3] = [
    &[(1, 3, -1, 0), (1, 4, 0, -1), (2, 3, 0, 1), (2, 4, -1, 0), (3, 1, 1, 0), (3, 2, 0, -1), (4, 1, 0, 1), (4, 2, 1, 0)],
    &[(1, 5, -1, 0), (1, 6, 0, 1), (2, 5, 0, 1), (2, 6, 1, 0), (5, 1, 1, 0), (5, 2, 0, -1), (6, 1, 0, -1), (6, 2, -1, 0)],
    &[(3, 5, -1, 0), (3, 6, 0, 1), (4, 5, 0, 1), (4, 6, 1, 0), (5, 3, 1, 0), (5, 4, 0, -1), (6, 3, 0, -1), (6, 4, -1, 0)],
];

const U_ENTRIES: [&[(usize, usize, i64, i64)]; 3] = [
    &[
        (0, 1, 0, -2), (0, 2, -2, 0), (1, 0, 0, 2), (2, 0, 2, 0),
        (3, 5, -1, 0), (3, 6, 0, 1), (4, 5, 0, -1), (4, 6, -1, 0),
        (5, 3, 1, 0), (5, 4, 0, 1), (6, 3, 0, -1), (6, 4, 1, 0),
    ],
    &[
        (0, 3, 0, 2), (0, 4, 2, 0), (3, 0, 0, -2), (4, 0, -2, 0),
        (1, 5, -1, 0), (1, 6, 0, 1), (2, 5, 0, -1), (2, 6, -1, 0),
        (5, 1, 1, 0), (5, 2, 0, 1), (6, 1, 0, -1), (6, 2, 1, 0),
    ],
    &[
        (0, 5, 2, 0), (0, 6, 0, -2), (5, 0, -2, 0), (6, 0, 0, 2),
        (1, 3, 0, 1), (1, 4, 1, 0), (2, 3, 1, 0), (2, 4, 0, -1),
        (3, 1, 0, -1), (3, 2, -1, 0), (4, 1, -1, 0), (4, 2, 0, 1),
    ],
];

fn check_k_sign(k: usize, sign: i8) {
    assert!((1..=3).contains(&k) && (sign == 1 || sign == -1), "root label out of range: {k}, {sign}");
}

/// V_{sign k}, k ∈ {1,2,3}, normalised by 1/(2√2).
pub fn v_root<S: Scalar>(k: usize, sign: i8) -> CMat7<S> {
    check_k_sign(k, sign);
    let f = S::one() / (S::from_int(2) * S::sqrt2());
    from_entries(V_ENTRIES[k - 1], sign as i64, &f)
}

/// U_{sign k}, k ∈ {1,2,3}, normalised by 1/(2√6).
pub fn u_root<S: Scalar>(k: usize, sign: i8) -> CMat7<S> {
    check_k_sign(k, sign);
    let f = S::one() / (S::from_int(2) * S::sqrt2() * S::sqrt3());
    from_entries(U_ENTRIES[k - 1], sign as i64, &f)
}

/// H_{a, sign·b}, normalised by 1/(2√(a²+b²)).
pub fn h_root<S: Scalar>(a: &S, b: &S, sign: i8) -> Result<CMat7<S>> {
    if a.to_f64() <= 0.0 {
        return Err(Error::Domain("root basis requires a > 0".into()));
    }
    if b.is_zero() {
        return Err(Error::Domain("root basis requires b != 0".into()));
    }
    let n = (a.clone() * a.clone() + b.clone() * b.clone())
        .try_sqrt()
        .ok_or_else(|| Error::Mode("sqrt(a^2+b^2) is not in Q(sqrt2, sqrt3)".into()))?;
    let f = S::one() / (S::from_int(2) * n);
    let sb = if sign > 0 { b.clone() } else { -b.clone() };
    let z = S::zero();
    let mut m = CMat7::<S>::zeros();
    m[(1, 2)] = cx(-a.clone(), z.clone());
    m[(2, 1)] = cx(a.clone(), z.clone());
    m[(3, 4)] = cx(z.clone(), -sb.clone());
    m[(4, 3)] = cx(z.clone(), sb.clone());
    m[(5, 6)] = cx(-a.clone(), -sb.clone());
    m[(6, 5)] = cx(a.clone(), sb);
    Ok(m.map(|v| v * f.clone()))
}

/// The root basis at the parameters (a, b).
#[derive(Clone, Debug)]
pub struct RootBasis<S: Scalar> {
    pub a: S,
    pub b: S,
    pub h_plus: CMat7<S>,
    pub h_minus: CMat7<S>,
    /// V_{+1}, V_{−1}, V_{+2}, V_{−2}, V_{+3}, V_{−3}
    pub v: [CMat7<S>; 6],
    /// U_{+1}, U_{−1}, U_{+2}, U_{−2}, U_{+3}, U_{−3}
    pub u: [CMat7<S>; 6],
}

pub const ROOT_NAMES: [&str; 14] = [
    "H+", "H-", "V+1", "V-1", "V+2", "V-2", "V+3", "V-3", "U+1", "U-1", "U+2", "U-2", "U+3", "U-3",
];

fn pm_family<S: Scalar>(f: fn(usize, i8) -> CMat7<S>) -> [CMat7<S>; 6] {
    std::array::from_fn(|i| f(i / 2 + 1, if i % 2 == 0 { 1 } else { -1 }))
}

/// Root basis for a > 0, b ≠ 0. In exact mode √(a²+b²) must lie in the
/// field, e.g. (a, b) = (3, 4).
pub fn root_basis<S: Scalar>(a: S, b: S) -> Result<RootBasis<S>> {
    let h_plus = h_root(&a, &b, 1)?;
    let h_minus = h_root(&a, &b, -1)?;
    Ok(RootBasis { a, b, h_plus, h_minus, v: pm_family(v_root), u: pm_family(u_root) })
}

impl<S: Scalar> RootBasis<S> {
    /// All 14 elements in the order of [`ROOT_NAMES`].
    pub fn elements(&self) -> Vec<CMat7<S>> {
        let mut out = vec![self.h_plus.clone(), self.h_minus.clone()];
        out.extend(self.v.iter().cloned());
        out.extend(self.u.iter().cloned());
        out
    }

    /// Basis of su(3)^ℂ: H_{a,±b} and V_{±k}.
    pub fn su3(&self) -> Vec<CMat7<S>> {
        self.elements()[..8].to_vec()
    }

    /// The real basis obtained from this root basis through
    /// H₊ = √(a²+b²)/(2a)·(H_{a,+b} + H_{a,−b}),
    /// H₋ = √(a²+b²)/(√−3·b)·(H_{a,+b} − H_{a,−b}) − H₊/√3 and
    /// X_{+k} = (U_{+k} + U_{−k})/√2, X_{−k} = (U_{+k} − U_{−k})/√−2, Y likewise from V.
    pub fn real_basis(&self) -> Result<RealBasis<S>> {
        let n = (self.a.clone() * self.a.clone() + self.b.clone() * self.b.clone())
            .try_sqrt()
            .ok_or_else(|| Error::Mode("sqrt(a^2+b^2) is not in Q(sqrt2, sqrt3)".into()))?;
        let sum = linalg::add(&self.h_plus, &self.h_minus);
        let diff = linalg::sub(&self.h_plus, &self.h_minus);
        let hp = linalg::scale(&sum, &cx(n.clone() / (S::from_int(2) * self.a.clone()), S::zero()));
        // 1/(i√3 b) = −i/(√3 b)
        let k = cx(S::zero(), -(n / (S::sqrt3() * self.b.clone())));
        let hm = linalg::sub(&linalg::scale(&diff, &k), &linalg::scale(&hp, &cx(S::one() / S::sqrt3(), S::zero())));
        let mut elems = vec![real_part_checked(&hp)?, real_part_checked(&hm)?];
        for fam in [&self.u, &self.v] {
            for k in 0..3 {
                let (p, m) = (&fam[2 * k], &fam[2 * k + 1]);
                let (x_plus, x_minus) = real_pair(p, m);
                elems.push(real_part_checked(&x_plus)?);
                elems.push(real_part_checked(&x_minus)?);
            }
        }
        Ok(RealBasis { elems: elems.try_into().expect("14 elements") })
    }
}

/// ((P + M)/√2, (P − M)/(i√2)).
fn real_pair<S: Scalar>(p: &CMat7<S>, m: &CMat7<S>) -> (CMat7<S>, CMat7<S>) {
    let r = S::one() / S::sqrt2();
    let plus = linalg::scale(&linalg::add(p, m), &cx(r.clone(), S::zero()));
    let minus = linalg::scale(&linalg::sub(p, m), &cx(S::zero(), -r));
    (plus, minus)
}

fn real_part_checked<S: Scalar>(m: &CMat7<S>) -> Result<Mat7<S>> {
    let im = m.iter().map(|v| v.im.to_f64().abs()).fold(0.0, f64::max);
    let exact_real = m.iter().all(|v| v.im.is_zero());
    if (S::EXACT && !exact_real) || im > 1e-12 {
        return Err(Error::Consistency(format!("expected a real matrix, imaginary part {im:e}")));
    }
    Ok(m.map(|v| v.re))
}

pub fn re_part<S: Scalar>(m: &CMat7<S>) -> Mat7<S> {
    m.map(|v| v.re)
}

pub fn im_part<S: Scalar>(m: &CMat7<S>) -> Mat7<S> {
    m.map(|v| v.im)
}

pub fn complexify<S: Scalar>(m: &Mat7<S>) -> CMat7<S> {
    m.map(|v| cx(v, S::zero()))
}

pub fn conj_mat<S: Scalar>(m: &CMat7<S>) -> CMat7<S> {
    m.map(|v| v.conj())
}

/// ⟨V, W⟩ = tr(V · W̄ᵀ).
pub fn hermitian_ip<S: Scalar>(v: &CMat7<S>, w: &CMat7<S>) -> Complex<S> {
    linalg::trace_abt(v, &conj_mat(w))
}

/// Matrix commutator VW − WV.
pub fn bracket<T: Field>(v: &Mat7<T>, w: &Mat7<T>) -> Mat7<T> {
    linalg::commutator(v, w)
}

/// The orthonormal real basis {H₊, H₋, X_{±k}, Y_{±k}} of g2.
#[derive(Clone, Debug, PartialEq)]
pub struct RealBasis<S: Scalar> {
    pub elems: [Mat7<S>; 14],
}

pub const REAL_NAMES: [&str; 14] = [
    "H+", "H-", "X+1", "X-1", "X+2", "X-2", "X+3", "X-3", "Y+1", "Y-1", "Y+2", "Y-2", "Y+3", "Y-3",
];

impl<S: Scalar> RealBasis<S> {
    /// The basis in closed form; it does not depend on the moduli.
    pub fn standard() -> Self {
        let half = S::from_ratio(1, 2);
        let r3 = S::one() / S::sqrt3();
        let mut hp = Mat7::<S>::zeros();
        let mut hm = Mat7::<S>::zeros();
        for (i, j, vp, vm) in [
            (1, 2, -half.clone(), half.clone() * r3.clone()),
            (3, 4, S::zero(), -r3.clone()),
            (5, 6, -half.clone(), -(half.clone() * r3.clone())),
        ] {
            hp[(i, j)] = vp.clone();
            hp[(j, i)] = -vp;
            hm[(i, j)] = vm.clone();
            hm[(j, i)] = -vm;
        }
        let mut elems = vec![hp, hm];
        for f in [u_root::<S> as fn(usize, i8) -> CMat7<S>, v_root::<S>] {
            for k in 1..=3 {
                let (p, m) = real_pair(&f(k, 1), &f(k, -1));
                elems.push(re_part(&p));
                elems.push(re_part(&m));
            }
        }
        Self { elems: elems.try_into().expect("14 elements") }
    }

    pub fn index_of(name: &str) -> Option<usize> {
        REAL_NAMES.iter().position(|n| *n == name)
    }

    pub fn get(&self, name: &str) -> &Mat7<S> {
        &self.elems[Self::index_of(name).unwrap_or_else(|| panic!("unknown basis name {name}"))]
    }

    /// Coordinates c_k = tr(M N_kᵀ).
    pub fn coords(&self, m: &Mat7<S>) -> SVector<S, 14> {
        SVector::from_fn(|k, _| linalg::trace_abt(m, &self.elems[k]))
    }

    /// Complex coordinates of a complex matrix (the basis is also
    /// Hermitian-orthonormal for g2^ℂ).
    pub fn coords_c(&self, m: &CMat7<S>) -> SVector<Complex<S>, 14> {
        SVector::from_fn(|k, _| linalg::trace_abt(m, &complexify(&self.elems[k])))
    }

    pub fn from_coords(&self, c: &SVector<S, 14>) -> Mat7<S> {
        let mut out = Mat7::<S>::zeros();
        for (k, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                out = linalg::add(&out, &linalg::scale(&self.elems[k], ck));
            }
        }
        out
    }

    pub fn from_coords_c(&self, c: &SVector<Complex<S>, 14>) -> CMat7<S> {
        let mut out = CMat7::<S>::zeros();
        for (k, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                out = linalg::add(&out, &linalg::scale(&complexify(&self.elems[k]), ck));
            }
        }
        out
    }

    /// Coordinates together with max|M − Σ c_k N_k|; the residual is nonzero
    /// exactly when M is not in g2.
    pub fn expand(&self, m: &Mat7<S>) -> (SVector<S, 14>, f64) {
        let c = self.coords(m);
        let r = linalg::max_abs(&linalg::sub(m, &self.from_coords(&c)));
        (c, r)
    }
}

/// Outcome of a span test.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership<C> {
    Inside(Vec<C>),
    /// Not in the span; `residual` is the Hermitian norm of W minus its best
    /// approximation.
    Outside { residual: f64 },
}

impl<C> Membership<C> {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }
}

fn flatten<S: Scalar>(m: &CMat7<S>) -> Vec<Complex<S>> {
    m.iter().cloned().collect()
}

/// Expresses W in the given basis. Exact mode uses Gauss–Jordan over
/// ℚ(√2,√3)(i); numeric mode column-pivoted QR with residual threshold
/// [`SPAN_TOL`]. Errors when the basis is linearly dependent.
pub fn span_membership<S: Scalar>(w: &CMat7<S>, basis: &[CMat7<S>]) -> Result<Membership<Complex<S>>> {
    if basis.is_empty() {
        let r = hermitian_ip(w, w).re.to_f64().sqrt();
        return Ok(if r <= SPAN_TOL { Membership::Inside(vec![]) } else { Membership::Outside { residual: r } });
    }
    if S::EXACT {
        let cols: Vec<Vec<Complex<S>>> = basis.iter().map(flatten).collect();
        let rows: linalg::Rows<Complex<S>> = (0..49).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        match linalg::solve(&rows, &flatten(w))? {
            Some(c) => Ok(Membership::Inside(c)),
            None => {
                let wf = w.map(|v| Complex::new(v.re.to_f64(), v.im.to_f64()));
                let bf: Vec<CMat7<f64>> =
                    basis.iter().map(|b| b.map(|v| Complex::new(v.re.to_f64(), v.im.to_f64()))).collect();
                let (_, residual) = least_squares(&wf, &bf)?;
                Ok(Membership::Outside { residual: residual.max(f64::MIN_POSITIVE) })
            }
        }
    } else {
        let wf = w.map(|v| Complex::new(v.re.to_f64(), v.im.to_f64()));
        let bf: Vec<CMat7<f64>> = basis.iter().map(|b| b.map(|v| Complex::new(v.re.to_f64(), v.im.to_f64()))).collect();
        let (c, residual) = least_squares(&wf, &bf)?;
        if residual <= SPAN_TOL {
            Ok(Membership::Inside(c.iter().map(|z| cx(S::from_f64(z.re), S::from_f64(z.im))).collect()))
        } else {
            Ok(Membership::Outside { residual })
        }
    }
}

/// Least squares via column-pivoted QR; returns coefficients and residual.
pub fn least_squares(w: &CMat7<f64>, basis: &[CMat7<f64>]) -> Result<(Vec<Complex<f64>>, f64)> {
    let n = basis.len();
    let a = DMatrix::from_fn(49, n, |i, j| basis[j][(i % 7, i / 7)]);
    let b = DVector::from_fn(49, |i, _| w[(i % 7, i / 7)]);
    let qr = a.clone().col_piv_qr();
    let (q, r, p) = qr.unpack();
    let r0 = r[(0, 0)].norm().max(f64::MIN_POSITIVE);
    if (0..n).any(|i| r[(i, i)].norm() <= 1e-12 * r0) {
        return Err(Error::Domain("basis is rank deficient".into()));
    }
    let rhs = q.adjoint() * &b;
    let mut c = r
        .columns(0, n)
        .into_owned()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::Domain("basis is rank deficient".into()))?;
    p.inv_permute_rows(&mut c);
    let resid = (&a * &c - &b).norm();
    Ok((c.iter().cloned().collect(), resid))
}

/// Whether the real matrix m is a derivation of 𝕆 (an element of g2).
pub fn is_g2_element<S: Scalar>(m: &Mat7<S>, tol: f64) -> bool {
    let r = derivation_residual(m);
    if S::EXACT {
        r == 0.0
    } else {
        r <= tol
    }
}

/// Whether span(basis) is closed under brackets; returns the worst residual
/// (0 when closed, exactly in exact mode).
pub fn bracket_closure_residual<S: Scalar>(basis: &[CMat7<S>]) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let br = bracket(&basis[i], &basis[j]);
            if let Membership::Outside { residual } = span_membership(&br, basis)? {
                worst = worst.max(residual);
            }
        }
    }
    Ok(worst)
}

/// Complex rank of a family of complex matrices.
pub fn complex_rank<S: Scalar>(family: &[CMat7<S>]) -> usize {
    let rows: linalg::Rows<Complex<S>> = family.iter().map(flatten).collect();
    linalg::rank(&rows)
}

/// Largest |⟨b_i, b_j⟩ − δ_ij| for the real basis under tr(V Wᵀ).
pub fn orthonormality_defect<S: Scalar>(basis: &RealBasis<S>) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in basis.elems.iter().enumerate() {
        for (j, b) in basis.elems.iter().enumerate() {
            let g = linalg::trace_abt(a, b);
            let d = if i == j { g - S::one() } else { g };
            worst = worst.max(d.to_f64().abs());
        }
    }
    worst
}

/// exp(Σ c_k N_k) for normal coefficients scaled by `scale`: a random
/// element of the compact group G2.
pub fn random_g2(rng: &mut crate::rng::Rng, scale: f64) -> Mat7<f64> {
    let basis = RealBasis::<f64>::standard();
    let c = SVector::<f64, 14>::from_fn(|_, _| scale * rng.normal());
    basis.from_coords(&c).exp()
}

#[cfg(test)]
mod tests {
    use num_traits::One;
    use super::*;
    use crate::rng::Rng;
    use crate::scalars::QuadScalar;

    type Q = QuadScalar;

    fn rb34() -> RootBasis<Q> {
        root_basis(Q::from_int(3), Q::from_int(4)).unwrap()
    }

    #[test]
    fn closed_form_entry_of_h() {
        let rb = rb34();
        assert_eq!(rb.h_plus[(1, 2)], cx(Q::from_ratio(-3, 10), Q::zero()));
        assert_eq!(rb.h_plus[(3, 4)], cx(Q::zero(), Q::from_ratio(-4, 10)));
    }

    #[test]
    fn root_vectors_are_unit_and_conjugate() {
        let rb = rb34();
        for m in rb.elements() {
            assert_eq!(hermitian_ip(&m, &m), Complex::one());
        }
        assert_eq!(conj_mat(&rb.h_plus), rb.h_minus);
        for k in 0..3 {
            assert_eq!(conj_mat(&rb.v[2 * k]), rb.v[2 * k + 1]);
            assert_eq!(conj_mat(&rb.u[2 * k]), rb.u[2 * k + 1]);
        }
        assert_eq!(hermitian_ip(&rb.v[0], &rb.u[0]), Complex::zero());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(root_basis(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(root_basis(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(root_basis(Q::from_int(1), Q::from_int(2)), Err(Error::Mode(_))));
    }

    #[test]
    fn cartan_is_abelian() {
        let rb = rb34();
        assert_eq!(bracket(&rb.h_plus, &rb.h_minus), CMat7::<Q>::zeros());
    }

    #[test]
    fn real_basis_matches_closed_form_and_is_orthonormal() {
        let std = RealBasis::<Q>::standard();
        assert_eq!(orthonormality_defect(&std), 0.0);
        assert_eq!(rb34().real_basis().unwrap(), std);
        let rb11 = root_basis(Q::one(), Q::one()).unwrap().real_basis().unwrap();
        assert_eq!(rb11.elems[0], std.elems[0]);
        assert_eq!(linalg::trace_abt(std.get("X+1"), std.get("Y-2")), Q::zero());
        for m in &std.elems {
            assert!(is_g2_element(m, 0.0));
            assert_eq!(m.transpose(), -m.clone());
        }
    }

    #[test]
    fn numeric_real_basis_at_random_moduli() {
        let mut r = Rng::new(5);
        let std = RealBasis::<f64>::standard();
        for _ in 0..5 {
            let a = r.uniform_in(0.1, 4.0);
            let b = r.uniform_in(-4.0, 4.0);
            let rb = root_basis(a, b).unwrap().real_basis().unwrap();
            for (x, y) in rb.elems.iter().zip(&std.elems) {
                assert!((x - y).abs().max() < 1e-14);
            }
        }
    }

    #[test]
    fn commutator_regression_fixture() {
        // [X+1, Y+1] computed once exactly and frozen
        let std = RealBasis::<Q>::standard();
        let br = bracket(std.get("X+1"), std.get("Y+1"));
        let c = std.coords(&br);
        let (_, resid) = std.expand(&br);
        assert_eq!(resid, 0.0);
        let nonzero: Vec<(usize, String)> =
            c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, v.to_string())).collect();
        assert_eq!(nonzero, vec![(4, "1/2".to_string())]);
    }

    #[test]
    fn span_membership_examples() {
        let rb = rb34();
        let su3 = rb.su3();
        match span_membership(&rb.v[0], &su3).unwrap() {
            Membership::Inside(c) => {
                let expect: Vec<Complex<Q>> =
                    (0..8).map(|i| if i == 2 { Complex::one() } else { Complex::zero() }).collect();
                assert_eq!(c, expect);
            }
            other => panic!("{other:?}"),
        }
        match span_membership(&rb.u[0], &su3).unwrap() {
            Membership::Outside { residual } => assert!((residual - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let dep = vec![rb.v[0].clone(), rb.v[0].clone()];
        assert!(matches!(span_membership(&rb.u[0], &dep), Err(Error::Domain(_))));
        let rbf = root_basis(3.0, 4.0).unwrap();
        match span_membership(&rbf.u[0], &rbf.su3()).unwrap() {
            Membership::Outside { residual } => assert!((residual - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn su3_closed_and_full_rank() {
        let rb = rb34();
        assert_eq!(bracket_closure_residual(&rb.su3()).unwrap(), 0.0);
        assert_eq!(complex_rank(&rb.elements()), 14);
    }

    #[test]
    fn ip_is_conjugation_invariant() {
        let mut r = Rng::new(9);
        let rb = root_basis(1.3, 0.7).unwrap();
        let a = nalgebra::Matrix::<f64, nalgebra::Const<7>, nalgebra::Const<7>, _>::from_fn(|_, _| r.normal());
        let g = (a - a.transpose()).exp();
        let gc = g.map(|v| Complex::new(v, 0.0));
        let conj = |m: &CMat7<f64>| gc * m * gc.transpose();
        let (v, w) = (&rb.v[1], &rb.u[2]);
        let before = hermitian_ip(&(v + w), w);
        let after = hermitian_ip(&conj(&(v + w)), &conj(w));
        assert!((before - after).norm() < 1e-12);
        assert_eq!(hermitian_ip(&CMat7::<f64>::zeros(), w), Complex::new(0.0, 0.0));
    }

    #[test]
    fn random_skew_is_not_a_derivation() {
        let mut r = Rng::new(2024);
        let a = Mat7::<f64>::from_fn(|_, _| r.normal());
        let s = a - a.transpose();
        assert!(derivation_residual(&s) > 0.1);
        assert!(!is_g2_element(&s, 1e-10));
    }
}
