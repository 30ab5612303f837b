//! The Samelson family J on g2: the closed block form in the real basis,
//! the construction J(re W) = −im W from the Samelson subalgebra, and
//! algebra-level integrability checks.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::g2_algebra::{bracket, im_part, re_part, u_root, v_root, CMat7, RealBasis, REAL_NAMES};
use crate::linalg::{self, Mat7};
use crate::scalars::Scalar;

pub type Mat14<S> = SMatrix<S, 14, 14>;

/// Samelson parameters stored as (α = 1/a, b); α = 0 encodes a = ∞.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moduli<S> {
    pub alpha: S,
    pub b: S,
}

impl<S: Scalar> Moduli<S> {
    pub fn new(alpha: S, b: S) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::Domain("moduli require b != 0".into()));
        }
        Ok(Self { alpha, b })
    }

    /// From the pair (a, b) with a ≠ 0 finite.
    pub fn from_ab(a: S, b: S) -> Result<Self> {
        let alpha = a.checked_inv().map_err(|_| Error::Domain("a must be nonzero (use alpha = 0 for a = inf)".into()))?;
        Self::new(alpha, b)
    }

    pub fn to_f64(&self) -> Moduli<f64> {
        Moduli { alpha: self.alpha.to_f64(), b: self.b.to_f64() }
    }

    /// The point 1/a + i·b of ℂ⁺ ⊔ ℂ⁻.
    pub fn as_complex(&self) -> Complex<f64> {
        Complex::new(self.alpha.to_f64(), self.b.to_f64())
    }
}

/// J as a 14×14 matrix acting on coordinates in the real basis order
/// (H₊, H₋, X₊₁, X₋₁, …, Y₋₃); column k is the image of basis vector k.
#[derive(Clone, Debug, PartialEq)]
pub struct JOperator<S: Scalar> {
    pub matrix: Mat14<S>,
    pub moduli: Moduli<S>,
}

impl<S: Scalar> JOperator<S> {
    pub fn apply_coords(&self, c: &SVector<S, 14>) -> SVector<S, 14> {
        linalg::matmul(&self.matrix, c)
    }

    /// J applied to an element of g2 given as a matrix.
    pub fn apply(&self, basis: &RealBasis<S>, m: &Mat7<S>) -> Mat7<S> {
        basis.from_coords(&self.apply_coords(&basis.coords(m)))
    }

    /// max |J² + id|.
    pub fn square_defect(&self) -> f64 {
        let sq = linalg::matmul(&self.matrix, &self.matrix);
        linalg::max_abs(&linalg::add(&sq, &Mat14::<S>::identity()))
    }

    /// max(|JᵀJ − id|, |J + Jᵀ|): zero iff ⟨JV, V⟩ = 0 and |JV| = |V| for
    /// all V.
    pub fn orthogonality_defect(&self) -> f64 {
        let t = self.matrix.transpose();
        let gram = linalg::matmul(&t, &self.matrix);
        let d1 = linalg::max_abs(&linalg::sub(&gram, &Mat14::<S>::identity()));
        let d2 = linalg::max_abs(&linalg::add(&self.matrix, &t));
        d1.max(d2)
    }

    /// The same operator with the sign of the X_{±k} block flipped; used as a
    /// non-integrable control.
    pub fn with_flipped_x_block(&self, k: usize) -> Self {
        let mut out = self.clone();
        let i = 2 + 2 * (k - 1);
        for (r, c) in [(i, i + 1), (i + 1, i)] {
            out.matrix[(r, c)] = -out.matrix[(r, c)].clone();
        }
        out
    }

    pub fn to_f64(&self) -> JOperator<f64> {
        JOperator { matrix: self.matrix.map(|v| v.to_f64()), moduli: self.moduli.to_f64() }
    }
}

impl<S: Scalar + Serialize> Serialize for JOperator<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let rows: Vec<Vec<S>> = (0..14).map(|i| (0..14).map(|j| self.matrix[(i, j)].clone()).collect()).collect();
        let mut st = ser.serialize_struct("JOperator", 3)?;
        st.serialize_field("moduli", &self.moduli)?;
        st.serialize_field("basis", &REAL_NAMES)?;
        st.serialize_field("matrix", &rows)?;
        st.end()
    }
}

/// J in closed form. With p = bα/2, r = √3b/2 and
/// q = −(bα²/(2√3) + 2/(√3b)):
/// J H₊ = −p H₊ − q H₋, J H₋ = −r H₊ + p H₋,
/// J X_{+k} = −X_{−k}, J X_{−k} = X_{+k}, and the same on Y.
pub fn j_operator<S: Scalar>(m: &Moduli<S>) -> Result<JOperator<S>> {
    if m.b.is_zero() {
        return Err(Error::Domain("b = 0".into()));
    }
    let (alpha, b) = (m.alpha.clone(), m.b.clone());
    let s3 = S::sqrt3();
    let p = b.clone() * alpha.clone() / S::from_int(2);
    let r = s3.clone() * b.clone() / S::from_int(2);
    let q = -(b.clone() * alpha.clone() * alpha / (S::from_int(2) * s3.clone()) + S::from_int(2) / (s3 * b));
    let mut j = Mat14::<S>::zeros();
    j[(0, 0)] = -p.clone();
    j[(1, 0)] = -q;
    j[(0, 1)] = -r;
    j[(1, 1)] = p;
    for k in 0..6 {
        let i = 2 + 2 * k;
        j[(i + 1, i)] = -S::one();
        j[(i, i + 1)] = S::one();
    }
    Ok(JOperator { matrix: j, moduli: m.clone() })
}

/// Generator of the Cartan part of the Samelson subalgebra:
/// W_h = (1 − i·bα/2) H₋ + i·(√3b/2) H₊.
pub fn cartan_generator<S: Scalar>(m: &Moduli<S>, basis: &RealBasis<S>) -> CMat7<S> {
    let two = S::from_int(2);
    let c_minus = Complex::new(S::one(), -(m.b.clone() * m.alpha.clone() / two.clone()));
    let c_plus = Complex::new(S::zero(), S::sqrt3() * m.b.clone() / two);
    let hp = crate::g2_algebra::complexify(&basis.elems[0]);
    let hm = crate::g2_algebra::complexify(&basis.elems[1]);
    linalg::add(&linalg::scale(&hm, &c_minus), &linalg::scale(&hp, &c_plus))
}

/// Basis of the Samelson subalgebra s: W_h, V₊₁, V₊₂, V₊₃, U₊₁, U₊₂, U₊₃.
pub fn samelson_basis<S: Scalar>(m: &Moduli<S>) -> Vec<CMat7<S>> {
    let basis = RealBasis::<S>::standard();
    let mut out = vec![cartan_generator(m, &basis)];
    out.extend((1..=3).map(|k| v_root::<S>(k, 1)));
    out.extend((1..=3).map(|k| u_root::<S>(k, 1)));
    out
}

/// The real-linear operator defined by J(re W) = −im W for W ∈ s, computed
/// by solving a 14×14 linear system in the real basis.
pub fn j_from_subalgebra<S: Scalar>(m: &Moduli<S>) -> Result<JOperator<S>> {
    j_from_basis(&samelson_basis(m), m)
}

/// J(re W) = −im W on the complex span of an arbitrary 7-element family.
pub fn j_from_basis<S: Scalar>(family: &[CMat7<S>], m: &Moduli<S>) -> Result<JOperator<S>> {
    let basis = RealBasis::<S>::standard();
    let mut src = Vec::new();
    let mut dst = Vec::new();
    for w in family {
        let (re, im) = (re_part(w), im_part(w));
        // W and iW: re(iW) = −im W, im(iW) = re W
        src.push(basis.coords(&re));
        dst.push(-basis.coords(&im));
        src.push(-basis.coords(&im));
        dst.push(-basis.coords(&re));
    }
    let r = Mat14::<S>::from_fn(|i, j| src[j][i].clone());
    let d = Mat14::<S>::from_fn(|i, j| dst[j][i].clone());
    let rinv = linalg::inverse(&linalg::to_rows(&r))
        .map_err(|_| Error::Domain("real parts are dependent: the family meets its conjugate".into()))?;
    let j = linalg::matmul(&d, &linalg::from_rows::<S, 14, 14>(&rinv));
    Ok(JOperator { matrix: j, moduli: m.clone() })
}

/// Dimension of s^ℝ ∩ g2, i.e. of the real matrices in the complex span of
/// the family.
pub fn real_intersection_dim<S: Scalar>(family: &[CMat7<S>]) -> usize {
    let basis = RealBasis::<S>::standard();
    let rows: linalg::Rows<S> = family
        .iter()
        .flat_map(|w| [basis.coords(&re_part(w)), basis.coords(&im_part(w))])
        .map(|c| c.iter().cloned().collect())
        .collect();
    2 * family.len() - linalg::rank(&rows)
}

/// Whether J is orthogonal for the real scalar product on g2.
pub fn is_orthogonal_structure<S: Scalar>(m: &Moduli<S>, tol: f64) -> Result<bool> {
    let d = j_operator(m)?.orthogonality_defect();
    Ok(if S::EXACT { d == 0.0 } else { d <= tol })
}

/// N(V, W) = [JV, JW] − [V, W] − J[JV, W] − J[V, JW].
pub fn nijenhuis_algebra<S: Scalar>(j: &JOperator<S>, basis: &RealBasis<S>, v: &Mat7<S>, w: &Mat7<S>) -> Mat7<S> {
    let jv = j.apply(basis, v);
    let jw = j.apply(basis, w);
    let t1 = bracket(&jv, &jw);
    let t2 = bracket(v, w);
    let t3 = j.apply(basis, &bracket(&jv, w));
    let t4 = j.apply(basis, &bracket(v, &jw));
    linalg::sub(&linalg::sub(&t1, &t2), &linalg::add(&t3, &t4))
}

/// Largest |N| over all 91 unordered pairs of real basis vectors.
pub fn nijenhuis_max<S: Scalar>(j: &JOperator<S>) -> f64 {
    let basis = RealBasis::<S>::standard();
    let mut worst = 0.0f64;
    for a in 0..14 {
        for b in a + 1..14 {
            let n = nijenhuis_algebra(j, &basis, &basis.elems[a], &basis.elems[b]);
            worst = worst.max(linalg::max_abs(&n));
        }
    }
    worst
}
