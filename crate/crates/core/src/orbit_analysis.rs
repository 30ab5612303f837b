//! Orbit tangent spaces in g2ᶜ, orthogonal projections and the dimension of
//! the intersection of two subspaces, read off the spectrum of P·Q·P.

use nalgebra::{DMatrix, SMatrix, SVector, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::g2_algebra::{conj_mat, u_root, CMat7, RealBasis};
use crate::rng::Rng;
use crate::samelson::{samelson_basis, Moduli};

type C64 = Complex<f64>;
pub type CVec14 = SVector<C64, 14>;
pub type Proj14 = SMatrix<C64, 14, 14>;

/// Default threshold for "eigenvalue equals 1".
pub const EIGEN_TOL: f64 = 1e-7;
/// Vectors shorter than this after orthogonalization are dropped.
const RANK_TOL: f64 = 1e-10;

/// A complex subspace of g2ᶜ, stored as an orthonormal family of coordinate
/// vectors with respect to the real basis (which is orthonormal for the
/// Hermitian product).
#[derive(Clone, Debug)]
pub struct ComplexSubspace {
    pub coords: Vec<CVec14>,
}

impl ComplexSubspace {
    /// Gram–Schmidt (two passes) on the coordinates of `family`. Members with
    /// a residual outside g2ᶜ above 1e-9 are rejected.
    pub fn span(family: &[CMat7<f64>]) -> Result<Self> {
        let basis = RealBasis::<f64>::standard();
        let mut coords: Vec<CVec14> = Vec::new();
        for m in family {
            let c = basis.coords_c(m);
            let back = basis.from_coords_c(&c);
            let resid = (m - back).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if resid > 1e-9 {
                return Err(Error::Consistency(format!("matrix is not in g2 (residual {resid:e})")));
            }
            let mut v = c;
            for _ in 0..2 {
                for q in &coords {
                    v -= q * q.dotc(&v);
                }
            }
            let n = v.norm();
            if n > RANK_TOL * (1.0 + c.norm()) {
                coords.push(v / C64::new(n, 0.0));
            }
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The orthonormal basis as 7×7 matrices.
    pub fn basis(&self) -> Vec<CMat7<f64>> {
        let rb = RealBasis::<f64>::standard();
        self.coords.iter().map(|c| rb.from_coords_c(c)).collect()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.coords.iter().enumerate() {
            for (j, b) in self.coords.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((b.dotc(a) - target).norm());
            }
        }
        worst
    }

    pub fn projection(&self) -> Proj14 {
        subspace_projection(self)
    }
}

/// m^ℂ = span{U₊₁, U₋₁, U₊₂, U₋₂, U₊₃, U₋₃}.
pub fn m_complex() -> ComplexSubspace {
    let family: Vec<CMat7<f64>> = (1..=3).flat_map(|k| [u_root(k, 1), u_root(k, -1)]).collect();
    ComplexSubspace::span(&family).expect("U vectors lie in g2")
}

pub fn samelson_subspace(m: &Moduli<f64>) -> Result<ComplexSubspace> {
    ComplexSubspace::span(&samelson_basis(m))
}

/// The complex conjugate of the Samelson subalgebra.
pub fn conj_samelson_subspace(m: &Moduli<f64>) -> Result<ComplexSubspace> {
    let fam: Vec<CMat7<f64>> = samelson_basis(m).iter().map(conj_mat).collect();
    ComplexSubspace::span(&fam)
}

/// Condition number above which a group element counts as singular.
const COND_LIMIT: f64 = 1e12;

/// span{g U g⁻¹ : U ∈ m^ℂ}.
pub fn orbit_tangent(g: &CMat7<f64>) -> Result<ComplexSubspace> {
    let svd = g.svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 0.0) || smax / smin > COND_LIMIT {
        return Err(Error::Domain("group element is numerically singular".into()));
    }
    let inv = g.try_inverse().ok_or_else(|| Error::Domain("group element is singular".into()))?;
    let fam: Vec<CMat7<f64>> = m_complex().basis().iter().map(|u| g * u * inv).collect();
    ComplexSubspace::span(&fam)
}

pub fn subspace_projection(s: &ComplexSubspace) -> Proj14 {
    let mut p = Proj14::zeros();
    for q in &s.coords {
        p += q * q.adjoint();
    }
    p
}

/// Eigenvalues of P·Q·P, which are those of P·Q, in decreasing order.
pub fn pq_spectrum(p: &Proj14, q: &Proj14) -> Vec<f64> {
    let m = p * q * p;
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Number of eigenvalues of P·Q equal to 1 within `tol`; the limit of (PQ)^j
/// projects onto P ∩ Q. Eigenvalues in [1 − 10·tol, 1 − tol) are ambiguous.
/// `max_iter` bounds the squarings of the power cross-check, which must
/// agree when it converges.
pub fn intersection_dim(p: &Proj14, q: &Proj14, max_iter: usize, tol: f64) -> Result<usize> {
    let spectrum = pq_spectrum(p, q);
    if spectrum.iter().any(|&e| e >= 1.0 - 10.0 * tol && e < 1.0 - tol) {
        return Err(Error::Indeterminate { spectrum });
    }
    let dim = spectrum.iter().filter(|&&e| e >= 1.0 - tol).count();
    if let Some(t) = power_trace(p, q, max_iter) {
        if (t - dim as f64).abs() > 0.25 {
            return Err(Error::Indeterminate { spectrum });
        }
    }
    Ok(dim)
}

/// tr((PQP)^(2^k)) for increasing k until it stops changing, or None after
/// `max_iter` squarings.
pub fn power_trace(p: &Proj14, q: &Proj14, max_iter: usize) -> Option<f64> {
    let mut m = p * q * p;
    let mut last = m.trace().re;
    for _ in 0..max_iter {
        m = m * m;
        let t = m.trace().re;
        if (t - last).abs() < 1e-10 {
            return Some(t);
        }
        last = t;
    }
    None
}

/// One row of the orbit-dimension report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct OrbitSample {
    pub dim_s: usize,
    pub dim_conj_s: usize,
    pub spectrum_s: Vec<f64>,
    pub spectrum_conj_s: Vec<f64>,
}

pub fn orbit_dims(m: &Moduli<f64>, g: &CMat7<f64>, tol: f64) -> Result<OrbitSample> {
    let ps = samelson_subspace(m)?.projection();
    let pc = conj_samelson_subspace(m)?.projection();
    let qt = orbit_tangent(g)?.projection();
    let spectrum_s = pq_spectrum(&ps, &qt);
    let spectrum_conj_s = pq_spectrum(&pc, &qt);
    Ok(OrbitSample {
        dim_s: intersection_dim(&ps, &qt, 60, tol)?,
        dim_conj_s: intersection_dim(&pc, &qt, 60, tol)?,
        spectrum_s,
        spectrum_conj_s,
    })
}

/// A random element exp(Z) of G2ᶜ where Z has normal real and imaginary
/// coordinates rescaled so that ‖Z‖ = `scale` (Frobenius norm).
pub fn random_complex_g2(rng: &mut Rng, scale: f64) -> CMat7<f64> {
    let basis = RealBasis::<f64>::standard();
    let c = CVec14::from_fn(|_, _| C64::new(rng.normal(), rng.normal()));
    let z = basis.from_coords_c(&c);
    let n = z.norm();
    (z * C64::new(scale / n, 0.0)).exp()
}

/// A random element of the real group, as a complex matrix.
pub fn random_real_g2(rng: &mut Rng) -> CMat7<f64> {
    crate::g2_algebra::random_g2(rng, 1.0).map(|v| C64::new(v, 0.0))
}

/// ‖P·Ad − Ad·P‖ where P is the real orthogonal projection of (g2ᶜ)^ℝ ≅ ℝ²⁸
/// onto g2 and Ad = Ad_{exp(εZ)} for the given complex direction Z.
pub fn ad_invariance_probe(z: &CMat7<f64>, eps: f64) -> f64 {
    let basis = RealBasis::<f64>::standard();
    let g = (z * C64::new(eps, 0.0)).exp();
    let Some(inv) = g.try_inverse() else { return f64::INFINITY };
    // real coordinates: (re c, im c)
    let mut ad = DMatrix::<f64>::zeros(28, 28);
    for k in 0..28 {
        let mut c = CVec14::zeros();
        c[k % 14] = if k < 14 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
        let img = basis.coords_c(&(g * basis.from_coords_c(&c) * inv));
        for r in 0..14 {
            ad[(r, k)] = img[r].re;
            ad[(r + 14, k)] = img[r].im;
        }
    }
    let mut p = DMatrix::<f64>::zeros(28, 28);
    for r in 0..14 {
        p[(r, r)] = 1.0;
    }
    (&p * &ad - &ad * &p).abs().max()
}
