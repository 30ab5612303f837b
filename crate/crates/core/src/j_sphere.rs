//! The tensor on S⁶ induced by a left-invariant J on g2 through f: its
//! action on tangent vectors, 6×6 matrices in the chart frames, the
//! intertwiner Θ and finite-difference Nijenhuis values.

use nalgebra::{SMatrix, SVector};

use crate::charts::{frame_at, ChartFrame};
use crate::error::{Error, Result};
use crate::g2_algebra::RealBasis;
use crate::linalg::{Mat7, Vec7};
use crate::samelson::JOperator;
use crate::sphere_map::{f_matrix, f_pullback, f_pushforward, SpherePoint};

pub type Mat6 = SMatrix<f64, 6, 6>;
pub type Vec6 = SVector<f64, 6>;

/// Residual above which f(x)ᵀ·f(x)_*ξ is not considered an element of g2.
pub const EXPANSION_TOL: f64 = 1e-9;

/// Something that assigns to each tangent vector ξ at y another tangent
/// vector. Used to run the Nijenhuis test against controls.
pub trait SphereTensor: Sync {
    fn apply(&self, y: &SpherePoint<f64>, xi: &Vec7<f64>) -> Result<Vec7<f64>>;
}

/// J acting on T_yS⁶ via f: ξ ↦ f_*⁻¹(f · J(fᵀ f_*ξ)).
pub struct InducedJ {
    pub j: JOperator<f64>,
    basis: RealBasis<f64>,
}

impl InducedJ {
    pub fn new(j: JOperator<f64>) -> Self {
        Self { j, basis: RealBasis::standard() }
    }
}

impl SphereTensor for InducedJ {
    fn apply(&self, y: &SpherePoint<f64>, xi: &Vec7<f64>) -> Result<Vec7<f64>> {
        j_apply(&self.j, &self.basis, y, xi)
    }
}

pub fn j_apply(j: &JOperator<f64>, basis: &RealBasis<f64>, x: &SpherePoint<f64>, xi: &Vec7<f64>) -> Result<Vec7<f64>> {
    let f = f_matrix(x);
    let a = f_pushforward(x, xi)?;
    let w = f.transpose() * a;
    let (c, resid) = basis.expand(&w);
    if resid > EXPANSION_TOL * (1.0 + w.abs().max()) {
        return Err(Error::Consistency(format!("left-translated derivative is not in g2 (residual {resid:e})")));
    }
    let jw = basis.from_coords(&j.apply_coords(&c));
    f_pullback(x, &(f * jw))
}

/// ⟨Jξ, η⟩ at x.
pub fn j_element(j: &JOperator<f64>, x: &SpherePoint<f64>, xi: &Vec7<f64>, eta: &Vec7<f64>) -> Result<f64> {
    let basis = RealBasis::standard();
    Ok(j_apply(j, &basis, x, xi)?.dot(eta))
}

/// J at y in the tangent frame of a chart. `matrix[(i, j)] = ⟨Jξ_i, ξ_j⟩`
/// for the frame vectors ξ_0..ξ_5.
#[derive(Clone, Debug)]
pub struct SphereJ {
    pub chart_index: usize,
    pub frame: ChartFrame<f64>,
    pub matrix: Mat6,
}

impl SphereJ {
    /// The matrix of J acting on frame coordinates (columns are images).
    pub fn action(&self) -> Mat6 {
        self.matrix.transpose()
    }

    pub fn square_defect(&self) -> f64 {
        (self.matrix * self.matrix + Mat6::identity()).abs().max()
    }

    pub fn orthogonality_defect(&self) -> f64 {
        (self.matrix.transpose() * self.matrix - Mat6::identity()).abs().max()
    }
}

pub fn tensor_matrix(t: &dyn SphereTensor, frame: &ChartFrame<f64>) -> Result<Mat6> {
    let cols: Vec<Vec7<f64>> = (0..6).map(|k| frame.tangent(k)).collect();
    let mut m = Mat6::zeros();
    for (i, xi) in cols.iter().enumerate() {
        let v = t.apply(&frame.y, xi)?;
        for (k, eta) in cols.iter().enumerate() {
            m[(i, k)] = v.dot(eta);
        }
    }
    Ok(m)
}

pub fn j_matrix(j: &JOperator<f64>, chart_index: usize, y: &SpherePoint<f64>) -> Result<SphereJ> {
    let frame = frame_at(chart_index, y)?;
    let matrix = tensor_matrix(&InducedJ::new(j.clone()), &frame)?;
    Ok(SphereJ { chart_index, frame, matrix })
}

/// Change of frame G = T₁ᵀT₂ between two frames at the same point.
pub fn frame_change(a: &ChartFrame<f64>, b: &ChartFrame<f64>) -> Mat6 {
    a.tangent_matrix().transpose() * b.tangent_matrix()
}

/// Θ_{y2,y1} = f(y2)_*⁻¹ ∘ L_{f(y2)} ∘ Ad_{g2 g1⁻¹} ∘ L_{f(y1)}⁻¹ ∘ f(y1)_*
/// with g_y = B_y, as a matrix from the frame at y1 to the frame at y2
/// (columns are images).
pub fn theta(chart_index: usize, y1: &SpherePoint<f64>, y2: &SpherePoint<f64>) -> Result<Mat6> {
    let fr1 = frame_at(chart_index, y1)?;
    let fr2 = frame_at(chart_index, y2)?;
    let f1 = f_matrix(y1);
    let f2 = f_matrix(y2);
    let g = fr2.b * fr1.b.transpose();
    let mut out = Mat6::zeros();
    for i in 0..6 {
        let w = f1.transpose() * f_pushforward(y1, &fr1.tangent(i))?;
        let moved = f2 * (g * w * g.transpose());
        let v = f_pullback(y2, &moved)?;
        for k in 0..6 {
            out[(k, i)] = v.dot(&fr2.tangent(k));
        }
    }
    Ok(out)
}

/// max |J_y − Θ_{y,e1} J_{e1} Θ_{y,e1}⁻¹| in the chart frames (action form).
pub fn factorization_residual(j: &JOperator<f64>, chart_index: usize, y: &SpherePoint<f64>) -> Result<f64> {
    let e1 = SpherePoint::basis(1);
    let jy = j_matrix(j, chart_index, y)?.action();
    let je = j_matrix(j, chart_index, &e1)?.action();
    let th = theta(chart_index, &e1, y)?;
    let inv = th.try_inverse().ok_or_else(|| Error::Domain("theta is singular".into()))?;
    Ok((jy - th * je * inv).abs().max())
}

/// Default finite-difference step.
pub const NIJENHUIS_STEP: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct NijenhuisValue {
    /// Components of N(ξ_p, ξ_q) in the tangent frame at y.
    pub value: Vec6,
    /// y is within 10h of the chart boundary.
    pub near_boundary: bool,
}

/// Frame field p of the chart, extended to ℝ⁷∖0 as z ↦ ξ_p(z/|z|).
fn frame_field(chart: usize, p: usize, z: &Vec7<f64>) -> Result<Vec7<f64>> {
    let y = SpherePoint::normalized(*z)?;
    Ok(frame_at(chart, &y)?.tangent(p))
}

fn project(y: &SpherePoint<f64>, v: Vec7<f64>) -> Vec7<f64> {
    v - y.coords() * y.coords().dot(&v)
}

/// J applied to a field, extended homogeneously.
fn j_field(t: &dyn SphereTensor, field: &dyn Fn(&Vec7<f64>) -> Result<Vec7<f64>>, z: &Vec7<f64>) -> Result<Vec7<f64>> {
    let y = SpherePoint::normalized(*z)?;
    let v = field(z)?;
    t.apply(&y, &project(&y, v))
}

type Field<'a> = Box<dyn Fn(&Vec7<f64>) -> Result<Vec7<f64>> + 'a>;

/// Directional derivative of a field along v at z by central differences.
fn derivative(field: &dyn Fn(&Vec7<f64>) -> Result<Vec7<f64>>, z: &Vec7<f64>, v: &Vec7<f64>, h: f64) -> Result<Vec7<f64>> {
    Ok((field(&(z + v * h))? - field(&(z - v * h))?) / (2.0 * h))
}

fn bracket(a: &Field, b: &Field, z: &Vec7<f64>, h: f64) -> Result<Vec7<f64>> {
    let va = a(z)?;
    let vb = b(z)?;
    Ok(derivative(b, z, &va, h)? - derivative(a, z, &vb, h)?)
}

/// N(X,Y) = [JX,JY] − [X,Y] − J[JX,Y] − J[X,JY] on the frame fields p, q.
pub fn nijenhuis_sphere(t: &dyn SphereTensor, chart: usize, y: &SpherePoint<f64>, p: usize, q: usize, h: f64) -> Result<NijenhuisValue> {
    if !(h > 0.0) {
        return Err(Error::Domain("step must be positive".into()));
    }
    if p >= 6 || q >= 6 {
        return Err(Error::Range("frame index must be in 0..6".into()));
    }
    let frame = frame_at(chart, y)?;
    if p == q {
        return Ok(NijenhuisValue { value: Vec6::zeros(), near_boundary: false });
    }
    let near_boundary = y[chart - 1] + 0.5 < 10.0 * h;
    let x: Field = Box::new(move |z| frame_field(chart, p, z));
    let yf: Field = Box::new(move |z| frame_field(chart, q, z));
    let jx: Field = Box::new(|z| j_field(t, &|w| frame_field(chart, p, w), z));
    let jy: Field = Box::new(|z| j_field(t, &|w| frame_field(chart, q, w), z));
    let z = *y.coords();
    let b1 = bracket(&jx, &jy, &z, h)?;
    let b2 = bracket(&x, &yf, &z, h)?;
    let b3 = t.apply(y, &project(y, bracket(&jx, &yf, &z, h)?))?;
    let b4 = t.apply(y, &project(y, bracket(&x, &jy, &z, h)?))?;
    let n = project(y, b1 - b2 - b3 - b4);
    let value = Vec6::from_fn(|k, _| n.dot(&frame.tangent(k)));
    Ok(NijenhuisValue { value, near_boundary })
}

/// Norms at h and h/2 and their ratio (≈4 for an O(h²) truncation error
/// around a zero limit; ≈1 when the limit is nonzero).
#[derive(Clone, Debug)]
pub struct NijenhuisRefinement {
    pub norm_h: f64,
    pub norm_half: f64,
    pub ratio: f64,
    pub near_boundary: bool,
}

pub fn nijenhuis_refined(t: &dyn SphereTensor, chart: usize, y: &SpherePoint<f64>, p: usize, q: usize, h: f64) -> Result<NijenhuisRefinement> {
    let a = nijenhuis_sphere(t, chart, y, p, q, h)?;
    let b = nijenhuis_sphere(t, chart, y, p, q, h / 2.0)?;
    let norm_h = a.value.norm();
    let norm_half = b.value.norm();
    let ratio = if norm_half > 0.0 { norm_h / norm_half } else { f64::INFINITY };
    Ok(NijenhuisRefinement { norm_h, norm_half, ratio, near_boundary: a.near_boundary })
}

/// Largest pairwise max-norm difference of j_matrix over a set of moduli.
pub fn moduli_spread(js: &[JOperator<f64>], chart: usize, y: &SpherePoint<f64>) -> Result<f64> {
    let ms = js.iter().map(|j| Ok(j_matrix(j, chart, y)?.matrix)).collect::<Result<Vec<Mat6>>>()?;
    let mut worst: f64 = 0.0;
    for (a, ma) in ms.iter().enumerate() {
        for mb in &ms[a + 1..] {
            worst = worst.max((ma - mb).abs().max());
        }
    }
    Ok(worst)
}

impl<T: SphereTensor + ?Sized> SphereTensor for &T {
    fn apply(&self, y: &SpherePoint<f64>, xi: &Vec7<f64>) -> Result<Vec7<f64>> {
        (**self).apply(y, xi)
    }
}

/// Left translation used in tests: the matrix f(y)ᵀ·f(y)_*ξ.
pub fn translated_derivative(y: &SpherePoint<f64>, xi: &Vec7<f64>) -> Result<Mat7<f64>> {
    Ok(f_matrix(y).transpose() * f_pushforward(y, xi)?)
}
