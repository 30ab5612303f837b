//! The cover of S⁶ by the seven charts U_i = {y_i > −½}, the closed-form
//! solution of "column i of f(x) equals y", and the frames B_y = f(x(y)).

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat7, Vec7};
use crate::scalars::Scalar;
use crate::sphere_map::{f_matrix, linear_term, SpherePoint};

/// Which square root of (2y_i + 1)/3 is used for x_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Positive,
    Negative,
}

fn check_index(i: usize) -> Result<()> {
    if (1..=7).contains(&i) {
        Ok(())
    } else {
        Err(Error::Range(format!("chart index {i} is not in 1..=7")))
    }
}

pub fn chart_contains<S: Scalar>(i: usize, y: &SpherePoint<S>) -> bool {
    (1..=7).contains(&i) && y[i - 1].to_f64() > -0.5
}

/// First chart containing y (by index).
pub fn chart_for<S: Scalar>(y: &SpherePoint<S>) -> Option<usize> {
    (1..=7).find(|&i| chart_contains(i, y))
}

/// The chart whose coordinate y_i is largest, i.e. the one where y is
/// furthest from the boundary.
pub fn best_chart<S: Scalar>(y: &SpherePoint<S>) -> usize {
    (0..7)
        .max_by(|&a, &b| y[a].to_f64().total_cmp(&y[b].to_f64()))
        .map(|k| k + 1)
        .unwrap_or(1)
}

/// Solves column i of f(x) = y on the positive branch.
pub fn solve_x_of_y<S: Scalar>(i: usize, y: &SpherePoint<S>) -> Result<SpherePoint<S>> {
    solve_x_of_y_branch(i, y, Branch::Positive)
}

/// Column i of f(x) gives y_i = −½ + (3/2)x_i², and for each j ≠ i with
/// e_m·e_i = s·e_j the pair (y_j, y_m) is a rotation-scaling of (x_j, x_m):
/// y_j = c·x_j + σ·x_m, y_m = −σ·x_j + c·x_m with c = (3/2)x_i, σ = s√3/2.
pub fn solve_x_of_y_branch<S: Scalar>(i: usize, y: &SpherePoint<S>, branch: Branch) -> Result<SpherePoint<S>> {
    check_index(i)?;
    if !chart_contains(i, y) {
        return Err(Error::Domain(format!("point is outside chart {i} (y_{i} <= -1/2)")));
    }
    let k = i - 1;
    let yi = y[k].clone();
    let rad = (S::from_int(2) * yi.clone() + S::one()) / S::from_int(3);
    let mut xi = rad
        .try_sqrt()
        .ok_or_else(|| Error::Mode("sqrt((2y_i+1)/3) is not representable in exact mode".into()))?;
    if branch == Branch::Negative {
        xi = -xi;
    }
    let c = S::from_ratio(3, 2) * xi.clone();
    let det = S::from_ratio(3, 2) * (yi + S::one());
    let inv = det.checked_inv()?;
    let mut x = Vec7::<S>::zeros();
    x[k] = xi;
    for j in (0..7).filter(|&j| j != k) {
        let (m, s) = linear_term(j, k).expect("every j != i has a partner");
        let sigma = S::sqrt3() * S::from_ratio(s as i64, 2);
        x[j] = (c.clone() * y[j].clone() - sigma * y[m].clone()) * inv.clone();
    }
    SpherePoint::new(x)
}

/// B_y with the chart's fixed branch, plus the chart index it was built in.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartFrame<S: Scalar> {
    pub chart_index: usize,
    pub y: SpherePoint<S>,
    pub b: Mat7<S>,
}

impl<S: Scalar> ChartFrame<S> {
    /// Tangent frame vector k ∈ 0..6: the columns of B other than
    /// column i, in their original order.
    pub fn tangent(&self, k: usize) -> Vec7<S> {
        let col = tangent_columns(self.chart_index)[k];
        self.b.column(col).into_owned()
    }

    /// The 7×6 matrix of tangent columns.
    pub fn tangent_matrix(&self) -> SMatrix<S, 7, 6> {
        let cols = tangent_columns(self.chart_index);
        SMatrix::from_fn(|r, k| self.b[(r, cols[k])].clone())
    }

    /// Worst residual over BᵀB = id, B³ = id, column i = y and tangency.
    pub fn invariant_residual(&self) -> f64 {
        let bt = self.b.transpose();
        let orth = linalg::max_abs(&linalg::sub(&linalg::matmul(&bt, &self.b), &Mat7::identity()));
        let b2 = linalg::matmul(&self.b, &self.b);
        let cube = linalg::max_abs(&linalg::sub(&linalg::matmul(&b2, &self.b), &Mat7::identity()));
        let col = self.b.column(self.chart_index - 1).into_owned();
        let colres = linalg::max_abs(&linalg::sub(&col, self.y.coords()));
        let tang = (0..6)
            .map(|k| linalg::dot(&self.tangent(k), self.y.coords()).to_f64().abs())
            .fold(0.0, f64::max);
        orth.max(cube).max(colres).max(tang)
    }
}

/// Column indices (0-based) forming the tangent frame in chart i.
pub fn tangent_columns(i: usize) -> [usize; 6] {
    let mut out = [0; 6];
    for (slot, c) in out.iter_mut().zip((0..7).filter(|&c| c != i - 1)) {
        *slot = c;
    }
    out
}

pub fn frame_at<S: Scalar>(i: usize, y: &SpherePoint<S>) -> Result<ChartFrame<S>> {
    frame_at_branch(i, y, Branch::Positive)
}

pub fn frame_at_branch<S: Scalar>(i: usize, y: &SpherePoint<S>, branch: Branch) -> Result<ChartFrame<S>> {
    let x = solve_x_of_y_branch(i, y, branch)?;
    Ok(ChartFrame { chart_index: i, y: y.clone(), b: f_matrix(&x) })
}

/// Uniform random point of chart i (rejection sampling on the sphere).
pub fn random_point_in_chart(rng: &mut crate::rng::Rng, i: usize, margin: f64) -> SpherePoint<f64> {
    loop {
        let y = SpherePoint::new(Vec7::from_iterator(rng.unit_vector::<7>())).expect("unit vector");
        if y[i - 1] > -0.5 + margin {
            return y;
        }
    }
}
