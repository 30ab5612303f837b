//! Verification suites run by the `verify` command. Each check reports the
//! worst residual it saw against a named tolerance.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::charts::{frame_at, random_point_in_chart};
use crate::error::{Error, Result};
use crate::g2_algebra::{bracket_closure_residual, complex_rank, conj_mat, hermitian_ip, root_basis, CMat7};
use crate::j_sphere::{frame_change, j_matrix, moduli_spread, nijenhuis_sphere, theta, InducedJ, Mat6};
use crate::linalg::Vec7;
use crate::octonion::{automorphism_residual, basis_product, Octonion};
use crate::orbit_analysis::{orbit_dims, random_real_g2, EIGEN_TOL};
use crate::rng::Rng;
use crate::samelson::{j_from_subalgebra, j_operator, nijenhuis_max, samelson_basis, JOperator, Moduli};
use crate::scalars::{QuadScalar, Scalar};
use crate::sphere_map::{f_matrix, f_pullback, f_pushforward, identity_residuals, lambda, s_regularized_pullback, SpherePoint};

/// Tolerance names accepted by `--tol NAME=VAL`, with defaults.
pub const DEFAULT_TOLS: [(&str, f64); 8] = [
    ("unit", 1e-12),
    ("identity", 1e-10),
    ("pullback", 1e-8),
    ("j", 1e-10),
    ("moduli", 1e-9),
    ("theta", 1e-9),
    ("nijenhuis", 1e-6),
    ("eigen", EIGEN_TOL),
];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub moduli: Vec<Moduli<f64>>,
    pub tols: BTreeMap<String, f64>,
}

impl VerifyConfig {
    pub fn new(seed: u64, samples: usize, moduli: Vec<Moduli<f64>>) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Range("samples must be at least 1".into()));
        }
        let moduli = if moduli.is_empty() { default_moduli() } else { moduli };
        let tols = DEFAULT_TOLS.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Ok(Self { seed, samples, moduli, tols })
    }

    pub fn set_tol(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::Range(format!("tolerance {name} must be positive")));
        }
        match self.tols.get_mut(name) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(Error::Parse(format!("unknown tolerance name {name}"))),
        }
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tols[name]
    }

    fn rng(&self, suite: u64) -> Rng {
        Rng::stream(self.seed, suite)
    }
}

/// (1, 1), (3, 4) and (0, 2/√3) as (α, b).
pub fn default_moduli() -> Vec<Moduli<f64>> {
    [(1.0, 1.0), (3.0, 4.0), (0.0, 2.0 / 3f64.sqrt())]
        .iter()
        .map(|&(a, b)| Moduli::new(a, b).expect("nonzero b"))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub anchor: &'static str,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, anchor: &'static str, max_residual: f64, tol: f64) -> Self {
        let pass = max_residual.is_finite() && max_residual <= tol;
        Self { suite, name: name.into(), anchor, max_residual, tol, pass }
    }

    /// A check whose outcome is an equality of counts rather than a residual.
    fn exact(suite: &'static str, name: impl Into<String>, anchor: &'static str, ok: bool) -> Self {
        Self { suite, name: name.into(), anchor, max_residual: if ok { 0.0 } else { 1.0 }, tol: 0.0, pass: ok }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn random_point(rng: &mut Rng) -> SpherePoint<f64> {
    SpherePoint::new(Vec7::from_iterator(rng.unit_vector::<7>())).expect("unit vector")
}

fn random_tangent(rng: &mut Rng, x: &SpherePoint<f64>) -> Vec7<f64> {
    let v = Vec7::from_iterator(rng.normals::<7>());
    v - x.coords() * x.coords().dot(&v)
}

pub fn octonion_suite(cfg: &VerifyConfig) -> Vec<Check> {
    const S: &str = "octonion";
    let mut rng = cfg.rng(1);
    let table_ok = (1..8).all(|i| {
        (1..8).all(|j| {
            let p = Octonion::<QuadScalar>::basis(i).mul(&Octonion::basis(j));
            let (s, k) = basis_product(i, j);
            let expect = if i == j { Octonion::basis(0).scale(&QuadScalar::from_int(-1)) } else { Octonion::basis(k).scale(&QuadScalar::from_int(s as i64)) };
            p == expect
        })
    });
    let mut norm = Vec::new();
    let mut alt = Vec::new();
    for _ in 0..cfg.samples * 10 {
        let a = Octonion::new(rng.normals::<8>());
        let b = Octonion::new(rng.normals::<8>());
        let ab = a.mul(&b);
        norm.push((ab.norm_sq() - a.norm_sq() * b.norm_sq()).abs() / (1.0 + a.norm_sq() * b.norm_sq()));
        alt.push((&a.mul(&a.mul(&b)) - &a.mul(&a).mul(&b)).max_abs());
    }
    vec![
        Check::exact(S, "multiplication table", "octonion multiplication convention", table_ok),
        Check::new(S, "norm multiplicativity", "normed division algebra", worst(norm), cfg.tol("unit")),
        Check::new(S, "left alternativity", "alternative algebra", worst(alt), cfg.tol("identity")),
    ]
}

pub fn g2_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    const S: &str = "g2 basis";
    let q = |v: i64| QuadScalar::from_int(v);
    let rb = root_basis(q(3), q(4))?;
    let elems = rb.elements();
    let unit = worst(elems.iter().map(|m| (hermitian_ip(m, m).re - q(1)).to_f64().abs()));
    let moduli = Moduli::from_ab(q(3), q(4))?;
    let s = samelson_basis(&moduli);
    let sbar: Vec<CMat7<QuadScalar>> = s.iter().map(conj_mat).collect();
    let mut both = s.clone();
    both.extend(sbar.iter().cloned());
    let mut out = vec![
        Check::new(S, "root basis unit norm (3,4)", "Ad-invariant Hermitian product", unit, 0.0),
        Check::new(S, "su(3) closure (3,4)", "su(3) subalgebra", bracket_closure_residual(&rb.su3())?, 0.0),
        Check::new(S, "samelson closure (3,4)", "Samelson subalgebra", bracket_closure_residual(&s)?, 0.0),
        Check::new(S, "conjugate closure (3,4)", "conjugate subalgebra", bracket_closure_residual(&sbar)?, 0.0),
        Check::exact(S, "s + conj s rank", "s and its conjugate span g2", complex_rank(&both) == 14),
    ];
    let all14 = root_basis(1.0, 1.0)?.real_basis()?;
    out.push(Check::new(S, "real basis orthonormal", "real form of the root basis", crate::g2_algebra::orthonormality_defect(&all14), cfg.tol("unit")));
    Ok(out)
}

fn j_ops(cfg: &VerifyConfig) -> Result<Vec<JOperator<f64>>> {
    cfg.moduli.iter().map(j_operator).collect()
}

pub fn samelson_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    const S: &str = "samelson";
    let js = j_ops(cfg)?;
    let sq = worst(js.iter().map(|j| j.square_defect()));
    let nij = worst(js.iter().map(nijenhuis_max));
    let agree = worst(
        cfg.moduli
            .iter()
            .zip(&js)
            .map(|(m, j)| Ok((j_from_subalgebra(m)?.matrix - j.matrix).abs().max()))
            .collect::<Result<Vec<f64>>>()?,
    );
    let exact = j_operator(&Moduli::new(QuadScalar::from_int(1), QuadScalar::from_int(1))?)?;
    Ok(vec![
        Check::new(S, "J^2 = -id", "almost complex structure on g2", sq, cfg.tol("unit")),
        Check::new(S, "J^2 = -id exact (1,1)", "almost complex structure on g2", exact.square_defect(), 0.0),
        Check::new(S, "closed form matches subalgebra", "J(re W) = -im W", agree, cfg.tol("identity")),
        Check::new(S, "Nijenhuis on g2", "Samelson subalgebra is integrable", nij, cfg.tol("identity")),
    ])
}

pub fn sphere_map_suite(cfg: &VerifyConfig) -> Vec<Check> {
    const S: &str = "sphere map";
    let mut rng = cfg.rng(4);
    let (mut ident, mut orth, mut deriv, mut conf, mut pull, mut oracle, mut auto) = (vec![], vec![], vec![], vec![], vec![], vec![], vec![]);
    for _ in 0..cfg.samples * 10 {
        let x = random_point(&mut rng);
        let f = f_matrix(&x);
        ident.push(worst(identity_residuals(&x)));
        orth.push((f.transpose() * f - crate::linalg::Mat7::identity()).abs().max());
        auto.push(automorphism_residual(&f));
        let xi = random_tangent(&mut rng, &x);
        let eta = random_tangent(&mut rng, &x);
        let (Ok(a), Ok(b)) = (f_pushforward(&x, &xi), f_pushforward(&x, &eta)) else {
            deriv.push(f64::NAN);
            continue;
        };
        deriv.push((f * xi + a * x.coords() - xi).abs().max());
        let ip = crate::linalg::trace_abt(&(f.transpose() * a), &(f.transpose() * b));
        conf.push((ip - 9.0 * xi.dot(&eta)).abs());
        let back = f_pullback(&x, &a).map(|v| (v - xi).abs().max()).unwrap_or(f64::NAN);
        pull.push(back);
        let lim = s_regularized_pullback(&x, &a, 1e-6).map(|v| (v - xi).abs().max()).unwrap_or(f64::NAN);
        oracle.push(lim);
    }
    let lam_ok = f_matrix(&SpherePoint::<QuadScalar>::basis(1)) == lambda::<QuadScalar>();
    vec![
        Check::exact(S, "f(e1) = Lambda", "f(e1) is the centre generator", lam_ok),
        Check::new(S, "f x = x, f^3 = id, id + f + f^2 = 3xx^T", "rotation by 2pi/3 about x", worst(ident), cfg.tol("identity")),
        Check::new(S, "f in SO(7)", "inner automorphism", worst(orth), cfg.tol("identity")),
        Check::new(S, "f is an automorphism", "inner automorphism", worst(auto), cfg.tol("identity")),
        Check::new(S, "f xi + (f_* xi) x = xi", "derivative of f", worst(deriv), cfg.tol("unit")),
        Check::new(S, "conformal factor 9", "scaling identity for f_*", worst(conf), cfg.tol("identity")),
        Check::new(S, "closed-form pullback", "inverse of f_*", worst(pull), cfg.tol("identity")),
        Check::new(S, "regularized pullback", "inverse of f_* by regularization", worst(oracle), cfg.tol("pullback")),
    ]
}

pub fn chart_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    const S: &str = "charts";
    let mut rng = cfg.rng(5);
    let mut inv = Vec::new();
    let mut det = Vec::new();
    for i in 1..=7 {
        for _ in 0..cfg.samples * 5 {
            let y = random_point_in_chart(&mut rng, i, 1e-3);
            let fr = frame_at(i, &y)?;
            inv.push(fr.invariant_residual());
            det.push((fr.b.determinant() - 1.0).abs());
        }
    }
    let mut cover = Vec::new();
    for _ in 0..cfg.samples * 100 {
        let y: [f64; 7] = rng.unit_vector();
        cover.push(y.iter().fold(f64::INFINITY, |a, v| a.min(-v)));
    }
    let covered = cover.iter().all(|&c| c < 0.5);
    let e1 = SpherePoint::<QuadScalar>::basis(1);
    let north = frame_at(1, &e1)?.b == lambda::<QuadScalar>();
    Ok(vec![
        Check::new(S, "frame invariants", "gauge frames B_y", worst(inv), cfg.tol("identity")),
        Check::new(S, "det B = 1", "oriented frame", worst(det), cfg.tol("identity")),
        Check::exact(S, "covering", "U_1..U_7 cover the sphere", covered),
        Check::exact(S, "B_e1 = Lambda", "frame at the north pole", north),
    ])
}

pub fn sphere_j_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    const S: &str = "sphere J";
    let js = j_ops(cfg)?;
    let e1 = SpherePoint::basis(1);
    let mut block = Mat6::zeros();
    for k in 0..3 {
        block[(2 * k, 2 * k + 1)] = 1.0;
        block[(2 * k + 1, 2 * k)] = -1.0;
    }
    let north = worst(js.iter().map(|j| j_matrix(j, 1, &e1).map(|m| (m.matrix - block).abs().max()).unwrap_or(f64::NAN)));
    let rows: Vec<[f64; 6]> = (0..cfg.samples)
        .into_par_iter()
        .map(|s| -> Result<[f64; 6]> {
            let mut rng = Rng::stream(cfg.seed, 1000 + s as u64);
            let y = random_point_in_chart(&mut rng, 1, 0.05);
            let m = j_matrix(&js[0], 1, &y)?;
            let spread = moduli_spread(&js, 1, &y)?;
            let overlap = if y[1] > -0.45 {
                let m2 = j_matrix(&js[0], 2, &y)?;
                let g = frame_change(&m.frame, &m2.frame);
                (m.matrix - g * m2.matrix * g.transpose()).abs().max()
            } else {
                0.0
            };
            let y2 = random_point_in_chart(&mut rng, 1, 0.05);
            let t12 = theta(1, &y, &y2)?;
            let t21 = theta(1, &y2, &y)?;
            let th = (theta(1, &y, &y)? - Mat6::identity()).abs().max().max((t12 * t21 - Mat6::identity()).abs().max());
            let t = InducedJ::new(js[0].clone());
            let nij = nijenhuis_sphere(&t, 1, &y, 0, 2, crate::j_sphere::NIJENHUIS_STEP)?.value.norm();
            Ok([m.square_defect(), m.orthogonality_defect(), spread, overlap, th, nij])
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |k: usize| worst(rows.iter().map(|r| r[k]));
    Ok(vec![
        Check::new(S, "J_e1 standard block", "J at the north pole", north, cfg.tol("unit")),
        Check::new(S, "J^2 = -id", "almost complex tensor on S6", col(0), cfg.tol("j")),
        Check::new(S, "J^T J = id", "orthogonality in the round metric", col(1), cfg.tol("j")),
        Check::new(S, "moduli independence", "tensor independent of the moduli", col(2), cfg.tol("moduli")),
        Check::new(S, "chart overlap", "gauge covariance", col(3), cfg.tol("moduli")),
        Check::new(S, "theta identities", "intertwiner", col(4), cfg.tol("theta")),
        Check::new(S, "nijenhuis", "integrability on the orbit", col(5), cfg.tol("nijenhuis")),
    ])
}

pub fn orbit_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    const S: &str = "orbit";
    let tol = cfg.tol("eigen");
    let mut rng = cfg.rng(7);
    let mut at_identity = true;
    let mut generic = true;
    for m in &cfg.moduli {
        let id = orbit_dims(m, &CMat7::identity(), tol)?;
        at_identity &= (id.dim_s, id.dim_conj_s) == (3, 3);
        for _ in 0..cfg.samples.min(10) {
            let g = random_real_g2(&mut rng);
            let d = orbit_dims(m, &g, tol).map(|d| (d.dim_s, d.dim_conj_s));
            generic &= matches!(d, Ok((3, 3)));
        }
    }
    Ok(vec![
        Check::exact(S, "dims at identity", "intersection with m is 3-dimensional", at_identity),
        Check::exact(S, "dims at random real g", "orbit tangent meets s in dimension 3", generic),
    ])
}

/// Runs all suites in order.
pub fn run(cfg: &VerifyConfig) -> Result<Report> {
    let mut checks = octonion_suite(cfg);
    checks.extend(g2_suite(cfg)?);
    checks.extend(samelson_suite(cfg)?);
    checks.extend(sphere_map_suite(cfg));
    checks.extend(chart_suite(cfg)?);
    checks.extend(sphere_j_suite(cfg)?);
    checks.extend(orbit_suite(cfg)?);
    let pass = checks.iter().all(|c| c.pass);
    Ok(Report { seed: cfg.seed, samples: cfg.samples, checks, pass })
}
