//! Exact polynomials over ℚ(√2,√3) in x₁..x₇, ξ₁..ξ₇, η₁..η₇ and the
//! symbolic matrix elements ⟨Jξ, η⟩ of the sphere tensor.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::g2_algebra::RealBasis;
use crate::samelson::{j_operator, JOperator, Moduli};
use crate::scalars::{QuadScalar, Scalar};
use crate::sphere_map::linear_term;

type Q = QuadScalar;

pub const NVARS: usize = 21;
/// Offsets of the three variable blocks.
pub const X: usize = 0;
pub const XI: usize = 7;
pub const ETA: usize = 14;

/// Exponent vector. Ordered by total degree, then lexicographically with
/// x₁ most significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u8; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: usize) -> Self {
        let mut e = [0; NVARS];
        e[v] = 1;
        Self(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Degree in the variables of one block.
    pub fn block_degree(&self, block: usize) -> u32 {
        self.0[block..block + 7].iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + other.0[i]))
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// self / d, assuming d divides self.
    pub fn div(&self, d: &Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - d.0[i]))
    }

    /// Combined degree in x₇, ξ₇, η₇; every reduction rule lowers it.
    fn seventh_degree(&self) -> u32 {
        (self.0[X + 6] + self.0[XI + 6] + self.0[ETA + 6]) as u32
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (v, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = match v / 7 {
                0 => "x",
                1 => "xi",
                _ => "eta",
            };
            let idx = v % 7 + 1;
            parts.push(if e == 1 { format!("{name}{idx}") } else { format!("{name}{idx}^{e}") });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A polynomial: nonzero coefficients keyed by monomial.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: usize) -> Self {
        Self::term(Monomial::var(v), Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone() * s.clone());
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c.clone() * s.clone())).collect() }
    }

    /// Largest total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest degree in one variable block.
    pub fn block_degree(&self, block: usize) -> u32 {
        self.terms.keys().map(|m| m.block_degree(block)).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[f64; NVARS]) -> f64 {
        poly_eval(self, point)
    }

    /// Coefficients as display strings keyed by monomial strings.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.terms.iter().map(|(m, c)| (m.to_string(), c.to_string())).collect()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Q::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(m, c)| format!("[{c}]*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn poly_add(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    a + b
}

pub fn poly_mul(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    a * b
}

/// Replaces every occurrence of the monomial `m` (as long as it divides a
/// term) by `replacement`.
pub fn poly_subst(p: &MultiPoly, m: &Monomial, replacement: &MultiPoly) -> MultiPoly {
    let mut pending: Vec<(Monomial, Q)> = p.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
    let mut out = MultiPoly::zero();
    while let Some((t, c)) = pending.pop() {
        if m.degree() > 0 && m.divides(&t) {
            let rest = t.div(m);
            for (rm, rc) in &replacement.terms {
                pending.push((rest.mul(rm), c.clone() * rc.clone()));
            }
        } else {
            out.add_term(t, c);
        }
    }
    out
}

pub fn poly_eval(p: &MultiPoly, point: &[f64; NVARS]) -> f64 {
    p.terms
        .iter()
        .map(|(m, c)| {
            let mono: f64 = m.0.iter().zip(point).map(|(&e, v)| v.powi(e as i32)).product();
            c.to_f64() * mono
        })
        .sum()
}

/// One relation: the monomial it eliminates and what replaces it.
#[derive(Clone, Debug)]
pub struct Rule {
    pub name: &'static str,
    pub lead: Monomial,
    pub replacement: MultiPoly,
}

/// The six relations in their fixed order: x₇², ξ₇², η₇², x₇ξ₇, x₇η₇, ξ₇η₇.
pub fn relation_rules() -> Vec<Rule> {
    let sq = |block: usize, name| {
        let mut lead = Monomial::default();
        lead.0[block + 6] = 2;
        let mut rep = MultiPoly::constant(Q::one());
        for i in 0..6 {
            let mut m = Monomial::default();
            m.0[block + i] = 2;
            rep.add_term(m, -Q::one());
        }
        Rule { name, lead, replacement: rep }
    };
    let mixed = |a: usize, b: usize, name| {
        let lead = Monomial::var(a + 6).mul(&Monomial::var(b + 6));
        let mut rep = MultiPoly::zero();
        for i in 0..6 {
            rep.add_term(Monomial::var(a + i).mul(&Monomial::var(b + i)), -Q::one());
        }
        Rule { name, lead, replacement: rep }
    };
    vec![
        sq(X, "x7^2"),
        sq(XI, "xi7^2"),
        sq(ETA, "eta7^2"),
        mixed(X, XI, "x7*xi7"),
        mixed(X, ETA, "x7*eta7"),
        mixed(XI, ETA, "xi7*eta7"),
    ]
}

/// Rewrites every term with the first rule (in the fixed order) whose
/// monomial divides it, until no rule applies. Terms are processed in
/// decreasing degree in (x₇, ξ₇, η₇), which every rule lowers, so each
/// monomial is visited once after all its contributions have been merged.
pub fn reduce(p: &MultiPoly) -> MultiPoly {
    reduce_with(p, &relation_rules())
}

pub fn reduce_with(p: &MultiPoly, rules: &[Rule]) -> MultiPoly {
    let mut pending: BTreeMap<(u32, Monomial), Q> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<(u32, Monomial), Q>, m: Monomial, c: Q| {
        let key = (m.seventh_degree(), m);
        match pending.get_mut(&key) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    pending.remove(&key);
                }
            }
            None => {
                if !c.is_zero() {
                    pending.insert(key, c);
                }
            }
        }
    };
    for (m, c) in &p.terms {
        push(&mut pending, *m, c.clone());
    }
    let mut out = MultiPoly::zero();
    while let Some(((_, t), c)) = pending.pop_last() {
        match rules.iter().find(|r| r.lead.divides(&t)) {
            Some(rule) => {
                let rest = t.div(&rule.lead);
                for (rm, rc) in &rule.replacement.terms {
                    push(&mut pending, rest.mul(rm), c.clone() * rc.clone());
                }
            }
            None => out.add_term(t, c),
        }
    }
    out
}

type PolyVec = Vec<MultiPoly>;
type PolyMat = Vec<Vec<MultiPoly>>;

fn x_vec() -> PolyVec {
    (0..7).map(|i| MultiPoly::var(X + i)).collect()
}

/// f(x) with polynomial entries in x.
pub fn f_poly() -> PolyMat {
    let x = x_vec();
    let half_sqrt3 = Q::sqrt3() * Q::from_ratio(1, 2);
    (0..7)
        .map(|j| {
            (0..7)
                .map(|i| {
                    let mut e = (&x[j] * &x[i]).scale(&Q::from_ratio(3, 2));
                    if i == j {
                        e.add_term(Monomial::one(), Q::from_ratio(-1, 2));
                    }
                    if let Some((m, s)) = linear_term(j, i) {
                        e.add_scaled(&x[m], &(half_sqrt3.clone() * Q::from_int(s as i64)));
                    }
                    e
                })
                .collect()
        })
        .collect()
}

/// f(x)_* e_k as a polynomial matrix in x.
fn pushforward_basis(k: usize) -> PolyMat {
    let x = x_vec();
    let three_half = Q::from_ratio(3, 2);
    let half_sqrt3 = Q::sqrt3() * Q::from_ratio(1, 2);
    (0..7)
        .map(|j| {
            (0..7)
                .map(|i| {
                    let mut e = MultiPoly::zero();
                    if i == k {
                        e.add_scaled(&x[j], &three_half);
                    }
                    if j == k {
                        e.add_scaled(&x[i], &three_half);
                    }
                    if let Some((m, s)) = linear_term(j, i) {
                        if m == k {
                            e.add_term(Monomial::one(), half_sqrt3.clone() * Q::from_int(s as i64));
                        }
                    }
                    e
                })
                .collect()
        })
        .collect()
}

fn mat_vec(m: &PolyMat, v: &PolyVec) -> PolyVec {
    m.iter()
        .map(|row| {
            let mut acc = MultiPoly::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc.add_scaled(&(a * b), &Q::one());
                }
            }
            acc
        })
        .collect()
}

/// The vector J(ξ = e_k) at x, before reduction: each component is a
/// polynomial in x. Follows the numeric pipeline with the closed-form
/// pullback (1/3)(2 + f(x))·A·x.
fn column_image(j: &JOperator<Q>, basis: &RealBasis<Q>, f: &PolyMat, k: usize) -> PolyVec {
    let a = pushforward_basis(k);
    // W = fᵀ A
    let w: PolyMat = (0..7)
        .map(|r| {
            (0..7)
                .map(|c| {
                    let mut acc = MultiPoly::zero();
                    for t in 0..7 {
                        if !f[t][r].is_zero() && !a[t][c].is_zero() {
                            acc.add_scaled(&(&f[t][r] * &a[t][c]), &Q::one());
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let coords: PolyVec = basis
        .elems
        .iter()
        .map(|n| {
            let mut acc = MultiPoly::zero();
            for r in 0..7 {
                for c in 0..7 {
                    acc.add_scaled(&w[r][c], &n[(r, c)]);
                }
            }
            acc
        })
        .collect();
    let jcoords: PolyVec = (0..14)
        .map(|r| {
            let mut acc = MultiPoly::zero();
            for (c, p) in coords.iter().enumerate() {
                acc.add_scaled(p, &j.matrix[(r, c)]);
            }
            acc
        })
        .collect();
    let jw: PolyMat = (0..7)
        .map(|r| {
            (0..7)
                .map(|c| {
                    let mut acc = MultiPoly::zero();
                    for (p, n) in jcoords.iter().zip(&basis.elems) {
                        acc.add_scaled(p, &n[(r, c)]);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let x = x_vec();
    let u = mat_vec(f, &mat_vec(&jw, &x));
    let fu = mat_vec(f, &u);
    let third = Q::from_ratio(1, 3);
    u.iter()
        .zip(&fu)
        .map(|(a, b)| {
            let mut v = a.scale(&Q::from_int(2));
            v.add_scaled(b, &Q::one());
            v.scale(&third)
        })
        .collect()
}

/// Unreduced R[k][l](x) with ⟨Jξ, η⟩ = Σ R[k][l] ξ_k η_l.
pub fn raw_matrix_elements(j: &JOperator<Q>) -> Vec<Vec<MultiPoly>> {
    let basis = RealBasis::<Q>::standard();
    let f = f_poly();
    (0..7).into_par_iter().map(|k| column_image(j, &basis, &f, k)).collect()
}

/// Σ R_kl ξ_k η_l (or ξ_l when `diagonal`).
fn assemble(raw: &[Vec<MultiPoly>], diagonal: bool) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (k, row) in raw.iter().enumerate() {
        for (l, r) in row.iter().enumerate() {
            let second = if diagonal { XI + l } else { ETA + l };
            let m = Monomial::var(XI + k).mul(&Monomial::var(second));
            for (rm, rc) in r.terms() {
                out.add_term(rm.mul(&m), rc.clone());
            }
        }
    }
    out
}

/// Coefficient of a monomial in the ξ/η variables, as a polynomial in x.
fn x_coefficient(p: &MultiPoly, outer: &Monomial) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (m, c) in p.terms() {
        let mut xs = *m;
        xs.0[X..X + 7].fill(0);
        if xs == *outer {
            let mut xonly = *m;
            xonly.0[XI..].fill(0);
            out.add_term(xonly, c.clone());
        }
    }
    out
}

/// The reduced tables.
#[derive(Clone, Debug)]
pub struct MatrixElements {
    /// ⟨Jξ, η⟩ = Σ P[i][j] ξ_i η_j.
    pub p: Vec<Vec<MultiPoly>>,
    /// ⟨Jξ, ξ⟩ = Q0 + Σ_{i≤j} Q[i][j] ξ_i ξ_j; entries with i > j are zero.
    pub q0: MultiPoly,
    pub q: Vec<Vec<MultiPoly>>,
    pub moduli: Moduli<Q>,
    /// The reduced off-diagonal form; every term is bilinear in ξ, η.
    pub offdiag: MultiPoly,
    pub diag: MultiPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyStats {
    pub nonzero_p: usize,
    pub nonzero_q: usize,
    pub max_terms: usize,
    pub max_x_degree: u32,
}

impl MatrixElements {
    pub fn stats(&self) -> PolyStats {
        let ps = self.p.iter().flatten();
        let qs = std::iter::once(&self.q0).chain(self.q.iter().flatten());
        let all: Vec<&MultiPoly> = ps.clone().chain(qs.clone()).collect();
        PolyStats {
            nonzero_p: ps.filter(|p| !p.is_zero()).count(),
            nonzero_q: qs.filter(|p| !p.is_zero()).count(),
            max_terms: all.iter().map(|p| p.len()).max().unwrap_or(0),
            max_x_degree: all.iter().map(|p| p.degree()).max().unwrap_or(0),
        }
    }

    /// Σ P_ij(x) ξ_i η_j at numeric arguments.
    pub fn eval_offdiag(&self, x: &[f64; 7], xi: &[f64; 7], eta: &[f64; 7]) -> f64 {
        let mut point = [0.0; NVARS];
        point[X..X + 7].copy_from_slice(x);
        point[XI..XI + 7].copy_from_slice(xi);
        point[ETA..ETA + 7].copy_from_slice(eta);
        poly_eval(&self.offdiag, &point)
    }

    pub fn eval_diag(&self, x: &[f64; 7], xi: &[f64; 7]) -> f64 {
        let mut point = [0.0; NVARS];
        point[X..X + 7].copy_from_slice(x);
        point[XI..XI + 7].copy_from_slice(xi);
        poly_eval(&self.diag, &point)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let table = |t: &Vec<Vec<MultiPoly>>| -> serde_json::Value {
            t.iter().map(|row| row.iter().map(|p| serde_json::json!(p.to_map())).collect::<Vec<_>>()).collect()
        };
        let q_upper: Vec<Vec<serde_json::Value>> =
            self.q.iter().enumerate().map(|(i, row)| row[i..].iter().map(|p| serde_json::json!(p.to_map())).collect()).collect();
        serde_json::json!({
            "P": table(&self.p),
            "Q0": self.q0.to_map(),
            "Q": q_upper,
            "reduction_order": relation_rules().iter().map(|r| r.name).collect::<Vec<_>>(),
            "moduli": {"alpha": self.moduli.alpha.to_string(), "b": self.moduli.b.to_string()},
            "stats": self.stats(),
        })
    }
}

/// Builds and reduces the symbolic matrix elements at exact moduli.
pub fn extract_matrix_elements(moduli: &Moduli<Q>) -> Result<MatrixElements> {
    let j = j_operator(moduli)?;
    extract_for_operator(&j)
}

pub fn extract_for_operator(j: &JOperator<Q>) -> Result<MatrixElements> {
    let raw = raw_matrix_elements(j);
    let (offdiag, diag) = rayon::join(|| reduce(&assemble(&raw, false)), || reduce(&assemble(&raw, true)));
    let p: Vec<Vec<MultiPoly>> = (0..7)
        .map(|i| (0..7).map(|k| x_coefficient(&offdiag, &Monomial::var(XI + i).mul(&Monomial::var(ETA + k)))).collect())
        .collect();
    let q0 = x_coefficient(&diag, &Monomial::one());
    let q: Vec<Vec<MultiPoly>> = (0..7)
        .map(|i| {
            (0..7)
                .map(|k| {
                    if k < i {
                        MultiPoly::zero()
                    } else {
                        x_coefficient(&diag, &Monomial::var(XI + i).mul(&Monomial::var(XI + k)))
                    }
                })
                .collect()
        })
        .collect();
    let covered: usize = p.iter().flatten().chain(q.iter().flatten()).map(MultiPoly::len).sum::<usize>() + q0.len();
    let expected = offdiag.len() + diag.len();
    if covered != expected {
        return Err(Error::Consistency(format!("reduced forms have {expected} terms but the tables cover {covered}")));
    }
    Ok(MatrixElements { p, q0, q, moduli: j.moduli.clone(), offdiag, diag })
}

/// Whether reduce(a − b) vanishes for every pair of P entries.
pub fn symbolic_difference(a: &MatrixElements, b: &MatrixElements) -> usize {
    a.p.iter()
        .flatten()
        .zip(b.p.iter().flatten())
        .filter(|(pa, pb)| !reduce(&(*pa - *pb)).is_zero())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::j_sphere::j_element;
    use crate::linalg::Vec7;
    use crate::rng::Rng;
    use crate::sphere_map::SpherePoint;
    use std::sync::OnceLock;

    fn elements() -> &'static MatrixElements {
        static E: OnceLock<MatrixElements> = OnceLock::new();
        E.get_or_init(|| extract_matrix_elements(&Moduli::new(Q::one(), Q::one()).unwrap()).unwrap())
    }

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(X + i - 1)
    }

    #[test]
    fn ring_operations() {
        let a = &x(1) + &MultiPoly::var(XI);
        let sq = &a * &a;
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&Monomial::var(X).mul(&Monomial::var(XI))), Q::from_int(2));
        assert!((&a * &MultiPoly::zero()).is_zero());
        let s3 = MultiPoly::term(Monomial::var(X), Q::sqrt3());
        let s3b = MultiPoly::term(Monomial::var(X + 1), Q::sqrt3());
        assert_eq!(&s3 * &s3b, MultiPoly::term(Monomial::var(X).mul(&Monomial::var(X + 1)), Q::from_int(3)));
        assert_eq!(Monomial::var(X).mul(&Monomial::var(XI + 2)).mul(&Monomial::var(X)).to_string(), "x1^2*xi3");
        assert_eq!(Monomial::var(ETA + 1).to_string(), "eta2");
    }

    #[test]
    fn substitution_and_eval() {
        let p = &x(1) * &x(1);
        let q = poly_subst(&p, &Monomial::var(X), &(&x(2) + &MultiPoly::constant(Q::one())));
        assert_eq!(q, &(&x(2) * &x(2)) + &(&x(2).scale(&Q::from_int(2)) + &MultiPoly::constant(Q::one())));
        assert_eq!(poly_eval(&MultiPoly::constant(Q::one()), &[0.3; NVARS]), 1.0);
    }

    #[test]
    fn reduce_relations() {
        let mut s = MultiPoly::zero();
        for i in 1..=7 {
            s = &s + &(&x(i) * &x(i));
        }
        assert_eq!(reduce(&s), MultiPoly::constant(Q::one()));
        let x7 = x(7);
        let xi7 = MultiPoly::var(XI + 6);
        let p = &(&x7 * &x7) * &(&xi7 * &xi7);
        let rules = relation_rules();
        let expect = reduce(&(&rules[0].replacement * &rules[1].replacement));
        assert_eq!(reduce(&p), expect);
        let mut r = Rng::new(60);
        let mut pt = [0.0; NVARS];
        let xs: [f64; 7] = r.unit_vector();
        pt[..7].copy_from_slice(&xs);
        assert!((poly_eval(&reduce(&s), &pt) - 1.0).abs() < 1e-15);
    }

    fn random_quartic(r: &mut Rng) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for _ in 0..12 {
            let mut m = Monomial::default();
            for _ in 0..4 {
                let v = (r.next_u64() % NVARS as u64) as usize;
                m.0[v] += 1;
            }
            p.add_term(m, Q::from_ratio((r.next_u64() % 9) as i64 - 4, 1 + (r.next_u64() % 3) as i64));
        }
        p
    }

    fn admissible(r: &mut Rng) -> ([f64; 7], [f64; 7], [f64; 7]) {
        let xv = Vec7::from_iterator(r.unit_vector::<7>());
        let mut v = Vec7::from_iterator(r.normals::<7>());
        v -= xv * xv.dot(&v);
        let xi = v.normalize();
        let mut w = Vec7::from_iterator(r.normals::<7>());
        w -= xv * xv.dot(&w);
        w -= xi * xi.dot(&w);
        let eta = w.normalize();
        let arr = |v: Vec7<f64>| std::array::from_fn(|i| v[i]);
        (arr(xv), arr(xi), arr(eta))
    }

    #[test]
    fn reduce_is_idempotent_and_sound() {
        let mut r = Rng::new(61);
        for _ in 0..20 {
            let p = random_quartic(&mut r);
            let red = reduce(&p);
            assert_eq!(reduce(&red), red);
            for _ in 0..50 {
                let (a, b, c) = admissible(&mut r);
                let mut pt = [0.0; NVARS];
                pt[..7].copy_from_slice(&a);
                pt[7..14].copy_from_slice(&b);
                pt[14..].copy_from_slice(&c);
                assert!((poly_eval(&p, &pt) - poly_eval(&red, &pt)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn f_poly_identity_after_reduction() {
        let f = f_poly();
        let mut f2 = vec![vec![MultiPoly::zero(); 7]; 7];
        for i in 0..7 {
            for k in 0..7 {
                for t in 0..7 {
                    f2[i][k] = &f2[i][k] + &(&f[i][t] * &f[t][k]);
                }
            }
        }
        for i in 0..7 {
            for k in 0..7 {
                let mut lhs = &f[i][k] + &f2[i][k];
                if i == k {
                    lhs.add_term(Monomial::one(), Q::one());
                }
                let rhs = (&x(i + 1) * &x(k + 1)).scale(&Q::from_int(3));
                assert!(reduce(&(&lhs - &rhs)).is_zero(), "({i},{k})");
            }
        }
    }

    #[test]
    fn structural_zeros_and_consistency() {
        let e = elements();
        assert!(e.p[6][6].is_zero());
        assert!(e.q[6][6].is_zero());
        assert!(e.offdiag.terms().all(|(m, _)| m.block_degree(XI) == 1 && m.block_degree(ETA) == 1));
    }

    #[test]
    fn agrees_with_numeric_pipeline() {
        let e = elements();
        let j = j_operator(&Moduli::new(1.0, 1.0).unwrap()).unwrap();
        let mut r = Rng::new(62);
        for _ in 0..100 {
            let (a, b, c) = admissible(&mut r);
            let pt = SpherePoint::from_array(a).unwrap();
            let num = j_element(&j, &pt, &Vec7::from_iterator(b), &Vec7::from_iterator(c)).unwrap();
            assert!((e.eval_offdiag(&a, &b, &c) - num).abs() < 1e-10);
            let num_d = j_element(&j, &pt, &Vec7::from_iterator(b), &Vec7::from_iterator(b)).unwrap();
            assert!((e.eval_diag(&a, &b) - num_d).abs() < 1e-10);
        }
    }

    #[test]
    fn north_pole_entry() {
        let e = elements();
        let (a, b, c) = ([1.0, 0., 0., 0., 0., 0., 0.], [0., 1., 0., 0., 0., 0., 0.], [0., 0., 1., 0., 0., 0., 0.]);
        assert!((e.eval_offdiag(&a, &b, &c) - 1.0).abs() < 1e-12);
        let mut pt = [0.0; NVARS];
        pt[0] = 1.0;
        assert!((poly_eval(&e.p[1][2], &pt) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let v = elements().to_json();
        assert_eq!(v["P"].as_array().unwrap().len(), 7);
        assert_eq!(v["Q"][0].as_array().unwrap().len(), 7);
        assert_eq!(v["Q"][6].as_array().unwrap().len(), 1);
        assert_eq!(v["reduction_order"][0], "x7^2");
        let s = elements().stats();
        assert!(s.nonzero_p <= 49 && s.nonzero_q <= 29);
    }
}
