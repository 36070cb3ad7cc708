//! Floating-point kernel for the quaternionic hyperbolic space `H^n_H` in
//! Siegel and horospherical coordinates. Matrix routines are for `n = 2`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quat::{Algebra, Quaternion};

pub type Hq = Quaternion<f64>;

const HAM: Algebra = Algebra::HAMILTON;

/// Default tolerance for unitarity residuals.
pub const UNITARY_TOL: f64 = 1e-9;

pub fn hmul(p: &Hq, q: &Hq) -> Hq {
    HAM.mul(p, q)
}

pub fn hnorm(p: &Hq) -> f64 {
    HAM.norm(p)
}

pub fn hinv(p: &Hq) -> Result<Hq> {
    HAM.inv(p)
}

fn hq(x0: f64, x1: f64, x2: f64, x3: f64) -> Hq {
    Quaternion::new(x0, x1, x2, x3)
}

fn real(r: f64) -> Hq {
    Quaternion::from_scalar(r)
}

fn vnorm(v: &[Hq]) -> f64 {
    v.iter().map(hnorm).sum()
}

/// `Σ ζ̄_k ζ'_k`.
fn vdot(a: &[Hq], b: &[Hq]) -> Hq {
    a.iter().zip(b).fold(Hq::zero(), |s, (x, y)| s + hmul(&x.conj(), y))
}

fn vsub(a: &[Hq], b: &[Hq]) -> Vec<Hq> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

/// A point `(w0, w)` of the Siegel domain or of its boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    pub w0: Hq,
    pub w: Vec<Hq>,
}

/// Horospherical coordinates `(ζ, u, t)`, `u` imaginary, `t ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoroPoint {
    pub zeta: Vec<Hq>,
    pub u: Hq,
    pub t: f64,
}

/// A point at infinity: `∞` or a point `(ξ, r)` of the Heisenberg group.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    Infinity,
    Point { xi: Vec<Hq>, r: Hq },
}

impl SiegelPoint {
    /// `tr w0 - n(w)`.
    pub fn height(&self) -> f64 {
        self.w0.trace() - vnorm(&self.w)
    }

    pub fn to_horo(&self) -> Result<HoroPoint> {
        let t = self.height();
        if t < -1e-12 * (1.0 + self.w0.trace().abs()) {
            return Err(Error::Degenerate("point outside the Siegel domain".into()));
        }
        Ok(HoroPoint { zeta: self.w.clone(), u: self.w0.im().scale(&2.0), t: t.max(0.0) })
    }
}

impl HoroPoint {
    pub fn new(zeta: Vec<Hq>, u: Hq, t: f64) -> Self {
        HoroPoint { zeta, u: u.im(), t }
    }

    /// `(w0, w) = ((n(ζ) + t + u)/2, ζ)`.
    pub fn to_siegel(&self) -> SiegelPoint {
        let w0 = (real(vnorm(&self.zeta) + self.t) + self.u.clone()).scale(&0.5);
        SiegelPoint { w0, w: self.zeta.clone() }
    }

    fn interior(&self) -> Result<()> {
        if self.t > 0.0 {
            Ok(())
        } else {
            Err(Error::Degenerate("point not in the interior".into()))
        }
    }
}

/// `(A, v)` with `A = n(ζ - ζ')` and `v = u' - u - 2 Im(ζ̄ ζ')`.
fn horo_parts(x: &HoroPoint, y: &HoroPoint) -> (f64, Hq) {
    let a = vnorm(&vsub(&x.zeta, &y.zeta));
    let v = y.u.clone() - x.u.clone() - vdot(&x.zeta, &y.zeta).im().scale(&2.0);
    (a, v)
}

/// Hyperbolic distance. Uses
/// `sinh² d = (A² + 2A(t+t') + (t-t')² + n(v)) / (4 t t')`, which is
/// `cosh² d - 1` for `cosh² d = n(Φ(x̃,ỹ)) / (q(x̃) q(ỹ))` without cancellation.
pub fn dist(x: &HoroPoint, y: &HoroPoint) -> Result<f64> {
    x.interior()?;
    y.interior()?;
    let (a, v) = horo_parts(x, y);
    let dt = x.t - y.t;
    let num = a * a + 2.0 * a * (x.t + y.t) + dt * dt + hnorm(&v);
    let s2 = num / (4.0 * x.t * y.t);
    Ok(s2.sqrt().asinh())
}

/// `cosh² d` evaluated from the Hermitian form in homogeneous coordinates.
pub fn cosh2_dist_projective(x: &SiegelPoint, y: &SiegelPoint) -> Result<f64> {
    let q = |p: &SiegelPoint| -p.w0.trace() + vnorm(&p.w);
    let phi = |p: &SiegelPoint, r: &SiegelPoint| -> Hq {
        // -z̄0 z'_n - z̄_n z'_0 + z̄·z' with z_n = z'_n = 1
        -p.w0.conj() - r.w0.clone() + vdot(&p.w, &r.w)
    };
    let (qx, qy) = (q(x), q(y));
    if qx >= 0.0 || qy >= 0.0 {
        return Err(Error::Degenerate("point not in the interior".into()));
    }
    let prod = hmul(&phi(x, y), &phi(y, x));
    Ok(prod.re() / (qx * qy))
}

/// Cygan distance on the closure minus `∞`.
pub fn cygan(x: &HoroPoint, y: &HoroPoint) -> f64 {
    let (a, v) = horo_parts(x, y);
    let f = a + (x.t - y.t).abs();
    (f * f + hnorm(&v)).sqrt().sqrt()
}

/// Busemann cocycle `β_ξ(x, y)`.
pub fn busemann(xi: &Boundary, x: &HoroPoint, y: &HoroPoint) -> Result<f64> {
    x.interior()?;
    y.interior()?;
    match xi {
        Boundary::Infinity => Ok(0.5 * (y.t / x.t).ln()),
        Boundary::Point { xi, r } => {
            let p = HoroPoint::new(xi.clone(), r.clone(), 0.0);
            let dx = cygan(x, &p);
            let dy = cygan(y, &p);
            if dx == 0.0 || dy == 0.0 {
                return Err(Error::Degenerate("Cygan distance to ξ vanishes".into()));
            }
            Ok(0.5 * (y.t * dx.powi(4) / (x.t * dy.powi(4))).ln())
        }
    }
}

/// `d(ξ_T, x) - d(ξ_T, y)` with `ξ_T` the point of the vertical ray to `ξ`
/// at height `h` (`h` large for `∞`, small for a finite point).
pub fn busemann_by_limit(xi: &Boundary, x: &HoroPoint, y: &HoroPoint, h: f64) -> Result<f64> {
    let p = match xi {
        Boundary::Infinity => HoroPoint::new(x.zeta.clone(), x.u.clone(), h),
        Boundary::Point { xi, r } => HoroPoint::new(xi.clone(), r.clone(), h),
    };
    Ok(dist(&p, x)? - dist(&p, y)?)
}

/// The geodesic `s ↦ (w0 (1 + 2e^{2s} w0)⁻¹, w (1 + 2e^{2s} w0)⁻¹)` from the
/// boundary point `(w0, w)` to `(0, 0)`.
pub fn geodesic_to_zero(p: &SiegelPoint, s: f64) -> Result<SiegelPoint> {
    if hnorm(&p.w0) == 0.0 {
        return Err(Error::Degenerate("w0 = 0".into()));
    }
    let m = hinv(&(real(1.0) + p.w0.scale(&(2.0 * (2.0 * s).exp()))))?;
    Ok(SiegelPoint { w0: hmul(&p.w0, &m), w: p.w.iter().map(|x| hmul(x, &m)).collect() })
}

/// Orthogonal projection of a boundary point `(ζ, u, 0) ≠ (0, 0)` onto the
/// geodesic from `(0, 0)` to `∞`.
pub fn project_to_vertical_geodesic(p: &HoroPoint) -> Result<HoroPoint> {
    let n = vnorm(&p.zeta);
    let t = (n * n + hnorm(&p.u)).sqrt();
    if t == 0.0 {
        return Err(Error::Degenerate("point is an endpoint of the line".into()));
    }
    Ok(HoroPoint::new(vec![Hq::zero(); p.zeta.len()], Hq::zero(), t))
}

/// Orthogonal projection onto the quaternionic line `C = {w = 0}`; on the
/// boundary `(ζ, u, 0) ↦ (0, u, n(ζ))`.
pub fn project_to_quaternionic_line(p: &HoroPoint) -> Result<HoroPoint> {
    let zero = vec![Hq::zero(); p.zeta.len()];
    if p.t > 0.0 {
        let s = p.to_siegel();
        return SiegelPoint { w0: s.w0, w: zero }.to_horo();
    }
    let n = vnorm(&p.zeta);
    if n == 0.0 {
        return Err(Error::Degenerate("boundary point of the line itself".into()));
    }
    Ok(HoroPoint::new(zero, p.u.clone(), n))
}

/// A 3×3 quaternionic matrix (`n = 2`).
pub type QMatrix3 = [[Hq; 3]; 3];

pub fn mat_mul(x: &QMatrix3, y: &QMatrix3) -> QMatrix3 {
    core::array::from_fn(|i| {
        core::array::from_fn(|j| (0..3).fold(Hq::zero(), |s, k| s + hmul(&x[i][k], &y[k][j])))
    })
}

pub fn conj_transpose(x: &QMatrix3) -> QMatrix3 {
    core::array::from_fn(|i| core::array::from_fn(|j| x[j][i].conj()))
}

pub fn identity3() -> QMatrix3 {
    core::array::from_fn(|i| core::array::from_fn(|j| real(if i == j { 1.0 } else { 0.0 })))
}

/// The form `J` with `q(z) = z* J z`.
pub fn j_form() -> QMatrix3 {
    let mut m: QMatrix3 = core::array::from_fn(|_| core::array::from_fn(|_| Hq::zero()));
    m[0][2] = real(-1.0);
    m[1][1] = real(1.0);
    m[2][0] = real(-1.0);
    m
}

/// The involution `ι`, anti-diagonal with entries 1.
pub fn iota() -> QMatrix3 {
    let mut m: QMatrix3 = core::array::from_fn(|_| core::array::from_fn(|_| Hq::zero()));
    m[0][2] = real(1.0);
    m[1][1] = real(1.0);
    m[2][0] = real(1.0);
    m
}

/// Heisenberg translation by `(ζ, u)`.
pub fn heis_translation(zeta: &Hq, u: &Hq) -> QMatrix3 {
    let mut m = identity3();
    m[0][1] = zeta.conj();
    m[0][2] = (real(hnorm(zeta)) + u.im()).scale(&0.5);
    m[1][2] = zeta.clone();
    m
}

/// Element of the upper triangular subgroup `B_q` with parameters
/// `μ ∈ Sp(1)`, `r > 0`, `ζ`, `u`, `U ∈ Sp(1)`.
pub fn b_q(mu: &Hq, r: f64, zeta: &Hq, u: &Hq, big_u: &Hq) -> QMatrix3 {
    let mut m: QMatrix3 = core::array::from_fn(|_| core::array::from_fn(|_| Hq::zero()));
    m[0][0] = mu.scale(&r);
    m[0][1] = zeta.conj();
    m[0][2] = hmul(&(real(hnorm(zeta)) + u.im()), mu).scale(&(0.5 / r));
    m[1][1] = big_u.clone();
    m[1][2] = hmul(&hmul(big_u, zeta), mu).scale(&(1.0 / r));
    m[2][2] = mu.scale(&(1.0 / r));
    m
}

fn max_entry_dist(x: &QMatrix3, y: &QMatrix3) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max(hnorm(&(x[i][j].clone() - y[i][j].clone())).sqrt());
        }
    }
    m
}

/// `g* J g = J` up to `tol` (entrywise).
pub fn is_unitary(g: &QMatrix3, tol: f64) -> bool {
    let lhs = mat_mul(&mat_mul(&conj_transpose(g), &j_form()), g);
    max_entry_dist(&lhs, &j_form()) <= tol
}

/// Residual sizes of the six defining equations of `U_q`, writing
/// `g = [[a, γ*, b], [α, A, β], [c, δ*, d]]`.
pub fn six_equations(g: &QMatrix3) -> [f64; 6] {
    let (a, b, c, d) = (&g[0][0], &g[0][2], &g[2][0], &g[2][2]);
    let (alpha, big_a, beta) = (&g[1][0], &g[1][1], &g[1][2]);
    let gamma = g[0][1].conj();
    let delta = g[2][1].conj();
    let m = hmul;
    let r = [
        m(c, &d.conj()) - m(&delta.conj(), &delta) + m(d, &c.conj()),
        m(a, &b.conj()) - m(&gamma.conj(), &gamma) + m(b, &a.conj()),
        -m(alpha, &beta.conj()) + m(big_a, &big_a.conj()) - m(beta, &alpha.conj()) - real(1.0),
        m(c, &b.conj()) - m(&delta.conj(), &gamma) + m(d, &a.conj()) - real(1.0),
        m(alpha, &d.conj()) - m(big_a, &delta) + m(beta, &c.conj()),
        m(alpha, &b.conj()) - m(big_a, &gamma) + m(beta, &a.conj()),
    ];
    r.map(|x| hnorm(&x).sqrt())
}

/// `g⁻¹ = J g* J` for `g ∈ U_q`.
pub fn unitary_inverse(g: &QMatrix3) -> QMatrix3 {
    mat_mul(&mat_mul(&j_form(), &conj_transpose(g)), &j_form())
}

/// Projective action on a point `[w0 : w : 1]`.
pub fn act(g: &QMatrix3, p: &SiegelPoint) -> Result<SiegelPoint> {
    let z = [p.w0.clone(), p.w[0].clone(), real(1.0)];
    let gz: [Hq; 3] = core::array::from_fn(|i| (0..3).fold(Hq::zero(), |s, k| s + hmul(&g[i][k], &z[k])));
    let inv = hinv(&gz[2]).map_err(|_| Error::Degenerate("image is ∞".into()))?;
    Ok(SiegelPoint { w0: hmul(&gz[0], &inv), w: vec![hmul(&gz[1], &inv)] })
}

/// `g·∞ = [a c⁻¹ : α c⁻¹ : 1]`.
pub fn image_of_infinity(g: &QMatrix3) -> Result<SiegelPoint> {
    let inv = hinv(&g[2][0]).map_err(|_| Error::FixesInfinity)?;
    Ok(SiegelPoint { w0: hmul(&g[0][0], &inv), w: vec![hmul(&g[1][0], &inv)] })
}

/// `d(H_s, g H_s) = ½ log n(c_g) + log(s/2)`.
pub fn horoball_distance(g: &QMatrix3, s: f64) -> Result<f64> {
    let n = hnorm(&g[2][0]);
    if n == 0.0 {
        return Err(Error::FixesInfinity);
    }
    Ok(0.5 * n.ln() + (s / 2.0).ln())
}

/// Distance between `H_s` and `g H_s` measured along the vertical line above
/// `g·∞`, with the top of `g H_s` located by bisection.
pub fn horoball_distance_numeric(g: &QMatrix3, s: f64) -> Result<f64> {
    let foot = image_of_infinity(g)?.to_horo()?;
    let ginv = unitary_inverse(g);
    let inside = |t: f64| -> Result<bool> {
        let x = HoroPoint::new(foot.zeta.clone(), foot.u.clone(), t).to_siegel();
        // the foot itself goes to ∞, which lies in every horoball
        Ok(act(&ginv, &x).map_or(true, |y| y.height() >= s))
    };
    // bracket in log height, moving out from the reference horosphere
    let (mut lo, mut hi) = (s.ln(), s.ln());
    let mut steps = 0;
    while !inside(lo.exp())? || inside(hi.exp())? {
        steps += 1;
        if steps > 60 {
            return Err(Error::Degenerate("horoball top not bracketed".into()));
        }
        if !inside(lo.exp())? {
            lo -= 1.0;
        }
        if inside(hi.exp())? {
            hi += 1.0;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inside(mid.exp())? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let top = HoroPoint::new(foot.zeta.clone(), foot.u.clone(), (0.5 * (lo + hi)).exp());
    let bottom = HoroPoint::new(foot.zeta, foot.u, s);
    dist(&bottom, &top)
}

/// Squared length of a tangent vector `v = (dζ, du, dt)` (with `dζ` of
/// length `4(n-1)`, `du` of length 3) and the Riemannian volume density
/// `1/(16 t^{2n+2})`.
pub fn metric_and_volume(p: &HoroPoint, v: &[f64]) -> Result<(f64, f64)> {
    p.interior()?;
    let m = p.zeta.len();
    if v.len() != 4 * m + 4 {
        return Err(Error::Degenerate("tangent vector has the wrong length".into()));
    }
    let dzeta: Vec<Hq> = (0..m).map(|k| hq(v[4 * k], v[4 * k + 1], v[4 * k + 2], v[4 * k + 3])).collect();
    let du = hq(0.0, v[4 * m], v[4 * m + 1], v[4 * m + 2]);
    let dt = v[4 * m + 3];
    let vert = du - vdot(&p.zeta, &dzeta).im().scale(&2.0);
    let t = p.t;
    let len2 = (dt * dt + hnorm(&vert) + 4.0 * t * vnorm(&dzeta)) / (4.0 * t * t);
    let n = (m + 1) as i32;
    Ok((len2, 1.0 / (16.0 * t.powi(2 * n + 2))))
}

/// Gram matrix of the metric at `p` in the coordinates `(ζ, u, t)`.
pub fn metric_matrix(p: &HoroPoint) -> Result<Vec<Vec<f64>>> {
    let dim = 4 * p.zeta.len() + 4;
    let e = |i: usize| -> Vec<f64> { (0..dim).map(|k| if k == i { 1.0 } else { 0.0 }).collect() };
    let mut g = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let sum: Vec<f64> = e(i).iter().zip(e(j)).map(|(a, b)| a + b).collect();
            let (qs, _) = metric_and_volume(p, &sum)?;
            let (qi, _) = metric_and_volume(p, &e(i))?;
            let (qj, _) = metric_and_volume(p, &e(j))?;
            g[i][j] = 0.5 * (qs - qi - qj);
        }
    }
    Ok(g)
}

/// Determinant by partial-pivot elimination.
pub fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap()).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    d
}
