//! Randomised checks of the hyperbolic kernel, reported as worst residuals.

use heis_mertens_core::hyperbolic::{
    act, b_q, busemann, busemann_by_limit, det, dist, geodesic_to_zero, heis_translation, hnorm, horoball_distance,
    horoball_distance_numeric, iota, is_unitary, mat_mul, metric_and_volume, metric_matrix, six_equations,
    Boundary, HoroPoint, Hq, QMatrix3,
};
use heis_mertens_core::Quaternion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// For identities that hold to rounding.
    pub exact: f64,
    /// For limits, finite differences and bisection.
    pub numeric: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { exact: 1e-9, numeric: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfCheck {
    pub name: String,
    pub samples: usize,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn check(name: &str, samples: usize, residual: f64, threshold: f64) -> SelfCheck {
    SelfCheck { name: name.into(), samples, residual, threshold, pass: residual <= threshold }
}

fn rq(r: &mut ChaCha8Rng, s: f64) -> Hq {
    Quaternion::new(r.gen_range(-s..s), r.gen_range(-s..s), r.gen_range(-s..s), r.gen_range(-s..s))
}

fn unit(r: &mut ChaCha8Rng) -> Hq {
    let q = rq(r, 1.0);
    q.scale(&(1.0 / hnorm(&q).sqrt()))
}

fn point(r: &mut ChaCha8Rng) -> HoroPoint {
    HoroPoint::new(vec![rq(r, 2.0)], rq(r, 2.0), r.gen_range(0.05..4.0))
}

fn boundary(r: &mut ChaCha8Rng) -> HoroPoint {
    HoroPoint::new(vec![rq(r, 1.5)], rq(r, 1.5), 0.0)
}

fn isometry(r: &mut ChaCha8Rng) -> QMatrix3 {
    let b = b_q(&unit(r), r.gen_range(0.3..3.0), &rq(r, 2.0), &rq(r, 2.0), &unit(r));
    if r.gen_bool(0.5) {
        b
    } else {
        mat_mul(&mat_mul(&heis_translation(&rq(r, 2.0), &rq(r, 2.0)), &iota()), &b)
    }
}

fn image(g: &QMatrix3, x: &HoroPoint) -> HoroPoint {
    act(g, &x.to_siegel()).and_then(|p| p.to_horo()).expect("interior point stays interior")
}

/// Run every check with `samples` random inputs (at least 20).
pub fn run(seed: u64, samples: usize, tol: Tolerances) -> Vec<SelfCheck> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n = samples.max(20);
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (x, y, z) = (point(&mut r), point(&mut r), point(&mut r));
        let excess = dist(&x, &z).unwrap() - dist(&x, &y).unwrap() - dist(&y, &z).unwrap();
        worst = worst.max(excess);
    }
    out.push(check("triangle_inequality", n, worst.max(0.0), tol.exact));

    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (x, y, g) = (point(&mut r), point(&mut r), isometry(&mut r));
        let d = dist(&x, &y).unwrap();
        worst = worst.max((dist(&image(&g, &x), &image(&g, &y)).unwrap() - d).abs() / (1.0 + d));
    }
    out.push(check("isometry_invariance", n, worst, tol.exact));

    let (mut lim, mut coc): (f64, f64) = (0.0, 0.0);
    for k in 0..n {
        let xi = if k % 4 == 0 {
            Boundary::Infinity
        } else {
            let b = boundary(&mut r);
            Boundary::Point { xi: b.zeta, r: b.u }
        };
        let h = if k % 4 == 0 { 1e8 } else { 1e-8 };
        let (x, y, z) = (point(&mut r), point(&mut r), point(&mut r));
        let b = busemann(&xi, &x, &y).unwrap();
        lim = lim.max((busemann_by_limit(&xi, &x, &y, h).unwrap() - b).abs());
        let sum = b + busemann(&xi, &y, &z).unwrap();
        coc = coc.max((busemann(&xi, &x, &z).unwrap() - sum).abs());
    }
    out.push(check("busemann_limit", n, lim, tol.numeric));
    out.push(check("busemann_cocycle", n, coc, tol.exact));

    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let p = boundary(&mut r).to_siegel();
        let s = r.gen_range(-2.0..2.0);
        let h = 1e-4;
        let a = geodesic_to_zero(&p, s).unwrap().to_horo().unwrap();
        let b = geodesic_to_zero(&p, s + h).unwrap().to_horo().unwrap();
        let c = geodesic_to_zero(&p, s + 1.0).unwrap().to_horo().unwrap();
        worst = worst.max((dist(&a, &b).unwrap() / h - 1.0).abs()).max((dist(&a, &c).unwrap() - 1.0).abs());
    }
    out.push(check("geodesic_unit_speed", n, worst, tol.numeric));

    let (mut mismatches, mut residual) = (0usize, 0.0f64);
    for k in 0..n {
        let mut g = isometry(&mut r);
        if k % 2 == 1 {
            let (i, j) = (r.gen_range(0..3), r.gen_range(0..3));
            g[i][j].x[r.gen_range(0..4)] += r.gen_range(0.01..0.5);
        }
        let eq = six_equations(&g).iter().cloned().fold(0.0, f64::max);
        if k % 2 == 0 {
            residual = residual.max(eq);
        }
        if is_unitary(&g, tol.exact) != (eq <= tol.exact) {
            mismatches += 1;
        }
    }
    out.push(check("unitary_equations_residual", n, residual, tol.exact));
    out.push(check("unitary_equations_equivalence", n, mismatches as f64, 0.0));

    let m = (n / 10).max(20);
    let mut worst: f64 = 0.0;
    for _ in 0..m {
        let scale = b_q(&unit(&mut r), r.gen_range(0.3..3.0), &Quaternion::zero(), &Quaternion::zero(), &unit(&mut r));
        let g = mat_mul(
            &mat_mul(&heis_translation(&rq(&mut r, 2.0), &rq(&mut r, 2.0)), &iota()),
            &mat_mul(&scale, &heis_translation(&rq(&mut r, 2.0), &rq(&mut r, 2.0))),
        );
        let s = r.gen_range(8.0..40.0);
        let f = horoball_distance(&g, s).unwrap();
        worst = worst.max((f - horoball_distance_numeric(&g, s).unwrap()).abs());
    }
    out.push(check("horoball_distance", m, worst, tol.numeric));

    let (mut metric, mut volume): (f64, f64) = (0.0, 0.0);
    for _ in 0..m {
        let p = point(&mut r);
        let v: Vec<f64> = (0..8).map(|_| r.gen_range(-1.0..1.0)).collect();
        let eps = 1e-5;
        let q = HoroPoint::new(
            vec![p.zeta[0].clone() + Quaternion::new(v[0], v[1], v[2], v[3]).scale(&eps)],
            p.u.clone() + Quaternion::new(0.0, v[4], v[5], v[6]).scale(&eps),
            p.t + eps * v[7],
        );
        let (len2, dens) = metric_and_volume(&p, &v).unwrap();
        let d = dist(&p, &q).unwrap() / eps;
        metric = metric.max((d * d / len2 - 1.0).abs());
        volume = volume.max((det(&metric_matrix(&p).unwrap()).sqrt() / dens - 1.0).abs());
    }
    // finite differences at step 1e-5 leave a relative error of order 1e-5
    out.push(check("metric_matches_distance", m, metric, 1e-4));
    out.push(check("volume_density", m, volume, tol.exact * 10.0));
    out
}
