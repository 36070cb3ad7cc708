//! Counting `N(O)`-orbits of primitive triples `(a, α, c)` with
//! `tr(ā c) = n(α)` and `0 < n(c) ≤ s`, an independent brute-force oracle,
//! power-law fits and the equidistribution histogram.
//!
//! Orbits for a fixed `c` are enumerated through residue systems: `α` runs
//! over `O / Oc` (moved into the cell), and `a` over the solutions of the
//! trace equation modulo `Im O · c` (moved into the vertical cell).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Float, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::heisenberg::{fd_numerators, functional, fundamental_domain, Triple};
use crate::lattice::{hnf, hnf_transform, reduce_mod, solve_in};
use crate::order::{Order, OrderElement};
use crate::Q;

/// Number of cells of the dyadic partition of `cell4 × cell3`.
pub const CELLS: usize = 128;

/// Orbit count and histogram contributed by one value of `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CUnit {
    pub c: OrderElement,
    pub norm: i64,
    pub count: u64,
    pub hist: [u64; CELLS],
}

/// Everything about `c` that does not depend on `α`.
struct CData {
    c: OrderElement,
    cbar: OrderElement,
    n: i64,
    /// HNF of `Oc`.
    oc: Vec<Vec<i64>>,
    g: i64,
    x0: OrderElement,
    /// Representatives of `K_c / (Im O · c)`, `K_c = {a : tr(ā c) = 0}`.
    offsets: Vec<OrderElement>,
}

fn elt(v: &[i64]) -> OrderElement {
    OrderElement::new([v[0], v[1], v[2], v[3]])
}

/// All integer vectors in the box `∏ [0, d_k)`.
fn box_points(d: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; d.len()]];
    for (k, &dk) in d.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * dk as usize);
        for p in &out {
            for v in 0..dk {
                let mut q = p.clone();
                q[k] = v;
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn c_data(order: &Order, c: &OrderElement) -> CData {
    let n = order.norm(c);
    let rows: Vec<Vec<i64>> = order.left_mul_rows(c).iter().map(|r| r.to_vec()).collect();
    let oc = hnf(&rows);
    let f = functional(order, c);
    let col: Vec<Vec<i64>> = f.iter().map(|&x| vec![x]).collect();
    let t = hnf_transform(&col);
    let g = t.h[0][0];
    let x0 = elt(&t.u[0]);
    let kernel = hnf(&t.u[1..]);
    let imc: Vec<Vec<i64>> = order
        .im_basis()
        .iter()
        .map(|b| solve_in(&kernel, &order.mul(b, c).coords).expect("Im O · c lies in the kernel"))
        .collect();
    let m = hnf(&imc);
    let diag: Vec<i64> = (0..3).map(|k| m[k][k]).collect();
    let offsets = box_points(&diag)
        .into_iter()
        .map(|r| {
            let mut v = [0i64; 4];
            for (k, rk) in r.iter().enumerate() {
                for j in 0..4 {
                    v[j] += rk * kernel[k][j];
                }
            }
            OrderElement::new(v)
        })
        .collect();
    CData { c: *c, cbar: order.conj(c), n, oc, g, x0, offsets }
}

/// Histogram cell of a triple given its fundamental-domain numerators.
pub fn cell_index(x: &[i64; 4], zeta: &[i64; 3], n: i64) -> usize {
    let mut idx = 0;
    for k in 0..4 {
        if 2 * x[k] >= n {
            idx |= 1 << k;
        }
    }
    for k in 0..3 {
        if zeta[k] >= n {
            idx |= 1 << (4 + k);
        }
    }
    idx
}

/// Visit the canonical representative of every orbit with this `c`, together
/// with its histogram cell.
pub fn visit_c<F: FnMut(&Triple, usize)>(order: &Order, c: &OrderElement, scale: i64, mut f: F) {
    let d = c_data(order, c);
    let n = d.n;
    let diag: Vec<i64> = (0..4).map(|k| d.oc[k][k]).collect();
    let b = *order.im_basis();
    let mut alphas: Vec<(OrderElement, [i64; 4])> = Vec::with_capacity((n * n) as usize);
    for r in box_points(&diag) {
        let r = elt(&r);
        let x = order.mul(&r, &d.cbar).coords;
        let w = OrderElement::new(x.map(|v| -Integer::div_floor(&v, &n)));
        let alpha = r + order.mul(&w, &d.c);
        if scale > 1 && !alpha.divisible_by(scale) {
            continue;
        }
        let xs: [i64; 4] = core::array::from_fn(|k| x[k] + n * w.coords[k]);
        alphas.push((alpha, xs));
    }
    alphas.sort();
    for (alpha, xs) in alphas {
        let na = order.norm(&alpha);
        if na % d.g != 0 {
            continue;
        }
        let ap = d.x0.scale(na / d.g);
        for off in &d.offsets {
            let a = ap + *off;
            let ac = order.mul(&a, &d.cbar);
            let zeta = order.im_coords(&(ac - order.conj(&ac)));
            let mut v = OrderElement::ZERO;
            let mut zs = [0i64; 3];
            for k in 0..3 {
                let fl = Integer::div_floor(&zeta[k], &(2 * n));
                zs[k] = zeta[k] - 2 * n * fl;
                v = v - b[k].scale(fl);
            }
            let a = if v.is_zero() { a } else { a + order.mul(&v, &d.c) };
            if !order.is_primitive(&[a, alpha, d.c]) {
                continue;
            }
            f(&Triple { a, alpha, c: d.c }, cell_index(&xs, &zs, n));
        }
    }
}

/// Count and histogram for one `c`.
pub fn count_c(order: &Order, c: &OrderElement, scale: i64) -> CUnit {
    let mut hist = [0u64; CELLS];
    let mut count = 0;
    visit_c(order, c, scale, |_, cell| {
        count += 1;
        hist[cell] += 1;
    });
    CUnit { c: *c, norm: order.norm(c), count, hist }
}

/// The `c` values with `0 < n(c) ≤ s` and `c ∈ scale·O`, lexicographically.
pub fn c_values(order: &Order, s: &Q, scale: i64) -> Vec<OrderElement> {
    order.enumerate_by_norm(s).into_iter().filter(|c| scale <= 1 || c.divisible_by(scale)).collect()
}

/// Result of [`psi_count`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiResult {
    pub count: u64,
    pub triples: Vec<Triple>,
}

/// `Ψ(s)` with the canonical representatives, in deterministic order.
pub fn psi_count(order: &Order, s: &Q, scale: i64) -> PsiResult {
    let mut triples = Vec::new();
    psi_visit(order, s, scale, |t, _| triples.push(*t));
    PsiResult { count: triples.len() as u64, triples }
}

/// Stream version of [`psi_count`]; returns the count.
pub fn psi_visit<F: FnMut(&Triple, usize)>(order: &Order, s: &Q, scale: i64, mut f: F) -> u64 {
    let mut count = 0;
    for c in c_values(order, s, scale) {
        visit_c(order, &c, scale, |t, cell| {
            count += 1;
            f(t, cell)
        });
    }
    count
}

/// `Ψ(s)` for each `s` of an ascending grid from per-`c` units.
pub fn psi_table(units: &[CUnit], grid: &[Q]) -> Vec<(Q, u64)> {
    grid.iter()
        .map(|s| {
            let total = units
                .iter()
                .filter(|u| Q::from_integer(u.norm.into()) <= *s)
                .map(|u| u.count)
                .sum();
            (s.clone(), total)
        })
        .collect()
}

/// Independent oracle: enumerate every admissible triple in a norm box, key
/// each one by its orbit (computed from Hermite reductions, not from the
/// cells) and count the primitive orbits. Errors unless every primitive orbit
/// meets the fundamental domain exactly once.
///
/// The box is `n(c) ≤ s`, `n(α) ≤ R₄ n(c)` and
/// `n(a) ≤ n(α)²/(4 n(c)) + R₃ n(c)/4`; the last bound holds for the member
/// of the orbit in the domain, where `n(a c⁻¹) = n(α c⁻¹)²/4 + n(u)/4`.
pub fn brute_force_psi(order: &Order, s: &Q) -> Result<u64> {
    Ok(brute_force_units(order, s)?.iter().map(|u| u.1).sum())
}

/// Per-`c` orbit counts of [`brute_force_psi`], as `(c, count)`.
pub fn brute_force_units(order: &Order, s: &Q) -> Result<Vec<(OrderElement, u64)>> {
    let cs = c_values(order, s, 1);
    let Some(nmax) = cs.iter().map(|c| order.norm(c)).max() else {
        return Ok(Vec::new());
    };
    let fd = fundamental_domain(order);
    let a_num = fd.r4 * fd.r4 + fd.r3;
    let mut a_all = order.enumerate_by_norm(&Q::new((a_num * nmax).into(), 4.into()));
    a_all.push(OrderElement::ZERO);
    let mut al_all = order.enumerate_by_norm(&Q::from_integer((fd.r4 * nmax).into()));
    al_all.push(OrderElement::ZERO);
    let mut a_sorted: Vec<(i64, OrderElement)> = a_all.iter().map(|a| (order.norm(a), *a)).collect();
    a_sorted.sort();
    let al_norms: Vec<i64> = al_all.iter().map(|a| order.norm(a)).collect();
    let h = order.trace_one_element();
    let mut out = Vec::with_capacity(cs.len());
    for c in &cs {
        let n = order.norm(c);
        let cbar = order.conj(c);
        let f = functional(order, c);
        // a grouped by tr(ā c), each group sorted by norm
        let mut buckets: BTreeMap<i64, Vec<(i64, OrderElement)>> = BTreeMap::new();
        for (na, a) in &a_sorted {
            if 4 * na > a_num * n {
                break;
            }
            let v: i64 = (0..4).map(|k| f[k] * a.coords[k]).sum();
            buckets.entry(v).or_default().push((*na, *a));
        }
        let oc = hnf(&order.left_mul_rows(c).iter().map(|r| r.to_vec()).collect::<Vec<_>>());
        let imc = hnf(&order.im_basis().iter().map(|b| order.mul(b, c).coords.to_vec()).collect::<Vec<_>>());
        // orbit key -> (primitive, members in the domain)
        let mut orbits: BTreeMap<([i64; 4], [i64; 4]), (bool, u32)> = BTreeMap::new();
        for (alpha, &nal) in al_all.iter().zip(&al_norms) {
            if nal > fd.r4 * n {
                continue;
            }
            let Some(bucket) = buckets.get(&nal) else { continue };
            let end = bucket.partition_point(|(na, _)| 4 * n * na <= nal * nal + fd.r3 * n * n);
            let mut r = alpha.coords;
            reduce_mod(&oc, &mut r);
            let r = OrderElement::new(r);
            // w = (α - r) c⁻¹ ∈ O; the shear (n(w) h, -w) moves α to r
            let wn = order.mul(&(*alpha - r), &cbar).coords;
            let w = OrderElement::new(wn.map(|x| x / n));
            let shift = order.mul(&order.conj(&-w), alpha) + order.mul(&h.scale(order.norm(&w)), c);
            let x = order.mul(alpha, &cbar).coords;
            let alpha_in_cell = x.iter().all(|&v| 0 <= v && v < n);
            for (_, a) in &bucket[..end] {
                let mut key_a = (*a + shift).coords;
                reduce_mod(&imc, &mut key_a);
                let entry = orbits
                    .entry((r.coords, key_a))
                    .or_insert_with(|| (order.is_primitive(&[*a, *alpha, *c]), 0));
                if alpha_in_cell && entry.0 {
                    let ac = order.mul(a, &cbar);
                    let zeta = order.im_coords(&(ac - order.conj(&ac)));
                    if zeta.iter().all(|&z| 0 <= z && z < 2 * n) {
                        entry.1 += 1;
                    }
                }
            }
        }
        let mut count = 0;
        for (key, (prim, inside)) in &orbits {
            if *prim {
                if *inside != 1 {
                    return Err(Error::Oracle(alloc::format!(
                        "orbit {key:?} of c = {c:?} has {inside} members in the domain"
                    )));
                }
                count += 1;
            }
        }
        out.push((*c, count));
    }
    Ok(out)
}

/// Rows of `(s, Ψ(s))` with the fitted power law.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    pub rows: Vec<(Q, u64)>,
    pub reference_constant: f64,
    pub slope: f64,
    pub intercept: f64,
    pub ratios: Vec<f64>,
}

/// Least-squares slope of `ln Ψ` against `ln s`, and `Ψ(s) / (C s⁵)` per row.
pub fn fit_and_compare(rows: &[(Q, u64)], reference_constant: f64) -> Result<CountTable> {
    if rows.len() < 4 {
        return Err(Error::InsufficientRows(alloc::format!("{} rows, need 4", rows.len())));
    }
    let s: Vec<f64> = rows.iter().map(|(s, _)| s.to_f64().unwrap()).collect();
    let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax < 4.0 * smin {
        return Err(Error::InsufficientRows("s must span a factor 4".into()));
    }
    if rows.iter().any(|(_, c)| *c == 0) {
        return Err(Error::InsufficientRows("zero count in fit".into()));
    }
    let xs: Vec<f64> = s.iter().map(|v| Float::ln(*v)).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, c)| Float::ln(*c as f64)).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let ratios =
        rows.iter().zip(&s).map(|((_, c), sv)| *c as f64 / (reference_constant * Float::powi(*sv, 5))).collect();
    Ok(CountTable { rows: rows.to_vec(), reference_constant, slope, intercept: my - slope * mx, ratios })
}

/// Histogram of representatives over the `2⁷` dyadic cells.
#[derive(Debug, Clone, PartialEq)]
pub struct EquidistReport {
    pub s: Q,
    pub observed: [u64; CELLS],
    pub expected: [f64; CELLS],
    pub total: u64,
    pub discrepancy: f64,
}

impl EquidistReport {
    /// Build from cell counts; the Haar measure is Lebesgue in cell
    /// coordinates, so every dyadic cell has volume fraction `1/128`.
    pub fn from_counts(s: Q, observed: [u64; CELLS]) -> Result<Self> {
        let total: u64 = observed.iter().sum();
        if total == 0 {
            return Err(Error::EmptySample);
        }
        let expected = [1.0 / CELLS as f64; CELLS];
        let discrepancy = observed
            .iter()
            .zip(&expected)
            .map(|(o, e)| Float::abs(*o as f64 / total as f64 - e))
            .fold(0.0, f64::max);
        Ok(EquidistReport { s, observed, expected, total, discrepancy })
    }

    /// Histogram of points of `[0,1)⁷` (4 cell coordinates, then 3).
    pub fn from_points(s: Q, pts: &[[f64; 7]]) -> Result<Self> {
        let mut observed = [0u64; CELLS];
        for p in pts {
            let idx = (0..7).filter(|&k| p[k] >= 0.5).fold(0, |i, k| i | 1 << k);
            observed[idx] += 1;
        }
        Self::from_counts(s, observed)
    }
}

/// Equidistribution histogram at level `s`.
pub fn equidist_histogram(order: &Order, s: &Q) -> Result<EquidistReport> {
    let mut observed = [0u64; CELLS];
    psi_visit(order, s, 1, |_, cell| observed[cell] += 1);
    EquidistReport::from_counts(s.clone(), observed)
}

/// Re-check the three defining predicates and the cell membership.
pub fn verify_triple(order: &Order, t: &Triple) -> bool {
    if t.c.is_zero() || order.trace_form(&t.c, &t.a) != order.norm(&t.alpha) {
        return false;
    }
    if !order.left_ideal_is_full(&[t.a, t.alpha, t.c]) {
        return false;
    }
    let (x, z, n) = fd_numerators(order, t);
    x.iter().all(|&v| 0 <= v && v < n) && z.iter().all(|&v| 0 <= v && v < 2 * n)
}

impl CUnit {
    pub fn is_zero(&self) -> bool {
        self.count.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{canonicalize, in_fundamental_domain};
    use crate::q;
    use rand::{Rng, SeedableRng};

    #[test]
    fn psi_one_is_24() {
        let o = Order::hurwitz();
        let r = psi_count(&o, &q(1, 1), 1);
        assert_eq!(r.count, 24);
        for t in &r.triples {
            assert!(t.a.is_zero() && t.alpha.is_zero());
        }
        assert_eq!(brute_force_psi(&o, &q(1, 1)).unwrap(), 24);
    }

    #[test]
    fn below_one_is_empty() {
        let o = Order::hurwitz();
        assert_eq!(psi_count(&o, &q(1, 2), 1).count, 0);
        assert_eq!(brute_force_psi(&o, &q(0, 1)).unwrap(), 0);
        assert_eq!(brute_force_psi(&Order::da3(), &q(0, 1)).unwrap(), 0);
    }

    #[test]
    fn oracle_matches_small_s() {
        for o in [Order::hurwitz(), Order::da3()] {
            for s in 1..=3 {
                let s = q(s, 1);
                assert_eq!(psi_count(&o, &s, 1).count, brute_force_psi(&o, &s).unwrap(), "{} s={s}", o.name);
            }
        }
    }

    #[test]
    fn emitted_triples_verify() {
        let o = Order::hurwitz();
        let r = psi_count(&o, &q(3, 1), 1);
        let mut seen = alloc::collections::BTreeSet::new();
        for t in &r.triples {
            assert!(verify_triple(&o, t));
            assert!(in_fundamental_domain(&o, t));
            assert!(seen.insert(*t));
        }
    }

    #[test]
    fn unit_scaling_preserves_emitted_set() {
        let o = Order::hurwitz();
        let r = psi_count(&o, &q(3, 1), 1);
        let set: alloc::collections::BTreeSet<Triple> = r.triples.iter().copied().collect();
        for t in &r.triples {
            for l in o.units() {
                let s = Triple::new(o.mul(&t.a, l), o.mul(&t.alpha, l), o.mul(&t.c, l));
                assert!(set.contains(&canonicalize(&o, &s).unwrap().0));
            }
        }
    }

    #[test]
    fn monotone_and_table_consistent() {
        let o = Order::hurwitz();
        let cs = c_values(&o, &q(4, 1), 1);
        let units: Vec<CUnit> = cs.iter().map(|c| count_c(&o, c, 1)).collect();
        let grid: Vec<Q> = (1..=4).map(|k| q(k, 1)).collect();
        let table = psi_table(&units, &grid);
        for w in table.windows(2) {
            assert!(w[0].1 <= w[1].1);
        }
        assert_eq!(table[2].1, psi_count(&o, &q(3, 1), 1).count);
    }

    #[test]
    fn scale_restricts_to_ideal() {
        let o = Order::hurwitz();
        let r = psi_count(&o, &q(8, 1), 2);
        for t in &r.triples {
            assert!(t.alpha.divisible_by(2) && t.c.divisible_by(2));
        }
        assert!(r.count > 0);
    }

    #[test]
    fn synthetic_fit() {
        let c = 0.005;
        let rows: Vec<(Q, u64)> =
            [4i64, 8, 16, 32].iter().map(|&s| (q(s, 1), Float::round(c * (s as f64).powi(5)) as u64)).collect();
        let t = fit_and_compare(&rows, c).unwrap();
        assert!((t.slope - 5.0).abs() < 0.02);
        for ((s, n), r) in rows.iter().zip(&t.ratios) {
            // only rounding separates the ratio from 1
            let exact = c * s.to_f64().unwrap().powi(5);
            assert!((r - 1.0).abs() <= 0.5 / exact + 1e-12, "{n} {r}");
        }
        assert!(fit_and_compare(&rows[..3], c).is_err());
    }

    #[test]
    fn synthetic_uniform_histogram() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<[f64; 7]> = (0..128_000).map(|_| core::array::from_fn(|_| rng.gen::<f64>())).collect();
        let r = EquidistReport::from_points(q(1, 1), &pts).unwrap();
        assert!(r.discrepancy <= 0.01);
        assert_eq!(r.total, 128_000);
    }

    #[test]
    fn degenerate_histogram_at_one() {
        let r = equidist_histogram(&Order::hurwitz(), &q(1, 1)).unwrap();
        assert_eq!(r.total, 24);
        assert_eq!(r.observed[0], 24);
        assert!((r.discrepancy - (1.0 - 1.0 / 128.0)).abs() < 1e-12);
        assert_eq!(EquidistReport::from_counts(q(1, 1), [0; CELLS]), Err(Error::EmptySample));
    }
}
