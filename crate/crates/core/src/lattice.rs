//! Integer lattices in row Hermite normal form, and full-rank rational lattices
//! with a common denominator.
//!
//! HNF convention: rows span the module, the nonzero rows are in echelon form
//! with strictly increasing pivot columns, pivots are positive and every entry
//! above a pivot lies in `[0, pivot)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

/// Result of [`hnf_transform`]: `u · rows = h`, with `u` unimodular.
#[derive(Debug, Clone)]
pub struct HnfTransform<T> {
    /// All rows of the reduced matrix; the first `rank` are the HNF.
    pub h: Vec<Vec<T>>,
    pub u: Vec<Vec<T>>,
    pub rank: usize,
    /// Pivot column of each HNF row.
    pub pivots: Vec<usize>,
}

fn row_axpy<T: Integer + Clone>(dst: &mut [T], k: &T, src: &[T]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.clone() + k.clone() * s.clone();
    }
}

/// Hermite normal form with the unimodular transform.
pub fn hnf_transform<T: Integer + Signed + Clone>(rows: &[Vec<T>]) -> HnfTransform<T> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<T>> = rows.to_vec();
    let mut u: Vec<Vec<T>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        if r == m {
            break;
        }
        // Euclid on the column: keep the smallest nonzero entry at row r and
        // reduce the others by it until it is the only one left.
        loop {
            let best = (r..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&x, &y| h[x][col].abs().cmp(&h[y][col].abs()));
            let Some(best) = best else { break };
            h.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let f = h[i][col].clone() / h[r][col].clone();
                let (hr, ur) = (h[r].clone(), u[r].clone());
                row_axpy(&mut h[i], &-f.clone(), &hr);
                row_axpy(&mut u[i], &-f, &ur);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            for v in h[r].iter_mut().chain(u[r].iter_mut()) {
                *v = -v.clone();
            }
        }
        let piv = h[r][col].clone();
        for k in 0..r {
            let f = h[k][col].div_floor(&piv);
            if !f.is_zero() {
                let (hr, ur) = (h[r].clone(), u[r].clone());
                row_axpy(&mut h[k], &-f.clone(), &hr);
                row_axpy(&mut u[k], &-f, &ur);
            }
        }
        pivots.push(col);
        r += 1;
    }
    HnfTransform { h, u, rank: r, pivots }
}

/// Canonical HNF basis (nonzero rows only).
pub fn hnf<T: Integer + Signed + Clone>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut t = hnf_transform(rows);
    t.h.truncate(t.rank);
    t.h
}

/// Basis of `{x : x · rows = 0}` over Z, in HNF.
pub fn left_kernel<T: Integer + Signed + Clone>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let t = hnf_transform(rows);
    hnf(&t.u[t.rank..])
}

/// Reduce `v` modulo the lattice spanned by HNF rows `basis` to its canonical
/// coset representative (pivot coordinates in `[0, pivot)`).
pub fn reduce_mod<T: Integer + Signed + Clone>(basis: &[Vec<T>], v: &mut [T]) {
    for row in basis {
        let p = row.iter().position(|c| !c.is_zero()).expect("zero row in HNF");
        let f = v[p].div_floor(&row[p]);
        if !f.is_zero() {
            row_axpy(v, &-f, row);
        }
    }
}

/// Solve `x · basis = v` for HNF rows `basis`; `None` if `v` is not in the span over Z.
pub fn solve_in<T: Integer + Signed + Clone>(basis: &[Vec<T>], v: &[T]) -> Option<Vec<T>> {
    let mut v = v.to_vec();
    let mut x = Vec::with_capacity(basis.len());
    for row in basis {
        let p = row.iter().position(|c| !c.is_zero()).expect("zero row in HNF");
        let (f, rem) = v[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return None;
        }
        row_axpy(&mut v, &-f.clone(), row);
        x.push(f);
    }
    v.iter().all(|c| c.is_zero()).then_some(x)
}

/// A Z-lattice of integer vectors, stored in canonical HNF.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntLattice {
    pub rank: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    pub fn new(rows: &[Vec<BigInt>]) -> Self {
        let basis = hnf(rows);
        IntLattice { rank: basis.len(), basis }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect();
        Self::new(&rows)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_in(&self.basis, v).is_some()
    }

    pub fn is_identity(&self, dim: usize) -> bool {
        self.rank == dim
            && self.basis.iter().enumerate().all(|(i, r)| {
                r.iter().enumerate().all(|(j, c)| *c == if i == j { BigInt::one() } else { BigInt::zero() })
            })
    }

    /// Absolute determinant of a full-rank lattice (product of pivots).
    pub fn index(&self) -> BigInt {
        let mut d = BigInt::one();
        for r in &self.basis {
            d *= r.iter().find(|c| !c.is_zero()).unwrap();
        }
        d
    }
}

/// A lattice `(1/den) · lat` in Q^n, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatLattice {
    pub den: BigInt,
    pub lat: IntLattice,
}

impl RatLattice {
    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let mut den = BigInt::one();
        for c in rows.iter().flatten() {
            den = den.lcm(c.denom());
        }
        let ints: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let mut lat = IntLattice::new(&ints);
        let mut g = den.clone();
        for c in lat.basis.iter().flatten() {
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in lat.basis.iter_mut().flatten() {
                *c /= &g;
            }
            den /= &g;
        }
        RatLattice { den, lat }
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.lat
            .basis
            .iter()
            .map(|r| r.iter().map(|c| Q::new(c.clone(), self.den.clone())).collect())
            .collect()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let scaled: Vec<Q> = v.iter().map(|c| c * Q::from_integer(self.den.clone())).collect();
        if scaled.iter().any(|c| !c.is_integer()) {
            return false;
        }
        let ints: Vec<BigInt> = scaled.iter().map(|c| c.to_integer()).collect();
        self.lat.contains(&ints)
    }

    /// `{x : x·y ∈ Z for all y in self}` for a full-rank lattice.
    pub fn dual(&self) -> Option<Self> {
        let inv = rat_inverse(&self.rows())?;
        let n = inv.len();
        let t: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| inv[j][i].clone()).collect()).collect();
        Some(Self::from_rows(&t))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut rows = self.rows();
        rows.extend(other.rows());
        Self::from_rows(&rows)
    }

    pub fn intersection(&self, other: &Self) -> Option<Self> {
        self.dual()?.sum(&other.dual()?).dual()
    }

    pub fn is_full_rank(&self, dim: usize) -> bool {
        self.lat.rank == dim
    }
}

/// Gauss-Jordan inverse over Q; `None` if singular.
pub fn rat_inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut inv: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let piv = a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] / &piv;
            inv[col][c] = &inv[col][c] / &piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let (x, y) = (&a[col][c] * &f, &inv[col][c] * &f);
                    a[r][c] -= x;
                    inv[r][c] -= y;
                }
            }
        }
    }
    Some(inv)
}

/// Determinant over Q by elimination.
pub fn rat_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &piv;
                for c in col..n {
                    let x = &a[col][c] * &f;
                    a[r][c] -= x;
                }
            }
        }
    }
    det
}

/// Integer matrix product `a · b`.
pub fn mat_mul<T: Integer + Clone>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let k = b.len();
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| (0..k).fold(T::zero(), |s, t| s + r[t].clone() * b[t][j].clone()))
                .collect()
        })
        .collect()
}

pub fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect()
}

pub fn identity<T: Integer + Clone>(n: usize) -> Vec<Vec<T>> {
    let mut m = vec![vec![T::zero(); n]; n];
    for (i, r) in m.iter_mut().enumerate() {
        r[i] = T::one();
    }
    m
}
