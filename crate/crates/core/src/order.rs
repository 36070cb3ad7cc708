//! Maximal orders: validation, integral structure, norm enumeration, unit
//! groups, the imaginary sublattice and left ideal arithmetic.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, hnf, left_kernel, rat_det, rat_inverse, IntLattice, RatLattice};
use crate::quat::{qr, Algebra, Quaternion};
use crate::Q;

/// Integer coordinates of an element in the order basis.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OrderElement {
    pub coords: [i64; 4],
}

impl OrderElement {
    pub const ZERO: OrderElement = OrderElement { coords: [0; 4] };

    pub fn new(coords: [i64; 4]) -> Self {
        OrderElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; 4]
    }

    pub fn scale(self, k: i64) -> Self {
        OrderElement { coords: self.coords.map(|c| c * k) }
    }

    /// True if every coordinate is divisible by `q`, i.e. the element lies in `qO`.
    pub fn divisible_by(&self, q: i64) -> bool {
        self.coords.iter().all(|c| c % q == 0)
    }
}

impl fmt::Debug for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl Add for OrderElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.coords;
        for k in 0..4 {
            c[k] += o.coords[k];
        }
        OrderElement { coords: c }
    }
}

impl Sub for OrderElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for OrderElement {
    type Output = Self;
    fn neg(self) -> Self {
        OrderElement { coords: self.coords.map(|c| -c) }
    }
}

impl Mul<i64> for OrderElement {
    type Output = Self;
    fn mul(self, k: i64) -> Self {
        self.scale(k)
    }
}

/// A validated maximal order with its integral caches.
#[derive(Debug, Clone)]
pub struct Order {
    pub name: String,
    pub algebra: Algebra,
    /// Basis elements `e_0..e_3` in the coordinates `1, i, j, k`.
    pub basis: [Quaternion<Q>; 4],
    basis_inv: Vec<Vec<Q>>,
    /// `e_i e_j = Σ_k table[i][j][k] e_k`.
    table: [[[i64; 4]; 4]; 4],
    trace: [i64; 4],
    /// `tform[i][j] = tr(e_i ē_j)`, twice the Gram matrix of the norm form.
    tform: [[i64; 4]; 4],
    one: OrderElement,
    discriminant: u64,
    im_basis: [OrderElement; 3],
    im_pivots: [usize; 3],
    h: OrderElement,
    units: Vec<OrderElement>,
}

fn primes_dividing(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let (mut base, mut e, mut r) = (a, (p - 1) / 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn split_p(mut x: i64, p: i64) -> (u32, i64) {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    (v, x)
}

/// Hilbert symbol `(a, b)_p` for nonzero integers and a prime `p`.
pub fn hilbert_symbol(a: i64, b: i64, p: u64) -> i32 {
    let (al, u) = split_p(a, p as i64);
    let (be, v) = split_p(b, p as i64);
    if p == 2 {
        let eps = |x: i64| (x.rem_euclid(4) == 3) as u32;
        let omega = |x: i64| matches!(x.rem_euclid(8), 3 | 5) as u32;
        let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = if (al * be) % 2 == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
        if be % 2 == 1 {
            s *= legendre(u, p);
        }
        if al % 2 == 1 {
            s *= legendre(v, p);
        }
        s
    }
}

impl Algebra {
    /// Finite primes at which the algebra ramifies.
    pub fn ramified_primes(&self) -> Vec<u64> {
        let m = (2 * self.a * self.b).unsigned_abs();
        primes_dividing(m)
            .into_iter()
            .filter(|&p| hilbert_symbol(self.a, self.b, p) == -1)
            .collect()
    }

    /// Reduced discriminant `D_A`: product of the finite ramified primes.
    pub fn discriminant(&self) -> u64 {
        self.ramified_primes().iter().product()
    }
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rat_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    Some(Q::new(isqrt_exact(x.numer())?, isqrt_exact(x.denom())?))
}

impl Order {
    /// Validate a basis and build the caches.
    pub fn new(name: &str, algebra: Algebra, basis: [Quaternion<Q>; 4]) -> Result<Order> {
        let alg = Algebra::new(algebra.a, algebra.b)?;
        let rows: Vec<Vec<Q>> = basis.iter().map(|q| q.x.to_vec()).collect();
        let basis_inv = rat_inverse(&rows)
            .ok_or_else(|| Error::InvalidOrder("basis rows are dependent".to_string()))?;
        let coords = |q: &Quaternion<Q>| -> Vec<Q> {
            (0..4).map(|j| (0..4).fold(Q::zero(), |s, t| s + &q.x[t] * &basis_inv[t][j])).collect()
        };
        let to_int = |v: Vec<Q>, what: &str| -> Result<[i64; 4]> {
            let mut out = [0i64; 4];
            for (o, c) in out.iter_mut().zip(v) {
                if !c.is_integer() {
                    return Err(Error::NotARing(what.to_string()));
                }
                *o = c.to_integer().to_i64().ok_or_else(|| Error::NotARing("overflow".into()))?;
            }
            Ok(out)
        };
        let one_c = coords(&Quaternion::one());
        if one_c.iter().any(|c| !c.is_integer()) {
            return Err(Error::NotUnital);
        }
        let one = OrderElement::new(to_int(one_c, "1")?);
        let mut table = [[[0i64; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let p = alg.mul(&basis[i], &basis[j]);
                table[i][j] = to_int(coords(&p), &alloc::format!("e{i} e{j} not integral"))?;
            }
        }
        let mut trace = [0i64; 4];
        let mut tform = [[0i64; 4]; 4];
        for i in 0..4 {
            trace[i] = basis[i].trace().to_integer().to_i64().unwrap();
            for j in 0..4 {
                let t = alg.mul(&basis[i], &basis[j].conj()).trace();
                tform[i][j] = t.to_integer().to_i64().unwrap();
            }
        }
        let mut order = Order {
            name: name.to_string(),
            algebra: alg,
            basis,
            basis_inv,
            table,
            trace,
            tform,
            one,
            discriminant: 0,
            im_basis: [OrderElement::ZERO; 3],
            im_pivots: [0; 3],
            h: OrderElement::ZERO,
            units: Vec::new(),
        };
        let d = order.reduced_discriminant()?;
        let expected = alg.discriminant();
        if d != expected {
            return Err(Error::NotMaximal { found: d, expected });
        }
        order.discriminant = d;
        let im = order.imaginary_sublattice();
        for (k, row) in im.basis.iter().enumerate() {
            let c: Vec<i64> = row.iter().map(|x| x.to_i64().unwrap()).collect();
            order.im_basis[k] = OrderElement::new([c[0], c[1], c[2], c[3]]);
            order.im_pivots[k] = c.iter().position(|&x| x != 0).unwrap();
        }
        order.units = order.enumerate_by_norm(&Q::one());
        order.h = order.find_trace_one();
        Ok(order)
    }

    /// The Hurwitz order `Z⟨ω, i, j, k⟩`, `ω = (1+i+j+k)/2`, in Hamilton's quaternions.
    pub fn hurwitz() -> Order {
        let basis = [qr([1, 1, 1, 1], 2), qr([0, 1, 0, 0], 1), qr([0, 0, 1, 0], 1), qr([0, 0, 0, 1], 1)];
        Order::new("hurwitz", Algebra::HAMILTON, basis).expect("Hurwitz order validates")
    }

    /// A maximal order `Z⟨1, i, (1+j)/2, (i+k)/2⟩` in `(-1, -3)`, of discriminant 3.
    pub fn da3() -> Order {
        let basis = [qr([1, 0, 0, 0], 1), qr([0, 1, 0, 0], 1), qr([1, 0, 1, 0], 2), qr([0, 1, 0, 1], 2)];
        Order::new("da3", Algebra { a: -1, b: -3 }, basis).expect("D_A = 3 order validates")
    }

    pub fn builtin(name: &str) -> Option<Order> {
        match name {
            "hurwitz" => Some(Self::hurwitz()),
            "da3" => Some(Self::da3()),
            _ => None,
        }
    }

    pub fn discriminant(&self) -> u64 {
        self.discriminant
    }

    /// `sqrt |det(tr(e_i e_j))|`.
    pub fn reduced_discriminant(&self) -> Result<u64> {
        let m: Vec<Vec<Q>> = (0..4)
            .map(|i| (0..4).map(|j| self.algebra.mul(&self.basis[i], &self.basis[j]).trace()).collect())
            .collect();
        let det = rat_det(&m).abs();
        let r = rat_sqrt(&det)
            .filter(|r| r.is_integer())
            .ok_or_else(|| Error::InvalidOrder(alloc::format!("discriminant {det} is not a square")))?;
        Ok(r.to_integer().to_u64().unwrap())
    }

    /// Squared covolume under `½ tr(w̄ w')`, and the covolume when it is rational.
    pub fn covolume(&self) -> (Q, Option<Q>) {
        let g: Vec<Vec<Q>> =
            (0..4).map(|i| (0..4).map(|j| crate::q(self.tform[i][j], 2)).collect()).collect();
        let sq = rat_det(&g);
        let r = rat_sqrt(&sq);
        (sq, r)
    }

    pub fn one(&self) -> OrderElement {
        self.one
    }

    pub fn units(&self) -> &[OrderElement] {
        &self.units
    }

    /// Fixed trace-one element: minimal norm, ties broken lexicographically.
    pub fn trace_one_element(&self) -> OrderElement {
        self.h
    }

    fn find_trace_one(&self) -> OrderElement {
        let mut bound = 1;
        loop {
            if let Some(x) = self
                .enumerate_by_norm(&Q::from_integer(bound.into()))
                .into_iter()
                .filter(|x| self.trace(x) == 1)
                .min_by_key(|x| (self.norm(x), *x))
            {
                return x;
            }
            bound *= 2;
        }
    }

    /// Basis of `O ∩ Im H` in canonical HNF.
    pub fn imaginary_sublattice(&self) -> IntLattice {
        let col: Vec<Vec<i64>> = self.trace.iter().map(|&t| vec![t]).collect();
        IntLattice::from_i64(&left_kernel(&col))
    }

    pub fn im_basis(&self) -> &[OrderElement; 3] {
        &self.im_basis
    }

    /// Coordinates of a trace-zero element in the imaginary sublattice basis.
    pub fn im_coords(&self, z: &OrderElement) -> [i64; 3] {
        let mut v = z.coords;
        let mut out = [0i64; 3];
        for k in 0..3 {
            let p = self.im_pivots[k];
            let row = &self.im_basis[k].coords;
            debug_assert_eq!(v[p] % row[p], 0);
            out[k] = v[p] / row[p];
            for c in 0..4 {
                v[c] -= out[k] * row[c];
            }
        }
        debug_assert_eq!(v, [0; 4]);
        out
    }

    pub fn mul(&self, x: &OrderElement, y: &OrderElement) -> OrderElement {
        let mut z = [0i64; 4];
        for i in 0..4 {
            let xi = x.coords[i];
            if xi == 0 {
                continue;
            }
            for j in 0..4 {
                let f = xi * y.coords[j];
                if f == 0 {
                    continue;
                }
                let t = &self.table[i][j];
                for k in 0..4 {
                    z[k] += f * t[k];
                }
            }
        }
        OrderElement { coords: z }
    }

    pub fn trace(&self, x: &OrderElement) -> i64 {
        (0..4).map(|i| x.coords[i] * self.trace[i]).sum()
    }

    /// `tr(x ȳ)`.
    pub fn trace_form(&self, x: &OrderElement, y: &OrderElement) -> i64 {
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                s += x.coords[i] * self.tform[i][j] * y.coords[j];
            }
        }
        s
    }

    pub fn norm(&self, x: &OrderElement) -> i64 {
        self.trace_form(x, x) / 2
    }

    pub fn conj(&self, x: &OrderElement) -> OrderElement {
        self.one.scale(self.trace(x)) - *x
    }

    /// The integer matrix `T` with `tr(x ȳ) = xᵀ T y`.
    pub fn trace_form_matrix(&self) -> [[i64; 4]; 4] {
        self.tform
    }

    pub fn to_quat(&self, x: &OrderElement) -> Quaternion<Q> {
        let mut q = Quaternion::zero();
        for k in 0..4 {
            if x.coords[k] != 0 {
                q = q + self.basis[k].scale(&Q::from_integer(x.coords[k].into()));
            }
        }
        q
    }

    /// Rational coordinates of any quaternion in the order basis.
    pub fn coords(&self, q: &Quaternion<Q>) -> [Q; 4] {
        core::array::from_fn(|j| (0..4).fold(Q::zero(), |s, t| s + &q.x[t] * &self.basis_inv[t][j]))
    }

    /// The order element equal to `q`, if `q ∈ O`.
    pub fn from_quat(&self, q: &Quaternion<Q>) -> Option<OrderElement> {
        let c = self.coords(q);
        let mut out = [0i64; 4];
        for (o, x) in out.iter_mut().zip(c) {
            if !x.is_integer() {
                return None;
            }
            *o = x.to_integer().to_i64()?;
        }
        Some(OrderElement::new(out))
    }

    /// All `x ∈ O` with `0 < n(x) ≤ bound`, lexicographically sorted.
    pub fn enumerate_by_norm(&self, bound: &Q) -> Vec<OrderElement> {
        if bound < &Q::one() {
            // norms of nonzero elements are positive integers
            return Vec::new();
        }
        let b_int = bound.floor().to_integer().to_i64().unwrap();
        let mut g = [[0f64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = self.tform[i][j] as f64 / 2.0;
            }
        }
        // q[i][i] > 0 and n(x) = Σ_i q[i][i] (x_i + Σ_{j>i} q[i][j] x_j)²
        let mut qm = g;
        for i in 0..4 {
            for j in i + 1..4 {
                qm[j][i] = qm[i][j];
                qm[i][j] /= qm[i][i];
            }
            for k in i + 1..4 {
                for l in k..4 {
                    qm[k][l] -= qm[k][i] * qm[i][l];
                }
            }
        }
        let slack = 1e-9 * (1.0 + b_int as f64);
        let mut out = BTreeSet::new();
        let mut x = [0i64; 4];
        self.fp_level(&qm, 3, b_int as f64 + slack, &mut x, b_int, &mut out);
        out.into_iter().collect()
    }

    fn fp_level(
        &self,
        qm: &[[f64; 4]; 4],
        i: usize,
        rem: f64,
        x: &mut [i64; 4],
        b: i64,
        out: &mut BTreeSet<OrderElement>,
    ) {
        let centre: f64 = -(i + 1..4).map(|j| qm[i][j] * x[j] as f64).sum::<f64>();
        let r = (rem.max(0.0) / qm[i][i]).sqrt() + 1e-9;
        let lo = Float::ceil(centre - r) as i64;
        let hi = Float::floor(centre + r) as i64;
        for v in lo..=hi {
            x[i] = v;
            let d = v as f64 - centre;
            let used = qm[i][i] * d * d;
            if used > rem + 1e-9 {
                continue;
            }
            if i == 0 {
                let e = OrderElement::new(*x);
                let n = self.norm(&e);
                if n > 0 && n <= b {
                    out.insert(e);
                }
            } else {
                self.fp_level(qm, i - 1, rem - used, x, b, out);
            }
        }
        x[i] = 0;
    }

    /// Rows `coords(e_k g)`: a Z-basis of the left ideal `O g`.
    pub fn left_mul_rows(&self, g: &OrderElement) -> [[i64; 4]; 4] {
        core::array::from_fn(|k| self.mul(&OrderElement::new(unit_vec(k)), g).coords)
    }

    /// Whether the left ideal generated by `gens` is all of `O` (exact HNF test).
    pub fn left_ideal_is_full(&self, gens: &[OrderElement]) -> bool {
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .flat_map(|g| self.left_mul_rows(g))
            .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        !rows.is_empty() && IntLattice::new(&rows).is_identity(4)
    }

    /// Primitivity of a triple `O⟨a, α, c⟩ = O`. Same answer as
    /// [`Order::left_ideal_is_full`]; coprime norms short-circuit, since a
    /// proper integral left ideal has a norm dividing every element norm.
    pub fn is_primitive(&self, gens: &[OrderElement]) -> bool {
        let g = gens.iter().fold(0i64, |g, x| g.gcd(&self.norm(x)));
        if g == 1 {
            return true;
        }
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(4 * gens.len());
        for x in gens {
            rows.extend(self.left_mul_rows(x).iter().map(|r| r.to_vec()));
        }
        let h = hnf(&rows);
        h.len() == 4 && (0..4).all(|i| h[i][i] == 1 && (0..4).all(|j| j == i || h[i][j] == 0))
    }

    /// `{x ∈ A : I x ⊆ O}` for the left ideal `I` generated by `gens`,
    /// in order coordinates.
    pub fn ideal_inverse(&self, gens: &[OrderElement]) -> Result<RatLattice> {
        let ideal: Vec<Vec<i64>> =
            gens.iter().flat_map(|g| self.left_mul_rows(g)).map(|r| r.to_vec()).collect();
        if hnf(&ideal).len() < 4 {
            return Err(Error::NotAFractionalIdeal);
        }
        // x ↦ coords(g x) is x · M_g with M_g[j] = coords(g e_j); collect the
        // columns of every M_g as vectors y and dualize their span.
        let mut cols: Vec<Vec<Q>> = Vec::new();
        for g in gens {
            let m: [[i64; 4]; 4] = core::array::from_fn(|j| self.mul(g, &OrderElement::new(unit_vec(j))).coords);
            for k in 0..4 {
                cols.push((0..4).map(|j| Q::from_integer(m[j][k].into())).collect());
            }
        }
        RatLattice::from_rows(&cols).dual().ok_or(Error::NotAFractionalIdeal)
    }

    /// The lattice `u⁻¹ O` in order coordinates.
    pub fn inverse_times_order(&self, u: &OrderElement) -> Result<RatLattice> {
        let uq = self.to_quat(u);
        let ui = self.algebra.inv(&uq)?;
        let rows: Vec<Vec<Q>> =
            self.basis.iter().map(|e| self.coords(&self.algebra.mul(&ui, e)).to_vec()).collect();
        Ok(RatLattice::from_rows(&rows))
    }

    /// The order itself as a rational lattice.
    pub fn as_lattice(&self) -> RatLattice {
        RatLattice::from_rows(&lattice::identity::<i64>(4).iter().map(|r| r.iter().map(|&c| Q::from_integer(c.into())).collect()).collect::<Vec<_>>())
    }
}

pub(crate) fn unit_vec(k: usize) -> [i64; 4] {
    let mut v = [0; 4];
    v[k] = 1;
    v
}
