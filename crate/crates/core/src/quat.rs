//! Quaternions in a definite algebra `(a, b)` over Q, with `i² = a`, `j² = b`,
//! `k = ij = -ji`.

use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::{FromPrimitive, Num, Signed, Zero};

use crate::error::{Error, Result};
use crate::Q;

/// Coefficient field for [`Quaternion`]: exact rationals or `f64`.
pub trait Scalar: Clone + Num + Neg<Output = Self> + FromPrimitive + PartialOrd + fmt::Debug {}
impl<T> Scalar for T where T: Clone + Num + Neg<Output = T> + FromPrimitive + PartialOrd + fmt::Debug {}

/// The definite quaternion algebra `(a, b)_Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Algebra {
    pub a: i64,
    pub b: i64,
}

/// Element `x0 + x1 i + x2 j + x3 k`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Quaternion<T> {
    pub x: [T; 4],
}

impl Algebra {
    /// Hamilton's quaternions `(-1, -1)`.
    pub const HAMILTON: Algebra = Algebra { a: -1, b: -1 };

    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a >= 0 || b >= 0 {
            return Err(Error::InvalidAlgebra(alloc::format!(
                "({a}, {b}) is not definite"
            )));
        }
        Ok(Algebra { a, b })
    }

    fn consts<T: Scalar>(&self) -> (T, T, T) {
        let a = T::from_i64(self.a).unwrap();
        let b = T::from_i64(self.b).unwrap();
        let ab = a.clone() * b.clone();
        (a, b, ab)
    }

    pub fn mul<T: Scalar>(&self, p: &Quaternion<T>, q: &Quaternion<T>) -> Quaternion<T> {
        let (a, b, ab) = self.consts::<T>();
        let [x0, x1, x2, x3] = &p.x;
        let [y0, y1, y2, y3] = &q.x;
        let c = |u: &T, v: &T| u.clone() * v.clone();
        let z0 = c(x0, y0) + a.clone() * c(x1, y1) + b.clone() * c(x2, y2) - ab * c(x3, y3);
        let z1 = c(x0, y1) + c(x1, y0) - b.clone() * c(x2, y3) + b * c(x3, y2);
        let z2 = c(x0, y2) + c(x2, y0) + a.clone() * c(x1, y3) - a * c(x3, y1);
        let z3 = c(x0, y3) + c(x3, y0) + c(x1, y2) - c(x2, y1);
        Quaternion { x: [z0, z1, z2, z3] }
    }

    /// Reduced norm `x0² - a x1² - b x2² + ab x3²`.
    pub fn norm<T: Scalar>(&self, p: &Quaternion<T>) -> T {
        let (a, b, ab) = self.consts::<T>();
        let [x0, x1, x2, x3] = &p.x;
        let sq = |u: &T| u.clone() * u.clone();
        sq(x0) - a * sq(x1) - b * sq(x2) + ab * sq(x3)
    }

    pub fn inv<T: Scalar>(&self, p: &Quaternion<T>) -> Result<Quaternion<T>> {
        let n = self.norm(p);
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(p.conj().scale_div(&n))
    }

    /// `p q⁻¹`.
    pub fn div<T: Scalar>(&self, p: &Quaternion<T>, q: &Quaternion<T>) -> Result<Quaternion<T>> {
        Ok(self.mul(p, &self.inv(q)?))
    }

    /// Symmetric bilinear form `½ tr(p q̄)` attached to the norm.
    pub fn inner<T: Scalar>(&self, p: &Quaternion<T>, q: &Quaternion<T>) -> T {
        let two = T::from_i64(2).unwrap();
        self.mul(p, &q.conj()).trace() / two
    }
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(x0: T, x1: T, x2: T, x3: T) -> Self {
        Quaternion { x: [x0, x1, x2, x3] }
    }

    pub fn zero() -> Self {
        Self::from_scalar(T::zero())
    }

    pub fn one() -> Self {
        Self::from_scalar(T::one())
    }

    pub fn from_scalar(r: T) -> Self {
        Quaternion { x: [r, T::zero(), T::zero(), T::zero()] }
    }

    pub fn basis(k: usize) -> Self {
        let mut q = Self::zero();
        q.x[k] = T::one();
        q
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|c| c.is_zero())
    }

    pub fn conj(&self) -> Self {
        let [x0, x1, x2, x3] = self.x.clone();
        Quaternion { x: [x0, -x1, -x2, -x3] }
    }

    /// Reduced trace `2 x0`.
    pub fn trace(&self) -> T {
        self.x[0].clone() + self.x[0].clone()
    }

    /// Imaginary part `q - tr(q)/2`.
    pub fn im(&self) -> Self {
        let mut q = self.clone();
        q.x[0] = T::zero();
        q
    }

    pub fn re(&self) -> T {
        self.x[0].clone()
    }

    pub fn scale(&self, r: &T) -> Self {
        Quaternion { x: self.x.clone().map(|c| c * r.clone()) }
    }

    pub fn scale_div(&self, r: &T) -> Self {
        Quaternion { x: self.x.clone().map(|c| c / r.clone()) }
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let [a0, a1, a2, a3] = self.x;
        let [b0, b1, b2, b3] = o.x;
        Quaternion { x: [a0 + b0, a1 + b1, a2 + b2, a3 + b3] }
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let [a0, a1, a2, a3] = self.x;
        let [b0, b1, b2, b3] = o.x;
        Quaternion { x: [a0 - b0, a1 - b1, a2 - b2, a3 - b3] }
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion { x: self.x.map(|c| -c) }
    }
}

impl<T: fmt::Debug> fmt::Debug for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}, {:?}, {:?}]", self.x[0], self.x[1], self.x[2], self.x[3])
    }
}

impl fmt::Display for Quaternion<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, unit) in self.x.iter().zip(["", "i", "j", "k"]) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == Q::from_integer(1.into()) && !unit.is_empty() {
                write!(f, "{sign}{unit}")?;
            } else {
                write!(f, "{sign}{mag}{unit}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact rational quaternion from integer numerators over a common denominator.
pub fn qr(x: [i64; 4], den: i64) -> Quaternion<Q> {
    Quaternion { x: x.map(|c| crate::q(c, den)) }
}

/// Float copy of an exact quaternion.
pub fn to_f64(p: &Quaternion<Q>) -> Quaternion<f64> {
    use num_traits::ToPrimitive;
    Quaternion { x: p.x.clone().map(|c| c.to_f64().unwrap()) }
}
