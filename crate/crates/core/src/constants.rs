//! Closed-form volumes, counting and equidistribution constants, measure
//! masses and special integrals, each with an independent numerical or
//! exact cross-check.
//!
//! Constants that involve π are [`PiMono`] values `coeff · π^pow` with an
//! exact rational coefficient, so identities between them are exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::{Div, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::heisenberg::{cygan4_heis, HeisPoint};
use crate::quadrature::{integrate, integrate2};
use crate::quat::Algebra;
use crate::Q;

/// The index `[Y_2 : U_q(O_2)]` at the prime 2, which is `m_A` for even `D_A`.
pub const INDEX_AT_TWO: u64 = 72;

/// Relative agreement required between a closed form and its quadrature.
pub const MATCH_TOL: f64 = 1e-4;

/// `coeff · π^pow`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiMono {
    pub coeff: Q,
    pub pow: i32,
}

impl PiMono {
    pub fn new(coeff: Q, pow: i32) -> Self {
        PiMono { coeff, pow }
    }

    pub fn rational(coeff: Q) -> Self {
        PiMono { coeff, pow: 0 }
    }

    pub fn to_f64(&self) -> f64 {
        qf(&self.coeff) * PI.powi(self.pow)
    }

    /// `"p/q"` (or `"p"`) for the rational coefficient.
    pub fn coeff_string(&self) -> String {
        rat_string(&self.coeff)
    }
}

impl Mul for PiMono {
    type Output = PiMono;
    fn mul(self, o: PiMono) -> PiMono {
        PiMono { coeff: self.coeff * o.coeff, pow: self.pow + o.pow }
    }
}

impl Div for PiMono {
    type Output = PiMono;
    fn div(self, o: PiMono) -> PiMono {
        PiMono { coeff: self.coeff / o.coeff, pow: self.pow - o.pow }
    }
}

impl fmt::Display for PiMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pow {
            0 => write!(f, "{}", rat_string(&self.coeff)),
            1 => write!(f, "{}·π", rat_string(&self.coeff)),
            p => write!(f, "{}·π^{}", rat_string(&self.coeff), p),
        }
    }
}

/// `"p/q"`, or `"p"` when the denominator is 1.
pub fn rat_string(x: &Q) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn qf(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

fn pow2(e: i64) -> Q {
    if e >= 0 {
        qi(BigInt::one() << e as usize)
    } else {
        Q::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Arithmetic input of the constant formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticData {
    pub d_a: u64,
    pub unit_count: u64,
    /// Reported only (number of cusps); never computed.
    pub class_number: Option<u64>,
}

impl ArithmeticData {
    /// `d_a` must be squarefree with an odd number of prime factors.
    pub fn new(d_a: u64, unit_count: u64, class_number: Option<u64>) -> Result<Self> {
        let f = prime_factors(d_a);
        if d_a < 2 || f.iter().any(|&(_, e)| e > 1) || f.len() % 2 == 0 {
            return Err(Error::InvalidAlgebra(format!("{d_a} is not a definite discriminant")));
        }
        if unit_count == 0 {
            return Err(Error::Degenerate("unit count must be positive".into()));
        }
        Ok(ArithmeticData { d_a, unit_count, class_number })
    }

    pub fn m_a(&self) -> u64 {
        if self.d_a % 2 == 0 {
            INDEX_AT_TWO
        } else {
            1
        }
    }

    pub fn local_primes(&self) -> Vec<u64> {
        prime_factors(self.d_a).into_iter().map(|(p, _)| p).collect()
    }

    /// `∏_{p | D_A} (p-1)(p²+1)(p³-1)`.
    pub fn local_product(&self) -> BigInt {
        self.local_primes().iter().map(|&p| local_factors(p).unwrap().1).product()
    }

    fn units(&self) -> Q {
        qi(self.unit_count)
    }

    fn d(&self) -> Q {
        qi(self.d_a)
    }
}

/// `(|Sp_3(F_p)|, (p-1)(p²+1)(p³-1))`.
pub fn local_factors(p: u64) -> Result<(BigInt, BigInt)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let b = BigInt::from(p);
    let sp3 = b.pow(9) * (b.pow(2) - 1) * (b.pow(4) - 1) * (b.pow(6) - 1);
    let nonsplit = (&b - 1) * (b.pow(2) + 1) * (b.pow(3) - 1);
    Ok((sp3, nonsplit))
}

/// Volume of `PU_q(O) \ H²_H`: `π⁴ m_A ∏(p-1)(p²+1)(p³-1) / (42525 · 2¹³)`.
pub fn orbifold_volume(d: &ArithmeticData) -> PiMono {
    PiMono::new(qi(d.m_a()) * qi(d.local_product()) / qi(42525u64 * 8192), 4)
}

/// Volume of the cusp neighbourhood `Γ_{H_1} \ H_1`: `D_A² / (160 |O×|²)`.
pub fn cusp_volume(d: &ArithmeticData) -> Q {
    d.d() * d.d() / (qi(160) * d.units() * d.units())
}

/// Mass of `N(O) \ Heis_7` for the Haar measure `dζ du`: `D_A² / 4`.
pub fn heisenberg_mass(d: &ArithmeticData) -> Q {
    d.d() * d.d() / qi(4)
}

/// Volume of the cusp cross-section `Γ_{H_1} \ ∂H_1`: the Heisenberg mass
/// over 8, divided by the index `|O×|²/2` of `N(O)` in `Γ_{H_1}`.
pub fn cusp_boundary_volume(d: &ArithmeticData) -> Q {
    heisenberg_mass(d) / qi(8) * qi(2) / (d.units() * d.units())
}

/// Leading constant of the primitive-triple count, from the closed form.
pub fn mertens_constant(d: &ArithmeticData) -> PiMono {
    let num = qi(204120) * d.d().pow(4);
    let den = qi(d.m_a()) * d.units() * qi(d.local_product());
    PiMono::new(num / den, -8)
}

/// The two candidate normalisers of the equidistribution statement:
/// `π⁸ m_A |O×|^k ∏ / (816480 D_A²)` for `k = 2` and `k = 1`.
pub fn equidist_normalizers(d: &ArithmeticData) -> (PiMono, PiMono) {
    let base = qi(d.m_a()) * qi(d.local_product()) / (qi(816480) * d.d() * d.d());
    (PiMono::new(base.clone() * d.units() * d.units(), 8), PiMono::new(base * d.units(), 8))
}

/// Normaliser assembled from the volumes,
/// `8 π⁴ Vol(orbifold) / (3 |O×| Vol(cusp))`.
pub fn equidist_normalizer_from_volumes(d: &ArithmeticData) -> PiMono {
    PiMono::new(qi(8), 4) * orbifold_volume(d) / PiMono::rational(qi(3) * d.units() * cusp_volume(d))
}

/// Counting constant assembled from the volumes,
/// `15 |O×|³ Vol(cusp)² / (π⁴ Vol(orbifold))`.
pub fn mertens_from_volumes(d: &ArithmeticData) -> PiMono {
    let v = cusp_volume(d);
    PiMono::new(qi(15) * d.units().pow(3) * &v * &v, -4) / orbifold_volume(d)
}

/// Same constant through the horoball-to-horoball perpendicular count:
/// `½ |O×|³ c(H_1, H_1) e^{10 s'}` with `s' = ln(s)/2 - ln 2`.
pub fn mertens_from_perpendiculars(d: &ArithmeticData) -> PiMono {
    let v = PiMono::rational(cusp_volume(d));
    let c = perpendicular_constant(2, &v, &v, &orbifold_volume(d), 1, PerpCase::HoroballHoroball);
    PiMono::rational(d.units().pow(3) / qi(2) * pow2(-10)) * c
}

/// `Vol(S^k)`.
pub fn sphere_volume(k: u64) -> PiMono {
    if k % 2 == 1 {
        let m = k.div_ceil(2);
        PiMono::new(qi(2) / qi(fact(m - 1)), m as i32)
    } else {
        let m = k / 2;
        PiMono::new(pow2(2 * m as i64 + 1) * qi(fact(m)) / qi(fact(2 * m)), m as i32)
    }
}

/// `ζ(2)ζ(4)ζ(6) = π¹² / 510300`.
pub fn zeta_product() -> PiMono {
    PiMono::new(Q::new(1.into(), 510300.into()), 12)
}

/// `ζ(2)ζ(4)ζ(6)` from Bernoulli numbers, `ζ(2k) = |B_{2k}| (2π)^{2k} / (2 (2k)!)`.
pub fn zeta_product_from_bernoulli() -> PiMono {
    let b = [Q::new(1.into(), 6.into()), Q::new(1.into(), 30.into()), Q::new(1.into(), 42.into())];
    b.iter().enumerate().fold(PiMono::rational(qi(1)), |acc, (i, bk)| {
        let k = 2 * (i as u64 + 1);
        acc * PiMono::new(bk.abs() * pow2(k as i64) / (qi(2) * qi(fact(k))), k as i32)
    })
}

/// Truncated Euler product over `p ≤ p_max` and a bound on the relative
/// truncation error (`Σ_{n > p_max} (n⁻² + n⁻⁴ + n⁻⁶) ≤ 1.01 / p_max`).
pub fn zeta_product_euler(p_max: usize) -> (f64, f64) {
    let mut sieve = vec![true; p_max + 1];
    let mut prod = 1.0;
    for p in 2..=p_max {
        if !sieve[p] {
            continue;
        }
        let mut m = p * p;
        while m <= p_max {
            sieve[m] = false;
            m += p;
        }
        let x = 1.0 / (p as f64 * p as f64);
        prod /= (1.0 - x) * (1.0 - x * x) * (1.0 - x * x * x);
    }
    let tail = 1.01 / p_max as f64;
    (prod, tail.exp_m1())
}

/// `∫_ℝ ρ² / (1+ρ²)^{2n+1} dρ = π n (4n-2)! / (2^{4n-2} ((2n)!)²)`.
pub fn residue_integral(n: u64) -> PiMono {
    PiMono::new(qi(n) * qi(fact(4 * n - 2)) / (pow2(4 * n as i64 - 2) * qi(fact(2 * n).pow(2))), 1)
}

/// `∫_0^∞ s^{2n-3} / (s+1)^{4n-1} ds = (2n-3)! (2n)! / (4n-2)!`.
pub fn beta_integral(n: u64) -> Q {
    qi(fact(2 * n - 3) * fact(2 * n)) / qi(fact(4 * n - 2))
}

/// `c'_n = 2^{2n-1} (2n-3)! (2n-1)! (2n+1) / (4n-1)!`.
pub fn c_prime(n: u64) -> Q {
    pow2(2 * n as i64 - 1) * qi(fact(2 * n - 3) * fact(2 * n - 1) * (2 * n + 1)) / qi(fact(4 * n - 1))
}

/// `I_{p,q} = ∫_{-1}^1 t^{2p} (1-t²)^q dt = 2^{2q+1} q! (2p)! (p+q)! / (p! (2p+2q+1)!)`.
pub fn i_pq(p: u64, q: u64) -> Q {
    pow2(2 * q as i64 + 1) * qi(fact(q) * fact(2 * p) * fact(p + q)) / qi(fact(p) * fact(2 * p + 2 * q + 1))
}

/// Total mass of the Patterson measure `μ_x`: `Vol(S^{4n-1}) / 2^{4n-1}`.
pub fn patterson_mass(n: u64) -> PiMono {
    PiMono::rational(pow2(-(4 * n as i64 - 1))) * sphere_volume(4 * n - 1)
}

/// One closed form against its independent evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub symbolic: String,
    pub closed: f64,
    pub numeric: f64,
    pub rel_err: f64,
}

impl Check {
    fn new(name: &str, symbolic: String, closed: f64, numeric: f64) -> Result<Self> {
        let rel_err = ((closed - numeric) / closed).abs();
        if rel_err.is_nan() || rel_err > MATCH_TOL {
            return Err(Error::Oracle(format!("{name}: closed {closed}, numeric {numeric}")));
        }
        Ok(Check { name: name.into(), symbolic, closed, numeric, rel_err })
    }
}

/// Every integral constant for dimension `n`, re-evaluated by quadrature.
/// Also asserts the exact identities that tie them together.
pub fn zeta_and_integrals(n: u64) -> Result<Vec<Check>> {
    if n < 2 {
        return Err(Error::Degenerate("n must be at least 2".into()));
    }
    let tol = 1e-9;
    let nn = n as i32;
    let mut out = Vec::new();

    let res = residue_integral(n);
    let num = integrate(|r| r * r / (1.0 + r * r).powi(2 * nn + 1), f64::NEG_INFINITY, f64::INFINITY, tol)?;
    out.push(Check::new("residue_integral", res.to_string(), res.to_f64(), num.value)?);

    let beta = beta_integral(n);
    let num = integrate(|s| s.powi(2 * nn - 3) / (s + 1.0).powi(4 * nn - 1), 0.0, f64::INFINITY, tol)?;
    out.push(Check::new("beta_integral", rat_string(&beta), qf(&beta), num.value)?);

    let cp = c_prime(n);
    let theta = integrate(
        |t| t.cos().powi(2 * nn - 3) * t.sin().powi(2) / (1.0 + t.cos()).powi(2 * nn + 1),
        0.0,
        PI / 2.0,
        tol,
    )?;
    out.push(Check::new("c_prime_theta", rat_string(&cp), qf(&cp), theta.value)?);
    let half_angle = integrate(|t| (1.0 - t * t).powi(2 * nn - 3) * t * t * (1.0 + t * t), 0.0, 1.0, tol)?;
    out.push(Check::new(
        "c_prime_half_angle",
        rat_string(&cp),
        qf(&cp),
        half_angle.value / 2f64.powi(2 * nn - 2),
    )?);
    let via_i = (i_pq(1, 2 * n - 3) + i_pq(2, 2 * n - 3)) * pow2(-(2 * n as i64 - 1));
    if via_i != cp {
        return Err(Error::Oracle(format!("c'_{n} from I_pq is {via_i}, closed form {cp}")));
    }

    for p in 1..=3u64 {
        for q in 1..=3u64 {
            let v = i_pq(p, q);
            let num = integrate(|t| t.powi(2 * p as i32) * (1.0 - t * t).powi(q as i32), -1.0, 1.0, tol)?;
            out.push(Check::new(&format!("i_{p}_{q}"), rat_string(&v), qf(&v), num.value)?);
        }
    }

    let mu = patterson_mass(n);
    let factored = PiMono::new(qi(1), 1) * sphere_volume(4 * n - 5) * res * PiMono::rational(beta);
    if factored != mu {
        return Err(Error::Oracle(format!("Patterson mass factorisation {factored} vs {mu}")));
    }
    let pref = (sphere_volume(4 * n - 5) * sphere_volume(2)).to_f64();
    let e = 4 * nn - 5;
    let num = integrate2(
        |s, r| s.powi(e) * r * r / ((s * s + 1.0).powi(2) + r * r).powi(2 * nn + 1),
        (0.0, f64::INFINITY),
        (0.0, f64::INFINITY),
        tol,
    )?;
    out.push(Check::new("patterson_mass", mu.to_string(), mu.to_f64(), pref * num.value)?);

    let sv = sphere_volume(4 * n - 1);
    let num = sphere_volume_numeric(4 * n - 1)?;
    out.push(Check::new("sphere_volume", sv.to_string(), sv.to_f64(), num)?);

    let z = zeta_product();
    if zeta_product_from_bernoulli() != z {
        return Err(Error::Oracle("ζ(2)ζ(4)ζ(6) closed form".into()));
    }
    let (euler, bound) = zeta_product_euler(100_000);
    let c = Check::new("zeta_product", z.to_string(), z.to_f64(), euler)?;
    if c.rel_err > bound {
        return Err(Error::Oracle(format!("Euler product error {} exceeds bound {bound}", c.rel_err)));
    }
    out.push(c);
    Ok(out)
}

/// `Vol(S^k) = (k+1) · Vol(B^{k+1})` with the ball volume built by
/// integrating slices, `Vol(B^m) = Vol(B^{m-1}) ∫_{-1}^1 (1-x²)^{(m-1)/2} dx`.
fn sphere_volume_numeric(k: u64) -> Result<f64> {
    let mut ball = 2.0;
    for m in 2..=k + 1 {
        let e = (m as f64 - 1.0) / 2.0;
        ball *= integrate(|x| (1.0 - x * x).powf(e), -1.0, 1.0, 1e-11)?.value;
    }
    Ok((k + 1) as f64 * ball)
}

/// Closed-form masses of the Bowen–Margulis and skinning measures, as
/// ratios to the relevant volume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureMasses {
    pub critical_exponent: u64,
    /// `‖m_BM‖ / Vol(M)`.
    pub bowen_margulis: PiMono,
    /// `m̃_BM / vol_{T¹H}`.
    pub liouville_ratio: Q,
    /// `‖σ_D‖ / Vol(Γ_D \ D)` for a horoball.
    pub horoball_skinning: Q,
    /// Same for a geodesic line with pointwise stabiliser of order `m`.
    pub geodesic_skinning: PiMono,
    /// Same for a quaternionic geodesic line.
    pub qline_skinning: PiMono,
}

pub fn measure_masses(n: u64, m: u64) -> Result<MeasureMasses> {
    if n < 2 || m == 0 {
        return Err(Error::Degenerate("need n ≥ 2 and m ≥ 1".into()));
    }
    let ni = n as i64;
    Ok(MeasureMasses {
        critical_exponent: 4 * n + 2,
        bowen_margulis: PiMono::new(qi(1) / (pow2(4 * ni - 5) * qi(fact(2 * n - 1))), 2 * n as i32),
        liouville_ratio: pow2(-(4 * ni - 4)),
        horoball_skinning: qi(16 * (2 * n + 1)),
        geodesic_skinning: PiMono::new(qi(fact(2 * n + 1)) / qi(BigInt::from(m * n) * fact(4 * n - 1)), 2 * n as i32 - 1),
        qline_skinning: PiMono::new(qi(1) / (qi(m) * pow2(4 * ni - 2) * qi(fact(2 * n - 3))), 2 * n as i32 - 2),
    })
}

/// Target of the common perpendiculars counted from a horoball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerpCase {
    HoroballHoroball,
    HoroballGeodesic,
    HoroballQline,
}

impl core::str::FromStr for PerpCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "horoball-horoball" => Ok(PerpCase::HoroballHoroball),
            "horoball-geodesic" => Ok(PerpCase::HoroballGeodesic),
            "horoball-qline" => Ok(PerpCase::HoroballQline),
            other => Err(Error::UnknownCase(other.into())),
        }
    }
}

/// Closed-form prefactor of `c(D⁻, D⁺)`, without the volumes.
pub fn perpendicular_prefactor(n: u64, m_plus: u64, case: PerpCase) -> PiMono {
    let ni = n as i64;
    match case {
        PerpCase::HoroballHoroball => {
            PiMono::new(pow2(4 * ni + 1) * qi(fact(2 * n + 1)) / qi(n), -2 * n as i32)
        }
        PerpCase::HoroballGeodesic => PiMono::new(
            pow2(4 * ni) * qi(fact(2 * n - 1) * fact(2 * n + 1)) / (qi(m_plus) * qi(fact(4 * n))),
            -1,
        ),
        PerpCase::HoroballQline => PiMono::new(qi(2 * (n - 1) * (2 * n - 1)) / qi(m_plus), -2),
    }
}

/// The same prefactor from the masses, `‖σ⁺‖ ‖σ⁻‖ / (δ ‖m_BM‖)`.
pub fn perpendicular_prefactor_from_masses(n: u64, m_plus: u64, case: PerpCase) -> PiMono {
    let m = measure_masses(n, m_plus).unwrap();
    let horo = PiMono::rational(m.horoball_skinning.clone());
    let plus = match case {
        PerpCase::HoroballHoroball => horo.clone(),
        PerpCase::HoroballGeodesic => m.geodesic_skinning,
        PerpCase::HoroballQline => m.qline_skinning,
    };
    horo * plus / (PiMono::rational(qi(m.critical_exponent)) * m.bowen_margulis)
}

/// `c(D⁻, D⁺)`: the prefactor times `Vol⁻ Vol⁺ / Vol`.
pub fn perpendicular_constant(
    n: u64,
    vol_minus: &PiMono,
    vol_plus: &PiMono,
    vol_total: &PiMono,
    m_plus: u64,
    case: PerpCase,
) -> PiMono {
    perpendicular_prefactor(n, m_plus, case) * vol_minus.clone() * vol_plus.clone() / vol_total.clone()
}

/// Density `1 / d_Cyg(v₋, v₊)^{8n+4}` of the Bowen–Margulis measure in Hopf
/// coordinates, exact for rational endpoints.
pub fn bm_density(alg: &Algebra, v_minus: &HeisPoint, v_plus: &HeisPoint, n: u64) -> Result<Q> {
    let d4 = cygan4_heis(alg, v_minus, v_plus)?;
    if d4.is_zero() {
        return Err(Error::Degenerate("coincident endpoints".into()));
    }
    Ok(qi(1) / d4.pow(2 * n as i32 + 1))
}

/// `1 / ((4n+2)` as the ratio of cusp volume to cusp cross-section volume.
pub fn horoball_volume_ratio(n: u64) -> Q {
    Q::new(1.into(), (4 * n + 2).into())
}

/// Factor `π⁴/120` coming from the duality between the two Haar
/// normalisations; exposed for reports only.
pub fn duality_factor() -> PiMono {
    PiMono::new(Q::new(1.into(), 120.into()), 4)
}

/// Every exact identity between the constants for the data `d`;
/// returns the failing ones by name.
pub fn exact_identities(d: &ArithmeticData) -> Vec<(&'static str, bool)> {
    let c = mertens_constant(d);
    let (n2, n1) = equidist_normalizers(d);
    vec![
        ("mertens_from_volumes", mertens_from_volumes(d) == c),
        ("mertens_from_perpendiculars", mertens_from_perpendiculars(d) == c),
        ("equidist_from_volumes_units", equidist_normalizer_from_volumes(d) == n1),
        ("equidist_units_total_mass", PiMono::rational(heisenberg_mass(d)) == n1 * c.clone()),
        (
            "equidist_units_squared_total_mass",
            PiMono::rational(heisenberg_mass(d) * d.units()) == n2 * c,
        ),
        ("cusp_boundary_ratio", cusp_volume(d) == cusp_boundary_volume(d) * horoball_volume_ratio(2)),
        ("index_at_two", d.d_a % 2 == 1 || d.m_a() == INDEX_AT_TWO),
        (
            "perpendicular_masses",
            [PerpCase::HoroballHoroball, PerpCase::HoroballGeodesic, PerpCase::HoroballQline]
                .iter()
                .all(|&k| perpendicular_prefactor(2, 3, k) == perpendicular_prefactor_from_masses(2, 3, k)),
        ),
    ]
}

/// Fraction of the closed-form count actually seen: `count / (C s⁵)`.
pub fn mertens_ratio(d: &ArithmeticData, s: f64, count: u64) -> f64 {
    count as f64 / (mertens_constant(d).to_f64() * s.powi(5))
}

/// Convenience for reports: `(value, "p/q")` of a rational.
pub fn rat_pair(x: &Q) -> (f64, String) {
    (x.to_f64().unwrap_or(f64::NAN), rat_string(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::haar_mass_check;
    use crate::order::Order;
    use crate::q;
    use crate::quat::Quaternion;
    use proptest::prelude::*;

    fn hurwitz() -> ArithmeticData {
        ArithmeticData::new(2, 24, Some(1)).unwrap()
    }

    fn da3() -> ArithmeticData {
        ArithmeticData::new(3, 12, Some(1)).unwrap()
    }

    #[test]
    fn data_validation() {
        assert!(ArithmeticData::new(6, 24, None).is_err());
        assert!(ArithmeticData::new(4, 24, None).is_err());
        assert!(ArithmeticData::new(1, 24, None).is_err());
        assert!(ArithmeticData::new(30, 2, None).is_ok());
        assert_eq!(hurwitz().m_a(), 72);
        assert_eq!(da3().m_a(), 1);
        assert_eq!(ArithmeticData::new(30, 2, None).unwrap().local_primes(), vec![2, 3, 5]);
    }

    #[test]
    fn local_factor_values() {
        let (sp, ns) = local_factors(2).unwrap();
        assert_eq!(sp, BigInt::from(1_451_520));
        assert_eq!(ns, BigInt::from(35));
        assert_eq!(local_factors(3).unwrap().1, BigInt::from(520));
        assert_eq!(local_factors(9), Err(Error::NotPrime(9)));
        assert_eq!(local_factors(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn volumes() {
        let v = orbifold_volume(&hurwitz());
        assert_eq!(v, PiMono::new(q(1, 138240), 4));
        assert!((v.to_f64() - 7.0464e-4).abs() < 1e-7);
        assert_eq!(orbifold_volume(&da3()), PiMono::new(q(520, 348_364_800), 4));
        assert_eq!(cusp_volume(&hurwitz()), q(1, 23040));
        assert_eq!(cusp_volume(&da3()), q(1, 2560));
        let big = ArithmeticData::new(105, 2, None).unwrap();
        let ratio = orbifold_volume(&big) / orbifold_volume(&da3());
        assert_eq!(ratio.coeff, qi(local_factors(5).unwrap().1 * local_factors(7).unwrap().1));
        let d2 = ArithmeticData::new(7, 12, None).unwrap();
        assert_eq!(cusp_volume(&d2) / cusp_volume(&da3()), q(49, 9));
    }

    #[test]
    fn counting_constants() {
        let c = mertens_constant(&hurwitz());
        assert_eq!(c, PiMono::new(qi(54), -8));
        assert!((c.to_f64() - 5.6912e-3).abs() < 1e-6);
        assert!((mertens_constant(&da3()).to_f64() - 0.27925).abs() < 1e-5);
        for d in [hurwitz(), da3()] {
            for (name, ok) in exact_identities(&d) {
                assert!(ok, "{name}");
            }
        }
        let (n2, n1) = equidist_normalizers(&hurwitz());
        assert_eq!(n1, PiMono::new(q(1, 54), 8));
        assert_eq!(n2, PiMono::new(q(24, 54), 8));
    }

    #[test]
    fn haar_mass_agrees_with_lattice_covolume() {
        assert_eq!(haar_mass_check(&Order::hurwitz()).unwrap(), heisenberg_mass(&hurwitz()));
        assert_eq!(haar_mass_check(&Order::da3()).unwrap(), heisenberg_mass(&da3()));
    }

    #[test]
    fn sphere_volumes() {
        assert_eq!(sphere_volume(7), PiMono::new(q(1, 3), 4));
        assert_eq!(sphere_volume(2), PiMono::new(qi(4), 1));
        assert_eq!(sphere_volume(3), PiMono::new(qi(2), 2));
        for n in 2..5u64 {
            let s = sphere_volume(4 * n - 2);
            let want = PiMono::new(pow2(4 * n as i64 - 1) * qi(fact(2 * n - 1)) / qi(fact(4 * n - 2)), 2 * n as i32 - 1);
            assert_eq!(s, want);
            let ratio = sphere_volume(4 * n - 1) / sphere_volume(4 * n - 5);
            assert_eq!(ratio, PiMono::new(Q::new(1.into(), ((2 * n - 1) * (2 * n - 2)).into()), 2));
        }
    }

    #[test]
    fn integral_closed_forms() {
        assert_eq!(residue_integral(2), PiMono::new(q(5, 128), 1));
        assert_eq!(beta_integral(2), q(1, 30));
        assert_eq!(c_prime(2), q(1, 21));
        assert_eq!(i_pq(1, 1), q(4, 15));
        assert_eq!(patterson_mass(2), PiMono::new(q(1, 384), 4));
        assert_eq!(zeta_product().to_string(), "1/510300·π^12");
        assert!((zeta_product().to_f64() - 1.8113).abs() < 1e-4);
    }

    #[test]
    fn quadrature_suite() {
        for n in 2..=3 {
            let checks = zeta_and_integrals(n).unwrap();
            assert!(checks.iter().all(|c| c.rel_err <= MATCH_TOL));
            assert!(checks.iter().any(|c| c.name == "patterson_mass"));
        }
        assert!(zeta_and_integrals(1).is_err());
    }

    #[test]
    fn check_rejects_mismatch() {
        assert!(Check::new("x", "1".into(), 1.0, 1.001).is_err());
        assert!(Check::new("x", "1".into(), 1.0, f64::NAN).is_err());
    }

    #[test]
    fn masses_in_dimension_two() {
        let m = measure_masses(2, 5).unwrap();
        assert_eq!(m.critical_exponent, 10);
        assert_eq!(m.bowen_margulis, PiMono::new(q(1, 48), 4));
        assert_eq!(m.horoball_skinning, qi(80));
        assert_eq!(m.geodesic_skinning, PiMono::new(q(1, 84 * 5), 3));
        assert_eq!(m.qline_skinning, PiMono::new(q(1, 64 * 5), 2));
        assert_eq!(m.liouville_ratio, q(1, 16));
        assert!(measure_masses(1, 1).is_err());
    }

    #[test]
    fn perpendicular_prefactors() {
        assert_eq!(perpendicular_prefactor(2, 1, PerpCase::HoroballHoroball), PiMono::new(qi(30720), -4));
        assert_eq!(perpendicular_prefactor(2, 7, PerpCase::HoroballQline), PiMono::new(q(6, 7), -2));
        for n in 2..6 {
            for m in 1..4 {
                for k in [PerpCase::HoroballHoroball, PerpCase::HoroballGeodesic, PerpCase::HoroballQline] {
                    assert_eq!(perpendicular_prefactor(n, m, k), perpendicular_prefactor_from_masses(n, m, k));
                }
            }
        }
        assert_eq!("horoball-geodesic".parse::<PerpCase>(), Ok(PerpCase::HoroballGeodesic));
        assert_eq!("cusp".parse::<PerpCase>(), Err(Error::UnknownCase("cusp".into())));
    }

    fn hp(w0: [i64; 4], den: i64, w: [i64; 4]) -> HeisPoint {
        let f = |x: [i64; 4], d: i64| Quaternion::new(q(x[0], d), q(x[1], d), q(x[2], d), q(x[3], d));
        HeisPoint::new(&Algebra::HAMILTON, f(w0, den), f(w, 1)).unwrap()
    }

    #[test]
    fn bm_density_examples() {
        let alg = Algebra::HAMILTON;
        let o = hp([0; 4], 1, [0; 4]);
        let up = hp([0, 1, 0, 0], 2, [0; 4]);
        assert_eq!(bm_density(&alg, &o, &up, 2).unwrap(), qi(1));
        let up2 = hp([0, 4, 0, 0], 2, [0; 4]);
        assert_eq!(bm_density(&alg, &o, &up2, 2).unwrap(), q(1, 1 << 20));
        assert!(bm_density(&alg, &o, &o, 2).is_err());
    }

    proptest! {
        #[test]
        fn bm_density_is_translation_invariant(
            a in prop::array::uniform4(-3i64..4), b in prop::array::uniform4(-3i64..4),
            c in prop::array::uniform4(-3i64..4), ia in prop::array::uniform3(-3i64..4),
            ib in prop::array::uniform3(-3i64..4), ic in prop::array::uniform3(-3i64..4),
        ) {
            let alg = Algebra::HAMILTON;
            let mk = |w: [i64; 4], im: [i64; 3]| {
                let n = w.iter().map(|x| x * x).sum::<i64>();
                hp([n, im[0], im[1], im[2]], 2, w)
            };
            let (x, y, g) = (mk(a, ia), mk(b, ib), mk(c, ic));
            prop_assume!(x != y);
            let gx = crate::heisenberg::heis_mul(&alg, &g, &x).unwrap();
            let gy = crate::heisenberg::heis_mul(&alg, &g, &y).unwrap();
            prop_assert_eq!(bm_density(&alg, &x, &y, 2).unwrap(), bm_density(&alg, &gx, &gy, 2).unwrap());
        }
    }
}
