//! Report records. Exact rationals are strings `"p/q"`; floats only appear in
//! fields that are plainly decimal displays or statistics.

use heis_mertens_core::constants::{self, ArithmeticData, Check, PiMono};
use heis_mertens_core::counting::{fit_and_compare, EquidistReport, CELLS};
use heis_mertens_core::{Order, Q};
use serde::{Deserialize, Serialize};

use crate::rational_string;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Symbolic {
    /// Rational coefficient `"p/q"`.
    pub coefficient: String,
    pub pi_power: i32,
    pub display: String,
    pub decimal: f64,
}

impl From<&PiMono> for Symbolic {
    fn from(p: &PiMono) -> Self {
        Symbolic { coefficient: p.coeff_string(), pi_power: p.pow, display: p.to_string(), decimal: p.to_f64() }
    }
}

impl From<&Q> for Symbolic {
    fn from(x: &Q) -> Self {
        Symbolic::from(&PiMono::rational(x.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub s: String,
    pub count: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub order: String,
    pub discriminant: u64,
    pub unit_count: u64,
    pub scale: i64,
    pub reference_constant: Symbolic,
    /// False for `scale > 1`: the congruence index factor is not included.
    pub reference_is_exact: bool,
    pub rows: Vec<CountRow>,
    pub fit: Option<Fit>,
}

/// Arithmetic data read off a validated order.
pub fn arithmetic_data(order: &Order) -> ArithmeticData {
    ArithmeticData::new(order.discriminant(), order.units().len() as u64, None)
        .expect("a validated maximal order has a definite discriminant")
}

pub fn count_report(order: &Order, scale: i64, rows: &[(Q, u64)]) -> CountReport {
    let d = arithmetic_data(order);
    let c = constants::mertens_constant(&d);
    let cf = c.to_f64();
    let fit = fit_and_compare(rows, cf).ok().map(|t| Fit { slope: t.slope, intercept: t.intercept });
    CountReport {
        order: order.name.clone(),
        discriminant: d.d_a,
        unit_count: d.unit_count,
        scale,
        reference_constant: Symbolic::from(&c),
        reference_is_exact: scale == 1,
        rows: rows
            .iter()
            .map(|(s, n)| {
                let sv = num_traits::ToPrimitive::to_f64(s).unwrap();
                CountRow { s: rational_string(s), count: *n, ratio: *n as f64 / (cf * sv.powi(5)) }
            })
            .collect(),
        fit,
    }
}

pub fn count_csv(r: &CountReport) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &r.rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn read_count_csv(text: &str) -> Result<Vec<CountRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizerCheck {
    pub name: String,
    pub normalizer: Symbolic,
    /// `normaliser · s⁻⁵ · total` divided by the Haar mass `D_A²/4`.
    pub mass_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistRow {
    pub s: String,
    pub total: u64,
    pub discrepancy: f64,
    pub expected_fraction: f64,
    pub observed: Vec<u64>,
    pub normalizers: Vec<NormalizerCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistReportOut {
    pub order: String,
    pub scale: i64,
    pub cells: usize,
    pub haar_mass: String,
    pub rows: Vec<EquidistRow>,
}

pub fn equidist_report(order: &Order, scale: i64, reports: &[EquidistReport]) -> EquidistReportOut {
    let d = arithmetic_data(order);
    let mass = constants::heisenberg_mass(&d);
    let massf = num_traits::ToPrimitive::to_f64(&mass).unwrap();
    let (n2, n1) = constants::equidist_normalizers(&d);
    let rows = reports
        .iter()
        .map(|r| {
            let sv = num_traits::ToPrimitive::to_f64(&r.s).unwrap();
            let norm = |name: &str, n: &PiMono| NormalizerCheck {
                name: name.into(),
                normalizer: Symbolic::from(n),
                mass_ratio: n.to_f64() * r.total as f64 / sv.powi(5) / massf,
            };
            EquidistRow {
                s: rational_string(&r.s),
                total: r.total,
                discrepancy: r.discrepancy,
                expected_fraction: 1.0 / CELLS as f64,
                observed: r.observed.to_vec(),
                normalizers: vec![norm("units_squared", &n2), norm("units", &n1)],
            }
        })
        .collect();
    EquidistReportOut { order: order.name.clone(), scale, cells: CELLS, haar_mass: rational_string(&mass), rows }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    pub value: Symbolic,
    /// Relative residual of the independent check, when there is one.
    pub residual: Option<f64>,
    pub check: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub discriminant: u64,
    pub unit_count: u64,
    pub m_a: u64,
    pub class_number: Option<u64>,
    pub local_primes: Vec<u64>,
    pub constants: Vec<ConstantEntry>,
    pub integrals: Vec<ConstantEntry>,
    pub identities: Vec<(String, bool)>,
}

fn entry(name: &str, value: Symbolic) -> ConstantEntry {
    ConstantEntry { name: name.into(), value, residual: None, check: None }
}

pub fn constants_report(d: &ArithmeticData, checks: &[Check]) -> ConstantsReport {
    let (n2, n1) = constants::equidist_normalizers(d);
    let masses = constants::measure_masses(2, 1).expect("n = 2, m = 1");
    let mut list = vec![
        entry("orbifold_volume", Symbolic::from(&constants::orbifold_volume(d))),
        entry("cusp_volume", Symbolic::from(&constants::cusp_volume(d))),
        entry("cusp_boundary_volume", Symbolic::from(&constants::cusp_boundary_volume(d))),
        entry("heisenberg_mass", Symbolic::from(&constants::heisenberg_mass(d))),
        entry("mertens_constant", Symbolic::from(&constants::mertens_constant(d))),
        entry("mertens_from_volumes", Symbolic::from(&constants::mertens_from_volumes(d))),
        entry("equidist_normalizer_units_squared", Symbolic::from(&n2)),
        entry("equidist_normalizer_units", Symbolic::from(&n1)),
        entry("equidist_normalizer_from_volumes", Symbolic::from(&constants::equidist_normalizer_from_volumes(d))),
        entry("local_product", Symbolic::from(&Q::from_integer(d.local_product()))),
        entry("zeta_product", Symbolic::from(&constants::zeta_product())),
        entry("duality_factor", Symbolic::from(&constants::duality_factor())),
        entry("critical_exponent", Symbolic::from(&Q::from_integer(masses.critical_exponent.into()))),
        entry("bowen_margulis_per_volume", Symbolic::from(&masses.bowen_margulis)),
        entry("liouville_ratio", Symbolic::from(&masses.liouville_ratio)),
        entry("horoball_skinning_per_volume", Symbolic::from(&masses.horoball_skinning)),
        entry("geodesic_skinning_per_volume_m1", Symbolic::from(&masses.geodesic_skinning)),
        entry("qline_skinning_per_volume_m1", Symbolic::from(&masses.qline_skinning)),
    ];
    for p in d.local_primes() {
        let (sp, ns) = constants::local_factors(p).expect("prime divisor");
        list.push(entry(&format!("sp3_order_p{p}"), Symbolic::from(&Q::from_integer(sp))));
        list.push(entry(&format!("nonsplit_factor_p{p}"), Symbolic::from(&Q::from_integer(ns))));
    }
    let integrals = checks
        .iter()
        .map(|c| ConstantEntry {
            name: c.name.clone(),
            value: Symbolic { coefficient: String::new(), pi_power: 0, display: c.symbolic.clone(), decimal: c.closed },
            residual: Some(c.rel_err),
            check: Some(format!("{:e}", c.numeric)),
        })
        .collect();
    ConstantsReport {
        discriminant: d.d_a,
        unit_count: d.unit_count,
        m_a: d.m_a(),
        class_number: d.class_number,
        local_primes: d.local_primes(),
        constants: list,
        integrals,
        identities: constants::exact_identities(d).into_iter().map(|(n, ok)| (n.to_string(), ok)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use heis_mertens_core::q;

    #[test]
    fn csv_and_json_agree() {
        let o = Order::hurwitz();
        let r = count_report(&o, 1, &[(q(1, 2), 0), (q(1, 1), 24), (q(2, 1), 96)]);
        let csv = count_csv(&r).unwrap();
        assert!(csv.starts_with("s,count,ratio\n1/2,0,0.0\n1,24,"), "{csv}");
        assert_eq!(read_count_csv(&csv).unwrap(), r.rows);
        let json = serde_json::to_string(&r).unwrap();
        let back: CountReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(r.fit.is_none());
    }

    #[test]
    fn constants_table_contents() {
        let d = ArithmeticData::new(2, 24, Some(1)).unwrap();
        let r = constants_report(&d, &[]);
        let cusp = r.constants.iter().find(|e| e.name == "cusp_volume").unwrap();
        assert_eq!(cusp.value.coefficient, "1/23040");
        let m = r.constants.iter().find(|e| e.name == "mertens_constant").unwrap();
        assert_eq!((m.value.coefficient.as_str(), m.value.pi_power), ("54", -8));
        assert!(r.identities.iter().all(|(_, ok)| *ok));
        assert_eq!(r.m_a, 72);
    }
}
