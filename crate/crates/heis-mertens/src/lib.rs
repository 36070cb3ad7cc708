//! Driver for the `heis-mertens-core` kernels: order files, threaded and
//! resumable counting, report formats and the command line.

pub mod cli;
pub mod engine;
pub mod order_spec;
pub mod report;
pub mod selftest;

use heis_mertens_core::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Parse `"p/q"`, an integer, or a finite decimal such as `"0.5"` exactly.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Q::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let mut den = BigInt::one();
    for _ in 0..frac.len() {
        den *= 10;
    }
    let v = Q::new(digits, den);
    Some(if neg { -v } else { v })
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational_string(x: &Q) -> String {
    heis_mertens_core::constants::rat_string(x)
}
