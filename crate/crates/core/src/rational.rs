//! Exact rationals used for every measure, weight and norm.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => s.parse::<i128>().map(int).map_err(|_| bad()),
    }
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn sum<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub fn to_f64(q: &Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Scales a family of non-negative rationals onto a common integer grid.
///
/// Returns `(integers, denominator)` with `values[k] = integers[k] / denominator`.
pub fn common_denominator(values: &[Rational]) -> Result<(Vec<u64>, u64)> {
    let mut lcm: i128 = 1;
    for v in values {
        lcm = num_integer::lcm(lcm, *v.denom());
        if lcm > u64::MAX as i128 / 1024 {
            return Err(Error::capacity("weight denominator", lcm, u64::MAX / 1024));
        }
    }
    let ints = values
        .iter()
        .map(|v| {
            let n = v.numer() * (lcm / v.denom());
            u64::try_from(n).map_err(|_| Error::input("weights must be non-negative"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ints, lcm as u64))
}
