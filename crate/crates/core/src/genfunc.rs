//! Generating functions for pattern totals over 132-avoiders.
//!
//! | series | coefficient of `x^n`                                  |
//! |--------|-------------------------------------------------------|
//! | `C`    | Catalan number `c_n`                                  |
//! | `D`    | inversions (copies of 21) summed over the avoiders     |
//! | `H`    | non-inversions (copies of 12)                         |
//! | `Z`    | `n c_n`, entries (copies of 1)                        |
//! | `A`    | copies of 213                                         |
//! | `B`    | copies of 231                                         |
//!
//! `A` and `B` are each built from their own functional equation, so
//! comparing them is a real check rather than a tautology.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numbers::{binomial, catalan};
use crate::series::{PowerSeries, Primitive, SeriesExpr};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 200;

fn one() -> SeriesExpr {
    SeriesExpr::prim(Primitive::One)
}

fn x() -> SeriesExpr {
    SeriesExpr::x()
}

fn two() -> SeriesExpr {
    SeriesExpr::int(2)
}

fn sqrt() -> SeriesExpr {
    SeriesExpr::prim(Primitive::Sqrt)
}

fn inv_sqrt() -> SeriesExpr {
    SeriesExpr::prim(Primitive::InvSqrt)
}

fn inv_linear() -> SeriesExpr {
    SeriesExpr::prim(Primitive::InvLinear)
}

/// `C(x) = (1 - sqrt(1-4x)) / (2x)`
pub fn catalan_expr() -> SeriesExpr {
    (one() - sqrt()) / (two() * x())
}

/// `Z(x) = 1/sqrt(1-4x) - (1 - sqrt(1-4x)) / (2x)`
pub fn z_expr() -> SeriesExpr {
    inv_sqrt() - catalan_expr()
}

/// `D(x) = x/(1-4x) * (1/sqrt(1-4x) - (1 - sqrt(1-4x)) / (2x))`
pub fn d_expr() -> SeriesExpr {
    x() * inv_linear() * z_expr()
}

/// `H(x) = 1/(2(1-4x)) + 1/(2x) - (1-x)/(2x sqrt(1-4x))`, with the last two
/// terms combined over `2x` so each piece is a power series.
pub fn h_expr() -> SeriesExpr {
    inv_linear() / two() + (one() - (one() - x()) * inv_sqrt()) / (two() * x())
}

/// `A(x) = x D(x) C(x) / (1 - 2x C(x))`
pub fn a_expr() -> SeriesExpr {
    x() * d_expr() * catalan_expr() / (one() - two() * x() * catalan_expr())
}

/// The partial-fraction form
/// `x / (2(1-4x)^2) + (x-1) / (2(1-4x)^(3/2)) + 1 / (2(1-4x))`.
pub fn a_closed_expr() -> SeriesExpr {
    x() * inv_linear().pow(2) / two()
        + (x() - one()) * SeriesExpr::prim(Primitive::InvSqrtCubed) / two()
        + inv_linear() / two()
}

/// `B(x) = (x Z^2 + x H Z) / (1 - 2x C(x))`
pub fn b_expr() -> SeriesExpr {
    (x() * z_expr().pow(2) + x() * h_expr() * z_expr()) / (one() - two() * x() * catalan_expr())
}

/// `B(x)` with the denominator written as `sqrt(1-4x)`.
pub fn b_sqrt_expr() -> SeriesExpr {
    (x() * z_expr().pow(2) + x() * h_expr() * z_expr()) / sqrt()
}

/// The integer series with a name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesName {
    C,
    D,
    H,
    Z,
    A,
    B,
}

impl SeriesName {
    pub const ALL: [SeriesName; 6] =
        [SeriesName::C, SeriesName::D, SeriesName::H, SeriesName::Z, SeriesName::A, SeriesName::B];

    pub fn expr(self) -> SeriesExpr {
        match self {
            SeriesName::C => catalan_expr(),
            SeriesName::D => d_expr(),
            SeriesName::H => h_expr(),
            SeriesName::Z => z_expr(),
            SeriesName::A => a_expr(),
            SeriesName::B => b_expr(),
        }
    }
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeriesName::C => "C",
            SeriesName::D => "D",
            SeriesName::H => "H",
            SeriesName::Z => "Z",
            SeriesName::A => "A",
            SeriesName::B => "B",
        };
        f.write_str(s)
    }
}

impl FromStr for SeriesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesName::ALL
            .into_iter()
            .find(|n| n.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse { what: "series name", msg: format!("{s:?} is not one of C, D, H, Z, A, B") })
    }
}

/// Expand a named series to `order`.
pub fn series(name: SeriesName, order: usize) -> Result<PowerSeries> {
    name.expr().eval(order)
}

/// Integer coefficients `0..=order` of a named series.
pub fn coefficients(name: SeriesName, order: usize) -> Result<Vec<BigInt>> {
    series(name, order)?.to_integers()
}

pub fn d_series(order: usize) -> Result<PowerSeries> {
    series(SeriesName::D, order)
}

pub fn h_series(order: usize) -> Result<PowerSeries> {
    series(SeriesName::H, order)
}

pub fn z_series(order: usize) -> Result<PowerSeries> {
    series(SeriesName::Z, order)
}

pub fn a_series(order: usize) -> Result<PowerSeries> {
    series(SeriesName::A, order)
}

pub fn b_series(order: usize) -> Result<PowerSeries> {
    series(SeriesName::B, order)
}

/// `a_n = (n+4) 2^(2n-3) - (2n+1) C(2n-1, n-1) + (2n-1) C(2n-3, n-2)`
/// for `n >= 3`. Smaller `n` are rejected; there `a_n = 0`.
pub fn a_closed(n: u64) -> Result<BigInt> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "closed form holds for n >= 3 (a_0 = a_1 = a_2 = 0), got {n}"
        )));
    }
    let power = BigInt::from(n + 4) << (2 * n - 3);
    let middle = BigInt::from(binomial(2 * n - 1, n - 1)) * (2 * n + 1);
    let last = BigInt::from(binomial(2 * n - 3, n - 2)) * (2 * n - 1);
    Ok(power - middle + last)
}

fn catalans(order: usize) -> Vec<BigInt> {
    (0..=order as u64).map(|n| BigInt::from(catalan(n))).collect()
}

/// `a_0..=a_order` from the decomposition by the position `i` of the
/// maximum: the copy of 213 lies left of it, right of it, or ends in it.
///
/// `a_n = sum_i a_{i-1} c_{n-i} + c_{i-1} a_{n-i} + d_{i-1} c_{n-i}`
pub fn a_recurrence(order: usize) -> Result<Vec<BigInt>> {
    let c = catalans(order);
    let d = d_series(order)?.to_integers()?;
    let mut a = vec![BigInt::default(); order + 1];
    for n in 1..=order {
        let mut acc = BigInt::default();
        for i in 1..=n {
            acc += &a[i - 1] * &c[n - i];
            acc += &c[i - 1] * &a[n - i];
            acc += &d[i - 1] * &c[n - i];
        }
        a[n] = acc;
    }
    Ok(a)
}

/// `b_0..=b_order`: a copy of 231 lies left of the maximum, right of it,
/// uses it as its 3, or has its 23 left of it as a 12 and its 1 right of it.
///
/// `b_n = sum_i b_{i-1} c_{n-i} + c_{i-1} b_{n-i}
///          + (i-1)(n-i) c_{i-1} c_{n-i} + h_{i-1} (n-i) c_{n-i}`
pub fn b_recurrence(order: usize) -> Result<Vec<BigInt>> {
    let c = catalans(order);
    let h = h_series(order)?.to_integers()?;
    let mut b = vec![BigInt::default(); order + 1];
    for n in 1..=order {
        let mut acc = BigInt::default();
        for i in 1..=n {
            let left = (i - 1) as u64;
            let right = (n - i) as u64;
            acc += &b[i - 1] * &c[n - i];
            acc += &c[i - 1] * &b[n - i];
            acc += &c[i - 1] * &c[n - i] * (left * right);
            acc += &h[i - 1] * &c[n - i] * right;
        }
        b[n] = acc;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avoiders::{p132, total_occurrences};
    use crate::perm::Permutation;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn brute(n: usize, q: &str) -> BigInt {
        let q: Permutation = q.parse().unwrap();
        BigInt::from(total_occurrences(n, &q, &p132()).unwrap())
    }

    #[test]
    fn spot_values() {
        let d = coefficients(SeriesName::D, 5).unwrap();
        assert_eq!(d[2], 1.into());
        assert_eq!(d[3], 8.into());
        assert_eq!(coefficients(SeriesName::H, 5).unwrap()[3], 7.into());
        assert_eq!(coefficients(SeriesName::Z, 5).unwrap()[3], 15.into());
        let a = coefficients(SeriesName::A, 5).unwrap();
        assert_eq!(a, ints(&[0, 0, 0, 1, 11, 81]));
        assert_eq!(coefficients(SeriesName::C, 3).unwrap(), ints(&[1, 1, 2, 5]));
    }

    #[test]
    fn closed_form() {
        assert_eq!(a_closed(3).unwrap(), 1.into());
        assert_eq!(a_closed(4).unwrap(), 11.into());
        assert_eq!(a_closed(5).unwrap(), 81.into());
        assert!(a_closed(2).is_err());
        let a = coefficients(SeriesName::A, 120).unwrap();
        for (n, an) in a.iter().enumerate().skip(3) {
            assert_eq!(a_closed(n as u64).unwrap(), *an, "n={n}");
        }
    }

    #[test]
    fn two_forms_of_a_and_b() {
        let order = 60;
        assert_eq!(a_series(order).unwrap(), a_closed_expr().eval(order).unwrap());
        assert_eq!(b_series(order).unwrap(), b_sqrt_expr().eval(order).unwrap());
        assert_eq!(a_series(order).unwrap(), b_series(order).unwrap());
    }

    #[test]
    fn sqrt_identity() {
        let lhs = (one() - two() * x() * catalan_expr()).eval(100).unwrap();
        assert_eq!(lhs, sqrt().eval(100).unwrap());
    }

    #[test]
    fn pairs_and_entries() {
        let order = 80;
        let d = coefficients(SeriesName::D, order).unwrap();
        let h = coefficients(SeriesName::H, order).unwrap();
        let z = coefficients(SeriesName::Z, order).unwrap();
        for n in 0..=order as u64 {
            let c = BigInt::from(catalan(n));
            assert_eq!(&d[n as usize] + &h[n as usize], &c * BigInt::from(binomial(n, 2)));
            assert_eq!(z[n as usize], c * n);
        }
    }

    #[test]
    fn recurrences_match_series() {
        let order = 30;
        let a = a_recurrence(order).unwrap();
        let b = b_recurrence(order).unwrap();
        assert_eq!(a, coefficients(SeriesName::A, order).unwrap());
        assert_eq!(b, coefficients(SeriesName::B, order).unwrap());
        assert_eq!(b[3], 1.into());
        assert_eq!(&a[..5], &ints(&[0, 0, 0, 1, 11])[..]);
    }

    #[test]
    fn printed_middle_term_fails_at_four() {
        // with c_{n-1} in place of c_{i-1} the middle sum miscounts at n = 4
        let c = catalans(4);
        let d = coefficients(SeriesName::D, 4).unwrap();
        let mut a = vec![BigInt::default(); 5];
        for n in 1..=4 {
            let mut acc = BigInt::default();
            for i in 1..=n {
                acc += &a[i - 1] * &c[n - i] + &c[n - 1] * &a[n - i] + &d[i - 1] * &c[n - i];
            }
            a[n] = acc;
        }
        assert_ne!(a[4], brute(4, "213"));
    }

    #[test]
    fn against_brute_force() {
        let order = 9;
        let d = coefficients(SeriesName::D, order).unwrap();
        let h = coefficients(SeriesName::H, order).unwrap();
        let a = coefficients(SeriesName::A, order).unwrap();
        let b = coefficients(SeriesName::B, order).unwrap();
        for n in 0..=order {
            assert_eq!(d[n], brute(n, "21"));
            assert_eq!(h[n], brute(n, "12"));
            assert_eq!(a[n], brute(n, "213"));
            assert_eq!(b[n], brute(n, "231"));
        }
    }

    #[test]
    fn names() {
        assert_eq!("a".parse::<SeriesName>().unwrap(), SeriesName::A);
        assert_eq!(" Z ".parse::<SeriesName>().unwrap(), SeriesName::Z);
        assert!("Q".parse::<SeriesName>().is_err());
    }
}
