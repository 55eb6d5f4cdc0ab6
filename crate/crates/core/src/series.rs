//! Truncated formal power series with exact rational coefficients, and a
//! small expression language over powers of `1 - 4x`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numbers::{binomial, catalan};

/// `sum_{n <= order} a_n x^n`, known exactly up to `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        PowerSeries { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = BigInt>>(coeffs: I) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        PowerSeries { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiply by `x^k`; the order is unchanged.
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![BigRational::zero(); order + 1];
        if k <= order {
            coeffs[k..].clone_from_slice(&self.coeffs[..=order - k]);
        }
        PowerSeries { coeffs }
    }

    /// Divide by `x^k`; the first `k` coefficients must vanish and the
    /// order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::Series(format!("cannot divide by x^{k} at order {}", self.order())));
        }
        if let Some(v) = self.valuation() {
            if v < k {
                return Err(Error::Series(format!("coefficient of x^{v} is nonzero, cannot divide by x^{k}")));
            }
        }
        Ok(PowerSeries { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Quotient by a series with nonzero constant term.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let b0 = other.coeffs[0].clone();
        if b0.is_zero() {
            return Err(Error::Series("divisor has zero constant term".into()));
        }
        let order = self.order().min(other.order());
        let inv_b0 = b0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for i in 1..=n {
                if !other.coeffs[i].is_zero() {
                    acc -= &other.coeffs[i] * &out[n - i];
                }
            }
            out.push(acc * &inv_b0);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Integer coefficients; fails if any coefficient has a denominator.
    pub fn to_integers(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Series(format!("coefficient {n} is {c}, not an integer")))
                }
            })
            .collect()
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect() }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect() }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs }
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            if !first {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            match n {
                0 => write!(f, "{sign}{mag}")?,
                1 => write!(f, "{sign}{mag}x")?,
                _ => write!(f, "{sign}{mag}x^{n}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Closed-form building blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitive {
    One,
    X,
    /// `(1 - 4x)^(-1)`, coefficients `4^n`.
    InvLinear,
    /// `(1 - 4x)^(1/2)`: `1`, then `-2 c_{n-1}`.
    Sqrt,
    /// `(1 - 4x)^(-1/2)`: central binomials `C(2n, n)`.
    InvSqrt,
    /// `(1 - 4x)^(-3/2)`: `(2n + 1) C(2n, n)`.
    InvSqrtCubed,
}

impl Primitive {
    pub fn coefficient(self, n: usize) -> BigInt {
        let n64 = n as u64;
        match self {
            Primitive::One => BigInt::from((n == 0) as u8),
            Primitive::X => BigInt::from((n == 1) as u8),
            Primitive::InvLinear => BigInt::from(4u8).pow(n as u32),
            Primitive::Sqrt => {
                if n == 0 {
                    BigInt::one()
                } else {
                    -BigInt::from(catalan(n64 - 1)) * 2
                }
            }
            Primitive::InvSqrt => BigInt::from(binomial(2 * n64, n64)),
            Primitive::InvSqrtCubed => BigInt::from(binomial(2 * n64, n64)) * (2 * n64 + 1),
        }
    }

    pub fn series(self, order: usize) -> PowerSeries {
        PowerSeries::from_integers((0..=order).map(|n| self.coefficient(n)))
    }
}

/// Expression tree evaluated to a truncated series on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesExpr {
    Prim(Primitive),
    Const(BigRational),
    Sum(Box<SeriesExpr>, Box<SeriesExpr>),
    Difference(Box<SeriesExpr>, Box<SeriesExpr>),
    Product(Box<SeriesExpr>, Box<SeriesExpr>),
    /// Divisor may vanish at 0 if the numerator vanishes to the same order.
    Quotient(Box<SeriesExpr>, Box<SeriesExpr>),
    Neg(Box<SeriesExpr>),
}

impl SeriesExpr {
    pub fn prim(p: Primitive) -> Self {
        SeriesExpr::Prim(p)
    }

    pub fn int(c: i64) -> Self {
        SeriesExpr::Const(BigRational::from_integer(c.into()))
    }

    pub fn x() -> Self {
        SeriesExpr::Prim(Primitive::X)
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(e >= 1);
        (1..e).fold(self.clone(), |acc, _| acc * self.clone())
    }

    pub fn eval(&self, order: usize) -> Result<PowerSeries> {
        Ok(match self {
            SeriesExpr::Prim(p) => p.series(order),
            SeriesExpr::Const(c) => PowerSeries::constant(c.clone(), order),
            SeriesExpr::Sum(a, b) => &a.eval(order)? + &b.eval(order)?,
            SeriesExpr::Difference(a, b) => &a.eval(order)? - &b.eval(order)?,
            SeriesExpr::Product(a, b) => &a.eval(order)? * &b.eval(order)?,
            SeriesExpr::Neg(a) => -&a.eval(order)?,
            SeriesExpr::Quotient(a, b) => {
                let probe = b.eval(order)?;
                let v = probe
                    .valuation()
                    .ok_or_else(|| Error::Series(format!("divisor vanishes to order {order}")))?;
                if v == 0 {
                    a.eval(order)?.checked_div(&probe)?
                } else {
                    let num = a.eval(order + v)?.shift_down(v)?;
                    let den = b.eval(order + v)?.shift_down(v)?;
                    num.checked_div(&den)?
                }
            }
        })
    }
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for SeriesExpr {
            type Output = SeriesExpr;

            fn $method(self, rhs: SeriesExpr) -> SeriesExpr {
                SeriesExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Sum);
expr_binop!(Sub, sub, Difference);
expr_binop!(Mul, mul, Product);
expr_binop!(Div, div, Quotient);

impl Neg for SeriesExpr {
    type Output = SeriesExpr;

    fn neg(self) -> SeriesExpr {
        SeriesExpr::Neg(Box::new(self))
    }
}

/// Every coefficient has denominator 1.
pub fn is_integral(s: &PowerSeries) -> bool {
    s.coeffs().iter().all(|c| c.denom().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(Primitive::InvSqrt.series(3).to_integers().unwrap(), ints(&[1, 2, 6, 20]));
        assert_eq!(Primitive::InvSqrtCubed.series(3).to_integers().unwrap(), ints(&[1, 6, 30, 140]));
        assert_eq!(Primitive::Sqrt.series(4).to_integers().unwrap(), ints(&[1, -2, -2, -4, -10]));
        assert_eq!(Primitive::InvLinear.series(3).to_integers().unwrap(), ints(&[1, 4, 16, 64]));
    }

    #[test]
    fn primitive_identities() {
        // independent of the closed forms: relations between the radicals
        let n = 60;
        let one = Primitive::One.series(n);
        let lin = PowerSeries::from_integers((0..=n).map(|i| BigInt::from(match i { 0 => 1, 1 => -4, _ => 0 })));
        let s = Primitive::Sqrt.series(n);
        let is = Primitive::InvSqrt.series(n);
        let is3 = Primitive::InvSqrtCubed.series(n);
        let il = Primitive::InvLinear.series(n);
        assert_eq!(&s * &s, lin);
        assert_eq!(&s * &is, one);
        assert_eq!(&is * &is, il);
        assert_eq!(&(&il * &is), &is3);
        assert_eq!(&il * &lin, one);
    }

    #[test]
    fn catalan_via_quotient() {
        use Primitive::*;
        let c = (SeriesExpr::prim(One) - SeriesExpr::prim(Sqrt)) / (SeriesExpr::int(2) * SeriesExpr::x());
        let s = c.eval(3).unwrap();
        assert_eq!(s.order(), 3);
        assert_eq!(s.to_integers().unwrap(), ints(&[1, 1, 2, 5]));
    }

    #[test]
    fn division_round_trip() {
        let a = PowerSeries::from_integers(ints(&[3, 1, 4, 1, 5, 9, 2, 6]));
        let b = PowerSeries::from_integers(ints(&[2, 7, 1, 8, 2, 8, 1, 8]));
        let q = a.checked_div(&b).unwrap();
        assert!(!is_integral(&q));
        assert_eq!(&q * &b, a);
        assert!(a.checked_div(&PowerSeries::zero(7)).is_err());
    }

    #[test]
    fn invalid_division_by_x() {
        let bad = SeriesExpr::prim(Primitive::One) / SeriesExpr::x();
        assert!(bad.eval(5).is_err());
        let zero = SeriesExpr::int(1) / SeriesExpr::int(0);
        assert!(zero.eval(5).is_err());
    }

    #[test]
    fn truncation_propagates_min() {
        let a = Primitive::InvSqrt.series(5);
        let b = Primitive::InvSqrt.series(3);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!(a.shift_up(2).order(), 5);
        assert_eq!(a.shift_up(1).shift_down(1).unwrap(), a.truncate(4));
        assert!(a.shift_down(1).is_err());
    }

    #[test]
    fn display() {
        let s = PowerSeries::from_integers(ints(&[1, -2, 0, 3]));
        assert_eq!(s.to_string(), "1 -2x +3x^3 + O(x^4)");
    }
}
