//! Exact scalars: rationals, or elements of a real number field Q(λ).
//!
//! Every length and offset in the crate is a [`Scalar`]. Comparisons are
//! exact: zero is decided algebraically and interval refinement is only
//! used to find the sign of a nonzero element.

mod factor;
mod field;
pub mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use factor::{factor, is_irreducible};
pub use field::NumberField;
pub use poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("minimal polynomial {poly} has no sign change on ({lo}, {hi})")]
    NoSignChange { poly: String, lo: String, hi: String },
    #[error("degenerate isolating interval: {lo} >= {hi}")]
    DegenerateInterval { lo: String, hi: String },
    #[error("isolating interval contains {roots} roots of {poly}")]
    NotIsolating { poly: String, roots: usize },
    #[error("minimal polynomial must be monic with integer coefficients, got {0}")]
    NotMonicInteger(String),
    #[error("minimal polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("polynomial {0} is reducible over Q")]
    Reducible(String),
    #[error("operands live in different number fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
}

/// Arithmetic operation selector for [`Scalar::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact real number: a rational, or `p(λ)` for a polynomial `p` of
/// degree below that of the field's minimal polynomial.
///
/// Rationals are always stored without a field, so a number-field element
/// with a constant coefficient vector collapses to the rational mode.
/// Rationals combine freely with elements of any field.
#[derive(Clone)]
pub struct Scalar {
    field: Option<Arc<NumberField>>,
    coeffs: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            field: None,
            coeffs: Poly::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar {
            field: None,
            coeffs: Poly::constant(q),
        }
    }

    /// The generator λ of `field`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Scalar::from_poly(field, Poly::x())
    }

    /// `p(λ)`, reduced modulo the minimal polynomial.
    pub fn from_poly(field: &Arc<NumberField>, p: Poly) -> Self {
        let coeffs = field.reduce(&p);
        Scalar::normalized(Some(field.clone()), coeffs)
    }

    fn normalized(field: Option<Arc<NumberField>>, coeffs: Poly) -> Self {
        let field = if coeffs.degree().unwrap_or(0) == 0 { None } else { field };
        Scalar { field, coeffs }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Coefficients of the canonical polynomial in λ (ascending).
    pub fn coefficients(&self) -> &[BigRational] {
        self.coeffs.coeffs()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.field {
            None => Some(self.coeffs.coeff(0)),
            Some(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    fn join(a: &Scalar, b: &Scalar) -> Result<Option<Arc<NumberField>>, ScalarError> {
        match (&a.field, &b.field) {
            (None, f) | (f, None) => Ok(f.clone()),
            (Some(f), Some(g)) => {
                if Arc::ptr_eq(f, g) || **f == **g {
                    Ok(Some(f.clone()))
                } else {
                    Err(ScalarError::FieldMismatch)
                }
            }
        }
    }

    /// True when `a` and `b` may be combined.
    pub fn compatible(a: &Scalar, b: &Scalar) -> bool {
        Scalar::join(a, b).is_ok()
    }

    pub fn arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
        let field = Scalar::join(a, b)?;
        let coeffs = match op {
            ArithOp::Add => a.coeffs.add(&b.coeffs),
            ArithOp::Sub => a.coeffs.sub(&b.coeffs),
            ArithOp::Mul => {
                let prod = a.coeffs.mul(&b.coeffs);
                match &field {
                    Some(f) => f.reduce(&prod),
                    None => prod,
                }
            }
            ArithOp::Div => {
                let inv = match &field {
                    None => {
                        if b.coeffs.is_zero() {
                            return Err(ScalarError::DivisionByZero);
                        }
                        Poly::constant(b.coeffs.coeff(0).recip())
                    }
                    Some(f) => f.inverse(&b.coeffs).ok_or(ScalarError::DivisionByZero)?,
                };
                let prod = a.coeffs.mul(&inv);
                match &field {
                    Some(f) => f.reduce(&prod),
                    None => prod,
                }
            }
        };
        Ok(Scalar::normalized(field, coeffs))
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Scalar::arith(self, other, ArithOp::Add)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Scalar::arith(self, other, ArithOp::Sub)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Scalar::arith(self, other, ArithOp::Mul)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Scalar::arith(self, other, ArithOp::Div)
    }

    /// Exact sign: -1, 0 or 1.
    pub fn sign(&self) -> i8 {
        match &self.field {
            None => match self.coeffs.coeff(0) {
                c if c.is_zero() => 0,
                c if c.is_positive() => 1,
                _ => -1,
            },
            Some(f) => f.sign_of(&self.coeffs),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn min(a: &Scalar, b: &Scalar) -> Scalar {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Scalar, b: &Scalar) -> Scalar {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn half(&self) -> Scalar {
        self * &Scalar::from_ratio(1, 2)
    }

    /// Rational enclosure no wider than `width`.
    pub fn enclose(&self, width: &BigRational) -> (BigRational, BigRational) {
        match &self.field {
            None => {
                let v = self.coeffs.coeff(0);
                (v.clone(), v)
            }
            Some(f) => f.enclose(&self.coeffs, width),
        }
    }

    /// Decimal rendering rounded (half up) to `digits` places after the
    /// point. The rounding is certified by exact comparisons.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
        let scaled = self * &Scalar::from_rational(scale.clone());
        let (lo, hi) = scaled.enclose(&BigRational::new(One::one(), 4.into()));
        let mid = (lo + hi) / BigRational::from_integer(2.into());
        let mut n = mid.round().to_integer();
        let half = BigRational::new(One::one(), 2.into());
        loop {
            let low = Scalar::from_rational(BigRational::from_integer(n.clone()) - &half);
            let high = Scalar::from_rational(BigRational::from_integer(n.clone()) + &half);
            if scaled < low {
                n -= 1;
            } else if scaled >= high {
                n += 1;
            } else {
                break;
            }
        }
        let neg = n.is_negative();
        let digits_str = n.abs().to_string();
        let padded = if digits_str.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - digits_str.len()), digits_str)
        } else {
            digits_str
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - digits);
        format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_part)
    }

    /// Exact textual form: a rational, or a polynomial in `var`.
    pub fn display_with(&self, var: &str) -> String {
        match &self.field {
            None => poly::fmt_rational(&self.coeffs.coeff(0)),
            Some(_) => self.coeffs.display_with(var),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("λ"))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by real value.
///
/// # Panics
///
/// When the operands belong to different number fields. Band systems use
/// one field throughout, which the parser enforces.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.field.is_none() && other.field.is_none() {
            return self.coeffs.coeff(0).cmp(&other.coeffs.coeff(0));
        }
        let diff = self.checked_sub(other).expect("comparison across number fields");
        diff.sign().cmp(&0)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match Scalar::arith(self, rhs, $op) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {e}", stringify!($method)),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, ArithOp::Add);
forward_binop!(Sub, sub, ArithOp::Sub);
forward_binop!(Mul, mul, ArithOp::Mul);
forward_binop!(Div, div, ArithOp::Div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.neg(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn tribonacci() -> Arc<NumberField> {
        NumberField::define(Poly::from_ints([-1, -1, -1, 1]), q(1, 1), q(2, 1)).unwrap()
    }

    #[test]
    fn field_define_errors() {
        let e = NumberField::define(Poly::from_ints([-2, 0, 1]), q(0, 1), q(1, 1)).unwrap_err();
        assert!(matches!(e, ScalarError::NoSignChange { .. }));
        let e = NumberField::define(Poly::from_ints([-2, 0, 1]), q(2, 1), q(1, 1)).unwrap_err();
        assert!(matches!(e, ScalarError::DegenerateInterval { .. }));
        let e = NumberField::define(Poly::from_ints([-2, 0, 2]), q(0, 1), q(2, 1)).unwrap_err();
        assert!(matches!(e, ScalarError::NotMonicInteger(_)));
        // x^3 - x has roots -1, 0, 1: three of them inside (-2, 2)
        let e = NumberField::define(Poly::from_ints([0, -1, 0, 1]), q(-2, 1), q(2, 1)).unwrap_err();
        assert!(matches!(e, ScalarError::NotIsolating { roots: 3, .. }));
        let e = NumberField::define_checked(
            Poly::from_ints([-2, 0, 1]).mul(&Poly::from_ints([1, 0, 1])),
            q(1, 1),
            q(2, 1),
        )
        .unwrap_err();
        assert!(matches!(e, ScalarError::Reducible(_)));
    }

    #[test]
    fn linear_field_collapses_to_rationals() {
        let f = NumberField::define(Poly::from_ints([-2, 1]), q(1, 1), q(3, 1)).unwrap();
        let l = Scalar::generator(&f);
        assert_eq!(l.as_rational(), Some(q(2, 1)));
        assert!(l.field().is_none());
    }

    #[test]
    fn tribonacci_reduction_and_inverse() {
        let f = tribonacci();
        let l = Scalar::generator(&f);
        let l2 = &l * &l;
        let l3 = &l2 * &l;
        assert_eq!(l3.coefficients(), &[q(1, 1), q(1, 1), q(1, 1)]);
        let inv = Scalar::arith(&Scalar::one(), &l, ArithOp::Div).unwrap();
        assert_eq!(inv.coefficients(), &[q(-1, 1), q(-1, 1), q(1, 1)]);
        assert_eq!(&inv * &l, Scalar::one());
    }

    #[test]
    fn signs() {
        let f = tribonacci();
        let l = Scalar::generator(&f);
        assert_eq!((&l - &Scalar::one()).sign(), 1);
        let rel = &(&(&(&l * &l) * &l) - &(&l * &l)) - &(&l + &Scalar::one());
        assert_eq!(rel.sign(), 0);
        assert_eq!(Scalar::from_ratio(-3, 7).sign(), -1);
        // tiny positive element: λ - 1.839286755 > 0
        let approx = Scalar::from_ratio(1_839_286_755, 1_000_000_000);
        assert_eq!((&l - &approx).sign(), 1);
        let approx = Scalar::from_ratio(1_839_286_756, 1_000_000_000);
        assert_eq!((&l - &approx).sign(), -1);
    }

    #[test]
    fn decimals() {
        let l = Scalar::generator(&tribonacci());
        assert_eq!(l.to_decimal(6), "1.839287");
        assert_eq!(Scalar::from_ratio(1, 3).to_decimal(4), "0.3333");
        assert_eq!(Scalar::zero().to_decimal(2), "0.00");
        assert_eq!(Scalar::from_ratio(-2, 3).to_decimal(2), "-0.67");
        assert_eq!(Scalar::from_int(12).to_decimal(1), "12.0");
    }

    #[test]
    fn mixing_fields_fails() {
        let a = Scalar::generator(&tribonacci());
        let g = NumberField::define(Poly::from_ints([-1, -1, 1]), q(1, 1), q(2, 1)).unwrap();
        let b = Scalar::generator(&g);
        assert_eq!(Scalar::arith(&a, &b, ArithOp::Add).unwrap_err(), ScalarError::FieldMismatch);
        assert_eq!(
            Scalar::arith(&a, &Scalar::zero(), ArithOp::Div).unwrap_err(),
            ScalarError::DivisionByZero
        );
        // rationals embed in every field
        assert!(Scalar::arith(&a, &Scalar::from_ratio(1, 2), ArithOp::Add).is_ok());
    }

    #[test]
    fn reducible_modulus_still_signs_correctly() {
        // (x^2 - 2)(x - 3) trusted as a "minimal polynomial", root sqrt 2
        let m = Poly::from_ints([-2, 0, 1]).mul(&Poly::from_ints([-3, 1]));
        let f = NumberField::define(m, q(1, 1), q(2, 1)).unwrap();
        let l = Scalar::generator(&f);
        let sq = &l * &l;
        assert_eq!((&sq - &Scalar::from_int(2)).sign(), 0);
        assert_eq!(sq, Scalar::from_int(2));
        let inv = &Scalar::one() / &l;
        assert_eq!(&inv * &l, Scalar::one());
        // λ - 3 vanishes on the other factor only
        let d = &l - &Scalar::from_int(3);
        assert_eq!(d.sign(), -1);
        let inv = &Scalar::one() / &d;
        assert_eq!(&inv * &d, Scalar::one());
    }
}
