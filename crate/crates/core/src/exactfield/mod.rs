//! Exact arithmetic over arbitrary-precision rationals and over the real
//! quadratic extension `Q(sqrt(D))` with rational `D > 0`.
//!
//! A [`QuadNumber`] is `a + b*sqrt(D)` with rational `a`, `b`. Every
//! closed-form quantity of the model at a grid point lives in one such
//! field, with `D = 1 + delta^2/n^2`, so identities can be decided exactly.
//!
//! `D` is stored per value: solutions for different `(n, delta)` coexist,
//! and combining values from different contexts is a hard error.

pub mod mp;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; re-exported carrier of grid spacings and
/// grid points.
pub type Rational = BigRational;

/// Rational shorthand used throughout the crate.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Renders a rational as `p/q` with the denominator always present.
pub fn rational_str(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// An element `a + b*sqrt(d)` of the quadratic field `Q(sqrt(d))`, `d > 0`.
///
/// If `d` is a perfect rational square the radical part is folded into `a`
/// at construction, so `is_zero` stays a two-field check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadNumber {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl QuadNumber {
    /// Builds `a + b*sqrt(d)`. Fails if `d <= 0`.
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::Domain(format!(
                "quadratic context requires D > 0, got {}",
                rational_str(&d)
            )));
        }
        if let Some(root) = rational_sqrt_exact(&d) {
            // Degenerate context: sqrt(d) is rational, fold it away.
            return Ok(QuadNumber {
                a: a + b * root,
                b: Rational::zero(),
                d,
            });
        }
        Ok(QuadNumber { a, b, d })
    }

    /// The zero of the context `Q(sqrt(d))`.
    pub fn zero(d: Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::zero(), d)
    }

    /// The one of the context `Q(sqrt(d))`.
    pub fn one(d: Rational) -> Result<Self> {
        Self::new(Rational::one(), Rational::zero(), d)
    }

    /// Embeds a rational into the context of `self`.
    pub fn with_rational(&self, x: Rational) -> Self {
        QuadNumber {
            a: x,
            b: Rational::zero(),
            d: self.d.clone(),
        }
    }

    /// `sqrt(d)` itself as a field element.
    pub fn sqrt_d(d: Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn context(&self) -> &Rational {
        &self.d
    }

    /// True iff the represented real number is zero.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True iff the radical part vanished, i.e. the value is rational.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: rational_str(&self.d),
                right: rational_str(&other.d),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        Ok(QuadNumber {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d.clone(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        Ok(QuadNumber {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d: self.d.clone(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        // (a1 + b1 s)(a2 + b2 s) = (a1 a2 + b1 b2 d) + (a1 b2 + b1 a2) s
        Ok(QuadNumber {
            a: &self.a * &other.a + &self.b * &other.b * &self.d,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d.clone(),
        })
    }

    /// Division via the conjugate: 1/(a + b s) = (a - b s)/(a^2 - b^2 d).
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let norm = &other.a * &other.a - &other.b * &other.b * &other.d;
        if norm.is_zero() {
            // For non-square d the norm vanishes only at zero.
            return Err(Error::DivisionByZero);
        }
        let inv = QuadNumber {
            a: &other.a / &norm,
            b: -(&other.b / &norm),
            d: self.d.clone(),
        };
        self.checked_mul(&inv)
    }

    /// The field conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        QuadNumber {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, factor: &Rational) -> Self {
        QuadNumber {
            a: &self.a * factor,
            b: &self.b * factor,
            d: self.d.clone(),
        }
    }

    /// Exact sign of the represented real number: -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        let sa = rational_signum(&self.a);
        let sb = rational_signum(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: a + b*sqrt(d) has the sign of the larger square.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.d;
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Embeds into `f64`, carrying `precision_bits` of internal precision
    /// (at least 53). The radical is bracketed by integer square roots and
    /// the bracket is tightened until both ends round to the same double,
    /// so the result is the correctly rounded value of `a + b*sqrt(d)`.
    pub fn to_f64(&self, precision_bits: u32) -> Result<f64> {
        if precision_bits < 53 {
            return Err(Error::Domain(format!(
                "precision_bits must be at least 53, got {precision_bits}"
            )));
        }
        if self.b.is_zero() {
            return Ok(mp::ratio_to_f64(&self.a));
        }
        let mut bits = precision_bits as u64 + 8;
        // sqrt(d) is irrational here (square d is folded at construction),
        // so the two bracket ends eventually round identically. Cancellation
        // of k bits costs one extra doubling per ~k bits; 24 doublings give
        // more than a billion bits of slack.
        for _ in 0..24 {
            let lo = mp::sqrt_lower(&self.d, bits);
            let hi = &lo + mp::sqrt_gap(&self.d, bits);
            let v1 = mp::ratio_to_f64(&(&self.a + &self.b * lo));
            let v2 = mp::ratio_to_f64(&(&self.a + &self.b * hi));
            if v1 == v2 {
                return Ok(v1);
            }
            bits *= 2;
        }
        unreachable!("f64 embedding did not stabilise; non-square context invariant violated");
    }

    /// Canonical string form `a/b + (c/d)*sqrt(D)` with reduced fractions
    /// and the radicand normalised to an integer with its square part
    /// extracted, e.g. `0/1 + (-1/2)*sqrt(5)`.
    pub fn to_canonical_string(&self) -> String {
        // sqrt(p/q) = sqrt(p*q)/q = (w/q)*sqrt(t) after p*q = w^2 * t.
        let t = self.d.numer() * self.d.denom();
        let (w, radicand) = extract_square_part(&t);
        let coeff = &self.b * Rational::new(w, self.d.denom().clone());
        format!(
            "{} + ({})*sqrt({})",
            rational_str(&self.a),
            rational_str(&coeff),
            radicand
        )
    }
}

/// Applies one of the four field operations; the enum form of the API.
pub fn quad_arith(x: &QuadNumber, y: &QuadNumber, op: QuadOp) -> Result<QuadNumber> {
    match op {
        QuadOp::Add => x.checked_add(y),
        QuadOp::Sub => x.checked_sub(y),
        QuadOp::Mul => x.checked_mul(y),
        QuadOp::Div => x.checked_div(y),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl PartialOrd for QuadNumber {
    /// Exact order within one context; `None` across contexts.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.d != other.d {
            return None;
        }
        let diff = self.checked_sub(other).ok()?;
        Some(match diff.sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &QuadNumber) -> QuadNumber {
                self.$checked(rhs).expect("quadratic context mismatch")
            }
        }
        impl $trait for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: QuadNumber) -> QuadNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }
}

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        -&self
    }
}

fn rational_signum(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `sqrt(x)` as an exact rational, if it is one.
fn rational_sqrt_exact(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let num_root = x.numer().sqrt();
    let den_root = x.denom().sqrt();
    if &(&num_root * &num_root) == x.numer() && &(&den_root * &den_root) == x.denom() {
        Some(Rational::new(num_root, den_root))
    } else {
        None
    }
}

/// Writes `t = w^2 * radicand`. The radicand is squarefree whenever trial
/// division up to `sqrt(t)` stays under the iteration bound, which holds for
/// every D this crate constructs; past the bound a residual square factor
/// may survive, affecting display only, never value.
fn extract_square_part(t: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(t.is_positive());
    let mut rest = t.clone();
    let mut w = BigInt::one();
    let mut radicand = BigInt::one();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(10_000u64);
    while &(&p * &p) <= &rest && p <= bound {
        if (&rest % &p).is_zero() {
            let mut exp = 0u32;
            while (&rest % &p).is_zero() {
                rest /= &p;
                exp += 1;
            }
            w *= p.pow(exp / 2);
            if exp % 2 == 1 {
                radicand *= &p;
            }
        }
        p += 1;
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        w *= root;
    } else {
        radicand *= rest;
    }
    (w, radicand)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(a: (i64, i64), b: (i64, i64), d: (i64, i64)) -> QuadNumber {
        QuadNumber::new(rational(a.0, a.1), rational(b.0, b.1), rational(d.0, d.1)).unwrap()
    }

    #[test]
    fn golden_ratio_product() {
        // (1/2 + (1/2)sqrt5) * (-1/2 + (1/2)sqrt5) = 1
        let x = quad((1, 2), (1, 2), (5, 1));
        let y = quad((-1, 2), (1, 2), (5, 1));
        let p = x.checked_mul(&y).unwrap();
        assert_eq!(p, quad((1, 1), (0, 1), (5, 1)));
    }

    #[test]
    fn division_inverts_multiplication() {
        // 1 / (sqrt5/2 + 1/2) = sqrt5/2 - 1/2, checked by multiplying back.
        let one = QuadNumber::one(rational(5, 1)).unwrap();
        let y = quad((1, 2), (1, 2), (5, 1));
        let q = one.checked_div(&y).unwrap();
        assert_eq!(q, quad((-1, 2), (1, 2), (5, 1)));
        assert_eq!(q.checked_mul(&y).unwrap(), one);
    }

    #[test]
    fn additive_identity() {
        let x = quad((7, 3), (-2, 5), (2, 1));
        let z = QuadNumber::zero(rational(2, 1)).unwrap();
        assert_eq!(x.checked_add(&z).unwrap(), x);
    }

    #[test]
    fn zero_detection() {
        assert!(QuadNumber::zero(rational(7, 1)).unwrap().is_zero());
        // Degenerate square context: 1 - sqrt(1) = 0 after folding.
        let x = quad((1, 1), (-1, 1), (1, 1));
        assert!(x.is_zero());
        assert!(x.is_rational());
        assert!(!quad((1, 3), (0, 1), (5, 1)).is_zero());
    }

    #[test]
    fn square_context_folds_at_construction() {
        // 3 + 2*sqrt(9/4) = 3 + 2*(3/2) = 6
        let x = quad((3, 1), (2, 1), (9, 4));
        assert!(x.is_rational());
        assert_eq!(x.rational_part(), &rational(6, 1));
    }

    #[test]
    fn embedding_matches_reference_roots() {
        // The embedding is correctly rounded; libm sqrt followed by float
        // arithmetic may differ by an ulp, so compare to that resolution.
        let half_sqrt5 = quad((0, 1), (1, 2), (5, 1));
        let v = half_sqrt5.to_f64(53).unwrap();
        assert!((v - 1.1180339887).abs() < 1e-9);
        assert!((v - 5f64.sqrt() / 2.0).abs() <= f64::EPSILON * v);

        let one = quad((1, 1), (0, 1), (7, 1));
        assert_eq!(one.to_f64(53).unwrap(), 1.0);

        let sqrt2_minus_1 = quad((-1, 1), (1, 1), (2, 1));
        let v = sqrt2_minus_1.to_f64(53).unwrap();
        assert!((v - 0.4142135624).abs() < 1e-9);
        assert!((v - (2f64.sqrt() - 1.0)).abs() <= 2.0 * f64::EPSILON * v);
    }

    #[test]
    fn embedding_survives_cancellation() {
        // (sqrt2 - 1)^40: the components are ~10^15 but the value is ~5e-16.
        let r = quad((-1, 1), (1, 1), (2, 1));
        let mut p = QuadNumber::one(rational(2, 1)).unwrap();
        for _ in 0..40 {
            p = p.checked_mul(&r).unwrap();
        }
        let got = p.to_f64(53).unwrap();
        let want = (2f64.sqrt() - 1.0).powi(40);
        assert!(
            (got - want).abs() <= 1e-12 * want.abs(),
            "got {got:e}, want {want:e}"
        );
        assert!(got > 0.0);
    }

    #[test]
    fn arith_dispatch_covers_the_field_operations() {
        let x = quad((1, 2), (1, 2), (5, 1));
        let y = quad((-1, 2), (1, 2), (5, 1));
        let one = QuadNumber::one(rational(5, 1)).unwrap();
        assert_eq!(quad_arith(&x, &y, QuadOp::Mul).unwrap(), one);
        assert_eq!(
            quad_arith(&x, &y, QuadOp::Add).unwrap(),
            quad((0, 1), (1, 1), (5, 1))
        );
        assert_eq!(
            quad_arith(&x, &y, QuadOp::Sub).unwrap(),
            quad((1, 1), (0, 1), (5, 1))
        );
        let q = quad_arith(&x, &y, QuadOp::Div).unwrap();
        assert_eq!(q.checked_mul(&y).unwrap(), x);
        let zero = QuadNumber::zero(rational(5, 1)).unwrap();
        assert!(matches!(
            quad_arith(&x, &zero, QuadOp::Div),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let x = quad((1, 1), (1, 1), (2, 1));
        let y = quad((1, 1), (1, 1), (3, 1));
        assert!(matches!(
            x.checked_add(&y),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let x = quad((1, 1), (1, 1), (2, 1));
        let z = QuadNumber::zero(rational(2, 1)).unwrap();
        assert!(matches!(x.checked_div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn canonical_string_normalises_radicand() {
        // -sqrt(5/4) = (-1/2)*sqrt(5)
        let lambda = quad((0, 1), (-1, 1), (5, 4));
        assert_eq!(lambda.to_canonical_string(), "0/1 + (-1/2)*sqrt(5)");
        let x = quad((-3, 2), (2, 3), (2, 1));
        assert_eq!(x.to_canonical_string(), "-3/2 + (2/3)*sqrt(2)");
    }

    #[test]
    fn exact_sign_and_order() {
        let r = quad((-1, 1), (1, 1), (2, 1)); // sqrt2 - 1 > 0
        assert_eq!(r.sign(), 1);
        assert_eq!((-&r).sign(), -1);
        let one = QuadNumber::one(rational(2, 1)).unwrap();
        assert!(r < one);
        assert!(r > QuadNumber::zero(rational(2, 1)).unwrap());
    }
}
