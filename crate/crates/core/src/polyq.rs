//! Dense polynomials with [`QuadNumber`] coefficients sharing one quadratic
//! context; the carrier of the exact residual identities.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{QuadNumber, Rational};

/// A polynomial `sum c_i z^i` over `Q(sqrt(D))`. The zero polynomial is the
/// empty coefficient vector; otherwise the trailing coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyQ {
    coeffs: Vec<QuadNumber>,
}

impl PolyQ {
    /// The zero polynomial (context-free).
    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    /// Builds a polynomial from coefficients (index = power). Fails if the
    /// coefficients mix quadratic contexts.
    pub fn from_coeffs(coeffs: Vec<QuadNumber>) -> Result<Self> {
        if let Some((first, rest)) = coeffs.split_first() {
            for c in rest {
                if c.context() != first.context() {
                    return Err(Error::ContextMismatch {
                        left: crate::exactfield::rational_str(first.context()),
                        right: crate::exactfield::rational_str(c.context()),
                    });
                }
            }
        }
        let mut p = PolyQ { coeffs };
        p.normalise();
        Ok(p)
    }

    fn normalise(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^i`; `None` past the degree.
    pub fn coeff(&self, i: usize) -> Option<&QuadNumber> {
        self.coeffs.get(i)
    }

    pub fn coeffs(&self) -> &[QuadNumber] {
        &self.coeffs
    }

    fn zero_like(template: &QuadNumber) -> QuadNumber {
        template.with_rational(Rational::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let template = &self.coeffs[0];
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| Self::zero_like(template));
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| Self::zero_like(template));
            out.push(&a + &b);
        }
        let mut p = PolyQ { coeffs: out };
        p.normalise();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PolyQ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &QuadNumber) -> Self {
        let mut p = PolyQ {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        };
        p.normalise();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let template = &self.coeffs[0];
        let mut out = vec![Self::zero_like(template); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        let mut p = PolyQ { coeffs: out };
        p.normalise();
        p
    }

    /// Multiplies by `z`.
    pub fn mul_by_z(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Self::zero_like(&self.coeffs[0]));
        out.extend(self.coeffs.iter().cloned());
        PolyQ { coeffs: out }
    }

    /// Exact division by `z`; requires a vanishing constant term.
    pub fn div_by_z(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "polynomial has a nonzero constant term, not divisible by z".into(),
            ));
        }
        Ok(PolyQ {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Taylor shift: the polynomial `q(z) = p(z + t)` for rational `t`.
    pub fn taylor_shift(&self, t: &Rational) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len();
        let template = &self.coeffs[0];
        // q_j = sum_{k>=j} C(k, j) t^(k-j) c_k
        let mut out = vec![Self::zero_like(template); n];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut acc = Self::zero_like(template);
            let mut t_pow = Rational::one();
            for k in j..n {
                let factor = binomial(k, j) * &t_pow;
                acc = &acc + &self.coeffs[k].scale(&factor);
                t_pow *= t;
            }
            *slot = acc;
        }
        let mut p = PolyQ { coeffs: out };
        p.normalise();
        p
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rational::from_integer(BigInt::from(i))))
            .collect();
        let mut p = PolyQ { coeffs: out };
        p.normalise();
        p
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, z: &Rational) -> Option<QuadNumber> {
        let last = self.coeffs.last()?;
        let mut acc = last.clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(z) + c;
        }
        Some(acc)
    }
}

/// Binomial coefficient as an exact rational.
fn binomial(n: usize, k: usize) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rational::new(num, den)
}
