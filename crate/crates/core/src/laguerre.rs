//! Exact Laguerre and associated-Laguerre coefficients, the continuum
//! reference polynomial of the hydrogen l = 0 states, and the discretised
//! associated Laguerre polynomials induced by the closed-form solutions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::closed_form;
use crate::error::Result;
use crate::exactfield::{QuadNumber, Rational};

/// Dense polynomial over exact rationals, index = power of the variable.
/// Trailing coefficient nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Termwise derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Composition with a rational dilation: `p(scale * z)`.
    pub fn dilate(&self, scale: &Rational) -> Self {
        let mut pow = Rational::one();
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| {
                    let out = c * &pow;
                    pow *= scale;
                    out
                })
                .collect(),
        )
    }

    /// Rescales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lead) => Self::from_coeffs(self.coeffs.iter().map(|c| c / lead).collect()),
        }
    }
}

/// Coefficients of the Laguerre polynomial
/// `L_n(x) = sum_{k=0}^n (-1)^k/k! C(n,k) x^k`.
pub fn laguerre_coeffs(n: u32) -> RationalPoly {
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    // (-1)^k / k! * C(n, k), built incrementally.
    let mut c = Rational::one();
    coeffs.push(c.clone());
    for k in 0..n {
        // c_{k+1} = c_k * -(n - k) / (k + 1)^2
        c *= Rational::new(-BigInt::from(n - k), BigInt::from((k + 1) * (k + 1)));
        coeffs.push(c.clone());
    }
    RationalPoly::from_coeffs(coeffs)
}

/// The degree-`n` associated polynomial `d/dx L_{n+1}(x)`, the derivative
/// convention for `L^1`.
pub fn assoc_laguerre1_coeffs(n: u32) -> RationalPoly {
    laguerre_coeffs(n + 1).derivative()
}

/// The monic degree-`n` polynomial factor of the continuum hydrogen l = 0
/// state: `u_n = P_n(z) exp(-z/n)` solves `-u''/2 - u/z = -u/(2n^2)`.
///
/// Substituting the ansatz and matching powers of `z` gives the two-term
/// downward recurrence `c_j = -n j (j+1) / (2 (n-j)) * c_{j+1}` from the
/// monic top `c_n = 1`; the constant term is forced to zero.
pub fn continuum_reference_poly(n: u32) -> RationalPoly {
    assert!(n >= 1, "continuum reference polynomial needs n >= 1");
    let n_us = n as usize;
    let mut coeffs = vec![Rational::zero(); n_us + 1];
    coeffs[n_us] = Rational::one();
    for j in (1..n_us).rev() {
        let factor = Rational::new(
            -BigInt::from(n) * BigInt::from(j) * BigInt::from(j + 1),
            BigInt::from(2) * BigInt::from(n_us - j),
        );
        coeffs[j] = &coeffs[j + 1] * factor;
    }
    RationalPoly::from_coeffs(coeffs)
}

/// The discretised associated Laguerre polynomial: the monic closed-form
/// polynomial divided by `z`, i.e. coefficient `q_{k-1} = c_k`. As
/// `delta -> 0` it converges (second order) to
/// `continuum_reference_poly(n) / z`.
pub fn discretised_assoc_laguerre(n: u32, delta: &Rational) -> Result<Vec<QuadNumber>> {
    let coeffs = closed_form::coefficients(n, delta)?;
    // c_0 = 0 by construction, so p(z)/z just reindexes.
    Ok(coeffs)
}

/// Float view of [`continuum_reference_poly`] with the constant term
/// dropped, matching the discretised coefficient layout.
pub fn continuum_reference_over_z_f64(n: u32) -> Vec<f64> {
    let p = continuum_reference_poly(n);
    (1..=n as usize)
        .map(|k| crate::exactfield::mp::ratio_to_f64(&p.coeff(k)))
        .collect()
}
