//! Closed-form eigenfunctions of the finite-difference equation: eigenvalue,
//! exponential decay data and the exact polynomial coefficients.
//!
//! For quantum number `n` and grid spacing `delta` the solution is
//! `u(z) = p(z) exp(-beta z)` with `beta = arsinh(delta/n)/delta` and
//! `p(z) = sum_{k=1}^n c_k z^k` monic. All exact data live in
//! `Q(s)` with `s = sqrt(1 + delta^2/n^2)`: the eigenvalue is `-s`, the
//! per-grid-step decay factor is `r = s - delta/n`, and the coefficients
//! follow a triangular downward recurrence obtained by substituting the
//! ansatz into the difference equation and matching powers of `z`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{mp, QuadNumber, Rational};
use crate::polyq::PolyQ;

/// The explicit solution for one `(n, delta)` pair. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct ClosedFormSolution {
    n: u32,
    delta: Rational,
    /// Eigenvalue `lambda = -s`.
    lambda: QuadNumber,
    /// `s = sqrt(1 + delta^2/n^2)`, the cosh of the exponent step.
    s: QuadNumber,
    /// `delta/n`, the sinh of the exponent step.
    sinh_step: Rational,
    /// Per-grid-step decay factor `r = s - delta/n`, in `(0, 1)`.
    r: QuadNumber,
    /// Monic polynomial coefficients `c_1..c_n` (`c_n = 1`, implied `c_0 = 0`).
    coeffs: Vec<QuadNumber>,
    /// Set when `delta >= n`: the closed form still holds, but the
    /// series-in-delta reading of the expansion breaks down there.
    series_warning: bool,
}

fn validate(n: u32, delta: &Rational) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("quantum number n must be at least 1".into()));
    }
    if !delta.is_positive() {
        return Err(Error::Domain(format!(
            "grid spacing delta must be positive, got {}",
            crate::exactfield::rational_str(delta)
        )));
    }
    Ok(())
}

/// `D = 1 + delta^2/n^2`, the quadratic context constant.
pub fn context_constant(n: u32, delta: &Rational) -> Result<Rational> {
    validate(n, delta)?;
    let step = delta / Rational::from_integer(BigInt::from(n));
    Ok(Rational::one() + &step * &step)
}

/// The exact eigenvalue `lambda_n = -sqrt(1 + delta^2/n^2)`.
pub fn eigenvalue(n: u32, delta: &Rational) -> Result<QuadNumber> {
    let d = context_constant(n, delta)?;
    Ok(-QuadNumber::sqrt_d(d)?)
}

/// The decay exponent `beta = arsinh(delta/n)/delta`, evaluated with
/// `precision_bits` of internal precision (at least 53) and rounded to
/// `f64`. Satisfies `exp(-beta*delta) = r` up to the working precision.
pub fn decay_rate(n: u32, delta: &Rational, precision_bits: u32) -> Result<f64> {
    validate(n, delta)?;
    if precision_bits < 53 {
        return Err(Error::Domain(format!(
            "precision_bits must be at least 53, got {precision_bits}"
        )));
    }
    let bits = precision_bits as u64 + 16;
    let w = delta / Rational::from_integer(BigInt::from(n));
    // arsinh(w) = ln(w + sqrt(1 + w^2)); the argument exceeds 1, so the
    // lower-bound square root costs only its own bracket width in accuracy.
    let arg = &w + mp::sqrt_lower(&(Rational::one() + &w * &w), bits + 8);
    let beta = mp::ln_rational(&arg, bits) / delta;
    Ok(mp::ratio_to_f64(&beta))
}

/// Monic coefficients `c_1..c_n` of the polynomial part, from the downward
/// recurrence
///
/// ```text
/// c_k = n / (delta^2 (n-k)) * sum_{m=2}^{n-k+1} a_m delta^m/m! * (k+m-1)!/(k-1)! * c_{k+m-1}
/// ```
///
/// with `a_m = -s` for even `m` and `a_m = delta/n` for odd `m`. The `k = n`
/// equation is the eigenvalue identity and the `k = 0` equation forces the
/// vanishing constant term.
pub fn coefficients(n: u32, delta: &Rational) -> Result<Vec<QuadNumber>> {
    let d = context_constant(n, delta)?;
    let s = QuadNumber::sqrt_d(d)?;
    let step = delta / Rational::from_integer(BigInt::from(n));
    let n_us = n as usize;

    // work[k] = c_k for k = 1..=n; index 0 unused.
    let mut work = vec![s.with_rational(Rational::zero()); n_us + 1];
    work[n_us] = s.with_rational(Rational::one());

    // delta^m / m! for m = 0..=n+1, built incrementally.
    let mut delta_pow_over_fact = Vec::with_capacity(n_us + 2);
    delta_pow_over_fact.push(Rational::one());
    for m in 1..=(n_us + 1) {
        let prev = delta_pow_over_fact.last().unwrap().clone();
        delta_pow_over_fact.push(prev * delta / Rational::from_integer(BigInt::from(m)));
    }

    for k in (1..n_us).rev() {
        let mut acc = s.with_rational(Rational::zero());
        for m in 2..=(n_us - k + 1) {
            // (k+m-1)!/(k-1)! as a rising product.
            let mut rising = BigInt::one();
            for i in k..(k + m) {
                rising *= BigInt::from(i);
            }
            let scalar = &delta_pow_over_fact[m] * Rational::from_integer(rising);
            let a_m = if m % 2 == 0 {
                -s.clone()
            } else {
                s.with_rational(step.clone())
            };
            acc = &acc + &a_m.scale(&scalar).checked_mul(&work[k + m - 1])?;
        }
        let front = Rational::from_integer(BigInt::from(n))
            / (delta * delta * Rational::from_integer(BigInt::from(n_us - k)));
        work[k] = acc.scale(&front);
    }
    Ok(work.split_off(1))
}

impl ClosedFormSolution {
    /// Builds the full solution record for `(n, delta)`.
    pub fn new(n: u32, delta: Rational) -> Result<Self> {
        let d = context_constant(n, &delta)?;
        let s = QuadNumber::sqrt_d(d)?;
        let sinh_step = &delta / Rational::from_integer(BigInt::from(n));
        let r = s.checked_sub(&s.with_rational(sinh_step.clone()))?;
        let coeffs = coefficients(n, &delta)?;
        let series_warning = sinh_step >= Rational::one();
        debug_assert!({
            // r (s + delta/n) = 1 exactly.
            let e_plus = s.checked_add(&s.with_rational(sinh_step.clone())).unwrap();
            r.checked_mul(&e_plus).unwrap() == s.with_rational(Rational::one())
        });
        Ok(ClosedFormSolution {
            n,
            delta,
            lambda: -s.clone(),
            s,
            sinh_step,
            r,
            coeffs,
            series_warning,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn lambda(&self) -> &QuadNumber {
        &self.lambda
    }

    pub fn s(&self) -> &QuadNumber {
        &self.s
    }

    pub fn sinh_step(&self) -> &Rational {
        &self.sinh_step
    }

    pub fn decay_factor(&self) -> &QuadNumber {
        &self.r
    }

    /// Monic coefficients `c_1..c_n`.
    pub fn coeffs(&self) -> &[QuadNumber] {
        &self.coeffs
    }

    /// True when `delta >= n`; see the field documentation.
    pub fn series_warning(&self) -> bool {
        self.series_warning
    }

    /// The polynomial part `p(z) = sum c_k z^k` including the zero constant
    /// term.
    pub fn polynomial(&self) -> PolyQ {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.s.with_rational(Rational::zero()));
        coeffs.extend(self.coeffs.iter().cloned());
        PolyQ::from_coeffs(coeffs).expect("solution coefficients share one context")
    }

    /// Normalisation factors `alpha_k = c_k / C_k` against the monic
    /// continuum reference polynomial; `alpha_n = 1` by construction and
    /// every `alpha_k -> 1` as `delta -> 0`.
    pub fn alpha_factors(&self) -> Vec<QuadNumber> {
        let reference = crate::laguerre::continuum_reference_poly(self.n);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let denom = reference.coeff(i + 1);
                // Continuum coefficients alternate in sign and never vanish.
                assert!(
                    !denom.is_zero(),
                    "continuum reference coefficient C_{} vanished",
                    i + 1
                );
                c.scale(&denom.recip())
            })
            .collect()
    }

    /// Exact grid samples `u_j = p(delta j) r^j` for `j = 1..=j_max`
    /// (`u_0 = 0` is implicit and not emitted).
    pub fn grid_samples(&self, j_max: u32) -> Vec<QuadNumber> {
        let p = self.polynomial();
        let mut out = Vec::with_capacity(j_max as usize);
        let mut r_pow = self.s.with_rational(Rational::one());
        for j in 1..=j_max {
            r_pow = r_pow.checked_mul(&self.r).expect("same context");
            let z = &self.delta * Rational::from_integer(BigInt::from(j));
            let val = p.eval_rational(&z).expect("nonzero polynomial");
            out.push(val.checked_mul(&r_pow).expect("same context"));
        }
        out
    }

    /// Float view of the grid samples, suitable for eigenvector comparisons.
    pub fn grid_samples_f64(&self, j_max: u32) -> Vec<f64> {
        let coeffs = self.coeffs_f64();
        let r = self.r.to_f64(64).expect("embedding");
        let delta = mp::ratio_to_f64(&self.delta);
        let mut out = Vec::with_capacity(j_max as usize);
        let mut r_pow = 1.0;
        for j in 1..=j_max {
            r_pow *= r;
            out.push(horner_with_zero_constant(&coeffs, delta * j as f64) * r_pow);
        }
        out
    }

    /// Float coefficients `c_1..c_n`.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64(64).expect("embedding"))
            .collect()
    }

    /// `beta = arsinh(delta/n)/delta` as a double.
    pub fn beta_f64(&self) -> f64 {
        decay_rate(self.n, &self.delta, 64).expect("validated at construction")
    }

    /// Floating evaluation of the entire function `p(z) exp(-beta z)`;
    /// negative `z` is legal.
    pub fn evaluate(&self, z: f64) -> f64 {
        let coeffs = self.coeffs_f64();
        horner_with_zero_constant(&coeffs, z) * (-self.beta_f64() * z).exp()
    }
}

/// Evaluates `sum_{k>=1} c_k z^k` given `coeffs[k-1] = c_k`.
fn horner_with_zero_constant(coeffs: &[f64], z: f64) -> f64 {
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc * z
}
