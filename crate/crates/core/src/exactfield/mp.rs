//! Bignum kernels behind the exact layer: square roots and logarithms of
//! rationals to a requested binary precision, and correctly rounded
//! conversion of a rational to `f64`.
//!
//! Everything here is deterministic integer arithmetic; no platform libm
//! is involved.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Lower bound for sqrt(x) with relative error below `2^-bits`.
///
/// The returned value `r` satisfies `r <= sqrt(x) < r * (1 + 2^-bits)`.
/// Requires `x >= 0`.
pub fn sqrt_lower(x: &BigRational, bits: u64) -> BigRational {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return BigRational::zero();
    }
    // sqrt(p/q) = sqrt(p*q)/q; isqrt(p*q * 4^g) / (q * 2^g) is a lower bound
    // with absolute error < 1/(q*2^g), i.e. relative error < 2^-g for p*q >= 1.
    let g = bits + 2;
    let t = x.numer() * x.denom();
    let scaled = t << (2 * g);
    let root = scaled.sqrt();
    BigRational::new(root, x.denom() << g)
}

/// Exact width of the bracket that [`sqrt_lower`] produces: the true square
/// root lies in `[lo, lo + sqrt_gap)`.
pub fn sqrt_gap(x: &BigRational, bits: u64) -> BigRational {
    let g = bits + 2;
    BigRational::new(BigInt::one(), x.denom() << g)
}

/// Natural logarithm of a positive rational with absolute error below `2^-bits`.
pub fn ln_rational(y: &BigRational, bits: u64) -> BigRational {
    assert!(y.is_positive(), "log of non-positive rational");
    if y.is_one() {
        return BigRational::zero();
    }
    // ln(1/y) = -ln(y); reduce to y > 1.
    if *y < BigRational::one() {
        return -ln_rational(&y.recip(), bits);
    }
    let work = bits + 16;

    // Scale into [1, 2) by powers of two: y = v * 2^k.
    let mut k: i64 = 0;
    let mut v = y.clone();
    let two = BigRational::from_integer(BigInt::from(2));
    while v >= two {
        v /= &two;
        k += 1;
    }

    // Four square roots bring v into [1, 2^(1/16)), where the atanh series
    // for ln is short.
    const HALVINGS: u32 = 4;
    for _ in 0..HALVINGS {
        v = sqrt_lower(&v, work + 8);
        if v < BigRational::one() {
            // Rounded just below 1 by the floor sqrt; clamp, the error budget
            // already accounts for the bracket width.
            v = BigRational::one();
        }
    }

    // ln(v) = 2*atanh(t), t = (v-1)/(v+1).
    let ln_v = atanh_series(
        &((&v - BigRational::one()) / (&v + BigRational::one())),
        work,
    );
    let scaled = ln_v * BigRational::from_integer(BigInt::from(1u64 << HALVINGS));

    if k == 0 {
        scaled
    } else {
        scaled + BigRational::from_integer(BigInt::from(k)) * ln_two(work)
    }
}

/// ln 2 = 2*atanh(1/3).
fn ln_two(bits: u64) -> BigRational {
    atanh_series(&BigRational::new(BigInt::one(), BigInt::from(3)), bits)
}

/// 2*atanh(t) = 2*(t + t^3/3 + t^5/5 + ...) for |t| < 1/2.
fn atanh_series(t: &BigRational, bits: u64) -> BigRational {
    let t2 = t * t;
    let mut term = t.clone();
    let mut sum = BigRational::zero();
    let mut n = 1u64;
    // |t| < 1/2 so each term shrinks by at least 4x; stop once the term
    // magnitude cannot affect the requested precision.
    let floor = BigRational::new(BigInt::one(), BigInt::one() << (bits + 4));
    while !term.is_zero() && term.abs() > floor {
        sum += &term / BigRational::from_integer(BigInt::from(n));
        term *= &t2;
        n += 2;
    }
    sum * BigRational::from_integer(BigInt::from(2))
}

/// Correctly rounded (round-half-even) conversion of a rational to `f64`.
///
/// Handles overflow to infinity, underflow to signed zero and the subnormal
/// range exactly.
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let negative = x.is_negative();
    let n = x.numer().abs();
    let d = x.denom().clone();

    // E = floor(log2(n/d)).
    let mut e = n.bits() as i64 - d.bits() as i64;
    if shifted_cmp(&n, &d, e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    debug_assert!(shifted_cmp(&n, &d, e) != std::cmp::Ordering::Less);
    debug_assert!(shifted_cmp(&n, &d, e + 1) == std::cmp::Ordering::Less);

    if e > 1023 {
        return if negative { f64::NEG_INFINITY } else { f64::INFINITY };
    }

    // Normal numbers carry 52 fractional bits below 2^E; subnormals lose
    // precision down to 2^-1074.
    let frac_bits: i64 = if e >= -1022 { 52 } else { 1074 + e };
    if frac_bits < -1 {
        return if negative { -0.0 } else { 0.0 };
    }

    // m = round(n/d * 2^(frac_bits - E)), round half to even.
    let shift = frac_bits - e;
    let (num, den) = if shift >= 0 {
        (n << shift as u64, d)
    } else {
        (n, d << (-shift) as u64)
    };
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    let mut m = q.clone();
    let twice_r = &r << 1u32;
    match twice_r.cmp(&den) {
        std::cmp::Ordering::Greater => m += 1,
        std::cmp::Ordering::Equal => {
            if num_integer::Integer::is_odd(&q) {
                m += 1;
            }
        }
        std::cmp::Ordering::Less => {}
    }

    let mut mant = to_u64(&m);
    let mut exp = e;
    if e >= -1022 {
        if mant == 1u64 << 53 {
            mant >>= 1;
            exp += 1;
            if exp > 1023 {
                return if negative { f64::NEG_INFINITY } else { f64::INFINITY };
            }
        }
        debug_assert!((1u64 << 52..1u64 << 53).contains(&mant));
        let bits = ((negative as u64) << 63) | (((exp + 1023) as u64) << 52) | (mant & ((1u64 << 52) - 1));
        f64::from_bits(bits)
    } else {
        // Subnormal: exponent field 0, mantissa m * 2^-1074. Rounding may
        // carry into the smallest normal, which the same bit layout encodes.
        debug_assert!(mant <= 1u64 << 52);
        let bits = ((negative as u64) << 63) | mant;
        f64::from_bits(bits)
    }
}

/// Compares n with d * 2^e without building d * 2^e when e is negative.
fn shifted_cmp(n: &BigInt, d: &BigInt, e: i64) -> std::cmp::Ordering {
    if e >= 0 {
        n.cmp(&(d << e as u64))
    } else {
        (n << (-e) as u64).cmp(d)
    }
}

fn to_u64(x: &BigInt) -> u64 {
    let (sign, digits) = x.to_u64_digits();
    debug_assert!(sign != Sign::Minus);
    match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => unreachable!("mantissa exceeds 64 bits"),
    }
}
