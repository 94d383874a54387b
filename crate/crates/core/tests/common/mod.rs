//! Shared test support: an independent brute-force oracle for the
//! closed-form coefficients.
//!
//! The oracle never touches the production recurrence. It assembles the
//! full coefficient-matching linear system column by column — the residual
//! polynomial of each monomial `z^i`, built from Taylor shifts — and solves
//! it by exact Gaussian elimination over `Q(s)`, pinning the monic
//! normalisation `c_n = 1`.

use fdhydro::closed_form;
use fdhydro::exactfield::{QuadNumber, Rational};
use fdhydro::polyq::PolyQ;
use num_bigint::BigInt;
use num_traits::One;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Residual polynomial of the monomial `z^i`:
/// `G_i = z [ -1/2 e+ (z-d)^i - 1/2 e- (z+d)^i - lambda z^i ] - d^2 z^i`.
fn monomial_residual(
    i: usize,
    delta: &Rational,
    e_plus: &QuadNumber,
    e_minus: &QuadNumber,
    lambda: &QuadNumber,
) -> PolyQ {
    let zero = lambda.with_rational(Rational::from_integer(0.into()));
    let one = lambda.with_rational(Rational::one());
    let mut coeffs = vec![zero; i + 1];
    coeffs[i] = one;
    let monomial = PolyQ::from_coeffs(coeffs).unwrap();
    let half = rational(1, 2);

    let bracket = monomial
        .taylor_shift(&-delta.clone())
        .scale(&-e_plus.scale(&half))
        .add(&monomial.taylor_shift(delta).scale(&-e_minus.scale(&half)))
        .add(&monomial.scale(&-lambda.clone()));
    bracket
        .mul_by_z()
        .add(&monomial.scale(&lambda.with_rational(-(delta * delta))))
}

/// Monic coefficients `c_1..c_n` from the full linear system.
pub fn oracle_coefficients(n: u32, delta: &Rational) -> Vec<QuadNumber> {
    let d = closed_form::context_constant(n, delta).unwrap();
    let s = QuadNumber::sqrt_d(d).unwrap();
    let step = s.with_rational(delta / Rational::from_integer(BigInt::from(n)));
    let e_plus = s.checked_add(&step).unwrap();
    let e_minus = s.checked_sub(&step).unwrap();
    let lambda = -s.clone();
    let zero = s.with_rational(Rational::from_integer(0.into()));
    let one = s.with_rational(Rational::one());

    let n_us = n as usize;
    let rows = n_us + 2; // powers z^0 .. z^(n+1), generously
    // columns[i] = residual of z^(i+1), i = 0..n-1
    let columns: Vec<PolyQ> = (1..=n_us)
        .map(|i| monomial_residual(i, delta, &e_plus, &e_minus, &lambda))
        .collect();

    // Augmented system over the unknowns c_1..c_{n-1}: sum_i c_i G_i = -G_n.
    let unknowns = n_us - 1;
    let mut matrix: Vec<Vec<QuadNumber>> = (0..rows)
        .map(|j| {
            (0..unknowns)
                .map(|i| columns[i].coeff(j).cloned().unwrap_or_else(|| zero.clone()))
                .collect()
        })
        .collect();
    let mut rhs: Vec<QuadNumber> = (0..rows)
        .map(|j| {
            -columns[n_us - 1]
                .coeff(j)
                .cloned()
                .unwrap_or_else(|| zero.clone())
        })
        .collect();

    // Exact Gaussian elimination with the first nonzero pivot per column.
    let mut pivot_rows = Vec::with_capacity(unknowns);
    let mut rank = 0;
    for col in 0..unknowns {
        let pivot = (rank..rows)
            .find(|&r| !matrix[r][col].is_zero())
            .expect("coefficient system is nonsingular");
        matrix.swap(rank, pivot);
        rhs.swap(rank, pivot);
        let inv = one.checked_div(&matrix[rank][col]).unwrap();
        for c in col..unknowns {
            matrix[rank][c] = matrix[rank][c].checked_mul(&inv).unwrap();
        }
        rhs[rank] = rhs[rank].checked_mul(&inv).unwrap();
        for r in 0..rows {
            if r != rank && !matrix[r][col].is_zero() {
                let factor = matrix[r][col].clone();
                for c in col..unknowns {
                    let sub = matrix[rank][c].checked_mul(&factor).unwrap();
                    matrix[r][c] = matrix[r][c].checked_sub(&sub).unwrap();
                }
                let sub = rhs[rank].checked_mul(&factor).unwrap();
                rhs[r] = rhs[r].checked_sub(&sub).unwrap();
            }
        }
        pivot_rows.push(rank);
        rank += 1;
    }
    // Consistency: the remaining equations must have vanished.
    for r in rank..rows {
        assert!(
            rhs[r].is_zero(),
            "overdetermined system inconsistent at row {r}"
        );
    }

    let mut solution: Vec<QuadNumber> = pivot_rows.iter().map(|&row| rhs[row].clone()).collect();
    solution.push(one);
    solution
}
