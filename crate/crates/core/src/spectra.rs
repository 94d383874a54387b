//! Finite truncations of the Jacobi matrix `V` (`V_jj = -delta/j`,
//! `V_{j,j+1} = -1/2`), a self-contained symmetric eigensolver (Sturm
//! bisection plus inverse iteration, with Householder reduction for dense
//! input), and comparison reports against the closed forms.
//!
//! Bisection against the Sturm count yields index-certified eigenvalues, so
//! the pairing between the n-th bound state and the closed-form eigenvalue
//! is part of what gets verified, not an assumption.

use num_bigint::BigInt;

use crate::closed_form::{self, ClosedFormSolution};
use crate::error::{Error, Result};
use crate::exactfield::{mp, rational_str, Rational};
use crate::textfmt::{fmt_f64, json_f64_array, json_str_array};

/// Symmetric tridiagonal matrix, stored as its main diagonal and single
/// off-diagonal.
#[derive(Debug, Clone)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    provenance: String,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Dimension("matrix must have at least one row".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Dimension(format!(
                "off-diagonal length {} does not match size {}",
                offdiag.len(),
                diag.len()
            )));
        }
        Ok(TridiagonalMatrix {
            diag,
            offdiag,
            provenance: provenance.into(),
        })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Infinity norm.
    pub fn norm_inf(&self) -> f64 {
        let n = self.size();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// `T v` for a full-length vector.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        assert_eq!(v.len(), n, "vector length mismatch");
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }
}

/// Truncation of the infinite matrix to its leading `size` rows: diagonal
/// `-delta/j`, off-diagonal `-1/2`. Entries are exact rationals rounded
/// once.
pub fn build_v(size: usize, delta: &Rational) -> Result<TridiagonalMatrix> {
    if size == 0 {
        return Err(Error::Dimension("truncation size must be positive".into()));
    }
    if !num_traits::Signed::is_positive(delta) {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let diag: Vec<f64> = (1..=size)
        .map(|j| mp::ratio_to_f64(&(-(delta / Rational::from_integer(BigInt::from(j))))))
        .collect();
    let offdiag = vec![-0.5; size - 1];
    TridiagonalMatrix::new(
        diag,
        offdiag,
        format!("V(N={size}, delta={})", rational_str(delta)),
    )
}

/// Number of eigenvalues strictly below `x`, from the signs of the shifted
/// LDL^T pivots. A vanishing pivot is replaced by a tiny negative value of
/// matching scale, the standard substitution.
pub fn sturm_count(t: &TridiagonalMatrix, x: f64) -> Result<usize> {
    if x.is_nan() {
        return Err(Error::Domain("Sturm shift must not be NaN".into()));
    }
    Ok(sturm_count_unchecked(t, x))
}

fn sturm_count_unchecked(t: &TridiagonalMatrix, x: f64) -> usize {
    let guard = f64::EPSILON * f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE);
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..t.size() {
        let e2 = if i > 0 {
            t.offdiag[i - 1] * t.offdiag[i - 1]
        } else {
            0.0
        };
        d = (t.diag[i] - x) - e2 / d;
        // Substitute a vanishing pivot by a tiny negative value before it is
        // counted or divided by.
        if d == 0.0 {
            d = -guard;
        } else if d.abs() < guard {
            d = d.signum() * guard;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin_bounds(t: &TridiagonalMatrix) -> (f64, f64) {
    let n = t.size();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { t.offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { t.offdiag[i].abs() } else { 0.0 };
        lo = lo.min(t.diag[i] - left - right);
        hi = hi.max(t.diag[i] + left + right);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalues for `k` in `[k_lo, k_hi]` (1-based,
/// inclusive), each bracketed to width at most `tol` by bisection on the
/// Sturm count from the Gershgorin bounds. `tol` below `4 eps |T|` is
/// clamped to that value; the schedule is fixed, so results are
/// deterministic.
pub fn eigenvalues_bisection(
    t: &TridiagonalMatrix,
    k_lo: usize,
    k_hi: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let n = t.size();
    if k_lo < 1 || k_lo > k_hi || k_hi > n {
        return Err(Error::Dimension(format!(
            "eigenvalue indices [{k_lo}, {k_hi}] invalid for size {n}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain("bisection tolerance must be positive".into()));
    }
    let (glo, ghi) = gershgorin_bounds(t);
    let radius = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
    let tol = tol.max(4.0 * f64::EPSILON * radius);

    let mut out = Vec::with_capacity(k_hi - k_lo + 1);
    for k in k_lo..=k_hi {
        let mut lo = glo;
        let mut hi = ghi;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break; // interval no longer representable
            }
            if sturm_count_unchecked(t, mid) >= k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Effective bisection tolerance after clamping, for caller-side warnings.
pub fn effective_bisection_tol(t: &TridiagonalMatrix, tol: f64) -> f64 {
    let (glo, ghi) = gershgorin_bounds(t);
    let radius = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
    tol.max(4.0 * f64::EPSILON * radius)
}

/// LU factorisation of `T - mu I` with partial pivoting (one fill-in band),
/// reused across inverse-iteration solves.
struct ShiftedLu {
    lower: Vec<f64>,   // multipliers
    diag: Vec<f64>,    // U main diagonal
    upper1: Vec<f64>,  // U first superdiagonal
    upper2: Vec<f64>,  // U second superdiagonal (fill-in)
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &TridiagonalMatrix, mu: f64) -> Self {
        let n = t.size();
        let mut diag: Vec<f64> = t.diag.iter().map(|d| d - mu).collect();
        let mut upper1 = t.offdiag.clone();
        let mut upper2 = vec![0.0; n.saturating_sub(2)];
        let mut lower = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let sub = &t.offdiag;

        for i in 0..n.saturating_sub(1) {
            // Row i+1 of T - mu I starts as [sub[i], diag[i+1], upper1[i+1], 0].
            let mut row_lo = [sub[i], diag[i + 1], if i + 2 < n { upper1[i + 1] } else { 0.0 }];
            let row_hi = [
                diag[i],
                upper1[i],
                if i + 2 < n { upper2[i] } else { 0.0 },
            ];
            let (pivot_row, other_row) = if row_hi[0].abs() >= row_lo[0].abs() {
                (row_hi, row_lo)
            } else {
                swapped[i] = true;
                (row_lo, row_hi)
            };
            let pivot = if pivot_row[0] == 0.0 {
                // Exactly singular leading block; perturb minimally.
                f64::EPSILON * f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE)
            } else {
                pivot_row[0]
            };
            let m = other_row[0] / pivot;
            row_lo = [
                0.0,
                other_row[1] - m * pivot_row[1],
                other_row[2] - m * pivot_row[2],
            ];
            diag[i] = pivot;
            upper1[i] = pivot_row[1];
            if i + 2 < n {
                upper2[i] = pivot_row[2];
            }
            lower[i] = m;
            diag[i + 1] = row_lo[1];
            if i + 2 < n {
                upper1[i + 1] = row_lo[2];
            }
        }
        if n >= 1 && diag[n - 1] == 0.0 {
            diag[n - 1] = f64::EPSILON * f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE);
        }
        ShiftedLu {
            lower,
            diag,
            upper1,
            upper2,
            swapped,
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut x = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= self.lower[i] * x[i];
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            if i + 1 < n {
                acc -= self.upper1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= self.upper2[i] * x[i + 2];
            }
            x[i] = acc / self.diag[i];
        }
        x
    }
}

/// Unit-norm eigenvector for the simple eigenvalue bracketed by `mu`, by
/// inverse iteration. The first nonzero component is made positive. The
/// converged vector satisfies `|T v - rho v| <= 10 tol |T|` with `rho` the
/// Rayleigh quotient; failing that after `max_iter` sweeps is an error
/// carrying the last residual.
pub fn eigenvector_inverse_iteration(
    t: &TridiagonalMatrix,
    mu: f64,
    max_iter: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let n = t.size();
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let norm_t = t.norm_inf();
    let bound = 10.0 * tol * norm_t;
    let lu = ShiftedLu::factor(t, mu);
    let mut v: Vec<f64> = vec![1.0 / (n as f64).sqrt(); n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter.max(1) {
        let y = lu.solve(&v);
        let norm = l2_norm(&y);
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NoConvergence {
                iterations: max_iter,
                residual,
            });
        }
        v = y.iter().map(|c| c / norm).collect();
        let tv = t.matvec(&v);
        let rho: f64 = v.iter().zip(&tv).map(|(a, b)| a * b).sum();
        residual = v
            .iter()
            .zip(&tv)
            .map(|(vi, tvi)| (tvi - rho * vi).abs())
            .fold(0.0, f64::max);
        if residual <= bound {
            fix_sign(&mut v);
            return Ok(v);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|c| **c != 0.0) {
        if *first < 0.0 {
            for c in v.iter_mut() {
                *c = -*c;
            }
        }
    }
}

/// Dense symmetric matrix in row-major full storage; input to the
/// Householder reduction.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix rows must be square".into()));
        }
        Ok(DenseMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Householder reduction of a dense symmetric matrix to an orthogonally
/// similar tridiagonal one. Input asymmetric beyond `1e-12` relative is a
/// domain error.
pub fn householder_tridiagonalize(a: &DenseMatrix) -> Result<TridiagonalMatrix> {
    let n = a.size();
    if n == 0 {
        return Err(Error::Dimension("matrix must have at least one row".into()));
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    if a.max_asymmetry() > 1e-12 * scale {
        return Err(Error::Domain(format!(
            "matrix asymmetric beyond tolerance: {:e} relative",
            a.max_asymmetry() / scale
        )));
    }
    let mut a = a.clone();
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));

    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the diagonal.
        let mut sigma: f64 = 0.0;
        for i in (k + 1)..n {
            sigma += a.get(i, k) * a.get(i, k);
        }
        let x0 = a.get(k + 1, k);
        let alpha = -x0.signum() * sigma.sqrt();
        diag.push(a.get(k, k));
        if sigma == 0.0 {
            off.push(0.0);
            continue;
        }
        off.push(alpha);

        let m = n - k - 1; // active block size
        v[0] = x0 - alpha;
        for i in 1..m {
            v[i] = a.get(k + 1 + i, k);
        }
        let vtv: f64 = v[..m].iter().map(|c| c * c).sum();
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;

        // p = beta * A_sub * v
        for (i, pi) in p[..m].iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, vj) in v[..m].iter().enumerate() {
                acc += a.get(k + 1 + i, k + 1 + j) * vj;
            }
            *pi = beta * acc;
        }
        // w = p - (beta/2 * v^T p) v; A_sub -= v w^T + w v^T
        let vtp: f64 = v[..m].iter().zip(&p[..m]).map(|(a, b)| a * b).sum();
        let kappa = 0.5 * beta * vtp;
        for i in 0..m {
            p[i] -= kappa * v[i];
        }
        for i in 0..m {
            for j in 0..m {
                let upd = v[i] * p[j] + p[i] * v[j];
                a.set(k + 1 + i, k + 1 + j, a.get(k + 1 + i, k + 1 + j) - upd);
            }
        }
    }
    if n >= 2 {
        diag.push(a.get(n - 2, n - 2));
        off.push(a.get(n - 1, n - 2));
    }
    diag.push(a.get(n - 1, n - 1));

    TridiagonalMatrix::new(diag, off, "householder-reduced dense matrix")
}

/// Smallest truncation size whose boundary perturbation `r^(2N)` falls
/// below `tol`, from the per-site decay `r = s - delta/n` of the n-th
/// bound state.
pub fn suggested_truncation(n: u32, delta: &Rational, tol: f64) -> Result<usize> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain("tolerance must be in (0, 1)".into()));
    }
    let lambda = closed_form::eigenvalue(n, delta)?;
    let s = (-lambda.clone()).to_f64(64)?;
    let step = mp::ratio_to_f64(&(delta / Rational::from_integer(BigInt::from(n))));
    let r = s - step;
    let n_min = (tol.ln() / (2.0 * r.ln())).ceil() as usize;
    Ok(n_min.max(8))
}

/// Computed-versus-exact comparison of the lowest part of the spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub size: usize,
    pub delta: Rational,
    /// `k` smallest computed eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Closed-form targets `lambda_n`, `n = 1..=k`.
    pub exact_targets: Vec<f64>,
    /// Canonical exact strings of the targets.
    pub exact_strings: Vec<String>,
    pub abs_errors: Vec<f64>,
    /// Max-norm eigenvector deviations after sign and norm alignment, when
    /// requested.
    pub eigenvector_errors: Option<Vec<f64>>,
}

impl SpectrumReport {
    pub fn to_json(&self) -> String {
        let vec_errors = match &self.eigenvector_errors {
            Some(e) => json_f64_array(e),
            None => "null".to_string(),
        };
        format!(
            "{{\"size\":{},\"delta\":\"{}\",\"eigenvalues\":{},\"exact\":{},\"exact_strings\":{},\"abs_errors\":{},\"eigenvector_errors\":{}}}",
            self.size,
            rational_str(&self.delta),
            json_f64_array(&self.eigenvalues),
            json_f64_array(&self.exact_targets),
            json_str_array(&self.exact_strings),
            json_f64_array(&self.abs_errors),
            vec_errors
        )
    }

    /// CSV with header `k,computed,exact,abs_error` (plus the eigenvector
    /// column when present).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let with_vectors = self.eigenvector_errors.is_some();
        out.push_str(if with_vectors {
            "k,computed,exact,abs_error,eigenvector_error\n"
        } else {
            "k,computed,exact,abs_error\n"
        });
        for i in 0..self.eigenvalues.len() {
            out.push_str(&format!(
                "{},{},{},{}",
                i + 1,
                fmt_f64(self.eigenvalues[i]),
                fmt_f64(self.exact_targets[i]),
                fmt_f64(self.abs_errors[i])
            ));
            if let Some(e) = &self.eigenvector_errors {
                out.push_str(&format!(",{}", fmt_f64(e[i])));
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the comparison report for the `states` lowest eigenpairs of the
/// `size`-truncation at spacing `delta`.
pub fn spectrum_report(
    size: usize,
    delta: &Rational,
    states: usize,
    tol: f64,
    with_vectors: bool,
) -> Result<SpectrumReport> {
    if states == 0 || states > size {
        return Err(Error::Dimension(format!(
            "cannot report {states} states of a size-{size} truncation"
        )));
    }
    let t = build_v(size, delta)?;
    let eigenvalues = eigenvalues_bisection(&t, 1, states, tol)?;
    let mut exact_targets = Vec::with_capacity(states);
    let mut exact_strings = Vec::with_capacity(states);
    for n in 1..=states {
        let lambda = closed_form::eigenvalue(n as u32, delta)?;
        exact_targets.push(lambda.to_f64(64)?);
        exact_strings.push(lambda.to_canonical_string());
    }
    let abs_errors: Vec<f64> = eigenvalues
        .iter()
        .zip(&exact_targets)
        .map(|(c, e)| (c - e).abs())
        .collect();

    let eigenvector_errors = if with_vectors {
        let mut errs = Vec::with_capacity(states);
        for (i, mu) in eigenvalues.iter().enumerate() {
            let v = eigenvector_inverse_iteration(&t, *mu, 40, tol)?;
            let sol = ClosedFormSolution::new(i as u32 + 1, delta.clone())?;
            let exact = normalized_with_positive_head(&sol.grid_samples_f64(size as u32));
            let dev = v
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            errs.push(dev);
        }
        Some(errs)
    } else {
        None
    };

    Ok(SpectrumReport {
        size,
        delta: delta.clone(),
        eigenvalues,
        exact_targets,
        exact_strings,
        abs_errors,
        eigenvector_errors,
    })
}

/// Normalises to unit length with the first nonzero component positive,
/// the same convention inverse iteration uses.
pub fn normalized_with_positive_head(v: &[f64]) -> Vec<f64> {
    let norm = l2_norm(v);
    let mut out: Vec<f64> = v.iter().map(|c| c / norm).collect();
    fix_sign(&mut out);
    out
}
