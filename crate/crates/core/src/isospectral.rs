//! Operators isospectral to simple sequences: `W = (V^2 - I)/delta^2` maps
//! the bound-state eigenvalue `-sqrt(1 + delta^2/n^2)` to `1/n^2`, its
//! powers give `1/n^(2k)`, and polynomial functional calculus at the nodes
//! `1/n^2` realises matrices with prescribed eigenvalues.
//!
//! All band products are carried out in exact rational arithmetic and
//! rounded to floats once at the end, so acceptance comparisons see no
//! product-order rounding noise. Truncating `V` before squaring differs
//! from truncating the infinite `V^2` in the far corner only; the
//! discrepancy is exponentially irrelevant for the bound states.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{mp, rational_str, Rational};
use crate::spectra::{self, DenseMatrix};
use crate::textfmt::{fmt_f64, json_escape};

/// Symmetric banded matrix: main diagonal plus `bandwidth` superdiagonals.
/// `bands[d][i]` is the entry at `(i, i + d)`.
#[derive(Debug, Clone)]
pub struct BandedSymmetric {
    size: usize,
    bands: Vec<Vec<f64>>,
    /// Exact band entries when the matrix came out of an exact
    /// construction; kept so that further products stay exact.
    exact: Option<Vec<Vec<Rational>>>,
    provenance: String,
}

impl BandedSymmetric {
    /// Wraps float bands directly; `bands[0]` is the main diagonal.
    pub fn from_float_bands(bands: Vec<Vec<f64>>, provenance: impl Into<String>) -> Result<Self> {
        let size = bands.first().map(Vec::len).unwrap_or(0);
        if size == 0 {
            return Err(Error::Dimension("matrix must have at least one row".into()));
        }
        for (d, band) in bands.iter().enumerate() {
            if band.len() + d != size {
                return Err(Error::Dimension(format!(
                    "band {d} has length {}, expected {}",
                    band.len(),
                    size - d
                )));
            }
        }
        Ok(BandedSymmetric {
            size,
            bands,
            exact: None,
            provenance: provenance.into(),
        })
    }

    fn from_exact(bands: Vec<Vec<Rational>>, size: usize, provenance: String) -> Self {
        let float_bands = bands
            .iter()
            .map(|band| band.iter().map(mp::ratio_to_f64).collect())
            .collect();
        BandedSymmetric {
            size,
            bands: float_bands,
            exact: Some(bands),
            provenance,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn bands(&self) -> &[Vec<f64>] {
        &self.bands
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d < self.bands.len() {
            self.bands[d][lo]
        } else {
            0.0
        }
    }

    /// Full dense copy.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut dense = DenseMatrix::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                dense.set(i, j, self.get(i, j));
            }
        }
        dense
    }

    /// `B v`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.size, "vector length mismatch");
        let bw = self.bandwidth();
        (0..self.size)
            .map(|i| {
                let lo = i.saturating_sub(bw);
                let hi = (i + bw).min(self.size - 1);
                (lo..=hi).map(|j| self.get(i, j) * v[j]).sum()
            })
            .collect()
    }

    /// Exact band entries: the stored ones, or the floats lifted exactly
    /// (every f64 is a rational).
    fn exact_bands(&self) -> Vec<Vec<Rational>> {
        match &self.exact {
            Some(b) => b.clone(),
            None => self
                .bands
                .iter()
                .map(|band| {
                    band.iter()
                        .map(|x| BigRational::from_float(*x).expect("finite band entry"))
                        .collect()
                })
                .collect(),
        }
    }
}

/// Exact symmetric band storage used during construction.
type ExactBands = Vec<Vec<Rational>>;

fn exact_get(bands: &ExactBands, i: usize, j: usize) -> Rational {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    let d = hi - lo;
    if d < bands.len() {
        bands[d][lo].clone()
    } else {
        Rational::zero()
    }
}

/// Product of two symmetric banded matrices that commute (both polynomials
/// in one matrix here, so the product is symmetric).
fn exact_band_mul(a: &ExactBands, b: &ExactBands, size: usize) -> ExactBands {
    let bw_a = a.len() - 1;
    let bw_b = b.len() - 1;
    let bw_c = bw_a + bw_b;
    let mut c: ExactBands = (0..=bw_c).map(|d| vec![Rational::zero(); size - d.min(size)]).collect();
    for d in 0..=bw_c {
        for i in 0..size.saturating_sub(d) {
            let j = i + d;
            let k_lo = i.saturating_sub(bw_a).max(j.saturating_sub(bw_b));
            let k_hi = (i + bw_a).min(j + bw_b).min(size - 1);
            let mut acc = Rational::zero();
            for k in k_lo..=k_hi {
                acc += exact_get(a, i, k) * exact_get(b, k, j);
            }
            c[d][i] = acc;
        }
    }
    c
}

fn exact_add_scaled_identity(bands: &mut ExactBands, shift: &Rational) {
    for entry in bands[0].iter_mut() {
        *entry += shift;
    }
}

fn exact_scale(bands: &mut ExactBands, factor: &Rational) {
    for band in bands.iter_mut() {
        for entry in band.iter_mut() {
            *entry *= factor;
        }
    }
}

fn exact_identity(size: usize, value: &Rational) -> ExactBands {
    vec![vec![value.clone(); size]]
}

/// Exact bands of the `V` truncation.
fn exact_v_bands(size: usize, delta: &Rational) -> ExactBands {
    let diag: Vec<Rational> = (1..=size)
        .map(|j| -(delta / Rational::from_integer(BigInt::from(j))))
        .collect();
    let off = vec![-Rational::new(BigInt::one(), BigInt::from(2)); size - 1];
    vec![diag, off]
}

/// The pentadiagonal truncation of `W = (V^2 - I)/delta^2`, whose bound
/// states carry eigenvalues `1/n^2`. Computed by exact band convolution of
/// the `V` truncation, then rounded once.
pub fn build_w(size: usize, delta: &Rational) -> Result<BandedSymmetric> {
    if size < 2 {
        return Err(Error::Dimension("W truncation needs size >= 2".into()));
    }
    if !delta.is_positive() {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let v = exact_v_bands(size, delta);
    let mut w = exact_band_mul(&v, &v, size);
    exact_add_scaled_identity(&mut w, &-Rational::one());
    exact_scale(&mut w, &(delta * delta).recip());
    Ok(BandedSymmetric::from_exact(
        w,
        size,
        format!("W=(V^2-I)/delta^2 (N={size}, delta={})", rational_str(delta)),
    ))
}

/// `W^k` by repeated exact band multiplication, rounded once at the end.
/// `k = 1` returns the input unchanged.
pub fn matrix_power(w: &BandedSymmetric, k: u32) -> Result<BandedSymmetric> {
    if k == 0 {
        return Err(Error::Domain("matrix power needs k >= 1".into()));
    }
    if k == 1 {
        return Ok(w.clone());
    }
    let bw_result = w.bandwidth() * k as usize;
    if bw_result >= w.size() {
        return Err(Error::Dimension(format!(
            "power {k} would give bandwidth {bw_result} >= size {}",
            w.size()
        )));
    }
    let base = w.exact_bands();
    let mut acc = base.clone();
    for _ in 1..k {
        acc = exact_band_mul(&acc, &base, w.size());
    }
    Ok(BandedSymmetric::from_exact(
        acc,
        w.size(),
        format!("({})^{k}", w.provenance()),
    ))
}

/// Newton divided differences over exact rationals.
fn divided_differences(nodes: &[Rational], values: &[Rational]) -> Vec<Rational> {
    let m = nodes.len();
    let mut table: Vec<Rational> = values.to_vec();
    let mut out = Vec::with_capacity(m);
    out.push(table[0].clone());
    for order in 1..m {
        for i in 0..(m - order) {
            let num = &table[i + 1] - &table[i];
            let den = &nodes[i + order] - &nodes[i];
            table[i] = num / den;
        }
        out.push(table[0].clone());
    }
    out
}

/// The matrix `f(W)` where `f` is the degree-`m-1` polynomial interpolating
/// `f(1/n^2) = targets[n-1]` for `n = 1..=m` (Newton form, exact nodes,
/// float targets lifted exactly). The `m` matched eigenvalues approximate
/// the targets; the rest of the spectrum is mapped along and reported, not
/// controlled. `m` is capped at 8: the nodes cluster at zero and the
/// interpolation turns exponentially ill-conditioned beyond that.
pub fn prescribe_spectrum(
    targets: &[f64],
    size: usize,
    delta: &Rational,
) -> Result<BandedSymmetric> {
    let m = targets.len();
    if m < 2 {
        return Err(Error::Domain("need at least two target eigenvalues".into()));
    }
    if m > 8 {
        return Err(Error::Conditioning(format!(
            "{m} targets exceed the conditioning cap of 8 interpolation nodes"
        )));
    }
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("targets must be finite".into()));
    }
    let bw_result = 2 * (m - 1);
    if bw_result >= size {
        return Err(Error::Dimension(format!(
            "interpolant bandwidth {bw_result} >= size {size}"
        )));
    }

    let nodes: Vec<Rational> = (1..=m)
        .map(|n| Rational::new(BigInt::one(), BigInt::from((n * n) as i64)))
        .collect();
    let values: Vec<Rational> = targets
        .iter()
        .map(|t| BigRational::from_float(*t).expect("finite target"))
        .collect();
    let dd = divided_differences(&nodes, &values);

    // Horner on the Newton form: R = dd[m-1]; R = R (W - x_i I) + dd[i] I.
    let w = build_w(size, delta)?;
    let w_exact = w.exact_bands();
    let mut acc = exact_identity(size, &dd[m - 1]);
    for i in (0..m - 1).rev() {
        let mut shifted = w_exact.clone();
        exact_add_scaled_identity(&mut shifted, &-&nodes[i]);
        acc = exact_band_mul(&acc, &shifted, size);
        exact_add_scaled_identity(&mut acc, &dd[i]);
    }
    let target_str: Vec<String> = targets.iter().map(|t| format!("{t}")).collect();
    Ok(BandedSymmetric::from_exact(
        acc,
        size,
        format!(
            "newton-interpolated f(W) with targets [{}] (N={size}, delta={})",
            target_str.join(", "),
            rational_str(delta)
        ),
    ))
}

/// Index-certified eigenvalues of a banded matrix: dense expansion,
/// Householder reduction, then Sturm bisection.
pub fn banded_spectrum(
    b: &BandedSymmetric,
    k_lo: usize,
    k_hi: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let t = spectra::householder_tridiagonalize(&b.to_dense())?;
    spectra::eigenvalues_bisection(&t, k_lo, k_hi, tol)
}

/// One matched eigenvalue in an [`IsospectralReport`].
#[derive(Debug, Clone)]
pub struct MatchedEigenvalue {
    pub target: f64,
    /// Exact target string when one exists (the `1/n^(2k)` nodes).
    pub target_exact: Option<String>,
    pub computed: f64,
    pub abs_error: f64,
}

/// Comparison of an isospectral construction against its intended
/// eigenvalues, plus a summary of the unmatched spectrum.
#[derive(Debug, Clone)]
pub struct IsospectralReport {
    pub construction: String,
    pub size: usize,
    pub delta: Rational,
    pub matched: Vec<MatchedEigenvalue>,
    pub unmatched_min: f64,
    pub unmatched_max: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IsospectralReport {
    pub fn to_json(&self) -> String {
        let matched: Vec<String> = self
            .matched
            .iter()
            .map(|m| {
                let exact = match &m.target_exact {
                    Some(s) => format!("\"{}\"", json_escape(s)),
                    None => "null".to_string(),
                };
                format!(
                    "{{\"target\":{},\"target_exact\":{},\"computed\":{},\"abs_error\":{}}}",
                    fmt_f64(m.target),
                    exact,
                    fmt_f64(m.computed),
                    fmt_f64(m.abs_error)
                )
            })
            .collect();
        format!(
            "{{\"construction\":\"{}\",\"size\":{},\"delta\":\"{}\",\"matched\":[{}],\"unmatched_spectrum\":{{\"min\":{},\"max\":{}}},\"tolerance\":{},\"passed\":{}}}",
            json_escape(&self.construction),
            self.size,
            rational_str(&self.delta),
            matched.join(","),
            fmt_f64(self.unmatched_min),
            fmt_f64(self.unmatched_max),
            fmt_f64(self.tolerance),
            self.passed
        )
    }
}

/// Locates the eigenvalue of `t` nearest to `target`, certified by Sturm
/// counts over the window `target +- h`. Returns the 1-based index and the
/// bracketed value. Outside the window, falls back to the two neighbouring
/// indices.
fn certified_nearest(
    t: &spectra::TridiagonalMatrix,
    target: f64,
    h: f64,
    tol: f64,
) -> Result<(usize, f64)> {
    let n = t.size();
    let below_lo = spectra::sturm_count(t, target - h)?;
    let below_hi = spectra::sturm_count(t, target + h)?;
    let candidates: Vec<usize> = if below_hi > below_lo {
        ((below_lo + 1)..=below_hi).collect()
    } else {
        let mut c = Vec::new();
        if below_lo >= 1 {
            c.push(below_lo);
        }
        if below_lo < n {
            c.push(below_lo + 1);
        }
        c
    };
    let mut best: Option<(usize, f64)> = None;
    for k in candidates {
        let v = spectra::eigenvalues_bisection(t, k, k, tol)?[0];
        if best.as_ref().is_none_or(|(_, bv)| (v - target).abs() < (bv - target).abs()) {
            best = Some((k, v));
        }
    }
    best.ok_or_else(|| Error::Dimension("matrix has no eigenvalues".into()))
}

fn report_against_targets(
    b: &BandedSymmetric,
    delta: &Rational,
    targets: &[(f64, Option<String>)],
    tol_bisect: f64,
    tol_match: f64,
) -> Result<IsospectralReport> {
    let size = b.size();
    let m = targets.len();
    if m >= size {
        return Err(Error::Dimension(format!(
            "cannot match {m} targets in a size-{size} truncation"
        )));
    }
    // One dense reduction serves every certified query below.
    let t = spectra::householder_tridiagonalize(&b.to_dense())?;

    // Each target is matched to the certified nearest eigenvalue. For W and
    // the prescribed constructions these are exactly the largest ones;
    // for higher powers the mapped bound states sit inside the folded image
    // of the band, so index order alone cannot pair them.
    let mut matched = Vec::with_capacity(m);
    let mut matched_indices = std::collections::HashSet::new();
    for (target, exact) in targets {
        let h = (1e-5 * target.abs()).max(1e-7);
        let (idx, computed) = certified_nearest(&t, *target, h, tol_bisect)?;
        matched_indices.insert(idx);
        matched.push(MatchedEigenvalue {
            target: *target,
            target_exact: exact.clone(),
            computed,
            abs_error: (computed - target).abs(),
        });
    }

    // Extremes of the unmatched spectrum.
    let mut lo_idx = 1;
    while matched_indices.contains(&lo_idx) && lo_idx < size {
        lo_idx += 1;
    }
    let mut hi_idx = size;
    while matched_indices.contains(&hi_idx) && hi_idx > 1 {
        hi_idx -= 1;
    }
    let unmatched_min = spectra::eigenvalues_bisection(&t, lo_idx, lo_idx, tol_bisect)?[0];
    let unmatched_max = spectra::eigenvalues_bisection(&t, hi_idx, hi_idx, tol_bisect)?[0];

    let passed = matched.iter().all(|m| m.abs_error <= tol_match);
    Ok(IsospectralReport {
        construction: b.provenance().to_string(),
        size,
        delta: delta.clone(),
        matched,
        unmatched_min,
        unmatched_max,
        tolerance: tol_match,
        passed,
    })
}

/// Report for `W^k` against its intended largest eigenvalues `1/n^(2k)`,
/// `n = 1..=states`.
pub fn power_report(
    size: usize,
    delta: &Rational,
    k: u32,
    states: usize,
    tol_match: f64,
) -> Result<IsospectralReport> {
    let w = build_w(size, delta)?;
    let wk = matrix_power(&w, k)?;
    let targets: Vec<(f64, Option<String>)> = (1..=states as u64)
        .map(|n| {
            let denom = BigInt::from(n).pow(2 * k);
            let exact = Rational::new(BigInt::one(), denom);
            (mp::ratio_to_f64(&exact), Some(rational_str(&exact)))
        })
        .collect();
    report_against_targets(&wk, delta, &targets, 1e-12, tol_match)
}

/// Report for `prescribe_spectrum` against its own targets.
pub fn prescribe_report(
    size: usize,
    delta: &Rational,
    targets: &[f64],
    tol_match: f64,
) -> Result<IsospectralReport> {
    let b = prescribe_spectrum(targets, size, delta)?;
    let mut with_exact: Vec<(f64, Option<String>)> =
        targets.iter().map(|t| (*t, None)).collect();
    // Descending order pairs with the descending computed eigenvalues.
    with_exact.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    report_against_targets(&b, delta, &with_exact, 1e-12, tol_match)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational;
    use crate::spectra::{build_v, eigenvalues_bisection, eigenvector_inverse_iteration};

    #[test]
    fn w_two_by_two_by_hand() {
        // V = [[-1, -1/2], [-1/2, -1/2]]; W = V^2 - I = [[1/4, 3/4], [3/4, -1/2]].
        let w = build_w(2, &rational(1, 1)).unwrap();
        assert_eq!(w.bandwidth(), 2);
        assert_eq!(w.get(0, 0), 0.25);
        assert_eq!(w.get(0, 1), 0.75);
        assert_eq!(w.get(1, 0), 0.75);
        assert_eq!(w.get(1, 1), -0.5);
    }

    #[test]
    fn w_spectrum_maps_bound_states() {
        let w = build_w(400, &rational(1, 1)).unwrap();
        let mut top = banded_spectrum(&w, 398, 400, 1e-12).unwrap();
        top.reverse();
        let targets = [1.0, 0.25, 1.0 / 9.0];
        for (c, t) in top.iter().zip(targets) {
            assert!((c - t).abs() < 1e-8, "computed {c}, target {t}");
        }
    }

    #[test]
    fn eigenvector_transfers_from_v_to_w() {
        let delta = rational(1, 1);
        let size = 400;
        let v_matrix = build_v(size, &delta).unwrap();
        let mu = eigenvalues_bisection(&v_matrix, 1, 1, 1e-13).unwrap()[0];
        let vec = eigenvector_inverse_iteration(&v_matrix, mu, 40, 1e-13).unwrap();

        let w = build_w(size, &delta).unwrap();
        let wv = w.matvec(&vec);
        let res_w = wv
            .iter()
            .zip(&vec)
            .map(|(a, b)| (a - b).abs()) // eigenvalue 1/1^2 = 1
            .fold(0.0, f64::max);
        assert!(res_w < 1e-7, "W transfer residual {res_w:e}");

        let w2 = matrix_power(&w, 2).unwrap();
        let w2v = w2.matvec(&vec);
        let res_w2 = w2v
            .iter()
            .zip(&vec)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(res_w2 < 1e-8, "W^2 transfer residual {res_w2:e}");
    }

    #[test]
    fn power_one_is_identity_operation() {
        let w = build_w(40, &rational(1, 1)).unwrap();
        let w1 = matrix_power(&w, 1).unwrap();
        assert_eq!(w.bands(), w1.bands());
    }

    #[test]
    fn power_two_spectrum() {
        let report = power_report(400, &rational(1, 1), 2, 3, 1e-8).unwrap();
        assert!(report.passed, "matched errors: {:?}", report.matched);
        let targets: Vec<f64> = report.matched.iter().map(|m| m.target).collect();
        assert_eq!(targets, vec![1.0, 1.0 / 16.0, 1.0 / 81.0]);
    }

    #[test]
    fn power_bandwidth_cap() {
        let w = build_w(10, &rational(1, 1)).unwrap();
        assert!(matches!(matrix_power(&w, 5), Err(Error::Dimension(_))));
    }

    #[test]
    fn prescribe_identity_targets_reproduces_w() {
        // Interpolating the identity at the nodes gives back f(x) = x up to
        // the float lift of 1/9, so f(W) equals W within a rounding of each
        // band entry.
        let delta = rational(1, 1);
        let w = build_w(60, &delta).unwrap();
        let b = prescribe_spectrum(&[1.0, 0.25, 1.0 / 9.0], 60, &delta).unwrap();
        assert_eq!(b.bandwidth(), 4);
        for d in 0..=2usize {
            for i in 0..(60 - d) {
                let expect = w.bands()[d][i];
                let got = b.bands()[d][i];
                assert!(
                    (got - expect).abs() <= 1e-13 * expect.abs().max(1.0),
                    "band {d} entry {i}: {got} vs {expect}"
                );
            }
        }
        for d in 3..=4usize {
            for (i, entry) in b.bands()[d].iter().enumerate() {
                assert!(entry.abs() <= 1e-13, "band {d} entry {i} should vanish");
            }
        }
    }

    #[test]
    fn prescribe_custom_targets() {
        let report = prescribe_report(400, &rational(1, 1), &[1.0, 0.5, 1.0 / 3.0], 1e-6).unwrap();
        assert!(report.passed, "matched errors: {:?}", report.matched);
        // Unmatched spectrum stays below the smallest target.
        assert!(report.unmatched_max < 1.0 / 3.0);
    }

    #[test]
    fn prescribe_constant_targets() {
        // Equal targets interpolate to the constant, so f(W) = 5I exactly.
        let b = prescribe_spectrum(&[5.0, 5.0, 5.0], 30, &rational(1, 1)).unwrap();
        for d in 0..=b.bandwidth() {
            for (i, entry) in b.bands()[d].iter().enumerate() {
                let expect = if d == 0 { 5.0 } else { 0.0 };
                assert_eq!(*entry, expect, "band {d} entry {i}");
            }
        }
    }

    #[test]
    fn prescribe_input_validation() {
        let delta = rational(1, 1);
        assert!(matches!(
            prescribe_spectrum(&[1.0; 9], 400, &delta),
            Err(Error::Conditioning(_))
        ));
        assert!(matches!(
            prescribe_spectrum(&[1.0], 400, &delta),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            prescribe_spectrum(&[1.0, f64::NAN], 400, &delta),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            prescribe_spectrum(&[1.0, 0.5, 0.25, 0.125, 0.1], 8, &delta),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn banded_spectrum_one_by_one() {
        let b = BandedSymmetric::from_float_bands(vec![vec![3.5]], "single entry").unwrap();
        assert_eq!(banded_spectrum(&b, 1, 1, 1e-14).unwrap(), vec![3.5]);
    }

    #[test]
    fn scaled_w_plus_identity_recovers_v_squared() {
        // delta^2 W + I = V^2; its largest eigenvalues are the squares of
        // the most negative V eigenvalues.
        let delta = rational(1, 1);
        let size = 300;
        let w = build_w(size, &delta).unwrap();
        let mut bands = w.exact_bands();
        let d2 = &delta * &delta;
        exact_scale(&mut bands, &d2);
        exact_add_scaled_identity(&mut bands, &Rational::one());
        let v2 = BandedSymmetric::from_exact(bands, size, "delta^2 W + I".to_string());

        let mut top = banded_spectrum(&v2, size - 2, size, 1e-12).unwrap();
        top.reverse();
        let v_matrix = build_v(size, &delta).unwrap();
        let v_eigs = eigenvalues_bisection(&v_matrix, 1, 3, 1e-13).unwrap();
        for (sq, mu) in top.iter().zip(&v_eigs) {
            assert!(
                (sq - mu * mu).abs() < 1e-9,
                "V^2 eigenvalue {sq} vs squared {}",
                mu * mu
            );
        }
    }

    #[test]
    fn matched_eigenvalues_are_simple() {
        // Gaps between the matched 1/n^2 eigenvalues dwarf the certified
        // bracket width.
        let report = power_report(400, &rational(1, 1), 1, 3, 1e-8).unwrap();
        let values: Vec<f64> = report.matched.iter().map(|m| m.computed).collect();
        let bracket = 1e-12;
        for pair in values.windows(2) {
            assert!((pair[0] - pair[1]).abs() > 10.0 * bracket);
        }
    }
}
