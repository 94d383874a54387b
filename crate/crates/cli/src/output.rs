//! Renderers for the CLI subcommands. Floats are always printed through
//! `fdhydro::textfmt::fmt_f64` (17 significant digits), so output for fixed
//! flags is byte-for-byte reproducible. Every numeric JSON field whose value
//! has an exact representation is accompanied by its exact string.

use fdhydro::closed_form::{self, ClosedFormSolution};
use fdhydro::error::Result;
use fdhydro::exactfield::{rational_str, Rational};
use fdhydro::laguerre;
use fdhydro::textfmt::{fmt_f64, json_escape, json_str_array};
use fdhydro::verify::{self, ResidualReport};
use fdhydro::{isospectral, spectra};

use crate::{Format, OutputOpts, Rendered};

const DIVERGENT_SERIES_WARNING: &str =
    "delta >= n: closed form exact, series-in-delta interpretation breaks down";

pub fn eigenvalue(n: u32, delta: &Rational, out: &OutputOpts) -> Result<Rendered> {
    let lambda = closed_form::eigenvalue(n, delta)?;
    let value = lambda.to_f64(out.precision_bits)?;
    let exact = lambda.to_canonical_string();
    let warn = delta >= &Rational::from_integer(n.into());
    let body = match out.format {
        Format::Json => {
            let warning = if warn {
                format!(",\"warning\":\"{}\"", json_escape(DIVERGENT_SERIES_WARNING))
            } else {
                String::new()
            };
            format!(
                "{{\"n\":{n},\"delta\":\"{}\",\"exact\":\"{}\",\"float\":{}{warning}}}\n",
                rational_str(delta),
                json_escape(&exact),
                fmt_f64(value)
            )
        }
        Format::Csv => format!("n,delta,exact,float\n{n},{},{exact},{}\n", rational_str(delta), fmt_f64(value)),
        Format::Text => {
            let mut s = format!(
                "eigenvalue(n={n}, delta={})\n  exact  = {exact}\n  float  = {}\n",
                rational_str(delta),
                fmt_f64(value)
            );
            if warn {
                s.push_str(&format!("  note   = {DIVERGENT_SERIES_WARNING}\n"));
            }
            s
        }
    };
    Ok(Rendered {
        body,
        all_passed: true,
    })
}

pub fn coeffs(n: u32, delta: &Rational, out: &OutputOpts) -> Result<Rendered> {
    let sol = ClosedFormSolution::new(n, delta.clone())?;
    let alphas = sol.alpha_factors();
    let bits = out.precision_bits;
    let body = match out.format {
        Format::Json => {
            let coeff_items: Result<Vec<String>> = sol
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    Ok(format!(
                        "{{\"k\":{},\"exact\":\"{}\",\"float\":{}}}",
                        i + 1,
                        json_escape(&c.to_canonical_string()),
                        fmt_f64(c.to_f64(bits)?)
                    ))
                })
                .collect();
            let alpha_items: Result<Vec<String>> = alphas
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    Ok(format!(
                        "{{\"k\":{},\"exact\":\"{}\",\"float\":{}}}",
                        i + 1,
                        json_escape(&a.to_canonical_string()),
                        fmt_f64(a.to_f64(bits)?)
                    ))
                })
                .collect();
            let warning = if sol.series_warning() {
                format!(",\"warning\":\"{}\"", json_escape(DIVERGENT_SERIES_WARNING))
            } else {
                String::new()
            };
            format!(
                "{{\"n\":{n},\"delta\":\"{}\",\"coefficients\":[{}],\"alpha\":[{}]{warning}}}\n",
                rational_str(delta),
                coeff_items?.join(","),
                alpha_items?.join(",")
            )
        }
        Format::Csv => {
            let mut s = String::from("k,coefficient_exact,coefficient_float,alpha_exact,alpha_float\n");
            for (i, (c, a)) in sol.coeffs().iter().zip(&alphas).enumerate() {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i + 1,
                    c.to_canonical_string(),
                    fmt_f64(c.to_f64(bits)?),
                    a.to_canonical_string(),
                    fmt_f64(a.to_f64(bits)?)
                ));
            }
            s
        }
        Format::Text => {
            let mut s = format!("coefficients(n={n}, delta={})\n", rational_str(delta));
            for (i, c) in sol.coeffs().iter().enumerate() {
                s.push_str(&format!("  c_{} = {}  ({})\n", i + 1, c, fmt_f64(c.to_f64(bits)?)));
            }
            for (i, a) in alphas.iter().enumerate() {
                s.push_str(&format!("  alpha_{} = {}  ({})\n", i + 1, a, fmt_f64(a.to_f64(bits)?)));
            }
            if sol.series_warning() {
                s.push_str(&format!("  note = {DIVERGENT_SERIES_WARNING}\n"));
            }
            s
        }
    };
    Ok(Rendered {
        body,
        all_passed: true,
    })
}

/// Default spacings for the embedded continuum-limit report.
fn default_limit_deltas() -> Vec<Rational> {
    vec![
        Rational::new(1.into(), 10.into()),
        Rational::new(1.into(), 20.into()),
        Rational::new(1.into(), 40.into()),
    ]
}

const DEFAULT_SAMPLES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

pub fn verify(n: u32, delta: &Rational, grid: u32, order: u32, out: &OutputOpts) -> Result<Rendered> {
    let sol = ClosedFormSolution::new(n, delta.clone())?;
    let exact = verify::exact_residual_identity(&sol);
    let matrix = verify::matrix_residual_exact(&sol, grid)?;
    let infinite = verify::infinite_order_residual(&sol, order, &DEFAULT_SAMPLES)?;
    let limit = verify::continuum_limit_order(n, &default_limit_deltas(), &DEFAULT_SAMPLES)?;
    let reports = [&exact, &matrix, &infinite, &limit];
    let all_passed = reports.iter().all(|r| r.passed);

    let body = match out.format {
        Format::Json => format!(
            "{{\"n\":{n},\"delta\":\"{}\",\"exact_identity\":{},\"matrix_exact\":{},\"infinite_order\":{},\"limit_order\":{},\"all_passed\":{all_passed}}}\n",
            rational_str(delta),
            exact.to_json(),
            matrix.to_json(),
            infinite.to_json(),
            limit.to_json()
        ),
        Format::Csv => {
            let mut s = String::from("kind,passed\n");
            for r in reports {
                s.push_str(&format!("{},{}\n", r.kind.name(), r.passed));
            }
            s
        }
        Format::Text => {
            let mut s = format!("verify(n={n}, delta={})\n", rational_str(delta));
            for r in reports {
                s.push_str(&format!(
                    "  {:<16} {}\n",
                    r.kind.name(),
                    if r.passed { "PASS" } else { "FAIL" }
                ));
            }
            s
        }
    };
    Ok(Rendered { body, all_passed })
}

pub fn spectrum(
    size: usize,
    delta: &Rational,
    states: usize,
    tol: f64,
    eigenvectors: bool,
    out: &OutputOpts,
) -> Result<Rendered> {
    let t = spectra::build_v(size, delta)?;
    let effective = spectra::effective_bisection_tol(&t, tol);
    if effective > tol {
        eprintln!("warning: tolerance {tol:e} clamped to {effective:e} (4 eps |T|)");
    }
    let report = spectra::spectrum_report(size, delta, states, tol, eigenvectors)?;
    let body = match out.format {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Csv => report.to_csv(),
        Format::Text => {
            let mut s = format!("spectrum(N={size}, delta={})\n", rational_str(delta));
            for i in 0..report.eigenvalues.len() {
                s.push_str(&format!(
                    "  k={:<3} computed {}  exact {}  |err| {}\n",
                    i + 1,
                    fmt_f64(report.eigenvalues[i]),
                    fmt_f64(report.exact_targets[i]),
                    fmt_f64(report.abs_errors[i])
                ));
            }
            if let Some(ve) = &report.eigenvector_errors {
                for (i, e) in ve.iter().enumerate() {
                    s.push_str(&format!("  eigenvector k={:<3} max deviation {}\n", i + 1, fmt_f64(*e)));
                }
            }
            s
        }
    };
    Ok(Rendered {
        body,
        all_passed: true,
    })
}

fn isospectral_rendered(report: &isospectral::IsospectralReport, out: &OutputOpts) -> Rendered {
    let body = match out.format {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Csv => {
            let mut s = String::from("target,computed,abs_error\n");
            for m in &report.matched {
                s.push_str(&format!(
                    "{},{},{}\n",
                    fmt_f64(m.target),
                    fmt_f64(m.computed),
                    fmt_f64(m.abs_error)
                ));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{}\n", report.construction);
            for m in &report.matched {
                s.push_str(&format!(
                    "  target {}  computed {}  |err| {}\n",
                    fmt_f64(m.target),
                    fmt_f64(m.computed),
                    fmt_f64(m.abs_error)
                ));
            }
            s.push_str(&format!(
                "  unmatched spectrum in [{}, {}]\n  {}\n",
                fmt_f64(report.unmatched_min),
                fmt_f64(report.unmatched_max),
                if report.passed { "PASS" } else { "FAIL" }
            ));
            s
        }
    };
    Rendered {
        body,
        all_passed: report.passed,
    }
}

pub fn isospectral_power(
    size: usize,
    delta: &Rational,
    k: u32,
    states: usize,
    tol: f64,
    out: &OutputOpts,
) -> Result<Rendered> {
    let report = isospectral::power_report(size, delta, k, states, tol)?;
    Ok(isospectral_rendered(&report, out))
}

pub fn isospectral_targets(
    size: usize,
    delta: &Rational,
    targets: &[f64],
    tol: f64,
    out: &OutputOpts,
) -> Result<Rendered> {
    let report = isospectral::prescribe_report(size, delta, targets, tol)?;
    Ok(isospectral_rendered(&report, out))
}

pub fn laguerre(n: u32, delta: Option<&Rational>, out: &OutputOpts) -> Result<Rendered> {
    let body = match delta {
        None => {
            let l = laguerre::laguerre_coeffs(n);
            let l1 = laguerre::assoc_laguerre1_coeffs(n);
            let reference = laguerre::continuum_reference_poly(n.max(1));
            let strings = |p: &laguerre::RationalPoly| -> Vec<String> {
                p.coeffs().iter().map(rational_str).collect()
            };
            match out.format {
                Format::Json => format!(
                    "{{\"n\":{n},\"laguerre\":{},\"assoc_laguerre1\":{},\"continuum_reference\":{}}}\n",
                    json_str_array(&strings(&l)),
                    json_str_array(&strings(&l1)),
                    json_str_array(&strings(&reference))
                ),
                Format::Csv => {
                    let mut s = String::from("power,laguerre,assoc_laguerre1,continuum_reference\n");
                    for k in 0..=reference.degree().unwrap_or(0) {
                        s.push_str(&format!(
                            "{k},{},{},{}\n",
                            rational_str(&l.coeff(k)),
                            rational_str(&l1.coeff(k)),
                            rational_str(&reference.coeff(k))
                        ));
                    }
                    s
                }
                Format::Text => format!(
                    "L_{n} = {}\nd/dx L_{} = {}\ncontinuum reference P_{} = {}\n",
                    strings(&l).join(", "),
                    n + 1,
                    strings(&l1).join(", "),
                    n.max(1),
                    strings(&reference).join(", ")
                ),
            }
        }
        Some(delta) => {
            let q = laguerre::discretised_assoc_laguerre(n, delta)?;
            let reference = laguerre::continuum_reference_over_z_f64(n);
            let bits = out.precision_bits;
            match out.format {
                Format::Json => {
                    let items: Result<Vec<String>> = q
                        .iter()
                        .enumerate()
                        .map(|(k, c)| {
                            Ok(format!(
                                "{{\"power\":{k},\"exact\":\"{}\",\"float\":{},\"continuum\":{}}}",
                                json_escape(&c.to_canonical_string()),
                                fmt_f64(c.to_f64(bits)?),
                                fmt_f64(reference[k])
                            ))
                        })
                        .collect();
                    format!(
                        "{{\"n\":{n},\"delta\":\"{}\",\"discretised\":[{}]}}\n",
                        rational_str(delta),
                        items?.join(",")
                    )
                }
                Format::Csv => {
                    let mut s = String::from("power,exact,float,continuum\n");
                    for (k, c) in q.iter().enumerate() {
                        s.push_str(&format!(
                            "{k},{},{},{}\n",
                            c.to_canonical_string(),
                            fmt_f64(c.to_f64(bits)?),
                            fmt_f64(reference[k])
                        ));
                    }
                    s
                }
                Format::Text => {
                    let mut s = format!(
                        "discretised associated Laguerre (n={n}, delta={})\n",
                        rational_str(delta)
                    );
                    for (k, c) in q.iter().enumerate() {
                        s.push_str(&format!(
                            "  z^{k}: {}  ({})  continuum {}\n",
                            c,
                            fmt_f64(c.to_f64(bits)?),
                            fmt_f64(reference[k])
                        ));
                    }
                    s
                }
            }
        }
    };
    Ok(Rendered {
        body,
        all_passed: true,
    })
}

pub fn limit(n: u32, deltas: &[Rational], samples: &[f64], out: &OutputOpts) -> Result<Rendered> {
    let report = verify::continuum_limit_order(n, deltas, samples)?;
    let body = match out.format {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Csv => limit_csv(&report),
        Format::Text => {
            let mut s = format!("continuum limit (n={n})\n");
            if let fdhydro::verify::ResidualData::LimitOrder {
                deltas,
                eigenvalue_errors,
                alpha_errors,
                solution_errors,
                ..
            } = &report.data
            {
                for (i, d) in deltas.iter().enumerate() {
                    s.push_str(&format!(
                        "  delta={:<8} eig_err {}  alpha_err {}  sol_err {}\n",
                        rational_str(d),
                        fmt_f64(eigenvalue_errors[i]),
                        fmt_f64(alpha_errors[i]),
                        fmt_f64(solution_errors[i])
                    ));
                }
            }
            s.push_str(if report.passed { "  PASS\n" } else { "  FAIL\n" });
            s
        }
    };
    Ok(Rendered {
        body,
        all_passed: report.passed,
    })
}

fn limit_csv(report: &ResidualReport) -> String {
    let mut s = String::from("delta,eigenvalue_error,alpha_error,solution_error\n");
    if let fdhydro::verify::ResidualData::LimitOrder {
        deltas,
        eigenvalue_errors,
        alpha_errors,
        solution_errors,
        ..
    } = &report.data
    {
        for (i, d) in deltas.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                rational_str(d),
                fmt_f64(eigenvalue_errors[i]),
                fmt_f64(alpha_errors[i]),
                fmt_f64(solution_errors[i])
            ));
        }
    }
    s
}
