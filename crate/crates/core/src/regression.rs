//! Per-topic interaction OLS: adjusted mentions on a post-period dummy, a
//! cohort dummy, and their product, with classical standard errors.
//!
//! The fit runs through a Householder QR decomposition of the n x 4 design
//! matrix rather than the normal equations. Two-tailed p-values come from
//! the Student t distribution via the regularized incomplete beta function
//! (continued-fraction evaluation).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::month::Month;
use crate::topics::TopicSeries;
use crate::{Error, Result};

const N_COEF: usize = 4;
pub const MIN_ROWS: usize = 5;

/// Display labels for the four coefficients, in report order.
pub const TERM_LABELS: [&str; 4] = [
    "Post-covid",
    "> 0.5 vote share",
    "Post-covid & > 0.5 vote share",
    "Constant",
];

/// Machine-readable term names, in the same order as [`TERM_LABELS`].
pub const TERM_NAMES: [&str; 4] = ["post_covid", "red_state", "interaction", "const"];

/// One (month, cohort) observation.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignRow {
    pub month: Month,
    pub y: f64,
    pub post_covid: u8,
    pub red_state: u8,
    pub interaction: u8,
}

impl DesignRow {
    pub fn new(month: Month, y: f64, post_covid: bool, red_state: bool) -> Self {
        DesignRow {
            month,
            y,
            post_covid: post_covid as u8,
            red_state: red_state as u8,
            interaction: (post_covid && red_state) as u8,
        }
    }
}

/// Stack the red and blue series of one topic into design rows. Months at
/// or after `covid_cutoff` get `post_covid = 1`.
pub fn build_design(
    series_red: &TopicSeries,
    series_blue: &TopicSeries,
    covid_cutoff: Month,
) -> Result<Vec<DesignRow>> {
    for series in [series_red, series_blue] {
        if series.points.is_empty() {
            return Err(Error::EmptySeries(series.topic.clone()));
        }
    }
    let mut rows = Vec::with_capacity(series_blue.points.len() + series_red.points.len());
    for (series, red) in [(series_blue, false), (series_red, true)] {
        for (&month, &y) in &series.points {
            rows.push(DesignRow::new(month, y, month >= covid_cutoff, red));
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OlsResult {
    /// Intercept, post_covid, red_state, interaction.
    pub coefficients: [f64; 4],
    pub standard_errors: [f64; 4],
    pub t_stats: [f64; 4],
    pub p_values: [f64; 4],
    pub stars: [String; 4],
    pub rss: f64,
    pub n: usize,
    pub df: usize,
}

pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Fit y = b0 + b1*post + b2*red + b3*post*red by least squares.
pub fn ols_fit(rows: &[DesignRow]) -> Result<OlsResult> {
    let n = rows.len();
    if n < MIN_ROWS {
        return Err(Error::TooFewRows { got: n, min: MIN_ROWS });
    }
    let x: Vec<[f64; N_COEF]> = rows
        .iter()
        .map(|r| {
            [
                1.0,
                r.post_covid as f64,
                r.red_state as f64,
                r.interaction as f64,
            ]
        })
        .collect();
    let y: Vec<f64> = rows.iter().map(|r| r.y).collect();

    let (coefficients, xtx_inv_diag) = qr_solve(&x, &y)?;

    let rss: f64 = x
        .iter()
        .zip(&y)
        .map(|(row, &yi)| {
            let fitted: f64 = row.iter().zip(&coefficients).map(|(a, b)| a * b).sum();
            (yi - fitted).powi(2)
        })
        .sum();
    let df = n - N_COEF;
    let sigma2 = rss / df as f64;

    let mut standard_errors = [0.0; N_COEF];
    let mut t_stats = [0.0; N_COEF];
    let mut p_values = [0.0; N_COEF];
    let mut stars: [String; 4] = Default::default();
    for j in 0..N_COEF {
        standard_errors[j] = (xtx_inv_diag[j] * sigma2).sqrt();
        t_stats[j] = if standard_errors[j] > 0.0 {
            coefficients[j] / standard_errors[j]
        } else if coefficients[j] == 0.0 {
            0.0
        } else {
            coefficients[j].signum() * f64::INFINITY
        };
        p_values[j] = student_t_two_tailed_p(t_stats[j], df as f64);
        stars[j] = significance_stars(p_values[j]).to_string();
    }

    Ok(OlsResult {
        coefficients,
        standard_errors,
        t_stats,
        p_values,
        stars,
        rss,
        n,
        df,
    })
}

/// Householder QR of the n x 4 design; returns the solution and the
/// diagonal of (X'X)^-1 computed from R.
fn qr_solve(x: &[[f64; N_COEF]], y: &[f64]) -> Result<([f64; N_COEF], [f64; N_COEF])> {
    let n = x.len();
    let mut a: Vec<[f64; N_COEF]> = x.to_vec();
    let mut qty: Vec<f64> = y.to_vec();

    let scale: f64 = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);

    for k in 0..N_COEF {
        let norm2: f64 = (k..n).map(|i| a[i][k] * a[i][k]).sum();
        let norm = norm2.sqrt();
        if norm <= 1e-12 * scale * (n as f64).sqrt() {
            return Err(Error::RankDeficient);
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 > 0.0 {
            for j in k..N_COEF {
                let dot: f64 = (k..n).map(|i| v[i - k] * a[i][j]).sum();
                let w = 2.0 * dot / vnorm2;
                for i in k..n {
                    a[i][j] -= w * v[i - k];
                }
            }
            let dot: f64 = (k..n).map(|i| v[i - k] * qty[i]).sum();
            let w = 2.0 * dot / vnorm2;
            for i in k..n {
                qty[i] -= w * v[i - k];
            }
        }
        a[k][k] = alpha;
        for i in (k + 1)..n {
            a[i][k] = 0.0;
        }
    }

    for k in 0..N_COEF {
        if a[k][k].abs() <= 1e-10 * scale * (n as f64).sqrt() {
            return Err(Error::RankDeficient);
        }
    }

    // back-substitute R b = Q'y
    let mut beta = [0.0; N_COEF];
    for j in (0..N_COEF).rev() {
        let mut acc = qty[j];
        for k in (j + 1)..N_COEF {
            acc -= a[j][k] * beta[k];
        }
        beta[j] = acc / a[j][j];
    }

    // R^-1 by back-substitution per unit vector; (X'X)^-1 = R^-1 R^-T, so
    // its diagonal is the squared row norm of R^-1.
    let mut rinv = [[0.0; N_COEF]; N_COEF];
    for col in 0..N_COEF {
        let mut e = [0.0; N_COEF];
        e[col] = 1.0;
        for j in (0..N_COEF).rev() {
            let mut acc = e[j];
            for k in (j + 1)..N_COEF {
                acc -= a[j][k] * rinv[k][col];
            }
            rinv[j][col] = acc / a[j][j];
        }
    }
    let mut diag = [0.0; N_COEF];
    for (j, row) in rinv.iter().enumerate() {
        diag[j] = row.iter().map(|v| v * v).sum();
    }

    Ok((beta, diag))
}

/// Two-tailed p-value for a t statistic with `df` degrees of freedom:
/// `P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2)`.
pub fn student_t_two_tailed_p(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    if t.is_infinite() {
        return 0.0;
    }
    incomplete_beta_reg(df / (df + t * t), df / 2.0, 0.5)
}

/// Regularized incomplete beta function I_x(a, b) via the Lentz continued
/// fraction, accurate to well below 1e-10. The fraction converges fast for
/// x below the crossover point; above it, evaluate the mirrored fraction
/// and use I_x(a, b) = 1 - I_{1-x}(b, a).
pub fn incomplete_beta_reg(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let bt = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln())
        .exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * beta_cf(x, a, b) / a
    } else {
        1.0 - bt * beta_cf(1.0 - x, b, a) / b
    }
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Lanczos approximation of ln Gamma, g = 7, n = 9.
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub topic: String,
    pub term: String,
    pub coef: f64,
    pub se: f64,
    pub t: f64,
    pub p: f64,
    pub stars: String,
}

/// Flatten per-topic results into machine-readable rows, four per topic.
pub fn report_rows(results: &BTreeMap<String, OlsResult>) -> Vec<ReportRow> {
    // display order: post_covid, red_state, interaction, constant
    const ORDER: [usize; 4] = [1, 2, 3, 0];
    let mut rows = Vec::new();
    for (topic, result) in results {
        for (slot, &coef_idx) in ORDER.iter().enumerate() {
            rows.push(ReportRow {
                topic: topic.clone(),
                term: TERM_NAMES[slot].to_string(),
                coef: result.coefficients[coef_idx],
                se: result.standard_errors[coef_idx],
                t: result.t_stats[coef_idx],
                p: result.p_values[coef_idx],
                stars: result.stars[coef_idx].clone(),
            });
        }
    }
    rows
}

/// Four significant digits, plain decimal notation.
fn sig4(v: f64) -> String {
    if v == 0.0 {
        return "0.000".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

const LABEL_WIDTH: usize = 30;
const COL_WIDTH: usize = 18;

/// Render the coefficient table: one column per topic, four coefficient
/// rows each followed by its standard error in parentheses, significance
/// stars appended to coefficients, and the usual footer.
pub fn report_table(results: &BTreeMap<String, OlsResult>) -> String {
    const ORDER: [usize; 4] = [1, 2, 3, 0];
    let mut out = String::new();
    write!(out, "{:LABEL_WIDTH$}", "").unwrap();
    for topic in results.keys() {
        write!(out, "{topic:>COL_WIDTH$}").unwrap();
    }
    out.push('\n');

    for (slot, &coef_idx) in ORDER.iter().enumerate() {
        write!(out, "{:<LABEL_WIDTH$}", TERM_LABELS[slot]).unwrap();
        for result in results.values() {
            let cell = format!(
                "{}{}",
                sig4(result.coefficients[coef_idx]),
                result.stars[coef_idx]
            );
            write!(out, "{cell:>COL_WIDTH$}").unwrap();
        }
        out.push('\n');
        write!(out, "{:<LABEL_WIDTH$}", "").unwrap();
        for result in results.values() {
            let cell = format!("({})", sig4(result.standard_errors[coef_idx]));
            write!(out, "{cell:>COL_WIDTH$}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("Standard errors in parentheses\n");
    out.push_str("* p<0.05, ** p<0.01, *** p<0.001\n");
    out
}
