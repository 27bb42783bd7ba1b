//! The six commands. Tabular output is CSV with a header row; nested
//! summaries are JSON. All grids are arithmetic in t and reductions keep a
//! fixed order, so identical configurations give byte-identical files.

use crate::cache::{CachedValue, EvalCache};
use crate::config::{Command, RunConfig};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;
use zal_core::{
    build_m_prime, build_params, check_cardinality, convolution_report, delta_constant,
    enumerate_m, envelope_littlewood, envelope_strip, gcd_sum_ratio, moment_l1, prime_sum_bracket,
    prime_window, r_eval, s_n_integral, s_n_recursive, s_value, sampled_summary, search_extreme,
    theta_siegel, weight_function, zeros_up_to, ConvolutionOptions, Error, KernelSpec,
    ResonatorSet, SnOptions,
};

pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::TooSmall(_) | Error::TooLarge(_) => 3,
            Error::PrecisionUnreachable(_) | Error::QuadratureFailure { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: 2,
            message: format!("io: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Failure {
        Failure {
            code: 2,
            message: format!("csv: {e}"),
        }
    }
}

fn open_out(config: &RunConfig) -> Result<Box<dyn Write>, Failure> {
    match &config.out {
        Some(path) => Ok(Box::new(std::io::BufWriter::new(std::fs::File::create(
            path,
        )?))),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn grid_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let cells = ((hi - lo) / step).floor() as i64;
    (0..=cells.max(0)).map(|k| lo + k as f64 * step).collect()
}

pub fn dispatch(config: &RunConfig) -> Result<(), Failure> {
    match config.command {
        Command::Eval => cmd_eval(config),
        Command::Scan => cmd_scan(config),
        Command::Resonator => cmd_resonator(config),
        Command::VerifyConvolution => cmd_verify_convolution(config),
        Command::Moments => cmd_moments(config),
        Command::BoundsTable => cmd_bounds_table(config),
    }
}

#[derive(Serialize)]
struct EvalRow {
    n: u32,
    sigma: f64,
    t: f64,
    sn_primary: f64,
    err_primary: f64,
    sn_check: f64,
    abs_diff: f64,
    delta: Option<f64>,
    envelope: Option<f64>,
}

/// Independent reference for S(1/2, t): the zero count against the smooth
/// ordinate count, N(t) = theta(t)/pi + 1 + S(t).
fn s_by_counting(t: f64, opts: &SnOptions) -> Result<f64, Error> {
    let at = t.abs();
    let count = zeros_up_to(at, &opts.prec)?.len() as f64;
    let s = count - theta_siegel(at) / PI - 1.0;
    Ok(if t < 0.0 { -s } else { s })
}

fn eval_point(n: u32, sigma: f64, t: f64, opts: &SnOptions) -> Result<(f64, f64, f64), Error> {
    if n == 0 {
        let primary = s_value(sigma, t, opts)?;
        let check = if (sigma - 0.5).abs() < 1e-12 && t.abs() >= 10.0 {
            s_by_counting(t, opts)?
        } else {
            let tight = SnOptions {
                prec: zal_core::EvalPrecision {
                    target_abs_err: 1e-12,
                    ..opts.prec
                },
                ..*opts
            };
            s_value(sigma, t, &tight)?.value
        };
        Ok((primary.value, primary.err_est, check))
    } else {
        let primary = s_n_integral(n, sigma, t, opts)?;
        let check = s_n_recursive(n, sigma, t, opts)?;
        Ok((primary.value, primary.err_est, check.value))
    }
}

fn cmd_eval(config: &RunConfig) -> Result<(), Failure> {
    let opts = SnOptions::default();
    let points = match config.t {
        Some(t) => vec![t],
        None => grid_points(config.t_lo, config.t_hi, config.step),
    };
    let mut cache = config.cache.clone().map(EvalCache::open);
    if let Some(c) = &cache {
        if c.skipped_rows > 0 {
            eprintln!("cache: skipped {} malformed rows", c.skipped_rows);
        }
    }
    let prec_key = opts.prec.target_abs_err;
    let mut rows = Vec::with_capacity(points.len());
    let mut fresh: Vec<(f64, CachedValue)> = Vec::new();
    let computed: Vec<Option<(f64, f64, f64)>> = points
        .par_iter()
        .map(|&t| {
            // cache lookups happen on the serial pass; recompute everything here
            eval_point(config.n, config.sigma, t, &opts).ok()
        })
        .collect();
    for (&t, slot) in points.iter().zip(computed) {
        let (primary, err, check) = match cache
            .as_ref()
            .and_then(|c| c.lookup("sn", config.n, config.sigma, t, prec_key))
        {
            Some(hit) => {
                let check = slot.map(|(_, _, c)| c).unwrap_or(hit.re);
                (hit.re, hit.err, check)
            }
            None => {
                let (p, e, c) =
                    slot.ok_or_else(|| Failure::from(eval_point_error(config, t, &opts)))?;
                fresh.push((
                    t,
                    CachedValue {
                        re: p,
                        im: 0.0,
                        err: e,
                    },
                ));
                (p, e, c)
            }
        };
        let delta = if config.n >= 1 {
            Some(delta_constant(config.n, config.sigma, &opts)?.value)
        } else {
            None
        };
        let envelope = if t > std::f64::consts::E {
            Some(if (config.sigma - 0.5).abs() < 1e-12 {
                envelope_littlewood(config.n, t)?.value
            } else {
                envelope_strip(config.n, config.sigma, t)?.value
            })
        } else {
            None
        };
        rows.push(EvalRow {
            n: config.n,
            sigma: config.sigma,
            t,
            sn_primary: primary,
            err_primary: err,
            sn_check: check,
            abs_diff: (primary - check).abs(),
            delta,
            envelope,
        });
    }
    if let Some(c) = &mut cache {
        for (t, v) in fresh {
            c.record("sn", config.n, config.sigma, t, prec_key, v);
        }
        c.flush()?;
    }
    let mut w = csv::Writer::from_writer(open_out(config)?);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Re-runs a failed point serially to surface its actual error.
fn eval_point_error(config: &RunConfig, t: f64, opts: &SnOptions) -> Error {
    match eval_point(config.n, config.sigma, t, opts) {
        Err(e) => e,
        Ok(_) => Error::PrecisionUnreachable("evaluation failed once but repeats clean".into()),
    }
}

#[derive(Serialize)]
struct VerifyRow {
    n: u32,
    sigma: f64,
    t: f64,
    l: f64,
    lhs: Option<f64>,
    rhs: Option<f64>,
    residual: Option<f64>,
    band: Option<f64>,
    v_term: Option<f64>,
    k_l1: Option<f64>,
    status: String,
}

fn verify_one(n: u32, sigma: f64, t: f64, m_cap: u64) -> Result<VerifyRow, Error> {
    if t == 0.0 || !(t.abs() > std::f64::consts::E) {
        return Ok(VerifyRow {
            n,
            sigma,
            t,
            l: f64::NAN,
            lhs: None,
            rhs: None,
            residual: None,
            band: None,
            v_term: None,
            k_l1: None,
            status: if t == 0.0 {
                "skipped: t≠0 required".into()
            } else {
                "skipped: need |t| > e for L = ln ln t".into()
            },
        });
    }
    let l = t.abs().ln().ln();
    let spec = KernelSpec::new(n, l)?;
    let opts = ConvolutionOptions {
        m_cap,
        ..Default::default()
    };
    let report = convolution_report(n, sigma, t, &spec, &opts)?;
    let band = 5.0 * (report.v_term + report.k_l1) * zal_core::RESIDUAL_BAND_RHO;
    Ok(VerifyRow {
        n,
        sigma,
        t,
        l,
        lhs: Some(report.lhs),
        rhs: Some(report.rhs),
        residual: Some(report.residual),
        band: Some(band),
        v_term: Some(report.v_term),
        k_l1: Some(report.k_l1),
        status: if report.residual <= band {
            "pass".into()
        } else {
            "fail".into()
        },
    })
}

fn cmd_verify_convolution(config: &RunConfig) -> Result<(), Failure> {
    let cases: Vec<(u32, f64, f64)> = match config.t {
        Some(t) => vec![(config.n, config.sigma, t)],
        None => {
            let sigmas = [0.5, 0.5 + 1.0 / 1000f64.ln().ln()];
            let mut v = Vec::new();
            for n in 0..=2u32 {
                for &sigma in &sigmas {
                    for t in [30.0, 100.0, 500.0] {
                        v.push((n, sigma, t));
                    }
                }
            }
            v
        }
    };
    let rows: Vec<VerifyRow> = cases
        .par_iter()
        .map(|&(n, sigma, t)| verify_one(n, sigma, t, config.m_cap))
        .collect::<Result<Vec<_>, Error>>()?;
    let all_pass = rows.iter().all(|r| r.status != "fail");
    let mut w = csv::Writer::from_writer(open_out(config)?);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    if all_pass {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: "residuals exceeded the error band".into(),
        })
    }
}

#[derive(Serialize)]
struct ResonatorChecks {
    cardinality_within: bool,
    sum_r2_le_4_sum_f2: bool,
    r_bounded_by_r0: bool,
}

#[derive(Serialize)]
struct ResonatorSummary {
    params: zal_core::ResonatorParams,
    window_lo: f64,
    window_hi: f64,
    primes: Vec<u64>,
    k_max: u32,
    member_count: u64,
    bin_count: u64,
    sum_f2: f64,
    sum_r2: f64,
    gcd_ratio: f64,
    implied_c: f64,
    brackets: Vec<zal_core::BracketReport>,
    checks: ResonatorChecks,
}

#[derive(Serialize)]
struct SampledResonatorSummary {
    params: zal_core::ResonatorParams,
    window_lo: f64,
    window_hi: f64,
    prime_count: u64,
    sampled: zal_core::SampledSummary,
    brackets: Vec<zal_core::BracketReport>,
}

fn resonator_stack(
    config: &RunConfig,
) -> Result<
    (
        zal_core::ResonatorParams,
        zal_core::PrimeWindow,
        zal_core::WeightFunction,
        ResonatorSet,
    ),
    Error,
> {
    let mut params = build_params(config.big_t, config.beta, config.sigma_mode)?;
    params.d = config.d;
    let window = prime_window(&params)?;
    let weights = weight_function(&params, &window)?;
    let members = enumerate_m(&params, &weights, &window)?;
    let set = build_m_prime(&members, &params);
    Ok((params, window, weights, set))
}

fn cmd_resonator(config: &RunConfig) -> Result<(), Failure> {
    let mut params = build_params(config.big_t, config.beta, config.sigma_mode)?;
    params.d = config.d;
    let window = prime_window(&params)?;
    let weights = weight_function(&params, &window)?;
    let brackets: Vec<_> = (1..=window.k_max)
        .map(|k| prime_sum_bracket(&params, &window, k))
        .collect();
    let mut out = open_out(config)?;
    match enumerate_m(&params, &weights, &window) {
        Ok(members) => {
            let set = build_m_prime(&members, &params);
            let cardinality = check_cardinality(&set, &params);
            let gcd = gcd_sum_ratio(&members, &weights, &params);
            let r0 = r_eval(&set, 0.0).norm();
            let r_bounded =
                (1..=1000).all(|k| r_eval(&set, 1.618 * k as f64).norm() <= r0 * (1.0 + 1e-12));
            let summary = ResonatorSummary {
                params,
                window_lo: window.lo,
                window_hi: window.hi,
                primes: window.primes.clone(),
                k_max: window.k_max,
                member_count: set.masks.len() as u64,
                bin_count: set.bins.len() as u64,
                sum_f2: set.sum_f2(),
                sum_r2: set.sum_r2(),
                gcd_ratio: gcd.ratio,
                implied_c: gcd.implied_c,
                brackets,
                checks: ResonatorChecks {
                    cardinality_within: cardinality.within && set.bins.len() <= set.masks.len(),
                    sum_r2_le_4_sum_f2: set.sum_r2() <= 4.0 * set.sum_f2() + 1e-12,
                    r_bounded_by_r0: r_bounded,
                },
            };
            serde_json::to_writer_pretty(&mut out, &summary).map_err(|e| Failure {
                code: 2,
                message: format!("json: {e}"),
            })?;
            writeln!(out)?;
            Ok(())
        }
        Err(Error::TooLarge(_)) => {
            let sampled = sampled_summary(&params, &weights, &window, 20_000, config.seed);
            let summary = SampledResonatorSummary {
                params,
                window_lo: window.lo,
                window_hi: window.hi,
                prime_count: window.primes.len() as u64,
                sampled,
                brackets,
            };
            serde_json::to_writer_pretty(&mut out, &summary).map_err(|e| Failure {
                code: 2,
                message: format!("json: {e}"),
            })?;
            writeln!(out)?;
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_scan(config: &RunConfig) -> Result<(), Failure> {
    let (params, _, _, set) = resonator_stack(config)?;
    let records = search_extreme(
        config.n.max(1),
        &params,
        &set,
        config.t_lo,
        config.t_hi,
        config.step,
        config.top_q,
    )?;
    let mut w = csv::Writer::from_writer(open_out(config)?);
    for record in records {
        w.serialize(record)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MomentSummary {
    n: u32,
    sigma: f64,
    t_cap: f64,
    value: f64,
    t_log_t: f64,
    ratio: f64,
    bounded: bool,
}

fn cmd_moments(config: &RunConfig) -> Result<(), Failure> {
    let t_cap = config.t.unwrap_or(1000.0);
    if !(t_cap > 1.0) {
        return Err(Failure::usage(format!("moments need t > 1, got {t_cap}")));
    }
    let value = moment_l1(config.n, config.sigma, t_cap, &SnOptions::default())?;
    let t_log_t = t_cap * t_cap.ln();
    let summary = MomentSummary {
        n: config.n,
        sigma: config.sigma,
        t_cap,
        value,
        t_log_t,
        ratio: value / t_log_t,
        bounded: value / t_log_t < 1.0,
    };
    let mut out = open_out(config)?;
    serde_json::to_writer_pretty(&mut out, &summary).map_err(|e| Failure {
        code: 2,
        message: format!("json: {e}"),
    })?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct BoundsRow {
    t: f64,
    sigma: f64,
    n: u32,
    c_plus: Option<f64>,
    c_minus: Option<f64>,
    c_even: Option<f64>,
    c_minus1: f64,
    c_zero: f64,
    envelope_littlewood: f64,
    envelope_strip: f64,
}

fn cmd_bounds_table(config: &RunConfig) -> Result<(), Failure> {
    if config.t_lo < 16.0 {
        return Err(Failure::usage(format!(
            "bound constants need t >= 16, got t-lo {}",
            config.t_lo
        )));
    }
    if !(0.5..1.0).contains(&config.sigma) {
        return Err(Failure::usage(format!(
            "bound constants need 1/2 <= sigma < 1, got {}",
            config.sigma
        )));
    }
    let n = config.n;
    let mut rows = Vec::new();
    for t in grid_points(config.t_lo, config.t_hi, config.step) {
        let (c_plus, c_minus, c_even) = if n % 2 == 1 {
            (
                Some(zal_core::c_odd(n, config.sigma, t, 1)?),
                Some(zal_core::c_odd(n, config.sigma, t, -1)?),
                None,
            )
        } else if n >= 2 {
            (None, None, Some(zal_core::c_even(n, config.sigma, t, 1)?))
        } else {
            (None, None, None)
        };
        rows.push(BoundsRow {
            t,
            sigma: config.sigma,
            n,
            c_plus,
            c_minus,
            c_even,
            c_minus1: zal_core::c_minus1(config.sigma, t)?,
            c_zero: zal_core::c_zero(config.sigma, t)?,
            envelope_littlewood: envelope_littlewood(n, t)?.value,
            envelope_strip: envelope_strip(n, config.sigma, t)?.value,
        });
    }
    let mut w = csv::Writer::from_writer(open_out(config)?);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
