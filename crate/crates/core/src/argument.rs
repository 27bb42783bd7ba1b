//! The argument functions S_n(sigma, t) and their additive constants.
//!
//! S(sigma, t) is (1/pi) arg zeta continued along 2 -> 2+it -> sigma+it with
//! arg zeta(2) = 0; at a jump (t equal to an ordinate, or t = 0 for even n)
//! the symmetric midpoint value is returned. S_n for n >= 1 comes either from
//! the weighted log-zeta integral over [sigma, infinity) or from integrating
//! S_{n-1} in t and adding the constant term; both routes are exposed so they
//! can check each other.

use crate::branch::LogZetaPath;
use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::types::EvalPrecision;
use crate::zeros::zeros_up_to;
use crate::zeta;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const SIGMA_LO: f64 = 0.4;
pub const SIGMA_HI: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SnMethod {
    /// branch-tracked arg zeta at the endpoint (n = 0)
    Branch,
    /// weighted integral of log zeta over [sigma, infinity)
    IntegralRep,
    /// integral of S_{n-1} in t plus the constant term
    Recursive,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SnEvaluation {
    pub n: u32,
    pub sigma: f64,
    pub t: f64,
    pub value: f64,
    pub err_est: f64,
    pub method: SnMethod,
}

#[derive(Clone, Copy, Debug)]
pub struct SnOptions {
    pub prec: EvalPrecision,
    /// absolute tolerance handed to the outer quadratures
    pub quad_tol: f64,
    /// seed t-quadratures with panel edges at the ordinates
    pub split_at_zeros: bool,
}

impl Default for SnOptions {
    fn default() -> Self {
        Self {
            prec: EvalPrecision::default(),
            quad_tol: 1e-9,
            split_at_zeros: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeltaRoute {
    ClosedForm,
    Quadrature,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DeltaConstant {
    pub n: u32,
    pub sigma: f64,
    pub value: f64,
    pub err_est: f64,
    pub route: DeltaRoute,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(SIGMA_LO..=SIGMA_HI).contains(&sigma) {
        return Err(Error::Domain(format!(
            "sigma = {sigma} outside [{SIGMA_LO}, {SIGMA_HI}]"
        )));
    }
    Ok(())
}

fn factorial(n: u32) -> f64 {
    (1..=n as u64).map(|k| k as f64).product()
}

/// S(sigma, t). Midpoint value at jumps: 0 at t = 0, the average of the
/// one-sided limits when t sits on an ordinate.
pub fn s_value(sigma: f64, t: f64, opts: &SnOptions) -> Result<SnEvaluation> {
    check_sigma(sigma)?;
    let mk = |value: f64, err_est: f64| SnEvaluation {
        n: 0,
        sigma,
        t,
        value,
        err_est,
        method: SnMethod::Branch,
    };
    if t == 0.0 {
        return Ok(mk(0.0, 0.0));
    }
    if t < 0.0 {
        let pos = s_value(sigma, -t, opts)?;
        return Ok(mk(-pos.value, pos.err_est));
    }
    match LogZetaPath::build(sigma, t, &opts.prec).and_then(|p| p.endpoint_log()) {
        Ok(w) => Ok(mk(w.im / PI, opts.prec.target_abs_err / PI + 1e-14)),
        Err(Error::OnZero { .. }) => {
            // straddle the jump and average the limits
            let eps = 1e-7;
            let lo = s_value(sigma, t - eps, opts)?;
            let hi = s_value(sigma, t + eps, opts)?;
            Ok(mk(
                0.5 * (lo.value + hi.value),
                lo.err_est + hi.err_est + 2.0 * eps,
            ))
        }
        Err(e) => Err(e),
    }
}

/// Tail of the weighted log-zeta integral beyond u0, from |log zeta(u+it)|
/// <= 2^{1-u} valid for u >= 3: exact integral of (u-sigma)^m 2^{1-u}.
fn log_zeta_tail_bound(m: u32, sigma: f64, u0: f64) -> f64 {
    debug_assert!(u0 >= 3.0);
    let lam = std::f64::consts::LN_2;
    let mut sum = 0.0;
    let mut coef = 1.0; // m!/(m-i)!
    for i in 0..=m {
        sum += coef * (u0 - sigma).powi((m - i) as i32) / lam.powi(i as i32 + 1);
        coef *= (m - i) as f64;
    }
    2.0 * (-lam * u0).exp() * sum
}

/// The constant term: for even n a finite closed form, for odd n a weighted
/// integral of log |zeta| on the real axis.
pub fn delta_constant(n: u32, sigma: f64, opts: &SnOptions) -> Result<DeltaConstant> {
    check_sigma(sigma)?;
    if n == 0 {
        return Err(Error::Domain("constant term starts at n = 1".into()));
    }
    if n % 2 == 0 {
        let k = n / 2;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let value = sign * (1.0 - sigma).powi(n as i32) / factorial(n);
        return Ok(DeltaConstant {
            n,
            sigma,
            value,
            err_est: 1e-16,
            route: DeltaRoute::ClosedForm,
        });
    }
    let k = (n + 1) / 2;
    let m = n - 1; // weight power 2k-2
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let pref = sign / (PI * factorial(m));
    let mut u_hi = 30.0;
    while log_zeta_tail_bound(m, sigma, u_hi) > 0.1 * opts.quad_tol && u_hi < 120.0 {
        u_hi += 10.0;
    }
    let tail = log_zeta_tail_bound(m, sigma, u_hi);
    let mut bad: Option<Error> = None;
    let q = integrate(
        |u| {
            if bad.is_some() {
                return 0.0;
            }
            match zeta::zeta_real(u, &opts.prec) {
                // zeta is negative left of the pole, positive right of it
                Ok(z) => (u - sigma).powi(m as i32) * z.abs().ln(),
                Err(e) => {
                    bad = Some(e);
                    0.0
                }
            }
        },
        sigma,
        u_hi,
        &[1.0, 2.0, 4.0, 8.0],
        opts.quad_tol,
        4000,
    );
    if let Some(e) = bad {
        return Err(e);
    }
    let err_est = (q.err_est + tail) * pref.abs();
    if err_est > 1e-8 {
        return Err(Error::QuadratureFailure {
            requested: 1e-8,
            achieved: err_est,
        });
    }
    Ok(DeltaConstant {
        n,
        sigma,
        value: pref * q.value,
        err_est,
        route: DeltaRoute::Quadrature,
    })
}

/// S_n via the integral of (u-sigma)^{n-1} log zeta(u+it) over the ray.
pub fn s_n_integral(n: u32, sigma: f64, t: f64, opts: &SnOptions) -> Result<SnEvaluation> {
    if n == 0 {
        return s_value(sigma, t, opts);
    }
    check_sigma(sigma)?;
    let mk = |value: f64, err_est: f64| SnEvaluation {
        n,
        sigma,
        t,
        value,
        err_est,
        method: SnMethod::IntegralRep,
    };
    if t == 0.0 {
        // even n jumps across t = 0 (odd parity with a nonzero one-sided
        // limit); odd n is continuous there with value delta
        if n % 2 == 0 {
            return Ok(mk(0.0, 0.0));
        }
        let d = delta_constant(n, sigma, opts)?;
        return Ok(mk(d.value, d.err_est));
    }
    if t < 0.0 {
        let pos = s_n_integral(n, sigma, -t, opts)?;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        return Ok(mk(sign * pos.value, pos.err_est));
    }

    let m = n - 1;
    let mut u_hi = 30.0;
    while log_zeta_tail_bound(m, sigma, u_hi) > 0.1 * opts.quad_tol && u_hi < 120.0 {
        u_hi += 10.0;
    }
    let tail = log_zeta_tail_bound(m, sigma, u_hi);

    let path = if sigma < 2.0 {
        Some(LogZetaPath::build(sigma, t, &opts.prec)?)
    } else {
        None
    };
    let mut bad: Option<Error> = None;
    let q = integrate(
        |u| {
            if bad.is_some() {
                return Complex64::new(0.0, 0.0);
            }
            let w = if u < 2.0 {
                path.as_ref().expect("sigma < 2 whenever u < 2").log_zeta(u)
            } else if u < 6.0 {
                // principal log continues the branch for Re s >= 2
                zeta::zeta(Complex64::new(u, t), &opts.prec).map(|z| z.as_complex().ln())
            } else {
                Ok(zeta::log_zeta_dirichlet(Complex64::new(u, t), &opts.prec).as_complex())
            };
            match w {
                Ok(w) => w * (u - sigma).powi(m as i32),
                Err(e) => {
                    bad = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        sigma,
        u_hi,
        &[2.0, 6.0],
        opts.quad_tol * factorial(m) * PI,
        6000,
    );
    if let Some(e) = bad {
        return Err(e);
    }
    // i^n rotation picks out the component that survives
    let phase = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let scale = 1.0 / (PI * factorial(m));
    let value = (phase * q.value).im * scale;
    Ok(mk(value, (q.err_est + tail) * scale))
}

/// S_n as the t-integral of S_{n-1} plus the constant term.
pub fn s_n_recursive(n: u32, sigma: f64, t: f64, opts: &SnOptions) -> Result<SnEvaluation> {
    if n == 0 {
        return Err(Error::Domain("recursion starts at n = 1".into()));
    }
    check_sigma(sigma)?;
    let mk = |value: f64, err_est: f64| SnEvaluation {
        n,
        sigma,
        t,
        value,
        err_est,
        method: SnMethod::Recursive,
    };
    if t == 0.0 {
        if n % 2 == 0 {
            return Ok(mk(0.0, 0.0));
        }
        let d = delta_constant(n, sigma, opts)?;
        return Ok(mk(d.value, d.err_est));
    }
    if t < 0.0 {
        let pos = s_n_recursive(n, sigma, -t, opts)?;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        return Ok(mk(sign * pos.value, pos.err_est));
    }
    let d = delta_constant(n, sigma, opts)?;
    let breaks = if n == 1 && sigma <= 0.5 + 1e-9 && opts.split_at_zeros {
        zeros_up_to(t, &opts.prec)?
    } else {
        Vec::new()
    };
    let inner = SnOptions {
        quad_tol: opts.quad_tol * 0.1,
        ..*opts
    };
    let mut bad: Option<Error> = None;
    let q = integrate(
        |tau| {
            if bad.is_some() {
                return 0.0;
            }
            let r = if n == 1 {
                s_value(sigma, tau, &inner)
            } else {
                s_n_integral(n - 1, sigma, tau, &inner)
            };
            match r {
                Ok(v) => v.value,
                Err(e) => {
                    bad = Some(e);
                    0.0
                }
            }
        },
        0.0,
        t,
        &breaks,
        opts.quad_tol,
        4000,
    );
    if let Some(e) = bad {
        return Err(e);
    }
    Ok(mk(q.value + d.value, q.err_est + d.err_est))
}

/// Default route: branch tracking for n = 0, the ray integral for n >= 1.
pub fn s_n(n: u32, sigma: f64, t: f64, opts: &SnOptions) -> Result<SnEvaluation> {
    if n == 0 {
        s_value(sigma, t, opts)
    } else {
        s_n_integral(n, sigma, t, opts)
    }
}

/// Integral of |S_n(sigma, .)| over [0, t_cap], split at the ordinates and
/// evaluated segment-parallel.
pub fn moment_l1(n: u32, sigma: f64, t_cap: f64, opts: &SnOptions) -> Result<f64> {
    check_sigma(sigma)?;
    if !(t_cap.is_finite() && t_cap > 0.0) {
        return Err(Error::Domain(format!("t_cap = {t_cap} must be positive")));
    }
    let mut edges = vec![0.0];
    if opts.split_at_zeros {
        edges.extend(zeros_up_to(t_cap, &opts.prec)?);
    }
    if *edges.last().unwrap() < t_cap {
        edges.push(t_cap);
    }
    let parts: Vec<Result<f64>> = edges
        .par_windows(2)
        .map(|w| {
            let seg_tol = (opts.quad_tol * (w[1] - w[0]) / t_cap).max(1e-12);
            let mut bad: Option<Error> = None;
            let q = integrate(
                |tau| match s_n(n, sigma, tau, opts) {
                    Ok(v) => v.value.abs(),
                    Err(e) => {
                        bad = Some(e);
                        0.0
                    }
                },
                w[0],
                w[1],
                &[],
                seg_tol,
                600,
            );
            match bad {
                Some(e) => Err(e),
                None => Ok(q.value),
            }
        })
        .collect();
    let mut total = 0.0;
    for p in parts {
        total += p?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn opts() -> SnOptions {
        SnOptions::default()
    }

    // reference values from 40-digit branch-tracked evaluation
    #[test]
    fn s_reference_values() {
        let cases = [
            (0.5, 18.0, -0.025754694066557483),
            (0.6, 30.5, 0.023079080926899648),
            (0.51, 250.33, 0.15473602545224736),
        ];
        for (sigma, t, want) in cases {
            let got = s_value(sigma, t, &opts()).unwrap();
            assert_abs_diff_eq!(got.value, want, epsilon = 1e-9);
            assert_eq!(got.method, SnMethod::Branch);
        }
    }

    #[test]
    fn s_is_odd_with_zero_midpoint() {
        let a = s_value(0.75, 21.4, &opts()).unwrap();
        let b = s_value(0.75, -21.4, &opts()).unwrap();
        assert_abs_diff_eq!(a.value, -b.value, epsilon = 1e-12);
        assert_eq!(s_value(0.6, 0.0, &opts()).unwrap().value, 0.0);
    }

    #[test]
    fn s_on_ordinate_takes_midpoint() {
        let g = 14.134725141734694;
        let mid = s_value(0.5, g, &opts()).unwrap();
        let lo = s_value(0.5, g - 1e-5, &opts()).unwrap();
        let hi = s_value(0.5, g + 1e-5, &opts()).unwrap();
        assert_abs_diff_eq!(mid.value, 0.5 * (lo.value + hi.value), epsilon = 1e-4);
        // the jump is unit height
        assert_abs_diff_eq!(hi.value - lo.value, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn delta_even_closed_forms() {
        let d2 = delta_constant(2, 0.5, &opts()).unwrap();
        assert_eq!(d2.value, 0.125);
        assert_eq!(d2.route, DeltaRoute::ClosedForm);
        let d4 = delta_constant(4, 0.5, &opts()).unwrap();
        assert_abs_diff_eq!(d4.value, -1.0 / 384.0, epsilon = 1e-18);
        // vanishes at sigma = 1 for all even n
        assert_eq!(delta_constant(2, 1.0, &opts()).unwrap().value, 0.0);
    }

    // reference values from 40-digit quadrature of log |zeta| on the real axis
    #[test]
    fn delta_odd_reference_values() {
        let d1 = delta_constant(1, 0.5, &opts()).unwrap();
        assert_abs_diff_eq!(d1.value, 0.81735276857704056, epsilon = 1e-8);
        assert_eq!(d1.route, DeltaRoute::Quadrature);
        let d1b = delta_constant(1, 0.6, &opts()).unwrap();
        assert_abs_diff_eq!(d1b.value, 0.80080082944518753, epsilon = 1e-8);
        let d3 = delta_constant(3, 0.5, &opts()).unwrap();
        assert_abs_diff_eq!(d3.value, -0.95116800613834426, epsilon = 1e-8);
    }

    // reference values from 40-digit evaluation of the ray integral
    #[test]
    fn s1_reference_values() {
        let cases = [
            (0.5, 30.0, -0.21940983096750048),
            (0.6, 30.5, -0.38872402850171578),
            (0.5, 18.0, 0.38993328404848376),
        ];
        for (sigma, t, want) in cases {
            let got = s_n_integral(1, sigma, t, &opts()).unwrap();
            assert_abs_diff_eq!(got.value, want, epsilon = 5e-8);
        }
    }

    #[test]
    fn s2_against_trapezoid_reference() {
        // reference from dense trapezoid integration of S_1, good to ~1e-3
        let got = s_n_integral(2, 0.5, 30.0, &opts()).unwrap();
        assert_abs_diff_eq!(got.value, 0.56924773558222, epsilon = 2e-3);
    }

    #[test]
    fn integral_and_recursive_routes_agree() {
        for (n, sigma, t) in [(1, 0.5, 18.0), (2, 0.6, 25.0), (3, 0.5, 30.0)] {
            let a = s_n_integral(n, sigma, t, &opts()).unwrap();
            let b = s_n_recursive(n, sigma, t, &opts()).unwrap();
            assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-6);
        }
    }

    #[test]
    fn parity_alternates_with_n() {
        let o = opts();
        for n in 1..=4u32 {
            let plus = s_n(n, 0.6, 21.3, &o).unwrap().value;
            let minus = s_n(n, 0.6, -21.3, &o).unwrap().value;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(minus, sign * plus, epsilon = 1e-12);
        }
    }

    #[test]
    fn moment_positive_and_bounded() {
        let m = moment_l1(
            0,
            0.5,
            30.0,
            &SnOptions {
                quad_tol: 1e-6,
                ..opts()
            },
        )
        .unwrap();
        // |S| stays below 1 on (0, 30], so the moment sits inside (0, 30)
        assert!(m > 1.0 && m < 15.0, "moment = {m}");
    }

    #[test]
    fn sigma_domain_is_enforced() {
        assert!(s_value(0.2, 10.0, &opts()).is_err());
        assert!(s_value(2.5, 10.0, &opts()).is_err());
    }
}
