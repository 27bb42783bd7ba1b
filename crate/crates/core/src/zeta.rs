//! Zeta evaluation in the strip at desk heights.
//!
//! Euler-Maclaurin with cutoff near max(10, |t|) and Bernoulli corrections
//! whose tail bound is monitored against the requested accuracy; the cutoff
//! doubles when the correction series stalls. For Re s >= 6 the Dirichlet
//! series alone is cheaper and is used directly.

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::types::{ComplexValue, EvalPrecision};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// B_{2j} for j = 1..=30.
const BERN2J: [f64; 30] = [
    0.16666666666666666,
    -0.033333333333333333,
    0.023809523809523810,
    -0.033333333333333333,
    0.075757575757575758,
    -0.25311355311355311,
    1.1666666666666667,
    -7.0921568627450980,
    54.971177944862155,
    -529.12424242424242,
    6192.1231884057971,
    -86580.253113553114,
    1425517.1666666667,
    -27298231.067816092,
    601580873.90064237,
    -15116315767.092157,
    429614643061.16667,
    -13711655205088.333,
    488332318973593.17,
    -19296579341940068.0,
    8.4169304757368262e17,
    -4.0338071854059455e19,
    2.1150748638081992e21,
    -1.2086626522296526e23,
    7.5008667460769644e24,
    -5.0387781014810689e26,
    3.6528776484818123e28,
    -2.8498769302450882e30,
    2.3865427499683628e32,
    -2.1399949257225334e34,
];

fn pow_neg(k: f64, s: Complex64) -> Complex64 {
    // k^{-s} for k > 0
    let lk = k.ln();
    let r = (-s.re * lk).exp();
    let (si, co) = (s.im * lk).sin_cos();
    Complex64::new(r * co, -r * si)
}

/// Zeta by Euler-Maclaurin (or plain series for Re s >= 6).
pub fn zeta(s: Complex64, prec: &EvalPrecision) -> Result<ComplexValue> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::PoleAtOne);
    }
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.re >= 6.0 {
        return Ok(zeta_series(s, prec));
    }
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "Re s = {} not supported; evaluation covers the strip right of 0",
            s.re
        )));
    }

    let target = prec.target_abs_err.max(1e-15);
    let mut n = (s.im.abs().ceil() as usize).max(10);
    loop {
        if n > prec.max_terms {
            return Err(Error::PrecisionUnreachable(format!(
                "euler-maclaurin cutoff {n} exceeds max_terms {}",
                prec.max_terms
            )));
        }
        if let Some(v) = em_attempt(s, n, target) {
            return Ok(v);
        }
        n *= 2;
    }
}

fn em_attempt(s: Complex64, n: usize, target: f64) -> Option<ComplexValue> {
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_abs = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let v = pow_neg(kf, s);
        sum += v;
        sum_abs += v.norm();
    }
    let npow = pow_neg(nf, s); // N^{-s}
    sum += npow * nf / (s - 1.0); // N^{1-s}/(s-1)
    sum += npow * 0.5;
    sum_abs += (npow * nf / (s - 1.0)).norm() + 0.5 * npow.norm();

    let mut run = s; // product (s)(s+1)...(s+2j-2)
    let mut np = npow / nf; // N^{-s-(2j-1)}
    let mut fact = 2.0; // (2j)!
    let mut prev_mag = f64::INFINITY;
    let n2 = nf * nf;
    for j in 1..=BERN2J.len() {
        let term = run * np * (BERN2J[j - 1] / fact);
        let mag = term.norm();
        if mag > prev_mag && j > 3 {
            return None; // correction series stalled; caller enlarges the cutoff
        }
        // error after stopping before this term, standard first-omitted-term bound
        let x = 2.0 * j as f64 - 1.0;
        let bound = mag * (s + x).norm() / (s.re + x);
        if bound <= 0.4 * target {
            let rounding = 2.3e-16 * (sum_abs + 1.0);
            return Some(ComplexValue::from_complex(sum, bound + rounding));
        }
        sum += term;
        prev_mag = mag;
        run *= (s + (2.0 * j as f64 - 1.0)) * (s + (2.0 * j as f64));
        np /= n2;
        let jj = 2.0 * j as f64;
        fact *= (jj + 1.0) * (jj + 2.0);
    }
    None
}

fn zeta_series(s: Complex64, prec: &EvalPrecision) -> ComplexValue {
    let target = prec.target_abs_err.max(1e-15);
    let mut sum = Complex64::new(1.0, 0.0);
    let mut k = 2.0f64;
    loop {
        sum += pow_neg(k, s);
        // remaining tail below integral bound
        let tail = (k - 0.5).powf(1.0 - s.re) / (s.re - 1.0);
        if tail < 0.5 * target || k > 1e6 {
            return ComplexValue::from_complex(sum, tail + 1e-16);
        }
        k += 1.0;
    }
}

/// Zeta for real u (u > 0, u != 1).
pub fn zeta_real(u: f64, prec: &EvalPrecision) -> Result<f64> {
    Ok(zeta(Complex64::new(u, 0.0), prec)?.re)
}

fn small_prime_table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::new(4096))
}

/// log zeta by its prime-power series; requires Re s >= 5 so the tail bound
/// closes quickly. The result is the analytic branch reached from large Re.
pub fn log_zeta_dirichlet(s: Complex64, prec: &EvalPrecision) -> ComplexValue {
    debug_assert!(s.re >= 5.0);
    let target = prec.target_abs_err.max(1e-15);
    let sigma = s.re;
    // tail over prime powers above m is below 3 m^{1-sigma}/(sigma-1)
    let m_cut = (3.0 / ((sigma - 1.0) * target)).powf(1.0 / (sigma - 1.0));
    let m_cut = (m_cut as u64).clamp(16, 4096);
    let mut sum = Complex64::new(0.0, 0.0);
    for &p in small_prime_table().primes() {
        if p > m_cut {
            break;
        }
        let mut pk = p;
        let mut k = 1.0;
        loop {
            sum += pow_neg(pk as f64, s) / k;
            if pk > m_cut / p {
                break;
            }
            pk *= p;
            k += 1.0;
        }
    }
    let tail = 3.0 * (m_cut as f64).powf(1.0 - sigma) / (sigma - 1.0);
    ComplexValue::from_complex(sum, tail)
}

/// Riemann-Siegel theta by its asymptotic series; good to ~1e-9 for t >= 10.
pub fn theta_siegel(t: f64) -> f64 {
    let a = t / 2.0;
    a * (t / (2.0 * PI)).ln() - a - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
        + 127.0 / (430080.0 * t.powi(7))
}

/// Rotated zeta on the critical line: real-valued, changes sign at the zeros.
pub fn hardy_z(t: f64, prec: &EvalPrecision) -> Result<f64> {
    let z = zeta(Complex64::new(0.5, t), prec)?;
    let th = theta_siegel(t);
    let (si, co) = th.sin_cos();
    Ok(co * z.re - si * z.im)
}
