//! Envelope shape functions and the C-constants that scale them.
//!
//! These are the theoretical comparison quantities: the H series, the odd and
//! even C-constants built from it, and the constant-free envelopes
//! log t/(log log t)^{n+1} (critical line) and
//! (log t)^{2-2sigma}/(log log t)^{n+1} (inside the strip). Fitted constants
//! are reported by callers, never asserted here.

use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::types::EvalPrecision;
use crate::zeta::zeta_real;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EnvelopeKind {
    Littlewood,
    Strip,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnvelopeValue {
    pub kind: EnvelopeKind,
    pub n: u32,
    pub sigma: f64,
    pub t: f64,
    pub value: f64,
}

fn gamma_int(m: u32) -> f64 {
    (1..m as u64).map(|k| k as f64).product()
}

fn eta_real(m: u32) -> f64 {
    let p = EvalPrecision {
        target_abs_err: 1e-14,
        max_terms: 4_000_000,
    };
    (1.0 - 2.0f64.powi(1 - m as i32)) * zeta_real(m as f64, &p).expect("m >= 2")
}

/// H_m(x) = sum_{k>=0} x^k/(k+1)^m for m >= 2, |x| <= 1.
pub fn h_series(m: u32, x: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("H_m needs m >= 2, got {m}")));
    }
    if !(x.is_finite() && x.abs() <= 1.0) {
        return Err(Error::Domain(format!("H_m needs |x| <= 1, got {x}")));
    }
    if x == 1.0 {
        let p = EvalPrecision {
            target_abs_err: 1e-14,
            max_terms: 4_000_000,
        };
        return zeta_real(m as f64, &p);
    }
    if x == -1.0 {
        return Ok(eta_real(m));
    }
    if x.abs() <= 0.999 {
        let mut sum = 0.0;
        let mut xk = 1.0;
        for k in 0u64.. {
            let term = xk / ((k + 1) as f64).powi(m as i32);
            sum += term;
            xk *= x;
            // geometric tail bound
            if xk.abs() / (((k + 2) as f64).powi(m as i32) * (1.0 - x.abs())) < 1e-13 {
                break;
            }
        }
        return Ok(sum);
    }
    // near the endpoint the series crawls; use the Mellin-type integral
    // H_m(x) = (1/(m-1)!) int_0^inf w^{m-1} e^{-w} / (1 - x e^{-w}) dw
    let q = integrate(
        |w| w.powi(m as i32 - 1) * (-w).exp() / (1.0 - x * (-w).exp()),
        0.0,
        80.0,
        &[1.0, 10.0],
        1e-13 * gamma_int(m),
        2000,
    );
    Ok(q.value / gamma_int(m))
}

fn second_term(sigma: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&sigma) {
        return Err(Error::Domain(format!(
            "C-constants need 1/2 <= sigma < 1, got {sigma}"
        )));
    }
    Ok((2.0 * sigma - 1.0) / (sigma * (1.0 - sigma)))
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 16.0) {
        return Err(Error::Domain(format!("C-constants need t >= 16, got {t}")));
    }
    Ok(())
}

/// C^{sign}_{n,sigma}(t) for odd n:
/// (1/(2^{n+1} pi)) (H_{n+1}(sign (-1)^{(n+1)/2} (log t)^{1-2 sigma}) + (2 sigma - 1)/(sigma (1 - sigma))).
pub fn c_odd(n: u32, sigma: f64, t: f64, sign: i8) -> Result<f64> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("c_odd needs odd n, got {n}")));
    }
    if !(sign == 1 || sign == -1) {
        return Err(Error::Domain(format!("sign must be +1 or -1, got {sign}")));
    }
    check_t(t)?;
    let st = second_term(sigma)?;
    let parity = if ((n + 1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
    let x = sign as f64 * parity * t.ln().powf(1.0 - 2.0 * sigma);
    let h = h_series(n + 1, x)?;
    Ok((h + st) / (2.0f64.powi(n as i32 + 1) * PI))
}

/// C_{n,sigma}(t) for even n >= 2:
/// sqrt(2 (C+_{n+1} + C-_{n+1}) C+_{n-1} C-_{n-1} / (C+_{n-1} + C-_{n-1})).
/// Both signs coincide, so the sign parameter is accepted and ignored.
pub fn c_even(n: u32, sigma: f64, t: f64, _sign: i8) -> Result<f64> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::Domain(format!("c_even needs even n >= 2, got {n}")));
    }
    let up_p = c_odd(n + 1, sigma, t, 1)?;
    let up_m = c_odd(n + 1, sigma, t, -1)?;
    let lo_p = c_odd(n - 1, sigma, t, 1)?;
    let lo_m = c_odd(n - 1, sigma, t, -1)?;
    Ok((2.0 * (up_p + up_m) * lo_p * lo_m / (lo_p + lo_m)).sqrt())
}

/// C_{-1,sigma}(t) = (1/pi)(1/(1 + (log t)^{1-2 sigma}) + (2 sigma - 1)/(sigma(1 - sigma))).
pub fn c_minus1(sigma: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    let st = second_term(sigma)?;
    Ok((1.0 / (1.0 + t.ln().powf(1.0 - 2.0 * sigma)) + st) / PI)
}

/// The n = 0 combination, sqrt(2 (C+_1 + C-_1) C_{-1,sigma}).
pub fn c_zero(sigma: f64, t: f64) -> Result<f64> {
    let p = c_odd(1, sigma, t, 1)?;
    let m = c_odd(1, sigma, t, -1)?;
    Ok((2.0 * (p + m) * c_minus1(sigma, t)?).sqrt())
}

/// log t / (log log t)^{n+1}, the critical-line envelope shape.
fn check_envelope_t(t: f64) -> Result<()> {
    if !(t > std::f64::consts::E) {
        return Err(Error::Domain(format!(
            "envelopes need ln ln t > 0, so t > e, got {t}"
        )));
    }
    Ok(())
}

pub fn envelope_littlewood(n: u32, t: f64) -> Result<EnvelopeValue> {
    check_envelope_t(t)?;
    let value = t.ln() / t.ln().ln().powi(n as i32 + 1);
    Ok(EnvelopeValue {
        kind: EnvelopeKind::Littlewood,
        n,
        sigma: 0.5,
        t,
        value,
    })
}

/// (log t)^{2-2 sigma} / (log log t)^{n+1}, the in-strip envelope shape.
pub fn envelope_strip(n: u32, sigma: f64, t: f64) -> Result<EnvelopeValue> {
    check_envelope_t(t)?;
    let value = t.ln().powf(2.0 - 2.0 * sigma) / t.ln().ln().powi(n as i32 + 1);
    Ok(EnvelopeValue {
        kind: EnvelopeKind::Strip,
        n,
        sigma,
        t,
        value,
    })
}
