//! Continuous branch of log zeta along 2 -> 2+it -> sigma+it.
//!
//! On the vertical piece Re zeta stays positive (|zeta(2+i tau) - 1| <=
//! pi^2/6 - 1), so the principal log already is the continued branch there.
//! Only the horizontal piece needs tracking: we march left from u = 2 with
//! adaptive halving, rejecting any step whose imaginary jump reaches pi/4
//! after unwinding, which keeps the winding count unambiguous.

use crate::error::{Error, Result};
use crate::types::EvalPrecision;
use crate::zeta;
use num_complex::Complex64;
use std::f64::consts::PI;

const STEP_INIT: f64 = 0.125;
const STEP_MIN: f64 = 1e-9;
const ZERO_TOL: f64 = 1e-8;

/// Anchored branch of log zeta(u + it) for u in [sigma_min, 2], fixed t.
pub struct LogZetaPath {
    t: f64,
    sigma_min: f64,
    prec: EvalPrecision,
    /// (u, log zeta(u+it)) ascending in u; last entry is u = 2
    anchors: Vec<(f64, Complex64)>,
    endpoint_zero: bool,
}

fn unwind(principal: Complex64, reference: Complex64) -> Complex64 {
    let k = ((reference.im - principal.im) / (2.0 * PI)).round();
    Complex64::new(principal.re, principal.im + 2.0 * PI * k)
}

impl LogZetaPath {
    pub fn build(sigma_min: f64, t: f64, prec: &EvalPrecision) -> Result<Self> {
        if !(sigma_min > 0.0 && sigma_min < 2.0) {
            return Err(Error::Domain(format!(
                "path endpoint sigma = {sigma_min} outside (0, 2)"
            )));
        }
        if t == 0.0 {
            return Err(Error::Domain(
                "path requires t != 0; use the real-axis formulas".into(),
            ));
        }
        let z2 = zeta::zeta(Complex64::new(2.0, t), prec)?.as_complex();
        // Re zeta >= 1 - (zeta(2)-1) > 0 on the vertical segment, so the
        // principal value here equals the branch continued from arg zeta(2) = 0
        let mut w = z2.ln();
        let mut anchors = vec![(2.0, w)];
        let mut u = 2.0;
        let mut h = STEP_INIT;
        let mut endpoint_zero = false;
        while u > sigma_min {
            let u_next = (u - h).max(sigma_min);
            let z = zeta::zeta(Complex64::new(u_next, t), prec)?.as_complex();
            if z.norm() < 1e-300 {
                return Err(Error::OnZero {
                    sigma: u_next,
                    t,
                    modulus: z.norm(),
                });
            }
            let cand = unwind(z.ln(), w);
            if (cand.im - w.im).abs() < PI / 4.0 {
                u = u_next;
                w = cand;
                anchors.push((u, w));
                h = (h * 2.0).min(STEP_INIT);
            } else if h > STEP_MIN {
                h *= 0.5;
            } else if z.norm() < ZERO_TOL {
                // argument swings through a zero sitting essentially on the path
                return Err(Error::OnZero {
                    sigma: u_next,
                    t,
                    modulus: z.norm(),
                });
            } else {
                return Err(Error::PrecisionUnreachable(format!(
                    "branch step below {STEP_MIN} at u = {u_next}, t = {t} without settling"
                )));
            }
        }
        if let Some(&(u_last, w_last)) = anchors.last() {
            if u_last == sigma_min {
                endpoint_zero = w_last.re.exp() < ZERO_TOL && sigma_min <= 0.5 + 1e-12;
            }
        }
        anchors.reverse();
        Ok(Self {
            t,
            sigma_min,
            prec: *prec,
            anchors,
            endpoint_zero,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    /// Branch value at the left endpoint sigma_min + it.
    pub fn endpoint_log(&self) -> Result<Complex64> {
        let &(u, w) = self.anchors.first().expect("non-empty by construction");
        if self.endpoint_zero {
            return Err(Error::OnZero {
                sigma: u,
                t: self.t,
                modulus: w.re.exp(),
            });
        }
        Ok(w)
    }

    /// Branch value at u + it for sigma_min <= u <= 2.
    pub fn log_zeta(&self, u: f64) -> Result<Complex64> {
        if u < self.sigma_min - 1e-12 || u > 2.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "u = {u} outside tracked range [{}, 2]",
                self.sigma_min
            )));
        }
        // nearest anchor at or above u
        let idx = self.anchors.partition_point(|&(a, _)| a < u);
        let near = if idx == self.anchors.len() {
            self.anchors.len() - 1
        } else if idx > 0 && (u - self.anchors[idx - 1].0).abs() < (self.anchors[idx].0 - u).abs() {
            idx - 1
        } else {
            idx
        };
        let (u_ref, mut w) = self.anchors[near];
        if (u_ref - u).abs() < 1e-14 {
            return Ok(w);
        }
        // refine from the anchor; anchors are at most STEP_INIT apart so this
        // usually resolves in one step
        let mut a = u_ref;
        let mut h: f64 = (u - a).abs().min(STEP_INIT);
        let dir = (u - a).signum();
        loop {
            let next = if (u - a).abs() <= h { u } else { a + dir * h };
            let z = zeta::zeta(Complex64::new(next, self.t), &self.prec)?.as_complex();
            if z.norm() < 1e-300 {
                return Err(Error::OnZero {
                    sigma: next,
                    t: self.t,
                    modulus: z.norm(),
                });
            }
            let cand = unwind(z.ln(), w);
            if (cand.im - w.im).abs() < PI / 4.0 {
                a = next;
                w = cand;
                if a == u {
                    return Ok(w);
                }
            } else if h > STEP_MIN {
                h *= 0.5;
            } else {
                return Err(Error::OnZero {
                    sigma: next,
                    t: self.t,
                    modulus: z.norm(),
                });
            }
        }
    }
}

/// log zeta at sigma + it on the branch continued from arg zeta(2) = 0.
/// Im of the result is pi * S(sigma, t).
pub fn log_zeta_continued(sigma: f64, t: f64, prec: &EvalPrecision) -> Result<Complex64> {
    if t == 0.0 {
        if sigma <= 1.0 {
            return Err(Error::Domain(
                "log zeta on the real axis is defined only right of the pole".into(),
            ));
        }
        return Ok(Complex64::new(zeta::zeta_real(sigma, prec)?.ln(), 0.0));
    }
    if t < 0.0 {
        return Ok(log_zeta_continued(sigma, -t, prec)?.conj());
    }
    if sigma >= 2.0 {
        // principal log is already the continued branch right of the strip
        let z = zeta::zeta(Complex64::new(sigma, t), prec)?.as_complex();
        return Ok(z.ln());
    }
    LogZetaPath::build(sigma, t, prec)?.endpoint_log()
}
