//! Gaussian test kernels, their exact transforms, and the strip maximum V.
//!
//! Two families on scale L > 0 (in the pipeline L is the iterated log of the
//! height): odd n uses L Phi(2 pi L x) with an alternating sign, even n uses
//! L^2 x Phi(2 pi L x). Transforms follow the convention
//! f_hat(xi) = int f(x) e^{-2 pi i xi x} dx throughout the crate.

use crate::error::{Error, Result};
use crate::quad::integrate;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Phi(x) = e^{-x^2/2}.
pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KernelSpec {
    pub n: u32,
    /// scale parameter, strictly positive
    pub l: f64,
}

impl KernelSpec {
    pub fn new(n: u32, l: f64) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::Domain(format!(
                "kernel scale must be positive, got {l}"
            )));
        }
        Ok(Self { n, l })
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// (-1)^{(n-1)/2} for odd n, (-1)^{n/2+1} for even n.
    pub fn sign(&self) -> f64 {
        let flips = if self.is_odd() {
            (self.n - 1) / 2
        } else {
            self.n / 2 + 1
        };
        if flips % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// K_n(x) on the real line.
    pub fn eval(&self, x: f64) -> f64 {
        let g = phi(2.0 * PI * self.l * x);
        if self.is_odd() {
            self.sign() * self.l * g
        } else {
            self.sign() * self.l * self.l * x * g
        }
    }

    /// Entire extension K_n(z).
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let w = 2.0 * PI * self.l * z;
        let g = (-0.5 * w * w).exp();
        if self.is_odd() {
            g * (self.sign() * self.l)
        } else {
            g * z * (self.sign() * self.l * self.l)
        }
    }

    /// Exact transform: real for odd n, purely imaginary for even n.
    pub fn hat(&self, xi: f64) -> Complex64 {
        let g = phi(xi / self.l);
        if self.is_odd() {
            Complex64::new(self.sign() * g / (2.0 * PI).sqrt(), 0.0)
        } else {
            let s = if (self.n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(0.0, s * xi * g / ((2.0 * PI).powf(1.5) * self.l))
        }
    }

    /// Closed-form L1 norm; scale-free for both families.
    pub fn l1_norm(&self) -> f64 {
        if self.is_odd() {
            1.0 / (2.0 * PI).sqrt()
        } else {
            1.0 / (2.0 * PI * PI)
        }
    }

    /// log |K_n(x + iy)|.
    fn log_modulus(&self, x: f64, y: f64) -> f64 {
        let a = 2.0 * PI * self.l;
        let base = -0.5 * a * a * (x * x - y * y);
        if self.is_odd() {
            self.l.ln() + base
        } else {
            2.0 * self.l.ln() + 0.5 * (x * x + y * y).ln() + base
        }
    }

    /// V_sigma(x) = max over sigma-2 <= y <= 0 of |K_n(x + iy)|.
    ///
    /// For these kernels the maximum sits at y = sigma-2 once |x| clears the
    /// peak, but the search is generic: dense sampling plus golden-section
    /// refinement, carried out on log |K| so large exponents cannot overflow.
    pub fn v_sigma(&self, sigma: f64, x: f64) -> Result<f64> {
        if !(0.5..=2.0).contains(&sigma) {
            return Err(Error::Domain(format!(
                "strip maximum needs 1/2 <= sigma <= 2, got {sigma}"
            )));
        }
        let lo = sigma - 2.0;
        if lo == 0.0 {
            return Ok(self.eval(x).abs());
        }
        let g = |y: f64| self.log_modulus(x, y);
        let samples = 1000;
        let mut best_i: u32 = 0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=samples {
            let y = lo + (0.0 - lo) * i as f64 / samples as f64;
            let v = g(y);
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let h = (0.0 - lo) / samples as f64;
        let mut a = lo + h * (best_i.saturating_sub(1)) as f64;
        let mut b = (lo + h * (best_i + 1) as f64).min(0.0);
        // golden-section contraction around the grid maximum
        let r = 0.5 * (5.0f64.sqrt() - 1.0);
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let mut fc = g(c);
        let mut fd = g(d);
        for _ in 0..60 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = g(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = g(d);
            }
        }
        Ok(best.max(fc).max(fd).exp())
    }
}

/// Quadrature transform int_{-w}^{w} K(x) e^{-2 pi i xi x} dx, for checking
/// the closed forms.
pub fn fourier_numeric(spec: &KernelSpec, xi: f64, half_width: f64) -> Complex64 {
    integrate(
        |x| {
            let ph = -2.0 * PI * xi * x;
            let (s, c) = ph.sin_cos();
            Complex64::new(c, s) * spec.eval(x)
        },
        -half_width,
        half_width,
        &[-1.0 / spec.l, 0.0, 1.0 / spec.l],
        1e-11,
        4000,
    )
    .value
}
