use num_complex::Complex64;
use serde::Serialize;

/// A complex result together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    /// Absolute error estimate for the modulus; 0 for closed-form values.
    pub abs_err: f64,
}

impl ComplexValue {
    pub fn new(re: f64, im: f64, abs_err: f64) -> Self {
        Self { re, im, abs_err }
    }

    pub fn exact(re: f64, im: f64) -> Self {
        Self {
            re,
            im,
            abs_err: 0.0,
        }
    }

    pub fn from_complex(z: Complex64, abs_err: f64) -> Self {
        Self {
            re: z.re,
            im: z.im,
            abs_err,
        }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.as_complex().norm()
    }
}

/// Controls for series evaluation: target accuracy and a hard cap on series length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalPrecision {
    pub target_abs_err: f64,
    pub max_terms: usize,
}

impl Default for EvalPrecision {
    fn default() -> Self {
        Self {
            target_abs_err: 1e-10,
            max_terms: 4_000_000,
        }
    }
}

impl EvalPrecision {
    pub fn with_target(target_abs_err: f64) -> Self {
        Self {
            target_abs_err,
            ..Self::default()
        }
    }
}
