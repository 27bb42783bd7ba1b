//! Numerics for the argument functions S_n(sigma, t) of the zeta function:
//! evaluation near the critical line, the convolution identities tying them
//! to prime sums, explicit bound constants, and the resonator construction
//! used to hunt large values.

pub mod argument;
pub mod bounds;
pub mod branch;
pub mod convolution;
pub mod error;
pub mod kernels;
pub mod primes;
pub mod quad;
pub mod resonator;
pub mod types;
pub mod zeros;
pub mod zeta;

pub use argument::{
    delta_constant, moment_l1, s_n, s_n_integral, s_n_recursive, s_value, DeltaConstant,
    DeltaRoute, SnEvaluation, SnMethod, SnOptions,
};
pub use bounds::{
    c_even, c_minus1, c_odd, c_zero, envelope_littlewood, envelope_strip, h_series, EnvelopeKind,
    EnvelopeValue,
};
pub use branch::{log_zeta_continued, LogZetaPath};
pub use convolution::{
    convolution_report, g_n, lhs_convolution, log_zeta_convolution, prime_cutoff, rhs_prime_sum,
    tail_noise_estimate, ConvolutionOptions, ConvolutionReport, RESIDUAL_BAND_RHO,
};
pub use error::{Error, Result};
pub use kernels::{fourier_numeric, KernelSpec};
pub use primes::{chebyshev_psi, for_primes_in, primes_in, von_mangoldt, PrimeTable};
pub use quad::{integrate, QuadResult};
pub use resonator::{
    alpha_k, beta_k, build_m_prime, build_params, check_cardinality, enumerate_m, f_value,
    gcd_sum_ratio, prime_sum_bracket, prime_window, r_eval, resonance_integral, sampled_summary,
    scan_grid, search_extreme, weight_function, BracketReport, CardinalityReport, GcdSumReport,
    PrimeWindow, ResonanceReport, ResonatorParams, ResonatorSet, SampledSummary, ScanRecord,
    SigmaMode, WeightFunction,
};
pub use types::{ComplexValue, EvalPrecision};
pub use zeros::{find_zero_ordinates, zeros_up_to};
pub use zeta::{hardy_z, log_zeta_dirichlet, theta_siegel, zeta, zeta_real};
