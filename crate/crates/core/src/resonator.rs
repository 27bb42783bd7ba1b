//! Resonator construction: a prime window, a multiplicative weight f on the
//! squarefree integers it generates, the filtered set M, its binned
//! compression M' with weights r, and the Dirichlet polynomial
//! R(t) = sum r(m) m^{-it}.
//!
//! Scale notation: big_n = floor(big_t^kappa), log_n = ln big_n,
//! log2_n = ln ln big_n, log3_n = ln ln ln big_n. Everything downstream of the
//! window uses only these logs, so big_n is kept as a float and may exceed
//! integer range.

use crate::argument::{s_n, SnOptions};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::primes::primes_in;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::E;

/// Exact subset enumeration cap; past this the sampled estimators apply.
pub const ENUM_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SigmaMode {
    Half,
    Edge,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResonatorParams {
    pub big_t: f64,
    pub beta: f64,
    pub kappa: f64,
    pub sigma: f64,
    pub big_n: f64,
    /// bracket constant in the beta_k threshold, 0 < d < 1
    pub d: f64,
}

impl ResonatorParams {
    pub fn log_n(&self) -> f64 {
        self.big_n.ln()
    }
    pub fn log2_n(&self) -> f64 {
        self.big_n.ln().ln()
    }
    pub fn log3_n(&self) -> f64 {
        self.big_n.ln().ln().ln()
    }
}

/// kappa = (1-beta)/2, big_n = floor(big_t^kappa), sigma from the mode:
/// 1/2 or 1/2 + 1/log2_n.
pub fn build_params(big_t: f64, beta: f64, sigma_mode: SigmaMode) -> Result<ResonatorParams> {
    if !big_t.is_finite() || big_t <= 1.0 {
        return Err(Error::Domain(format!("need a finite T > 1, got {big_t}")));
    }
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::Domain(format!(
            "beta must lie in [0, 1), got {beta}"
        )));
    }
    let kappa = (1.0 - beta) / 2.0;
    let big_n = if beta == 0.0 {
        big_t.sqrt().floor()
    } else {
        big_t.powf(kappa).floor()
    };
    let log2_n = big_n.ln().ln();
    if !(log2_n > 1.0) {
        return Err(Error::TooSmall(format!(
            "N = {big_n} gives ln ln ln N <= 0; the weight scales need N > e^e"
        )));
    }
    let sigma = match sigma_mode {
        SigmaMode::Half => 0.5,
        SigmaMode::Edge => 0.5 + 1.0 / log2_n,
    };
    Ok(ResonatorParams {
        big_t,
        beta,
        kappa,
        sigma,
        big_n,
        d: 0.1,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeWindow {
    pub lo: f64,
    pub hi: f64,
    pub primes: Vec<u64>,
    pub k_max: u32,
    /// per-k subranges (lo_k, hi_k], clipped to the window
    pub windows: Vec<(f64, f64)>,
}

impl PrimeWindow {
    /// 1-based subwindow index of a window prime.
    pub fn window_index(&self, p: u64) -> u32 {
        let pf = p as f64;
        for (i, &(a, b)) in self.windows.iter().enumerate() {
            if pf > a && pf <= b {
                return i as u32 + 1;
            }
        }
        1
    }
}

/// Window (e X, exp((log2_n)^{1/8}) X] with X = log_n log2_n, split at e^k X.
pub fn prime_window(params: &ResonatorParams) -> Result<PrimeWindow> {
    let x = params.log_n() * params.log2_n();
    let lo = E * x;
    let stretch = params.log2_n().powf(0.125);
    let hi = stretch.exp() * x;
    let k_max = stretch.floor() as u32;
    let primes = primes_in(lo, hi)?;
    let mut windows = Vec::new();
    for k in 1..=k_max {
        let a = (k as f64).exp() * x;
        let b = ((k + 1) as f64).exp() * x;
        windows.push((a, b.min(hi)));
    }
    Ok(PrimeWindow {
        lo,
        hi,
        primes,
        k_max,
        windows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightFunction {
    pub primes: Vec<u64>,
    pub values: Vec<f64>,
    /// 1-based subwindow index per prime
    pub window_of: Vec<u32>,
}

/// f(p) = (log_n)^{1-sigma} (log2_n)^sigma / (log3_n)^{1-sigma}
///        / (p^sigma (ln p - log2_n - log3_n)) for window primes.
pub fn weight_function(params: &ResonatorParams, window: &PrimeWindow) -> Result<WeightFunction> {
    let (l1, l2, l3) = (params.log_n(), params.log2_n(), params.log3_n());
    let s = params.sigma;
    let scale = l1.powf(1.0 - s) * l2.powf(s) / l3.powf(1.0 - s);
    let mut values = Vec::with_capacity(window.primes.len());
    let mut window_of = Vec::with_capacity(window.primes.len());
    for &p in &window.primes {
        let denom = (p as f64).ln() - l2 - l3;
        if denom <= 0.0 {
            return Err(Error::TooSmall(format!(
                "weight denominator ln {p} - ln2 N - ln3 N = {denom} <= 0"
            )));
        }
        values.push(scale / ((p as f64).powf(s) * denom));
        window_of.push(window.window_index(p));
    }
    Ok(WeightFunction {
        primes: window.primes.clone(),
        values,
        window_of,
    })
}

impl WeightFunction {
    fn f_of_mask(&self, mask: u32) -> f64 {
        let mut prod = 1.0;
        for i in 0..self.primes.len() {
            if mask & (1 << i) != 0 {
                prod *= self.values[i];
            }
        }
        prod
    }

    fn log_of_mask(&self, mask: u32) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.primes.len() {
            if mask & (1 << i) != 0 {
                sum += (self.primes[i] as f64).ln();
            }
        }
        sum
    }
}

/// f extended multiplicatively to squarefree products of window primes.
pub fn f_value(n: u128, w: &WeightFunction) -> Result<f64> {
    let mut rest = n;
    let mut prod = 1.0;
    if n == 0 {
        return Err(Error::NotInSupport(n));
    }
    for (&p, &fp) in w.primes.iter().zip(&w.values) {
        if rest % p as u128 == 0 {
            rest /= p as u128;
            prod *= fp;
            if rest % p as u128 == 0 {
                return Err(Error::NotInSupport(n));
            }
        }
    }
    if rest != 1 {
        return Err(Error::NotInSupport(n));
    }
    Ok(prod)
}

/// Divisor-count threshold for the k-th subwindow.
pub fn alpha_k(k: u32, params: &ResonatorParams) -> f64 {
    let e = 2.0 - 2.0 * params.sigma;
    3.0 * params.log_n().powf(e) / ((k * k) as f64 * params.log3_n().powf(e))
}

/// Lower filtration threshold; beta_k = (d/36) alpha_k.
pub fn beta_k(k: u32, params: &ResonatorParams, d: f64) -> f64 {
    d / 36.0 * alpha_k(k, params)
}

#[derive(Clone, Debug, Serialize)]
pub struct BinEntry {
    pub key: i128,
    pub rep: u128,
    pub log_rep: f64,
    pub r: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonatorSet {
    pub masks: Vec<u32>,
    pub values: Vec<u128>,
    /// ln of each member, summed over prime logs
    pub logs: Vec<f64>,
    pub f2: Vec<f64>,
    pub bins: Vec<BinEntry>,
}

impl ResonatorSet {
    pub fn sum_f2(&self) -> f64 {
        self.f2.iter().sum()
    }
    pub fn sum_r2(&self) -> f64 {
        self.bins.iter().map(|b| b.r * b.r).sum()
    }
}

fn count_thresholds(params: &ResonatorParams, k_max: u32) -> Vec<f64> {
    (1..=k_max).map(|k| alpha_k(k, params)).collect()
}

// drop members carrying at least thresholds[k-1] primes from subwindow k
fn member_excluded(mask: u32, w: &WeightFunction, thresholds: &[f64]) -> bool {
    for (k0, &bound) in thresholds.iter().enumerate() {
        let count = (0..w.primes.len())
            .filter(|&i| mask & (1 << i) != 0 && w.window_of[i] == k0 as u32 + 1)
            .count() as f64;
        if count >= bound {
            return true;
        }
    }
    false
}

/// All squarefree products of window primes surviving the per-subwindow
/// divisor-count filter. Exact subset enumeration, |P| <= ENUM_CAP.
pub fn enumerate_m(
    params: &ResonatorParams,
    w: &WeightFunction,
    window: &PrimeWindow,
) -> Result<ResonatorSet> {
    let np = w.primes.len();
    if np > ENUM_CAP {
        return Err(Error::TooLarge(format!(
            "window holds {np} primes; exact enumeration caps at {ENUM_CAP}, use the sampled estimators"
        )));
    }
    let thresholds = count_thresholds(params, window.k_max);
    let mut masks = Vec::new();
    let mut values = Vec::new();
    let mut logs = Vec::new();
    let mut f2 = Vec::new();
    for mask in 0u32..(1u32 << np) {
        if member_excluded(mask, w, &thresholds) {
            continue;
        }
        let mut value: u128 = 1;
        for i in 0..np {
            if mask & (1 << i) != 0 {
                value = value.checked_mul(w.primes[i] as u128).ok_or_else(|| {
                    Error::TooLarge(
                        "member product exceeds 128 bits; use the sampled estimators".into(),
                    )
                })?;
            }
        }
        masks.push(mask);
        values.push(value);
        logs.push(w.log_of_mask(mask));
        let f = w.f_of_mask(mask);
        f2.push(f * f);
    }
    Ok(ResonatorSet {
        masks,
        values,
        logs,
        f2,
        bins: Vec::new(),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CardinalityReport {
    pub members: u64,
    pub cap: f64,
    pub ratio: f64,
    pub within: bool,
}

/// |M| against the cap N.
pub fn check_cardinality(set: &ResonatorSet, params: &ResonatorParams) -> CardinalityReport {
    let members = set.masks.len() as u64;
    CardinalityReport {
        members,
        cap: params.big_n,
        ratio: members as f64 / params.big_n,
        within: (members as f64) <= params.big_n,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BracketReport {
    pub k: u32,
    pub sum: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass_lower: bool,
    pub pass_upper: bool,
}

/// sum p^{-2 sigma} over the k-th subwindow against the bracket shapes
/// d/(log2_n)^{2 sigma} and 2/(log2_n)^{2 sigma}. Advisory: the bracket is
/// asymptotic and the finite-size verdict is recorded, never asserted.
pub fn prime_sum_bracket(params: &ResonatorParams, window: &PrimeWindow, k: u32) -> BracketReport {
    let s2 = 2.0 * params.sigma;
    let sum: f64 = window
        .primes
        .iter()
        .filter(|&&p| window.window_index(p) == k)
        .map(|&p| (p as f64).powf(-s2))
        .sum();
    let scale = params.log2_n().powf(s2);
    BracketReport {
        k,
        sum,
        lower: params.d / scale,
        upper: 2.0 / scale,
        pass_lower: sum > params.d / scale,
        pass_upper: sum < 2.0 / scale,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GcdSumReport {
    pub ratio: f64,
    /// ratio divided by (log_n)^{1-sigma} (log3_n)^sigma / (log2_n)^sigma
    pub implied_c: f64,
    pub denominator: f64,
}

/// (1/sum_supp f(l)^2) sum_{n in M} f(n)^2 sum_{p|n} 1/(f(p) p^sigma).
/// The denominator runs over the full support, which telescopes to
/// prod_p (1 + f(p)^2).
pub fn gcd_sum_ratio(
    set: &ResonatorSet,
    w: &WeightFunction,
    params: &ResonatorParams,
) -> GcdSumReport {
    let denominator: f64 = w.values.iter().map(|f| 1.0 + f * f).product();
    let s = params.sigma;
    let inv: Vec<f64> = w
        .primes
        .iter()
        .zip(&w.values)
        .map(|(&p, &f)| 1.0 / (f * (p as f64).powf(s)))
        .collect();
    // fixed chunking keeps the reduction order, so the sum is bit-stable
    let chunks: Vec<(&[u32], &[f64])> = set
        .masks
        .chunks(1 << 13)
        .zip(set.f2.chunks(1 << 13))
        .collect();
    let partials: Vec<f64> = chunks
        .par_iter()
        .map(|(ms, fs)| {
            let mut acc = 0.0;
            for (&mask, &f2) in ms.iter().zip(fs.iter()) {
                let mut inner = 0.0;
                for (i, v) in inv.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        inner += v;
                    }
                }
                acc += f2 * inner;
            }
            acc
        })
        .collect();
    let numerator: f64 = partials.into_iter().sum();
    let ratio = numerator / denominator;
    let shape = params.log_n().powf(1.0 - s) * params.log3_n().powf(s) / params.log2_n().powf(s);
    GcdSumReport {
        ratio,
        implied_c: ratio / shape,
        denominator,
    }
}

/// Fraction of sum f^2 carried by members failing the beta_k lower counts.
/// Proof-side diagnostic only.
pub fn filter_mass_ratio(
    set: &ResonatorSet,
    w: &WeightFunction,
    params: &ResonatorParams,
    k_max: u32,
) -> f64 {
    let total = set.sum_f2();
    let mut outside = 0.0;
    for (&mask, &f2) in set.masks.iter().zip(&set.f2) {
        for k in 1..=k_max {
            let count = (0..w.primes.len())
                .filter(|&i| mask & (1 << i) != 0 && w.window_of[i] == k)
                .count() as f64;
            if count < beta_k(k, params, params.d) {
                outside += f2;
                break;
            }
        }
    }
    outside / total
}

/// Bin M by ratio 1 + 1/T and compress: representative = least member of the
/// bin, r^2 = sum of f^2 over the three-bin widened neighborhood. The bin
/// exponent uses ln_1p; at T = 1e16 the ratio itself rounds to 1.0 in f64.
/// Keys are i128: log m / ln(1 + 1/T) passes i64 range already at T = 1e18,
/// and stays inside i128 for any member value representable in u128.
pub fn build_m_prime(set: &ResonatorSet, params: &ResonatorParams) -> ResonatorSet {
    let lam = (1.0 / params.big_t).ln_1p();
    let mut base: BTreeMap<i128, (u128, f64, f64)> = BTreeMap::new();
    for ((&value, &log_m), &f2) in set.values.iter().zip(&set.logs).zip(&set.f2) {
        let key = (log_m / lam).floor() as i128;
        let entry = base.entry(key).or_insert((value, log_m, 0.0));
        if value < entry.0 {
            entry.0 = value;
            entry.1 = log_m;
        }
        entry.2 += f2;
    }
    let bins = base
        .iter()
        .map(|(&key, &(rep, log_rep, _))| {
            let mut r2 = 0.0;
            for k in key - 1..=key + 1 {
                if let Some(&(_, _, f2)) = base.get(&k) {
                    r2 += f2;
                }
            }
            BinEntry {
                key,
                rep,
                log_rep,
                r: r2.sqrt(),
            }
        })
        .collect();
    ResonatorSet {
        bins,
        ..set.clone()
    }
}

/// R(t) = sum r(m) m^{-it} over the compressed set.
pub fn r_eval(set: &ResonatorSet, t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for b in &set.bins {
        let (si, co) = (t * b.log_rep).sin_cos();
        acc += b.r * Complex64::new(co, -si);
    }
    acc
}

/// How many widened bins each member lands in; the factor-4 mechanism
/// behind sum r^2 <= 4 sum f^2.
pub fn widened_bin_counts(set: &ResonatorSet, params: &ResonatorParams) -> Vec<u32> {
    let lam = (1.0 / params.big_t).ln_1p();
    let occupied: std::collections::BTreeSet<i128> = set
        .logs
        .iter()
        .map(|&log_m| (log_m / lam).floor() as i128)
        .collect();
    set.logs
        .iter()
        .map(|&log_m| {
            let key = (log_m / lam).floor() as i128;
            (key - 1..=key + 1).filter(|j| occupied.contains(j)).count() as u32
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResonanceReport {
    /// discretized int (K * S_n)(t) |R(t)|^2 Phi(t/T) dt, with the smoothed
    /// side taken from the prime-sum representation
    pub value: f64,
    /// discretized int |R(t)|^2 Phi(t/T) dt
    pub weighted_norm: f64,
    /// T sum f^2, the scale the weighted norm is bounded against
    pub scale: f64,
    pub norm_ratio: f64,
}

fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

/// Trapezoid discretization of the resonance integral on [t_lo, t_hi].
/// Diagnostic: desk grids cover a sliver of the Phi mass, so this reports
/// shapes and scales, not the asymptotic inequality.
pub fn resonance_integral(
    n: u32,
    params: &ResonatorParams,
    set: &ResonatorSet,
    spec: &KernelSpec,
    t_lo: f64,
    t_hi: f64,
    step: f64,
) -> Result<ResonanceReport> {
    if !(step > 0.0) || t_hi <= t_lo {
        return Err(Error::Domain("need t_lo < t_hi and step > 0".into()));
    }
    let cells = ((t_hi - t_lo) / step).floor() as usize + 1;
    if cells > 200_000 {
        return Err(Error::Domain(format!(
            "grid of {cells} cells is past desk scale"
        )));
    }
    let ts: Vec<f64> = (0..cells).map(|k| t_lo + k as f64 * step).collect();
    let jobs: Vec<crate::convolution::SumJob> = ts
        .iter()
        .map(|&t| crate::convolution::SumJob {
            n,
            sigma: params.sigma,
            t,
            spec: *spec,
        })
        .collect();
    let cut = crate::convolution::prime_cutoff(spec, 200_000);
    let sums = crate::convolution::weighted_prime_sums(cut, &jobs);
    let rot = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let mut value = 0.0;
    let mut weighted_norm = 0.0;
    for (k, (&t, sum)) in ts.iter().zip(&sums).enumerate() {
        let conv = (rot * sum).im / std::f64::consts::PI;
        let r2 = r_eval(set, t).norm_sqr();
        let w = phi(t / params.big_t) * if k == 0 || k == cells - 1 { 0.5 } else { 1.0 };
        value += conv * r2 * w * step;
        weighted_norm += r2 * w * step;
    }
    let scale = params.big_t * set.sum_f2();
    Ok(ResonanceReport {
        value,
        weighted_norm,
        scale,
        norm_ratio: weighted_norm / scale,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScanRecord {
    pub t: f64,
    pub sigma: f64,
    pub n: u32,
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "Sn")]
    pub sn: f64,
}

/// |R(t)|^2 over the arithmetic grid t_lo + k step, cheap side only.
pub fn scan_grid(set: &ResonatorSet, t_lo: f64, t_hi: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0) || t_hi < t_lo {
        return Err(Error::Domain("need t_lo <= t_hi and step > 0".into()));
    }
    let cells = ((t_hi - t_lo) / step).floor() as usize + 1;
    if cells > 5_000_000 {
        return Err(Error::Domain(format!(
            "grid of {cells} cells is past desk scale"
        )));
    }
    let ts: Vec<f64> = (0..cells).map(|k| t_lo + k as f64 * step).collect();
    Ok(ts
        .par_iter()
        .map(|&t| (t, r_eval(set, t).norm_sqr()))
        .collect())
}

/// Top candidates by |R(t)|^2, annotated with S_n. Ties break toward
/// smaller t, so fixed grids give fixed output.
pub fn search_extreme(
    n: u32,
    params: &ResonatorParams,
    set: &ResonatorSet,
    t_lo: f64,
    t_hi: f64,
    grid_step: f64,
    top_q: usize,
) -> Result<Vec<ScanRecord>> {
    if t_hi > 1e4 {
        return Err(Error::Domain(format!("scan cap is t <= 1e4, got {t_hi}")));
    }
    let mut cells = scan_grid(set, t_lo, t_hi, grid_step)?;
    cells.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then(a.0.partial_cmp(&b.0).unwrap())
    });
    cells.truncate(top_q);
    let opts = SnOptions::default();
    let records = cells
        .par_iter()
        .map(|&(t, r2)| {
            s_n(n, params.sigma, t, &opts).map(|ev| ScanRecord {
                t,
                sigma: params.sigma,
                n,
                r2,
                sn: ev.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(records)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampledSummary {
    pub samples: u64,
    pub seed: u64,
    pub sum_f2_est: f64,
    pub sum_f2_se: f64,
    pub sum_f2_closed: f64,
    /// log2 of the estimated |M|
    pub members_log2_est: f64,
    pub gcd_ratio_est: f64,
    pub gcd_ratio_se: f64,
}

/// Uniform random-subset estimators for windows past the enumeration cap.
/// Each subset is kept in log space, so astronomically large members cost
/// nothing. Estimates carry standard errors; the closed-form sum f^2 is
/// reported beside its estimate as a consistency anchor.
pub fn sampled_summary(
    params: &ResonatorParams,
    w: &WeightFunction,
    window: &PrimeWindow,
    samples: u64,
    seed: u64,
) -> SampledSummary {
    let np = w.primes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_f: Vec<f64> = w.values.iter().map(|f| f.ln()).collect();
    let s = params.sigma;
    let inv: Vec<f64> = w
        .primes
        .iter()
        .zip(&w.values)
        .map(|(&p, &f)| 1.0 / (f * (p as f64).powf(s)))
        .collect();
    let ln_total = (np as f64) * std::f64::consts::LN_2;
    let mut in_m = 0u64;
    let (mut sx, mut sxx) = (0.0, 0.0);
    let (mut sy, mut syy) = (0.0, 0.0);
    let mut counts = vec![0u32; window.k_max as usize + 1];
    let mut bits = vec![false; np];
    for _ in 0..samples {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut log_f2 = 0.0;
        let mut inner = 0.0;
        for i in 0..np {
            bits[i] = rng.gen::<bool>();
            if bits[i] {
                log_f2 += 2.0 * log_f[i];
                inner += inv[i];
                counts[w.window_of[i] as usize] += 1;
            }
        }
        let excluded = (1..=window.k_max).any(|k| counts[k as usize] as f64 >= alpha_k(k, params));
        if excluded {
            continue;
        }
        in_m += 1;
        let x = log_f2.exp();
        sx += x;
        sxx += x * x;
        let y = x * inner;
        sy += y;
        syy += y * y;
    }
    let nf = samples as f64;
    let scale = ln_total.exp();
    let mean_x = sx / nf;
    let var_x = (sxx / nf - mean_x * mean_x).max(0.0) / nf;
    let mean_y = sy / nf;
    let var_y = (syy / nf - mean_y * mean_y).max(0.0) / nf;
    let denom: f64 = w.values.iter().map(|f| 1.0 + f * f).product();
    SampledSummary {
        samples,
        seed,
        sum_f2_est: scale * mean_x,
        sum_f2_se: scale * var_x.sqrt(),
        sum_f2_closed: denom,
        members_log2_est: (np as f64) + (in_m as f64 / nf).log2(),
        gcd_ratio_est: scale * mean_y / denom,
        gcd_ratio_se: scale * var_y.sqrt() / denom,
    }
}
