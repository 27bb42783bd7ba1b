//! Prime enumeration and the von Mangoldt function.
//!
//! A dense table covers small ranges; large prime-power sums stream over
//! segments so nothing near 10^8 is ever held in memory at once.

use crate::error::{Error, Result};

/// Primes up to a fixed limit, cached as a sorted vector.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            primes: sieve(limit),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.limit && self.primes.binary_search(&n).is_ok()
    }
}

/// Simple sieve of Eratosthenes, odds only.
fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut primes = vec![2];
    let n_odd = ((limit - 1) / 2) as usize; // flags for 3, 5, 7, ...
    let mut composite = vec![false; n_odd];
    let mut i = 0usize;
    while i < n_odd {
        if !composite[i] {
            let p = (2 * i + 3) as u64;
            let mut j = (p * p - 3) / 2;
            while (j as usize) < n_odd {
                composite[j as usize] = true;
                j += p;
            }
        }
        i += 1;
    }
    primes.extend(
        (0..n_odd)
            .filter(|&i| !composite[i])
            .map(|i| (2 * i + 3) as u64),
    );
    primes
}

/// Primes p with a < p <= b.
pub fn primes_in(a: f64, b: f64) -> Result<Vec<u64>> {
    if !a.is_finite() || !b.is_finite() || b < 0.0 {
        return Err(Error::Domain(format!("bad prime range ({a}, {b}]")));
    }
    if b > 1e12 {
        return Err(Error::TooLarge(format!(
            "prime window upper bound {b:.3e} beyond sieve range"
        )));
    }
    let hi = b.floor() as u64;
    let mut out = Vec::new();
    for_primes_in(2, hi, |p| {
        if (p as f64) > a {
            out.push(p);
        }
    });
    Ok(out)
}

/// Streams every prime in [lo, hi] to `f`, in increasing order, using a
/// segmented sieve. Single-threaded; callers parallelize over disjoint ranges.
pub fn for_primes_in(lo: u64, hi: u64, mut f: impl FnMut(u64)) {
    if hi < 2 || hi < lo {
        return;
    }
    let lo = lo.max(2);
    if lo <= 2 && hi >= 2 {
        f(2);
    }
    let root = (hi as f64).sqrt() as u64 + 2;
    let base = sieve(root);
    const SEG: u64 = 1 << 21; // odd numbers per segment
    let hi_odd = if hi % 2 == 0 { hi - 1 } else { hi };
    let mut seg_start = lo | 1; // first odd >= lo
    if seg_start < 3 {
        seg_start = 3;
    }
    let mut flags = vec![false; SEG as usize];
    while seg_start <= hi_odd {
        let seg_end = (seg_start + 2 * (SEG - 1)).min(hi_odd);
        let count = ((seg_end - seg_start) / 2 + 1) as usize;
        flags[..count].fill(false);
        for &p in base.iter().skip(1) {
            // skip 2: only odds present
            if p * p > seg_end {
                break;
            }
            let mut start = p * p;
            if start < seg_start {
                let k = (seg_start + p - 1) / p;
                let k = if k % 2 == 0 { k + 1 } else { k }; // odd multiple
                start = k * p;
            }
            let mut j = start;
            while j <= seg_end {
                flags[((j - seg_start) / 2) as usize] = true;
                j += 2 * p;
            }
        }
        for i in 0..count {
            if !flags[i] {
                let n = seg_start + 2 * i as u64;
                if n >= lo && n != 1 {
                    f(n);
                }
            }
        }
        seg_start = seg_end + 2;
    }
}

/// Von Mangoldt: log p when m = p^k, 0 otherwise.
pub fn von_mangoldt(m: u64) -> f64 {
    if m < 2 {
        return 0.0;
    }
    let mut n = m;
    let mut p = 0u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            p = d;
            while n % d == 0 {
                n /= d;
            }
            break;
        }
        d += 1;
    }
    if p == 0 {
        // m itself prime
        return (m as f64).ln();
    }
    if n == 1 {
        (p as f64).ln()
    } else {
        0.0
    }
}

/// Chebyshev psi: sum of von Mangoldt over m <= x, via primes and their powers.
pub fn chebyshev_psi(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    let cap = x.floor() as u64;
    let mut sum = 0.0;
    for_primes_in(2, cap, |p| {
        let lp = (p as f64).ln();
        let mut pk = p;
        loop {
            sum += lp;
            if pk > cap / p {
                break;
            }
            pk *= p;
            if pk > cap {
                break;
            }
        }
    });
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_prime_trial(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn table_matches_trial_division() {
        let table = PrimeTable::new(2000);
        let expect: Vec<u64> = (2..=2000).filter(|&n| is_prime_trial(n)).collect();
        assert_eq!(table.primes(), expect.as_slice());
    }

    #[test]
    fn segmented_matches_table_across_boundaries() {
        let table = PrimeTable::new(5_000_000);
        let mut seen = Vec::new();
        for_primes_in(4_000_000, 5_000_000, |p| seen.push(p));
        let expect: Vec<u64> = table
            .primes()
            .iter()
            .copied()
            .filter(|&p| p >= 4_000_000)
            .collect();
        assert_eq!(seen, expect);
    }

    #[test]
    fn toy_window_primes() {
        let p = primes_in(145.885222610187, 168.314415917897).unwrap();
        assert_eq!(p, vec![149, 151, 157, 163, 167]);
    }

    #[test]
    fn empty_window() {
        assert!(primes_in(19.09, 20.15).unwrap().is_empty());
    }

    #[test]
    fn von_mangoldt_on_powers_and_composites() {
        assert_eq!(von_mangoldt(1), 0.0);
        assert!((von_mangoldt(2) - 2f64.ln()).abs() < 1e-15);
        assert!((von_mangoldt(16) - 2f64.ln()).abs() < 1e-15);
        assert!((von_mangoldt(97) - 97f64.ln()).abs() < 1e-15);
        assert!((von_mangoldt(243) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(6), 0.0);
        assert_eq!(von_mangoldt(100), 0.0);
    }

    #[test]
    fn psi_stays_in_chebyshev_band() {
        for x in [1e3, 1e4, 1e5, 1e6] {
            let psi = chebyshev_psi(x);
            let band = 3.0 * x.sqrt() * x.ln() * x.ln();
            assert!(
                (psi - x).abs() <= band,
                "psi({x}) = {psi} outside band {band}"
            );
        }
    }

    proptest! {
        #[test]
        fn primes_in_equals_filtered_table(a in 2.0f64..4000.0, span in 0.0f64..1000.0) {
            let b = a + span;
            let got = primes_in(a, b).unwrap();
            let expect: Vec<u64> = PrimeTable::new(b.ceil() as u64 + 1)
                .primes()
                .iter()
                .copied()
                .filter(|&p| (p as f64) > a && (p as f64) <= b)
                .collect();
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn von_mangoldt_vanishes_off_prime_powers(m in 2u64..5000) {
            let lam = von_mangoldt(m);
            let mut n = m;
            let mut d = 2;
            let mut first = 0u64;
            while d * d <= n {
                if n % d == 0 { first = d; while n % d == 0 { n /= d; } break; }
                d += 1;
            }
            let is_power = first == 0 || n == 1;
            if is_power {
                let p = if first == 0 { m } else { first };
                prop_assert!((lam - (p as f64).ln()).abs() < 1e-12);
            } else {
                prop_assert_eq!(lam, 0.0);
            }
        }
    }
}
