//! Append-only CSV cache for expensive evaluations. Rows are keyed by
//! (kind, n, sigma, t, prec); duplicate keys resolve to the lowest recorded
//! error, and a cache hit returns the stored bits unchanged.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    kind_tag: u8,
    n: u32,
    sigma_bits: u64,
    t_bits: u64,
    prec_bits: u64,
}

#[derive(Clone, Copy)]
pub struct CachedValue {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

fn kind_tag(kind: &str) -> u8 {
    match kind {
        "sn" => 0,
        "zeta" => 1,
        _ => 255,
    }
}

pub struct EvalCache {
    path: PathBuf,
    entries: BTreeMap<Key, CachedValue>,
    pending: Vec<(String, u32, f64, f64, f64, CachedValue)>,
    pub skipped_rows: usize,
}

impl EvalCache {
    /// Loads an existing cache file; malformed rows are counted and skipped.
    pub fn open(path: PathBuf) -> EvalCache {
        let mut cache = EvalCache {
            path,
            entries: BTreeMap::new(),
            pending: Vec::new(),
            skipped_rows: 0,
        };
        let Ok(text) = std::fs::read_to_string(&cache.path) else {
            return cache;
        };
        for (i, line) in text.lines().enumerate() {
            if i == 0 && line.starts_with("kind,") {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let parsed = (|| -> Option<(Key, CachedValue)> {
                if fields.len() != 8 {
                    return None;
                }
                let key = Key {
                    kind_tag: kind_tag(fields[0]),
                    n: fields[1].parse().ok()?,
                    sigma_bits: fields[2].parse::<f64>().ok()?.to_bits(),
                    t_bits: fields[3].parse::<f64>().ok()?.to_bits(),
                    prec_bits: fields[4].parse::<f64>().ok()?.to_bits(),
                };
                let value = CachedValue {
                    re: fields[5].parse().ok()?,
                    im: fields[6].parse().ok()?,
                    err: fields[7].parse().ok()?,
                };
                Some((key, value))
            })();
            match parsed {
                Some((key, value)) => {
                    let slot = cache.entries.entry(key).or_insert(value);
                    if value.err < slot.err {
                        *slot = value;
                    }
                }
                None => cache.skipped_rows += 1,
            }
        }
        cache
    }

    pub fn lookup(&self, kind: &str, n: u32, sigma: f64, t: f64, prec: f64) -> Option<CachedValue> {
        self.entries
            .get(&Key {
                kind_tag: kind_tag(kind),
                n,
                sigma_bits: sigma.to_bits(),
                t_bits: t.to_bits(),
                prec_bits: prec.to_bits(),
            })
            .copied()
    }

    pub fn record(
        &mut self,
        kind: &str,
        n: u32,
        sigma: f64,
        t: f64,
        prec: f64,
        value: CachedValue,
    ) {
        let key = Key {
            kind_tag: kind_tag(kind),
            n,
            sigma_bits: sigma.to_bits(),
            t_bits: t.to_bits(),
            prec_bits: prec.to_bits(),
        };
        let slot = self.entries.entry(key).or_insert(value);
        if value.err <= slot.err {
            *slot = value;
        }
        self.pending
            .push((kind.to_string(), n, sigma, t, prec, value));
    }

    /// Appends pending rows, creating the file with its header if needed.
    pub fn flush(&mut self) -> std::io::Result<()> {
        if self.pending.is_empty() {
            return Ok(());
        }
        let fresh = !self.path.exists();
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        if fresh {
            writeln!(file, "kind,n,sigma,t,prec,re,im,err")?;
        }
        for (kind, n, sigma, t, prec, v) in self.pending.drain(..) {
            writeln!(
                file,
                "{kind},{n},{sigma:?},{t:?},{prec:?},{:?},{:?},{:?}",
                v.re, v.im, v.err
            )?;
        }
        Ok(())
    }
}
