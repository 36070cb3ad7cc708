//! Per-`c` counting work spread over threads, with optional on-disk
//! checkpoints so that long runs resume where they stopped.
//!
//! Each `c` is independent; results are stored by position in the sorted list
//! of `c` values, so the merged output does not depend on the thread count.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use heis_mertens_core::counting::{c_values, count_c, CUnit, CELLS};
use heis_mertens_core::{Order, OrderElement, Q};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::order_spec::fingerprint_text;

/// Environment variable naming the checkpoint directory.
pub const CACHE_ENV: &str = "HEIS_MERTENS_CACHE";

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Stored {
    version: u32,
    c: [i64; 4],
    norm: i64,
    count: u64,
    hist: Vec<u64>,
}

/// Checkpoint directory for one order and scale.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(root: &Path, order: &Order, scale: i64) -> io::Result<Self> {
        let mut h = Sha256::new();
        h.update(format!("v{CACHE_VERSION};{};scale={scale}", fingerprint_text(order)));
        let key: String = h.finalize().iter().take(12).map(|b| format!("{b:02x}")).collect();
        let dir = root.join(format!("{}-{key}", order.name));
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// From `HEIS_MERTENS_CACHE`, if set.
    pub fn from_env(order: &Order, scale: i64) -> io::Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(root) if !root.is_empty() => Cache::new(Path::new(&root), order, scale).map(Some),
            _ => Ok(None),
        }
    }

    fn path(&self, c: &OrderElement) -> PathBuf {
        let [a, b, d, e] = c.coords;
        self.dir.join(format!("c_{a}_{b}_{d}_{e}.json"))
    }

    /// A stored unit for `c`, ignoring unreadable or mismatched files.
    pub fn load(&self, c: &OrderElement, norm: i64) -> Option<CUnit> {
        let text = fs::read_to_string(self.path(c)).ok()?;
        let s: Stored = serde_json::from_str(&text).ok()?;
        if s.version != CACHE_VERSION || s.c != c.coords || s.norm != norm || s.hist.len() != CELLS {
            return None;
        }
        if s.hist.iter().sum::<u64>() != s.count {
            return None;
        }
        Some(CUnit { c: *c, norm, count: s.count, hist: s.hist.try_into().ok()? })
    }

    /// Write through a temporary file so an interrupted write leaves no
    /// partial checkpoint.
    pub fn store(&self, u: &CUnit) -> io::Result<()> {
        let s = Stored { version: CACHE_VERSION, c: u.c.coords, norm: u.norm, count: u.count, hist: u.hist.to_vec() };
        let path = self.path(&u.c);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&s)?)?;
        fs::rename(tmp, path)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

/// Units for every `c` with `0 < n(c) ≤ s_max`, in the order of [`c_values`].
pub fn compute_units(order: &Order, s_max: &Q, scale: i64, threads: usize, cache: Option<&Cache>) -> Vec<CUnit> {
    let cs = c_values(order, s_max, scale);
    let slots: Vec<Mutex<Option<CUnit>>> = cs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(c) = cs.get(i) else { break };
        let norm = order.norm(c);
        let unit = match cache.and_then(|k| k.load(c, norm)) {
            Some(u) => u,
            None => {
                let u = count_c(order, c, scale);
                if let Some(k) = cache {
                    // a failed checkpoint only costs a recount later
                    let _ = k.store(&u);
                }
                u
            }
        };
        *slots[i].lock().unwrap() = Some(unit);
    };
    let threads = threads.max(1).min(cs.len().max(1));
    if threads == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(work);
            }
        });
    }
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every c visited")).collect()
}

/// Summed histogram of the units with `n(c) ≤ s`.
pub fn histogram(units: &[CUnit], s: &Q) -> [u64; CELLS] {
    let mut h = [0u64; CELLS];
    for u in units.iter().filter(|u| Q::from_integer(u.norm.into()) <= *s) {
        for (a, b) in h.iter_mut().zip(&u.hist) {
            *a += b;
        }
    }
    h
}
