//! Exact evaluation of the path-function.
//!
//! `F(a) = 1` for a single block, otherwise `F(a)` is the sum of `F` over the
//! children of `a` (each block shortened by one, zeros reduced). `F` is
//! invariant under reversal, so the memo stores one entry per
//! `{a, reverse(a)}` pair under the lexicographically smaller key.
//!
//! Evaluation uses an explicit work stack; recursion depth would otherwise
//! grow with the total of the composition.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use rayon::prelude::*;
use thiserror::Error;

use crate::count::Count;
use crate::types::{compositions, Composition};
use crate::BigCount;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("count overflow while evaluating F({composition})")]
    Overflow { composition: Composition },
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("cache line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("cached F({composition}) = {stored} disagrees with recurrence value {computed}")]
    Inconsistent {
        composition: Composition,
        stored: String,
        computed: String,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Memoized evaluator for the path-function.
///
/// Safe to share between threads; concurrent evaluations fill the same memo
/// and always agree with single-threaded results because every stored value
/// is a pure function of its key.
pub struct PathFunction<C: Count = BigCount> {
    memo: DashMap<Composition, C>,
    lookups: AtomicU64,
    misses: AtomicU64,
}

impl<C: Count> Default for PathFunction<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Count> PathFunction<C> {
    pub fn new() -> Self {
        PathFunction {
            memo: DashMap::new(),
            lookups: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    /// Number of stored entries (one per composition/reverse pair of
    /// length at least two).
    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn stats(&self) -> MemoStats {
        MemoStats {
            entries: self.memo.len() as u64,
            lookups: self.lookups.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    fn cached(&self, key: &Composition) -> Option<C> {
        self.lookups.fetch_add(1, Ordering::Relaxed);
        // Clone out immediately: holding a shard guard across an insert deadlocks.
        self.memo.get(key).map(|v| v.value().clone())
    }

    fn store(&self, key: Composition, value: C) {
        self.misses.fetch_add(1, Ordering::Relaxed);
        self.memo.insert(key, value);
    }

    /// `F(c)`, exact.
    pub fn value(&self, c: &Composition) -> Result<C, EngineError> {
        if c.len() == 1 {
            return Ok(C::one());
        }
        let key = c.canonical();
        if let Some(v) = self.cached(&key) {
            return Ok(v);
        }
        let mut stack = vec![key.clone()];
        while let Some(top) = stack.last().cloned() {
            if self.memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let mut sum = C::zero();
            let mut pending = false;
            for child in top.children() {
                if child.len() == 1 {
                    if !pending {
                        sum = add(&sum, &C::one(), &top)?;
                    }
                    continue;
                }
                let child = child.canonical();
                match self.cached(&child) {
                    Some(v) if !pending => sum = add(&sum, &v, &top)?,
                    Some(_) => {}
                    None => {
                        pending = true;
                        stack.push(child);
                    }
                }
            }
            if !pending {
                self.store(top, sum);
                stack.pop();
            }
        }
        Ok(self.cached(&key).expect("root evaluated"))
    }

    /// Evaluates every composition with total at most `max_total`, one total
    /// at a time. Compositions of the same total are independent, so each
    /// level is computed in parallel on the current rayon pool.
    pub fn fill_to_total(&self, max_total: u32) -> Result<(), EngineError> {
        for total in 2..=max_total {
            let keys: Vec<Composition> = compositions(total)
                .filter(|c| c.len() > 1 && c.is_canonical() && !self.memo.contains_key(c))
                .collect();
            let values = keys
                .into_par_iter()
                .map(|key| {
                    let mut sum = C::zero();
                    for child in key.children() {
                        let v = self.value(&child)?;
                        sum = add(&sum, &v, &key)?;
                    }
                    Ok((key, sum))
                })
                .collect::<Result<Vec<_>, EngineError>>()?;
            for (key, value) in values {
                self.store(key, value);
            }
        }
        Ok(())
    }

    /// Copy of the memo ordered by key.
    pub fn snapshot(&self) -> MemoTable<C> {
        MemoTable {
            entries: self
                .memo
                .iter()
                .map(|e| (e.key().clone(), e.value().clone()))
                .collect(),
        }
    }

    /// Loads `table` into the memo after checking every entry against the
    /// recurrence. Entries are checked in order of increasing total, so each
    /// one is verified from values that are already trusted.
    pub fn import(&self, table: &MemoTable<C>) -> Result<(), CacheError> {
        let mut ordered: Vec<_> = table.entries.iter().collect();
        ordered.sort_by_key(|(c, _)| c.total());
        for (key, stored) in ordered {
            let computed = if key.len() == 1 {
                C::one()
            } else {
                let mut sum = C::zero();
                for child in key.children() {
                    sum = add(&sum, &self.value(&child)?, key)?;
                }
                sum
            };
            if computed != *stored {
                return Err(CacheError::Inconsistent {
                    composition: key.clone(),
                    stored: stored.to_string(),
                    computed: computed.to_string(),
                });
            }
            if key.len() > 1 {
                self.memo.entry(key.canonical()).or_insert(computed);
            }
        }
        Ok(())
    }

    pub fn save_cache(&self, path: &Path) -> Result<(), CacheError> {
        self.snapshot().save(path)
    }

    /// Loads and verifies a cache file.
    pub fn load_cache(&self, path: &Path) -> Result<(), CacheError> {
        self.import(&MemoTable::load(path)?)
    }
}

fn add<C: Count>(a: &C, b: &C, at: &Composition) -> Result<C, EngineError> {
    a.checked_add(b).ok_or_else(|| EngineError::Overflow {
        composition: at.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoStats {
    pub entries: u64,
    pub lookups: u64,
    pub misses: u64,
}

impl MemoStats {
    pub fn hit_rate(&self) -> f64 {
        if self.lookups == 0 {
            0.0
        } else {
            1.0 - self.misses as f64 / self.lookups as f64
        }
    }
}

/// Persistent form of the memo.
///
/// Text, one `a1,a2,...,as=VALUE` per line with `VALUE` in decimal, lines
/// sorted by composition; `#` starts a comment line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoTable<C: Count = BigCount> {
    entries: BTreeMap<Composition, C>,
}

impl<C: Count> Default for MemoTable<C> {
    fn default() -> Self {
        MemoTable {
            entries: BTreeMap::new(),
        }
    }
}

impl<C: Count> MemoTable<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Composition, value: C) {
        self.entries.insert(c.canonical(), value);
    }

    /// Looks up `c` or its reverse.
    pub fn get(&self, c: &Composition) -> Option<&C> {
        self.entries.get(&c.canonical())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Composition, &C)> {
        self.entries.iter()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# pathcensus memo, {} entries", self.entries.len())?;
        for (c, v) in &self.entries {
            writeln!(w, "{c}={v}")?;
        }
        w.flush()
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self, CacheError> {
        let mut table = MemoTable::new();
        for (i, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            let number = i + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let format = |reason: String| CacheError::Format {
                line: number,
                reason,
            };
            let (key, value) = text
                .split_once('=')
                .ok_or_else(|| format("missing '='".into()))?;
            let key: Composition = key.parse().map_err(|e| format(format!("{e}")))?;
            let value: C = value
                .trim()
                .parse()
                .map_err(|_| format(format!("invalid value {:?}", value.trim())))?;
            table.insert(key, value);
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let file = File::create(path)?;
        self.write_to(BufWriter::new(file))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CacheError> {
        Self::read_from(File::open(path)?)
    }
}

/// `binomial(n, k)` by the multiplicative formula; `None` on overflow.
pub fn binomial<C: Count>(n: u64, k: u64) -> Option<C> {
    if k > n {
        return Some(C::zero());
    }
    let k = k.min(n - k);
    let mut acc = C::one();
    for i in 1..=k {
        let factor = C::from_u64_exact(n - k + i)?;
        let divisor = C::from_u64_exact(i)?;
        acc = acc.checked_mul(&factor)? / divisor;
    }
    Some(acc)
}

/// Closed form for two blocks, `binomial(m + n, m)`. A cross-check for the
/// recurrence; the engine never uses it.
pub fn f_two_block<C: Count>(m: u32, n: u32) -> Option<C> {
    binomial(u64::from(m) + u64::from(n), u64::from(m))
}
