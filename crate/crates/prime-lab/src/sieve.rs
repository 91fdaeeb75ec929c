//! Exact prime and prime k-tuple counts via a segmented sieve of Eratosthenes.
//!
//! Storage is odd-only bitmaps over segments sized to stay cache-resident.
//! Segments are independent: each one is sieved with the shared base primes
//! and scanned for tuple starts, so segments can run on any number of workers
//! and the merged count is identical regardless of scheduling. A tuple is
//! counted by its first element n ≤ x; the remaining elements may exceed x,
//! which the per-segment bitmap covers with a `max_offset` extension.
//!
//! Counts are optionally backed by an append-only text cache
//! (`counts.cache`), one CRC-checked record per line.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest admissible pattern offset; bounds the per-segment bitmap extension.
const MAX_PATTERN_OFFSET: u64 = 10_000_000;

/// An admissible-candidate offset pattern (0, 2m₁, …, 2m_{k−1}) identifying a
/// prime k-tuple family. Structural invariants (first offset 0, strictly
/// increasing, all even) are enforced at construction; admissibility is a
/// separate, decidable query.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuplePattern {
    offsets: Vec<u64>,
}

impl TuplePattern {
    pub fn new(offsets: Vec<u64>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::Pattern("pattern must contain at least the offset 0".into()));
        }
        if offsets[0] != 0 {
            return Err(Error::Pattern(format!(
                "first offset must be 0, got {}",
                offsets[0]
            )));
        }
        for w in offsets.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Pattern(format!(
                    "offsets must be strictly increasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        if let Some(&odd) = offsets.iter().find(|&&o| o % 2 != 0) {
            return Err(Error::Pattern(format!("offsets must be even, got {odd}")));
        }
        let max = *offsets.last().unwrap();
        if max > MAX_PATTERN_OFFSET {
            return Err(Error::Pattern(format!(
                "offset {max} exceeds the supported maximum {MAX_PATTERN_OFFSET}"
            )));
        }
        Ok(TuplePattern { offsets })
    }

    /// The degenerate single-prime pattern (0); counting it gives π(x).
    pub fn single() -> Self {
        TuplePattern { offsets: vec![0] }
    }

    /// The twin pattern (0, 2).
    pub fn twin() -> Self {
        TuplePattern { offsets: vec![0, 2] }
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn k(&self) -> usize {
        self.offsets.len()
    }

    pub fn max_offset(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    /// True iff for every prime p ≤ k the offsets occupy at most p − 1
    /// residue classes mod p. Primes above k can never be covered: there are
    /// only k offsets.
    pub fn is_admissible(&self) -> bool {
        let k = self.k() as u64;
        for p in primes_up_to(k) {
            let mut seen = vec![false; p as usize];
            let mut distinct = 0u64;
            for &o in &self.offsets {
                let r = (o % p) as usize;
                if !seen[r] {
                    seen[r] = true;
                    distinct += 1;
                }
            }
            if distinct == p {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for TuplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, o) in self.offsets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

impl FromStr for TuplePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let offsets = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Pattern(format!("invalid offset {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        TuplePattern::new(offsets)
    }
}

/// How a count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Sieved,
    Cached,
}

/// An exact tuple count: the number of n ≤ limit with n + o prime for every
/// offset o of the pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub limit: u64,
    pub pattern: TuplePattern,
    pub count: u64,
    pub provenance: Provenance,
}

/// All primes ≤ limit, by a plain odd-only sieve. Intended for base primes
/// and for moderate enumerations (up to ~10⁸); the segmented machinery below
/// is for counting, not listing.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut primes = vec![2];
    if limit < 3 {
        return primes;
    }
    // bit i represents the odd number 2i + 3
    let bits = ((limit - 3) / 2 + 1) as usize;
    let mut composite = vec![0u64; bits.div_ceil(64)];
    let mut i = 0usize;
    loop {
        let p = 2 * i as u64 + 3;
        if p * p > limit {
            break;
        }
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            let mut j = ((p * p) - 3) / 2;
            while (j as usize) < bits {
                composite[j as usize / 64] |= 1 << (j as usize % 64);
                j += p;
            }
        }
        i += 1;
    }
    for i in 0..bits {
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            primes.push(2 * i as u64 + 3);
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Sieve one extended segment and count tuple starts in [lo, count_end).
///
/// The bitmap covers odd numbers in [lo, ext_hi); a set bit marks a
/// composite. `lo` must be odd and ≥ 3.
fn count_segment(offsets: &[u64], base_primes: &[u64], lo: u64, count_end: u64, ext_hi: u64) -> u64 {
    debug_assert!(lo % 2 == 1 && lo >= 3);
    // odd numbers in [lo, ext_hi), lo odd
    let bits = ext_hi.saturating_sub(lo).div_ceil(2) as usize;
    if bits == 0 {
        return 0;
    }
    let mut marked = vec![0u64; bits.div_ceil(64)];

    for &p in base_primes {
        if p * p >= ext_hi {
            break;
        }
        if p == 2 {
            continue;
        }
        let mut start = lo.div_ceil(p) * p;
        if start < p * p {
            start = p * p;
        }
        if start % 2 == 0 {
            start += p;
        }
        let mut idx = (start - lo) / 2;
        while (idx as usize) < bits {
            marked[idx as usize / 64] |= 1 << (idx % 64);
            idx += p;
        }
    }

    // bits indexing numbers n in [lo, count_end) are the candidates
    let count_bits = (count_end.saturating_sub(lo).div_ceil(2) as usize).min(bits);
    if count_bits == 0 {
        return 0;
    }

    let is_prime_bit = |idx: u64| -> bool {
        marked[idx as usize / 64] & (1 << (idx % 64)) == 0
    };

    if offsets.len() == 1 {
        // π(x) fast path: popcount of clear bits below count_bits
        let full_words = count_bits / 64;
        let mut count: u64 = marked[..full_words]
            .iter()
            .map(|w| w.count_zeros() as u64)
            .sum();
        let rem = count_bits % 64;
        if rem > 0 {
            let w = marked[full_words] | !((1u64 << rem) - 1);
            count += w.count_zeros() as u64;
        }
        return count;
    }

    let mut count = 0u64;
    let scan_words = count_bits.div_ceil(64);
    for (wi, &word) in marked[..scan_words].iter().enumerate() {
        let mut clear = !word;
        let base = wi * 64;
        if base + 64 > count_bits {
            clear &= (1u64 << (count_bits - base)) - 1;
        }
        while clear != 0 {
            let b = clear.trailing_zeros() as usize;
            clear &= clear - 1;
            let idx = (base + b) as u64;
            let hit = offsets[1..]
                .iter()
                .all(|&o| is_prime_bit(idx + o / 2));
            if hit {
                count += 1;
            }
        }
    }
    count
}

mod cache {
    //! Append-only count cache: `limit<TAB>offsets<TAB>count<TAB>crc32`
    //! per line, decimal ASCII. The checksum covers the exact bytes of the
    //! three preceding fields including the separating tabs; a line whose
    //! checksum does not match is skipped and the count recomputed.

    use std::collections::HashMap;
    use std::fs;
    use std::io::Write;
    use std::path::{Path, PathBuf};
    use std::sync::Mutex;

    use crate::error::Result;

    pub const CACHE_FILE: &str = "counts.cache";

    pub(super) struct CountCache {
        path: PathBuf,
        // Guards both the map and file appends: single writer.
        state: Mutex<HashMap<(u64, String), u64>>,
    }

    impl CountCache {
        pub(super) fn open(dir: &Path) -> Result<Self> {
            fs::create_dir_all(dir)?;
            let path = dir.join(CACHE_FILE);
            let mut entries = HashMap::new();
            if let Ok(text) = fs::read_to_string(&path) {
                for line in text.lines() {
                    if let Some((limit, offsets, count)) = parse_line(line) {
                        entries.insert((limit, offsets), count);
                    }
                }
            }
            Ok(CountCache { path, state: Mutex::new(entries) })
        }

        pub(super) fn get(&self, limit: u64, pattern: &str) -> Option<u64> {
            self.state
                .lock()
                .unwrap()
                .get(&(limit, pattern.to_string()))
                .copied()
        }

        pub(super) fn put(&self, limit: u64, pattern: &str, count: u64) -> Result<()> {
            let mut state = self.state.lock().unwrap();
            state.insert((limit, pattern.to_string()), count);
            let payload = format!("{limit}\t{pattern}\t{count}");
            let crc = crc32fast::hash(payload.as_bytes());
            let mut file = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(&self.path)?;
            writeln!(file, "{payload}\t{crc}")?;
            Ok(())
        }
    }

    fn parse_line(line: &str) -> Option<(u64, String, u64)> {
        let (payload, crc_text) = line.rsplit_once('\t')?;
        let crc: u32 = crc_text.parse().ok()?;
        if crc32fast::hash(payload.as_bytes()) != crc {
            return None;
        }
        let mut fields = payload.split('\t');
        let limit = fields.next()?.parse().ok()?;
        let offsets = fields.next()?.to_string();
        let count = fields.next()?.parse().ok()?;
        if fields.next().is_some() {
            return None;
        }
        Some((limit, offsets, count))
    }
}

pub use cache::CACHE_FILE;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "PRIME_LAB_CACHE_DIR";

/// Segmented sieve with a configurable budget and optional disk cache.
///
/// All query methods take `&self` and are safe to call concurrently; cache
/// writes are serialized internally.
pub struct Sieve {
    budget: u64,
    segment_len: u64,
    cache: Option<cache::CountCache>,
}

impl Default for Sieve {
    fn default() -> Self {
        Sieve {
            budget: 1_000_000_000,
            // ~2M numbers → 128 KiB odd-only bitmap, comfortably L2-resident.
            segment_len: 1 << 21,
            cache: None,
        }
    }
}

impl Sieve {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_segment_len(mut self, len: u64) -> Self {
        self.segment_len = len.max(64) & !1;
        self
    }

    /// Attach the line cache in `dir` (created if missing).
    pub fn with_cache_dir(mut self, dir: impl AsRef<Path>) -> Result<Self> {
        self.cache = Some(cache::CountCache::open(dir.as_ref())?);
        Ok(self)
    }

    /// Attach the cache at `$PRIME_LAB_CACHE_DIR`, defaulting to `./.cache`.
    pub fn with_default_cache(self) -> Result<Self> {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(std::path::PathBuf::from)
            .unwrap_or_else(|| "./.cache".into());
        self.with_cache_dir(dir)
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Exact π(x).
    pub fn prime_count(&self, x: u64) -> Result<CountRecord> {
        self.tuple_count(&TuplePattern::single(), x)
    }

    /// Exact number of n ≤ x such that n + o is prime for every offset o.
    pub fn tuple_count(&self, pattern: &TuplePattern, x: u64) -> Result<CountRecord> {
        if x == 0 {
            return Err(Error::Domain("count limit must be at least 1".into()));
        }
        if !pattern.is_admissible() {
            return Err(Error::Pattern(format!(
                "pattern {pattern} is inadmissible: its residues cover every class \
                 modulo some prime p <= {}",
                pattern.k()
            )));
        }
        let key = pattern.to_string();
        if let Some(cache) = &self.cache {
            if let Some(count) = cache.get(x, &key) {
                return Ok(CountRecord {
                    limit: x,
                    pattern: pattern.clone(),
                    count,
                    provenance: Provenance::Cached,
                });
            }
        }
        if x > self.budget {
            return Err(Error::BudgetExceeded { x, budget: self.budget });
        }
        let count = self.sieve_count(pattern, x);
        if let Some(cache) = &self.cache {
            cache.put(x, &key, count)?;
        }
        Ok(CountRecord {
            limit: x,
            pattern: pattern.clone(),
            count,
            provenance: Provenance::Sieved,
        })
    }

    fn sieve_count(&self, pattern: &TuplePattern, x: u64) -> u64 {
        let k = pattern.k();
        // 2 starts a tuple only for the degenerate pattern: 2 + even > 2 is even.
        let mut count = (k == 1 && x >= 2) as u64;
        if x < 3 {
            return count;
        }
        let max_off = pattern.max_offset();
        let global_ext = x + max_off;
        let base_primes = primes_up_to(isqrt(global_ext));
        let seg = self.segment_len;
        let num_segments = (x + 1 - 3).div_ceil(seg).max(1);

        count += (0..num_segments)
            .into_par_iter()
            .map(|i| {
                let lo = 3 + i * seg;
                let hi = (lo + seg).min(x + 1);
                let ext_hi = hi + max_off;
                count_segment(pattern.offsets(), &base_primes, lo, hi, ext_hi)
            })
            .sum::<u64>();
        count
    }
}
