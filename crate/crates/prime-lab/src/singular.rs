//! Hardy–Littlewood singular-series constants for admissible tuple patterns.
//!
//! For a pattern with k offsets and w(p) distinct residues mod p,
//!
//!   C = ∏_p p^{k−1} (p − w(p)) / (p − 1)^k
//!
//! Primes above the largest offset see w(p) = k, where the factor is
//! 1 − k(k−1)/(2p²) + O(p⁻³), so the product converges and a truncation at
//! prime_cutoff P carries a log-scale tail below Σ_{p>P} k²/p². Partial
//! summation with π(t) < 1.3·t/ln t (valid for t ≥ 17) bounds that sum by
//! 2.6·k²/(P·ln P).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sieve::{primes_up_to, TuplePattern};

/// A truncated singular-series value with its tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularConstant {
    pub pattern: TuplePattern,
    pub value: f64,
    pub tail_bound: f64,
    pub prime_cutoff: u64,
}

/// Number of distinct residues of the pattern's offsets mod p.
pub fn residue_count(pattern: &TuplePattern, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(residues_mod(pattern, p))
}

fn residues_mod(pattern: &TuplePattern, p: u64) -> u32 {
    let mut distinct = 0u32;
    let mut seen = vec![false; p.min(pattern.k() as u64 + 1).max(1) as usize];
    // residues above k offsets can't add classes beyond k; map via modulo only
    let mut seen_large = std::collections::HashSet::new();
    for &o in pattern.offsets() {
        let r = o % p;
        if (r as usize) < seen.len() {
            if !seen[r as usize] {
                seen[r as usize] = true;
                distinct += 1;
            }
        } else if seen_large.insert(r) {
            distinct += 1;
        }
    }
    distinct
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

const MAX_CUTOFF: u64 = 200_000_000;
const BLOCK: usize = 1 << 16;

/// Log-scale tail bound for truncation at P: 2.6·k²/(P·ln P).
fn tail_log_bound(k: u32, cutoff: u64) -> f64 {
    let p = cutoff as f64;
    2.6 * (k as f64).powi(2) / (p * p.ln())
}

/// Singular-series constant, truncated so that `tail_bound ≤ tol`.
///
/// Internally parallelizes over fixed prime blocks; block sums are combined
/// in index order, so the result does not depend on the worker count.
pub fn singular_series(pattern: &TuplePattern, tol: f64) -> Result<SingularConstant> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if !pattern.is_admissible() {
        return Err(Error::Pattern(format!(
            "pattern {pattern} is inadmissible; a product factor vanishes"
        )));
    }
    let k = pattern.k() as u32;
    if k == 1 {
        // w(p) = 1 for every p: each factor is exactly 1.
        return Ok(SingularConstant {
            pattern: pattern.clone(),
            value: 1.0,
            tail_bound: 0.0,
            prime_cutoff: 2,
        });
    }

    // First pass at a modest cutoff fixes the scale; then solve
    // P ln P = 2.6 k² v / tol for the cutoff that meets tol.
    let v0 = product_to(pattern, 1_000_000);
    let target = 2.6 * (k as f64).powi(2) * v0 * 1.25 / tol;
    let mut p_est = target / target.ln().max(2.0);
    p_est = target / p_est.ln().max(2.0);
    let cutoff = (p_est.ceil() as u64).clamp(1_000_000, MAX_CUTOFF);
    let value = if cutoff > 1_000_000 { product_to(pattern, cutoff) } else { v0 };
    let tail_bound = value * tail_log_bound(k, cutoff).exp_m1();
    if tail_bound > tol {
        return Err(Error::Precision { requested: tol, achieved: tail_bound });
    }
    Ok(SingularConstant {
        pattern: pattern.clone(),
        value,
        tail_bound,
        prime_cutoff: cutoff,
    })
}

fn product_to(pattern: &TuplePattern, cutoff: u64) -> f64 {
    let k = pattern.k() as u32;
    let kf = k as f64;
    let small_bound = pattern.max_offset().max(k as u64);
    let primes = primes_up_to(cutoff);

    // exact small-prime factors, where w(p) varies
    let mut prefactor = 1.0f64;
    let split = primes.partition_point(|&p| p <= small_bound);
    for &p in &primes[..split] {
        let w = residues_mod(pattern, p) as f64;
        let pf = p as f64;
        prefactor *= pf.powi(k as i32 - 1) * (pf - w) / (pf - 1.0).powi(k as i32);
    }

    // large primes all have w = k; sum ln f = ln1p(-k/p) - k·ln1p(-1/p),
    // each term O(k²/p²), so no cancellation against the running sum.
    // Fixed blocks combined in order keep the result scheduler-independent.
    let partials: Vec<f64> = primes[split..]
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut sum = 0.0f64;
            let mut carry = 0.0f64;
            for &p in chunk {
                let pf = p as f64;
                let term = (-kf / pf).ln_1p() - kf * (-1.0 / pf).ln_1p();
                let y = term - carry;
                let t = sum + y;
                carry = (t - sum) - y;
                sum = t;
            }
            sum
        })
        .collect();
    let log_sum: f64 = partials.iter().sum();
    prefactor * log_sum.exp()
}
