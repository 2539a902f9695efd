use std::sync::OnceLock;

use rug::{Float, Integer, Rational};

use super::partitions::{hook_dim, partitions_of};
use super::tail::poisson_tail;
use crate::error::{GapError, Result};
use crate::numerics::ArithContext;
use crate::par;

/// Largest `n` for which all `n!` permutations are enumerated.
pub const MAX_PERMUTATION_SIZE: usize = 9;

/// Longest increasing subsequence of a permutation of `1..=n` by patience
/// sorting.
pub fn lis_length(perm: &[i64]) -> Result<usize> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &v in perm {
        let ok = v >= 1 && (v as usize) <= n && !seen[v as usize - 1];
        if !ok {
            return Err(GapError::InvalidParameter(format!("{perm:?} is not a permutation of 1..={n}")));
        }
        seen[v as usize - 1] = true;
    }
    Ok(patience(perm))
}

fn patience<T: Ord + Copy>(seq: &[T]) -> usize {
    let mut piles: Vec<T> = Vec::new();
    for &v in seq {
        match piles.binary_search(&v) {
            Ok(i) | Err(i) if i < piles.len() => piles[i] = v,
            _ => piles.push(v),
        }
    }
    piles.len()
}

/// Next permutation in lexicographic order; false after the last one.
fn next_permutation(a: &mut [u8]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_PERMUTATION_SIZE {
        return Err(GapError::ResourceBound(format!(
            "permutation enumeration is capped at n = {MAX_PERMUTATION_SIZE}, got {n}"
        )));
    }
    Ok(())
}

/// Number of permutations of `1..=n` with each LIS length, indexed by length.
pub fn lis_histogram(n: usize) -> Result<&'static [u64]> {
    static CACHE: [OnceLock<Vec<u64>>; MAX_PERMUTATION_SIZE + 1] =
        [const { OnceLock::new() }; MAX_PERMUTATION_SIZE + 1];
    check_size(n)?;
    Ok(CACHE[n].get_or_init(|| enumerate(n)))
}

fn enumerate(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![1];
    }
    // one batch per leading entry
    let batches = par::map((1..=n as u8).collect(), |first| {
        let mut hist = vec![0u64; n + 1];
        let mut rest: Vec<u8> = (1..=n as u8).filter(|&v| v != first).collect();
        let mut perm = Vec::with_capacity(n);
        loop {
            perm.clear();
            perm.push(first);
            perm.extend_from_slice(&rest);
            hist[patience(&perm)] += 1;
            if !next_permutation(&mut rest) {
                break;
            }
        }
        hist
    });
    let mut total = vec![0u64; n + 1];
    for hist in batches {
        for (t, h) in total.iter_mut().zip(hist) {
            *t += h;
        }
    }
    total
}

/// `Card{σ ∈ S_n : LIS(σ) <= k} / n!`, by enumeration.
pub fn p_k_n(k: usize, n: usize) -> Result<Rational> {
    let hist = lis_histogram(n)?;
    let count: u64 = hist.iter().take(k + 1).sum();
    Ok(Rational::from((Integer::from(count), Integer::from(Integer::factorial(n as u32)))))
}

/// The same probability by counting: `Σ (dim λ)²` over `|λ| = n`,
/// `λ_1 <= k`, divided by `n!`.
pub fn p_k_n_rsk(k: usize, n: usize) -> Result<Rational> {
    check_size(n)?;
    let mut count = Integer::new();
    for lambda in partitions_of(n, k) {
        count += hook_dim(&lambda).square();
    }
    Ok(Rational::from((count, Integer::from(Integer::factorial(n as u32)))))
}

/// `e^{-η²} Σ_{n <= n_max} η^{2n}/n! p_k^n` and the bound
/// `e^{-η²} Σ_{n > n_max} η^{2n}/n!` on what was left out.
pub fn poissonized_p(k: usize, eta: &Float, n_max: usize, ctx: &ArithContext) -> Result<(Float, Float)> {
    check_size(n_max)?;
    if eta.is_sign_negative() && !eta.is_zero() || !eta.is_finite() {
        return Err(GapError::InvalidParameter(format!("eta must be >= 0, got {}", eta.to_f64())));
    }
    let work = ctx.widened(32);
    let prec = work.precision_bits();
    let x = Float::with_val(prec, eta.square_ref());
    let mut weight = work.one();
    let mut sum = work.zero();
    for n in 0..=n_max {
        if n > 0 {
            weight *= &x;
            weight /= n as u32;
        }
        let p = p_k_n(k, n)?;
        sum += Float::with_val(prec, &weight * &p);
    }
    let damping = (-x.clone()).exp();
    let tail = poisson_tail(&x, n_max, &work)? * &damping;
    Ok((ctx.real(sum * damping), ctx.real(tail)))
}
