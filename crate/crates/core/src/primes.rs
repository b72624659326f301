//! Prime enumeration for sweep drivers.

use alloc::vec;
use alloc::vec::Vec;

/// Odd primes in `[lo, hi]` in increasing order, via a sieve of Eratosthenes.
///
/// `2` is never returned: every consumer in this crate works over odd
/// characteristic.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    sieve_to(hi)
        .into_iter()
        .filter(|&p| p >= lo && p >= 3)
        .collect()
}

/// All primes `<= hi` in increasing order (including `2`).
pub fn sieve_to(hi: u64) -> Vec<u64> {
    if hi < 2 {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    for k in 2..=n {
        if !composite[k] {
            out.push(k as u64);
        }
    }
    out
}

/// Exact prime-counting function by sieving; intended for `x <= 10^7`.
pub fn prime_count(x: u64) -> u64 {
    sieve_to(x).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sieve() {
        assert_eq!(sieve_to(1), Vec::<u64>::new());
        assert_eq!(sieve_to(2), vec![2]);
        assert_eq!(sieve_to(13), vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn odd_primes_skip_two() {
        assert_eq!(odd_primes_in(2, 13), vec![3, 5, 7, 11, 13]);
        assert_eq!(odd_primes_in(4, 10), vec![5, 7]);
    }

    #[test]
    fn pi_reference_values() {
        assert_eq!(prime_count(10), 4);
        assert_eq!(prime_count(100), 25);
        assert_eq!(prime_count(10_000), 1229);
    }
}
