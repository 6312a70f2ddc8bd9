//! Small integer helpers shared by the analysis and batching modules.

/// Euclid's algorithm.
pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Trial division up to sqrt(k).
pub(crate) fn is_prime(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    if k % 2 == 0 {
        return k == 2;
    }
    let mut d = 3;
    while d * d <= k {
        if k % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Largest prime `<= k`. Caller guarantees `k >= 2`.
pub(crate) fn largest_prime_leq(k: u64) -> u64 {
    debug_assert!(k >= 2);
    (2..=k).rev().find(|&c| is_prime(c)).expect("a prime <= k exists for k >= 2")
}
