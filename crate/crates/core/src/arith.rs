//! Small integer arithmetic: divisors, factorization, Euler's totient and the
//! number-theoretic Möbius function.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0, "divisors of zero");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization as `(prime, exponent)` pairs, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_dividing(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// The largest power of `p` dividing `n`.
pub fn p_part(n: u64, p: u64) -> u64 {
    let mut n = n;
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Number-theoretic Möbius function.
pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Residues `1 <= t <= k` coprime to `k` (with `k = 1` giving `[1]`).
pub fn units_mod(k: u64) -> Vec<u64> {
    if k == 1 {
        return vec![1];
    }
    (1..k).filter(|&t| gcd(t, k) == 1).collect()
}

/// Representative of `t mod k` in `1..=k`, so the unit group mod 1 is `{1}`.
pub fn reduce_unit(t: i64, k: u64) -> u64 {
    let r = t.rem_euclid(k as i64) as u64;
    if r == 0 {
        k
    } else {
        r
    }
}

pub fn inverse_mod(t: u64, k: u64) -> Option<u64> {
    if k == 1 {
        return Some(1);
    }
    let e = (t as i64).extended_gcd(&(k as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(reduce_unit(e.x, k))
}
