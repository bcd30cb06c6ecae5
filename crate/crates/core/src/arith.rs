//! Small-integer number theory used throughout the crate: gcds, integer
//! roots, trial-division factoring, Kronecker symbols and square roots
//! modulo primes.

use num_integer::Integer;

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Floor of the square root of `n`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Largest `r` with `r^k <= n` (`k >= 1`).
pub fn iroot(n: u128, k: u32) -> u128 {
    assert!(k >= 1);
    if k == 1 || n < 2 {
        return n;
    }
    let fits = |r: u128| r.checked_pow(k).is_some_and(|v| v <= n);
    let mut r = (n as f64).powf(1.0 / k as f64) as u128;
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

pub fn is_squarefree(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Exponent of the prime `p` in `n` (`n != 0`).
pub fn valuation(mut n: u128, p: u128) -> u32 {
    debug_assert!(n != 0 && p > 1);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Trial-division factorization. Primes are tried up to `bound`; a leftover
/// cofactor is accepted as prime only when it is below `bound²`.
/// Returns `None` when the factorization cannot be certified.
pub fn factor_with_bound(mut n: u128, bound: u128) -> Option<Vec<(u128, u32)>> {
    let mut out = Vec::new();
    if n <= 1 {
        return Some(out);
    }
    let mut p = 2u128;
    while p * p <= n {
        if p > bound {
            return None;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Some(out)
}

/// Smallest-prime-factor table for fast repeated factoring of small numbers.
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(2);
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfTable { spf }
    }

    pub fn limit(&self) -> u128 {
        (self.spf.len() - 1) as u128
    }

    /// Distinct prime factors with exponents. Falls back to trial division
    /// above the table limit.
    pub fn factor(&self, n: u128) -> Vec<(u128, u32)> {
        if n > self.limit() {
            return factor_with_bound(n, u128::MAX).expect("unbounded trial division");
        }
        let mut n = n as usize;
        let mut out: Vec<(u128, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p as u128, e));
        }
        out
    }

    pub fn primes_up_to(&self, n: u128) -> impl Iterator<Item = u128> + '_ {
        let top = n.min(self.limit()) as usize;
        (2..=top).filter(move |&i| self.spf[i] as usize == i).map(|i| i as u128)
    }
}

pub fn mod_pow(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if let Some(p) = a.checked_mul(b) {
        return p % m;
    }
    // double-and-add for moduli above 2^64
    let (mut a, mut b, mut acc) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = (acc + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    acc
}

/// Kronecker symbol `(a / n)` for `n > 0`.
pub fn kronecker(a: i128, n: u128) -> i8 {
    assert!(n > 0, "kronecker symbol needs n > 0");
    let mut n = n;
    let mut result: i8 = 1;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if tz % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= tz;
    }
    // now n odd: Jacobi symbol
    let mut a = a.rem_euclid(n as i128) as u128;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A square root of `a` modulo the odd prime `p`, if one exists.
pub fn sqrt_mod_prime(a: u128, p: u128) -> Option<u128> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(mod_pow(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u128;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = mod_pow(c, 1u128 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Euler's totient for small `n`.
pub fn totient(n: u64) -> u64 {
    factor_with_bound(n as u128, u128::MAX)
        .unwrap()
        .iter()
        .fold(n, |acc, &(p, _)| acc / p as u64 * (p as u64 - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roots() {
        assert_eq!(iroot(1000, 3), 10);
        assert_eq!(iroot(999, 3), 9);
        assert_eq!(iroot(u64::MAX as u128, 2), u32::MAX as u128);
        assert_eq!(iroot(0, 4), 0);
        assert_eq!(iroot(17, 1), 17);
    }

    #[test]
    fn kronecker_matches_legendre_by_enumeration() {
        for &p in &[3u128, 5, 7, 11, 13, 17, 19, 23] {
            for a in -30i128..30 {
                let r = a.rem_euclid(p as i128) as u128;
                let expected = if r == 0 {
                    0
                } else if (1..p).any(|x| x * x % p == r) {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        // (a/2) = 0 for even a, 1 for a = ±1 mod 8, -1 for a = ±3 mod 8
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-20, 3), 1);
        assert_eq!(kronecker(-4, 3), -1);
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for &p in &[3u128, 5, 13, 17, 41, 97, 113, 1_000_003] {
            for a in 1..40u128 {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(r * r % p, a % p);
                } else {
                    assert_eq!(kronecker(a as i128, p), -1);
                }
            }
        }
    }

    #[test]
    fn spf_factoring() {
        let t = SpfTable::new(1000);
        assert_eq!(t.factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(t.factor(1), vec![]);
        assert_eq!(t.factor(1009 * 1013), vec![(1009, 1), (1013, 1)]);
        assert_eq!(t.primes_up_to(20).collect::<Vec<_>>(), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn bounded_factoring_refuses_uncertified_cofactors() {
        assert_eq!(factor_with_bound(91, 10), Some(vec![(7, 1), (13, 1)]));
        // 101 * 103 needs trial division past 10 to certify
        assert_eq!(factor_with_bound(101 * 103, 10), None);
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20i128..20 {
            for b in -20i128..20 {
                let (g, s, t) = ext_gcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert_eq!(g, gcd_i128(a, b));
            }
        }
    }
}
