//! Small integer arithmetic: trial-division factorisation, primality,
//! divisors and square roots modulo a prime.

/// Prime factorisation by trial division, primes in increasing order.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5;
    while p * p <= m {
        push(p, &mut m);
        push(p + 2, &mut m);
        p += 6;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut p = 5;
    while p * p <= n {
        if n.is_multiple_of(p) || n.is_multiple_of(p + 2) {
            return false;
        }
        p += 6;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i as u64))
        .collect()
}

/// Positive divisors in increasing order.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(m) {
        let current = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(current.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// A square root of `a` modulo the odd prime `p` (Tonelli–Shanks), returning
/// the smaller of the two roots. `None` when `a` is a non-residue.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r.min(p - r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_roundtrip() {
        for m in 1..2000u64 {
            let prod: u64 = factorize(m).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, m);
            assert!(factorize(m).iter().all(|&(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn divisors_of_twelve() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let ps = primes_up_to(1000);
        let brute: Vec<u64> = (0..=1000).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, brute);
    }

    #[test]
    fn tonelli_shanks() {
        for p in primes_up_to(2000).into_iter().skip(1) {
            for a in [2u64, 3, 5, p - 3] {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(r * r % p, a % p);
                    assert!(r <= p - r);
                } else {
                    assert_eq!(pow_mod(a, (p - 1) / 2, p), p - 1);
                }
            }
        }
    }
}
