//! Small integer number theory on machine words.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, r)` when `q = p^r` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut r = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        r += 1;
    }
    Some((p, r))
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn modn(a: i64, n: u64) -> u64 {
    a.rem_euclid(n as i64) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u128;
    let mut bb = (b % m) as u128;
    let mm = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    b = r as u64;
    b
}

pub fn inv_mod(a: i64, n: u64) -> Option<u64> {
    let a = modn(a, n) as i64;
    let g = a.extended_gcd(&(n as i64));
    if g.gcd != 1 {
        return None;
    }
    Some(modn(g.x, n))
}

pub fn is_unit(a: i64, n: u64) -> bool {
    (modn(a, n)).gcd(&n) == 1
}

/// Multiplicative order of a unit `a` modulo `n`.
pub fn mult_order(a: u64, n: u64) -> u64 {
    let mut x = a % n;
    let mut k = 1;
    while x != 1 % n {
        x = x * a % n;
        k += 1;
    }
    k
}

pub fn smallest_primitive_root(p: u64) -> u64 {
    let order = p - 1;
    let fs = prime_factors(order);
    (1..p)
        .find(|&g| fs.iter().all(|q| pow_mod(g, order / q, p) != 1))
        .expect("primes have primitive roots")
}

/// Prime powers `q` with `lo <= q <= hi`.
pub fn prime_powers_upto(hi: u64) -> Vec<u64> {
    (2..=hi).filter(|&q| prime_power(q).is_some()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(7), 6);
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(smallest_primitive_root(7), 3);
        assert_eq!(smallest_primitive_root(13), 2);
        assert_eq!(inv_mod(-2, 7), Some(3));
        assert_eq!(mult_order(2, 7), 3);
    }
}
