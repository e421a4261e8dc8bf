//! The finite field F_(p^r) as F_p[x]/(m(x)) with a dense discrete-log table.
//!
//! Elements are encoded as integers Σ c_i p^i from their coefficient vectors.

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Default cap on p^r for building index tables.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Dense polynomial arithmetic over F_p, little-endian coefficient vectors.
mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    fn inv(a: u64, p: u64) -> u64 {
        crate::arith::pow_mod(a, p - 2, p)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = r[k] * lead_inv % p;
            for (j, &mj) in m.iter().enumerate() {
                let idx = k - dm + j;
                r[idx] = (r[idx] + p - c * mj % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&acc, m, p)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's irreducibility test for a monic polynomial of degree r.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let r = (m.len() - 1) as u32;
        if r == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let frob = |k: u32| powmod(&x, (p as u128).pow(k), m, p);
        if sub(&frob(r), &x, p) != Vec::<u64>::new() {
            return false;
        }
        for q in super::prime_factors(r as u64) {
            let g = gcd(m, &sub(&frob(r / q as u32), &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// Context for F_(p^r): modulus, chosen generator γ and the tables of γ^k and ind_γ.
#[derive(Clone, Debug)]
pub struct FiniteFieldCtx {
    p: u64,
    r: u32,
    q: u64,
    modulus: Vec<u64>,
    gamma: u64,
    exp: Vec<u32>,
    ind: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub r: u32,
    pub modulus: Vec<u64>,
    pub gamma: Vec<u64>,
}

fn field_size(p: u64, r: u32, budget: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::InvalidParameters("extension degree must be at least 1".into()));
    }
    match p.checked_pow(r) {
        Some(q) if q <= budget => Ok(q),
        Some(q) => Err(Error::TooLarge { size: q, budget }),
        None => Err(Error::TooLarge { size: u64::MAX, budget }),
    }
}

impl FiniteFieldCtx {
    /// Builds F_(p^r) with the smallest irreducible monic modulus and the smallest
    /// generator, or the hinted generator (coefficients c_0, c_1, ..).
    pub fn build(p: u64, r: u32, gamma_hint: Option<&[u64]>, budget: u64) -> Result<Self> {
        let q = field_size(p, r, budget)?;
        let modulus = smallest_irreducible(p, r);
        let mut ctx = FiniteFieldCtx { p, r, q, modulus, gamma: 0, exp: Vec::new(), ind: Vec::new() };
        let gamma = match gamma_hint {
            Some(h) => {
                let g = ctx.encode_reduced(h);
                if !ctx.is_generator(g) {
                    return Err(Error::NotAGenerator);
                }
                g
            }
            None => (1..q).find(|&g| ctx.is_generator(g)).expect("F_q^* is cyclic"),
        };
        ctx.gamma = gamma;
        ctx.fill_tables();
        Ok(ctx)
    }

    /// Builds a context from an explicit irreducible monic modulus and generator.
    pub fn with_modulus(p: u64, modulus: Vec<u64>, gamma: &[u64], budget: u64) -> Result<Self> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidParameters("modulus must be monic of positive degree".into()));
        }
        let r = (modulus.len() - 1) as u32;
        let q = field_size(p, r, budget)?;
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidParameters("modulus is reducible".into()));
        }
        let mut ctx = FiniteFieldCtx { p, r, q, modulus, gamma: 0, exp: Vec::new(), ind: Vec::new() };
        let g = ctx.encode_reduced(gamma);
        if !ctx.is_generator(g) {
            return Err(Error::NotAGenerator);
        }
        ctx.gamma = g;
        ctx.fill_tables();
        Ok(ctx)
    }

    fn fill_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut ind = vec![u32::MAX; self.q as usize];
        let mut x = 1u64;
        for k in 0..n {
            exp.push(x as u32);
            debug_assert_eq!(ind[x as usize], u32::MAX);
            ind[x as usize] = k as u32;
            x = self.mul_slow(x, self.gamma);
        }
        self.exp = exp;
        self.ind = ind;
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn size(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    pub fn decode(&self, x: u64) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.r as usize);
        let mut x = x;
        for _ in 0..self.r {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    pub fn encode(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    fn encode_reduced(&self, c: &[u64]) -> u64 {
        let c: Vec<u64> = c.iter().map(|d| d % self.p).collect();
        self.encode(&fp_poly::rem(&c, &self.modulus, self.p))
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return a * b % self.p;
        }
        let prod = fp_poly::mulmod(&self.decode(a), &self.decode(b), &self.modulus, self.p);
        self.encode(&prod)
    }

    fn pow_slow(&self, a: u64, e: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    fn is_generator(&self, g: u64) -> bool {
        if g == 0 {
            return false;
        }
        let n = self.q - 1;
        if n == 1 {
            return g == 1;
        }
        prime_factors(n).into_iter().all(|l| self.pow_slow(g, n / l) != 1)
    }

    pub fn zero(&self) -> u64 {
        0
    }
    pub fn one(&self) -> u64 {
        1
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> u64 {
        k.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0, 1);
        for _ in 0..self.r {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.r == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut scale) = (a, 0, 1);
        for _ in 0..self.r {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.ind[a as usize] as u64 + self.ind[b as usize] as u64) % (self.q - 1);
        self.exp[k as usize] as u64
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.q - 1;
        let k = (self.ind[a as usize] as u128 * e as u128 % n as u128) as usize;
        self.exp[k] as u64
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        let k = self.index(a)?;
        Ok(self.gamma_pow((self.q - 1 - k) as i64))
    }

    /// γ^k for any integer k.
    pub fn gamma_pow(&self, k: i64) -> u64 {
        self.exp[k.rem_euclid((self.q - 1) as i64) as usize] as u64
    }

    /// ind_γ(x) in [0, p^r - 1).
    pub fn index(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroHasNoIndex);
        }
        Ok(self.ind[x as usize] as u64)
    }

    /// Raw access to the index table; entry 0 is `u32::MAX`.
    pub fn index_table(&self) -> &[u32] {
        &self.ind
    }

    pub fn frobenius(&self, x: u64, k: u32) -> u64 {
        self.pow(x, self.p.pow(k))
    }

    /// Absolute trace to F_p, returned as a residue mod p.
    pub fn trace(&self, x: u64) -> u64 {
        let mut acc = 0;
        for t in 0..self.r {
            acc = self.add(acc, self.frobenius(x, t));
        }
        debug_assert!(acc < self.p);
        acc
    }

    /// Norm to F_(p^s): Π_(t < r/s) x^(p^(st)).
    pub fn norm_to_subfield(&self, x: u64, s: u32) -> Result<u64> {
        if s == 0 || self.r % s != 0 {
            return Err(Error::BadSubfield { s, r: self.r });
        }
        let mut acc = 1;
        for t in 0..self.r / s {
            acc = self.mul(acc, self.frobenius(x, s * t));
        }
        Ok(acc)
    }

    pub fn in_subfield(&self, x: u64, s: u32) -> bool {
        self.frobenius(x, s) == x
    }

    /// Minimal polynomial over F_p, little-endian with residues in [0, p).
    pub fn min_poly(&self, x: u64) -> Vec<u64> {
        let mut conj = vec![x];
        loop {
            let y = self.frobenius(*conj.last().unwrap(), 1);
            if y == x {
                break;
            }
            conj.push(y);
        }
        // Π (X - c) with coefficients in F_(p^r)
        let mut poly = vec![1u64];
        for c in conj {
            let mut next = vec![0u64; poly.len() + 1];
            for (i, &a) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], a);
                next[i] = self.sub(next[i], self.mul(a, c));
            }
            poly = next;
        }
        debug_assert!(poly.iter().all(|&c| c < self.p));
        poly
    }

    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
            gamma: self.decode(self.gamma),
        }
    }
}

/// Smallest irreducible monic polynomial of degree r, comparing Σ c_i p^i.
pub fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
    if r == 1 {
        return vec![0, 1];
    }
    let total = p.pow(r);
    for code in 0..total {
        let mut m = Vec::with_capacity(r as usize + 1);
        let mut c = code;
        for _ in 0..r {
            m.push(c % p);
            c /= p;
        }
        m.push(1);
        if m[0] != 0 && fp_poly::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{mult_order, prime_power};

    fn ctx(p: u64, r: u32) -> FiniteFieldCtx {
        FiniteFieldCtx::build(p, r, None, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn f7_with_hint() {
        let f = FiniteFieldCtx::build(7, 1, Some(&[3]), DEFAULT_BUDGET).unwrap();
        assert_eq!(f.index(3), Ok(1));
        assert_eq!(f.index(2), Ok(2));
        assert_eq!(f.index(6), Ok(3));
        assert_eq!(f.index(0), Err(Error::ZeroHasNoIndex));
        assert_eq!(
            FiniteFieldCtx::build(7, 1, Some(&[4]), DEFAULT_BUDGET).unwrap_err(),
            Error::NotAGenerator
        );
        assert_eq!(ctx(7, 1).gamma(), 3);
    }

    #[test]
    fn f2_and_errors() {
        assert_eq!(ctx(2, 1).gamma(), 1);
        assert_eq!(FiniteFieldCtx::build(8, 1, None, 100).unwrap_err(), Error::NotPrime(8));
        assert!(matches!(FiniteFieldCtx::build(2, 30, None, 1000), Err(Error::TooLarge { .. })));
        assert_eq!(ctx(7, 2).norm_to_subfield(1, 3).unwrap_err(), Error::BadSubfield { s: 3, r: 2 });
    }

    #[test]
    fn small_moduli() {
        assert_eq!(ctx(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(ctx(2, 3).modulus(), &[1, 1, 0, 1]);
        assert_eq!(ctx(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(ctx(7, 2).modulus(), &[1, 0, 1]);
    }

    #[test]
    fn f49_norm_of_generator() {
        let f = ctx(7, 2);
        let g = f.gamma();
        let nr = f.norm_to_subfield(g, 1).unwrap();
        assert_eq!(nr, f.pow(g, 8));
        assert!(nr < 7);
        assert_eq!(mult_order(nr, 7), 6);
    }

    #[test]
    fn min_poly_rebuilds_field() {
        let f = ctx(5, 3);
        let g = f.gamma();
        let m = f.min_poly(g);
        let h = FiniteFieldCtx::with_modulus(5, m, &[0, 1], DEFAULT_BUDGET).unwrap();
        assert_eq!(h.size(), 125);
    }

    /// Exhaustive checks over every field of size at most 10^4 with r >= 2,
    /// and every prime field up to 2000.
    #[test]
    fn exhaustive_invariants() {
        for q in 2..=10_000u64 {
            let (p, r) = match prime_power(q) {
                Some(x) => x,
                None => continue,
            };
            if r == 1 && p > 2000 {
                continue;
            }
            let f = ctx(p, r);
            let n = q - 1;
            let mut seen = vec![false; n as usize];
            for x in 1..q {
                let k = f.index(x).unwrap();
                assert!(!seen[k as usize]);
                seen[k as usize] = true;
                assert_eq!(f.gamma_pow(k as i64), x);
            }
            let step = (q / 60).max(1);
            for x in (0..q).step_by(step as usize) {
                for y in (1..q).step_by(step as usize + 3) {
                    if x != 0 {
                        let s = (f.index(x).unwrap() + f.index(y).unwrap()) % n;
                        assert_eq!(f.index(f.mul(x, y)).unwrap(), s);
                    }
                    assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p);
                    for s in 1..=r {
                        if r % s == 0 {
                            let nx = f.norm_to_subfield(x, s).unwrap();
                            let ny = f.norm_to_subfield(y, s).unwrap();
                            assert!(f.in_subfield(nx, s));
                            assert_eq!(f.norm_to_subfield(f.mul(x, y), s).unwrap(), f.mul(nx, ny));
                        }
                    }
                }
            }
        }
    }
}
