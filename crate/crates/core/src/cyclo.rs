//! Elements of the cyclotomic field Q(ζ_n) in the power basis modulo Φ_n.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, euler_phi, is_unit, modn};
use crate::error::{Error, Result};
use crate::rational::{fmt_rats, parse_rats, rat, Rat};

/// Φ_n together with the reduction of every power ζ^k, 0 <= k < n.
#[derive(Debug)]
pub struct CycloData {
    pub n: u64,
    pub phi: usize,
    /// Coefficients c_0..c_phi of Φ_n (monic).
    pub poly: Vec<i64>,
    /// `powers[k]` holds ζ^k in the basis 1, ζ, .., ζ^(phi-1).
    pub powers: Vec<Vec<i64>>,
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<CycloData>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exact quotient of integer polynomials, `den` monic.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = num.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        q[k] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in arith::divisors(n) {
        if d < n {
            p = poly_div_exact(&p, &cyclotomic_poly_cached(d).poly);
        }
    }
    p
}

/// Cached Φ_n data; built once per order and shared.
pub fn cyclotomic_poly_cached(n: u64) -> Arc<CycloData> {
    if let Some(d) = cache().lock().unwrap().get(&n) {
        return d.clone();
    }
    let poly = cyclotomic_poly(n);
    let phi = poly.len() - 1;
    debug_assert_eq!(phi as u64, euler_phi(n));
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by ζ and reduce the overflow term with Φ_n
        let top = cur[phi - 1];
        for j in (1..phi).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..phi {
                cur[j] -= top * poly[j];
            }
        }
    }
    let data = Arc::new(CycloData { n, phi, poly, powers });
    cache().lock().unwrap().entry(n).or_insert(data).clone()
}

/// An element of Q(ζ_n).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicElement {
    n: u64,
    coeffs: Vec<Rat>,
}

/// A Galois automorphism σ_c : ζ_n -> ζ_n^c of Q(ζ_n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaloisIndex {
    c: u64,
    n: u64,
}

impl GaloisIndex {
    pub fn new(c: i64, n: u64) -> Result<Self> {
        if !is_unit(c, n) {
            return Err(Error::NotAUnit { c, n });
        }
        Ok(GaloisIndex { c: modn(c, n), n })
    }

    pub fn value(&self) -> u64 {
        self.c
    }

    /// `self ∘ other`, i.e. σ_(ab).
    pub fn compose(&self, other: &GaloisIndex) -> GaloisIndex {
        assert_eq!(self.n, other.n);
        GaloisIndex { c: self.c * other.c % self.n, n: self.n }
    }

    pub fn units(n: u64) -> Vec<GaloisIndex> {
        (1..=n.max(1))
            .filter(|&c| is_unit(c as i64, n))
            .map(|c| GaloisIndex { c: c % n.max(1), n })
            .collect()
    }
}

impl CyclotomicElement {
    pub fn new(n: u64, coeffs: Vec<Rat>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("order must be positive".into()));
        }
        let phi = euler_phi(n) as usize;
        if coeffs.len() != phi {
            return Err(Error::InvalidParameters(format!(
                "Q(ζ_{n}) needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CyclotomicElement { n, coeffs })
    }

    pub fn zero(n: u64) -> Self {
        CyclotomicElement { n, coeffs: vec![Rat::zero(); euler_phi(n) as usize] }
    }

    pub fn from_rat(n: u64, r: Rat) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(n: u64, k: i64) -> Self {
        Self::from_rat(n, rat(k))
    }

    pub fn one(n: u64) -> Self {
        Self::from_int(n, 1)
    }

    /// ζ_n^k for any integer k.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let d = cyclotomic_poly_cached(n);
        let v = &d.powers[modn(k, n) as usize];
        CyclotomicElement { n, coeffs: v.iter().map(|&c| rat(c)).collect() }
    }

    /// Σ v[k] ζ^k for a vector indexed by exponents mod n (any length).
    pub fn from_circular(n: u64, v: &[Rat]) -> Self {
        let d = cyclotomic_poly_cached(n);
        let mut out = vec![Rat::zero(); d.phi];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &d.powers[k % n as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * rat(r);
                }
            }
        }
        CyclotomicElement { n, coeffs: out }
    }

    pub fn from_circular_int(n: u64, v: &[i64]) -> Self {
        let d = cyclotomic_poly_cached(n);
        let mut out = vec![0i64; d.phi];
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&d.powers[k % n as usize]) {
                *o += c * r;
            }
        }
        CyclotomicElement { n, coeffs: out.into_iter().map(rat).collect() }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::OrderMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CyclotomicElement {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CyclotomicElement {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.n as usize;
        let mut circ = vec![Rat::zero(); n.max(2 * self.coeffs.len())];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    circ[(i + j) % n] += a * b;
                }
            }
        }
        Ok(Self::from_circular(self.n, &circ))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CyclotomicElement { n: self.n, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::one(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// σ_c(x) where σ_c(ζ) = ζ^c.
    pub fn galois(&self, c: i64) -> Result<Self> {
        let g = GaloisIndex::new(c, self.n)?;
        Ok(self.galois_by(g))
    }

    pub fn galois_by(&self, g: GaloisIndex) -> Self {
        assert_eq!(g.n, self.n);
        let n = self.n;
        let mut circ = vec![Rat::zero(); n as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                circ[((i as u64 * g.c) % n) as usize] += a;
            }
        }
        Self::from_circular(n, &circ)
    }

    /// Product of all conjugates; rational by construction.
    pub fn norm_to_q(&self) -> Result<Rat> {
        let mut acc = Self::one(self.n);
        for g in GaloisIndex::units(self.n) {
            acc = &acc * &self.galois_by(g);
        }
        acc.as_rational()
            .ok_or_else(|| Error::InternalInconsistency("absolute norm is not rational".into()))
    }

    /// Π_(t<f) σ_(β^t)(x): the norm to the fixed field of ⟨β⟩, which must have order f.
    pub fn norm_to_subfield(&self, beta: i64, f: u64) -> Result<Self> {
        let n = self.n;
        let bad = Error::BadSubgroup { beta, f, n };
        let g = GaloisIndex::new(beta, n).map_err(|_| bad.clone())?;
        if arith::mult_order(g.c, n.max(2)) != f && n > 2 {
            return Err(bad);
        }
        let mut acc = Self::one(n);
        let mut s = GaloisIndex { c: 1 % n, n };
        for _ in 0..f {
            acc = &acc * &self.galois_by(s);
            s = s.compose(&g);
        }
        if acc.galois_by(g) != acc {
            return Err(bad);
        }
        Ok(acc)
    }

    /// Multiplicative inverse via the product of the other conjugates.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut others = Self::one(self.n);
        for g in GaloisIndex::units(self.n) {
            if g.c != 1 % self.n {
                others = &others * &self.galois_by(g);
            }
        }
        let nm = (&others * self).as_rational().ok_or(Error::NotInvertible)?;
        Ok(others.scale(&(Rat::one() / nm)))
    }

    /// Coefficients (a_0, .., a_(l-1)) of Σ a_k ζ^k with a_0 = 0, for prime l.
    pub fn a0_view(&self) -> Result<Vec<Rat>> {
        let l = self.n;
        if !arith::is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        let mut a: Vec<Rat> = self.coeffs.clone();
        a.push(Rat::zero());
        let a0 = a[0].clone();
        Ok(a.into_iter().map(|c| c - &a0).collect())
    }

    /// Inverse of [`a0_view`](Self::a0_view); `a[0]` may be nonzero.
    pub fn from_a0_view(l: u64, a: &[Rat]) -> Result<Self> {
        if !arith::is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if a.len() as u64 != l {
            return Err(Error::InvalidParameters(format!("expected {l} coordinates")));
        }
        Ok(Self::from_circular(l, a))
    }

    /// Coefficients c_i with x = Σ_(i<e) c_i η(i), η(i) = Σ_j ζ^(γ^(ej+i)), for x in the
    /// fixed field of ⟨γ^e⟩ inside Q(ζ_l).
    pub fn period_decompose(&self, gamma: u64, e: u64) -> Result<Vec<Rat>> {
        let l = self.n;
        let a = self.a0_view()?;
        if (l - 1) % e != 0 {
            return Err(Error::InvalidParameters(format!("{e} does not divide {l}-1")));
        }
        let mut class = vec![None::<Rat>; e as usize];
        let mut g = 1u64;
        for k in 0..l - 1 {
            let slot = &mut class[(k % e) as usize];
            match slot {
                None => *slot = Some(a[g as usize].clone()),
                Some(v) if *v != a[g as usize] => return Err(Error::NotInSubfield),
                _ => {}
            }
            g = g * gamma % l;
        }
        Ok(class.into_iter().map(|c| c.unwrap_or_else(Rat::zero)).collect())
    }

    pub fn to_json(&self) -> CycElemJson {
        CycElemJson { n: self.n, coeffs: fmt_rats(&self.coeffs) }
    }

    pub fn from_json(j: &CycElemJson) -> Result<Self> {
        Self::new(j.n, parse_rats(&j.coeffs)?)
    }

    pub fn to_a0_json(&self) -> Result<A0Json> {
        Ok(A0Json { n: self.n, a: fmt_rats(&self.a0_view()?) })
    }

    pub fn from_a0_json(j: &A0Json) -> Result<Self> {
        Self::from_a0_view(j.n, &parse_rats(&j.a)?)
    }
}

/// Element of Q(ζ_n) in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycElemJson {
    pub n: u64,
    pub coeffs: Vec<String>,
}

/// Element of Q(ζ_l) as Σ a_k ζ^k with a_0 = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct A0Json {
    pub n: u64,
    pub a: Vec<String>,
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&CyclotomicElement> for &CyclotomicElement {
            type Output = CyclotomicElement;
            fn $m(self, rhs: &CyclotomicElement) -> CyclotomicElement {
                self.$f(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl std::ops::$tr<CyclotomicElement> for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $m(self, rhs: CyclotomicElement) -> CyclotomicElement {
                self.$f(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Neg for CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        -&self
    }
}

fn superscript(k: usize) -> String {
    const D: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string().chars().map(|c| D[c.to_digit(10).unwrap() as usize]).collect()
}

/// Renders Σ v[k] ζ^k, e.g. `2 + 3ζ²`.
pub fn render_terms(v: &[Rat]) -> String {
    let mut s = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = *c < Rat::zero();
        let mag = if neg { -c } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let m = crate::rational::fmt_rat(&mag);
        match k {
            0 => s.push_str(&m),
            _ => {
                if !mag.is_one() {
                    s.push_str(&m);
                }
                s.push('ζ');
                if k > 1 {
                    s.push_str(&superscript(k));
                }
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(&self.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn el(n: u64, v: &[i64]) -> CyclotomicElement {
        CyclotomicElement::from_circular_int(n, v)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1; 5]);
        // Φ_105 is the first with a coefficient -2
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn product_of_conjugate_pair_is_seven() {
        let a = el(3, &[2, 0, 3]);
        let b = el(3, &[2, 3, 0]);
        assert_eq!((&a * &b).as_rational(), Some(rat(7)));
    }

    #[test]
    fn norm_of_one_minus_zeta() {
        for l in [2u64, 3, 5, 7, 11, 13, 17] {
            let x = el(l, &[1, -1]);
            assert_eq!(x.norm_to_q().unwrap(), rat(l as i64));
        }
    }

    #[test]
    fn galois_on_period() {
        let x = el(5, &[0, 1, 0, 0, 1]);
        assert_eq!(x.galois(2).unwrap(), el(5, &[0, 0, 1, 1, 0]));
        assert_eq!(x.galois(5), Err(Error::NotAUnit { c: 5, n: 5 }));
    }

    #[test]
    fn relative_norm_of_zeta7_is_one() {
        let z = CyclotomicElement::zeta_pow(7, 1);
        assert_eq!(z.norm_to_subfield(2, 3).unwrap(), CyclotomicElement::one(7));
        assert!(matches!(z.norm_to_subfield(2, 2), Err(Error::BadSubgroup { .. })));
        assert!(matches!(z.norm_to_subfield(3, 3), Err(Error::BadSubgroup { .. })));
    }

    #[test]
    fn order_mismatch() {
        assert_eq!(el(3, &[1]).try_add(&el(5, &[1])), Err(Error::OrderMismatch(3, 5)));
    }

    #[test]
    fn a0_view_and_periods() {
        let x = el(3, &[2, 0, 3]);
        assert_eq!(x.a0_view().unwrap(), vec![rat(0), rat(-2), rat(1)]);
        let y = CyclotomicElement::from_a0_view(3, &[rat(5), rat(3), rat(6)]).unwrap();
        assert_eq!(y.a0_view().unwrap(), vec![rat(0), rat(-2), rat(1)]);
        // ζ+ζ^6 = η(0) for l = 7, γ = 3, e = 3
        let p = el(7, &[0, 1, 0, 0, 0, 0, 1]);
        assert_eq!(p.period_decompose(3, 3).unwrap(), vec![rat(1), rat(0), rat(0)]);
        assert_eq!(el(7, &[0, 1]).period_decompose(3, 3), Err(Error::NotInSubfield));
        assert_eq!(x.to_string(), "-1 - 3ζ");
    }

    #[test]
    fn inverse_and_json() {
        let x = CyclotomicElement::new(7, vec![rat(1), ratio(2, 3), rat(0), rat(-1), rat(0), rat(5)])
            .unwrap();
        assert_eq!(&x * &x.inverse().unwrap(), CyclotomicElement::one(7));
        assert_eq!(CyclotomicElement::from_json(&x.to_json()).unwrap(), x);
        assert_eq!(CyclotomicElement::from_a0_json(&x.to_a0_json().unwrap()).unwrap(), x);
    }

    fn arb_elem(n: u64) -> impl Strategy<Value = CyclotomicElement> {
        let phi = euler_phi(n) as usize;
        prop::collection::vec((-20i64..20, 1i64..5), phi).prop_map(move |v| {
            CyclotomicElement::new(n, v.into_iter().map(|(a, b)| ratio(a, b)).collect()).unwrap()
        })
    }

    fn arb_triple() -> impl Strategy<Value = (CyclotomicElement, CyclotomicElement, CyclotomicElement)> {
        prop::sample::select(vec![3u64, 4, 5, 7, 8, 9, 12, 15])
            .prop_flat_map(|n| (arb_elem(n), arb_elem(n), arb_elem(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inverse().unwrap(), CyclotomicElement::one(a.order()));
            }
        }

        #[test]
        fn norm_is_multiplicative((a, b, _c) in arb_triple()) {
            let nab = (&a * &b).norm_to_q().unwrap();
            prop_assert_eq!(nab, a.norm_to_q().unwrap() * b.norm_to_q().unwrap());
        }

        #[test]
        fn galois_composition(n in 2u64..=30, seed in any::<u64>()) {
            let units: Vec<u64> = (1..n).filter(|&c| is_unit(c as i64, n)).collect();
            let a = units[(seed % units.len() as u64) as usize] as i64;
            let b = units[((seed / 7) % units.len() as u64) as usize] as i64;
            let phi = euler_phi(n) as usize;
            let x = CyclotomicElement::new(n, (0..phi).map(|i| rat((seed >> i) as i64 % 7 - 3)).collect()).unwrap();
            prop_assert_eq!(x.galois(a).unwrap().galois(b).unwrap(), x.galois(a * b).unwrap());
        }

        #[test]
        fn a0_invariance(v in prop::collection::vec(-9i64..9, 7), shift in -9i64..9) {
            let x = CyclotomicElement::from_circular_int(7, &v);
            let w: Vec<i64> = v.iter().map(|c| c + shift).collect();
            let y = CyclotomicElement::from_circular_int(7, &w);
            prop_assert_eq!(x.a0_view().unwrap(), y.a0_view().unwrap());
            prop_assert_eq!(x, y);
        }

        #[test]
        fn tower_of_norms(v in prop::collection::vec(-5i64..5, 7)) {
            // Q(ζ_7) ⊃ Q(√-7) ⊃ Q with ⟨2⟩ of order 3
            let x = CyclotomicElement::from_circular_int(7, &v);
            let m = x.norm_to_subfield(2, 3).unwrap();
            let mm = &m * &m.galois(3).unwrap();
            prop_assert_eq!(Some(x.norm_to_q().unwrap()), mm.as_rational());
        }
    }
}
