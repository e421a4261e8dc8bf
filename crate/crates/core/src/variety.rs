//! The varieties V ⊂ Q^(l-1) cut out by the correlation-sum differences h_m, the form h,
//! the bilinear compositions φ_d and the group structure on W = {x ∈ V : N(α_x) ≠ 0}.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime, mult_order, smallest_primitive_root};
use crate::cyclo::CyclotomicElement;
use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::rational::{fmt_rat, fmt_rats, parse_rats, rat, ratio, sign_pow, Rat};
use crate::report::{Clause, Report};

/// Parameters l = ef + 1, generator γ of (Z/l)^× and β = γ^e of order f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    pub l: u64,
    pub f: u64,
    pub e: u64,
    pub gamma: u64,
    pub beta: u64,
}

/// A point of Q^(l-1); `x[i-1]` is the coordinate x_i and x_0 = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarietyPoint {
    pub x: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub l: u64,
    pub f: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<u64>,
    pub x: Vec<String>,
}

impl VarietyPoint {
    pub fn from_ints(v: &[i64]) -> Self {
        VarietyPoint { x: v.iter().map(|&c| rat(c)).collect() }
    }

    /// x_i with the index taken mod l and x_0 = 0.
    pub fn coord(&self, i: i64) -> Rat {
        let l = self.x.len() as i64 + 1;
        let k = i.rem_euclid(l);
        if k == 0 {
            Rat::zero()
        } else {
            self.x[k as usize - 1].clone()
        }
    }

    fn coord_ref(&self, i: i64) -> Option<&Rat> {
        let l = self.x.len() as i64 + 1;
        let k = i.rem_euclid(l);
        if k == 0 {
            None
        } else {
            Some(&self.x[k as usize - 1])
        }
    }
}

impl VarietySpec {
    pub fn new(l: u64, f: u64, gamma: Option<u64>) -> Result<Self> {
        if l < 3 || !is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if f < 2 || (l - 1) % f != 0 {
            return Err(Error::InvalidParameters(format!("f = {f} must be >= 2 and divide {l} - 1")));
        }
        let gamma = match gamma {
            Some(g) => {
                let g = g % l;
                if g == 0 || mult_order(g, l) != l - 1 {
                    return Err(Error::NotAGenerator);
                }
                g
            }
            None => smallest_primitive_root(l),
        };
        let e = (l - 1) / f;
        let beta = crate::arith::pow_mod(gamma, e, l);
        debug_assert_eq!(mult_order(beta, l), f);
        Ok(VarietySpec { l, f, e, gamma, beta })
    }

    pub fn label(&self) -> String {
        format!("l={} f={} gamma={}", self.l, self.f, self.gamma)
    }

    fn sign(&self) -> Rat {
        rat(sign_pow(self.f as i64 - 1))
    }

    pub fn point(&self, x: Vec<Rat>) -> Result<VarietyPoint> {
        if x.len() as u64 != self.l - 1 {
            return Err(Error::InvalidParameters(format!("a point needs {} coordinates", self.l - 1)));
        }
        Ok(VarietyPoint { x })
    }

    pub fn zero(&self) -> VarietyPoint {
        VarietyPoint { x: vec![Rat::zero(); self.l as usize - 1] }
    }

    /// 𝟏 = (-1)^f (1, .., 1), the point with α = 1.
    pub fn identity(&self) -> VarietyPoint {
        VarietyPoint { x: vec![rat(sign_pow(self.f as i64)); self.l as usize - 1] }
    }

    /// α_x = (-1)^(f-1) Σ x_i ζ^i.
    pub fn alpha(&self, x: &VarietyPoint) -> CyclotomicElement {
        let mut circ = vec![Rat::zero(); self.l as usize];
        let s = self.sign();
        for (i, c) in x.x.iter().enumerate() {
            circ[i + 1] = c * &s;
        }
        CyclotomicElement::from_circular(self.l, &circ)
    }

    /// The unique point with α_x = a.
    pub fn point_from_alpha(&self, a: &CyclotomicElement) -> Result<VarietyPoint> {
        if a.order() != self.l {
            return Err(Error::OrderMismatch(a.order(), self.l));
        }
        let v = a.a0_view()?;
        let s = self.sign();
        Ok(VarietyPoint { x: v[1..].iter().map(|c| c * &s).collect() })
    }

    /// Bucket sums B[k] = Σ x_(i_0) .. x_(i_(f-1)) over i_0 + β i_1 + .. + β^(f-1) i_(f-1) ≡ k,
    /// as a cyclic product in Q[t]/(t^l - 1).
    pub fn correlation_buckets(&self, x: &VarietyPoint) -> Vec<Rat> {
        let l = self.l as usize;
        let mut acc = vec![Rat::zero(); l];
        acc[0] = Rat::one();
        let mut mult = 1u64;
        for _ in 0..self.f {
            // σ_mult applied to the circular vector of x
            let mut factor = vec![Rat::zero(); l];
            for (i, c) in x.x.iter().enumerate() {
                factor[((i as u64 + 1) * mult % self.l) as usize] = c.clone();
            }
            let mut next = vec![Rat::zero(); l];
            for (i, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in factor.iter().enumerate() {
                    if !b.is_zero() {
                        next[(i + j) % l] += a * b;
                    }
                }
            }
            acc = next;
            mult = mult * self.beta % self.l;
        }
        acc
    }

    /// (S_0, S_1, .., S_e) with S_0 the sum over index tuples ≡ 0 and S_m over tuples ≡ γ^m.
    pub fn correlation_sums(&self, x: &VarietyPoint) -> Vec<Rat> {
        let b = self.correlation_buckets(x);
        let mut out = vec![b[0].clone()];
        let mut g = 1u64;
        for _ in 1..=self.e {
            g = g * self.gamma % self.l;
            out.push(b[g as usize].clone());
        }
        out
    }

    /// Reference implementation by enumerating all index tuples.
    pub fn correlation_sums_bruteforce(&self, x: &VarietyPoint) -> Vec<Rat> {
        let l = self.l;
        let f = self.f as usize;
        let mut targets = vec![0u64];
        let mut g = 1u64;
        for _ in 1..=self.e {
            g = g * self.gamma % l;
            targets.push(g);
        }
        let mut sums = vec![Rat::zero(); targets.len()];
        let mut idx = vec![1u64; f];
        loop {
            let mut s = 0u64;
            let mut bp = 1u64;
            let mut prod = Rat::one();
            for &i in &idx {
                s = (s + bp * i) % l;
                bp = bp * self.beta % l;
                prod *= &x.x[i as usize - 1];
            }
            for (t, sum) in targets.iter().zip(sums.iter_mut()) {
                if *t == s {
                    *sum += &prod;
                }
            }
            let mut k = 0;
            loop {
                if k == f {
                    return sums;
                }
                idx[k] += 1;
                if idx[k] < l {
                    break;
                }
                idx[k] = 1;
                k += 1;
            }
        }
    }

    /// h = S_0 - S_1.
    pub fn form_h(&self, x: &VarietyPoint) -> Rat {
        let s = self.correlation_sums(x);
        &s[0] - &s[1]
    }

    /// h_m = S_m - S_(m+1) for 1 <= m <= e - 1.
    pub fn form_hm(&self, x: &VarietyPoint, m: u64) -> Result<Rat> {
        if m < 1 || m + 1 > self.e {
            return Err(Error::InvalidParameters(format!("m = {m} outside 1..{}", self.e.saturating_sub(1))));
        }
        let s = self.correlation_sums(x);
        Ok(&s[m as usize] - &s[m as usize + 1])
    }

    pub fn is_on_v(&self, x: &VarietyPoint) -> bool {
        let s = self.correlation_sums(x);
        s[1..].iter().all(|v| *v == s[1])
    }

    pub fn norm(&self, x: &VarietyPoint) -> Rat {
        self.alpha(x).norm_to_q().expect("absolute norm is rational")
    }

    pub fn is_on_w(&self, x: &VarietyPoint) -> bool {
        self.is_on_v(x) && !self.norm(x).is_zero()
    }

    fn dinv(&self, d: i64) -> Result<i64> {
        inv_mod(d, self.l).map(|v| v as i64).ok_or(Error::NotAUnit { c: d, n: self.l })
    }

    /// φ_d(x, y): z_k = (-1)^(f-1)(Σ_i x_(-d⁻¹i) y_(k-i) - Σ_i x_(-d⁻¹i) y_(-i)).
    pub fn compose(&self, x: &VarietyPoint, y: &VarietyPoint, d: i64) -> Result<VarietyPoint> {
        let z = self.compose_unchecked(x, y, d)?;
        let lhs = self.alpha(&z);
        let rhs = &self.alpha(x).galois(-d)? * &self.alpha(y);
        if lhs != rhs {
            return Err(Error::InternalInconsistency("α of the composite is not σ_(-d)(α_x)α_y".into()));
        }
        Ok(z)
    }

    pub fn compose_unchecked(&self, x: &VarietyPoint, y: &VarietyPoint, d: i64) -> Result<VarietyPoint> {
        let di = self.dinv(d)?;
        let l = self.l as i64;
        let s = self.sign();
        let xs: Vec<Rat> = (1..l).map(|i| x.coord(-di * i)).collect();
        let mut c0 = Rat::zero();
        for i in 1..l {
            if let Some(yv) = y.coord_ref(-i) {
                c0 += &xs[i as usize - 1] * yv;
            }
        }
        let mut z = Vec::with_capacity(l as usize - 1);
        for k in 1..l {
            let mut ck = Rat::zero();
            for i in 1..l {
                if let Some(yv) = y.coord_ref(k - i) {
                    ck += &xs[i as usize - 1] * yv;
                }
            }
            z.push((ck - &c0) * &s);
        }
        Ok(VarietyPoint { x: z })
    }

    /// Exact checks of the unit laws, the twisted associativity and the twisted commutativity.
    pub fn op_properties_check(
        &self,
        x: &VarietyPoint,
        y: &VarietyPoint,
        z: &VarietyPoint,
        d1: i64,
        d2: i64,
    ) -> Result<Report> {
        let one = self.identity();
        let mut rep = Report::new("op-properties", format!("{} d1={d1} d2={d2}", self.label()));
        let mut c1 = Clause::new("(1)");
        for d in [d1, d2] {
            let di = self.dinv(d)?;
            c1.record(self.compose(&one, x, d)? == *x, || format!("1 *_{d} x != x"));
            let r = self.compose(x, &one, d)?;
            let want = VarietyPoint { x: (1..self.l as i64).map(|k| x.coord(-di * k)).collect() };
            c1.record(r == want, || format!("(x *_{d} 1)_k != x_(-d⁻¹k)"));
        }
        rep.push(c1);
        let mut c2 = Clause::new("(2)");
        let d2i = self.dinv(d2)?;
        let lhs = self.compose(x, &self.compose(y, z, d2)?, d1)?;
        let rhs = self.compose(&self.compose(x, y, -d2i * d1)?, z, d2)?;
        c2.record(lhs == rhs, || "twisted associativity".into());
        rep.push(c2);
        let mut c3 = Clause::new("(3)");
        for d in [d1, d2] {
            let di = self.dinv(d)?;
            let a = self.compose(y, x, d)?;
            let b = self.compose(x, y, di)?;
            let ok = (1..self.l as i64).all(|k| a.coord(k) == b.coord(-di * k));
            c3.record(ok, || format!("d = {d}"));
        }
        rep.push(c3);
        Ok(rep)
    }

    /// M_d[k][j] = (-1)^(f-1)(x_(d⁻¹(k-j)) - x_(d⁻¹k)), 1 <= k,j <= l-1, so that
    /// x *_d y = y · M_d as row vectors.
    pub fn build_md(&self, x: &VarietyPoint, d: i64) -> Result<RatMatrix> {
        let di = self.dinv(d)?;
        let s = self.sign();
        let l = self.l as i64;
        Ok((1..l)
            .map(|k| (1..l).map(|j| (x.coord(di * (k - j)) - x.coord(di * k)) * &s).collect())
            .collect())
    }

    pub fn det_equals_norm_check(&self, x: &VarietyPoint, d: i64) -> Result<Report> {
        let mut rep = Report::new("det-norm", format!("{} d={d}", self.label()));
        let det = linalg::det(&self.build_md(x, d)?);
        let n = self.norm(x);
        rep.clause("det M_d = N(α_x)").record(det == n, || format!("{} vs {}", fmt_rat(&det), fmt_rat(&n)));
        Ok(rep)
    }

    /// The unique y with x *_d y = 𝟏.
    pub fn invert(&self, x: &VarietyPoint, d: i64) -> Result<VarietyPoint> {
        let md = self.build_md(x, d)?;
        if self.norm(x).is_zero() {
            return Err(Error::NotInvertible);
        }
        let y = VarietyPoint { x: linalg::solve_left(&md, &self.identity().x)? };
        let want = self.alpha(x).galois(-d)?.inverse()?;
        if self.alpha(&y) != want {
            return Err(Error::InternalInconsistency("α of the inverse is not σ_(-d)(α_x)⁻¹".into()));
        }
        Ok(y)
    }

    fn require_w(&self, x: &VarietyPoint) -> Result<()> {
        if self.is_on_w(x) {
            Ok(())
        } else {
            Err(Error::FiberMismatch)
        }
    }

    /// Fiber map W_p × W_q -> W_pq and the torsor structure of fibers under W_1.
    pub fn fiber_map_check(&self, x: &VarietyPoint, y: &VarietyPoint) -> Result<Report> {
        self.require_w(x)?;
        self.require_w(y)?;
        let (hx, hy) = (self.form_h(x), self.form_h(y));
        let mut rep = Report::new("fiber", format!("{} h(x)={} h(y)={}", self.label(), fmt_rat(&hx), fmt_rat(&hy)));
        let z = self.compose(x, y, -1)?;
        rep.clause("product in W").record(self.is_on_w(&z), || "x *_(-1) y not in W".into());
        let hz = self.form_h(&z);
        rep.clause("h(x*y) = h(x)h(y)").record(hz == &hx * &hy, || fmt_rat(&hz));
        // torsor: translate by a norm-one point built from ζ
        let u = self.point_from_alpha(&CyclotomicElement::zeta_pow(self.l, 1))?;
        let (x2, y2) = self.torsor_action(&u, x, y)?;
        let c = rep.clause("torsor action preserves the product");
        c.record(self.compose(&x2, &y2, -1)? == z, || "product changed".into());
        let rec = self.compose(&self.invert(x, -1)?, &x2, -1)?;
        let c = rep.clause("connecting element lies in W_1");
        c.record(rec == u && self.form_h(&rec).is_one() && self.is_on_w(&rec), || "recovered u differs".into());
        let c = rep.clause("identity acts trivially");
        let (x3, y3) = self.torsor_action(&self.identity(), x, y)?;
        c.record(x3 == *x && y3 == *y, || "1 moved the pair".into());
        Ok(rep)
    }

    /// (x *_(-1) u, y *_(-1) u⁻¹) for u ∈ W_1.
    pub fn torsor_action(&self, u: &VarietyPoint, x: &VarietyPoint, y: &VarietyPoint) -> Result<(VarietyPoint, VarietyPoint)> {
        self.require_w(u)?;
        if !self.form_h(u).is_one() {
            return Err(Error::FiberMismatch);
        }
        let uinv = self.invert(u, -1)?;
        Ok((self.compose(x, u, -1)?, self.compose(y, &uinv, -1)?))
    }

    /// θ_h(u_1, .., u_f) = (1/f!) Σ_(∅≠I) (-1)^(f-|I|) h(Σ_(i∈I) u_i).
    pub fn derived_form(&self, us: &[VarietyPoint]) -> Result<Rat> {
        if us.len() as u64 != self.f {
            return Err(Error::InvalidParameters(format!("need {} vectors", self.f)));
        }
        Ok(derived_form(&|x: &VarietyPoint| self.form_h(x), self.l, us))
    }

    /// Rank of [θ_h(e_i, w^(j))] over `trials` random tuples; full rank l-1 witnesses regularity.
    pub fn regularity_check(&self, trials: usize, rng: &mut impl Rng) -> Report {
        let n = self.l as usize - 1;
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        let mut rank = 0;
        let mut used = 0;
        for t in 0..trials {
            let ws: Vec<VarietyPoint> = (1..self.f).map(|_| random_point(self.l, rng, 5)).collect();
            let col: Vec<Rat> = (0..n)
                .map(|i| {
                    let mut ei = self.zero();
                    ei.x[i] = Rat::one();
                    let mut args = vec![ei];
                    args.extend(ws.iter().cloned());
                    self.derived_form(&args).expect("f vectors")
                })
                .collect();
            cols.push(col);
            rank = linalg::rank(&linalg::transpose(&cols));
            used = t + 1;
            if rank == n {
                break;
            }
        }
        let mut rep = Report::new("regularity", self.label());
        rep.clause("full rank").record(rank == n, || format!("rank {rank} of {n} after {used} trials"));
        rep.clause(&format!("trials used: {used}"));
        rep
    }

    /// True iff N(α_x) = ±1; false proves x is not torsion in W(Q).
    pub fn torsion_norm_criterion(&self, x: &VarietyPoint) -> Result<bool> {
        let n = self.norm(x);
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(crate::rational::abs_is_one(&n))
    }

    pub fn to_json(&self, x: &VarietyPoint) -> PointJson {
        PointJson { l: self.l, f: self.f, gamma: Some(self.gamma), x: fmt_rats(&x.x) }
    }

    pub fn from_json(j: &PointJson) -> Result<(VarietySpec, VarietyPoint)> {
        let spec = VarietySpec::new(j.l, j.f, j.gamma)?;
        let x = spec.point(parse_rats(&j.x)?)?;
        Ok((spec, x))
    }
}

/// (1/f!) Σ_(∅≠I) (-1)^(f-|I|) P(Σ_(i∈I) u_i) for a form P of degree f = us.len().
pub fn derived_form(form: &dyn Fn(&VarietyPoint) -> Rat, l: u64, us: &[VarietyPoint]) -> Rat {
    let f = us.len();
    let mut acc = Rat::zero();
    for mask in 1u32..(1 << f) {
        let mut s = VarietyPoint { x: vec![Rat::zero(); l as usize - 1] };
        for (i, u) in us.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for (a, b) in s.x.iter_mut().zip(&u.x) {
                    *a += b;
                }
            }
        }
        let size = mask.count_ones() as i64;
        let v = form(&s);
        if sign_pow(f as i64 - size) == 1 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    let fact: i64 = (1..=f as i64).product();
    acc / rat(fact)
}

pub fn random_point(l: u64, rng: &mut impl Rng, bound: i64) -> VarietyPoint {
    VarietyPoint { x: (1..l).map(|_| rat(rng.gen_range(-bound..=bound))).collect() }
}

/// Σ_(i=1)^(l-1) x_i x_(i+m), indices mod l with x_0 = 0.
pub fn shift_correlation(x: &VarietyPoint, m: i64) -> Rat {
    let l = x.x.len() as i64 + 1;
    (1..l).map(|i| &x.coord(i) * &x.coord(i + m)).sum()
}

/// q = Σ x_i² - Σ x_i x_(i+1), the quadratic form of the f = 2 case.
pub fn quadratic_q(x: &VarietyPoint) -> Rat {
    shift_correlation(x, 0) - shift_correlation(x, 1)
}

/// f_m = Σ x_i x_(i+m) - Σ x_i x_(i+m+1).
pub fn quadratic_fm(x: &VarietyPoint, m: i64) -> Rat {
    shift_correlation(x, m) - shift_correlation(x, m + 1)
}

/// Gram matrix [θ_q(e_i, e_j)] of the quadratic form q on Q^(l-1).
pub fn gram_of_q(l: u64) -> RatMatrix {
    let n = l as usize - 1;
    let basis: Vec<VarietyPoint> = (0..n)
        .map(|i| {
            let mut v = VarietyPoint { x: vec![Rat::zero(); n] };
            v.x[i] = Rat::one();
            v
        })
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| derived_form(&quadratic_q, l, &[basis[i].clone(), basis[j].clone()])).collect())
        .collect()
}

/// Gram matrix of Σ_(i=0)^(l-1) x_i² - Σ x_i x_(i+1) on l free variables (cyclic indices).
pub fn gram_of_unreduced_q(l: u64) -> RatMatrix {
    let n = l as usize;
    let mut g = linalg::zeros(n, n);
    for i in 0..n {
        g[i][i] = Rat::one();
        g[i][(i + 1) % n] = ratio(-1, 2);
        g[(i + 1) % n][i] = ratio(-1, 2);
    }
    g
}

/// Seed points for the sampler: α with N_(L/M)(α) ∈ Q^× built from Jacobi sums of order l.
pub mod samples {
    use super::*;
    use crate::cyclotomy::{jacobi_table, CycParams};
    use crate::finite_field::DEFAULT_BUDGET;

    /// J*_p(1,1) for a character of order l on F_p, p ≡ 1 (mod l).
    pub fn jacobi_sum_of_order(l: u64, p: u64) -> Result<CyclotomicElement> {
        let params = CycParams::build(p, 1, l, None, DEFAULT_BUDGET)?;
        Ok(jacobi_table(&params).get(1, 1).clone())
    }

    /// The Jacobi sum itself when its relative norm is rational, and otherwise the product of
    /// its conjugates over coset representatives of ⟨β⟩, whose relative norm is the absolute norm.
    pub fn norm_element(spec: &VarietySpec, j: &CyclotomicElement) -> Result<CyclotomicElement> {
        let nm = j.norm_to_subfield(spec.beta as i64, spec.f)?;
        if nm.as_rational().is_some() {
            return Ok(j.clone());
        }
        let mut acc = CyclotomicElement::one(spec.l);
        let mut g = 1u64;
        for _ in 0..spec.e {
            acc = &acc * &j.galois(g as i64)?;
            g = g * spec.gamma % spec.l;
        }
        Ok(acc)
    }

    pub fn jacobi_point(spec: &VarietySpec, p: u64) -> Result<VarietyPoint> {
        let j = jacobi_sum_of_order(spec.l, p)?;
        spec.point_from_alpha(&norm_element(spec, &j)?)
    }

    /// The first `count` primes p ≡ 1 (mod l).
    pub fn split_primes(l: u64, count: usize) -> Vec<u64> {
        (2..).filter(|&p| is_prime(p) && p % l == 1).take(count).collect()
    }

    /// Generators for sampling: Jacobi-sum points for the first split primes, one Galois
    /// conjugate of each, the ζ point (norm one) and the identity.
    pub fn generator_pool(spec: &VarietySpec, primes: usize) -> Result<Vec<VarietyPoint>> {
        let mut pool = vec![spec.identity(), spec.point_from_alpha(&CyclotomicElement::zeta_pow(spec.l, 1))?];
        for p in split_primes(spec.l, primes) {
            let x = jacobi_point(spec, p)?;
            let conj = spec.point_from_alpha(&spec.alpha(&x).galois(spec.gamma as i64)?)?;
            pool.push(x);
            pool.push(conj);
        }
        Ok(pool)
    }

    /// A (-1)-product of one to three pool elements, each inverted with probability 1/3.
    pub fn random_w_point(spec: &VarietySpec, pool: &[VarietyPoint], rng: &mut impl Rng) -> Result<VarietyPoint> {
        let k = rng.gen_range(1..=3);
        let mut acc = spec.identity();
        for _ in 0..k {
            let mut g = pool[rng.gen_range(0..pool.len())].clone();
            if rng.gen_range(0..3) == 0 {
                g = spec.invert(&g, -1)?;
            }
            acc = spec.compose(&acc, &g, -1)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const CASES: [(u64, u64); 7] = [(5, 2), (7, 2), (5, 4), (7, 3), (7, 6), (11, 2), (13, 3)];

    fn spec(l: u64, f: u64) -> VarietySpec {
        VarietySpec::new(l, f, None).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert_eq!(spec(7, 3).beta, 2);
        assert_eq!(spec(7, 3).gamma, 3);
        assert!(VarietySpec::new(9, 2, None).is_err());
        assert!(VarietySpec::new(7, 4, None).is_err());
        assert_eq!(VarietySpec::new(7, 3, Some(2)), Err(Error::NotAGenerator));
    }

    #[test]
    fn correlation_sums_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (l, f) in CASES {
            let s = spec(l, f);
            for _ in 0..3 {
                let x = random_point(l, &mut rng, 4);
                assert_eq!(s.correlation_sums(&x), s.correlation_sums_bruteforce(&x), "l={l} f={f}");
            }
        }
    }

    #[test]
    fn sums_agree_with_relative_norm_decomposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = spec(7, 3);
        for _ in 0..10 {
            let x = random_point(7, &mut rng, 5);
            let sums = s.correlation_sums_bruteforce(&x);
            let nm = s.alpha(&x).norm_to_subfield(s.beta as i64, s.f).unwrap();
            let dec = nm.period_decompose(s.gamma, s.e).unwrap();
            // class of γ^m holds S_m - S_0 after a_0 normalization; class 0 holds S_e - S_0
            for m in 1..=s.e as usize {
                assert_eq!(dec[m % s.e as usize], &sums[m] - &sums[0]);
            }
        }
    }

    #[test]
    fn identity_and_zero() {
        for (l, f) in CASES {
            let s = spec(l, f);
            let one = s.identity();
            assert_eq!(s.alpha(&one), CyclotomicElement::one(l));
            assert_eq!(s.form_h(&one), rat(1));
            assert!(s.is_on_w(&one));
            assert!(s.is_on_v(&s.zero()));
            assert!(!s.is_on_w(&s.zero()));
            assert_eq!(s.invert(&one, -1).unwrap(), one);
            assert!(s.torsion_norm_criterion(&one).unwrap());
        }
    }

    #[test]
    fn quadratic_case_forms() {
        // h uses the γ-class; q uses the class of 1. They differ as polynomials but agree on V.
        let s = spec(5, 2);
        let x = VarietyPoint::from_ints(&[1, 2, 3, 4]);
        let sums = s.correlation_sums(&x);
        assert_eq!(&sums[0] - &sums[s.e as usize], quadratic_q(&x));
        assert_eq!(quadratic_q(&x), rat(1 + 4 + 9 + 16 - (2 + 6 + 12)));
        let p = jacobi_point(&s, 11).unwrap();
        assert!(s.is_on_v(&p));
        assert_eq!(s.form_h(&p), rat(11));
        assert_eq!(quadratic_q(&p), rat(11));
        let inv = s.invert(&p, -1).unwrap();
        assert_eq!(s.form_h(&inv), ratio(1, 11));
        for l in [5u64, 7] {
            let s = spec(l, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(l);
            let x = random_point(l, &mut rng, 6);
            let sums = s.correlation_sums(&x);
            assert_eq!(&sums[0] - &sums[s.e as usize], quadratic_q(&x));
        }
    }

    #[test]
    fn fiber_341() {
        let s = spec(5, 2);
        let x = jacobi_point(&s, 11).unwrap();
        let y = jacobi_point(&s, 31).unwrap();
        let rep = s.fiber_map_check(&x, &y).unwrap();
        assert!(rep.pass(), "{}", rep.summary());
        assert_eq!(s.form_h(&s.compose(&x, &y, -1).unwrap()), rat(341));
        assert!(!s.torsion_norm_criterion(&x).unwrap());
        assert_eq!(s.fiber_map_check(&s.zero(), &y).unwrap_err(), Error::FiberMismatch);
    }

    #[test]
    fn trivial_dickson_point_is_not_torsion() {
        // (4p,0,0,0) corresponds to J*(1,1)-coefficients all equal to -p
        let s = spec(5, 2);
        let x = VarietyPoint::from_ints(&[11, 11, 11, 11]);
        assert!(s.is_on_w(&x));
        assert!(!s.torsion_norm_criterion(&x).unwrap());
    }

    #[test]
    fn gram_determinants() {
        for l in [3u64, 5, 7, 11, 13] {
            let g = gram_of_q(l);
            assert_eq!(linalg::det(&g), ratio(l as i64, 1 << (l - 1)));
            assert_eq!(linalg::det(&gram_of_unreduced_q(l)), rat(0));
        }
    }

    #[test]
    fn regularity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (l, f) in [(5, 4), (7, 3)] {
            let s = spec(l, f);
            assert!(s.regularity_check(3 * (l as usize - 1), &mut rng).pass());
        }
    }

    #[test]
    fn noncommutative_for_d_one() {
        let s = spec(5, 2);
        let x = VarietyPoint::from_ints(&[1, 0, 2, 0]);
        let y = VarietyPoint::from_ints(&[0, 3, 0, 1]);
        assert_ne!(s.compose(&x, &y, 1).unwrap(), s.compose(&y, &x, 1).unwrap());
        assert_eq!(s.compose(&x, &y, -1).unwrap(), s.compose(&y, &x, -1).unwrap());
        assert!(matches!(s.compose(&x, &y, 5), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn sampled_points_are_in_w() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (l, f) in CASES {
            let s = spec(l, f);
            let pool = generator_pool(&s, 2).unwrap();
            for g in &pool {
                assert!(s.is_on_w(g), "generator off W for l={l} f={f}");
            }
            let x = random_w_point(&s, &pool, &mut rng).unwrap();
            assert!(s.is_on_w(&x));
        }
    }

    fn arb_point(l: u64) -> impl Strategy<Value = VarietyPoint> {
        prop::collection::vec(-6i64..=6, l as usize - 1).prop_map(|v| VarietyPoint::from_ints(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn alpha_homomorphism(x in arb_point(7), y in arb_point(7), d in 1i64..7) {
            let s = spec(7, 3);
            let z = s.compose_unchecked(&x, &y, d).unwrap();
            prop_assert_eq!(s.alpha(&z), &s.alpha(&x).galois(-d).unwrap() * &s.alpha(&y));
        }

        #[test]
        fn prop_6_1(x in arb_point(7), y in arb_point(7), z in arb_point(7), d1 in 1i64..7, d2 in 1i64..7) {
            let s = spec(7, 2);
            prop_assert!(s.op_properties_check(&x, &y, &z, d1, d2).unwrap().pass());
        }

        #[test]
        fn determinant_is_norm(x in arb_point(5), d in 1i64..5) {
            let s = spec(5, 4);
            prop_assert!(s.det_equals_norm_check(&x, d).unwrap().pass());
        }

        #[test]
        fn derived_form_diagonal(x in arb_point(7)) {
            let s = spec(7, 3);
            prop_assert_eq!(s.derived_form(&[x.clone(), x.clone(), x.clone()]).unwrap(), s.form_h(&x));
        }

        #[test]
        fn inverse_composes_to_identity(x in arb_point(7), d in 1i64..7) {
            let s = spec(7, 3);
            if !s.norm(&x).is_zero() {
                let y = s.invert(&x, d).unwrap();
                prop_assert_eq!(s.compose(&x, &y, d).unwrap(), s.identity());
            }
        }
    }
}

/// The displayed identity tables relating the forms at φ_d(x, y) to products of forms at x and y.
pub mod tables {
    use super::*;

    /// One relation: form[target](φ_d(x, y)) = Σ coef · form[i](x) · form[j](y) for every d in `ds`.
    pub struct Relation {
        pub name: &'static str,
        pub l: u64,
        pub f: u64,
        pub ds: &'static [i64],
        pub target: usize,
        pub terms: &'static [(i64, usize, usize)],
    }

    /// The forms a relation refers to: (q, f_1, f_2) for f = 2 and (h, h_1) otherwise.
    pub fn forms(spec: &VarietySpec, x: &VarietyPoint) -> Vec<Rat> {
        if spec.f == 2 {
            (0..(spec.l as i64 - 1) / 2).map(|m| quadratic_fm(x, m)).collect()
        } else {
            let s = spec.correlation_sums(x);
            (0..spec.e as usize).map(|m| &s[m] - &s[m + 1]).collect()
        }
    }

    const Q: usize = 0;
    const F1: usize = 1;
    const F2: usize = 2;

    pub const RELATIONS: &[Relation] = &[
        Relation { name: "l=3 q", l: 3, f: 2, ds: &[1, 2], target: Q, terms: &[(1, Q, Q)] },
        Relation { name: "l=5 d=±1 q", l: 5, f: 2, ds: &[1, 4], target: Q, terms: &[(1, Q, Q), (1, F1, F1)] },
        Relation {
            name: "l=5 d=±1 f1",
            l: 5,
            f: 2,
            ds: &[1, 4],
            target: F1,
            terms: &[(1, Q, F1), (1, F1, Q), (1, F1, F1)],
        },
        Relation {
            name: "l=5 d=±2 q",
            l: 5,
            f: 2,
            ds: &[2, 3],
            target: Q,
            terms: &[(1, Q, Q), (1, F1, Q), (-1, F1, F1)],
        },
        Relation { name: "l=5 d=±2 f1", l: 5, f: 2, ds: &[2, 3], target: F1, terms: &[(1, Q, F1), (-1, F1, Q)] },
        Relation {
            name: "l=7 d=±1 q",
            l: 7,
            f: 2,
            ds: &[1, 6],
            target: Q,
            terms: &[(1, Q, Q), (1, F1, F1), (1, F2, F2)],
        },
        Relation {
            name: "l=7 d=±1 f1",
            l: 7,
            f: 2,
            ds: &[1, 6],
            target: F1,
            terms: &[(1, Q, F1), (1, F1, Q), (1, F1, F1), (1, F1, F2), (1, F2, F1), (1, F2, F2)],
        },
        Relation {
            name: "l=7 d=±1 f2",
            l: 7,
            f: 2,
            ds: &[1, 6],
            target: F2,
            terms: &[(1, Q, F2), (1, F2, Q), (1, F1, F1), (1, F1, F2), (1, F2, F1)],
        },
        Relation {
            name: "l=7 d=±3 q",
            l: 7,
            f: 2,
            ds: &[3, 4],
            target: Q,
            terms: &[(1, Q, Q), (1, F1, Q), (-1, F1, F2), (1, F2, F1), (-1, F2, F2)],
        },
        Relation {
            name: "l=7 d=±3 f1",
            l: 7,
            f: 2,
            ds: &[3, 4],
            target: F1,
            terms: &[(1, Q, F1), (1, F2, Q), (-1, F1, F2)],
        },
        Relation {
            name: "l=7 d=±3 f2",
            l: 7,
            f: 2,
            ds: &[3, 4],
            target: F2,
            terms: &[(1, Q, F2), (-1, F1, Q), (-1, F2, Q), (-1, F1, F1), (1, F1, F2), (1, F2, F2)],
        },
        Relation {
            name: "l=7 d=±2 q",
            l: 7,
            f: 2,
            ds: &[2, 5],
            target: Q,
            terms: &[(1, Q, Q), (1, F1, Q), (1, F2, Q), (-1, F1, F1), (1, F1, F2), (-1, F2, F1)],
        },
        Relation {
            name: "l=7 d=±2 f1",
            l: 7,
            f: 2,
            ds: &[2, 5],
            target: F1,
            terms: &[(1, Q, F1), (-1, F1, Q), (-1, F2, Q), (1, F1, F1), (-1, F2, F2)],
        },
        Relation {
            name: "l=7 d=±2 f2",
            l: 7,
            f: 2,
            ds: &[2, 5],
            target: F2,
            terms: &[(1, Q, F2), (1, F1, Q), (-1, F2, F1)],
        },
        Relation {
            name: "l=7 f=3 d=1 h",
            l: 7,
            f: 3,
            ds: &[1],
            target: 0,
            terms: &[(1, 0, 0), (1, 1, 0), (2, 1, 1)],
        },
        Relation { name: "l=7 f=3 d=1 h1", l: 7, f: 3, ds: &[1], target: 1, terms: &[(1, 0, 1), (-1, 1, 0)] },
    ];

    /// Checks every relation at `trials` random pairs of integer points (no V membership needed).
    pub fn check_all(trials: usize, rng: &mut impl Rng) -> Result<Report> {
        let mut rep = Report::new("identity-tables", format!("{trials} random pairs per relation"));
        for rel in RELATIONS {
            let spec = VarietySpec::new(rel.l, rel.f, None)?;
            let mut clause = Clause::new(rel.name);
            for _ in 0..trials {
                let x = random_point(rel.l, rng, 9);
                let y = random_point(rel.l, rng, 9);
                let (fx, fy) = (forms(&spec, &x), forms(&spec, &y));
                let want: Rat = rel.terms.iter().map(|&(c, i, j)| rat(c) * &fx[i] * &fy[j]).sum();
                for &d in rel.ds {
                    let z = spec.compose(&x, &y, d)?;
                    let got = forms(&spec, &z)[rel.target].clone();
                    clause.record(got == want, || format!("d={d} x={:?} y={:?}", fmt_rats(&x.x), fmt_rats(&y.x)));
                }
            }
            rep.push(clause);
        }
        Ok(rep)
    }
}

/// A norm-one point u = v *_(-1) (σ_c v)⁻¹; it lies in W_1 because σ_c preserves the fiber.
pub fn norm_one_point(spec: &VarietySpec, v: &VarietyPoint, c: i64) -> Result<VarietyPoint> {
    let conj = spec.point_from_alpha(&spec.alpha(v).galois(c)?)?;
    spec.compose(v, &spec.invert(&conj, -1)?, -1)
}

#[cfg(test)]
mod table_tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_tables_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = tables::check_all(10, &mut rng).unwrap();
        assert!(rep.pass(), "{}", rep.summary());
    }

    #[test]
    fn conjugate_ratio_has_norm_one() {
        let s = VarietySpec::new(7, 3, None).unwrap();
        let v = samples::jacobi_point(&s, 29).unwrap();
        let u = norm_one_point(&s, &v, 3).unwrap();
        assert!(s.is_on_w(&u));
        assert_eq!(s.form_h(&u), rat(1));
        assert_ne!(u, s.identity());
    }
}
