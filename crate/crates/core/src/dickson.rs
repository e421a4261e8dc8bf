//! The Diophantine systems attached to Jacobi sums of order 3, 5 and 7: extraction of solution
//! tuples, exact verification, bilinear lifts to products of prime powers and the self-lifts.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, prime_power};
use crate::cyclo::CyclotomicElement;
use crate::cyclotomy::{jacobi_table, CycParams, JacobiTable};
use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::rational::{fmt_rat, fmt_rats, is_integer, parse_rats, rat, ratio, Rat};
use crate::report::{Clause, Report};

/// A sum Σ c · u_i · v_j with 1-based indices.
type Bilinear = &'static [(i64, usize, usize)];

/// The per-l data: the linear change of basis, the orbit action and the displayed formulas.
struct System {
    /// a_k = σ^(orbit[k-1])(T) / denom for the coefficient a_k of ζ^k.
    orbit: &'static [usize],
    denom: i64,
    /// T as a linear form in x.
    lead: &'static [(i64, usize)],
    /// σ as a matrix acting on column vectors x, entries num/den.
    sigma: &'static [&'static [(i64, i64)]],
    /// σ power used by the closed-form lift for d = 1, .., l-1.
    lift_power: &'static [usize],
    /// z_k = -(1/lift_denom[k]) σ^i(lift_forms[k](x, y)).
    lift_forms: &'static [Bilinear],
    lift_denoms: &'static [i64],
    /// z_(k,-1) for x = y as quadratic forms with their denominators.
    self_forms: &'static [Bilinear],
    self_denoms: &'static [i64],
}

const SYS3: System = System {
    orbit: &[0, 1],
    denom: 2,
    lead: &[(-1, 1), (3, 2)],
    sigma: &[&[(1, 1), (0, 1)], &[(0, 1), (-1, 1)]],
    lift_power: &[0, 1],
    lift_forms: &[&[(1, 1, 1), (27, 2, 2)], &[(1, 1, 2), (-1, 2, 1)]],
    lift_denoms: &[2, 2],
    self_forms: &[&[(1, 1, 1), (-27, 2, 2)], &[(1, 1, 2)]],
    self_denoms: &[2, 1],
};

const SYS5: System = System {
    orbit: &[0, 3, 1, 2],
    denom: 4,
    lead: &[(-1, 1), (5, 2), (4, 3), (2, 4)],
    sigma: &[
        &[(1, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (-1, 1), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (-1, 1)],
        &[(0, 1), (0, 1), (1, 1), (0, 1)],
    ],
    lift_power: &[0, 1, 3, 2],
    lift_forms: &[
        &[(1, 1, 1), (125, 2, 2), (50, 3, 3), (50, 4, 4)],
        &[(1, 1, 2), (1, 2, 1), (-2, 3, 3), (4, 3, 4), (4, 4, 3), (2, 4, 4)],
        &[(1, 1, 3), (-5, 2, 3), (10, 2, 4), (-1, 3, 1), (5, 3, 2), (-10, 4, 2)],
        &[(1, 1, 4), (10, 2, 3), (5, 2, 4), (-10, 3, 2), (-1, 4, 1), (-5, 4, 2)],
    ],
    lift_denoms: &[4, 4, 4, 4],
    self_forms: &[
        &[(1, 1, 1), (125, 2, 2), (-50, 3, 3), (-50, 4, 4)],
        &[(1, 1, 2), (1, 3, 3), (-4, 3, 4), (-1, 4, 4)],
        &[(1, 1, 3), (10, 2, 4), (-5, 3, 2)],
        &[(1, 1, 4), (10, 2, 3), (5, 4, 2)],
    ],
    self_denoms: &[4, 2, 2, 2],
};

const SYS7: System = System {
    orbit: &[0, 4, 5, 2, 1, 3],
    denom: 12,
    lead: &[(-2, 1), (6, 2), (7, 5), (21, 6)],
    sigma: &[
        &[(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (-1, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1)],
        &[(0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (0, 1), (-1, 2), (-3, 2)],
        &[(0, 1), (0, 1), (0, 1), (0, 1), (1, 2), (-1, 2)],
    ],
    lift_power: &[0, 2, 1, 4, 5, 3],
    lift_forms: &[
        &[(2, 1, 1), (42, 2, 2), (42, 3, 3), (42, 4, 4), (343, 5, 5), (1029, 6, 6)],
        &[
            (2, 1, 2),
            (-2, 2, 1),
            (7, 2, 5),
            (-21, 2, 6),
            (-21, 3, 5),
            (-21, 3, 6),
            (-21, 4, 5),
            (21, 4, 6),
            (-7, 5, 2),
            (21, 5, 3),
            (21, 5, 4),
            (21, 6, 2),
            (21, 6, 3),
            (-21, 6, 4),
        ],
        &[
            (2, 1, 3),
            (-21, 2, 5),
            (-21, 2, 6),
            (-2, 3, 1),
            (-14, 3, 5),
            (-42, 4, 6),
            (21, 5, 2),
            (14, 5, 3),
            (21, 6, 2),
            (42, 6, 4),
        ],
        &[
            (2, 1, 4),
            (-21, 2, 5),
            (21, 2, 6),
            (-42, 3, 6),
            (-2, 4, 1),
            (7, 4, 5),
            (21, 4, 6),
            (21, 5, 2),
            (-7, 5, 4),
            (-21, 6, 2),
            (42, 6, 3),
            (-21, 6, 4),
        ],
        &[
            (28, 1, 5),
            (-12, 2, 2),
            (36, 2, 3),
            (36, 2, 4),
            (36, 3, 2),
            (24, 3, 3),
            (36, 4, 2),
            (-12, 4, 4),
            (28, 5, 1),
            (-49, 5, 5),
            (441, 5, 6),
            (441, 6, 5),
            (147, 6, 6),
        ],
        &[
            (28, 1, 6),
            (12, 2, 2),
            (12, 2, 3),
            (-12, 2, 4),
            (12, 3, 2),
            (24, 3, 4),
            (-12, 4, 2),
            (24, 4, 3),
            (-12, 4, 4),
            (147, 5, 5),
            (49, 5, 6),
            (28, 6, 1),
            (49, 6, 5),
            (-441, 6, 6),
        ],
    ],
    lift_denoms: &[12, 12, 12, 12, 168, 168],
    self_forms: &[
        &[(2, 1, 1), (-42, 2, 2), (-42, 3, 3), (-42, 4, 4), (343, 5, 5), (1029, 6, 6)],
        &[(4, 1, 2), (-14, 2, 5), (42, 3, 5), (42, 4, 5), (42, 2, 6), (42, 3, 6), (-42, 4, 6)],
        &[(4, 1, 3), (42, 2, 5), (28, 3, 5), (42, 2, 6), (84, 4, 6)],
        &[(4, 1, 4), (42, 2, 5), (-14, 4, 5), (-42, 2, 6), (84, 3, 6), (-42, 4, 6)],
        &[
            (12, 2, 2),
            (-72, 2, 3),
            (-24, 3, 3),
            (-72, 2, 4),
            (12, 4, 4),
            (56, 1, 5),
            (-49, 5, 5),
            (882, 5, 6),
            (147, 6, 6),
        ],
        &[
            (-12, 2, 2),
            (-24, 2, 3),
            (24, 2, 4),
            (-48, 3, 4),
            (12, 4, 4),
            (147, 5, 5),
            (56, 1, 6),
            (98, 5, 6),
            (-441, 6, 6),
        ],
    ],
    self_denoms: &[12, 12, 12, 12, 168, 168],
};

/// Norm form coefficients: l = 3: 4P = x₁² + 27x₂²; l = 5: 16P = ..; l = 7: 72P = ...
const NORM3: Bilinear = &[(1, 1, 1), (27, 2, 2)];
const NORM5: Bilinear = &[(1, 1, 1), (125, 2, 2), (50, 3, 3), (50, 4, 4)];
const NORM7: Bilinear = &[(2, 1, 1), (42, 2, 2), (42, 3, 3), (42, 4, 4), (343, 5, 5), (1029, 6, 6)];
/// x₁x₂ - x₃² + 4x₃x₄ + x₄² = 0.
const REL5: Bilinear = &[(1, 1, 2), (-1, 3, 3), (4, 3, 4), (1, 4, 4)];
const QUAD7A: Bilinear = &[
    (12, 2, 2),
    (-12, 4, 4),
    (147, 5, 5),
    (-441, 6, 6),
    (56, 1, 6),
    (24, 2, 3),
    (-24, 2, 4),
    (48, 3, 4),
    (98, 5, 6),
];
const QUAD7B: Bilinear = &[
    (12, 3, 3),
    (-12, 4, 4),
    (49, 5, 5),
    (-147, 6, 6),
    (28, 1, 5),
    (28, 1, 6),
    (48, 2, 3),
    (24, 2, 4),
    (24, 3, 4),
    (490, 5, 6),
];

/// The classical bilinear composition for l = 7 in the rescaled coordinates
/// X = (x₁, .., x₄, 7x₅/2, 7x₆/2): Z_k = -(1/den_k) Σ c X_i Y_j. The X₄Y₆ coefficient of Z₂
/// is 3 and the X₄Y₁ coefficient of Z₄ is -1, as forced by rescaling the unscaled lift.
const RESCALED7: [Bilinear; 6] = [
    &[(1, 1, 1), (21, 2, 2), (21, 3, 3), (21, 4, 4), (14, 5, 5), (42, 6, 6)],
    &[
        (1, 1, 2),
        (-1, 2, 1),
        (1, 2, 5),
        (-3, 2, 6),
        (-3, 3, 5),
        (-3, 3, 6),
        (-3, 4, 5),
        (3, 4, 6),
        (-1, 5, 2),
        (3, 5, 3),
        (3, 5, 4),
        (3, 6, 2),
        (3, 6, 3),
        (-3, 6, 4),
    ],
    &[(1, 1, 3), (-3, 2, 5), (-3, 2, 6), (-1, 3, 1), (-2, 3, 5), (-6, 4, 6), (3, 5, 2), (2, 5, 3), (3, 6, 2), (6, 6, 4)],
    &[
        (1, 1, 4),
        (-3, 2, 5),
        (3, 2, 6),
        (-6, 3, 6),
        (-1, 4, 1),
        (1, 4, 5),
        (3, 4, 6),
        (3, 5, 2),
        (-1, 5, 4),
        (-3, 6, 2),
        (6, 6, 3),
        (-3, 6, 4),
    ],
    &[
        (2, 1, 5),
        (-3, 2, 2),
        (9, 2, 3),
        (9, 2, 4),
        (9, 3, 2),
        (6, 3, 3),
        (9, 4, 2),
        (-3, 4, 4),
        (2, 5, 1),
        (-1, 5, 5),
        (9, 5, 6),
        (9, 6, 5),
        (3, 6, 6),
    ],
    &[
        (2, 1, 6),
        (3, 2, 2),
        (3, 2, 3),
        (-3, 2, 4),
        (3, 3, 2),
        (6, 3, 4),
        (-3, 4, 2),
        (6, 4, 3),
        (-3, 4, 4),
        (3, 5, 5),
        (1, 5, 6),
        (2, 6, 1),
        (1, 6, 5),
        (-9, 6, 6),
    ],
];
const RESCALED7_DENOMS: [i64; 6] = [1, 1, 1, 1, 2, 2];

fn system(l: u64) -> Result<&'static System> {
    match l {
        3 => Ok(&SYS3),
        5 => Ok(&SYS5),
        7 => Ok(&SYS7),
        _ => Err(Error::InvalidParameters(format!("no Diophantine system for l = {l}"))),
    }
}

fn eval(form: Bilinear, u: &[Rat], v: &[Rat]) -> Rat {
    form.iter().map(|&(c, i, j)| rat(c) * &u[i - 1] * &v[j - 1]).sum()
}

/// A solution tuple with the prime power it represents and the field generator it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DicksonSolution {
    pub l: u64,
    pub prime_power: u64,
    pub x: Vec<Rat>,
    pub gamma: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub l: u64,
    pub prime_power: u64,
    pub x: Vec<String>,
    #[serde(default)]
    pub gamma: Option<u64>,
}

impl DicksonSolution {
    pub fn to_json(&self) -> SolutionJson {
        SolutionJson { l: self.l, prime_power: self.prime_power, x: fmt_rats(&self.x), gamma: self.gamma }
    }

    pub fn from_json(j: &SolutionJson) -> Result<Self> {
        system(j.l)?;
        let x = parse_rats(&j.x)?;
        if x.len() as u64 != j.l - 1 {
            return Err(Error::Parse(format!("a solution for l = {} has {} entries", j.l, j.l - 1)));
        }
        Ok(DicksonSolution { l: j.l, prime_power: j.prime_power, x, gamma: j.gamma })
    }
}

fn sigma_matrix(sys: &System) -> RatMatrix {
    sys.sigma.iter().map(|row| row.iter().map(|&(n, d)| ratio(n, d)).collect()).collect()
}

fn mat_vec(m: &RatMatrix, v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// σ^k applied to x.
pub fn orbit_action(l: u64, x: &[Rat], k: usize) -> Result<Vec<Rat>> {
    let s = sigma_matrix(system(l)?);
    let mut v = x.to_vec();
    for _ in 0..k {
        v = mat_vec(&s, &v);
    }
    Ok(v)
}

/// The matrix sending x to the coefficients (a_1, .., a_(l-1)) of ζ^1, .., ζ^(l-1).
pub fn coefficient_matrix(l: u64) -> Result<RatMatrix> {
    let sys = system(l)?;
    let n = l as usize - 1;
    let s = sigma_matrix(sys);
    let mut lead = vec![Rat::zero(); n];
    for &(c, i) in sys.lead {
        lead[i - 1] = rat(c);
    }
    // row vector of T∘σ^k is lead · S^k
    let mut powers = vec![lead];
    for k in 1..n {
        let prev = &powers[k - 1];
        powers.push(linalg::vec_mat(prev, &s));
    }
    let den = rat(sys.denom);
    Ok(sys.orbit.iter().map(|&k| powers[k].iter().map(|c| c / &den).collect()).collect())
}

/// The element Σ a_k ζ^k attached to a tuple.
pub fn to_element(l: u64, x: &[Rat]) -> Result<CyclotomicElement> {
    let a = mat_vec(&coefficient_matrix(l)?, x);
    let mut circ = vec![Rat::zero()];
    circ.extend(a);
    Ok(CyclotomicElement::from_circular(l, &circ))
}

/// Solves the linear change of basis for the tuple of an element of Q(ζ_l).
pub fn extract_tuple(j: &CyclotomicElement, l: u64) -> Result<Vec<Rat>> {
    if j.order() != l {
        return Err(Error::OrderMismatch(j.order(), l));
    }
    let a = j.a0_view()?;
    let inv = linalg::inverse(&coefficient_matrix(l)?)?;
    let x = mat_vec(&inv, &a[1..]);
    if let Some(bad) = x.iter().find(|v| !is_integer(v)) {
        return Err(Error::NotExtractable(format!("non-integral coordinate {}", fmt_rat(bad))));
    }
    Ok(x)
}

pub fn extract_solution(j: &CyclotomicElement, l: u64, prime_power: u64, gamma: Option<u64>) -> Result<DicksonSolution> {
    Ok(DicksonSolution { l, prime_power, x: extract_tuple(j, l)?, gamma })
}

/// J*(1,1) for the order-l characters of F_(p^r).
pub fn jacobi_for(l: u64, p: u64, r: u32, gamma: Option<&[u64]>, budget: u64) -> Result<(CycParams, JacobiTable)> {
    let params = CycParams::build(p, r, l, gamma, budget)?;
    let table = jacobi_table(&params);
    Ok((params, table))
}

pub fn extract_from_field(l: u64, p: u64, r: u32, gamma: Option<&[u64]>, budget: u64) -> Result<DicksonSolution> {
    let (params, table) = jacobi_for(l, p, r, gamma, budget)?;
    extract_solution(table.get(1, 1), l, params.q(), Some(params.ctx().gamma()))
}

/// Checks every equation, congruence and side condition of the system for `sol.prime_power`.
///
/// The coprimality and non-degeneracy conditions describe the split case p ≡ 1 (mod l); for
/// p^r ≡ 1 with p ≢ 1 the Jacobi sum is a rational multiple of a root of unity and those
/// conditions fail, so they are marked as not applicable there and for composite products.
pub fn verify_system(sol: &DicksonSolution) -> Result<Report> {
    verify_inner(sol, true)
}

/// The system for a lifted product: the equations and the congruence, without the side
/// condition, which a product such as J·σ_(-1)(J) = P need not satisfy.
pub fn verify_product_system(sol: &DicksonSolution) -> Result<Report> {
    verify_inner(sol, false)
}

fn verify_inner(sol: &DicksonSolution, side_condition: bool) -> Result<Report> {
    let l = sol.l;
    system(l)?;
    let x = &sol.x;
    let mut rep = Report::new("dickson", format!("l={} P={} x={:?}", l, sol.prime_power, fmt_rats(x)));
    let mut c = Clause::new("integrality");
    c.record(x.iter().all(is_integer), || "non-integral coordinate".into());
    rep.push(c);
    let pp = rat(sol.prime_power as i64);
    let (lhs_scale, norm) = match l {
        3 => (4, NORM3),
        5 => (16, NORM5),
        _ => (72, NORM7),
    };
    let nv = eval(norm, x, x);
    rep.clause("norm equation").record(nv == rat(lhs_scale) * &pp, || format!("{} != {lhs_scale}·{}", fmt_rat(&nv), sol.prime_power));
    let relations: &[(&str, Bilinear)] = match l {
        5 => &[("relation", REL5)],
        7 => &[("quadric 1", QUAD7A), ("quadric 2", QUAD7B)],
        _ => &[],
    };
    for (name, form) in relations {
        let v = eval(form, x, x);
        rep.clause(name).record(v.is_zero(), || format!("value {}", fmt_rat(&v)));
    }
    let x1 = &x[0];
    let cong = is_integer(x1) && x1.numer().mod_floor(&(l as i64).into()) == One::one();
    rep.clause(&format!("x1 ≡ 1 (mod {l})")).record(cong, || fmt_rat(x1));
    if !side_condition {
        return Ok(rep);
    }
    let split = prime_power(sol.prime_power).filter(|&(p, _)| p % l == 1).map(|(p, _)| p);
    let side = match l {
        3 => "p ∤ x1",
        5 => "p ∤ x1² - 125x2²",
        _ => "(x5, x6) ≠ (0, 0)",
    };
    let clause = rep.clause(side);
    if let Some(p) = split {
        let ok = match l {
            3 => !(x1.numer() % p).is_zero(),
            5 => {
                let v = x1 * x1 - rat(125) * &x[1] * &x[1];
                !(v.numer() % p).is_zero()
            }
            _ => !(x[4].is_zero() && x[5].is_zero()),
        };
        clause.record(ok, || "side condition fails".into());
    }
    Ok(rep)
}

/// The closed-form lift z_k = -(1/den_k) σ^i(B_k(x, y)) with i fixed by d.
pub fn closed_form_lift(l: u64, x: &[Rat], y: &[Rat], d: i64) -> Result<Vec<Rat>> {
    let sys = system(l)?;
    let d = inv_mod(d, l).map(|_| d.rem_euclid(l as i64) as usize).ok_or(Error::NotAUnit { c: d, n: l })?;
    let xs = orbit_action(l, x, sys.lift_power[d - 1])?;
    Ok(sys
        .lift_forms
        .iter()
        .zip(sys.lift_denoms)
        .map(|(form, &den)| -eval(form, &xs, y) / rat(den))
        .collect())
}

/// The tuple of -σ_(-d)(J_x) J_y.
pub fn composed_lift(l: u64, x: &[Rat], y: &[Rat], d: i64) -> Result<Vec<Rat>> {
    let jx = to_element(l, x)?;
    let jy = to_element(l, y)?;
    let c = -(&jx.galois(-d)? * &jy);
    extract_tuple(&c, l)
}

/// Lifts two solutions to a solution for the product, by both routes.
pub fn lift_solution(a: &DicksonSolution, b: &DicksonSolution, d: i64) -> Result<DicksonSolution> {
    if a.l != b.l {
        return Err(Error::OrderMismatch(a.l, b.l));
    }
    let closed = closed_form_lift(a.l, &a.x, &b.x, d)?;
    let composed = composed_lift(a.l, &a.x, &b.x, d)?;
    if closed != composed {
        return Err(Error::InternalInconsistency(format!(
            "closed form {:?} vs composition {:?}",
            fmt_rats(&closed),
            fmt_rats(&composed)
        )));
    }
    Ok(DicksonSolution { l: a.l, prime_power: a.prime_power * b.prime_power, x: closed, gamma: None })
}

/// The quadratic self-lift formulas for x = y and d = -1.
pub fn self_lift(l: u64, x: &[Rat]) -> Result<Vec<Rat>> {
    let sys = system(l)?;
    Ok(sys.self_forms.iter().zip(sys.self_denoms).map(|(form, &den)| -eval(form, x, x) / rat(den)).collect())
}

/// The rescaled l = 7 composition table evaluated at X, Y.
pub fn rescaled_table(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    RESCALED7.iter().zip(RESCALED7_DENOMS).map(|(form, den)| -eval(form, x, y) / rat(den)).collect()
}

fn rescale(x: &[Rat]) -> Vec<Rat> {
    let s = ratio(7, 2);
    x.iter().enumerate().map(|(i, v)| if i >= 4 { v * &s } else { v.clone() }).collect()
}

/// For l = 7: the scaled lift z' = 6z keeps the two quadrics, halves the product of the norm
/// form and is multiplicative for half the norm form.
pub fn l7_renormalization_check(a: &DicksonSolution, b: &DicksonSolution, d: i64) -> Result<Report> {
    if a.l != 7 || b.l != 7 {
        return Err(Error::InvalidParameters("the renormalization check is for l = 7".into()));
    }
    let z = lift_solution(a, b, d)?.x;
    let zp: Vec<Rat> = z.iter().map(|v| v * rat(6)).collect();
    let q = |v: &[Rat]| eval(NORM7, v, v);
    let (qx, qy, qz) = (q(&a.x), q(&b.x), q(&zp));
    let mut rep = Report::new("l7-renormalization", format!("P={} Q={} d={d}", a.prime_power, b.prime_power));
    let half = ratio(1, 2);
    rep.clause("q(z') = q(x)q(y)/2").record(qz == &qx * &qy * &half, || fmt_rat(&qz));
    rep.clause("q(z') != q(x)q(y)").record(qz != &qx * &qy, || "naive multiplicativity holds".into());
    let qp = |v: &Rat| v * &half;
    rep.clause("q'(z') = q'(x)q'(y)").record(qp(&qz) == qp(&qx) * qp(&qy), || fmt_rat(&qp(&qz)));
    for (name, form) in [("z' on quadric 1", QUAD7A), ("z' on quadric 2", QUAD7B)] {
        let v = eval(form, &zp, &zp);
        rep.clause(name).record(v.is_zero(), || fmt_rat(&v));
    }
    let c = rep.clause("rescaled bilinear table");
    if d.rem_euclid(7) == 1 {
        let got = rescaled_table(&rescale(&a.x), &rescale(&b.x));
        let want = rescale(&zp);
        c.record(got == want, || format!("{:?} vs {:?}", fmt_rats(&got), fmt_rats(&want)));
    }
    Ok(rep)
}

/// Checks that every σ-translate of a solution still satisfies the system.
pub fn orbit_check(sol: &DicksonSolution) -> Result<Report> {
    let mut rep = Report::new("dickson-orbit", format!("l={} P={}", sol.l, sol.prime_power));
    let mut v = sol.x.clone();
    for k in 0..sol.l as usize - 1 {
        let r = verify_system(&DicksonSolution { x: v.clone(), ..sol.clone() })?;
        rep.clause(&format!("σ^{k}")).record(r.pass(), || r.summary());
        v = orbit_action(sol.l, &v, 1)?;
    }
    rep.clause("σ has order l-1").record(v == sol.x, || "orbit does not close".into());
    Ok(rep)
}

pub fn abs_max(x: &[Rat]) -> Rat {
    x.iter().map(|v| v.abs()).max().unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::DEFAULT_BUDGET;

    fn sol(l: u64, p: u64, r: u32) -> DicksonSolution {
        extract_from_field(l, p, r, None, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn l3_p7() {
        let s = extract_from_field(3, 7, 1, Some(&[3]), DEFAULT_BUDGET).unwrap();
        assert_eq!(s.x, vec![rat(1), rat(-1)]);
        assert!(verify_system(&s).unwrap().pass());
        let bad = DicksonSolution { l: 3, prime_power: 7, x: vec![rat(2), rat(1)], gamma: None };
        assert!(!verify_system(&bad).unwrap().pass());
        let other = DicksonSolution { x: vec![rat(1), rat(1)], ..s.clone() };
        assert!(verify_system(&other).unwrap().pass());
    }

    #[test]
    fn l3_p13_matches_search() {
        let s = sol(3, 13, 1);
        assert_eq!(s.x[0], rat(-5));
        assert_eq!(s.x[1].abs(), rat(1));
        let hits: Vec<(i64, i64)> = (-7i64..=7)
            .flat_map(|a| (-2i64..=2).map(move |b| (a, b)))
            .filter(|&(a, b)| a * a + 27 * b * b == 52 && a.rem_euclid(3) == 1)
            .collect();
        assert_eq!(hits, vec![(-5, -1), (-5, 1)]);
    }

    #[test]
    fn extraction_verifies() {
        for (l, p, r) in [(5, 11, 1), (5, 31, 1), (5, 2, 4), (5, 3, 4), (7, 29, 1), (7, 43, 1), (7, 2, 3), (3, 2, 2), (3, 5, 2)] {
            let s = sol(l, p, r);
            let rep = verify_system(&s).unwrap();
            assert!(rep.pass(), "{}", rep.summary());
            assert!(orbit_check(&s).unwrap().pass());
            assert_eq!(to_element(l, &s.x).unwrap(), jacobi_for(l, p, r, None, DEFAULT_BUDGET).unwrap().1.get(1, 1).clone());
        }
    }

    #[test]
    fn lifts_agree() {
        for (l, p, q) in [(3, 7, 13), (5, 11, 31), (7, 29, 43), (5, 11, 11), (7, 29, 29)] {
            let (a, b) = (sol(l, p, 1), sol(l, q, 1));
            for d in 1..l as i64 {
                let z = lift_solution(&a, &b, d).unwrap();
                let rep = verify_product_system(&z).unwrap();
                assert!(rep.pass(), "l={l} d={d}: {}", rep.summary());
            }
        }
    }

    #[test]
    fn l3_product_identity() {
        let (x1, x2, y1, y2) = (rat(1), rat(-1), rat(-5), rat(1));
        let lhs = (&x1 * &x1 + rat(27) * &x2 * &x2) * (&y1 * &y1 + rat(27) * &y2 * &y2);
        for s in [1, -1] {
            let a = &x1 * &y1 + rat(27 * s) * &x2 * &y2;
            let b = &x1 * &y2 - rat(s) * &y1 * &x2;
            assert_eq!(lhs, &a * &a + rat(27) * &b * &b);
        }
    }

    #[test]
    fn self_lifts() {
        for (l, p) in [(3, 7), (5, 11), (7, 29)] {
            let a = sol(l, p, 1);
            assert_eq!(self_lift(l, &a.x).unwrap(), lift_solution(&a, &a, -1).unwrap().x);
        }
    }

    #[test]
    fn trivial_product_fails_side_condition() {
        let a = sol(5, 11, 1);
        let z = lift_solution(&a, &a, 1).unwrap();
        assert_eq!(z.x, vec![rat(-44), rat(0), rat(0), rat(0)]);
        assert!(verify_product_system(&z).unwrap().pass());
        assert!(!verify_system(&z).unwrap().pass());
    }

    #[test]
    fn renormalization() {
        let rep = l7_renormalization_check(&sol(7, 29, 1), &sol(7, 43, 1), 1).unwrap();
        assert!(rep.pass(), "{}", rep.summary());
    }

    #[test]
    fn json_round_trip() {
        let s = sol(5, 11, 1);
        let j = serde_json::to_string(&s.to_json()).unwrap();
        let back: SolutionJson = serde_json::from_str(&j).unwrap();
        assert_eq!(DicksonSolution::from_json(&back).unwrap(), s);
    }

    #[test]
    fn not_extractable() {
        let j = CyclotomicElement::from_circular(5, &[rat(0), ratio(1, 3), rat(0), rat(0), rat(0)]);
        assert!(matches!(extract_tuple(&j, 5), Err(Error::NotExtractable(_))));
    }
}
