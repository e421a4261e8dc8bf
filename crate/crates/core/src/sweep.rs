//! The acceptance matrix: one function per criterion, shared by `verify-all` and the
//! acceptance test target.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{prime_powers_upto, prime_power};
use crate::composition::{cyc_compose_check, davenport_hasse_check, fourier_check, genjacobi_compose};
use crate::cyclotomy::{
    cyc_from_jacobi, cyc_from_mult, cyc_numbers, genjacobi_from_matrix, jacobi_from_cyc, jacobi_table,
    matrix_from_genjacobi, mult_matrix, verify_t7, verify_t8, CycParams, JacobiTable,
};
use crate::dickson::{
    self, extract_tuple, l7_renormalization_check, lift_solution, orbit_check, self_lift, verify_product_system,
    verify_system, DicksonSolution,
};
use crate::error::Result;
use crate::linalg;
use crate::rational::ratio;
use crate::report::Report;
use crate::variety::{gram_of_q, gram_of_unreduced_q, random_point, samples, tables, VarietySpec};

pub const DEFAULT_PERIOD_THRESHOLD: u64 = 200;

/// Settings shared by every criterion.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub budget: u64,
    pub period_threshold: u64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { budget: crate::finite_field::DEFAULT_BUDGET, period_threshold: DEFAULT_PERIOD_THRESHOLD, seed: 1 }
    }
}

/// Outcome of one criterion: the number of instances checked and the first failing report.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub instances: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Collects pass/fail over many reports, keeping the first failure.
struct Tally {
    instances: u64,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { instances: 0, failure: None }
    }

    fn report(&mut self, r: &Report) {
        self.check(r.pass(), || r.summary());
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn result<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", ctx()));
                None
            }
        }
    }
}

pub const TITLES: [&str; 10] = [
    "classical axiom sweep",
    "transform round trips",
    "composition of generalized Jacobi sums",
    "lifting relation",
    "double Fourier transform",
    "multiplicativity of h",
    "identity tables",
    "group structure on W",
    "regularity",
    "Diophantine systems",
];

pub fn run(id: u32, cfg: &RunConfig) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    match id {
        1 => classical_sweep(cfg, &mut t, false),
        2 => classical_sweep(cfg, &mut t, true),
        3 => composition(cfg, &mut t),
        4 => lifting(cfg, &mut t),
        5 => fourier(cfg, &mut t),
        6 => multiplicativity(cfg, &mut t),
        7 => identity_tables(cfg, &mut t),
        8 => group_structure(cfg, &mut t),
        9 => regularity(cfg, &mut t),
        10 => diophantine(cfg, &mut t),
        _ => t.check(false, || format!("no criterion {id}")),
    }
    Outcome {
        id,
        title: TITLES.get(id as usize - 1).copied().unwrap_or("unknown"),
        pass: t.failure.is_none(),
        instances: t.instances,
        failure: t.failure,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(cfg: &RunConfig) -> Vec<Outcome> {
    (1..=10).map(|id| run(id, cfg)).collect()
}

/// Every (p^r, e) with p^r <= 1500, 2 <= e <= 7 and e | p^r - 1.
pub fn classical_instances() -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for q in prime_powers_upto(1500) {
        let (p, r) = prime_power(q).expect("prime power");
        for e in 2..=7u64 {
            if (q - 1) % e == 0 {
                out.push((p, r, e));
            }
        }
    }
    out
}

fn classical_sweep(cfg: &RunConfig, t: &mut Tally, round_trips: bool) {
    let instances = classical_instances();
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8);
    let chunks: Vec<Vec<(u64, u32, u64)>> =
        (0..threads).map(|k| instances.iter().skip(k).step_by(threads).copied().collect()).collect();
    let results: Vec<Tally> = std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                s.spawn(move || {
                    let mut local = Tally::new();
                    for &(p, r, e) in chunk {
                        let label = || format!("p={p} r={r} e={e}");
                        let Some(params) = local.result(CycParams::build(p, r, e, None, cfg.budget), label) else {
                            continue;
                        };
                        if round_trips {
                            round_trip_instance(&params, &mut local);
                        } else {
                            local.report(&verify_t7(&params));
                            local.report(&verify_t8(&params, cfg.period_threshold));
                        }
                    }
                    local
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    for r in results {
        t.instances += r.instances;
        if t.failure.is_none() {
            t.failure = r.failure;
        }
    }
}

fn round_trip_instance(params: &CycParams, t: &mut Tally) {
    let label = params.label();
    let jac = jacobi_table(params);
    let cyc = cyc_numbers(params);
    let mult = mult_matrix(&cyc);
    t.check(jacobi_from_cyc(&cyc) == jac, || format!("{label}: J from Cyc differs from the counted table"));
    match cyc_from_jacobi(&jac) {
        Ok(c) => t.check(c == cyc, || format!("{label}: Cyc from J differs from the counted matrix")),
        Err(e) => t.check(false, || format!("{label}: {e}")),
    }
    t.check(cyc_from_mult(&mult) == cyc, || format!("{label}: Cyc from C differs"));
    match genjacobi_from_matrix(&mult) {
        Ok(j) => t.check(j == jac, || format!("{label}: (A) does not reproduce J")),
        Err(e) => t.check(false, || format!("{label}: {e}")),
    }
    match matrix_from_genjacobi(&jac) {
        Ok(m) => t.check(m == mult, || format!("{label}: (B) does not reproduce C")),
        Err(e) => t.check(false, || format!("{label}: {e}")),
    }
}

fn table(p: u64, e: u64, cfg: &RunConfig, t: &mut Tally) -> Option<JacobiTable> {
    t.result(CycParams::build(p, 1, e, None, cfg.budget), || format!("p={p} e={e}")).map(|c| jacobi_table(&c))
}

fn composition(cfg: &RunConfig, t: &mut Tally) {
    for (p, q, e) in [(7u64, 13u64, 3u64), (11, 31, 5), (29, 43, 7), (7, 7, 3)] {
        let (Some(a), Some(b)) = (table(p, e, cfg, t), table(q, e, cfg, t)) else { continue };
        for d in 1..e as i64 {
            if crate::arith::inv_mod(d, e).is_none() {
                continue;
            }
            let label = || format!("p={p} q={q} e={e} d={d}");
            if let Some(comp) = t.result(genjacobi_compose(&a, &b, d), label) {
                let want = ((p - 1) / e + (q - 1) / e) as i64;
                t.check(comp.v == want, || format!("{}: v = {} not f1 + f2 = {want}", label(), comp.v));
            }
            if let Some(r) = t.result(cyc_compose_check(&a, &b, d), label) {
                t.report(&r);
            }
        }
    }
}

fn lifting(cfg: &RunConfig, t: &mut Tally) {
    for (p, r, n, e) in [(7u64, 1u32, 2u32, 3u64), (7, 1, 3, 3), (11, 1, 2, 5), (13, 1, 2, 3)] {
        if let Some(rep) = t.result(davenport_hasse_check(p, r, n, e, cfg.budget), || format!("p={p} n={n} e={e}")) {
            t.report(&rep);
        }
    }
}

fn fourier(cfg: &RunConfig, t: &mut Tally) {
    for (p, e) in [(13u64, 3u64), (17, 4), (11, 5), (13, 6), (7, 3)] {
        if let Some(rep) = t.result(fourier_check(p, e, 20, cfg.seed, cfg.budget), || format!("p={p} e={e}")) {
            let twisted = rep.clauses.iter().any(|c| c.clause == "twisted relation" && c.checked > 0);
            t.check((p - 1) / e % 2 == 1 || twisted, || format!("p={p} e={e}: twisted relation not exercised"));
            t.report(&rep);
        }
    }
}

pub const VARIETY_CASES: [(u64, u64); 7] = [(5, 2), (7, 2), (5, 4), (7, 3), (7, 6), (11, 2), (13, 3)];

fn multiplicativity(cfg: &RunConfig, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (l, f) in VARIETY_CASES {
        let Some(spec) = t.result(VarietySpec::new(l, f, None), || format!("l={l} f={f}")) else { continue };
        let Some(pool) = t.result(samples::generator_pool(&spec, 2), || spec.label()) else { continue };
        for _ in 0..200 {
            let pair = samples::random_w_point(&spec, &pool, &mut rng)
                .and_then(|x| Ok((x, samples::random_w_point(&spec, &pool, &mut rng)?)));
            let Some((x, y)) = t.result(pair, || spec.label()) else { continue };
            let (hx, hy) = (spec.form_h(&x), spec.form_h(&y));
            t.check(spec.is_on_v(&x) && spec.is_on_v(&y), || format!("{}: sample off V", spec.label()));
            for d in 1..l as i64 {
                let Some(z) = t.result(spec.compose(&x, &y, d), || spec.label()) else { continue };
                t.check(spec.is_on_v(&z), || format!("{} d={d}: composite off V", spec.label()));
                t.check(spec.form_h(&z) == &hx * &hy, || format!("{} d={d}: h not multiplicative", spec.label()));
            }
        }
    }
}

fn identity_tables(cfg: &RunConfig, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if let Some(rep) = t.result(tables::check_all(100, &mut rng), || "identity tables".into()) {
        for c in &rep.clauses {
            t.check(c.pass, || format!("{}: {}", c.clause, c.witness.clone().unwrap_or_default()));
        }
    }
}

fn group_structure(cfg: &RunConfig, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (l, f) in VARIETY_CASES {
        let Some(spec) = t.result(VarietySpec::new(l, f, None), || format!("l={l} f={f}")) else { continue };
        let units: Vec<i64> = (1..l as i64).collect();
        for _ in 0..100 {
            let (x, y, z) = (random_point(l, &mut rng, 5), random_point(l, &mut rng, 5), random_point(l, &mut rng, 5));
            let d1 = *units.choose(&mut rng).unwrap();
            let d2 = *units.choose(&mut rng).unwrap();
            if let Some(r) = t.result(spec.op_properties_check(&x, &y, &z, d1, d2), || spec.label()) {
                t.report(&r);
            }
            if let Some(r) = t.result(spec.det_equals_norm_check(&x, d1), || spec.label()) {
                t.report(&r);
            }
            if !spec.norm(&x).is_zero() {
                let inv = spec.invert(&x, d1).and_then(|y| spec.compose(&x, &y, d1));
                if let Some(one) = t.result(inv, || spec.label()) {
                    t.check(one == spec.identity(), || format!("{} d={d1}: x * x⁻¹ != 1", spec.label()));
                }
            }
        }
        let Some(pool) = t.result(samples::generator_pool(&spec, 2), || spec.label()) else { continue };
        for _ in 0..20 {
            let pair = samples::random_w_point(&spec, &pool, &mut rng)
                .and_then(|x| Ok((x, samples::random_w_point(&spec, &pool, &mut rng)?)));
            let Some((x, y)) = t.result(pair, || spec.label()) else { continue };
            let d = *units.choose(&mut rng).unwrap();
            let inv = spec.invert(&x, d);
            if let Some(xi) = t.result(inv, || spec.label()) {
                t.check(spec.is_on_w(&xi), || format!("{}: inverse of a W point off W", spec.label()));
            }
            if let Some(r) = t.result(spec.fiber_map_check(&x, &y), || spec.label()) {
                t.report(&r);
            }
            let c = rng.gen_range(2..l as i64);
            let torsor = crate::variety::norm_one_point(&spec, &x, c).and_then(|u| {
                let (x2, y2) = spec.torsor_action(&u, &x, &y)?;
                Ok((u, x2, y2))
            });
            if let Some((u, x2, y2)) = t.result(torsor, || spec.label()) {
                let same = spec.compose(&x2, &y2, -1).ok() == spec.compose(&x, &y, -1).ok();
                t.check(same, || format!("{}: torsor action moved the product", spec.label()));
                let rec = spec.invert(&x, -1).and_then(|xi| spec.compose(&xi, &x2, -1));
                if let Some(rec) = t.result(rec, || spec.label()) {
                    t.check(rec == u && spec.form_h(&rec).is_one(), || format!("{}: connecting element", spec.label()));
                }
            }
        }
    }
}

fn regularity(cfg: &RunConfig, t: &mut Tally) {
    for l in [3u64, 5, 7, 11, 13] {
        let det = linalg::det(&gram_of_q(l));
        t.check(det == ratio(l as i64, 1 << (l - 1)), || format!("l={l}: det = {det}"));
        t.check(linalg::det(&gram_of_unreduced_q(l)).is_zero(), || format!("l={l}: unreduced form is regular"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (l, f) in [(5u64, 4u64), (7, 3)] {
        if let Some(spec) = t.result(VarietySpec::new(l, f, None), || format!("l={l} f={f}")) {
            t.report(&spec.regularity_check(3 * (l as usize - 1), &mut rng));
        }
    }
}

fn diophantine(cfg: &RunConfig, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for l in [3u64, 5, 7] {
        let mut sols: Vec<(u64, u32, DicksonSolution)> = Vec::new();
        for q in prime_powers_upto(2000).into_iter().filter(|q| q % l == 1) {
            let (p, r) = prime_power(q).expect("prime power");
            let sol = dickson::extract_from_field(l, p, r, None, cfg.budget);
            let Some(sol) = t.result(sol, || format!("l={l} q={q}")) else { continue };
            if let Some(rep) = t.result(verify_system(&sol), || format!("l={l} q={q}")) {
                t.report(&rep);
            }
            if let Some(rep) = t.result(orbit_check(&sol), || format!("l={l} q={q}")) {
                t.report(&rep);
            }
            if let Some(rep) = t.result(self_lift(l, &sol.x), || format!("l={l} q={q}")) {
                let lifted = lift_solution(&sol, &sol, -1).map(|z| z.x);
                t.check(lifted.as_ref().ok() == Some(&rep), || format!("l={l} q={q}: self-lift formulas differ"));
            }
            sols.push((p, r, sol));
        }
        let split: Vec<&(u64, u32, DicksonSolution)> = sols.iter().filter(|s| s.1 == 1).collect();
        for _ in 0..5 {
            let a = split.choose(&mut rng).unwrap();
            let b = split.choose(&mut rng).unwrap();
            lift_pair(cfg, t, l, a, b);
        }
    }
}

fn lift_pair(cfg: &RunConfig, t: &mut Tally, l: u64, a: &(u64, u32, DicksonSolution), b: &(u64, u32, DicksonSolution)) {
    let label = || format!("l={l} P={} Q={}", a.2.prime_power, b.2.prime_power);
    let (Some(ta), Some(tb)) = (
        t.result(dickson::jacobi_for(l, a.0, a.1, None, cfg.budget), label),
        t.result(dickson::jacobi_for(l, b.0, b.1, None, cfg.budget), label),
    ) else {
        return;
    };
    for d in 1..l as i64 {
        let Some(z) = t.result(lift_solution(&a.2, &b.2, d), label) else { continue };
        if let Some(rep) = t.result(verify_product_system(&z), label) {
            t.report(&rep);
        }
        let via_tables = genjacobi_compose(&ta.1, &tb.1, d).and_then(|c| extract_tuple(c.get(1, 1), l));
        if let Some(x) = t.result(via_tables, label) {
            t.check(x == z.x, || format!("{} d={d}: table composition disagrees", label()));
        }
        if l == 7 {
            if let Some(rep) = t.result(l7_renormalization_check(&a.2, &b.2, d), label) {
                t.report(&rep);
            }
        }
    }
}

pub fn render_text(outcomes: &[Outcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&format!(
            "criterion {:>2} {:<40} {} ({} checks){}\n",
            o.id,
            o.title,
            if o.pass { "PASS" } else { "FAIL" },
            o.instances,
            o.failure.as_ref().map(|f| format!(": {f}")).unwrap_or_default()
        ));
    }
    s
}
