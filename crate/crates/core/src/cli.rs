//! Command-line front end. Every value printed is an exact integer or rational string.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::composition::{cyc_compose_check, d_compose, davenport_hasse_check, fourier_check, genjacobi_compose};
use crate::cyclo::render_terms;
use crate::cyclotomy::{
    cyc_numbers, jacobi_circular, jacobi_pair_counts, jacobi_table, mult_matrix, period_polynomial, verify_genjacobi_axioms, verify_matrix_conditions,
    verify_t7, verify_t8, CycParams, JacobiJson, JacobiTable, MatrixJson, TaggedMatrix, ALL_MATRIX_CONDITIONS,
};
use crate::dickson::{self, DicksonSolution, SolutionJson};
use crate::error::Error;
use crate::rational::{fmt_rat, fmt_rats, rat};
use crate::report::Report;
use crate::sweep::{self, RunConfig};
use crate::variety::{PointJson, VarietyPoint, VarietySpec};

pub const BUDGET_ENV: &str = "JACOBI_FORMS_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "jacobi-forms", version, about = "Exact Jacobi sums, cyclotomic numbers and multiplicative forms")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    json: bool,
    /// Largest field size allowed (default from the environment or 2000000).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest p for which Gaussian periods are computed in Q(ζ_p).
    #[arg(long, global = true, default_value_t = sweep::DEFAULT_PERIOD_THRESHOLD)]
    period_threshold: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    e: u64,
    /// Generator as coefficients c0,c1,.. of its polynomial representative (an integer for r = 1).
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<u64>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The Jacobi sum table J*(a,b) of F_(p^r) for characters of order e.
    Jacobi(FieldArgs),
    /// Cyclotomic numbers, the multiplication matrix and the period polynomial.
    Cyc(FieldArgs),
    /// d-composition of two matrices or two generalized Jacobi sum tables.
    #[command(subcommand)]
    Compose(ComposeCmd),
    /// Lifting relation between F_(p^r) and F_(p^(nr)).
    DhCheck {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        e: u64,
    },
    /// Convolution theorem and the twisted transform relation.
    FourierCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Points of the varieties V and W.
    #[command(subcommand)]
    Variety(VarietyCmd),
    /// Diophantine systems for l = 3, 5, 7.
    #[command(subcommand)]
    Dickson(DicksonCmd),
    /// Individual classical or axiomatic checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// The full acceptance matrix.
    VerifyAll {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
}

#[derive(Subcommand, Debug)]
enum ComposeCmd {
    Matrices {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        a: PathBuf,
        b: PathBuf,
    },
    Genjacobi {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        a: PathBuf,
        b: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum VarietyCmd {
    Check {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        f: u64,
        point: PathBuf,
    },
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        x: PathBuf,
        y: PathBuf,
    },
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        x: PathBuf,
    },
    Fiber {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        f: u64,
        x: PathBuf,
        y: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum DicksonCmd {
    Extract {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, value_delimiter = ',')]
        gamma: Option<Vec<u64>>,
    },
    Lift {
        #[arg(long)]
        l: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        a: PathBuf,
        b: PathBuf,
    },
    Verify {
        solution: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    T7(FieldArgs),
    T8(FieldArgs),
    /// Axioms (1)-(7) for a table in JSON.
    Axioms {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Conditions (i)-(vii) for a matrix in JSON.
    Matrix {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// Failure modes mapped to exit codes: usage errors exit 2, failed checks exit 1.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::AxiomViolation { .. }
            | Error::NotExtractable(_)
            | Error::FiberMismatch
            | Error::NotInvertible
            | Error::InternalInconsistency(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<bool, Failure>;

struct Ctx<'a> {
    json: bool,
    cfg: RunConfig,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, value: &impl Serialize, text: impl FnOnce() -> String) {
        let s = if self.json { serde_json::to_string_pretty(value).expect("serializable") } else { text() };
        let _ = writeln!(self.out, "{s}");
    }

    fn report(&mut self, r: &Report) -> bool {
        self.emit(r, || render_report(r));
        r.pass()
    }
}

pub fn render_report(r: &Report) -> String {
    let mut s = format!("{} [{}]: {}\n", r.check, r.subject, if r.pass() { "PASS" } else { "FAIL" });
    for c in &r.clauses {
        s.push_str(&format!("  {} {} ({} checked)", if c.pass { "ok  " } else { "FAIL" }, c.clause, c.checked));
        if let Some(w) = &c.witness {
            s.push_str(&format!(": {w}"));
        }
        s.push('\n');
    }
    s.pop();
    s
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let usage = |e: serde_json::Error| Failure::Usage(format!("{}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).map_err(usage)?;
    match T::deserialize(&value) {
        Ok(v) => Ok(v),
        Err(err) => {
            // Accept the `--json` output of another command, which wraps the payload.
            for key in ["solution", "point", "table", "matrix", "result"] {
                if let Some(inner) = value.get(key) {
                    if let Ok(v) = T::deserialize(inner) {
                        return Ok(v);
                    }
                }
            }
            Err(usage(err))
        }
    }
}

fn budget_from_env(flag: Option<u64>) -> std::result::Result<u64, Failure> {
    let b = match flag {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{BUDGET_ENV} must be an integer")))?,
            Err(_) => crate::finite_field::DEFAULT_BUDGET,
        },
    };
    if b < 4 {
        return Err(Failure::Usage("the budget must be at least 4".into()));
    }
    Ok(b)
}

fn params(a: &FieldArgs, cfg: &RunConfig) -> std::result::Result<CycParams, Failure> {
    Ok(CycParams::build(a.p, a.r, a.e, a.gamma.as_deref(), cfg.budget)?)
}

/// J(a,b) as the unreduced character sum Σ_k N_k ζ^k with N_k counted from the field.
fn sums_as_counted(p: &CycParams) -> Vec<Vec<String>> {
    let counts = jacobi_pair_counts(p);
    let e = p.e() as i64;
    (0..e)
        .map(|a| {
            (0..e)
                .map(|b| render_terms(&jacobi_circular(&counts, a, b).into_iter().map(rat).collect::<Vec<_>>()))
                .collect()
        })
        .collect()
}

fn table_text(t: &JacobiTable) -> String {
    let mut s = format!("e={} v={} p={}\n", t.e, t.v, fmt_rat(&t.p));
    for a in 0..t.e as i64 {
        for b in 0..t.e as i64 {
            s.push_str(&format!("J({a},{b}) = {}\n", t.get(a, b)));
        }
    }
    s.pop();
    s
}

fn matrix_text(m: &TaggedMatrix) -> String {
    let rows: Vec<String> = m.m.iter().map(|r| fmt_rats(r).join(" ")).collect();
    format!("e={} v={} p={}\n{}", m.e, m.v, fmt_rat(&m.p), rows.join("\n"))
}

fn point_text(spec: &VarietySpec, x: &VarietyPoint) -> String {
    format!("{} x=({})", spec.label(), fmt_rats(&x.x).join(", "))
}

fn dispatch(cli: Cli, ctx: &mut Ctx) -> CmdResult {
    let cfg = ctx.cfg.clone();
    match cli.command {
        Command::Jacobi(a) => {
            let p = params(&a, &cfg)?;
            let t = jacobi_table(&p);
            let display = sums_as_counted(&p);
            let v = json!({ "field": p.ctx().to_json(), "table": t.to_json(), "display": display });
            ctx.emit(&v, || {
                let mut s = format!("e={} v={} p={}", t.e, t.v, fmt_rat(&t.p));
                for a in 0..t.e as i64 {
                    for b in 0..t.e as i64 {
                        let shown = &display[a as usize][b as usize];
                        s.push_str(&format!("\nJ({a},{b}) = {shown}   [reduced: {}]", t.get(a, b)));
                    }
                }
                s
            });
            Ok(true)
        }
        Command::Cyc(a) => {
            let p = params(&a, &cfg)?;
            let cyc = cyc_numbers(&p);
            let c = mult_matrix(&cyc);
            let poly = fmt_rats(&period_polynomial(&p));
            let v = json!({ "field": p.ctx().to_json(), "cyc": cyc.to_json(), "mult": c.to_json(), "period_polynomial": poly });
            ctx.emit(&v, || {
                format!(
                    "cyclotomic numbers\n{}\nmultiplication matrix\n{}\nperiod polynomial (constant term first): {}",
                    matrix_text(&cyc),
                    matrix_text(&c),
                    poly.join(" ")
                )
            });
            Ok(true)
        }
        Command::Compose(ComposeCmd::Matrices { d, a, b }) => {
            let a = TaggedMatrix::from_json(&read_json::<MatrixJson>(&a)?)?;
            let b = TaggedMatrix::from_json(&read_json::<MatrixJson>(&b)?)?;
            let c = d_compose(&a, &b, d)?;
            ctx.emit(&c.to_json(), || matrix_text(&c));
            Ok(true)
        }
        Command::Compose(ComposeCmd::Genjacobi { d, a, b }) => {
            let a = JacobiTable::from_json(&read_json::<JacobiJson>(&a)?)?;
            let b = JacobiTable::from_json(&read_json::<JacobiJson>(&b)?)?;
            let c = genjacobi_compose(&a, &b, d)?;
            let rep = cyc_compose_check(&a, &b, d)?;
            let v = json!({ "table": c.to_json(), "report": rep });
            ctx.emit(&v, || format!("{}\n{}", table_text(&c), render_report(&rep)));
            Ok(rep.pass())
        }
        Command::DhCheck { p, r, n, e } => Ok(ctx.report(&davenport_hasse_check(p, r, n, e, cfg.budget)?)),
        Command::FourierCheck { p, e, trials } => Ok(ctx.report(&fourier_check(p, e, trials, cfg.seed, cfg.budget)?)),
        Command::Variety(cmd) => variety(cmd, ctx),
        Command::Dickson(cmd) => dickson_cmd(cmd, ctx),
        Command::Verify(VerifyCmd::T7(a)) => Ok(ctx.report(&verify_t7(&params(&a, &cfg)?))),
        Command::Verify(VerifyCmd::T8(a)) => Ok(ctx.report(&verify_t8(&params(&a, &cfg)?, cfg.period_threshold))),
        Command::Verify(VerifyCmd::Axioms { input }) => {
            let t = JacobiTable::from_json(&read_json::<JacobiJson>(&input)?)?;
            Ok(ctx.report(&verify_genjacobi_axioms(&t)))
        }
        Command::Verify(VerifyCmd::Matrix { input }) => {
            let m = TaggedMatrix::from_json(&read_json::<MatrixJson>(&input)?)?;
            Ok(ctx.report(&verify_matrix_conditions(&m, &ALL_MATRIX_CONDITIONS)))
        }
        Command::VerifyAll { only } => {
            let ids = only.unwrap_or_else(|| (1..=10).collect());
            if let Some(bad) = ids.iter().find(|&&i| !(1..=10).contains(&i)) {
                return Err(Failure::Usage(format!("no criterion {bad}")));
            }
            let outcomes: Vec<_> = ids.iter().map(|&i| sweep::run(i, &cfg)).collect();
            let pass = outcomes.iter().all(|o| o.pass);
            let v = json!({ "seed": cfg.seed, "budget": cfg.budget, "criteria": outcomes, "pass": pass });
            ctx.emit(&v, || {
                format!("seed {} budget {}\n{}", cfg.seed, cfg.budget, sweep::render_text(&outcomes).trim_end())
            });
            Ok(pass)
        }
    }
}

fn load_point(path: &Path) -> std::result::Result<(VarietySpec, VarietyPoint), Failure> {
    Ok(VarietySpec::from_json(&read_json::<PointJson>(path)?)?)
}

fn same_spec(a: &VarietySpec, b: &VarietySpec) -> std::result::Result<(), Failure> {
    if a != b {
        return Err(Failure::Usage(format!("points live on different varieties: {} vs {}", a.label(), b.label())));
    }
    Ok(())
}

fn expect_spec(spec: &VarietySpec, l: u64, f: u64) -> std::result::Result<(), Failure> {
    if spec.l != l || spec.f != f {
        return Err(Failure::Usage(format!("point file is for {}, not l={l} f={f}", spec.label())));
    }
    Ok(())
}

fn variety(cmd: VarietyCmd, ctx: &mut Ctx) -> CmdResult {
    match cmd {
        VarietyCmd::Check { l, f, point } => {
            let (spec, x) = load_point(&point)?;
            expect_spec(&spec, l, f)?;
            let sums = fmt_rats(&spec.correlation_sums(&x));
            let (on_v, on_w) = (spec.is_on_v(&x), spec.is_on_w(&x));
            let h = fmt_rat(&spec.form_h(&x));
            let norm = fmt_rat(&spec.norm(&x));
            let v = json!({ "point": spec.to_json(&x), "sums": sums, "h": h, "norm": norm, "on_V": on_v, "on_W": on_w });
            ctx.emit(&v, || {
                format!(
                    "{}\nS = ({})\nh = {h}\nN(α) = {norm}\non V: {on_v}\non W: {on_w}",
                    point_text(&spec, &x),
                    sums.join(", ")
                )
            });
            Ok(on_v)
        }
        VarietyCmd::Compose { d, x, y } => {
            let (sx, px) = load_point(&x)?;
            let (sy, py) = load_point(&y)?;
            same_spec(&sx, &sy)?;
            let z = sx.compose(&px, &py, d)?;
            ctx.emit(&sx.to_json(&z), || point_text(&sx, &z));
            Ok(true)
        }
        VarietyCmd::Invert { d, x } => {
            let (spec, px) = load_point(&x)?;
            if !spec.is_on_w(&px) {
                return Err(Failure::Check(Error::NotInvertible.to_string()));
            }
            let y = spec.invert(&px, d)?;
            ctx.emit(&spec.to_json(&y), || point_text(&spec, &y));
            Ok(true)
        }
        VarietyCmd::Fiber { l, f, x, y } => {
            let (sx, px) = load_point(&x)?;
            let (sy, py) = load_point(&y)?;
            same_spec(&sx, &sy)?;
            expect_spec(&sx, l, f)?;
            Ok(ctx.report(&sx.fiber_map_check(&px, &py)?))
        }
    }
}

fn solution_text(s: &DicksonSolution) -> String {
    format!("l={} P={} x=({})", s.l, s.prime_power, fmt_rats(&s.x).join(", "))
}

fn dickson_cmd(cmd: DicksonCmd, ctx: &mut Ctx) -> CmdResult {
    let budget = ctx.cfg.budget;
    match cmd {
        DicksonCmd::Extract { l, p, r, gamma } => {
            let s = dickson::extract_from_field(l, p, r, gamma.as_deref(), budget)?;
            let rep = dickson::verify_system(&s)?;
            ctx.emit(&json!({ "solution": s.to_json(), "report": rep }), || {
                format!("{}\n{}", solution_text(&s), render_report(&rep))
            });
            Ok(rep.pass())
        }
        DicksonCmd::Lift { l, d, a, b } => {
            let a = DicksonSolution::from_json(&read_json::<SolutionJson>(&a)?)?;
            let b = DicksonSolution::from_json(&read_json::<SolutionJson>(&b)?)?;
            if a.l != l || b.l != l {
                return Err(Failure::Usage(format!("solutions are not for l = {l}")));
            }
            let z = dickson::lift_solution(&a, &b, d)?;
            let rep = dickson::verify_product_system(&z)?;
            ctx.emit(&json!({ "solution": z.to_json(), "report": rep }), || {
                format!("{}\n{}", solution_text(&z), render_report(&rep))
            });
            Ok(rep.pass())
        }
        DicksonCmd::Verify { solution } => {
            let s = DicksonSolution::from_json(&read_json::<SolutionJson>(&solution)?)?;
            Ok(ctx.report(&dickson::verify_system(&s)?))
        }
    }
}

/// Runs the command line `args` (including the program name), writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let budget = match budget_from_env(cli.budget) {
        Ok(b) => b,
        Err(Failure::Usage(m)) | Err(Failure::Check(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 2;
        }
    };
    let json = cli.json || cli.format == Format::Json;
    let cfg = RunConfig { budget, period_threshold: cli.period_threshold, seed: cli.seed };
    let mut ctx = Ctx { json, cfg, out };
    match dispatch(cli, &mut ctx) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Check(m)) => {
            let _ = writeln!(err, "check failed: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}
