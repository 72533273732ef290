//! Command-line front end. `run` parses arguments, executes one subcommand
//! and returns the process exit code: 0 on success, 1 when a check fails
//! (details as JSON on stderr), 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arithfn::ArithmeticFunctionSpec;
use crate::classical::verify_identities;
use crate::error::{Error, Result};
use crate::favard::{
    affine_transform_moments, favard_report, hankel_determinants, moments_from_recurrence, q_recurrence,
    Definiteness,
};
use crate::grid::{decimal_string, default_x_grid, parse_grid};
use crate::poly::{generate_convolution, generate_three_term, GeneratedFamily};
use crate::scalar::{Precision, Scalar};
use crate::turan::{
    check_ratio_bound_on, check_v_monotone_on, d_criterion_vs_v, turan_sweep_on, TuranFamily, DEFAULT_REL_TOL,
};
use crate::zeros::{
    check_endpoints, interlacing_check, jacobi_from_h, eigenvalues, sturm_roots, trajectory, trajectory_csv,
    zeros_of_p, DEFAULT_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tolerance for comparing the two generators on float backends.
pub const GENERATOR_REL_TOL: f64 = 1e-20;

#[derive(Parser, Debug)]
#[command(name = "turanpoly", version, about = "Polynomial families P_n^{g,h}: generation, orthogonality and Turán checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits for non-rational values.
    #[arg(long, global = true, env = "TURANPOLY_PRECISION", default_value_t = crate::scalar::DEFAULT_PRECISION)]
    precision: u32,

    /// Tolerance override (absolute for zeros, relative for sign checks).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// h spec: one, id, sigma, altsign, power:<s>, table:[..] or table:<file>. Repeatable.
    #[arg(long = "h")]
    h: Vec<String>,

    /// Adds h = n^s for every s on this grid ("a:b:step" or a list).
    #[arg(long)]
    s_grid: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    Convolution,
    ThreeTerm,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate P_0..P_N and optionally compare both generators.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "id")]
        g: String,
        #[arg(long = "n", visible_alias = "n-max", default_value_t = 10)]
        n: usize,
        /// Defaults to `both` when g = id, else `convolution`.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// q-recurrence, moments, Hankel determinants and orthogonality.
    Favard {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n", visible_alias = "n-max", default_value_t = 10)]
        n: usize,
        #[arg(long, default_value = "1")]
        mu0: String,
    },
    /// Moments of the q-recurrence, optionally after an affine change of variable.
    Moments {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n", visible_alias = "n-max", default_value_t = 10)]
        n: usize,
        #[arg(long, default_value = "1")]
        mu0: String,
        #[arg(long, requires = "affine_b")]
        affine_a: Option<String>,
        #[arg(long, requires = "affine_a")]
        affine_b: Option<String>,
    },
    /// Classical identities with sign-variant resolution.
    Verify {
        #[arg(long = "n-max", visible_alias = "n", default_value_t = 20)]
        n_max: usize,
    },
    /// Turán expressions on an x-grid.
    Turan {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n-max", visible_alias = "n", default_value_t = 30)]
        n_max: usize,
        #[arg(long)]
        x_grid: Option<String>,
        /// Also evaluate at −x and list negative values without asserting.
        #[arg(long)]
        allow_negative_x: bool,
    },
    /// v-root monotonicity, ratio bound, D criterion and lemma conditions.
    Bounds {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n-max", visible_alias = "n", default_value_t = 30)]
        n_max: usize,
        #[arg(long)]
        x_grid: Option<String>,
        /// Treat the lemma side conditions as assertions.
        #[arg(long)]
        lemma: bool,
    },
    /// Zeros of P_1..P_N: reality, simplicity, interlacing, oracle agreement.
    Zeros {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n-max", visible_alias = "n", default_value_t = 20)]
        n_max: usize,
        /// Largest degree cross-checked against the exact isolator.
        #[arg(long, default_value_t = 12)]
        oracle_max: usize,
    },
    /// Zeros of P_n^{id,h_s} along an s-grid.
    Trajectory {
        #[arg(long = "n", default_value_t = 7)]
        n: usize,
        #[arg(long, default_value = "0:1:0.01")]
        s_grid: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Favard { .. } => "favard",
            Command::Moments { .. } => "moments",
            Command::Verify { .. } => "verify",
            Command::Turan { .. } => "turan",
            Command::Bounds { .. } => "bounds",
            Command::Zeros { .. } => "zeros",
            Command::Trajectory { .. } => "trajectory",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Trajectory { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Everything that determines the output, embedded in every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub h: Vec<String>,
    pub g: Option<String>,
    pub n: Option<usize>,
    pub s_grid: Option<String>,
    pub x_grid: Option<String>,
    pub precision_bits: u32,
    pub tol: Option<f64>,
    pub output: Option<String>,
    pub format: String,
    pub allow_negative_x: bool,
}

struct Outcome {
    report: Value,
    csv: Option<String>,
    passed: bool,
    failures: Value,
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let prec = match Precision::new(cli.precision) {
        Ok(p) => p,
        Err(e) => return usage(&e),
    };
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let config = config_for(&cli, prec, format);

    let outcome = match execute(&cli.command, prec, cli.tol) {
        Ok(o) => o,
        Err(e) if is_usage_error(&e) => return usage(&e),
        Err(e) => {
            let detail = json!({ "config": config, "error": e.to_string() });
            eprintln!("{}", serde_json::to_string_pretty(&detail).expect("json"));
            return EXIT_CHECK_FAILED;
        }
    };

    let body = match format {
        Format::Json => {
            let mut doc = json!({ "config": config, "passed": outcome.passed });
            if let (Value::Object(map), Value::Object(extra)) = (&mut doc, outcome.report) {
                map.extend(extra);
            }
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Format::Csv => match outcome.csv {
            Some(csv) => csv,
            None => {
                return usage(&Error::InvalidSpec(format!("{} has no CSV output", config.subcommand)));
            }
        },
    };
    if let Err(e) = emit(&cli.output, &body) {
        eprintln!("error: {e}");
        return EXIT_CHECK_FAILED;
    }
    if outcome.passed {
        EXIT_OK
    } else {
        let detail = json!({ "config": config, "failures": outcome.failures });
        eprintln!("{}", serde_json::to_string_pretty(&detail).expect("json"));
        EXIT_CHECK_FAILED
    }
}

fn usage(e: &Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidSpec(_)
            | Error::InvalidGrid(_)
            | Error::InvalidNumber(_)
            | Error::Precision(_)
            | Error::Io(_)
            | Error::NotNormalized(_)
            | Error::UnsupportedG(_)
    )
}

fn emit(path: &Option<PathBuf>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

fn config_for(cli: &Cli, prec: Precision, format: Format) -> RunConfig {
    let (h, g, n, s_grid, x_grid, allow_negative_x) = match &cli.command {
        Command::Gen { family, g, n, .. } => (family.h.clone(), Some(g.clone()), Some(*n), family.s_grid.clone(), None, false),
        Command::Favard { family, n, .. } | Command::Moments { family, n, .. } => {
            (family.h.clone(), None, Some(*n), family.s_grid.clone(), None, false)
        }
        Command::Verify { n_max } => (vec![], None, Some(*n_max), None, None, false),
        Command::Turan { family, n_max, x_grid, allow_negative_x } => {
            (family.h.clone(), None, Some(*n_max), family.s_grid.clone(), x_grid.clone(), *allow_negative_x)
        }
        Command::Bounds { family, n_max, x_grid, .. } => {
            (family.h.clone(), None, Some(*n_max), family.s_grid.clone(), x_grid.clone(), false)
        }
        Command::Zeros { family, n_max, .. } => (family.h.clone(), None, Some(*n_max), family.s_grid.clone(), None, false),
        Command::Trajectory { n, s_grid } => (vec![], None, Some(*n), Some(s_grid.clone()), None, false),
    };
    RunConfig {
        subcommand: cli.command.name().to_string(),
        h,
        g,
        n,
        s_grid,
        x_grid,
        precision_bits: prec.bits(),
        tol: cli.tol,
        output: cli.output.as_ref().map(|p| p.display().to_string()),
        format: match format {
            Format::Csv => "csv".into(),
            Format::Json => "json".into(),
        },
        allow_negative_x,
    }
}

/// `--h` entries in order, then `power:s` for each `s` on `--s-grid`.
fn family_specs(family: &FamilyArgs) -> Result<Vec<ArithmeticFunctionSpec>> {
    let mut specs: Vec<ArithmeticFunctionSpec> =
        family.h.iter().map(|h| ArithmeticFunctionSpec::parse(h)).collect::<Result<_>>()?;
    if let Some(grid) = &family.s_grid {
        specs.extend(parse_grid(grid)?.into_iter().map(ArithmeticFunctionSpec::power));
    }
    if specs.is_empty() {
        return Err(Error::InvalidSpec("at least one --h or --s-grid is required".into()));
    }
    Ok(specs)
}

fn x_grid_of(text: &Option<String>) -> Result<Vec<Rational>> {
    match text {
        Some(t) => parse_grid(t),
        None => Ok(default_x_grid()),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn execute(command: &Command, prec: Precision, tol: Option<f64>) -> Result<Outcome> {
    match command {
        Command::Gen { family, g, n, method } => run_gen(family, g, *n, *method, prec, tol),
        Command::Favard { family, n, mu0 } => run_favard(family, *n, mu0, prec),
        Command::Moments { family, n, mu0, affine_a, affine_b } => {
            run_moments(family, *n, mu0, affine_a.as_deref(), affine_b.as_deref(), prec)
        }
        Command::Verify { n_max } => run_verify(*n_max),
        Command::Turan { family, n_max, x_grid, allow_negative_x } => {
            run_turan(family, *n_max, x_grid, *allow_negative_x, prec, tol.unwrap_or(DEFAULT_REL_TOL))
        }
        Command::Bounds { family, n_max, x_grid, lemma } => {
            run_bounds(family, *n_max, x_grid, *lemma, prec, tol.unwrap_or(DEFAULT_REL_TOL))
        }
        Command::Zeros { family, n_max, oracle_max } => {
            run_zeros(family, *n_max, *oracle_max, prec, tol.unwrap_or(DEFAULT_TOL))
        }
        Command::Trajectory { n, s_grid } => run_trajectory(*n, s_grid, prec, tol.unwrap_or(DEFAULT_TOL)),
    }
}

fn family_csv(families: &[GeneratedFamily]) -> String {
    let mut out = String::from("h,method,n,k,coefficient\n");
    for fam in families {
        let method = to_value(&fam.method);
        let method = method.as_str().unwrap_or_default();
        for (n, p) in fam.polys.iter().enumerate() {
            for (k, c) in p.coeffs().iter().enumerate() {
                out.push_str(&format!("{},{method},{n},{k},{}\n", fam.h, c.to_repr_string()));
            }
        }
    }
    out
}

fn run_gen(
    family: &FamilyArgs,
    g: &str,
    n: usize,
    method: Option<MethodArg>,
    prec: Precision,
    tol: Option<f64>,
) -> Result<Outcome> {
    let g = ArithmeticFunctionSpec::parse(g)?;
    let hs = family_specs(family)?;
    let method = method.unwrap_or(if g == ArithmeticFunctionSpec::Identity { MethodArg::Both } else { MethodArg::Convolution });
    if method != MethodArg::Convolution && g != ArithmeticFunctionSpec::Identity {
        return Err(Error::UnsupportedG(g.to_string()));
    }
    let rel_tol = tol.unwrap_or(GENERATOR_REL_TOL);
    let mut families = Vec::new();
    let mut comparisons = Vec::new();
    for h in &hs {
        let conv = matches!(method, MethodArg::Convolution | MethodArg::Both)
            .then(|| generate_convolution(&g, h, n, prec))
            .transpose()?;
        let three = matches!(method, MethodArg::ThreeTerm | MethodArg::Both)
            .then(|| generate_three_term(h, n, prec))
            .transpose()?;
        if let (Some(a), Some(b)) = (&conv, &three) {
            let exact = a.polys.iter().chain(&b.polys).all(|p| p.is_rational());
            let agree = a.polys.iter().zip(&b.polys).all(|(x, y)| x.agrees_with(y, rel_tol));
            comparisons.push(json!({
                "h": h.to_string(),
                "exact": exact,
                "max_relative_distance": a.max_relative_distance(b),
                "rel_tol": if exact { Value::Null } else { json!(rel_tol) },
                "agree": agree,
            }));
        }
        families.extend(conv);
        families.extend(three);
    }
    let failures: Vec<Value> = comparisons.iter().filter(|c| c["agree"] == false).cloned().collect();
    Ok(Outcome {
        csv: Some(family_csv(&families)),
        report: json!({ "families": to_value(&families), "comparisons": comparisons }),
        passed: failures.is_empty(),
        failures: Value::Array(failures),
    })
}

fn run_favard(family: &FamilyArgs, n: usize, mu0: &str, prec: Precision) -> Result<Outcome> {
    let mu0 = Scalar::parse(mu0, prec)?;
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut csv = String::from("h,n,c,lambda,mu,delta\n");
    let mut uncertain = Vec::new();
    for h in family_specs(family)? {
        let r = favard_report(&h, n, mu0.clone(), prec)?;
        // An uncertain Hankel verdict is reported, not asserted.
        let certified = !r.uncertain;
        if r.uncertain {
            uncertain.push(r.h.clone());
        }
        let bad_verdict = certified && (r.verdict != r.recurrence_verdict || r.verdict == Definiteness::Degenerate);
        if bad_verdict || !r.orthogonal {
            failures.push(json!({
                "h": r.h,
                "verdict": r.verdict,
                "recurrence_verdict": r.recurrence_verdict,
                "orthogonal": r.orthogonal,
                "uncertain": r.uncertain,
            }));
        }
        for k in 0..=n {
            let cell = |v: Option<&Scalar>| v.map(Scalar::to_repr_string).unwrap_or_default();
            let (c, l) = if k == 0 { (None, None) } else { (r.c.get(k - 1), r.lambda.get(k - 1)) };
            csv.push_str(&format!("{},{k},{},{},{},{}\n", r.h, cell(c), cell(l), cell(r.mu.get(k)), cell(r.delta.get(k))));
        }
        reports.push(r);
    }
    Ok(Outcome {
        report: json!({ "reports": to_value(&reports), "uncertain": uncertain }),
        csv: Some(csv),
        passed: failures.is_empty(),
        failures: Value::Array(failures),
    })
}

fn run_moments(
    family: &FamilyArgs,
    n: usize,
    mu0: &str,
    affine_a: Option<&str>,
    affine_b: Option<&str>,
    prec: Precision,
) -> Result<Outcome> {
    let mu0 = Scalar::parse(mu0, prec)?;
    let affine = match (affine_a, affine_b) {
        (Some(a), Some(b)) => Some((Scalar::parse(a, prec)?, Scalar::parse(b, prec)?)),
        _ => None,
    };
    let mut reports = Vec::new();
    let mut csv = String::from("h,n,mu\n");
    for h in family_specs(family)? {
        let rec = q_recurrence(&h, n.max(1), prec)?;
        let mut mu = moments_from_recurrence(&rec, n, mu0.clone())?;
        if let Some((a, b)) = &affine {
            mu = affine_transform_moments(&mu, a, b)?;
        }
        let hankel = hankel_determinants(&mu, n / 2, prec)?;
        for (k, m) in mu.mu.iter().enumerate() {
            csv.push_str(&format!("{h},{k},{}\n", m.to_repr_string()));
        }
        reports.push(json!({
            "h": h.to_string(),
            "mu": to_value(&mu.mu),
            "delta": to_value(&hankel.determinants),
            "verdict": hankel.verdict,
            "horizon": hankel.horizon,
        }));
    }
    Ok(Outcome { report: json!({ "reports": reports }), csv: Some(csv), passed: true, failures: json!([]) })
}

fn run_verify(n_max: usize) -> Result<Outcome> {
    let report = verify_identities(n_max)?;
    let failures: Vec<Value> = report.identities.iter().filter(|c| !c.passed).map(to_value).collect();
    let mut csv = String::from("identity,printed_variant,resolved_variant,passed\n");
    for c in &report.identities {
        let v = |s: Option<crate::classical::ArgumentSign>| to_value(&s).as_str().unwrap_or("").to_string();
        csv.push_str(&format!("{},{},{},{}\n", c.name, v(c.printed_variant), v(c.resolved_variant), c.passed));
    }
    Ok(Outcome { passed: report.all_passed, report: json!({ "report": to_value(&report) }), csv: Some(csv), failures: Value::Array(failures) })
}

fn run_turan(
    family: &FamilyArgs,
    n_max: usize,
    x_grid: &Option<String>,
    allow_negative_x: bool,
    prec: Precision,
    rel_tol: f64,
) -> Result<Outcome> {
    let grid = x_grid_of(x_grid)?;
    let mut reports = Vec::new();
    let mut csv = String::from("h,n,x,T\n");
    let mut failures = Vec::new();
    for h in family_specs(family)? {
        let fam = TuranFamily::new(&h, n_max, prec)?;
        let r = turan_sweep_on(&fam, &grid, allow_negative_x, rel_tol)?;
        for p in &r.points {
            csv.push_str(&format!("{h},{},{},{}\n", p.n, p.x, p.t.to_repr_string()));
        }
        if !r.passed {
            failures.push(json!({ "h": r.h, "zero_row_exact": r.zero_row_exact, "failures": to_value(&r.failures) }));
        }
        reports.push(json!({
            "h": r.h,
            "n_min": r.n_min,
            "n_max": r.n_max,
            "points": r.points.len(),
            "minimum_relative": r.minimum_relative,
            "zero_row_exact": r.zero_row_exact,
            "failures": to_value(&r.failures),
            "negative_x": to_value(&r.negative_x),
            "passed": r.passed,
        }));
    }
    let x_values: Vec<String> = grid.iter().map(decimal_string).collect();
    Ok(Outcome {
        report: json!({ "x_grid": x_values, "reports": reports }),
        csv: Some(csv),
        passed: failures.is_empty(),
        failures: Value::Array(failures),
    })
}

fn run_bounds(
    family: &FamilyArgs,
    n_max: usize,
    x_grid: &Option<String>,
    lemma: bool,
    prec: Precision,
    rel_tol: f64,
) -> Result<Outcome> {
    let grid = x_grid_of(x_grid)?;
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut csv = String::from("h,n,x,v2,ratio,margin\n");
    for h in family_specs(family)? {
        let fam = TuranFamily::new(&h, n_max, prec)?;
        let mono = check_v_monotone_on(&fam, &grid, rel_tol)?;
        let bound = check_ratio_bound_on(&fam, &grid, rel_tol)?;
        let d = d_criterion_vs_v(&h, n_max, prec, rel_tol)?;
        let d_vanishes_from_2 = d.rows.iter().filter(|r| r.n >= 2).all(|r| r.d.sign_with_tol(rel_tol, &Scalar::one()).is_zeroish());
        let lemma_report = h.lemma_side_conditions(n_max as u64, prec)?;
        for r in &bound.rows {
            csv.push_str(&format!(
                "{h},{},{},{},{},{}\n",
                r.n,
                r.x,
                r.v2.to_repr_string(),
                r.ratio.to_repr_string(),
                r.margin.to_repr_string()
            ));
        }
        let ok = mono.passed && bound.passed && d.consistent && (!lemma || lemma_report.all_hold);
        if !ok {
            failures.push(json!({
                "h": h.to_string(),
                "v_monotone": to_value(&mono.failures),
                "ratio_bound": to_value(&bound.failures),
                "d_consistent": d.consistent,
                "lemma_all_hold": lemma_report.all_hold,
            }));
        }
        let d_rows: Vec<Value> = d
            .rows
            .iter()
            .map(|r| json!({ "n": r.n, "d": r.d, "d_nonpositive": r.d_nonpositive, "v_decreasing": r.v_decreasing }))
            .collect();
        reports.push(json!({
            "h": h.to_string(),
            "v_monotone": to_value(&mono),
            "ratio_bound": {
                "rows": bound.rows.len(),
                "base_equality": bound.base_equality,
                "min_margin": bound.rows.iter().map(|r| r.margin.to_f64()).fold(f64::INFINITY, f64::min),
                "failures": to_value(&bound.failures),
                "passed": bound.passed,
            },
            "d_criterion": { "rows": d_rows, "consistent": d.consistent, "vanishes_from_n2": d_vanishes_from_2 },
            "lemma": { "all_hold": lemma_report.all_hold, "asserted": lemma, "rows": to_value(&lemma_report.rows) },
        }));
    }
    Ok(Outcome {
        report: json!({ "reports": reports }),
        csv: Some(csv),
        passed: failures.is_empty(),
        failures: Value::Array(failures),
    })
}

fn run_zeros(family: &FamilyArgs, n_max: usize, oracle_max: usize, prec: Precision, tol: f64) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut csv = String::from("h,n,index,zero\n");
    for h in family_specs(family)? {
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n_max);
        let mut problems = Vec::new();
        let mut max_zero = f64::NEG_INFINITY;
        let mut min_gap = f64::INFINITY;
        let mut max_oracle_diff: Option<f64> = None;
        for n in 1..=n_max {
            let z = zeros_of_p(&h, n, tol, prec)?;
            for (i, v) in z.iter().enumerate() {
                csv.push_str(&format!("{h},{n},{i},{}\n", v.to_repr_string()));
            }
            let top = z.iter().map(Scalar::to_f64).fold(f64::NEG_INFINITY, f64::max);
            max_zero = max_zero.max(top);
            if top > tol {
                problems.push(json!({ "n": n, "kind": "positive-zero", "value": top }));
            }
            for w in z.windows(2) {
                let gap = (&w[1] - &w[0]).to_f64();
                min_gap = min_gap.min(gap);
                if gap <= 10.0 * tol {
                    problems.push(json!({ "n": n, "kind": "not-simple", "gap": gap }));
                }
            }
            let inner = z[..n - 1].to_vec();
            if let Some(prev) = rows.last() {
                if !interlacing_check(prev, &inner)? {
                    problems.push(json!({ "n": n, "kind": "interlacing" }));
                }
            }
            if h.is_exact() && n >= 2 && n - 1 <= oracle_max {
                let order = n - 1;
                let rec = q_recurrence(&h, order, prec)?;
                let q = crate::favard::monic_from_recurrence(&rec, order)?.pop().expect("degree order");
                let oracle = sturm_roots(&q, tol)?;
                let eig = eigenvalues(&jacobi_from_h(&h, order, prec)?, tol, prec)?;
                let diff = if oracle.len() == eig.len() {
                    eig.iter()
                        .zip(&oracle)
                        .map(|(e, o)| (&e.value - &Scalar::Rational(o.midpoint())).abs().to_f64())
                        .fold(0.0, f64::max)
                } else {
                    f64::INFINITY
                };
                max_oracle_diff = Some(max_oracle_diff.map_or(diff, |m| m.max(diff)));
                if diff > 10.0 * tol {
                    problems.push(json!({ "n": n, "kind": "oracle-disagreement", "diff": diff }));
                }
            }
            rows.push(inner);
        }
        if !problems.is_empty() {
            failures.push(json!({ "h": h.to_string(), "problems": problems.clone() }));
        }
        reports.push(json!({
            "h": h.to_string(),
            "n_max": n_max,
            "max_zero": max_zero,
            "min_gap": if min_gap.is_finite() { json!(min_gap) } else { Value::Null },
            "oracle_max_diff": max_oracle_diff,
            "oracle_checked": h.is_exact(),
            "problems": problems,
            "passed": problems.is_empty(),
        }));
    }
    Ok(Outcome {
        report: json!({ "tol": tol, "reports": reports }),
        csv: Some(csv),
        passed: failures.is_empty(),
        failures: Value::Array(failures),
    })
}

/// Maximum endpoint error accepted against the closed-form references.
pub const ENDPOINT_MAX_ERROR: f64 = 1e-10;

fn run_trajectory(n: usize, s_grid: &str, prec: Precision, tol: f64) -> Result<Outcome> {
    let grid = parse_grid(s_grid)?;
    let traj = trajectory(n, &grid, tol, prec)?;
    let ends = check_endpoints(&traj, &grid, tol, ENDPOINT_MAX_ERROR, prec)?;
    let nonpositive = traj.zeros.iter().flatten().all(|z| z.to_f64() <= tol);
    let separated = traj.min_gap > 10.0 * tol;
    let passed = ends.passed && nonpositive && separated;
    let summary = json!({
        "n": traj.n,
        "points": traj.s.len(),
        "max_displacement": traj.max_displacement,
        "continuous": traj.continuous,
        "min_gap": traj.min_gap,
        "endpoints": to_value(&ends),
        "nonpositive": nonpositive,
        "separated": separated,
    });
    Ok(Outcome {
        csv: Some(trajectory_csv(&traj)),
        report: json!({ "summary": summary.clone(), "trajectory": to_value(&traj) }),
        passed,
        failures: if passed { json!([]) } else { summary },
    })
}
