//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::time::{Duration, Instant};

use rug::Rational;
use turanpoly::arithfn::ArithmeticFunctionSpec;
use turanpoly::classical::{chebyshev_u, laguerre, verify_identities, ArgumentSign};
use turanpoly::favard::{favard_report, hankel_determinants, moments_from_recurrence, q_recurrence, Definiteness};
use turanpoly::grid::{default_s_grid, default_x_grid, parse_grid};
use turanpoly::poly::{generate_convolution, generate_three_term, DensePolynomial};
use turanpoly::turan::{check_ratio_bound, check_v_monotone, d_criterion_vs_v, turan_sweep, DEFAULT_REL_TOL};
use turanpoly::zeros::{check_endpoints, interlacing_check, sturm_roots, trajectory, zeros_of_p, DEFAULT_TOL};
use turanpoly::{Precision, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn spec(s: &str) -> ArithmeticFunctionSpec {
    ArithmeticFunctionSpec::parse(s).unwrap()
}

fn s_specs() -> Vec<ArithmeticFunctionSpec> {
    default_s_grid().into_iter().map(ArithmeticFunctionSpec::power).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < budget, || format!("runtime {spent:?} exceeds {budget:?}"))
}

/// `P_n^{id,1} = x U_{n−1}(x/2 + 1)` and `P_n^{id,id} = (x/n) L_{n−1}^{(1)}(−x)`, n ≤ 20.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let prec = Precision::default();
    let half = Scalar::from_ratio(1, 2);
    let one = Scalar::one();
    let minus_one = Scalar::from_int(-1);
    let alpha = Rational::from(1);
    let p_one = generate_convolution(&spec("id"), &spec("one"), 20, prec).map_err(|e| e.to_string())?;
    let p_id = generate_convolution(&spec("id"), &spec("id"), 20, prec).map_err(|e| e.to_string())?;
    for n in 1..=20 {
        let cheb = chebyshev_u(n - 1).compose_affine(&half, &one).mul_x();
        ensure(p_one.polys[n] == cheb, || format!("Chebyshev form differs at n={n}"))?;
        let lag = laguerre(n - 1, &alpha)
            .compose_affine(&minus_one, &Scalar::zero())
            .mul_x()
            .scale(&Scalar::from_ratio(1, n as i64));
        ensure(p_id.polys[n] == lag, || format!("Laguerre form differs at n={n}"))?;
    }
    let report = verify_identities(20).map_err(|e| e.to_string())?;
    let check = report.get("laguerre-p-id").ok_or("missing laguerre-p-id")?;
    ensure(check.passed && check.resolved_variant == Some(ArgumentSign::Minus), || {
        format!("sign resolution recorded {:?}", check.resolved_variant)
    })?;
    within_budget(start, Duration::from_secs(5))?;
    Ok(format!("n<=20 exact, variant -x, {:?}", start.elapsed()))
}

/// `U_n² − U_{n−1} U_{n+1} = 1` for n ≤ 25.
fn criterion_2() -> Outcome {
    for n in 1..=25 {
        let (a, b, c) = (chebyshev_u(n), chebyshev_u(n - 1), chebyshev_u(n + 1));
        let lhs = &(&a * &a) - &(&b * &c);
        ensure(lhs == DensePolynomial::one(), || format!("fails at n={n}"))?;
    }
    let report = verify_identities(25).map_err(|e| e.to_string())?;
    ensure(report.get("chebyshev-turan").is_some_and(|c| c.passed), || "report disagrees".into())?;
    Ok("n<=25 exact".into())
}

/// Convolution and three-term generation agree for n ≤ 40.
fn criterion_3() -> Outcome {
    let prec = Precision::new(128).unwrap();
    let mut worst = 0.0f64;
    for h in ["one", "id", "power:1/2"] {
        let h = spec(h);
        let a = generate_convolution(&spec("id"), &h, 40, prec).map_err(|e| e.to_string())?;
        let b = generate_three_term(&h, 40, prec).map_err(|e| e.to_string())?;
        for (n, (p, q)) in a.polys.iter().zip(&b.polys).enumerate() {
            if h.is_exact() {
                ensure(p == q, || format!("{h}: exact mismatch at n={n}"))?;
            } else {
                ensure(p.agrees_with(q, 1e-20), || format!("{h}: n={n} distance {}", p.relative_distance(q)))?;
                worst = worst.max(p.relative_distance(q));
            }
        }
    }
    Ok(format!("n<=40, worst float relative distance {worst:.2e}"))
}

/// Hankel determinants and orthogonality, checked against `Δ_n = μ_0 ∏ ∏ λ_k`.
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let prec = Precision::default();
    for (h, expected) in [
        ("one", Definiteness::PositiveDefinite),
        ("id", Definiteness::PositiveDefinite),
        ("altsign", Definiteness::QuasiDefinite),
    ] {
        let h = spec(h);
        let r = favard_report(&h, 10, Scalar::one(), prec).map_err(|e| e.to_string())?;
        ensure(r.verdict == expected && r.recurrence_verdict == expected && !r.uncertain, || {
            format!("{h}: verdict {:?}/{:?}", r.verdict, r.recurrence_verdict)
        })?;
        ensure(r.orthogonal, || format!("{h}: not orthogonal"))?;
        for (n, d) in r.delta.iter().enumerate() {
            match expected {
                Definiteness::PositiveDefinite => ensure(d.is_positive(), || format!("{h}: Δ_{n} <= 0"))?,
                _ => ensure(!d.is_zero(), || format!("{h}: Δ_{n} = 0"))?,
            }
        }
        let rec = q_recurrence(&h, 20, prec).map_err(|e| e.to_string())?;
        let mut norm = Scalar::one();
        let mut product = Scalar::one();
        for n in 0..=10 {
            if n >= 1 {
                norm = &norm * rec.lambda_n(n + 1);
            }
            product = &product * &norm;
            ensure(r.delta[n] == product, || format!("{h}: Δ_{n} differs from norm product"))?;
        }
        let mu = moments_from_recurrence(&rec, 20, Scalar::one()).map_err(|e| e.to_string())?;
        let again = hankel_determinants(&mu, 10, prec).map_err(|e| e.to_string())?;
        ensure(again.determinants == r.delta, || format!("{h}: Hankel recomputation differs"))?;
    }
    within_budget(start, Duration::from_secs(30))?;
    Ok(format!("one, id positive-definite; altsign quasi-definite; {:?}", start.elapsed()))
}

/// `T_n^{h_s}(x) ≥ −1e−9·scale` on the default grid, `T_n(0) = 0` exactly.
fn criterion_5() -> Outcome {
    let prec = Precision::default();
    let grid = default_x_grid();
    let mut points = 0;
    let mut worst = f64::INFINITY;
    for h in s_specs() {
        let r = turan_sweep(&h, 30, &grid, false, prec, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
        ensure(r.n_min == 2 && r.n_max == 30, || format!("{h}: n range {}..{}", r.n_min, r.n_max))?;
        ensure(r.passed && r.failures.is_empty(), || format!("{h}: {} violations", r.failures.len()))?;
        ensure(r.zero_row_exact, || format!("{h}: T_n(0) not exactly zero"))?;
        points += r.points.len();
        worst = worst.min(r.minimum_relative.unwrap_or(f64::INFINITY));
    }
    Ok(format!("{points} points, min relative T {worst:.3e}"))
}

/// v-monotonicity on the grid, D-sign vs direct comparison, D = 0 for s ∈ {0, 1}.
fn criterion_6() -> Outcome {
    let prec = Precision::default();
    let grid = default_x_grid();
    let mut points = 0;
    for h in s_specs() {
        let m = check_v_monotone(&h, 30, &grid, prec, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
        ensure(m.passed, || format!("{h}: {} monotonicity violations", m.failures.len()))?;
        points += m.points;
        let d = d_criterion_vs_v(&h, 30, prec, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
        ensure(d.consistent, || format!("{h}: D sign disagrees with v comparison"))?;
    }
    for s in [0, 1] {
        let h = ArithmeticFunctionSpec::power(Rational::from(s));
        for n in 2..=30u64 {
            let d = h.d_criterion(n, prec).map_err(|e| e.to_string())?;
            ensure(d.sign_with_tol(DEFAULT_REL_TOL, &Scalar::one()).is_zeroish(), || {
                format!("s={s}: D({n}) = {}", d.to_f64())
            })?;
        }
    }
    Ok(format!("{points} monotone comparisons, D consistent, D=0 for s in {{0,1}}"))
}

/// `v_{n,2}(x) ≤ P_n(x)/P_{n−1}(x)` for x > 0, with equality at the base step.
fn criterion_7() -> Outcome {
    let prec = Precision::default();
    let grid = default_x_grid();
    let mut rows = 0;
    for h in s_specs() {
        let b = check_ratio_bound(&h, 30, &grid, prec, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
        ensure(b.passed, || format!("{h}: {} bound violations", b.failures.len()))?;
        ensure(b.base_equality, || format!("{h}: base equality fails"))?;
        ensure(b.rows.iter().all(|r| r.x != "0"), || format!("{h}: x=0 included"))?;
        rows += b.rows.len();
    }
    Ok(format!("{rows} rows, base equality holds"))
}

/// Real, simple, non-positive, interlacing zeros; eigenvalues match an exact Sturm isolator.
fn criterion_8() -> Outcome {
    let prec = Precision::default();
    let mut worst_oracle = 0.0f64;
    let mut min_gap = f64::INFINITY;
    for h in ["one", "id", "power:1/2"] {
        let h = spec(h);
        let family = generate_convolution(&spec("id"), &h, 12, prec).map_err(|e| e.to_string())?;
        let mut prev: Option<Vec<Scalar>> = None;
        for n in 1..=20 {
            let z = zeros_of_p(&h, n, DEFAULT_TOL, prec).map_err(|e| format!("{h} n={n}: {e}"))?;
            ensure(z.len() == n, || format!("{h} n={n}: {} zeros", z.len()))?;
            ensure(z.iter().all(|v| v.to_f64() <= 1e-10), || format!("{h} n={n}: positive zero"))?;
            for w in z.windows(2) {
                let gap = (&w[1] - &w[0]).to_f64();
                min_gap = min_gap.min(gap);
                ensure(gap > 1e-11, || format!("{h} n={n}: gap {gap:e}"))?;
            }
            // Every P_n vanishes at 0; interlacing concerns the remaining zeros.
            let nonzero = z[..n - 1].to_vec();
            if let Some(p) = &prev {
                ensure(interlacing_check(p, &nonzero).map_err(|e| e.to_string())?, || {
                    format!("{h}: interlacing fails between {} and {n}", n - 1)
                })?;
            }
            if h.is_exact() && n <= 12 {
                let oracle = sturm_roots(&family.polys[n], 1e-13).map_err(|e| e.to_string())?;
                ensure(oracle.len() == n, || format!("{h} n={n}: oracle found {}", oracle.len()))?;
                for (e, o) in z.iter().zip(&oracle) {
                    let diff = (e - &Scalar::Rational(o.midpoint())).abs().to_f64();
                    worst_oracle = worst_oracle.max(diff);
                    ensure(diff <= 1e-11, || format!("{h} n={n}: oracle diff {diff:e}"))?;
                }
            }
            prev = Some(nonzero);
        }
    }
    Ok(format!("min gap {min_gap:.3e}, worst oracle diff {worst_oracle:.2e}"))
}

/// Zero trajectory for n = 7 over s = 0:1:0.01.
fn criterion_9() -> Outcome {
    let start = Instant::now();
    let prec = Precision::default();
    let grid = parse_grid("0:1:0.01").map_err(|e| e.to_string())?;
    let traj = trajectory(7, &grid, DEFAULT_TOL, prec).map_err(|e| e.to_string())?;
    let ends = check_endpoints(&traj, &grid, DEFAULT_TOL, 1e-10, prec).map_err(|e| e.to_string())?;
    ensure(ends.passed, || format!("endpoint errors {:?} / {:?}", ends.chebyshev_error, ends.laguerre_error))?;

    let mut cheb: Vec<f64> = (0..7).map(|k| 2.0 * (k as f64 * std::f64::consts::PI / 7.0).cos() - 2.0).collect();
    cheb.sort_by(f64::total_cmp);
    for (z, c) in traj.zeros[0].iter().zip(&cheb) {
        ensure((z.to_f64() - c).abs() <= 1e-10, || format!("s=0 zero {} vs {c}", z.to_f64()))?;
    }
    let p7 = generate_convolution(&spec("id"), &spec("id"), 7, prec).map_err(|e| e.to_string())?;
    let oracle = sturm_roots(&p7.polys[7], 1e-13).map_err(|e| e.to_string())?;
    let last = traj.zeros.last().ok_or("empty trajectory")?;
    for (z, o) in last.iter().zip(&oracle) {
        let diff = (z - &Scalar::Rational(o.midpoint())).abs().to_f64();
        ensure(diff <= 1e-10, || format!("s=1 oracle diff {diff:e}"))?;
    }
    for (i, row) in traj.zeros.iter().enumerate() {
        ensure(row.len() == 7 && row.windows(2).all(|w| w[0] < w[1]), || format!("row {i} not strictly ordered"))?;
    }
    ensure(traj.min_gap > 10.0 * DEFAULT_TOL, || format!("collision, min gap {:e}", traj.min_gap))?;
    within_budget(start, Duration::from_secs(10))?;
    Ok(format!(
        "{} rows, min gap {:.4}, max step {:.4} (continuity flag {}), {:?}",
        traj.zeros.len(),
        traj.min_gap,
        traj.max_displacement,
        traj.continuous,
        start.elapsed()
    ))
}

/// Side conditions of the reduction lemma for n ≤ 50.
fn criterion_10() -> Outcome {
    let prec = Precision::default();
    for h in ["id", "one"] {
        let r = spec(h).lemma_side_conditions(50, prec).map_err(|e| e.to_string())?;
        ensure(r.rows.len() == 50, || format!("{h}: {} rows", r.rows.len()))?;
        ensure(r.all_hold, || {
            let bad = r.rows.iter().find(|row| !(row.monotone && row.delta_decreasing && row.cubic));
            format!("{h}: fails at n={:?}", bad.map(|row| row.n))
        })?;
    }
    Ok("id, one: n<=50".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("identity suite", criterion_1),
        ("Chebyshev special identity", criterion_2),
        ("generator equivalence", criterion_3),
        ("Favard/Hankel", criterion_4),
        ("Turán sweep", criterion_5),
        ("v-monotonicity and D-criterion", criterion_6),
        ("induction bound", criterion_7),
        ("zeros", criterion_8),
        ("zero trajectory", criterion_9),
        ("lemma side conditions", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
