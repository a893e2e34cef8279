//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use oscquad::oracle::{brute_force, kummer_moment, log_moment};
use oscquad::oscillator::{
    build_transformed_integrand, near_stationary_inverse, Oscillator, Piece, PolynomialPhase,
    StationaryPoint,
};
use oscquad::{fcc_rule_unit, fcc_weights, Endpoint, SingularityClass};
use oscquad_cli::experiments::{
    experiment1, experiment2, experiment3, experiment4, scattering_errors, EXPERIMENT2_BETAS,
};
use oscquad_cli::published::Published;
use oscquad_cli::report::Row;

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn main() {
    let criteria = [
        Criterion { name: "1 moment weights vs brute force", limit: secs(10), check: weights },
        Criterion { name: "2 polynomial exactness", limit: secs(5), check: polynomial_exactness },
        Criterion { name: "3 experiment 1 vs published errors and ratios", limit: secs(60), check: experiment1_table },
        Criterion { name: "4 experiment 2 mean k-decade ratios", limit: secs(120), check: experiment2_trend },
        Criterion { name: "5 experiment 3 q=12 column", limit: secs(60), check: experiment3_column },
        Criterion { name: "6 experiment 4 composite vs single rule", limit: secs(30), check: experiment4_gap },
        Criterion { name: "7 nonlinear oscillator order laws", limit: secs(20), check: order_laws },
        Criterion { name: "8 scattering self-convergence", limit: secs(600), check: scattering },
        Criterion { name: "9 oracle decay floors", limit: secs(10), check: decay_floors },
        Criterion { name: "10 determinism across runs and threads", limit: None, check: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {:.1} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS  {}  ({:.2} s)  {detail}", c.name, elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}  ({:.2} s)  {detail}", c.name, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chebyshev_t(n: usize) -> impl Fn(f64) -> Complex64 + Sync {
    move |x: f64| Complex64::new((n as f64 * x.clamp(-1.0, 1.0).acos()).cos(), 0.0)
}

fn weights() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in [0.6, 5.0, 50.0, 500.0] {
        let w = fcc_weights(k, 32).map_err(|e| e.to_string())?;
        let scale = w.omega.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (n, &omega) in w.omega.iter().enumerate() {
            let reference = brute_force(&chebyshev_t(n), -1.0, 1.0, k, 1e-13 * scale, &[])
                .map_err(|e| format!("brute force n={n} k={k}: {e}"))?;
            let rel = (omega - reference.value).norm() / scale;
            worst = worst.max(rel);
            check(rel <= 1e-10, || format!("n={n} k={k}: error {rel:.2e} x max|ω|"))?;
        }
    }
    Ok(format!("worst {worst:.1e} x max|ω|"))
}

fn polynomial_exactness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    for n in [2usize, 4, 8, 16] {
        for k in [0.7, 10.0, 1e3] {
            for _ in 0..5 {
                let degree = rng.gen_range(0..=n);
                let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let p = |x: f64| Complex64::new(coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c), 0.0);
                let value = fcc_rule_unit(&p, k, n).map_err(|e| e.to_string())?.value;
                let exact = brute_force(&p, -1.0, 1.0, k, 1e-16, &[]).map_err(|e| e.to_string())?;
                let rel = (value - exact.value).norm() / exact.value.norm();
                worst = worst.max(rel);
                check(rel <= 1e-12, || format!("N={n} k={k} degree {degree}: relative error {rel:.2e}"))?;
            }
        }
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

fn published() -> Result<Published, String> {
    Published::load().map_err(|e| e.to_string())
}

fn computed(row: &Row) -> Result<f64, String> {
    match (&row.failure, row.error_abs) {
        (None, Some(e)) => Ok(e),
        (failure, _) => Err(format!(
            "cell N={} M={} k={} not computed: {}",
            row.n,
            row.m_or_l,
            row.k,
            failure.as_deref().unwrap_or("no error value")
        )),
    }
}

/// Checks every row that has a published error against a factor-10 band.
fn within_factor_10(rows: &[&Row], published: &Published) -> Result<usize, String> {
    let mut cells = 0;
    for row in rows {
        let e = computed(row)?;
        let Some(printed) = published.lookup(row).and_then(|c| c.error_value()) else {
            continue;
        };
        cells += 1;
        check(e <= 10.0 * printed && e >= printed / 10.0, || {
            format!("β={:?} N={} M={} q={:?} k={}: {e:.2e} vs printed {printed:.1e}", row.beta, row.n, row.m_or_l, row.q, row.k)
        })?;
    }
    Ok(cells)
}

fn experiment1_table() -> Outcome {
    let published = published()?;
    let rows = experiment1();
    let refs: Vec<&Row> = rows.iter().collect();
    let cells = within_factor_10(&refs, &published)?;
    check(cells == 36, || format!("expected 36 published error cells, found {cells}"))?;
    let mut ratios = 0;
    for row in &rows {
        let (Some(ratio), Some(printed)) = (row.ratio, published.lookup(row).and_then(|c| c.ratio_value())) else {
            continue;
        };
        if computed(row)? <= 100.0 * f64::EPSILON {
            continue;
        }
        ratios += 1;
        check((ratio - printed).abs() <= 0.7, || {
            format!("β={:?} N={} M={}: ratio {ratio:.2} vs printed {printed}", row.beta, row.n, row.m_or_l)
        })?;
    }
    Ok(format!("{cells} errors, {ratios} ratios checked"))
}

fn experiment2_trend() -> Outcome {
    let rows = experiment2();
    let expected = [(0.125, 0.86), (0.25, 1.00), (0.5, 1.27), (0.75, 1.55)];
    let mut means = Vec::new();
    for (beta, target) in expected {
        let column: Vec<&Row> = rows.iter().filter(|r| r.beta == Some(beta)).collect();
        check(column.len() == 5, || format!("β={beta}: {} cells", column.len()))?;
        for row in &column {
            computed(row)?;
        }
        let ratios: Vec<f64> = column.iter().filter_map(|r| r.ratio).collect();
        check(ratios.len() == 4, || format!("β={beta}: {} ratios", ratios.len()))?;
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        check((mean - target).abs() <= 0.4, || format!("β={beta}: mean ratio {mean:.2}, expected {target}"))?;
        means.push(format!("{mean:.2}"));
    }
    // remaining columns are informational
    for beta in EXPERIMENT2_BETAS.iter().filter(|&&b| b < 0.0) {
        for row in rows.iter().filter(|r| r.beta == Some(*beta)) {
            computed(row)?;
        }
    }
    Ok(format!("means {}", means.join(", ")))
}

fn experiment3_column() -> Outcome {
    let rows = experiment3();
    let printed = [1.1e-3, 2.2e-4, 3.8e-5, 7.0e-6, 1.1e-6, 2.0e-7, 5.1e-8];
    let column: Vec<&Row> = rows.iter().filter(|r| r.q == Some(12.0)).collect();
    check(column.len() == printed.len(), || format!("{} cells in the q=12 column", column.len()))?;
    let mut shown = Vec::new();
    for (row, &p) in column.iter().zip(&printed) {
        let e = computed(row)?;
        check(e <= 10.0 * p && e >= p / 10.0, || format!("k={}: {e:.2e} vs printed {p:.1e}", row.k))?;
        shown.push(format!("{e:.1e}"));
    }
    Ok(shown.join(" "))
}

fn experiment4_gap() -> Outcome {
    let rows = experiment4();
    let find = |n: usize, m: usize| {
        rows.iter()
            .find(|r| r.k == 400.0 && r.n == n && r.m_or_l == m)
            .ok_or_else(|| format!("no cell N={n} M={m} at k=400"))
    };
    let single = computed(find(192, 1)?)?;
    let composite = computed(find(32, 6)?)?;
    check(composite <= 1e-3 * single, || format!("composite {composite:.2e} vs single {single:.2e}"))?;
    Ok(format!("composite {composite:.1e}, single {single:.1e}"))
}

/// Least-squares slope of `log10 y` against `log10 x`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.log10(), y.log10())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `g(x) = x^{n+1} + x^{n+2}/4` on `[0, 1]`, stationary of order `n` at 0.
fn synthetic(n: usize) -> Result<(Oscillator, StationaryPoint), String> {
    let mut coeffs = vec![0.0; n + 3];
    coeffs[n + 1] = 1.0;
    coeffs[n + 2] = 0.25;
    let sp = StationaryPoint::new(0.0, n, factorial(n + 1)).map_err(|e| e.to_string())?;
    let osc = Oscillator::new(PolynomialPhase::new(coeffs), vec![sp]).map_err(|e| e.to_string())?;
    Ok((osc, sp))
}

/// Root of the increasing `h` on `[lo, hi]` by plain bisection to the last bit.
fn bisect(h: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return if h(hi).abs() < h(lo).abs() { hi } else { lo };
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn order_laws() -> Outcome {
    let mut shown = Vec::new();
    let one = |_: f64| Complex64::new(1.0, 0.0);
    let taus: Vec<f64> = (0..=24).map(|i| 10f64.powf(-8.0 + 0.25 * i as f64)).collect();
    let epsilons: Vec<f64> = (0..=16).map(|i| 10f64.powf(-14.0 + 0.5 * i as f64)).collect();
    for n in 1..=3 {
        let (osc, sp) = synthetic(n)?;
        let piece = Piece { a: 0.0, b: 1.0, special: Some(Endpoint::Left) };
        let t = build_transformed_integrand(&osc, &one, &piece, SingularityClass::None, true)
            .map_err(|e| e.to_string())?;
        let samples = taus
            .iter()
            .map(|&tau| t.eval_tau(tau).map(|v| (tau, v.norm())))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let slope = loglog_slope(&samples);
        let expected = -(n as f64) / (n as f64 + 1.0);
        check((slope - expected).abs() <= 0.02, || format!("n={n}: induced slope {slope:.4}, expected {expected:.4}"))?;

        // g(x) = x^{n+1} T(x) with T(x) = 1 + x/4
        let g = |x: f64| x.powi(n as i32 + 1) * (1.0 + 0.25 * x);
        let errors: Vec<(f64, f64)> = epsilons
            .iter()
            .map(|&eps| {
                let exact = bisect(|x| g(x) - eps, 0.0, 1.0);
                let approx = near_stationary_inverse(&sp, |x| 1.0 + 0.25 * x, eps).map_err(|e| e.to_string())?;
                Ok((eps, (approx - exact).abs()))
            })
            .collect::<Result<_, String>>()?;
        let inverse_slope = loglog_slope(&errors);
        let bound = 2.0 * sp.alpha() - 0.05;
        check(inverse_slope >= bound, || format!("n={n}: inverse error slope {inverse_slope:.3} < {bound:.3}"))?;
        shown.push(format!("n={n}: {slope:.4}/{inverse_slope:.3}"));
    }
    Ok(shown.join(", "))
}

fn scattering() -> Outcome {
    let mut shown = Vec::new();
    for k in [10.0, 1e3] {
        let errors = scattering_errors(6, 0.0, k).map_err(|e| format!("k={k}: {e}"))?;
        let upto_96: Vec<f64> = errors.iter().filter(|(l, _, _)| *l <= 96).map(|&(_, e, _)| e).collect();
        check(upto_96.len() == 4, || format!("k={k}: levels {errors:?}"))?;
        for w in upto_96.windows(2) {
            let ratio = (w[0] / w[1]).log2();
            check((5.5..=8.5).contains(&ratio), || format!("k={k}: ratio {ratio:.2} from {:.2e} to {:.2e}", w[0], w[1]))?;
            shown.push(format!("{ratio:.2}"));
        }
        if k == 10.0 {
            let finest = errors
                .iter()
                .find(|(l, _, _)| *l == 192)
                .map(|&(_, e, _)| e)
                .ok_or("no L=192 level")?;
            check(finest <= 1e-13, || format!("k=10, L=192 self-error {finest:.2e}"))?;
            shown.push(format!("L=192 {finest:.1e};"));
        }
    }
    Ok(format!("ratios {}", shown.join(" ")))
}

fn decay_floors() -> Outcome {
    let ks: Vec<f64> = (0..=8).map(|i| 10f64.powf(3.0 + 0.25 * i as f64)).collect();
    let mut shown = Vec::new();
    for beta in [-0.5, -0.25, 0.0, 0.25, 0.5, 0.75] {
        let scaled = ks
            .iter()
            .map(|&k| {
                if beta == 0.0 {
                    log_moment(k).map(|v| v.value.norm() * k / k.ln())
                } else {
                    kummer_moment(beta, k).map(|v| v.value.norm() * k.powf((1.0f64 + beta).min(1.0)))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = scaled.iter().cloned().fold(0.0, f64::max);
        // a floor that holds on every decade: no decay across the range
        check(lo > 0.0 && lo >= 0.1 * hi, || format!("β={beta}: scaled values {scaled:?}"))?;
        shown.push(format!("β={beta}: {lo:.2}"));
    }
    Ok(shown.join(", "))
}

fn run_experiment(id: &str, threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_oscquad"))
        .args(["experiment", id, "--format", "csv"])
        .env("OSCQUAD_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!("experiment {id} with {threads} threads exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let ids = ["1", "2", "3", "4", "scattering"];
    for id in ids {
        let first = run_experiment(id, "1")?;
        let second = run_experiment(id, "1")?;
        let wide = run_experiment(id, "8")?;
        check(first == second, || format!("experiment {id} differs between two runs"))?;
        check(first == wide, || format!("experiment {id} differs between 1 and 8 threads"))?;
    }
    Ok(format!("experiments {} identical", ids.join(", ")))
}
