//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p outlier-lab --test acceptance`. Criterion numbers
//! given as arguments restrict the run, e.g. `-- 4 5`.

use outlier_lab::critical::{
    alpha0_bracket, critical_2d_density, critical_imag_density, expected_count_above,
    q6_asymptotic_roots, q6_real_roots,
};
use outlier_lab::cue::{sample_spectrum, xmin_cdf_series, CueParams};
use outlier_lab::finite::{rho_imag_exact, FiniteDensityParams, ImagDensity, ImagForm};
use outlier_lab::harness::{compare, run_trials, BinSpec, Ensemble, Observable, Summary, TrialConfig};
use outlier_lab::ld::{ld_density, outlier_pdf, prefactor_psi, rate_phi, stationary_points, LDParams};
use outlier_lab::limit::{expected_count, limit_imag_density, solve_extreme_scale, CountForm};
use outlier_lab::model::ModelCurve;
use outlier_lab::quad::{integrate_real_line, integrate_to_inf, QuadOptions};
use outlier_lab::rng::stream_rng;
use outlier_lab::specfun::{laguerre_asymptotic, laguerre_neg};
use rand::Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// `Ñ_0(0.3)`, from an independent high-precision quadrature.
const COUNT_ALPHA0_M03: f64 = 2.158_976_206_5;

struct Check {
    ok: bool,
    lines: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self { ok: true, lines: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: String) {
        self.ok &= ok;
        self.lines.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn(&mut Check),
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1_sum_rule(c: &mut Check) {
    for &n in &[5usize, 50, 500] {
        for &gamma in &[0.5, 1.0, 2.0] {
            let cfg = TrialConfig::new(Ensemble::GueDeformed { gamma }, n, 1000, 1).with_observables(&[]);
            let s = run_trials(&cfg).expect("run");
            let tol = 1e-8 * (1.0 + gamma) * n as f64;
            let worst = s.max_invariant_residual();
            c.expect(
                worst <= tol && s.trials_done == 1000,
                format!("n={n} γ={gamma}: max |ΣY−γ| = {worst:.2e} (tol {tol:.1e}), {} trials", s.trials_done),
            );
        }
    }
}

fn c2_imag_histogram(c: &mut Check) {
    let (n, gamma) = (50, 2.0);
    let bins = BinSpec::new(0.0, 2.0, 80).unwrap();
    let mut cfg = TrialConfig::new(Ensemble::GueDeformed { gamma }, n, 100_000, 7)
        .with_observables(&[Observable::ImagHist, Observable::Ymax]);
    cfg.bins = bins;
    let s = run_trials(&cfg).expect("run");

    let d = ImagDensity::new(FiniteDensityParams::new(n, gamma).unwrap(), ImagForm::F3).unwrap();
    let params = BTreeMap::from([("n".to_string(), n as f64), ("gamma".to_string(), gamma)]);
    let exact = ModelCurve::bin_averaged("finite-imag", params.clone(), bins.edges(), 1.0, |y| d.eval(y)).unwrap();
    let r = compare(&s, Observable::ImagHist, &exact).unwrap();
    c.expect(r.l1 <= 0.05, format!("(a) per-eigenvalue histogram vs exact density: L1 = {:.4} (≤ 0.05)", r.l1));

    let y2 = stationary_points(gamma).y_double_star.unwrap();
    let edges: Vec<f64> = bins.edges().into_iter().filter(|&e| e >= y2).collect();
    let lp = LDParams::new(gamma, n).unwrap();
    let pdf = ModelCurve::bin_averaged("outlier-pdf", params, edges.clone(), 1.0, |y| Ok(outlier_pdf(lp, y)?.value)).unwrap();
    let r = compare(&s, Observable::Ymax, &pdf).unwrap();
    c.expect(
        r.sup_cdf <= 0.05,
        format!("(b) Y_max vs outlier pdf on [{:.3}, 2): sup-CDF = {:.4} (≤ 0.05)", edges[0], r.sup_cdf),
    );
}

fn c3_outlier(c: &mut Check) {
    let (n, gamma) = (200, 2.0);
    let cfg = TrialConfig::new(Ensemble::GueDeformed { gamma }, n, 2000, 3).with_observables(&[Observable::Ymax]);
    let s = run_trials(&cfg).expect("run");
    let sm = Summary::of(&s.ymax_samples());
    let dev = (sm.mean - 1.5).abs();
    c.expect(
        dev <= 3.0 * sm.std_err + 0.005,
        format!("mean Y_max = {:.5} ± {:.5}, |mean − 1.5| = {dev:.5} (≤ 3 se + 0.005)", sm.mean, sm.std_err),
    );
    let scaled = (n as f64).sqrt() * sm.std_dev;
    let want = (5.0f64 / 12.0).sqrt();
    c.expect(
        rel(scaled, want) <= 0.10,
        format!("√N std(Y_max) = {scaled:.4} vs √(5/12) = {want:.4} (rel {:.3}, ≤ 0.10)", rel(scaled, want)),
    );
}

fn c4_large_deviation(c: &mut Check) {
    let p = LDParams::new(2.0, 300).unwrap();
    let sp = stationary_points(2.0);
    let (ys, y2) = (sp.y_star.unwrap(), sp.y_double_star.unwrap());
    for y in [0.0, ys] {
        let v = rate_phi(p, y).unwrap();
        c.expect(v.abs() <= 1e-12, format!("Φ_2({y}) = {v:.2e}"));
    }
    let psi = prefactor_psi(p, y2).unwrap();
    c.expect(psi.abs() <= 1e-12, format!("Ψ_2(Y_** = {y2:.6}) = {psi:.2e}"));
    let fp = FiniteDensityParams::new(300, 2.0).unwrap();
    for y in [0.8, 1.0, 1.2] {
        let a = ld_density(p, y).unwrap();
        let b = rho_imag_exact(fp, y, ImagForm::F3).unwrap();
        c.expect(rel(a, b) <= 0.05, format!("N=300 Y={y}: LD {a:.6e} vs exact {b:.6e} (rel {:.4}, ≤ 0.05)", rel(a, b)));
    }
}

fn c5_critical_density(c: &mut Check) {
    let n = 2000usize;
    let s = (n as f64).powf(-1.0 / 3.0);
    for alpha in [0.0, 0.5] {
        let fp = FiniteDensityParams::new(n, 1.0 + alpha * s).unwrap();
        for m in [0.5, 1.0, 2.0] {
            let exact = (n as f64).powf(2.0 / 3.0) * rho_imag_exact(fp, m * s, ImagForm::F3).unwrap();
            let v = critical_imag_density(alpha, m).unwrap();
            c.expect(
                rel(v, exact) <= 0.10,
                format!("α={alpha} m={m}: limit {v:.6} vs N=2000 {exact:.6} (rel {:.4}, ≤ 0.10)", rel(v, exact)),
            );
        }
    }
    let (lo, hi) = alpha0_bracket(5e-4).unwrap();
    c.expect(lo > 0.6485 && hi < 0.649, format!("α₀ bracket ({lo:.6}, {hi:.6}) inside (0.6485, 0.649)"));
    let roots = q6_real_roots(10.0).unwrap();
    let (m1, m2) = q6_asymptotic_roots(10.0);
    let (big, small) = (*roots.last().unwrap(), roots[0]);
    c.expect(
        rel(big, 20.0075) <= 1e-2 && rel(small, 6.67917) <= 1e-2,
        format!("α=10 roots {small:.5}, {big:.5} vs m₂ = {m2:.5}, m₁ = {m1:.5}"),
    );
}

fn c6_marginal(c: &mut Check) {
    let mut rng = stream_rng(6, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let alpha = rng.random_range(-3.0..5.0);
        let m = rng.random_range(0.1..6.0);
        let r = integrate_real_line(|q| critical_2d_density(alpha, q, m).unwrap(), 0.0, QuadOptions::tol(1e-14, 1e-13));
        let d = (r.value - critical_imag_density(alpha, m).unwrap()).abs();
        worst = worst.max(d);
    }
    c.expect(worst <= 1e-8, format!("max |∫p̃(q,m)dq − p̃(m)| over 20 points = {worst:.2e}"));
}

fn c7_critical_counts(c: &mut Check) {
    let n = 500;
    let mut cfg = TrialConfig::new(Ensemble::GueDeformed { gamma: 1.0 }, n, 500, 17)
        .with_observables(&[Observable::ExceedCounts]);
    cfg.thresholds = vec![0.3];
    let s = run_trials(&cfg).expect("run");
    let sm = s.exceed_summary(0);
    let quad = expected_count_above(0.0, 0.3).unwrap();
    c.expect(
        (quad - COUNT_ALPHA0_M03).abs() <= 1e-8,
        format!("Ñ_0(0.3) by quadrature = {quad:.10} (reference {COUNT_ALPHA0_M03})"),
    );
    let tol = (0.15 * COUNT_ALPHA0_M03).max(3.0 * sm.std_err);
    c.expect(
        (sm.mean - COUNT_ALPHA0_M03).abs() <= tol,
        format!("n=500: mean count {:.4} ± {:.4} vs {COUNT_ALPHA0_M03:.4} (tol {tol:.4})", sm.mean, sm.std_err),
    );
}

fn c8_laguerre(c: &mut Check) {
    let err = |n: usize, k: usize, y: f64| {
        let a = laguerre_asymptotic(n, k, 1, y).unwrap();
        let x = laguerre_neg(n - k, 1, -(n as f64) * y * y).unwrap();
        ((a.log_magnitude - x.log_magnitude).exp() - 1.0).abs()
    };
    for k in [1, 2] {
        for y in [0.1, 0.5, 1.0] {
            let e = err(500, k, y);
            c.expect(e <= 1e-2, format!("N=500 k={k} Y={y}: rel err {e:.2e}"));
            let (e200, e2000) = (err(200, k, y), err(2000, k, y));
            c.expect(e2000 < e200, format!("k={k} Y={y}: N=2000 {e2000:.2e} < N=200 {e200:.2e}"));
        }
    }
}

fn c9_extreme_scale(c: &mut Check) {
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    for k in 3..=9 {
        let n = 10usize.pow(k);
        let ye = solve_extreme_scale(n, 1.0).unwrap();
        let cnt = expected_count(n, ye, 1.0, CountForm::Bessel).unwrap();
        c.expect((cnt - 1.0).abs() <= 1e-9, format!("N=1e{k}: count at Y_e = {cnt:.12}"));
        lx.push((n as f64).ln());
        ly.push(ye.ln());
        let y2 = solve_extreme_scale(n, 2.0).unwrap();
        let r = n as f64 * y2 / (n as f64).ln();
        c.expect((0.1..=10.0).contains(&r), format!("γ=2 N=1e{k}: N Y_e / ln N = {r:.4}"));
    }
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    c.expect((slope + 1.0 / 3.0).abs() <= 0.05, format!("γ=1 slope of ln Y_e vs ln N = {slope:.4}"));
}

fn c10_cue(c: &mut Check) {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let s = sample_spectrum(CueParams::new(30, 0.5).unwrap(), seed).unwrap();
        worst = worst.max((s.moduli().product::<f64>() - 0.5f64.sqrt()).abs());
    }
    c.expect(worst <= 1e-8, format!("n=30 T=0.5: max |Π|z_j| − √(1−T)| over 20 samples = {worst:.2e}"));

    let (n, t) = (100, 1.0);
    let p = CueParams::critical(n, t).unwrap();
    let cfg = TrialConfig::new(Ensemble::CueSubunitary { t_coupling: p.t_coupling }, n, 10_000, 10)
        .with_observables(&[Observable::MinModulus]);
    let s = run_trials(&cfg).expect("run");
    let mut xs = s.min_modulus_samples();
    xs.sort_by(f64::total_cmp);
    let total = xs.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = xmin_cdf_series(x, t).unwrap();
        sup = sup.max((i as f64 / total - f).abs()).max(((i + 1) as f64 / total - f).abs());
    }
    c.expect(sup <= 0.03, format!("n=100 t=1: sup |F̂ − F| = {sup:.4} over {} samples (≤ 0.03)", xs.len()));

    let tt: f64 = 1e-4;
    let v = xmin_cdf_series(2.0 * tt.sqrt(), tt).unwrap();
    let want = (-0.25f64).exp();
    c.expect((v - want).abs() <= 0.01, format!("t=1e-4 y=2: {v:.5} vs e^(-1/4) = {want:.5}"));
}

fn c11_moment(c: &mut Check) {
    for g in [0.5, 2.0] {
        let r = integrate_to_inf(|y| y * limit_imag_density(y, g).unwrap(), 0.0, QuadOptions::tol(1e-12, 1e-12));
        let want = g.min(1.0 / g);
        c.expect((r.value - want).abs() <= 1e-6, format!("γ={g}: ∫ y ρ̃ dy = {:.10} vs {want}", r.value));
    }
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "sum rule", budget: Duration::from_secs(60), run: c1_sum_rule },
        Criterion { id: 2, title: "imaginary-part and Y_max histograms at n=50, γ=2", budget: Duration::from_secs(300), run: c2_imag_histogram },
        Criterion { id: 3, title: "outlier location and fluctuations", budget: Duration::from_secs(600), run: c3_outlier },
        Criterion { id: 4, title: "large-deviation form", budget: Duration::from_secs(10), run: c4_large_deviation },
        Criterion { id: 5, title: "critical density, α₀ and Q₆ roots", budget: Duration::from_secs(10), run: c5_critical_density },
        Criterion { id: 6, title: "joint critical density marginal", budget: Duration::from_secs(10), run: c6_marginal },
        Criterion { id: 7, title: "critical Monte Carlo counts", budget: Duration::from_secs(1800), run: c7_critical_counts },
        Criterion { id: 8, title: "Laguerre asymptotics", budget: Duration::from_secs(10), run: c8_laguerre },
        Criterion { id: 9, title: "scale of typical extremes", budget: Duration::from_secs(10), run: c9_extreme_scale },
        Criterion { id: 10, title: "subunitary ensemble", budget: Duration::from_secs(300), run: c10_cue },
        Criterion { id: 11, title: "first moment of the limiting density", budget: Duration::from_secs(10), run: c11_moment },
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for cr in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let mut check = Check::new();
        let outcome = catch_unwind(AssertUnwindSafe(|| (cr.run)(&mut check)));
        let elapsed = start.elapsed();
        if let Err(e) = outcome {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            check.expect(false, format!("panicked: {msg}"));
        }
        let in_time = elapsed <= cr.budget;
        check.expect(
            in_time,
            format!("runtime {:.1} s (budget {} s)", elapsed.as_secs_f64(), cr.budget.as_secs()),
        );
        let status = if check.ok { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2}: {}", cr.id, cr.title);
        for l in &check.lines {
            println!("       {l}");
        }
        if !check.ok {
            failed.push(cr.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
