//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use specmult::bases::{build_system, mehler_derivative, mehler_heat_discrepancy, mehler_kernel, Basis, HermiteBasis, JacobiBasis};
use specmult::experiments::growth::{fit_curve, growth_curve};
use specmult::experiments::{self, marcinkiewicz, ExperimentConfig};
use specmult::mellin::{marcinkiewicz_norm, ConditionOrder};
use specmult::norms::{lp_operator_norm_with, NormMode, PowerOptions};
use specmult::quadrature::composite_legendre;
use specmult::riesz::{
    cyclic_system, discrete_riesz_operator, normalized_discrete_riesz_matrix, riesz_factor, riesz_factor_lattice,
    CyclicGroupSpec, LatticeMultiplier, NORMALIZATION,
};
use specmult::squarefn::{g_function, isometry_constant, TimeGrid};
use specmult::symbol::Symbol;
use std::path::Path;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn fail(msg: impl Into<String>) -> Check {
    Err(msg.into())
}

fn run_experiment(name: &str, out: &Path, seed: u64) -> Result<experiments::Outcome, String> {
    let mut cfg = ExperimentConfig::new(name, out);
    cfg.seed = seed;
    experiments::run(&cfg).map_err(|e| e.to_string())
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or(f64::NAN)
}

fn mellin_selftest() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let outcome = run_experiment("mellin-selftest", dir.path(), 0)?;
    let report = read_json(&outcome.files[0])?;
    let cases = report["cases"].as_array().map(Vec::len).unwrap_or(0);
    let dims: Vec<u64> = report["cases"].as_array().into_iter().flatten().filter_map(|c| c["d"].as_u64()).collect();
    let (pl, rt) = (num(&report, "plancherel_rel_err"), num(&report, "round_trip_rel_err"));
    let detail = format!("{cases} symbols, plancherel {pl:.1e}, round trip {rt:.1e}");
    let per_dim = [1, 2].iter().all(|d| dims.iter().filter(|x| **x == *d).count() == 20);
    if per_dim && pl <= 1e-6 && rt <= 1e-6 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn random_f(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

/// `∏_r ∫_0^∞ t^{2N_r−1} e^{−2t} dt` by composite Gauss-Legendre on `[0, 60]`.
fn isometry_oracle(n: &[u32]) -> f64 {
    let rule = composite_legendre(0.0, 60.0, 240, 12).expect("valid rule");
    n.iter().map(|k| rule.integrate(|t| t.powi(2 * *k as i32 - 1) * (-2.0 * t).exp())).product()
}

fn g_isometry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut formula_gap = 0.0f64;
    for d in [1usize, 2] {
        let bases = vec![Basis::Jacobi(JacobiBasis::new(0.0, 0.5, 12).map_err(|e| e.to_string())?); d];
        let sys = build_system(&bases).map_err(|e| e.to_string())?;
        let tg = TimeGrid::for_system(&sys, 256).map_err(|e| e.to_string())?;
        let grid = sys.grid().clone();
        let ns: Vec<Vec<u32>> = if d == 1 {
            vec![vec![1], vec![2]]
        } else {
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        };
        let fs: Vec<Vec<Complex64>> =
            (0..10).map(|_| sys.project(&random_f(grid.len(), &mut rng))).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for n in &ns {
            let oracle = isometry_oracle(n);
            formula_gap = formula_gap.max((isometry_constant(n) / oracle - 1.0).abs());
            for f in &fs {
                let g = g_function(&sys, n, f, &tg).map_err(|e| e.to_string())?;
                let ratio = grid.lp_norm_real(&g, 2.0).powi(2) / grid.lp_norm(f, 2.0).powi(2);
                worst = worst.max((ratio / oracle - 1.0).abs());
            }
        }
    }
    let detail = format!("max relative deviation {worst:.1e}, closed form vs quadrature {formula_gap:.1e}");
    if worst <= 1e-6 && formula_gap <= 1e-10 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn conformance() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let outcome = run_experiment("hankel-dunkl-conformance", dir.path(), 0)?;
    let report = read_json(&outcome.files[0])?;
    let checks = report["checks"].as_array().cloned().unwrap_or_default();
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c["pass"] != Value::Bool(true))
        .map(|c| format!("{}@{}", c["name"], c["alpha"]))
        .collect();
    let names = ["hankel_gaussian", "hankel_involution", "hankel_convolution", "dunkl_gaussian", "dunkl_round_trip", "dunkl_convolution"];
    let complete = [0.0, 0.5, 1.0, 2.5].iter().all(|a| {
        names.iter().all(|n| checks.iter().any(|c| c["name"] == *n && c["alpha"].as_f64() == Some(*a)))
    }) && checks.iter().any(|c| c["name"] == "dunkl_fourier");
    let worst = checks.iter().map(|c| num(c, "value") / num(c, "tolerance")).fold(0.0, f64::max);
    let detail = format!("{} checks, worst value/tolerance {worst:.1e}", checks.len());
    if failed.is_empty() && complete {
        Ok(detail)
    } else {
        fail(format!("{detail}; failed {failed:?}, complete {complete}"))
    }
}

fn max_entry_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn riesz_exactness() -> Check {
    let (mut norm_gap, mut factor_gap, mut relation_gap) = (0.0f64, 0.0f64, 0.0f64);
    for k in [4usize, 8, 16] {
        for d in 1..=3usize {
            let spec = CyclicGroupSpec::simple_walk(k, d).map_err(|e| e.to_string())?;
            for r in 0..d {
                let op = discrete_riesz_operator(&spec, r).map_err(|e| e.to_string())?;
                norm_gap = norm_gap.max((op.l2_norm() - NORMALIZATION).abs());
                // R_r = [∂_r L_r^{-1/2}] · [L_r^{1/2} (ΣL)^{-1/2}]
                let diff = LatticeMultiplier::from_symbol(spec.lattice(), |n| {
                    let theta = 2.0 * std::f64::consts::PI * n[r] as f64 / k as f64;
                    let lr = 1.0 - theta.cos();
                    if lr <= 1e-14 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        (Complex64::from_polar(1.0, theta) - 1.0) / lr.sqrt()
                    }
                });
                let factor = riesz_factor_lattice(&spec, r, 0.5).map_err(|e| e.to_string())?;
                let composed = diff.compose(&factor).map_err(|e| e.to_string())?;
                factor_gap = factor_gap.max(max_entry_gap(&composed.kernel(), &op.kernel()));
                if k.pow(d as u32) <= 512 {
                    let lit = normalized_discrete_riesz_matrix(k, d, r).map_err(|e| e.to_string())?;
                    let m = op.matrix().map_err(|e| e.to_string())?;
                    let gap = m.iter().zip(lit.iter()).map(|(a, b)| (a - NORMALIZATION * b).norm()).fold(0.0, f64::max);
                    relation_gap = relation_gap.max(gap);
                }
            }
        }
    }
    let detail = format!("|‖R_r‖₂ − √2| ≤ {norm_gap:.1e}, factorization {factor_gap:.1e}, √2 relation {relation_gap:.1e}");
    if norm_gap <= 1e-10 && factor_gap <= 1e-12 && relation_gap <= 1e-12 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn spread(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(0.0, f64::max);
    (hi - lo) / lo
}

fn dimension_free() -> Check {
    let opts = PowerOptions::default();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for p in [1.5, 3.0] {
        let mut discrete = Vec::new();
        let mut factor = Vec::new();
        for d in 1..=3usize {
            let spec = CyclicGroupSpec::simple_walk(8, d).map_err(|e| e.to_string())?;
            discrete.push(discrete_riesz_operator(&spec, 0).map_err(|e| e.to_string())?.lower_bound(p, &opts));
            let sys = cyclic_system(&spec).map_err(|e| e.to_string())?;
            let op = riesz_factor(&sys, 0, 0.5).map_err(|e| e.to_string())?;
            factor.push(lp_operator_norm_with(&op, p, NormMode::Lower, &opts).map_err(|e| e.to_string())?);
        }
        let (a, b) = (spread(&discrete), spread(&factor));
        worst = worst.max(a).max(b);
        parts.push(format!("p={p}: discrete {a:.3}, factor {b:.3}"));
    }
    let detail = format!("variation across d = 1..3: {}", parts.join("; "));
    if worst <= 0.2 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn growth_contrast() -> Check {
    let cfg = ExperimentConfig::new("imaginary-growth", std::env::temp_dir());
    let vs: Vec<f64> = (0..=20).map(f64::from).collect();
    let ou = fit_curve(&growth_curve("ou", 64, 4.0, &vs, &cfg).map_err(|e| e.to_string())?).ok_or("no OU fit")?;
    let zk = fit_curve(&growth_curve("zk", 64, 4.0, &vs, &cfg).map_err(|e| e.to_string())?).ok_or("no Z_K fit")?;
    let lin = ou.linear.ok_or("degenerate OU fit")?;
    let log = zk.logarithmic.ok_or("degenerate Z_K fit")?;
    let proxy = zk.secant_slope.ok_or("no proxy")?;
    let ratio = lin.slope / proxy;
    let detail = format!(
        "OU slope {:.3} (R² {:.3}); Z_64 log fit {:.3}·ln(1+v) (R² {:.3}, max residual {:.3}); proxy {:.4}, ratio {:.1}",
        lin.slope, lin.r_squared, log.slope, log.r_squared, log.max_residual, proxy, ratio
    );
    if lin.r_squared >= 0.9 && lin.slope > 0.0 && log.max_residual <= 0.1 && ratio >= 3.0 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn marcinkiewicz_norms() -> Check {
    let rho = ConditionOrder::new(vec![1]).map_err(|e| e.to_string())?;
    let sweep = marcinkiewicz::sweep_options();
    let ln2 = std::f64::consts::LN_2.sqrt();
    let mut worst = 0.0f64;
    for u in [1.0, 5.0, 10.0] {
        let r = marcinkiewicz_norm(&Symbol::imaginary_power(vec![u]), &rho, &sweep).map_err(|e| e.to_string())?;
        let g0 = r.get(&[0]).ok_or("missing γ = 0")?.norm;
        let g1 = r.get(&[1]).ok_or("missing γ = 1")?.norm;
        worst = worst.max((g0 - ln2).abs()).max((g1 - u * ln2).abs());
    }
    let sin = Symbol::new(1, "sin", |l| Complex64::new(l[0].sin(), 0.0));
    let divergent = marcinkiewicz_norm(&sin, &rho, &sweep).map_err(|e| e.to_string())?.divergent();
    let detail = format!("max deviation {worst:.1e}, sin divergent {divergent}");
    if worst <= 1e-8 && divergent {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn cz_suite() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let outcome = run_experiment("cz-suite", dir.path(), 0)?;
    let report = read_json(&outcome.files[1])?;
    let passed = &report["passed"];
    let trials = report["trials"].as_u64().unwrap_or(0);
    let detail = format!(
        "{} of {trials} trials pass every property, level set {}, C_μ = {}, generations {}",
        passed["all"], passed["level_set"], report["c_mu"], report["generations"]
    );
    let c_mu = num(&report, "c_mu");
    if trials == 100 && passed["all"].as_u64() == Some(100) && c_mu.is_finite() && c_mu >= 1.0 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn mehler_consistency() -> Check {
    let basis = HermiteBasis::new(32).map_err(|e| e.to_string())?;
    let mut heat = 0.0f64;
    for t in [0.25f64, 0.5, 1.0] {
        heat = heat.max(mehler_heat_discrepancy((-t).exp(), &basis).map_err(|e| e.to_string())?);
    }
    let h = 1e-6;
    let mut deriv = 0.0f64;
    let points: [(&[f64], &[f64]); 4] = [(&[0.3], &[-0.2]), (&[1.1], &[0.9]), (&[0.3, 1.0], &[-0.2, 0.5]), (&[-0.7, 0.2], &[0.4, -1.3])];
    for r in [0.2, 0.5, 0.8] {
        for (x, y) in points {
            let k = |s: f64| mehler_kernel(s, x, y).map_err(|e| e.to_string());
            let fd = (k(r + h)? - k(r - h)?) / (2.0 * h);
            let an = mehler_derivative(r, x, y).map_err(|e| e.to_string())?;
            deriv = deriv.max(((fd - an) / an).abs());
        }
    }
    let detail = format!("heat operator gap {heat:.1e}, ∂_r relative gap {deriv:.1e}");
    if heat <= 1e-7 && deriv <= 1e-6 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn determinism() -> Check {
    let mut compared = 0;
    for name in experiments::names() {
        let (a, b) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
        let first = run_experiment(name, a.path(), 11)?;
        let second = run_experiment(name, b.path(), 11)?;
        for (fa, fb) in first.files.iter().zip(&second.files) {
            let (x, y) = (std::fs::read(fa).map_err(|e| e.to_string())?, std::fs::read(fb).map_err(|e| e.to_string())?);
            if x != y {
                return fail(format!("{} differs between runs", fa.file_name().unwrap_or_default().to_string_lossy()));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} output files byte-identical across two runs of all experiments"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("Mellin self-test", Duration::from_secs(30), mellin_selftest),
        ("g_N isometry", Duration::from_secs(60), g_isometry),
        ("Hankel/Dunkl conformance", Duration::from_secs(120), conformance),
        ("discrete Riesz exactness", Duration::from_secs(30), riesz_exactness),
        ("dimension-free probes", Duration::from_secs(300), dimension_free),
        ("growth-regime contrast", Duration::from_secs(600), growth_contrast),
        ("Marcinkiewicz norms", Duration::from_secs(10), marcinkiewicz_norms),
        ("CZ decomposition suite", Duration::from_secs(60), cz_suite),
        ("Mehler consistency", Duration::from_secs(30), mehler_consistency),
        ("determinism", Duration::MAX, determinism),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let (ok, detail) = match result {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        failures += usize::from(!ok);
        let timing = if in_time { format!("{:.1}s", elapsed.as_secs_f64()) } else { format!("{:.1}s over budget", elapsed.as_secs_f64()) };
        println!("criterion {:>2} {}: {name} ({detail}; {timing})", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
