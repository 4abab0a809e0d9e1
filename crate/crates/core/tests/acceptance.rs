//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{config, golden};
use nalgebra::DVector;
use rci_bounds::attack::{project_block, simulate_fullstate, simulate_scalar, ProjectedWorstCase};
use rci_bounds::bounds::{
    alpha_c_inf, alpha_minus_inf, alpha_minus_k, alpha_plus_inf, alpha_plus_k, best_bound, beta_plus_k,
    beta_plus_k_direct, parity_limits, ChainSupports, RotatingFrame, RotatingSupports, SupportTriple, Theorem,
};
use rci_bounds::cli::cmd_spectral;
use rci_bounds::oracle::{c_sequence, critical_alpha};
use rci_bounds::spectral::rotating_direction;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((a - b).abs() <= tol, || format!("{what}: {a} vs {b} (tol {tol:e})"))
}

/// Rows of the spectral CSV keyed by `(block, direction)`.
fn spectral_rows(text: &str) -> Vec<(String, [f64; 6])> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("block,"))
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            let mut vals = [0.0; 6];
            for (v, c) in vals.iter_mut().zip(&cols[2..]) {
                *v = c.parse().expect("numeric column");
            }
            (format!("{}:{}", cols[0], cols[1]), vals)
        })
        .collect()
}

fn c1_table() -> Outcome {
    let start = Instant::now();
    let ue = spectral_rows(&cmd_spectral(&config("unstable_example")).map_err(|e| e.to_string())?);
    let di = spectral_rows(&cmd_spectral(&config("double_integrator")).map_err(|e| e.to_string())?);
    let elapsed = start.elapsed();
    let table = [("0:phi1", [5.383, 5.383, 0.221, 0.441, 1.285, 1.285]), ("1:phi1", [2.0, 2.0, 0.5, 1.0, 1.0, 1.0])];
    for (key, want) in table {
        let got = ue.iter().find(|r| r.0 == key).ok_or(format!("missing row {key}"))?.1;
        for (g, w) in got.iter().zip(want) {
            close(*g, w, 5e-4, key)?;
        }
    }
    let exact = [("0:phi1", [5.0, 5.0, 1.0, 1.0, 1.0, 1.0]), ("0:phi2", [5.0, 5.0, 0.5, 0.5, 0.5, 0.5])];
    for (key, want) in exact {
        let got = di.iter().find(|r| r.0 == key).ok_or(format!("missing row {key}"))?.1;
        ensure(got == want, || format!("{key}: {got:?} not exactly {want:?}"))?;
    }
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("supports within 5e-4, double integrator exact, {elapsed:.1?}"))
}

fn c2_positive_limit() -> Outcome {
    let (sys, spec) = golden("unstable_example");
    let b = &spec.blocks[0];
    let t = SupportTriple::along(&sys, &b.phi[0]).map_err(|e| e.to_string())?;
    let inf = alpha_plus_inf(b.lambda, &t).map_err(|e| e.to_string())?;
    close(inf, 0.286, 1e-3, "limit")?;
    let far = alpha_plus_k(b.lambda, &t, 10_000).map_err(|e| e.to_string())?.bar;
    close(far, inf, 1e-6, "k = 10^4")?;
    Ok(format!("limit {inf:.6}, k=1e4 value {far:.6}"))
}

fn c3_negative_limit() -> Outcome {
    let (sys, spec) = golden("unstable_example");
    let b = &spec.blocks[1];
    let t = SupportTriple::along(&sys, &b.phi[0]).map_err(|e| e.to_string())?;
    let [p, m] = parity_limits(b.lambda, &t).map_err(|e| e.to_string())?;
    let (odd, even) = (p.0.max(m.0), p.1.max(m.1));
    let inf = alpha_minus_inf(b.lambda, &t).map_err(|e| e.to_string())?;
    close(inf, 0.533, 1e-3, "infimum")?;
    close(odd.min(even), 0.533, 1e-3, "parity limits")?;
    let k1 = alpha_minus_k(b.lambda, &t, 1001).map_err(|e| e.to_string())?.bar;
    let k2 = alpha_minus_k(b.lambda, &t, 1002).map_err(|e| e.to_string())?.bar;
    close(k1.min(k2), 0.533, 1e-3, "k = 1001/1002")?;
    Ok(format!("odd limit {odd:.6}, even limit {even:.6}, k=1001/1002 {k1:.6}/{k2:.6}"))
}

fn c4_unstable_sweep() -> Outcome {
    let start = Instant::now();
    let (sys, spec) = golden("unstable_example");
    let b = best_bound(&sys, &spec, 15).map_err(|e| e.to_string())?;
    let mut worst_gap = f64::INFINITY;
    for k in 2..=15 {
        let plus = b.sequence(Theorem::T1).ok_or("no T1")?.at(k).unwrap().bar;
        let minus = b.sequence(Theorem::T4).ok_or("no T4")?.at(k).unwrap().bar;
        let bound = plus.min(minus);
        let c = critical_alpha(&sys, k, 1e-4, 1.01 * bound).map_err(|e| format!("k={k}: {e}"))?;
        ensure(c.lo <= bound, || format!("k={k}: alpha* in [{}, {}] above {bound}", c.lo, c.hi))?;
        let r = c_sequence(&sys, 1.01 * bound, k).map_err(|e| e.to_string())?;
        ensure(r.is_empty_at(k), || format!("k={k}: C not empty at 1.01 x bound"))?;
        worst_gap = worst_gap.min(bound - c.lo);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("alpha*_k <= min bound for k=2..15 (smallest margin {worst_gap:.2e}), {elapsed:.1?}"))
}

fn c5_double_integrator() -> Outcome {
    let (sys, spec) = golden("double_integrator");
    let blk = &spec.blocks[0];
    let chain = ChainSupports::along(&sys, &blk.phi[0], &blk.phi[1]).map_err(|e| e.to_string())?;
    for (k, want) in [(2, 5.5), (4, 1.9), (10, 1.1098)] {
        let closed = beta_plus_k(blk.lambda, &chain, k).map_err(|e| e.to_string())?.bar;
        let direct = beta_plus_k_direct(blk.lambda, &chain, k).map_err(|e| e.to_string())?.bar;
        close(closed, want, 1e-3, &format!("closed beta_{k}"))?;
        close(direct, want, 1e-3, &format!("direct beta_{k}"))?;
    }
    let t = SupportTriple::along(&sys, &blk.phi[0]).map_err(|e| e.to_string())?;
    for k in 1..=20 {
        let v = alpha_plus_k(blk.lambda, &t, k).map_err(|e| e.to_string())?.bar;
        let kf = k as f64;
        close(v, 5.0 / kf + (kf - 1.0) / kf, 1e-12, &format!("alpha_{k}"))?;
    }
    let b = best_bound(&sys, &spec, 12).map_err(|e| e.to_string())?;
    for k in 2..=12 {
        let bound = b.min_at(k).unwrap();
        let c = critical_alpha(&sys, k, 1e-4, 1.05 * bound + 1e-4).map_err(|e| format!("k={k}: {e}"))?;
        ensure(c.lo <= bound, || format!("k={k}: alpha* in [{}, {}] above {bound}", c.lo, c.hi))?;
    }
    Ok("beta at k=2,4,10 closed and direct, T1 exact through k=20, oracle below both curves".into())
}

fn c6_attack() -> Outcome {
    let (sys, spec) = golden("unstable_example");
    let p = project_block(&sys, &spec, 0, 0.30).map_err(|e| e.to_string())?;
    let x0 = DVector::zeros(2);
    let full = simulate_fullstate(&sys, &p, &x0, 500, &mut ProjectedWorstCase).map_err(|e| e.to_string())?;
    let scalar = simulate_scalar(&p, 0.0, 500);
    ensure(full.exit_step == Some(12), || format!("full-state exit {:?}", full.exit_step))?;
    ensure(scalar.exit_step == Some(12), || format!("scalar exit {:?}", scalar.exit_step))?;
    let (a, s) = (full.xi(), scalar.xi());
    ensure(a.len() == s.len(), || format!("trace lengths {} vs {}", a.len(), s.len()))?;
    let dev = a.iter().zip(&s).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    ensure(dev <= 1e-9, || format!("per-step deviation {dev:e}"))?;
    // ξ_k = c(λ^k - 1) with c the net drift over (λ - 1)
    let c = p.drift().0 / (p.lambda - 1.0);
    for (k, x) in s.iter().enumerate() {
        close(*x, c * (p.lambda.powi(k as i32) - 1.0), 1e-9, &format!("recurrence at k={k}"))?;
    }
    let crossing = |c: f64| (0..).find(|&k| c * (1.2f64.powi(k) - 1.0) > 5.383).unwrap();
    ensure(crossing(c) == 12 && crossing(0.8175) == 12, || "closed-form crossing".into())?;
    Ok(format!("exit at 12, coefficient {c:.4}, full vs scalar deviation {dev:.1e}"))
}

fn sibling_binary(name: &str) -> Option<PathBuf> {
    let deps = std::env::current_exe().ok()?.parent()?.to_path_buf();
    std::fs::read_dir(&deps)
        .ok()?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            let f = p.file_name().and_then(|f| f.to_str()).unwrap_or("");
            f.strip_prefix(name).and_then(|r| r.strip_prefix('-')).is_some_and(|h| !h.contains('.'))
        })
        .max_by_key(|p| p.metadata().and_then(|m| m.modified()).ok())
}

fn c7_properties() -> Outcome {
    let start = Instant::now();
    let suites = ["support_properties", "series_properties", "bounds_properties", "oracle_properties", "attack_properties"];
    let mut ran = 0;
    for s in suites {
        let bin = sibling_binary(s).ok_or(format!("{s} not built; run cargo test --workspace"))?;
        let out = Command::new(&bin).arg("--test-threads=4").output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{s} failed:\n{}", String::from_utf8_lossy(&out.stdout)));
        }
        let text = String::from_utf8_lossy(&out.stdout);
        ran += text.lines().filter(|l| l.starts_with("test ") && l.ends_with(" ok")).count();
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{ran} properties across {} suites, {elapsed:.1?}", suites.len()))
}

fn c8_complex() -> Outcome {
    let (sys, spec) = golden("complex_box");
    let blk = &spec.blocks[0];
    ensure(blk.period == Some(4), || format!("period {:?}", blk.period))?;
    let at = sys.a.transpose();
    for j in 1..=2 {
        let psi0 = rotating_direction(blk, j, 0).map_err(|e| e.to_string())?;
        let mut d = psi0.clone();
        for l in 1..=4 {
            d = &at * &d / blk.rho;
            let back = (&d - &psi0).amax();
            ensure((l == 4) == (back <= 1e-12), || format!("psi_{j} after {l} steps off by {back:e}"))?;
        }
        // unreduced angle
        let (s, c) = (4.0 * blk.theta).sin_cos();
        let raw = if j == 1 { &blk.phi[0] * c - &blk.phi[1] * s } else { &blk.phi[1] * c + &blk.phi[0] * s };
        ensure((raw - &psi0).amax() <= 1e-12, || "psi^4 != psi^0".into())?;
    }
    let frame = RotatingFrame::from_block(blk).map_err(|e| e.to_string())?;
    let supports = RotatingSupports::new(&sys, &frame).map_err(|e| e.to_string())?;
    let inf = alpha_c_inf(&supports).map_err(|e| e.to_string())?;
    let z = rotating_direction(blk, 1, 0).map_err(|e| e.to_string())?;
    let want = sys.h_neg_bu(&z).unwrap() / (1.1 * sys.h_w(&z).unwrap());
    close(inf, want, 1e-9, "complex limit")?;
    let r = c_sequence(&sys, 1.05 * inf, 40).map_err(|e| e.to_string())?;
    let k = r.first_empty.ok_or("C nonempty through k = 40")?;
    Ok(format!("limit {inf:.10}, period 4, C empty at k={k} for 1.05 x limit"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 support table", c1_table),
        ("2 positive eigenvalue limit", c2_positive_limit),
        ("3 negative eigenvalue limit", c3_negative_limit),
        ("4 unstable example vs oracle", c4_unstable_sweep),
        ("5 double integrator", c5_double_integrator),
        ("6 greedy attack exit", c6_attack),
        ("7 property suites", c7_properties),
        ("8 complex pair", c8_complex),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
